use crate::dendrogram::{Dendrogram, HeightScale};
use crate::error::{Error, Result};

/// Relative slack before a parent below its child counts as an inversion.
pub const INVERSION_TOLERANCE: f64 = 1e-12;

/// Steps whose height lies below the height of one of their internal children.
pub fn detect_inversions(dend: &Dendrogram) -> Vec<usize> {
    let n = dend.n();
    dend.steps()
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            [s.left, s.right].iter().any(|&c| {
                if c < n {
                    return false;
                }
                let child = dend.steps()[c - n].height;
                s.height < child - INVERSION_TOLERANCE * child.abs()
            })
        })
        .map(|(t, _)| t)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightTransform {
    Sqrt,
    Square,
}

/// Maps every height and updates the height-scale tag; topology is untouched.
pub fn transform_heights(dend: &Dendrogram, op: HeightTransform) -> Result<Dendrogram> {
    let current = dend.height_scale();
    let next = match (op, current) {
        (HeightTransform::Sqrt, HeightScale::Raw) => HeightScale::SqrtTransformed,
        (HeightTransform::Sqrt, HeightScale::SquareTransformed) => HeightScale::Raw,
        (HeightTransform::Square, HeightScale::Raw) => HeightScale::SquareTransformed,
        (HeightTransform::Square, HeightScale::SqrtTransformed) => HeightScale::Raw,
        (HeightTransform::Sqrt, scale) | (HeightTransform::Square, scale) => {
            return Err(Error::HeightTransform {
                op: match op {
                    HeightTransform::Sqrt => "sqrt",
                    HeightTransform::Square => "square",
                },
                scale: scale.name(),
            })
        }
    };
    let heights = match op {
        HeightTransform::Sqrt => {
            if let Some((step, s)) = dend.steps().iter().enumerate().find(|(_, s)| s.height < 0.0) {
                return Err(Error::NegativeHeight { step, height: s.height });
            }
            dend.steps().iter().map(|s| s.height.sqrt()).collect()
        }
        HeightTransform::Square => dend.steps().iter().map(|s| s.height * s.height).collect(),
    };
    Ok(dend.with_heights(heights, next))
}
