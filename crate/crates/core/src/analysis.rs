//! Dendrogram post-processing.

use std::collections::HashMap;
use std::ops::Deref;

use crate::dendrogram::Dendrogram;
use crate::engine::detect_inversions;
use crate::error::{Error, Result};
use crate::matrix::DissimilarityMatrix;

/// Pairwise lowest-common-ancestor heights of a dendrogram's leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct CopheneticMatrix(DissimilarityMatrix);

impl CopheneticMatrix {
    pub fn into_inner(self) -> DissimilarityMatrix {
        self.0
    }
}

impl Deref for CopheneticMatrix {
    type Target = DissimilarityMatrix;

    fn deref(&self) -> &DissimilarityMatrix {
        &self.0
    }
}

pub fn cophenetic_matrix(dend: &Dendrogram) -> Result<CopheneticMatrix> {
    let inversions = detect_inversions(dend);
    if !inversions.is_empty() {
        return Err(Error::Inversions(inversions));
    }
    let n = dend.n();
    let mut entries = vec![0.0; n * n.saturating_sub(1) / 2];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for s in dend.steps() {
        let left = std::mem::take(&mut members[s.left]);
        let right = std::mem::take(&mut members[s.right]);
        for &i in &left {
            for &j in &right {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                entries[crate::matrix::offset_unchecked(a, b, n)] = s.height;
            }
        }
        let mut merged = left;
        merged.extend(right);
        members.push(merged);
    }
    Ok(CopheneticMatrix(DissimilarityMatrix::new(
        n,
        entries,
        dend.height_dissimilarity_scale(),
    )?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UltrametricCheck {
    pub holds: bool,
    /// First `(i, j, k)` found with `d(i,j) > max(d(i,k), d(k,j)) + tol`.
    pub violation: Option<(usize, usize, usize)>,
}

/// Strong triangle inequality over all triples, scanning `i < j` then `k`.
pub fn is_ultrametric(m: &DissimilarityMatrix, tol: f64) -> UltrametricCheck {
    let n = m.n();
    for i in 0..n {
        for j in i + 1..n {
            let d_ij = m.get(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if d_ij > m.get(i, k).max(m.get(k, j)) + tol {
                    return UltrametricCheck {
                        holds: false,
                        violation: Some((i, j, k)),
                    };
                }
            }
        }
    }
    UltrametricCheck {
        holds: true,
        violation: None,
    }
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation between input dissimilarities and cophenetic heights.
pub fn cophenetic_correlation(original: &DissimilarityMatrix, coph: &CopheneticMatrix) -> Result<f64> {
    if original.n() != coph.n() {
        return Err(Error::LeafCountMismatch(original.n(), coph.n()));
    }
    pearson(original.entries(), coph.entries())
}

/// Whether two trees have the same internal leaf sets, ignoring child order
/// and heights.
pub fn topology_equal(a: &Dendrogram, b: &Dendrogram) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::LeafCountMismatch(a.n(), b.n()));
    }
    let mut ca = a.clusters();
    let mut cb = b.clusters();
    ca.sort_unstable();
    cb.sort_unstable();
    Ok(ca == cb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightMap {
    Identity,
    Sqrt,
    Square,
}

impl HeightMap {
    pub fn apply(self, h: f64) -> f64 {
        match self {
            HeightMap::Identity => h,
            HeightMap::Sqrt => h.sqrt(),
            HeightMap::Square => h * h,
        }
    }
}

pub(crate) fn relative_deviation(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Largest `|x - y| / max(|x|, |y|)` over paired entries.
pub fn max_relative_deviation(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| relative_deviation(a, b))
        .fold(0.0, f64::max)
}

/// Pairs merge steps by leaf set and reports the largest relative deviation
/// between `map(height in a)` and the height in `b`.
pub fn compare_heights(a: &Dendrogram, b: &Dendrogram, map: HeightMap) -> Result<f64> {
    if !topology_equal(a, b)? {
        return Err(Error::TopologyMismatch);
    }
    let by_set: HashMap<Vec<usize>, f64> = b
        .clusters()
        .into_iter()
        .zip(b.heights())
        .collect();
    Ok(a.clusters()
        .iter()
        .zip(a.heights())
        .map(|(set, h)| relative_deviation(map.apply(h), by_set[set]))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ListDeviation {
    pub max_absolute: f64,
    pub max_relative: f64,
}

/// Compares two height listings after sorting each and mapping the first.
pub fn compare_height_lists(a: &[f64], b: &[f64], map: HeightMap) -> Result<ListDeviation> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let mut a: Vec<f64> = a.iter().map(|&h| map.apply(h)).collect();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Ok(ListDeviation {
        max_absolute: a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
        max_relative: max_relative_deviation(&a, &b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrogram::Step;
    use crate::engine::{agglomerate_naive, transform_heights, AgglomerateOptions, HeightTransform};
    use crate::matrix::{DataMatrix, Scale};
    use crate::method::LinkageMethod;

    fn line() -> DataMatrix {
        DataMatrix::from_column(&[0.0, 1.0, 10.0]).unwrap()
    }

    fn ward_line() -> Dendrogram {
        agglomerate_naive(&line().squared_euclidean(), LinkageMethod::WardD, &AgglomerateOptions::default()).unwrap()
    }

    #[test]
    fn cophenetic_of_line() {
        let c = cophenetic_matrix(&ward_line()).unwrap();
        assert_eq!(c.get(0, 1), 1.0);
        assert!((c.get(0, 2) - 361.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.get(0, 2), c.get(1, 2));
        assert_eq!(c.scale(), Scale::Squared);
    }

    #[test]
    fn cophenetic_of_two_leaves() {
        let d = Dendrogram::new(2, vec![Step { left: 0, right: 1, height: 0.7, size: 2.0 }], LinkageMethod::Single, Scale::Plain).unwrap();
        assert_eq!(cophenetic_matrix(&d).unwrap().entries(), &[0.7]);
    }

    #[test]
    fn cophenetic_commutes_with_sqrt() {
        let d = ward_line();
        let raw = cophenetic_matrix(&d).unwrap();
        let rooted = cophenetic_matrix(&transform_heights(&d, HeightTransform::Sqrt).unwrap()).unwrap();
        assert_eq!(rooted.scale(), Scale::Plain);
        for (a, b) in raw.entries().iter().zip(rooted.entries()) {
            assert_eq!(a.sqrt(), *b);
        }
    }

    #[test]
    fn cophenetic_rejects_inversions() {
        let d = DissimilarityMatrix::new(3, vec![4.0; 3], Scale::Squared).unwrap();
        let dend = agglomerate_naive(&d, LinkageMethod::Centroid, &AgglomerateOptions::default()).unwrap();
        assert!(matches!(cophenetic_matrix(&dend), Err(Error::Inversions(v)) if v == vec![1]));
    }

    #[test]
    fn ultrametric_examples() {
        let c = cophenetic_matrix(&ward_line()).unwrap();
        assert!(is_ultrametric(&c, 0.0).holds);
        let check = is_ultrametric(&line().euclidean(), 0.0);
        assert!(!check.holds);
        // d(0,10) = 10 > max(d(0,1), d(1,10)) = 9
        assert_eq!(check.violation, Some((0, 2, 1)));
        let two = DissimilarityMatrix::new(2, vec![3.0], Scale::Plain).unwrap();
        assert!(is_ultrametric(&two, 0.0).holds);
        let one = DissimilarityMatrix::new(1, vec![], Scale::Plain).unwrap();
        assert!(is_ultrametric(&one, 0.0).holds);
    }

    #[test]
    fn correlation_examples() {
        let data = line();
        let c = cophenetic_matrix(&ward_line()).unwrap();
        assert!((cophenetic_correlation(&c, &c).unwrap() - 1.0).abs() < 1e-15);

        let plain = data.euclidean();
        let wd2 = agglomerate_naive(&plain, LinkageMethod::WardD2, &AgglomerateOptions::default()).unwrap();
        let c2 = cophenetic_matrix(&wd2).unwrap();
        // Pearson of (1, 10, 9) against (1, sqrt(361/3), sqrt(361/3)), frozen
        // from an independent numpy computation
        let r = cophenetic_correlation(&plain, &c2).unwrap();
        assert!((r - 0.994_849_751_167_109_8).abs() < 1e-12, "{r}");

        let rooted = transform_heights(&ward_line(), HeightTransform::Sqrt).unwrap();
        let r_rooted = cophenetic_correlation(&plain, &cophenetic_matrix(&rooted).unwrap()).unwrap();
        assert!((r - r_rooted).abs() < 1e-15);

        let flat = DissimilarityMatrix::new(3, vec![2.0; 3], Scale::Plain).unwrap();
        assert!(matches!(
            cophenetic_correlation(&flat, &c),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn topology_examples() {
        let d = ward_line();
        assert!(topology_equal(&d, &d.mirrored()).unwrap());
        let other = Dendrogram::new(
            3,
            vec![Step { left: 0, right: 2, height: 1.0, size: 2.0 }, Step { left: 3, right: 1, height: 2.0, size: 3.0 }],
            LinkageMethod::WardD,
            Scale::Squared,
        )
        .unwrap();
        assert!(!topology_equal(&d, &other).unwrap());
        let a = Dendrogram::new(2, vec![Step { left: 0, right: 1, height: 1.0, size: 2.0 }], LinkageMethod::Single, Scale::Plain).unwrap();
        let b = Dendrogram::new(2, vec![Step { left: 1, right: 0, height: 5.0, size: 2.0 }], LinkageMethod::Median, Scale::Plain).unwrap();
        assert!(topology_equal(&a, &b).unwrap());
        assert!(matches!(topology_equal(&a, &d), Err(Error::LeafCountMismatch(2, 3))));
        assert!(matches!(compare_heights(&d, &other, HeightMap::Identity), Err(Error::TopologyMismatch)));
    }

    #[test]
    fn compare_heights_maps_a() {
        let d = ward_line();
        assert_eq!(compare_heights(&d, &d, HeightMap::Identity).unwrap(), 0.0);
        let wd2 = agglomerate_naive(&line().euclidean(), LinkageMethod::WardD2, &AgglomerateOptions::default()).unwrap();
        assert!(compare_heights(&d, &wd2, HeightMap::Sqrt).unwrap() < 1e-15);
        assert!(compare_heights(&wd2, &d.mirrored(), HeightMap::Square).unwrap() < 1e-14);
    }

    #[test]
    fn sqrt_commutes_with_sort() {
        let h: [f64; 5] = [3.0, 0.5, 2.25, 9.0, 0.01];
        let mut a: Vec<f64> = h.iter().map(|x| x.sqrt()).collect();
        a.sort_by(f64::total_cmp);
        let mut b = h.to_vec();
        b.sort_by(f64::total_cmp);
        let b: Vec<f64> = b.iter().map(|x| x.sqrt()).collect();
        assert_eq!(a, b);
    }
}
