//! Stepwise dendrogram representation.
//!
//! Leaves are nodes `0..n`; the cluster created at step `t` is node `n + t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Scale;
use crate::method::LinkageMethod;

/// One agglomeration: two child nodes merged at `height` into a cluster of total mass `size`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: f64,
}

/// Which transform, if any, has been applied to the agglomeration heights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightScale {
    Raw,
    SqrtTransformed,
    SquareTransformed,
}

impl HeightScale {
    pub fn name(self) -> &'static str {
        match self {
            HeightScale::Raw => "raw",
            HeightScale::SqrtTransformed => "sqrt-transformed",
            HeightScale::SquareTransformed => "square-transformed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DendrogramRepr")]
pub struct Dendrogram {
    n: usize,
    steps: Vec<Step>,
    order: Vec<usize>,
    method: LinkageMethod,
    input_scale: Scale,
    height_scale: HeightScale,
}

#[derive(Deserialize)]
struct DendrogramRepr {
    n: usize,
    steps: Vec<Step>,
    order: Vec<usize>,
    method: LinkageMethod,
    input_scale: Scale,
    height_scale: HeightScale,
}

impl TryFrom<DendrogramRepr> for Dendrogram {
    type Error = Error;

    fn try_from(r: DendrogramRepr) -> Result<Self> {
        let mut d = Dendrogram::new(r.n, r.steps, r.method, r.input_scale)?;
        d.height_scale = r.height_scale;
        if d.order != r.order {
            return Err(Error::InvalidDendrogram(
                "leaf order does not match the merge steps".into(),
            ));
        }
        Ok(d)
    }
}

impl Dendrogram {
    /// Validates the merge steps and derives the leaf order.
    pub fn new(
        n: usize,
        steps: Vec<Step>,
        method: LinkageMethod,
        input_scale: Scale,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDendrogram("no leaves".into()));
        }
        if steps.len() != n - 1 {
            return Err(Error::InvalidDendrogram(format!(
                "{} steps for {} leaves",
                steps.len(),
                n
            )));
        }
        let mut used = vec![false; 2 * n - 1];
        for (t, s) in steps.iter().enumerate() {
            for child in [s.left, s.right] {
                if child >= n + t {
                    return Err(Error::InvalidDendrogram(format!(
                        "step {t} refers to node {child} before it exists"
                    )));
                }
                if std::mem::replace(&mut used[child], true) {
                    return Err(Error::InvalidDendrogram(format!(
                        "node {child} merged twice"
                    )));
                }
            }
            if s.left == s.right {
                return Err(Error::InvalidDendrogram(format!("step {t} merges a node with itself")));
            }
            if !s.height.is_finite() {
                return Err(Error::InvalidDendrogram(format!("step {t} has height {}", s.height)));
            }
            let internal: Vec<f64> = [s.left, s.right]
                .iter()
                .filter(|&&c| c >= n)
                .map(|&c| steps[c - n].size)
                .collect();
            let consistent = match internal.as_slice() {
                [a, b] => (s.size - a - b).abs() <= 1e-12 * s.size.abs().max(1.0),
                [a] => s.size > *a,
                _ => s.size > 0.0,
            };
            if !consistent || !s.size.is_finite() {
                return Err(Error::InvalidDendrogram(format!(
                    "step {t} size {} inconsistent with its children",
                    s.size
                )));
            }
        }
        let order = leaf_order(n, &steps);
        Ok(Dendrogram {
            n,
            steps,
            order,
            method,
            input_scale,
            height_scale: HeightScale::Raw,
        })
    }

    /// Assigns node ids to merges given in slot form.
    ///
    /// Each merge names two slots; the merged cluster continues in the smaller
    /// slot, so a slot always holds the cluster whose smallest leaf is that
    /// slot. Merges must be ordered so that every cluster is formed before it
    /// is merged again.
    pub(crate) fn from_slot_merges(
        n: usize,
        merges: &[(usize, usize, f64, f64)],
        method: LinkageMethod,
        input_scale: Scale,
    ) -> Result<Self> {
        let mut node_of_slot: Vec<usize> = (0..n).collect();
        let mut steps = Vec::with_capacity(merges.len());
        for (t, &(a, b, height, size)) in merges.iter().enumerate() {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            steps.push(Step {
                left: node_of_slot[lo],
                right: node_of_slot[hi],
                height,
                size,
            });
            node_of_slot[lo] = n + t;
        }
        Dendrogram::new(n, steps, method, input_scale)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn heights(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.height).collect()
    }

    pub fn sorted_heights(&self) -> Vec<f64> {
        let mut h = self.heights();
        h.sort_by(f64::total_cmp);
        h
    }

    /// Leaf permutation for a crossing-free drawing.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn method(&self) -> LinkageMethod {
        self.method
    }

    /// Scale of the dissimilarities the agglomeration consumed.
    pub fn input_scale(&self) -> Scale {
        self.input_scale
    }

    pub fn height_scale(&self) -> HeightScale {
        self.height_scale
    }

    /// Scale of the heights themselves, after any transform.
    pub fn height_dissimilarity_scale(&self) -> Scale {
        match (self.height_scale, self.input_scale) {
            (HeightScale::Raw, s) => s,
            (HeightScale::SqrtTransformed, _) => Scale::Plain,
            (HeightScale::SquareTransformed, _) => Scale::Squared,
        }
    }

    pub fn root_size(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.size)
    }

    pub fn height_of(&self, node: usize) -> f64 {
        if node < self.n {
            0.0
        } else {
            self.steps[node - self.n].height
        }
    }

    /// Sorted leaf set of every internal node, indexed by step.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let mut merged = Vec::new();
            for child in [s.left, s.right] {
                if child < self.n {
                    merged.push(child);
                } else {
                    merged.extend_from_slice(&sets[child - self.n]);
                }
            }
            merged.sort_unstable();
            sets.push(merged);
        }
        sets
    }

    pub(crate) fn with_heights(&self, heights: Vec<f64>, scale: HeightScale) -> Self {
        let steps = self
            .steps
            .iter()
            .zip(heights)
            .map(|(s, height)| Step { height, ..*s })
            .collect();
        Dendrogram {
            steps,
            height_scale: scale,
            ..self.clone()
        }
    }

    /// Copy with children swapped at every internal node.
    pub fn mirrored(&self) -> Self {
        let steps: Vec<Step> = self
            .steps
            .iter()
            .map(|s| Step {
                left: s.right,
                right: s.left,
                ..*s
            })
            .collect();
        let order = leaf_order(self.n, &steps);
        Dendrogram {
            steps,
            order,
            ..self.clone()
        }
    }
}

fn leaf_order(n: usize, steps: &[Step]) -> Vec<usize> {
    if steps.is_empty() {
        return (0..n).collect();
    }
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![n + steps.len() - 1];
    while let Some(node) = stack.pop() {
        if node < n {
            order.push(node);
        } else {
            let s = &steps[node - n];
            stack.push(s.right);
            stack.push(s.left);
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(left: usize, right: usize, height: f64, size: f64) -> Step {
        Step {
            left,
            right,
            height,
            size,
        }
    }

    #[test]
    fn order_follows_left_children() {
        let d = Dendrogram::new(
            3,
            vec![step(0, 1, 1.0, 2.0), step(3, 2, 5.0, 3.0)],
            LinkageMethod::WardD,
            Scale::Squared,
        )
        .unwrap();
        assert_eq!(d.order(), &[0, 1, 2]);
        assert_eq!(d.mirrored().order(), &[2, 1, 0]);
        assert_eq!(d.root_size(), 3.0);
        assert_eq!(d.clusters(), vec![vec![0, 1], vec![0, 1, 2]]);
    }

    #[test]
    fn rejects_reused_and_future_nodes() {
        let m = LinkageMethod::Single;
        assert!(Dendrogram::new(3, vec![step(0, 1, 1.0, 2.0), step(0, 2, 2.0, 3.0)], m, Scale::Plain).is_err());
        assert!(Dendrogram::new(3, vec![step(0, 4, 1.0, 2.0), step(3, 2, 2.0, 3.0)], m, Scale::Plain).is_err());
        assert!(Dendrogram::new(3, vec![step(0, 1, 1.0, 2.0)], m, Scale::Plain).is_err());
        assert!(Dendrogram::new(3, vec![step(0, 1, 1.0, 2.0), step(3, 2, 2.0, 2.0)], m, Scale::Plain).is_err());
    }

    #[test]
    fn slot_merges_keep_smaller_slot() {
        let d = Dendrogram::from_slot_merges(
            4,
            &[(2, 3, 1.0, 2.0), (0, 1, 2.0, 2.0), (2, 0, 3.0, 4.0)],
            LinkageMethod::WardD,
            Scale::Squared,
        )
        .unwrap();
        assert_eq!(d.steps()[0], step(2, 3, 1.0, 2.0));
        assert_eq!(d.steps()[1], step(0, 1, 2.0, 2.0));
        assert_eq!(d.steps()[2], step(5, 4, 3.0, 4.0));
    }

    #[test]
    fn json_round_trip_revalidates() {
        let d = Dendrogram::new(
            2,
            vec![step(0, 1, 0.1 + 0.2, 2.0)],
            LinkageMethod::WardD2,
            Scale::Plain,
        )
        .unwrap();
        let text = serde_json::to_string(&d).unwrap();
        let back: Dendrogram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        let broken = text.replace("\"right\":1", "\"right\":0");
        assert!(serde_json::from_str::<Dendrogram>(&broken).is_err());
    }
}
