//! Agglomerative drivers over a stored dissimilarity matrix.
//!
//! Clusters live in slots `0..n`. When two slots merge, the union continues
//! in the smaller slot, so a slot index is always the smallest leaf of the
//! cluster it holds. Ties between equal dissimilarities are broken towards the
//! lexicographically smallest `(slot, slot)` pair, which makes the naive
//! driver, the nearest-neighbor chain and the coordinate oracle agree on
//! degenerate inputs as far as possible.
//!
//! Heights are the dissimilarity at which a pair merged, on the input scale.
//! For `ward.D` on squared Euclidean distances with unit masses this is twice
//! the increase in error sum of squares; for `ward.D2` on distances it is the
//! square root of that.

mod heights;
mod naive;
mod nnchain;

pub use heights::{detect_inversions, transform_heights, HeightTransform, INVERSION_TOLERANCE};
pub use naive::agglomerate_naive;
pub use nnchain::agglomerate_nnchain;

use serde::{Deserialize, Serialize};

use crate::dendrogram::Dendrogram;
use crate::error::{Error, Result};
use crate::linkage;
use crate::matrix::{condensed_len, offset_unchecked, DissimilarityMatrix};
use crate::method::LinkageMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[default]
    Naive,
    NnChain,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "nnchain" | "nn-chain" => Ok(Algorithm::NnChain),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AgglomerateOptions {
    /// Per-observation masses; unit masses when `None`. Input entries are
    /// read as dissimilarities between clusters of these masses, see
    /// [`DataMatrix::ward_dissimilarities`](crate::DataMatrix::ward_dissimilarities).
    pub masses: Option<Vec<f64>>,
    /// Run even when the input scale does not match the method's contract.
    pub force_scale: bool,
}

impl AgglomerateOptions {
    pub fn forced() -> Self {
        AgglomerateOptions {
            force_scale: true,
            ..Default::default()
        }
    }

    pub fn with_masses(masses: Vec<f64>) -> Self {
        AgglomerateOptions {
            masses: Some(masses),
            ..Default::default()
        }
    }
}

pub fn agglomerate(
    dissim: &DissimilarityMatrix,
    method: LinkageMethod,
    algorithm: Algorithm,
    opts: &AgglomerateOptions,
) -> Result<Dendrogram> {
    match algorithm {
        Algorithm::Naive => agglomerate_naive(dissim, method, opts),
        Algorithm::NnChain => agglomerate_nnchain(dissim, method, opts),
    }
}

fn check_input(dissim: &DissimilarityMatrix, method: LinkageMethod, opts: &AgglomerateOptions) -> Result<Vec<f64>> {
    if dissim.n() < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            found: dissim.n(),
        });
    }
    if let Some(required) = method.required_scale() {
        if dissim.scale() != required && !opts.force_scale {
            return Err(Error::ScaleMismatch {
                what: format!("method {method}"),
                expected: required,
                found: dissim.scale(),
            });
        }
    }
    match &opts.masses {
        None => Ok(vec![1.0; dissim.n()]),
        Some(m) if m.len() != dissim.n() => Err(Error::MassCount {
            expected: dissim.n(),
            found: m.len(),
        }),
        Some(m) => {
            if let Some(&bad) = m.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
                return Err(Error::NonPositiveMass(bad));
            }
            Ok(m.clone())
        }
    }
}

/// Surviving clusters and their mutual dissimilarities during one run.
struct ActiveSet {
    n: usize,
    method: LinkageMethod,
    dist: Vec<f64>,
    sizes: Vec<f64>,
    alive: Vec<usize>,
}

impl ActiveSet {
    fn new(dissim: &DissimilarityMatrix, method: LinkageMethod, masses: Vec<f64>) -> Self {
        debug_assert_eq!(dissim.entries().len(), condensed_len(dissim.n()));
        ActiveSet {
            n: dissim.n(),
            method,
            dist: dissim.entries().to_vec(),
            sizes: masses,
            alive: (0..dissim.n()).collect(),
        }
    }

    #[inline]
    fn d(&self, a: usize, b: usize) -> f64 {
        if a < b {
            self.dist[offset_unchecked(a, b, self.n)]
        } else {
            self.dist[offset_unchecked(b, a, self.n)]
        }
    }

    #[inline]
    fn set(&mut self, a: usize, b: usize, v: f64) {
        let k = if a < b {
            offset_unchecked(a, b, self.n)
        } else {
            offset_unchecked(b, a, self.n)
        };
        self.dist[k] = v;
    }

    fn remaining(&self) -> usize {
        self.alive.len()
    }

    /// Merges slots `a` and `b`; returns the merge height and the new mass.
    fn merge(&mut self, a: usize, b: usize) -> Result<(f64, f64)> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let d_ij = self.d(lo, hi);
        let (w_i, w_j) = (self.sizes[lo], self.sizes[hi]);
        for idx in 0..self.alive.len() {
            let k = self.alive[idx];
            if k == lo || k == hi {
                continue;
            }
            let v = linkage::update(self.method, self.d(lo, k), self.d(hi, k), d_ij, w_i, w_j, self.sizes[k])?;
            self.set(lo, k, v);
        }
        let pos = self.alive.binary_search(&hi).expect("merged slot is alive");
        self.alive.remove(pos);
        self.sizes[lo] = w_i + w_j;
        Ok((d_ij, w_i + w_j))
    }
}
