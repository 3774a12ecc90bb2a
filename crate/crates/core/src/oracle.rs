//! Stored-data reference for Ward clustering.
//!
//! Keeps each cluster's centroid and mass and, at every step, evaluates the
//! merge cost `m1*m2/(m1+m2) * ||c1 - c2||²` for every surviving pair straight
//! from coordinates. No Lance-Williams recurrence is involved, so agreement
//! with the engine is an independent check of the update formulas.

use crate::analysis::{topology_equal, max_relative_deviation};
use crate::criteria::{inertia, minimand_from_centroids};
use crate::dendrogram::{Dendrogram, HeightScale};
use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, Scale};
use crate::method::LinkageMethod;

/// Largest input the oracle accepts; it is `O(n³ p)`.
pub const ORACLE_MAX_N: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleStep {
    /// Slots merged; each slot is the smallest leaf of its cluster.
    pub left: usize,
    pub right: usize,
    /// Inertia of the union minus the inertias of the two parts, recomputed
    /// from member coordinates.
    pub delta_ess: f64,
    /// The merge cost that selected this pair.
    pub criterion: f64,
    pub centroid: Vec<f64>,
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleTrace {
    pub n: usize,
    pub steps: Vec<OracleStep>,
}

impl OracleTrace {
    pub fn total_delta(&self) -> f64 {
        self.steps.iter().map(|s| s.delta_ess).sum()
    }

    /// The trace as a `ward.D` dendrogram on squared scale, with heights `2·ΔESS`.
    pub fn to_dendrogram(&self) -> Result<Dendrogram> {
        let merges: Vec<_> = self
            .steps
            .iter()
            .map(|s| (s.left, s.right, 2.0 * s.delta_ess, s.size))
            .collect();
        Dendrogram::from_slot_merges(self.n, &merges, LinkageMethod::WardD, Scale::Squared)
    }
}

struct Cluster {
    centroid: Vec<f64>,
    mass: f64,
    members: Vec<usize>,
}

pub fn greedy_ess_agglomerate(data: &DataMatrix) -> Result<OracleTrace> {
    let n = data.n();
    if n < 2 {
        return Err(Error::TooFewObservations { required: 2, found: n });
    }
    if n > ORACLE_MAX_N {
        return Err(Error::TooManyObservations { limit: ORACLE_MAX_N, found: n });
    }
    let mut slots: Vec<Option<Cluster>> = (0..n)
        .map(|i| {
            Some(Cluster {
                centroid: data.row(i).to_vec(),
                mass: data.mass(i),
                members: vec![i],
            })
        })
        .collect();
    let mut steps = Vec::with_capacity(n - 1);
    for _ in 0..n - 1 {
        let mut best = (usize::MAX, usize::MAX);
        let mut best_cost = f64::INFINITY;
        for a in 0..n {
            let Some(ca) = &slots[a] else { continue };
            for (b, slot) in slots.iter().enumerate().skip(a + 1) {
                let Some(cb) = slot else { continue };
                let cost = minimand_from_centroids(ca.mass, &ca.centroid, cb.mass, &cb.centroid);
                if cost < best_cost {
                    best_cost = cost;
                    best = (a, b);
                }
            }
        }
        let (a, b) = best;
        let cb = slots[b].take().expect("alive");
        let ca = slots[a].as_mut().expect("alive");
        let before = inertia(data, &ca.members)? + inertia(data, &cb.members)?;
        let mass = ca.mass + cb.mass;
        for (x, y) in ca.centroid.iter_mut().zip(&cb.centroid) {
            *x = (ca.mass * *x + cb.mass * y) / mass;
        }
        ca.mass = mass;
        ca.members.extend(cb.members);
        let delta_ess = inertia(data, &ca.members)? - before;
        steps.push(OracleStep {
            left: a,
            right: b,
            delta_ess,
            criterion: best_cost,
            centroid: ca.centroid.clone(),
            size: mass,
        });
    }
    Ok(OracleTrace { n, steps })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub topology_equal: bool,
    /// Largest relative gap between engine heights and the heights implied by
    /// the oracle (`2·ΔESS` on squared scale, its root on distance scale).
    pub max_relative_deviation: f64,
}

pub fn compare_with_engine(trace: &OracleTrace, dend: &Dendrogram) -> Result<OracleComparison> {
    if trace.n != dend.n() {
        return Err(Error::LeafCountMismatch(trace.n, dend.n()));
    }
    let oracle = trace.to_dendrogram()?;
    let on_distance_scale = match (dend.method(), dend.height_scale()) {
        (LinkageMethod::WardD2, HeightScale::Raw) => true,
        (LinkageMethod::WardD, HeightScale::SqrtTransformed) => true,
        (LinkageMethod::WardD, HeightScale::Raw) => false,
        (LinkageMethod::WardD2, HeightScale::SquareTransformed) => false,
        _ => {
            return Err(Error::InvalidDendrogram(format!(
                "{} dendrogram with {} heights cannot be compared with the Ward oracle",
                dend.method(),
                dend.height_scale().name()
            )))
        }
    };
    let expected: Vec<f64> = oracle
        .heights()
        .into_iter()
        .map(|h| if on_distance_scale { h.sqrt() } else { h })
        .collect();
    let topology_equal = topology_equal(&oracle, dend)?;
    let max_relative_deviation = if topology_equal {
        let oracle = oracle.with_heights(expected, HeightScale::Raw);
        crate::analysis::compare_heights(&oracle, dend, crate::analysis::HeightMap::Identity)?
    } else {
        let mut expected = expected;
        expected.sort_by(f64::total_cmp);
        max_relative_deviation(&expected, &dend.sorted_heights())
    };
    Ok(OracleComparison {
        topology_equal,
        max_relative_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{agglomerate_naive, transform_heights, AgglomerateOptions, HeightTransform};

    fn line() -> DataMatrix {
        DataMatrix::from_column(&[0.0, 1.0, 10.0]).unwrap()
    }

    #[test]
    fn line_trace() {
        let t = greedy_ess_agglomerate(&line()).unwrap();
        assert_eq!(t.steps.len(), 2);
        assert_eq!((t.steps[0].left, t.steps[0].right), (0, 1));
        assert!((t.steps[0].delta_ess - 0.5).abs() < 1e-12);
        assert!((t.steps[1].delta_ess - 361.0 / 6.0).abs() < 1e-12);
        assert!((t.steps[1].criterion - 361.0 / 6.0).abs() < 1e-12);
        assert!((t.total_delta() - 546.0 / 9.0).abs() < 1e-12);
        assert_eq!(t.steps[0].centroid, vec![0.5]);
        assert_eq!(t.steps[1].size, 3.0);
    }

    #[test]
    fn pair_delta_is_half_squared_distance() {
        let d = DataMatrix::new(2, 2, vec![0.0, 0.0, 3.0, 4.0]).unwrap();
        let t = greedy_ess_agglomerate(&d).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert!((t.steps[0].delta_ess - 12.5).abs() < 1e-12);
        assert!(greedy_ess_agglomerate(&DataMatrix::from_column(&[1.0]).unwrap()).is_err());
    }

    #[test]
    fn compares_with_both_ward_variants() {
        let data = line();
        let t = greedy_ess_agglomerate(&data).unwrap();
        let opts = AgglomerateOptions::default();
        let wd = agglomerate_naive(&data.squared_euclidean(), LinkageMethod::WardD, &opts).unwrap();
        let cmp = compare_with_engine(&t, &wd).unwrap();
        assert!(cmp.topology_equal);
        assert!(cmp.max_relative_deviation < 1e-15);

        let wd2 = agglomerate_naive(&data.euclidean(), LinkageMethod::WardD2, &opts).unwrap();
        let cmp = compare_with_engine(&t, &wd2).unwrap();
        assert!(cmp.topology_equal);
        assert!(cmp.max_relative_deviation < 1e-12);

        let rooted = transform_heights(&wd, HeightTransform::Sqrt).unwrap();
        assert!(compare_with_engine(&t, &rooted).unwrap().max_relative_deviation < 1e-12);
    }

    #[test]
    fn leaf_count_mismatch_is_an_error() {
        let t = greedy_ess_agglomerate(&line()).unwrap();
        let other = DataMatrix::from_column(&[0.0, 1.0, 10.0, 20.0]).unwrap();
        let d = agglomerate_naive(&other.squared_euclidean(), LinkageMethod::WardD, &AgglomerateOptions::default()).unwrap();
        assert!(matches!(compare_with_engine(&t, &d), Err(Error::LeafCountMismatch(3, 4))));
    }
}
