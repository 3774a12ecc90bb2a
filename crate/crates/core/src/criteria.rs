//! Cluster-quality quantities computed directly from coordinates: error sum
//! of squares, variance, inertia, the between/within decomposition and the
//! Ward merge cost.
//!
//! Centroids are always mass-weighted. With unit masses inertia and the error
//! sum of squares coincide.

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, DissimilarityMatrix, Scale};
use crate::partition::Partition;

/// Default relative tolerance for identities between two computation routes.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceKind {
    Population,
    Sample,
}

/// Total, between-cluster and within-cluster sums of squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub total: f64,
    pub between: f64,
    pub within: f64,
}

impl Decomposition {
    pub fn residual(&self) -> f64 {
        (self.total - self.between - self.within).abs()
    }

    /// `total == between + within` within `tol * max(1, |total|)`.
    pub fn holds(&self, tol: f64) -> bool {
        self.residual() <= tol * self.total.abs().max(1.0)
    }
}

fn check_members(data: &DataMatrix, members: &[usize]) -> Result<()> {
    if members.is_empty() {
        return Err(Error::EmptyMembers);
    }
    let mut seen = vec![false; data.n()];
    for &i in members {
        if i >= data.n() {
            return Err(Error::IndexOutOfRange { index: i, n: data.n() });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidPartition(format!("observation {i} listed twice")));
        }
    }
    Ok(())
}

/// Mass-weighted centroid and total mass of `members`.
pub fn centroid(data: &DataMatrix, members: &[usize]) -> Result<(Vec<f64>, f64)> {
    check_members(data, members)?;
    Ok(centroid_unchecked(data, members))
}

fn centroid_unchecked(data: &DataMatrix, members: &[usize]) -> (Vec<f64>, f64) {
    let mut c = vec![0.0; data.p()];
    let mut mass = 0.0;
    for &i in members {
        let w = data.mass(i);
        mass += w;
        for (acc, x) in c.iter_mut().zip(data.row(i)) {
            *acc += w * x;
        }
    }
    for v in &mut c {
        *v /= mass;
    }
    (c, mass)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn weighted_deviation(data: &DataMatrix, members: &[usize], weighted: bool) -> f64 {
    let (c, _) = centroid_unchecked(data, members);
    members
        .iter()
        .map(|&i| {
            let w = if weighted { data.mass(i) } else { 1.0 };
            w * squared_distance(data.row(i), &c)
        })
        .sum()
}

/// Sum of squared distances of the members to their centroid.
pub fn error_sum_of_squares(data: &DataMatrix, members: &[usize]) -> Result<f64> {
    check_members(data, members)?;
    Ok(weighted_deviation(data, members, false))
}

pub fn cluster_variance(data: &DataMatrix, members: &[usize], kind: VarianceKind) -> Result<f64> {
    let ess = error_sum_of_squares(data, members)?;
    let count = members.len() as f64;
    match kind {
        VarianceKind::Population => Ok(ess / count),
        VarianceKind::Sample if members.len() < 2 => Err(Error::SampleVarianceOfSingleton),
        VarianceKind::Sample => Ok(ess / (count - 1.0)),
    }
}

/// Mass-weighted sum of squared distances to the mass-weighted centroid.
pub fn inertia(data: &DataMatrix, members: &[usize]) -> Result<f64> {
    check_members(data, members)?;
    Ok(weighted_deviation(data, members, true))
}

/// Splits the inertia of the whole data set about its centroid into a
/// between-cluster and a within-cluster part.
pub fn huygens_decomposition(data: &DataMatrix, partition: &Partition) -> Result<Decomposition> {
    if partition.n() != data.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} observations, data has {}",
            partition.n(),
            data.n()
        )));
    }
    let all: Vec<usize> = (0..data.n()).collect();
    let (grand, _) = centroid_unchecked(data, &all);
    let total = weighted_deviation(data, &all, true);
    let mut between = 0.0;
    let mut within = 0.0;
    for q in 0..partition.k() {
        let members = partition.members(q);
        let (c, mass) = centroid_unchecked(data, &members);
        between += mass * squared_distance(&c, &grand);
        within += weighted_deviation(data, &members, true);
    }
    Ok(Decomposition {
        total,
        between,
        within,
    })
}

/// Error sum of squares from squared pairwise distances alone:
/// `(1/|q|) * sum_{i<i'} d²(i, i')`. Unit masses only.
pub fn ess_via_pairwise(dissim: &DissimilarityMatrix, members: &[usize]) -> Result<f64> {
    if dissim.scale() != Scale::Squared {
        return Err(Error::ScaleMismatch {
            what: "pairwise error sum of squares".into(),
            expected: Scale::Squared,
            found: dissim.scale(),
        });
    }
    if members.is_empty() {
        return Err(Error::EmptyMembers);
    }
    if let Some(&bad) = members.iter().find(|&&i| i >= dissim.n()) {
        return Err(Error::IndexOutOfRange { index: bad, n: dissim.n() });
    }
    let mut sum = 0.0;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            if i == j {
                return Err(Error::InvalidPartition(format!("observation {i} listed twice")));
            }
            sum += dissim.get(i, j);
        }
    }
    Ok(sum / members.len() as f64)
}

/// `m1*m2/(m1+m2) * ||c1 - c2||²` for two clusters given by mass and centroid.
pub fn minimand_from_centroids(m1: f64, c1: &[f64], m2: f64, c2: &[f64]) -> f64 {
    m1 * m2 / (m1 + m2) * squared_distance(c1, c2)
}

/// Increase in inertia caused by merging two disjoint clusters.
pub fn ward_minimand(data: &DataMatrix, members1: &[usize], members2: &[usize]) -> Result<f64> {
    check_members(data, members1)?;
    check_members(data, members2)?;
    let mut in_first = vec![false; data.n()];
    for &i in members1 {
        in_first[i] = true;
    }
    if let Some(&shared) = members2.iter().find(|&&i| in_first[i]) {
        return Err(Error::OverlappingClusters(shared));
    }
    let (c1, m1) = centroid_unchecked(data, members1);
    let (c2, m2) = centroid_unchecked(data, members2);
    Ok(minimand_from_centroids(m1, &c1, m2, &c2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> DataMatrix {
        DataMatrix::from_column(&[0.0, 1.0, 10.0]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ess_examples() {
        let d = line();
        assert!(close(error_sum_of_squares(&d, &[0, 1, 2]).unwrap(), 546.0 / 9.0, 1e-12));
        assert_eq!(error_sum_of_squares(&d, &[2]).unwrap(), 0.0);
        assert_eq!(error_sum_of_squares(&d, &[0, 1]).unwrap(), 0.5);
        assert!(matches!(error_sum_of_squares(&d, &[]), Err(Error::EmptyMembers)));
    }

    #[test]
    fn variance_examples() {
        let d = line();
        assert_eq!(cluster_variance(&d, &[0, 1], VarianceKind::Population).unwrap(), 0.25);
        assert_eq!(cluster_variance(&d, &[0, 1], VarianceKind::Sample).unwrap(), 0.5);
        assert_eq!(cluster_variance(&d, &[1], VarianceKind::Population).unwrap(), 0.0);
        assert!(matches!(
            cluster_variance(&d, &[1], VarianceKind::Sample),
            Err(Error::SampleVarianceOfSingleton)
        ));
    }

    #[test]
    fn inertia_examples() {
        let d = line();
        assert!(close(inertia(&d, &[0, 1, 2]).unwrap(), 60.666_666_666_666_67, 1e-12));
        let thirds = DataMatrix::with_masses(3, 1, vec![0.0, 1.0, 10.0], vec![1.0 / 3.0; 3]).unwrap();
        assert!(close(inertia(&thirds, &[0, 1, 2]).unwrap(), 546.0 / 27.0, 1e-12));
        assert_eq!(inertia(&d, &[0]).unwrap(), 0.0);
        assert!(inertia(&d, &[]).is_err());
    }

    #[test]
    fn huygens_examples() {
        let d = line();
        let two = Partition::new(vec![0, 0, 1], 2).unwrap();
        let dec = huygens_decomposition(&d, &two).unwrap();
        assert!(close(dec.total, 546.0 / 9.0, 1e-12));
        // 2(0.5 - 11/3)² + (10 - 11/3)²
        assert!(close(dec.between, 361.0 / 6.0, 1e-12));
        assert!(close(dec.within, 0.5, 1e-12));
        assert!(dec.holds(DEFAULT_TOLERANCE));

        let dec = huygens_decomposition(&d, &Partition::singletons(3)).unwrap();
        assert_eq!(dec.within, 0.0);
        assert!(close(dec.between, dec.total, 1e-12));

        let dec = huygens_decomposition(&d, &Partition::single(3)).unwrap();
        assert!(dec.between.abs() < 1e-24);
        assert_eq!(dec.within, dec.total);
    }

    #[test]
    fn pairwise_examples() {
        let sq = line().squared_euclidean();
        assert!(close(ess_via_pairwise(&sq, &[0, 1, 2]).unwrap(), 182.0 / 3.0, 1e-12));
        assert_eq!(ess_via_pairwise(&sq, &[1]).unwrap(), 0.0);
        assert_eq!(ess_via_pairwise(&sq, &[0, 1]).unwrap(), 0.5);
        assert!(matches!(
            ess_via_pairwise(&line().euclidean(), &[0, 1]),
            Err(Error::ScaleMismatch { .. })
        ));
    }

    #[test]
    fn minimand_examples() {
        let d = line();
        assert_eq!(ward_minimand(&d, &[0], &[1]).unwrap(), 0.5);
        // (2/3) * 9.5²
        assert!(close(ward_minimand(&d, &[0, 1], &[2]).unwrap(), 361.0 / 6.0, 1e-12));
        let same = DataMatrix::from_column(&[-1.0, 1.0, 0.0]).unwrap();
        assert_eq!(ward_minimand(&same, &[0, 1], &[2]).unwrap(), 0.0);
        assert!(matches!(
            ward_minimand(&d, &[0, 1], &[1, 2]),
            Err(Error::OverlappingClusters(1))
        ));
    }

    #[test]
    fn minimand_is_the_ess_increase() {
        let d = DataMatrix::new(5, 2, vec![0.3, 1.2, -0.7, 2.0, 4.1, 0.0, 3.3, -1.5, 0.9, 0.4]).unwrap();
        let merged = error_sum_of_squares(&d, &[0, 1, 2, 3, 4]).unwrap();
        let a = error_sum_of_squares(&d, &[0, 3]).unwrap();
        let b = error_sum_of_squares(&d, &[1, 2, 4]).unwrap();
        let m = ward_minimand(&d, &[0, 3], &[1, 2, 4]).unwrap();
        assert!(close(m, merged - a - b, 1e-10 * merged));
    }
}
