//! Observation data and condensed pairwise dissimilarities.
//!
//! Pairs `(i, j)` with `i < j` are stored row by row from the upper triangle,
//! so the entry for `(i, j)` lives at `n*i - i*(i+1)/2 + (j - i - 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, Violation};

/// Offset of the unordered pair `{i, j}` in a condensed store over `n` observations.
pub fn condensed_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if i == j {
        return Err(Error::SelfPair(i));
    }
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    Ok(offset_unchecked(i, j, n))
}

#[inline]
pub(crate) fn offset_unchecked(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    n * i - i * (i + 1) / 2 + (j - i - 1)
}

#[inline]
pub(crate) fn condensed_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Whether dissimilarities are distances or squared distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Plain,
    Squared,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Plain => "plain",
            Scale::Squared => "squared",
        })
    }
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Scale::Plain),
            "squared" => Ok(Scale::Squared),
            other => Err(format!("unknown scale {other:?}")),
        }
    }
}

/// Checks the invariants of a row-major `n x p` matrix and its masses,
/// reporting every violation rather than stopping at the first.
pub fn validate(
    n: usize,
    p: usize,
    values: &[f64],
    masses: &[f64],
) -> std::result::Result<(), ValidationReport> {
    let mut violations = Vec::new();
    if n == 0 || p == 0 {
        violations.push(Violation::Empty);
    }
    if values.len() != n * p {
        violations.push(Violation::ShapeMismatch {
            expected: n * p,
            found: values.len(),
        });
    } else if p > 0 {
        for (row, cells) in values.chunks(p).enumerate() {
            for (column, v) in cells.iter().enumerate() {
                if !v.is_finite() {
                    violations.push(Violation::NonFinite { row, column });
                }
            }
        }
    }
    if masses.len() != n {
        violations.push(Violation::MassCountMismatch {
            expected: n,
            found: masses.len(),
        });
    }
    for (row, &m) in masses.iter().enumerate() {
        // NaN masses fail this comparison as well.
        if !(m > 0.0 && m.is_finite()) {
            violations.push(Violation::NonPositiveMass { row });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ValidationReport { violations })
    }
}

/// `n` observations by `p` attributes, with a positive mass per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
    masses: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl DataMatrix {
    /// Row-major values with unit masses.
    pub fn new(n: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        Self::with_masses(n, p, values, vec![1.0; n])
    }

    pub fn with_masses(n: usize, p: usize, values: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        validate(n, p, &values, &masses)?;
        Ok(DataMatrix {
            n,
            p,
            values,
            masses,
            labels: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(ValidationReport {
                violations: vec![Violation::ShapeMismatch {
                    expected: p,
                    found: bad.len(),
                }],
            }
            .into());
        }
        Self::new(n, p, rows.concat())
    }

    /// One attribute per observation.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(ValidationReport {
                violations: vec![Violation::LabelCountMismatch {
                    expected: self.n,
                    found: labels.len(),
                }],
            }
            .into());
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.masses[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn has_unit_masses(&self) -> bool {
        self.masses.iter().all(|&m| m == 1.0)
    }

    /// Pairwise Euclidean distances (plain scale).
    pub fn euclidean(&self) -> DissimilarityMatrix {
        let mut d = self.squared_euclidean();
        for v in &mut d.entries {
            *v = v.sqrt();
        }
        d.scale = Scale::Plain;
        d
    }

    /// Pairwise squared Euclidean distances, computed directly from
    /// coordinates rather than by squaring rounded distances.
    pub fn squared_euclidean(&self) -> DissimilarityMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(condensed_len(n));
        for i in 0..n {
            let a = self.row(i);
            for j in i + 1..n {
                let b = self.row(j);
                entries.push(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum());
            }
        }
        DissimilarityMatrix {
            n,
            entries,
            scale: Scale::Squared,
        }
    }
}

impl DataMatrix {
    /// Ward dissimilarities between the weighted observations,
    /// `2 m_i m_j / (m_i + m_j) * ||x_i - x_j||²`, on squared scale.
    ///
    /// This is the input under which a weighted `ward.D` run reproduces twice
    /// the inertia increase at every merge. With unit masses it equals
    /// [`DataMatrix::squared_euclidean`].
    pub fn ward_dissimilarities(&self) -> DissimilarityMatrix {
        let mut d = self.squared_euclidean();
        let m = &self.masses;
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                d.entries[k] *= 2.0 * m[i] * m[j] / (m[i] + m[j]);
                k += 1;
            }
        }
        d
    }
}

/// Condensed store of the `n(n-1)/2` pairwise dissimilarities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissimilarityMatrix {
    n: usize,
    entries: Vec<f64>,
    scale: Scale,
}

impl DissimilarityMatrix {
    pub fn new(n: usize, entries: Vec<f64>, scale: Scale) -> Result<Self> {
        let expected = condensed_len(n);
        if entries.len() != expected {
            return Err(Error::CondensedLength {
                n,
                expected,
                found: entries.len(),
            });
        }
        if let Some((offset, &value)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidDissimilarity { offset, value });
        }
        Ok(DissimilarityMatrix { n, entries, scale })
    }

    /// Builds from a full square matrix, reading only its upper triangle.
    pub fn from_square(rows: &[Vec<f64>], scale: Scale) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(condensed_len(n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::CondensedLength {
                    n,
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(&row[i + 1..]);
        }
        Self::new(n, entries, scale)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Dissimilarity between `i` and `j`; zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.entries[offset_unchecked(i, j, self.n)],
            std::cmp::Ordering::Greater => self.entries[offset_unchecked(j, i, self.n)],
        }
    }

    /// Entry-wise square, tagged squared.
    pub fn squared(&self) -> Result<Self> {
        if self.scale == Scale::Squared {
            return Err(Error::ScaleMismatch {
                what: "squaring".into(),
                expected: Scale::Plain,
                found: Scale::Squared,
            });
        }
        Ok(DissimilarityMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * v).collect(),
            scale: Scale::Squared,
        })
    }

    /// Entry-wise square root, tagged plain.
    pub fn sqrt(&self) -> Result<Self> {
        if self.scale == Scale::Plain {
            return Err(Error::ScaleMismatch {
                what: "square-rooting".into(),
                expected: Scale::Squared,
                found: Scale::Plain,
            });
        }
        Ok(DissimilarityMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v.sqrt()).collect(),
            scale: Scale::Plain,
        })
    }

    /// Same entries under a different scale tag. Used to deliberately feed a
    /// method the "wrong" scale.
    pub fn retagged(&self, scale: Scale) -> Self {
        DissimilarityMatrix {
            scale,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condensed_index_examples() {
        assert_eq!(condensed_index(0, 1, 3).unwrap(), 0);
        assert_eq!(condensed_index(1, 2, 3).unwrap(), 2);
        assert_eq!(condensed_index(2, 1, 3).unwrap(), 2);
        assert!(matches!(condensed_index(1, 1, 3), Err(Error::SelfPair(1))));
        assert!(matches!(
            condensed_index(0, 3, 3),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
    }

    #[test]
    fn condensed_index_is_a_bijection() {
        for n in 2..=50 {
            let mut seen = vec![false; condensed_len(n)];
            // enumeration order is the canonical order
            let mut expected = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let k = condensed_index(i, j, n).unwrap();
                    assert_eq!(k, expected);
                    assert_eq!(condensed_index(j, i, n).unwrap(), k);
                    assert!(!seen[k]);
                    seen[k] = true;
                    expected += 1;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn validate_accepts_finite_matrix() {
        assert!(validate(3, 2, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], &[1.0; 3]).is_ok());
    }

    #[test]
    fn validate_names_nan_position() {
        let err = validate(3, 2, &[0.0, 1.0, 2.0, f64::NAN, 4.0, 5.0], &[1.0; 3]).unwrap_err();
        assert_eq!(
            err.violations,
            vec![Violation::NonFinite { row: 1, column: 1 }]
        );
    }

    #[test]
    fn validate_reports_zero_mass() {
        let err = validate(3, 1, &[0.0, 1.0, 2.0], &[1.0, 1.0, 0.0]).unwrap_err();
        assert_eq!(err.to_string(), "non-positive mass at row 2");
    }

    #[test]
    fn validate_collects_every_violation() {
        let err = validate(2, 1, &[f64::INFINITY, f64::NAN], &[-1.0, 1.0]).unwrap_err();
        assert_eq!(err.violations.len(), 3);
        assert!(validate(0, 0, &[], &[]).is_err());
    }

    #[test]
    fn euclidean_of_line_points() {
        let data = DataMatrix::from_column(&[0.0, 1.0, 10.0]).unwrap();
        let d = data.euclidean();
        assert_eq!(d.entries(), &[1.0, 10.0, 9.0]);
        assert_eq!(d.scale(), Scale::Plain);
        let d2 = data.squared_euclidean();
        assert_eq!(d2.entries(), &[1.0, 100.0, 81.0]);
        assert_eq!(d.squared().unwrap(), d2);
        assert!(d2.squared().is_err());
        assert_eq!(d2.get(2, 0), 100.0);
        assert_eq!(d2.get(1, 1), 0.0);
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(DissimilarityMatrix::new(3, vec![1.0, -1.0, 2.0], Scale::Plain).is_err());
        assert!(DissimilarityMatrix::new(3, vec![1.0, 2.0], Scale::Plain).is_err());
        assert!(DissimilarityMatrix::new(1, vec![], Scale::Plain).is_ok());
    }
}
