//! Lance-Williams dissimilarity updates.
//!
//! After clusters `i` and `j` merge, the dissimilarity of the union to any
//! other cluster `k` is
//!
//! ```text
//! d(i∪j, k) = a_i d(i,k) + a_j d(j,k) + b d(i,j) + c |d(i,k) - d(j,k)|
//! ```
//!
//! The Ward rows use `a_i = (w_i+w_k)/S`, `a_j = (w_j+w_k)/S`, `b = -w_k/S`,
//! `c = 0` with `S = w_i + w_j + w_k`. `ward.D` applies them to squared
//! dissimilarities directly; `ward.D2` applies them to the squares of plain
//! dissimilarities and takes the square root of the result.

use crate::error::{Error, Result};
use crate::method::LinkageMethod;

/// Relative slack under the `ward.D2` square root before a negative
/// combination is treated as invalid input.
pub const ROOT_CLAMP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LWCoefficients {
    pub a_i: f64,
    pub a_j: f64,
    pub b: f64,
    pub c: f64,
}

fn check_mass(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveMass(w))
    }
}

pub fn lw_coefficients(method: LinkageMethod, w_i: f64, w_j: f64, w_k: f64) -> Result<LWCoefficients> {
    check_mass(w_i)?;
    check_mass(w_j)?;
    check_mass(w_k)?;
    let coeffs = match method {
        LinkageMethod::WardD | LinkageMethod::WardD2 => {
            let s = w_i + w_j + w_k;
            LWCoefficients {
                a_i: (w_i + w_k) / s,
                a_j: (w_j + w_k) / s,
                b: -w_k / s,
                c: 0.0,
            }
        }
        LinkageMethod::Single => LWCoefficients {
            a_i: 0.5,
            a_j: 0.5,
            b: 0.0,
            c: -0.5,
        },
        LinkageMethod::Complete => LWCoefficients {
            a_i: 0.5,
            a_j: 0.5,
            b: 0.0,
            c: 0.5,
        },
        LinkageMethod::Average => {
            let s = w_i + w_j;
            LWCoefficients {
                a_i: w_i / s,
                a_j: w_j / s,
                b: 0.0,
                c: 0.0,
            }
        }
        LinkageMethod::Centroid => {
            let s = w_i + w_j;
            LWCoefficients {
                a_i: w_i / s,
                a_j: w_j / s,
                b: -w_i * w_j / (s * s),
                c: 0.0,
            }
        }
        LinkageMethod::Median => LWCoefficients {
            a_i: 0.5,
            a_j: 0.5,
            b: -0.25,
            c: 0.0,
        },
    };
    Ok(coeffs)
}

/// The raw recurrence.
#[inline]
pub fn lw_update(d_ik: f64, d_jk: f64, d_ij: f64, coeffs: LWCoefficients) -> f64 {
    coeffs.a_i * d_ik + coeffs.a_j * d_jk + coeffs.b * d_ij + coeffs.c * (d_ik - d_jk).abs()
}

/// `ward.D` update on squared-scale dissimilarities.
#[inline]
pub fn ward_d_update(d_ik: f64, d_jk: f64, d_ij: f64, w_i: f64, w_j: f64, w_k: f64) -> f64 {
    ((w_i + w_k) * d_ik + (w_j + w_k) * d_jk - w_k * d_ij) / (w_i + w_j + w_k)
}

/// `ward.D2` update on plain-scale dissimilarities.
///
/// A negative value under the root is clamped to zero when its magnitude is
/// within [`ROOT_CLAMP_TOLERANCE`] of the largest term, and rejected otherwise.
pub fn ward_d2_update(d_ik: f64, d_jk: f64, d_ij: f64, w_i: f64, w_j: f64, w_k: f64) -> Result<f64> {
    let (sq_ik, sq_jk, sq_ij) = (d_ik * d_ik, d_jk * d_jk, d_ij * d_ij);
    let combined = ward_d_update(sq_ik, sq_jk, sq_ij, w_i, w_j, w_k);
    if combined >= 0.0 {
        return Ok(combined.sqrt());
    }
    let scale = sq_ik.max(sq_jk).max(sq_ij);
    if combined >= -ROOT_CLAMP_TOLERANCE * scale {
        Ok(0.0)
    } else {
        Err(Error::NegativeUnderRoot { value: combined })
    }
}

/// Dissimilarity from the union of `i` and `j` to `k` under `method`.
pub fn update(
    method: LinkageMethod,
    d_ik: f64,
    d_jk: f64,
    d_ij: f64,
    w_i: f64,
    w_j: f64,
    w_k: f64,
) -> Result<f64> {
    match method {
        LinkageMethod::WardD => Ok(ward_d_update(d_ik, d_jk, d_ij, w_i, w_j, w_k)),
        LinkageMethod::WardD2 => ward_d2_update(d_ik, d_jk, d_ij, w_i, w_j, w_k),
        LinkageMethod::Single => Ok(d_ik.min(d_jk)),
        LinkageMethod::Complete => Ok(d_ik.max(d_jk)),
        _ => Ok(lw_update(d_ik, d_jk, d_ij, lw_coefficients(method, w_i, w_j, w_k)?)),
    }
}
