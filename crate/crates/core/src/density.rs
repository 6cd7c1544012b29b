//! Parity-check density, rate, and a Fano-type lower bound on the bit error
//! probability in terms of the conditional entropy per block symbol.

use serde::Serialize;

use crate::error::{Error, Result};

/// Binary entropy in bits, with `h2(0) = h2(1) = 0`.
pub fn h2(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(h2_unchecked(x))
}

fn h2_unchecked(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// Inverse of the binary entropy on `[0, 1/2]`, by bisection to `1e-14`.
pub fn h2_inverse(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::invalid(format!("entropy value {y} outside [0, 1]")));
    }
    // h2 is flat to f64 resolution within about 1e-8 of 1/2.
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if h2_unchecked(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("code rate {rate} outside (0, 1)")))
    }
}

/// Normalized density `t = R / (2 - R) * delta` for `delta` ones per
/// information bit in the parity-check matrix.
pub fn normalized_density(rate: f64, delta: f64) -> Result<f64> {
    check_rate(rate)?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::invalid(format!("density {delta} must be finite and >= 0")));
    }
    Ok(rate / (2.0 - rate) * delta)
}

/// Parity-check density `(2 - R) t / R` for normalized density `t`.
pub fn min_density(rate: f64, t: f64) -> Result<f64> {
    check_rate(rate)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(format!("normalized density {t} must be finite and >= 0")));
    }
    Ok((2.0 - rate) * t / rate)
}

/// Normalization of the entropy in the Fano step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FanoNormalization {
    /// `H(X|Y)/n <= R h2(P_b)`.
    Rate,
    /// The older form with the rate factor replaced by 1.
    Unit,
}

/// Lower bound on the bit error probability from a lower bound `h_norm` on
/// `H(X|Y)/n`.
pub fn pb_lower_from_entropy(h_norm: f64, rate: f64, normalization: FanoNormalization) -> Result<f64> {
    check_rate(rate)?;
    if !(h_norm.is_finite() && h_norm >= 0.0) {
        return Err(Error::invalid(format!("normalized entropy {h_norm} must be finite and >= 0")));
    }
    if h_norm > rate * (1.0 + 1e-12) {
        return Err(Error::invalid(format!("normalized entropy {h_norm} exceeds the rate {rate}")));
    }
    let y = match normalization {
        FanoNormalization::Rate => (h_norm / rate).min(1.0),
        FanoNormalization::Unit => h_norm,
    };
    h2_inverse(y)
}

/// One row of a density table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityPoint {
    pub rate: f64,
    pub capacity: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub t: f64,
    /// Bit error lower bound, when an entropy bound was supplied.
    pub pb: Option<f64>,
    pub h_norm: Option<f64>,
}

impl DensityPoint {
    /// Operating point at gap `epsilon` to capacity `capacity`, i.e. rate
    /// `(1 - epsilon) capacity`, with normalized density `t`.
    pub fn at_gap(capacity: f64, epsilon: f64, t: f64, h_norm: Option<f64>) -> Result<Self> {
        if !(capacity > 0.0 && capacity <= 1.0) {
            return Err(Error::invalid(format!("capacity {capacity} outside (0, 1]")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(format!("gap {epsilon} outside (0, 1)")));
        }
        let rate = (1.0 - epsilon) * capacity;
        let delta = min_density(rate, t)?;
        let pb = h_norm.map(|h| pb_lower_from_entropy(h, rate, FanoNormalization::Rate)).transpose()?;
        Ok(DensityPoint {
            rate,
            capacity,
            epsilon,
            delta,
            t,
            pb,
            h_norm,
        })
    }
}
