//! Memoryless binary-input output-symmetric channels.
//!
//! The BIAWGN channel is normalized to unit noise variance per coordinate,
//! so the antipodal signal amplitude is `a0 = sqrt(2 R Eb/N0)` and the
//! pairwise error for Hamming distance `d` is `Q(sqrt(d) a0)`. Every bound
//! conditions on the all-zero codeword (mapped to `+a0`), which is valid for
//! linear codes on symmetric channels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::special::{ln_q, normal_pdf, q_function};

/// Binary-input channel with its operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelModel {
    Biawgn { ebno_db: f64, rate: f64 },
    Bsc { p: f64 },
}

impl ChannelModel {
    pub fn biawgn(ebno_db: f64, rate: f64) -> Result<Self> {
        if !ebno_db.is_finite() {
            return Err(Error::invalid(format!("Eb/N0 must be finite, got {ebno_db}")));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::invalid(format!("code rate must lie in (0, 1], got {rate}")));
        }
        Ok(ChannelModel::Biawgn { ebno_db, rate })
    }

    pub fn bsc(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::invalid(format!("crossover probability must lie in (0, 1/2), got {p}")));
        }
        Ok(ChannelModel::Bsc { p })
    }

    pub fn is_biawgn(&self) -> bool {
        matches!(self, ChannelModel::Biawgn { .. })
    }

    /// The same channel at another Eb/N0 (BIAWGN) or crossover probability (BSC).
    pub fn at(&self, x: f64) -> Result<Self> {
        match *self {
            ChannelModel::Biawgn { rate, .. } => Self::biawgn(x, rate),
            ChannelModel::Bsc { .. } => Self::bsc(x),
        }
    }

    /// Grid coordinate: Eb/N0 in dB or the crossover probability.
    pub fn grid_value(&self) -> f64 {
        match *self {
            ChannelModel::Biawgn { ebno_db, .. } => ebno_db,
            ChannelModel::Bsc { p } => p,
        }
    }

    /// Symbol SNR `Es/N0 = R Eb/N0` (linear). BIAWGN only.
    pub fn es_n0(&self) -> Result<f64> {
        match *self {
            ChannelModel::Biawgn { ebno_db, rate } => Ok(rate * 10f64.powf(ebno_db / 10.0)),
            ChannelModel::Bsc { .. } => Err(Error::invalid("operation requires the BIAWGN channel")),
        }
    }

    /// Signal amplitude in units of the noise standard deviation. BIAWGN only.
    pub fn amplitude(&self) -> Result<f64> {
        Ok((2.0 * self.es_n0()?).sqrt())
    }

    /// Bhattacharyya parameter `sum_y sqrt(p(y|0) p(y|1))`.
    pub fn bhattacharyya(&self) -> f64 {
        match *self {
            ChannelModel::Biawgn { .. } => (-self.es_n0().expect("biawgn")).exp(),
            ChannelModel::Bsc { p } => 2.0 * (p * (1.0 - p)).sqrt(),
        }
    }

    pub fn ln_bhattacharyya(&self) -> f64 {
        match *self {
            ChannelModel::Biawgn { .. } => -self.es_n0().expect("biawgn"),
            ChannelModel::Bsc { p } => std::f64::consts::LN_2 + 0.5 * (p.ln() + (1.0 - p).ln()),
        }
    }

    /// Probability that ML decoding between the all-zero word and one word of
    /// weight `d` picks the wrong one; BSC ties count one half.
    pub fn pairwise_error(&self, d: usize) -> Result<f64> {
        if d == 0 {
            return Err(Error::invalid("pairwise error needs distance d >= 1"));
        }
        Ok(match *self {
            ChannelModel::Biawgn { .. } => q_function((d as f64).sqrt() * self.amplitude()?),
            ChannelModel::Bsc { p } => bsc_pairwise(d, p),
        })
    }

    /// `ln` of [`pairwise_error`](Self::pairwise_error), finite far into the tail.
    pub fn ln_pairwise_error(&self, d: usize) -> Result<f64> {
        match *self {
            ChannelModel::Biawgn { .. } if d > 0 => Ok(ln_q((d as f64).sqrt() * self.amplitude()?)),
            _ => Ok(self.pairwise_error(d)?.ln()),
        }
    }

    /// `P(A_i and A_j)` for two codewords of weights `w_i`, `w_j` whose sum has
    /// weight `w_ij`, where `A_i` is the event that codeword `i` is at least as
    /// close to the received vector as the all-zero codeword. BIAWGN only.
    pub fn joint_pairwise_error(&self, w_i: usize, w_j: usize, w_ij: usize) -> Result<f64> {
        let a0 = self.amplitude()?;
        let rho = pair_correlation(w_i, w_j, w_ij)?;
        Ok(bivariate_orthant((w_i as f64).sqrt() * a0, (w_j as f64).sqrt() * a0, rho))
    }
}

/// Correlation of the two decision statistics of codewords with weights
/// `w_i`, `w_j` and distance `w_ij`.
pub fn pair_correlation(w_i: usize, w_j: usize, w_ij: usize) -> Result<f64> {
    if w_i == 0 || w_j == 0 {
        return Err(Error::invalid("codeword weights must be at least 1"));
    }
    if w_ij < w_i.abs_diff(w_j) || w_ij > w_i + w_j || !(w_i + w_j + w_ij).is_multiple_of(2) {
        return Err(Error::invalid(format!("weights ({w_i}, {w_j}, {w_ij}) are not realizable by two codewords")));
    }
    let overlap = (w_i + w_j - w_ij) as f64 / 2.0;
    let rho = overlap / ((w_i * w_j) as f64).sqrt();
    if rho.abs() > 1.0 + 1e-12 {
        return Err(Error::Numeric(format!("correlation {rho} outside [-1, 1]")));
    }
    Ok(rho.clamp(-1.0, 1.0))
}

fn bsc_pairwise(d: usize, p: f64) -> f64 {
    // P(Binomial(d, p) > d/2) + P(= d/2) / 2, summed in the log domain.
    let ln_p = p.ln();
    let ln_q1 = (1.0 - p).ln();
    let mut total = 0.0;
    let mut ln_binom = 0.0; // ln C(d, e), updated incrementally
    for e in 0..=d {
        if e > 0 {
            ln_binom += ((d - e + 1) as f64).ln() - (e as f64).ln();
        }
        let weight = match (2 * e).cmp(&d) {
            std::cmp::Ordering::Less => continue,
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Greater => 1.0,
        };
        total += weight * (ln_binom + e as f64 * ln_p + (d - e) as f64 * ln_q1).exp();
    }
    total
}

/// `P(Z1 >= a, Z2 >= b)` for a standard bivariate normal pair with
/// correlation `rho`, by adaptive quadrature of the conditional tail.
pub fn bivariate_orthant(a: f64, b: f64, rho: f64) -> f64 {
    if rho >= 1.0 - 1e-14 {
        return q_function(a.max(b));
    }
    if rho <= -1.0 + 1e-14 {
        return (q_function(a) - q_function(-b)).max(0.0);
    }
    if rho == 0.0 {
        return q_function(a) * q_function(b);
    }
    let s = (1.0 - rho * rho).sqrt();
    let f = |x: f64| normal_pdf(x) * q_function((b - rho * x) / s);
    let hi = a.max(0.0) + 40.0;
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-12,
        max_intervals: 4000,
    };
    // The conditional tail switches from 0 to 1 around x = b / rho.
    let kink = b / rho;
    let value = if kink > a && kink < hi {
        integrate(f, a, kink, tol).value + integrate(f, kink, hi, tol).value
    } else {
        integrate(f, a, hi, tol).value
    };
    value.clamp(0.0, q_function(a).min(q_function(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bsc_pairwise_matches_flip_enumeration() {
        let p: f64 = 0.07;
        let ch = ChannelModel::bsc(p).unwrap();
        for d in 1..=9usize {
            let mut oracle = 0.0;
            for flips in 0u32..(1 << d) {
                let e = flips.count_ones() as usize;
                let pr = p.powi(e as i32) * (1.0 - p).powi((d - e) as i32);
                oracle += pr * if 2 * e > d { 1.0 } else if 2 * e == d { 0.5 } else { 0.0 };
            }
            assert!((ch.pairwise_error(d).unwrap() - oracle).abs() < 1e-15, "d={d}");
        }
        let d3 = 3.0 * p * p * (1.0 - p) + p.powi(3);
        assert!((ch.pairwise_error(3).unwrap() - d3).abs() < 1e-16);
    }

    #[test]
    fn biawgn_pairwise_anchor() {
        let ch = ChannelModel::biawgn(0.0, 1.0).unwrap();
        assert!((ch.pairwise_error(1).unwrap() - 0.078_649_603_525_142_57).abs() < 1e-15);
        assert!(ch.pairwise_error(0).is_err());
        assert!(ChannelModel::biawgn(80.0, 0.5).unwrap().pairwise_error(1).unwrap() < 1e-300);
        let deep = ChannelModel::biawgn(40.0, 0.5).unwrap();
        assert!(deep.ln_pairwise_error(20).unwrap().is_finite());
    }

    #[test]
    fn bhattacharyya_range() {
        assert!((ChannelModel::bsc(0.5 - 1e-12).unwrap().bhattacharyya() - 1.0).abs() < 1e-10);
        let g = ChannelModel::biawgn(2.0, 0.5).unwrap().bhattacharyya();
        assert!(g > 0.0 && g < 1.0);
        let ch = ChannelModel::bsc(0.1).unwrap();
        assert!((ch.ln_bhattacharyya().exp() - ch.bhattacharyya()).abs() < 1e-15);
    }

    #[test]
    fn invalid_channels() {
        assert!(ChannelModel::bsc(0.5).is_err());
        assert!(ChannelModel::bsc(0.0).is_err());
        assert!(ChannelModel::biawgn(1.0, 0.0).is_err());
        assert!(ChannelModel::biawgn(f64::NAN, 0.5).is_err());
        assert!(ChannelModel::bsc(0.1).unwrap().joint_pairwise_error(3, 3, 4).is_err());
    }

    #[test]
    fn orthant_reference_values() {
        // 30-digit quadrature references.
        assert!((bivariate_orthant(1.0, 0.5, 0.6) - 0.109_021_782_721_315_27).abs() < 1e-13);
        assert!((bivariate_orthant(0.3, -0.2, -0.7) - 0.104_076_958_341_616_78).abs() < 1e-13);
        assert!((bivariate_orthant(2.0, 2.1, 0.999) - 0.017_854_808_314_917_76).abs() < 1e-13);
    }

    #[test]
    fn joint_special_cases() {
        let ch = ChannelModel::biawgn(2.0, 4.0 / 7.0).unwrap();
        let same = ch.joint_pairwise_error(3, 3, 0).unwrap();
        assert!((same - ch.pairwise_error(3).unwrap()).abs() < 1e-16);
        let indep = ch.joint_pairwise_error(3, 4, 7).unwrap();
        assert!((indep - ch.pairwise_error(3).unwrap() * ch.pairwise_error(4).unwrap()).abs() < 1e-16);
        assert!(ch.joint_pairwise_error(3, 3, 7).is_err());
        assert!(ch.joint_pairwise_error(3, 3, 3).is_err());
    }

    proptest! {
        #[test]
        fn frechet_bounds(w_i in 1usize..30, w_j in 1usize..30, t in 0.0f64..1.0, ebno in -2.0f64..8.0) {
            let lo = w_i.abs_diff(w_j);
            let hi = w_i + w_j;
            let mut w_ij = lo + ((hi - lo) as f64 * t) as usize;
            if !(w_i + w_j + w_ij).is_multiple_of(2) { w_ij += 1; }
            prop_assume!(w_ij <= hi);
            let ch = ChannelModel::biawgn(ebno, 0.5).unwrap();
            let (pi, pj) = (ch.pairwise_error(w_i).unwrap(), ch.pairwise_error(w_j).unwrap());
            let joint = ch.joint_pairwise_error(w_i, w_j, w_ij).unwrap();
            prop_assert!(joint <= pi.min(pj) + 1e-15);
            prop_assert!(joint >= (pi + pj - 1.0).max(0.0) - 1e-15);
        }

        #[test]
        fn pairwise_monotone(d in 1usize..200, ebno in -3.0f64..10.0) {
            let ch = ChannelModel::biawgn(ebno, 0.5).unwrap();
            prop_assert!(ch.ln_pairwise_error(d + 1).unwrap() < ch.ln_pairwise_error(d).unwrap());
            let better = ch.at(ebno + 0.1).unwrap();
            prop_assert!(better.ln_pairwise_error(d).unwrap() < ch.ln_pairwise_error(d).unwrap());
        }
    }
}
