//! The 1965 Gallager bound and the DS2 bound with per-letter tilting
//! measures, plus their numerical optimization.
//!
//! With a product tilting `G(y) = prod_i g(y_i)` and `kappa = 1 - 1/rho`, the
//! DS2 bound conditioned on the all-zero codeword factorizes as
//!
//! ```text
//! zeta^{n(1-rho)} * ( sum_{d>=1} A_d alpha^d beta^{n-d} )^rho
//! zeta  = sum_y g(y) p(y|0)
//! alpha = sum_y g(y)^kappa p(y|0)^{1-lambda} p(y|1)^lambda
//! beta  = sum_y g(y)^kappa p(y|0)
//! ```
//!
//! For the BIAWGN channel every family below is `g(y) = exp(c y + e y^2)`,
//! so the three sums are Gaussian integrals in closed form.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::codebook::{DistanceSpectrum, Iowef, LinearCode};
use crate::error::{Error, Result};
use crate::optimize::{coordinate_descent, Interval, MultiStart};
use crate::quad::{gauss_hermite_normal, integrate, Tolerance};
use crate::special::LogSum;

/// Per-letter tilting function `g`, the un-normalized form of the measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TiltingMeasure {
    /// `g = 1`.
    Uniform,
    /// `g = (p(y|0) / p(y|1))^s`.
    Llr { s: f64 },
    /// `g = exp(c y + e y^2)`, BIAWGN only.
    Gaussian { c: f64, e: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiltFamily {
    Uniform,
    Llr,
    Gaussian,
}

impl TiltingMeasure {
    pub fn family(&self) -> TiltFamily {
        match self {
            TiltingMeasure::Uniform => TiltFamily::Uniform,
            TiltingMeasure::Llr { .. } => TiltFamily::Llr,
            TiltingMeasure::Gaussian { .. } => TiltFamily::Gaussian,
        }
    }

    /// `ln g(y)` on the BSC, with output `y = 0` meaning "no flip".
    fn ln_g_bsc(&self, p: f64, flipped: bool) -> Result<f64> {
        let llr = ((1.0 - p) / p).ln();
        match *self {
            TiltingMeasure::Uniform => Ok(0.0),
            TiltingMeasure::Llr { s } => Ok(if flipped { -s * llr } else { s * llr }),
            TiltingMeasure::Gaussian { .. } => Err(Error::invalid("the Gaussian tilting family needs the BIAWGN channel")),
        }
    }

    /// Coefficients `(c, e)` of `ln g(y) = c y + e y^2` on the BIAWGN channel.
    fn quadratic_form(&self, a0: f64) -> (f64, f64) {
        match *self {
            TiltingMeasure::Uniform => (0.0, 0.0),
            TiltingMeasure::Llr { s } => (2.0 * a0 * s, 0.0),
            TiltingMeasure::Gaussian { c, e } => (c, e),
        }
    }
}

/// Parameters shared by the Gallager-type bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub lambda: f64,
    pub rho: f64,
    pub tilt: TiltingMeasure,
}

impl BoundParams {
    /// `lambda = 1/2, rho = 1, g = 1`: the union-Bhattacharyya point.
    pub fn bhattacharyya() -> Self {
        BoundParams {
            lambda: 0.5,
            rho: 1.0,
            tilt: TiltingMeasure::Uniform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::invalid(format!("rho must lie in (0, 1], got {}", self.rho)));
        }
        Ok(())
    }
}

/// Logarithms of the per-letter sums `alpha`, `beta`, `zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerLetterStats {
    pub ln_alpha: f64,
    pub ln_beta: f64,
    pub ln_zeta: f64,
}

// ln E[exp(u Y + v Y^2)] for Y ~ N(m, 1).
fn ln_gauss_mgf(u: f64, v: f64, m: f64) -> Result<f64> {
    let a = 0.5 - v;
    if a <= 0.0 {
        return Err(Error::Divergent(format!(
            "per-letter integral of exp({u} y + {v} y^2) against a unit-variance Gaussian"
        )));
    }
    let b = m + u;
    Ok(-0.5 * (2.0 * a).ln() + b * b / (4.0 * a) - 0.5 * m * m)
}

pub fn per_letter_stats(channel: &ChannelModel, params: &BoundParams) -> Result<PerLetterStats> {
    params.validate()?;
    let kappa = 1.0 - 1.0 / params.rho;
    let lambda = params.lambda;
    match *channel {
        ChannelModel::Bsc { p } => {
            let (lp, lq) = (p.ln(), (1.0 - p).ln());
            let g0 = params.tilt.ln_g_bsc(p, false)?;
            let g1 = params.tilt.ln_g_bsc(p, true)?;
            let sum2 = |a: f64, b: f64| [a, b].into_iter().collect::<LogSum>().value();
            Ok(PerLetterStats {
                ln_alpha: sum2(
                    kappa * g0 + (1.0 - lambda) * lq + lambda * lp,
                    kappa * g1 + (1.0 - lambda) * lp + lambda * lq,
                ),
                ln_beta: sum2(kappa * g0 + lq, kappa * g1 + lp),
                ln_zeta: sum2(g0 + lq, g1 + lp),
            })
        }
        ChannelModel::Biawgn { .. } => {
            let a0 = channel.amplitude()?;
            let (c, e) = params.tilt.quadratic_form(a0);
            // p0^{1-l} p1^l is N((1-2l) a0, 1) scaled by exp(-2 l (1-l) a0^2).
            let ln_alpha = -2.0 * lambda * (1.0 - lambda) * a0 * a0
                + ln_gauss_mgf(kappa * c, kappa * e, (1.0 - 2.0 * lambda) * a0)?;
            let ln_beta = ln_gauss_mgf(kappa * c, kappa * e, a0)?;
            let ln_zeta = if params.rho == 1.0 { 0.0 } else { ln_gauss_mgf(c, e, a0)? };
            Ok(PerLetterStats {
                ln_alpha,
                ln_beta,
                ln_zeta,
            })
        }
    }
}

/// Numerically integrates the normalized per-letter measure
/// `g(y) p(y|0) / zeta`; the result should be 1.
pub fn tilting_normalization(channel: &ChannelModel, tilt: &TiltingMeasure) -> Result<f64> {
    let params = BoundParams {
        lambda: 0.5,
        rho: 0.5,
        tilt: *tilt,
    };
    let zeta = per_letter_stats(channel, &params)?.ln_zeta.exp();
    match *channel {
        ChannelModel::Bsc { p } => {
            let total = tilt.ln_g_bsc(p, false)?.exp() * (1.0 - p) + tilt.ln_g_bsc(p, true)?.exp() * p;
            Ok(total / zeta)
        }
        ChannelModel::Biawgn { .. } => {
            let a0 = channel.amplitude()?;
            let (c, e) = tilt.quadratic_form(a0);
            let f = |y: f64| (c * y + e * y * y - 0.5 * (y - a0).powi(2)).exp() / (2.0 * std::f64::consts::PI).sqrt();
            // The tilted measure is Gaussian with mean (a0 + c) / (1 - 2e) and variance 1 / (1 - 2e).
            let var = 1.0 / (1.0 - 2.0 * e);
            let mean = (a0 + c) * var;
            let half = 40.0 * var.sqrt();
            let tol = Tolerance {
                abs: 0.0,
                rel: 1e-13,
                max_intervals: 4000,
            };
            Ok(integrate(f, mean - half, mean + half, tol).value / zeta)
        }
    }
}

/// `ln` of the unclipped DS2 bound on the block error probability.
pub fn ln_ds2(spectrum: &DistanceSpectrum, channel: &ChannelModel, params: &BoundParams) -> Result<f64> {
    let stats = per_letter_stats(channel, params)?;
    let n = spectrum.n() as f64;
    let inner: LogSum = spectrum
        .nonzero_terms()
        .map(|(d, a)| a.ln() + d as f64 * stats.ln_alpha + (n - d as f64) * stats.ln_beta)
        .collect();
    let zeta_part = if params.rho == 1.0 { 0.0 } else { n * (1.0 - params.rho) * stats.ln_zeta };
    Ok(zeta_part + params.rho * inner.value())
}

/// Unclipped DS2 bound on the block error probability.
pub fn ds2_bound(spectrum: &DistanceSpectrum, channel: &ChannelModel, params: &BoundParams) -> Result<f64> {
    Ok(ln_ds2(spectrum, channel, params)?.exp())
}

/// DS2 bound on the bit error probability, driven by the IOWEF.
pub fn ds2_bit_error_bound(iowef: &Iowef, channel: &ChannelModel, params: &BoundParams) -> Result<f64> {
    ds2_bound(&iowef.bit_weighted_spectrum(), channel, params)
}

const MAX_OUTPUT_BITS: usize = 20;

fn guard_output_enumeration(code: &LinearCode) -> Result<()> {
    if code.n() > MAX_OUTPUT_BITS {
        return Err(Error::SizeGuard {
            what: "block length n",
            value: code.n(),
            limit: MAX_OUTPUT_BITS,
        });
    }
    if code.n() + code.k() > 30 {
        return Err(Error::SizeGuard {
            what: "n + k",
            value: code.n() + code.k(),
            limit: 30,
        });
    }
    Ok(())
}

/// The 1965 Gallager bound `E[ S(y)^rho ]` over `y ~ p(.|0)`, where
/// `S(y) = sum_{c != 0} (p(y|c) / p(y|0))^lambda`.
///
/// The tilting measure cancels out of this bound, so `params.tilt` is
/// ignored. Needs the codewords themselves, not just the spectrum. The BSC
/// is summed exactly; the BIAWGN uses tensor Gauss-Hermite quadrature.
pub fn gallager65_bound(code: &LinearCode, channel: &ChannelModel, params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let words = code.codewords_u64()?;
    let words = &words[1..];
    let (lambda, rho) = (params.lambda, params.rho);
    match *channel {
        ChannelModel::Bsc { p } => {
            guard_output_enumeration(code)?;
            let n = code.n();
            let llr = ((1.0 - p) / p).ln();
            let mut total = 0.0;
            for y in 0u64..(1 << n) {
                let e = y.count_ones() as i32;
                let py = p.powi(e) * (1.0 - p).powi(n as i32 - e);
                let s: f64 = words
                    .iter()
                    .map(|&c| (lambda * llr * (2 * (c & y).count_ones() as i32 - c.count_ones() as i32) as f64).exp())
                    .sum();
                total += py * s.powf(rho);
            }
            Ok(total)
        }
        ChannelModel::Biawgn { .. } => {
            let n = code.n();
            if n > 10 {
                return Err(Error::SizeGuard {
                    what: "block length n",
                    value: n,
                    limit: 10,
                });
            }
            let a0 = channel.amplitude()?;
            let order = ((2f64.powf(22.0 / n as f64)) as usize).clamp(3, 20);
            let (nodes, weights) = gauss_hermite_normal(order);
            let mut idx = vec![0usize; n];
            let mut total = 0.0;
            loop {
                let mut w = 1.0;
                // Per-coordinate log-likelihood ratio ln(p1/p0) = -2 a0 y.
                let mut llr = [0.0f64; 10];
                for i in 0..n {
                    w *= weights[idx[i]];
                    llr[i] = -2.0 * a0 * (a0 + nodes[idx[i]]);
                }
                let s: f64 = words
                    .iter()
                    .map(|&c| {
                        let sum: f64 = (0..n).filter(|&i| c >> i & 1 == 1).map(|i| llr[i]).sum();
                        (lambda * sum).exp()
                    })
                    .sum();
                total += w * s.powf(rho);
                // Odometer increment over the tensor grid.
                let mut i = 0;
                while i < n {
                    idx[i] += 1;
                    if idx[i] < order {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            Ok(total)
        }
    }
}

/// DS2 evaluated by summing over every BSC output word, without using the
/// per-letter factorization. Cross-checks [`ds2_bound`].
pub fn ds2_by_enumeration(code: &LinearCode, channel: &ChannelModel, params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let ChannelModel::Bsc { p } = *channel else {
        return Err(Error::invalid("output enumeration needs the BSC"));
    };
    guard_output_enumeration(code)?;
    let words = code.codewords_u64()?;
    let n = code.n();
    let (lambda, rho) = (params.lambda, params.rho);
    let kappa = 1.0 - 1.0 / rho;
    let llr = ((1.0 - p) / p).ln();
    let (g0, g1) = (params.tilt.ln_g_bsc(p, false)?, params.tilt.ln_g_bsc(p, true)?);
    let mut z = 0.0;
    let mut t = 0.0;
    for y in 0u64..(1 << n) {
        let e = y.count_ones() as i32;
        let py = p.powi(e) * (1.0 - p).powi(n as i32 - e);
        let ln_g = e as f64 * g1 + (n as i32 - e) as f64 * g0;
        let s: f64 = words[1..]
            .iter()
            .map(|&c| (lambda * llr * (2 * (c & y).count_ones() as i32 - c.count_ones() as i32) as f64).exp())
            .sum();
        z += ln_g.exp() * py;
        t += (kappa * ln_g).exp() * py * s;
    }
    Ok(z.powf(1.0 - rho) * t.powf(rho))
}

/// Feasible box for the optimizer: `[lambda, rho, tilt parameters...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    pub family: TiltFamily,
    pub bounds: Vec<Interval>,
}

impl ParamBox {
    pub fn new(family: TiltFamily, channel: &ChannelModel) -> Result<Self> {
        let mut bounds = vec![Interval::new(0.0, 4.0), Interval::new(1e-3, 1.0)];
        match family {
            TiltFamily::Uniform => {}
            TiltFamily::Llr => bounds.push(Interval::new(-2.0, 2.0)),
            TiltFamily::Gaussian => {
                let a0 = channel.amplitude()?;
                let span = 4.0 * a0 + 4.0;
                bounds.push(Interval::new(-span, span));
                bounds.push(Interval::new(-4.0, 0.49));
            }
        }
        Ok(ParamBox { family, bounds })
    }

    /// Restricts one coordinate to a single value.
    pub fn fix(mut self, index: usize, value: f64) -> Self {
        self.bounds[index] = Interval::new(value, value);
        self
    }

    fn decode(&self, x: &[f64]) -> BoundParams {
        let tilt = match self.family {
            TiltFamily::Uniform => TiltingMeasure::Uniform,
            TiltFamily::Llr => TiltingMeasure::Llr { s: x[2] },
            TiltFamily::Gaussian => TiltingMeasure::Gaussian { c: x[2], e: x[3] },
        };
        BoundParams {
            lambda: x[0],
            rho: x[1],
            tilt,
        }
    }

    fn neutral(&self) -> Vec<f64> {
        let mut x = vec![0.5, 1.0];
        x.resize(self.bounds.len(), 0.0);
        x
    }
}

/// Best parameters found and the unclipped bound value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimized {
    pub params: BoundParams,
    pub value: f64,
}

/// Minimizes `ln_bound` over the box by multi-start coordinate descent. The
/// union-Bhattacharyya point is always one of the starts.
pub fn optimize_bound<F>(ln_bound: F, space: &ParamBox, opts: &MultiStart) -> Result<Optimized>
where
    F: Fn(&BoundParams) -> Result<f64>,
{
    let objective = |x: &[f64]| ln_bound(&space.decode(x)).unwrap_or(f64::INFINITY);
    let mut mid = space.neutral();
    mid[1] = 0.5;
    let best = coordinate_descent(objective, &space.bounds, &[space.neutral(), mid], opts)
        .ok_or_else(|| Error::Numeric("every optimizer start produced a divergent bound".into()))?;
    Ok(Optimized {
        params: space.decode(&best.x),
        value: best.value.exp(),
    })
}

/// DS2 optimized over `(lambda, rho)` and the tilting parameters.
pub fn optimize_ds2(
    spectrum: &DistanceSpectrum,
    channel: &ChannelModel,
    family: TiltFamily,
    opts: &MultiStart,
) -> Result<Optimized> {
    optimize_bound(|p| ln_ds2(spectrum, channel, p), &ParamBox::new(family, channel)?, opts)
}

/// Gallager 1965 bound optimized over `(lambda, rho)`.
pub fn optimize_gallager65(code: &LinearCode, channel: &ChannelModel, opts: &MultiStart) -> Result<Optimized> {
    let space = ParamBox::new(TiltFamily::Uniform, channel)?;
    optimize_bound(|p| Ok(gallager65_bound(code, channel, p)?.ln()), &space, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{enumerate_iowef, enumerate_spectrum};
    use crate::optimize::golden_section;
    use crate::union::bhattacharyya_bound;
    use proptest::prelude::*;

    fn hamming() -> (LinearCode, DistanceSpectrum) {
        let code = LinearCode::hamming74();
        let s = enumerate_spectrum(&code).unwrap();
        (code, s)
    }

    #[test]
    fn specialization_gives_bhattacharyya() {
        let (_, s) = hamming();
        for ch in [ChannelModel::biawgn(1.5, 4.0 / 7.0).unwrap(), ChannelModel::bsc(0.03).unwrap()] {
            let ds2 = ds2_bound(&s, &ch, &BoundParams::bhattacharyya()).unwrap();
            let bh = bhattacharyya_bound(&s, &ch);
            assert!((ds2 / bh - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let (code, s) = hamming();
        let ch = ChannelModel::bsc(0.05).unwrap();
        let bad = BoundParams { rho: 0.0, ..BoundParams::bhattacharyya() };
        assert!(ds2_bound(&s, &ch, &bad).is_err());
        assert!(gallager65_bound(&code, &ch, &bad).is_err());
        let gauss = BoundParams {
            tilt: TiltingMeasure::Gaussian { c: 0.0, e: 0.1 },
            ..BoundParams::bhattacharyya()
        };
        assert!(ds2_bound(&s, &ch, &gauss).is_err());
    }

    #[test]
    fn divergent_tilt_is_reported() {
        let (_, s) = hamming();
        let ch = ChannelModel::biawgn(2.0, 4.0 / 7.0).unwrap();
        let params = BoundParams {
            lambda: 0.5,
            rho: 0.5,
            tilt: TiltingMeasure::Gaussian { c: 0.0, e: 0.6 },
        };
        assert!(matches!(ds2_bound(&s, &ch, &params), Err(Error::Divergent(_))));
    }

    #[test]
    fn gaussian_family_contains_llr_family() {
        let (_, s) = hamming();
        let ch = ChannelModel::biawgn(2.0, 4.0 / 7.0).unwrap();
        let a0 = ch.amplitude().unwrap();
        let llr = BoundParams { lambda: 0.4, rho: 0.6, tilt: TiltingMeasure::Llr { s: 0.3 } };
        let gauss = BoundParams { tilt: TiltingMeasure::Gaussian { c: 2.0 * a0 * 0.3, e: 0.0 }, ..llr };
        let (x, y) = (ds2_bound(&s, &ch, &llr).unwrap(), ds2_bound(&s, &ch, &gauss).unwrap());
        assert!((x / y - 1.0).abs() < 1e-13);
    }

    #[test]
    fn per_letter_sums_match_quadrature() {
        let ch = ChannelModel::biawgn(1.0, 0.5).unwrap();
        let a0 = ch.amplitude().unwrap();
        let params = BoundParams { lambda: 0.3, rho: 0.7, tilt: TiltingMeasure::Gaussian { c: 0.4, e: -0.2 } };
        let stats = per_letter_stats(&ch, &params).unwrap();
        let kappa = 1.0 - 1.0 / 0.7;
        let g = |y: f64| (0.4 * y - 0.2 * y * y).exp();
        let pdf = |y: f64, m: f64| (-(y - m) * (y - m) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let tol = Tolerance { abs: 0.0, rel: 1e-13, max_intervals: 4000 };
        let alpha = integrate(|y| g(y).powf(kappa) * pdf(y, a0).powf(0.7) * pdf(y, -a0).powf(0.3), -40.0, 40.0, tol);
        let beta = integrate(|y| g(y).powf(kappa) * pdf(y, a0), -40.0, 40.0, tol);
        let zeta = integrate(|y| g(y) * pdf(y, a0), -40.0, 40.0, tol);
        assert!((stats.ln_alpha.exp() / alpha.value - 1.0).abs() < 1e-11);
        assert!((stats.ln_beta.exp() / beta.value - 1.0).abs() < 1e-11);
        assert!((stats.ln_zeta.exp() / zeta.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn tilted_measures_are_normalized() {
        let awgn = ChannelModel::biawgn(2.0, 0.5).unwrap();
        for tilt in [TiltingMeasure::Uniform, TiltingMeasure::Llr { s: -0.7 }, TiltingMeasure::Gaussian { c: 1.2, e: 0.3 }] {
            assert!((tilting_normalization(&awgn, &tilt).unwrap() - 1.0).abs() < 1e-10);
        }
        let bsc = ChannelModel::bsc(0.1).unwrap();
        assert!((tilting_normalization(&bsc, &TiltingMeasure::Llr { s: 0.8 }).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factorized_ds2_matches_enumeration() {
        let (code, s) = hamming();
        let ch = ChannelModel::bsc(0.08).unwrap();
        for (lambda, rho, t) in [(0.5, 1.0, 0.0), (0.3, 0.4, 0.2), (1.1, 0.8, -0.5), (0.7, 0.05, 1.0)] {
            let params = BoundParams { lambda, rho, tilt: TiltingMeasure::Llr { s: t } };
            let a = ds2_bound(&s, &ch, &params).unwrap();
            let b = ds2_by_enumeration(&code, &ch, &params).unwrap();
            assert!((a / b - 1.0).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn repetition_gallager_above_exact() {
        let code = LinearCode::repetition(3);
        for p in [0.01, 0.1, 0.3] {
            let ch = ChannelModel::bsc(p).unwrap();
            let exact = 3.0 * p * p - 2.0 * p * p * p;
            for lambda in [0.1, 0.5, 0.9, 1.5] {
                for rho in [0.2, 0.6, 1.0] {
                    let params = BoundParams { lambda, rho, tilt: TiltingMeasure::Uniform };
                    assert!(gallager65_bound(&code, &ch, &params).unwrap() >= exact);
                }
            }
        }
    }

    #[test]
    fn gallager65_on_awgn_reduces_at_rho_one() {
        // rho = 1 gives sum_c E[(p1/p0)^lambda]^|c| in closed form.
        let (code, s) = hamming();
        let ch = ChannelModel::biawgn(2.0, 4.0 / 7.0).unwrap();
        let a0 = ch.amplitude().unwrap();
        let lambda: f64 = 0.35;
        let per_letter = (-2.0 * lambda * (1.0 - lambda) * a0 * a0).exp();
        let closed: f64 = s.nonzero_terms().map(|(d, a)| a * per_letter.powi(d as i32)).sum();
        let params = BoundParams { lambda, rho: 1.0, tilt: TiltingMeasure::Uniform };
        let v = gallager65_bound(&code, &ch, &params).unwrap();
        assert!((v / closed - 1.0).abs() < 1e-8, "{v} vs {closed}");
    }

    #[test]
    fn bit_bound_of_single_bit_code_equals_block_bound() {
        let code = LinearCode::repetition(5);
        let t = enumerate_iowef(&code).unwrap();
        let ch = ChannelModel::biawgn(1.0, 0.2).unwrap();
        let params = BoundParams { lambda: 0.4, rho: 0.7, tilt: TiltingMeasure::Llr { s: 0.1 } };
        let bit = ds2_bit_error_bound(&t, &ch, &params).unwrap();
        let block = ds2_bound(&t.marginal(), &ch, &params).unwrap();
        assert!((bit / block - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bit_bound_below_block_bound() {
        let code = LinearCode::hamming74();
        let t = enumerate_iowef(&code).unwrap();
        let ch = ChannelModel::biawgn(4.0, 4.0 / 7.0).unwrap();
        let opt = optimize_ds2(&t.marginal(), &ch, TiltFamily::Gaussian, &MultiStart::default()).unwrap();
        assert!(ds2_bit_error_bound(&t, &ch, &opt.params).unwrap() <= opt.value);
    }

    #[test]
    fn bhattacharyya_objective_optimum_at_one_half() {
        let (_, s) = hamming();
        for ch in [ChannelModel::bsc(0.07).unwrap(), ChannelModel::biawgn(2.0, 4.0 / 7.0).unwrap()] {
            let space = ParamBox::new(TiltFamily::Uniform, &ch).unwrap().fix(1, 1.0);
            let opt = optimize_bound(|p| ln_ds2(&s, &ch, p), &space, &MultiStart::default()).unwrap();
            let sweep = golden_section(
                |l| ln_ds2(&s, &ch, &BoundParams { lambda: l, ..BoundParams::bhattacharyya() }).unwrap(),
                0.0,
                2.0,
                1e-10,
                300,
            );
            assert!((sweep.0 - 0.5).abs() < 1e-5);
            assert!((opt.params.lambda - 0.5).abs() < 1e-4);
        }
    }

    #[test]
    fn optimizer_is_deterministic_and_improves() {
        let (_, s) = hamming();
        let ch = ChannelModel::biawgn(3.0, 4.0 / 7.0).unwrap();
        let a = optimize_ds2(&s, &ch, TiltFamily::Gaussian, &MultiStart::default()).unwrap();
        let b = optimize_ds2(&s, &ch, TiltFamily::Gaussian, &MultiStart::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.value <= bhattacharyya_bound(&s, &ch));
        let fixed = BoundParams { lambda: 0.4, rho: 0.8, tilt: TiltingMeasure::Gaussian { c: 0.5, e: -0.1 } };
        assert!(a.value <= ds2_bound(&s, &ch, &fixed).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn jensen_ordering(lambda in 0.0f64..2.0, rho in 0.02f64..1.0, s in -1.5f64..1.5, p in 0.005f64..0.45) {
            let (code, _) = hamming();
            let ch = ChannelModel::bsc(p).unwrap();
            let params = BoundParams { lambda, rho, tilt: TiltingMeasure::Llr { s } };
            let g65 = gallager65_bound(&code, &ch, &params).unwrap();
            let ds2 = ds2_by_enumeration(&code, &ch, &params).unwrap();
            prop_assert!(g65 <= ds2 * (1.0 + 1e-12));
        }
    }
}
