//! Region-decomposition upper bounds on the BIAWGN channel:
//! `P(error) <= P(error, r in R) + P(r not in R)` with the first term bounded
//! by the union bound. Regions are the whole space (union bound), a sphere
//! possibly shifted along the signal axis, and a circular cone around the
//! transmitted signal (tangential-sphere bound).
//!
//! Coordinates: unit noise variance, transmitted point `a0 (1, ..., 1)`, and
//! `z1` the noise component along the axis pointing from the transmitted
//! point toward the origin. A codeword of weight `d` is preferred over the
//! transmitted one when the noise projection onto its unit direction `e_d`
//! exceeds `sqrt(d) a0`; `e_d` makes the angle `acos(sqrt(d/n))` with the axis.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::codebook::{DistanceSpectrum, LinearCode};
use crate::error::{Error, Result};
use crate::optimize::{coordinate_descent, golden_section, Interval, MultiStart};
use crate::quad::{integrate, Integral, Tolerance};
use crate::sampling::run_blocks;
use crate::special::{ln_normal_pdf, ln_q, ncx2_cdf, ncx2_sf, normal_pdf, q_function, ChiSquareCdf, LogSum};
use crate::union::union_bound;

use rand::Rng;
use rand_distr::StandardNormal;

/// Region of the received space treated with the union bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    WholeSpace,
    /// Ball of radius `radius` centred `shift` units from the transmitted
    /// point toward the origin.
    Sphere { radius: f64, shift: f64 },
    /// Cone with apex at the origin and axis through the transmitted point.
    Cone { theta: f64 },
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::WholeSpace => Ok(()),
            Region::Sphere { radius, shift } if radius > 0.0 && shift.is_finite() => Ok(()),
            Region::Cone { theta } if theta > 0.0 && theta < std::f64::consts::FRAC_PI_2 => Ok(()),
            other => Err(Error::invalid(format!("invalid region {other:?}"))),
        }
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

const MAX_REGION_MC_K: usize = 16;

/// Monte-Carlo evaluation of the region bound. Each sample inside the region
/// contributes the number of codewords it prefers over the transmitted one
/// (union-bound multiplicity); each sample outside contributes 1.
pub fn region_bound_mc(code: &LinearCode, channel: &ChannelModel, region: Region, samples: u64, seed: u64) -> Result<McEstimate> {
    region.validate()?;
    if code.k() > MAX_REGION_MC_K {
        return Err(Error::SizeGuard {
            what: "dimension k",
            value: code.k(),
            limit: MAX_REGION_MC_K,
        });
    }
    if samples == 0 {
        return Err(Error::invalid("Monte-Carlo needs at least one sample"));
    }
    let a0 = channel.amplitude()?;
    let words = code.codewords_u64()?;
    let n = code.n();
    let sqrt_n = (n as f64).sqrt();
    let per_block = run_blocks(samples, seed, |rng, count| {
        let mut y = vec![0.0f64; n];
        let (mut sum, mut sum_sq) = (0u64, 0u64);
        for _ in 0..count {
            for v in y.iter_mut() {
                *v = a0 + rng.sample::<f64, _>(StandardNormal);
            }
            let inside = match region {
                Region::WholeSpace => true,
                Region::Sphere { radius, shift } => {
                    // Centre at a0 - shift / sqrt(n) per coordinate.
                    let c = a0 - shift / sqrt_n;
                    y.iter().map(|v| (v - c) * (v - c)).sum::<f64>() <= radius * radius
                }
                Region::Cone { theta } => {
                    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                    y.iter().sum::<f64>() >= theta.cos() * norm * sqrt_n
                }
            };
            let x = if inside {
                words[1..]
                    .iter()
                    .filter(|&&c| {
                        let mut bits = c;
                        let mut s = 0.0;
                        while bits != 0 {
                            s += y[bits.trailing_zeros() as usize];
                            bits &= bits - 1;
                        }
                        s < 0.0
                    })
                    .count() as u64
            } else {
                1
            };
            sum += x;
            sum_sq += x * x;
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = per_block.iter().fold((0u64, 0u64), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = sum as f64 / m;
    let var = (sum_sq as f64 / m - mean * mean).max(0.0);
    Ok(McEstimate {
        estimate: mean,
        std_error: (var / m).sqrt(),
        samples,
        seed,
    })
}

/// A geometric bound value with the region that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricBound {
    /// Bound on the block error probability (not clipped at 1).
    pub value: f64,
    pub region: Region,
    /// Estimated absolute quadrature error of the outer integral.
    pub abs_error: f64,
    /// True when the union bound (whole space) beat every finite region.
    pub union_fallback: bool,
}

const Z1_LIMIT: f64 = 10.0;
const PRUNE_NATS: f64 = 45.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Precision {
    /// Used while bracketing the optimizer.
    Coarse,
    Fine,
}

impl Precision {
    /// `(outer, inner)` relative tolerances.
    fn tolerances(self) -> (Tolerance, Tolerance) {
        let (outer, inner) = match self {
            Precision::Coarse => (1e-5, 1e-7),
            Precision::Fine => (1e-8, 1e-10),
        };
        let tol = |rel, max_intervals| Tolerance {
            abs: 1e-300,
            rel,
            max_intervals,
        };
        (tol(outer, 400), tol(inner, 200))
    }
}

fn check_biawgn(spectrum: &DistanceSpectrum, channel: &ChannelModel) -> Result<f64> {
    if spectrum.n() < 3 {
        return Err(Error::invalid("geometric bounds need block length n >= 3"));
    }
    channel.amplitude()
}

/// Integrates `f(z) phi(z)` for `z >= lo` up to `hi`, substituting
/// `z = lo + s` so the Gaussian factor stays relatively accurate far in the tail.
fn gaussian_tail_integral(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    // Used for the shifted sphere, whose per-weight integrands differ.
    if hi <= lo {
        return 0.0;
    }
    // phi(z) < e^{-40} phi(max(lo, 0)) once z exceeds sqrt(max(lo, 0)^2 + 80).
    let span = (hi - lo).min(-lo + (lo.max(0.0).powi(2) + 80.0).sqrt());
    integrate(|s| normal_pdf(lo + s) * f(lo + s), 0.0, span, Precision::Fine.tolerances().1).value
}

/// `ln sum_d A_d int_{lo_d}^{hi} g(z) dz` for terms `(ln A_d, lo_d)` that share
/// the integrand `g <= phi` and the upper limit. `g` must be non-increasing on
/// `[min lo_d, hi]` with `min lo_d >= 0`. Terms are visited in decreasing
/// `lo_d`, so each piece of the integral is computed once. Returns early once
/// the sum reaches `stop_at`.
fn shared_integrand_sum(mut terms: Vec<(f64, f64)>, hi: f64, ln_g: impl Fn(f64) -> f64, tol: Tolerance, stop_at: f64) -> f64 {
    terms.retain(|t| t.1 < hi);
    // The integral is at most Q(lo_d), which bounds each term for pruning.
    let top = terms.iter().map(|t| t.0 + ln_q(t.1)).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    terms.retain(|t| t.0 + ln_q(t.1) > top - PRUNE_NATS);
    terms.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut upper = hi;
    let mut ln_p = LogSum::new();
    let mut acc = LogSum::new();
    for (ln_a, lo) in terms {
        // Beyond sqrt(lo^2 + 80) the Gaussian factor is below e^-40 of its value at lo.
        let top = upper.min((lo * lo + 80.0).sqrt());
        if lo < top {
            // Scaling by the integrand's maximum avoids underflow.
            let scale = ln_g(lo);
            if scale.is_finite() {
                let piece = integrate(|z| (ln_g(z) - scale).exp(), lo, top, tol).value;
                if piece > 0.0 {
                    ln_p.add(scale + piece.ln());
                }
            }
        }
        upper = upper.min(lo);
        let lp = ln_p.value();
        if lp.is_finite() {
            acc.add(ln_a + lp);
        }
        if acc.value() >= stop_at {
            break;
        }
    }
    acc.value()
}

struct TsbTerms {
    sqrt_n_a0: f64,
    // (ln A_d, sqrt(d / (n - d))) for d < n
    lines: Vec<(f64, f64)>,
    chi_n1: ChiSquareCdf,
    chi_n2: ChiSquareCdf,
}

impl TsbTerms {
    fn new(spectrum: &DistanceSpectrum, a0: f64) -> Self {
        let n = spectrum.n();
        let lines = spectrum
            .nonzero_terms()
            .filter(|&(d, _)| d < n)
            .map(|(d, a)| (a.ln(), (d as f64 / (n - d) as f64).sqrt()))
            .collect();
        TsbTerms {
            sqrt_n_a0: (n as f64).sqrt() * a0,
            lines,
            chi_n1: ChiSquareCdf::new(n - 1),
            chi_n2: ChiSquareCdf::new(n - 2),
        }
    }

    /// Conditional bound given `z1`: union term inside the cone slice plus
    /// the probability of leaving it, optionally clipped at 1.
    ///
    /// Every weight shares the integrand `phi(z2) F(r^2 - z2^2)` and the upper
    /// limit `r`; only the lower limit `beta_d` differs.
    fn slice(&self, z1: f64, tan_theta: f64, clip: bool, tol: Tolerance) -> f64 {
        let s = self.sqrt_n_a0 - z1;
        let r = s * tan_theta;
        let r2 = r * r;
        let inside = self.chi_n1.cdf(r2);
        let outside = 1.0 - inside;
        let terms = self
            .lines
            .iter()
            .filter(|&&(_, ratio)| ratio < tan_theta)
            .map(|&(ln_a, ratio)| (ln_a, s * ratio))
            .collect();
        let ln_g = |z: f64| ln_normal_pdf(z) + self.chi_n2.ln_cdf(r2 - z * z);
        let stop_at = if clip { inside.ln() } else { f64::INFINITY };
        let ln_union = shared_integrand_sum(terms, r, ln_g, tol, stop_at);
        if ln_union >= stop_at {
            return 1.0;
        }
        let union_part = ln_union.exp();
        if clip {
            (union_part + outside).min(1.0)
        } else {
            union_part + outside
        }
    }

    fn bound(&self, theta: f64, clip: bool, precision: Precision) -> Integral {
        let tan_theta = theta.tan();
        let (outer, inner) = precision.tolerances();
        let upper = self.sqrt_n_a0.min(Z1_LIMIT);
        let mut r = integrate(
            |z1| normal_pdf(z1) * self.slice(z1, tan_theta, clip, inner),
            -Z1_LIMIT,
            upper,
            outer,
        );
        // Beyond the integration window the slice bound is at most 1, except
        // when the window ends at the apex, where Q(sqrt(n) a0) is exact.
        r.value += q_function(Z1_LIMIT) + q_function(upper);
        r
    }
}

/// Options for the tangential-sphere bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsbOptions {
    /// Clip the conditional bound of every `z1` slice at 1.
    pub clip: bool,
    /// Coarse grid size for the half-angle search.
    pub grid: usize,
}

impl Default for TsbOptions {
    fn default() -> Self {
        TsbOptions { clip: true, grid: 64 }
    }
}

/// Tangential-sphere bound at half-angle `theta`, or optimized over `theta`
/// when `None`. The optimized value never exceeds the union bound, since the
/// whole space is admitted as the limit `theta -> pi/2`.
pub fn tsb_quadrature(spectrum: &DistanceSpectrum, channel: &ChannelModel, theta: Option<f64>, opts: TsbOptions) -> Result<GeometricBound> {
    let a0 = check_biawgn(spectrum, channel)?;
    let terms = TsbTerms::new(spectrum, a0);
    if let Some(theta) = theta {
        Region::Cone { theta }.validate()?;
        let r = terms.bound(theta, opts.clip, Precision::Fine);
        return finish(r, Region::Cone { theta });
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let step = half_pi / opts.grid as f64;
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 0..opts.grid {
        let theta = (i as f64 + 0.5) * step;
        let v = terms.bound(theta, opts.clip, Precision::Coarse).value;
        if v < best.1 {
            best = (theta, v);
        }
    }
    let lo = (best.0 - step).max(1e-6);
    let hi = (best.0 + step).min(half_pi - 1e-9);
    let (theta, _) = golden_section(|t| terms.bound(t, opts.clip, Precision::Coarse).value, lo, hi, 1e-6, 100);
    let refined = terms.bound(theta, opts.clip, Precision::Fine);
    let gridded = terms.bound(best.0, opts.clip, Precision::Fine);
    let (theta, r) = if refined.value <= gridded.value { (theta, refined) } else { (best.0, gridded) };
    let candidate = finish(r, Region::Cone { theta })?;
    with_union_fallback(candidate, spectrum, channel)
}

fn finish(r: Integral, region: Region) -> Result<GeometricBound> {
    if !r.value.is_finite() {
        return Err(Error::Numeric(format!("bound for {region:?} is not finite")));
    }
    if !r.converged && r.abs_error > 1e-3 * r.value {
        return Err(Error::Numeric(format!(
            "quadrature for {region:?} reached only {:.3e} absolute error on {:.3e}",
            r.abs_error, r.value
        )));
    }
    Ok(GeometricBound {
        value: r.value,
        region,
        abs_error: r.abs_error,
        union_fallback: false,
    })
}

fn with_union_fallback(b: GeometricBound, spectrum: &DistanceSpectrum, channel: &ChannelModel) -> Result<GeometricBound> {
    let union = union_bound(spectrum, channel)?;
    Ok(if union < b.value {
        GeometricBound {
            value: union,
            region: Region::WholeSpace,
            abs_error: 0.0,
            union_fallback: true,
        }
    } else {
        b
    })
}

/// Sphere bound at a fixed radius and centre shift (toward the origin).
pub fn sphere_value(spectrum: &DistanceSpectrum, channel: &ChannelModel, radius: f64, shift: f64) -> Result<f64> {
    let a0 = check_biawgn(spectrum, channel)?;
    Region::Sphere { radius, shift }.validate()?;
    Ok(sphere_eval(spectrum, a0, radius, shift))
}

fn sphere_eval(spectrum: &DistanceSpectrum, a0: f64, radius: f64, shift: f64) -> f64 {
    let n = spectrum.n();
    let nf = n as f64;
    let r2 = radius * radius;
    let central = shift == 0.0;
    let chi = ChiSquareCdf::new(n - 1);
    let outside = if central { chi_sf_n(n, r2) } else { ncx2_sf(nf, shift * shift, r2) };
    let tol = Precision::Fine.tolerances().1;
    if central {
        let terms = spectrum
            .nonzero_terms()
            .map(|(d, a)| (a.ln(), (d as f64).sqrt() * a0))
            .collect();
        let ln_g = |t: f64| ln_normal_pdf(t) + chi.ln_cdf(r2 - t * t);
        return shared_integrand_sum(terms, radius, ln_g, tol, f64::INFINITY).exp() + outside;
    }
    let mut acc = LogSum::new();
    let terms: Vec<(f64, f64, f64, f64)> = spectrum
        .nonzero_terms()
        .map(|(d, a)| {
            let frac = d as f64 / nf;
            let threshold = (d as f64).sqrt() * a0;
            (a.ln(), threshold, shift * frac.sqrt(), shift * shift * (1.0 - frac))
        })
        .collect();
    let top = terms.iter().map(|t| t.0 + ln_q(t.1)).fold(f64::NEG_INFINITY, f64::max);
    for (ln_a, threshold, c_t, lambda) in terms {
        if ln_a + ln_q(threshold) < top - PRUNE_NATS {
            continue;
        }
        let p = gaussian_tail_integral(threshold, c_t + radius, |t| ncx2_cdf(nf - 1.0, lambda, r2 - (t - c_t) * (t - c_t)));
        if p > 0.0 {
            acc.add(ln_a + p.ln());
        }
    }
    acc.value().exp() + outside
}

fn chi_sf_n(n: usize, x: f64) -> f64 {
    crate::special::ln_chi2_sf(n as f64, x).exp()
}

/// Sphere bound optimized over the radius (and the centre shift when
/// `shifted`), never exceeding the union bound.
pub fn sphere_bound(spectrum: &DistanceSpectrum, channel: &ChannelModel, shifted: bool) -> Result<GeometricBound> {
    let a0 = check_biawgn(spectrum, channel)?;
    let sqrt_n = (spectrum.n() as f64).sqrt();
    // Radius in units of sqrt(n); shift in units of the signal norm sqrt(n) a0.
    let radius_box = Interval::new(0.2, 4.0);
    let eval = |x: &[f64]| {
        let shift = if shifted { x[1] * sqrt_n * a0 } else { 0.0 };
        let v = sphere_eval(spectrum, a0, x[0] * sqrt_n, shift);
        if v.is_finite() {
            v.ln()
        } else {
            f64::INFINITY
        }
    };
    let (x, value) = if shifted {
        let opts = MultiStart {
            random_starts: 3,
            sweeps: 6,
            line_tol: 1e-6,
            ..Default::default()
        };
        let best = coordinate_descent(eval, &[radius_box, Interval::new(-0.5, 1.0)], &[vec![1.0, 0.0]], &opts)
            .ok_or_else(|| Error::Numeric("sphere bound diverged at every start".into()))?;
        (best.x, best.value)
    } else {
        let (r, v) = crate::optimize::grid_then_golden(|r| eval(&[r]), radius_box.lo, radius_box.hi, 64, 1e-6);
        (vec![r], v)
    };
    let region = Region::Sphere {
        radius: x[0] * sqrt_n,
        shift: if shifted { x[1] * sqrt_n * a0 } else { 0.0 },
    };
    let candidate = GeometricBound {
        value: value.exp(),
        region,
        abs_error: 0.0,
        union_fallback: false,
    };
    with_union_fallback(candidate, spectrum, channel)
}
