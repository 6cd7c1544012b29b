//! Scalar special functions shared by every bound: Gaussian tails, regularized
//! incomplete gamma functions in the log domain, chi-square laws and a
//! streaming log-sum-exp accumulator.

use libm::{erfc, lgamma as ln_gamma};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Gaussian tail `Q(x) = P(Z > x)` for a standard normal `Z`.
pub fn q_function(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `ln Q(x)`, accurate far into the upper tail where `Q` underflows.
pub fn ln_q(x: f64) -> f64 {
    if x < 20.0 {
        return q_function(x).ln();
    }
    // Q(x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...)))), evaluated bottom up.
    let mut tail = x;
    for k in (1..=80).rev() {
        tail = x + k as f64 / tail;
    }
    ln_normal_pdf(x) - tail.ln()
}

pub fn ln_normal_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

pub fn normal_pdf(x: f64) -> f64 {
    ln_normal_pdf(x).exp()
}

/// Natural log of the regularized lower incomplete gamma function `P(a, x)`.
pub fn ln_gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x < a + 1.0 {
        ln_p_series(a, x)
    } else {
        let lq = ln_q_fraction(a, x);
        (-lq.exp()).ln_1p()
    }
}

/// Natural log of the regularized upper incomplete gamma function `Q(a, x)`.
pub fn ln_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::NEG_INFINITY;
    }
    if x < a + 1.0 {
        let lp = ln_p_series(a, x);
        (-lp.exp()).ln_1p()
    } else {
        ln_q_fraction(a, x)
    }
}

fn ln_p_series(a: f64, x: f64) -> f64 {
    let mut denom = a;
    let mut term = 1.0;
    let mut sum = 1.0;
    for _ in 0..100_000 {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    a * x.ln() - x - ln_gamma(a + 1.0) + sum.ln()
}

// Modified Lentz evaluation of the continued fraction for Q(a, x), x >= a + 1.
fn ln_q_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    a * x.ln() - x - ln_gamma(a) + h.ln()
}

/// `ln P(chi^2_dof <= x)`.
pub fn ln_chi2_cdf(dof: f64, x: f64) -> f64 {
    if dof == 0.0 {
        return if x >= 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    ln_gamma_p(0.5 * dof, 0.5 * x)
}

/// `ln P(chi^2_dof > x)`.
pub fn ln_chi2_sf(dof: f64, x: f64) -> f64 {
    if dof == 0.0 {
        return if x >= 0.0 { f64::NEG_INFINITY } else { 0.0 };
    }
    ln_gamma_q(0.5 * dof, 0.5 * x)
}

/// Chi-square CDF for a fixed number of degrees of freedom.
///
/// Large degrees of freedom get a cubic Hermite table of `ln F` (slopes from
/// the density), which keeps the inner loops of the geometric bounds cheap.
/// Arguments outside the tabulated window fall back to direct evaluation.
#[derive(Debug, Clone)]
pub struct ChiSquareCdf {
    dof: f64,
    table: Option<HermiteTable>,
}

#[derive(Debug, Clone)]
struct HermiteTable {
    x0: f64,
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

const TABLE_MIN_DOF: usize = 64;

impl ChiSquareCdf {
    pub fn new(dof: usize) -> Self {
        let k = dof as f64;
        let table = (dof >= TABLE_MIN_DOF).then(|| {
            let sigma = (2.0 * k).sqrt();
            let x0 = (k - 30.0 * sigma).max(k / 20.0);
            let x1 = k + 30.0 * sigma;
            let h = sigma / 64.0;
            let count = ((x1 - x0) / h).ceil() as usize + 1;
            let ln_norm = 0.5 * k * std::f64::consts::LN_2 + ln_gamma(0.5 * k);
            let mut values = Vec::with_capacity(count);
            let mut slopes = Vec::with_capacity(count);
            for i in 0..count {
                let x = x0 + i as f64 * h;
                let lf = ln_chi2_cdf(k, x);
                let ln_pdf = (0.5 * k - 1.0) * x.ln() - 0.5 * x - ln_norm;
                values.push(lf);
                slopes.push((ln_pdf - lf).exp());
            }
            HermiteTable {
                x0,
                h,
                values,
                slopes,
            }
        });
        ChiSquareCdf { dof: k, table }
    }

    pub fn dof(&self) -> f64 {
        self.dof
    }

    pub fn ln_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return if self.dof == 0.0 && x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
        }
        if let Some(t) = &self.table {
            let pos = (x - t.x0) / t.h;
            if pos >= 0.0 && pos < (t.values.len() - 1) as f64 {
                let i = pos as usize;
                let s = pos - i as f64;
                let s2 = s * s;
                let s3 = s2 * s;
                return (2.0 * s3 - 3.0 * s2 + 1.0) * t.values[i]
                    + (s3 - 2.0 * s2 + s) * t.h * t.slopes[i]
                    + (-2.0 * s3 + 3.0 * s2) * t.values[i + 1]
                    + (s3 - s2) * t.h * t.slopes[i + 1];
            }
        }
        ln_chi2_cdf(self.dof, x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.ln_cdf(x).exp()
    }

    pub fn sf(&self, x: f64) -> f64 {
        ln_chi2_sf(self.dof, x).exp()
    }
}

fn poisson_ln_weight(mean: f64, j: usize) -> f64 {
    -mean + j as f64 * mean.ln() - ln_gamma(j as f64 + 1.0)
}

// Sums Poisson(mean)-weighted terms outward from the mode until both tails are negligible.
fn poisson_mixture(mean: f64, term: impl Fn(usize) -> f64) -> f64 {
    if mean == 0.0 {
        return term(0);
    }
    let mode = mean.floor() as usize;
    let mut total = 0.0;
    let mut j = mode;
    loop {
        let w = poisson_ln_weight(mean, j).exp();
        total += w * term(j);
        if (w < 1e-18 && j > mode) || j > mode + 100_000 {
            break;
        }
        j += 1;
    }
    let mut j = mode;
    while j > 0 {
        j -= 1;
        let w = poisson_ln_weight(mean, j).exp();
        total += w * term(j);
        if w < 1e-18 {
            break;
        }
    }
    total
}

/// CDF of the noncentral chi-square law with `dof` degrees of freedom and
/// noncentrality `lambda` (sum of squared means).
pub fn ncx2_cdf(dof: f64, lambda: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    poisson_mixture(0.5 * lambda, |j| ln_chi2_cdf(dof + 2.0 * j as f64, x).exp())
}

/// Survival function of the noncentral chi-square law.
pub fn ncx2_sf(dof: f64, lambda: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    poisson_mixture(0.5 * lambda, |j| ln_chi2_sf(dof + 2.0 * j as f64, x).exp())
}

/// Streaming `ln(sum_i exp(v_i))`.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v.is_nan() || v == f64::INFINITY {
            self.max = v;
            self.scaled = 1.0;
            return;
        }
        if v > self.max {
            self.scaled = self.scaled * (self.max - v).exp() + 1.0;
            self.max = v;
        } else {
            self.scaled += (v - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY || self.max.is_nan() || self.max == f64::INFINITY {
            self.max
        } else {
            self.max + self.scaled.ln()
        }
    }
}

impl FromIterator<f64> for LogSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = LogSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}
