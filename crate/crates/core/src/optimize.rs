//! Derivative-free minimizers used to tune bound parameters: golden-section
//! line search, a grid-bracketed variant, and multi-start coordinate descent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`. Returns `(x, f(x))`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if lt(f1, f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if lt(f1, f2) {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

// NaN-aware ordering: NaN never wins.
fn lt(a: f64, b: f64) -> bool {
    match (a.is_nan(), b.is_nan()) {
        (true, _) => false,
        (false, true) => true,
        _ => a < b,
    }
}

/// Evaluates `f` on a uniform grid of `grid` points over `[a, b]`, then refines
/// the best cell by golden-section search. Unimodality is assumed inside the
/// bracketing cell only.
pub fn grid_then_golden<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, grid: usize, tol: f64) -> (f64, f64) {
    assert!(grid >= 3);
    let step = (b - a) / (grid - 1) as f64;
    let mut best = (a, f64::NAN);
    let mut best_i = 0;
    for i in 0..grid {
        let x = a + i as f64 * step;
        let v = f(x);
        if lt(v, best.1) {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = a + best_i.saturating_sub(1) as f64 * step;
    let hi = a + (best_i + 1).min(grid - 1) as f64 * step;
    let refined = golden_section(&mut f, lo, hi, tol, 200);
    if lt(refined.1, best.1) {
        refined
    } else {
        best
    }
}

/// Box constraint for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi);
        Interval { lo, hi }
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

#[derive(Debug, Clone)]
pub struct MultiStart {
    pub random_starts: usize,
    pub sweeps: usize,
    pub line_tol: f64,
    pub seed: u64,
}

impl Default for MultiStart {
    fn default() -> Self {
        MultiStart {
            random_starts: 5,
            sweeps: 12,
            line_tol: 1e-7,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
}

/// Multi-start coordinate descent with golden-section line searches.
///
/// Every point in `seeds` is used as a start, followed by `random_starts`
/// uniform draws from the box. Non-finite objective values are treated as
/// infeasible. Returns `None` when no start ever produced a finite value.
pub fn coordinate_descent<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    bounds: &[Interval],
    seeds: &[Vec<f64>],
    opts: &MultiStart,
) -> Option<Minimum> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<Vec<f64>> = seeds
        .iter()
        .map(|s| s.iter().zip(bounds).map(|(x, b)| b.clamp(*x)).collect())
        .collect();
    for _ in 0..opts.random_starts {
        starts.push(bounds.iter().map(|b| rng.random_range(b.lo..=b.hi)).collect());
    }

    let mut best: Option<Minimum> = None;
    for start in starts {
        let mut x = start;
        let mut fx = f(&x);
        if !fx.is_finite() {
            continue;
        }
        for _ in 0..opts.sweeps {
            let before = fx;
            for i in 0..bounds.len() {
                if bounds[i].lo == bounds[i].hi {
                    continue;
                }
                let mut probe = x.clone();
                let (xi, fi) = golden_section(
                    |t| {
                        probe[i] = t;
                        let v = f(&probe);
                        if v.is_finite() {
                            v
                        } else {
                            f64::INFINITY
                        }
                    },
                    bounds[i].lo,
                    bounds[i].hi,
                    opts.line_tol * (bounds[i].hi - bounds[i].lo).max(1.0),
                    200,
                );
                if fi < fx {
                    x[i] = xi;
                    fx = fi;
                }
            }
            if before - fx <= 1e-12 * fx.abs().max(1e-300) {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| fx < b.value) {
            best = Some(Minimum { x, value: fx });
        }
    }
    best
}
