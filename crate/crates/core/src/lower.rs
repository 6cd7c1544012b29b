//! Lower bounds on the probability of a union of events: de Caen's bound and
//! the weighted Cauchy-Schwarz bound
//! `P(U A_i) >= sum_i (sum_{x in A_i} p(x) m_i(x))^2 / sum_j sum_{x in A_i & A_j} p(x) m_i(x)^2`,
//! over finite event systems and over the Gaussian space of ML decoding.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{bivariate_orthant, pair_correlation, ChannelModel};
use crate::codebook::LinearCode;
use crate::error::{Error, Result};
use crate::optimize::golden_section;
use crate::special::{ln_q, LogSum};

/// Finite probability space with a family of events given by atom lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSystem {
    atoms: Vec<f64>,
    events: Vec<Vec<usize>>,
}

impl EventSystem {
    pub fn new(atoms: Vec<f64>, events: Vec<Vec<usize>>) -> Result<Self> {
        if atoms.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::invalid("atom probabilities must be finite and non-negative"));
        }
        let total: f64 = atoms.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("atom probabilities sum to {total}, not 1")));
        }
        let mut events = events;
        for e in &mut events {
            if let Some(&x) = e.iter().find(|&&x| x >= atoms.len()) {
                return Err(Error::invalid(format!("event refers to atom {x} of {}", atoms.len())));
            }
            e.sort_unstable();
            e.dedup();
        }
        if events.is_empty() {
            return Err(Error::invalid("event system has no events"));
        }
        Ok(EventSystem { atoms, events })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            atoms: Vec<f64>,
            events: Vec<Vec<usize>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(format!("event system: {e}")))?;
        EventSystem::new(raw.atoms, raw.events)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("event system serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        EventSystem::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn events(&self) -> &[Vec<usize>] {
        &self.events
    }

    /// Number of events containing each atom.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.atoms.len()];
        for e in &self.events {
            for &x in e {
                deg[x] += 1;
            }
        }
        deg
    }

    pub fn event_probability(&self, i: usize) -> f64 {
        self.events[i].iter().map(|&x| self.atoms[x]).sum()
    }

    pub fn intersection_probability(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.events[i], &self.events[j]);
        let (mut u, mut v, mut p) = (0, 0, 0.0);
        while u < a.len() && v < b.len() {
            match a[u].cmp(&b[v]) {
                std::cmp::Ordering::Less => u += 1,
                std::cmp::Ordering::Greater => v += 1,
                std::cmp::Ordering::Equal => {
                    p += self.atoms[a[u]];
                    u += 1;
                    v += 1;
                }
            }
        }
        p
    }

    /// Exact probability of the union, by marking covered atoms.
    pub fn union_probability(&self) -> f64 {
        let mut covered = vec![false; self.atoms.len()];
        for e in &self.events {
            for &x in e {
                covered[x] = true;
            }
        }
        covered.iter().zip(&self.atoms).filter(|(c, _)| **c).map(|(_, p)| p).sum()
    }
}

/// Weighting functions `m_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightingFamily {
    /// `m_i = 1`, which gives de Caen's bound.
    Unit,
    /// `m_i(x) = 1 / deg(x)`, for which the bound is exact.
    InverseDegree,
    /// Arbitrary weights indexed `[event][atom]`.
    PerEvent { weights: Vec<Vec<f64>> },
    /// Gaussian-space family `m_i(r) = exp(-a |r - s_i|^2)`.
    Exponential { a: f64 },
}

/// A lower bound together with any degenerate-input warnings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    pub warnings: Vec<String>,
}

/// de Caen's bound `sum_i P(A_i)^2 / sum_j P(A_i & A_j)`.
pub fn decaen_bound(events: &EventSystem) -> f64 {
    let n = events.events().len();
    (0..n)
        .map(|i| {
            let p = events.event_probability(i);
            if p == 0.0 {
                return 0.0;
            }
            let den: f64 = (0..n).map(|j| events.intersection_probability(i, j)).sum();
            p * p / den
        })
        .sum()
}

/// Weighted bound for a finite event system.
pub fn cohen_merhav_bound(events: &EventSystem, weights: &WeightingFamily) -> Result<LowerBound> {
    let deg = events.degrees();
    let atoms = events.atoms();
    let weight = |i: usize, x: usize| -> f64 {
        match weights {
            WeightingFamily::Unit => 1.0,
            WeightingFamily::InverseDegree => 1.0 / deg[x] as f64,
            WeightingFamily::PerEvent { weights } => weights[i][x],
            WeightingFamily::Exponential { .. } => unreachable!("rejected above"),
        }
    };
    match weights {
        WeightingFamily::Exponential { .. } => {
            return Err(Error::invalid("the exponential family applies to Gaussian-space bounds only"));
        }
        WeightingFamily::PerEvent { weights } => {
            if weights.len() != events.events().len() || weights.iter().any(|w| w.len() != atoms.len()) {
                return Err(Error::invalid("per-event weights must be an events x atoms table"));
            }
            if weights.iter().flatten().any(|w| !(w.is_finite() && *w >= 0.0)) {
                return Err(Error::invalid("weights must be finite and non-negative"));
            }
        }
        _ => {}
    }
    let mut value = 0.0;
    let mut warnings = Vec::new();
    for (i, event) in events.events().iter().enumerate() {
        let num: f64 = event.iter().map(|&x| atoms[x] * weight(i, x)).sum();
        // sum_j sum_{x in A_i & A_j} = sum_{x in A_i} deg(x).
        let den: f64 = event.iter().map(|&x| atoms[x] * weight(i, x).powi(2) * deg[x] as f64).sum();
        if den == 0.0 {
            if event.iter().any(|&x| atoms[x] > 0.0) {
                warnings.push(format!("event {i} has positive probability but zero weight; it contributes 0"));
            }
            continue;
        }
        value += num * num / den;
    }
    Ok(LowerBound { value, warnings })
}

/// Largest exponential weight parameter searched: the tilted noise variance
/// `1 / (1 + 2a)` is then 100 times smaller.
pub const MAX_TILT: f64 = 49.5;

const MAX_LOWER_K: usize = 16;

/// Pair structure of a code's nonzero codewords: for each distinct profile
/// `{(w_j, overlap_ij) -> count}` of codeword `i` (weight `w_i`), how many `i` share it.
// `(w_j, overlap, count)` triples, sorted.
type Histogram = Vec<(usize, usize, u64)>;

#[derive(Debug, Clone)]
pub struct PairProfile {
    n: usize,
    profiles: Vec<(usize, Histogram, u64)>,
}

impl PairProfile {
    pub fn new(code: &LinearCode) -> Result<Self> {
        if code.k() > MAX_LOWER_K {
            return Err(Error::SizeGuard {
                what: "dimension k",
                value: code.k(),
                limit: MAX_LOWER_K,
            });
        }
        let words = code.codewords_u64()?;
        let nonzero: Vec<u64> = words.into_iter().filter(|&c| c != 0).collect();
        let mut by_profile: HashMap<(usize, Histogram), u64> = HashMap::new();
        for &ci in &nonzero {
            let mut hist: HashMap<(usize, usize), u64> = HashMap::new();
            for &cj in &nonzero {
                *hist.entry((cj.count_ones() as usize, (ci & cj).count_ones() as usize)).or_default() += 1;
            }
            let mut hist: Vec<(usize, usize, u64)> = hist.into_iter().map(|((w, o), c)| (w, o, c)).collect();
            hist.sort_unstable();
            *by_profile.entry((ci.count_ones() as usize, hist)).or_default() += 1;
        }
        let mut profiles: Vec<_> = by_profile.into_iter().map(|((w, h), c)| (w, h, c)).collect();
        profiles.sort_unstable();
        Ok(PairProfile { n: code.n(), profiles })
    }
}

/// `ln E[exp(-b |r - s_i|^2) 1{A_i and A_j}]` with `r ~ N(s_0, I)`.
///
/// The weight turns the Gaussian into one with variance `1 / (1 + 2b)` centred
/// at `(s_0 + 2b s_i) / (1 + 2b)`.
fn ln_tilted_joint(n: usize, a0: f64, b: f64, w_i: usize, w_j: usize, overlap: usize) -> Result<f64> {
    let g = 1.0 + 2.0 * b;
    let shrink = (1.0 - 2.0 * b) / g;
    let ln_scale = -0.5 * n as f64 * g.ln() - b / g * 4.0 * a0 * a0 * w_i as f64;
    let h_i = (w_i as f64).sqrt() * a0 * shrink * g.sqrt();
    if w_i == w_j && overlap == w_i {
        return Ok(ln_scale + ln_q(h_i));
    }
    let mean_j = a0 * (overlap as f64 * shrink + (w_j - overlap) as f64);
    let h_j = mean_j * g.sqrt() / (w_j as f64).sqrt();
    let rho = pair_correlation(w_i, w_j, w_i + w_j - 2 * overlap)?;
    let p = bivariate_orthant(h_i, h_j, rho);
    Ok(ln_scale + p.ln())
}

/// Weighted lower bound on the ML block error probability of `code` on the
/// BIAWGN channel with the exponential family at parameter `a`.
pub fn ml_lower_bound(code: &LinearCode, channel: &ChannelModel, a: f64) -> Result<f64> {
    ml_lower_bound_profiled(&PairProfile::new(code)?, channel, a)
}

pub fn ml_lower_bound_profiled(profile: &PairProfile, channel: &ChannelModel, a: f64) -> Result<f64> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::invalid(format!("exponential weight parameter {a} must be finite and >= 0")));
    }
    let a0 = channel.amplitude()?;
    let n = profile.n;
    let mut cache: HashMap<(usize, usize, usize), f64> = HashMap::new();
    let mut total = LogSum::new();
    for (w_i, hist, count) in &profile.profiles {
        let ln_num = ln_tilted_joint(n, a0, a, *w_i, *w_i, *w_i)?;
        let mut den = LogSum::new();
        for &(w_j, overlap, c) in hist {
            let key = (*w_i, w_j, overlap);
            let v = match cache.get(&key) {
                Some(v) => *v,
                None => {
                    let v = ln_tilted_joint(n, a0, 2.0 * a, *w_i, w_j, overlap)?;
                    cache.insert(key, v);
                    v
                }
            };
            den.add((c as f64).ln() + v);
        }
        let den = den.value();
        if den.is_finite() && ln_num.is_finite() {
            total.add((*count as f64).ln() + 2.0 * ln_num - den);
        }
    }
    let value = total.value().exp();
    if !value.is_finite() {
        return Err(Error::Numeric(format!("lower bound is not finite at a = {a}")));
    }
    Ok(value)
}

/// Lower bound maximized over the exponential weight parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizedLower {
    pub value: f64,
    pub a: f64,
    /// Value at `a = 0` (de Caen).
    pub decaen: f64,
}

/// Maximizes [`ml_lower_bound`] over `a in [0, MAX_TILT]`, searching
/// `ln(1 + a)` on a grid refined by golden section; `a = 0` is always a candidate.
pub fn optimize_ml_lower_bound(code: &LinearCode, channel: &ChannelModel) -> Result<OptimizedLower> {
    let profile = PairProfile::new(code)?;
    let decaen = ml_lower_bound_profiled(&profile, channel, 0.0)?;
    let eval = |u: f64| ml_lower_bound_profiled(&profile, channel, u.exp_m1()).unwrap_or(0.0);
    let hi = MAX_TILT.ln_1p();
    let grid = 32;
    let step = hi / grid as f64;
    let mut best = (0.0, decaen);
    for i in 1..=grid {
        let u = i as f64 * step;
        let v = eval(u);
        if v > best.1 {
            best = (u, v);
        }
    }
    if best.0 > 0.0 {
        let (u, neg) = golden_section(|u| -eval(u), (best.0 - step).max(0.0), (best.0 + step).min(hi), 1e-8, 200);
        if -neg > best.1 {
            best = (u, -neg);
        }
    }
    Ok(OptimizedLower {
        value: best.1,
        a: best.0.exp_m1(),
        decaen,
    })
}

/// de Caen's ML lower bound built directly from pairwise and joint pairwise
/// error probabilities.
pub fn decaen_ml_bound(code: &LinearCode, channel: &ChannelModel) -> Result<f64> {
    if code.k() > MAX_LOWER_K {
        return Err(Error::SizeGuard {
            what: "dimension k",
            value: code.k(),
            limit: MAX_LOWER_K,
        });
    }
    let words: Vec<u64> = code.codewords_u64()?.into_iter().filter(|&c| c != 0).collect();
    let mut joint: HashMap<(usize, usize, usize), f64> = HashMap::new();
    let mut value = 0.0;
    for &ci in &words {
        let w_i = ci.count_ones() as usize;
        let p = channel.pairwise_error(w_i)?;
        let mut den = 0.0;
        for &cj in &words {
            let key = (w_i, cj.count_ones() as usize, (ci ^ cj).count_ones() as usize);
            den += match joint.get(&key) {
                Some(v) => *v,
                None => {
                    let v = if ci == cj { p } else { channel.joint_pairwise_error(key.0, key.1, key.2)? };
                    joint.insert(key, v);
                    v
                }
            };
        }
        if den > 0.0 {
            value += p * p / den;
        }
    }
    Ok(value)
}
