//! Input-output weight enumerators of terminated convolutional component
//! codes, and ensemble averages of parallel concatenations under the uniform
//! interleaver.
//!
//! Polynomials are bit masks with bit `i` holding the coefficient of `D^i`.
//! The register holds past values of `a_t = u_t + sum_{i>=1} f_i a_{t-i}`
//! (feedback `f`), and the parity is `sum_i h_i a_{t-i}` (feedforward `h`).
//! Termination drives the register to zero with `nu` extra steps whose
//! inputs are chosen to make `a_t = 0`.

use std::path::{Path, PathBuf};

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::codebook::{DistanceSpectrum, Iowef, WeightConvention};
use crate::error::{Error, Result};
use crate::special::LogSum;

/// Largest interleaver length for exact (integer) enumeration.
pub const MAX_EXACT_LENGTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    /// `nu` tail steps return the encoder to the zero state; the tail inputs
    /// (when systematic) and tail parities are transmitted.
    Terminated,
    /// The trellis simply stops after the information block.
    Truncated,
}

/// Rate-1 recursive (or feedforward) convolutional encoder producing one
/// parity bit per step, optionally with the systematic bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvolutionalComponent {
    feedback: u32,
    feedforward: u32,
    memory: usize,
    systematic: bool,
    termination: Termination,
}

impl ConvolutionalComponent {
    pub fn new(feedback: u32, feedforward: u32, systematic: bool, termination: Termination) -> Result<Self> {
        if feedback & 1 == 0 {
            return Err(Error::invalid("feedback polynomial must have a nonzero constant term"));
        }
        if feedforward == 0 {
            return Err(Error::invalid("feedforward polynomial must be nonzero"));
        }
        let memory = (31 - feedback.leading_zeros()).max(31 - feedforward.leading_zeros()) as usize;
        if memory > 12 {
            return Err(Error::invalid(format!("memory {memory} exceeds the supported maximum of 12")));
        }
        Ok(ConvolutionalComponent {
            feedback,
            feedforward,
            memory,
            systematic,
            termination,
        })
    }

    /// Recursive systematic code `[1, (1 + D^4) / (1 + D + D^2 + D^3 + D^4)]`,
    /// terminated.
    pub fn rsc_37_21() -> Self {
        Self::new(0o37, 0o21, true, Termination::Terminated).expect("valid component")
    }

    /// Accumulator `1 / (1 + D)`, terminated.
    pub fn accumulator() -> Self {
        Self::new(0b11, 0b1, true, Termination::Terminated).expect("valid component")
    }

    pub fn feedback(&self) -> u32 {
        self.feedback
    }

    pub fn feedforward(&self) -> u32 {
        self.feedforward
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn systematic(&self) -> bool {
        self.systematic
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn state_count(&self) -> usize {
        1 << self.memory
    }

    fn tail_steps(&self) -> usize {
        match self.termination {
            Termination::Terminated => self.memory,
            Termination::Truncated => 0,
        }
    }

    /// Bits emitted besides the `n_info` information bits.
    pub fn extra_length(&self, n_info: usize) -> usize {
        let tail = self.tail_steps();
        n_info + tail + if self.systematic { tail } else { 0 }
    }

    /// Length of the component codeword, counting information bits only when
    /// the component is systematic.
    pub fn block_length(&self, n_info: usize) -> usize {
        self.extra_length(n_info) + if self.systematic { n_info } else { 0 }
    }

    // Bit i - 1 of the state holds a_{t-i}.
    fn feedback_sum(&self, state: usize) -> u32 {
        ((state as u32) & (self.feedback >> 1)).count_ones() & 1
    }

    /// `(next state, parity)` for one input bit.
    pub fn step(&self, state: usize, input: u8) -> (usize, u8) {
        let a = (input as u32 ^ self.feedback_sum(state)) & 1;
        let parity = ((a & self.feedforward) ^ ((state as u32) & (self.feedforward >> 1)).count_ones()) & 1;
        let mask = self.state_count() - 1;
        (((state << 1) | a as usize) & mask, parity as u8)
    }

    /// The input that forces the register toward zero from `state`.
    pub fn termination_input(&self, state: usize) -> u8 {
        self.feedback_sum(state) as u8
    }
}

/// Caps on the enumerated weights; `None` means no cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Caps {
    pub w_max: Option<usize>,
    pub j_max: Option<usize>,
}

/// Component enumerator output.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTable {
    pub iowef: Iowef,
    /// Per input weight, the number of inputs whose output weight exceeded
    /// `j_max` (present only under a cap).
    pub overflow: Vec<f64>,
    pub warnings: Vec<String>,
}

trait Count: Copy + Default + PartialEq + std::ops::AddAssign + Send + Sync {
    const ONE: Self;
}

impl Count for f64 {
    const ONE: Self = 1.0;
}

impl Count for u128 {
    const ONE: Self = 1;
}

struct Dp<T> {
    w_dim: usize,
    j_dim: usize,
    cells: Vec<T>,
    overflow: Vec<T>,
}

impl<T: Count> Dp<T> {
    fn new(states: usize, w_dim: usize, j_dim: usize) -> Self {
        Dp {
            w_dim,
            j_dim,
            cells: vec![T::default(); states * w_dim * j_dim],
            overflow: vec![T::default(); states * w_dim],
        }
    }

    /// Zeroes rows `w < w_len`, columns `j < j_len`, the only region a step writes.
    fn clear(&mut self, w_len: usize, j_len: usize) {
        let (w_len, j_len) = (w_len.min(self.w_dim), j_len.min(self.j_dim));
        for s in 0..self.cells.len() / (self.w_dim * self.j_dim) {
            for w in 0..w_len {
                let r = self.row(s, w);
                self.cells[r..r + j_len].fill(T::default());
            }
        }
        self.overflow.fill(T::default());
    }

    fn row(&self, s: usize, w: usize) -> usize {
        (s * self.w_dim + w) * self.j_dim
    }
}

fn enumerate_component<T: Count>(comp: &ConvolutionalComponent, n_info: usize, caps: Caps) -> (Vec<Vec<T>>, Vec<T>) {
    let states = comp.state_count();
    let w_cap = caps.w_max.unwrap_or(n_info).min(n_info);
    let j_full = comp.extra_length(n_info);
    let j_cap = caps.j_max.unwrap_or(j_full).min(j_full);
    let (w_dim, j_dim) = (w_cap + 1, j_cap + 1);
    let mut cur = Dp::<T>::new(states, w_dim, j_dim);
    let mut next = Dp::<T>::new(states, w_dim, j_dim);
    cur.cells[0] = T::ONE;

    let transitions: Vec<[(usize, u8); 2]> = (0..states).map(|s| [comp.step(s, 0), comp.step(s, 1)]).collect();

    let mut live_j = 0usize; // largest output weight reachable so far
    let mut live_w = 0usize;
    for t in 0..n_info {
        next.clear(live_w + 2, live_j + 2);
        let j_len = live_j.min(j_cap) + 1;
        for s in 0..states {
            for w in 0..=live_w.min(w_cap) {
                let src = cur.row(s, w);
                let src_over = cur.overflow[s * w_dim + w];
                for b in 0..2u8 {
                    let w2 = w + b as usize;
                    if w2 > w_cap {
                        continue;
                    }
                    let (s2, p) = transitions[s][b as usize];
                    let dst = next.row(s2, w2);
                    add_shifted(&mut next, &cur, dst, src, j_len, p as usize, s2 * w_dim + w2);
                    next.overflow[s2 * w_dim + w2] += src_over;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        live_j = (t + 1).min(j_cap);
        live_w = (t + 1).min(w_cap);
    }

    for _ in 0..comp.tail_steps() {
        next.clear(live_w + 1, live_j + 3);
        let j_len = live_j.min(j_cap) + 1;
        for s in 0..states {
            let u = comp.termination_input(s);
            let (s2, p) = comp.step(s, u);
            let inc = p as usize + if comp.systematic { u as usize } else { 0 };
            for w in 0..=live_w {
                let src = cur.row(s, w);
                let dst = next.row(s2, w);
                add_shifted(&mut next, &cur, dst, src, j_len, inc, s2 * w_dim + w);
                let over = cur.overflow[s * w_dim + w];
                next.overflow[s2 * w_dim + w] += over;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        live_j = (live_j + 2).min(j_cap);
    }

    let final_states: Vec<usize> = match comp.termination {
        Termination::Terminated => vec![0],
        Termination::Truncated => (0..states).collect(),
    };
    let mut rows = vec![vec![T::default(); j_dim]; w_dim];
    let mut overflow = vec![T::default(); w_dim];
    for &s in &final_states {
        for w in 0..w_dim {
            let src = cur.row(s, w);
            for (d, v) in rows[w].iter_mut().zip(&cur.cells[src..src + j_dim]) {
                *d += *v;
            }
            overflow[w] += cur.overflow[s * w_dim + w];
        }
    }
    (rows, overflow)
}

// next.cells[dst + shift ..] += cur.cells[src .. src + len], spilling the part
// beyond the cap into the overflow counter.
fn add_shifted<T: Count>(next: &mut Dp<T>, cur: &Dp<T>, dst: usize, src: usize, len: usize, shift: usize, over: usize) {
    let j_dim = next.j_dim;
    let keep = len.min(j_dim.saturating_sub(shift));
    let from = &cur.cells[src..src + keep];
    for (d, s) in next.cells[dst + shift..dst + shift + keep].iter_mut().zip(from) {
        *d += *s;
    }
    for v in &cur.cells[src + keep..src + len] {
        next.overflow[over] += *v;
    }
}

fn check_length(n_info: usize) -> Result<()> {
    if n_info == 0 {
        return Err(Error::invalid("input length N must be at least 1"));
    }
    Ok(())
}

fn component_convention(comp: &ConvolutionalComponent) -> WeightConvention {
    if comp.systematic {
        WeightConvention::Parity
    } else {
        WeightConvention::Codeword
    }
}

/// IOWEF of a convolutional component over `n_info` input bits by dynamic
/// programming over (time, state, input weight, output weight), in `f64`.
///
/// Output weight `j` counts every emitted bit other than the information
/// bits, tail bits included.
pub fn conv_iowef(comp: &ConvolutionalComponent, n_info: usize, caps: Caps) -> Result<ComponentTable> {
    check_length(n_info)?;
    let (rows, overflow) = enumerate_component::<f64>(comp, n_info, caps);
    let iowef = Iowef::new(comp.block_length(n_info), n_info, component_convention(comp), rows)?;
    let warnings = truncation_warnings(&iowef, caps);
    Ok(ComponentTable { iowef, overflow, warnings })
}

fn truncation_warnings(iowef: &Iowef, caps: Caps) -> Vec<String> {
    if iowef.terms().any(|(w, _, _)| w > 0) {
        Vec::new()
    } else {
        vec![format!(
            "caps w_max = {:?}, j_max = {:?} leave no nonzero-input entries",
            caps.w_max, caps.j_max
        )]
    }
}

/// Weight table with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactIowef {
    pub n: usize,
    pub k: usize,
    pub convention: WeightConvention,
    pub rows: Vec<Vec<BigRational>>,
}

impl ExactIowef {
    pub fn get(&self, w: usize, j: usize) -> BigRational {
        self.rows.get(w).and_then(|r| r.get(j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.rows.iter().flatten().fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn to_iowef(&self) -> Iowef {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect())
            .collect();
        Iowef::new(self.n, self.k, self.convention, rows).expect("exact table converts")
    }
}

/// Exact integer version of [`conv_iowef`] for `n_info <= 64`, without caps.
pub fn conv_iowef_exact(comp: &ConvolutionalComponent, n_info: usize) -> Result<ExactIowef> {
    check_length(n_info)?;
    if n_info > MAX_EXACT_LENGTH {
        return Err(Error::SizeGuard {
            what: "interleaver length N",
            value: n_info,
            limit: MAX_EXACT_LENGTH,
        });
    }
    let (rows, _) = enumerate_component::<u128>(comp, n_info, Caps::default());
    Ok(ExactIowef {
        n: comp.block_length(n_info),
        k: n_info,
        convention: component_convention(comp),
        rows: rows
            .into_iter()
            .map(|r| r.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect())
            .collect(),
    })
}

fn extra_length(t: &Iowef) -> usize {
    match t.convention() {
        WeightConvention::Parity => t.n() - t.k(),
        WeightConvention::Codeword => t.n(),
    }
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// `C(n, w)` for every `w` by the multiplicative recurrence.
fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = 1.0f64;
    for w in 0..=n {
        row.push(c);
        c = c * (n - w) as f64 / (w + 1) as f64;
    }
    row
}

/// Output weights of the two tables must both exclude the information bits;
/// the combined table uses the parity convention with `d = w + j1 + j2`.
fn check_combinable(a1: &Iowef, a2: &Iowef, n_info: usize) -> Result<()> {
    if a1.k() != n_info || a2.k() != n_info {
        return Err(Error::invalid(format!(
            "component tables have input lengths {} and {}, expected N = {n_info}",
            a1.k(),
            a2.k()
        )));
    }
    Ok(())
}

/// Uniform-interleaver average of a parallel concatenation:
/// `A_{w,j} = sum_{j1 + j2 = j} A1_{w,j1} A2_{w,j2} / C(N, w)`.
pub fn uniform_interleaver_combine(a1: &Iowef, a2: &Iowef, n_info: usize) -> Result<Iowef> {
    combine_capped(a1, a2, n_info, None).map(|(t, _)| t)
}

// Returns the combined table with `w + j <= d_max` and, per w, the mass dropped by that cap.
fn combine_capped(a1: &Iowef, a2: &Iowef, n_info: usize, d_max: Option<usize>) -> Result<(Iowef, Vec<f64>)> {
    check_combinable(a1, a2, n_info)?;
    let n = n_info + extra_length(a1) + extra_length(a2);
    let binom = binomial_row(n_info);
    let w_top = a1.max_input_weight().min(a2.max_input_weight());
    let slices: Vec<(Vec<f64>, f64)> = (0..=w_top)
        .into_par_iter()
        .map(|w| {
            let (r1, r2) = (a1.row(w), a2.row(w));
            if r1.is_empty() || r2.is_empty() {
                return (Vec::new(), 0.0);
            }
            let limit = d_max.map_or(usize::MAX, |d| d.saturating_sub(w));
            let len = (r1.len() + r2.len() - 1).min(limit.saturating_add(1));
            let mut out = vec![0.0; len];
            let mut dropped = 0.0;
            let scale = 1.0 / binom[w];
            for (j1, &x) in r1.iter().enumerate().filter(|(_, &x)| x > 0.0) {
                let x = x * scale;
                for (j2, &y) in r2.iter().enumerate() {
                    let j = j1 + j2;
                    if j < len {
                        out[j] += x * y;
                    } else {
                        dropped += x * y;
                    }
                }
            }
            if d_max.is_some_and(|d| w > d) {
                out.clear();
            }
            (out, dropped)
        })
        .collect();
    let (rows, dropped): (Vec<_>, Vec<_>) = slices.into_iter().unzip();
    Ok((Iowef::new(n, n_info, WeightConvention::Parity, rows)?, dropped))
}

/// Exact rational version of [`uniform_interleaver_combine`].
pub fn uniform_interleaver_combine_exact(a1: &ExactIowef, a2: &ExactIowef, n_info: usize) -> Result<ExactIowef> {
    if a1.k != n_info || a2.k != n_info {
        return Err(Error::invalid("component tables were computed for a different N"));
    }
    let extra = |t: &ExactIowef| match t.convention {
        WeightConvention::Parity => t.n - t.k,
        WeightConvention::Codeword => t.n,
    };
    let mut binom = BigInt::one();
    let w_top = a1.rows.len().min(a2.rows.len());
    let mut rows = Vec::with_capacity(w_top);
    for w in 0..w_top {
        let (r1, r2) = (&a1.rows[w], &a2.rows[w]);
        let len = (r1.len() + r2.len()).saturating_sub(1);
        let mut out = vec![BigRational::zero(); len];
        let c = BigRational::from_integer(binom.clone());
        for (j1, x) in r1.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j2, y) in r2.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out[j1 + j2] += x * y / &c;
            }
        }
        rows.push(out);
        binom = binom * BigInt::from(n_info - w) / BigInt::from(w + 1);
    }
    Ok(ExactIowef {
        n: n_info + extra(a1) + extra(a2),
        k: n_info,
        convention: WeightConvention::Parity,
        rows,
    })
}

/// Two-component parallel concatenation with a uniform interleaver of length `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub component1: ConvolutionalComponent,
    pub component2: ConvolutionalComponent,
    pub interleaver_length: usize,
}

impl EnsembleSpec {
    pub fn new(component1: ConvolutionalComponent, component2: ConvolutionalComponent, n: usize) -> Result<Self> {
        check_length(n)?;
        Ok(EnsembleSpec {
            component1,
            component2,
            interleaver_length: n,
        })
    }

    /// Transmitted block length: information bits once, plus everything
    /// else both components emit.
    pub fn block_length(&self) -> usize {
        let n = self.interleaver_length;
        n + self.component1.extra_length(n) + self.component2.extra_length(n)
    }

    pub fn rate(&self) -> f64 {
        self.interleaver_length as f64 / self.block_length() as f64
    }

    /// Assumption flags carried into output metadata.
    pub fn assumptions(&self) -> Vec<String> {
        let mut flags = vec!["information bits transmitted once; both parity streams unpunctured".to_string()];
        for (i, c) in [self.component1, self.component2].iter().enumerate() {
            flags.push(match c.termination {
                Termination::Terminated => format!(
                    "component {} terminated to the zero state; tail {}bits counted in the parity weight",
                    i + 1,
                    if c.systematic { "input and parity " } else { "parity " }
                ),
                Termination::Truncated => format!("component {} truncated without tail", i + 1),
            });
        }
        flags
    }
}

/// Ensemble-average enumerator with bookkeeping for whatever the caps dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub iowef: Iowef,
    pub spectrum: DistanceSpectrum,
    /// `(smallest possible codeword weight, ln of average count)` for the
    /// mass excluded by the caps.
    pub dropped: Vec<(usize, f64)>,
    pub warnings: Vec<String>,
    pub assumptions: Vec<String>,
}

impl EnsembleResult {
    /// True when the caps excluded nothing.
    pub fn is_complete(&self) -> bool {
        self.dropped.is_empty()
    }

    /// Union bound on the contribution of all excluded codewords.
    pub fn tail_estimate(&self, channel: &ChannelModel) -> Result<f64> {
        dropped_tail_estimate(&self.dropped, channel)
    }
}

/// Union-bound contribution of mass excluded by enumeration caps, given as
/// `(smallest possible weight, ln of average count)` pairs.
pub fn dropped_tail_estimate(dropped: &[(usize, f64)], channel: &ChannelModel) -> Result<f64> {
    let mut acc = LogSum::new();
    for &(d, ln_mass) in dropped {
        acc.add(ln_mass + channel.ln_pairwise_error(d.max(1))?);
    }
    Ok(acc.value().exp())
}

/// Average distance spectrum of the ensemble, limited to input weights
/// `w <= w_max` and codeword weights `d <= d_max`.
pub fn ensemble_spectrum(spec: &EnsembleSpec, w_max: Option<usize>, d_max: Option<usize>) -> Result<EnsembleResult> {
    let n_info = spec.interleaver_length;
    let w_cap = w_max.unwrap_or(n_info).min(n_info);
    let w_cap = d_max.map_or(w_cap, |d| w_cap.min(d));
    let caps = Caps {
        w_max: Some(w_cap),
        j_max: d_max,
    };
    let (t1, t2) = if spec.component1 == spec.component2 {
        let t = conv_iowef(&spec.component1, n_info, caps)?;
        (t.clone(), t)
    } else {
        let (a, b) = rayon::join(
            || conv_iowef(&spec.component1, n_info, caps),
            || conv_iowef(&spec.component2, n_info, caps),
        );
        (a?, b?)
    };
    let (iowef, dropped_sum) = combine_capped(&t1.iowef, &t2.iowef, n_info, d_max)?;

    let d_floor = d_max.map_or(0, |d| d + 1);
    let binom = binomial_row(n_info);
    let mut dropped = Vec::new();
    for w in 0..=w_cap {
        // Mass lost by either component cap, or by the cap on the sum.
        let r1: f64 = t1.iowef.row(w).iter().sum();
        let r2: f64 = t2.iowef.row(w).iter().sum();
        let o1 = t1.overflow.get(w).copied().unwrap_or(0.0);
        let o2 = t2.overflow.get(w).copied().unwrap_or(0.0);
        let mass = dropped_sum.get(w).copied().unwrap_or(0.0) + (o1 * (r2 + o2) + r1 * o2) / binom[w];
        if mass > 0.0 {
            dropped.push((d_floor.max(w), mass.ln()));
        }
    }
    for w in w_cap + 1..=n_info {
        dropped.push((w, ln_binomial(n_info, w)));
    }
    let mut warnings = t1.warnings;
    warnings.extend(t2.warnings);
    let spectrum = iowef.marginal();
    Ok(EnsembleResult {
        iowef,
        spectrum,
        dropped,
        warnings,
        assumptions: spec.assumptions(),
    })
}

// ---------------------------------------------------------------------------
// Spec files

/// Parses polynomial notation: `0o` octal, `0b` binary, `0x` hex, or bare
/// digits read as octal.
pub fn parse_polynomial(text: &str) -> Result<u32> {
    let t = text.trim();
    let (digits, radix) = if let Some(r) = t.strip_prefix("0o") {
        (r, 8)
    } else if let Some(r) = t.strip_prefix("0b") {
        (r, 2)
    } else if let Some(r) = t.strip_prefix("0x") {
        (r, 16)
    } else {
        (t, 8)
    };
    u32::from_str_radix(&digits.replace('_', ""), radix).map_err(|_| Error::Parse(format!("bad polynomial {text:?}")))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    feedback: String,
    feedforward: String,
    #[serde(default = "default_true")]
    systematic: bool,
    #[serde(default = "default_termination")]
    termination: Termination,
}

fn default_true() -> bool {
    true
}

fn default_termination() -> Termination {
    Termination::Terminated
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ComponentRef {
    Path(PathBuf),
    Inline(ComponentFile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleFile {
    component1: ComponentRef,
    component2: ComponentRef,
    interleaver_length: usize,
    #[serde(default)]
    puncturing: Option<String>,
}

impl ComponentFile {
    fn build(&self) -> Result<ConvolutionalComponent> {
        ConvolutionalComponent::new(
            parse_polynomial(&self.feedback)?,
            parse_polynomial(&self.feedforward)?,
            self.systematic,
            self.termination,
        )
    }
}

pub fn parse_component(text: &str) -> Result<ConvolutionalComponent> {
    toml::from_str::<ComponentFile>(text)
        .map_err(|e| Error::Parse(e.to_string()))?
        .build()
}

pub fn load_component(path: impl AsRef<Path>) -> Result<ConvolutionalComponent> {
    parse_component(&std::fs::read_to_string(path)?)
}

/// Parses an ensemble document; component paths resolve against `base`.
pub fn parse_ensemble(text: &str, base: &Path) -> Result<EnsembleSpec> {
    let file: EnsembleFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.puncturing.as_deref().is_some_and(|p| p != "none") {
        return Err(Error::invalid("puncturing is not supported"));
    }
    let resolve = |r: &ComponentRef| match r {
        ComponentRef::Path(p) => load_component(base.join(p)),
        ComponentRef::Inline(c) => c.build(),
    };
    EnsembleSpec::new(resolve(&file.component1)?, resolve(&file.component2)?, file.interleaver_length)
}

pub fn load_ensemble(path: impl AsRef<Path>) -> Result<EnsembleSpec> {
    let path = path.as_ref();
    parse_ensemble(&std::fs::read_to_string(path)?, path.parent().unwrap_or(Path::new(".")))
}
