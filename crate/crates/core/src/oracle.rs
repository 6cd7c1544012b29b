//! Ground truth for validating the bounds: exact ML decoding error on the
//! BSC, Monte-Carlo ML decoding on both channels, and the all-permutations
//! interleaver average.

use num::{BigInt, BigRational};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::channel::ChannelModel;
use crate::codebook::{LinearCode, WeightConvention};
use crate::ensemble::{ConvolutionalComponent, ExactIowef, Termination};
use crate::error::{Error, Result};
use crate::sampling::run_blocks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Ties broken uniformly among the maximizing codewords.
    Uniform,
    /// Ties have probability zero (continuous outputs).
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMetric {
    Block,
    Bit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub estimate: f64,
    /// Zero for exact results.
    pub std_error: f64,
    pub samples: u64,
    pub seed: Option<u64>,
    pub tie_policy: TiePolicy,
}

const MAX_ORACLE_K: usize = 16;
const MAX_BSC_N: usize = 20;

fn guard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::SizeGuard { what, value, limit })
    } else {
        Ok(())
    }
}

/// Exact ML block error probability on the BSC with uniform tie-breaking.
///
/// Given the all-zero codeword, ML decoding is correct with probability
/// `1 / t` when the received word is one of the `t` minimum-weight words of
/// its coset, so the error is summed coset by coset from the weight profile
/// of each coset.
pub fn exact_ml_bsc(code: &LinearCode, p: f64) -> Result<OracleResult> {
    guard("block length n", code.n(), MAX_BSC_N)?;
    guard("dimension k", code.k(), MAX_ORACLE_K)?;
    let ChannelModel::Bsc { p } = ChannelModel::bsc(p)? else { unreachable!() };
    let n = code.n();
    let h: Vec<u64> = code.parity_check().iter().map(|r| r[0]).collect();
    let r = h.len();
    // profile[s * (n + 1) + w] = number of words of weight w with syndrome s.
    let mut profile = vec![0u32; (1 << r) * (n + 1)];
    for y in 0u64..(1 << n) {
        let s = h
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, row)| acc | (((row & y).count_ones() & 1) as usize) << i);
        profile[s * (n + 1) + y.count_ones() as usize] += 1;
    }
    let mut error = 0.0;
    for coset in profile.chunks(n + 1) {
        let Some(min) = coset.iter().position(|&c| c > 0) else { continue };
        for (w, &count) in coset.iter().enumerate().skip(min) {
            let wrong = if w == min { count - 1 } else { count };
            error += wrong as f64 * p.powi(w as i32) * (1.0 - p).powi((n - w) as i32);
        }
    }
    Ok(OracleResult {
        estimate: error,
        std_error: 0.0,
        samples: 0,
        seed: None,
        tie_policy: TiePolicy::Uniform,
    })
}

fn mc_result(errors: f64, sum_sq: f64, samples: u64, seed: u64, tie_policy: TiePolicy) -> OracleResult {
    let m = samples as f64;
    let mean = errors / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    OracleResult {
        estimate: mean,
        std_error: (var / m).sqrt(),
        samples,
        seed: Some(seed),
        tie_policy,
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::invalid("Monte-Carlo needs at least one sample"));
    }
    Ok(())
}

/// Monte-Carlo ML decoding on the BIAWGN channel given the all-zero codeword.
///
/// For the bit metric each sample contributes the fraction of information
/// bits in error and the standard error is the empirical one.
pub fn mc_ml_awgn(code: &LinearCode, channel: &ChannelModel, samples: u64, seed: u64, metric: ErrorMetric) -> Result<OracleResult> {
    guard("dimension k", code.k(), MAX_ORACLE_K)?;
    check_samples(samples)?;
    let a0 = channel.amplitude()?;
    let words = code.codewords_u64()?;
    let info_weight = code.info_weight_fn();
    let weights: Vec<u32> = words.iter().enumerate().map(|(m, &c)| info_weight(m as u64, c)).collect();
    let n = code.n();
    let k = code.k() as u64;
    let per_block = run_blocks(samples, seed, |rng, count| {
        let mut y = vec![0.0f64; n];
        let (mut errs, mut sq) = (0u64, 0u64);
        for _ in 0..count {
            for v in y.iter_mut() {
                *v = a0 + rng.sample::<f64, _>(StandardNormal);
            }
            // Correlation decoding: the best codeword minimizes sum_{i in c} y_i.
            let (mut best, mut best_metric) = (0usize, 0.0f64);
            for (m, &c) in words.iter().enumerate().skip(1) {
                let mut bits = c;
                let mut s = 0.0;
                while bits != 0 {
                    s += y[bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
                if s < best_metric {
                    best_metric = s;
                    best = m;
                }
            }
            let e = match metric {
                ErrorMetric::Block => (best != 0) as u64,
                ErrorMetric::Bit => weights[best] as u64,
            };
            errs += e;
            sq += e * e;
        }
        (errs, sq)
    });
    let (errs, sq) = per_block.iter().fold((0u64, 0u64), |a, b| (a.0 + b.0, a.1 + b.1));
    let scale = match metric {
        ErrorMetric::Block => 1.0,
        ErrorMetric::Bit => k as f64,
    };
    Ok(mc_result(errs as f64 / scale, sq as f64 / (scale * scale), samples, seed, TiePolicy::Continuous))
}

/// Monte-Carlo ML block decoding on the BSC with uniform random tie-breaking.
pub fn mc_ml_bsc(code: &LinearCode, p: f64, samples: u64, seed: u64) -> Result<OracleResult> {
    guard("dimension k", code.k(), MAX_ORACLE_K)?;
    check_samples(samples)?;
    ChannelModel::bsc(p)?;
    let words = code.codewords_u64()?;
    let n = code.n();
    let per_block = run_blocks(samples, seed, |rng, count| {
        let mut errs = 0u64;
        for _ in 0..count {
            let mut y = 0u64;
            for i in 0..n {
                if rng.random::<f64>() < p {
                    y |= 1 << i;
                }
            }
            let dist: Vec<u32> = words.iter().map(|c| (c ^ y).count_ones()).collect();
            let best = *dist.iter().min().expect("nonempty code");
            let ties = dist.iter().filter(|&&d| d == best).count() as u64;
            if dist[0] != best || rng.random_range(0..ties) != 0 {
                errs += 1;
            }
        }
        errs
    });
    let errs: u64 = per_block.iter().sum();
    Ok(mc_result(errs as f64, errs as f64, samples, seed, TiePolicy::Uniform))
}

/// Weight of everything the component emits besides the information bits,
/// computed by running the encoder recursion over the explicit `a` sequence.
pub fn encoded_extra_weight(comp: &ConvolutionalComponent, input: &[u8]) -> usize {
    let nu = comp.memory();
    let tap = |poly: u32, i: usize| (poly >> i) & 1;
    let mut a: Vec<u32> = Vec::with_capacity(input.len() + nu);
    let past = |a: &[u32], i: usize| if a.len() >= i { a[a.len() - i] } else { 0 };
    let tail = match comp.termination() {
        Termination::Terminated => nu,
        Termination::Truncated => 0,
    };
    let mut weight = 0;
    for t in 0..input.len() + tail {
        let fb = (1..=nu).map(|i| tap(comp.feedback(), i) & past(&a, i)).sum::<u32>() & 1;
        let u = if t < input.len() { input[t] as u32 } else { fb };
        let at = u ^ fb;
        let parity = (tap(comp.feedforward(), 0) & at) ^ ((1..=nu).map(|i| tap(comp.feedforward(), i) & past(&a, i)).sum::<u32>() & 1);
        a.push(at);
        weight += parity as usize;
        if t >= input.len() && comp.systematic() {
            weight += u as usize;
        }
    }
    weight
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exact average IOWEF over all `N!` interleavers of the parallel
/// concatenation, by encoding every (input, permutation) pair.
pub fn permute_average_iowef(comp1: &ConvolutionalComponent, comp2: &ConvolutionalComponent, n_info: usize) -> Result<ExactIowef> {
    guard("interleaver length N", n_info, 6)?;
    if n_info == 0 {
        return Err(Error::invalid("input length N must be at least 1"));
    }
    let extra1 = comp1.extra_length(n_info);
    let extra2 = comp2.extra_length(n_info);
    let bits = |u: usize| (0..n_info).map(|i| (u >> i & 1) as u8).collect::<Vec<u8>>();
    let e1: Vec<usize> = (0..1usize << n_info).map(|u| encoded_extra_weight(comp1, &bits(u))).collect();
    let mut counts = vec![vec![0u64; extra1 + extra2 + 1]; n_info + 1];
    let mut perm: Vec<usize> = (0..n_info).collect();
    let mut perms = 0u64;
    loop {
        perms += 1;
        for u in 0..1usize << n_info {
            let input = bits(u);
            let permuted: Vec<u8> = perm.iter().map(|&src| input[src]).collect();
            let e2 = encoded_extra_weight(comp2, &permuted);
            counts[u.count_ones() as usize][e1[u] + e2] += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let denom = BigInt::from(perms);
    Ok(ExactIowef {
        n: n_info + extra1 + extra2,
        k: n_info,
        convention: WeightConvention::Parity,
        rows: counts
            .into_iter()
            .map(|r| r.into_iter().map(|c| BigRational::new(BigInt::from(c), denom.clone())).collect())
            .collect(),
    })
}
