//! Explicit binary linear codes, their distance spectra and input-output
//! weight enumerators, plus the plain-text and JSON file formats.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted by exhaustive codeword enumeration.
pub const MAX_ENUMERATION_DIMENSION: usize = 28;

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

/// A binary linear `[n, k]` code given by a full-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    rows: Vec<Vec<u64>>,
    info_positions: Option<Vec<usize>>,
}

impl LinearCode {
    /// Builds a code from generator rows of `0`/`1` entries.
    pub fn new(n: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let k = rows.len();
        if n == 0 || k == 0 || k > n {
            return Err(Error::invalid(format!("need 0 < k <= n, got n = {n}, k = {k}")));
        }
        let mut packed = Vec::with_capacity(k);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("generator row {r} has {} entries, expected {n}", row.len())));
            }
            let mut words = vec![0u64; words_for(n)];
            for (i, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => words[i / 64] |= 1 << (i % 64),
                    other => return Err(Error::invalid(format!("generator entry {other} is not binary"))),
                }
            }
            packed.push(words);
        }
        let rank = gf2_rank(&packed);
        if rank < k {
            return Err(Error::RankDeficient { rank, k });
        }
        Ok(LinearCode {
            n,
            k,
            rows: packed,
            info_positions: None,
        })
    }

    /// Builds a code from rows written as strings of `0` and `1`.
    pub fn from_strings(rows: &[&str]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let parsed = rows
            .iter()
            .map(|r| parse_row(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, &parsed)
    }

    pub fn repetition(n: usize) -> Self {
        Self::new(n, &[vec![1; n]]).expect("repetition generator is valid")
    }

    /// Systematic `[7, 4, 3]` Hamming code.
    pub fn hamming74() -> Self {
        Self::from_strings(&["1000110", "0100011", "0010111", "0001101"]).expect("valid Hamming generator")
    }

    /// Systematic `[8, 4, 4]` extended Hamming code.
    pub fn extended_hamming84() -> Self {
        Self::from_strings(&["10001101", "01000111", "00101110", "00011011"]).expect("valid extended Hamming generator")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator_bits(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|w| (0..self.n).map(|i| bit(w, i) as u8).collect())
            .collect()
    }

    /// Declares which coordinates carry the information bits. The generator
    /// restricted to these columns must be invertible.
    pub fn with_info_positions(mut self, positions: Vec<usize>) -> Result<Self> {
        if positions.len() != self.k || positions.iter().any(|&p| p >= self.n) {
            return Err(Error::invalid(format!(
                "information mask must list {} distinct positions below {}",
                self.k, self.n
            )));
        }
        let sub: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|r| {
                let mut w = 0u64;
                for (c, &p) in positions.iter().enumerate() {
                    if bit(r, p) {
                        w |= 1 << c;
                    }
                }
                vec![w]
            })
            .collect();
        if self.k > 64 || gf2_rank(&sub) < self.k {
            return Err(Error::invalid("information positions do not determine the message"));
        }
        self.info_positions = Some(positions);
        Ok(self)
    }

    /// Information positions: the declared mask, or the unit columns of a
    /// systematic generator.
    pub fn info_positions(&self) -> Option<Vec<usize>> {
        if let Some(p) = &self.info_positions {
            return Some(p.clone());
        }
        let mut positions = Vec::with_capacity(self.k);
        for r in 0..self.k {
            let col = (0..self.n).find(|&c| {
                bit(&self.rows[r], c) && (0..self.k).all(|o| o == r || !bit(&self.rows[o], c))
            })?;
            positions.push(col);
        }
        Some(positions)
    }

    /// Encodes the message whose bit `i` multiplies generator row `i`.
    pub fn encode(&self, message: u64) -> Vec<u64> {
        let mut out = vec![0u64; words_for(self.n)];
        for (i, row) in self.rows.iter().enumerate() {
            if message >> i & 1 == 1 {
                xor_into(&mut out, row);
            }
        }
        out
    }

    /// All `2^k` codewords packed into `u64`, indexed by message. Requires `n <= 64`.
    pub fn codewords_u64(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::SizeGuard {
                what: "block length n",
                value: self.n,
                limit: 64,
            });
        }
        guard_dimension(self.k, 26)?;
        let rows: Vec<u64> = self.rows.iter().map(|r| r[0]).collect();
        let mut out = vec![0u64; 1 << self.k];
        for m in 1usize..(1 << self.k) {
            let low = m.trailing_zeros() as usize;
            out[m] = out[m & (m - 1)] ^ rows[low];
        }
        Ok(out)
    }

    /// Weight of the information part of a codeword (message weight when no
    /// information positions are known).
    pub fn info_weight_fn(&self) -> impl Fn(u64, u64) -> u32 + '_ {
        let mask = self
            .info_positions()
            .map(|p| p.iter().fold(0u64, |m, &i| if i < 64 { m | 1 << i } else { m }));
        move |message, codeword| match mask {
            Some(m) => (codeword & m).count_ones(),
            None => message.count_ones(),
        }
    }

    /// Parity-check matrix rows (each a packed `n`-bit vector).
    pub fn parity_check(&self) -> Vec<Vec<u64>> {
        let mut m = self.rows.clone();
        let mut pivots = Vec::with_capacity(self.k);
        let mut r = 0;
        for c in 0..self.n {
            if r == self.k {
                break;
            }
            let Some(p) = (r..self.k).find(|&i| bit(&m[i], c)) else {
                continue;
            };
            m.swap(r, p);
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && bit(row, c) {
                    xor_into(row, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        // For each free column f: h has a 1 at f and at pivot p_i whenever rref[i][f] = 1.
        free.iter()
            .map(|&f| {
                let mut h = vec![0u64; words_for(self.n)];
                h[f / 64] |= 1 << (f % 64);
                for (i, &p) in pivots.iter().enumerate() {
                    if bit(&m[i], f) {
                        h[p / 64] |= 1 << (p % 64);
                    }
                }
                h
            })
            .collect()
    }

    /// Smallest nonzero codeword weight, by enumeration.
    pub fn minimum_distance(&self) -> Result<usize> {
        let spectrum = enumerate_spectrum(self)?;
        Ok((1..=self.n).find(|&d| spectrum.get(d) > 0.0).unwrap_or(0))
    }
}

fn parse_row(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("unexpected character {other:?} in generator row"))),
        })
        .collect()
}

fn gf2_rank(rows: &[Vec<u64>]) -> usize {
    let mut m = rows.to_vec();
    let nbits = m.first().map_or(0, |r| r.len() * 64);
    let mut rank = 0;
    for c in 0..nbits {
        let Some(p) = (rank..m.len()).find(|&i| bit(&m[i], c)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if bit(row, c) {
                xor_into(row, &pivot);
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn guard_dimension(k: usize, limit: usize) -> Result<()> {
    if k > limit {
        Err(Error::SizeGuard {
            what: "dimension k",
            value: k,
            limit,
        })
    } else {
        Ok(())
    }
}

/// Counts `A_d` of codewords (or ensemble-average counts) per Hamming weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSpectrum {
    n: usize,
    k: usize,
    counts: Vec<f64>,
}

impl DistanceSpectrum {
    /// `counts[d]` is `A_d`; missing tail entries are zero.
    pub fn new(n: usize, k: usize, mut counts: Vec<f64>) -> Result<Self> {
        if counts.len() > n + 1 {
            if counts[n + 1..].iter().any(|&c| c != 0.0) {
                return Err(Error::invalid("spectrum has weights beyond the block length"));
            }
            counts.truncate(n + 1);
        }
        if counts.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::invalid("spectrum counts must be finite and non-negative"));
        }
        counts.resize(n + 1, 0.0);
        Ok(DistanceSpectrum { n, k, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn get(&self, d: usize) -> f64 {
        self.counts.get(d).copied().unwrap_or(0.0)
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    /// `(d, A_d)` for every `d >= 1` with `A_d > 0`.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.counts.iter().enumerate().skip(1).filter(|(_, &a)| a > 0.0).map(|(d, &a)| (d, a))
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// Checks the properties of the spectrum of one specific code: integral
    /// counts, `A_0 = 1` and `2^k` codewords in total.
    pub fn validate_specific(&self) -> Result<()> {
        if self.counts.iter().any(|c| c.fract() != 0.0) {
            return Err(Error::invalid("specific-code spectrum has non-integral counts"));
        }
        if self.get(0) != 1.0 {
            return Err(Error::invalid("specific-code spectrum must have A_0 = 1"));
        }
        let expected = 2f64.powi(self.k as i32);
        if (self.total() - expected).abs() > 1e-9 * expected {
            return Err(Error::invalid(format!("spectrum sums to {}, expected 2^k = {expected}", self.total())));
        }
        Ok(())
    }
}

/// Exhaustive weight enumeration over the `2^k` codewords (Gray-code walk).
pub fn enumerate_spectrum(code: &LinearCode) -> Result<DistanceSpectrum> {
    guard_dimension(code.k, MAX_ENUMERATION_DIMENSION)?;
    let mut counts = vec![0u64; code.n + 1];
    let mut current = vec![0u64; words_for(code.n)];
    counts[0] = 1;
    for step in 1u64..(1u64 << code.k) {
        xor_into(&mut current, &code.rows[step.trailing_zeros() as usize]);
        counts[popcount(&current)] += 1;
    }
    DistanceSpectrum::new(code.n, code.k, counts.into_iter().map(|c| c as f64).collect())
}

/// How the output weight `j` of an IOWEF term is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightConvention {
    /// `j` is the parity weight; the codeword weight is `w + j`.
    Parity,
    /// `j` is the full codeword weight.
    Codeword,
}

/// Input-output weight enumerator `A_{w,j}` stored densely by input weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Iowef {
    n: usize,
    k: usize,
    convention: WeightConvention,
    rows: Vec<Vec<f64>>,
}

impl Iowef {
    pub fn new(n: usize, k: usize, convention: WeightConvention, mut rows: Vec<Vec<f64>>) -> Result<Self> {
        for r in rows.iter_mut() {
            while r.last() == Some(&0.0) {
                r.pop();
            }
        }
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        if rows.len() > k + 1 {
            return Err(Error::invalid("IOWEF has input weights beyond k"));
        }
        if rows.iter().flatten().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::invalid("IOWEF counts must be finite and non-negative"));
        }
        Ok(Iowef { n, k, convention, rows })
    }

    /// Builds a table from sparse `(w, j, count)` triples; repeated keys add up.
    pub fn from_terms(
        n: usize,
        k: usize,
        convention: WeightConvention,
        terms: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (w, j, c) in terms {
            if w > k || j > n {
                return Err(Error::invalid(format!("IOWEF term ({w}, {j}) out of range")));
            }
            if rows.len() <= w {
                rows.resize(w + 1, Vec::new());
            }
            if rows[w].len() <= j {
                rows[w].resize(j + 1, 0.0);
            }
            rows[w][j] += c;
        }
        Self::new(n, k, convention, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn convention(&self) -> WeightConvention {
        self.convention
    }

    pub fn get(&self, w: usize, j: usize) -> f64 {
        self.rows.get(w).and_then(|r| r.get(j)).copied().unwrap_or(0.0)
    }

    /// Row of counts for input weight `w`, indexed by output weight.
    pub fn row(&self, w: usize) -> &[f64] {
        self.rows.get(w).map_or(&[], |r| r.as_slice())
    }

    pub fn max_input_weight(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(w, r)| r.iter().enumerate().filter(|(_, &c)| c > 0.0).map(move |(j, &c)| (w, j, c)))
    }

    pub fn total(&self) -> f64 {
        self.rows.iter().flatten().sum()
    }

    fn codeword_weight(&self, w: usize, j: usize) -> usize {
        match self.convention {
            WeightConvention::Parity => w + j,
            WeightConvention::Codeword => j,
        }
    }

    /// Distance spectrum obtained by summing over input weights.
    pub fn marginal(&self) -> DistanceSpectrum {
        let mut counts = vec![0.0; self.n + 1];
        for (w, j, c) in self.terms() {
            counts[self.codeword_weight(w, j)] += c;
        }
        DistanceSpectrum::new(self.n, self.k, counts).expect("marginal of a valid IOWEF")
    }

    /// Spectrum with `A_d` replaced by `sum_w (w/k) A_{w,j}` grouped by codeword
    /// weight; drives bit-error versions of the spectral bounds.
    pub fn bit_weighted_spectrum(&self) -> DistanceSpectrum {
        let mut counts = vec![0.0; self.n + 1];
        for (w, j, c) in self.terms() {
            counts[self.codeword_weight(w, j)] += w as f64 / self.k as f64 * c;
        }
        DistanceSpectrum::new(self.n, self.k, counts).expect("weighted marginal of a valid IOWEF")
    }
}

/// Exhaustive IOWEF of a systematic code (or one with declared information
/// positions), in the parity-weight convention.
pub fn enumerate_iowef(code: &LinearCode) -> Result<Iowef> {
    guard_dimension(code.k, MAX_ENUMERATION_DIMENSION)?;
    let positions = code
        .info_positions()
        .ok_or_else(|| Error::invalid("generator is not systematic and no information positions were given"))?;
    let mut info_mask = vec![0u64; words_for(code.n)];
    for &p in &positions {
        info_mask[p / 64] |= 1 << (p % 64);
    }
    let mut rows = vec![vec![0.0; code.n - code.k + 1]; code.k + 1];
    rows[0][0] = 1.0;
    let mut current = vec![0u64; words_for(code.n)];
    for step in 1u64..(1u64 << code.k) {
        xor_into(&mut current, &code.rows[step.trailing_zeros() as usize]);
        let total = popcount(&current);
        let w: usize = current.iter().zip(&info_mask).map(|(c, m)| (c & m).count_ones() as usize).sum();
        rows[w][total - w] += 1.0;
    }
    Iowef::new(code.n, code.k, WeightConvention::Parity, rows)
}

// ---------------------------------------------------------------------------
// File formats

/// Parses the code text format: a header line `n k` followed by `k` rows of
/// `n` binary digits. Blank lines and `#` comments are ignored.
pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token {t:?}"))))
        .collect::<Result<_>>()?;
    let [n, k] = dims[..] else {
        return Err(Error::Parse("header must be `n k`".into()));
    };
    let rows: Vec<Vec<u8>> = lines.map(|l| parse_row(&l.replace(char::is_whitespace, ""))).collect::<Result<_>>()?;
    if rows.len() != k {
        return Err(Error::Parse(format!("expected {k} generator rows, found {}", rows.len())));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Parse(format!("generator row has {} digits, expected {n}", r.len())));
    }
    LinearCode::new(n, &rows)
}

pub fn format_code(code: &LinearCode) -> String {
    let mut s = format!("{} {}\n", code.n, code.k);
    for row in code.generator_bits() {
        for b in row {
            s.push(if b == 1 { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

pub fn load_code(path: impl AsRef<Path>) -> Result<LinearCode> {
    parse_code(&std::fs::read_to_string(path)?)
}

pub fn store_code(code: &LinearCode, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_code(code))?;
    Ok(())
}

/// Writes a count so that parsing it back gives the identical `f64`.
pub fn format_count(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 9.007_199_254_740_992e15 {
        format!("{}", c as i64)
    } else {
        format!("{c:e}")
    }
}

fn parse_count(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad count {s:?}")))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::Parse(format!("count {s:?} is not a finite non-negative number")));
    }
    Ok(v)
}

#[derive(Debug, Serialize, Deserialize)]
struct WeightFile {
    n: usize,
    k: usize,
    convention: WeightConvention,
    terms: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    metadata: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<usize>,
    j: usize,
    count: String,
}

/// Either kind of weight table read back from the JSON document.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightTable {
    Spectrum(DistanceSpectrum),
    Iowef(Iowef),
}

impl WeightTable {
    /// Block-error spectrum of the table.
    pub fn spectrum(&self) -> DistanceSpectrum {
        match self {
            WeightTable::Spectrum(s) => s.clone(),
            WeightTable::Iowef(t) => t.marginal(),
        }
    }
}

pub fn spectrum_to_json(
    spectrum: &DistanceSpectrum,
    metadata: serde_json::Map<String, serde_json::Value>,
) -> String {
    let terms = spectrum
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0.0)
        .map(|(d, &c)| TermRecord {
            w: None,
            j: d,
            count: format_count(c),
        })
        .collect();
    let file = WeightFile {
        n: spectrum.n,
        k: spectrum.k,
        convention: WeightConvention::Codeword,
        terms,
        metadata,
    };
    serde_json::to_string_pretty(&file).expect("weight file serializes")
}

pub fn iowef_to_json(iowef: &Iowef, metadata: serde_json::Map<String, serde_json::Value>) -> String {
    let terms = iowef
        .terms()
        .map(|(w, j, c)| TermRecord {
            w: Some(w),
            j,
            count: format_count(c),
        })
        .collect();
    let file = WeightFile {
        n: iowef.n,
        k: iowef.k,
        convention: iowef.convention,
        terms,
        metadata,
    };
    serde_json::to_string_pretty(&file).expect("weight file serializes")
}

pub fn parse_weight_table(text: &str) -> Result<WeightTable> {
    let file: WeightFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let has_w = file.terms.iter().any(|t| t.w.is_some());
    if has_w {
        let terms = file
            .terms
            .iter()
            .map(|t| {
                let w = t.w.ok_or_else(|| Error::Parse("IOWEF term without input weight".into()))?;
                Ok((w, t.j, parse_count(&t.count)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(WeightTable::Iowef(Iowef::from_terms(file.n, file.k, file.convention, terms)?));
    }
    if file.convention != WeightConvention::Codeword {
        return Err(Error::Parse("a spectrum without input weights must use the codeword convention".into()));
    }
    let mut counts = vec![0.0; file.n + 1];
    for t in &file.terms {
        if t.j > file.n {
            return Err(Error::Parse(format!("weight {} exceeds n = {}", t.j, file.n)));
        }
        counts[t.j] += parse_count(&t.count)?;
    }
    Ok(WeightTable::Spectrum(DistanceSpectrum::new(file.n, file.k, counts)?))
}

pub fn store_spectrum(spectrum: &DistanceSpectrum, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, spectrum_to_json(spectrum, Default::default()))?;
    Ok(())
}

pub fn store_iowef(iowef: &Iowef, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, iowef_to_json(iowef, Default::default()))?;
    Ok(())
}

pub fn load_weight_table(path: impl AsRef<Path>) -> Result<WeightTable> {
    parse_weight_table(&std::fs::read_to_string(path)?)
}

impl std::fmt::Display for DistanceSpectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        for (d, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c > 0.0) {
            let _ = write!(s, "A_{d}={} ", format_count(c));
        }
        f.write_str(s.trim_end())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn repetition_spectrum() {
        let s = enumerate_spectrum(&LinearCode::repetition(3)).unwrap();
        assert_eq!(s.counts(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn hamming_spectrum_against_direct_enumeration() {
        let code = LinearCode::hamming74();
        let mut oracle = [0.0; 8];
        for w in code.codewords_u64().unwrap() {
            oracle[w.count_ones() as usize] += 1.0;
        }
        assert_eq!(oracle, [1.0, 0.0, 0.0, 7.0, 7.0, 0.0, 0.0, 1.0]);
        assert_eq!(enumerate_spectrum(&code).unwrap().counts(), &oracle);
    }

    #[test]
    fn identity_generator_spans_the_space() {
        let code = LinearCode::from_strings(&["10", "01"]).unwrap();
        assert_eq!(enumerate_spectrum(&code).unwrap().counts(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn dimension_guard() {
        let n = 30;
        let rows: Vec<Vec<u8>> = (0..29).map(|i| (0..n).map(|j| (i == j) as u8).collect()).collect();
        let code = LinearCode::new(n, &rows).unwrap();
        assert!(matches!(enumerate_spectrum(&code), Err(Error::SizeGuard { value: 29, .. })));
    }

    #[test]
    fn repetition_iowef() {
        let t = enumerate_iowef(&LinearCode::repetition(3)).unwrap();
        assert_eq!(t.get(0, 0), 1.0);
        assert_eq!(t.get(1, 2), 1.0);
        assert_eq!(t.total(), 2.0);
    }

    #[test]
    fn hamming_iowef_marginal_matches_spectrum() {
        let code = LinearCode::hamming74();
        let t = enumerate_iowef(&code).unwrap();
        assert_eq!(t.total(), 16.0);
        assert_eq!(t.marginal(), enumerate_spectrum(&code).unwrap());
        // w/k <= 1 termwise.
        let bit = t.bit_weighted_spectrum();
        for d in 0..=7 {
            assert!(bit.get(d) <= t.marginal().get(d));
        }
    }

    #[test]
    fn non_systematic_needs_a_mask() {
        let code = LinearCode::from_strings(&["111", "011"]).unwrap();
        assert!(code.info_positions().is_none());
        assert!(matches!(enumerate_iowef(&code), Err(Error::InvalidInput(_))));
        let masked = code.with_info_positions(vec![0, 1]).unwrap();
        let t = enumerate_iowef(&masked).unwrap();
        assert_eq!(t.marginal(), enumerate_spectrum(&masked).unwrap());
    }

    #[test]
    fn parse_repetition_and_reject_rank_deficiency() {
        let code = parse_code("3 1\n111\n").unwrap();
        assert_eq!(code, LinearCode::repetition(3));
        assert!(matches!(parse_code("3 2\n110\n110\n"), Err(Error::RankDeficient { rank: 1, k: 2 })));
        assert!(matches!(parse_code("3 1\n11\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_code("3 1\n1a1\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn code_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h74.txt");
        let code = LinearCode::hamming74();
        store_code(&code, &path).unwrap();
        assert_eq!(load_code(&path).unwrap().generator_bits(), code.generator_bits());
    }

    #[test]
    fn weight_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.json");
        let t = enumerate_iowef(&LinearCode::hamming74()).unwrap();
        store_iowef(&t, &path).unwrap();
        assert_eq!(load_weight_table(&path).unwrap(), WeightTable::Iowef(t.clone()));
        store_spectrum(&t.marginal(), &path).unwrap();
        assert_eq!(load_weight_table(&path).unwrap(), WeightTable::Spectrum(t.marginal()));
        let big = DistanceSpectrum::new(2, 1, vec![1.0, 1.234_567_890_123e290, 0.1]).unwrap();
        assert_eq!(parse_weight_table(&spectrum_to_json(&big, Default::default())).unwrap().spectrum(), big);
    }

    #[test]
    fn parity_check_annihilates_codewords() {
        for code in [LinearCode::hamming74(), LinearCode::extended_hamming84(), LinearCode::repetition(5)] {
            let h = code.parity_check();
            assert_eq!(h.len(), code.n() - code.k());
            for c in code.codewords_u64().unwrap() {
                assert!(h.iter().all(|row| (row[0] & c).count_ones() % 2 == 0));
            }
        }
    }

    fn arb_code() -> impl Strategy<Value = LinearCode> {
        (2usize..14).prop_flat_map(|n| {
            (1usize..=n.min(8)).prop_flat_map(move |k| {
                proptest::collection::vec(proptest::collection::vec(0u8..2, n), k)
                    .prop_filter_map("full rank", move |rows| LinearCode::new(n, &rows).ok())
            })
        })
    }

    proptest! {
        #[test]
        fn spectrum_invariants(code in arb_code()) {
            let s = enumerate_spectrum(&code).unwrap();
            prop_assert!(s.validate_specific().is_ok());
            let brute = code.codewords_u64().unwrap().iter().skip(1).map(|c| c.count_ones() as usize).min().unwrap();
            prop_assert_eq!(code.minimum_distance().unwrap(), brute);
            if code.info_positions().is_some() {
                prop_assert_eq!(enumerate_iowef(&code).unwrap().marginal(), s);
            }
        }
    }
}
