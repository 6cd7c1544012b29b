//! Spectrum-based union bound and its Bhattacharyya loosening.

use crate::channel::ChannelModel;
use crate::codebook::DistanceSpectrum;
use crate::error::Result;
use crate::special::LogSum;

/// `ln sum_{d>=1} A_d P_2(d)`.
pub fn ln_union_bound(spectrum: &DistanceSpectrum, channel: &ChannelModel) -> Result<f64> {
    let mut acc = LogSum::new();
    for (d, a) in spectrum.nonzero_terms() {
        acc.add(a.ln() + channel.ln_pairwise_error(d)?);
    }
    Ok(acc.value())
}

/// Unclipped union bound `sum_{d>=1} A_d P_2(d)`.
pub fn union_bound(spectrum: &DistanceSpectrum, channel: &ChannelModel) -> Result<f64> {
    Ok(ln_union_bound(spectrum, channel)?.exp())
}

/// `ln sum_{d>=1} A_d gamma^d`.
pub fn ln_bhattacharyya_bound(spectrum: &DistanceSpectrum, channel: &ChannelModel) -> f64 {
    let ln_gamma = channel.ln_bhattacharyya();
    spectrum
        .nonzero_terms()
        .map(|(d, a)| a.ln() + d as f64 * ln_gamma)
        .collect::<LogSum>()
        .value()
}

/// Unclipped union-Bhattacharyya bound `sum_{d>=1} A_d gamma^d`.
pub fn bhattacharyya_bound(spectrum: &DistanceSpectrum, channel: &ChannelModel) -> f64 {
    ln_bhattacharyya_bound(spectrum, channel).exp()
}
