//! Named bounds evaluated point by point over a channel grid.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channel::ChannelModel;
use crate::codebook::{enumerate_spectrum, DistanceSpectrum, LinearCode};
use crate::ensemble::{dropped_tail_estimate, EnsembleResult};
use crate::error::{Error, Result};
use crate::gallager::{optimize_ds2, optimize_gallager65, TiltFamily};
use crate::geometric::{sphere_bound, tsb_quadrature, GeometricBound, TsbOptions};
use crate::lower::{decaen_ml_bound, optimize_ml_lower_bound};
use crate::optimize::MultiStart;
use crate::union::{bhattacharyya_bound, union_bound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Union,
    Bhattacharyya,
    Gallager65,
    Ds2,
    Sphere,
    ShiftedSphere,
    Tsb,
    Decaen,
    CohenMerhav,
}

impl BoundKind {
    pub const ALL: [BoundKind; 9] = [
        BoundKind::Union,
        BoundKind::Bhattacharyya,
        BoundKind::Gallager65,
        BoundKind::Ds2,
        BoundKind::Sphere,
        BoundKind::ShiftedSphere,
        BoundKind::Tsb,
        BoundKind::Decaen,
        BoundKind::CohenMerhav,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Union => "union",
            BoundKind::Bhattacharyya => "bhattacharyya",
            BoundKind::Gallager65 => "gallager65",
            BoundKind::Ds2 => "ds2",
            BoundKind::Sphere => "sphere",
            BoundKind::ShiftedSphere => "shifted-sphere",
            BoundKind::Tsb => "tsb",
            BoundKind::Decaen => "decaen",
            BoundKind::CohenMerhav => "cohen-merhav",
        }
    }

    pub fn is_lower(self) -> bool {
        matches!(self, BoundKind::Decaen | BoundKind::CohenMerhav)
    }

    /// Bounds that need the code itself rather than its distance spectrum.
    pub fn needs_code(self) -> bool {
        matches!(self, BoundKind::Gallager65 | BoundKind::Decaen | BoundKind::CohenMerhav)
    }

    pub fn biawgn_only(self) -> bool {
        matches!(
            self,
            BoundKind::Sphere | BoundKind::ShiftedSphere | BoundKind::Tsb | BoundKind::Decaen | BoundKind::CohenMerhav
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown bound '{s}'")))
    }
}

/// What a bound is evaluated on.
#[derive(Debug, Clone)]
pub struct BoundInput {
    pub spectrum: DistanceSpectrum,
    /// Present only for a specific code.
    pub code: Option<LinearCode>,
    /// Mass excluded by enumeration caps, see [`dropped_tail_estimate`].
    pub dropped: Vec<(usize, f64)>,
    pub assumptions: Vec<String>,
}

impl BoundInput {
    pub fn from_code(code: LinearCode) -> Result<Self> {
        Ok(BoundInput {
            spectrum: enumerate_spectrum(&code)?,
            code: Some(code),
            dropped: Vec::new(),
            assumptions: Vec::new(),
        })
    }

    pub fn from_spectrum(spectrum: DistanceSpectrum) -> Self {
        BoundInput {
            spectrum,
            code: None,
            dropped: Vec::new(),
            assumptions: Vec::new(),
        }
    }

    pub fn from_ensemble(result: &EnsembleResult) -> Self {
        BoundInput {
            spectrum: result.spectrum.clone(),
            code: None,
            dropped: result.dropped.clone(),
            assumptions: result.assumptions.iter().chain(&result.warnings).cloned().collect(),
        }
    }

    pub fn tail_estimate(&self, channel: &ChannelModel) -> Result<f64> {
        dropped_tail_estimate(&self.dropped, channel)
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub multistart: MultiStart,
    pub tsb: TsbOptions,
}

/// Unclipped bound value with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub params: Value,
}

fn geometric_params(b: &GeometricBound) -> Value {
    json!({ "region": b.region, "abs_error": b.abs_error, "union_fallback": b.union_fallback })
}

/// Checks that `kind` applies to `input` on `channel`.
pub fn check_applicable(kind: BoundKind, input: &BoundInput, channel: &ChannelModel) -> Result<()> {
    if kind.biawgn_only() && !channel.is_biawgn() {
        return Err(Error::invalid(format!("bound '{kind}' is implemented for the BIAWGN channel only")));
    }
    if kind.needs_code() && input.code.is_none() {
        return Err(Error::invalid(format!(
            "bound '{kind}' applies to specific codes only, not to spectra or ensembles"
        )));
    }
    Ok(())
}

/// Evaluates one bound at one channel point.
pub fn evaluate(kind: BoundKind, input: &BoundInput, channel: &ChannelModel, opts: &EvalOptions) -> Result<Evaluation> {
    check_applicable(kind, input, channel)?;
    let spectrum = &input.spectrum;
    let code = || input.code.as_ref().expect("checked above");
    let (value, params) = match kind {
        BoundKind::Union => (union_bound(spectrum, channel)?, json!({})),
        BoundKind::Bhattacharyya => (bhattacharyya_bound(spectrum, channel), json!({})),
        BoundKind::Gallager65 => {
            let o = optimize_gallager65(code(), channel, &opts.multistart)?;
            (o.value, json!(o.params))
        }
        BoundKind::Ds2 => {
            let family = if channel.is_biawgn() { TiltFamily::Gaussian } else { TiltFamily::Llr };
            let o = optimize_ds2(spectrum, channel, family, &opts.multistart)?;
            (o.value, json!(o.params))
        }
        BoundKind::Sphere | BoundKind::ShiftedSphere => {
            let b = sphere_bound(spectrum, channel, kind == BoundKind::ShiftedSphere)?;
            (b.value, geometric_params(&b))
        }
        BoundKind::Tsb => {
            let b = tsb_quadrature(spectrum, channel, None, opts.tsb)?;
            let mut p = geometric_params(&b);
            p["slice_clip"] = json!(opts.tsb.clip);
            (b.value, p)
        }
        BoundKind::Decaen => (decaen_ml_bound(code(), channel)?, json!({})),
        BoundKind::CohenMerhav => {
            let o = optimize_ml_lower_bound(code(), channel)?;
            (o.value, json!({ "a": o.a }))
        }
    };
    if !value.is_finite() || value < 0.0 {
        return Err(Error::Numeric(format!("bound '{kind}' evaluated to {value}")));
    }
    Ok(Evaluation { value, params })
}

/// A bound over a grid. `values` are clipped to `[0, 1]`; the unclipped value
/// is kept in each point's parameters under `raw`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    pub name: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub params: Vec<Value>,
    pub metadata: BTreeMap<String, Value>,
}

/// Evaluates `kind` at every channel point in parallel; results keep grid order.
pub fn evaluate_curve(kind: BoundKind, input: &BoundInput, channels: &[ChannelModel], opts: &EvalOptions) -> Result<BoundCurve> {
    if channels.is_empty() {
        return Err(Error::invalid("empty channel grid"));
    }
    if let Some(ch) = channels.first() {
        check_applicable(kind, input, ch)?;
    }
    let points: Vec<Evaluation> = channels
        .par_iter()
        .map(|ch| evaluate(kind, input, ch, opts))
        .collect::<Result<_>>()?;
    let mut metadata = BTreeMap::new();
    metadata.insert("assumptions".into(), json!(input.assumptions));
    metadata.insert("clipped_to_unit_interval".into(), json!(true));
    metadata.insert("lower_bound".into(), json!(kind.is_lower()));
    if !input.dropped.is_empty() {
        let tails = channels.iter().map(|ch| input.tail_estimate(ch)).collect::<Result<Vec<_>>>()?;
        metadata.insert("truncation_tail".into(), json!(tails));
    }
    if kind == BoundKind::Tsb {
        metadata.insert("slice_clip".into(), json!(opts.tsb.clip));
    }
    Ok(BoundCurve {
        name: kind.name().to_string(),
        grid: channels.iter().map(ChannelModel::grid_value).collect(),
        values: points.iter().map(|e| e.value.clamp(0.0, 1.0)).collect(),
        params: points
            .into_iter()
            .map(|e| {
                let mut p = e.params;
                p["raw"] = json!(e.value);
                p
            })
            .collect(),
        metadata,
    })
}
