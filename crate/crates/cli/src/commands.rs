use std::path::Path;

use mlbound_core::codebook::{enumerate_iowef, enumerate_spectrum, iowef_to_json, load_code, parse_weight_table, spectrum_to_json};
use mlbound_core::curve::{evaluate_curve, EvalOptions};
use mlbound_core::density::{pb_lower_from_entropy, DensityPoint, FanoNormalization};
use mlbound_core::ensemble::{conv_iowef, ensemble_spectrum, load_component, load_ensemble, Caps};
use mlbound_core::geometric::TsbOptions;
use mlbound_core::lower::{cohen_merhav_bound, decaen_bound};
use mlbound_core::optimize::MultiStart;
use mlbound_core::oracle::{exact_ml_bsc, mc_ml_awgn, mc_ml_bsc, ErrorMetric};
use mlbound_core::{BoundCurve, BoundInput, BoundKind, ChannelModel, Error, EventSystem, Result, WeightingFamily};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::output::{curves_csv, emit, grid_number, number, table_csv};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Spectrum(a) => spectrum(a),
        Command::ConvIowef(a) => conv(a),
        Command::TurboIowef(a) => turbo(a),
        Command::Upper(a) => upper(a),
        Command::Lower(a) => lower(a),
        Command::Density(a) => density(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn spectrum(a: SpectrumArgs) -> Result<()> {
    let code = load_code(&a.code)?;
    let mut meta = Map::new();
    meta.insert("minimum_distance".into(), json!(code.minimum_distance()?));
    let data = if a.iowef {
        iowef_to_json(&enumerate_iowef(&code)?, meta)
    } else {
        spectrum_to_json(&enumerate_spectrum(&code)?, meta)
    };
    emit(&a.output, &(data + "\n"), json!({ "command": "spectrum", "code": path_str(&a.code), "iowef": a.iowef }))
}

fn conv(a: ConvArgs) -> Result<()> {
    let comp = load_component(&a.component)?;
    let caps = Caps {
        w_max: a.w_max,
        j_max: a.j_max,
    };
    let table = conv_iowef(&comp, a.length, caps)?;
    let mut meta = Map::new();
    meta.insert("termination".into(), json!(format!("{:?}", comp.termination()).to_lowercase()));
    meta.insert("overflow".into(), json!(table.overflow));
    meta.insert("warnings".into(), json!(table.warnings));
    let data = iowef_to_json(&table.iowef, meta);
    emit(
        &a.output,
        &(data + "\n"),
        json!({ "command": "conv-iowef", "component": path_str(&a.component), "length": a.length, "w_max": a.w_max, "j_max": a.j_max }),
    )
}

fn turbo(a: TurboArgs) -> Result<()> {
    let spec = load_ensemble(&a.ensemble)?;
    let r = ensemble_spectrum(&spec, a.caps.w_max, a.caps.d_max)?;
    let mut meta = Map::new();
    meta.insert("assumptions".into(), json!(r.assumptions));
    meta.insert("warnings".into(), json!(r.warnings));
    meta.insert("complete".into(), json!(r.is_complete()));
    meta.insert("dropped".into(), json!(r.dropped));
    let data = iowef_to_json(&r.iowef, meta);
    emit(
        &a.output,
        &(data + "\n"),
        json!({ "command": "turbo-iowef", "ensemble": path_str(&a.ensemble), "w_max": a.caps.w_max, "d_max": a.caps.d_max }),
    )
}

/// Loads the bound input and its default code rate.
fn load_input(input: &InputArgs, caps: &CapArgs) -> Result<(BoundInput, f64)> {
    if let Some(path) = &input.code {
        let code = load_code(path)?;
        let rate = code.rate();
        return Ok((BoundInput::from_code(code)?, rate));
    }
    if let Some(path) = &input.spectrum {
        let text = std::fs::read_to_string(path)?;
        let spectrum = parse_weight_table(&text)?.spectrum();
        let rate = spectrum.rate();
        let mut b = BoundInput::from_spectrum(spectrum);
        // Weight files written by turbo-iowef carry the caps' dropped mass.
        let raw: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(d) = raw.pointer("/metadata/dropped") {
            b.dropped = serde_json::from_value(d.clone()).map_err(|e| Error::Parse(format!("metadata.dropped: {e}")))?;
        }
        if let Some(s) = raw.pointer("/metadata/assumptions") {
            b.assumptions = serde_json::from_value(s.clone()).map_err(|e| Error::Parse(format!("metadata.assumptions: {e}")))?;
        }
        return Ok((b, rate));
    }
    let path = input.ensemble.as_ref().expect("clap requires one input");
    let spec = load_ensemble(path)?;
    let r = ensemble_spectrum(&spec, caps.w_max, caps.d_max)?;
    Ok((BoundInput::from_ensemble(&r), spec.rate()))
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::invalid(format!("'{s}' is not a number")));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(Error::invalid(format!("grid '{text}' needs start <= stop and step > 0")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // Rounding keeps 0.1-type steps from printing as 0.30000000000000004.
            Ok((0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(Error::invalid(format!("grid '{text}' must be a value list or start:stop:step"))),
    }
}

impl ChannelArgs {
    fn build(&self, default_rate: f64) -> Result<(Vec<ChannelModel>, &'static str)> {
        match self.channel {
            ChannelKind::Biawgn => {
                if self.p.is_some() {
                    return Err(Error::invalid("--p applies to the BSC only"));
                }
                let rate = self.rate.unwrap_or(default_rate);
                let grid = match (&self.ebno, self.ebno_db) {
                    (Some(g), _) => parse_grid(g)?,
                    (None, Some(x)) => vec![x],
                    (None, None) => return Err(Error::invalid("the BIAWGN channel needs --ebno or --ebno-db")),
                };
                let channels = grid.into_iter().map(|x| ChannelModel::biawgn(x, rate)).collect::<Result<_>>()?;
                Ok((channels, "ebno_db"))
            }
            ChannelKind::Bsc => {
                if self.ebno.is_some() || self.ebno_db.is_some() {
                    return Err(Error::invalid("Eb/N0 flags apply to the BIAWGN channel only"));
                }
                let p = self.p.as_deref().ok_or_else(|| Error::invalid("the BSC needs --p"))?;
                let channels = parse_grid(p)?.into_iter().map(ChannelModel::bsc).collect::<Result<_>>()?;
                Ok((channels, "p"))
            }
        }
    }
}

fn parse_kinds(names: &[String], lower: bool) -> Result<Vec<BoundKind>> {
    names
        .iter()
        .map(|n| {
            let k: BoundKind = n.trim().parse()?;
            if k.is_lower() != lower {
                let which = if lower { "lower" } else { "upper" };
                return Err(Error::invalid(format!("'{k}' is not an {which} bound")));
            }
            Ok(k)
        })
        .collect()
}

fn emit_curves(out: &OutputArgs, format: Format, curves: &[BoundCurve], grid_label: &str, mut meta: Value) -> Result<()> {
    meta["grid"] = json!(grid_label);
    meta["curves"] = curves.iter().map(|c| json!({ "bound": c.name, "metadata": c.metadata })).collect();
    let data = match format {
        Format::Csv => curves_csv(curves, grid_label)?,
        Format::Json => serde_json::to_string_pretty(curves).expect("curves serialize") + "\n",
    };
    emit(out, &data, meta)
}

fn input_name(input: &InputArgs) -> String {
    [&input.code, &input.spectrum, &input.ensemble]
        .into_iter()
        .flatten()
        .map(|p| path_str(p))
        .next()
        .unwrap_or_default()
}

fn upper(a: UpperArgs) -> Result<()> {
    let kinds = parse_kinds(&a.bounds, false)?;
    let (input, rate) = load_input(&a.input, &a.caps)?;
    let (channels, label) = a.channel.build(rate)?;
    if a.tsb_grid < 3 {
        return Err(Error::invalid("--tsb-grid must be at least 3"));
    }
    let opts = EvalOptions {
        multistart: MultiStart {
            seed: a.seed,
            ..Default::default()
        },
        tsb: TsbOptions {
            clip: !a.no_slice_clip,
            grid: a.tsb_grid,
        },
    };
    let curves = kinds
        .iter()
        .map(|&k| evaluate_curve(k, &input, &channels, &opts))
        .collect::<Result<Vec<_>>>()?;
    let meta = json!({ "command": "upper", "input": input_name(&a.input), "rate": rate, "seed": a.seed });
    emit_curves(&a.output, a.format, &curves, label, meta)
}

fn event_weights(spec: &str) -> Result<WeightingFamily> {
    Ok(match spec {
        "unit" => WeightingFamily::Unit,
        "inverse-degree" => WeightingFamily::InverseDegree,
        path => {
            let weights: Vec<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(path)?)
                .map_err(|e| Error::Parse(format!("weights file: {e}")))?;
            WeightingFamily::PerEvent { weights }
        }
    })
}

fn lower(a: LowerArgs) -> Result<()> {
    let kinds = parse_kinds(&a.bounds, true)?;
    if let Some(path) = &a.events {
        let system = EventSystem::load(path)?;
        let weights = event_weights(&a.weights)?;
        let union = system.union_probability();
        let mut results = Vec::new();
        for k in kinds {
            let (value, params) = match k {
                BoundKind::Decaen => (decaen_bound(&system), json!({ "union_probability": union })),
                _ => {
                    let b = cohen_merhav_bound(&system, &weights)?;
                    (b.value, json!({ "weights": weights, "warnings": b.warnings, "union_probability": union }))
                }
            };
            results.push((k, value, params));
        }
        let data = match a.format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = results.iter().map(|(k, v, p)| vec![k.to_string(), number(*v), p.to_string()]).collect();
                table_csv(&["bound", "value", "param_json"], &rows)?
            }
            Format::Json => {
                let v: Vec<Value> = results.iter().map(|(k, v, p)| json!({ "bound": k, "value": v, "params": p })).collect();
                serde_json::to_string_pretty(&v).expect("results serialize") + "\n"
            }
        };
        return emit(&a.output, &data, json!({ "command": "lower", "events": path_str(path) }));
    }
    let path = a.code.as_ref().ok_or_else(|| Error::invalid("lower needs --events or --code"))?;
    let code = load_code(path)?;
    let rate = code.rate();
    let input = BoundInput::from_code(code)?;
    let (channels, label) = a.channel.build(rate)?;
    let opts = EvalOptions::default();
    let curves = kinds
        .iter()
        .map(|&k| evaluate_curve(k, &input, &channels, &opts))
        .collect::<Result<Vec<_>>>()?;
    let meta = json!({ "command": "lower", "input": path_str(path), "rate": rate });
    emit_curves(&a.output, a.format, &curves, label, meta)
}

fn density(a: DensityArgs) -> Result<()> {
    let fano = match a.fano {
        FanoArg::Rate => FanoNormalization::Rate,
        FanoArg::Unit => FanoNormalization::Unit,
    };
    let mut rows = Vec::new();
    for &eps in &a.epsilon {
        for &t in &a.t {
            let p = DensityPoint::at_gap(a.capacity, eps, t, None)?;
            let pb = a.h_norm.map(|h| pb_lower_from_entropy(h, p.rate, fano)).transpose()?;
            rows.push(vec![
                grid_number(eps),
                grid_number(p.rate),
                grid_number(t),
                number(p.delta),
                pb.map(number).unwrap_or_default(),
            ]);
        }
    }
    let data = table_csv(&["epsilon", "rate", "t", "delta_min", "pb"], &rows)?;
    let meta = json!({ "command": "density", "capacity": a.capacity, "h_norm": a.h_norm, "fano": fano });
    emit(&a.output, &data, meta)
}

fn oracle(a: OracleArgs) -> Result<()> {
    let code = load_code(&a.code)?;
    let (channels, label) = a.channel.build(code.rate())?;
    let metric = match a.metric {
        MetricArg::Block => ErrorMetric::Block,
        MetricArg::Bit => ErrorMetric::Bit,
    };
    let mut rows = Vec::new();
    for ch in &channels {
        let (name, r) = match (a.method, ch) {
            (OracleMethod::Exact, ChannelModel::Bsc { p }) if metric == ErrorMetric::Block => ("ml-exact", exact_ml_bsc(&code, *p)?),
            (OracleMethod::Exact, _) => {
                return Err(Error::invalid("the exact oracle covers the BSC block error probability only"));
            }
            (OracleMethod::Mc, _) => {
                let seed = a.seed.ok_or_else(|| Error::invalid("Monte-Carlo runs need --seed"))?;
                match ch {
                    ChannelModel::Biawgn { .. } => ("ml-mc", mc_ml_awgn(&code, ch, a.samples, seed, metric)?),
                    ChannelModel::Bsc { p } if metric == ErrorMetric::Block => ("ml-mc", mc_ml_bsc(&code, *p, a.samples, seed)?),
                    ChannelModel::Bsc { .. } => return Err(Error::invalid("the BSC Monte-Carlo oracle reports block errors only")),
                }
            }
        };
        let params = json!({ "std_error": r.std_error, "samples": r.samples, "seed": r.seed, "tie_policy": r.tie_policy, "metric": metric });
        rows.push(vec![grid_number(ch.grid_value()), name.to_string(), number(r.estimate), params.to_string()]);
    }
    let data = table_csv(&[label, "bound", "value", "param_json"], &rows)?;
    emit(&a.output, &data, json!({ "command": "oracle", "code": path_str(&a.code), "samples": a.samples, "seed": a.seed }))
}
