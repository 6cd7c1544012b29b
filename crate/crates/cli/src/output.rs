use std::path::{Path, PathBuf};

use mlbound_core::{BoundCurve, Result};
use serde_json::Value;

use crate::args::OutputArgs;

/// Writes `data` to `--out` (plus the metadata sidecar) or to stdout.
pub fn emit(out: &OutputArgs, data: &str, meta: Value) -> Result<()> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, data)?;
            let meta = serde_json::to_string_pretty(&meta).expect("metadata serializes");
            std::fs::write(sidecar_path(path), meta + "\n")?;
        }
        None => print!("{data}"),
    }
    Ok(())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn number(x: f64) -> String {
    format!("{x:e}")
}

/// Grid coordinates print in plain decimal so `0.5` stays `0.5`.
pub fn grid_number(x: f64) -> String {
    format!("{x}")
}

/// One row per grid point and bound, in grid order.
pub fn curves_csv(curves: &[BoundCurve], grid_label: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| mlbound_core::Error::Io(std::io::Error::other(e));
    w.write_record([grid_label, "bound", "value", "param_json"]).map_err(io)?;
    let points = curves.first().map_or(0, |c| c.grid.len());
    for i in 0..points {
        for c in curves {
            w.write_record([grid_number(c.grid[i]), c.name.clone(), number(c.values[i]), c.params[i].to_string()])
                .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| mlbound_core::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| mlbound_core::Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| mlbound_core::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
