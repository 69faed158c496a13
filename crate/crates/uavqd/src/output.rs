//! Trajectory serialization: CSV for the numeric record, JSON for metadata
//! and comparison reports.
//!
//! CSV columns: `time`, one per observable, `norm`, `trace`, and for
//! variational runs `mclachlan_distance` and `ansatz_size`. Floats are
//! written with 17 significant digits so the files round-trip exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lindblad::TrajectoryRecord;

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render a trajectory as CSV text.
pub fn trajectory_to_csv(rec: &TrajectoryRecord) -> String {
    let mut header = vec!["time".to_string()];
    header.extend(rec.observables.iter().map(|(n, _)| n.clone()));
    header.push("norm".into());
    header.push("trace".into());
    if rec.mclachlan_distance.is_some() {
        header.push("mclachlan_distance".into());
    }
    if rec.ansatz_size.is_some() {
        header.push("ansatz_size".into());
    }
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..rec.len() {
        let mut row = vec![fmt_f64(rec.times[i])];
        for (_, col) in &rec.observables {
            row.push(fmt_f64(col[i]));
        }
        row.push(fmt_f64(rec.frobenius_norm[i]));
        row.push(fmt_f64(rec.trace[i]));
        if let Some(d) = &rec.mclachlan_distance {
            row.push(fmt_f64(d[i]));
        }
        if let Some(s) = &rec.ansatz_size {
            row.push(s[i].to_string());
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_trajectory_csv(path: &Path, rec: &TrajectoryRecord) -> Result<()> {
    fs::write(path, trajectory_to_csv(rec))?;
    Ok(())
}

/// A parsed CSV trajectory: named columns of floats.
#[derive(Clone, Debug)]
pub struct TrajectoryTable {
    pub columns: Vec<(String, Vec<f64>)>,
}

impl TrajectoryTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?;
        let names: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut columns: Vec<(String, Vec<f64>)> =
            names.iter().map(|n| (n.clone(), Vec::new())).collect();
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() {
                return Err(Error::InvalidArgument(format!(
                    "CSV row {} has {} fields, expected {}",
                    lineno + 2,
                    fields.len(),
                    names.len()
                )));
            }
            for (col, field) in columns.iter_mut().zip(fields) {
                let v: f64 = field.parse().map_err(|_| {
                    Error::InvalidArgument(format!("bad number '{field}' in CSV row {}", lineno + 2))
                })?;
                col.1.push(v);
            }
        }
        Ok(Self { columns })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ColumnDeviation {
    pub max_abs: f64,
    pub rms: f64,
}

/// Per-observable deviation summary between two trajectories on the same
/// time grid.
#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub columns: BTreeMap<String, ColumnDeviation>,
    pub overall_max_abs: f64,
    pub overall_max_rms: f64,
}

/// Compare shared non-diagnostic columns of two tables. The time grids must
/// be identical; resampling is not attempted.
pub fn compare(a: &TrajectoryTable, b: &TrajectoryTable) -> Result<CompareReport> {
    let ta = a
        .column("time")
        .ok_or_else(|| Error::InvalidArgument("left table has no time column".into()))?;
    let tb = b
        .column("time")
        .ok_or_else(|| Error::InvalidArgument("right table has no time column".into()))?;
    if ta.len() != tb.len() || ta.iter().zip(tb).any(|(x, y)| x != y) {
        return Err(Error::InvalidArgument("time grids differ".into()));
    }
    let skip = ["time", "mclachlan_distance", "ansatz_size"];
    let mut columns = BTreeMap::new();
    let mut overall_max_abs: f64 = 0.0;
    let mut overall_max_rms: f64 = 0.0;
    for (name, col_a) in &a.columns {
        if skip.contains(&name.as_str()) {
            continue;
        }
        let Some(col_b) = b.column(name) else {
            continue;
        };
        let mut max_abs: f64 = 0.0;
        let mut sq = 0.0;
        for (x, y) in col_a.iter().zip(col_b) {
            let d = (x - y).abs();
            max_abs = max_abs.max(d);
            sq += d * d;
        }
        let rms = (sq / col_a.len() as f64).sqrt();
        overall_max_abs = overall_max_abs.max(max_abs);
        overall_max_rms = overall_max_rms.max(rms);
        columns.insert(name.clone(), ColumnDeviation { max_abs, rms });
    }
    if columns.is_empty() {
        return Err(Error::InvalidArgument("no shared observable columns".into()));
    }
    Ok(CompareReport {
        columns,
        overall_max_abs,
        overall_max_rms,
    })
}

/// Write the metadata sidecar: resolved config, crate version, and the
/// numerical conventions in force.
pub fn write_meta<C: Serialize>(path: &Path, config: &C) -> Result<()> {
    let meta = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": serde_json::to_value(config)
            .map_err(|e| Error::Config(e.to_string()))?,
        "conventions": {
            "vectorization": "column-stacking: vec(rho)[i + N*j] = rho[i][j]",
            "rotation": "exp(-i * theta * P / 2)",
            "qubit_order": "qubit 0 is the leftmost Kronecker factor",
            "rates": "folded into jump operators as sqrt(rate) * L",
            "dicke_units": "hbar = c = 1, Gamma0 = 1, lambda0 = 1, omega0 = 2*pi",
            "dicke_normalization": "Gamma^{ii} = Gamma0 via Im g(r->0) = k0/(6*pi)",
        },
    });
    fs::write(path, serde_json::to_string_pretty(&meta).unwrap() + "\n")?;
    Ok(())
}
