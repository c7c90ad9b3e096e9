//! Trace serialization. One row per recorded iteration with the fixed header
//! `iter,f_value,dist_to_min,residual,rho,ls_trials`; floats in scientific
//! notation with 17 significant digits; empty fields where a column is
//! undefined. Identical runs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use holder_pg::trace::SolverTrace;

pub const CSV_HEADER: &str = "iter,f_value,dist_to_min,residual,rho,ls_trials";

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt_float(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

pub fn trace_to_csv(trace: &SolverTrace) -> String {
    let mut out = String::with_capacity(trace.records.len() * 80 + 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &trace.records {
        out.push_str(&r.iter.to_string());
        out.push(',');
        out.push_str(&fmt_float(r.f_value));
        out.push(',');
        out.push_str(&fmt_opt_float(r.dist_to_min));
        out.push(',');
        out.push_str(&fmt_opt_float(r.residual));
        out.push(',');
        out.push_str(&fmt_opt_float(r.rho));
        out.push(',');
        if let Some(t) = r.ls_trials {
            out.push_str(&t.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn write_trace_csv(trace: &SolverTrace, path: &Path) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(trace_to_csv(trace).as_bytes())?;
    Ok(())
}

/// Column access for tests and the sweep plotter.
pub fn parse_column(csv: &str, column: &str) -> Vec<Option<f64>> {
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or_default();
    let idx = header
        .split(',')
        .position(|c| c == column)
        .unwrap_or_else(|| panic!("unknown CSV column `{column}`"));
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let field = l.split(',').nth(idx).unwrap_or("");
            if field.is_empty() {
                None
            } else {
                Some(field.parse().expect("well-formed float field"))
            }
        })
        .collect()
}
