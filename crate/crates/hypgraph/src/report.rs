//! CSV output of stability reports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use hypgraph_core::family::{StabilityReport, COLUMNS};

/// Header line, one row per member; reals in `{:.11e}` (12 significant digits).
pub fn emit_csv(report: &StabilityReport) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for row in &report.rows {
        for v in row.reals() {
            write!(out, "{v:.11e},").expect("writing to a String");
        }
        out.push_str(if row.cap_pass { "true" } else { "false" });
        out.push('\n');
    }
    out
}

pub fn write_csv(report: &StabilityReport, path: &Path) -> anyhow::Result<()> {
    fs::write(path, emit_csv(report)).with_context(|| format!("writing report to {}", path.display()))
}
