//! Whitespace-separated profile tables: `rho f [df]` per line, `#` comments.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use hypgraph_core::RadialProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub rho: Vec<f64>,
    pub f: Vec<f64>,
    pub df: Option<Vec<f64>>,
}

pub fn parse(text: &str) -> anyhow::Result<Table> {
    let mut rho = Vec::new();
    let mut f = Vec::new();
    let mut df = Vec::new();
    let mut width = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols = line
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("line {}: not a number", i + 1))?;
        if !(2..=3).contains(&cols.len()) {
            bail!("line {}: expected 2 or 3 columns, got {}", i + 1, cols.len());
        }
        match width {
            None => width = Some(cols.len()),
            Some(w) if w != cols.len() => bail!("line {}: column count changed from {w} to {}", i + 1, cols.len()),
            _ => {}
        }
        rho.push(cols[0]);
        f.push(cols[1]);
        if cols.len() == 3 {
            df.push(cols[2]);
        }
    }
    if rho.is_empty() {
        bail!("table has no data rows");
    }
    Ok(Table {
        rho,
        f,
        df: (width == Some(3)).then_some(df),
    })
}

pub fn load_profile(path: &Path, n: usize) -> anyhow::Result<RadialProfile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading table {}", path.display()))?;
    let t = parse(&text).with_context(|| format!("in table {}", path.display()))?;
    RadialProfile::tabulated(n, t.rho, t.f, t.df).with_context(|| format!("table {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_and_three_columns() {
        let t = parse("# rho f\n0.0 0.0\n1.0 0.5\n").unwrap();
        assert_eq!(t.rho, vec![0.0, 1.0]);
        assert!(t.df.is_none());
        let t = parse("0 0 1\n1 0.5 0.25 # tail\n").unwrap();
        assert_eq!(t.df, Some(vec![1.0, 0.25]));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("0 0\n1 0.5 0.2\n").is_err());
        assert!(parse("0 x\n").is_err());
        assert!(parse("1\n").is_err());
        assert!(parse("# nothing\n").is_err());
    }
}
