//! `key = value` configuration files mirroring the long command-line flags.
//!
//! Blank lines and text after `#` are ignored. `true` turns a key into a bare
//! flag, `false` drops it.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};

pub fn parse(text: &str) -> anyhow::Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected key = value, got {line:?}", i + 1);
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key.contains(char::is_whitespace) {
            bail!("line {}: invalid key {key:?}", i + 1);
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

pub fn to_args(pairs: &[(String, String)]) -> Vec<String> {
    let mut args = Vec::new();
    for (k, v) in pairs {
        match v.as_str() {
            "true" => args.push(format!("--{k}")),
            "false" => {}
            _ => {
                args.push(format!("--{k}"));
                args.push(v.clone());
            }
        }
    }
    args
}

/// Removes `--config FILE` from `argv` and splices the file's flags in right
/// after the subcommand, so flags given on the command line win.
pub fn expand(argv: Vec<String>, subcommands: &[&str]) -> anyhow::Result<Vec<String>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().context("--config needs a file argument")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {path}"))?;
    let extra = to_args(&parse(&text).with_context(|| format!("in config {path}"))?);
    let at = rest
        .iter()
        .position(|a| subcommands.contains(&a.as_str()))
        .map_or(rest.len(), |i| i + 1);
    rest.splice(at..at, extra);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let p = parse("# header\nn = 4\n\nmasses=0.5,0.1  # trailing\n--L = 2\n").unwrap();
        assert_eq!(
            p,
            vec![
                ("n".into(), "4".into()),
                ("masses".into(), "0.5,0.1".into()),
                ("L".into(), "2".into())
            ]
        );
        assert!(parse("n 4").is_err());
        assert!(parse("= 4").is_err());
    }

    #[test]
    fn booleans_become_flags() {
        let args = to_args(&[("quiet".into(), "true".into()), ("loud".into(), "false".into())]);
        assert_eq!(args, strings(&["--quiet"]));
    }

    #[test]
    fn splices_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "n = 4\nlambda = 0.5\n").unwrap();
        let argv = strings(&["hypgraph", "--config", path.to_str().unwrap(), "cap", "--n", "3"]);
        let out = expand(argv, &["cap"]).unwrap();
        assert_eq!(out, strings(&["hypgraph", "cap", "--n", "4", "--lambda", "0.5", "--n", "3"]));
    }

    #[test]
    fn missing_file_names_path() {
        let err = expand(strings(&["x", "--config=/nonexistent/cfg", "mass"]), &["mass"]).unwrap_err();
        assert!(format!("{err:#}").contains("/nonexistent/cfg"));
    }
}
