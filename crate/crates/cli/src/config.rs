//! `key = value` configuration files merged under the command-line flags.

use gl3_core::{Error, Result};
use std::collections::BTreeSet;
use std::path::Path;

/// Parses `key = value` lines; `#` starts a comment, keys may use `_` or `-`.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Format(format!("config line {}: expected key = value, got {raw:?}", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::Format(format!("config line {}: empty key", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Long flags already given on the command line, without the leading `--`.
fn given_flags(args: &[String]) -> BTreeSet<String> {
    args.iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect()
}

/// Location of `--config` in `args`, if any.
fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Appends the config-file settings that the command line does not already set.
/// `true`/`false` values switch boolean flags on or leave them off.
pub fn merge_config(args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let given = given_flags(&args);
    let mut out = args;
    for (k, v) in parse_config(&text)? {
        if k == "config" || given.contains(&k) {
            continue;
        }
        match v.as_str() {
            "true" => out.push(format!("--{k}")),
            "false" => {}
            _ => out.push(format!("--{k}={v}")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let c = parse_config("# header\nn_grid = 50,100 # inline\n\nt=40\n").unwrap();
        assert_eq!(c, vec![("n-grid".to_string(), "50,100".to_string()), ("t".to_string(), "40".to_string())]);
        assert!(matches!(parse_config("just words"), Err(Error::Format(_))));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        std::fs::write(&p, "t = 40\nseed = 3\ntiming = false\n").unwrap();
        let args: Vec<String> = ["gl3", "scan", "--config", p.to_str().unwrap(), "--t=20"].iter().map(|s| s.to_string()).collect();
        let merged = merge_config(args).unwrap();
        assert!(merged.contains(&"--t=20".to_string()));
        assert!(!merged.contains(&"--t=40".to_string()));
        assert!(merged.contains(&"--seed=3".to_string()));
        assert!(!merged.iter().any(|a| a.starts_with("--timing")));
    }
}
