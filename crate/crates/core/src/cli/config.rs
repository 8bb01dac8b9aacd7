//! `--config` files: one `key = value` per line, `#` comments. Entries are
//! spliced in front of the command-line flags so the command line wins.

use crate::error::{Error, Result};

pub fn config_args(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidInput(format!("config line {}: expected `key = value`", i + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k == "config" {
            return Err(Error::InvalidInput(format!("config line {}: bad key {k:?}", i + 1)));
        }
        out.push(format!("--{k}"));
        out.push(v.to_string());
    }
    Ok(out)
}

/// Expands `--config <path>` (or `--config=<path>`) after the subcommand.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| Error::InvalidInput("--config needs a path".into()))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path)?;
    let extra = config_args(&text)?;
    let at = rest.len().min(2);
    rest.splice(at..at, extra);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let a = config_args("# probe\niters = 10\n\nseed=7 # inline\n").unwrap();
        assert_eq!(a, vec!["--iters", "10", "--seed", "7"]);
        assert!(config_args("iters 10").is_err());
    }
}
