//! Flat `key = value` configuration files.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One setting, with the line it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parse `key = value` lines. Blank lines and lines starting with `#` are
/// skipped; keys may use `-` or `_`.
pub fn parse_config(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| ConfigError::Parse { line, msg: format!("expected key=value, got '{s}'") })?;
        let key = k.trim().replace('_', "-");
        let value = v.trim().to_string();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(ConfigError::Parse { line, msg: format!("invalid key '{}'", k.trim()) });
        }
        if value.is_empty() {
            return Err(ConfigError::Parse { line, msg: format!("missing value for '{key}'") });
        }
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(ConfigError::Parse { line, msg: format!("'{key}' already set on line {}", prev.line) });
        }
        out.push(Entry { line, key, value });
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<Vec<Entry>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_comments() {
        assert!(parse_config("").unwrap().is_empty());
        assert!(parse_config("\n# hbar = 1\n   \n").unwrap().is_empty());
    }

    #[test]
    fn keys_normalized() {
        let e = parse_config("hbar = 0.5\nmax_levels=3\n").unwrap();
        assert_eq!(e[0], Entry { line: 1, key: "hbar".into(), value: "0.5".into() });
        assert_eq!(e[1].key, "max-levels");
        assert_eq!(e[1].line, 2);
    }

    #[test]
    fn malformed_line_named() {
        let err = parse_config("hbar=1\n\nlevels 4\n").unwrap_err();
        assert_eq!(err, ConfigError::Parse { line: 3, msg: "expected key=value, got 'levels 4'".into() });
        assert!(err.to_string().starts_with("line 3:"));
        assert!(matches!(parse_config("a b=1"), Err(ConfigError::Parse { line: 1, .. })));
        assert!(matches!(parse_config("x=1\nx=2"), Err(ConfigError::Parse { line: 2, .. })));
        assert!(matches!(parse_config("x="), Err(ConfigError::Parse { line: 1, .. })));
    }
}
