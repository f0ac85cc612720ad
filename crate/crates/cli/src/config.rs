//! `key = value` option files.
//!
//! Keys are the long flag names, with `-` and `_` interchangeable. Blank
//! lines and `#` comments are ignored. A key may appear at most once.

use std::fmt;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileOptions {
    pub level: Option<String>,
    pub phi: Option<f64>,
    pub eps: Option<f64>,
    pub k_max: Option<u64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub init: Option<usize>,
    pub out: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn number<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError { line, message: format!("invalid value `{value}` for `{key}`") })
}

fn finite(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    let x: f64 = number(key, value, line)?;
    if !x.is_finite() {
        return Err(ConfigError { line, message: format!("`{key}` must be finite") });
    }
    Ok(x)
}

fn set<T>(slot: &mut Option<T>, key: &str, value: T, line: usize) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(ConfigError { line, message: format!("duplicate key `{key}`") });
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_config(text: &str) -> Result<FileOptions, ConfigError> {
    let mut opts = FileOptions::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError { line, message: "expected `key = value`".into() });
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if value.is_empty() {
            return Err(ConfigError { line, message: format!("missing value for `{key}`") });
        }
        match key.as_str() {
            "level" => set(&mut opts.level, &key, value.to_string(), line)?,
            "phi" => set(&mut opts.phi, &key, finite(&key, value, line)?, line)?,
            "eps" => set(&mut opts.eps, &key, finite(&key, value, line)?, line)?,
            "k-max" => set(&mut opts.k_max, &key, number(&key, value, line)?, line)?,
            "shots" => set(&mut opts.shots, &key, number(&key, value, line)?, line)?,
            "seed" => set(&mut opts.seed, &key, number(&key, value, line)?, line)?,
            "init" => set(&mut opts.init, &key, number(&key, value, line)?, line)?,
            "out" => set(&mut opts.out, &key, value.to_string(), line)?,
            _ => return Err(ConfigError { line, message: format!("unknown key `{key}`") }),
        }
    }
    Ok(opts)
}
