//! Line-oriented `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored; a trailing `# ...`
//! after a value is a comment. Keys are unique.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::LabError;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| LabError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(LabError::Config(format!("line {}: bad key `{key}`", i + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(LabError::Config(format!("line {}: duplicate key `{key}`", i + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Typed value or `default` when the key is absent.
    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, LabError> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| LabError::Config(format!("`{key}`: cannot parse `{v}`"))),
        }
    }

    /// Like [`Config::get_or`], but also accepts `1e6`-style integers.
    pub fn count_or(&self, key: &str, default: usize) -> Result<usize, LabError> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(v) => {
                if let Ok(n) = v.parse::<usize>() {
                    return Ok(n);
                }
                let f: f64 = v.parse().map_err(|_| LabError::Config(format!("`{key}`: cannot parse `{v}`")))?;
                if f >= 0.0 && f.fract() == 0.0 && f < 1e15 {
                    Ok(f as usize)
                } else {
                    Err(LabError::Config(format!("`{key}`: `{v}` is not a count")))
                }
            }
        }
    }

    /// Keys not in `known`, for typo detection.
    pub fn unknown_keys(&self, known: &[&str]) -> Vec<String> {
        self.entries.keys().filter(|k| !known.contains(&k.as_str())).cloned().collect()
    }
}
