//! Flat `key = value` text configuration.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    := blank | comment | entry
//! comment := '#' any*
//! entry   := key ws* '=' ws* value ws* ('#' any*)?
//! key     := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Values are kept as strings; typed accessors report the source line on
//! failure. Duplicate keys are rejected.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlatConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl FlatConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Config {
                    line,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let valid_key = key
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid_key {
                return Err(Error::Config {
                    line,
                    message: format!("invalid key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(Error::Config {
                    line,
                    message: format!("missing value for `{key}`"),
                });
            }
            if let Some((first, _)) = entries.insert(key.to_string(), (line, value.to_string())) {
                return Err(Error::Config {
                    line,
                    message: format!("duplicate key `{key}` (first set on line {first})"),
                });
            }
        }
        Ok(FlatConfig { entries })
    }

    pub fn insert(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (0, value.into()));
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Line number a key was read from (0 for programmatic entries).
    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|(line, _)| *line)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    /// Parses a finite decimal value.
    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        let Some((line, raw)) = self.entries.get(key) else {
            return Ok(None);
        };
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(Error::Config {
                line: *line,
                message: format!("`{key}` must be a finite decimal literal, found `{raw}`"),
            }),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?.ok_or_else(|| Error::Config {
            line: 0,
            message: format!("missing required key `{key}`"),
        })
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        let Some((line, raw)) = self.entries.get(key) else {
            return Ok(None);
        };
        raw.parse::<u64>().map(Some).map_err(|_| Error::Config {
            line: *line,
            message: format!("`{key}` must be a non-negative integer, found `{raw}`"),
        })
    }

    /// Rejects any key outside `allowed`, pointing at its line.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        for (key, (line, _)) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config {
                    line: *line,
                    message: format!("unknown key `{key}`"),
                });
            }
        }
        Ok(())
    }
}
