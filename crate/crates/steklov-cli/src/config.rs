//! Flat key=value configuration with flag overrides.
//!
//! A config file supplies defaults; a flag given on the command line always
//! wins. Every key a run does not recognize is rejected, mirroring how
//! unknown flags are rejected by the parser. The resolved settings are
//! echoed into the JSON `meta` block so a run can be reproduced from its
//! output alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

/// Resolved configuration state: file-provided defaults, the set of keys
/// the active subcommand consulted, and the echo of every resolved value.
pub struct Settings {
    map: BTreeMap<String, String>,
    consumed: BTreeSet<String>,
    pub echo: BTreeMap<String, String>,
}

impl Settings {
    pub fn empty() -> Self {
        Settings {
            map: BTreeMap::new(),
            consumed: BTreeSet::new(),
            echo: BTreeMap::new(),
        }
    }

    /// Parses a flat key=value file. `#` starts a comment, blank lines are
    /// skipped, duplicate keys and a `config` key are rejected.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(format!(
                "config line {} is not key=value: '{raw}'",
                lineno + 1
            ))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key == "config" {
                return Err("config files cannot set 'config'".into());
            }
            if map.insert(key.clone(), value).is_some() {
                return Err(format!("duplicate config key '{key}'"));
            }
        }
        Ok(Settings {
            map,
            consumed: BTreeSet::new(),
            echo: BTreeMap::new(),
        })
    }

    /// Resolves one setting: flag value if given, else the config file's,
    /// else the default. The outcome lands in the echo map.
    pub fn resolve<T>(
        &mut self,
        key: &str,
        flag: Option<T>,
        default: Option<T>,
    ) -> Result<Option<T>, String>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.consumed.insert(key.to_string());
        let value = match flag {
            Some(v) => Some(v),
            None => match self.map.get(key) {
                Some(raw) => Some(
                    raw.parse::<T>()
                        .map_err(|e| format!("config key '{key}': {e}"))?,
                ),
                None => default,
            },
        };
        if let Some(v) = &value {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    /// Like `resolve`, but the setting must end up present.
    pub fn require<T>(&mut self, key: &str, flag: Option<T>, default: Option<T>) -> Result<T, String>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.resolve(key, flag, default)?
            .ok_or(format!("missing required setting --{key}"))
    }

    /// Records a non-flag echo entry (for example the subcommand name).
    pub fn note(&mut self, key: &str, value: &str) {
        self.echo.insert(key.to_string(), value.to_string());
    }

    /// Rejects config keys no resolved setting consulted.
    pub fn finish(&self) -> Result<(), String> {
        let unknown: Vec<&str> = self
            .map
            .keys()
            .filter(|k| !self.consumed.contains(*k))
            .map(|k| k.as_str())
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(format!(
                "unknown config key(s) for this subcommand: {}",
                unknown.join(", ")
            ))
        }
    }
}
