//! Plain-text run configuration: `key = value` lines, optionally grouped
//! under `[command]` headers. Keys outside any section are shared by every
//! command that accepts them; flags given on the command line take
//! precedence.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed configuration file, keyed by section ("" for the top level).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ConfigFile::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::Config(format!("line {line_no}: unterminated section header")))?
                    .trim();
                if name.is_empty() {
                    return Err(CliError::Config(format!("line {line_no}: empty section name")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line_no}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(CliError::Config(format!("line {line_no}: missing key")));
            }
            let value = value.trim_matches('"').to_string();
            let entries = cfg.sections.entry(section.clone()).or_default();
            if entries.insert(key.to_string(), Entry { value, line: line_no }).is_some() {
                return Err(CliError::Config(format!("line {line_no}: duplicate key '{key}'")));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }

    /// Rejects unknown sections and keys. `known` maps each command to its
    /// accepted keys; a top-level key must be accepted by some command.
    pub fn validate(&self, known: &[(&str, &[&str])]) -> Result<(), CliError> {
        for (section, entries) in &self.sections {
            let allowed: Vec<&str> = if section.is_empty() {
                known.iter().flat_map(|(_, keys)| keys.iter().copied()).collect()
            } else {
                known
                    .iter()
                    .find(|(n, _)| n == section)
                    .ok_or_else(|| CliError::Config(format!("unknown section [{section}]")))?
                    .1
                    .to_vec()
            };
            for (key, entry) in entries {
                if !allowed.contains(&key.as_str()) {
                    let place = if section.is_empty() { "any command" } else { section.as_str() };
                    return Err(CliError::Config(format!("line {}: unknown key '{key}' for {place}", entry.line)));
                }
            }
        }
        Ok(())
    }

    /// The settings seen by `command`: its section over the top level.
    pub fn view(&self, command: &str) -> Settings {
        let mut values = BTreeMap::new();
        for section in ["", command] {
            if let Some(entries) = self.sections.get(section) {
                for (k, e) in entries {
                    values.insert(k.clone(), e.clone());
                }
            }
        }
        Settings { values }
    }
}

/// Resolved view of the configuration for one command.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, Entry>,
}

impl Settings {
    /// Flag value if given, else the configured value, else `default`.
    pub fn get<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get_opt(key, flag)?.unwrap_or(default))
    }

    pub fn get_opt<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|err| CliError::Config(format!("line {}: bad value for '{key}': {err}", e.line))),
        }
    }

    /// Boolean switch: true if the flag is set or the key is `true`.
    pub fn switch(&self, key: &str, flag: bool) -> Result<bool, CliError> {
        Ok(flag || self.get_opt::<bool>(key, None)?.unwrap_or(false))
    }
}
