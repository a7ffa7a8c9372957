//! Flat `key = value` configuration with `[section]` headers.
//!
//! Keys before the first header belong to the `run` section. `#` starts a comment. Lists are
//! comma separated; `lo:hi:n` expands to n evenly spaced values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: BTreeMap<String, BTreeMap<String, Entry>> = BTreeMap::new();
        let mut current = "run".to_string();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config(line, "", "unterminated section header"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(CliError::config(line, "", format!("bad section name '{name}'")));
                }
                current = name.to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| CliError::config(line, "", format!("expected 'key = value', got '{body}'")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::config(line, "", "empty key"));
            }
            let section = sections.entry(current.clone()).or_default();
            if let Some(prev) = section.get(key) {
                return Err(CliError::config(line, key, format!("duplicate key (first set on line {})", prev.line)));
            }
            section.insert(key.to_string(), Entry { value: value.trim().to_string(), line });
        }
        Ok(Self { sections })
    }

    /// Accessor for one section; an absent section behaves as empty.
    pub fn section(&self, name: &str) -> Section<'_> {
        static EMPTY: BTreeMap<String, Entry> = BTreeMap::new();
        Section { name: name.to_string(), entries: self.sections.get(name).unwrap_or(&EMPTY), used: Default::default() }
    }

    pub fn section_names(&self) -> impl Iterator<Item = &str> {
        self.sections.keys().map(String::as_str)
    }
}

impl fmt::Display for Config {
    /// Canonical echo: sections and keys in sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, entries) in &self.sections {
            writeln!(f, "[{name}]")?;
            for (k, e) in entries {
                writeln!(f, "{k} = {}", e.value)?;
            }
        }
        Ok(())
    }
}

/// Typed view of a section that remembers which keys were read.
pub struct Section<'a> {
    name: String,
    entries: &'a BTreeMap<String, Entry>,
    used: std::cell::RefCell<BTreeSet<String>>,
}

impl Section<'_> {
    fn raw(&self, key: &str) -> Option<&Entry> {
        self.used.borrow_mut().insert(key.to_string());
        self.entries.get(key)
    }

    fn bad(&self, e: &Entry, key: &str, msg: impl fmt::Display) -> CliError {
        CliError::config(e.line, &format!("{}.{key}", self.name), msg)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(e) => e.value.parse().map_err(|err| self.bad(e, key, format!("cannot parse '{}': {err}", e.value))),
        }
    }

    /// Like [`get`](Self::get) with an extra check on the parsed value.
    pub fn get_checked<T: FromStr + Copy>(&self, key: &str, default: T, check: impl Fn(T) -> Result<(), String>) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        let v = self.get(key, default)?;
        check(v).map_err(|msg| match self.entries.get(key) {
            Some(e) => self.bad(e, key, msg),
            None => CliError::InvalidConfig(format!("{}.{key}: {msg}", self.name)),
        })?;
        Ok(v)
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(e) => match e.value.as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(self.bad(e, key, format!("expected a boolean, got '{other}'"))),
            },
        }
    }

    /// Comma-separated reals, or `lo:hi:n`.
    pub fn get_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        let Some(e) = self.raw(key) else {
            return Ok(default.to_vec());
        };
        let v = e.value.trim();
        if v.is_empty() {
            return Ok(Vec::new());
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            let x: f64 = s.trim().parse().map_err(|err| self.bad(e, key, format!("cannot parse '{}': {err}", s.trim())))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(self.bad(e, key, "values must be finite"))
            }
        };
        if v.contains(':') {
            let parts: Vec<&str> = v.split(':').collect();
            if parts.len() != 3 {
                return Err(self.bad(e, key, "range must be 'lo:hi:n'"));
            }
            let (lo, hi) = (parse(parts[0])?, parse(parts[1])?);
            let n: usize = parts[2].trim().parse().map_err(|err| self.bad(e, key, format!("bad count: {err}")))?;
            return Ok(match n {
                0 => Vec::new(),
                1 => vec![lo],
                _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
            });
        }
        v.split(',').map(parse).collect()
    }

    /// Errors on any key that was never read.
    pub fn finish(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        match self.entries.iter().find(|(k, _)| !used.contains(*k)) {
            Some((k, e)) => Err(self.bad(e, k, "unknown key")),
            None => Ok(()),
        }
    }
}
