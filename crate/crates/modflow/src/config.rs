//! Flat `key = value` configuration files and flag/file/default layering.
//!
//! ```text
//! # comments start with '#'
//! beta = 2
//! generator.n = 0..3        # scoped keys win over bare ones
//! f = gaussian, modulated
//! ```
//!
//! Keys are the long flag names. A bare key applies to every command that
//! takes it; `command.key` applies to one command only.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;

pub const COMMANDS: [&str; 5] = ["flow", "generator", "leakage", "yngvason", "symcheck"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected `key = value`", i + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                bail!("config line {}: empty key", i + 1);
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                bail!("config line {}: duplicate key `{k}`", i + 1);
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rejects keys no command understands, so typos do not silently fall
    /// back to defaults.
    pub fn check_keys(&self, known: &[&str]) -> Result<()> {
        for key in self.entries.keys() {
            let bare = match key.split_once('.') {
                Some((cmd, rest)) if COMMANDS.contains(&cmd) => rest,
                Some(_) => bail!("unknown config key `{key}`"),
                None => key.as_str(),
            };
            if !known.contains(&bare) {
                bail!("unknown config key `{key}`");
            }
        }
        Ok(())
    }

    fn lookup(&self, command: &str, key: &str) -> Option<&str> {
        self.entries
            .get(&format!("{command}.{key}"))
            .or_else(|| self.entries.get(key))
            .map(String::as_str)
    }
}

/// Resolves one command's settings from flags, then the file, then defaults.
#[derive(Debug)]
pub struct Layers<'a> {
    file: &'a ConfigFile,
    command: &'static str,
}

impl<'a> Layers<'a> {
    pub fn new(file: &'a ConfigFile, command: &'static str) -> Self {
        Self { file, command }
    }

    pub fn get<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.lookup(self.command, key) {
            Some(s) => s.parse().map_err(|e| anyhow!("config key `{key}` = `{s}`: {e}")),
            None => Ok(default),
        }
    }

    /// Like [`Layers::get`] for settings without a default.
    pub fn get_opt<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .lookup(self.command, key)
            .map(|s| s.parse().map_err(|e| anyhow!("config key `{key}` = `{s}`: {e}")))
            .transpose()
    }

    pub fn get_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.lookup(self.command, key) {
            Some(s) => T::from_str(s, true).map_err(|e| anyhow!("config key `{key}`: {e}")),
            None => Ok(default),
        }
    }
}

/// Comma-separated list; integer lists also accept inclusive ranges `a..b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct List<T>(pub Vec<T>);

impl<T> List<T> {
    pub fn of(v: impl Into<Vec<T>>) -> Self {
        Self(v.into())
    }
}

impl<T> std::ops::Deref for List<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

pub trait ListItem: Sized {
    fn parse_item(s: &str) -> Result<Vec<Self>>;
}

impl ListItem for f64 {
    fn parse_item(s: &str) -> Result<Vec<Self>> {
        Ok(vec![s.parse().map_err(|_| anyhow!("`{s}` is not a number"))?])
    }
}

impl ListItem for u32 {
    fn parse_item(s: &str) -> Result<Vec<Self>> {
        if let Some((a, b)) = s.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| anyhow!("bad range start in `{s}`"))?;
            let b: u32 = b.trim().parse().map_err(|_| anyhow!("bad range end in `{s}`"))?;
            if b < a {
                bail!("empty range `{s}`");
            }
            return Ok((a..=b).collect());
        }
        Ok(vec![s
            .parse()
            .map_err(|_| anyhow!("`{s}` is not a non-negative integer"))?])
    }
}

impl ListItem for String {
    fn parse_item(s: &str) -> Result<Vec<Self>> {
        Ok(vec![s.to_string()])
    }
}

impl<T: ListItem> FromStr for List<T> {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            out.extend(T::parse_item(part)?);
        }
        if out.is_empty() {
            bail!("empty list");
        }
        Ok(Self(out))
    }
}

/// Parses a list of value-enum names.
pub fn parse_enum_list<T: ValueEnum>(items: &[String]) -> Result<Vec<T>> {
    items
        .iter()
        .map(|s| T::from_str(s, true).map_err(|e| anyhow!("{e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_scopes() {
        let f = ConfigFile::parse("# top\nbeta = 2\n\ngenerator.beta = 0.5, 1 # scoped\n").unwrap();
        let l = Layers::new(&f, "generator");
        let b: List<f64> = l.get(None, "beta", List::of([9.0])).unwrap();
        assert_eq!(b.0, vec![0.5, 1.0]);
        let l = Layers::new(&f, "leakage");
        assert_eq!(l.get(None, "beta", 9.0).unwrap(), 2.0);
        assert_eq!(l.get(Some(3.0), "beta", 9.0).unwrap(), 3.0);
        assert_eq!(l.get(None, "width", 9.0).unwrap(), 9.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(ConfigFile::parse("beta 2").is_err());
        assert!(ConfigFile::parse("beta = 1\nbeta = 2").is_err());
        let f = ConfigFile::parse("bta = 1").unwrap();
        assert!(f.check_keys(&["beta"]).is_err());
        let f = ConfigFile::parse("nope.beta = 1").unwrap();
        assert!(f.check_keys(&["beta"]).is_err());
    }

    #[test]
    fn ranges_and_lists() {
        assert_eq!("0..3".parse::<List<u32>>().unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!("1, 4..5".parse::<List<u32>>().unwrap().0, vec![1, 4, 5]);
        assert!("3..1".parse::<List<u32>>().is_err());
        assert!("".parse::<List<f64>>().is_err());
        assert_eq!("1e-3,2".parse::<List<f64>>().unwrap().0, vec![1e-3, 2.0]);
    }
}
