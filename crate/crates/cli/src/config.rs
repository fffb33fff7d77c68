//! Flat `key = value` configuration files.
//!
//! Keys are the long option names without the leading dashes. Blank lines and
//! lines starting with `#` are ignored. Values given on the command line take
//! precedence over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

pub const KEYS: &[&str] = &[
    "eta",
    "distance-km",
    "chi",
    "gain",
    "gain-tuned",
    "kind",
    "order",
    "links",
    "atten-db-per-km",
    "f-target",
    "grid",
    "out",
    "oracle",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
    source: String,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{source}:{}: expected key = value", i + 1))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("{source}:{}: unknown key `{key}`", i + 1);
            }
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                bail!("{source}:{}: duplicate key `{key}`", i + 1);
            }
        }
        Ok(Self {
            values,
            source: source.to_string(),
        })
    }

    /// The command-line value if given, else the parsed file value.
    pub fn pick<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("{}: bad value `{raw}` for `{key}`: {e}", self.source)),
        }
    }

    /// A switch is on if given on the command line or set true in the file.
    pub fn flag(&self, cli: bool, key: &str) -> Result<bool> {
        Ok(cli || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}
