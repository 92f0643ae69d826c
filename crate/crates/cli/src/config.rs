//! JSON run configuration. Command-line flags take precedence over values
//! found here; values here take precedence over built-in defaults.
//!
//! ```json
//! { "seed": 7, "threads": 4, "train": { "epochs": 300, "graph_hidden": 64 } }
//! ```

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

const SECTIONS: &[&str] = &["extract", "synth", "train", "sample", "eval", "render"];

#[derive(Debug, Default)]
pub struct Config {
    root: Map<String, Value>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let value: Value =
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let Value::Object(root) = value else {
            bail!("config {} must be a JSON object", path.display());
        };
        for (key, v) in &root {
            let known = matches!(key.as_str(), "seed" | "threads") || SECTIONS.contains(&key.as_str());
            if !known {
                bail!("config {}: unknown key '{key}'", path.display());
            }
            if SECTIONS.contains(&key.as_str()) && !v.is_object() {
                bail!("config {}: section '{key}' must be an object", path.display());
            }
        }
        Ok(Config { root })
    }

    fn lookup<T: DeserializeOwned>(&self, value: Option<&Value>, name: &str) -> Result<Option<T>> {
        value
            .map(|v| serde_json::from_value(v.clone()).with_context(|| format!("config value '{name}'")))
            .transpose()
    }

    pub fn global<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        self.lookup(self.root.get(key), key)
    }

    /// `flag` if given, else `section.key` from the file.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, section: &str, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        let v = self.root.get(section).and_then(|s| s.get(key));
        self.lookup(v, &format!("{section}.{key}"))
    }

    pub fn pick_or<T: DeserializeOwned>(&self, flag: Option<T>, section: &str, key: &str, default: T) -> Result<T> {
        Ok(self.pick(flag, section, key)?.unwrap_or(default))
    }

    pub fn require<T: DeserializeOwned>(&self, flag: Option<T>, section: &str, key: &str) -> Result<T> {
        match self.pick(flag, section, key)? {
            Some(v) => Ok(v),
            None => bail!("missing --{} (or '{section}.{key}' in the config)", key.replace('_', "-")),
        }
    }
}
