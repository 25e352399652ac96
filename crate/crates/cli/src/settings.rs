//! Layered configuration: defaults, then a config file, then flags.

use std::fs;
use std::path::Path;

use emofractal::config::AnalysisConfig;
use serde_json::Value;

use crate::error::CliError;

/// Reads a config file. A file starting with `{` is a JSON
/// `AnalysisConfig` (possibly partial); anything else is `key = value`
/// lines with dotted keys such as `mfdfa.order = 2`, `#` comments allowed.
pub fn load_file(cfg: &mut AnalysisConfig, path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let patch: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let mut base = to_value(cfg)?;
        merge(&mut base, patch);
        *cfg = from_value(base)?;
        return Ok(());
    }
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config {} line {}: expected key = value",
                path.display(),
                lineno + 1
            ))
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    apply_pairs(cfg, &pairs)
}

/// Applies `key = value` overrides in order.
pub fn apply_pairs(cfg: &mut AnalysisConfig, pairs: &[(String, String)]) -> Result<(), CliError> {
    let mut v = to_value(cfg)?;
    for (key, raw) in pairs {
        set_path(&mut v, key, parse_scalar(raw))?;
    }
    *cfg = from_value(v)?;
    Ok(())
}

pub fn parse_pair(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn parse_scalar(raw: &str) -> Value {
    match raw {
        "null" | "none" => Value::Null,
        _ => serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string())),
    }
}

fn set_path(root: &mut Value, key: &str, value: Value) -> Result<(), CliError> {
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::Usage(format!("unknown config key {key:?}")))?;
        if !obj.contains_key(*part) {
            return Err(CliError::Usage(format!("unknown config key {key:?}")));
        }
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        node = obj.get_mut(*part).expect("key checked above");
        if node.is_null() {
            return Err(CliError::Usage(format!("unknown config key {key:?}")));
        }
    }
    Err(CliError::Usage(format!("empty config key {key:?}")))
}

fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn to_value(cfg: &AnalysisConfig) -> Result<Value, CliError> {
    serde_json::to_value(cfg).map_err(|e| CliError::Usage(e.to_string()))
}

fn from_value(v: Value) -> Result<AnalysisConfig, CliError> {
    let cfg: AnalysisConfig =
        serde_json::from_value(v).map_err(|e| CliError::Usage(format!("config: {e}")))?;
    cfg.validate()
        .map_err(|e| CliError::Usage(format!("config: {e}")))?;
    Ok(cfg)
}
