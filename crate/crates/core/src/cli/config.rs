//! Sweep configuration files: JSON objects or flat `key = value` lines.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::threshold::SweepGrid;

pub const GRID_KEYS: &[&str] = &[
    "squeezing_db",
    "d",
    "chi",
    "squeeze_step",
    "shots",
    "seed",
    "rounds",
    "weights_mode",
    "identity_noise",
    "calibration_shots",
];

const LIST_KEYS: &[&str] = &["squeezing_db", "d", "chi", "squeeze_step"];

/// Also accepted in files; not part of the grid itself.
const META_KEYS: &[&str] = &["format_version"];

/// Parses a config file into a JSON object, rejecting unknown keys.
pub fn parse_config(text: &str) -> Result<Map<String, Value>> {
    let trimmed = text.trim_start();
    let map = if trimmed.starts_with('{') {
        match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(Error::Config("config JSON must be an object".into())),
            Err(e) => return Err(Error::Config(format!("malformed config JSON: {e}"))),
        }
    } else {
        parse_flat(text)?
    };
    let unknown: Vec<&str> =
        map.keys().map(String::as_str).filter(|k| !GRID_KEYS.contains(k) && !META_KEYS.contains(k)).collect();
    if !unknown.is_empty() {
        return Err(Error::Config(format!("unknown config keys: {}", unknown.join(", "))));
    }
    Ok(map)
}

fn parse_scalar(raw: &str) -> Value {
    let raw = raw.trim();
    if let Ok(i) = raw.parse::<u64>() {
        return Value::from(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return Value::from(f);
    }
    match raw {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => Value::String(raw.trim_matches('"').to_string()),
    }
}

fn parse_flat(text: &str) -> Result<Map<String, Value>> {
    let mut map = Map::new();
    let mut bad = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bad.push(format!("line {}: expected key = value", no + 1));
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        let value = if LIST_KEYS.contains(&k) {
            let v = v.trim_start_matches('[').trim_end_matches(']');
            Value::Array(v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse_scalar).collect())
        } else {
            parse_scalar(v)
        };
        if map.insert(k.to_string(), value).is_some() {
            bad.push(format!("line {}: duplicate key {k}", no + 1));
        }
    }
    if !bad.is_empty() {
        return Err(Error::Config(bad.join("; ")));
    }
    Ok(map)
}

/// Builds the grid from file values with `overrides` taking precedence.
pub fn grid_from(file: &Map<String, Value>, overrides: &Map<String, Value>) -> Result<SweepGrid> {
    let mut merged = file.clone();
    merged.remove("format_version");
    for (k, v) in overrides {
        merged.insert(k.clone(), v.clone());
    }
    let missing: Vec<&str> =
        ["squeezing_db", "d", "chi", "squeeze_step", "shots", "seed"].into_iter().filter(|k| !merged.contains_key(*k)).collect();
    if !missing.is_empty() {
        return Err(Error::Config(format!("missing config keys: {}", missing.join(", "))));
    }
    let grid: SweepGrid =
        serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(format!("invalid config value: {e}")))?;
    grid.validate()?;
    Ok(grid)
}
