//! `--config FILE` overlay.
//!
//! The file is a flat TOML table whose keys are flag names (`record-every` or
//! `record_every`). Its entries are turned into flags and placed before the
//! command-line flags, so anything given on the command line wins.

use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, Command};

#[derive(Debug)]
pub struct ConfigError(pub String);

/// Flags equivalent to the config file, for subcommand `sub`.
pub fn overlay_flags(sub: &Command, path: &Path) -> Result<Vec<OsString>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table =
        toml::from_str(&text).map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
    let mut flags = Vec::new();
    for (key, value) in &table {
        let long = key.replace('_', "-");
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(long.as_str()) && long != "config" && long != "help")
            .ok_or_else(|| ConfigError(format!("config {}: unknown key `{key}` for `{}`", path.display(), sub.get_name())))?;
        let is_switch = matches!(arg.get_action(), ArgAction::SetTrue);
        let values = match value {
            toml::Value::Array(items) => items.iter().map(scalar).collect::<Result<Vec<_>, _>>(),
            other => scalar(other).map(|v| vec![v]),
        }
        .map_err(|e| ConfigError(format!("config {}: key `{key}`: {}", path.display(), e.0)))?;
        for v in values {
            if is_switch {
                match v.as_str() {
                    "true" => flags.push(format!("--{long}").into()),
                    "false" => {}
                    _ => return Err(ConfigError(format!("config {}: key `{key}` must be a boolean", path.display()))),
                }
            } else {
                flags.push(format!("--{long}").into());
                flags.push(v.into());
            }
        }
    }
    Ok(flags)
}

fn scalar(value: &toml::Value) -> Result<String, ConfigError> {
    match value {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        other => Err(ConfigError(format!("unsupported value {other}"))),
    }
}
