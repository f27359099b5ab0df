//! Flat config files (`key = value` lines or a JSON object) and the
//! flag > file > default resolution.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let trimmed = text.trim_start();
        let mut values = BTreeMap::new();
        if trimmed.starts_with('{') {
            let json: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| CliError::Config(format!("config JSON: {e}")))?;
            let obj = json.as_object().ok_or_else(|| CliError::Config("config JSON must be an object".into()))?;
            for (k, v) in obj {
                let s = match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(_) | serde_json::Value::Bool(_) => v.to_string(),
                    _ => return Err(CliError::Config(format!("config key `{k}` must be a scalar"))),
                };
                values.insert(normalize(k), s);
            }
        } else {
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", i + 1)))?;
                values.insert(normalize(k.trim()), v.trim().trim_matches('"').to_string());
            }
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }

    /// Flag if given, else the config value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// As [`pick`](Self::pick) without a default.
    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => self.get(key)?.ok_or_else(|| CliError::Config(format!("missing required value `{key}`"))),
        }
    }

    /// Switches: set by the flag or by a true config value.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_and_json_agree() {
        let a = FileConfig::parse("# comment\nalpha = 2.5\nk-max = 7\nproject = true\n").unwrap();
        let b = FileConfig::parse(r#"{"alpha": 2.5, "k_max": 7, "project": true}"#).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.get::<f64>("alpha").unwrap(), Some(2.5));
        assert!(a.switch(false, "project").unwrap());
    }

    #[test]
    fn flags_win_over_file_over_default() {
        let c = FileConfig::parse("n = 300").unwrap();
        assert_eq!(c.pick(Some(10usize), "n", 5).unwrap(), 10);
        assert_eq!(c.pick(None, "n", 5usize).unwrap(), 300);
        assert_eq!(c.pick(None, "dt", 0.5f64).unwrap(), 0.5);
    }

    #[test]
    fn malformed_input_is_a_config_error() {
        assert!(matches!(FileConfig::parse("alpha 2"), Err(CliError::Config(_))));
        assert!(matches!(FileConfig::parse("alpha = two").unwrap().get::<f64>("alpha"), Err(CliError::Config(_))));
        assert!(matches!(FileConfig::parse(r#"{"alpha": [1]}"#), Err(CliError::Config(_))));
    }
}
