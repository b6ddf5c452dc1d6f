use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// Values a TOML config file may provide. Command-line flags win over these.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub m: Option<u32>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub len: Option<usize>,
    pub probe_steps: Option<usize>,
    pub with_approx: Option<bool>,
    pub full_precision: Option<bool>,
    pub matrix: Option<PathBuf>,
    pub limit: Option<usize>,
    pub tol: Option<f64>,
    pub fixture: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))
    }
}

/// First of flag, file value, default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// A boolean switch is on if either the flag or the file sets it.
pub fn switch(flag: bool, file: Option<bool>) -> bool {
    flag || file.unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None, None, 3), 3);
        assert!(switch(false, Some(true)));
        assert!(!switch(false, None));
    }

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let cfg: FileConfig = toml::from_str("m = 7\nx1 = 0.5\nwith_approx = true").unwrap();
        assert_eq!(
            (cfg.m, cfg.x1, cfg.with_approx),
            (Some(7), Some(0.5), Some(true))
        );
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
    }
}
