//! Run configuration read from `key = value` files.

use serde::Deserialize;

use crate::cohomology::Budget;
use crate::error::{Error, Result};
use crate::reductions::EngineOptions;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Multiplies the default size limits.
    pub budget_scale: Option<f64>,
    pub max_rows: Option<usize>,
    pub max_nnz: Option<usize>,
    pub brute_max_n: Option<usize>,
    pub sylow_checks: Option<bool>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn from_toml_str(s: &str) -> Result<Config> {
        toml::from_str(s).map_err(|e| {
            let pos = e.span().map_or(0, |r| r.start);
            Error::Parse { pos, msg: e.message().to_string() }
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Config> {
        Config::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `other` take precedence.
    pub fn merged(&self, other: &Config) -> Config {
        Config {
            budget_scale: other.budget_scale.or(self.budget_scale),
            max_rows: other.max_rows.or(self.max_rows),
            max_nnz: other.max_nnz.or(self.max_nnz),
            brute_max_n: other.brute_max_n.or(self.brute_max_n),
            sylow_checks: other.sylow_checks.or(self.sylow_checks),
            threads: other.threads.or(self.threads),
            seed: other.seed.or(self.seed),
        }
    }

    fn adjust(&self, mut b: Budget) -> Budget {
        if let Some(f) = self.budget_scale {
            b.max_rows = (b.max_rows as f64 * f) as usize;
            b.max_nnz = (b.max_nnz as f64 * f) as usize;
        }
        b.max_rows = self.max_rows.unwrap_or(b.max_rows);
        b.max_nnz = self.max_nnz.unwrap_or(b.max_nnz);
        b
    }

    /// Budget for single computations.
    pub fn budget(&self) -> Budget {
        self.adjust(Budget::default())
    }

    pub fn engine_options(&self) -> EngineOptions {
        let d = EngineOptions::default();
        EngineOptions {
            budget: self.adjust(d.budget),
            brute_max_n: self.brute_max_n.unwrap_or(d.brute_max_n),
            sylow_checks: self.sylow_checks.unwrap_or(d.sylow_checks),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_applies() {
        let c = Config::from_toml_str("budget_scale = 0.5\nbrute_max_n = 5 # comment\n").unwrap();
        assert_eq!(c.engine_options().brute_max_n, 5);
        assert_eq!(c.budget().max_rows, Budget::default().max_rows / 2);
        let over = Config { max_rows: Some(7), ..Default::default() };
        assert_eq!(c.merged(&over).budget().max_rows, 7);
    }

    #[test]
    fn unknown_key_is_reported() {
        let e = Config::from_toml_str("max_rows = 1\nbogus = 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { pos, .. } if pos > 0));
    }
}
