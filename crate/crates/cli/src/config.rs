use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use superschur::combinatorics::CrossMode;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("bad range {0:?}: expected forms like 3, 0-3, 0..=3, 0..4 or 1,2")]
    Range(String),
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("bad value {value:?} for {key}: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Dims,
    VerifyRing,
    SchurWeyl,
    Semisimple,
    Bipartitions,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Dims,
        Check::VerifyRing,
        Check::SchurWeyl,
        Check::Semisimple,
        Check::Bipartitions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Dims => "dims",
            Check::VerifyRing => "verify-ring",
            Check::SchurWeyl => "schur-weyl",
            Check::Semisimple => "semisimple",
            Check::Bipartitions => "bipartitions",
        }
    }

    /// The claim each check certifies.
    pub fn reference(self) -> &'static str {
        match self {
            Check::Dims => "bidegree (r,s) span of k[GL(m|n)] has the dimension of rho_{r,s}(U(gl(m|n)))",
            Check::VerifyRing => {
                "inverse generators, super Cramer rule, comultiplication of x~, counit, Berezinian laws"
            }
            Check::SchurWeyl => "rho(U(gl(m|n))) and the walled Brauer image are mutual centralizers when m-n >= r+s",
            Check::Semisimple => "rational Schur superalgebra is semisimple when m-n >= r+s",
            Check::Bipartitions => "simple summands of T(r,s) are labelled by (m|n)-cross bipartitions",
        }
    }

    /// Whether the check runs per `(m, n)` rather than per `(m, n, r, s)`.
    pub fn ignores_rs(self) -> bool {
        self == Check::VerifyRing
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// Parses `3`, `0-3`, `0..=3`, `0..4`, or comma-separated lists of those
/// into a sorted, deduplicated list.
pub fn parse_range(text: &str) -> Result<Vec<usize>, ConfigError> {
    let err = || ConfigError::Range(text.to_string());
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| err());
    let mut out = BTreeSet::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(err());
        }
        let (lo, hi) = if let Some((a, b)) = item.split_once("..=") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = item.split_once("..") {
            let b = num(b)?;
            (num(a)?, b.checked_sub(1).ok_or_else(err)?)
        } else if let Some((a, b)) = item.split_once('-') {
            (num(a)?, num(b)?)
        } else {
            let v = num(item)?;
            (v, v)
        };
        if lo > hi {
            return Err(err());
        }
        out.extend(lo..=hi);
    }
    Ok(out.into_iter().collect())
}

fn format_range(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub r: Vec<usize>,
    pub s: Vec<usize>,
    pub checks: BTreeSet<Check>,
    /// Bound on ambient matrix entries `N^2`; also caps generated algebra
    /// dimensions.
    pub max_dim: u128,
    /// Bound on `(m+n)^{2(r+s)}` for bidegree spanning sets.
    pub max_span: u128,
    /// Largest `m+n` for the symbolic ring checks.
    pub symbolic_bound: usize,
    /// Odd generators of the Grassmann ring for Berezinian samples.
    pub grassmann: usize,
    pub samples: usize,
    pub seed: u64,
    pub mode: CrossMode,
    pub strict: bool,
    pub cache_dir: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            m: vec![1, 2],
            n: vec![0, 1],
            r: vec![0, 1],
            s: vec![0, 1],
            checks: Check::ALL.into_iter().collect(),
            max_dim: 300_000,
            max_span: 1_000_000,
            symbolic_bound: 4,
            grassmann: 4,
            samples: 100,
            seed: 0,
            mode: CrossMode::Contracted,
            strict: false,
            cache_dir: None,
        }
    }
}

impl SweepConfig {
    pub const KEYS: [&'static str; 14] = [
        "m",
        "n",
        "r",
        "s",
        "checks",
        "max_dim",
        "max_span",
        "symbolic_bound",
        "grassmann",
        "samples",
        "seed",
        "mode",
        "strict",
        "cache_dir",
    ];

    /// Sets one key; keys match the config file and use `_` where the flags
    /// use `-`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |reason: &str| ConfigError::Value {
            key: key.to_string(),
            value: value.to_string(),
            reason: reason.to_string(),
        };
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "m" => self.m = parse_range(value)?,
            "n" => self.n = parse_range(value)?,
            "r" => self.r = parse_range(value)?,
            "s" => self.s = parse_range(value)?,
            "checks" => {
                self.checks = if value == "all" {
                    Check::ALL.into_iter().collect()
                } else {
                    value
                        .split(',')
                        .map(str::parse)
                        .collect::<Result<_, String>>()
                        .map_err(|e| bad(&e))?
                }
            }
            "max_dim" => {
                self.max_dim = parse_count(value).ok_or_else(|| bad("expected an integer"))?
            }
            "max_span" => {
                self.max_span = parse_count(value).ok_or_else(|| bad("expected an integer"))?
            }
            "symbolic_bound" => {
                self.symbolic_bound = value.parse().map_err(|_| bad("expected an integer"))?
            }
            "grassmann" => {
                self.grassmann = value.parse().map_err(|_| bad("expected an integer"))?
            }
            "samples" => self.samples = value.parse().map_err(|_| bad("expected an integer"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("expected an integer"))?,
            "mode" => self.mode = value.parse().map_err(|e: String| bad(&e))?,
            "strict" => self.strict = value.parse().map_err(|_| bad("expected true or false"))?,
            "cache_dir" => self.cache_dir = (!value.is_empty()).then(|| PathBuf::from(value)),
            _ => {
                return Err(ConfigError::UnknownKey {
                    key: key.to_string(),
                    line: 0,
                })
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: k + 1 })?;
            self.set(key, value).map_err(|e| match e {
                ConfigError::UnknownKey { key, .. } => ConfigError::UnknownKey { key, line: k + 1 },
                e => e,
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &std::path::Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_str(&text)
    }

    /// The config as `key = value` lines accepted by [`Self::apply_str`].
    pub fn to_config_string(&self) -> String {
        let checks: Vec<&str> = self.checks.iter().map(|c| c.name()).collect();
        let mut out = String::new();
        for (key, value) in [
            ("m", format_range(&self.m)),
            ("n", format_range(&self.n)),
            ("r", format_range(&self.r)),
            ("s", format_range(&self.s)),
            ("checks", checks.join(",")),
            ("max_dim", self.max_dim.to_string()),
            ("max_span", self.max_span.to_string()),
            ("symbolic_bound", self.symbolic_bound.to_string()),
            ("grassmann", self.grassmann.to_string()),
            ("samples", self.samples.to_string()),
            ("seed", self.seed.to_string()),
            ("mode", self.mode.to_string()),
            ("strict", self.strict.to_string()),
            (
                "cache_dir",
                self.cache_dir
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
        ] {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}

/// Integers with optional `_` separators or a `1e6` exponent.
fn parse_count(s: &str) -> Option<u128> {
    let s = s.replace('_', "");
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let mantissa: u128 = mantissa.parse().ok()?;
        return mantissa.checked_mul(10u128.checked_pow(exp.parse().ok()?)?);
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_forms() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("0-3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_range("0..=2").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_range("0..2").unwrap(), vec![0, 1]);
        assert_eq!(parse_range("4, 1,1").unwrap(), vec![1, 4]);
        assert!(parse_range("3-1").is_err());
        assert!(parse_range("x").is_err());
        assert!(parse_range("0..0").is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e6"), Some(1_000_000));
        assert_eq!(parse_count("300_000"), Some(300_000));
        assert_eq!(parse_count("-1"), None);
    }

    #[test]
    fn config_round_trip() {
        let mut cfg = SweepConfig::default();
        cfg.apply_str("# grid\nm = 0..=3\nn=1\nchecks = dims, schur-weyl\nmode = exact\nmax_span = 1e5\ncache_dir = /tmp/x\n")
            .unwrap();
        assert_eq!(cfg.m, vec![0, 1, 2, 3]);
        assert_eq!(
            cfg.checks,
            [Check::Dims, Check::SchurWeyl].into_iter().collect()
        );
        assert_eq!(cfg.mode, CrossMode::Exact);
        let mut again = SweepConfig::default();
        again.apply_str(&cfg.to_config_string()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn config_errors() {
        let mut cfg = SweepConfig::default();
        assert!(matches!(
            cfg.apply_str("\n\nfoo = 1"),
            Err(ConfigError::UnknownKey { line: 3, .. })
        ));
        assert!(matches!(
            cfg.apply_str("m 1"),
            Err(ConfigError::Syntax { line: 1 })
        ));
        assert!(matches!(
            cfg.apply_str("mode = sideways"),
            Err(ConfigError::Value { .. })
        ));
    }
}
