//! Campaign configuration: flags, an optional TOML file, and the merge
//! between them (flags win).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::checks::CheckSet;
use crate::error::CliError;

/// Set of tree sizes, written as a comma list of values and inclusive
/// ranges: `5`, `1-9`, `1,3,5`, `3..=7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NRange(Vec<usize>);

impl NRange {
    pub fn new(values: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, n: usize) -> bool {
        self.0.binary_search(&n).is_ok()
    }
}

impl FromStr for NRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Range(s.to_string());
        let mut values = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (lo, hi) = if let Some((a, b)) = part.split_once("..=") {
                (a, b)
            } else if let Some((a, b)) = part.split_once('-') {
                (a, b)
            } else {
                (part, part)
            };
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if lo == 0 || lo > hi {
                return Err(bad());
            }
            values.extend(lo..=hi);
        }
        Ok(Self::new(values))
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

/// Where the trees come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSource {
    /// Every isomorphism class for each requested `n`.
    Enumerate,
    /// One canonical level code per line; blank lines and `#` comments are
    /// skipped.
    File(PathBuf),
}

impl FromStr for TreeSource {
    type Err = CliError;

    /// `enumerate`, or a path (optionally prefixed by `file:`).
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "enumerate" => Ok(TreeSource::Enumerate),
            "" => Err(CliError::Usage("empty tree source".into())),
            other => Ok(TreeSource::File(PathBuf::from(other.strip_prefix("file:").unwrap_or(other)))),
        }
    }
}

/// The TOML config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub n: Option<String>,
    pub trees: Option<String>,
    pub checks: Option<String>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Ok(toml::from_str(&text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignConfig {
    /// Sizes to enumerate; for a file source, an optional filter.
    pub n: Option<NRange>,
    pub trees: TreeSource,
    pub checks: CheckSet,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
    pub seed: u64,
    pub format: Format,
    /// Add `elapsed_ms` to every record. Timed reports are not reproducible.
    pub timings: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            n: None,
            trees: TreeSource::Enumerate,
            checks: CheckSet::new([crate::checks::Check::Theorem]),
            out: None,
            cache_dir: None,
            jobs: 1,
            seed: 0,
            format: Format::Jsonl,
            timings: false,
        }
    }
}

/// Flag values before merging; `None` means the flag was not given.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<String>,
    pub trees: Option<String>,
    pub checks: Option<String>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub timings: bool,
}

impl CampaignConfig {
    /// Merge flags over the config file over the defaults.
    pub fn resolve(flags: Overrides, file: ConfigFile) -> Result<Self, CliError> {
        let d = Self::default();
        let n = flags.n.or(file.n).map(|s| s.parse()).transpose()?;
        let trees = match flags.trees.or(file.trees) {
            Some(s) => s.parse()?,
            None => d.trees,
        };
        let checks = match flags.checks.or(file.checks) {
            Some(s) => s.parse()?,
            None => d.checks,
        };
        let jobs = flags.jobs.or(file.jobs).unwrap_or(d.jobs);
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        let cfg = Self {
            n,
            trees,
            checks,
            out: flags.out.or(file.out),
            cache_dir: flags.cache_dir.or(file.cache_dir),
            jobs,
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            format: flags.format.or(file.format).unwrap_or(d.format),
            timings: flags.timings,
        };
        if cfg.trees == TreeSource::Enumerate && cfg.n.is_none() {
            return Err(CliError::Usage("--n is required when enumerating trees".into()));
        }
        if cfg.checks.is_empty() {
            return Err(CliError::Usage("no checks selected".into()));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Check;

    #[test]
    fn n_ranges() {
        assert_eq!("5".parse::<NRange>().unwrap().values(), [5]);
        assert_eq!("1-4".parse::<NRange>().unwrap().values(), [1, 2, 3, 4]);
        assert_eq!("3..=5,1".parse::<NRange>().unwrap().values(), [1, 3, 4, 5]);
        assert_eq!("1,3,5,3".parse::<NRange>().unwrap().values(), [1, 3, 5]);
        for bad in ["", "0", "5-3", "a", "1-", "2..=x"] {
            assert!(bad.parse::<NRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn flags_win_over_file() {
        let file: ConfigFile = toml::from_str(
            r#"
            n = "1-3"
            checks = "cert,theorem"
            jobs = 4
            seed = 9
            format = "csv"
            "#,
        )
        .unwrap();
        let flags = Overrides {
            jobs: Some(2),
            ..Default::default()
        };
        let cfg = CampaignConfig::resolve(flags, file).unwrap();
        assert_eq!(cfg.jobs, 2);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.n.unwrap().values(), [1, 2, 3]);
        assert_eq!(cfg.checks, CheckSet::new([Check::Theorem, Check::Cert]));
    }

    #[test]
    fn usage_errors() {
        assert!(CampaignConfig::resolve(Overrides::default(), ConfigFile::default()).is_err());
        let zero = Overrides {
            n: Some("3".into()),
            jobs: Some(0),
            ..Default::default()
        };
        assert!(CampaignConfig::resolve(zero, ConfigFile::default()).is_err());
        assert!(toml::from_str::<ConfigFile>("bogus = 1").is_err());
        assert!("theorem,nope".parse::<CheckSet>().is_err());
    }
}
