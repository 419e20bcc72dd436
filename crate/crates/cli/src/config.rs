use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use cubring::counting::DEFAULT_DISC_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Anything left unset falls back to the
/// config file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Largest |Δ| to cover
    #[arg(long)]
    pub max: Option<i64>,

    /// Primes for the recursion check, comma separated
    #[arg(long, alias = "p", value_delimiter = ',')]
    pub primes: Option<Vec<i64>>,

    /// Run on a single discriminant instead of a range
    #[arg(long = "D", allow_hyphen_values = true)]
    pub disc: Option<i64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Number of contiguous discriminant shards
    #[arg(long)]
    pub shards: Option<usize>,

    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Largest discriminant any enumeration may reach
    #[arg(long)]
    pub budget: Option<i64>,

    /// TOML file with defaults for the flags above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    max: Option<i64>,
    primes: Option<Vec<i64>>,
    disc: Option<i64>,
    format: Option<Format>,
    shards: Option<usize>,
    out: Option<PathBuf>,
    budget: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub max: i64,
    pub primes: Vec<i64>,
    pub disc: Option<i64>,
    pub format: Format,
    pub shards: usize,
    pub out: Option<PathBuf>,
    pub budget: i64,
}

/// Default budget from `CUBRING_BUDGET`, used only when neither flag nor
/// file sets one.
fn env_budget() -> Result<i64> {
    match std::env::var("CUBRING_BUDGET") {
        Ok(v) => v.trim().parse().with_context(|| format!("CUBRING_BUDGET={v:?} is not an integer")),
        Err(_) => Ok(DEFAULT_DISC_BUDGET),
    }
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let cfg = RunConfig {
            max: args.max.or(file.max).unwrap_or(100),
            primes: args.primes.clone().or(file.primes).unwrap_or_else(|| vec![2, 3]),
            disc: args.disc.or(file.disc),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
            shards: args.shards.or(file.shards).unwrap_or(1),
            out: args.out.clone().or(file.out),
            budget: match args.budget.or(file.budget) {
                Some(b) => b,
                None => env_budget()?,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.max < 0 {
            bail!("--max must be nonnegative, got {}", self.max);
        }
        if self.shards == 0 {
            bail!("--shards must be at least 1");
        }
        if self.budget <= 0 {
            bail!("--budget must be positive, got {}", self.budget);
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !cubring::arith::is_prime(p)) {
            bail!("{p} is not prime");
        }
        Ok(())
    }

    /// The discriminants this run covers, in increasing order.
    pub fn deltas(&self) -> Result<Vec<i64>> {
        match self.disc {
            Some(d) if cubring::arith::is_disc(d) => Ok(vec![d]),
            Some(d) => bail!("{d} is not a discriminant"),
            None => Ok(cubring::report::discriminants_up_to(self.max)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "max = 40\nshards = 3\nformat = \"json\"\n").unwrap();
        let args = CommonArgs { max: Some(7), config: Some(path), ..CommonArgs::default() };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!((cfg.max, cfg.shards, cfg.format), (7, 3, Format::Json));
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            CommonArgs { shards: Some(0), ..CommonArgs::default() },
            CommonArgs { max: Some(-1), ..CommonArgs::default() },
            CommonArgs { primes: Some(vec![4]), ..CommonArgs::default() },
        ];
        for args in bad {
            assert!(RunConfig::resolve(&args).is_err(), "{args:?}");
        }
    }

    #[test]
    fn unknown_keys_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "maxx = 4\n").unwrap();
        let args = CommonArgs { config: Some(path), ..CommonArgs::default() };
        assert!(RunConfig::resolve(&args).is_err());
    }
}
