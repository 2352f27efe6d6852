use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use geoenv_core::experiments::phi_half_width;
use geoenv_core::farm::default_workers;
use geoenv_core::rng::parse_seed;

/// Sites, relative to the pair's hole, whose joint law tasep-phi reports.
pub const PHI_WINDOW: (i64, i64) = (-3, 4);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Which of them a subcommand reads is
/// listed in [`Command::uses`]; the rest are rejected.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Density in (0, 1); fixes the geodesic direction.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Geodesic size: endpoint n^rho, 2n steps.
    #[arg(long)]
    pub n: Option<i64>,
    /// Semi-infinite run: 2r + 1 path vertices.
    #[arg(long)]
    pub r: Option<usize>,
    /// TASEP time.
    #[arg(long)]
    pub t: Option<f64>,
    /// TASEP window half-width, or sample half length for psi-sample.
    #[arg(long)]
    pub wd: Option<usize>,
    /// Environment radius.
    #[arg(long)]
    pub s: Option<usize>,
    /// Quadrant size for nu-sample, chain length for chain-check.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub replicas: Option<u32>,
    /// Decimal or 0x-prefixed hex.
    #[arg(long, value_parser = seed_arg)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GeodesicEnv,
    BusemannEnv,
    TasepPhi,
    PsiSample,
    ChainCheck,
    LimitEval,
    NuSample,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GeodesicEnv => "geodesic-env",
            Command::BusemannEnv => "busemann-env",
            Command::TasepPhi => "tasep-phi",
            Command::PsiSample => "psi-sample",
            Command::ChainCheck => "chain-check",
            Command::LimitEval => "limit-eval",
            Command::NuSample => "nu-sample",
            Command::Check => "check",
        }
    }

    pub fn uses(self) -> &'static [&'static str] {
        match self {
            Command::GeodesicEnv => &["rho", "n", "s", "replicas", "seed", "workers"],
            Command::BusemannEnv => &["rho", "r", "s", "replicas", "seed", "workers"],
            Command::TasepPhi => &["rho", "t", "wd", "replicas", "seed", "workers"],
            Command::PsiSample => &["rho", "wd", "replicas", "seed", "workers"],
            Command::ChainCheck => &["rho", "k", "replicas", "seed", "workers"],
            Command::LimitEval => &["rho"],
            Command::NuSample => &["rho", "k", "replicas", "seed", "workers"],
            Command::Check => &["seed", "workers"],
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::GeodesicEnv | Command::BusemannEnv | Command::LimitEval | Command::NuSample => Format::Csv,
            _ => Format::Json,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Fully resolved settings; embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub rho: f64,
    pub n: i64,
    pub r: usize,
    pub t: f64,
    pub wd: usize,
    pub s: usize,
    pub k: usize,
    pub replicas: u32,
    pub seed: u64,
    /// Not part of reports: results do not depend on it, nor on `out`.
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// The settings that affect output, for embedding in reports.
    pub fn report(&self, command: Command) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.retain(|k, _| k == "command" || k == "format" || command.uses().contains(&k.as_str()));
        }
        v
    }

    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, UsageError> {
        let given: [(&str, bool); 9] = [
            ("rho", flags.rho.is_some()),
            ("n", flags.n.is_some()),
            ("r", flags.r.is_some()),
            ("t", flags.t.is_some()),
            ("wd", flags.wd.is_some()),
            ("s", flags.s.is_some()),
            ("k", flags.k.is_some()),
            ("replicas", flags.replicas.is_some()),
            ("seed", flags.seed.is_some()),
        ];
        for (name, set) in given {
            if set && !command.uses().contains(&name) {
                return Err(UsageError(format!("`--{name}` is not used by {command}")));
            }
        }
        if flags.workers.is_some() && !command.uses().contains(&"workers") {
            return Err(UsageError(format!("`--workers` is not used by {command}")));
        }

        let rho = flags.rho.unwrap_or(0.5);
        if !(rho > 0.0 && rho < 1.0) {
            return Err(UsageError(format!("`--rho` must lie strictly between 0 and 1, got {rho}")));
        }
        let t = flags.t.unwrap_or(20.0);
        if !(t > 0.0 && t.is_finite()) {
            return Err(UsageError(format!("`--t` must be a positive time, got {t}")));
        }
        let positive = |name: &str, v: i64| {
            if v < 1 {
                Err(UsageError(format!("`--{name}` must be positive, got {v}")))
            } else {
                Ok(())
            }
        };
        let (n_default, k_default, replicas_default, wd_default) = match command {
            Command::TasepPhi => (1000, 3, 10_000, 0),
            Command::PsiSample => (1000, 3, 1000, 20),
            Command::ChainCheck => (1000, 6, 100_000, 0),
            Command::NuSample => (1000, 3, 1000, 0),
            _ => (1000, 3, 10, 0),
        };
        let n = flags.n.unwrap_or(n_default);
        positive("n", n)?;
        let r = flags.r.unwrap_or(1000);
        positive("r", r as i64)?;
        let k = flags.k.unwrap_or(k_default);
        positive("k", k as i64)?;
        if command == Command::ChainCheck && k > 64 {
            return Err(UsageError(format!("`--k` is the chain length and must be at most 64, got {k}")));
        }
        let replicas = flags.replicas.unwrap_or(replicas_default);
        positive("replicas", replicas as i64)?;
        let workers = flags.workers.unwrap_or_else(default_workers);
        positive("workers", workers as i64)?;
        let wd = match (command, flags.wd) {
            (_, Some(wd)) => wd,
            (Command::TasepPhi, None) => phi_half_width(t, PHI_WINDOW.0, PHI_WINDOW.1) as usize,
            (_, None) => wd_default,
        };
        if flags.wd.is_some() && wd < 6 {
            return Err(UsageError(format!("`--wd` must be at least 6, got {wd}")));
        }
        Ok(Self {
            command: command.name().into(),
            rho,
            n,
            r,
            t,
            wd,
            s: flags.s.unwrap_or(0),
            k,
            replicas,
            seed: flags.seed.unwrap_or(1),
            workers,
            out: flags.out.clone(),
            format: flags.format.unwrap_or(command.default_format()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unused_and_bad_flags() {
        let flags = Flags {
            wd: Some(10),
            ..Flags::default()
        };
        let e = ExperimentConfig::resolve(Command::GeodesicEnv, &flags).unwrap_err();
        assert!(e.0.contains("--wd"));
        let flags = Flags {
            rho: Some(1.0),
            ..Flags::default()
        };
        assert!(ExperimentConfig::resolve(Command::GeodesicEnv, &flags).is_err());
        let flags = Flags {
            replicas: Some(0),
            ..Flags::default()
        };
        assert!(ExperimentConfig::resolve(Command::NuSample, &flags).is_err());
    }

    #[test]
    fn defaults() {
        let c = ExperimentConfig::resolve(Command::LimitEval, &Flags::default()).unwrap();
        assert_eq!(c.rho, 0.5);
        assert_eq!(c.format, Format::Csv);
        let c = ExperimentConfig::resolve(Command::Check, &Flags::default()).unwrap();
        assert_eq!(c.format, Format::Json);
    }
}
