//! `geoenv`: experiments on geodesic environments in exponential last-passage
//! percolation and TASEP seen from a hole-particle pair.

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use geoenv_core::limits::Law;
use geoenv_core::suite::Profile;

use commands::{Body, Outcome};
use config::{Command, ExperimentConfig, Flags, UsageError};

const VERSION: &str = env!("GEOENV_VERSION");

#[derive(Parser)]
#[command(name = "geoenv", version = VERSION, about = "Geodesic environment experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Point-to-point geodesics from the origin to n^rho.
    GeodesicEnv(Flags),
    /// Semi-infinite direction-rho geodesics from a Busemann field.
    BusemannEnv(Flags),
    /// TASEP from a Bernoulli start seen from the pair, against the stationary law.
    TasepPhi(Flags),
    /// Samples of the stationary pair law and their tail diagnostics.
    PsiSample(Flags),
    /// The two-dimensional chain against its driver construction.
    ChainCheck(Flags),
    /// Closed-form laws on a grid.
    LimitEval(LimitArgs),
    /// Forward samples of the environment at a typical geodesic vertex.
    NuSample(Flags),
    /// The full acceptance suite; exits nonzero on failure.
    Check(CheckArgs),
}

#[derive(Args)]
struct LimitArgs {
    #[command(flatten)]
    flags: Flags,
    /// One of: nu-survival, nu-density, size-biased-density, jump-{1,2}-{l10,l01},
    /// corner-rate, gamma-weights, corner-probs.
    #[arg(long)]
    law: String,
    #[arg(long, default_value_t = 10.0)]
    h_max: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    flags: Flags,
    /// `full` or `quick`.
    #[arg(long, default_value = "full")]
    profile: String,
    /// Comma-separated criterion numbers.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

enum Failure {
    Usage(String),
    Core(geoenv_core::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<geoenv_core::Error> for Failure {
    fn from(e: geoenv_core::Error) -> Self {
        match e {
            geoenv_core::Error::Parameter { .. } => Failure::Usage(e.to_string()),
            e => Failure::Core(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

fn dispatch(cmd: Cmd) -> Result<(Command, ExperimentConfig, Outcome), Failure> {
    let run = |c: Command, flags: &Flags, f: &dyn Fn(&ExperimentConfig) -> geoenv_core::Result<Outcome>| {
        let cfg = ExperimentConfig::resolve(c, flags)?;
        let outcome = f(&cfg)?;
        Ok::<_, Failure>((c, cfg, outcome))
    };
    match cmd {
        Cmd::GeodesicEnv(f) => run(Command::GeodesicEnv, &f, &commands::geodesic_env),
        Cmd::BusemannEnv(f) => run(Command::BusemannEnv, &f, &commands::busemann_env),
        Cmd::TasepPhi(f) => run(Command::TasepPhi, &f, &commands::tasep_phi),
        Cmd::PsiSample(f) => run(Command::PsiSample, &f, &commands::psi_sample),
        Cmd::ChainCheck(f) => run(Command::ChainCheck, &f, &commands::chain_check),
        Cmd::NuSample(f) => run(Command::NuSample, &f, &commands::nu_sample),
        Cmd::LimitEval(a) => {
            let law: Law = a.law.parse()?;
            if !(a.h_max > 0.0) || a.points < 2 {
                return Err(Failure::Usage(
                    "`--h-max` must be positive and `--points` at least 2".into(),
                ));
            }
            run(Command::LimitEval, &a.flags, &|cfg| commands::limit_eval(cfg, law, a.h_max, a.points))
        }
        Cmd::Check(a) => {
            let profile: Profile = a.profile.parse()?;
            if let Some(bad) = a.only.iter().find(|&&i| !(1..=13).contains(&i)) {
                return Err(Failure::Usage(format!("`--only` takes criteria 1 to 13, got {bad}")));
            }
            let only = a.only.clone();
            run(Command::Check, &a.flags, &|cfg| commands::check(cfg, profile, only.clone(), VERSION))
        }
    }
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_output(command: Command, cfg: &ExperimentConfig, body: Body) -> std::io::Result<()> {
    let meta = json!({ "version": VERSION, "config": cfg.report(command) });
    let text = match body {
        Body::Json(result) => {
            let doc = json!({ "version": VERSION, "config": cfg.report(command), "result": result });
            let mut s = serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)?;
            s.push('\n');
            s
        }
        Body::Csv(s) => {
            if let Some(out) = &cfg.out {
                let mut m = serde_json::to_string_pretty(&meta).map_err(std::io::Error::other)?;
                m.push('\n');
                fs::write(meta_path(out), m)?;
            }
            s
        }
    };
    match &cfg.out {
        Some(out) => fs::write(out, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, cfg, outcome) = match dispatch(cli.command) {
        Ok(v) => v,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_resource() {
                eprintln!("hint: reduce the sizes or raise the window; see the message above");
                return ExitCode::from(3);
            }
            return ExitCode::from(1);
        }
    };
    let (pass, resource) = (outcome.pass, outcome.resource_error);
    if let Err(e) = write_output(command, &cfg, outcome.body) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    if resource {
        ExitCode::from(3)
    } else if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
