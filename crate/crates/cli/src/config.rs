use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "lomse", version, about = "Numerical laboratory for Lawson-Osserman minimal cones and graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Derived scalars, spectra and cone geometry of a triple.
    Classify,
    /// Orbit from the saddle to the cone equilibrium, as (t, phi, psi) samples plus events.
    Portrait,
    /// Radial profile rho(r) of the entire minimal graph with equation residuals.
    Profile,
    /// Radial solutions of the Dirichlet problem for a boundary amplitude.
    Dirichlet,
    /// Invariant-region certificate matching the stability type.
    Barriers,
    /// Singular values, angle condition and radial equations for the Hopf map.
    VerifyHopf,
    /// Summary table over a list of triples.
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Portrait => "portrait",
            Command::Profile => "profile",
            Command::Dirichlet => "dirichlet",
            Command::Barriers => "barriers",
            Command::VerifyHopf => "verify-hopf",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long, global = true)]
    pub n: Option<i64>,
    #[arg(long, global = true)]
    pub p: Option<i64>,
    #[arg(long, global = true)]
    pub k: Option<i64>,
    /// Integration horizon in t = log r.
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Accuracy in t of located events.
    #[arg(long, global = true)]
    pub event_tol: Option<f64>,
    /// Offset of the seed along the unstable direction of the saddle.
    #[arg(long, global = true)]
    pub seed_epsilon: Option<f64>,
    /// Boundary amplitude, a number or `at-phi0`.
    #[arg(long, global = true)]
    pub phi_boundary: Option<String>,
    /// Directory receiving the output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for `sweep`.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Accept any 0 < p < n and k >= 2, outside the admissible families.
    #[arg(long, global = true)]
    pub relaxed: bool,
    /// Leave the timestamp out of JSON reports.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// TOML file with defaults for any of these options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// File of triples for `sweep`, one `n p k` per line.
    #[arg(long, global = true)]
    pub list: Option<PathBuf>,
    /// Number of random sphere points for `verify-hopf`.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Random seed for `verify-hopf`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub n: Option<i64>,
    pub p: Option<i64>,
    pub k: Option<i64>,
    pub t_max: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub event_tol: Option<f64>,
    pub seed_epsilon: Option<f64>,
    pub phi_boundary: Option<PhiBoundaryValue>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub relaxed: Option<bool>,
    pub no_timestamp: Option<bool>,
    pub list: Option<PathBuf>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PhiBoundaryValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiBoundary {
    Value(f64),
    AtPhi0,
}

impl PhiBoundary {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s.trim() {
            "at-phi0" | "phi0" => Ok(PhiBoundary::AtPhi0),
            other => other
                .parse::<f64>()
                .map(PhiBoundary::Value)
                .map_err(|_| format!("--phi-boundary expects a number or `at-phi0`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    pub event: f64,
}

/// Fully resolved options for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: Option<i64>,
    pub p: Option<i64>,
    pub k: Option<i64>,
    pub t_max: f64,
    pub tolerances: Tolerances,
    pub seed_epsilon: f64,
    pub phi_boundary: Option<PhiBoundary>,
    pub output_dir: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub relaxed: bool,
    pub timestamp: bool,
    pub list: Option<PathBuf>,
    pub samples: usize,
    pub seed: u64,
}

pub fn load_file_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

fn positive(name: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{name} must be positive and finite, got {v}"))
    }
}

impl RunConfig {
    /// Merges command-line flags over the optional config file and defaults.
    pub fn resolve(command: Command, flags: &Flags, file: &FileConfig) -> Result<Self, String> {
        let defaults = lomse_core::Tolerances::default();
        let phi_boundary = match (&flags.phi_boundary, &file.phi_boundary) {
            (Some(s), _) => Some(PhiBoundary::parse(s)?),
            (None, Some(PhiBoundaryValue::Number(v))) => Some(PhiBoundary::Value(*v)),
            (None, Some(PhiBoundaryValue::Text(s))) => Some(PhiBoundary::parse(s)?),
            (None, None) => None,
        };
        let cfg = RunConfig {
            command,
            n: flags.n.or(file.n),
            p: flags.p.or(file.p),
            k: flags.k.or(file.k),
            t_max: positive("t-max", flags.t_max.or(file.t_max).unwrap_or(lomse_core::dynamics::DEFAULT_T_MAX))?,
            tolerances: Tolerances {
                abs: positive("abs-tol", flags.abs_tol.or(file.abs_tol).unwrap_or(defaults.abs))?,
                rel: positive("rel-tol", flags.rel_tol.or(file.rel_tol).unwrap_or(defaults.rel))?,
                event: positive("event-tol", flags.event_tol.or(file.event_tol).unwrap_or(defaults.event))?,
            },
            seed_epsilon: positive(
                "seed-epsilon",
                flags.seed_epsilon.or(file.seed_epsilon).unwrap_or(lomse_core::dynamics::DEFAULT_SEED_EPSILON),
            )?,
            phi_boundary,
            output_dir: flags.out.clone().or_else(|| file.out.clone()),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            jobs: flags.jobs.or(file.jobs).unwrap_or(1).max(1),
            relaxed: flags.relaxed || file.relaxed.unwrap_or(false),
            timestamp: !(flags.no_timestamp || file.no_timestamp.unwrap_or(false)),
            list: flags.list.clone().or_else(|| file.list.clone()),
            samples: flags.samples.or(file.samples).unwrap_or(1000),
            seed: flags.seed.or(file.seed).unwrap_or(0),
        };
        if let Some(PhiBoundary::Value(v)) = cfg.phi_boundary {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("phi-boundary must be finite and >= 0, got {v}"));
            }
        }
        if cfg.samples == 0 {
            return Err("samples must be at least 1".into());
        }
        Ok(cfg)
    }

    pub fn triple(&self) -> Result<(i64, i64, i64), String> {
        match (self.n, self.p, self.k) {
            (Some(n), Some(p), Some(k)) => Ok((n, p, k)),
            _ => Err(format!("`{}` needs --n, --p and --k", self.command.name())),
        }
    }

    pub fn orbit_options(&self) -> lomse_core::OrbitOptions {
        let mut opts = lomse_core::OrbitOptions::with_tolerances(self.tolerances.abs, self.tolerances.rel);
        opts.tolerances.event = self.tolerances.event;
        opts
    }
}
