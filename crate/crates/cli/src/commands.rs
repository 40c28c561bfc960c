use crate::config::{Command, Format, PhiBoundary, RunConfig};
use lomse_core::dirichlet::{dirichlet_multiplicity, nonminimizing_verdict, DirichletReport};
use lomse_core::dynamics::{
    barrier_certificate_a3, barrier_certificate_a4, extract_profile, integrate_orbit, lemma_triples_extended,
    oscillation_record, seed_unstable, Event, Orbit, OrbitOptions, Profile, Terminal,
};
use lomse_core::geometry::{geometry_report, jordan_angles, GeometryReport, Verdict};
use lomse_core::hopf::verify_hopf;
use lomse_core::params::{spectra, validate_params, validate_params_relaxed, LomseParams, SpectralData, Stability};
use lomse_core::LomseError;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Result of a command: text for standard output, files for the output
/// directory, and whether every reported check passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(String, String)>,
    pub pass: bool,
}

#[derive(Debug)]
pub enum Failure {
    /// Unusable configuration or parameters.
    Config(String),
    /// A computation that could not be completed.
    Runtime(String),
}

impl From<LomseError> for Failure {
    fn from(e: LomseError) -> Self {
        match e {
            LomseError::InvalidFamily { .. }
            | LomseError::InvalidDegree { .. }
            | LomseError::InvalidInput(_)
            | LomseError::WrongCase(_)
            | LomseError::WrongType => Failure::Config(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    #[serde(flatten)]
    body: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, value: f64, pass: bool) -> Self {
        Self { name: name.to_string(), value, pass }
    }

    fn flag(name: &str, pass: bool) -> Self {
        Self::new(name, if pass { 1.0 } else { 0.0 }, pass)
    }
}

fn render<T: Serialize>(cfg: &RunConfig, body: T) -> String {
    let timestamp = cfg.timestamp.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let mut s = serde_json::to_string_pretty(&Report { command: cfg.command.name(), timestamp, body })
        .expect("reports serialize");
    s.push('\n');
    s
}

fn params_for(cfg: &RunConfig, n: i64, p: i64, k: i64) -> Result<LomseParams, Failure> {
    let r = if cfg.relaxed { validate_params_relaxed(n, p, k) } else { validate_params(n, p, k) };
    r.map_err(Failure::from)
}

fn params(cfg: &RunConfig) -> Result<LomseParams, Failure> {
    let (n, p, k) = cfg.triple().map_err(Failure::Config)?;
    params_for(cfg, n, p, k)
}

fn orbit(cfg: &RunConfig, prm: &LomseParams) -> Result<Orbit, Failure> {
    let seed = seed_unstable(prm, cfg.seed_epsilon);
    Ok(integrate_orbit(prm, seed, cfg.t_max, &cfg.orbit_options())?)
}

pub fn run(cfg: &RunConfig) -> CmdResult {
    match cfg.command {
        Command::Classify => classify(cfg),
        Command::Portrait => portrait(cfg),
        Command::Profile => profile(cfg),
        Command::Dirichlet => dirichlet(cfg),
        Command::Barriers => barriers(cfg),
        Command::VerifyHopf => hopf(cfg),
        Command::Sweep => sweep(cfg),
    }
}

#[derive(Serialize)]
struct ClassifyBody<'a> {
    params: &'a LomseParams,
    spectra: SpectralData,
    geometry: GeometryReport,
    checks: Vec<Check>,
}

fn classify_checks(prm: &LomseParams, sp: &SpectralData, geo: &GeometryReport) -> Vec<Check> {
    let tan_dev = (prm.theta().tan() - prm.phi0()).abs();
    let w_dev = (geo.slope_w * geo.cos_alpha - 1.0).abs();
    let mult: u32 = jordan_angles(prm).iter().map(|j| j.multiplicity).sum();
    let v1 = nalgebra::Vector2::new(sp.v1[0], sp.v1[1]);
    let eig_dev = (sp.a() * v1 - v1 * sp.mu1).norm();
    let disc_neg = lomse_core::exact::sign(prm.discriminant()) < 0;
    vec![
        Check::new("tan(theta) = phi0", tan_dev, tan_dev < 1e-12),
        Check::new("W cos(alpha) = 1", w_dev, w_dev < 1e-12),
        Check::new("Jordan multiplicities sum to n + 1", f64::from(mult), mult == prm.n() + 1),
        Check::new("A V1 = mu1 V1", eig_dev, eig_dev < 1e-12),
        Check::flag("discriminant sign matches stability", disc_neg == prm.is_type_ii()),
    ]
}

fn classify(cfg: &RunConfig) -> CmdResult {
    let prm = params(cfg)?;
    let sp = spectra(&prm);
    let geometry = geometry_report(&prm);
    let checks = classify_checks(&prm, &sp, &geometry);
    let pass = checks.iter().all(|c| c.pass);
    let json = render(cfg, ClassifyBody { params: &prm, spectra: sp, geometry, checks });
    Ok(Outcome { stdout: json.clone(), files: vec![("classify.json".into(), json)], pass })
}

#[derive(Serialize)]
struct OrbitSummary<'a> {
    n: u32,
    p: u32,
    k: u32,
    stability: Stability,
    phi0: f64,
    seed_epsilon: f64,
    terminal: Terminal,
    t_end: f64,
    final_distance: f64,
    samples: usize,
    psi_zero_count: usize,
    events: &'a [Event],
    checks: Vec<Check>,
}

/// Half turns followed past the end of a spiral orbit for the lemma check.
const LEMMA_EXTRA_TURNS: usize = 6;

fn orbit_checks(prm: &LomseParams, o: &Orbit, opts: &OrbitOptions) -> Vec<Check> {
    let mut checks = vec![Check::flag("converged to (phi0, 0)", o.converged())];
    if prm.stability() == Stability::TypeI {
        let min_psi = o.samples.iter().map(|s| s.psi).fold(f64::INFINITY, f64::min);
        checks.push(Check::new("psi > 0 at all samples", min_psi, min_psi > 0.0));
        let inc = o.samples.windows(2).all(|w| w[1].phi > w[0].phi);
        checks.push(Check::flag("phi strictly increasing", inc));
    } else {
        let min_slope = o.samples.iter().map(|s| s.phi + s.psi).fold(f64::INFINITY, f64::min);
        checks.push(Check::new("phi + psi > 0 at all samples", min_slope, min_slope > 0.0));
        let alternating = o.psi_zero_events().collect::<Vec<_>>().windows(2).all(|w| w[0].rising != w[1].rising);
        checks.push(Check::flag("psi changes sign alternately", alternating));
        if let Ok(rec) = oscillation_record(o) {
            checks.push(Check::flag("odd extrema decrease", rec.odd_decreasing()));
            checks.push(Check::flag("even extrema increase", rec.even_increasing()));
            checks.push(Check::flag("extrema bracket phi0", rec.brackets_phi0()));
        }
        if let Ok(triples) = lemma_triples_extended(o, prm, LEMMA_EXTRA_TURNS, opts) {
            let held = triples.iter().filter(|t| t.applies).all(|t| t.holds);
            checks.push(Check::new("lemma on applicable event triples", triples.len() as f64, held));
        }
    }
    checks
}

fn f(v: f64) -> String {
    format!("{v:?}")
}

pub fn orbit_csv(o: &Orbit) -> String {
    let mut s = String::from("t,phi,psi\n");
    for p in &o.samples {
        let _ = writeln!(s, "{},{},{}", f(p.t), f(p.phi), f(p.psi));
    }
    s
}

pub fn profile_csv(pr: &Profile) -> String {
    let mut s = String::from("r,rho,rho_r,residual\n");
    for i in 0..pr.r_samples.len() {
        let _ = writeln!(s, "{},{},{},{}", f(pr.r_samples[i]), f(pr.rho[i]), f(pr.rho_r[i]), f(pr.residuals[i]));
    }
    s
}

fn portrait(cfg: &RunConfig) -> CmdResult {
    let prm = params(cfg)?;
    let o = orbit(cfg, &prm)?;
    let checks = orbit_checks(&prm, &o, &cfg.orbit_options());
    let pass = checks.iter().all(|c| c.pass);
    let summary = OrbitSummary {
        n: prm.n(),
        p: prm.p(),
        k: prm.k(),
        stability: prm.stability(),
        phi0: prm.phi0(),
        seed_epsilon: cfg.seed_epsilon,
        terminal: o.terminal,
        t_end: o.t_end(),
        final_distance: o.final_distance_to_cone(),
        samples: o.samples.len(),
        psi_zero_count: o.psi_zero_count(),
        events: &o.events,
        checks,
    };
    let json = render(cfg, summary);
    let csv = orbit_csv(&o);
    let stdout = match cfg.format {
        Format::Json => json.clone(),
        Format::Csv => csv.clone(),
    };
    Ok(Outcome { stdout, files: vec![("orbit.csv".into(), csv), ("orbit_events.json".into(), json)], pass })
}

/// Residual bound relative to the integration tolerance.
const RESIDUAL_FACTOR: f64 = 1e4;

#[derive(Serialize)]
struct ProfileSummary {
    n: u32,
    p: u32,
    k: u32,
    samples: usize,
    r_min: f64,
    r_max: f64,
    limit_slope: f64,
    phi0: f64,
    small_r_slope: Option<f64>,
    max_abs_residual: f64,
    residual_tolerance: f64,
    checks: Vec<Check>,
}

fn profile(cfg: &RunConfig) -> CmdResult {
    let prm = params(cfg)?;
    let o = orbit(cfg, &prm)?;
    let pr = extract_profile(&o, &prm)?;
    let residual_tolerance = RESIDUAL_FACTOR * cfg.tolerances.abs.max(cfg.tolerances.rel);
    let max_abs_residual = pr.max_abs_residual();
    let slope = pr.small_r_slope(0.01);
    let k = f64::from(prm.k());
    let last = pr.r_samples.len() - 1;
    let limit_slope = pr.rho[last] / pr.r_samples[last];
    let checks = vec![
        Check::new("max |residual|", max_abs_residual, max_abs_residual < residual_tolerance),
        Check::new(
            "small-r slope within 5% of k",
            slope.unwrap_or(f64::NAN),
            slope.is_some_and(|s| (s - k).abs() < 0.05 * k),
        ),
        Check::flag("rho > 0", pr.rho.iter().all(|&r| r > 0.0)),
    ];
    let pass = checks.iter().all(|c| c.pass);
    let json = render(
        cfg,
        ProfileSummary {
            n: prm.n(),
            p: prm.p(),
            k: prm.k(),
            samples: pr.r_samples.len(),
            r_min: pr.r_samples[0],
            r_max: pr.r_samples[last],
            limit_slope,
            phi0: prm.phi0(),
            small_r_slope: slope,
            max_abs_residual,
            residual_tolerance,
            checks,
        },
    );
    let csv = profile_csv(&pr);
    let stdout = match cfg.format {
        Format::Json => json.clone(),
        Format::Csv => csv.clone(),
    };
    Ok(Outcome { stdout, files: vec![("profile.csv".into(), csv), ("profile.json".into(), json)], pass })
}

#[derive(Serialize)]
struct DirichletBody {
    n: u32,
    p: u32,
    k: u32,
    phi0: f64,
    stability: Stability,
    #[serde(flatten)]
    report: DirichletReport,
}

fn dirichlet(cfg: &RunConfig) -> CmdResult {
    let prm = params(cfg)?;
    let boundary = match cfg.phi_boundary {
        Some(PhiBoundary::AtPhi0) => prm.phi0(),
        Some(PhiBoundary::Value(v)) => v,
        None => return Err(Failure::Config("`dirichlet` needs --phi-boundary".into())),
    };
    let o = orbit(cfg, &prm)?;
    let report = dirichlet_multiplicity(&o, &prm, boundary)?;
    let json = render(
        cfg,
        DirichletBody { n: prm.n(), p: prm.p(), k: prm.k(), phi0: prm.phi0(), stability: prm.stability(), report },
    );
    Ok(Outcome { stdout: json.clone(), files: vec![("dirichlet.json".into(), json)], pass: true })
}

fn barriers(cfg: &RunConfig) -> CmdResult {
    let prm = params(cfg)?;
    let cert = match prm.stability() {
        Stability::TypeI => barrier_certificate_a3(&prm)?,
        Stability::TypeII => barrier_certificate_a4(&prm)?,
    };
    let pass = cert.pass;
    let json = render(cfg, cert);
    Ok(Outcome { stdout: json.clone(), files: vec![("barriers.json".into(), json)], pass })
}

fn hopf(cfg: &RunConfig) -> CmdResult {
    let report = verify_hopf(cfg.samples, cfg.seed)?;
    let pass = report.pass;
    let json = render(cfg, report);
    Ok(Outcome { stdout: json.clone(), files: vec![("verify_hopf.json".into(), json)], pass })
}

/// The triples swept when no list file is given.
pub const DEFAULT_SWEEP: [(i64, i64, i64); 8] =
    [(3, 2, 2), (3, 2, 4), (3, 2, 6), (5, 4, 2), (5, 4, 4), (5, 4, 6), (7, 4, 2), (15, 8, 2)];

pub fn parse_triples(text: &str) -> Result<Vec<(i64, i64, i64)>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<i64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        match nums[..] {
            [n, p, k] => out.push((n, p, k)),
            _ => return Err(format!("line {}: expected three integers `n p k`", lineno + 1)),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub p: u32,
    pub k: u32,
    pub stability: Stability,
    pub phi0: f64,
    pub cos_alpha: f64,
    pub volume_ratio: f64,
    pub slope_w: f64,
    pub psi_zero_events: usize,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
}

fn sweep_row(cfg: &RunConfig, prm: &LomseParams) -> SweepRow {
    let geo = geometry_report(prm);
    let mut row = SweepRow {
        n: prm.n(),
        p: prm.p(),
        k: prm.k(),
        stability: prm.stability(),
        phi0: prm.phi0(),
        cos_alpha: geo.cos_alpha,
        volume_ratio: geo.volume_ratio,
        slope_w: geo.slope_w,
        psi_zero_events: 0,
        verdict: None,
        error: None,
    };
    let result = orbit(cfg, prm).and_then(|o| {
        row.psi_zero_events = o.psi_zero_count();
        let pr = extract_profile(&o, prm)?;
        match nonminimizing_verdict(&pr, &o, prm) {
            Ok(d) => Ok(d.verdict),
            // no crossing of phi0: nothing to compare
            Err(LomseError::InsufficientEvents { .. }) => Ok(Verdict::Inconclusive),
            Err(e) => Err(e.into()),
        }
    });
    match result {
        Ok(v) => row.verdict = Some(v),
        Err(Failure::Config(e) | Failure::Runtime(e)) => row.error = Some(e),
    }
    row
}

fn sweep(cfg: &RunConfig) -> CmdResult {
    let triples = match &cfg.list {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_triples(&text).map_err(Failure::Config)?
        }
        None => DEFAULT_SWEEP.to_vec(),
    };
    let params = triples
        .iter()
        .map(|&(n, p, k)| params_for(cfg, n, p, k))
        .collect::<Result<Vec<_>, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| params.par_iter().map(|prm| sweep_row(cfg, prm)).collect());
    let pass = rows.iter().all(|r| r.error.is_none());

    let mut csv = String::from("n,p,k,type,phi0,cos_alpha,volume_ratio,slope_w,psi_zero_events,verdict\n");
    for r in &rows {
        let verdict = match (&r.verdict, &r.error) {
            (Some(v), _) => format!("{v:?}"),
            (None, _) => "Error".to_string(),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{:?},{},{},{},{},{},{}",
            r.n,
            r.p,
            r.k,
            r.stability,
            f(r.phi0),
            f(r.cos_alpha),
            f(r.volume_ratio),
            f(r.slope_w),
            r.psi_zero_events,
            verdict
        );
    }
    #[derive(Serialize)]
    struct SweepBody<'a> {
        rows: &'a [SweepRow],
    }
    let json = render(cfg, SweepBody { rows: &rows });
    let stdout = match cfg.format {
        Format::Json => json.clone(),
        Format::Csv => csv.clone(),
    };
    Ok(Outcome { stdout, files: vec![("sweep.csv".into(), csv), ("sweep.json".into(), json)], pass })
}
