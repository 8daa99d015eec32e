//! Command dispatch for the `staticgeo` binary.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::boundary::{classify, gauss_bonnet_euler, measure_boundary, BoundaryClassification, FieldStats};
use crate::config::{ChainName, RunConfig};
use crate::conformal::{build_pair, scalar_transform_check, Sign};
use crate::error::{GeoError, Result};
use crate::identities::{identity_report, IdentityKind, IdentityResidualReport, IdentityStatus};
use crate::mass::mass_report;
use crate::report::{to_json, write_profile_file, Report, Status};
use crate::rigidity::{run_appendix_b_horizon, run_appendix_b_photon, run_main_theorem_check, Conclusion};
use crate::sampling::random_shell_points;
use crate::tensor::chart::Metric;
use crate::tensor::curvature::curvature_at;
use crate::triple::{static_vacuum_residual, StaticTriple};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "STATICGEO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "staticgeo", version, about = "Checks for static vacuum triples and Schwarzschild rigidity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curvature, static-vacuum, conformal and identity checks.
    Verify(Overrides),
    /// Runs a rigidity chain (main, bh3, photon3).
    Rigidity(Overrides),
    /// ADM, flux and closed-form masses.
    Mass(Overrides),
    /// Classifies each declared boundary component.
    Classify(Overrides),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Verify(_) => "verify",
            Self::Rigidity(_) => "rigidity",
            Self::Mass(_) => "mass",
            Self::Classify(_) => "classify",
        }
    }

    pub fn overrides(&self) -> &Overrides {
        match self {
            Self::Verify(o) | Self::Rigidity(o) | Self::Mass(o) | Self::Classify(o) => o,
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// TOML or JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub fixture: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<f64>,
    /// `horizon`, `r=<areal radius>` or `s=<isotropic radius>`.
    #[arg(long)]
    pub cut: Option<String>,
    /// `main`, `bh3` or `photon3`.
    #[arg(long)]
    pub chain: Option<String>,
    /// Directory receiving `<command>.json` (and `profile.csv`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Overrides {
    /// Loads the config file, if any, and applies command-line overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(f) = &self.fixture {
            cfg.triple.fixture = f.clone();
        }
        if let Some(n) = self.n {
            cfg.triple.n = n;
        }
        if let Some(m) = self.m {
            cfg.triple.m = m;
        }
        if let Some(c) = &self.cut {
            cfg.triple.cut = Some(c.clone());
        }
        if let Some(c) = &self.chain {
            cfg.chain = c.parse()?;
        }
        if let Some(o) = &self.out {
            cfg.output.dir = Some(o.display().to_string());
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

/// Result of one command: the exit code and the JSON report text.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub json: String,
}

pub fn status_of(err: &GeoError) -> Status {
    match err {
        GeoError::Config(_) | GeoError::Parse(_) | GeoError::InvalidParameter(_) => Status::ConfigError,
        GeoError::Precondition(_)
        | GeoError::HarmonicityViolated { .. }
        | GeoError::NonPositiveFactor { .. }
        | GeoError::NonDecaying(_) => Status::HypothesisViolated,
        _ => Status::NumericalFailure,
    }
}

/// Caps the global rayon pool from `STATICGEO_THREADS`.
pub fn init_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Parses arguments, runs the command and prints the report. Returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return 2;
    }
    let cfg = match cli.command.overrides().resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::ConfigError.exit_code();
        }
    };
    match execute(cli.command.name(), &cfg) {
        Ok(outcome) => {
            print!("{}", outcome.json);
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            status_of(&e).exit_code()
        }
    }
}

/// Runs a command on a resolved config and writes any requested outputs.
/// Errors are only returned when the report itself cannot be produced.
pub fn execute(command: &str, cfg: &RunConfig) -> Result<Outcome> {
    let out_dir = cfg.output.dir.as_deref().map(Path::new);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let json = match command {
        "verify" => emit(command, cfg, cmd_verify(cfg))?,
        "mass" => emit(command, cfg, cmd_mass(cfg))?,
        "classify" => emit(command, cfg, cmd_classify(cfg))?,
        "rigidity" => match cfg.chain {
            ChainName::Main => {
                let res = cmd_rigidity_main(cfg);
                if let (Some(dir), Ok(r)) = (out_dir, &res) {
                    if let Some(p) = &r.result.profile {
                        write_profile_file(p, &dir.join("profile.csv"))?;
                    }
                }
                emit(command, cfg, res)?
            }
            ChainName::Bh3 => emit(command, cfg, cmd_chain(cfg, true))?,
            ChainName::Photon3 => emit(command, cfg, cmd_chain(cfg, false))?,
        },
        other => return Err(GeoError::Config(format!("unknown command '{other}'"))),
    };
    if let Some(dir) = out_dir {
        std::fs::write(dir.join(format!("{command}.json")), &json.json)?;
    }
    Ok(json)
}

/// Command result before wrapping in the report envelope.
pub struct Evaluated<T> {
    pub status: Status,
    pub findings: Vec<String>,
    pub result: T,
}

fn emit<T: Serialize>(command: &str, cfg: &RunConfig, res: Result<Evaluated<T>>) -> Result<Outcome> {
    let report = match res {
        Ok(ev) => Report::new(command, ev.status, ev.findings, cfg.clone(), Some(ev.result)),
        Err(e) => Report::new(command, status_of(&e), vec![e.to_string()], cfg.clone(), None),
    };
    Ok(Outcome {
        exit_code: report.exit_code,
        json: to_json(&report)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub applicable: bool,
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
    pub note: String,
}

impl CheckLine {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            applicable: true,
            pass: value <= tolerance,
            value,
            tolerance,
            note: String::new(),
        }
    }

    fn skipped(name: &str, tolerance: f64, note: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            applicable: false,
            pass: true,
            value: f64::NAN,
            tolerance,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyResult {
    pub triple: String,
    pub n: usize,
    pub points: usize,
    pub identity_points: usize,
    pub checks: Vec<CheckLine>,
    pub identities: Vec<IdentityResidualReport>,
}

fn sample_points(triple: &StaticTriple, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let n = triple.dim();
    let layout = triple.chart.layout;
    let mut out = Vec::with_capacity(count);
    let mut round = 0;
    while out.len() < count && round < 16 {
        for x in random_shell_points(seed.wrapping_add(round), count, n, layout, triple.sample_shell) {
            if out.len() < count && triple.chart.validate_point(&x).is_ok() {
                out.push(x);
            }
        }
        round += 1;
    }
    out
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Evaluated<VerifyResult>> {
    let opts = &cfg.verify;
    let triple = cfg.build_triple()?;
    let points = sample_points(&triple, cfg.seed, opts.points);
    if points.is_empty() {
        return Err(GeoError::Config("no sample point lies inside the chart domain".into()));
    }
    let mut checks = Vec::new();
    let mut findings = Vec::new();

    let mut bianchi: f64 = 0.0;
    for x in &points {
        let c = curvature_at(&triple.chart, x)?;
        bianchi = bianchi.max(c.first_bianchi_defect() / c.max_abs_riemann().max(1.0));
    }
    checks.push(CheckLine::new("first-bianchi", bianchi, opts.bianchi_tol));

    let mut hess: f64 = 0.0;
    let mut lap: f64 = 0.0;
    for x in &points {
        let r = static_vacuum_residual(&triple, x)?;
        hess = hess.max(r.max_abs());
        lap = lap.max(r.laplacian.abs());
    }
    let laplacian = CheckLine::new("harmonic-lapse", lap, opts.vacuum_tol);
    if !laplacian.pass {
        findings.push(format!("ΔN ≠ 0 (max |ΔN| = {lap:e})"));
    }
    let hessian = CheckLine::new("static-vacuum", hess, opts.vacuum_tol);
    if !hessian.pass {
        findings.push(format!("∇²N ≠ N·Ric (max residual {hess:e})"));
    }
    let harmonic = laplacian.pass;
    checks.push(laplacian);
    checks.push(hessian);

    for sign in [Sign::Plus, Sign::Minus] {
        let name = format!("scalar-transform-{}", sign.label());
        if !harmonic {
            checks.push(CheckLine::skipped(&name, opts.transform_tol, "lapse is not harmonic"));
            continue;
        }
        let pair = match build_pair(&triple, sign) {
            Ok(p) => p,
            Err(e) => {
                checks.push(CheckLine::skipped(&name, opts.transform_tol, e.to_string()));
                continue;
            }
        };
        let mut worst: f64 = 0.0;
        let mut skipped = 0;
        for x in &points {
            match scalar_transform_check(&pair, &triple.lapse, x) {
                Ok(c) => worst = worst.max(c.residual / c.direct.abs().max(1.0)),
                Err(GeoError::NonPositiveFactor { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        let mut line = CheckLine::new(&name, worst, opts.transform_tol);
        if skipped > 0 {
            line.note = format!("{skipped} points with nonpositive factor skipped");
        }
        if !line.pass {
            findings.push(format!("{name}: residual {worst:e}"));
        }
        checks.push(line);
    }

    let inside: Vec<Vec<f64>> = points
        .iter()
        .filter(|x| {
            let v = triple.lapse_at(x);
            v > 0.0 && v < 1.0
        })
        .take(opts.identity_points)
        .cloned()
        .collect();
    let mut identities = Vec::new();
    if inside.is_empty() {
        findings.push("no sample point with 0 < N < 1; identity checks skipped".into());
    } else {
        for sign in [Sign::Plus, Sign::Minus] {
            for kind in [IdentityKind::Divergence, IdentityKind::TracefreeLie, IdentityKind::Composition] {
                let r = identity_report(&triple, kind, sign, &inside, cfg.triple.declared_flat)?;
                if r.status == IdentityStatus::Mismatch {
                    findings.push(format!("{}: residual {:e}", r.identity, r.max_rel_residual));
                }
                identities.push(r);
            }
        }
    }

    let pass = checks.iter().all(|c| c.pass) && identities.iter().all(|r| r.status != IdentityStatus::Mismatch);
    Ok(Evaluated {
        status: if pass { Status::Pass } else { Status::NumericalFailure },
        findings,
        result: VerifyResult {
            triple: triple.label.clone(),
            n: triple.dim(),
            points: points.len(),
            identity_points: inside.len(),
            checks,
            identities,
        },
    })
}

pub fn cmd_mass(cfg: &RunConfig) -> Result<Evaluated<crate::mass::MassReport>> {
    let triple = cfg.build_triple()?;
    let report = mass_report(&triple, &cfg.rigidity.classify)?;
    Ok(Evaluated {
        status: Status::Pass,
        findings: report.notes.clone(),
        result: report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyEntry {
    pub label: String,
    pub topology: String,
    pub classification: BoundaryClassification,
    pub area: f64,
    pub mean_curvature: FieldStats,
    pub lapse: FieldStats,
    pub normal_derivative: FieldStats,
    pub scalar: FieldStats,
    pub max_umbilicity: f64,
    pub gauss_equation_defect: f64,
    pub euler_characteristic: Option<f64>,
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Evaluated<Vec<ClassifyEntry>>> {
    let triple = cfg.build_triple()?;
    if triple.boundaries.is_empty() {
        return Err(GeoError::Precondition("triple declares no boundary component".into()));
    }
    let mut entries = Vec::new();
    let mut findings = Vec::new();
    for surface in &triple.boundaries {
        let data = measure_boundary(&triple, surface)?;
        let class = classify(&data, &cfg.rigidity.classify);
        if let BoundaryClassification::Unclassified { violations } = &class {
            findings.push(format!("{}: unclassified ({})", data.label, violations.join("; ")));
        }
        let euler = if data.n == 3 { gauss_bonnet_euler(&data).ok() } else { None };
        entries.push(ClassifyEntry {
            label: data.label.clone(),
            topology: data.topology.clone(),
            area: data.area,
            mean_curvature: data.mean_curvature(),
            lapse: data.lapse(),
            normal_derivative: data.normal_derivative(),
            scalar: data.scalar(),
            max_umbilicity: data.max_umbilicity(),
            gauss_equation_defect: data.gauss_equation_defect(),
            euler_characteristic: euler,
            classification: class,
        });
    }
    let status = if findings.is_empty() {
        Status::Pass
    } else {
        Status::HypothesisViolated
    };
    Ok(Evaluated {
        status,
        findings,
        result: entries,
    })
}

pub fn cmd_rigidity_main(cfg: &RunConfig) -> Result<Evaluated<crate::rigidity::RigidityVerdict>> {
    let triple = cfg.build_triple()?;
    let verdict = run_main_theorem_check(&triple, &cfg.rigidity)?;
    let mut findings: Vec<String> = verdict
        .violations
        .iter()
        .map(|v| format!("{}: {}", v.hypothesis, v.details))
        .collect();
    let status = match verdict.conclusion {
        Conclusion::CertifiedSchwarzschild => Status::Pass,
        Conclusion::HypothesesHoldNoEqualityDetected => {
            findings.extend(verdict.notes.iter().cloned());
            Status::Pass
        }
        Conclusion::HypothesisViolated => Status::HypothesisViolated,
    };
    Ok(Evaluated {
        status,
        findings,
        result: verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "chain", rename_all = "kebab-case")]
pub enum ChainResult {
    Bh3(crate::rigidity::HorizonChain),
    Photon3(crate::rigidity::PhotonChain),
}

pub fn cmd_chain(cfg: &RunConfig, horizon: bool) -> Result<Evaluated<ChainResult>> {
    let triple = cfg.build_triple()?;
    let tol = &cfg.rigidity.classify;
    let (result, holds, violations) = if horizon {
        let c = run_appendix_b_horizon(&triple, tol)?;
        let (h, v) = (c.holds, c.violations.clone());
        (ChainResult::Bh3(c), h, v)
    } else {
        let c = run_appendix_b_photon(&triple, tol)?;
        let (h, v) = (c.holds, c.violations.clone());
        (ChainResult::Photon3(c), h, v)
    };
    Ok(Evaluated {
        status: if holds { Status::Pass } else { Status::HypothesisViolated },
        findings: violations,
        result,
    })
}
