//! Batch front-end used by the thin binary: single runs, one-dimensional
//! parameter sweeps, and the benchmark-state regression.
//!
//! Settings resolve in three layers: built-in defaults (tau = 1, dt = 1e-3,
//! log base 2, lambda = 1, omega_c = 1, gamma0 = 1, k = 1), then a config
//! file of flat `key = value` lines (`#` starts a comment, unknown keys are
//! rejected), then command-line flags, later layers winning. Recognized
//! keys: model, state, rho00, re01, im01, tau, dt, log_base, gamma0,
//! lambda, k, omega_c, omega0, sweep, out, format.
//!
//! `run` emits a per-step trace and a final report; `sweep` emits one report
//! row per sweep point (points evaluate in parallel, rows stay in sweep
//! order, so output files are deterministic). Exit codes: 0 success, 2
//! configuration error, 3 numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::{integrate, Generator};
use crate::models::{AmplitudeDamping, Dephasing, EternalNonMarkovian};
use crate::qlinalg::{table1_state, DensityMatrix, LogBase, C64, TABLE1_REFERENCE};
use crate::qsl::{analyze, validate_chain, QslReport, RunAnalysis, SamplePoint};

#[derive(Parser, Debug)]
#[command(
    name = "qsl-thermo",
    version,
    about = "Quantum-speed-limit bounds for open qubit dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve one trajectory; emit the per-step trace and a final report
    Run(RunArgs),
    /// Sweep one parameter; emit a report row per sweep point
    Sweep(SweepArgs),
    /// Check the six benchmark states against their reference values
    Table1,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Sweep specification param:from:to:steps, param one of
    /// gamma0 | lambda | k | omega_c | tau
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Config file with `key = value` lines; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// amplitude_damping (alias ad), dephasing (alias deph), or eternal
    #[arg(long)]
    pub model: Option<String>,
    /// Benchmark initial state, index 1-6
    #[arg(long)]
    pub state: Option<usize>,
    /// Excited-state population of an explicit initial state
    #[arg(long)]
    pub rho00: Option<f64>,
    /// Re of the coherence of an explicit initial state
    #[arg(long)]
    pub re01: Option<f64>,
    /// Im of the coherence of an explicit initial state
    #[arg(long)]
    pub im01: Option<f64>,
    /// Evolution horizon
    #[arg(long)]
    pub tau: Option<f64>,
    /// Integrator step (snapped so the grid ends exactly at tau)
    #[arg(long)]
    pub dt: Option<f64>,
    /// Entropy log base: 2 or e
    #[arg(long)]
    pub log_base: Option<String>,
    /// Damping model: flat-spectrum decay rate
    #[arg(long)]
    pub gamma0: Option<f64>,
    /// Damping model: spectral width (inverse memory time)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Dephasing model: bath ohmicity
    #[arg(long)]
    pub k: Option<f64>,
    /// Dephasing model: bath cutoff frequency
    #[arg(long)]
    pub omega_c: Option<f64>,
    /// Qubit splitting; accepted for config compatibility and ignored
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        // the reader downstream of a pipe went away; not our error
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Write to stdout, surfacing failures (a closed pipe in particular) as
/// ordinary errors instead of the panics the print! macros produce.
fn emit(text: &str) -> Result<()> {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => cmd_run(&args.common),
        Command::Sweep(args) => cmd_sweep(&args.common, args.sweep.as_deref()),
        Command::Table1 => cmd_table1(),
    }
}

// -- settings: defaults <- config file <- flags --

#[derive(Debug, Clone, Default)]
struct Settings {
    model: Option<String>,
    state: Option<usize>,
    rho00: Option<f64>,
    re01: Option<f64>,
    im01: Option<f64>,
    tau: Option<f64>,
    dt: Option<f64>,
    log_base: Option<String>,
    gamma0: Option<f64>,
    lambda: Option<f64>,
    k: Option<f64>,
    omega_c: Option<f64>,
    omega0: Option<f64>,
    sweep: Option<String>,
    out: Option<PathBuf>,
    format: Option<String>,
}

fn parse_config_file(path: &Path) -> Result<Settings> {
    let text = std::fs::read_to_string(path)?;
    let mut s = Settings::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Config(format!("{}:{}: {msg}", path.display(), idx + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at("expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let num = || -> Result<f64> {
            value
                .parse()
                .map_err(|_| at(format!("`{key}` expects a number, got `{value}`")))
        };
        match key {
            "model" => s.model = Some(value.to_string()),
            "state" => {
                s.state = Some(value.parse().map_err(|_| {
                    at(format!("`state` expects an index 1-6, got `{value}`"))
                })?)
            }
            "rho00" => s.rho00 = Some(num()?),
            "re01" => s.re01 = Some(num()?),
            "im01" => s.im01 = Some(num()?),
            "tau" => s.tau = Some(num()?),
            "dt" => s.dt = Some(num()?),
            "log_base" => s.log_base = Some(value.to_string()),
            "gamma0" => s.gamma0 = Some(num()?),
            "lambda" => s.lambda = Some(num()?),
            "k" => s.k = Some(num()?),
            "omega_c" => s.omega_c = Some(num()?),
            "omega0" => s.omega0 = Some(num()?),
            "sweep" => s.sweep = Some(value.to_string()),
            "out" => s.out = Some(PathBuf::from(value)),
            "format" => s.format = Some(value.to_string()),
            other => return Err(at(format!("unknown key `{other}`"))),
        }
    }
    Ok(s)
}

fn gather(common: &CommonArgs, sweep_flag: Option<&str>) -> Result<Settings> {
    let mut s = match &common.config {
        Some(path) => parse_config_file(path)?,
        None => Settings::default(),
    };
    macro_rules! overlay {
        ($($field:ident),+) => {
            $( if common.$field.is_some() { s.$field = common.$field.clone(); } )+
        };
    }
    overlay!(model, state, rho00, re01, im01, tau, dt, log_base);
    overlay!(gamma0, lambda, k, omega_c, omega0, out, format);
    if let Some(spec) = sweep_flag {
        s.sweep = Some(spec.to_string());
    }
    Ok(s)
}

// -- resolved configuration --

#[derive(Debug, Clone, Copy)]
enum ModelSpec {
    Damping { gamma0: f64, lambda: f64 },
    Dephasing { k: f64, omega_c: f64 },
    Eternal,
}

impl ModelSpec {
    fn name(&self) -> &'static str {
        match self {
            ModelSpec::Damping { .. } => "amplitude_damping",
            ModelSpec::Dephasing { .. } => "dephasing",
            ModelSpec::Eternal => "eternal",
        }
    }

    fn generator(&self) -> Result<Generator> {
        match *self {
            ModelSpec::Damping { gamma0, lambda } => {
                Ok(AmplitudeDamping::new(gamma0, lambda)?.generator())
            }
            ModelSpec::Dephasing { k, omega_c } => Ok(Dephasing::new(k, omega_c)?.generator()),
            ModelSpec::Eternal => Ok(EternalNonMarkovian::new().generator()),
        }
    }

    fn with_param(&self, param: SweepParam, v: f64) -> Result<ModelSpec> {
        match (*self, param) {
            (ModelSpec::Damping { lambda, .. }, SweepParam::Gamma0) => {
                Ok(ModelSpec::Damping { gamma0: v, lambda })
            }
            (ModelSpec::Damping { gamma0, .. }, SweepParam::Lambda) => {
                Ok(ModelSpec::Damping { gamma0, lambda: v })
            }
            (ModelSpec::Dephasing { omega_c, .. }, SweepParam::K) => {
                Ok(ModelSpec::Dephasing { k: v, omega_c })
            }
            (ModelSpec::Dephasing { k, .. }, SweepParam::OmegaC) => {
                Ok(ModelSpec::Dephasing { k, omega_c: v })
            }
            (m, SweepParam::Tau) => Ok(m),
            (m, p) => Err(Error::Config(format!(
                "sweep parameter `{}` does not apply to model `{}`",
                p.name(),
                m.name()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepParam {
    Gamma0,
    Lambda,
    K,
    OmegaC,
    Tau,
}

impl SweepParam {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "gamma0" => Ok(SweepParam::Gamma0),
            "lambda" => Ok(SweepParam::Lambda),
            "k" => Ok(SweepParam::K),
            "omega_c" => Ok(SweepParam::OmegaC),
            "tau" => Ok(SweepParam::Tau),
            other => Err(Error::Config(format!(
                "unknown sweep parameter `{other}` (gamma0 | lambda | k | omega_c | tau)"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            SweepParam::Gamma0 => "gamma0",
            SweepParam::Lambda => "lambda",
            SweepParam::K => "k",
            SweepParam::OmegaC => "omega_c",
            SweepParam::Tau => "tau",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct SweepSpec {
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
}

impl SweepSpec {
    fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!(
                "sweep must be param:from:to:steps, got `{text}`"
            )));
        }
        let param = SweepParam::parse(parts[0])?;
        let bound = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| Error::Config(format!("bad sweep bound `{s}`")))?;
            if !v.is_finite() {
                return Err(Error::Config(format!("sweep bound `{s}` must be finite")));
            }
            Ok(v)
        };
        let from = bound(parts[1])?;
        let to = bound(parts[2])?;
        let steps: usize = parts[3]
            .parse()
            .map_err(|_| Error::Config(format!("bad sweep step count `{}`", parts[3])))?;
        if steps < 2 {
            return Err(Error::Config(format!(
                "sweep needs at least 2 steps, got {steps}"
            )));
        }
        Ok(SweepSpec {
            param,
            from,
            to,
            steps,
        })
    }

    fn values(&self) -> Vec<f64> {
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.from + h * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

struct Resolved {
    model: ModelSpec,
    rho0: DensityMatrix,
    tau: f64,
    dt: f64,
    base: LogBase,
    out: Option<PathBuf>,
    format: Format,
    sweep: Option<SweepSpec>,
}

fn warn_unused(s: &Settings, model: &str) {
    let given: &[(&str, bool)] = &[
        ("gamma0", s.gamma0.is_some()),
        ("lambda", s.lambda.is_some()),
        ("k", s.k.is_some()),
        ("omega_c", s.omega_c.is_some()),
        ("omega0", s.omega0.is_some()),
    ];
    let used: &[&str] = match model {
        "amplitude_damping" => &["gamma0", "lambda"],
        "dephasing" => &["k", "omega_c", "omega0"],
        _ => &[],
    };
    for (key, present) in given {
        if *present && !used.contains(key) {
            eprintln!("warning: `{key}` is not used by model `{model}`");
        }
    }
}

fn resolve(s: Settings, want_sweep: bool) -> Result<Resolved> {
    let model = match s.model.as_deref() {
        None => {
            return Err(Error::Config(
                "missing model (pass --model or set `model` in the config file)".into(),
            ))
        }
        Some("amplitude_damping") | Some("ad") => ModelSpec::Damping {
            gamma0: s.gamma0.unwrap_or(1.0),
            lambda: s.lambda.unwrap_or(1.0),
        },
        Some("dephasing") | Some("deph") => {
            if let Some(w) = s.omega0 {
                eprintln!(
                    "warning: omega0 = {w} is ignored; the qubit splitting commutes with pure dephasing"
                );
            }
            ModelSpec::Dephasing {
                k: s.k.unwrap_or(1.0),
                omega_c: s.omega_c.unwrap_or(1.0),
            }
        }
        Some("eternal") => ModelSpec::Eternal,
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown model `{other}` (amplitude_damping | dephasing | eternal)"
            )))
        }
    };
    warn_unused(&s, model.name());
    model.generator()?; // surface parameter validation now

    let rho0 = match (s.state, s.rho00) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give either a state index or rho00/re01/im01, not both".into(),
            ))
        }
        (Some(idx), None) => {
            if s.re01.is_some() || s.im01.is_some() {
                return Err(Error::Config(
                    "re01/im01 only apply to an explicit rho00 state".into(),
                ));
            }
            table1_state(idx)
                .map_err(|e| Error::Config(format!("bad state index {idx}: {e}")))?
        }
        (None, Some(r00)) => {
            let c = C64::new(s.re01.unwrap_or(0.0), s.im01.unwrap_or(0.0));
            DensityMatrix::from_elements(r00, c)
                .map_err(|e| Error::Config(format!("invalid initial state: {e}")))?
        }
        (None, None) => {
            return Err(Error::Config(
                "missing initial state (--state 1..6, or --rho00 with optional --re01/--im01)"
                    .into(),
            ))
        }
    };

    let tau = s.tau.unwrap_or(1.0);
    let dt = s.dt.unwrap_or(1e-3);
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Config(format!("tau must be positive, got {tau}")));
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= tau) {
        return Err(Error::Config(format!(
            "dt must satisfy 0 < dt <= tau, got dt = {dt}, tau = {tau}"
        )));
    }
    let base = match s.log_base.as_deref() {
        None => LogBase::Two,
        Some(b) => b.parse()?,
    };
    let format = match s.format.as_deref() {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown format `{other}` (csv | json)"
            )))
        }
    };
    let sweep = if want_sweep {
        let text = s.sweep.as_deref().ok_or_else(|| {
            Error::Config("missing sweep specification (--sweep param:from:to:steps)".into())
        })?;
        let spec = SweepSpec::parse(text)?;
        model.with_param(spec.param, spec.from)?; // compatibility check
        Some(spec)
    } else {
        None // `run` ignores a sweep key left in a shared config file
    };

    Ok(Resolved {
        model,
        rho0,
        tau,
        dt,
        base,
        out: s.out,
        format,
        sweep,
    })
}

// -- output schemas --

const TRACE_HEADER: &str = "t,p1,p2,R12,R21,T12,T21,s_dot,s_tot_M,s_tot_NM,activity,dE,dED,speed_tr";

#[derive(Serialize)]
struct TraceRow {
    t: f64,
    p1: f64,
    p2: f64,
    #[serde(rename = "R12")]
    r12: f64,
    #[serde(rename = "R21")]
    r21: f64,
    #[serde(rename = "T12")]
    t12: f64,
    #[serde(rename = "T21")]
    t21: f64,
    s_dot: f64,
    #[serde(rename = "s_tot_M")]
    s_tot_m: f64,
    #[serde(rename = "s_tot_NM")]
    s_tot_nm: f64,
    activity: f64,
    #[serde(rename = "dE")]
    d_e: f64,
    #[serde(rename = "dED")]
    d_ed: f64,
    speed_tr: f64,
}

fn trace_row(s: &SamplePoint) -> TraceRow {
    TraceRow {
        t: s.t,
        p1: s.populations[0],
        p2: s.populations[1],
        r12: s.rates.raw[0][1],
        r21: s.rates.raw[1][0],
        t12: s.rates.renorm[0][1],
        t21: s.rates.renorm[1][0],
        s_dot: s.thermo.ledger.entropy_rate,
        s_tot_m: s.thermo.ledger.production_markov,
        s_tot_nm: s.thermo.ledger.production_non_markov,
        activity: s.thermo.activity,
        d_e: s.thermo.delta_e,
        d_ed: s.thermo.delta_e_d,
        speed_tr: s.speed,
    }
}

fn trace_csv(samples: &[SamplePoint]) -> String {
    let mut out = String::with_capacity(64 * (samples.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for s in samples {
        let r = trace_row(s);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.p1,
            r.p2,
            r.r12,
            r.r21,
            r.t12,
            r.t21,
            r.s_dot,
            r.s_tot_m,
            r.s_tot_nm,
            r.activity,
            r.d_e,
            r.d_ed,
            r.speed_tr
        );
    }
    out
}

fn report_lines(r: &QslReport) -> Vec<String> {
    vec![
        format!("tau = {}", r.tau),
        format!("distance = {}", r.distance),
        format!("mean_speed = {}", r.mean_speed),
        format!("mean_dE = {}", r.mean_delta_e),
        format!("mean_dED = {}", r.mean_delta_e_d),
        format!("mean_s_tot_M = {}", r.mean_production_markov),
        format!("mean_activity = {}", r.mean_activity),
        format!("tau_q1 = {}", r.tau_q1),
        format!("tau_q2 = {}", r.tau_q2),
        format!("trivial_q2 = {}", r.trivial_q2),
        format!("stationary = {}", r.stationary),
    ]
}

const SWEEP_HEADER: &str =
    "sweep_value,distance,tau_q1,tau_q2,ratio_q1,ratio_q2,ratio_q2_q1,trivial_q2";

#[derive(Serialize)]
struct SweepRow {
    sweep_value: f64,
    distance: f64,
    tau_q1: f64,
    tau_q2: f64,
    ratio_q1: f64,
    ratio_q2: f64,
    ratio_q2_q1: f64,
    trivial_q2: bool,
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.sweep_value,
            r.distance,
            r.tau_q1,
            r.tau_q2,
            r.ratio_q1,
            r.ratio_q2,
            r.ratio_q2_q1,
            r.trivial_q2
        );
    }
    out
}

// -- subcommands --

fn cmd_run(common: &CommonArgs) -> Result<()> {
    let cfg = resolve(gather(common, None)?, false)?;
    let g = cfg.model.generator()?;
    let traj = integrate(&g, &cfg.rho0, cfg.tau, cfg.dt)?;
    let out = analyze(&traj, &g, cfg.base)?;
    validate_chain(&out.report)?;
    emit_run(&cfg, &out)
}

fn emit_run(cfg: &Resolved, out: &RunAnalysis) -> Result<()> {
    match cfg.format {
        Format::Csv => {
            let mut csv = trace_csv(&out.samples);
            match &cfg.out {
                Some(path) => {
                    std::fs::write(path, csv)?;
                    emit(&joined(&report_lines(&out.report), ""))?;
                }
                None => {
                    // report are comment lines so the stream stays valid CSV
                    csv.push_str(&joined(&report_lines(&out.report), "# "));
                    emit(&csv)?;
                }
            }
        }
        Format::Json => {
            let rows: Vec<TraceRow> = out.samples.iter().map(trace_row).collect();
            let doc = serde_json::json!({ "trace": rows, "report": out.report });
            let mut text = serde_json::to_string(&doc).expect("report serializes");
            text.push('\n');
            match &cfg.out {
                Some(path) => {
                    std::fs::write(path, text)?;
                    emit(&joined(&report_lines(&out.report), ""))?;
                }
                None => emit(&text)?,
            }
        }
    }
    Ok(())
}

fn joined(lines: &[String], prefix: &str) -> String {
    let mut s = String::new();
    for line in lines {
        s.push_str(prefix);
        s.push_str(line);
        s.push('\n');
    }
    s
}

fn run_point(cfg: &Resolved, param: SweepParam, v: f64) -> Result<SweepRow> {
    let (model, tau) = match param {
        SweepParam::Tau => (cfg.model, v),
        p => (cfg.model.with_param(p, v)?, cfg.tau),
    };
    let g = model.generator()?;
    let traj = integrate(&g, &cfg.rho0, tau, cfg.dt)?;
    let report = analyze(&traj, &g, cfg.base)?.report;
    validate_chain(&report)?;
    Ok(SweepRow {
        sweep_value: v,
        distance: report.distance,
        tau_q1: report.tau_q1,
        tau_q2: report.tau_q2,
        ratio_q1: report.tau_q1 / tau,
        ratio_q2: report.tau_q2 / tau,
        ratio_q2_q1: if report.tau_q1 > 0.0 {
            report.tau_q2 / report.tau_q1
        } else {
            0.0
        },
        trivial_q2: report.trivial_q2,
    })
}

fn cmd_sweep(common: &CommonArgs, sweep_flag: Option<&str>) -> Result<()> {
    let cfg = resolve(gather(common, sweep_flag)?, true)?;
    let spec = cfg.sweep.expect("resolve enforces the sweep spec");
    let points = spec.values();
    let results: Vec<Result<SweepRow>> = points
        .par_iter()
        .map(|&v| run_point(&cfg, spec.param, v))
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    for (v, result) in points.iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => {
                eprintln!("sweep point {} = {v} failed", spec.param.name());
                return Err(e);
            }
        }
    }

    let text = match cfg.format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => {
            let mut t = serde_json::to_string(&rows).expect("rows serialize");
            t.push('\n');
            t
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => emit(&text)?,
    }
    Ok(())
}

fn cmd_table1() -> Result<()> {
    let mut failed = false;
    let mut text = String::new();
    for idx in 1..=6 {
        let s = table1_state(idx)?;
        let (purity_ref, l1_ref) = TABLE1_REFERENCE[idx - 1];
        let purity = s.purity();
        let l1 = s.l1_coherence();
        let ok = (purity - purity_ref).abs() <= 1e-3 && (l1 - l1_ref).abs() <= 1e-3;
        failed |= !ok;
        let _ = writeln!(
            text,
            "state {idx}: purity {purity:.6} (reference {purity_ref}), l1 coherence {l1:.6} (reference {l1_ref}) -> {}",
            if ok { "ok" } else { "MISMATCH" }
        );
    }
    emit(&text)?;
    if failed {
        return Err(Error::InvalidState(
            "benchmark states deviate from their reference values".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn settings_from(text: &str) -> Result<Settings> {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        parse_config_file(f.path())
    }

    #[test]
    fn sweep_spec_parsing() {
        let s = SweepSpec::parse("gamma0:0.1:3:30").unwrap();
        assert_eq!(s.param, SweepParam::Gamma0);
        assert_eq!(s.steps, 30);
        let v = s.values();
        assert_eq!(v.len(), 30);
        assert_eq!(v[0], 0.1);
        assert!((v[29] - 3.0).abs() < 1e-15);

        assert!(SweepSpec::parse("gamma0:0.1:3").is_err());
        assert!(SweepSpec::parse("gamma0:0.1:3:1").is_err());
        assert!(SweepSpec::parse("volume:0:1:5").is_err());
        assert!(SweepSpec::parse("tau:0.1:inf:5").is_err());
    }

    #[test]
    fn sweep_param_model_compatibility() {
        let ad = ModelSpec::Damping {
            gamma0: 1.0,
            lambda: 1.0,
        };
        let deph = ModelSpec::Dephasing {
            k: 1.0,
            omega_c: 1.0,
        };
        assert!(ad.with_param(SweepParam::Gamma0, 0.5).is_ok());
        assert!(ad.with_param(SweepParam::K, 0.5).is_err());
        assert!(deph.with_param(SweepParam::K, 0.5).is_ok());
        assert!(deph.with_param(SweepParam::Lambda, 0.5).is_err());
        assert!(ModelSpec::Eternal.with_param(SweepParam::Tau, 0.5).is_ok());
        assert!(ModelSpec::Eternal
            .with_param(SweepParam::Gamma0, 0.5)
            .is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let s = settings_from(
            "# run setup\nmodel = dephasing\nk = 2.5   # supra-ohmic\nstate = 3\ntau = 2\nformat = json\n",
        )
        .unwrap();
        assert_eq!(s.model.as_deref(), Some("dephasing"));
        assert_eq!(s.k, Some(2.5));
        assert_eq!(s.state, Some(3));
        assert_eq!(s.tau, Some(2.0));
        assert_eq!(s.format.as_deref(), Some("json"));
    }

    #[test]
    fn config_file_rejects_unknown_and_malformed_keys() {
        let err = settings_from("model = ad\nvolume = 3\n").unwrap_err();
        assert!(err.to_string().contains("unknown key `volume`"), "{err}");
        assert!(err.to_string().contains(":2:"), "{err}");
        assert!(settings_from("just a line\n").is_err());
        assert!(settings_from("tau = fast\n").is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(b"model = ad\ntau = 2\ngamma0 = 0.5\nstate = 1\n")
            .unwrap();
        let common = CommonArgs {
            config: Some(f.path().to_path_buf()),
            tau: Some(3.0),
            ..CommonArgs::default()
        };
        let s = gather(&common, None).unwrap();
        assert_eq!(s.tau, Some(3.0));
        assert_eq!(s.gamma0, Some(0.5));
        let cfg = resolve(s, false).unwrap();
        assert_eq!(cfg.tau, 3.0);
        assert!(matches!(
            cfg.model,
            ModelSpec::Damping { gamma0, .. } if gamma0 == 0.5
        ));
    }

    #[test]
    fn resolve_validates_input_combinations() {
        let base = Settings {
            model: Some("ad".into()),
            state: Some(1),
            ..Settings::default()
        };
        assert!(resolve(base.clone(), false).is_ok());

        let mut s = base.clone();
        s.model = None;
        assert!(matches!(resolve(s, false), Err(Error::Config(_))));

        let mut s = base.clone();
        s.rho00 = Some(0.4);
        assert!(resolve(s, false).is_err()); // state and rho00 together

        let mut s = base.clone();
        s.state = None;
        assert!(resolve(s, false).is_err()); // no initial state at all

        let mut s = base.clone();
        s.state = None;
        s.rho00 = Some(1.2);
        assert!(resolve(s, false).is_err()); // not a state

        let mut s = base.clone();
        s.log_base = Some("10".into());
        assert!(resolve(s, false).is_err());

        let mut s = base.clone();
        s.format = Some("yaml".into());
        assert!(resolve(s, false).is_err());

        let mut s = base.clone();
        s.tau = Some(-1.0);
        assert!(resolve(s, false).is_err());

        let mut s = base.clone();
        s.dt = Some(2.0);
        assert!(resolve(s, false).is_err()); // dt > tau

        // sweep demanded but absent
        assert!(resolve(base.clone(), true).is_err());

        // incompatible sweep parameter
        let mut s = base;
        s.sweep = Some("k:0.1:5:10".into());
        assert!(resolve(s, true).is_err());
    }

    #[test]
    fn explicit_state_resolution() {
        let s = Settings {
            model: Some("eternal".into()),
            rho00: Some(0.5),
            re01: Some(0.25),
            im01: Some(0.25),
            ..Settings::default()
        };
        let cfg = resolve(s, false).unwrap();
        let b = cfg.rho0.bloch();
        assert!((b.x - 0.5).abs() < 1e-15 && (b.y + 0.5).abs() < 1e-15);
    }

    #[test]
    fn csv_headers_are_stable() {
        assert_eq!(
            TRACE_HEADER,
            "t,p1,p2,R12,R21,T12,T21,s_dot,s_tot_M,s_tot_NM,activity,dE,dED,speed_tr"
        );
        assert_eq!(
            SWEEP_HEADER,
            "sweep_value,distance,tau_q1,tau_q2,ratio_q1,ratio_q2,ratio_q2_q1,trivial_q2"
        );
    }
}
