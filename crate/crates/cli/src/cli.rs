//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for invalid arguments, configuration or a
//! failed run, 2 when `oracle-verify` finds a mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use qmean_core::{
    alpha_b, alpha_b_default_cap, classical_fisher, kappa, kappa_inf, prob_one, quantum_fisher,
    three_valued_fisher, AmplifiedLevel, Method, Parity, RandomStream, SampledOutcomes,
    TargetValue,
};
use serde::Serialize;

use crate::config::{MethodName, RunConfig};
use crate::error::{CliError, Result};
use crate::experiments;
use crate::report::{self, fmt_f64, serialize_f64, serialize_f64_slice, Manifest, Table};

/// Trials per cell when none are configured.
pub const DEFAULT_TRIALS: u64 = 100;
pub const NORMALITY_TRIALS: u64 = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "qmean",
    version,
    about = "Noisy amplitude-amplified mean-value estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by all subcommands. Each overrides the matching config key.
#[derive(Debug, Default, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Write tables and a manifest under this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
    /// Progress on stderr; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Survival probability per oracle call.
    #[arg(long = "pq", global = true)]
    pub p_q: Option<f64>,
    #[arg(long, global = true)]
    pub qubits: Option<u32>,
    /// Survival probability assumed by the estimator.
    #[arg(long = "likelihood-pq", global = true)]
    pub likelihood_p_q: Option<f64>,
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true)]
    pub range_cap: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodName>,
    /// Comma-separated mean values.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub targets: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub steps_list: Option<Vec<usize>>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub shot_list: Option<Vec<u64>>,
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Comma-separated relative errors on the assumed `p_q`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub offsets: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level with the largest quantum Fisher information per query.
    AlphaB {
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Measurement model at one level and angle.
    Fisher {
        #[arg(long)]
        alpha: u32,
        #[command(flatten)]
        point: Point,
    },
    /// One estimation run, printed as JSON.
    AdaptiveRun {
        #[command(flatten)]
        point: Point,
        /// Random stream index within the seed.
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// RMSE against step count for each target.
    RmseSweep,
    /// Asymptotic Fisher information over a grid of targets.
    FisherLandscape,
    /// Convergence of the chosen levels to the asymptotic sequence.
    AlphaConvergence,
    /// Distribution of the standardized final estimate.
    Normality,
    /// RMSE with a miscalibrated noise model.
    CalibrationSweep,
    /// Compare closed forms with explicit density-matrix simulation.
    OracleVerify {
        /// Random instances per qubit count.
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        oracle_qubits: Option<Vec<u32>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AlphaB { .. } => "alpha-b",
            Command::Fisher { .. } => "fisher",
            Command::AdaptiveRun { .. } => "adaptive-run",
            Command::RmseSweep => "rmse-sweep",
            Command::FisherLandscape => "fisher-landscape",
            Command::AlphaConvergence => "alpha-convergence",
            Command::Normality => "normality",
            Command::CalibrationSweep => "calibration-sweep",
            Command::OracleVerify { .. } => "oracle-verify",
        }
    }
}

/// An angle given directly or through its mean value.
#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct Point {
    #[arg(long)]
    pub theta: Option<f64>,
    /// Mean value `cos(theta)`.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<f64>,
}

impl Point {
    fn resolve(&self, fallback: Option<f64>) -> Result<TargetValue> {
        match (self.theta, self.target.or(fallback)) {
            (Some(t), _) => Ok(TargetValue::from_theta(t)?),
            (None, Some(c)) => Ok(TargetValue::from_mean_value(c)?),
            (None, None) => Err(CliError::invalid("one of --theta or --target is required")),
        }
    }
}

fn apply_overrides(cfg: &mut RunConfig, c: &Common) {
    macro_rules! set {
        ($src:expr => $dst:expr) => {
            if let Some(v) = $src.clone() {
                $dst = v;
            }
        };
    }
    set!(c.p_q => cfg.noise.p_q);
    set!(c.qubits => cfg.noise.qubits);
    if c.likelihood_p_q.is_some() {
        cfg.noise.likelihood_p_q = c.likelihood_p_q;
    }
    set!(c.shots => cfg.adaptive.shots);
    set!(c.steps => cfg.adaptive.steps);
    set!(c.delta => cfg.adaptive.delta);
    if c.range_cap.is_some() {
        cfg.adaptive.range_cap = c.range_cap;
    }
    set!(c.method => cfg.adaptive.method);
    set!(c.targets => cfg.experiment.targets);
    if c.trials.is_some() {
        cfg.experiment.trials = c.trials;
    }
    set!(c.seed => cfg.experiment.seed);
    set!(c.steps_list => cfg.experiment.steps_list);
    set!(c.shot_list => cfg.experiment.shot_list);
    set!(c.grid_points => cfg.experiment.grid_points);
    set!(c.offsets => cfg.experiment.calibration_offsets);
    if c.jobs.is_some() {
        cfg.output.jobs = c.jobs;
    }
    if let Some(d) = &c.output_dir {
        cfg.output.dir = Some(d.display().to_string());
    }
    if c.verbose > 0 {
        cfg.output.verbosity = c.verbose;
    }
}

/// Parses `args`, runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let defaults = toml::to_string(&RunConfig::default()).unwrap_or_default();
    let command = Cli::command().after_help(format!(
        "Defaults, as a config file (flags override file values):\n\n{defaults}"
    ));
    let parsed = command
        .try_get_matches_from(args)
        .and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut cfg = match &cli.common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    apply_overrides(&mut cfg, &cli.common);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.output.jobs {
        if n == 0 {
            return Err(CliError::invalid("--jobs must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Output(e.to_string()))?;
    let start = Instant::now();
    let mut buf = Vec::new();
    let output = pool.install(|| dispatch(&cli.command, &cfg, &mut buf))?;
    out.write_all(&buf)
        .map_err(|e| CliError::Output(e.to_string()))?;
    let elapsed = start.elapsed().as_secs_f64();
    if cfg.output.verbosity > 0 {
        let _ = writeln!(err, "{} finished in {elapsed:.3} s", cli.command.name());
    }
    if let Some(root) = &cfg.output.dir {
        let dir = report::create_run_dir(Path::new(root), cli.command.name())?;
        let mut files = Vec::new();
        for (name, body) in &output.files {
            report::write_file(&dir.join(name), body)?;
            files.push(name.clone());
        }
        let manifest = Manifest {
            tool: "qmean",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: cli.command.name(),
            config: &cfg,
            seed: cfg.experiment.seed,
            wall_time_seconds: elapsed,
            files,
        };
        report::write_file(&dir.join("manifest.json"), &report::to_json(&manifest)?)?;
        if cfg.output.verbosity > 0 {
            let _ = writeln!(err, "wrote {}", dir.display());
        }
    }
    Ok(output.exit_code)
}

/// Result of a subcommand: files for the output directory and the exit code.
struct Output {
    files: Vec<(String, String)>,
    exit_code: i32,
}

impl Output {
    fn ok(files: Vec<(String, String)>) -> Self {
        Self {
            files,
            exit_code: 0,
        }
    }
}

fn emit(out: &mut Vec<u8>, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Output(e.to_string()))
}

fn table<T: Table>(out: &mut Vec<u8>, name: &str, rows: &[T]) -> Result<(String, String)> {
    let csv = report::csv_string(rows)?;
    emit(out, &csv)?;
    Ok((format!("{name}.csv"), csv))
}

#[derive(Serialize)]
struct FisherPoint {
    alpha: u32,
    #[serde(serialize_with = "serialize_f64")]
    theta: f64,
    #[serde(serialize_with = "serialize_f64")]
    mean_value: f64,
    #[serde(serialize_with = "serialize_f64")]
    p_q: f64,
    qubits: u32,
}

#[derive(Serialize)]
struct RunRecord {
    method: MethodName,
    #[serde(serialize_with = "serialize_f64")]
    target: f64,
    #[serde(serialize_with = "serialize_f64")]
    theta_true: f64,
    #[serde(serialize_with = "serialize_f64")]
    p_q: f64,
    #[serde(serialize_with = "serialize_f64")]
    likelihood_p_q: f64,
    qubits: u32,
    shots: u64,
    steps: usize,
    seed: u64,
    stream: u64,
    alphas: Vec<u32>,
    hits: Vec<u64>,
    #[serde(serialize_with = "serialize_f64_slice")]
    theta_estimates: Vec<f64>,
    #[serde(serialize_with = "serialize_f64_slice")]
    mean_value_estimates: Vec<f64>,
    #[serde(serialize_with = "serialize_f64")]
    final_mean_value: f64,
    total_queries: u64,
    degenerate_steps: Vec<usize>,
}

fn dispatch(cmd: &Command, cfg: &RunConfig, out: &mut Vec<u8>) -> Result<Output> {
    match cmd {
        Command::AlphaB { cap } => {
            let noise = cfg.true_noise()?;
            let cap = match cap {
                Some(c) => *c,
                None => alpha_b_default_cap(&noise)?,
            };
            let ab = alpha_b(&noise, cap)?;
            let text = format!("{ab}\n");
            emit(out, &text)?;
            Ok(Output::ok(vec![("alpha_b.txt".into(), text)]))
        }
        Command::Fisher { alpha, point } => {
            let noise = cfg.true_noise()?;
            let level = AmplifiedLevel::new(*alpha)?;
            let t = point.resolve(cfg.experiment.targets.first().copied())?;
            let theta = t.theta();
            // Singular or parity-restricted quantities are left blank.
            let opt = |r: qmean_core::Result<f64>| r.map(fmt_f64).unwrap_or_default();
            let even = level.parity() == Parity::Even;
            let header = "alpha,theta,mean_value,prob_one,classical_fisher,quantum_fisher,\
                          three_valued_fisher,kappa,kappa_inf\n";
            let row = [
                alpha.to_string(),
                fmt_f64(theta),
                fmt_f64(t.mean_value()),
                fmt_f64(prob_one(level, theta, &noise)?),
                fmt_f64(classical_fisher(level, theta, &noise)?),
                fmt_f64(quantum_fisher(level, &noise)),
                if even {
                    opt(three_valued_fisher(level, theta, &noise))
                } else {
                    String::new()
                },
                if even {
                    opt(kappa(level, theta, &noise))
                } else {
                    String::new()
                },
                if even {
                    opt(kappa_inf(level, theta, noise.p_q()))
                } else {
                    String::new()
                },
            ]
            .join(",");
            let text = format!("{header}{row}\n");
            emit(out, &text)?;
            let point = FisherPoint {
                alpha: *alpha,
                theta,
                mean_value: t.mean_value(),
                p_q: noise.p_q(),
                qubits: noise.n_qubits(),
            };
            Ok(Output::ok(vec![
                ("fisher.csv".into(), text),
                ("point.json".into(), report::to_json(&point)?),
            ]))
        }
        Command::AdaptiveRun { point, stream } => {
            let config = cfg.adaptive_config()?;
            let true_noise = cfg.true_noise()?;
            let t = point.resolve(cfg.experiment.targets.first().copied())?;
            let method: Method = cfg.adaptive.method.into();
            let mut rs = RandomStream::new(cfg.experiment.seed, *stream);
            let mut source = SampledOutcomes {
                stream: &mut rs,
                theta_true: t.theta(),
                true_noise,
            };
            let traj = qmean_core::run_method(&config, method, &mut source)?;
            let record = RunRecord {
                method: cfg.adaptive.method,
                target: t.mean_value(),
                theta_true: t.theta(),
                p_q: true_noise.p_q(),
                likelihood_p_q: config.likelihood_noise.p_q(),
                qubits: true_noise.n_qubits(),
                shots: config.shots,
                steps: config.steps,
                seed: cfg.experiment.seed,
                stream: *stream,
                alphas: traj.alphas.clone(),
                hits: traj.hits(),
                mean_value_estimates: traj.estimates.iter().map(|t| t.cos()).collect(),
                theta_estimates: traj.estimates.clone(),
                final_mean_value: traj.final_mean_value(),
                total_queries: traj.total_queries,
                degenerate_steps: traj.degenerate_steps.clone(),
            };
            let text = report::to_json(&record)?;
            emit(out, &text)?;
            Ok(Output::ok(vec![("trajectory.json".into(), text)]))
        }
        Command::RmseSweep => {
            let rows = experiments::rmse_sweep(&cfg.experiment_spec(DEFAULT_TRIALS)?)?;
            Ok(Output::ok(vec![table(out, "rmse_sweep", &rows)?]))
        }
        Command::FisherLandscape => {
            let rows = experiments::fisher_landscape(
                &cfg.experiment_spec(DEFAULT_TRIALS)?,
                cfg.experiment.grid_points,
            )?;
            Ok(Output::ok(vec![table(out, "fisher_landscape", &rows)?]))
        }
        Command::AlphaConvergence => {
            let report = experiments::alpha_convergence(
                &cfg.experiment_spec(DEFAULT_TRIALS)?,
                &cfg.experiment.shot_list,
            )?;
            let steps = table(out, "alpha_convergence", &report.rows)?;
            let seqs = (
                "sequence_match.csv".into(),
                report::csv_string(&report.sequences)?,
            );
            Ok(Output::ok(vec![steps, seqs]))
        }
        Command::Normality => {
            let report = experiments::normality_study(&cfg.experiment_spec(NORMALITY_TRIALS)?)?;
            let summary = table(out, "normality", &report.summaries)?;
            let samples = ("samples.csv".into(), report::csv_string(&report.samples)?);
            Ok(Output::ok(vec![summary, samples]))
        }
        Command::CalibrationSweep => {
            let rows = experiments::calibration_sweep(&cfg.experiment_spec(DEFAULT_TRIALS)?)?;
            Ok(Output::ok(vec![table(out, "calibration_sweep", &rows)?]))
        }
        Command::OracleVerify {
            seeds,
            oracle_qubits,
        } => {
            let mut vc = cfg.verify_config();
            if let Some(s) = seeds {
                vc.instances = *s;
            }
            if let Some(q) = oracle_qubits {
                vc.qubits = q.clone();
            }
            if vc.instances == 0 || vc.qubits.is_empty() || vc.levels.is_empty() {
                return Err(CliError::invalid(
                    "oracle verification needs instances, qubit counts and levels",
                ));
            }
            let report = qmean_oracle::verify_grid(&vc)?;
            let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
            let t = &report.tolerances;
            let text = format!(
                "rows {}\nprobability max_abs_error {} tolerance {} {}\n\
                 quantum_fisher max_rel_error {} tolerance {} {}\n\
                 three_valued_fisher max_rel_error {} tolerance {} {}\n",
                report.rows.len(),
                fmt_f64(report.max_prob_abs_error),
                fmt_f64(t.probability),
                verdict(report.probability_pass()),
                fmt_f64(report.max_qfi_rel_error),
                fmt_f64(t.qfi),
                verdict(report.qfi_pass()),
                fmt_f64(report.max_three_valued_rel_error),
                fmt_f64(t.three_valued),
                verdict(report.three_valued_pass()),
            );
            emit(out, &text)?;
            Ok(Output {
                files: vec![
                    ("summary.txt".into(), text),
                    (
                        "oracle_verify.csv".into(),
                        report::csv_string(&report.rows)?,
                    ),
                ],
                exit_code: if report.passed() { 0 } else { 2 },
            })
        }
    }
}
