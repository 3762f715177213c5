//! Command-line front end: `sigma`, `sweep`, `verify` and `classify`.
//!
//! Exit codes: 0 on success, 1 on I/O or numerical failure, 2 on usage errors.

pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use avgcorr::channels::{apply_local_channel, p_of_t, ChannelKind};
use avgcorr::correlation::{
    classify, classify_value, correlation_matrix, sigma_for_matrix, sigma_monte_carlo, sigma_quadrature,
    singular_values, Method, SigmaEstimate, SingularTriple,
};
use avgcorr::qstate::{make_pure_state, random_mixed_state, SchmidtCoefficient};
use avgcorr::sweep::{decay_curve, figure_spec, Figure, SweepSpec, FIGURE_GAMMAS, FIGURE_STEPS, FIGURE_T_MAX};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use output::{sig12, write_output, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Monte Carlo trials in `verify` pass when within this many standard errors.
pub const VERIFY_SIGMAS: f64 = 4.0;

#[derive(Debug, Parser)]
#[command(name = "avgcorr", version, about = "Average correlation of damped two-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute Sigma for one damped Schmidt state.
    Sigma(SigmaArgs),
    /// Emit Sigma(t) decay curves for a set of decoherence rates.
    Sweep(SweepArgs),
    /// Compare quadrature with the Monte Carlo oracle on random states.
    Verify(VerifyArgs),
    /// Classify a Sigma value, or the Sigma of a damped Schmidt state.
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChannelArg {
    Phase,
    Amplitude,
}

impl From<ChannelArg> for ChannelKind {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Phase => ChannelKind::PhaseDamping,
            ChannelArg::Amplitude => ChannelKind::AmplitudeDamping,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Quadrature,
    Mc,
}

#[derive(Debug, Args)]
struct StateArgs {
    /// Schmidt coefficient in [0, 1].
    #[arg(long, allow_negative_numbers = true, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    c: f64,
    #[arg(long, value_enum, default_value = "phase")]
    channel: ChannelArg,
    /// Damping probability in [0, 1]; excludes --gamma/--t.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["gamma", "t"])]
    p: Option<f64>,
    /// Decoherence rate; requires --t.
    #[arg(long, allow_negative_numbers = true, requires = "t")]
    gamma: Option<f64>,
    /// Elapsed time; requires --gamma.
    #[arg(long, allow_negative_numbers = true, requires = "gamma")]
    t: Option<f64>,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct SigmaArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value = "quadrature")]
    method: MethodArg,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Classify this value directly instead of computing it.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["c", "channel", "p", "gamma", "t", "method"])]
    sigma: Option<f64>,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value = "quadrature")]
    method: MethodArg,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Canned dataset: 1 = phase damping, 2 = amplitude damping.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2),
          conflicts_with_all = ["channel", "c", "gammas", "t_max", "steps"])]
    figure: Option<u8>,
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Comma-separated decoherence rates.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    gammas: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Number of random states to check.
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<avgcorr::Error> for CliError {
    fn from(e: avgcorr::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("I/O error: {e}"))
    }
}

fn usage(e: avgcorr::Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (including the program name) and runs the subcommand,
/// printing to the process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], with explicit output streams. Decay curves without `--out` still
/// go to the process stdout.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Sigma(a) => cmd_sigma(a, out),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Classify(a) => cmd_classify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn method(arg: MethodArg, sampling: &SamplingArgs) -> Result<Method, CliError> {
    Ok(match arg {
        MethodArg::Closed => Method::ClosedForm,
        MethodArg::Quadrature => Method::Quadrature,
        MethodArg::Mc => {
            if sampling.samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            Method::MonteCarlo {
                samples: sampling.samples,
                seed: sampling.seed,
            }
        }
    })
}

/// Everything that describes one evaluated state.
#[derive(Debug, Serialize)]
struct StateRecord {
    c: f64,
    channel: ChannelKind,
    p: f64,
    alpha: f64,
    beta: f64,
    gamma_sv: f64,
    sigma: f64,
    method: &'static str,
    error_bound: f64,
    evaluations: usize,
    classification: &'static str,
}

impl StateRecord {
    const CSV_HEADER: &'static str = "c,channel,p,alpha,beta,gamma_sv,sigma,method,error_bound,classification";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            sig12(self.c),
            self.channel,
            sig12(self.p),
            sig12(self.alpha),
            sig12(self.beta),
            sig12(self.gamma_sv),
            sig12(self.sigma),
            self.method,
            sig12(self.error_bound),
            self.classification
        )
    }
}

fn evaluate_state(state: &StateArgs, method: Method) -> Result<StateRecord, CliError> {
    let c = SchmidtCoefficient::new(state.c).map_err(usage)?;
    let p = match (state.p, state.gamma, state.t) {
        (Some(p), None, None) => p,
        (None, Some(gamma), Some(t)) => p_of_t(gamma, t).map_err(usage)?,
        (None, None, None) => 0.0,
        _ => return Err(CliError::Usage("give either --p or both --gamma and --t".into())),
    };
    let kind = ChannelKind::from(state.channel);
    let channel = kind.with_probability(p).map_err(usage)?;
    let rho = apply_local_channel(&make_pure_state(c), &channel, &channel);
    let k = correlation_matrix(&rho)?;
    let s: SingularTriple = singular_values(&k);
    let est: SigmaEstimate = sigma_for_matrix(&k, &s, method)?;
    Ok(StateRecord {
        c: c.value(),
        channel: kind,
        p,
        alpha: s.alpha,
        beta: s.beta,
        gamma_sv: s.gamma_sv,
        sigma: est.value,
        method: est.method.as_str(),
        error_bound: est.error_bound,
        evaluations: est.evaluations,
        classification: classify(&est).as_str(),
    })
}

fn cmd_sigma(args: SigmaArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let record = evaluate_state(&args.state, method(args.method, &args.sampling)?)?;
    let rendered = match args.output.format {
        Format::Csv => format!("{}\n{}\n", StateRecord::CSV_HEADER, record.csv_row()),
        Format::Json => serde_json::to_string_pretty(&record).expect("plain record") + "\n",
    };
    match &args.output.out {
        Some(path) => std::fs::write(path, &rendered)?,
        None if args.output.format == Format::Json => out.write_all(rendered.as_bytes())?,
        None => {}
    }
    writeln!(out, "{} {}", sig12(record.sigma), record.classification)?;
    Ok(EXIT_OK)
}

fn cmd_classify(args: ClassifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let sigma = match args.sigma {
        Some(v) if v.is_finite() => v,
        Some(v) => return Err(CliError::Usage(format!("--sigma must be finite, got {v}"))),
        None => evaluate_state(&args.state, method(args.method, &args.sampling)?)?.sigma,
    };
    writeln!(out, "{} {}", sig12(sigma), classify_value(sigma))?;
    Ok(EXIT_OK)
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let mut spec = match args.figure {
        Some(n) => figure_spec(Figure::try_from(n).map_err(CliError::Usage)?),
        None => SweepSpec {
            channel: args.channel.unwrap_or(ChannelArg::Phase).into(),
            c: match args.c {
                Some(c) => SchmidtCoefficient::new(c).map_err(usage)?,
                None => SchmidtCoefficient::maximal(),
            },
            gammas: args.gammas.clone().unwrap_or_else(|| FIGURE_GAMMAS.to_vec()),
            t_max: args.t_max.unwrap_or(FIGURE_T_MAX),
            steps: args.steps.unwrap_or(FIGURE_STEPS),
            method: Method::Quadrature,
        },
    };
    if let Some(m) = args.method {
        spec.method = method(m, &args.sampling)?;
    }
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, CliError> {
    let spec = sweep_spec(&args)?;
    let curve = decay_curve(&spec)?;
    match write_output(&curve, args.output.format, args.sampling.seed, args.output.out.as_deref()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(EXIT_OK),
        other => other.map(|_| EXIT_OK).map_err(CliError::from),
    }
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.sampling.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.sampling.seed);
    let mut failures = 0;
    writeln!(out, "trial,quadrature,monte_carlo,std_error,z,status")?;
    for trial in 0..args.trials {
        let rho = random_mixed_state(&mut rng);
        let k = correlation_matrix(&rho)?;
        let quad = sigma_quadrature(&singular_values(&k));
        let mc_seed = args.sampling.seed.wrapping_add(1 + trial as u64);
        let mc = sigma_monte_carlo(&k, args.sampling.samples, mc_seed)?;
        let gap = (quad.value - mc.value).abs();
        let ok = gap <= VERIFY_SIGMAS * mc.error_bound;
        failures += usize::from(!ok);
        writeln!(
            out,
            "{trial},{},{},{},{},{}",
            sig12(quad.value),
            sig12(mc.value),
            sig12(mc.error_bound),
            sig12(if mc.error_bound > 0.0 { gap / mc.error_bound } else { 0.0 }),
            if ok { "ok" } else { "FAIL" }
        )?;
    }
    if failures == 0 {
        Ok(EXIT_OK)
    } else {
        Err(CliError::Failure(format!(
            "{failures} of {} trials outside {VERIFY_SIGMAS} standard errors",
            args.trials
        )))
    }
}
