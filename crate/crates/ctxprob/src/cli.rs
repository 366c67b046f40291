//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification property failed, 2 invalid
//! arguments, invalid parameter values or unwritable output.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctxprob_core::epr::{
    chsh, correlation, epr_bohm_probabilities, reconstruct_via_interference, AnglePair, ChshSettings,
    ConditionalMatrixSet, SignConvention,
};
use ctxprob_core::prob::{classical_total_probability, incompatibility_coefficient};
use ctxprob_core::sim::{
    derive_seed, lhv_baseline_chsh, run_simulation_traced, time_order_statistics, ChshEstimate, LhvStrategy, SimConfig,
    SimReport, TimeDistribution, TimeOrderSummary,
};
use ctxprob_core::{BinaryDistribution, InterferenceCoefficient, Regime, Sign, TransitionMatrix};
use serde::Serialize;

use crate::output::{
    fmt_sig, sign_cell, write_csv, write_report_csv, Envelope, NdjsonSink, OutputError, CSV_DIGITS, TABLE_DIGITS,
};
use crate::parallel::{self, Parallelism};
use crate::verify::{self, PropertyResult, VerifyOptions};

/// Contextual probability calculus, EPR-Bohm reconstruction and time-ordered ensemble simulation.
#[derive(Debug, Parser)]
#[command(name = "ctxprob", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Unit {
    #[default]
    Rad,
    Deg,
}

impl Unit {
    fn to_rad(self, x: f64) -> f64 {
        match self {
            Unit::Rad => x,
            Unit::Deg => x.to_radians(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimeArg {
    UniformSquare,
    FixedOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LhvArg {
    DeterministicSign,
    RandomLocal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficient of statistical incompatibility of an observed probability.
    Lambda(LambdaArgs),
    /// Closed-form and interference-reconstructed EPR-Bohm conditionals.
    Epr(EprArgs),
    /// Seeded property sweep over the derivation.
    Verify(VerifyArgs),
    /// Monte Carlo of the time-ordered selection/measurement protocol.
    Simulate(SimulateArgs),
    /// Empirical CHSH value against a local hidden-variable baseline.
    Chsh(ChshArgs),
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    /// Observed probability p_C^b(β).
    #[arg(long)]
    pub observed: f64,
    /// Prior probability p_C^a(+); p_C^a(−) is its complement.
    #[arg(long)]
    pub prior: f64,
    /// Transition matrix p(β/α) row-major: p(+/+),p(+/−),p(−/+),p(−/−).
    #[arg(long, value_parser = parse_four, allow_hyphen_values = true)]
    pub matrix: [f64; 4],
    /// Result value β: + or −.
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true, default_value = "+")]
    pub beta: Sign,
}

#[derive(Debug, Args)]
pub struct AngleArgs {
    /// ξ, with p^{a/c}(+/+) = cos² ξ.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: f64,
    /// η, with p^{b/a}(+/+) = sin² η.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: f64,
    /// Angle unit.
    #[arg(long, value_enum, default_value_t = Unit::Rad)]
    pub unit: Unit,
}

impl AngleArgs {
    fn angles(&self) -> Result<AnglePair, CliError> {
        Ok(AnglePair::new(self.unit.to_rad(self.xi), self.unit.to_rad(self.eta))?)
    }
}

#[derive(Debug, Args)]
pub struct EprArgs {
    #[command(flatten)]
    pub angles: AngleArgs,
    /// Interference signs cos θ+,cos θ−.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "-1,1")]
    pub signs: [f64; 2],
    /// Selection marginal p(c = +1).
    #[arg(long, default_value_t = 0.5)]
    pub marginal: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random angle pairs per property.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Sweep seed; drawn from OS entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Set θ̃± = θ± to exercise the failing case.
    #[arg(long)]
    pub break_lemma2: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub angles: AngleArgs,
    /// Selection marginal p(c = +1).
    #[arg(long, default_value_t = 0.5)]
    pub marginal: f64,
    /// Number of pairs.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Seed; drawn from OS entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Distribution of (t₁, t₂).
    #[arg(long, value_enum, default_value_t = TimeArg::UniformSquare)]
    pub time: TimeArg,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Stream every trial as NDJSON to this file (runs serially).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChshArgs {
    /// Use the settings (0, π/4, π/8, 3π/8).
    #[arg(long, conflicts_with = "settings", required_unless_present = "settings")]
    pub optimal: bool,
    /// Settings a,a′,b,b′.
    #[arg(long, value_parser = parse_four, allow_hyphen_values = true)]
    pub settings: Option<[f64; 4]>,
    /// Angle unit of --settings.
    #[arg(long, value_enum, default_value_t = Unit::Rad)]
    pub unit: Unit,
    /// Selection marginal p(c = +1).
    #[arg(long, default_value_t = 0.5)]
    pub marginal: f64,
    /// Pairs per setting.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Seed; drawn from OS entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Local hidden-variable baseline.
    #[arg(long, value_enum, default_value_t = LhvArg::DeterministicSign)]
    pub lhv: LhvArg,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
        "-" | "−" | "-1" | "minus" => Ok(Sign::Minus),
        _ => Err(format!("`{s}` is not a sign; use + or -")),
    }
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values: Vec<f64> =
        s.split(',').map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"))).collect::<Result<_, _>>()?;
    values.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_four(s: &str) -> Result<[f64; 4], String> {
    parse_list::<4>(s)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_list::<2>(s)
}

/// Errors that end a command with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A parameter violated a domain constraint.
    #[error("invalid parameter: {0}")]
    Invalid(#[from] ctxprob_core::Error),
    /// A parameter failed a CLI-level check.
    #[error("invalid parameter: {0}")]
    Usage(String),
    /// Output could not be produced.
    #[error("output: {0}")]
    Output(#[from] OutputError),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Rendered command result.
#[derive(Debug)]
pub struct Outcome {
    /// Output text in the requested format.
    pub rendered: String,
    /// Process exit code.
    pub exit_code: i32,
    /// Seed of a randomized command, echoed on stderr.
    pub seed: Option<u64>,
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn render<I: Serialize, R: Serialize>(
    format: Format,
    envelope: Envelope<I, R>,
    table: impl FnOnce() -> String,
    csv: impl FnOnce() -> Result<String, OutputError>,
) -> Result<Outcome, CliError> {
    let seed = envelope.seed;
    let rendered = match format {
        Format::Json => envelope.to_json()?,
        Format::Table => table(),
        Format::Csv => csv()?,
    };
    Ok(Outcome { rendered, exit_code: 0, seed })
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, OutputError> {
    let mut buf = Vec::new();
    write_csv(header, &rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn t(x: f64) -> String {
    fmt_sig(x, TABLE_DIGITS)
}

fn c(x: f64) -> String {
    fmt_sig(x, CSV_DIGITS)
}

fn matrix_table(out: &mut String, title: &str, m: &TransitionMatrix) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "  {:>8} {:>12} {:>12}", "", "γ=+1", "γ=-1");
    for beta in Sign::ALL {
        let _ = writeln!(
            out,
            "  {:>8} {:>12} {:>12}",
            format!("β={}", sign_cell(beta)),
            t(m.get(beta, Sign::Plus)),
            t(m.get(beta, Sign::Minus))
        );
    }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Lambda(args) => cmd_lambda(args, cli.format),
        Command::Epr(args) => cmd_epr(args, cli.format),
        Command::Verify(args) => cmd_verify(args, cli.format),
        Command::Simulate(args) => cmd_simulate(args, cli.format),
        Command::Chsh(args) => cmd_chsh(args, cli.format),
    }
}

#[derive(Serialize)]
struct LambdaInputs {
    observed: f64,
    prior: BinaryDistribution,
    transition: TransitionMatrix,
    beta: Sign,
}

#[derive(Serialize)]
struct LambdaResults {
    classical_total_probability: f64,
    coefficient: InterferenceCoefficient,
}

fn regime_name(regime: &Regime) -> &'static str {
    match regime {
        Regime::Trigonometric { .. } => "trigonometric",
        Regime::Hyperbolic => "hyperbolic",
        Regime::DegenerateDenominator => "degenerate-denominator",
    }
}

fn cmd_lambda(args: &LambdaArgs, format: Format) -> Result<Outcome, CliError> {
    let prior = BinaryDistribution::from_plus(args.prior)?;
    let [pp, pm, mp, mm] = args.matrix;
    let transition = TransitionMatrix::new([[pp, pm], [mp, mm]])?;
    let coefficient = incompatibility_coefficient(args.observed, &prior, &transition, args.beta)?;
    let classical = classical_total_probability(&prior, &transition, args.beta);
    let opt = |x: Option<f64>, f: fn(f64) -> String| x.map_or_else(|| "n/a".to_string(), f);
    let envelope = Envelope {
        command: "lambda",
        inputs: LambdaInputs { observed: args.observed, prior, transition, beta: args.beta },
        results: LambdaResults { classical_total_probability: classical, coefficient },
        seed: None,
    };
    render(
        format,
        envelope,
        || {
            let mut s = String::new();
            let _ = writeln!(s, "incompatibility coefficient for β = {}", sign_cell(args.beta));
            let _ = writeln!(s, "  classical total probability  {}", t(classical));
            let _ = writeln!(s, "  observed probability         {}", t(args.observed));
            let _ = writeln!(s, "  lambda                       {}", opt(coefficient.lambda, t));
            let _ = writeln!(s, "  regime                       {}", regime_name(&coefficient.regime));
            let _ = writeln!(s, "  theta [rad]                  {}", opt(coefficient.theta(), t));
            s
        },
        || {
            csv_string(
                &["lambda", "regime", "theta", "classical_total_probability"],
                vec![vec![
                    coefficient.lambda.map(c).unwrap_or_default(),
                    regime_name(&coefficient.regime).to_string(),
                    coefficient.theta().map(c).unwrap_or_default(),
                    c(classical),
                ]],
            )
        },
    )
}

#[derive(Serialize)]
struct EprInputs {
    angles: AnglePair,
    signs: SignConvention,
    marginal_c: BinaryDistribution,
}

#[derive(Serialize)]
struct EprResults {
    closed_form: TransitionMatrix,
    reconstructed: TransitionMatrix,
    max_abs_diff: f64,
    correlation: f64,
    matrices: ConditionalMatrixSet,
}

fn cmd_epr(args: &EprArgs, format: Format) -> Result<Outcome, CliError> {
    let angles = args.angles.angles()?;
    let signs = SignConvention::new(args.signs[0], args.signs[1])?;
    let marginal = BinaryDistribution::from_plus(args.marginal)?;
    let closed = epr_bohm_probabilities(&angles);
    let reconstructed = reconstruct_via_interference(&angles, &signs)?;
    let results = EprResults {
        closed_form: closed,
        reconstructed,
        max_abs_diff: closed.max_abs_diff(&reconstructed),
        correlation: correlation(&angles, &marginal),
        matrices: ConditionalMatrixSet::from_angles(&angles),
    };
    let table = || {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "xi = {} rad, eta = {} rad, signs (cos θ+, cos θ-) = ({}, {})",
            t(angles.xi()),
            t(angles.eta()),
            signs.cos_theta_plus(),
            signs.cos_theta_minus()
        );
        matrix_table(&mut s, "closed form p(β/γ)", &closed);
        matrix_table(&mut s, "interference reconstruction p(β/γ)", &reconstructed);
        let _ = writeln!(s, "max |Δ|      {:e}", results.max_abs_diff);
        let _ = writeln!(s, "correlation  {}", t(results.correlation));
        s
    };
    let csv = || {
        let mut rows = Vec::new();
        for beta in Sign::ALL {
            for gamma in Sign::ALL {
                rows.push(vec![
                    sign_cell(beta).to_string(),
                    sign_cell(gamma).to_string(),
                    c(closed.get(beta, gamma)),
                    c(reconstructed.get(beta, gamma)),
                ]);
            }
        }
        csv_string(&["beta", "gamma", "closed_form", "reconstructed"], rows)
    };
    let envelope = Envelope {
        command: "epr",
        inputs: EprInputs { angles, signs, marginal_c: marginal },
        results: &results,
        seed: None,
    };
    render(format, envelope, table, csv)
}

#[derive(Serialize)]
struct VerifyInputs {
    samples: usize,
    break_lemma2: bool,
}

#[derive(Serialize)]
struct VerifyResults<'a> {
    all_pass: bool,
    properties: &'a [PropertyResult],
}

fn cmd_verify(args: &VerifyArgs, format: Format) -> Result<Outcome, CliError> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let seed = resolve_seed(args.seed);
    let options = VerifyOptions { samples: args.samples, seed, break_lemma2: args.break_lemma2 };
    let properties = verify::run(&options).expect("samples checked above");
    let all_pass = properties.iter().all(|p| p.pass);
    let envelope = Envelope {
        command: "verify",
        inputs: VerifyInputs { samples: args.samples, break_lemma2: args.break_lemma2 },
        results: VerifyResults { all_pass, properties: &properties },
        seed: Some(seed),
    };
    let mut outcome = render(
        format,
        envelope,
        || {
            let mut s = String::new();
            let _ = writeln!(s, "seed {seed}, {} samples", args.samples);
            let _ = writeln!(s, "{:<30} {:>8} {:>14} {:>10}  result", "property", "samples", "worst", "tolerance");
            for p in &properties {
                let _ = writeln!(
                    s,
                    "{:<30} {:>8} {:>14.3e} {:>10.0e}  {}",
                    p.name,
                    p.samples,
                    p.worst_residual,
                    p.tolerance,
                    if p.pass { "PASS" } else { "FAIL" }
                );
                if let Some(cx) = &p.counterexample {
                    let _ = writeln!(s, "    counterexample: {cx}");
                }
            }
            s
        },
        || {
            csv_string(
                &["property", "samples", "worst_residual", "tolerance", "pass"],
                properties
                    .iter()
                    .map(|p| {
                        vec![
                            p.name.to_string(),
                            p.samples.to_string(),
                            c(p.worst_residual),
                            c(p.tolerance),
                            p.pass.to_string(),
                        ]
                    })
                    .collect(),
            )
        },
    )?;
    if !all_pass {
        outcome.exit_code = 1;
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct SimulateResults<'a> {
    report: &'a SimReport,
    analytic: TransitionMatrix,
    analytic_correlation: f64,
    time_order: TimeOrderSummary,
}

fn cmd_simulate(args: &SimulateArgs, format: Format) -> Result<Outcome, CliError> {
    let angles = args.angles.angles()?;
    let marginal = BinaryDistribution::from_plus(args.marginal)?;
    let time_distribution = match args.time {
        TimeArg::UniformSquare => TimeDistribution::UniformSquare,
        TimeArg::FixedOrder => TimeDistribution::FixedOrder,
    };
    if args.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let seed = resolve_seed(args.seed);
    let config = SimConfig::new(angles, marginal, args.n, seed, time_distribution)?;
    let report = match &args.trace {
        Some(path) => {
            let file = File::create(path).map_err(OutputError::from)?;
            let mut sink = NdjsonSink::new(BufWriter::new(file));
            let report = run_simulation_traced(&config, |r| sink.push(r))?;
            sink.finish()?;
            report
        }
        None => parallel::run_simulation(&config, Parallelism(args.threads))?,
    };
    let analytic = epr_bohm_probabilities(&angles);
    let time_order = time_order_statistics(&report);
    let results = SimulateResults {
        report: &report,
        analytic,
        analytic_correlation: correlation(&angles, &marginal),
        time_order,
    };
    let table = || {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "seed {seed}, {} pairs, xi = {} rad, eta = {} rad, p(c=+1) = {}",
            args.n,
            t(angles.xi()),
            t(angles.eta()),
            t(marginal.p_plus())
        );
        let _ = writeln!(
            s,
            "{:>4} {:>4} {:>10} {:>12} {:>12} {:>12} {:>8}",
            "β", "γ", "count", "estimate", "analytic", "3σ", "within"
        );
        for beta in Sign::ALL {
            for gamma in Sign::ALL {
                let (b, g) = (beta.index(), gamma.index());
                let est = report.estimated_conditionals.get(beta, gamma);
                let exact = analytic.get(beta, gamma);
                let band = 3.0 * report.std_errors[b][g];
                let _ = writeln!(
                    s,
                    "{:>4} {:>4} {:>10} {:>12} {:>12} {:>12} {:>8}",
                    sign_cell(beta),
                    sign_cell(gamma),
                    report.counts[b][g],
                    t(est),
                    t(exact),
                    t(band),
                    if (est - exact).abs() <= band { "yes" } else { "no" }
                );
            }
        }
        let _ = writeln!(
            s,
            "correlation  {} (analytic {})",
            t(report.estimated_correlation),
            t(results.analytic_correlation)
        );
        let _ = writeln!(
            s,
            "time order   redraws {} ({}), mean t2-t1 {} ± {}",
            time_order.n_redraws,
            t(time_order.redraw_fraction),
            t(time_order.mean_gap),
            t(time_order.gap_std_error)
        );
        s
    };
    let csv = || {
        let mut buf = Vec::new();
        write_report_csv(&report, &mut buf)?;
        Ok(String::from_utf8(buf).expect("csv is utf-8"))
    };
    let envelope = Envelope { command: "simulate", inputs: config, results: &results, seed: Some(seed) };
    render(format, envelope, table, csv)
}

#[derive(Serialize)]
struct ChshInputs {
    settings: ChshSettings,
    marginal_c: BinaryDistribution,
    n_per_setting: u64,
    lhv_strategy: LhvStrategy,
}

#[derive(Serialize)]
struct ChshResults {
    simulated: ChshEstimate,
    analytic: f64,
    lhv: ChshEstimate,
    separation: f64,
}

fn cmd_chsh(args: &ChshArgs, format: Format) -> Result<Outcome, CliError> {
    let settings = match args.settings {
        Some(s) if !args.optimal => {
            let [a, a_prime, b, b_prime] = s.map(|x| args.unit.to_rad(x));
            if ![a, a_prime, b, b_prime].iter().all(|x| x.is_finite()) {
                return Err(CliError::Usage("settings must be finite".into()));
            }
            ChshSettings { a, a_prime, b, b_prime }
        }
        _ => ChshSettings::optimal(),
    };
    let marginal = BinaryDistribution::from_plus(args.marginal)?;
    if args.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let seed = resolve_seed(args.seed);
    let strategy = match args.lhv {
        LhvArg::DeterministicSign => LhvStrategy::DeterministicSign,
        LhvArg::RandomLocal => LhvStrategy::RandomLocal,
    };
    let simulated = parallel::simulate_chsh(&settings, &marginal, args.n, seed, Parallelism(args.threads))?;
    let lhv = lhv_baseline_chsh(&settings, strategy, args.n, derive_seed(seed, 4))?;
    let results = ChshResults {
        simulated,
        analytic: chsh(&settings, &marginal),
        lhv,
        separation: simulated.value.abs() - lhv.value.abs(),
    };
    let table = || {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "seed {seed}, {} pairs per setting, settings (a, a', b, b') = ({}, {}, {}, {}) rad",
            args.n,
            t(settings.a),
            t(settings.a_prime),
            t(settings.b),
            t(settings.b_prime)
        );
        let _ = writeln!(s, "{:>12} {:>12} {:>12} {:>12}", "pair", "E simulated", "E analytic", "E lhv");
        let labels = ["(a,b)", "(a,b')", "(a',b)", "(a',b')"];
        for (k, d) in settings.differences().iter().enumerate() {
            let _ = writeln!(
                s,
                "{:>12} {:>12} {:>12} {:>12}",
                labels[k],
                t(simulated.correlations[k]),
                t(-(2.0 * d).cos()),
                t(lhv.correlations[k])
            );
        }
        let _ = writeln!(s, "S simulated  {} ± {}", t(simulated.value), t(simulated.std_error));
        let _ = writeln!(s, "S analytic   {}  (2√2 = {})", t(results.analytic), t(2.0 * std::f64::consts::SQRT_2));
        let _ = writeln!(s, "S lhv        {} ± {}  ({:?})", t(lhv.value), t(lhv.std_error), strategy);
        let _ = writeln!(s, "|S| - |S_lhv| {}", t(results.separation));
        s
    };
    let csv = || {
        let rows = settings
            .pairs()
            .iter()
            .enumerate()
            .map(|(k, (x, y))| {
                vec![
                    c(*x),
                    c(*y),
                    c(simulated.correlations[k]),
                    c(simulated.correlation_std_errors[k]),
                    c(-(2.0 * (x - y)).cos()),
                    c(lhv.correlations[k]),
                ]
            })
            .collect();
        csv_string(&["setting_x", "setting_y", "correlation", "std_error", "analytic", "lhv_correlation"], rows)
    };
    let envelope = Envelope {
        command: "chsh",
        inputs: ChshInputs { settings, marginal_c: marginal, n_per_setting: args.n, lhv_strategy: strategy },
        results: &results,
        seed: Some(seed),
    };
    render(format, envelope, table, csv)
}
