//! `specshare`: thresholds, equilibria, regime maps and greedy simulations
//! for two networks sharing spectrum.
//!
//! Exit status: 0 on success, 2 on invalid input, 1 on internal failure.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use output::{num, opt_num, Record};
use serde_json::Value;
use specshare::game::{
    cooperative_baseline, max_deviation_gain, price_of_anarchy, solve_equilibrium,
};
use specshare::numerics::{solve_lambda_double_prime, solve_lambda_prime, solve_lambda_star};
use specshare::sim::rng::{derive_seed, Purpose};
use specshare::sim::{
    generate_topology, run_greedy_adaptation, AdaptationTrace, GammaRule, GreedyConfig, Protocol,
    RateModel, SirMode, SirModel, TopologySpec,
};
use specshare::{Error, GameConfig, Model, PathlossExponent, RangeSpec, SirThreshold};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Deviation tolerance for `equilibrium --verify`, relative.
const VERIFY_TOL: f64 = 1e-6;
const VERIFY_GRID: usize = 1000;
const TAIL_WINDOW: usize = 100;

#[derive(Parser)]
#[command(
    name = "specshare",
    version,
    about = "Spectrum sharing games between two random-access networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed for simulations.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Fixed,
    Variable,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Fixed => Model::FixedRate,
            ModelArg::Variable => Model::VariableRate,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Ra,
    Csma,
}

#[derive(Clone, Copy, ValueEnum)]
enum SirArg {
    Full,
    Dominant,
}

#[derive(Clone, Copy, ValueEnum)]
enum GammaRuleArg {
    Candidate,
    Protected,
}

#[derive(Subcommand)]
enum Command {
    /// Single-network and symmetric thresholds at one pathloss exponent.
    Thresholds {
        #[arg(long)]
        alpha: f64,
    },
    /// Nash equilibrium, cooperative optimum and price of anarchy.
    Equilibrium {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n1: f64,
        #[arg(long)]
        n2: f64,
        #[arg(long, value_enum, default_value_t = ModelArg::Fixed)]
        model: ModelArg,
        /// Re-check the equilibrium against unilateral deviations on a grid.
        #[arg(long)]
        verify: bool,
    },
    /// Equilibrium regime on a grid of node counts (CSV by default).
    RegimeMap {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n_max: f64,
        #[arg(long, default_value_t = 50)]
        grid_steps: usize,
        #[arg(long, value_enum, default_value_t = ModelArg::Fixed)]
        model: ModelArg,
    },
    /// Price of anarchy along n2 = ratio * n1 (CSV by default).
    PoaCurve {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n_min: f64,
        #[arg(long)]
        n_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 1.0)]
        ratio: f64,
        #[arg(long, value_enum, default_value_t = ModelArg::Fixed)]
        model: ModelArg,
    },
    /// Greedy adaptation of both networks' strategies.
    Simulate(SimulateArgs),
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 400)]
    n1_count: usize,
    #[arg(long, default_value_t = 200)]
    n2_count: usize,
    /// Receivers are uniform on the disc of this radius around their transmitter.
    #[arg(long, default_value_t = 0.15)]
    radius: f64,
    /// Strategy step (default 0.02 for ra, 1 dB for csma).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    /// Slots per throughput estimate.
    #[arg(long, default_value_t = 200)]
    slots: usize,
    /// Links per network replaced each iteration (default 0 for ra, 10 for csma).
    #[arg(long)]
    churn: Option<usize>,
    /// Initial strategy of network 1 (default 1 for ra, 0 dB for csma).
    #[arg(long, allow_hyphen_values = true)]
    init1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    init2: Option<f64>,
    /// Border width excluded from measurement.
    #[arg(long, default_value_t = 0.1)]
    margin: f64,
    #[arg(long, value_enum, default_value_t = SirArg::Full)]
    sir: SirArg,
    #[arg(long, value_enum, default_value_t = ModelArg::Variable)]
    model: ModelArg,
    /// Target SIR of network 1 for the fixed-rate model.
    #[arg(long, default_value_t = 1.0)]
    beta1: f64,
    #[arg(long, default_value_t = 1.0)]
    beta2: f64,
    /// Use fixed transmit power instead of power proportional to D^alpha.
    #[arg(long)]
    no_power_control: bool,
    #[arg(long, value_enum, default_value_t = GammaRuleArg::Candidate)]
    gamma_rule: GammaRuleArg,
    /// Measure both probes of a network on the same slot seeds.
    #[arg(long)]
    coupled_probes: bool,
    /// Write the initial topology as CSV here.
    #[arg(long)]
    topology_out: Option<PathBuf>,
}

enum CliError {
    Validation(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn record(pairs: Vec<(&str, Value)>) -> Record {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn model_name(model: Model) -> &'static str {
    match model {
        Model::FixedRate => "fixed",
        Model::VariableRate => "variable",
    }
}

fn thresholds(alpha: f64) -> CliResult<Record> {
    let a = PathlossExponent::new(alpha)?;
    let lstar = solve_lambda_star(a)?.get();
    let half = if alpha > 4.0 {
        Some(
            solve_lambda_star(PathlossExponent::new(alpha / 2.0)?)?
                .get()
                .sqrt(),
        )
    } else {
        None
    };
    Ok(record(vec![
        ("alpha", num(alpha)),
        ("lambda_star", num(lstar)),
        ("beta_star_unconstrained", num(lstar.powf(-a.half()))),
        ("lambda_prime", num(solve_lambda_prime(a)?.get())),
        (
            "lambda_double_prime",
            opt_num(solve_lambda_double_prime(a)?.map(|d| d.get())),
        ),
        ("sqrt_lambda_star_half_alpha", opt_num(half)),
    ]))
}

fn equilibrium(alpha: f64, n1: f64, n2: f64, model: Model, verify: bool) -> CliResult<Record> {
    let (cfg, labels) = GameConfig::new(alpha, n1, n2, model)?.canonicalize();
    let eq = solve_equilibrium(&cfg)?;
    let (_, u_c) = cooperative_baseline(&cfg)?;
    let poa = match price_of_anarchy(&cfg) {
        Ok(p) => Some(p),
        Err(Error::ZeroEquilibriumUtility) => None,
        Err(e) => return Err(e.into()),
    };
    let gain = if verify {
        let g = max_deviation_gain(&eq, &cfg, VERIFY_GRID)?;
        if g > VERIFY_TOL {
            return Err(CliError::Internal(format!(
                "equilibrium check failed: a unilateral deviation gains {g:.3e} relative"
            )));
        }
        Some(g)
    } else {
        None
    };
    let eq = eq.relabel(labels);
    Ok(record(vec![
        ("alpha", num(alpha)),
        ("n1", num(n1)),
        ("n2", num(n2)),
        ("model", Value::from(model_name(model))),
        ("regime", Value::from(eq.regime.oriented_label(labels))),
        ("canonical_swap", Value::from(labels.swapped)),
        ("lambda1", num(eq.lambda1.get())),
        ("lambda2", num(eq.lambda2.get())),
        ("p1", num(eq.p1)),
        ("p2", num(eq.p2)),
        ("beta1", opt_num(eq.beta1.map(|b| b.get()))),
        ("beta2", opt_num(eq.beta2.map(|b| b.get()))),
        ("u1", num(eq.u1)),
        ("u2", num(eq.u2)),
        ("u_e", num(eq.u_e)),
        ("u_c", num(u_c)),
        ("price_of_anarchy", opt_num(poa)),
        ("max_deviation_gain", opt_num(gain)),
    ]))
}

/// Cell centres of an `steps x steps` grid over `(0, n_max]²`.
fn regime_map(alpha: f64, n_max: f64, steps: usize, model: Model) -> CliResult<Vec<Record>> {
    if steps < 2 {
        return Err(invalid("grid steps must be >= 2"));
    }
    if !(n_max.is_finite() && n_max > 0.0) {
        return Err(invalid("n-max must be > 0"));
    }
    let centre = |k: usize| n_max * (k as f64 + 0.5) / steps as f64;
    let mut rows = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let (n1, n2) = (centre(i), centre(j));
            let (cfg, labels) = GameConfig::new(alpha, n1, n2, model)?.canonicalize();
            let regime = specshare::game::classify_regime(&cfg)?;
            rows.push(record(vec![
                ("n1", num(n1)),
                ("n2", num(n2)),
                ("regime", Value::from(regime.oriented_label(labels))),
            ]));
        }
    }
    Ok(rows)
}

/// Geometrically spaced `n1` from `n_min` to `n_max`.
fn poa_curve(
    alpha: f64,
    n_min: f64,
    n_max: f64,
    points: usize,
    ratio: f64,
    model: Model,
) -> CliResult<Vec<Record>> {
    if points < 2 {
        return Err(invalid("points must be >= 2"));
    }
    if !(n_min > 0.0 && n_max > n_min && n_max.is_finite()) {
        return Err(invalid("need 0 < n-min < n-max"));
    }
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(invalid("ratio must be > 0"));
    }
    let step = (n_max / n_min).ln() / (points - 1) as f64;
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let n1 = n_min * (step * k as f64).exp();
        let rec = equilibrium(alpha, n1, ratio * n1, model, false)?;
        let keep = ["n1", "n2", "regime", "u_e", "u_c", "price_of_anarchy"];
        rows.push(
            keep.iter()
                .map(|&k| (k.to_string(), rec[k].clone()))
                .collect(),
        );
    }
    Ok(rows)
}

fn greedy_config(args: &SimulateArgs, seed: u64) -> CliResult<GreedyConfig> {
    let alpha = PathlossExponent::new(args.alpha)?;
    let base = match args.protocol {
        ProtocolArg::Ra => GreedyConfig::random_access(alpha, seed),
        ProtocolArg::Csma => GreedyConfig::csma(alpha, seed),
    };
    let rate = match args.model {
        ModelArg::Variable => RateModel::VariableRate,
        ModelArg::Fixed => RateModel::FixedRate {
            beta1: SirThreshold::new(args.beta1)?,
            beta2: SirThreshold::new(args.beta2)?,
        },
    };
    let mode = match args.sir {
        SirArg::Full => SirMode::Full,
        SirArg::Dominant => SirMode::Dominant,
    };
    let cfg = GreedyConfig {
        topology: TopologySpec {
            count1: args.n1_count,
            count2: args.n2_count,
            range: RangeSpec::UniformDisc { r: args.radius },
            power_control: !args.no_power_control,
            alpha,
            margin: args.margin,
        },
        init: [
            args.init1.unwrap_or(base.init[0]),
            args.init2.unwrap_or(base.init[1]),
        ],
        delta: args.delta.unwrap_or(base.delta),
        iterations: args.iters,
        slots_per_estimate: args.slots,
        churn: args.churn.unwrap_or(base.churn),
        sir: SirModel { mode, rate },
        gamma_rule: match args.gamma_rule {
            GammaRuleArg::Candidate => GammaRule::Candidate,
            GammaRuleArg::Protected => GammaRule::Protected,
        },
        coupled_probes: args.coupled_probes,
        ..base
    };
    cfg.validate()?;
    Ok(cfg)
}

fn trace_rows(trace: &AdaptationTrace) -> Vec<Record> {
    trace
        .steps
        .iter()
        .map(|s| {
            record(vec![
                ("iter", Value::from(s.iter)),
                ("strategy1", num(s.strategy1)),
                ("strategy2", num(s.strategy2)),
                ("r1", num(s.r1)),
                ("r2", num(s.r2)),
                ("f1", num(s.f1)),
                ("f2", num(s.f2)),
            ])
        })
        .collect()
}

fn simulate(args: &SimulateArgs, cli: &Cli) -> CliResult<()> {
    let cfg = greedy_config(args, cli.seed)?;
    if let Some(path) = &args.topology_out {
        // Same derivation as the adaptation run's own topology.
        let topo = generate_topology(
            &cfg.topology,
            derive_seed(cfg.seed, Purpose::Topology, 0, 0),
        )?;
        let mut w = output::sink(Some(path))?;
        topo.write_csv(&mut w)?;
        w.flush()?;
    }
    let trace = run_greedy_adaptation(&cfg)?;
    emit(&trace_rows(&trace), false, cli)?;

    let tail = trace.tail_means(TAIL_WINDOW)?;
    let protocol = match cfg.protocol {
        Protocol::RandomAccess => "ra",
        Protocol::Csma => "csma",
    };
    let summary = record(vec![
        ("protocol", Value::from(protocol)),
        ("alpha", num(args.alpha)),
        ("seed", Value::from(cfg.seed)),
        ("iterations", Value::from(tail.iterations)),
        ("strategy1", num(tail.strategy[0])),
        ("strategy2", num(tail.strategy[1])),
        ("r1", num(tail.rate[0])),
        ("r2", num(tail.rate[1])),
        ("f1", num(tail.fraction[0])),
        ("f2", num(tail.fraction[1])),
    ]);
    // With the trace on stdout the summary moves to stderr.
    let text = serde_json::to_string(&Value::Object(summary))
        .map_err(|e| CliError::Internal(e.to_string()))?;
    if cli.out.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    Ok(())
}

fn emit(rows: &[Record], single: bool, cli: &Cli) -> CliResult<()> {
    let mut w = output::sink(cli.out.as_deref())?;
    match cli.format {
        Format::Csv => output::write_csv(rows, &mut w)?,
        Format::Json => output::write_json(rows, single, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Thresholds { alpha } => emit(&[thresholds(*alpha)?], true, cli),
        Command::Equilibrium {
            alpha,
            n1,
            n2,
            model,
            verify,
        } => emit(
            &[equilibrium(*alpha, *n1, *n2, (*model).into(), *verify)?],
            true,
            cli,
        ),
        Command::RegimeMap {
            alpha,
            n_max,
            grid_steps,
            model,
        } => emit(
            &regime_map(*alpha, *n_max, *grid_steps, (*model).into())?,
            false,
            cli,
        ),
        Command::PoaCurve {
            alpha,
            n_min,
            n_max,
            points,
            ratio,
            model,
        } => emit(
            &poa_curve(*alpha, *n_min, *n_max, *points, *ratio, (*model).into())?,
            false,
            cli,
        ),
        Command::Simulate(args) => simulate(args, cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
