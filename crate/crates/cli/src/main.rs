//! `bigmatch`: exact values, marginal values, reductions, simulations and
//! verification suites for repeated games with absorbing states.
//!
//! Exit codes: 0 on success, 1 on verification failure, 2 on usage errors.

mod build;
mod manifest;
mod verify;

use bigmatch_core::games::{parse_game, AbsorbingGame};
use bigmatch_core::numeric::{decimal_string, parse_rational, Rational};
use bigmatch_core::sim::{run_batch, RecordFlags, SimConfig};
use bigmatch_core::solver::{
    approximate_value, marginal_value, reduce, render_reduction, ThresholdMode,
};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bigmatch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate the value of a repeated game with absorbing states.
    Value(ValueArgs),
    /// Marginal value of a matrix game with respect to a perturbation.
    Marginal(MarginalArgs),
    /// Reduce an absorbing game to a generalized Big Match game.
    Reduce(ReduceArgs),
    /// Run strategy-vs-adversary Monte Carlo replicas.
    Simulate(SimulateArgs),
    /// Run the exhaustive verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ValueArgs {
    /// Game file (.game grammar).
    game: PathBuf,
    /// Additive tolerance (canonical rational syntax).
    #[arg(long)]
    eps: String,
    /// Also print a decimal rendering.
    #[arg(long)]
    decimal: bool,
    /// Write the result (and a manifest) to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MarginalArgs {
    /// Matrix game A (.game grammar; stop probabilities must be 0).
    a: PathBuf,
    /// Perturbation B (same shape).
    b: PathBuf,
    #[arg(long)]
    decimal: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    game: PathBuf,
    /// Tolerance as a negative power of two, e.g. `2^-4`.
    #[arg(long)]
    eps: String,
    /// Output reduction file.
    #[arg(long)]
    out: PathBuf,
    /// Probe for the stable basis instead of anchoring at the closed-form
    /// threshold (certificates are checked either way).
    #[arg(long)]
    fast_thresholds: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    game: PathBuf,
    /// Player 1 spec: base:i=..,xi=.. | classic:xi=.. |
    /// full:eps=..,sched=loglog|file:<path> | observer:<spec> |
    /// lifted:<reduction-file> | stationary:q=..
    #[arg(long)]
    p1: String,
    /// Player 2 spec: constL | constR | word:<LR> | dens:<rat>,len=<n> |
    /// doubling | phase:eps=<rat>,k=<n>
    #[arg(long)]
    p2: String,
    #[arg(short = 'T', long = "horizon")]
    horizon: u64,
    #[arg(long, default_value_t = 1)]
    replicas: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma list of extra recordings: mem,samples,bits,actions.
    #[arg(long)]
    record: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Draw sample-point gaps in blocks (bit-frugal runner).
    #[arg(long)]
    block: bool,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Render CSV payoffs in decimal instead of rational syntax.
    #[arg(long)]
    decimal: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// base-lemma | lp-certs | parametric | reduction | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Value(args) => cmd_value(args),
        Command::Marginal(args) => cmd_marginal(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => Ok(verify::cmd_verify(&args.suite, args.seed)?),
    }
}

fn load_game(path: &Path) -> Result<AbsorbingGame, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_game(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn render_value(v: &Rational, decimal: bool) -> String {
    if decimal {
        format!("{v} ({})", decimal_string(v, 12))
    } else {
        v.to_string()
    }
}

fn cmd_value(args: ValueArgs) -> Result<ExitCode, String> {
    let started = manifest::now();
    let game = load_game(&args.game)?;
    let eps = parse_rational(&args.eps).map_err(|e| e.to_string())?;
    if !num_traits::Signed::is_positive(&eps) {
        return Err("tolerance must be positive".into());
    }
    let value = approximate_value(&game, &eps);
    let line = render_value(&value, args.decimal);
    println!("{line}");
    if let Some(out) = &args.out {
        std::fs::write(out, format!("{line}\n")).map_err(|e| e.to_string())?;
        manifest::write_manifest(out, &[&args.game], None, started)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_marginal(args: MarginalArgs) -> Result<ExitCode, String> {
    let started = manifest::now();
    let a = load_game(&args.a)?;
    let b = load_game(&args.b)?;
    for (path, g) in [(&args.a, &a), (&args.b, &b)] {
        if g.stop_matrix().iter().any(|w| !num_traits::Zero::is_zero(w)) {
            return Err(format!(
                "{}: marginal values are for matrix games; stop probabilities must be 0",
                path.display()
            ));
        }
    }
    let ga = bigmatch_core::games::MatrixGame::new(a.payoff_matrix().clone());
    let gb = bigmatch_core::games::MatrixGame::new(b.payoff_matrix().clone());
    if ga.rows() != gb.rows() || ga.cols() != gb.cols() {
        return Err("A and B must have the same shape".into());
    }
    let mv = marginal_value(&ga, &gb);
    let line = render_value(&mv, args.decimal);
    println!("{line}");
    if let Some(out) = &args.out {
        std::fs::write(out, format!("{line}\n")).map_err(|e| e.to_string())?;
        manifest::write_manifest(out, &[&args.a, &args.b], None, started)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_pow2_eps(s: &str) -> Result<u32, String> {
    s.strip_prefix("2^-")
        .and_then(|e| e.parse().ok())
        .ok_or_else(|| format!("eps must have the form 2^-<l>, got `{s}`"))
}

fn cmd_reduce(args: ReduceArgs) -> Result<ExitCode, String> {
    let started = manifest::now();
    let game = load_game(&args.game)?;
    let exponent = parse_pow2_eps(&args.eps)?;
    let mode = if args.fast_thresholds {
        ThresholdMode::Fast
    } else {
        ThresholdMode::Paper
    };
    let reduction = reduce(&game, exponent, mode).map_err(|e| e.to_string())?;
    std::fs::write(&args.out, render_reduction(&reduction)).map_err(|e| e.to_string())?;
    manifest::write_manifest(&args.out, &[&args.game], None, started)?;
    match &reduction.d_game {
        Some(d) => println!(
            "reduced to a generalized Big Match game with {} columns (K = {})",
            d.cols(),
            reduction.k_bound
        ),
        None => println!("reduction degenerated to a stationary mixture (no columns kept)"),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_record_flags(spec: Option<&str>) -> Result<RecordFlags, String> {
    let mut flags = RecordFlags::default();
    let Some(spec) = spec else {
        return Ok(flags);
    };
    for item in spec.split(',').filter(|s| !s.is_empty()) {
        match item {
            "mem" => flags.memory = true,
            "samples" => flags.samples = true,
            "bits" => flags.bits = true,
            "actions" => flags.actions = true,
            other => return Err(format!("unknown record flag `{other}`")),
        }
    }
    Ok(flags)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, String> {
    let started = manifest::now();
    let game = load_game(&args.game)?;
    let p2 =
        bigmatch_core::adversaries::parse_p2_spec(&args.p2).map_err(|e| e.to_string())?;
    let (p1, extra_inputs) = build::build_p1(&args.p1, &game, args.block)?;
    let record = parse_record_flags(args.record.as_deref())?;
    let mut cfg = SimConfig::new(&game, &p2, args.horizon, args.replicas);
    cfg.seed = args.seed;
    cfg.record = record;
    cfg.threads = args.threads;
    let report = match &p1 {
        build::Player1::Base(s) => run_batch(s, &cfg),
        build::Player1::Full(s) => run_batch(s, &cfg),
        build::Player1::Lifted(s) => run_batch(s, &cfg),
        build::Player1::Stationary(s) => run_batch(s, &cfg),
    }
    .map_err(|e| e.to_string())?;

    let mut csv = String::from(
        "replica,payoff,liminf_proxy,limsup_proxy,stopped,stop_round,outcome,max_state,bits_per_round\n",
    );
    let fmt = |v: &Rational| {
        if args.decimal {
            decimal_string(v, 9)
        } else {
            v.to_string()
        }
    };
    for (idx, r) in report.replicas.iter().enumerate() {
        let outcome = r.outcome.as_ref().map(&fmt).unwrap_or_default();
        let stop_round = r.stop_round.map(|s| s.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{idx},{},{},{},{},{stop_round},{outcome},{},{}\n",
            fmt(&r.payoff),
            fmt(&r.liminf),
            fmt(&r.limsup),
            u8::from(r.stopped),
            r.max_state,
            fmt(&r.bits_per_round),
        ));
    }
    std::fs::write(&args.out, csv).map_err(|e| e.to_string())?;
    let mut inputs: Vec<&Path> = vec![&args.game];
    for p in &extra_inputs {
        inputs.push(p);
    }
    manifest::write_manifest(&args.out, &inputs, Some(args.seed), started)?;

    println!("replicas: {}", report.replicas.len());
    println!("mean payoff: {}", render_value(&report.mean_payoff, args.decimal));
    println!("stop rate: {}", render_value(&report.stop_rate, args.decimal));
    if let Some(c) = &report.conditional_outcome_mean {
        println!("conditional outcome mean: {}", render_value(c, args.decimal));
    }
    if record.bits {
        for (epoch, rounds, bits) in &report.epoch_bits {
            println!("epoch {epoch}: rounds {rounds} bits {bits}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
