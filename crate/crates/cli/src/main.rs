//! Command-line front end: evaluate the interference function at a point,
//! scan curves to CSV, report analytic features, run the walk simulator,
//! print validity windows, and self-verify.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 resource cap.

mod config;
mod csvout;
mod features_cmd;
mod scan;
mod simulate;

use anyhow::{ensure, Result};
use clap::{Parser, Subcommand, ValueEnum};
use csvout::sig12;
use std::path::PathBuf;
use std::process;
use timewalk::interference::{product_form, q_recursion_log, sum_oracle};
use timewalk::regime::{
    required_fraction_for_duration, subsidiary_vs_width_ratio, tau_scaling_check,
    upper_bound_total_time, validity_window, RegimeInputs, TauModel, PLANCK_TIME_S,
    SECONDS_PER_YEAR,
};
use timewalk::verify::{run as run_checks, Effort};
use timewalk::{LogComplex, PathCount};

#[derive(Parser)]
#[command(
    name = "timewalk",
    version,
    about = "Interference of forward and backward step-count paths: \
             evaluate, scan, analyze, simulate, verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the interference function at one argument.
    Eval {
        /// Walk length N.
        #[arg(long = "N")]
        total: u64,
        /// Forward step count n.
        #[arg(long = "n")]
        split: u64,
        /// Phase argument z.
        #[arg(long)]
        z: f64,
        /// Evaluation route.
        #[arg(long, value_enum, default_value_t = Method::Product)]
        method: Method,
    },
    /// Scan a z range and write curve columns to CSV.
    Scan(scan::ScanArgs),
    /// Report predicted curve features (zeros, unit-modulus points, peaks).
    Features(features_cmd::FeaturesArgs),
    /// Evolve a configured universe and report two-endpoint accuracy.
    Simulate(simulate::SimulateArgs),
    /// Print duration windows and bounds for a T-violating fraction.
    Regime(RegimeArgs),
    /// Run the self-check suites; exits 1 if any suite fails.
    Verify {
        /// How much work to put in.
        #[arg(value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

/// Evaluation route: the brute-force path sum, the closed-form product, or
/// the row recurrence.
#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Sum,
    Product,
    Recurrence,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(clap::Args, Debug)]
struct RegimeArgs {
    /// T-violating particle fraction, in (0, 1].
    #[arg(long)]
    f: Option<f64>,
    /// Use the stringent many-step duration floor.
    #[arg(long)]
    strict: bool,
    /// Invert the revival bound: report the fraction that stretches the
    /// admissible window to this total duration (seconds).
    #[arg(long)]
    duration: Option<f64>,
    /// Fixed step duration in seconds (default: the Planck time).
    #[arg(long)]
    tau: Option<f64>,
    /// Use scaled steps tau = c / sqrt(N+1) with this c (seconds).
    #[arg(long = "scaled-c")]
    scaled_c: Option<f64>,
    /// Walk length for step-resolution ratios.
    #[arg(long)]
    steps: Option<u64>,
    /// Config file whose [regime] section fills flags left unset.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() {
    // Die quietly when stdout is a pipe that closes early (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval {
            total,
            split,
            z,
            method,
        } => cmd_eval(total, split, z, method).map(|()| 0),
        Command::Scan(args) => scan::run_scan(&args).map(|()| 0),
        Command::Features(args) => features_cmd::run_features(&args).map(|()| 0),
        Command::Simulate(args) => simulate::run_simulate(&args).map(|()| 0),
        Command::Regime(args) => cmd_regime(&args).map(|()| 0),
        Command::Verify { level } => cmd_verify(level),
    };
    match result {
        Ok(code) => process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            process::exit(classify(&err));
        }
    }
}

/// Resource-cap failures exit 3; everything else that errors is usage or
/// domain, exit 2.
fn classify(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<timewalk::Error>() {
            return match e {
                timewalk::Error::EnumerationCap { .. } | timewalk::Error::RecurrenceCap { .. } => 3,
                _ => 2,
            };
        }
    }
    2
}

fn cmd_eval(total: u64, split: u64, z: f64, method: Method) -> Result<()> {
    ensure!(z.is_finite(), "--z must be finite");
    let pc = PathCount::new(total, split)?;
    let (name, lc) = match method {
        Method::Sum => ("sum", LogComplex::from_complex(sum_oracle(pc, z)?)),
        Method::Product => ("product", product_form(pc, z)?),
        Method::Recurrence => ("recurrence", q_recursion_log(pc, z)?),
    };
    println!("method = {name}");
    println!("log_magnitude = {}", sig12(lc.log_mag));
    println!("phase = {}", sig12(lc.phase));
    println!("magnitude = {}", sig12(lc.modulus()));
    let v = lc.to_complex();
    if v.re.is_finite() && v.im.is_finite() {
        println!("real = {}", sig12(v.re));
        println!("imag = {}", sig12(v.im));
    }
    Ok(())
}

fn cmd_regime(args: &RegimeArgs) -> Result<()> {
    let section = match &args.config {
        Some(path) => config::load(path)?.regime,
        None => config::RegimeSection::default(),
    };
    let fraction = args.f.or(section.fraction);
    let strict = args.strict || section.strict.unwrap_or(false);
    let duration = args.duration.or(section.duration);
    let tau_s = args.tau.or(section.tau).unwrap_or(PLANCK_TIME_S);
    let scaled_c = args.scaled_c.or(section.scaled_c);
    let steps = args.steps.or(section.steps);
    ensure!(
        fraction.is_some() || duration.is_some(),
        "pass --f and/or --duration"
    );

    if let Some(total_time) = duration {
        ensure!(
            scaled_c.is_none(),
            "the duration inversion uses the fixed step model; drop --scaled-c"
        );
        let required = required_fraction_for_duration(tau_s, total_time)?;
        println!("duration_s = {}", sig12(total_time));
        println!("duration_years = {}", sig12(total_time / SECONDS_PER_YEAR));
        println!("required_fraction = {}", sig12(required));
        if required > 1.0 {
            println!("note: the required fraction exceeds 1, so no particle fraction reaches this duration at the given step size");
        }
    }

    let Some(f) = fraction else {
        return Ok(());
    };
    let model = match scaled_c {
        Some(c) => TauModel::Scaled { c },
        None => TauModel::Fixed { tau_s },
    };
    let inputs = RegimeInputs::new(f, model)?;
    println!("fraction = {}", sig12(f));
    println!("dephasing_rate_per_s2 = {}", sig12(inputs.dephasing_rate()));
    match model {
        TauModel::Fixed { tau_s } => {
            println!("model = fixed");
            println!("tau_s = {}", sig12(tau_s));
            let upper = upper_bound_total_time(&inputs)?;
            println!("upper_bound_s = {}", sig12(upper));
            println!("upper_bound_years = {}", sig12(upper / SECONDS_PER_YEAR));
            let window = validity_window(&inputs, strict)?;
            println!(
                "window = {}",
                if window.strict { "strict" } else { "relaxed" }
            );
            println!("window_lower_s = {}", sig12(window.lower_s));
            println!("window_upper_s = {}", sig12(window.upper_s));
            if window.conflict {
                println!("conflict = true");
                println!(
                    "CONFLICT: the lower bound {} s cannot sit well below the upper bound {} s; no duration satisfies both",
                    sig12(window.lower_s),
                    sig12(window.upper_s)
                );
            } else {
                println!("conflict = false");
            }
        }
        TauModel::Scaled { c } => {
            println!("model = scaled");
            println!("c_s = {}", sig12(c));
            let check = tau_scaling_check(&inputs)?;
            println!("margin = {}", sig12(check.margin));
            println!("scaling_satisfied = {}", check.satisfied);
            println!(
                "first_subsidiary_rate_per_s2 = {}",
                sig12(check.first_subsidiary_rate)
            );
        }
    }
    if let Some(steps) = steps {
        println!("steps = {steps}");
        println!("effective_tau_s = {}", sig12(inputs.effective_tau(steps)));
        println!(
            "subsidiary_vs_width_ratio = {}",
            sig12(subsidiary_vs_width_ratio(&inputs, steps))
        );
    }
    Ok(())
}

fn cmd_verify(level: Level) -> Result<i32> {
    let effort = match level {
        Level::Quick => Effort::Quick,
        Level::Full => Effort::Full,
    };
    let outcomes = run_checks(effort);
    let mut failed = 0usize;
    for outcome in &outcomes {
        let tag = if outcome.passed {
            "PASS"
        } else {
            failed += 1;
            "FAIL"
        };
        println!("{tag}  {}: {}", outcome.label, outcome.detail);
    }
    println!(
        "{} checks run, {} passed, {failed} failed",
        outcomes.len(),
        outcomes.len() - failed
    );
    Ok(if failed == 0 { 0 } else { 1 })
}
