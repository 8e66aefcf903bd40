//! `bangbang`: synthesize, optimize, decompose, simulate, and verify
//! bang-bang control schedules for N-level systems.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bangbang::controls::ChannelKind;
use bangbang::hypersphere::to_hyperspherical;
use bangbang::io;
use bangbang::numerics::operator_distance;
use bangbang::schedule::{AmplitudeRule, Family, Schedule};
use bangbang::simulator::{fidelity, propagate, propagate_operator};
use bangbang::timeenergy::evaluate_cost;
use bangbang::transfer::{
    compress_concurrent, synthesize_transfer, to_schedule, w_state_sequence, GroupedSequence,
    RotationSequence,
};
use bangbang::unitary::{factorization_to_schedule, factorize_unitary, reconstruct};
use bangbang::verify::{all_passed, render_report, run_battery, VerifyConfig};
use bangbang::{Matrix64, Vector64};

const TRANSFER_FIDELITY_FLOOR: f64 = 1.0 - 1e-10;
const RECONSTRUCTION_CEILING: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "bangbang",
    about = "Bang-bang control pulse synthesis for N-level systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct AmplitudeOpts {
    /// Time/energy cost ratio; pulses run at sqrt(lambda).
    #[arg(long, conflicts_with = "amplitude")]
    lambda: Option<f64>,

    /// Fixed pulse amplitude instead of the time-energy optimum.
    #[arg(long)]
    amplitude: Option<f64>,
}

impl AmplitudeOpts {
    fn rule(&self) -> AmplitudeRule<f64> {
        match (self.lambda, self.amplitude) {
            (_, Some(l)) => AmplitudeRule::UniformL(l),
            (Some(lambda), None) => AmplitudeRule::TimeEnergyOptimal(lambda),
            (None, None) => AmplitudeRule::TimeEnergyOptimal(1.0),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the complex hyperspherical coordinates of a state file
    Coords {
        /// State file: first line N, then N lines "re im".
        state: PathBuf,
    },

    /// Synthesize a state-transfer schedule
    Synthesize {
        /// Initial state file.
        #[arg(long)]
        initial: PathBuf,

        /// Target state file.
        #[arg(long)]
        target: PathBuf,

        /// Control family: yz or xz.
        #[arg(long, default_value = "yz")]
        family: String,

        #[command(flatten)]
        amplitude: AmplitudeOpts,

        /// Drop zero-angle rotations.
        #[arg(long)]
        prune: bool,

        /// Merge the leading/trailing phase blocks into concurrent steps.
        #[arg(long)]
        concurrent: bool,

        /// Replace negative angles by angle + 2 pi at positive amplitude.
        #[arg(long)]
        nonnegative_time: bool,

        /// Output schedule file (JSON).
        #[arg(long)]
        out: PathBuf,
    },

    /// Propagate a schedule from an initial state
    Simulate {
        /// Schedule file (JSON).
        #[arg(long)]
        schedule: PathBuf,

        /// Initial state file.
        #[arg(long)]
        initial: PathBuf,

        /// Optional target state file for a fidelity report.
        #[arg(long)]
        target: Option<PathBuf>,

        /// Optional trajectory CSV output.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },

    /// Evaluate the time-energy cost of a schedule
    Optimize {
        /// Schedule file (JSON).
        #[arg(long)]
        schedule: PathBuf,

        /// Time/energy cost ratio.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,

        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },

    /// Factor a unitary into a bang-bang schedule
    Decompose {
        /// Matrix file: first line "N M", then N*M lines "re im".
        #[arg(long)]
        unitary: PathBuf,

        /// Output schedule file (JSON).
        #[arg(long)]
        out: Option<PathBuf>,

        #[command(flatten)]
        amplitude: AmplitudeOpts,

        /// Drop zero-angle rotations and empty steps.
        #[arg(long)]
        prune: bool,

        /// Print eigenphases and per-stage angles.
        #[arg(long)]
        report: bool,
    },

    /// Synthesize the W-state preparation sequence
    Wstate {
        /// System dimension.
        #[arg(long)]
        n: usize,

        /// Control family: yz or xz.
        #[arg(long, default_value = "yz")]
        family: String,

        #[command(flatten)]
        amplitude: AmplitudeOpts,

        /// Optional output schedule file (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Run the deterministic property battery
    Verify {
        /// Battery seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Random cases per dimension in each sampled property.
        #[arg(long, default_value_t = 8)]
        cases: usize,

        /// Scales every threshold; tightening below 1 forces failures.
        #[arg(long, default_value_t = 1.0, hide = true)]
        tolerance_scale: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Coords { state } => cmd_coords(&state),
        Command::Synthesize {
            initial,
            target,
            family,
            amplitude,
            prune,
            concurrent,
            nonnegative_time,
            out,
        } => cmd_synthesize(
            &initial,
            &target,
            &family,
            amplitude.rule(),
            prune,
            concurrent,
            nonnegative_time,
            &out,
        ),
        Command::Simulate {
            schedule,
            initial,
            target,
            trajectory,
        } => cmd_simulate(&schedule, &initial, target.as_deref(), trajectory.as_deref()),
        Command::Optimize {
            schedule,
            lambda,
            json,
        } => cmd_optimize(&schedule, lambda, json),
        Command::Decompose {
            unitary,
            out,
            amplitude,
            prune,
            report,
        } => cmd_decompose(&unitary, out.as_deref(), amplitude.rule(), prune, report),
        Command::Wstate {
            n,
            family,
            amplitude,
            out,
        } => cmd_wstate(n, &family, amplitude.rule(), out.as_deref()),
        Command::Verify {
            seed,
            cases,
            tolerance_scale,
        } => cmd_verify(seed, cases, tolerance_scale),
    }
}

fn angle_list(angles: &[f64]) -> String {
    angles
        .iter()
        .map(|a| format!("{a:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_coords(state: &std::path::Path) -> anyhow::Result<ExitCode> {
    let v: Vector64 = io::read_state(state)?;
    let h = to_hyperspherical(&v)?;
    println!("theta: {}", angle_list(h.theta()));
    println!("phi:   {}", angle_list(h.phi()));
    Ok(ExitCode::SUCCESS)
}

fn print_sequence_summary(seq: &RotationSequence<f64>) {
    let names: Vec<String> = seq
        .rotations()
        .iter()
        .map(|r| format!("{}({:.6})", r.channel().name(), r.angle()))
        .collect();
    println!("rotations [{}]: {}", seq.len(), names.join(" "));
}

#[allow(clippy::too_many_arguments)]
fn cmd_synthesize(
    initial: &std::path::Path,
    target: &std::path::Path,
    family: &str,
    rule: AmplitudeRule<f64>,
    prune: bool,
    concurrent: bool,
    nonnegative_time: bool,
    out: &std::path::Path,
) -> anyhow::Result<ExitCode> {
    let c0: Vector64 = io::read_state(initial)?;
    let cs: Vector64 = io::read_state(target)?;
    let family = Family::parse(family)?;
    let seq = synthesize_transfer(&c0, &cs, family, prune)?;
    print_sequence_summary(&seq);

    let grouped = if concurrent {
        compress_concurrent(&seq)
    } else {
        GroupedSequence::sequential(&seq)
    };
    println!("steps: {}", grouped.step_count());
    let schedule = to_schedule(&grouped, rule, nonnegative_time)?;
    std::fs::write(out, schedule.to_json())?;

    // independent check through the propagator
    let traj = propagate(&schedule, &c0)?;
    let achieved = fidelity(traj.final_state(), &cs)?;
    println!("duration: {:.6}", schedule.total_duration());
    println!("fidelity: {achieved:.12}");
    if achieved < TRANSFER_FIDELITY_FLOOR {
        eprintln!(
            "validation failed: fidelity {achieved:.12} below {TRANSFER_FIDELITY_FLOOR:.12}"
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(
    schedule: &std::path::Path,
    initial: &std::path::Path,
    target: Option<&std::path::Path>,
    trajectory: Option<&std::path::Path>,
) -> anyhow::Result<ExitCode> {
    let s: Schedule<f64> = Schedule::from_json(&std::fs::read_to_string(schedule)?)?;
    let psi0: Vector64 = io::read_state(initial)?;
    let traj = propagate(&s, &psi0)?;
    let last = traj.final_state();
    println!("steps: {}", s.step_count());
    println!("duration: {:.6}", s.total_duration());
    println!("final state:");
    for e in last.entries() {
        println!("  {:+.6} {:+.6}i", e.re, e.im);
    }
    if let Some(target) = target {
        let cs: Vector64 = io::read_state(target)?;
        println!("fidelity: {:.12}", fidelity(last, &cs)?);
    }
    if let Some(path) = trajectory {
        io::write_trajectory_csv(path, &traj)?;
        println!("trajectory written to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_optimize(
    schedule: &std::path::Path,
    lambda: f64,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let s: Schedule<f64> = Schedule::from_json(&std::fs::read_to_string(schedule)?)?;
    let report = evaluate_cost(&s, lambda)?;
    if json {
        let value = serde_json::json!({
            "lambda": report.lambda,
            "t_f": report.t_f,
            "energy": report.energy,
            "index": report.index,
            "t_f_bound": report.t_f_bound,
            "index_bound": report.index_bound,
            "energy_bound": report.energy_bound,
            "product": report.product,
            "product_bound": report.product_bound,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("lambda         {:>14.6}", report.lambda);
        println!("t_f            {:>14.6}", report.t_f);
        println!("energy         {:>14.6}", report.energy);
        println!("index          {:>14.6}", report.index);
        println!("t_f_bound      {:>14.6}", report.t_f_bound);
        println!("index_bound    {:>14.6}", report.index_bound);
        println!("energy_bound   {:>14.6}", report.energy_bound);
        println!("product        {:>14.6}", report.product);
        println!("product_bound  {:>14.6}", report.product_bound);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decompose(
    unitary: &std::path::Path,
    out: Option<&std::path::Path>,
    rule: AmplitudeRule<f64>,
    prune: bool,
    report: bool,
) -> anyhow::Result<ExitCode> {
    let u: Matrix64 = io::read_matrix(unitary)?;
    let f = factorize_unitary(&u)?;
    let schedule = factorization_to_schedule(&f, rule, prune)?;

    if report {
        println!("eigenphases: {}", angle_list(f.eigenphases()));
        for stage in f.stages() {
            println!(
                "stage k={}: theta ({}), phi ({})",
                stage.size(),
                angle_list(stage.theta()),
                angle_list(stage.phi())
            );
        }
    }
    println!("steps: {}", schedule.step_count());

    let propagated = propagate_operator(&schedule)?;
    let residual = operator_distance(&propagated, &u)?;
    let matrix_residual = operator_distance(&reconstruct(&f), &u)?;
    println!("reconstruction residual: {residual:.3e}");
    if report {
        println!("matrix-level residual:   {matrix_residual:.3e}");
    }
    if let Some(path) = out {
        std::fs::write(path, schedule.to_json())?;
        println!("schedule written to {}", path.display());
    }
    if residual > RECONSTRUCTION_CEILING {
        eprintln!(
            "validation failed: residual {residual:.3e} above {RECONSTRUCTION_CEILING:.1e}"
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_wstate(
    n: usize,
    family: &str,
    rule: AmplitudeRule<f64>,
    out: Option<&std::path::Path>,
) -> anyhow::Result<ExitCode> {
    let family = Family::parse(family)?;
    let seq = w_state_sequence::<f64>(n, family)?;
    let thetas: Vec<f64> = seq
        .rotations()
        .iter()
        .filter(|r| r.channel().kind() != ChannelKind::Z)
        .map(|r| r.angle())
        .collect();
    println!("theta: {}", angle_list(&thetas));
    print_sequence_summary(&seq);

    let schedule = to_schedule(&compress_concurrent(&seq), rule, false)?;
    let traj = propagate(&schedule, seq.source())?;
    let achieved = fidelity(traj.final_state(), seq.target())?;
    println!("fidelity: {achieved:.12}");
    if let Some(path) = out {
        std::fs::write(path, schedule.to_json())?;
        println!("schedule written to {}", path.display());
    }
    if achieved < TRANSFER_FIDELITY_FLOOR {
        eprintln!(
            "validation failed: fidelity {achieved:.12} below {TRANSFER_FIDELITY_FLOOR:.12}"
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(seed: u64, cases: usize, tolerance_scale: f64) -> anyhow::Result<ExitCode> {
    let results = run_battery(VerifyConfig {
        seed,
        tolerance_scale,
        cases_per_dim: cases,
    });
    print!("{}", render_report(&results));
    if all_passed(&results) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
