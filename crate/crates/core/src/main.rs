use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use jones_nmr::nmr::EvqcPrecision;
use jones_nmr::pulse::{compile_controlled_s, pulse_angles, verify_program};
use jones_nmr::sweep::{self, ViolationKind, DEFAULT_ORACLE_TOLERANCE};
use jones_nmr::{braid::BraidGenerator, nmr::controlled_u, parse_braid, tl_rep};

#[derive(Parser)]
#[command(
    name = "jones-nmr",
    version,
    about = "Jones polynomial sweeps, trace estimation and pulse programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a braid closure over a grid of angles and write CSV.
    Sweep(SweepArgs),
    /// Print the pulse angles α, β, γ.
    Angles {
        #[arg(long, allow_negative_numbers = true)]
        theta_deg: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Print the pulse program for a controlled generator and its fidelity.
    Compile {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long, allow_negative_numbers = true)]
        theta_deg: f64,
        #[arg(long)]
        inverse: bool,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Braid word, e.g. "s1 s2^-1 s1 s2^-1".
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    braid: Option<String>,
    /// trefoil, figure8 or borromean.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 3)]
    strands: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta_min_deg: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    theta_max_deg: f64,
    #[arg(long, default_value_t = 1.0)]
    theta_step_deg: f64,
    /// Measurement precision ε of the simulated machine.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Polarization of the probe spin.
    #[arg(long, default_value_t = 1.0)]
    alpha1: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compute the bracket by state summation.
    #[arg(long)]
    oracle: bool,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true, default_value_t = DEFAULT_ORACLE_TOLERANCE, allow_negative_numbers = true)]
    oracle_tolerance: f64,
}

fn run_sweep(args: &SweepArgs) -> Result<bool> {
    let braid = match (&args.braid, &args.preset) {
        (Some(word), None) => parse_braid(word, args.strands)?,
        (None, Some(name)) => {
            if args.strands != 3 {
                bail!("presets are three-strand braids");
            }
            sweep::preset(name)?
        }
        _ => bail!("give exactly one of --braid and --preset"),
    };
    let grid = sweep::degree_grid(args.theta_min_deg, args.theta_max_deg, args.theta_step_deg)?;
    let prec = EvqcPrecision::new(args.epsilon, args.alpha1, args.seed)?;
    let records = sweep::run_sweep(&braid, &grid, &prec, args.oracle)?;

    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            sweep::emit_csv(&records, BufWriter::new(file)).with_context(|| format!("writing {}", path.display()))?
        }
        None => sweep::emit_csv(&records, io::stdout().lock())?,
    }

    let violations = sweep::find_violations(&records, args.oracle_tolerance);
    for v in &violations {
        match v.kind {
            ViolationKind::Oracle { diff } => {
                eprintln!("θ = {}°: bracket differs from state sum by {diff:e}", v.theta_deg)
            }
            ViolationKind::Bound { diff } => {
                eprintln!("θ = {}°: trace estimate off by {diff:e}, beyond its bound", v.theta_deg)
            }
        }
    }
    eprintln!("{} records, {} violations", records.len(), violations.len());
    Ok(violations.is_empty())
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep(args) => run_sweep(&args),
        Command::Angles { theta_deg, which } => {
            let a = pulse_angles(theta_deg.to_radians(), which)?;
            println!("alpha={}", a.alpha);
            println!("beta={}", a.beta);
            println!("gamma={}", a.gamma);
            Ok(true)
        }
        Command::Compile {
            which,
            theta_deg,
            inverse,
        } => {
            let theta = theta_deg.to_radians();
            let program = compile_controlled_s(which, theta, inverse)?;
            let params = tl_rep::ReprParams::new(theta)?;
            let g = BraidGenerator::new(which as usize, inverse);
            let target = controlled_u(&tl_rep::rho_generator(g, &params)?)?;
            let fidelity = verify_program(&program, &target)?;
            let mut out = io::stdout().lock();
            write!(out, "{program}")?;
            writeln!(out, "# fidelity={fidelity}")?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
