//! `cpforce`: thermal Casimir-Polder force between an atom and a thick wall.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use cpforce_core::constants::{angular_frequency_to_ev, CODATA_2018};
use cpforce_core::{AtomModel, MuMode, PermeabilityModel, PermittivityModel, WallModel};

use cpforce_cli::config::{
    self, ConfigFile, Mode, Spacing, SweepOverrides,
};
use cpforce_cli::emit::{self, SweepDocument};
use cpforce_cli::sweep;
use cpforce_cli::verify;

#[derive(Parser)]
#[command(
    name = "cpforce",
    version,
    about = "Thermal Casimir-Polder free energy and force between an atom and a thick wall",
    long_about = "Computes the finite-temperature Casimir-Polder interaction of a ground-state \
                  atom (dynamic electric polarizability plus an optional permanent magnetic \
                  moment) with a thick homogeneous wall. Interface units are SI; results are \
                  emitted as CSV or JSON."
)]
struct Cli {
    /// TOML config file: custom atoms/walls and sweep defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the separation and write one row per grid point.
    Sweep(Box<SweepArgs>),
    /// Run built-in verification suites; nonzero exit on any failure.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// List built-in atoms, walls, and the physical constants in use.
    Presets,
}

#[derive(Args)]
struct SweepArgs {
    /// Atom name (preset or defined in the config file).
    #[arg(long)]
    atom: Option<String>,
    /// Wall name (preset or defined in the config file).
    #[arg(long)]
    wall: Option<String>,
    /// Temperature, K.
    #[arg(long, value_name = "K")]
    temp_k: Option<f64>,
    /// Smallest separation, m.
    #[arg(long, value_name = "M")]
    a_min_m: Option<f64>,
    /// Largest separation, m.
    #[arg(long, value_name = "M")]
    a_max_m: Option<f64>,
    /// Number of grid points (>= 2), endpoints included [default: 19].
    #[arg(long)]
    points: Option<usize>,
    /// Grid spacing [default: log].
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
    /// Response channels [default: full].
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Relative truncation tolerance of the Matsubara sum [default: 1e-12].
    #[arg(long)]
    sum_rel_tol: Option<f64>,
    /// Relative tolerance of each term's integral [default: 1e-12].
    #[arg(long)]
    quad_rel_tol: Option<f64>,
    /// Hard cap on the Matsubara index [default: 1000000].
    #[arg(long)]
    l_max: Option<u64>,
    /// Output file.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Output format; defaults to json when --out ends in .json, else csv.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Generic solver vs series vs closed form (ideal metal, static response).
    Oracle,
    /// Zero-temperature and classical limits.
    Limits,
    /// Dilute-wall consistency between the plate and atom-wall solvers.
    Rarefaction {
        /// Run at 300 K (short Matsubara series) instead of 1 K.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    if let Err(err) = init_worker_pool() {
        eprintln!("error: {err:#}");
        return ExitCode::from(1);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Size the worker pool from `CPFORCE_WORKERS` (default: one worker per
/// core). The count only affects scheduling; results are identical for any
/// value.
fn init_worker_pool() -> Result<()> {
    match std::env::var("CPFORCE_WORKERS") {
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .with_context(|| format!("CPFORCE_WORKERS must be a positive integer, got {raw:?}"))?;
            if n == 0 {
                bail!("CPFORCE_WORKERS must be >= 1");
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("initializing the worker pool")
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(err) => Err(err).context("reading CPFORCE_WORKERS"),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = match &cli.config {
        Some(path) => config::load_config(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Sweep(args) => run_sweep(*args, &cfg),
        Command::Verify { suite } => {
            let checks = match suite {
                VerifySuite::Oracle => verify::run_oracle(),
                VerifySuite::Limits => verify::run_limits(),
                VerifySuite::Rarefaction { quick } => verify::run_rarefaction(quick),
            };
            Ok(if verify::print_report(&checks) { 0 } else { 1 })
        }
        Command::Presets => {
            print_presets();
            Ok(0)
        }
    }
}

fn run_sweep(args: SweepArgs, cfg: &ConfigFile) -> Result<u8> {
    let overrides = SweepOverrides {
        atom: args.atom,
        wall: args.wall,
        temp_k: args.temp_k,
        a_min_m: args.a_min_m,
        a_max_m: args.a_max_m,
        points: args.points,
        spacing: args.spacing,
        mode: args.mode,
        sum_rel_tol: args.sum_rel_tol,
        quad_rel_tol: args.quad_rel_tol,
        l_max: args.l_max,
    };
    let spec = config::build_sweep_spec(&overrides, cfg)?;
    let atom = config::resolve_atom(cfg, &spec.atom)?;
    let wall = config::resolve_wall(cfg, &spec.wall)?;

    let outcome = sweep::run_sweep(&spec, &atom, &wall)?;

    let format = args.format.unwrap_or_else(|| {
        if args.out.extension().is_some_and(|e| e == "json") {
            OutputFormat::Json
        } else {
            OutputFormat::Csv
        }
    });
    match format {
        OutputFormat::Csv => emit::write_csv(&args.out, &outcome.rows)?,
        OutputFormat::Json => {
            let doc = SweepDocument::new(spec, &atom, &wall, outcome.rows.clone());
            emit::write_json(&args.out, &doc)?;
        }
    }
    println!(
        "wrote {} rows to {}",
        outcome.rows.len(),
        args.out.display()
    );
    if outcome.num_unconverged > 0 {
        eprintln!(
            "warning: {} of {} points did not converge within l_max; their rows are NaN",
            outcome.num_unconverged,
            outcome.rows.len()
        );
        return Ok(2);
    }
    Ok(0)
}

fn print_presets() {
    println!("Atoms:");
    for name in AtomModel::preset_names() {
        let a = AtomModel::by_name(name).expect("preset name");
        let absorption = if a.omega_a.is_infinite() {
            "frequency-independent".to_string()
        } else {
            format!("{:.4} eV", angular_frequency_to_ev(a.omega_a))
        };
        println!(
            "  {name:<18} alpha0 = {:.4e} cm^3, absorption energy {absorption}, g = {}, J = {}, tau_rel = {:.1e} s",
            a.alpha0, a.lande_g, a.total_j, a.tau_rel
        );
    }
    println!();
    println!("Walls:");
    for name in WallModel::preset_names() {
        let w = WallModel::by_name(name).expect("preset name");
        println!("  {name:<18} {}", describe_wall(&w));
    }
    println!();
    println!("Physical constants (CODATA 2018, Gaussian-CGS):");
    for (name, value, unit) in CODATA_2018.table() {
        println!("  {name:<24} = {value:.10e} {unit}");
    }
    println!();
    println!(
        "Custom atoms/walls: TOML config file with schema_version = 1; \
         [atoms.<name>] takes alpha0_cm3, hbar_omega_a_ev, g, j, tau_rel_s; \
         [walls.<name>] takes eps_model (ideal|plasma|constant), omega_p_ev, eps0, mu0, mu_mode."
    );
}

fn describe_wall(w: &WallModel) -> String {
    let eps = match w.permittivity {
        PermittivityModel::IdealMetal => "ideal metal (perfect reflector)".to_string(),
        PermittivityModel::Plasma { omega_p } => format!(
            "plasma permittivity, plasma energy {:.2} eV",
            angular_frequency_to_ev(omega_p)
        ),
        PermittivityModel::ConstantEps { eps0 } => {
            format!("constant permittivity eps0 = {eps0}")
        }
    };
    let mu = match w.permeability {
        PermeabilityModel::NonMagnetic => String::new(),
        PermeabilityModel::StaticFerromagnet { mu0, mode } => {
            let applied = match mode {
                MuMode::ZeroFrequencyOnly => "zero-frequency term only",
                MuMode::AllFrequencies => "all frequencies",
            };
            format!("; static permeability mu0 = {mu0} ({applied})")
        }
    };
    format!("{eps}{mu}")
}
