//! Batch front end: parse curve-family and defining-function documents, run
//! the pipeline stages, emit deterministic reports and exports with exit
//! codes suitable for CI.
//!
//! Exit codes: 0 success, 1 check failed, 2 parse/input failure, 3 numeric
//! failure, 4 non-positive chain, 5 obstructed extension.

mod stages;

use clap::{Args, Parser, Subcommand};
use plateau_core::config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plateau", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Run configuration JSON; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports and exports.
    #[arg(long, global = true, default_value = "plateau_out")]
    out: PathBuf,

    /// Contour quadrature node count (power of two).
    #[arg(long, global = true)]
    quadrature_n: Option<usize>,

    /// Power-sum depth; default 2 * max winding + 2.
    #[arg(long, global = true)]
    kmax: Option<usize>,

    /// Proceed past a failed moment gate.
    #[arg(long, global = true)]
    force: bool,

    #[arg(long = "tol-moment", global = true)]
    tol_moment: Option<f64>,
    #[arg(long = "tol-newton", global = true)]
    tol_newton: Option<f64>,
    #[arg(long = "tol-stokes", global = true)]
    tol_stokes: Option<f64>,
    #[arg(long = "tol-dbar", global = true)]
    tol_dbar: Option<f64>,
    #[arg(long = "tol-green-moment", global = true)]
    tol_green_moment: Option<f64>,
    #[arg(long = "tol-jump", global = true)]
    tol_jump: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Moment residuals and family integrals per parameter.
    CheckMoments {
        input: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Reconstruct a single slice and export it.
    Reconstruct {
        input: PathBuf,
        /// Index into the tGrid.
        #[arg(long, default_value_t = 0)]
        t_index: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Reconstruct every slice and export the family directory.
    Sweep {
        input: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Green-function self-tests on a defining curve.
    Green {
        /// Defining function JSON.
        #[arg(long)]
        f: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Chart center "re,im".
        #[arg(long, default_value = "0,0")]
        center: String,
        #[arg(long, default_value_t = 1.1)]
        radius: f64,
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Extend boundary data harmonically over a sweep output.
    Extend {
        /// Sweep output directory.
        sweep_dir: PathBuf,
        #[arg(long)]
        f: PathBuf,
        /// Boundary data JSON (u, u' samples per slice curve).
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the pipeline checks without exports.
    Validate {
        input: PathBuf,
        /// Comma-separated stage subset: moments,reconstruct,continuity.
        #[arg(long)]
        stages: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn load_config(common: &CommonOpts) -> Result<RunConfig, stages::Failure> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                stages::Failure::input(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                stages::Failure::input(format!(
                    "config JSON invalid at line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ))
            })?
        }
        None => RunConfig::default(),
    };
    if let Some(n) = common.quadrature_n {
        cfg.quadrature_n = n;
    }
    if common.kmax.is_some() {
        cfg.kmax = common.kmax;
    }
    if let Some(v) = common.tol_moment {
        cfg.tolerances.moment = v;
    }
    if let Some(v) = common.tol_newton {
        cfg.tolerances.newton = v;
    }
    if let Some(v) = common.tol_stokes {
        cfg.tolerances.stokes = v;
    }
    if let Some(v) = common.tol_dbar {
        cfg.tolerances.dbar = v;
    }
    if let Some(v) = common.tol_green_moment {
        cfg.tolerances.green_moment = v;
    }
    if let Some(v) = common.tol_jump {
        cfg.tolerances.jump = v;
    }
    cfg.validate()
        .map_err(|e| stages::Failure::input(e.to_string()))?;
    Ok(cfg)
}

fn init_threads() {
    if let Ok(v) = std::env::var("PLATEAU_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::CheckMoments { input, common } => load_config(&common)
            .and_then(|cfg| stages::check_moments(&input, &common.out, &cfg)),
        Command::Reconstruct {
            input,
            t_index,
            common,
        } => load_config(&common).and_then(|cfg| {
            stages::reconstruct_one(&input, t_index, &common.out, &cfg, common.force)
        }),
        Command::Sweep { input, common } => load_config(&common)
            .and_then(|cfg| stages::sweep(&input, &common.out, &cfg, common.force)),
        Command::Green {
            f,
            t,
            center,
            radius,
            nodes,
            common,
        } => load_config(&common).and_then(|cfg| {
            stages::green_selftest(&f, t, &center, radius, nodes, &common.out, &cfg)
        }),
        Command::Extend {
            sweep_dir,
            f,
            data,
            common,
        } => load_config(&common)
            .and_then(|cfg| stages::extend(&sweep_dir, &f, &data, &common.out, &cfg)),
        Command::Validate {
            input,
            stages: stage_sel,
            common,
        } => load_config(&common).and_then(|cfg| {
            stages::validate(&input, stage_sel.as_deref(), &cfg, common.force)
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
