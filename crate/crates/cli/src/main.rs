//! Experiment orchestration for the zetalab laboratory.
//!
//! All commands are deterministic given the configuration and calibration
//! manifest; validation and capacity failures exit with status 2 and a
//! machine-readable error JSON on stdout.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use config::ExperimentConfig;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "zetalab", version, about = "zeta zero-density / large-value laboratory")]
struct Cli {
    /// JSON config file; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    #[arg(long, global = true)]
    t_horizon: Option<f64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    nu: Option<f64>,
    #[arg(long, global = true)]
    sigma: Option<f64>,
    #[arg(long, global = true)]
    eta: Option<f64>,
    #[arg(long, global = true)]
    u_scale: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Zero-table file (plain text, ascending ordinates)
    #[arg(long, global = true)]
    zeros: Option<PathBuf>,
    /// Calibration manifest file (defaults to the frozen constants)
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads (1 = fully sequential output assembly)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the deterministic calibration and write the manifest
    Calibrate {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure R_{sigma,eta}(T) on the configured grid
    ScanR,
    /// Measure the theorem left-hand side on the configured grid
    ScanTheoremLhs,
    /// Locate critical-line zeros up to a horizon
    FindZeros {
        #[arg(long, default_value_t = 500.0)]
        t_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one lemma verification suite
    VerifyLemma { id: String },
    /// Run the zero-detecting pipeline over [U, 2U]
    Detect,
    /// Exponent calculus for a density profile
    Exponents {
        #[arg(long, default_value = "DH")]
        profile: String,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long)]
        profile_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        nu: f64,
        #[arg(long, default_value_t = 0.001)]
        eps: f64,
    },
    /// Aggregate artifacts in a directory into tables and plots
    Report {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = cli.t_horizon {
        cfg.t_horizon = v;
    }
    if let Some(v) = cli.dt {
        cfg.dt = v;
    }
    if let Some(v) = cli.eps {
        cfg.eps = v;
    }
    if let Some(v) = cli.nu {
        cfg.nu = v;
    }
    if let Some(v) = cli.sigma {
        cfg.sigma = v;
    }
    if let Some(v) = cli.eta {
        cfg.eta = v;
    }
    if let Some(v) = cli.u_scale {
        cfg.u_scale = v;
    }
    if let Some(v) = cli.beta {
        cfg.beta = v;
    }
    if let Some(v) = &cli.zeros {
        cfg.zeros_path = Some(v.clone());
    }
    if let Some(v) = &cli.manifest {
        cfg.manifest_path = Some(v.clone());
    }
    if let Some(v) = cli.workers {
        cfg.workers = v;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> commands::CmdResult {
    let cfg = build_config(cli)?;
    if cfg.workers >= 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global()
            .ok();
    }
    let ctx = commands::Ctx::new(cfg, cli.out_dir.clone())?;
    match &cli.cmd {
        Cmd::Calibrate { out } => commands::calibrate(&ctx, out.clone()),
        Cmd::ScanR => commands::scan_r(&ctx),
        Cmd::ScanTheoremLhs => commands::scan_theorem_lhs(&ctx),
        Cmd::FindZeros { t_max, out } => commands::find_zeros_cmd(&ctx, *t_max, out.clone()),
        Cmd::VerifyLemma { id } => commands::verify_lemma(&ctx, id),
        Cmd::Detect => commands::detect(&ctx),
        Cmd::Exponents {
            profile,
            delta,
            profile_file,
            nu,
            eps,
        } => commands::exponents_cmd(&ctx, profile, *delta, profile_file.clone(), *nu, *eps),
        Cmd::Report { dir } => commands::report(&ctx, dir.clone()),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            let err = serde_json::json!({ "error": message });
            println!("{err}");
            std::process::exit(2);
        }
    }
}
