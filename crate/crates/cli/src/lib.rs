//! Command-line front end: geometry and potential grids, band sweeps, gap
//! scans and the verification suite.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::Failure;
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "helitube", version, about = "Quantum particle on a helical tube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Surface points, metric factor and curvatures on the unit cell
    Geometry,
    /// Curvature, kinetic and effective potentials on the unit cell
    Potential,
    /// Band energies along a k-path from the two-band model and both oracles
    Bands,
    /// Zone-boundary gap over an epsilon sweep
    GapScan,
    /// Straight-tube oracle against the closed-form spectrum
    CylinderCheck,
    /// Run the invariant suite
    Verify,
}

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true)]
    pub rho0: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s0: Option<f64>,
    /// Grid size NxM (n_s x n_phi)
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub harmonics: Option<usize>,
    /// k_s path start:end:count
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kpath: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub transverse_n: Option<f64>,
    /// Comma-separated epsilon values
    #[arg(long, global = true)]
    pub eps_sweep: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// natural | physical:<mu in kg>
    #[arg(long, global = true)]
    pub units: Option<String>,
    /// published | consistent
    #[arg(long, global = true)]
    pub perturbation: Option<String>,
    #[arg(long, global = true, hide = true, allow_hyphen_values = true)]
    pub vkin_offset: Option<f64>,
}

impl Flags {
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let set = |cfg: &mut RunConfig, key: &str, v: Option<String>| match v {
            Some(v) => cfg.set(key, &v),
            None => Ok(()),
        };
        set(&mut cfg, "kappa", self.kappa.map(|v| v.to_string()))?;
        set(&mut cfg, "tau", self.tau.map(|v| v.to_string()))?;
        set(&mut cfg, "rho0", self.rho0.map(|v| v.to_string()))?;
        set(&mut cfg, "s0", self.s0.map(|v| v.to_string()))?;
        set(&mut cfg, "grid", self.grid.clone())?;
        set(&mut cfg, "harmonics", self.harmonics.map(|v| v.to_string()))?;
        set(&mut cfg, "kpath", self.kpath.clone())?;
        set(&mut cfg, "transverse_n", self.transverse_n.map(|v| v.to_string()))?;
        set(&mut cfg, "eps_sweep", self.eps_sweep.clone())?;
        set(&mut cfg, "units", self.units.clone())?;
        set(&mut cfg, "perturbation", self.perturbation.clone())?;
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(v) = self.vkin_offset {
            cfg.vkin_offset = v;
        }
        Ok(cfg)
    }
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("HELITUBE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| format!("HELITUBE_THREADS: cannot parse '{v}'"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("HELITUBE_THREADS: {e}"))?;
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = (|| {
        configure_threads().map_err(Failure::Config)?;
        let cfg = cli.flags.resolve().map_err(Failure::Config)?;
        let spec = cfg.validate().map_err(Failure::Config)?;
        match cli.command {
            Command::Geometry => commands::geometry_cmd(&cfg, &spec),
            Command::Potential => commands::potential_cmd(&cfg, &spec),
            Command::Bands => commands::bands_cmd(&cfg, &spec),
            Command::GapScan => commands::gap_scan_cmd(&cfg, &spec),
            Command::CylinderCheck => commands::cylinder_check_cmd(&cfg, &spec),
            Command::Verify => commands::verify_cmd(&cfg, &spec),
        }
    })();
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("helitube: {}", f.message());
            f.exit_code()
        }
    }
}
