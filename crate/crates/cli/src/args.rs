use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "forcebench",
    version,
    about = "Load-independent benchmarking metrics for force controllers"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Passivity margin for the PII interval.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Lowest analysis frequency [rad/s].
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub grid_min: f64,
    /// Highest analysis frequency [rad/s].
    #[arg(long, global = true, default_value_t = 1e4)]
    pub grid_max: f64,
    /// Number of log-spaced analysis frequencies.
    #[arg(
        long,
        global = true,
        env = "FORCEBENCH_GRID_POINTS",
        default_value_t = 2000
    )]
    pub grid_points: usize,
    /// Output format (default depends on the command).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Band limit for LCS instead of the bandwidth of Z_b [rad/s].
    #[arg(long, global = true, value_name = "RAD_S")]
    pub omega_b: Option<f64>,
    /// Treat inputs as models or data regardless of extension.
    #[arg(long, global = true, value_enum)]
    pub input_format: Option<InputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Model JSON (name, units, num, den).
    Model,
    /// Frequency-response CSV.
    Data,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full metric report for one controller.
    Metrics {
        /// Blocked transfer function (model JSON or FRD CSV).
        #[arg(long)]
        zb: PathBuf,
        /// Transparency transfer function (model JSON or FRD CSV).
        #[arg(long)]
        zt: PathBuf,
        /// Controller name in the report (defaults to the Z_t file stem).
        #[arg(long)]
        name: Option<String>,
    },
    /// Side-by-side table for two or more controllers.
    Compare {
        /// NAME=ZB_PATH,ZT_PATH; repeat per controller.
        #[arg(long = "controller", value_name = "NAME=ZB,ZT")]
        controllers: Vec<String>,
        /// Previously computed report JSON; repeat per controller.
        #[arg(long = "report", value_name = "PATH")]
        reports: Vec<PathBuf>,
    },
    /// Couple a controller to a load and check stability.
    Coupled {
        #[arg(long)]
        zb: PathBuf,
        #[arg(long)]
        zt: PathBuf,
        /// Load JSON (mass_kg, damping_Ns_per_m, stiffness_N_per_m) or an
        /// admittance model JSON.
        #[arg(long)]
        load: PathBuf,
        /// Step response of T_y as CSV, written when the coupled system is stable.
        #[arg(long, value_name = "PATH")]
        step_out: Option<PathBuf>,
    },
    /// Fit a rational model to frequency-response data.
    Fit {
        /// FRD CSV.
        #[arg(long)]
        frd: PathBuf,
        #[arg(long)]
        num_order: usize,
        #[arg(long)]
        den_order: usize,
        #[arg(long, default_value_t = 5)]
        iterations: usize,
        /// Name stored in the model file.
        #[arg(long)]
        name: Option<String>,
    },
    /// Bode data (omega_rad_s, mag_db, phase_deg) of a model or FRD.
    Bode { input: PathBuf },
}
