//! `awg`: thermal drift, dispersion and MTDM link-capacity calculations for a
//! LiNbO3/PMMA arrayed waveguide grating.

mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use awg_core::{DerivativeMode, EffectiveIndexModel, IndexMode, YFactor};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "awg", version, about = "Athermal AWG and MTDM link calculator")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_name = "paper|exact")]
    derivative_mode: Option<DerivativeMode>,

    #[arg(long, global = true, value_name = "anchored|material")]
    index_mode: Option<IndexMode>,

    /// Effective-index closed form.
    #[arg(long, global = true, value_name = "literal|mode")]
    nc_model: Option<EffectiveIndexModel>,

    /// Waveguide-dispersion factor.
    #[arg(long, global = true, value_name = "cutoff|auto|constant:<y>")]
    y_factor: Option<YFactor>,

    /// Write a gnuplot script next to each figure or sweep dataset.
    #[arg(long, global = true)]
    emit_gnuplot: bool,

    /// Suppress reports on stdout; errors still go to stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate both material models and run the derivative self-check.
    Materials {
        #[arg(long, value_name = "GRID")]
        lambda: Option<String>,
        #[arg(long, value_name = "GRID")]
        temperature: Option<String>,
    },
    /// Finite-difference check of the analytic material derivatives.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = MaterialChoice::Both)]
        material: MaterialChoice,
        #[arg(long, value_name = "GRID")]
        lambda: Option<String>,
        #[arg(long, value_name = "GRID")]
        temperature: Option<String>,
    },
    /// Thermal drift scan, or solve for the athermal core width.
    Athermal {
        #[arg(long, value_name = "GRID")]
        t_grid: Option<String>,
        /// Solve for the core width that nulls the drift instead of scanning.
        #[arg(long)]
        solve: bool,
        #[arg(long, value_name = "LO:HI", default_value = "0.1:20")]
        bracket: String,
        /// Temperature for `--solve`; the design reference temperature when omitted.
        #[arg(long, value_name = "T")]
        t_eval: Option<f64>,
    },
    /// Dispersion and bit rates across a wavelength grid.
    Dispersion {
        #[arg(long, value_name = "GRID")]
        lambda: Option<String>,
        #[arg(long, value_name = "T")]
        temperature: Option<f64>,
    },
    /// Bit rates versus number of links at one wavelength.
    Mtdm {
        /// Evaluation wavelength, μm; the design center wavelength when omitted.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_name = "T")]
        temperature: Option<f64>,
    },
    /// Figure datasets fig4..fig13, or `all`.
    Figures {
        #[arg(required = true, value_name = "ID")]
        ids: Vec<String>,
    },
    /// Cartesian parameter sweep. Axes and outputs come from the config's
    /// `[sweep]` section unless given here.
    Sweep {
        #[arg(long)]
        id: Option<String>,
        /// `path=GRID`, repeatable; outermost first.
        #[arg(long = "axis", value_name = "PATH=GRID")]
        axes: Vec<String>,
        /// Output quantity, repeatable.
        #[arg(long = "output", value_name = "QUANTITY")]
        outputs: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MaterialChoice {
    Linbo3,
    Pmma,
    Both,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = commands::hint(&e) {
                eprintln!("note: {hint}");
            }
            e.exit_code()
        }
    }
}

impl GlobalOpts {
    fn resolve(&self) -> Result<config::RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => config::RunConfig::load(path)?,
            None => config::RunConfig::default(),
        };
        if let Some(m) = self.derivative_mode {
            cfg.materials.derivative_mode = m;
        }
        if let Some(m) = self.index_mode {
            cfg.design.index_mode = m;
        }
        if let Some(m) = self.nc_model {
            cfg.design.nc_model = m;
        }
        if let Some(y) = self.y_factor {
            cfg.budget.y_factor = y;
        }
        if let Some(out) = &self.out {
            cfg.output.dir = Some(out.clone());
        }
        cfg.output.emit_gnuplot |= self.emit_gnuplot;
        Ok(cfg)
    }
}
