use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use awg_core::selfcheck::derivative_self_check;
use awg_core::sweep::{dispersion_table, mtdm_table, thermal_table};
use awg_core::{
    compare_shift, figure_trends, render_manifest, run_figure, run_sweep, solve_athermal_core_width, thermal_scan,
    EffectiveIndexModel, Error as ModelError, FigureId, MaterialId, Scenario, SelfCheckReport, SweepTable,
};

use crate::config::{parse_bracket, parse_grid, AxisConfig, RunConfig, SweepConfig};
use crate::error::CliError;
use crate::{Cli, Command, MaterialChoice};

const DEFAULT_OUT_DIR: &str = "out";
const MANIFEST_FILE: &str = "manifest.toml";

/// Files to write once every computation has succeeded.
#[derive(Default)]
struct Output {
    files: Vec<(String, String)>,
}

impl Output {
    fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    fn add_tables(&mut self, tables: &[SweepTable], gnuplot: bool) {
        let mut entries = Vec::new();
        for t in tables {
            let csv = format!("{}.csv", t.name);
            if gnuplot {
                self.add(format!("{}.gnuplot", t.name), t.gnuplot_script(&csv));
            }
            self.add(csv.clone(), t.to_csv());
            entries.push((csv, t));
        }
        self.add(MANIFEST_FILE, render_manifest(&entries));
    }

    fn write(self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let path = dir.join(name);
            fs::write(&path, contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn scenario(cfg: &RunConfig) -> Scenario {
    Scenario {
        materials: cfg.materials,
        design: cfg.design,
        budget: cfg.budget,
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.global.resolve()?;
    let quiet = cli.global.quiet;
    let mut report = String::new();
    let result = execute(&cfg, cli.command, &mut report);
    // a closed stdout must not abort the run
    let mut stdout = std::io::stdout().lock();
    if !quiet {
        let _ = stdout.write_all(report.as_bytes());
    }
    let out = result?;
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    if !out.files.is_empty() {
        for path in out.write(&dir)? {
            if !quiet {
                let _ = writeln!(stdout, "wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn grid_or(flag: Option<String>, default: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(flag.as_deref().unwrap_or(default))
}

fn self_checks(
    cfg: &RunConfig,
    which: MaterialChoice,
    lambdas: &[f64],
    temps: &[f64],
) -> Result<Vec<SelfCheckReport>, CliError> {
    let ids: &[MaterialId] = match which {
        MaterialChoice::Linbo3 => &[MaterialId::LiNbO3],
        MaterialChoice::Pmma => &[MaterialId::Pmma],
        MaterialChoice::Both => &[MaterialId::LiNbO3, MaterialId::Pmma],
    };
    ids.iter()
        .map(|&id| Ok(derivative_self_check(&cfg.materials, id, lambdas, temps)?))
        .collect()
}

fn execute(cfg: &RunConfig, command: Command, report: &mut String) -> Result<Output, CliError> {
    let sc = scenario(cfg);
    let mut out = Output::default();
    match command {
        Command::Materials { lambda, temperature } => {
            let lambdas = grid_or(lambda, &cfg.grids.lambda)?;
            let temps = grid_or(temperature, &cfg.grids.temperature)?;
            let mut table = SweepTable::new(
                "materials",
                [
                    "lambda_um",
                    "T_C",
                    "n1",
                    "dn1_dlam",
                    "d2n1_dlam2",
                    "dn1_dT",
                    "n2",
                    "dn2_dT",
                ]
                .iter()
                .map(|c| c.to_string())
                .collect(),
            );
            for &l in &lambdas {
                for &t in &temps {
                    let core = cfg.materials.core_sample(l, t)?;
                    let clad = cfg.materials.cladding_sample(l, t)?;
                    table.push_row(vec![
                        l,
                        t,
                        core.n,
                        core.dn_dlambda,
                        core.d2n_dlambda2,
                        core.dn_dt,
                        clad.n,
                        clad.dn_dt,
                    ])?;
                }
            }
            let checks = self_checks(cfg, MaterialChoice::Both, &lambdas, &temps)?;
            for r in &checks {
                report.push_str(&r.to_string());
            }
            if !checks.iter().all(SelfCheckReport::passed) {
                return Err(CliError::SelfCheck);
            }
            out.add("materials.csv", table.to_csv());
        }
        Command::Selfcheck {
            material,
            lambda,
            temperature,
        } => {
            let lambdas = grid_or(lambda, &cfg.grids.lambda)?;
            let temps = grid_or(temperature, &cfg.grids.temperature)?;
            let checks = self_checks(cfg, material, &lambdas, &temps)?;
            for r in &checks {
                report.push_str(&r.to_string());
            }
            if !checks.iter().all(SelfCheckReport::passed) {
                return Err(CliError::SelfCheck);
            }
        }
        Command::Athermal {
            t_grid,
            solve,
            bracket,
            t_eval,
        } => {
            if solve {
                let bracket = parse_bracket(&bracket)?;
                let t = t_eval.unwrap_or(cfg.design.t0);
                let s = solve_athermal_core_width(&cfg.materials, &cfg.design, t, bracket)?;
                let _ = writeln!(report, "athermal core width a* = {} um", s.core_width_a);
                let _ = writeln!(report, "residual dnc/dT + alpha*nc = {:e}", s.residual);
                let _ = writeln!(report, "iterations = {}", s.iterations);
                let _ = writeln!(report, "T = {t} C, bracket = [{}, {}] um", bracket.0, bracket.1);
            } else {
                let temps = grid_or(t_grid, &cfg.grids.thermal)?;
                let table = thermal_table(&sc, &temps)?;
                let response = thermal_scan(&cfg.materials, &cfg.design, &temps)?;
                for w in &response.warnings {
                    eprintln!("warning: {w}");
                }
                report.push_str(&compare_shift(&response)?.to_string());
                out.add("athermal.csv", table.to_csv());
            }
        }
        Command::Dispersion { lambda, temperature } => {
            let mut sc = sc;
            if let Some(t) = temperature {
                sc.budget.temperature = t;
            }
            let lambdas = grid_or(lambda, &cfg.grids.dispersion_lambda)?;
            out.add("dispersion.csv", dispersion_table(&sc, &lambdas)?.to_csv());
        }
        Command::Mtdm { lambda, temperature } => {
            let mut sc = sc;
            if let Some(t) = temperature {
                sc.budget.temperature = t;
            }
            let l = lambda.unwrap_or(cfg.design.lambda0);
            out.add("mtdm.csv", mtdm_table(&sc, l)?.to_csv());
        }
        Command::Figures { ids } => {
            let ids = figure_ids(&ids)?;
            let tables = ids
                .iter()
                .map(|&id| run_figure(&sc, id, &cfg.figures))
                .collect::<Result<Vec<_>, _>>()?;
            for (id, t) in ids.iter().zip(&tables) {
                for check in figure_trends(*id, t, cfg.design.t0) {
                    let _ = writeln!(report, "{check}");
                }
            }
            out.add_tables(&tables, cfg.output.emit_gnuplot);
        }
        Command::Sweep { id, axes, outputs } => {
            let mut spec = cfg.sweep.clone().unwrap_or_default();
            if let Some(id) = id {
                spec.id = id;
            }
            if !axes.is_empty() {
                spec.axes = axes.iter().map(|a| parse_axis(a)).collect::<Result<_, _>>()?;
            }
            if !outputs.is_empty() {
                spec.outputs = outputs;
            }
            let table = run_sweep(&sweep_spec(&spec, sc)?)?;
            let _ = writeln!(report, "sweep `{}`: {} rows", table.name, table.len());
            out.add_tables(&[table], cfg.output.emit_gnuplot);
        }
    }
    Ok(out)
}

fn figure_ids(ids: &[String]) -> Result<Vec<FigureId>, CliError> {
    if ids.iter().any(|s| s == "all") {
        return Ok(FigureId::ALL.to_vec());
    }
    let mut parsed = ids
        .iter()
        .map(|s| s.parse::<FigureId>())
        .collect::<Result<Vec<_>, _>>()?;
    parsed.sort();
    parsed.dedup();
    Ok(parsed)
}

fn parse_axis(s: &str) -> Result<AxisConfig, CliError> {
    let (path, values) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("invalid axis `{s}` (expected path=GRID)")))?;
    Ok(AxisConfig {
        path: path.trim().to_string(),
        values: values.trim().to_string(),
    })
}

fn sweep_spec(cfg: &SweepConfig, base: Scenario) -> Result<awg_core::SweepSpec, CliError> {
    if cfg.id.is_empty() || cfg.id.contains(['/', '\\']) || cfg.id == "manifest" {
        return Err(CliError::Config(format!("invalid sweep id `{}`", cfg.id)));
    }
    cfg.to_spec(base)
}

/// Extra guidance printed after an error.
pub fn hint(e: &CliError) -> Option<String> {
    match e {
        CliError::Model(ModelError::NoBracket { .. }) => Some(format!(
            "the `{}` effective index scales as a^2, so its athermal residual has no root in a; \
             the `{}` model (--nc-model mode) does",
            EffectiveIndexModel::Literal.as_str(),
            EffectiveIndexModel::Mode.as_str()
        )),
        _ => None,
    }
}
