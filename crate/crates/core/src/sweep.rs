//! Figure dataset reproduction and Cartesian parameter sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::link::{dispersion_sample, relative_index_difference, LinkBudget, MAX_LINKS};
use crate::materials::Materials;
use crate::table::{legend_of, SweepTable};
use crate::waveguide::{self, resolve_indices, thermal_scan, WaveguideDesign};

/// Upper bound on the number of grid points a single sweep may evaluate.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Everything a point evaluation depends on.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub materials: Materials,
    pub design: WaveguideDesign,
    pub budget: LinkBudget,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.design.validate()?;
        self.budget.validate()
    }

    /// Resolved parameter set, each value in round-trip precision.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        let ln = &self.materials.linbo3;
        for (k, v) in [
            ("a1", ln.a1),
            ("a2", ln.a2),
            ("a3", ln.a3),
            ("a4", ln.a4),
            ("a5", ln.a5),
            ("a6", ln.a6),
            ("a7", ln.a7),
            ("a8", ln.a8),
            ("a9", ln.a9),
            ("a10", ln.a10),
            ("t0", ln.t0),
        ] {
            put(&format!("materials.linbo3.{k}"), v.to_string());
        }
        let pm = &self.materials.pmma;
        for (k, v) in [
            ("c1", pm.c1),
            ("c2_base", pm.c2_base),
            ("c3", pm.c3),
            ("c4_base", pm.c4_base),
            ("c5", pm.c5),
            ("c6", pm.c6),
            ("t0", pm.t0),
        ] {
            put(&format!("materials.pmma.{k}"), v.to_string());
        }
        put(
            "materials.derivative_mode",
            self.materials.derivative_mode.as_str().into(),
        );
        let d = &self.design;
        put("design.core_width_a", d.core_width_a.to_string());
        put("design.n1_design", d.n1_design.to_string());
        put("design.n2_design", d.n2_design.to_string());
        put("design.alpha_sub", d.alpha_sub.to_string());
        put("design.lambda0", d.lambda0.to_string());
        put("design.t0", d.t0.to_string());
        put("design.index_mode", d.index_mode.as_str().into());
        put("design.nc_model", d.nc_model.as_str().into());
        let b = &self.budget;
        put("budget.fiber_length_km", b.fiber_length_km.to_string());
        put("budget.num_links", b.num_links.to_string());
        put("budget.num_channels", b.num_channels.to_string());
        put("budget.band", format!("{},{}", b.band[0], b.band[1]));
        put("budget.temperature", b.temperature.to_string());
        put("budget.y_factor", b.y_factor.to_string());
        put("budget.linewidth", b.linewidth.to_string());
        m
    }
}

/// A sweepable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamPath {
    CoreWidth,
    N1Design,
    N2Design,
    AlphaSub,
    Lambda0,
    DesignT0,
    FiberLength,
    NumLinks,
    NumChannels,
    Temperature,
    /// Evaluation wavelength for index and dispersion quantities; defaults to λ0.
    Lambda,
}

impl ParamPath {
    pub const ALL: [ParamPath; 11] = [
        ParamPath::CoreWidth,
        ParamPath::N1Design,
        ParamPath::N2Design,
        ParamPath::AlphaSub,
        ParamPath::Lambda0,
        ParamPath::DesignT0,
        ParamPath::FiberLength,
        ParamPath::NumLinks,
        ParamPath::NumChannels,
        ParamPath::Temperature,
        ParamPath::Lambda,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamPath::CoreWidth => "design.core_width_a",
            ParamPath::N1Design => "design.n1_design",
            ParamPath::N2Design => "design.n2_design",
            ParamPath::AlphaSub => "design.alpha_sub",
            ParamPath::Lambda0 => "design.lambda0",
            ParamPath::DesignT0 => "design.t0",
            ParamPath::FiberLength => "budget.fiber_length_km",
            ParamPath::NumLinks => "budget.num_links",
            ParamPath::NumChannels => "budget.num_channels",
            ParamPath::Temperature => "budget.temperature",
            ParamPath::Lambda => "lambda",
        }
    }
}

impl FromStr for ParamPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamPath::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown parameter path `{s}`")))
    }
}

/// An output quantity a sweep can tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    N1,
    N2,
    DeltaN,
    Nc,
    DncDt,
    LambdaC,
    DeltaLambda,
    AthermalResidual,
    Dm,
    Dw,
    Dt,
    DeltaTau,
    Brm,
    BrLink,
}

impl Quantity {
    pub const ALL: [Quantity; 14] = [
        Quantity::N1,
        Quantity::N2,
        Quantity::DeltaN,
        Quantity::Nc,
        Quantity::DncDt,
        Quantity::LambdaC,
        Quantity::DeltaLambda,
        Quantity::AthermalResidual,
        Quantity::Dm,
        Quantity::Dw,
        Quantity::Dt,
        Quantity::DeltaTau,
        Quantity::Brm,
        Quantity::BrLink,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::N1 => "n1",
            Quantity::N2 => "n2",
            Quantity::DeltaN => "delta_n",
            Quantity::Nc => "n_c",
            Quantity::DncDt => "dnc_dT",
            Quantity::LambdaC => "lambda_c_um",
            Quantity::DeltaLambda => "delta_lambda_nm",
            Quantity::AthermalResidual => "athermal_residual",
            Quantity::Dm => "Dm",
            Quantity::Dw => "Dw",
            Quantity::Dt => "Dt",
            Quantity::DeltaTau => "delta_tau_ns",
            Quantity::Brm => "Brm_Gbps",
            Quantity::BrLink => "BrLink_Gbps",
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown output quantity `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub path: ParamPath,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario_id: String,
    pub base: Scenario,
    /// Outermost axis first; the last axis varies fastest.
    pub axes: Vec<Axis>,
    pub outputs: Vec<Quantity>,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    scenario: Scenario,
    lambda: f64,
}

fn to_count(path: ParamPath, v: f64) -> Result<u32> {
    if v.fract() != 0.0 || v < 0.0 || v > f64::from(u32::MAX) {
        return Err(Error::Validation(format!(
            "{} needs a whole number (got {v})",
            path.as_str()
        )));
    }
    Ok(v as u32)
}

impl Point {
    fn set(&mut self, path: ParamPath, v: f64) -> Result<()> {
        let s = &mut self.scenario;
        match path {
            ParamPath::CoreWidth => s.design.core_width_a = v,
            ParamPath::N1Design => s.design.n1_design = v,
            ParamPath::N2Design => s.design.n2_design = v,
            ParamPath::AlphaSub => s.design.alpha_sub = v,
            ParamPath::Lambda0 => s.design.lambda0 = v,
            ParamPath::DesignT0 => s.design.t0 = v,
            ParamPath::FiberLength => s.budget.fiber_length_km = v,
            ParamPath::NumLinks => s.budget.num_links = to_count(path, v)?,
            ParamPath::NumChannels => s.budget.num_channels = to_count(path, v)?,
            ParamPath::Temperature => s.budget.temperature = v,
            ParamPath::Lambda => self.lambda = v,
        }
        Ok(())
    }

    fn eval(&self, q: Quantity) -> Result<f64> {
        let Scenario {
            materials,
            design,
            budget,
        } = &self.scenario;
        let t = budget.temperature;
        match q {
            Quantity::N1 => Ok(resolve_indices(materials, design, self.lambda, t)?.n1),
            Quantity::N2 => Ok(resolve_indices(materials, design, self.lambda, t)?.n2),
            Quantity::DeltaN => {
                let g = resolve_indices(materials, design, self.lambda, t)?;
                relative_index_difference(g.n1, g.n2)
            }
            Quantity::Nc => waveguide::effective_index(materials, design, t),
            Quantity::DncDt => waveguide::dnc_dt(materials, design, t),
            Quantity::LambdaC => waveguide::center_wavelength(materials, design, t),
            Quantity::DeltaLambda => waveguide::wavelength_shift(materials, design, t),
            Quantity::AthermalResidual => waveguide::athermal_residual(materials, design, t),
            Quantity::Dm | Quantity::Dw | Quantity::Dt | Quantity::DeltaTau | Quantity::Brm | Quantity::BrLink => {
                let s = dispersion_sample(materials, design, budget, self.lambda)?;
                Ok(match q {
                    Quantity::Dm => s.dm,
                    Quantity::Dw => s.dw,
                    Quantity::Dt => s.dt,
                    Quantity::DeltaTau => s.delta_tau_ns,
                    Quantity::Brm => s.brm_gbps,
                    _ => s.brlink_gbps,
                })
            }
        }
    }
}

fn grid_size(axes: &[Axis]) -> Result<usize> {
    axes.iter().try_fold(1usize, |acc, a| {
        acc.checked_mul(a.values.len())
            .filter(|&n| n <= MAX_GRID_POINTS)
            .ok_or_else(|| Error::Validation(format!("sweep grid exceeds {MAX_GRID_POINTS} points")))
    })
}

/// Evaluates `spec.outputs` over the Cartesian product of `spec.axes`.
/// Rows are ordered with the first axis outermost.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.outputs.is_empty() {
        return Err(Error::Validation("sweep requests no outputs".into()));
    }
    for (i, a) in spec.axes.iter().enumerate() {
        if a.values.is_empty() {
            return Err(Error::Validation(format!("axis `{}` has no values", a.path.as_str())));
        }
        if spec.axes[..i].iter().any(|b| b.path == a.path) {
            return Err(Error::Validation(format!("axis `{}` declared twice", a.path.as_str())));
        }
    }
    let n = grid_size(&spec.axes)?;
    let base = Point {
        scenario: spec.base,
        lambda: spec.base.design.lambda0,
    };

    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|flat| {
            let mut p = base;
            let mut coords = vec![0.0; spec.axes.len()];
            let mut rem = flat;
            for (k, axis) in spec.axes.iter().enumerate().rev() {
                let v = axis.values[rem % axis.values.len()];
                rem /= axis.values.len();
                coords[k] = v;
                p.set(axis.path, v)?;
            }
            p.scenario.validate()?;
            let mut row = coords;
            for &q in &spec.outputs {
                row.push(p.eval(q)?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let columns = spec
        .axes
        .iter()
        .map(|a| a.path.as_str().to_string())
        .chain(spec.outputs.iter().map(|q| q.as_str().to_string()))
        .collect();
    let mut table = SweepTable::new(spec.scenario_id.clone(), columns);
    table.rows = rows;
    table.metadata = spec.base.snapshot();
    for a in &spec.axes {
        let vals: Vec<String> = a.values.iter().map(f64::to_string).collect();
        table
            .metadata
            .insert(format!("axis.{}", a.path.as_str()), vals.join(","));
    }
    Ok(table)
}

/// The ten reproducible figure datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
    Fig13,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
        FigureId::Fig11,
        FigureId::Fig12,
        FigureId::Fig13,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
            FigureId::Fig11 => "fig11",
            FigureId::Fig12 => "fig12",
            FigureId::Fig13 => "fig13",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FigureId::Fig4 => "thermo-optic rate dnc/dT versus temperature",
            FigureId::Fig5 => "center-wavelength shift versus temperature per core index",
            FigureId::Fig6 => "center-wavelength shift versus temperature per cladding index",
            FigureId::Fig7 => "center-wavelength shift versus temperature per core width",
            FigureId::Fig8 => "total dispersion versus wavelength per index contrast",
            FigureId::Fig9 => "MTDM bit rate per channel versus wavelength per index contrast",
            FigureId::Fig10 => "MTDM bit rate per channel versus link count per index contrast",
            FigureId::Fig11 => "MTDM bit rate per link versus link count per index contrast",
            FigureId::Fig12 => "MTDM bit rate per channel versus link count per temperature",
            FigureId::Fig13 => "MTDM bit rate per link versus link count per temperature",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Legend values and grids behind the figure datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FigureOverrides {
    /// Core indices for the fig5 legend.
    pub n1_values: Vec<f64>,
    /// Cladding indices for the fig6 legend.
    pub n2_values: Vec<f64>,
    /// Core widths (μm) for the fig7 legend.
    pub a_values: Vec<f64>,
    /// Cladding indices realizing the index-contrast legends of fig8 to fig11.
    pub contrast_n2_values: Vec<f64>,
    /// Temperatures (°C) for the fig12 and fig13 legend.
    pub temperatures: Vec<f64>,
    pub t_range: [f64; 2],
    pub t_step: f64,
    pub lambda_range: [f64; 2],
    pub lambda_step: f64,
    /// Evaluation wavelength for fig10 to fig13, μm; the design's λ0 when unset.
    pub link_lambda: Option<f64>,
}

impl Default for FigureOverrides {
    fn default() -> Self {
        Self {
            n1_values: vec![2.20, 2.33, 2.46],
            n2_values: vec![1.45, 1.52, 1.59],
            a_values: vec![3.0, 5.0, 7.0],
            contrast_n2_values: vec![1.45, 1.52, 1.59],
            temperatures: vec![27.0, 45.0, 70.0],
            t_range: [20.0, 70.0],
            t_step: 1.0,
            lambda_range: [1.0, 1.64],
            lambda_step: 0.01,
            link_lambda: None,
        }
    }
}

/// `start, start + step, ...` up to `stop` inclusive (within half a step).
pub fn stepped_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::Validation(format!("invalid grid {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > MAX_GRID_POINTS {
        return Err(Error::Validation(format!("grid {start}:{stop}:{step} is too large")));
    }
    Ok((0..n).map(|i| start + step * i as f64).collect())
}

impl FigureOverrides {
    fn temperatures_grid(&self) -> Result<Vec<f64>> {
        stepped_grid(self.t_range[0], self.t_range[1], self.t_step)
    }

    fn lambda_grid(&self) -> Result<Vec<f64>> {
        stepped_grid(self.lambda_range[0], self.lambda_range[1], self.lambda_step)
    }

    pub fn snapshot(&self) -> BTreeMap<String, String> {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut m = BTreeMap::new();
        m.insert("figure.n1_values".into(), join(&self.n1_values));
        m.insert("figure.n2_values".into(), join(&self.n2_values));
        m.insert("figure.a_values".into(), join(&self.a_values));
        m.insert("figure.contrast_n2_values".into(), join(&self.contrast_n2_values));
        m.insert("figure.temperatures".into(), join(&self.temperatures));
        m.insert("figure.t_range".into(), join(&self.t_range));
        m.insert("figure.t_step".into(), self.t_step.to_string());
        m.insert("figure.lambda_range".into(), join(&self.lambda_range));
        m.insert("figure.lambda_step".into(), self.lambda_step.to_string());
        if let Some(l) = self.link_lambda {
            m.insert("figure.link_lambda".into(), l.to_string());
        }
        m
    }
}

fn legend(quantity: &str, key: &str, value: f64) -> String {
    format!("{quantity}@{key}={}", format_sig(value))
}

fn shift_columns(
    scenario: &Scenario,
    temps: &[f64],
    variants: &[(String, WaveguideDesign)],
    table: &mut SweepTable,
) -> Result<()> {
    let scans = variants
        .iter()
        .map(|(_, d)| thermal_scan(&scenario.materials, d, temps))
        .collect::<Result<Vec<_>>>()?;
    for (i, &t) in temps.iter().enumerate() {
        let mut row = vec![t];
        row.extend(scans.iter().map(|s| s.delta_lambda[i]));
        table.push_row(row)?;
    }
    Ok(())
}

/// Builds the dataset for one figure.
pub fn run_figure(scenario: &Scenario, id: FigureId, overrides: &FigureOverrides) -> Result<SweepTable> {
    scenario.validate()?;
    let base = scenario.design;
    let mats = &scenario.materials;
    let name = id.as_str();
    let link_lambda = overrides.link_lambda.unwrap_or(base.lambda0);

    let contrast_designs = || -> Result<Vec<(f64, WaveguideDesign)>> {
        overrides
            .contrast_n2_values
            .iter()
            .map(|&n2| {
                let d = WaveguideDesign { n2_design: n2, ..base };
                d.validate()?;
                Ok((relative_index_difference(d.n1_design, n2)?, d))
            })
            .collect()
    };
    let non_empty = |what: &str, v: &[f64]| {
        if v.is_empty() {
            Err(Error::Validation(format!("{name}: no {what} legend values")))
        } else {
            Ok(())
        }
    };

    let mut table = match id {
        FigureId::Fig4 => {
            let mut t = SweepTable::new(name, vec!["T_C".into(), "dnc_dT".into()]);
            let scan = thermal_scan(mats, &base, &overrides.temperatures_grid()?)?;
            for (temp, rate) in scan.temperatures.iter().zip(&scan.dnc_dt) {
                t.push_row(vec![*temp, *rate])?;
            }
            t
        }
        FigureId::Fig5 | FigureId::Fig6 | FigureId::Fig7 => {
            let (key, values): (&str, &[f64]) = match id {
                FigureId::Fig5 => ("n1", &overrides.n1_values),
                FigureId::Fig6 => ("n2", &overrides.n2_values),
                _ => ("a", &overrides.a_values),
            };
            non_empty(key, values)?;
            let variants = values
                .iter()
                .map(|&v| {
                    let d = match id {
                        FigureId::Fig5 => WaveguideDesign { n1_design: v, ..base },
                        FigureId::Fig6 => WaveguideDesign { n2_design: v, ..base },
                        _ => WaveguideDesign {
                            core_width_a: v,
                            ..base
                        },
                    };
                    d.validate()?;
                    Ok((legend("delta_lambda_nm", key, v), d))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut cols = vec!["T_C".to_string()];
            cols.extend(variants.iter().map(|(c, _)| c.clone()));
            let mut t = SweepTable::new(name, cols);
            shift_columns(scenario, &overrides.temperatures_grid()?, &variants, &mut t)?;
            t
        }
        FigureId::Fig8 | FigureId::Fig9 => {
            non_empty("contrast", &overrides.contrast_n2_values)?;
            let designs = contrast_designs()?;
            let q = if id == FigureId::Fig8 { "Dt" } else { "Brm_Gbps" };
            let mut cols = vec!["lambda_um".to_string()];
            cols.extend(designs.iter().map(|(dn, _)| legend(q, "dn", *dn)));
            let mut t = SweepTable::new(name, cols);
            for l in overrides.lambda_grid()? {
                let mut row = vec![l];
                for (_, d) in &designs {
                    let s = dispersion_sample(mats, d, &scenario.budget, l)?;
                    row.push(if id == FigureId::Fig8 { s.dt } else { s.brm_gbps });
                }
                t.push_row(row)?;
            }
            t
        }
        FigureId::Fig10 | FigureId::Fig11 | FigureId::Fig12 | FigureId::Fig13 => {
            let per_link = matches!(id, FigureId::Fig11 | FigureId::Fig13);
            let q = if per_link { "BrLink_Gbps" } else { "Brm_Gbps" };
            let variants: Vec<(String, WaveguideDesign, f64)> = if matches!(id, FigureId::Fig10 | FigureId::Fig11) {
                non_empty("contrast", &overrides.contrast_n2_values)?;
                contrast_designs()?
                    .into_iter()
                    .map(|(dn, d)| (legend(q, "dn", dn), d, scenario.budget.temperature))
                    .collect()
            } else {
                non_empty("temperature", &overrides.temperatures)?;
                overrides
                    .temperatures
                    .iter()
                    .map(|&temp| (legend(q, "T", temp), base, temp))
                    .collect()
            };
            let mut cols = vec!["NL".to_string()];
            cols.extend(variants.iter().map(|(c, _, _)| c.clone()));
            let mut t = SweepTable::new(name, cols);
            for nl in 1..=MAX_LINKS {
                let mut row = vec![f64::from(nl)];
                for (_, d, temp) in &variants {
                    let budget = LinkBudget {
                        num_links: nl,
                        temperature: *temp,
                        ..scenario.budget
                    };
                    let s = dispersion_sample(mats, d, &budget, link_lambda)?;
                    row.push(if per_link { s.brlink_gbps } else { s.brm_gbps });
                }
                t.push_row(row)?;
            }
            t
        }
    };

    table.metadata = scenario.snapshot();
    table.metadata.extend(overrides.snapshot());
    table.metadata.insert("figure.id".into(), name.into());
    table
        .metadata
        .insert("figure.description".into(), id.description().into());
    if matches!(
        id,
        FigureId::Fig10 | FigureId::Fig11 | FigureId::Fig12 | FigureId::Fig13
    ) {
        table
            .metadata
            .insert("figure.eval_lambda".into(), link_lambda.to_string());
    }
    Ok(table)
}

const DISPERSION_COLUMNS: [&str; 10] = [
    "lambda_um",
    "Dm",
    "Dw",
    "Dt",
    "delta_tau_ns",
    "Brm_Gbps",
    "BrLink_Gbps",
    "NL",
    "Nch",
    "T_C",
];

fn dispersion_row(s: &crate::link::DispersionSample, budget: &LinkBudget) -> Vec<f64> {
    vec![
        s.lambda,
        s.dm,
        s.dw,
        s.dt,
        s.delta_tau_ns,
        s.brm_gbps,
        s.brlink_gbps,
        f64::from(budget.num_links),
        f64::from(budget.num_channels),
        budget.temperature,
    ]
}

/// Thermal response of the scenario's design as a table
/// (T_C, n_c, dnc_dT, lambda_c_um, delta_lambda_nm).
pub fn thermal_table(scenario: &Scenario, temperatures: &[f64]) -> Result<SweepTable> {
    scenario.design.validate()?;
    let r = thermal_scan(&scenario.materials, &scenario.design, temperatures)?;
    let cols = ["T_C", "n_c", "dnc_dT", "lambda_c_um", "delta_lambda_nm"];
    let mut t = SweepTable::new("athermal", cols.iter().map(|c| c.to_string()).collect());
    for i in 0..r.len() {
        t.push_row(vec![
            r.temperatures[i],
            r.n_c[i],
            r.dnc_dt[i],
            r.lambda_c[i],
            r.delta_lambda[i],
        ])?;
    }
    t.metadata = scenario.snapshot();
    for (i, w) in r.warnings.iter().enumerate() {
        t.metadata.insert(format!("warning.{i:03}"), w.clone());
    }
    Ok(t)
}

/// Link quantities across a wavelength grid at the budget's N_L and T.
pub fn dispersion_table(scenario: &Scenario, lambdas: &[f64]) -> Result<SweepTable> {
    scenario.validate()?;
    let mut t = SweepTable::new("dispersion", DISPERSION_COLUMNS.iter().map(|c| c.to_string()).collect());
    for &l in lambdas {
        let s = dispersion_sample(&scenario.materials, &scenario.design, &scenario.budget, l)?;
        t.push_row(dispersion_row(&s, &scenario.budget))?;
    }
    t.metadata = scenario.snapshot();
    Ok(t)
}

/// Link quantities for N_L = 1..=24 at one wavelength.
pub fn mtdm_table(scenario: &Scenario, lambda: f64) -> Result<SweepTable> {
    scenario.validate()?;
    let mut t = SweepTable::new("mtdm", DISPERSION_COLUMNS.iter().map(|c| c.to_string()).collect());
    for nl in 1..=MAX_LINKS {
        let budget = LinkBudget {
            num_links: nl,
            ..scenario.budget
        };
        let s = dispersion_sample(&scenario.materials, &scenario.design, &budget, lambda)?;
        t.push_row(dispersion_row(&s, &budget))?;
    }
    t.metadata = scenario.snapshot();
    t.metadata.insert("eval_lambda".into(), lambda.to_string());
    Ok(t)
}

/// Outcome of one shape-level check on a figure dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendCheck {
    pub figure: FigureId,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for TrendCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {} {}: {}", self.figure, self.name, self.detail)
    }
}

fn first_violation(values: &[f64], ok: impl Fn(f64, f64) -> bool) -> Option<usize> {
    values.windows(2).position(|w| !ok(w[0], w[1]))
}

fn legend_columns(table: &SweepTable) -> Vec<(usize, f64)> {
    table
        .columns
        .iter()
        .enumerate()
        .filter_map(|(i, c)| legend_of(c).map(|(_, _, v)| (i, v)))
        .collect()
}

/// Checks that at every row the legend columns are ordered by legend value:
/// `key(col)` must be strictly increasing in the legend value when
/// `ascending`, strictly decreasing otherwise.
fn ordered_by_legend(table: &SweepTable, key: impl Fn(f64) -> f64, ascending: bool) -> (bool, String) {
    let mut cols = legend_columns(table);
    cols.sort_by(|a, b| a.1.total_cmp(&b.1));
    for (r, row) in table.rows.iter().enumerate() {
        let vals: Vec<f64> = cols.iter().map(|&(i, _)| key(row[i])).collect();
        let bad = first_violation(&vals, |a, b| if ascending { b > a } else { b < a });
        if let Some(k) = bad {
            return (
                false,
                format!(
                    "row {r} ({} = {}): legend {} gives {:e}, legend {} gives {:e}",
                    table.columns[0],
                    row[0],
                    cols[k].1,
                    vals[k],
                    cols[k + 1].1,
                    vals[k + 1]
                ),
            );
        }
    }
    (
        true,
        format!("{} rows ordered across {} legends", table.len(), cols.len()),
    )
}

fn strictly_increasing_columns(table: &SweepTable) -> (bool, String) {
    for (i, _) in legend_columns(table) {
        let col = table.column_at(i);
        if let Some(k) = first_violation(&col, |a, b| b > a) {
            return (
                false,
                format!("{} not increasing between rows {k} and {}", table.columns[i], k + 1),
            );
        }
    }
    (
        true,
        format!("all legend columns strictly increasing over {} rows", table.len()),
    )
}

/// Shape-level assertions for a figure dataset.
pub fn figure_trends(id: FigureId, table: &SweepTable, reference_t0: f64) -> Vec<TrendCheck> {
    let mut out = Vec::new();
    let mut push = |name: &str, (passed, detail): (bool, String)| {
        out.push(TrendCheck {
            figure: id,
            name: name.to_string(),
            passed,
            detail,
        });
    };
    match id {
        FigureId::Fig4 => {
            let rate = table.column("dnc_dT").unwrap_or_default();
            let temps = table.column("T_C").unwrap_or_default();
            let res = match first_violation(&rate, |a, b| b > a) {
                None => (
                    true,
                    format!("dnc/dT strictly increasing over {} temperatures", rate.len()),
                ),
                Some(k) => (
                    false,
                    format!(
                        "dnc/dT decreases from {:e} at {} °C to {:e} at {} °C",
                        rate[k],
                        temps[k],
                        rate[k + 1],
                        temps[k + 1]
                    ),
                ),
            };
            push("dnc_dT increasing in T", res);
            let mags: Vec<f64> = rate.iter().map(|r| r.abs()).collect();
            let res = match first_violation(&mags, |a, b| b > a) {
                None => (true, "|dnc/dT| strictly increasing".to_string()),
                Some(k) => (false, format!("|dnc/dT| not increasing at row {k}")),
            };
            push("|dnc_dT| increasing in T", res);
        }
        FigureId::Fig5 | FigureId::Fig6 | FigureId::Fig7 => {
            let temps = table.column("T_C").unwrap_or_default();
            let res = match temps.iter().position(|&t| t == reference_t0) {
                None => (false, format!("grid does not contain T0 = {reference_t0}")),
                Some(r) => {
                    let zero = legend_columns(table).iter().all(|&(i, _)| table.rows[r][i] == 0.0);
                    (
                        zero,
                        format!("shift at T0 = {reference_t0} °C is exactly zero in every column: {zero}"),
                    )
                }
            };
            push("zero shift at T0", res);
        }
        FigureId::Fig8 => push(
            "|Dt| ordered by index contrast",
            ordered_by_legend(table, f64::abs, true),
        ),
        FigureId::Fig9 => push(
            "Brm ordered inversely by index contrast",
            ordered_by_legend(table, |v| v, false),
        ),
        FigureId::Fig10 | FigureId::Fig11 => {
            push("rate increasing in NL", strictly_increasing_columns(table));
            push(
                "rate ordered inversely by index contrast",
                ordered_by_legend(table, |v| v, false),
            );
        }
        FigureId::Fig12 | FigureId::Fig13 => {
            push("rate increasing in NL", strictly_increasing_columns(table));
            let cols = legend_columns(table);
            let find = |t: f64| cols.iter().find(|c| c.1 == t).map(|c| c.0);
            let res = match (find(27.0), find(70.0)) {
                (Some(cool), Some(hot)) => {
                    let bad = table.rows.iter().position(|r| r[cool] < r[hot]);
                    match bad {
                        None => (true, "rate at 27 °C >= rate at 70 °C for every NL".to_string()),
                        Some(k) => (
                            false,
                            format!(
                                "NL = {}: rate at 27 °C {:e} < rate at 70 °C {:e}",
                                table.rows[k][0], table.rows[k][cool], table.rows[k][hot]
                            ),
                        ),
                    }
                }
                _ => (false, "legend lacks the 27 °C and 70 °C columns".to_string()),
            };
            push("rate at 27 °C >= rate at 70 °C", res);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario() -> Scenario {
        Scenario::default()
    }

    #[test]
    fn path_and_quantity_names_round_trip() {
        for p in ParamPath::ALL {
            assert_eq!(p.as_str().parse::<ParamPath>().unwrap(), p);
        }
        for q in Quantity::ALL {
            assert_eq!(q.as_str().parse::<Quantity>().unwrap(), q);
        }
        assert!("design.colour".parse::<ParamPath>().is_err());
        assert!("fig14".parse::<FigureId>().is_err());
    }

    #[test]
    fn single_point_sweep_equals_point_evaluation() {
        let spec = SweepSpec {
            scenario_id: "one".into(),
            base: scenario(),
            axes: vec![Axis {
                path: ParamPath::Temperature,
                values: vec![45.0],
            }],
            outputs: vec![Quantity::DeltaLambda, Quantity::Dt],
        };
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.len(), 1);
        let s = scenario();
        let dl = waveguide::wavelength_shift(&s.materials, &s.design, 45.0).unwrap();
        assert_eq!(
            t.rows[0],
            vec![45.0, dl, {
                let b = LinkBudget {
                    temperature: 45.0,
                    ..s.budget
                };
                dispersion_sample(&s.materials, &s.design, &b, s.design.lambda0)
                    .unwrap()
                    .dt
            }]
        );
    }

    #[test]
    fn three_by_three() {
        let spec = SweepSpec {
            scenario_id: "grid".into(),
            base: scenario(),
            axes: vec![
                Axis {
                    path: ParamPath::N1Design,
                    values: vec![2.2, 2.33, 2.46],
                },
                Axis {
                    path: ParamPath::CoreWidth,
                    values: vec![3.0, 5.0, 7.0],
                },
            ],
            outputs: vec![Quantity::Nc],
        };
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.columns, vec!["design.n1_design", "design.core_width_a", "n_c"]);
        assert_eq!(&t.rows[1][..2], &[2.2, 5.0]);
        assert_eq!(&t.rows[3][..2], &[2.33, 3.0]);
    }

    #[test]
    fn sweep_guards() {
        let mut spec = SweepSpec {
            scenario_id: "g".into(),
            base: scenario(),
            axes: vec![Axis {
                path: ParamPath::Lambda,
                values: vec![],
            }],
            outputs: vec![Quantity::Dt],
        };
        assert!(run_sweep(&spec).is_err());
        spec.axes = vec![
            Axis {
                path: ParamPath::Lambda,
                values: vec![1.5; 1001],
            },
            Axis {
                path: ParamPath::Temperature,
                values: vec![27.0; 1001],
            },
        ];
        assert!(matches!(run_sweep(&spec), Err(Error::Validation(m)) if m.contains("exceeds")));
        spec.axes = vec![Axis {
            path: ParamPath::NumLinks,
            values: vec![2.5],
        }];
        assert!(run_sweep(&spec).is_err());
        spec.axes = vec![Axis {
            path: ParamPath::NumLinks,
            values: vec![30.0],
        }];
        assert!(run_sweep(&spec).is_err());
        spec.axes = vec![];
        spec.outputs = vec![];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn stepped_grids() {
        let g = stepped_grid(20.0, 70.0, 1.0).unwrap();
        assert_eq!(g.len(), 51);
        assert_eq!(g[7], 27.0);
        assert_eq!(stepped_grid(1.0, 1.64, 0.01).unwrap().len(), 65);
        assert_eq!(stepped_grid(1.0, 1.64, 0.05).unwrap().len(), 13);
        assert!(stepped_grid(1.0, 0.5, 0.1).is_err());
        assert!(stepped_grid(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn figure_shapes() {
        let s = scenario();
        let o = FigureOverrides::default();
        let f4 = run_figure(&s, FigureId::Fig4, &o).unwrap();
        assert_eq!(f4.columns, vec!["T_C", "dnc_dT"]);
        assert_eq!(f4.len(), 51);
        assert_eq!(f4.metadata["design.n1_design"], "2.33");
        assert_eq!(f4.metadata["design.core_width_a"], "5");
        let f5 = run_figure(&s, FigureId::Fig5, &o).unwrap();
        assert_eq!(f5.columns[1], "delta_lambda_nm@n1=2.2");
        let f8 = run_figure(&s, FigureId::Fig8, &o).unwrap();
        assert_eq!(f8.len(), 65);
        assert!(f8.columns[1].starts_with("Dt@dn="));
        let f12 = run_figure(&s, FigureId::Fig12, &o).unwrap();
        assert_eq!(
            f12.columns,
            vec!["NL", "Brm_Gbps@T=27", "Brm_Gbps@T=45", "Brm_Gbps@T=70"]
        );
        assert_eq!(f12.len(), 24);
    }

    #[test]
    fn shift_figures_zero_at_reference() {
        let s = scenario();
        for id in [FigureId::Fig5, FigureId::Fig6, FigureId::Fig7] {
            let t = run_figure(&s, id, &FigureOverrides::default()).unwrap();
            let checks = figure_trends(id, &t, s.design.t0);
            assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        }
    }

    #[test]
    fn contrast_and_link_trends() {
        let s = scenario();
        for id in [FigureId::Fig8, FigureId::Fig9, FigureId::Fig10, FigureId::Fig11] {
            let t = run_figure(&s, id, &FigureOverrides::default()).unwrap();
            for c in figure_trends(id, &t, s.design.t0) {
                assert!(c.passed, "{c}");
            }
        }
    }

    #[test]
    fn point_tables() {
        let s = scenario();
        let t = thermal_table(&s, &[20.0, 27.0, 70.0]).unwrap();
        assert_eq!(
            t.columns,
            vec!["T_C", "n_c", "dnc_dT", "lambda_c_um", "delta_lambda_nm"]
        );
        assert_eq!(t.rows[1][4], 0.0);
        let d = dispersion_table(&s, &[1.3, 1.55]).unwrap();
        assert_eq!(d.columns.len(), 10);
        assert_eq!(&d.rows[0][7..], &[24.0, 16.0, 27.0]);
        let m = mtdm_table(&s, 1.55).unwrap();
        assert_eq!(m.len(), 24);
        assert_eq!(m.rows[23][5], d.rows[1][5]);
    }

    #[test]
    fn empty_legend_rejected() {
        let o = FigureOverrides {
            n1_values: vec![],
            ..Default::default()
        };
        assert!(run_figure(&scenario(), FigureId::Fig5, &o).is_err());
        let o = FigureOverrides {
            n1_values: vec![1.4],
            ..Default::default()
        };
        assert!(run_figure(&scenario(), FigureId::Fig5, &o).is_err());
    }
}
