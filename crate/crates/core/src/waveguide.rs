//! Effective-index chain, thermal drift of the AWG center wavelength and the
//! athermal design condition.
//!
//! The center wavelength follows `λc = λ0 · (nc / nc0) · exp(α_sub (T - T0))`.
//! The device is athermal at `T` when `dnc/dT + α_sub · nc = 0`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::materials::Materials;
use crate::solver::{bisect, BisectOptions, Root};
use crate::units::um_to_nm;

/// Constant of the collapsed effective-index expression `nc = 3.35 a² (n1⁴ - n2⁴) / λc²`.
pub const LITERAL_NC_CONSTANT: f64 = 3.35;

/// `b(V) = (B_FIT_OFFSET - B_FIT_SLOPE / V)²`.
pub const B_FIT_OFFSET: f64 = 1.1428;
pub const B_FIT_SLOPE: f64 = 0.9660;
/// Below this normalized frequency the fit bracket goes negative and b is clamped to 0.
pub const B_KNEE_V: f64 = B_FIT_SLOPE / B_FIT_OFFSET;

/// Single-mode cutoff of a step-index guide.
pub const SINGLE_MODE_CUTOFF_V: f64 = 2.405;

/// How core and cladding indices are resolved at (λ, T).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMode {
    /// `nᵢ = nᵢ_design + [nᵢ_material(λ, T) - nᵢ_material(λ0, T0)]`.
    #[default]
    #[serde(alias = "anchored")]
    DesignAnchored,
    /// `nᵢ = nᵢ_material(λ, T)`.
    #[serde(alias = "material")]
    MaterialDerived,
}

impl IndexMode {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexMode::DesignAnchored => "anchored",
            IndexMode::MaterialDerived => "material",
        }
    }
}

impl std::str::FromStr for IndexMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anchored" | "design-anchored" => Ok(IndexMode::DesignAnchored),
            "material" | "material-derived" => Ok(IndexMode::MaterialDerived),
            other => Err(Error::Validation(format!(
                "unknown index mode `{other}` (expected anchored|material)"
            ))),
        }
    }
}

/// Which closed form supplies the effective index `nc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectiveIndexModel {
    /// `3.35 a² (n1⁴ - n2⁴) / λ0²`. Proportional to a², so only ratios and
    /// relative rates are meaningful and the core width cancels out of them.
    #[default]
    Literal,
    /// `(n1² - n2²) b(V) + n2²` with `V = (2π a / λ0) √(n1² - n2²)`.
    #[serde(alias = "normalized-b")]
    Mode,
}

impl EffectiveIndexModel {
    pub fn as_str(self) -> &'static str {
        match self {
            EffectiveIndexModel::Literal => "literal",
            EffectiveIndexModel::Mode => "mode",
        }
    }
}

impl std::str::FromStr for EffectiveIndexModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(EffectiveIndexModel::Literal),
            "mode" | "normalized-b" => Ok(EffectiveIndexModel::Mode),
            other => Err(Error::Validation(format!(
                "unknown effective-index model `{other}` (expected literal|mode)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveguideDesign {
    /// Core width, μm.
    pub core_width_a: f64,
    pub n1_design: f64,
    pub n2_design: f64,
    /// Substrate thermal expansion coefficient, °C⁻¹.
    pub alpha_sub: f64,
    /// Center wavelength at `t0`, μm.
    pub lambda0: f64,
    /// Reference temperature, °C.
    pub t0: f64,
    pub index_mode: IndexMode,
    pub nc_model: EffectiveIndexModel,
}

impl Default for WaveguideDesign {
    fn default() -> Self {
        Self {
            core_width_a: 5.0,
            n1_design: 2.33,
            n2_design: 1.52,
            alpha_sub: 2.63e-6,
            lambda0: 1.550918,
            t0: 27.0,
            index_mode: IndexMode::DesignAnchored,
            nc_model: EffectiveIndexModel::Literal,
        }
    }
}

impl WaveguideDesign {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.core_width_a,
            self.n1_design,
            self.n2_design,
            self.alpha_sub,
            self.lambda0,
            self.t0,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Validation("design contains a non-finite value".into()));
        }
        if !(self.n1_design > self.n2_design && self.n2_design > 1.0) {
            return Err(Error::Validation(format!(
                "design indices must satisfy n1 > n2 > 1 (got n1 = {}, n2 = {})",
                self.n1_design, self.n2_design
            )));
        }
        if self.core_width_a <= 0.0 {
            return Err(Error::Validation(format!(
                "core width must be positive (got {})",
                self.core_width_a
            )));
        }
        if self.alpha_sub <= 0.0 {
            return Err(Error::Validation(format!(
                "substrate expansion coefficient must be positive (got {})",
                self.alpha_sub
            )));
        }
        if self.lambda0 <= 0.0 {
            return Err(Error::Validation(format!(
                "lambda0 must be positive (got {})",
                self.lambda0
            )));
        }
        Ok(())
    }
}

/// Core and cladding indices with their thermo-optic coefficients at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuideIndices {
    pub n1: f64,
    pub n2: f64,
    pub dn1_dt: f64,
    pub dn2_dt: f64,
}

/// Resolves core/cladding indices at `(lambda, temperature)` under the
/// design's index mode.
pub fn resolve_indices(
    materials: &Materials,
    design: &WaveguideDesign,
    lambda: f64,
    temperature: f64,
) -> Result<GuideIndices> {
    let n1_mat = materials.linbo3.index(lambda, temperature)?;
    let n2_mat = materials.pmma.index(lambda, temperature)?;
    let (n1, n2) = match design.index_mode {
        IndexMode::MaterialDerived => (n1_mat, n2_mat),
        IndexMode::DesignAnchored => {
            let n1_ref = materials.linbo3.index(design.lambda0, design.t0)?;
            let n2_ref = materials.pmma.index(design.lambda0, design.t0)?;
            (
                design.n1_design + (n1_mat - n1_ref),
                design.n2_design + (n2_mat - n2_ref),
            )
        }
    };
    if n1 <= n2 {
        return Err(domain(format!(
            "core index {n1} does not exceed cladding index {n2} at λ = {lambda}, T = {temperature}"
        )));
    }
    Ok(GuideIndices {
        n1,
        n2,
        dn1_dt: materials.linbo3.dn_dt(lambda, temperature)?,
        dn2_dt: materials.pmma.dn_dt(lambda, temperature)?,
    })
}

pub fn normalized_frequency(core_width_a: f64, lambda: f64, n1: f64, n2: f64) -> f64 {
    2.0 * PI * core_width_a / lambda * (n1 * n1 - n2 * n2).sqrt()
}

/// Whether `b(V)` is clamped to zero at this normalized frequency.
pub fn below_b_knee(v: f64) -> bool {
    v <= B_KNEE_V
}

/// Normalized propagation constant `b(V) = (1.1428 - 0.9660 / V)²`, clamped to
/// 0 below `V = 0.9660 / 1.1428`.
pub fn normalized_b(v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(domain(format!("normalized frequency must be positive (got {v})")));
    }
    if below_b_knee(v) {
        return Ok(0.0);
    }
    let bracket = B_FIT_OFFSET - B_FIT_SLOPE / v;
    Ok(bracket * bracket)
}

/// `nc`, `dnc/dT` and whether b(V) was clamped, at λ0 and `temperature`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct NcPoint {
    nc: f64,
    rate: f64,
    clamped: bool,
}

fn nc_point(materials: &Materials, design: &WaveguideDesign, temperature: f64) -> Result<NcPoint> {
    design.validate()?;
    let g = resolve_indices(materials, design, design.lambda0, temperature)?;
    let a = design.core_width_a;
    match design.nc_model {
        EffectiveIndexModel::Literal => {
            let k = LITERAL_NC_CONSTANT * a * a / (design.lambda0 * design.lambda0);
            let nc = k * (g.n1.powi(4) - g.n2.powi(4));
            let rate = k * (4.0 * g.n1.powi(3) * g.dn1_dt - 4.0 * g.n2.powi(3) * g.dn2_dt);
            Ok(NcPoint {
                nc,
                rate,
                clamped: false,
            })
        }
        EffectiveIndexModel::Mode => {
            let contrast = g.n1 * g.n1 - g.n2 * g.n2;
            let contrast_rate = 2.0 * g.n1 * g.dn1_dt - 2.0 * g.n2 * g.dn2_dt;
            let v = normalized_frequency(a, design.lambda0, g.n1, g.n2);
            let b = normalized_b(v)?;
            let clamped = below_b_knee(v);
            // d(D·b)/dT = D'·(b + V b'(V) / 2) and b + V b'/2 = p (p - q/V)
            let shape = if clamped {
                0.0
            } else {
                B_FIT_OFFSET * (B_FIT_OFFSET - B_FIT_SLOPE / v)
            };
            let nc = contrast * b + g.n2 * g.n2;
            let rate = contrast_rate * shape + 2.0 * g.n2 * g.dn2_dt;
            Ok(NcPoint { nc, rate, clamped })
        }
    }
}

/// Effective index `nc` at λ0 and `temperature`.
pub fn effective_index(materials: &Materials, design: &WaveguideDesign, temperature: f64) -> Result<f64> {
    Ok(nc_point(materials, design, temperature)?.nc)
}

/// Thermal rate `dnc/dT`, by the chain rule through the material thermo-optic coefficients.
pub fn dnc_dt(materials: &Materials, design: &WaveguideDesign, temperature: f64) -> Result<f64> {
    Ok(nc_point(materials, design, temperature)?.rate)
}

fn reference_nc(materials: &Materials, design: &WaveguideDesign) -> Result<f64> {
    let nc0 = effective_index(materials, design, design.t0)?;
    if !(nc0 > 0.0) {
        return Err(domain(format!(
            "reference effective index must be positive (got {nc0})"
        )));
    }
    Ok(nc0)
}

fn expansion(design: &WaveguideDesign, temperature: f64) -> f64 {
    (design.alpha_sub * (temperature - design.t0)).exp()
}

/// Center wavelength λc(T), μm.
pub fn center_wavelength(materials: &Materials, design: &WaveguideDesign, temperature: f64) -> Result<f64> {
    let nc0 = reference_nc(materials, design)?;
    let nc = effective_index(materials, design, temperature)?;
    Ok(design.lambda0 * (nc / nc0) * expansion(design, temperature))
}

fn shift_um(design: &WaveguideDesign, nc: f64, nc0: f64, temperature: f64) -> f64 {
    design.lambda0 / nc0 * (nc * expansion(design, temperature) - nc0)
}

/// Center-wavelength shift Δλ(T) = λc(T) - λ0, nm.
pub fn wavelength_shift(materials: &Materials, design: &WaveguideDesign, temperature: f64) -> Result<f64> {
    let nc0 = reference_nc(materials, design)?;
    let nc = effective_index(materials, design, temperature)?;
    Ok(um_to_nm(shift_um(design, nc, nc0, temperature)))
}

/// `dnc/dT + α_sub · nc`; zero where the device is athermal.
pub fn athermal_residual(materials: &Materials, design: &WaveguideDesign, temperature: f64) -> Result<f64> {
    let p = nc_point(materials, design, temperature)?;
    Ok(p.rate + design.alpha_sub * p.nc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoreWidthSolution {
    /// Athermal core width, μm.
    pub core_width_a: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bisects the athermal residual over the core width. The design's own
/// `core_width_a` is ignored.
pub fn solve_athermal_core_width(
    materials: &Materials,
    design: &WaveguideDesign,
    temperature: f64,
    bracket: (f64, f64),
) -> Result<CoreWidthSolution> {
    let (lo, hi) = bracket;
    if !(lo > 0.0) {
        return Err(Error::Validation(format!(
            "core-width bracket must be positive (got [{lo}, {hi}])"
        )));
    }
    let residual = |a: f64| {
        let trial = WaveguideDesign {
            core_width_a: a,
            ..*design
        };
        athermal_residual(materials, &trial, temperature)
    };
    let Root {
        x,
        residual,
        iterations,
    } = bisect(residual, lo, hi, BisectOptions::default())?;
    Ok(CoreWidthSolution {
        core_width_a: x,
        residual,
        iterations,
    })
}

/// Tabulated thermal response of one design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalResponse {
    pub temperatures: Vec<f64>,
    pub n_c: Vec<f64>,
    pub dnc_dt: Vec<f64>,
    /// μm
    pub lambda_c: Vec<f64>,
    /// nm
    pub delta_lambda: Vec<f64>,
    pub warnings: Vec<String>,
}

impl ThermalResponse {
    pub fn len(&self) -> usize {
        self.temperatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.temperatures.is_empty()
    }

    pub fn max_abs_shift(&self) -> Option<(f64, f64)> {
        self.temperatures
            .iter()
            .zip(&self.delta_lambda)
            .map(|(&t, &d)| (t, d.abs()))
            .fold(None, |best, (t, d)| match best {
                Some((_, bd)) if bd >= d => best,
                _ => Some((t, d)),
            })
    }
}

pub fn thermal_scan(materials: &Materials, design: &WaveguideDesign, temperatures: &[f64]) -> Result<ThermalResponse> {
    if temperatures.is_empty() {
        return Err(Error::Validation("temperature grid is empty".into()));
    }
    if temperatures.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::Validation("temperature grid must be sorted ascending".into()));
    }
    let nc0 = reference_nc(materials, design)?;
    let mut out = ThermalResponse {
        temperatures: temperatures.to_vec(),
        n_c: Vec::with_capacity(temperatures.len()),
        dnc_dt: Vec::with_capacity(temperatures.len()),
        lambda_c: Vec::with_capacity(temperatures.len()),
        delta_lambda: Vec::with_capacity(temperatures.len()),
        warnings: Vec::new(),
    };
    for &t in temperatures {
        let p = nc_point(materials, design, t)?;
        if p.clamped {
            out.warnings
                .push(format!("T = {t} °C: V below the b(V) knee, b clamped to 0"));
        }
        out.n_c.push(p.nc);
        out.dnc_dt.push(p.rate);
        out.lambda_c.push(design.lambda0 * (p.nc / nc0) * expansion(design, t));
        out.delta_lambda.push(um_to_nm(shift_um(design, p.nc, nc0, t)));
    }
    Ok(out)
}

/// Reference figures the drift comparison is made against: a total shift band
/// over 20 to 70 °C and a per-degree rate. The two are mutually inconsistent.
pub const REFERENCE_SHIFT_BAND_NM: (f64, f64) = (0.012, 0.015);
pub const REFERENCE_SHIFT_RATE_NM_PER_C: f64 = 0.027;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Reproduced,
    Deviation,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Reproduced => "REPRODUCED",
            Verdict::Deviation => "DEVIATION",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftComparison {
    pub max_abs_shift_nm: f64,
    pub at_temperature: f64,
    /// |Δλ(T_last) - Δλ(T_first)| / (T_last - T_first), nm/°C.
    pub mean_rate_nm_per_c: f64,
    pub t_range: (f64, f64),
    pub verdict: Verdict,
}

/// Compares a scan's worst-case drift with the reference shift band.
pub fn compare_shift(response: &ThermalResponse) -> Result<ShiftComparison> {
    let (at, max) = response
        .max_abs_shift()
        .ok_or_else(|| Error::Validation("empty thermal response".into()))?;
    let n = response.len();
    let (t_first, t_last) = (response.temperatures[0], response.temperatures[n - 1]);
    let span = t_last - t_first;
    let mean_rate = if span > 0.0 {
        (response.delta_lambda[n - 1] - response.delta_lambda[0]).abs() / span
    } else {
        0.0
    };
    let (lo, hi) = REFERENCE_SHIFT_BAND_NM;
    let verdict = if (lo..=hi).contains(&max) {
        Verdict::Reproduced
    } else {
        Verdict::Deviation
    };
    Ok(ShiftComparison {
        max_abs_shift_nm: max,
        at_temperature: at,
        mean_rate_nm_per_c: mean_rate,
        t_range: (t_first, t_last),
        verdict,
    })
}

impl fmt::Display for ShiftComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = REFERENCE_SHIFT_BAND_NM;
        writeln!(
            f,
            "{}: max |Δλ| = {:.6} nm at {} °C over T ∈ [{}, {}] °C",
            self.verdict.as_str(),
            self.max_abs_shift_nm,
            self.at_temperature,
            self.t_range.0,
            self.t_range.1
        )?;
        writeln!(f, "  reference total-shift band: {lo} ~ {hi} nm")?;
        writeln!(
            f,
            "  reference drift rate: {REFERENCE_SHIFT_RATE_NM_PER_C} nm/°C (computed mean rate {:.6} nm/°C)",
            self.mean_rate_nm_per_c
        )?;
        writeln!(f, "  note: the two reference figures disagree with each other")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // 40-digit direct-evaluation oracle values for the default design.
    const NC_T0: f64 = 840.339103119215;
    const NC_T70: f64 = 835.79713220475;
    const DNC_DT_27: f64 = -0.0565306035670301;
    const RESIDUAL_27: f64 = -0.0543205117258266;
    const LAMBDA_C_70: f64 = 1.54270985771476;

    fn mats() -> Materials {
        Materials::default()
    }

    #[test]
    fn normalized_b_values() {
        assert_relative_eq!(normalized_b(2.405).unwrap(), 0.5493, epsilon = 1e-4);
        assert_eq!(normalized_b(B_FIT_SLOPE / B_FIT_OFFSET).unwrap(), 0.0);
        assert_eq!(normalized_b(0.5).unwrap(), 0.0);
        assert_relative_eq!(normalized_b(1e12).unwrap(), 1.30599184, epsilon = 1e-8);
        assert!(matches!(normalized_b(0.0), Err(Error::Domain(_))));
        assert!(matches!(normalized_b(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn effective_index_golden() {
        let d = WaveguideDesign::default();
        let nc = effective_index(&mats(), &d, 27.0).unwrap();
        let direct = 3.35 * 25.0 * (2.33f64.powi(4) - 1.52f64.powi(4)) / 1.550918f64.powi(2);
        assert_relative_eq!(nc, direct, max_relative = 4.0 * f64::EPSILON);
        assert_relative_eq!(nc, NC_T0, max_relative = 1e-12);
        assert_relative_eq!(
            effective_index(&mats(), &d, 70.0).unwrap(),
            NC_T70,
            max_relative = 1e-12
        );
    }

    #[test]
    fn anchored_indices_at_reference() {
        let d = WaveguideDesign {
            n1_design: 2.2,
            n2_design: 1.6,
            ..Default::default()
        };
        let g = resolve_indices(&mats(), &d, d.lambda0, d.t0).unwrap();
        assert_eq!((g.n1, g.n2), (2.2, 1.6));
        let m = WaveguideDesign {
            index_mode: IndexMode::MaterialDerived,
            ..d
        };
        let g = resolve_indices(&mats(), &m, 1.55, 27.0).unwrap();
        assert_relative_eq!(g.n1, 2.1379, epsilon = 2e-3);
    }

    #[test]
    fn dnc_dt_golden_and_fd() {
        let d = WaveguideDesign::default();
        assert_relative_eq!(dnc_dt(&mats(), &d, 27.0).unwrap(), DNC_DT_27, max_relative = 1e-11);
        assert_relative_eq!(
            athermal_residual(&mats(), &d, 27.0).unwrap(),
            RESIDUAL_27,
            max_relative = 1e-11
        );
        for model in [EffectiveIndexModel::Literal, EffectiveIndexModel::Mode] {
            for mode in [IndexMode::DesignAnchored, IndexMode::MaterialDerived] {
                let d = WaveguideDesign {
                    nc_model: model,
                    index_mode: mode,
                    ..Default::default()
                };
                for t in [20.0, 33.0, 50.0, 70.0] {
                    let h = 1e-3;
                    let fd = (effective_index(&mats(), &d, t + h).unwrap()
                        - effective_index(&mats(), &d, t - h).unwrap())
                        / (2.0 * h);
                    assert_relative_eq!(dnc_dt(&mats(), &d, t).unwrap(), fd, max_relative = 1e-6);
                }
            }
        }
    }

    #[test]
    fn zero_thermo_optic_gives_zero_rate() {
        let frozen = Materials {
            linbo3: crate::materials::LiNbO3Model {
                a2: 0.0,
                a4: 0.0,
                a6: 0.0,
                a8: 0.0,
                ..Default::default()
            },
            pmma: crate::materials::PmmaModel {
                c1: 0.0,
                c3: 0.0,
                ..Default::default()
            },
            ..Default::default()
        };
        let d = WaveguideDesign::default();
        assert_eq!(dnc_dt(&frozen, &d, 45.0).unwrap(), 0.0);
        // pure substrate-expansion limit
        let shift = wavelength_shift(&frozen, &d, d.t0 + 1.0).unwrap();
        assert_relative_eq!(shift, um_to_nm(d.lambda0 * d.alpha_sub.exp_m1()), max_relative = 1e-9);
    }

    #[test]
    fn shift_zero_at_reference_and_consistent() {
        let d = WaveguideDesign::default();
        assert_eq!(wavelength_shift(&mats(), &d, d.t0).unwrap(), 0.0);
        assert_eq!(center_wavelength(&mats(), &d, d.t0).unwrap(), d.lambda0);
        let lc70 = center_wavelength(&mats(), &d, 70.0).unwrap();
        assert_relative_eq!(lc70, LAMBDA_C_70, max_relative = 1e-12);
        for t in [20.0, 40.0, 70.0] {
            let lc = center_wavelength(&mats(), &d, t).unwrap();
            let dl = wavelength_shift(&mats(), &d, t).unwrap();
            assert!((um_to_nm(lc - d.lambda0) - dl).abs() < 1e-9);
        }
    }

    #[test]
    fn literal_model_has_no_core_width_root() {
        let d = WaveguideDesign::default();
        let err = solve_athermal_core_width(&mats(), &d, 27.0, (0.1, 20.0)).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
        // shift curves do not depend on a under the literal model
        let d3 = WaveguideDesign { core_width_a: 3.0, ..d };
        assert_relative_eq!(
            wavelength_shift(&mats(), &d, 70.0).unwrap(),
            wavelength_shift(&mats(), &d3, 70.0).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn mode_model_core_width_root() {
        let d = WaveguideDesign {
            nc_model: EffectiveIndexModel::Mode,
            index_mode: IndexMode::MaterialDerived,
            ..Default::default()
        };
        let sol = solve_athermal_core_width(&mats(), &d, 27.0, (0.1, 20.0)).unwrap();
        assert!(sol.residual.abs() < 1e-9);
        assert_relative_eq!(sol.core_width_a, 0.751027858664026, max_relative = 1e-9);
        let anchored = WaveguideDesign {
            index_mode: IndexMode::DesignAnchored,
            ..d
        };
        let sol = solve_athermal_core_width(&mats(), &anchored, 27.0, (0.1, 20.0)).unwrap();
        assert_relative_eq!(sol.core_width_a, 0.677893404866939, max_relative = 1e-9);
    }

    #[test]
    fn scan_matches_point_calls() {
        let d = WaveguideDesign::default();
        let r = thermal_scan(&mats(), &d, &[27.0]).unwrap();
        assert_eq!(r.delta_lambda, vec![0.0]);
        assert_eq!(r.n_c[0], effective_index(&mats(), &d, 27.0).unwrap());
        assert_eq!(r.dnc_dt[0], dnc_dt(&mats(), &d, 27.0).unwrap());
        assert_eq!(r.lambda_c[0], d.lambda0);

        let grid: Vec<f64> = (20..=70).map(f64::from).collect();
        let r = thermal_scan(&mats(), &d, &grid).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            assert_eq!(r.delta_lambda[i], wavelength_shift(&mats(), &d, t).unwrap());
        }
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn scan_validation() {
        let d = WaveguideDesign::default();
        assert!(matches!(thermal_scan(&mats(), &d, &[]), Err(Error::Validation(_))));
        assert!(matches!(
            thermal_scan(&mats(), &d, &[30.0, 20.0]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn clamped_b_warns() {
        let d = WaveguideDesign {
            nc_model: EffectiveIndexModel::Mode,
            core_width_a: 0.1,
            ..Default::default()
        };
        let r = thermal_scan(&mats(), &d, &[27.0, 30.0]).unwrap();
        assert_eq!(r.warnings.len(), 2);
    }

    #[test]
    fn design_validation() {
        let bad = WaveguideDesign {
            n1_design: 1.4,
            ..Default::default()
        };
        assert!(matches!(
            effective_index(&mats(), &bad, 27.0),
            Err(Error::Validation(_))
        ));
        let bad = WaveguideDesign {
            core_width_a: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = WaveguideDesign {
            alpha_sub: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn reference_optimum_comparison_reports_deviation() {
        let d = WaveguideDesign::default();
        let grid: Vec<f64> = (20..=70).map(f64::from).collect();
        let cmp = compare_shift(&thermal_scan(&mats(), &d, &grid).unwrap()).unwrap();
        assert_eq!(cmp.verdict, Verdict::Deviation);
        assert_relative_eq!(cmp.max_abs_shift_nm, 8.2081422852414, max_relative = 1e-9);
        assert_eq!(cmp.at_temperature, 70.0);
        let text = cmp.to_string();
        assert!(text.contains("DEVIATION") && text.contains("0.012") && text.contains("0.027"));
    }
}
