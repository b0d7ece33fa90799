//! Chromatic dispersion, pulse broadening and MTDM bit rates for the PON
//! link model.
//!
//! Dispersion coefficients are returned in ps/(nm·km), pulse broadening in
//! ns and bit rates in Gbit/s. SI is used internally; see [`crate::units`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::materials::Materials;
use crate::units::{per_um2_to_per_m2, ps_to_ns, s_per_m2_to_ps_per_nm_km, um_to_m, um_to_nm, SPEED_OF_LIGHT};
use crate::waveguide::{normalized_frequency, resolve_indices, WaveguideDesign, B_FIT_SLOPE, SINGLE_MODE_CUTOFF_V};

/// Upper bound on links per fiber cable core.
pub const MAX_LINKS: u32 = 24;

/// Numerator of the MTDM bit-rate formula `B = 0.25 / Δτ`.
pub const MTDM_FACTOR: f64 = 0.25;

/// Waveguide-dispersion factor Y.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum YFactor {
    /// `Y(V) = 2 (0.9660 / V)²` evaluated at the single-mode cutoff V = 2.405.
    #[default]
    Cutoff,
    /// `Y(V) = V d²(Vb)/dV² = 2 (0.9660 / V)²` at the operating V.
    Auto,
    Constant(f64),
}

impl YFactor {
    /// Y at normalized frequency `v`.
    pub fn value(self, v: f64) -> f64 {
        match self {
            YFactor::Cutoff => y_closed_form(SINGLE_MODE_CUTOFF_V),
            YFactor::Auto => y_closed_form(v),
            YFactor::Constant(y) => y,
        }
    }
}

/// `V d²(V b)/dV²` for `b(V) = (1.1428 - 0.9660/V)²`.
pub fn y_closed_form(v: f64) -> f64 {
    let r = B_FIT_SLOPE / v;
    2.0 * r * r
}

impl FromStr for YFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cutoff" => Ok(YFactor::Cutoff),
            "auto" => Ok(YFactor::Auto),
            other => {
                let value = other
                    .strip_prefix("constant:")
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .filter(|v| v.is_finite() && *v > 0.0)
                    .ok_or_else(|| {
                        Error::Validation(format!(
                            "invalid Y factor `{other}` (expected cutoff | auto | constant:<positive value>)"
                        ))
                    })?;
                Ok(YFactor::Constant(value))
            }
        }
    }
}

impl fmt::Display for YFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YFactor::Cutoff => f.write_str("cutoff"),
            YFactor::Auto => f.write_str("auto"),
            YFactor::Constant(y) => write!(f, "constant:{y}"),
        }
    }
}

/// Spectral width Δλ entering the pulse-broadening formula.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SourceLinewidth {
    /// The per-link spectral slice `(λf - λi) / N_L`.
    #[default]
    Slice,
    /// A fixed source linewidth, nm.
    Fixed(f64),
}

impl FromStr for SourceLinewidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "slice" => Ok(SourceLinewidth::Slice),
            other => other
                .strip_prefix("fixed:")
                .and_then(|v| v.trim().parse::<f64>().ok())
                .filter(|v| v.is_finite() && *v > 0.0)
                .map(SourceLinewidth::Fixed)
                .ok_or_else(|| Error::Validation(format!("invalid linewidth `{other}` (expected slice | fixed:<nm>)"))),
        }
    }
}

impl fmt::Display for SourceLinewidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceLinewidth::Slice => f.write_str("slice"),
            SourceLinewidth::Fixed(nm) => write!(f, "fixed:{nm}"),
        }
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(YFactor);
string_serde!(SourceLinewidth);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkBudget {
    /// Fiber length L, km.
    pub fiber_length_km: f64,
    /// Links per fiber cable core, N_L.
    pub num_links: u32,
    /// Channels per link, N_ch.
    pub num_channels: u32,
    /// Spectral band `[λi, λf]`, μm.
    pub band: [f64; 2],
    /// Operating temperature, °C.
    pub temperature: f64,
    pub y_factor: YFactor,
    pub linewidth: SourceLinewidth,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            fiber_length_km: 10.0,
            num_links: MAX_LINKS,
            num_channels: 16,
            band: [1.0, 1.65],
            temperature: 27.0,
            y_factor: YFactor::default(),
            linewidth: SourceLinewidth::default(),
        }
    }
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_LINKS).contains(&self.num_links) {
            return Err(Error::Validation(format!(
                "number of links must be in 1..={MAX_LINKS} (got {})",
                self.num_links
            )));
        }
        if self.num_channels == 0 {
            return Err(Error::Validation("number of channels must be at least 1".into()));
        }
        let [lo, hi] = self.band;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Validation(format!("band [{lo}, {hi}] must satisfy 0 < λi < λf")));
        }
        if !(self.fiber_length_km > 0.0 && self.fiber_length_km.is_finite()) {
            return Err(Error::Validation(format!(
                "fiber length must be positive (got {})",
                self.fiber_length_km
            )));
        }
        if !self.temperature.is_finite() {
            return Err(Error::Validation("temperature must be finite".into()));
        }
        Ok(())
    }

    /// Δλ used for pulse broadening, nm.
    pub fn source_linewidth_nm(&self) -> Result<f64> {
        match self.linewidth {
            SourceLinewidth::Slice => Ok(um_to_nm(spectral_slice_width(self.num_links, self.band)?)),
            SourceLinewidth::Fixed(nm) => Ok(nm),
        }
    }
}

/// Relative index difference Δn = (n1² - n2²) / (2 n1²).
pub fn relative_index_difference(n1: f64, n2: f64) -> Result<f64> {
    if !(n1 > n2 && n2 > 0.0) {
        return Err(domain(format!(
            "need n1 > n2 > 0 for an index contrast (got {n1}, {n2})"
        )));
    }
    Ok((n1 * n1 - n2 * n2) / (2.0 * n1 * n1))
}

/// `-(λ/c) d²n/dλ²` for a curvature given in μm⁻², in ps/(nm·km).
pub fn material_dispersion_from_curvature(lambda: f64, d2n_dlambda2: f64) -> f64 {
    let si = -(um_to_m(lambda) / SPEED_OF_LIGHT) * per_um2_to_per_m2(d2n_dlambda2);
    s_per_m2_to_ps_per_nm_km(si)
}

/// Material dispersion D_m of the core, ps/(nm·km), using the materials'
/// derivative mode.
pub fn material_dispersion(materials: &Materials, lambda: f64, temperature: f64) -> Result<f64> {
    let d2n = materials
        .linbo3
        .d2n_dlambda2(lambda, temperature, materials.derivative_mode)?;
    Ok(material_dispersion_from_curvature(lambda, d2n))
}

/// `-(n2 / (c n1)) (Δn / λ) Y` in ps/(nm·km).
pub fn waveguide_dispersion_from(n1: f64, n2: f64, lambda: f64, y: f64) -> Result<f64> {
    let dn = relative_index_difference(n1, n2)?;
    let si = -(n2 / (SPEED_OF_LIGHT * n1)) * (dn / um_to_m(lambda)) * y;
    Ok(s_per_m2_to_ps_per_nm_km(si))
}

/// Waveguide dispersion D_w, ps/(nm·km).
pub fn waveguide_dispersion(
    materials: &Materials,
    design: &WaveguideDesign,
    y: YFactor,
    lambda: f64,
    temperature: f64,
) -> Result<f64> {
    design.validate()?;
    let g = resolve_indices(materials, design, lambda, temperature)?;
    let v = normalized_frequency(design.core_width_a, lambda, g.n1, g.n2);
    waveguide_dispersion_from(g.n1, g.n2, lambda, y.value(v))
}

/// Total dispersion D_t = D_m + D_w, ps/(nm·km).
pub fn total_dispersion(
    materials: &Materials,
    design: &WaveguideDesign,
    y: YFactor,
    lambda: f64,
    temperature: f64,
) -> Result<f64> {
    Ok(material_dispersion(materials, lambda, temperature)?
        + waveguide_dispersion(materials, design, y, lambda, temperature)?)
}

/// Per-link spectral slice `(λf - λi) / N_L`, μm.
pub fn spectral_slice_width(num_links: u32, band: [f64; 2]) -> Result<f64> {
    if num_links == 0 {
        return Err(domain("number of links must be at least 1"));
    }
    Ok((band[1] - band[0]) / f64::from(num_links))
}

/// Pulse broadening |D_t| · L · Δλ, ns.
pub fn pulse_broadening(dt: f64, fiber_length_km: f64, delta_lambda_nm: f64) -> Result<f64> {
    if !(fiber_length_km > 0.0) {
        return Err(domain(format!("fiber length must be positive (got {fiber_length_km})")));
    }
    if !(delta_lambda_nm > 0.0) {
        return Err(domain(format!(
            "spectral width must be positive (got {delta_lambda_nm})"
        )));
    }
    Ok(ps_to_ns(dt.abs() * fiber_length_km * delta_lambda_nm))
}

/// MTDM bit rate per channel, `0.25 / Δτ`, Gbit/s for Δτ in ns.
pub fn mtdm_bitrate_per_channel(delta_tau_ns: f64) -> Result<f64> {
    if !(delta_tau_ns > 0.0) {
        return Err(domain(format!(
            "pulse broadening must be positive (got {delta_tau_ns})"
        )));
    }
    Ok(MTDM_FACTOR / delta_tau_ns)
}

/// MTDM bit rate per link, `0.25 N_ch / Δτ`, Gbit/s.
pub fn mtdm_bitrate_per_link(delta_tau_ns: f64, num_channels: u32) -> Result<f64> {
    if num_channels == 0 {
        return Err(domain("number of channels must be at least 1"));
    }
    Ok(f64::from(num_channels) * mtdm_bitrate_per_channel(delta_tau_ns)?)
}

/// All link quantities at one wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionSample {
    pub lambda: f64,
    pub dm: f64,
    pub dw: f64,
    pub dt: f64,
    pub delta_tau_ns: f64,
    pub brm_gbps: f64,
    pub brlink_gbps: f64,
}

pub fn dispersion_sample(
    materials: &Materials,
    design: &WaveguideDesign,
    budget: &LinkBudget,
    lambda: f64,
) -> Result<DispersionSample> {
    budget.validate()?;
    let t = budget.temperature;
    let dm = material_dispersion(materials, lambda, t)?;
    let dw = waveguide_dispersion(materials, design, budget.y_factor, lambda, t)?;
    let dt = dm + dw;
    let delta_tau_ns = pulse_broadening(dt, budget.fiber_length_km, budget.source_linewidth_nm()?)?;
    Ok(DispersionSample {
        lambda,
        dm,
        dw,
        dt,
        delta_tau_ns,
        brm_gbps: mtdm_bitrate_per_channel(delta_tau_ns)?,
        brlink_gbps: mtdm_bitrate_per_link(delta_tau_ns, budget.num_channels)?,
    })
}
