//! Thermal and dispersion model of a LiNbO3-core, PMMA-clad arrayed waveguide
//! grating used as the wavelength router of an MTDM optical link.
//!
//! Wavelengths are in μm and temperatures in °C unless a name says otherwise.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod format;
pub mod link;
pub mod materials;
pub mod selfcheck;
pub mod solver;
pub mod sweep;
pub mod table;
pub mod units;
pub mod waveguide;

pub use error::{Error, Result};
pub use format::format_sig;
pub use link::{dispersion_sample, DispersionSample, LinkBudget, SourceLinewidth, YFactor};
pub use materials::{DerivativeMode, IndexSample, LiNbO3Model, Materials, PmmaModel};
pub use selfcheck::{derivative_self_check, MaterialId, SelfCheckReport};
pub use solver::{bisect, BisectOptions, Root};
pub use sweep::{
    figure_trends, run_figure, run_sweep, Axis, FigureId, FigureOverrides, ParamPath, Quantity, Scenario, SweepSpec,
    TrendCheck,
};
pub use table::{render_manifest, SweepTable};
pub use waveguide::{
    compare_shift, solve_athermal_core_width, thermal_scan, CoreWidthSolution, EffectiveIndexModel, IndexMode,
    ShiftComparison, ThermalResponse, Verdict, WaveguideDesign,
};
