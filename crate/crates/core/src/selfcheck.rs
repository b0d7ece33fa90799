//! Finite-difference validation of the closed-form material derivatives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{DerivativeMode, Materials};

/// Central-difference step for dn/dλ, μm.
pub const FD_STEP_LAMBDA: f64 = 1e-5;
/// Step for the second-order central difference d²n/dλ², μm.
pub const FD_STEP_LAMBDA2: f64 = 1e-4;
/// Central-difference step for dn/dT, °C.
pub const FD_STEP_TEMPERATURE: f64 = 1e-3;

pub const FIRST_DERIVATIVE_TOLERANCE: f64 = 1e-5;
pub const SECOND_DERIVATIVE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaterialId {
    #[serde(alias = "linbo3")]
    LiNbO3,
    Pmma,
}

impl MaterialId {
    pub fn as_str(self) -> &'static str {
        match self {
            MaterialId::LiNbO3 => "LiNbO3",
            MaterialId::Pmma => "PMMA",
        }
    }
}

/// Worst-case agreement of one analytic derivative with its finite difference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub quantity: &'static str,
    pub max_rel_error: f64,
    pub worst_lambda: f64,
    pub worst_temperature: f64,
    /// `None` when the quantity is reported but not gated.
    pub tolerance: Option<f64>,
}

impl CheckEntry {
    pub fn passed(&self) -> bool {
        self.tolerance.is_none_or(|tol| self.max_rel_error < tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfCheckReport {
    pub material: MaterialId,
    pub points: usize,
    pub entries: Vec<CheckEntry>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(CheckEntry::passed)
    }

    pub fn entry(&self, quantity: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.quantity == quantity)
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "self-check {} over {} points", self.material.as_str(), self.points)?;
        for e in &self.entries {
            let verdict = match (e.tolerance, e.passed()) {
                (None, _) => "REPORT".to_string(),
                (Some(tol), true) => format!("PASS (< {tol:e})"),
                (Some(tol), false) => format!("FAIL (>= {tol:e})"),
            };
            writeln!(
                f,
                "  {:<14} max rel err {:.3e} at λ={} μm T={} °C  {}",
                e.quantity, e.max_rel_error, e.worst_lambda, e.worst_temperature, verdict
            )?;
        }
        Ok(())
    }
}

fn rel_error(analytic: f64, reference: f64) -> f64 {
    let scale = reference.abs();
    if scale == 0.0 {
        (analytic - reference).abs()
    } else {
        (analytic - reference).abs() / scale
    }
}

struct Tracker {
    quantity: &'static str,
    tolerance: Option<f64>,
    worst: f64,
    at: (f64, f64),
}

impl Tracker {
    fn new(quantity: &'static str, tolerance: Option<f64>) -> Self {
        Self {
            quantity,
            tolerance,
            worst: 0.0,
            at: (f64::NAN, f64::NAN),
        }
    }

    fn record(&mut self, err: f64, lambda: f64, t: f64) {
        if err > self.worst || self.at.0.is_nan() {
            self.worst = err;
            self.at = (lambda, t);
        }
    }

    fn finish(self) -> CheckEntry {
        CheckEntry {
            quantity: self.quantity,
            max_rel_error: self.worst,
            worst_lambda: self.at.0,
            worst_temperature: self.at.1,
            tolerance: self.tolerance,
        }
    }
}

/// Compares every analytic derivative of `material` against central finite
/// differences of its index function over the Cartesian grid.
pub fn derivative_self_check(
    materials: &Materials,
    material: MaterialId,
    lambdas: &[f64],
    temperatures: &[f64],
) -> Result<SelfCheckReport> {
    if lambdas.is_empty() || temperatures.is_empty() {
        return Err(Error::Validation("self-check grids must be non-empty".into()));
    }

    // PMMA curvature changes sign near 1.47 μm, where a relative measure is
    // dominated by difference roundoff, so it is reported only.
    let d2_tol = match (material, materials.derivative_mode) {
        (MaterialId::LiNbO3, DerivativeMode::Exact) => Some(SECOND_DERIVATIVE_TOLERANCE),
        _ => None,
    };
    let mut slope = Tracker::new("dn_dlambda", Some(FIRST_DERIVATIVE_TOLERANCE));
    let mut curvature = Tracker::new("d2n_dlambda2", d2_tol);
    let mut thermal = Tracker::new("dn_dT", Some(FIRST_DERIVATIVE_TOLERANCE));

    let index = |l: f64, t: f64| -> Result<f64> {
        match material {
            MaterialId::LiNbO3 => materials.linbo3.index(l, t),
            MaterialId::Pmma => materials.pmma.index(l, t),
        }
    };

    for &l in lambdas {
        for &t in temperatures {
            let s = match material {
                MaterialId::LiNbO3 => materials.core_sample(l, t)?,
                MaterialId::Pmma => materials.cladding_sample(l, t)?,
            };

            let h = FD_STEP_LAMBDA;
            let fd1 = (index(l + h, t)? - index(l - h, t)?) / (2.0 * h);
            slope.record(rel_error(s.dn_dlambda, fd1), l, t);

            let h2 = FD_STEP_LAMBDA2;
            let fd2 = (index(l + h2, t)? - 2.0 * s.n + index(l - h2, t)?) / (h2 * h2);
            curvature.record(rel_error(s.d2n_dlambda2, fd2), l, t);

            let ht = FD_STEP_TEMPERATURE;
            let fdt = (index(l, t + ht)? - index(l, t - ht)?) / (2.0 * ht);
            thermal.record(rel_error(s.dn_dt, fdt), l, t);
        }
    }

    Ok(SelfCheckReport {
        material,
        points: lambdas.len() * temperatures.len(),
        entries: vec![slope.finish(), curvature.finish(), thermal.finish()],
    })
}
