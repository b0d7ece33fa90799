//! Shared fixtures for the criterion benchmarks.

use awg_core::sweep::stepped_grid;
use awg_core::{Axis, ParamPath, Quantity, Scenario, SweepSpec};

/// 14 wavelengths (μm) by 11 temperatures (°C) over the working band.
pub fn material_grid() -> (Vec<f64>, Vec<f64>) {
    let mut lambdas = stepped_grid(1.0, 1.6, 0.05).expect("grid");
    lambdas.push(1.64);
    (lambdas, stepped_grid(20.0, 70.0, 5.0).expect("grid"))
}

pub fn thermal_grid() -> Vec<f64> {
    stepped_grid(20.0, 70.0, 1.0).expect("grid")
}

/// A three-axis sweep of `side³` points over core index, core width and temperature.
pub fn cube_sweep(side: usize) -> SweepSpec {
    let lin = |lo: f64, hi: f64| -> Vec<f64> {
        (0..side)
            .map(|i| lo + (hi - lo) * i as f64 / (side - 1).max(1) as f64)
            .collect()
    };
    SweepSpec {
        scenario_id: "cube".into(),
        base: Scenario::default(),
        axes: vec![
            Axis {
                path: ParamPath::N1Design,
                values: lin(2.2, 2.46),
            },
            Axis {
                path: ParamPath::CoreWidth,
                values: lin(3.0, 7.0),
            },
            Axis {
                path: ParamPath::Temperature,
                values: lin(20.0, 70.0),
            },
        ],
        outputs: vec![Quantity::DeltaLambda, Quantity::Dt, Quantity::Brm],
    }
}
