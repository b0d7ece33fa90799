//! Bracketed scalar root finding.

use serde::Serialize;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectOptions {
    /// Accepted |residual| at the returned point.
    pub residual_tol: f64,
    /// Bracket half-width at which iteration stops.
    pub x_tol: f64,
    pub max_iterations: usize,
}

impl Default for BisectOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-9,
            x_tol: 1e-12,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn eval<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let y = f(x)?;
    if !y.is_finite() {
        return Err(domain(format!("residual is not finite at {x}")));
    }
    Ok(y)
}

/// Bisection on `[lo, hi]`. The endpoints must give residuals of opposite
/// sign (or one of them must be an exact root).
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, opts: BisectOptions) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Validation(format!("invalid bracket [{lo}, {hi}]")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = eval(&mut f, lo)?;
    let f_hi = eval(&mut f, hi)?;
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }

    let mut mid = lo;
    let mut f_mid = f_lo;
    for iteration in 1..=opts.max_iterations {
        mid = lo + 0.5 * (hi - lo);
        f_mid = eval(&mut f, mid)?;
        if f_mid == 0.0 || 0.5 * (hi - lo) <= opts.x_tol {
            if f_mid.abs() < opts.residual_tol {
                return Ok(Root {
                    x: mid,
                    residual: f_mid,
                    iterations: iteration,
                });
            }
            // bracket collapsed onto a jump rather than a root
            return Err(Error::Convergence {
                iterations: iteration,
                x: mid,
                residual: f_mid,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence {
        iterations: opts.max_iterations,
        x: mid,
        residual: f_mid,
    })
}
