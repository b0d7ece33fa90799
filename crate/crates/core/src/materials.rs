//! Temperature-dependent Sellmeier models for the LiNbO₃ core and the PMMA
//! cladding, with closed-form wavelength and temperature derivatives.
//!
//! Wavelengths are in μm and temperatures in °C throughout; the coefficient
//! sets are fitted in exactly those units.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Smallest accepted magnitude of a Sellmeier pole denominator.
pub const POLE_EPSILON: f64 = 1e-12;

/// Wavelength validity guard, μm.
pub const LAMBDA_RANGE: (f64, f64) = (0.5, 5.0);
/// Temperature validity guard, °C.
pub const TEMPERATURE_RANGE: (f64, f64) = (0.0, 100.0);

/// The ratio the printed PMMA thermo-optic formula rounds to 1.635.
pub const PMMA_PRINTED_POLE_RATIO: f64 = 1.635;

/// Which form of the LiNbO₃ second wavelength derivative to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    /// The closed form, which drops the `-(dn/dλ)²/n` term.
    #[serde(alias = "paper")]
    PaperLiteral,
    /// The true second derivative of the Sellmeier expression.
    #[default]
    Exact,
}

impl DerivativeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DerivativeMode::PaperLiteral => "paper",
            DerivativeMode::Exact => "exact",
        }
    }
}

impl std::str::FromStr for DerivativeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paper-literal" => Ok(DerivativeMode::PaperLiteral),
            "exact" => Ok(DerivativeMode::Exact),
            other => Err(Error::Validation(format!(
                "unknown derivative mode `{other}` (expected paper|exact)"
            ))),
        }
    }
}

/// Index and derivatives of one material at one (λ, T).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexSample {
    pub lambda: f64,
    pub temperature: f64,
    pub n: f64,
    pub dn_dlambda: f64,
    pub d2n_dlambda2: f64,
    pub dn_dt: f64,
}

fn check_inputs(lambda: f64, temperature: f64, t_open_at_zero: bool) -> Result<()> {
    if !lambda.is_finite() || lambda < LAMBDA_RANGE.0 || lambda > LAMBDA_RANGE.1 {
        return Err(domain(format!(
            "wavelength {lambda} μm outside [{}, {}]",
            LAMBDA_RANGE.0, LAMBDA_RANGE.1
        )));
    }
    let low_ok = if t_open_at_zero {
        temperature > TEMPERATURE_RANGE.0
    } else {
        temperature >= TEMPERATURE_RANGE.0
    };
    if !temperature.is_finite() || !low_ok || temperature > TEMPERATURE_RANGE.1 {
        return Err(domain(format!(
            "temperature {temperature} °C outside the supported range"
        )));
    }
    Ok(())
}

fn pole(lambda_sq: f64, root: f64, what: &str) -> Result<f64> {
    let d = lambda_sq - root * root;
    if d.abs() < POLE_EPSILON {
        return Err(domain(format!("wavelength sits on the {what} pole")));
    }
    Ok(d)
}

/// LiNbO₃ core: temperature-dependent Sellmeier equation with
/// `H = T² - T0²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LiNbO3Model {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a7: f64,
    pub a8: f64,
    pub a9: f64,
    pub a10: f64,
    pub t0: f64,
}

impl Default for LiNbO3Model {
    fn default() -> Self {
        Self {
            a1: 5.35583,
            a2: 4.629e-7,
            a3: 0.100473,
            a4: 3.862e-8,
            a5: 0.20692,
            a6: -0.89e-8,
            a7: 100.0,
            a8: 2.657e-5,
            a9: 11.34927,
            a10: 0.01533,
            t0: 27.0,
        }
    }
}

/// Temperature-collapsed coefficients and pole denominators at one (λ, T).
#[derive(Debug, Clone, Copy)]
struct LnTerms {
    lambda: f64,
    a34: f64,
    a56: f64,
    a78: f64,
    /// λ² - A56²
    d1: f64,
    /// λ² - A9²
    d2: f64,
    n: f64,
}

impl LiNbO3Model {
    /// `H = T² - T0²`.
    pub fn h(&self, temperature: f64) -> f64 {
        temperature * temperature - self.t0 * self.t0
    }

    fn terms(&self, lambda: f64, temperature: f64) -> Result<LnTerms> {
        check_inputs(lambda, temperature, false)?;
        let h = self.h(temperature);
        let a12 = self.a1 + self.a2 * h;
        let a34 = self.a3 + self.a4 * h;
        let a56 = self.a5 + self.a6 * h;
        let a78 = self.a7 + self.a8 * h;
        let l2 = lambda * lambda;
        let d1 = pole(l2, a56, "UV")?;
        let d2 = pole(l2, self.a9, "IR")?;
        let n_sq = a12 + a34 / d1 + a78 / d2 - self.a10 * l2;
        if n_sq <= 0.0 || !n_sq.is_finite() {
            return Err(domain(format!(
                "LiNbO3 n² = {n_sq} is not positive at λ = {lambda}, T = {temperature}"
            )));
        }
        Ok(LnTerms {
            lambda,
            a34,
            a56,
            a78,
            d1,
            d2,
            n: n_sq.sqrt(),
        })
    }

    pub fn index(&self, lambda: f64, temperature: f64) -> Result<f64> {
        Ok(self.terms(lambda, temperature)?.n)
    }

    fn dn_dlambda_from(&self, t: &LnTerms) -> f64 {
        let bracket = t.a34 / (t.d1 * t.d1) + t.a78 / (t.d2 * t.d2) + self.a10;
        -t.lambda / t.n * bracket
    }

    /// First wavelength derivative, μm⁻¹.
    pub fn dn_dlambda(&self, lambda: f64, temperature: f64) -> Result<f64> {
        let t = self.terms(lambda, temperature)?;
        Ok(self.dn_dlambda_from(&t))
    }

    fn d2n_from(&self, t: &LnTerms, mode: DerivativeMode) -> f64 {
        let l2 = t.lambda * t.lambda;
        let bracket = t.a34 * (t.d1 - 4.0 * l2) / (t.d1 * t.d1 * t.d1)
            + t.a78 * (t.d2 - 4.0 * l2) / (t.d2 * t.d2 * t.d2)
            + self.a10;
        let printed = -bracket / t.n;
        match mode {
            DerivativeMode::PaperLiteral => printed,
            DerivativeMode::Exact => {
                let slope = self.dn_dlambda_from(t);
                printed - slope * slope / t.n
            }
        }
    }

    /// Second wavelength derivative, μm⁻².
    pub fn d2n_dlambda2(&self, lambda: f64, temperature: f64, mode: DerivativeMode) -> Result<f64> {
        let t = self.terms(lambda, temperature)?;
        Ok(self.d2n_from(&t, mode))
    }

    fn dn_dt_from(&self, t: &LnTerms, temperature: f64) -> f64 {
        let l2 = t.lambda * t.lambda;
        let uv = ((l2 - t.a56 * t.a56) * self.a4 + 2.0 * self.a6 * t.a56 * t.a34) / (t.d1 * t.d1);
        let ir = self.a8 / t.d2;
        temperature / t.n * (self.a2 + uv + ir)
    }

    /// Thermo-optic coefficient, °C⁻¹.
    pub fn dn_dt(&self, lambda: f64, temperature: f64) -> Result<f64> {
        let t = self.terms(lambda, temperature)?;
        Ok(self.dn_dt_from(&t, temperature))
    }

    pub fn sample(&self, lambda: f64, temperature: f64, mode: DerivativeMode) -> Result<IndexSample> {
        let t = self.terms(lambda, temperature)?;
        Ok(IndexSample {
            lambda,
            temperature,
            n: t.n,
            dn_dlambda: self.dn_dlambda_from(&t),
            d2n_dlambda2: self.d2n_from(&t, mode),
            dn_dt: self.dn_dt_from(&t, temperature),
        })
    }
}

/// PMMA cladding: three-term Sellmeier equation whose first two pole
/// wavelengths scale linearly with `T / T0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PmmaModel {
    pub c1: f64,
    pub c2_base: f64,
    pub c3: f64,
    pub c4_base: f64,
    pub c5: f64,
    pub c6: f64,
    pub t0: f64,
}

impl Default for PmmaModel {
    fn default() -> Self {
        Self {
            c1: 0.4963,
            c2_base: 0.0718,
            c3: 0.6965,
            c4_base: 0.1174,
            c5: 0.3223,
            c6: 9.237,
            t0: 27.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct PmmaTerms {
    lambda: f64,
    c2: f64,
    c4: f64,
    d2: f64,
    d4: f64,
    d6: f64,
    n: f64,
}

impl PmmaModel {
    /// Pole wavelengths `(C2, C4)` at `temperature`.
    pub fn poles(&self, temperature: f64) -> (f64, f64) {
        let scale = temperature / self.t0;
        (self.c2_base * scale, self.c4_base * scale)
    }

    fn terms(&self, lambda: f64, temperature: f64) -> Result<PmmaTerms> {
        check_inputs(lambda, temperature, true)?;
        let (c2, c4) = self.poles(temperature);
        let l2 = lambda * lambda;
        let d2 = pole(l2, c2, "first")?;
        let d4 = pole(l2, c4, "second")?;
        let d6 = pole(l2, self.c6, "third")?;
        let n_sq = 1.0 + self.c1 * l2 / d2 + self.c3 * l2 / d4 + self.c5 * l2 / d6;
        if n_sq <= 0.0 || !n_sq.is_finite() {
            return Err(domain(format!(
                "PMMA n² = {n_sq} is not positive at λ = {lambda}, T = {temperature}"
            )));
        }
        Ok(PmmaTerms {
            lambda,
            c2,
            c4,
            d2,
            d4,
            d6,
            n: n_sq.sqrt(),
        })
    }

    pub fn index(&self, lambda: f64, temperature: f64) -> Result<f64> {
        Ok(self.terms(lambda, temperature)?.n)
    }

    fn pole_terms(&self, t: &PmmaTerms) -> [(f64, f64, f64); 3] {
        [(self.c1, t.c2, t.d2), (self.c3, t.c4, t.d4), (self.c5, self.c6, t.d6)]
    }

    fn dn_dlambda_from(&self, t: &PmmaTerms) -> f64 {
        // d(n²)/dλ = Σ -2λ Cᵢ Bᵢ² / (λ² - Bᵢ²)²
        let dn_sq: f64 = self
            .pole_terms(t)
            .iter()
            .map(|&(c, b, d)| -2.0 * t.lambda * c * b * b / (d * d))
            .sum();
        dn_sq / (2.0 * t.n)
    }

    /// First wavelength derivative, μm⁻¹.
    pub fn dn_dlambda(&self, lambda: f64, temperature: f64) -> Result<f64> {
        let t = self.terms(lambda, temperature)?;
        Ok(self.dn_dlambda_from(&t))
    }

    fn d2n_from(&self, t: &PmmaTerms) -> f64 {
        let l2 = t.lambda * t.lambda;
        let d2n_sq: f64 = self
            .pole_terms(t)
            .iter()
            .map(|&(c, b, d)| 2.0 * c * b * b * (3.0 * l2 + b * b) / (d * d * d))
            .sum();
        let slope = self.dn_dlambda_from(t);
        (0.5 * d2n_sq - slope * slope) / t.n
    }

    /// Second wavelength derivative, μm⁻².
    pub fn d2n_dlambda2(&self, lambda: f64, temperature: f64) -> Result<f64> {
        let t = self.terms(lambda, temperature)?;
        Ok(self.d2n_from(&t))
    }

    fn dn_dt_from(&self, t: &PmmaTerms) -> f64 {
        let l2 = t.lambda * t.lambda;
        let ratio = self.c4_base / self.c2_base;
        l2 * self.c2_base / (t.n * self.t0) * (self.c1 * t.c2 / (t.d2 * t.d2) + ratio * self.c3 * t.c4 / (t.d4 * t.d4))
    }

    /// Thermo-optic coefficient, °C⁻¹. Positive under this model.
    pub fn dn_dt(&self, lambda: f64, temperature: f64) -> Result<f64> {
        let t = self.terms(lambda, temperature)?;
        Ok(self.dn_dt_from(&t))
    }

    pub fn sample(&self, lambda: f64, temperature: f64) -> Result<IndexSample> {
        let t = self.terms(lambda, temperature)?;
        Ok(IndexSample {
            lambda,
            temperature,
            n: t.n,
            dn_dlambda: self.dn_dlambda_from(&t),
            d2n_dlambda2: self.d2n_from(&t),
            dn_dt: self.dn_dt_from(&t),
        })
    }
}

/// The core/cladding material pair plus the derivative-mode flag.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Materials {
    pub linbo3: LiNbO3Model,
    pub pmma: PmmaModel,
    pub derivative_mode: DerivativeMode,
}

impl Materials {
    pub fn core_sample(&self, lambda: f64, temperature: f64) -> Result<IndexSample> {
        self.linbo3.sample(lambda, temperature, self.derivative_mode)
    }

    pub fn cladding_sample(&self, lambda: f64, temperature: f64) -> Result<IndexSample> {
        self.pmma.sample(lambda, temperature)
    }
}
