use std::path::{Path, PathBuf};

use awg_core::sweep::{stepped_grid, MAX_GRID_POINTS};
use awg_core::{Axis, FigureOverrides, LinkBudget, Materials, ParamPath, Quantity, SweepSpec, WaveguideDesign};
use serde::Deserialize;

use crate::error::CliError;

/// Contents of a `--config` file. Every section and key is optional; omitted
/// values take the built-in defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub materials: Materials,
    pub design: WaveguideDesign,
    pub budget: LinkBudget,
    pub grids: GridConfig,
    pub figures: FigureOverrides,
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

/// Grid strings are `start:stop:step` or a comma-separated list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// μm, for `materials` and `selfcheck`.
    pub lambda: String,
    /// °C, for `materials` and `selfcheck`.
    pub temperature: String,
    /// °C, for `athermal`.
    pub thermal: String,
    /// μm, for `dispersion`.
    pub dispersion_lambda: String,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            lambda: "1.0:1.64:0.05".into(),
            temperature: "20:70:5".into(),
            thermal: "20:70:1".into(),
            dispersion_lambda: "1.0:1.64:0.01".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub id: String,
    pub axes: Vec<AxisConfig>,
    pub outputs: Vec<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            id: "sweep".into(),
            axes: Vec::new(),
            outputs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub path: String,
    pub values: String,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub emit_gnuplot: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

impl SweepConfig {
    pub fn to_spec(&self, base: awg_core::Scenario) -> Result<SweepSpec, CliError> {
        let axes = self
            .axes
            .iter()
            .map(|a| {
                Ok(Axis {
                    path: a
                        .path
                        .parse::<ParamPath>()
                        .map_err(|e| CliError::Config(e.to_string()))?,
                    values: parse_grid(&a.values)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let outputs = self
            .outputs
            .iter()
            .map(|q| q.parse::<Quantity>().map_err(|e| CliError::Config(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SweepSpec {
            scenario_id: self.id.clone(),
            base,
            axes,
            outputs,
        })
    }
}

/// Parses `start:stop:step` (inclusive) or `v1,v2,...`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("invalid grid `{s}`: {why}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        stepped_grid(num(start)?, num(stop)?, num(step)?).map_err(|e| bad(&e.to_string()))?
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() || values.len() > MAX_GRID_POINTS {
        return Err(bad("empty or oversized"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite value"));
    }
    Ok(values)
}

/// Parses `lo:hi`.
pub fn parse_bracket(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("invalid bracket `{s}` (expected lo:hi)"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("20:70:5").unwrap().len(), 11);
        assert_eq!(parse_grid("1.0:1.64:0.05").unwrap().len(), 13);
        assert_eq!(parse_grid("27, 45,70").unwrap(), vec![27.0, 45.0, 70.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("2:1:0.1").is_err());
        assert_eq!(parse_bracket("0.1:20").unwrap(), (0.1, 20.0));
        assert!(parse_bracket("0.1").is_err());
    }

    #[test]
    fn full_config_parses() {
        let c = RunConfig::parse(
            r#"
            [materials]
            derivative_mode = "paper"
            [materials.linbo3]
            a1 = 5.35583
            [design]
            n1_design = 2.2
            index_mode = "material"
            nc_model = "mode"
            [budget]
            num_links = 12
            y_factor = "constant:0.3"
            [grids]
            thermal = "20,27,70"
            [figures]
            temperatures = [27.0, 70.0]
            [sweep]
            id = "grid"
            outputs = ["n_c"]
            axes = [{ path = "design.core_width_a", values = "3,5" }]
            [output]
            emit_gnuplot = true
            "#,
        )
        .unwrap();
        assert_eq!(c.design.n1_design, 2.2);
        assert_eq!(c.budget.num_links, 12);
        assert_eq!(c.figures.temperatures, vec![27.0, 70.0]);
        assert!(c.output.emit_gnuplot);
        let spec = c.sweep.unwrap().to_spec(Default::default()).unwrap();
        assert_eq!(spec.axes[0].values, vec![3.0, 5.0]);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse("[design]\nn3 = 1.0\n").is_err());
        assert!(RunConfig::parse("[desing]\n").is_err());
        assert!(RunConfig::parse("[budget]\ny_factor = \"sometimes\"\n").is_err());
    }

    #[test]
    fn empty_config_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }
}
