//! TOML config schema and conversion into library types.

use crate::Failure;
use optomech::model::bose_occupation;
use optomech::optimize::{BoundedParam, Objective, OptimizationSpec, ParamAxis, SweepSpec};
use optomech::steadystate::Regime;
use optomech::{CavityParams, FrequencyConfig, MechanicalMode, OpoParams, SystemModel, C64};
use serde::Deserialize;
use std::path::Path;

/// Whole config file; frequencies are in ω₊ units unless `[units]` is given.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub system: SystemSection,
    pub opo: OpoSection,
    #[serde(default)]
    pub modes: Vec<ModeSection>,
    pub units: Option<UnitsSection>,
    pub sweep: Option<SweepSection>,
    pub optimize: Option<OptimizeSection>,
    pub network: Option<NetworkSection>,
    pub spectrum: Option<SpectrumSection>,
}

/// Cavity and drive frequencies.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub epsilon_l: f64,
    pub epsilon_a: f64,
    pub kappa_a: f64,
    #[serde(default)]
    pub kappa_a_prime: f64,
}

/// Squeezing source parameters.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpoSection {
    pub chi: f64,
    pub kappa_c: f64,
    #[serde(default)]
    pub kappa_c_prime: f64,
}

/// One mechanical resonator; `n_thermal` falls back to `[units] temperature_k`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSection {
    pub omega: f64,
    pub gamma: f64,
    pub coupling: f64,
    pub n_thermal: Option<f64>,
}

/// Physical-unit mode: frequencies in Hz, thermal occupations from Kelvin.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSection {
    pub reference_hz: f64,
    pub temperature_k: Option<f64>,
}

/// Grid for the `sweep` subcommand.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: Option<String>,
    pub ratio: Option<f64>,
}

/// Search box for the `optimize` subcommand.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSection {
    pub objective: Option<String>,
    pub lattice: Option<usize>,
    pub max_iter: Option<usize>,
    pub param: Vec<OptParamSection>,
}

/// One bounded optimization axis.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptParamSection {
    pub axis: String,
    pub lo: f64,
    pub hi: f64,
    pub ratio: Option<f64>,
}

/// Star-network layout for the `network` subcommand.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub pairs: usize,
    pub delta_unit: f64,
    pub coupling_odd: f64,
    pub coupling_even: f64,
}

/// Frequency grid for the `spectrum` subcommand.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl ConfigFile {
    /// Reads and parses a config file.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }

    /// Builds the validated model, applying `[units]` if present.
    pub fn model(&self) -> Result<SystemModel, Failure> {
        let scale = match &self.units {
            Some(u) if !(u.reference_hz > 0.0) => {
                return Err(Failure::Config(format!(
                    "units.reference_hz must be > 0, got {}",
                    u.reference_hz
                )))
            }
            Some(u) => u.reference_hz,
            None => 1.0,
        };
        let mut modes = Vec::with_capacity(self.modes.len());
        for (k, m) in self.modes.iter().enumerate() {
            let n_thermal = match (m.n_thermal, &self.units) {
                (Some(n), _) => n,
                (None, Some(u)) => match u.temperature_k {
                    Some(t) => bose_occupation(m.omega, t),
                    None => 0.0,
                },
                (None, None) => 0.0,
            };
            if n_thermal < 0.0 {
                return Err(Failure::Config(format!(
                    "modes[{k}].n_thermal must be >= 0, got {n_thermal}"
                )));
            }
            modes.push(MechanicalMode {
                omega: m.omega / scale,
                gamma: m.gamma / scale,
                n_thermal,
                coupling: C64::new(m.coupling / scale, 0.0),
            });
        }
        let model = SystemModel {
            cavity: CavityParams {
                kappa_a: self.system.kappa_a / scale,
                kappa_a_prime: self.system.kappa_a_prime / scale,
            },
            opo: OpoParams {
                chi: self.opo.chi / scale,
                kappa_c: self.opo.kappa_c / scale,
                kappa_c_prime: self.opo.kappa_c_prime / scale,
            },
            freq: FrequencyConfig {
                epsilon_l: self.system.epsilon_l / scale,
                epsilon_a: self.system.epsilon_a / scale,
            },
            modes,
        };
        model.validate()?;
        Ok(model)
    }

    /// Sweep grid from the `[sweep]` section.
    pub fn sweep_spec(&self) -> Result<SweepSpec, Failure> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| Failure::Config("missing [sweep] section".into()))?;
        let log = match s.scale.as_deref() {
            None | Some("linear") => false,
            Some("log") => true,
            Some(other) => {
                return Err(Failure::Config(format!(
                    "sweep.scale must be \"linear\" or \"log\", got \"{other}\""
                )))
            }
        };
        Ok(SweepSpec {
            axis: parse_axis("sweep.param", &s.param, s.ratio)?,
            min: s.min,
            max: s.max,
            count: s.count,
            log,
        })
    }

    /// Optimizer setup from the `[optimize]` section.
    pub fn optimization_spec(
        &self,
        regime: Regime,
        pair: (usize, usize),
        time: f64,
    ) -> Result<OptimizationSpec, Failure> {
        let o = self
            .optimize
            .as_ref()
            .ok_or_else(|| Failure::Config("missing [optimize] section".into()))?;
        let objective = match o.objective.as_deref() {
            None | Some("log_negativity") => Objective::LogNegativity,
            Some("squeezing_db") => Objective::SqueezingDb,
            Some(other) => {
                return Err(Failure::Config(format!(
                    "optimize.objective must be \"log_negativity\" or \"squeezing_db\", got \"{other}\""
                )))
            }
        };
        if o.param.is_empty() {
            return Err(Failure::Config("optimize.param must list at least one axis".into()));
        }
        let mut params = Vec::with_capacity(o.param.len());
        for (k, p) in o.param.iter().enumerate() {
            params.push(BoundedParam {
                axis: parse_axis(&format!("optimize.param[{k}].axis"), &p.axis, p.ratio)?,
                lo: p.lo,
                hi: p.hi,
            });
        }
        Ok(OptimizationSpec {
            params,
            objective,
            regime,
            pair,
            time,
            lattice: o.lattice.unwrap_or(4),
            max_iter: o.max_iter.unwrap_or(600),
        })
    }

    /// Star layout from the `[network]` section.
    pub fn network_section(&self) -> Result<&NetworkSection, Failure> {
        self.network
            .as_ref()
            .ok_or_else(|| Failure::Config("missing [network] section".into()))
    }
}

/// Maps a config axis name onto the library axis; `ratio` only applies to r_plus.
pub fn parse_axis(key: &str, name: &str, ratio: Option<f64>) -> Result<ParamAxis, Failure> {
    let axis = match name {
        "epsilon_l" => ParamAxis::EpsilonL,
        "epsilon_a" => ParamAxis::EpsilonA,
        "r_plus" => ParamAxis::RPlus { ratio: ratio.unwrap_or(1.0 / 3.0) },
        "g_plus" => ParamAxis::GPlus,
        "g_minus" => ParamAxis::GMinus,
        "kappa_a" => ParamAxis::KappaA,
        "kappa_a_prime" => ParamAxis::KappaAPrime,
        "kappa_c_prime" => ParamAxis::KappaCPrime,
        "gamma" => ParamAxis::Gamma,
        "n_thermal" => ParamAxis::NThermal,
        "omega_minus" => ParamAxis::OmegaMinus,
        "time" => ParamAxis::Time,
        other => {
            return Err(Failure::Config(format!(
                "{key}: unknown axis \"{other}\" (expected one of epsilon_l, epsilon_a, r_plus, \
                 g_plus, g_minus, kappa_a, kappa_a_prime, kappa_c_prime, gamma, n_thermal, \
                 omega_minus, time)"
            )))
        }
    };
    if ratio.is_some() && !matches!(axis, ParamAxis::RPlus { .. }) {
        return Err(Failure::Config(format!("{key}: ratio only applies to r_plus")));
    }
    Ok(axis)
}
