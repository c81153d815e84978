//! Flat `key = value` run configuration.
//!
//! ```text
//! # neo-Hookean shell
//! energy.kind = neo-hookean
//! energy.G = 1.0
//! kinetics.b0 = 1.0
//! kinetics.b1 = 1.0
//! chem.muR0 = 0.0
//! chem.muR1 = 1.0
//! chem.mu_inf = 0.9
//! chem.rhoR = 1.0
//! transport.M_inner = 1.0
//! transport.M_outer = 1.0
//! geom.r0 = 1.0
//! ```
//!
//! Missing keys take the defaults above. Unknown keys, duplicates and
//! unparsable numbers are input errors.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use treadmill_core::strain_energy::{CustomEnergy, MooneyRivlin, NeoHookean, ReducedEnergy};
use treadmill_core::treadmill::ModelParams;

use crate::CliError;

const NUMERIC_KEYS: &[&str] = &[
    "energy.G",
    "energy.C1",
    "energy.C2",
    "kinetics.b0",
    "kinetics.b1",
    "chem.muR0",
    "chem.muR1",
    "chem.mu_inf",
    "chem.rhoR",
    "transport.M_inner",
    "transport.M_outer",
    "geom.r0",
];

/// Material model selected by `energy.kind`.
///
/// The two `stub-*` kinds are deliberately broken energies for exercising
/// `validate`: `stub-linear` has `W = G (lambda - 1)` and `stub-wrong-derivative`
/// is neo-Hookean with `W'` off by a factor of two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnergySpec {
    NeoHookean {
        #[serde(rename = "G")]
        g: f64,
    },
    MooneyRivlin {
        #[serde(rename = "C1")]
        c1: f64,
        #[serde(rename = "C2")]
        c2: f64,
    },
    StubLinear {
        #[serde(rename = "G")]
        g: f64,
    },
    StubWrongDerivative {
        #[serde(rename = "G")]
        g: f64,
    },
}

impl EnergySpec {
    pub fn build(&self) -> Result<Arc<dyn ReducedEnergy>, CliError> {
        let energy: Arc<dyn ReducedEnergy> = match *self {
            EnergySpec::NeoHookean { g } => Arc::new(NeoHookean::new(g)?),
            EnergySpec::MooneyRivlin { c1, c2 } => Arc::new(MooneyRivlin::new(c1, c2)?),
            EnergySpec::StubLinear { g } => Arc::new(CustomEnergy::new(
                "stub-linear",
                move |l| g * (l - 1.0),
                move |_| g,
                |_| 0.0,
            )),
            EnergySpec::StubWrongDerivative { g } => {
                let nh = NeoHookean::new(g)?;
                Arc::new(CustomEnergy::new(
                    "stub-wrong-derivative",
                    move |l| nh.w(l),
                    move |l| 2.0 * nh.dw(l),
                    move |l| nh.d2w(l),
                ))
            }
        };
        Ok(energy)
    }
}

/// Every physical parameter of a run, as read from the config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub energy: EnergySpec,
    pub b0: f64,
    pub b1: f64,
    #[serde(rename = "muR0")]
    pub mu_r0: f64,
    #[serde(rename = "muR1")]
    pub mu_r1: f64,
    pub mu_inf: f64,
    #[serde(rename = "rhoR")]
    pub rho_r: f64,
    #[serde(rename = "M_inner")]
    pub m_inner: f64,
    #[serde(rename = "M_outer")]
    pub m_outer: f64,
    pub r0: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            energy: EnergySpec::NeoHookean { g: 1.0 },
            b0: 1.0,
            b1: 1.0,
            mu_r0: 0.0,
            mu_r1: 1.0,
            mu_inf: 0.9,
            rho_r: 1.0,
            m_inner: 1.0,
            m_outer: 1.0,
            r0: 1.0,
        }
    }
}

impl RunConfig {
    /// Reads `path` (if any) and then applies `overrides`, each `key=value`.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut entries = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Input(format!("cannot read config {}: {e}", path.display()))
                })?;
                parse_entries(&text)?
            }
            None => BTreeMap::new(),
        };
        for item in overrides {
            let (key, value) = split_entry(item)
                .ok_or_else(|| CliError::Input(format!("override `{item}` is not key=value")))?;
            check_key(key)?;
            entries.insert(key.to_string(), value.to_string());
        }
        Self::from_entries(&entries)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::from_entries(&parse_entries(text)?)
    }

    fn from_entries(entries: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let defaults = RunConfig::default();
        let num = |key: &str, default: f64| -> Result<f64, CliError> {
            match entries.get(key) {
                None => Ok(default),
                Some(raw) => {
                    let v: f64 = raw
                        .parse()
                        .map_err(|_| CliError::Input(format!("{key}: `{raw}` is not a number")))?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(CliError::Input(format!(
                            "{key}: value must be finite, got {raw}"
                        )))
                    }
                }
            }
        };

        let g = num("energy.G", 1.0)?;
        let kind = entries
            .get("energy.kind")
            .map(String::as_str)
            .unwrap_or("neo-hookean");
        let energy = match kind {
            "neo-hookean" => EnergySpec::NeoHookean { g },
            "mooney-rivlin" => EnergySpec::MooneyRivlin {
                c1: num("energy.C1", 0.5)?,
                c2: num("energy.C2", 0.0)?,
            },
            "stub-linear" => EnergySpec::StubLinear { g },
            "stub-wrong-derivative" => EnergySpec::StubWrongDerivative { g },
            other => {
                return Err(CliError::Input(format!(
                    "energy.kind: unknown material `{other}`"
                )))
            }
        };

        Ok(RunConfig {
            energy,
            b0: num("kinetics.b0", defaults.b0)?,
            b1: num("kinetics.b1", defaults.b1)?,
            mu_r0: num("chem.muR0", defaults.mu_r0)?,
            mu_r1: num("chem.muR1", defaults.mu_r1)?,
            mu_inf: num("chem.mu_inf", defaults.mu_inf)?,
            rho_r: num("chem.rhoR", defaults.rho_r)?,
            m_inner: num("transport.M_inner", defaults.m_inner)?,
            m_outer: num("transport.M_outer", defaults.m_outer)?,
            r0: num("geom.r0", defaults.r0)?,
        })
    }

    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        if !(self.m_outer > 0.0) {
            return Err(CliError::Input(format!(
                "transport.M_outer must be positive, got {}",
                self.m_outer
            )));
        }
        Ok(ModelParams::new(
            self.energy.build()?,
            self.b0,
            self.b1,
            self.mu_r0,
            self.mu_r1,
            self.mu_inf,
            self.rho_r,
            self.m_inner,
            self.r0,
        )?)
    }
}

fn split_entry(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim(), v.trim()))
}

fn check_key(key: &str) -> Result<(), CliError> {
    if key == "energy.kind" || NUMERIC_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(CliError::Input(format!("unknown config key `{key}`")))
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut entries = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = split_entry(line)
            .ok_or_else(|| CliError::Input(format!("line {}: expected key = value", no + 1)))?;
        check_key(key).map_err(|e| CliError::Input(format!("line {}: {e}", no + 1)))?;
        if value.is_empty() {
            return Err(CliError::Input(format!(
                "line {}: `{key}` has no value",
                no + 1
            )));
        }
        if entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Input(format!(
                "line {}: duplicate key `{key}`",
                no + 1
            )));
        }
    }
    Ok(entries)
}
