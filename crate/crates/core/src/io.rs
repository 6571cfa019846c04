//! JSON model files.
//!
//! ```json
//! {
//!   "states": ["0", "1", "goal"],
//!   "actions": { "0": ["a"], "1": ["a", "b"], "goal": ["stay"] },
//!   "kernel": {
//!     "0/a": [{ "to": "1", "weight": 1.0,
//!               "sojourn": { "kind": "uniform_ramp", "params": { "mu": 2 } } }],
//!     ...
//!   },
//!   "obstacles": { "kind": "fixed", "set": ["1"] },
//!   "scenarios": { "b1": { "kind": "periodic", "sets": [["0"], ["1"]] } },
//!   "target": ["goal"],
//!   "horizon": 18,
//!   "exponential_rate": "inverse_mean"
//! }
//! ```
//!
//! Names are resolved to indices at load time. `exponential_rate` selects how
//! the `mu` of an exponential sojourn is read: `inverse_mean` (default) means
//! `F(t) = 1 - exp(-t / mu)`, `literal` means `F(t) = 1 - exp(-mu t)`.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::model::{
    KernelRow, Model, ModelError, ObstacleSchedule, SojournDistribution, StateSet, TransitionLaw,
};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown state {name:?} in {context}")]
    UnknownState { name: String, context: String },
    #[error("unknown action {action:?} for state {state:?} in kernel key {key:?}")]
    UnknownAction {
        state: String,
        action: String,
        key: String,
    },
    #[error("kernel key {0:?} is not of the form \"state/action\"")]
    BadKernelKey(String),
    #[error("missing kernel row for (state {state}, action {action})")]
    MissingKernel { state: String, action: String },
    #[error("unknown scenario {name:?}; available: {available}")]
    UnknownScenario { name: String, available: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentialRate {
    #[default]
    InverseMean,
    Literal,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
enum SojournSpec {
    UniformRamp { mu: f64 },
    Exponential { mu: f64 },
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    PointMass { t0: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowSpec {
    to: String,
    weight: f64,
    sojourn: SojournSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ScheduleSpec {
    Fixed {
        set: Vec<String>,
    },
    Periodic {
        sets: Vec<Vec<String>>,
    },
    EventuallyConstant {
        prefix: Vec<Vec<String>>,
        tail: Vec<String>,
    },
    Explicit {
        sets: Vec<Vec<String>>,
        tail: Vec<String>,
    },
}

/// A parsed model file. Scenarios are alternative obstacle schedules that
/// can replace the default one.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    states: Vec<String>,
    actions: HashMap<String, Vec<String>>,
    kernel: HashMap<String, Vec<RowSpec>>,
    obstacles: ScheduleSpec,
    #[serde(default)]
    scenarios: BTreeMap<String, ScheduleSpec>,
    target: Vec<String>,
    horizon: f64,
    #[serde(default)]
    exponential_rate: ExponentialRate,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, LoadError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn scenario_names(&self) -> impl Iterator<Item = &str> {
        self.scenarios.keys().map(String::as_str)
    }

    pub fn set_exponential_rate(&mut self, rate: ExponentialRate) {
        self.exponential_rate = rate;
    }

    /// Resolves names and builds the model, with the named scenario's
    /// schedule replacing the default obstacles when given.
    pub fn build(&self, scenario: Option<&str>) -> Result<Model, LoadError> {
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let resolve = |name: &str, context: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LoadError::UnknownState {
                    name: name.to_string(),
                    context: context.to_string(),
                })
        };
        let resolve_set = |names: &[String], context: &str| -> Result<StateSet, LoadError> {
            names.iter().map(|n| resolve(n, context)).collect()
        };

        for name in self.actions.keys() {
            resolve(name, "actions")?;
        }
        let actions: Vec<Vec<String>> = self
            .states
            .iter()
            .map(|s| self.actions.get(s).cloned().unwrap_or_default())
            .collect();

        for key in self.kernel.keys() {
            let (state, action) = key
                .split_once('/')
                .ok_or_else(|| LoadError::BadKernelKey(key.clone()))?;
            let x = resolve(state, &format!("kernel key {key:?}"))?;
            if !actions[x].iter().any(|a| a == action) {
                return Err(LoadError::UnknownAction {
                    state: state.to_string(),
                    action: action.to_string(),
                    key: key.clone(),
                });
            }
        }

        let mut kernel = Vec::with_capacity(self.states.len());
        for (state, acts) in self.states.iter().zip(&actions) {
            let mut laws = Vec::with_capacity(acts.len());
            for action in acts {
                let key = format!("{state}/{action}");
                let rows = self
                    .kernel
                    .get(&key)
                    .ok_or_else(|| LoadError::MissingKernel {
                        state: state.clone(),
                        action: action.clone(),
                    })?;
                let rows = rows
                    .iter()
                    .map(|r| {
                        Ok(KernelRow {
                            to: resolve(&r.to, &format!("kernel key {key:?}"))?,
                            weight: r.weight,
                            sojourn: self.sojourn(&r.sojourn),
                        })
                    })
                    .collect::<Result<Vec<_>, LoadError>>()?;
                laws.push(TransitionLaw::new(rows));
            }
            kernel.push(laws);
        }

        let schedule = match scenario {
            None => &self.obstacles,
            Some(name) => self
                .scenarios
                .get(name)
                .ok_or_else(|| LoadError::UnknownScenario {
                    name: name.to_string(),
                    available: self
                        .scenarios
                        .keys()
                        .cloned()
                        .collect::<Vec<_>>()
                        .join(", "),
                })?,
        };
        let obstacles = match schedule {
            ScheduleSpec::Fixed { set } => ObstacleSchedule::Fixed(resolve_set(set, "obstacles")?),
            ScheduleSpec::Periodic { sets } => ObstacleSchedule::Periodic(
                sets.iter()
                    .map(|s| resolve_set(s, "obstacles"))
                    .collect::<Result<_, _>>()?,
            ),
            ScheduleSpec::EventuallyConstant { prefix, tail } => {
                ObstacleSchedule::EventuallyConstant {
                    prefix: prefix
                        .iter()
                        .map(|s| resolve_set(s, "obstacles"))
                        .collect::<Result<_, _>>()?,
                    tail: resolve_set(tail, "obstacles")?,
                }
            }
            ScheduleSpec::Explicit { sets, tail } => ObstacleSchedule::Explicit {
                sets: sets
                    .iter()
                    .map(|s| resolve_set(s, "obstacles"))
                    .collect::<Result<_, _>>()?,
                tail: resolve_set(tail, "obstacles")?,
            },
        };
        let target = resolve_set(&self.target, "target")?;

        Ok(Model::new(
            self.states.clone(),
            actions,
            kernel,
            obstacles,
            target,
            self.horizon,
        )?)
    }

    fn sojourn(&self, spec: &SojournSpec) -> SojournDistribution {
        match *spec {
            SojournSpec::UniformRamp { mu } => SojournDistribution::UniformRamp { mu },
            SojournSpec::Exponential { mu } => SojournDistribution::Exponential {
                mean: match self.exponential_rate {
                    ExponentialRate::InverseMean => mu,
                    ExponentialRate::Literal => 1.0 / mu,
                },
            },
            SojournSpec::PiecewiseLinear { ref knots } => SojournDistribution::PiecewiseLinear {
                knots: knots.clone(),
            },
            SojournSpec::PointMass { t0 } => SojournDistribution::PointMass { t0 },
        }
    }
}

/// Reads and builds a model in one step.
pub fn load_model(path: impl AsRef<Path>, scenario: Option<&str>) -> Result<Model, LoadError> {
    ModelFile::read(path)?.build(scenario)
}
