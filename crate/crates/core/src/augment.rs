//! Jump-count augmentation.
//!
//! Pairs `(x, k)` carry the number of jumps made so far, which turns the
//! epoch-indexed obstacle sequence into one fixed obstacle set
//! `{(x, k) : x in B_k}`. From a regular pair, action `a` moves to
//! `(y, k + 1)` with the base law `Q(y, . | x, a)`; an obstacle pair only
//! has the stay-forever action, represented here by the absence of rows.

use thiserror::Error;

use crate::model::{
    validate_model, ActionId, Model, Periodicity, SojournDistribution, StateId, StateSet,
    TransitionLaw, ValidationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AugmentError {
    #[error("invalid base model:\n{0}")]
    InvalidModel(ValidationReport),
    #[error("augmentation depth must be positive")]
    ZeroDepth,
    #[error(
        "policy row at (state {state}, layer {layer}) is not a distribution over {actions} actions"
    )]
    BadDistribution {
        state: StateId,
        layer: usize,
        actions: usize,
    },
    #[error("policy has {found} layers but the schedule needs at least {needed}")]
    TooFewLayers { needed: usize, found: usize },
    #[error("policy has {found} state rows at layer {layer}, expected {expected}")]
    StateCount {
        layer: usize,
        expected: usize,
        found: usize,
    },
    #[error("no filler distribution for obstacle state {state} at epoch {layer}")]
    MissingFiller { state: StateId, layer: usize },
    #[error("stay-forever choice at regular pair (state {state}, layer {layer})")]
    HaltOffObstacle { state: StateId, layer: usize },
}

/// The augmented model truncated at `max_layer` jumps.
#[derive(Debug, Clone)]
pub struct AugmentedModel {
    base: Model,
    max_layer: usize,
}

/// One materialized augmented transition `(x, k) -> (to, k + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentedRow<'a> {
    pub to: (StateId, usize),
    pub weight: f64,
    pub sojourn: &'a SojournDistribution,
}

pub fn build_augmented(model: &Model, max_layer: usize) -> Result<AugmentedModel, AugmentError> {
    if max_layer == 0 {
        return Err(AugmentError::ZeroDepth);
    }
    let report = validate_model(model);
    if !report.is_valid() {
        return Err(AugmentError::InvalidModel(report));
    }
    Ok(AugmentedModel {
        base: model.clone(),
        max_layer,
    })
}

impl AugmentedModel {
    pub fn base(&self) -> &Model {
        &self.base
    }

    pub fn max_layer(&self) -> usize {
        self.max_layer
    }

    pub fn obstacle(&self, k: usize) -> &StateSet {
        self.base.obstacle_at(k)
    }

    pub fn is_obstacle(&self, x: StateId, k: usize) -> bool {
        self.base.obstacle_at(k).contains(&x)
    }

    /// `A(x, k)`: the base actions, or none (stay forever) on obstacle pairs.
    pub fn num_actions(&self, x: StateId, k: usize) -> usize {
        if self.is_obstacle(x, k) {
            0
        } else {
            self.base.num_actions(x)
        }
    }

    /// The law used from `(x, k)` under `a`; `None` on obstacle pairs.
    pub fn law(&self, x: StateId, k: usize, a: ActionId) -> Option<&TransitionLaw> {
        if self.is_obstacle(x, k) {
            None
        } else {
            self.base.law(x, a).ok()
        }
    }

    pub fn rows(&self, x: StateId, k: usize, a: ActionId) -> Vec<AugmentedRow<'_>> {
        self.law(x, k, a)
            .map(|law| {
                law.rows
                    .iter()
                    .map(|r| AugmentedRow {
                        to: (r.to, k + 1),
                        weight: r.weight,
                        sojourn: &r.sojourn,
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// `Q~(S, t | (x, k), a)`; zero on obstacle pairs.
    pub fn kernel_mass(&self, x: StateId, k: usize, a: ActionId, t: f64) -> f64 {
        self.law(x, k, a).map_or(0.0, |l| l.mass(t))
    }
}

/// A randomized Markov policy `{psi_n}` for the base model. `plans[n][x]`
/// is a distribution over `A(x)`; epochs past the last plan reuse earlier
/// plans according to the schedule's periodicity.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovPolicy {
    plans: Vec<Vec<Vec<f64>>>,
    periodicity: Periodicity,
}

const PROB_SLACK: f64 = 1e-9;

fn is_distribution(p: &[f64], len: usize) -> bool {
    p.len() == len
        && p.iter().all(|&q| (0.0..=1.0).contains(&q))
        && (p.iter().sum::<f64>() - 1.0).abs() <= PROB_SLACK
}

pub fn point_mass(len: usize, a: ActionId) -> Vec<f64> {
    let mut p = vec![0.0; len];
    p[a] = 1.0;
    p
}

impl MarkovPolicy {
    pub fn new(model: &Model, plans: Vec<Vec<Vec<f64>>>) -> Result<Self, AugmentError> {
        let periodicity = model.obstacles().periodicity();
        if plans.len() < periodicity.span() {
            return Err(AugmentError::TooFewLayers {
                needed: periodicity.span(),
                found: plans.len(),
            });
        }
        for (n, plan) in plans.iter().enumerate() {
            if plan.len() != model.num_states() {
                return Err(AugmentError::StateCount {
                    layer: n,
                    expected: model.num_states(),
                    found: plan.len(),
                });
            }
            for (x, p) in plan.iter().enumerate() {
                if !is_distribution(p, model.num_actions(x)) {
                    return Err(AugmentError::BadDistribution {
                        state: x,
                        layer: n,
                        actions: model.num_actions(x),
                    });
                }
            }
        }
        Ok(Self { plans, periodicity })
    }

    pub fn deterministic(model: &Model, choices: &[Vec<ActionId>]) -> Result<Self, AugmentError> {
        let plans = choices
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(x, &a)| point_mass(model.num_actions(x), a))
                    .collect()
            })
            .collect();
        Self::new(model, plans)
    }

    /// Uniform over `A(x)` at every state and epoch.
    pub fn uniform(model: &Model, layers: usize) -> Result<Self, AugmentError> {
        let plan: Vec<Vec<f64>> = (0..model.num_states())
            .map(|x| {
                let n = model.num_actions(x);
                vec![1.0 / n as f64; n]
            })
            .collect();
        Self::new(model, vec![plan; layers.max(1)])
    }

    pub fn layers(&self) -> usize {
        self.plans.len()
    }

    /// `psi_n(. | x)` for any epoch `n`.
    pub fn plan(&self, n: usize, x: StateId) -> &[f64] {
        &self.plans[self.periodicity.fold(n, self.plans.len())][x]
    }

    /// The chosen action when `psi_n(. | x)` is a point mass.
    pub fn action(&self, n: usize, x: StateId) -> Option<ActionId> {
        let p = self.plan(n, x);
        let a = p.iter().position(|&q| q == 1.0)?;
        Some(a)
    }
}

/// Choice of an augmented stationary policy at one pair `(x, k)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    /// The stay-forever action of an obstacle pair.
    Halt,
    Mix(Vec<f64>),
}

/// A stationary policy `psi~(. | x, k)` on the augmented model, stored for
/// layers `0..layers()` and extended periodically like [`MarkovPolicy`].
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryAugmentedPolicy {
    choice: Vec<Vec<Decision>>,
    periodicity: Periodicity,
}

impl StationaryAugmentedPolicy {
    /// Deterministic policy from per-layer actions; `None` entries become
    /// `Halt` on obstacle pairs and the first action elsewhere.
    pub fn from_actions(aug: &AugmentedModel, actions: &[Vec<Option<ActionId>>]) -> Self {
        let model = aug.base();
        let choice = actions
            .iter()
            .enumerate()
            .map(|(k, layer)| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(x, a)| {
                        if aug.is_obstacle(x, k) {
                            Decision::Halt
                        } else {
                            Decision::Mix(point_mass(model.num_actions(x), a.unwrap_or(0)))
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            choice,
            periodicity: model.obstacles().periodicity(),
        }
    }

    pub fn layers(&self) -> usize {
        self.choice.len()
    }

    pub fn decision(&self, x: StateId, k: usize) -> &Decision {
        &self.choice[self.periodicity.fold(k, self.choice.len())][x]
    }

    /// Deterministic action at `(x, k)`, if the decision is a point mass.
    pub fn action(&self, x: StateId, k: usize) -> Option<ActionId> {
        match self.decision(x, k) {
            Decision::Halt => None,
            Decision::Mix(p) => p.iter().position(|&q| q == 1.0),
        }
    }
}

/// `psi~(. | x, n) = psi_n(. | x)` off the obstacles, `Halt` on them.
pub fn lift_policy(policy: &MarkovPolicy, model: &Model) -> StationaryAugmentedPolicy {
    let choice = policy
        .plans
        .iter()
        .enumerate()
        .map(|(n, plan)| {
            let obstacle = model.obstacle_at(n);
            plan.iter()
                .enumerate()
                .map(|(x, p)| {
                    if obstacle.contains(&x) {
                        Decision::Halt
                    } else {
                        Decision::Mix(p.clone())
                    }
                })
                .collect()
        })
        .collect();
    StationaryAugmentedPolicy {
        choice,
        periodicity: policy.periodicity,
    }
}

/// Inverse of [`lift_policy`]: obstacle pairs take the filler distribution
/// `g_n(. | x)`, every other pair keeps its augmented choice.
pub fn project_policy<F>(
    aug_policy: &StationaryAugmentedPolicy,
    model: &Model,
    mut filler: F,
) -> Result<MarkovPolicy, AugmentError>
where
    F: FnMut(StateId, usize) -> Option<Vec<f64>>,
{
    let mut plans = Vec::with_capacity(aug_policy.choice.len());
    for (n, layer) in aug_policy.choice.iter().enumerate() {
        let obstacle = model.obstacle_at(n);
        let mut plan = Vec::with_capacity(layer.len());
        for (x, decision) in layer.iter().enumerate() {
            let p = if obstacle.contains(&x) {
                filler(x, n).ok_or(AugmentError::MissingFiller { state: x, layer: n })?
            } else {
                match decision {
                    Decision::Mix(p) => p.clone(),
                    Decision::Halt => {
                        return Err(AugmentError::HaltOffObstacle { state: x, layer: n })
                    }
                }
            };
            plan.push(p);
        }
        plans.push(plan);
    }
    MarkovPolicy::new(model, plans)
}

/// Filler choosing the first action of every obstacle state.
pub fn first_action_filler(model: &Model) -> impl FnMut(StateId, usize) -> Option<Vec<f64>> + '_ {
    move |x, _| Some(point_mass(model.num_actions(x), 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{plane_flight, Scenario};
    use crate::model::ObstacleSchedule;

    #[test]
    fn obstacle_pairs_only_halt() {
        let model = plane_flight(Scenario::B2);
        let aug = build_augmented(&model, 8).unwrap();
        assert_eq!(aug.num_actions(1, 0), 0);
        assert!(aug.rows(1, 0, 0).is_empty());
        assert_eq!(aug.num_actions(0, 0), 3);

        let b3 = build_augmented(&plane_flight(Scenario::B3), 8).unwrap();
        assert_eq!(b3.num_actions(0, 2), 3);
        assert_eq!(b3.num_actions(1, 2), 0);
        assert_eq!(b3.num_actions(0, 3), 0);
        assert_eq!(b3.num_actions(1, 3), 3);
    }

    #[test]
    fn rows_move_one_layer_down() {
        let aug = build_augmented(&plane_flight(Scenario::B3), 8).unwrap();
        for k in 0..=8 {
            for x in 0..5 {
                for a in 0..aug.num_actions(x, k) {
                    assert!(aug.rows(x, k, a).iter().all(|r| r.to.1 == k + 1));
                }
            }
        }
    }

    #[test]
    fn invalid_base_is_rejected() {
        let model = plane_flight(Scenario::B1);
        let bad = model
            .with_obstacles(ObstacleSchedule::Fixed([4].into_iter().collect()))
            .unwrap();
        assert!(matches!(
            build_augmented(&bad, 3),
            Err(AugmentError::InvalidModel(_))
        ));
        assert_eq!(
            build_augmented(&model, 0).unwrap_err(),
            AugmentError::ZeroDepth
        );
    }

    #[test]
    fn lift_uniform_under_b1() {
        let model = plane_flight(Scenario::B1);
        let policy = MarkovPolicy::uniform(&model, 4).unwrap();
        let lifted = lift_policy(&policy, &model);
        for n in 0..10 {
            assert_eq!(lifted.decision(0, n), &Decision::Halt);
            for x in 1..5 {
                assert_eq!(lifted.decision(x, n), &Decision::Mix(vec![1.0 / 3.0; 3]));
            }
        }
    }

    #[test]
    fn projection_requires_filler() {
        let model = plane_flight(Scenario::B1);
        let policy = MarkovPolicy::uniform(&model, 2).unwrap();
        let lifted = lift_policy(&policy, &model);
        assert_eq!(
            project_policy(&lifted, &model, |_, _| None).unwrap_err(),
            AugmentError::MissingFiller { state: 0, layer: 0 }
        );
        let back = project_policy(&lifted, &model, first_action_filler(&model)).unwrap();
        assert_eq!(back.plan(0, 0), &[1.0, 0.0, 0.0]);
        assert_eq!(back.plan(1, 2), policy.plan(1, 2));
    }

    #[test]
    fn markov_policy_checks_rows() {
        let model = plane_flight(Scenario::B3);
        assert!(matches!(
            MarkovPolicy::uniform(&model, 1),
            Err(AugmentError::TooFewLayers {
                needed: 2,
                found: 1
            })
        ));
        let mut plans = vec![vec![vec![1.0 / 3.0; 3]; 5]; 2];
        plans[1][2] = vec![0.5, 0.6, 0.0];
        assert!(matches!(
            MarkovPolicy::new(&model, plans),
            Err(AugmentError::BadDistribution {
                state: 2,
                layer: 1,
                ..
            })
        ));
    }

    #[test]
    fn periodic_extension_keeps_phase() {
        let model = plane_flight(Scenario::B3);
        let choices: Vec<Vec<ActionId>> = (0..4).map(|n| vec![n % 3; 5]).collect();
        let policy = MarkovPolicy::deterministic(&model, &choices).unwrap();
        assert_eq!(policy.action(3, 0), Some(0));
        assert_eq!(policy.action(4, 0), Some(2));
        assert_eq!(policy.action(5, 0), Some(0));
        assert_eq!(policy.action(6, 0), Some(2));
    }
}
