//! Reach-avoid semi-Markov decision model on a finite state space.
//!
//! A [`Model`] bundles the state space, per-state action lists, a factorized
//! semi-Markov kernel `Q(j, t | x, a) = w(j | x, a) * F_j(t | x, a)`, an
//! epoch-indexed obstacle schedule `B_n`, a target set `C` and a horizon `T`.
//! Axiom violations are reported as data by [`validate_model`]; only
//! structural problems (indices out of range, ragged tables) are errors.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index of a state in `0..model.num_states()`.
pub type StateId = usize;
/// Index of an action inside the action list `A(x)` of its state.
pub type ActionId = usize;
/// A set of states.
pub type StateSet = BTreeSet<StateId>;

static EMPTY_SET: StateSet = BTreeSet::new();

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("state index {0} is out of range")]
    UnknownState(StateId),
    #[error("action index {action} is not available in state {state}")]
    UnknownAction { state: StateId, action: ActionId },
    #[error("kernel table has {found} state entries, expected {expected}")]
    KernelShape { expected: usize, found: usize },
    #[error("state {state} declares {declared} actions but has {rows} kernel rows")]
    KernelRows {
        state: StateId,
        declared: usize,
        rows: usize,
    },
    #[error("horizon must be finite and nonnegative, got {0}")]
    BadHorizon(f64),
    #[error("time argument must be nonnegative, got {0}")]
    NegativeTime(f64),
}

/// Holding-time law of one kernel row. Every variant has `F(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum SojournDistribution {
    /// Uniform on `[0, mu]`: `F(t) = min(t / mu, 1)`.
    UniformRamp { mu: f64 },
    /// Exponential with the given mean: `F(t) = 1 - exp(-t / mean)`.
    Exponential { mean: f64 },
    /// Piecewise-linear CDF through `(t_i, F_i)`, constant after the last knot.
    /// A last value below 1 leaves the remaining mass at `t = inf`.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// Deterministic holding time `t0`.
    PointMass { t0: f64 },
}

impl SojournDistribution {
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Self::UniformRamp { mu } => (t / mu).min(1.0),
            Self::Exponential { mean } => -(-t / mean).exp_m1(),
            Self::PointMass { t0 } => {
                if t >= *t0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::PiecewiseLinear { knots } => piecewise_cdf(knots, t),
        }
    }

    /// Inverse CDF: smallest `t` with `F(t) >= u`, for `u` in `[0, 1)`.
    /// Returns `None` when `u` falls in the mass the law leaves at infinity.
    pub fn quantile(&self, u: f64) -> Option<f64> {
        match self {
            Self::UniformRamp { mu } => Some(u * mu),
            Self::Exponential { mean } => Some(-mean * (-u).ln_1p()),
            Self::PointMass { t0 } => Some(*t0),
            Self::PiecewiseLinear { knots } => piecewise_quantile(knots, u),
        }
    }

    /// Checks the sub-distribution axioms; returns a reason on failure.
    pub fn check(&self) -> Result<(), String> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(format!("{name} must be positive and finite, got {v}"))
            }
        };
        match self {
            Self::UniformRamp { mu } => positive("mu", *mu),
            Self::Exponential { mean } => positive("mean", *mean),
            Self::PointMass { t0 } => positive("t0", *t0),
            Self::PiecewiseLinear { knots } => {
                let Some(&(t_first, f_first)) = knots.first() else {
                    return Err("piecewise-linear CDF needs at least one knot".into());
                };
                if t_first != 0.0 || f_first != 0.0 {
                    return Err("piecewise-linear CDF must start at (0, 0)".into());
                }
                for pair in knots.windows(2) {
                    let ((t0, f0), (t1, f1)) = (pair[0], pair[1]);
                    if !(t1.is_finite() && t1 > t0) {
                        return Err(format!("knot times must strictly increase ({t0} -> {t1})"));
                    }
                    if !(f1 >= f0) {
                        return Err(format!("CDF values must not decrease ({f0} -> {f1})"));
                    }
                }
                let f_last = knots[knots.len() - 1].1;
                if f_last > 1.0 {
                    return Err(format!("CDF exceeds 1 ({f_last})"));
                }
                Ok(())
            }
        }
    }
}

fn piecewise_cdf(knots: &[(f64, f64)], t: f64) -> f64 {
    let i = knots.partition_point(|&(tk, _)| tk <= t);
    if i == knots.len() {
        return knots.last().map_or(0.0, |k| k.1);
    }
    if i == 0 {
        return 0.0;
    }
    let (t0, f0) = knots[i - 1];
    let (t1, f1) = knots[i];
    f0 + (f1 - f0) * (t - t0) / (t1 - t0)
}

fn piecewise_quantile(knots: &[(f64, f64)], u: f64) -> Option<f64> {
    let f_last = knots.last()?.1;
    if u >= f_last {
        return None;
    }
    let i = knots.partition_point(|&(_, fk)| fk < u);
    if i == 0 {
        return Some(0.0);
    }
    let (t0, f0) = knots[i - 1];
    let (t1, f1) = knots[i];
    Some(t0 + (u - f0) / (f1 - f0) * (t1 - t0))
}

/// One row of a transition law: jump to `to` with probability `weight`,
/// after a holding time drawn from `sojourn`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    pub to: StateId,
    pub weight: f64,
    pub sojourn: SojournDistribution,
}

/// `Q(., . | x, a)` in row form. Weights may sum to less than one; the
/// deficit is the probability of never jumping again.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransitionLaw {
    pub rows: Vec<KernelRow>,
}

impl TransitionLaw {
    pub fn new(rows: Vec<KernelRow>) -> Self {
        Self { rows }
    }

    pub fn total_weight(&self) -> f64 {
        self.rows.iter().map(|r| r.weight).sum()
    }

    /// `Q(E, t | x, a)`.
    pub fn mass(&self, t: f64) -> f64 {
        self.rows.iter().map(|r| r.weight * r.sojourn.cdf(t)).sum()
    }
}

/// First epoch index from which a schedule repeats with a fixed period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Periodicity {
    pub offset: usize,
    pub period: usize,
}

impl Periodicity {
    /// Maps an index at or beyond `len` back into `[len - period, len)` with
    /// the same phase. Requires `len >= offset + period`.
    pub fn fold(&self, n: usize, len: usize) -> usize {
        if n < len {
            return n;
        }
        debug_assert!(len >= self.offset + self.period);
        let excess = n - len;
        len - self.period + excess % self.period
    }

    /// Number of leading indices that cover every distinct value.
    pub fn span(&self) -> usize {
        self.offset + self.period
    }
}

/// The obstacle sequence `B_0, B_1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum ObstacleSchedule {
    Fixed(StateSet),
    /// `B_n = sets[n mod sets.len()]`.
    Periodic(Vec<StateSet>),
    /// `prefix[n]` while `n < prefix.len()`, then `tail`.
    EventuallyConstant {
        prefix: Vec<StateSet>,
        tail: StateSet,
    },
    /// Same lookup as `EventuallyConstant`; kept separate to mirror model files.
    Explicit {
        sets: Vec<StateSet>,
        tail: StateSet,
    },
}

impl ObstacleSchedule {
    pub fn obstacle_at(&self, n: usize) -> &StateSet {
        match self {
            Self::Fixed(set) => set,
            Self::Periodic(sets) => {
                if sets.is_empty() {
                    &EMPTY_SET
                } else {
                    &sets[n % sets.len()]
                }
            }
            Self::EventuallyConstant { prefix: sets, tail } | Self::Explicit { sets, tail } => {
                sets.get(n).unwrap_or(tail)
            }
        }
    }

    pub fn periodicity(&self) -> Periodicity {
        match self {
            Self::Fixed(_) => Periodicity {
                offset: 0,
                period: 1,
            },
            Self::Periodic(sets) => Periodicity {
                offset: 0,
                period: sets.len().max(1),
            },
            Self::EventuallyConstant { prefix: sets, .. } | Self::Explicit { sets, .. } => {
                Periodicity {
                    offset: sets.len(),
                    period: 1,
                }
            }
        }
    }

    /// `B_k ⊂ B_{k-1}` for every `k >= 1`.
    pub fn is_shrinking(&self) -> bool {
        (1..=self.periodicity().span())
            .all(|k| self.obstacle_at(k).is_subset(self.obstacle_at(k - 1)))
    }

    /// `B_{k-1} ⊂ B_k` for every `k >= 1`.
    pub fn is_growing(&self) -> bool {
        (1..=self.periodicity().span())
            .all(|k| self.obstacle_at(k - 1).is_subset(self.obstacle_at(k)))
    }
}

/// A finite reach-avoid SMDP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    states: Vec<String>,
    actions: Vec<Vec<String>>,
    kernel: Vec<Vec<TransitionLaw>>,
    obstacles: ObstacleSchedule,
    target: StateSet,
    horizon: f64,
}

impl Model {
    /// Builds a model after structural checks. `kernel[x][a]` is the law of
    /// action `a` in state `x`; row targets and set members must be valid
    /// state indices.
    pub fn new(
        states: Vec<String>,
        actions: Vec<Vec<String>>,
        kernel: Vec<Vec<TransitionLaw>>,
        obstacles: ObstacleSchedule,
        target: StateSet,
        horizon: f64,
    ) -> Result<Self, ModelError> {
        let n = states.len();
        if actions.len() != n || kernel.len() != n {
            return Err(ModelError::KernelShape {
                expected: n,
                found: actions.len().min(kernel.len()),
            });
        }
        for (x, (acts, laws)) in actions.iter().zip(&kernel).enumerate() {
            if acts.len() != laws.len() {
                return Err(ModelError::KernelRows {
                    state: x,
                    declared: acts.len(),
                    rows: laws.len(),
                });
            }
            for row in laws.iter().flat_map(|l| &l.rows) {
                if row.to >= n {
                    return Err(ModelError::UnknownState(row.to));
                }
            }
        }
        let sets: Vec<&StateSet> = match &obstacles {
            ObstacleSchedule::Fixed(s) => vec![s],
            ObstacleSchedule::Periodic(sets) => sets.iter().collect(),
            ObstacleSchedule::EventuallyConstant { prefix: sets, tail }
            | ObstacleSchedule::Explicit { sets, tail } => {
                sets.iter().chain(std::iter::once(tail)).collect()
            }
        };
        if let Some(&bad) = sets
            .into_iter()
            .chain(std::iter::once(&target))
            .flat_map(|s| s.iter())
            .find(|&&x| x >= n)
        {
            return Err(ModelError::UnknownState(bad));
        }
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(ModelError::BadHorizon(horizon));
        }
        Ok(Self {
            states,
            actions,
            kernel,
            obstacles,
            target,
            horizon,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, x: StateId) -> &str {
        &self.states[x]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn actions(&self, x: StateId) -> &[String] {
        &self.actions[x]
    }

    pub fn num_actions(&self, x: StateId) -> usize {
        self.actions[x].len()
    }

    pub fn action_name(&self, x: StateId, a: ActionId) -> &str {
        &self.actions[x][a]
    }

    pub fn action_index(&self, x: StateId, name: &str) -> Option<ActionId> {
        self.actions[x].iter().position(|s| s == name)
    }

    pub fn law(&self, x: StateId, a: ActionId) -> Result<&TransitionLaw, ModelError> {
        self.kernel
            .get(x)
            .ok_or(ModelError::UnknownState(x))?
            .get(a)
            .ok_or(ModelError::UnknownAction {
                state: x,
                action: a,
            })
    }

    pub fn obstacles(&self) -> &ObstacleSchedule {
        &self.obstacles
    }

    pub fn obstacle_at(&self, n: usize) -> &StateSet {
        self.obstacles.obstacle_at(n)
    }

    pub fn target(&self) -> &StateSet {
        &self.target
    }

    pub fn is_target(&self, x: StateId) -> bool {
        self.target.contains(&x)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// States outside the target set.
    pub fn non_target_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(move |x| !self.is_target(*x))
    }

    pub fn with_horizon(&self, horizon: f64) -> Result<Self, ModelError> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(ModelError::BadHorizon(horizon));
        }
        Ok(Self {
            horizon,
            ..self.clone()
        })
    }

    pub fn with_obstacles(&self, obstacles: ObstacleSchedule) -> Result<Self, ModelError> {
        Self::new(
            self.states.clone(),
            self.actions.clone(),
            self.kernel.clone(),
            obstacles,
            self.target.clone(),
            self.horizon,
        )
    }
}

/// `Q(E, t | x, a)`.
pub fn kernel_mass(model: &Model, x: StateId, a: ActionId, t: f64) -> Result<f64, ModelError> {
    if !(t >= 0.0) {
        return Err(ModelError::NegativeTime(t));
    }
    Ok(model.law(x, a)?.mass(t))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyActionSet {
        state: String,
    },
    EmptySchedule,
    ObstacleTargetOverlap {
        n: usize,
    },
    NoRegularState {
        n: usize,
    },
    NegativeWeight {
        state: String,
        action: String,
        weight: f64,
    },
    SuperStochasticRow {
        state: String,
        action: String,
        total: f64,
    },
    InvalidSojourn {
        state: String,
        action: String,
        reason: String,
    },
    LeakingTarget {
        state: String,
        action: String,
        leak: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyActionSet { state } => write!(f, "empty action set at state {state}"),
            Self::EmptySchedule => write!(f, "periodic obstacle schedule has no sets"),
            Self::ObstacleTargetOverlap { n } => write!(f, "obstacle-target overlap at n={n}"),
            Self::NoRegularState { n } => {
                write!(
                    f,
                    "no regular state left outside obstacle and target at n={n}"
                )
            }
            Self::NegativeWeight {
                state,
                action,
                weight,
            } => write!(f, "weight {weight} outside [0, 1] at ({state}, {action})"),
            Self::SuperStochasticRow {
                state,
                action,
                total,
            } => write!(
                f,
                "super-stochastic row at ({state}, {action}): total weight {total}"
            ),
            Self::InvalidSojourn {
                state,
                action,
                reason,
            } => write!(f, "invalid sojourn law at ({state}, {action}): {reason}"),
            Self::LeakingTarget {
                state,
                action,
                leak,
            } => write!(
                f,
                "target not absorbing at ({state}, {action}): mass {leak} leaves the target"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

// Row weights are summed in floating point; allow rounding slack.
const WEIGHT_SLACK: f64 = 1e-9;

/// Checks every model axiom and reports all violations found.
pub fn validate_model(model: &Model) -> ValidationReport {
    let mut violations = Vec::new();
    for x in 0..model.num_states() {
        let state = model.state_name(x).to_string();
        if model.num_actions(x) == 0 {
            violations.push(Violation::EmptyActionSet {
                state: state.clone(),
            });
        }
        for a in 0..model.num_actions(x) {
            let action = model.action_name(x, a).to_string();
            let law = &model.kernel[x][a];
            for row in &law.rows {
                if !(0.0..=1.0).contains(&row.weight) {
                    violations.push(Violation::NegativeWeight {
                        state: state.clone(),
                        action: action.clone(),
                        weight: row.weight,
                    });
                }
                if let Err(reason) = row.sojourn.check() {
                    violations.push(Violation::InvalidSojourn {
                        state: state.clone(),
                        action: action.clone(),
                        reason,
                    });
                }
            }
            let total = law.total_weight();
            if total > 1.0 + WEIGHT_SLACK {
                violations.push(Violation::SuperStochasticRow {
                    state: state.clone(),
                    action: action.clone(),
                    total,
                });
            }
            if model.is_target(x) {
                let leak: f64 = law
                    .rows
                    .iter()
                    .filter(|r| !model.is_target(r.to))
                    .map(|r| r.weight)
                    .sum();
                if leak > 0.0 {
                    violations.push(Violation::LeakingTarget {
                        state: state.clone(),
                        action: action.clone(),
                        leak,
                    });
                }
            }
        }
    }

    if matches!(model.obstacles(), ObstacleSchedule::Periodic(s) if s.is_empty()) {
        violations.push(Violation::EmptySchedule);
    }
    for n in 0..model.obstacles().periodicity().span() {
        let obstacle = model.obstacle_at(n);
        if !obstacle.is_disjoint(model.target()) {
            violations.push(Violation::ObstacleTargetOverlap { n });
        }
        let regular =
            (0..model.num_states()).any(|x| !obstacle.contains(&x) && !model.is_target(x));
        if !regular {
            violations.push(Violation::NoRegularState { n });
        }
    }
    ValidationReport { violations }
}

/// Constants making the kernel jump-separated: `Q(E, delta | x, a) <= 1 - epsilon0`
/// for every non-target `x`, plus the derived contraction data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationConstants {
    pub delta: f64,
    pub epsilon0: f64,
    /// Smallest integer strictly above `horizon / delta`.
    pub k_tilde: u32,
    /// `(1 - epsilon0^k_tilde)^(1 / k_tilde)`.
    pub beta: f64,
}

impl SeparationConstants {
    pub fn from_parts(delta: f64, epsilon0: f64, horizon: f64) -> Self {
        let k_tilde = (horizon / delta).floor() as u32 + 1;
        let beta = (1.0 - epsilon0.powi(k_tilde as i32)).powf(1.0 / f64::from(k_tilde));
        Self {
            delta,
            epsilon0,
            k_tilde,
            beta,
        }
    }

    /// `(1 - epsilon0^k_tilde)^floor(n / k_tilde)`: sup-norm distance bound
    /// between the `n`-th value iterate and the optimal value.
    pub fn error_bound(&self, iterations: usize) -> f64 {
        let windows = (iterations / self.k_tilde as usize) as i32;
        (1.0 - self.epsilon0.powi(self.k_tilde as i32)).powi(windows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    Separated(SeparationConstants),
    /// Some non-target `(x, a)` puts all of its mass on `[0, delta]`.
    NotSeparated {
        delta: f64,
        max_mass: f64,
    },
}

/// Largest `epsilon0` admitted by the model at `delta`, with `k_tilde` and `beta`.
pub fn find_separation(model: &Model, delta: f64) -> Separation {
    let max_mass = model
        .non_target_states()
        .flat_map(|x| model.kernel[x].iter())
        .map(|law| law.mass(delta))
        .fold(0.0_f64, f64::max);
    if max_mass >= 1.0 || !(delta > 0.0) {
        return Separation::NotSeparated { delta, max_mass };
    }
    Separation::Separated(SeparationConstants::from_parts(
        delta,
        1.0 - max_mass,
        model.horizon(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn set(xs: &[usize]) -> StateSet {
        xs.iter().copied().collect()
    }

    fn ramp(mu: f64) -> SojournDistribution {
        SojournDistribution::UniformRamp { mu }
    }

    fn two_state(weight: f64, obstacles: ObstacleSchedule) -> Model {
        Model::new(
            vec!["s".into(), "goal".into()],
            vec![vec!["go".into()], vec!["stay".into()]],
            vec![
                vec![TransitionLaw::new(vec![KernelRow {
                    to: 1,
                    weight,
                    sojourn: ramp(2.0),
                }])],
                vec![TransitionLaw::new(vec![KernelRow {
                    to: 1,
                    weight: 1.0,
                    sojourn: ramp(2.0),
                }])],
            ],
            obstacles,
            set(&[1]),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn cdf_families() {
        assert_eq!(ramp(20.0).cdf(1.0), 0.05);
        assert_eq!(ramp(20.0).cdf(40.0), 1.0);
        let exp = SojournDistribution::Exponential { mean: 21.0 };
        assert_relative_eq!(exp.cdf(21.0), 1.0 - (-1.0f64).exp(), epsilon = 1e-15);
        let point = SojournDistribution::PointMass { t0: 3.0 };
        assert_eq!(point.cdf(2.999), 0.0);
        assert_eq!(point.cdf(3.0), 1.0);
        let pl = SojournDistribution::PiecewiseLinear {
            knots: vec![(0.0, 0.0), (1.0, 0.5), (3.0, 0.9)],
        };
        assert_relative_eq!(pl.cdf(2.0), 0.7);
        assert_eq!(pl.cdf(10.0), 0.9);
        for d in [ramp(2.0), exp, point, pl] {
            assert_eq!(d.cdf(0.0), 0.0);
        }
    }

    #[test]
    fn piecewise_quantile_inverts_cdf() {
        let pl = SojournDistribution::PiecewiseLinear {
            knots: vec![(0.0, 0.0), (1.0, 0.5), (1.5, 0.5), (3.0, 0.9)],
        };
        for u in [0.0, 0.1, 0.49, 0.5, 0.6, 0.899] {
            let t = pl.quantile(u).unwrap();
            assert_relative_eq!(pl.cdf(t), u, epsilon = 1e-12);
        }
        // plateau: smallest t reaching 0.5 is the start of the flat piece
        assert_relative_eq!(pl.quantile(0.5).unwrap(), 1.0);
        assert_eq!(pl.quantile(0.95), None);
    }

    #[test]
    fn schedule_lookup() {
        let b3 = ObstacleSchedule::Periodic(vec![set(&[1]), set(&[0])]);
        assert_eq!(b3.obstacle_at(2), &set(&[1]));
        assert_eq!(b3.obstacle_at(7), &set(&[0]));
        let fixed = ObstacleSchedule::Fixed(set(&[]));
        assert!(fixed.obstacle_at(12345).is_empty());
        let ev = ObstacleSchedule::EventuallyConstant {
            prefix: vec![set(&[0, 1]), set(&[0])],
            tail: set(&[2]),
        };
        assert_eq!(ev.obstacle_at(1), &set(&[0]));
        assert_eq!(ev.obstacle_at(2), &set(&[2]));
        assert_eq!(ev.obstacle_at(99), &set(&[2]));
    }

    #[test]
    fn nesting_detection() {
        let shrink = ObstacleSchedule::Explicit {
            sets: vec![set(&[0, 1]), set(&[0])],
            tail: set(&[0]),
        };
        assert!(shrink.is_shrinking());
        assert!(!shrink.is_growing());
        let grow = ObstacleSchedule::Explicit {
            sets: vec![set(&[0]), set(&[0, 1])],
            tail: set(&[0, 1]),
        };
        assert!(grow.is_growing());
        assert!(!grow.is_shrinking());
        let b3 = ObstacleSchedule::Periodic(vec![set(&[1]), set(&[0])]);
        assert!(!b3.is_growing() && !b3.is_shrinking());
    }

    #[test]
    fn fold_keeps_phase() {
        let p = Periodicity {
            offset: 1,
            period: 2,
        };
        assert_eq!(p.fold(3, 5), 3);
        assert_eq!(p.fold(5, 5), 3);
        assert_eq!(p.fold(6, 5), 4);
        assert_eq!(p.fold(7, 5), 3);
        for n in 5..50 {
            let f = p.fold(n, 5);
            assert!((3..5).contains(&f));
            assert_eq!((n - f) % 2, 0);
        }
    }

    #[test]
    fn overlap_and_super_stochastic_rows_are_reported() {
        let m = two_state(1.0, ObstacleSchedule::Fixed(set(&[1])));
        let report = validate_model(&m);
        assert!(report
            .violations
            .iter()
            .any(|v| v.to_string().contains("obstacle-target overlap at n=0")));

        let m = two_state(1.2, ObstacleSchedule::Fixed(set(&[])));
        let report = validate_model(&m);
        let rows = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::SuperStochasticRow { .. }))
            .count();
        assert_eq!(rows, 1);
        assert!(report.to_string().contains("super-stochastic row"));
        assert_eq!(validate_model(&m), report);
    }

    #[test]
    fn no_regular_state_is_reported() {
        let m = two_state(1.0, ObstacleSchedule::Periodic(vec![set(&[]), set(&[0])]));
        let report = validate_model(&m);
        assert_eq!(report.violations, vec![Violation::NoRegularState { n: 1 }]);
    }

    #[test]
    fn leaking_target_is_reported() {
        let mut m = two_state(1.0, ObstacleSchedule::Fixed(set(&[])));
        m.kernel[1][0].rows[0].to = 0;
        assert!(matches!(
            validate_model(&m).violations.as_slice(),
            [Violation::LeakingTarget { .. }]
        ));
    }

    #[test]
    fn kernel_mass_rejects_unknown_pairs() {
        let m = two_state(1.0, ObstacleSchedule::Fixed(set(&[])));
        assert_eq!(kernel_mass(&m, 0, 0, 0.0), Ok(0.0));
        assert_eq!(kernel_mass(&m, 0, 0, 1.0), Ok(0.5));
        assert!(kernel_mass(&m, 0, 3, 1.0).is_err());
        assert!(kernel_mass(&m, 9, 0, 1.0).is_err());
        assert!(kernel_mass(&m, 0, 0, -1.0).is_err());
    }

    #[test]
    fn separation_constants() {
        let m = two_state(1.0, ObstacleSchedule::Fixed(set(&[])));
        match find_separation(&m, 0.5) {
            Separation::Separated(c) => {
                assert_relative_eq!(c.epsilon0, 0.75);
                assert_eq!(c.k_tilde, 3);
                assert_relative_eq!(c.beta, (1.0 - 0.75f64.powi(3)).powf(1.0 / 3.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            find_separation(&m, 2.0),
            Separation::NotSeparated { .. }
        ));
    }

    #[test]
    fn structural_errors() {
        let err = Model::new(
            vec!["a".into()],
            vec![vec!["x".into()]],
            vec![vec![TransitionLaw::new(vec![KernelRow {
                to: 4,
                weight: 1.0,
                sojourn: ramp(1.0),
            }])]],
            ObstacleSchedule::Fixed(set(&[])),
            set(&[]),
            1.0,
        );
        assert_eq!(err, Err(ModelError::UnknownState(4)));
    }
}
