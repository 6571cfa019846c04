//! Discretized Bellman machinery on the augmented model.
//!
//! Value curves live on a uniform grid `t_m = m T / M`. The operator
//!
//! ```text
//! L^a W(x, k, t) = [ Q(C, t | x, a)
//!                  + sum_{y not in B_{k+1} ∪ C} w(y | x, a) ∫_0^t F_y(du) W(y, k+1, t - u) ] 1{x not in B_k}
//! ```
//!
//! is evaluated as a Stieltjes sum over grid cells: exact CDF increments
//! `F(t_{j+1}) - F(t_j)` weighted by `W` at the cell-midpoint offset, which on
//! a uniform grid is the mean of two neighbouring nodes. Target states carry
//! the constant curve 1, so the `Q(C, t)` term is the same sum.
//!
//! [`solve_improved`] sweeps the layer index backwards from a truncation depth
//! to 0, holding two layers at a time; [`value_iterate`] is the textbook
//! iteration over all layers, kept as a reference.

use rayon::prelude::*;
use thiserror::Error;

use crate::augment::{
    build_augmented, project_policy, AugmentError, AugmentedModel, Decision, MarkovPolicy,
    StationaryAugmentedPolicy,
};
use crate::model::{
    find_separation, validate_model, ActionId, Model, Separation, SeparationConstants,
    SojournDistribution, StateId, ValidationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid model:\n{0}")]
    InvalidModel(ValidationReport),
    #[error(
        "kernel is not separated at delta={delta}: some action puts mass {max_mass} on [0, delta]; \
         try a smaller delta such as {}", delta / 2.0
    )]
    NotSeparated { delta: f64, max_mass: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Augment(#[from] AugmentError),
}

/// Uniform grid `t_m = m * horizon / steps`, `m = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self, SolveError> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(SolveError::InvalidArgument(format!(
                "grid horizon must be finite and nonnegative, got {horizon}"
            )));
        }
        if steps == 0 {
            return Err(SolveError::InvalidArgument(
                "grid needs at least one step".into(),
            ));
        }
        Ok(Self { horizon, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn nodes(&self) -> usize {
        self.steps + 1
    }

    pub fn time(&self, m: usize) -> f64 {
        if m == self.steps {
            self.horizon
        } else {
            self.horizon * m as f64 / self.steps as f64
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes()).map(|m| self.time(m))
    }
}

/// `W(., k, .)`: one value curve per state over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueLayer {
    pub layer: usize,
    pub values: Vec<Vec<f64>>,
}

impl ValueLayer {
    /// 1 on target states and 0 elsewhere: the layer below the truncation depth.
    pub fn terminal(model: &Model, grid: &TimeGrid, layer: usize) -> Self {
        let values = (0..model.num_states())
            .map(|x| vec![if model.is_target(x) { 1.0 } else { 0.0 }; grid.nodes()])
            .collect();
        Self { layer, values }
    }

    /// Value of state `x` at the last grid node.
    pub fn at_horizon(&self, x: StateId) -> f64 {
        *self.values[x].last().expect("grid has at least two nodes")
    }

    /// Largest pointwise difference from `other`.
    pub fn sup_distance(&self, other: &ValueLayer) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max)
    }
}

/// Rows of one `(x, a)` sharing a sojourn law, with that law's CDF
/// increments over the grid cells.
#[derive(Debug, Clone)]
struct RowGroup {
    increments: Vec<f64>,
    // cells with a nonzero increment
    support: Vec<usize>,
    members: Vec<(StateId, f64)>,
}

/// Kernel laws discretized on a grid, reusable across layers and sweeps.
#[derive(Debug, Clone)]
pub struct Discretization {
    grid: TimeGrid,
    groups: Vec<Vec<Vec<RowGroup>>>,
}

impl Discretization {
    pub fn new(model: &Model, grid: TimeGrid) -> Self {
        let times: Vec<f64> = grid.times().collect();
        let groups = (0..model.num_states())
            .map(|x| {
                (0..model.num_actions(x))
                    .map(|a| {
                        let law = model.law(x, a).expect("index in range");
                        let mut laws: Vec<(&SojournDistribution, Vec<(StateId, f64)>)> = Vec::new();
                        for row in &law.rows {
                            match laws.iter_mut().find(|(s, _)| **s == row.sojourn) {
                                Some((_, members)) => members.push((row.to, row.weight)),
                                None => laws.push((&row.sojourn, vec![(row.to, row.weight)])),
                            }
                        }
                        laws.into_iter()
                            .map(|(sojourn, members)| {
                                let increments: Vec<f64> = times
                                    .windows(2)
                                    .map(|w| (sojourn.cdf(w[1]) - sojourn.cdf(w[0])).max(0.0))
                                    .collect();
                                let support = (0..increments.len())
                                    .filter(|&j| increments[j] > 0.0)
                                    .collect();
                                RowGroup {
                                    increments,
                                    support,
                                    members,
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self { grid, groups }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// `L^a W(x, k, .)` over the grid given `next = W(., k + 1, .)`.
    pub fn apply(
        &self,
        aug: &AugmentedModel,
        x: StateId,
        k: usize,
        a: ActionId,
        next: &ValueLayer,
    ) -> Result<Vec<f64>, SolveError> {
        if next.layer != k + 1 {
            return Err(SolveError::InvalidArgument(format!(
                "operator at layer {k} needs layer {} values, got layer {}",
                k + 1,
                next.layer
            )));
        }
        let model = aug.base();
        if x >= model.num_states() || a >= model.num_actions(x) {
            return Err(SolveError::InvalidArgument(format!(
                "no action {a} at state {x}"
            )));
        }
        let mut out = vec![0.0; self.grid.nodes()];
        let mut half = vec![0.0; self.grid.steps];
        if model.is_target(x) {
            out.fill(1.0);
        } else if !aug.is_obstacle(x, k) {
            self.accumulate(aug, x, k, a, next, &mut out, &mut half);
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn accumulate(
        &self,
        aug: &AugmentedModel,
        x: StateId,
        k: usize,
        a: ActionId,
        next: &ValueLayer,
        out: &mut [f64],
        half: &mut [f64],
    ) {
        let blocked = aug.obstacle(k + 1);
        let steps = self.grid.steps;
        for group in &self.groups[x][a] {
            half.fill(0.0);
            let mut any = false;
            for &(y, w) in &group.members {
                if blocked.contains(&y) || w == 0.0 {
                    continue;
                }
                any = true;
                let v = &next.values[y];
                for (i, h) in half.iter_mut().enumerate() {
                    *h += w * 0.5 * (v[i] + v[i + 1]);
                }
            }
            if !any {
                continue;
            }
            for &j in &group.support {
                let d = group.increments[j];
                for (o, h) in out[j + 1..=steps].iter_mut().zip(half.iter()) {
                    *o += d * h;
                }
            }
        }
        for o in out.iter_mut() {
            *o = o.clamp(0.0, 1.0);
        }
    }

    /// `max_a L^a W(x, k, .)` pointwise in `t`, with the action maximizing the
    /// value at the horizon node (lowest index on ties). Obstacle and target
    /// states get their fixed curves and no action.
    fn best(
        &self,
        aug: &AugmentedModel,
        x: StateId,
        k: usize,
        next: &ValueLayer,
    ) -> (Vec<f64>, Option<ActionId>) {
        let model = aug.base();
        let nodes = self.grid.nodes();
        if model.is_target(x) {
            return (vec![1.0; nodes], None);
        }
        if aug.is_obstacle(x, k) {
            return (vec![0.0; nodes], None);
        }
        let mut best = vec![0.0f64; nodes];
        let mut best_action = None;
        let mut best_at_horizon = f64::NEG_INFINITY;
        let mut curve = vec![0.0; nodes];
        let mut half = vec![0.0; self.grid.steps];
        for a in 0..model.num_actions(x) {
            curve.fill(0.0);
            self.accumulate(aug, x, k, a, next, &mut curve, &mut half);
            if curve[nodes - 1] > best_at_horizon {
                best_at_horizon = curve[nodes - 1];
                best_action = Some(a);
            }
            for (b, c) in best.iter_mut().zip(&curve) {
                *b = b.max(*c);
            }
        }
        (best, best_action)
    }

    /// `L^psi W(x, k, .)` for a stationary augmented policy.
    fn under_policy(
        &self,
        aug: &AugmentedModel,
        policy: &StationaryAugmentedPolicy,
        x: StateId,
        k: usize,
        next: &ValueLayer,
    ) -> Vec<f64> {
        let model = aug.base();
        let nodes = self.grid.nodes();
        if model.is_target(x) {
            return vec![1.0; nodes];
        }
        let mut out = vec![0.0; nodes];
        if aug.is_obstacle(x, k) {
            return out;
        }
        let Decision::Mix(probs) = policy.decision(x, k) else {
            return out;
        };
        let mut curve = vec![0.0; nodes];
        let mut half = vec![0.0; self.grid.steps];
        for (a, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            curve.fill(0.0);
            self.accumulate(aug, x, k, a, next, &mut curve, &mut half);
            for (o, c) in out.iter_mut().zip(&curve) {
                *o += p * c;
            }
        }
        for o in out.iter_mut() {
            *o = o.clamp(0.0, 1.0);
        }
        out
    }

    /// Layer `k` of the optimality recursion from layer `k + 1`.
    pub fn optimal_layer(
        &self,
        aug: &AugmentedModel,
        k: usize,
        next: &ValueLayer,
    ) -> (ValueLayer, Vec<Option<ActionId>>) {
        let (values, actions) = (0..aug.base().num_states())
            .into_par_iter()
            .map(|x| self.best(aug, x, k, next))
            .unzip();
        (ValueLayer { layer: k, values }, actions)
    }

    /// Layer `k` under a fixed stationary policy from layer `k + 1`.
    pub fn policy_layer(
        &self,
        aug: &AugmentedModel,
        policy: &StationaryAugmentedPolicy,
        k: usize,
        next: &ValueLayer,
    ) -> ValueLayer {
        let values = (0..aug.base().num_states())
            .into_par_iter()
            .map(|x| self.under_policy(aug, policy, x, k, next))
            .collect();
        ValueLayer { layer: k, values }
    }
}

/// One application of `L^a` at `(x, k)`; convenience over [`Discretization::apply`].
pub fn bellman_apply(
    aug: &AugmentedModel,
    a: ActionId,
    next: &ValueLayer,
    x: StateId,
    k: usize,
    grid: &TimeGrid,
) -> Result<Vec<f64>, SolveError> {
    Discretization::new(aug.base(), *grid).apply(aug, x, k, a, next)
}

/// Backward sweep from the terminal layer at `depth` down to layer 0,
/// calling `visit` on each computed layer (deepest first). Returns layer 0.
/// Layer 0 of a depth-`n` sweep equals the `n`-th value iterate.
pub fn backward_sweep<F>(
    aug: &AugmentedModel,
    disc: &Discretization,
    depth: usize,
    mut visit: F,
) -> ValueLayer
where
    F: FnMut(&ValueLayer, &[Option<ActionId>]),
{
    let mut next = ValueLayer::terminal(aug.base(), disc.grid(), depth);
    for k in (0..depth).rev() {
        let (layer, actions) = disc.optimal_layer(aug, k, &next);
        visit(&layer, &actions);
        next = layer;
    }
    next
}

/// Same sweep as [`backward_sweep`] under a fixed policy.
pub fn policy_sweep<F>(
    aug: &AugmentedModel,
    disc: &Discretization,
    policy: &StationaryAugmentedPolicy,
    depth: usize,
    mut visit: F,
) -> ValueLayer
where
    F: FnMut(&ValueLayer),
{
    let mut next = ValueLayer::terminal(aug.base(), disc.grid(), depth);
    for k in (0..depth).rev() {
        let layer = disc.policy_layer(aug, policy, k, &next);
        visit(&layer);
        next = layer;
    }
    next
}

/// Iterations after which the contraction bound guarantees a gap of at most
/// `rho`: `ceil(k_tilde + log_beta(rho))`.
pub fn convergence_params(sep: &SeparationConstants, rho: f64) -> Result<usize, SolveError> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(SolveError::InvalidArgument(format!(
            "rho must lie in (0, 1), got {rho}"
        )));
    }
    let k = f64::from(sep.k_tilde);
    if sep.beta == 0.0 {
        return Ok(sep.k_tilde as usize);
    }
    let exact = k + rho.ln() / sep.beta.ln();
    // values within rounding of an integer are that integer
    let planned = if (exact - exact.round()).abs() < 1e-9 {
        exact.round()
    } else {
        exact.ceil()
    };
    if !planned.is_finite() || planned > u32::MAX as f64 {
        return Err(SolveError::InvalidArgument(format!(
            "contraction rate beta={} is too close to 1 for rho={rho}",
            sep.beta
        )));
    }
    Ok(planned as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Run the iteration count the contraction bound asks for.
    Bound,
    /// Double the depth until layer 0 moves by less than the tolerance.
    Residual(f64),
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// `W(x, 0, .)` over the grid.
    pub value: ValueLayer,
    /// Deterministic argmax policy on layers `0..policy.layers()`, extended
    /// periodically beyond.
    pub policy: StationaryAugmentedPolicy,
    /// Argmax action per layer and state (`None` on obstacle and target states).
    pub argmax: Vec<Vec<Option<ActionId>>>,
    /// Number of operator applications behind `value`.
    pub iterations: usize,
    pub planned_iterations: usize,
    /// `(1 - epsilon0^k_tilde)^floor(iterations / k_tilde)`.
    pub error_bound: f64,
    /// Sup-norm change of layer 0 between the last two depths tried.
    pub residual: f64,
    pub separation: SeparationConstants,
}

struct SweepOutcome {
    layer0: ValueLayer,
    argmax: Vec<Vec<Option<ActionId>>>,
}

fn run_depth(model: &Model, disc: &Discretization, depth: usize, keep: usize) -> SweepOutcome {
    let aug = build_augmented(model, depth).expect("model validated by caller");
    let mut argmax = vec![Vec::new(); keep.min(depth)];
    let layer0 = backward_sweep(&aug, disc, depth, |layer, actions| {
        if layer.layer < argmax.len() {
            argmax[layer.layer] = actions.to_vec();
        }
    });
    SweepOutcome { layer0, argmax }
}

/// Maximal reach-avoid curves and an argmax policy by the backward layer
/// sweep. The returned value is layer 0 of a sweep of depth `2n`; the policy
/// covers layers `0..n`, each of which saw at least `n` applications.
/// `n` is the planned iteration count for [`StopRule::Bound`] and is found by
/// doubling for [`StopRule::Residual`].
pub fn solve_improved(
    model: &Model,
    grid: TimeGrid,
    epsilon: f64,
    delta: f64,
    stop: StopRule,
) -> Result<SolveResult, SolveError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(SolveError::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(delta > 0.0) {
        return Err(SolveError::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let report = validate_model(model);
    if !report.is_valid() {
        return Err(SolveError::InvalidModel(report));
    }
    let separation = match find_separation(model, delta) {
        Separation::Separated(c) => c,
        Separation::NotSeparated { delta, max_mass } => {
            return Err(SolveError::NotSeparated { delta, max_mass })
        }
    };
    let planned = convergence_params(&separation, epsilon / 2.0)?;
    let span = model.obstacles().periodicity().span();
    let disc = Discretization::new(model, grid);

    let (n, residual, outcome) = match stop {
        StopRule::Bound => {
            let n = planned.max(span);
            let previous = run_depth(model, &disc, n, 0);
            let outcome = run_depth(model, &disc, 2 * n, n);
            let residual = outcome.layer0.sup_distance(&previous.layer0);
            (n, residual, outcome)
        }
        StopRule::Residual(tol) => {
            if !(tol >= 0.0) {
                return Err(SolveError::InvalidArgument(format!(
                    "residual tolerance must be nonnegative, got {tol}"
                )));
            }
            let mut n = span.max(8);
            let mut previous = run_depth(model, &disc, n, 0).layer0;
            loop {
                let outcome = run_depth(model, &disc, 2 * n, n);
                let residual = outcome.layer0.sup_distance(&previous);
                if residual < tol || n >= planned {
                    break (n, residual, outcome);
                }
                previous = outcome.layer0;
                n *= 2;
            }
        }
    };

    let iterations = 2 * n;
    let aug = build_augmented(model, iterations)?;
    let policy = StationaryAugmentedPolicy::from_actions(&aug, &outcome.argmax);
    Ok(SolveResult {
        value: outcome.layer0,
        policy,
        argmax: outcome.argmax,
        iterations,
        planned_iterations: planned,
        error_bound: separation.error_bound(iterations),
        residual,
        separation,
    })
}

/// Deterministic Markov policy for the base model from a solve: the recorded
/// argmax off the obstacles, `filler` on them.
pub fn extract_policy<F>(
    result: &SolveResult,
    model: &Model,
    filler: F,
) -> Result<MarkovPolicy, SolveError>
where
    F: FnMut(StateId, usize) -> Option<Vec<f64>>,
{
    Ok(project_policy(&result.policy, model, filler)?)
}

/// Output of the reference iteration.
#[derive(Debug, Clone)]
pub struct ValueIterationRun {
    /// `W_n(., 0, .)` for `n = 1..=iterations`.
    pub snapshots: Vec<ValueLayer>,
    pub iterations: usize,
    /// Sup-norm change of layer 0 at the last iterate.
    pub residual: f64,
    /// Argmax of the last iterate per layer `0..=max_layer - iterations`.
    pub argmax: Vec<Vec<Option<ActionId>>>,
}

impl ValueIterationRun {
    pub fn last(&self) -> &ValueLayer {
        self.snapshots.last().expect("at least one iterate")
    }
}

/// `W_1 = max_a Q~((C, k+1), . | (x, k), a)`, `W_{n+1} = max_a L^a W_n` on
/// every layer that later iterates still read, until `n_max` or until layer
/// 0 moves by less than `tol`.
pub fn value_iterate(
    aug: &AugmentedModel,
    disc: &Discretization,
    n_max: usize,
    tol: f64,
) -> Result<ValueIterationRun, SolveError> {
    if n_max == 0 || aug.max_layer() < n_max {
        return Err(SolveError::InvalidArgument(format!(
            "need 1 <= n_max <= max_layer, got n_max={n_max}, max_layer={}",
            aug.max_layer()
        )));
    }
    let model = aug.base();
    let grid = disc.grid();
    let mut current: Vec<ValueLayer> = (0..=n_max)
        .map(|k| ValueLayer::terminal(model, grid, k))
        .collect();
    let mut snapshots = Vec::new();
    let mut argmax = Vec::new();
    let mut residual = f64::INFINITY;
    for n in 1..=n_max {
        let mut updated = Vec::with_capacity(n_max - n + 1);
        argmax.clear();
        for k in 0..=n_max - n {
            let (layer, actions) = disc.optimal_layer(aug, k, &current[k + 1]);
            updated.push(layer);
            argmax.push(actions);
        }
        residual = updated[0].sup_distance(&current[0]);
        snapshots.push(updated[0].clone());
        current = updated;
        if residual < tol {
            break;
        }
    }
    Ok(ValueIterationRun {
        iterations: snapshots.len(),
        snapshots,
        residual,
        argmax,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerOrder {
    /// `B_k ⊂ B_{k-1}`: `W(x, k-1, .) <= W(x, k, .)`.
    Increasing,
    /// `B_{k-1} ⊂ B_k`: `W(x, k-1, .) >= W(x, k, .)`.
    Decreasing,
    /// Fixed schedule: both orderings, hence equality.
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerViolation {
    pub state: StateId,
    pub layer: usize,
    pub node: usize,
    /// Amount by which the expected relation fails.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub order: Option<LayerOrder>,
    /// First layer of the constant tail, when the schedule has one.
    pub tail_from: Option<usize>,
    pub layers_checked: usize,
    pub violations: Vec<LayerViolation>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MonotonicityCheck {
    NotApplicable,
    Checked(MonotonicityReport),
}

/// Computes the iterate `W_iterations` on the first layers and checks the
/// layer ordering implied by nested schedules, plus equality of the curves on
/// a constant tail. All compared layers carry the same number of operator
/// applications, so both relations hold for every iterate, not only in the
/// limit. Orderings are checked up to `order_tol`; tail equality up to
/// `tail_tol`.
pub fn monotonicity_check(
    model: &Model,
    grid: TimeGrid,
    iterations: usize,
    order_tol: f64,
    tail_tol: f64,
) -> Result<MonotonicityCheck, SolveError> {
    let schedule = model.obstacles();
    let shrinking = schedule.is_shrinking();
    let growing = schedule.is_growing();
    let order = match (shrinking, growing) {
        (true, true) => Some(LayerOrder::Constant),
        (true, false) => Some(LayerOrder::Increasing),
        (false, true) => Some(LayerOrder::Decreasing),
        (false, false) => None,
    };
    let periodicity = schedule.periodicity();
    let tail_from = (periodicity.period == 1).then_some(periodicity.offset);
    if order.is_none() && tail_from.is_none() {
        return Ok(MonotonicityCheck::NotApplicable);
    }

    let keep = periodicity.span() + 2;
    let depth = iterations + keep;
    let aug = build_augmented(model, depth).map_err(|e| match e {
        AugmentError::InvalidModel(r) => SolveError::InvalidModel(r),
        other => SolveError::Augment(other),
    })?;
    let disc = Discretization::new(model, grid);
    let mut layers: Vec<ValueLayer> = (0..=depth)
        .map(|k| ValueLayer::terminal(model, disc.grid(), k))
        .collect();
    for n in 1..=iterations {
        layers = (0..=depth - n)
            .map(|k| disc.optimal_layer(&aug, k, &layers[k + 1]).0)
            .collect();
    }

    let mut violations = Vec::new();
    for k in 1..keep {
        let (lower, upper) = (&layers[k - 1], &layers[k]);
        for x in model.non_target_states() {
            for (node, (&prev, &cur)) in lower.values[x].iter().zip(&upper.values[x]).enumerate() {
                let excess = match order {
                    Some(LayerOrder::Increasing) => prev - cur,
                    Some(LayerOrder::Decreasing) => cur - prev,
                    Some(LayerOrder::Constant) => (prev - cur).abs(),
                    None => 0.0,
                };
                let tail_gap = match tail_from {
                    Some(n0) if k > n0 => (prev - cur).abs() - tail_tol,
                    _ => f64::NEG_INFINITY,
                };
                let worst = (excess - order_tol).max(tail_gap);
                if worst > 0.0 {
                    violations.push(LayerViolation {
                        state: x,
                        layer: k,
                        node,
                        excess: worst,
                    });
                }
            }
        }
    }
    Ok(MonotonicityCheck::Checked(MonotonicityReport {
        order,
        tail_from,
        layers_checked: keep,
        violations,
    }))
}
