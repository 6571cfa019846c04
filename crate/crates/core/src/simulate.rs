//! Monte Carlo trajectories of the semi-Markov process under a policy.
//!
//! Episode `i` of a run with seed `s` draws from its own ChaCha8 stream
//! (`seed = s`, `stream = i`), so estimates do not depend on how episodes
//! are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::augment::{AugmentedModel, Decision, MarkovPolicy, StationaryAugmentedPolicy};
use crate::model::{ActionId, Model, StateId, TransitionLaw};

/// z-value of a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Jump {
    To {
        state: StateId,
        sojourn: f64,
    },
    /// The sub-stochastic deficit: the process never leaves.
    NoJump,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutcomeKind {
    ReachedTarget { at: f64 },
    HitObstacle { epoch: usize, at: f64 },
    TimedOut,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeOutcome {
    pub kind: OutcomeKind,
    pub jumps: usize,
    /// Time of the last jump taken (the overshooting jump of a timeout is not counted).
    pub final_time: f64,
}

impl EpisodeOutcome {
    pub fn reached(&self) -> bool {
        matches!(self.kind, OutcomeKind::ReachedTarget { .. })
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            OutcomeKind::ReachedTarget { .. } => "reached",
            OutcomeKind::HitObstacle { .. } => "obstacle",
            OutcomeKind::TimedOut => "timeout",
        }
    }
}

/// Row chosen by weight, then a holding time by inversion of its CDF.
pub fn sample_jump<R: Rng + ?Sized>(law: &TransitionLaw, rng: &mut R) -> Jump {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let row = law.rows.iter().find(|r| {
        acc += r.weight;
        u < acc
    });
    let Some(row) = row else {
        return Jump::NoJump;
    };
    match row.sojourn.quantile(rng.gen()) {
        Some(sojourn) => Jump::To {
            state: row.to,
            sojourn,
        },
        None => Jump::NoJump,
    }
}

fn sample_action<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> ActionId {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (a, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return a;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Shared episode loop. `obstacle(y, n)` tells whether landing in `y` at
/// epoch `n` is fatal; `choose` returns the law used at `(x, n)`, or `None`
/// for a pair that never moves.
fn episode<'m, R, O, C>(
    x0: StateId,
    horizon: f64,
    is_target: impl Fn(StateId) -> bool,
    obstacle: O,
    mut choose: C,
    rng: &mut R,
) -> EpisodeOutcome
where
    R: Rng + ?Sized,
    O: Fn(StateId, usize) -> bool,
    C: FnMut(StateId, usize, &mut R) -> Option<&'m TransitionLaw>,
{
    let done = |kind, jumps, final_time| EpisodeOutcome {
        kind,
        jumps,
        final_time,
    };
    if is_target(x0) {
        return done(OutcomeKind::ReachedTarget { at: 0.0 }, 0, 0.0);
    }
    if obstacle(x0, 0) {
        return done(OutcomeKind::HitObstacle { epoch: 0, at: 0.0 }, 0, 0.0);
    }
    let (mut x, mut n, mut clock) = (x0, 0usize, 0.0f64);
    loop {
        let Some(law) = choose(x, n, rng) else {
            return done(OutcomeKind::TimedOut, n, clock);
        };
        let (y, sojourn) = match sample_jump(law, rng) {
            Jump::To { state, sojourn } => (state, sojourn),
            Jump::NoJump => return done(OutcomeKind::TimedOut, n, clock),
        };
        if clock + sojourn > horizon {
            return done(OutcomeKind::TimedOut, n, clock);
        }
        clock += sojourn;
        n += 1;
        x = y;
        if is_target(x) {
            return done(OutcomeKind::ReachedTarget { at: clock }, n, clock);
        }
        if obstacle(x, n) {
            return done(
                OutcomeKind::HitObstacle {
                    epoch: n,
                    at: clock,
                },
                n,
                clock,
            );
        }
    }
}

/// One trajectory of the base model from `x0` under a Markov policy.
pub fn run_episode<R: Rng + ?Sized>(
    model: &Model,
    policy: &MarkovPolicy,
    x0: StateId,
    horizon: f64,
    rng: &mut R,
) -> EpisodeOutcome {
    episode(
        x0,
        horizon,
        |x| model.is_target(x),
        |x, n| model.obstacle_at(n).contains(&x),
        |x, n, rng| {
            let a = sample_action(policy.plan(n, x), rng);
            model.law(x, a).ok()
        },
        rng,
    )
}

/// One trajectory of the augmented model from `(x0, 0)` under a stationary policy.
pub fn run_augmented_episode<R: Rng + ?Sized>(
    aug: &AugmentedModel,
    policy: &StationaryAugmentedPolicy,
    x0: StateId,
    horizon: f64,
    rng: &mut R,
) -> EpisodeOutcome {
    episode(
        x0,
        horizon,
        |x| aug.base().is_target(x),
        |x, k| aug.is_obstacle(x, k),
        |x, k, rng| match policy.decision(x, k) {
            Decision::Halt => None,
            Decision::Mix(p) => {
                let a = sample_action(p, rng);
                aug.law(x, k, a)
            }
        },
        rng,
    )
}

/// Random stream of episode `index` under `seed`.
pub fn episode_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    pub n: u64,
    pub successes: u64,
    pub ci95: (f64, f64),
    pub seed: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, n: u64, seed: u64) -> Self {
        Self {
            p_hat: if n == 0 {
                0.0
            } else {
                successes as f64 / n as f64
            },
            n,
            successes,
            ci95: wilson_interval(successes, n, Z95),
            seed,
        }
    }

    /// Binomial standard error `sqrt(p (1 - p) / n)`.
    pub fn std_error(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.n as f64).sqrt()
    }
}

/// Outcomes of `episodes` independent trajectories, in episode order.
pub fn simulate_episodes(
    model: &Model,
    policy: &MarkovPolicy,
    x0: StateId,
    horizon: f64,
    episodes: u64,
    seed: u64,
) -> Vec<EpisodeOutcome> {
    (0..episodes)
        .into_par_iter()
        .map(|i| run_episode(model, policy, x0, horizon, &mut episode_rng(seed, i)))
        .collect()
}

/// Empirical `P(reach C by the horizon before any obstacle)` from `x0`.
pub fn estimate_reach_avoid(
    model: &Model,
    policy: &MarkovPolicy,
    x0: StateId,
    horizon: f64,
    episodes: u64,
    seed: u64,
) -> Estimate {
    let successes = (0..episodes)
        .into_par_iter()
        .filter(|&i| run_episode(model, policy, x0, horizon, &mut episode_rng(seed, i)).reached())
        .count() as u64;
    Estimate::from_counts(successes, episodes, seed)
}

/// Empirical reach probability of the target pairs from `(x0, 0)` on the augmented model.
pub fn estimate_augmented(
    aug: &AugmentedModel,
    policy: &StationaryAugmentedPolicy,
    x0: StateId,
    horizon: f64,
    episodes: u64,
    seed: u64,
) -> Estimate {
    let successes = (0..episodes)
        .into_par_iter()
        .filter(|&i| {
            run_augmented_episode(aug, policy, x0, horizon, &mut episode_rng(seed, i)).reached()
        })
        .count() as u64;
    Estimate::from_counts(successes, episodes, seed)
}
