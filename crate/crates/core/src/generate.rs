//! Random jump-separated models for property tests and benchmarks.
//!
//! The last state is the (absorbing) target. Every sojourn law puts at most
//! half of its mass on `[0, delta]`, so `find_separation(model, delta)`
//! always yields `epsilon0 >= 0.5`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{
    KernelRow, Model, ObstacleSchedule, SojournDistribution, StateSet, TransitionLaw,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Fixed,
    Periodic,
    /// `B_k ⊂ B_{k-1}`, constant after a short prefix.
    Shrinking,
    /// `B_{k-1} ⊂ B_k`, constant after a short prefix.
    Growing,
    /// Arbitrary prefix, then a constant tail.
    EventuallyConstant,
}

#[derive(Debug, Clone, Copy)]
pub struct RandomModelSpec {
    pub min_states: usize,
    pub max_states: usize,
    pub max_actions: usize,
    pub horizon: f64,
    pub delta: f64,
    pub schedule: ScheduleKind,
}

impl Default for RandomModelSpec {
    fn default() -> Self {
        Self {
            min_states: 4,
            max_states: 6,
            max_actions: 3,
            horizon: 3.0,
            delta: 0.5,
            schedule: ScheduleKind::Fixed,
        }
    }
}

fn random_sojourn<R: Rng + ?Sized>(rng: &mut R, delta: f64) -> SojournDistribution {
    match rng.gen_range(0..4) {
        0 => SojournDistribution::UniformRamp {
            mu: rng.gen_range(2.0 * delta..8.0 * delta),
        },
        1 => SojournDistribution::Exponential {
            mean: rng.gen_range(delta / std::f64::consts::LN_2..6.0 * delta),
        },
        2 => SojournDistribution::PointMass {
            t0: rng.gen_range(1.2 * delta..5.0 * delta),
        },
        _ => {
            let t1 = rng.gen_range(2.0 * delta..4.0 * delta);
            let f1 = rng.gen_range(0.1..0.9);
            let t2 = t1 + rng.gen_range(0.5 * delta..4.0 * delta);
            let f2 = rng.gen_range(f1..=1.0);
            SojournDistribution::PiecewiseLinear {
                knots: vec![(0.0, 0.0), (t1, f1), (t2, f2)],
            }
        }
    }
}

fn random_subset<R: Rng + ?Sized>(rng: &mut R, pool: &[usize], max_len: usize) -> StateSet {
    let len = rng.gen_range(0..=max_len.min(pool.len()));
    pool.choose_multiple(rng, len).copied().collect()
}

fn random_schedule<R: Rng + ?Sized>(
    rng: &mut R,
    regular: &[usize],
    kind: ScheduleKind,
) -> ObstacleSchedule {
    // at least one non-target state stays free at every epoch
    let cap = regular.len() - 1;
    match kind {
        ScheduleKind::Fixed => ObstacleSchedule::Fixed(random_subset(rng, regular, cap)),
        ScheduleKind::Periodic => {
            let period = rng.gen_range(1..=3);
            ObstacleSchedule::Periodic(
                (0..period)
                    .map(|_| random_subset(rng, regular, cap))
                    .collect(),
            )
        }
        ScheduleKind::EventuallyConstant => ObstacleSchedule::EventuallyConstant {
            prefix: (0..rng.gen_range(1..=3))
                .map(|_| random_subset(rng, regular, cap))
                .collect(),
            tail: random_subset(rng, regular, cap),
        },
        ScheduleKind::Shrinking | ScheduleKind::Growing => {
            let mut sets = vec![random_subset(rng, regular, cap)];
            for _ in 0..rng.gen_range(1..=3) {
                let last: Vec<usize> = sets.last().unwrap().iter().copied().collect();
                let keep = rng.gen_range(0..=last.len());
                sets.push(last.choose_multiple(rng, keep).copied().collect());
            }
            if kind == ScheduleKind::Growing {
                sets.reverse();
            }
            let tail = sets.pop().unwrap();
            ObstacleSchedule::Explicit { sets, tail }
        }
    }
}

/// A random valid model with `epsilon0 >= 0.5` at `spec.delta`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, spec: &RandomModelSpec) -> Model {
    let n = rng.gen_range(spec.min_states..=spec.max_states);
    let target = n - 1;
    let regular: Vec<usize> = (0..target).collect();
    let mut actions = Vec::with_capacity(n);
    let mut kernel = Vec::with_capacity(n);
    for x in 0..n {
        if x == target {
            actions.push(vec!["stay".to_string()]);
            kernel.push(vec![TransitionLaw::new(vec![KernelRow {
                to: target,
                weight: 1.0,
                sojourn: SojournDistribution::UniformRamp { mu: 1.0 },
            }])]);
            continue;
        }
        let count = rng.gen_range(1..=spec.max_actions);
        actions.push((0..count).map(|a| format!("a{a}")).collect());
        kernel.push(
            (0..count)
                .map(|_| {
                    let fanout = rng.gen_range(1..=3.min(n));
                    let targets: Vec<usize> = (0..n)
                        .collect::<Vec<_>>()
                        .choose_multiple(rng, fanout)
                        .copied()
                        .collect();
                    let raw: Vec<f64> = targets.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
                    let total = rng.gen_range(0.8..=1.0) / raw.iter().sum::<f64>();
                    TransitionLaw::new(
                        targets
                            .into_iter()
                            .zip(raw)
                            .map(|(to, w)| KernelRow {
                                to,
                                weight: w * total,
                                sojourn: random_sojourn(rng, spec.delta),
                            })
                            .collect(),
                    )
                })
                .collect(),
        );
    }
    let states = (0..n).map(|x| format!("s{x}")).collect();
    let obstacles = random_schedule(rng, &regular, spec.schedule);
    Model::new(
        states,
        actions,
        kernel,
        obstacles,
        [target].into_iter().collect(),
        spec.horizon,
    )
    .expect("generated model is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{find_separation, validate_model, Separation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_are_valid_and_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in [
            ScheduleKind::Fixed,
            ScheduleKind::Periodic,
            ScheduleKind::Shrinking,
            ScheduleKind::Growing,
            ScheduleKind::EventuallyConstant,
        ] {
            let spec = RandomModelSpec {
                schedule: kind,
                ..Default::default()
            };
            for _ in 0..50 {
                let m = random_model(&mut rng, &spec);
                assert!(validate_model(&m).is_valid(), "{}", validate_model(&m));
                match find_separation(&m, spec.delta) {
                    Separation::Separated(c) => assert!(c.epsilon0 >= 0.5),
                    other => panic!("{other:?}"),
                }
                match kind {
                    ScheduleKind::Shrinking => assert!(m.obstacles().is_shrinking()),
                    ScheduleKind::Growing => assert!(m.obstacles().is_growing()),
                    _ => {}
                }
            }
        }
    }
}
