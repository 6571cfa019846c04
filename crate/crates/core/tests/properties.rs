use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reachavoid::generate::{random_model, RandomModelSpec, ScheduleKind};
use reachavoid::solve::{backward_sweep, MonotonicityCheck};
use reachavoid::{
    build_augmented, find_separation, first_action_filler, kernel_mass, lift_policy,
    monotonicity_check, project_policy, solve_improved, validate_model, value_iterate,
    Discretization, MarkovPolicy, Model, Separation, StopRule, TimeGrid,
};

const STEPS: usize = 120;

fn model_from_seed(seed: u64, schedule: ScheduleKind) -> Model {
    let spec = RandomModelSpec {
        schedule,
        ..Default::default()
    };
    random_model(&mut ChaCha8Rng::seed_from_u64(seed), &spec)
}

fn schedule_kind() -> impl Strategy<Value = ScheduleKind> {
    prop_oneof![
        Just(ScheduleKind::Fixed),
        Just(ScheduleKind::Periodic),
        Just(ScheduleKind::Shrinking),
        Just(ScheduleKind::Growing),
        Just(ScheduleKind::EventuallyConstant),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iterates_are_monotone_bounded_probability_curves(seed in any::<u64>(), kind in schedule_kind()) {
        let model = model_from_seed(seed, kind);
        let n_max = 6;
        let aug = build_augmented(&model, n_max).unwrap();
        let disc = Discretization::new(&model, TimeGrid::new(model.horizon(), STEPS).unwrap());
        let run = value_iterate(&aug, &disc, n_max, 0.0).unwrap();
        prop_assert_eq!(run.snapshots.len(), n_max);
        for (n, w) in run.snapshots.iter().enumerate() {
            for x in 0..model.num_states() {
                let curve = &w.values[x];
                prop_assert!(curve.iter().all(|v| (0.0..=1.0).contains(v)));
                prop_assert!(curve.windows(2).all(|p| p[0] <= p[1] + 1e-12), "W_{} not monotone in t at {}", n + 1, x);
                if model.is_target(x) {
                    prop_assert!(curve.iter().all(|&v| v == 1.0));
                } else if model.obstacle_at(0).contains(&x) {
                    prop_assert!(curve.iter().all(|&v| v == 0.0));
                }
            }
        }
        for pair in run.snapshots.windows(2) {
            for x in 0..model.num_states() {
                for (a, b) in pair[0].values[x].iter().zip(&pair[1].values[x]) {
                    prop_assert!(a <= &(b + 1e-12), "W_n > W_(n+1) at state {}", x);
                }
            }
        }
    }

    #[test]
    fn sweep_matches_reference_iteration(seed in any::<u64>(), kind in schedule_kind()) {
        let model = model_from_seed(seed, kind);
        let depth = 7;
        let aug = build_augmented(&model, depth).unwrap();
        let disc = Discretization::new(&model, TimeGrid::new(model.horizon(), STEPS).unwrap());
        let swept = backward_sweep(&aug, &disc, depth, |_, _| {});
        let reference = value_iterate(&aug, &disc, depth, 0.0).unwrap();
        prop_assert!(swept.sup_distance(reference.last()) <= 1e-12);
    }

    #[test]
    fn kernel_mass_is_a_subdistribution_in_time(seed in any::<u64>()) {
        let model = model_from_seed(seed, ScheduleKind::Fixed);
        for x in 0..model.num_states() {
            for a in 0..model.num_actions(x) {
                let masses: Vec<f64> = (0..=40)
                    .map(|i| kernel_mass(&model, x, a, i as f64 * 0.25).unwrap())
                    .collect();
                prop_assert!(masses.windows(2).all(|p| p[0] <= p[1] + 1e-15));
                prop_assert!(masses.iter().all(|&m| (0.0..=1.0 + 1e-12).contains(&m)));
            }
        }
    }

    #[test]
    fn epsilon0_weakly_decreases_in_delta(seed in any::<u64>()) {
        let model = model_from_seed(seed, ScheduleKind::Periodic);
        let eps: Vec<f64> = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
            .iter()
            .map(|&d| match find_separation(&model, d) {
                Separation::Separated(c) => c.epsilon0,
                other => panic!("{other:?}"),
            })
            .collect();
        prop_assert!(eps.windows(2).all(|p| p[0] >= p[1] - 1e-15), "{:?}", eps);
    }

    #[test]
    fn validation_is_idempotent(seed in any::<u64>(), kind in schedule_kind()) {
        let model = model_from_seed(seed, kind);
        let first = validate_model(&model);
        prop_assert!(first.is_valid());
        prop_assert_eq!(first, validate_model(&model));
    }

    #[test]
    fn lift_then_project_is_identity_off_obstacles(seed in any::<u64>(), kind in schedule_kind()) {
        let model = model_from_seed(seed, kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let layers = model.obstacles().periodicity().span() + 2;
        let choices: Vec<Vec<usize>> = (0..layers)
            .map(|n| {
                (0..model.num_states())
                    .map(|x| {
                        if model.obstacle_at(n).contains(&x) {
                            0
                        } else {
                            rng.gen_range(0..model.num_actions(x))
                        }
                    })
                    .collect()
            })
            .collect();
        let policy = MarkovPolicy::deterministic(&model, &choices).unwrap();
        let back = project_policy(&lift_policy(&policy, &model), &model, first_action_filler(&model)).unwrap();
        prop_assert_eq!(back, policy);
    }
}

fn check(model: &Model) -> MonotonicityCheck {
    monotonicity_check(
        model,
        TimeGrid::new(model.horizon(), STEPS).unwrap(),
        12,
        1e-12,
        1e-12,
    )
    .unwrap()
}

#[test]
fn nested_schedules_order_the_layers() {
    use reachavoid::solve::LayerOrder;
    for (kind, order) in [
        (ScheduleKind::Shrinking, LayerOrder::Increasing),
        (ScheduleKind::Growing, LayerOrder::Decreasing),
        (ScheduleKind::Fixed, LayerOrder::Constant),
    ] {
        for seed in 0..20 {
            let model = model_from_seed(seed, kind);
            match check(&model) {
                MonotonicityCheck::Checked(report) => {
                    // a random nested chain may collapse to a constant one
                    if !(model.obstacles().is_shrinking() && model.obstacles().is_growing()) {
                        assert_eq!(report.order, Some(order));
                    }
                    assert!(
                        report.violations.is_empty(),
                        "{kind:?} seed {seed}: {:?}",
                        &report.violations[..report.violations.len().min(3)]
                    );
                }
                MonotonicityCheck::NotApplicable => panic!("{kind:?} seed {seed}"),
            }
        }
    }
}

#[test]
fn eventually_constant_tail_layers_coincide() {
    for seed in 0..20 {
        let model = model_from_seed(seed, ScheduleKind::EventuallyConstant);
        match check(&model) {
            MonotonicityCheck::Checked(report) => {
                assert!(report.tail_from.is_some());
                assert!(report.violations.is_empty(), "seed {seed}");
            }
            MonotonicityCheck::NotApplicable => panic!("seed {seed}"),
        }
    }
}

#[test]
fn grid_refinement_converges() {
    for seed in 0..5 {
        let model = model_from_seed(seed, ScheduleKind::Periodic);
        let solve = |steps| {
            solve_improved(
                &model,
                TimeGrid::new(model.horizon(), steps).unwrap(),
                1e-6,
                0.5,
                StopRule::Residual(1e-10),
            )
            .unwrap()
            .value
        };
        let (coarse, mid, fine) = (solve(60), solve(240), solve(960));
        let at_t = |v: &reachavoid::ValueLayer, x| v.at_horizon(x);
        for x in 0..model.num_states() {
            let (c, m, f) = (at_t(&coarse, x), at_t(&mid, x), at_t(&fine, x));
            assert!(
                (c - f).abs() <= 2.0 * model.horizon() / 60.0,
                "seed {seed} state {x}: {c} vs {f}"
            );
            assert!(
                (m - f).abs() <= 2.0 * model.horizon() / 240.0,
                "seed {seed} state {x}: {m} vs {f}"
            );
        }
    }
}
