//! Cross-module invariants: membership of predictions, the positive-definite
//! floor of the Newton matrix, and randomized properties of the geometric
//! primitives.

use proptest::prelude::*;

use invopt_core::geometry::ActionSet;
use invopt_core::learners::{InverseLearner, LearnerConfig, OnsInverseLearner, ProblemBounds};
use invopt_core::linalg::Vector;
use invopt_core::losses::Observation;
use invopt_core::region::FeasibleRegion;
use invopt_core::sim::{
    random_unit_objective, run_experiment, ActionSetGenerator, AgentPolicy, InstanceSpec,
};

#[test]
fn newton_matrix_keeps_its_regularization_floor() {
    let region = FeasibleRegion::<f64>::ball(Vector::zeros(4), 1.0).unwrap();
    let bounds = ProblemBounds::from_diameters(2.0, 1.0).unwrap();
    let mut learner = OnsInverseLearner::new(region, &bounds, None).unwrap();
    let eps = learner.state().epsilon();
    let generator = ActionSetGenerator::RandomVertexSets { points: 6 };
    let c_star = random_unit_objective::<f64>(4, 9);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(10);
    for t in 1..=500usize {
        let _ = learner.predict().unwrap();
        let set = generator.generate(t, 4, 1.0, &mut rng).unwrap();
        let x = set.argmax_linear(&c_star).unwrap();
        learner.update(&Observation::new(set, x).unwrap()).unwrap();
        if t % 100 == 0 {
            let min_eig = learner.state().matrix().min_eigenvalue();
            assert!(
                min_eig >= eps - 1e-9,
                "matrix lost its floor at round {t}: {min_eig} < {eps}"
            );
        }
    }
}

#[test]
fn predictions_stay_in_the_region_for_all_learners() {
    // Wrap each learner to record membership of every prediction.
    struct Recording<L> {
        inner: L,
        region: FeasibleRegion<f64>,
    }
    impl<L: InverseLearner<f64>> InverseLearner<f64> for Recording<L> {
        fn predict(&mut self) -> invopt_core::Result<Vector<f64>> {
            let p = self.inner.predict()?;
            assert!(
                self.region.contains(&p, 1e-8),
                "prediction left the region: {:?}",
                p.as_slice()
            );
            Ok(p)
        }
        fn update(&mut self, obs: &Observation<f64>) -> invopt_core::Result<()> {
            self.inner.update(obs)
        }
        fn name(&self) -> &'static str {
            self.inner.name()
        }
    }

    for config in [
        LearnerConfig::Ons { eta: None },
        LearnerConfig::MetaGrad { grid: None },
        LearnerConfig::Ogd { scale: None },
        LearnerConfig::Arc2d,
    ] {
        let dim = 2;
        let spec = InstanceSpec {
            dim,
            horizon: 300,
            region: FeasibleRegion::ball(Vector::zeros(dim), 1.0).unwrap(),
            true_objective: random_unit_objective(dim, 21),
            generator: ActionSetGenerator::Segments2D,
            action_diameter: 1.0,
            interaction_bound: None,
            seed: 22,
        };
        let bounds = spec.bounds().unwrap();
        let inner = invopt_core::learners::AnyLearner::build(
            &config,
            &spec.region,
            &bounds,
            spec.horizon,
            1,
        )
        .unwrap();
        let mut learner = Recording {
            inner,
            region: spec.region.clone(),
        };
        let trace = run_experiment(&spec, &mut learner, &AgentPolicy::Optimal).unwrap();
        // The learner-explains-the-data term is non-negative, so R ≤ R̃ at
        // every prefix.
        for row in &trace.rounds {
            assert!(row.cum_regret <= row.cum_tilde + 1e-9);
        }
    }
}

fn arb_direction(dim: usize) -> impl Strategy<Value = Vector<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim).prop_map(Vector::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn argmax_dominates_feasible_points(
        c in arb_direction(3),
        corner in prop::collection::vec(-1.0f64..1.0, 3),
        widths in prop::collection::vec(0.01f64..1.0, 3),
        seed in 0u64..1000,
    ) {
        let lower = Vector::new(corner.clone());
        let upper = Vector::new(
            corner.iter().zip(&widths).map(|(c, w)| c + w).collect(),
        );
        let set = ActionSet::axis_box(lower, upper).unwrap();
        let best = set.argmax_linear(&c).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        for _ in 0..32 {
            let x = set.random_point(&mut rng);
            prop_assert!(c.dot(&x) <= c.dot(&best) + 1e-12);
        }
    }

    #[test]
    fn argmax_scaling_leaves_objective_invariant(
        c in arb_direction(4),
        lambda in 0.001f64..100.0,
        points in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 4), 1..8),
    ) {
        let set = ActionSet::vertices(points.into_iter().map(Vector::new).collect()).unwrap();
        let a = set.argmax_linear(&c).unwrap();
        let b = set.argmax_linear(&c.scale(lambda)).unwrap();
        prop_assert!((c.dot(&a) - c.dot(&b)).abs() <= 1e-12 * c.dot(&a).abs().max(1.0));
    }

    #[test]
    fn arc_intersection_is_contained_in_both(
        s1 in 0.0f64..std::f64::consts::TAU,
        w1 in 0.0f64..std::f64::consts::PI,
        s2 in 0.0f64..std::f64::consts::TAU,
        w2 in 0.0f64..std::f64::consts::PI,
    ) {
        use invopt_core::arc2d::AngularInterval;
        let a = AngularInterval::new(s1, w1).unwrap();
        let b = AngularInterval::new(s2, w2).unwrap();
        if let Ok(i) = a.intersect(&b) {
            prop_assert!(i.width() <= a.width() + 1e-9);
            prop_assert!(i.width() <= b.width() + 1e-9);
            for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let theta = i.start() + frac * i.width();
                prop_assert!(a.contains_angle(theta, 1e-9));
                prop_assert!(b.contains_angle(theta, 1e-9));
            }
        }
    }

    #[test]
    fn euclidean_projection_is_idempotent_and_feasible(
        y in prop::collection::vec(-5.0f64..5.0, 3),
        radius in 0.1f64..2.0,
    ) {
        let region = FeasibleRegion::ball(Vector::zeros(3), radius).unwrap();
        let p = region.project_euclidean(&Vector::new(y)).unwrap();
        prop_assert!(region.contains(&p, 1e-12));
        let pp = region.project_euclidean(&p).unwrap();
        prop_assert!(p.dist(&pp) <= 1e-12);
    }
}
