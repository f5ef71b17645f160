//! Agents, instance generators, and the round-loop experiment runner.
//!
//! One experiment fixes a hidden objective `c*`, a prediction region, a
//! stream of feasible sets, and an agent policy. Each round the learner
//! predicts, the agent acts on the freshly generated set, and the runner
//! records the instantaneous regret quantities. Runs are deterministic given
//! `(instance, learner, policy, seed)`: all randomness flows from one seed
//! through separate counter-based generator streams.

mod trace;

pub use trace::{format_scalar, ExperimentTrace, RoundTrace};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::ActionSet;
use crate::learners::{AnyLearner, InverseLearner, LearnerConfig, ProblemBounds};
use crate::linalg::Vector;
use crate::losses::Observation;
use crate::region::FeasibleRegion;
use crate::{Error, Result, Scalar};

// Stream ids carving independent substreams out of one seed.
const STREAM_GENERATOR: u64 = 1;
const STREAM_AGENT: u64 = 2;
const STREAM_OBJECTIVE: u64 = 3;
const STREAM_LEARNER: u64 = 4;

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derived seed for learner-internal randomness.
pub fn learner_seed(seed: u64) -> u64 {
    // splitmix64 step keeps distinct seeds distinct.
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15 ^ STREAM_LEARNER);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How the agent chooses its action each round.
#[derive(Clone, Debug, PartialEq)]
pub enum AgentPolicy<S> {
    /// Exact maximizer of `⟨c*, ·⟩`.
    Optimal,
    /// Maximizer of `⟨c* + σξ, ·⟩` with fresh standard-normal noise `ξ`.
    PerturbedObjective { noise_scale: S },
    /// With the given probability, replace the optimal action by a uniformly
    /// chosen extreme point.
    SuboptimalMix { probability: S },
}

impl<S: Scalar> AgentPolicy<S> {
    pub fn validate(&self) -> Result<()> {
        match self {
            AgentPolicy::Optimal => Ok(()),
            AgentPolicy::PerturbedObjective { noise_scale } => {
                if *noise_scale < S::zero() || !noise_scale.is_finite() {
                    return Err(Error::InvalidConfig(
                        "noise scale must be non-negative".into(),
                    ));
                }
                Ok(())
            }
            AgentPolicy::SuboptimalMix { probability } => {
                if *probability < S::zero() || *probability > S::one() {
                    return Err(Error::InvalidConfig(
                        "corruption probability must lie in [0, 1]".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            AgentPolicy::Optimal => "optimal".into(),
            AgentPolicy::PerturbedObjective { noise_scale } => {
                format!("perturbed:{noise_scale}")
            }
            AgentPolicy::SuboptimalMix { probability } => format!("mix:{probability}"),
        }
    }
}

/// The agent's action on one set; always feasible.
pub fn agent_act<S: Scalar, R: Rng + ?Sized>(
    policy: &AgentPolicy<S>,
    set: &ActionSet<S>,
    c_star: &Vector<S>,
    rng: &mut R,
) -> Result<Vector<S>> {
    match policy {
        AgentPolicy::Optimal => set.argmax_linear(c_star),
        AgentPolicy::PerturbedObjective { noise_scale } => {
            let mut c = c_star.clone();
            let noise = Vector::from_fn(c.dim(), |_| S::standard_normal(rng));
            c.axpy(*noise_scale, &noise);
            set.argmax_linear(&c)
        }
        AgentPolicy::SuboptimalMix { probability } => {
            let u = S::unit_uniform(rng);
            if u < *probability {
                Ok(set.random_extreme(rng))
            } else {
                set.argmax_linear(c_star)
            }
        }
    }
}

/// Per-round feasible-set source. Random kinds rescale their draws so the
/// ℓ2-diameter never exceeds the configured cap.
#[derive(Clone, Debug, PartialEq)]
pub enum ActionSetGenerator<S> {
    /// Balls with centers uniform in `[−1, 1]ⁿ` and radii uniform in the
    /// given range (clamped to half the diameter cap).
    RandomBalls { radius_min: S, radius_max: S },
    /// Boxes with centers uniform in `[−1, 1]ⁿ` and half-widths uniform in
    /// `(0, half_width_max]`.
    RandomBoxes { half_width_max: S },
    /// Finite point sets, points uniform in `[−1, 1]ⁿ`.
    RandomVertexSets { points: usize },
    /// The lower-bound construction: round `t ≤ n` plays the segment on the
    /// `t`-th axis reaching `±(B/4)√n`; later rounds reuse the last axis.
    LowerBoundSegments { bound: S },
    /// Segments with endpoints uniform in the radius-½ disk (dimension 2).
    Segments2D,
    /// Point sets uniform in the radius-½ disk (dimension 2).
    Polygons2D { points: usize },
    /// An explicit list of sets, cycled.
    Explicit(Vec<ActionSet<S>>),
}

impl<S: Scalar> ActionSetGenerator<S> {
    pub fn label(&self) -> String {
        match self {
            ActionSetGenerator::RandomBalls {
                radius_min,
                radius_max,
            } => format!("balls:{radius_min}:{radius_max}"),
            ActionSetGenerator::RandomBoxes { half_width_max } => {
                format!("boxes:{half_width_max}")
            }
            ActionSetGenerator::RandomVertexSets { points } => format!("vertices:{points}"),
            ActionSetGenerator::LowerBoundSegments { bound } => format!("lowerbound:{bound}"),
            ActionSetGenerator::Segments2D => "segments2d".into(),
            ActionSetGenerator::Polygons2D { points } => format!("polygons2d:{points}"),
            ActionSetGenerator::Explicit(sets) => format!("explicit:{}", sets.len()),
        }
    }

    fn required_dim(&self) -> Option<usize> {
        match self {
            ActionSetGenerator::Segments2D | ActionSetGenerator::Polygons2D { .. } => Some(2),
            ActionSetGenerator::Explicit(sets) => sets.first().map(|s| s.dim()),
            _ => None,
        }
    }

    /// Generate the set for the given 1-based round.
    pub fn generate<R: Rng + ?Sized>(
        &self,
        round: usize,
        dim: usize,
        diameter_cap: S,
        rng: &mut R,
    ) -> Result<ActionSet<S>> {
        let half = S::cast(0.5);
        let unit = |rng: &mut R| S::unit_uniform(rng) * S::cast(2.0) - S::one();
        match self {
            ActionSetGenerator::RandomBalls {
                radius_min,
                radius_max,
            } => {
                let center = Vector::from_fn(dim, |_| unit(rng));
                let cap = diameter_cap * half;
                let lo = (*radius_min).min(cap);
                let hi = (*radius_max).min(cap);
                let radius = lo + (hi - lo) * S::unit_uniform(rng);
                ActionSet::ball(center, radius)
            }
            ActionSetGenerator::RandomBoxes { half_width_max } => {
                let center = Vector::from_fn(dim, |_| unit(rng));
                let mut widths =
                    Vector::from_fn(dim, |_| *half_width_max * S::unit_uniform(rng));
                let diam = widths.norm() * S::cast(2.0);
                if diam > diameter_cap {
                    widths = widths.scale(diameter_cap / diam);
                }
                ActionSet::axis_box(center.sub(&widths), center.add(&widths))
            }
            ActionSetGenerator::RandomVertexSets { points } => {
                if *points == 0 {
                    return Err(Error::InvalidConfig("vertex count must be positive".into()));
                }
                let mut pts: Vec<Vector<S>> = (0..*points)
                    .map(|_| Vector::from_fn(dim, |_| unit(rng)))
                    .collect();
                let mut diam = S::zero();
                for (i, p) in pts.iter().enumerate() {
                    for q in pts.iter().skip(i + 1) {
                        diam = diam.max(p.dist(q));
                    }
                }
                if diam > diameter_cap {
                    let scale = diameter_cap / diam;
                    let mut centroid = Vector::zeros(dim);
                    for p in &pts {
                        centroid.axpy(S::cast((pts.len() as f64).recip()), p);
                    }
                    pts = pts
                        .into_iter()
                        .map(|p| {
                            let mut q = centroid.clone();
                            q.axpy(scale, &p.sub(&centroid));
                            q
                        })
                        .collect();
                }
                ActionSet::vertices(pts)
            }
            ActionSetGenerator::LowerBoundSegments { bound } => {
                let axis = round.min(dim) - 1;
                let reach = *bound * S::cast(0.25) * S::cast(dim as f64).sqrt();
                let e = Vector::basis(dim, axis);
                ActionSet::segment(e.scale(-reach), e.scale(reach))
            }
            ActionSetGenerator::Segments2D => {
                let disk_point = |rng: &mut R| {
                    let r = half * S::unit_uniform(rng).sqrt();
                    let theta = S::unit_uniform(rng) * S::TAU();
                    Vector::new(vec![r * theta.cos(), r * theta.sin()])
                };
                ActionSet::segment(disk_point(rng), disk_point(rng))
            }
            ActionSetGenerator::Polygons2D { points } => {
                if *points < 2 {
                    return Err(Error::InvalidConfig(
                        "polygon generator needs at least 2 points".into(),
                    ));
                }
                let pts = (0..*points)
                    .map(|_| {
                        let r = half * S::unit_uniform(rng).sqrt();
                        let theta = S::unit_uniform(rng) * S::TAU();
                        Vector::new(vec![r * theta.cos(), r * theta.sin()])
                    })
                    .collect();
                ActionSet::vertices(pts)
            }
            ActionSetGenerator::Explicit(sets) => {
                if sets.is_empty() {
                    return Err(Error::InvalidConfig("explicit set list is empty".into()));
                }
                Ok(sets[(round - 1) % sets.len()].clone())
            }
        }
    }
}

/// Everything defining one experiment instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec<S> {
    pub dim: usize,
    pub horizon: usize,
    pub region: FeasibleRegion<S>,
    pub true_objective: Vector<S>,
    pub generator: ActionSetGenerator<S>,
    /// Diameter cap `K` enforced on generated sets.
    pub action_diameter: S,
    /// Exact interaction bound `B` when known; defaults to `D·K`.
    pub interaction_bound: Option<S>,
    pub seed: u64,
}

impl<S: Scalar> InstanceSpec<S> {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if self.region.dim() != self.dim {
            return Err(Error::InvalidConfig(format!(
                "region dimension {} does not match instance dimension {}",
                self.region.dim(),
                self.dim
            )));
        }
        self.true_objective.validate(self.dim)?;
        if !self.region.contains(&self.true_objective, crate::membership_tolerance()) {
            return Err(Error::InvalidConfig(
                "true objective lies outside the prediction region".into(),
            ));
        }
        if !(self.action_diameter > S::zero()) {
            return Err(Error::InvalidConfig(
                "action diameter cap must be positive".into(),
            ));
        }
        if let Some(required) = self.generator.required_dim() {
            if required != self.dim {
                return Err(Error::InvalidConfig(format!(
                    "generator requires dimension {required}, instance has {}",
                    self.dim
                )));
            }
        }
        if let ActionSetGenerator::Explicit(sets) = &self.generator {
            for set in sets {
                if set.dim() != self.dim {
                    return Err(Error::InvalidConfig(
                        "explicit action set dimension mismatch".into(),
                    ));
                }
                if set.diameter_l2() > self.action_diameter + S::cast(1e-9) {
                    return Err(Error::InvalidConfig(
                        "explicit action set exceeds the diameter cap".into(),
                    ));
                }
            }
        }
        if let ActionSetGenerator::LowerBoundSegments { .. } = &self.generator {
            if self.horizon < self.dim {
                return Err(Error::InvalidConfig(
                    "lower-bound instance needs horizon ≥ dimension".into(),
                ));
            }
        }
        Ok(())
    }

    /// The `(D, K, B)` constants shared by learners and acceptance checks.
    pub fn bounds(&self) -> Result<ProblemBounds<S>> {
        let d = self.region.diameter();
        let k = self.action_diameter;
        match self.interaction_bound {
            Some(b) => ProblemBounds::new(d, k, b),
            None => ProblemBounds::from_diameters(d, k),
        }
    }

    /// Canonical description fed into the trace fingerprint.
    pub fn describe(&self) -> String {
        format!(
            "n={};T={};region={:?};c*={:?};gen={};K={:?};B={:?};seed={}",
            self.dim,
            self.horizon,
            self.region,
            self.true_objective.as_slice(),
            self.generator.label(),
            self.action_diameter,
            self.interaction_bound,
            self.seed,
        )
    }
}

/// A unit vector with direction drawn uniformly from the sphere.
pub fn random_unit_objective<S: Scalar>(dim: usize, seed: u64) -> Vector<S> {
    let mut rng = stream_rng(seed, STREAM_OBJECTIVE);
    loop {
        let v = Vector::from_fn(dim, |_| S::standard_normal(&mut rng));
        let norm = v.norm();
        if norm > S::cast(1e-9) {
            return v.scale(norm.recip());
        }
    }
}

/// The lower-bound instance: axis segments reaching `±(B/4)√n`, the box hull
/// of `{±1/√n}ⁿ` as the region, and a uniformly random sign vector scaled to
/// `1/√n` as the objective. The interaction bound is exactly `B`.
pub fn gen_lower_bound_instance<S: Scalar>(
    dim: usize,
    bound: S,
    horizon: usize,
    seed: u64,
) -> Result<InstanceSpec<S>> {
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    if horizon < dim {
        return Err(Error::InvalidConfig(format!(
            "lower-bound instance needs horizon ≥ {dim}, got {horizon}"
        )));
    }
    if !(bound > S::zero()) {
        return Err(Error::InvalidConfig("bound must be positive".into()));
    }
    let scale = S::cast(dim as f64).sqrt().recip();
    let mut rng = stream_rng(seed, STREAM_OBJECTIVE);
    let c_star = Vector::from_fn(dim, |_| {
        if rng.random::<bool>() {
            scale
        } else {
            -scale
        }
    });
    let corner = Vector::from_fn(dim, |_| scale);
    Ok(InstanceSpec {
        dim,
        horizon,
        region: FeasibleRegion::axis_box(corner.scale(-S::one()), corner)?,
        true_objective: c_star,
        generator: ActionSetGenerator::LowerBoundSegments { bound },
        // Segment length is (B/2)√n; the interaction bound is exactly B.
        action_diameter: bound * S::cast(0.5) * S::cast(dim as f64).sqrt(),
        interaction_bound: Some(bound),
        seed,
    })
}

/// Run the full protocol: predict, observe, act, record, update.
pub fn run_experiment<S: Scalar, L: InverseLearner<S>>(
    spec: &InstanceSpec<S>,
    learner: &mut L,
    policy: &AgentPolicy<S>,
) -> Result<ExperimentTrace<S>> {
    spec.validate()?;
    policy.validate()?;
    let bounds = spec.bounds()?;
    let mut gen_rng = stream_rng(spec.seed, STREAM_GENERATOR);
    let mut agent_rng = stream_rng(spec.seed, STREAM_AGENT);
    let c_star = &spec.true_objective;
    let mut rounds = Vec::with_capacity(spec.horizon);
    let mut cum_regret = S::zero();
    let mut cum_tilde = S::zero();
    let mut cum_v = S::zero();
    let mut cum_delta = S::zero();
    for t in 1..=spec.horizon {
        let mut step = || -> Result<RoundTrace<S>> {
            let prediction = learner.predict()?;
            let set = spec
                .generator
                .generate(t, spec.dim, spec.action_diameter, &mut gen_rng)?;
            let agent_action = agent_act(policy, &set, c_star, &mut agent_rng)?;
            let learner_action = set.argmax_linear(&prediction)?;
            let best_for_truth = set.argmax_linear(c_star)?;
            let inst_delta = c_star.dot(&best_for_truth) - c_star.dot(&agent_action);
            let diff = learner_action.sub(&agent_action);
            let inst_regret = c_star.dot(&agent_action.sub(&learner_action));
            let inst_tilde = prediction.sub(c_star).dot(&diff);
            let obs = Observation::new(set, agent_action.clone())?;
            learner.update(&obs)?;
            Ok(RoundTrace {
                round: t,
                prediction,
                learner_action,
                agent_action,
                inst_regret,
                inst_tilde,
                inst_v: inst_tilde * inst_tilde,
                inst_delta,
                cum_regret: S::zero(),
                cum_tilde: S::zero(),
                cum_v: S::zero(),
                cum_delta: S::zero(),
            })
        };
        let mut row = step().map_err(|e| e.at_round(t))?;
        cum_regret += row.inst_regret;
        cum_tilde += row.inst_tilde;
        cum_v += row.inst_v;
        cum_delta += row.inst_delta;
        row.cum_regret = cum_regret;
        row.cum_tilde = cum_tilde;
        row.cum_v = cum_v;
        row.cum_delta = cum_delta;
        rounds.push(row);
    }
    Ok(ExperimentTrace::assemble(
        spec,
        learner.name(),
        &policy.label(),
        bounds,
        rounds,
    ))
}

/// Build the configured learner (seeded deterministically from the instance
/// seed) and run the experiment.
pub fn run_configured<S: Scalar>(
    spec: &InstanceSpec<S>,
    learner_config: &LearnerConfig<S>,
    policy: &AgentPolicy<S>,
) -> Result<ExperimentTrace<S>> {
    let bounds = spec.bounds()?;
    let mut learner = AnyLearner::build(
        learner_config,
        &spec.region,
        &bounds,
        spec.horizon,
        learner_seed(spec.seed),
    )?;
    run_experiment(spec, &mut learner, policy)
}

/// Coordinate mean of all predictions in the trace.
pub fn online_to_batch_average<S: Scalar>(trace: &ExperimentTrace<S>) -> Result<Vector<S>> {
    if trace.rounds.is_empty() {
        return Err(Error::InvalidInput("empty trace has no average".into()));
    }
    let dim = trace.rounds[0].prediction.dim();
    let mut mean = Vector::zeros(dim);
    for row in &trace.rounds {
        mean.axpy(S::one(), &row.prediction);
    }
    Ok(mean.scale(S::cast(trace.rounds.len() as f64).recip()))
}
