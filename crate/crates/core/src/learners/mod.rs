//! Sequential learners behind one predict/update interface.
//!
//! Each round the protocol calls `predict()` for the next objective guess,
//! then `update(observation)` with the revealed feedback — strictly in that
//! order. Four learners are provided: the Newton-step learner (logarithmic
//! regret under optimal feedback), the multi-rate aggregator (robust to
//! suboptimal feedback), a gradient-descent baseline, and the planar
//! arc-shrinking learner re-exported from [`crate::arc2d`].

mod metagrad;
mod ogd;
mod ons;

pub use metagrad::{expert_prior, learning_rate_grid, MetaGradLearner};
pub use ogd::OgdLearner;
pub use ons::{newton_regularization, surrogate_curvature, OnsInverseLearner, OnsState};

use crate::arc2d::Arc2dLearner;
use crate::linalg::Vector;
use crate::losses::Observation;
use crate::region::FeasibleRegion;
use crate::{Error, Result, Scalar};

/// One online learner instance. Calls must alternate predict → update;
/// anything else is a protocol error.
pub trait InverseLearner<S: Scalar> {
    /// The prediction `ĉ_t` for the current round.
    fn predict(&mut self) -> Result<Vector<S>>;

    /// Consume the round's feedback.
    fn update(&mut self, obs: &Observation<S>) -> Result<()>;

    /// Short stable label for traces and summaries.
    fn name(&self) -> &'static str;
}

/// The size constants every learner is configured with: the region diameter
/// `D`, the per-round action-set diameter bound `K`, and the interaction
/// bound `B ≥ max ⟨c − c', x − x'⟩`. `B = D·K` is always valid; instance
/// generators may supply a tighter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemBounds<S> {
    pub region_diameter: S,
    pub action_diameter: S,
    pub interaction_bound: S,
}

impl<S: Scalar> ProblemBounds<S> {
    pub fn new(region_diameter: S, action_diameter: S, interaction_bound: S) -> Result<Self> {
        for (label, v) in [
            ("region diameter", region_diameter),
            ("action diameter", action_diameter),
            ("interaction bound", interaction_bound),
        ] {
            if !(v > S::zero()) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{label} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(ProblemBounds {
            region_diameter,
            action_diameter,
            interaction_bound,
        })
    }

    /// Bounds with the always-valid `B = D·K`.
    pub fn from_diameters(region_diameter: S, action_diameter: S) -> Result<Self> {
        Self::new(
            region_diameter,
            action_diameter,
            region_diameter * action_diameter,
        )
    }
}

/// Tracks the predict/update alternation of a single learner instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProtocolGuard {
    awaiting_update: bool,
}

impl ProtocolGuard {
    pub fn new() -> Self {
        ProtocolGuard {
            awaiting_update: false,
        }
    }

    pub fn begin_round(&mut self) -> Result<()> {
        if self.awaiting_update {
            return Err(Error::Protocol(
                "predict called twice without an update in between".into(),
            ));
        }
        self.awaiting_update = true;
        Ok(())
    }

    pub fn end_round(&mut self) -> Result<()> {
        if !self.awaiting_update {
            return Err(Error::Protocol("update called before predict".into()));
        }
        self.awaiting_update = false;
        Ok(())
    }
}

impl Default for ProtocolGuard {
    fn default() -> Self {
        Self::new()
    }
}

/// Learner choice plus hyperparameter overrides, as configured per experiment.
#[derive(Clone, Debug, PartialEq)]
pub enum LearnerConfig<S> {
    /// Newton-step learner; `eta` defaults to `1/(5B)`.
    Ons { eta: Option<S> },
    /// Multi-rate aggregator; `grid` overrides the geometric rate grid.
    MetaGrad { grid: Option<Vec<S>> },
    /// Gradient-descent baseline; step is `scale·(D/K)/√t`, `scale` default 1.
    Ogd { scale: Option<S> },
    /// Planar arc learner (dimension 2 only).
    Arc2d,
}

impl<S: Scalar> LearnerConfig<S> {
    pub fn kind_label(&self) -> &'static str {
        match self {
            LearnerConfig::Ons { .. } => "ons",
            LearnerConfig::MetaGrad { .. } => "metagrad",
            LearnerConfig::Ogd { .. } => "ogd",
            LearnerConfig::Arc2d => "arc2d",
        }
    }
}

/// Concrete learner built from a [`LearnerConfig`].
#[derive(Clone, Debug)]
pub enum AnyLearner<S> {
    Ons(OnsInverseLearner<S>),
    MetaGrad(MetaGradLearner<S>),
    Ogd(OgdLearner<S>),
    Arc2d(Arc2dLearner<S>),
}

impl<S: Scalar> AnyLearner<S> {
    /// `learner_seed` only matters for randomized learners (arc2d).
    pub fn build(
        config: &LearnerConfig<S>,
        region: &FeasibleRegion<S>,
        bounds: &ProblemBounds<S>,
        horizon: usize,
        learner_seed: u64,
    ) -> Result<Self> {
        Ok(match config {
            LearnerConfig::Ons { eta } => {
                AnyLearner::Ons(OnsInverseLearner::new(region.clone(), bounds, *eta)?)
            }
            LearnerConfig::MetaGrad { grid } => AnyLearner::MetaGrad(match grid {
                Some(grid) => {
                    MetaGradLearner::with_grid(region.clone(), bounds, horizon, grid.clone())?
                }
                None => MetaGradLearner::new(region.clone(), bounds, horizon)?,
            }),
            LearnerConfig::Ogd { scale } => {
                AnyLearner::Ogd(OgdLearner::new(region.clone(), bounds, *scale)?)
            }
            LearnerConfig::Arc2d => {
                AnyLearner::Arc2d(Arc2dLearner::new(region.dim(), learner_seed)?)
            }
        })
    }
}

impl<S: Scalar> InverseLearner<S> for AnyLearner<S> {
    fn predict(&mut self) -> Result<Vector<S>> {
        match self {
            AnyLearner::Ons(l) => l.predict(),
            AnyLearner::MetaGrad(l) => l.predict(),
            AnyLearner::Ogd(l) => l.predict(),
            AnyLearner::Arc2d(l) => l.predict(),
        }
    }

    fn update(&mut self, obs: &Observation<S>) -> Result<()> {
        match self {
            AnyLearner::Ons(l) => l.update(obs),
            AnyLearner::MetaGrad(l) => l.update(obs),
            AnyLearner::Ogd(l) => l.update(obs),
            AnyLearner::Arc2d(l) => l.update(obs),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            AnyLearner::Ons(l) => l.name(),
            AnyLearner::MetaGrad(l) => l.name(),
            AnyLearner::Ogd(l) => l.name(),
            AnyLearner::Arc2d(l) => l.name(),
        }
    }
}
