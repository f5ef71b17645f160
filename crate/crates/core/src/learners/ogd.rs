//! Projected-gradient baseline with the classic `1/√t` step schedule.
//!
//! Treats `c ↦ ⟨c, x̂_t − x_t⟩` as the round's cost, steps against its
//! gradient, and projects back in the Euclidean norm. Its surrogate regret
//! grows like `√T` — the baseline the Newton-step learner is measured against.

use crate::learners::{InverseLearner, ProblemBounds, ProtocolGuard};
use crate::linalg::Vector;
use crate::losses::Observation;
use crate::region::FeasibleRegion;
use crate::{Result, Scalar};

#[derive(Clone, Debug)]
pub struct OgdLearner<S> {
    iterate: Vector<S>,
    region: FeasibleRegion<S>,
    base_step: S,
    round: usize,
    guard: ProtocolGuard,
}

impl<S: Scalar> OgdLearner<S> {
    /// Step size at round `t` is `scale·(D/K)/√t`, `scale` defaulting to 1.
    pub fn new(
        region: FeasibleRegion<S>,
        bounds: &ProblemBounds<S>,
        scale: Option<S>,
    ) -> Result<Self> {
        let scale = scale.unwrap_or_else(S::one);
        let base_step = scale * bounds.region_diameter / bounds.action_diameter;
        Ok(OgdLearner {
            iterate: region.center(),
            region,
            base_step,
            round: 0,
            guard: ProtocolGuard::new(),
        })
    }

    pub fn iterate(&self) -> &Vector<S> {
        &self.iterate
    }

    fn step_size(&self, round: usize) -> S {
        self.base_step / S::cast(round as f64).sqrt()
    }
}

impl<S: Scalar> InverseLearner<S> for OgdLearner<S> {
    fn predict(&mut self) -> Result<Vector<S>> {
        self.guard.begin_round()?;
        Ok(self.iterate.clone())
    }

    fn update(&mut self, obs: &Observation<S>) -> Result<()> {
        self.guard.end_round()?;
        self.round += 1;
        let best = obs.action_set().argmax_linear(&self.iterate)?;
        let g = best.sub(obs.chosen_action());
        let mut target = self.iterate.clone();
        target.axpy(-self.step_size(self.round), &g);
        self.iterate = self.region.project_euclidean(&target)?;
        Ok(())
    }

    fn name(&self) -> &'static str {
        "ogd"
    }
}
