//! The online Newton step and the logarithmic-regret inverse learner built
//! on it.
//!
//! The core update keeps a matrix `A_t = εI + Σ g g ᵀ` of observed gradients
//! and moves the iterate to the generalized projection of the Newton point
//! `w_t − (1/γ) A_t⁻¹ g_t`. Applied to the quadratic surrogate of the
//! suboptimality loss anchored at the current prediction, the gradient fed in
//! each round is simply `η(x̂_t − x_t)` — the quadratic term vanishes at the
//! anchor — and the resulting surrogate regret grows only logarithmically
//! in the horizon when the agent plays optimally.

use crate::learners::{InverseLearner, ProblemBounds, ProtocolGuard};
use crate::linalg::{PsdMatrix, Vector};
use crate::losses::{Observation, SurrogateParams};
use crate::region::FeasibleRegion;
use crate::{Error, Result, Scalar};

/// Curvature parameter `γ = ½·min{1/β, α}` with `β = ηH + 2η²H²` and
/// `α = 2/(1 + 2ηH)²`. For `η ≤ 1/(5H)` this lands in `[25/49, 1)`.
pub fn surrogate_curvature<S: Scalar>(eta: S, h: S) -> S {
    let two = S::cast(2.0);
    let beta = eta * h + two * eta * eta * h * h;
    let alpha = two / (S::one() + two * eta * h).powi(2);
    S::cast(0.5) * beta.recip().min(alpha)
}

/// Initial matrix weight `ε = n/(W²γ²)`.
pub fn newton_regularization<S: Scalar>(dim: usize, w: S, gamma: S) -> S {
    S::cast(dim as f64) / (w * w * gamma * gamma)
}

/// State of one Newton-step instance: the iterate, the gradient matrix, and
/// the parameters it was initialized with.
#[derive(Clone, Debug)]
pub struct OnsState<S> {
    iterate: Vector<S>,
    matrix: PsdMatrix<S>,
    gamma: S,
    epsilon: S,
    eta: S,
    region: FeasibleRegion<S>,
}

impl<S: Scalar> OnsState<S> {
    /// `w` bounds the region diameter, `h` the per-round gradient pairing
    /// (the `B` of the inverse problem); `eta` must lie in `(0, 1/(5h)]`.
    pub fn new(
        region: FeasibleRegion<S>,
        w: S,
        h: S,
        eta: S,
        start: Vector<S>,
    ) -> Result<Self> {
        if !(h > S::zero()) || !h.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "gradient bound must be positive, got {h}"
            )));
        }
        let eta_cap = (S::cast(5.0) * h).recip();
        if !(eta > S::zero()) || eta > eta_cap * (S::one() + S::cast(1e-12)) {
            return Err(Error::InvalidConfig(format!(
                "learning rate {eta} outside (0, {eta_cap}]"
            )));
        }
        start.validate(region.dim())?;
        if !region.contains(&start, crate::membership_tolerance()) {
            return Err(Error::InvalidConfig(
                "initial iterate outside the region".into(),
            ));
        }
        let gamma = surrogate_curvature(eta, h);
        let epsilon = newton_regularization(region.dim(), w, gamma);
        Ok(OnsState {
            matrix: PsdMatrix::scaled_identity(region.dim(), epsilon),
            iterate: start,
            gamma,
            epsilon,
            eta,
            region,
        })
    }

    /// One update with the loss gradient at the current iterate: rank-one
    /// matrix update, Newton point, generalized projection back to the region.
    pub fn step(&mut self, grad: &Vector<S>) -> Result<()> {
        grad.validate(self.region.dim())?;
        self.matrix.add_outer(grad);
        let direction = self.matrix.cholesky_solve(grad)?;
        let mut target = self.iterate.clone();
        target.axpy(-self.gamma.recip(), &direction);
        self.iterate = self.region.project_generalized(&self.matrix, &target)?;
        Ok(())
    }

    pub fn iterate(&self) -> &Vector<S> {
        &self.iterate
    }

    pub fn matrix(&self) -> &PsdMatrix<S> {
        &self.matrix
    }

    pub fn gamma(&self) -> S {
        self.gamma
    }

    pub fn epsilon(&self) -> S {
        self.epsilon
    }

    pub fn eta(&self) -> S {
        self.eta
    }

    pub fn region(&self) -> &FeasibleRegion<S> {
        &self.region
    }
}

/// The inverse-optimization learner of the logarithmic-regret bound: Newton
/// steps on surrogates anchored at each round's own prediction.
#[derive(Clone, Debug)]
pub struct OnsInverseLearner<S> {
    state: OnsState<S>,
    guard: ProtocolGuard,
}

impl<S: Scalar> OnsInverseLearner<S> {
    /// `eta` defaults to `1/(5B)`; overrides must stay in `(0, 1/(5B)]`.
    pub fn new(
        region: FeasibleRegion<S>,
        bounds: &ProblemBounds<S>,
        eta: Option<S>,
    ) -> Result<Self> {
        let b = bounds.interaction_bound;
        let eta = eta.unwrap_or_else(|| (S::cast(5.0) * b).recip());
        let start = region.center();
        Ok(OnsInverseLearner {
            state: OnsState::new(region, bounds.region_diameter, b, eta, start)?,
            guard: ProtocolGuard::new(),
        })
    }

    pub fn state(&self) -> &OnsState<S> {
        &self.state
    }
}

impl<S: Scalar> InverseLearner<S> for OnsInverseLearner<S> {
    fn predict(&mut self) -> Result<Vector<S>> {
        self.guard.begin_round()?;
        Ok(self.state.iterate.clone())
    }

    fn update(&mut self, obs: &Observation<S>) -> Result<()> {
        self.guard.end_round()?;
        let anchor = self.state.iterate.clone();
        let best = obs.action_set().argmax_linear(&anchor)?;
        let g = best.sub(obs.chosen_action());
        let surrogate = SurrogateParams::new(self.state.eta, anchor.clone(), g)?;
        let grad = surrogate.gradient_at(&anchor);
        self.state.step(&grad)
    }

    fn name(&self) -> &'static str {
        "ons"
    }
}
