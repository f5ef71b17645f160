//! The suboptimality loss and the quadratic surrogate losses driving the
//! Newton-step learners.
//!
//! For an observation `(X, x)` the suboptimality loss of an objective `c` is
//! `max_{x'∈X}⟨c, x'⟩ − ⟨c, x⟩`: how far `x` is from optimal if `c` were the
//! truth. It is convex, and `x̂ − x` is a subgradient at `c` whenever `x̂`
//! maximizes `⟨c, ·⟩`. Each learning-rate expert replaces it by the
//! exp-concave surrogate `w ↦ −η⟨w_t − w, g⟩ + η²⟨w_t − w, g⟩²` anchored at
//! the round's prediction.

use crate::geometry::ActionSet;
use crate::linalg::Vector;
use crate::{Error, Result, Scalar};

/// One round of feedback: the feasible set and the agent's chosen action.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation<S> {
    action_set: ActionSet<S>,
    chosen_action: Vector<S>,
}

impl<S: Scalar> Observation<S> {
    /// The chosen action must belong to the set within
    /// [`membership_tolerance`](crate::membership_tolerance).
    pub fn new(action_set: ActionSet<S>, chosen_action: Vector<S>) -> Result<Self> {
        chosen_action.validate(action_set.dim())?;
        if !action_set.contains(&chosen_action, crate::membership_tolerance())? {
            return Err(Error::InvalidInput(
                "chosen action is not in the action set within tolerance".into(),
            ));
        }
        Ok(Observation {
            action_set,
            chosen_action,
        })
    }

    pub fn action_set(&self) -> &ActionSet<S> {
        &self.action_set
    }

    pub fn chosen_action(&self) -> &Vector<S> {
        &self.chosen_action
    }

    pub fn dim(&self) -> usize {
        self.action_set.dim()
    }
}

/// `max_{x∈X}⟨c, x⟩ − ⟨c, x_t⟩`; non-negative since `x_t ∈ X`.
pub fn suboptimality_loss<S: Scalar>(obs: &Observation<S>, c: &Vector<S>) -> Result<S> {
    let best = obs.action_set.argmax_linear(c)?;
    Ok(c.dot(&best) - c.dot(&obs.chosen_action))
}

/// The subgradient `x̂ − x_t` with `x̂ = argmax_{x∈X}⟨c, x⟩`.
pub fn suboptimality_subgradient<S: Scalar>(
    obs: &Observation<S>,
    c: &Vector<S>,
) -> Result<Vector<S>> {
    let best = obs.action_set.argmax_linear(c)?;
    Ok(best.sub(&obs.chosen_action))
}

/// Parameters of one quadratic surrogate loss
/// `f(w) = −η⟨anchor − w, g⟩ + η²⟨anchor − w, g⟩²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurrogateParams<S> {
    pub eta: S,
    pub anchor: Vector<S>,
    pub gradient: Vector<S>,
}

impl<S: Scalar> SurrogateParams<S> {
    pub fn new(eta: S, anchor: Vector<S>, gradient: Vector<S>) -> Result<Self> {
        if !(eta > S::zero()) || !eta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "surrogate learning rate must be positive, got {eta}"
            )));
        }
        gradient.validate(anchor.dim())?;
        Ok(SurrogateParams {
            eta,
            anchor,
            gradient,
        })
    }

    /// Surrogate value at `w`; zero at the anchor by construction.
    pub fn eval(&self, w: &Vector<S>) -> S {
        let inner = self.anchor.sub(w).dot(&self.gradient);
        -self.eta * inner + self.eta * self.eta * inner * inner
    }

    /// Gradient `η(1 − 2η⟨g, anchor − w⟩)·g`; always collinear with `g`.
    pub fn gradient_at(&self, w: &Vector<S>) -> Vector<S> {
        let inner = self.gradient.dot(&self.anchor.sub(w));
        let factor = self.eta * (S::one() - (self.eta + self.eta) * inner);
        self.gradient.scale(factor)
    }
}
