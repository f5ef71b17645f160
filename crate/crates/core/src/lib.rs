//! Online inverse linear optimization.
//!
//! An agent repeatedly solves `maximize ⟨c*, x⟩ over x ∈ X_t` for a hidden
//! objective vector `c*`. A learner observes the pairs `(X_t, x_t)` and keeps
//! predicting `c*`; its quality is measured by the cumulative regret of acting
//! on the predictions instead of the truth. This crate provides the feasible-set
//! geometry, the suboptimality loss machinery, four learners (an online-Newton
//! learner, a multi-learning-rate expert aggregator, a gradient-descent
//! baseline, and a randomized arc-shrinking learner for the plane), plus a
//! simulation harness and regret metrics.
//!
//! All core math is generic over the scalar type via [`Scalar`]; `f64` aliases
//! are exported at the crate root for the common instantiation.

pub mod arc2d;
pub mod geometry;
pub mod learners;
pub mod linalg;
pub mod losses;
pub mod metrics;
pub mod region;
pub mod sim;

mod error;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{membership_tolerance, Scalar};

/// Double-precision aliases for the main crate types.
pub type Vector64 = linalg::Vector<f64>;
pub type PsdMatrix64 = linalg::PsdMatrix<f64>;
pub type ActionSet64 = geometry::ActionSet<f64>;
pub type AngularInterval64 = arc2d::AngularInterval<f64>;
pub type FeasibleRegion64 = region::FeasibleRegion<f64>;
pub type Observation64 = losses::Observation<f64>;
pub type ProblemBounds64 = learners::ProblemBounds<f64>;
pub type OnsInverseLearner64 = learners::OnsInverseLearner<f64>;
pub type MetaGradLearner64 = learners::MetaGradLearner<f64>;
pub type OgdLearner64 = learners::OgdLearner<f64>;
pub type Arc2dLearner64 = arc2d::Arc2dLearner<f64>;
pub type InstanceSpec64 = sim::InstanceSpec<f64>;
pub type ExperimentTrace64 = sim::ExperimentTrace<f64>;
