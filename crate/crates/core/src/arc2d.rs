//! Arcs on the unit circle and the randomized arc-shrinking learner for n = 2.
//!
//! In the plane, the candidate unit objective directions consistent with all
//! feedback so far form a single arc. The learner samples its prediction
//! uniformly from the current arc and intersects the arc with the normal cone
//! revealed by each observation; with an optimal agent the expected cumulative
//! regret stays below 2π no matter how long the run is.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::normal_cone_2d;
use crate::learners::{InverseLearner, ProtocolGuard};
use crate::linalg::Vector;
use crate::losses::Observation;
use crate::{Error, Result, Scalar};

/// Angle of a nonzero 2-vector, normalized to `[0, 2π)`.
pub fn angle_of<S: Scalar>(v: &Vector<S>) -> S {
    debug_assert_eq!(v.dim(), 2);
    normalize_angle(v[1].atan2(v[0]))
}

/// Unit vector `(cos θ, sin θ)`.
pub fn unit_direction<S: Scalar>(theta: S) -> Vector<S> {
    Vector::new(vec![theta.cos(), theta.sin()])
}

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle<S: Scalar>(theta: S) -> S {
    let tau = S::TAU();
    let mut r = theta % tau;
    if r < S::zero() {
        r += tau;
    }
    if r >= tau {
        r -= tau;
    }
    r
}

// Angular slack absorbing round-off in repeated intersections; far below the
// 1e-9 tolerances used by the membership checks.
fn slack<S: Scalar>() -> S {
    S::cast(1e-12)
}

/// Closed arc on the unit circle: the angles `θ` with `(θ − start) mod 2π ≤ width`.
///
/// `width == 2π` is the full circle and `width == 0` a single direction, so the
/// degenerate cases stay unambiguous.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularInterval<S> {
    start: S,
    width: S,
}

impl<S: Scalar> AngularInterval<S> {
    pub fn new(start: S, width: S) -> Result<Self> {
        if !start.is_finite() || !width.is_finite() {
            return Err(Error::InvalidInput("non-finite angle".into()));
        }
        if width < -slack::<S>() || width > S::TAU() + slack::<S>() {
            return Err(Error::InvalidInput(format!(
                "arc width {width} outside [0, 2π]"
            )));
        }
        Ok(AngularInterval {
            start: normalize_angle(start),
            width: width.max(S::zero()).min(S::TAU()),
        })
    }

    pub fn full() -> Self {
        AngularInterval {
            start: S::zero(),
            width: S::TAU(),
        }
    }

    /// The single direction `θ`.
    pub fn degenerate(theta: S) -> Self {
        AngularInterval {
            start: normalize_angle(theta),
            width: S::zero(),
        }
    }

    /// Counterclockwise arc from `a` to `b`.
    pub fn from_endpoints(a: S, b: S) -> Self {
        let start = normalize_angle(a);
        AngularInterval {
            start,
            width: normalize_angle(b - a),
        }
    }

    pub fn start(&self) -> S {
        self.start
    }

    pub fn width(&self) -> S {
        self.width
    }

    pub fn midpoint(&self) -> S {
        normalize_angle(self.start + self.width * S::cast(0.5))
    }

    pub fn is_full(&self) -> bool {
        self.width >= S::TAU()
    }

    pub fn contains_angle(&self, theta: S, tol: S) -> bool {
        if self.is_full() {
            return true;
        }
        let d = normalize_angle(theta - self.start);
        d <= self.width + tol || d >= S::TAU() - tol
    }

    /// Draw a unit vector whose angle is uniform on the arc.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector<S> {
        let u = S::unit_uniform(rng);
        unit_direction(self.start + u * self.width)
    }

    /// Intersection with another arc, kept as a single arc.
    ///
    /// Exact convex normal cones have width ≤ π, so the true intersection with
    /// a connected arc is connected; if rounding ever splits it in two, the
    /// larger component is kept. An empty intersection is a protocol violation
    /// (it certifies that no direction explains all feedback).
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.is_full() {
            return Ok(*other);
        }
        if other.is_full() {
            return Ok(*self);
        }
        let tau = S::TAU();
        let eps = slack::<S>();
        let rel = normalize_angle(other.start - self.start);
        // Component starting where `other` enters `self`.
        let mut best: Option<(S, S)> = None; // (offset, width)
        if rel <= self.width + eps {
            let s = rel.min(self.width);
            let e = self.width.min(rel + other.width);
            let w = (e - s).max(S::zero());
            best = Some((s, w));
        }
        // Component where `other` wraps past the start of `self`.
        if rel + other.width >= tau - eps {
            let e = self.width.min(rel + other.width - tau).max(S::zero());
            let w = e;
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((S::zero(), w));
            }
        }
        match best {
            Some((offset, width)) => Ok(AngularInterval {
                start: normalize_angle(self.start + offset),
                width,
            }),
            None => Err(Error::Protocol(
                "empty arc intersection: feedback inconsistent with any remaining direction"
                    .into(),
            )),
        }
    }
}

/// Learner that keeps a candidate arc of objective directions and samples
/// predictions uniformly from it. Only valid in dimension 2.
#[derive(Clone, Debug)]
pub struct Arc2dLearner<S> {
    arc: AngularInterval<S>,
    rng: ChaCha8Rng,
    guard: ProtocolGuard,
}

impl<S: Scalar> Arc2dLearner<S> {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim != 2 {
            return Err(Error::InvalidConfig(format!(
                "arc2d learner requires dimension 2, got {dim}"
            )));
        }
        Ok(Arc2dLearner {
            arc: AngularInterval::full(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            guard: ProtocolGuard::new(),
        })
    }

    /// The current candidate arc.
    pub fn arc(&self) -> AngularInterval<S> {
        self.arc
    }
}

impl<S: Scalar> InverseLearner<S> for Arc2dLearner<S> {
    fn predict(&mut self) -> Result<Vector<S>> {
        self.guard.begin_round()?;
        Ok(self.arc.sample_uniform(&mut self.rng))
    }

    fn update(&mut self, obs: &Observation<S>) -> Result<()> {
        self.guard.end_round()?;
        let cone = normal_cone_2d(obs.action_set(), obs.chosen_action())?;
        self.arc = self.arc.intersect(&cone)?;
        Ok(())
    }

    fn name(&self) -> &'static str {
        "arc2d"
    }
}
