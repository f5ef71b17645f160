//! Feasible action sets with a closed-form linear-maximization oracle.
//!
//! Sets are compact and specified directly by their extreme structure: balls,
//! axis-aligned boxes, segments, and finite vertex sets (the polytope
//! representation — inequality-described polytopes are out of scope, the
//! protocol only ever needs oracle access). Tie-breaking in the oracle is
//! deterministic so that traces replay bit-for-bit.

use rand::Rng;

use crate::arc2d::{angle_of, AngularInterval};
use crate::linalg::Vector;
use crate::{Error, Result, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum ActionSet<S> {
    Ball { center: Vector<S>, radius: S },
    Box { lower: Vector<S>, upper: Vector<S> },
    Segment { a: Vector<S>, b: Vector<S> },
    VertexSet { points: Vec<Vector<S>> },
}

impl<S: Scalar> ActionSet<S> {
    pub fn ball(center: Vector<S>, radius: S) -> Result<Self> {
        center.validate(center.dim())?;
        if !(radius > S::zero()) || !radius.is_finite() {
            return Err(Error::InvalidInput("ball radius must be positive".into()));
        }
        Ok(ActionSet::Ball { center, radius })
    }

    pub fn axis_box(lower: Vector<S>, upper: Vector<S>) -> Result<Self> {
        upper.validate(lower.dim())?;
        lower.validate(lower.dim())?;
        for i in 0..lower.dim() {
            if lower[i] > upper[i] {
                return Err(Error::InvalidInput(format!(
                    "box lower bound exceeds upper bound in coordinate {i}"
                )));
            }
        }
        Ok(ActionSet::Box { lower, upper })
    }

    /// A segment; coincident endpoints degenerate to a single point.
    pub fn segment(a: Vector<S>, b: Vector<S>) -> Result<Self> {
        b.validate(a.dim())?;
        a.validate(a.dim())?;
        Ok(ActionSet::Segment { a, b })
    }

    pub fn vertices(points: Vec<Vector<S>>) -> Result<Self> {
        let dim = points
            .first()
            .ok_or_else(|| Error::InvalidInput("vertex set must be non-empty".into()))?
            .dim();
        for p in &points {
            p.validate(dim)?;
        }
        Ok(ActionSet::VertexSet { points })
    }

    pub fn dim(&self) -> usize {
        match self {
            ActionSet::Ball { center, .. } => center.dim(),
            ActionSet::Box { lower, .. } => lower.dim(),
            ActionSet::Segment { a, .. } => a.dim(),
            ActionSet::VertexSet { points } => points[0].dim(),
        }
    }

    fn check_dim(&self, v: &Vector<S>) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(())
    }

    /// A maximizer of `x ↦ ⟨c, x⟩` over the set.
    ///
    /// Ties break deterministically: a zero objective returns the ball center,
    /// zero components pick the box lower bound, segments prefer endpoint `a`,
    /// and vertex sets return the lowest-index maximizer.
    pub fn argmax_linear(&self, c: &Vector<S>) -> Result<Vector<S>> {
        self.check_dim(c)?;
        Ok(match self {
            ActionSet::Ball { center, radius } => {
                let norm = c.norm();
                if norm == S::zero() {
                    center.clone()
                } else {
                    let mut x = center.clone();
                    x.axpy(*radius / norm, c);
                    x
                }
            }
            ActionSet::Box { lower, upper } => Vector::from_fn(lower.dim(), |i| {
                if c[i] > S::zero() {
                    upper[i]
                } else {
                    lower[i]
                }
            }),
            ActionSet::Segment { a, b } => {
                if c.dot(a) >= c.dot(b) {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            ActionSet::VertexSet { points } => {
                let mut best = 0usize;
                let mut best_val = c.dot(&points[0]);
                for (i, p) in points.iter().enumerate().skip(1) {
                    let v = c.dot(p);
                    if v > best_val {
                        best = i;
                        best_val = v;
                    }
                }
                points[best].clone()
            }
        })
    }

    /// Exact ℓ2-diameter.
    pub fn diameter_l2(&self) -> S {
        match self {
            ActionSet::Ball { radius, .. } => *radius + *radius,
            ActionSet::Box { lower, upper } => upper.sub(lower).norm(),
            ActionSet::Segment { a, b } => a.dist(b),
            ActionSet::VertexSet { points } => {
                let mut best = S::zero();
                for (i, p) in points.iter().enumerate() {
                    for q in points.iter().skip(i + 1) {
                        best = best.max(p.dist(q));
                    }
                }
                best
            }
        }
    }

    /// Membership within an absolute tolerance.
    pub fn contains(&self, x: &Vector<S>, tol: S) -> Result<bool> {
        self.check_dim(x)?;
        Ok(match self {
            ActionSet::Ball { center, radius } => x.dist(center) <= *radius + tol,
            ActionSet::Box { lower, upper } => (0..x.dim())
                .all(|i| x[i] >= lower[i] - tol && x[i] <= upper[i] + tol),
            ActionSet::Segment { a, b } => {
                let d = b.sub(a);
                let len2 = d.dot(&d);
                let t = if len2 == S::zero() {
                    S::zero()
                } else {
                    (x.sub(a).dot(&d) / len2).max(S::zero()).min(S::one())
                };
                let mut proj = a.clone();
                proj.axpy(t, &d);
                x.dist(&proj) <= tol
            }
            ActionSet::VertexSet { points } => points.iter().any(|p| x.dist(p) <= tol),
        })
    }

    /// The extreme points, when finitely many. Balls return `None`.
    pub fn extreme_points(&self) -> Option<Vec<Vector<S>>> {
        match self {
            ActionSet::Ball { .. } => None,
            ActionSet::Box { lower, upper } => {
                let n = lower.dim();
                let count = 1usize << n;
                let mut out = Vec::with_capacity(count);
                for mask in 0..count {
                    out.push(Vector::from_fn(n, |i| {
                        if mask >> i & 1 == 1 {
                            upper[i]
                        } else {
                            lower[i]
                        }
                    }));
                }
                Some(out)
            }
            ActionSet::Segment { a, b } => Some(vec![a.clone(), b.clone()]),
            ActionSet::VertexSet { points } => Some(points.clone()),
        }
    }

    /// A uniformly-chosen extreme point (for balls, a uniform boundary point).
    pub fn random_extreme<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector<S> {
        match self {
            ActionSet::Ball { center, radius } => {
                let n = center.dim();
                loop {
                    let dir = Vector::from_fn(n, |_| S::standard_normal(rng));
                    let norm = dir.norm();
                    if norm > S::cast(1e-12) {
                        let mut x = center.clone();
                        x.axpy(*radius / norm, &dir);
                        return x;
                    }
                }
            }
            ActionSet::Box { lower, upper } => Vector::from_fn(lower.dim(), |i| {
                if rng.random::<bool>() {
                    upper[i]
                } else {
                    lower[i]
                }
            }),
            ActionSet::Segment { a, b } => {
                if rng.random::<bool>() {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            ActionSet::VertexSet { points } => points[rng.random_range(0..points.len())].clone(),
        }
    }

    /// Some feasible point, uniform enough for property tests.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector<S> {
        match self {
            ActionSet::Ball { center, radius } => {
                let n = center.dim();
                loop {
                    let dir = Vector::from_fn(n, |_| S::standard_normal(rng));
                    let norm = dir.norm();
                    if norm > S::cast(1e-12) {
                        let r = *radius * S::unit_uniform(rng);
                        let mut x = center.clone();
                        x.axpy(r / norm, &dir);
                        return x;
                    }
                }
            }
            ActionSet::Box { lower, upper } => Vector::from_fn(lower.dim(), |i| {
                lower[i] + (upper[i] - lower[i]) * S::unit_uniform(rng)
            }),
            ActionSet::Segment { a, b } => {
                let t = S::unit_uniform(rng);
                let mut x = a.clone();
                x.axpy(t, &b.sub(a));
                x
            }
            ActionSet::VertexSet { points } => points[rng.random_range(0..points.len())].clone(),
        }
    }
}

/// The normal cone of a 2-dimensional set at a boundary point `x`, as the arc
/// of unit directions `c` with `⟨c, x − x'⟩ ≥ 0` for every `x'` in the set.
///
/// `x` must lie on the set within an absolute tolerance of 1e-9 (inputs come
/// from the exact oracle, so only rounding must be absorbed) and must be a
/// support point: interior points have the trivial cone and are rejected. A
/// set that degenerates to a single point yields the full circle.
pub fn normal_cone_2d<S: Scalar>(set: &ActionSet<S>, x: &Vector<S>) -> Result<AngularInterval<S>> {
    if set.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "normal cone computation requires dimension 2, got {}",
            set.dim()
        )));
    }
    if x.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: x.dim(),
        });
    }
    let tol = crate::membership_tolerance::<S>();
    if !set.contains(x, tol)? {
        return Err(Error::InvalidInput(
            "point is not in the set within tolerance".into(),
        ));
    }
    if let ActionSet::Ball { center, radius } = set {
        let d = x.sub(center);
        if (d.norm() - *radius).abs() > tol {
            return Err(Error::InvalidInput(
                "point is interior to the ball: trivial normal cone".into(),
            ));
        }
        return Ok(AngularInterval::degenerate(angle_of(&d)));
    }
    let vertices = set
        .extreme_points()
        .expect("non-ball sets have finitely many extreme points");
    let mut cone = AngularInterval::full();
    let half_pi = S::FRAC_PI_2();
    for v in &vertices {
        let d = x.sub(v);
        if d.norm() <= tol {
            continue;
        }
        // ⟨c, d⟩ ≥ 0 is the half-circle of directions centered on d.
        let center = angle_of(&d);
        let half_plane = AngularInterval::new(center - half_pi, S::PI())
            .expect("half-plane arc is valid");
        cone = cone.intersect(&half_plane).map_err(|_| {
            Error::InvalidInput(
                "point is not an extreme point of the set: trivial normal cone".into(),
            )
        })?;
    }
    Ok(cone)
}
