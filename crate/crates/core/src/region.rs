//! The convex prediction region and its projections.
//!
//! Both projections the learners need live here: the plain Euclidean one for
//! the gradient-descent baseline and the generalized (A-norm) one for the
//! Newton-step update. Balls and boxes cover every experiment in scope, and
//! both admit projections without a general QP solver: the ball reduces to a
//! one-dimensional root-find on the KKT multiplier, the box to projected
//! gradient descent certified by its KKT residual.

use rand::Rng;

use crate::linalg::{PsdMatrix, Vector};
use crate::{Error, Result, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum FeasibleRegion<S> {
    Ball { center: Vector<S>, radius: S },
    Box { lower: Vector<S>, upper: Vector<S> },
}

impl<S: Scalar> FeasibleRegion<S> {
    pub fn ball(center: Vector<S>, radius: S) -> Result<Self> {
        center.validate(center.dim())?;
        if !(radius > S::zero()) || !radius.is_finite() {
            return Err(Error::InvalidInput("region radius must be positive".into()));
        }
        Ok(FeasibleRegion::Ball { center, radius })
    }

    pub fn axis_box(lower: Vector<S>, upper: Vector<S>) -> Result<Self> {
        upper.validate(lower.dim())?;
        lower.validate(lower.dim())?;
        for i in 0..lower.dim() {
            if lower[i] > upper[i] {
                return Err(Error::InvalidInput(format!(
                    "region lower bound exceeds upper bound in coordinate {i}"
                )));
            }
        }
        Ok(FeasibleRegion::Box { lower, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleRegion::Ball { center, .. } => center.dim(),
            FeasibleRegion::Box { lower, .. } => lower.dim(),
        }
    }

    /// Exact ℓ2-diameter.
    pub fn diameter(&self) -> S {
        match self {
            FeasibleRegion::Ball { radius, .. } => *radius + *radius,
            FeasibleRegion::Box { lower, upper } => upper.sub(lower).norm(),
        }
    }

    /// Canonical interior point: ball center or box midpoint. Used as the
    /// deterministic initial iterate of every learner.
    pub fn center(&self) -> Vector<S> {
        match self {
            FeasibleRegion::Ball { center, .. } => center.clone(),
            FeasibleRegion::Box { lower, upper } => {
                Vector::from_fn(lower.dim(), |i| (lower[i] + upper[i]) * S::cast(0.5))
            }
        }
    }

    pub fn contains(&self, x: &Vector<S>, tol: S) -> bool {
        debug_assert_eq!(x.dim(), self.dim());
        match self {
            FeasibleRegion::Ball { center, radius } => x.dist(center) <= *radius + tol,
            FeasibleRegion::Box { lower, upper } => {
                (0..x.dim()).all(|i| x[i] >= lower[i] - tol && x[i] <= upper[i] + tol)
            }
        }
    }

    /// A random feasible point, uniform per kind (for property tests).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector<S> {
        match self {
            FeasibleRegion::Ball { center, radius } => loop {
                let dir = Vector::from_fn(center.dim(), |_| S::standard_normal(rng));
                let norm = dir.norm();
                if norm > S::cast(1e-12) {
                    let r = *radius * S::unit_uniform(rng);
                    let mut x = center.clone();
                    x.axpy(r / norm, &dir);
                    return x;
                }
            },
            FeasibleRegion::Box { lower, upper } => Vector::from_fn(lower.dim(), |i| {
                lower[i] + (upper[i] - lower[i]) * S::unit_uniform(rng)
            }),
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

    /// The closest feasible point in the Euclidean norm.
    pub fn project_euclidean(&self, y: &Vector<S>) -> Result<Vector<S>> {
        self.check_dim(y)?;
        Ok(match self {
            FeasibleRegion::Ball { center, radius } => {
                let d = y.sub(center);
                let norm = d.norm();
                if norm <= *radius {
                    y.clone()
                } else {
                    let mut x = center.clone();
                    x.axpy(*radius / norm, &d);
                    x
                }
            }
            FeasibleRegion::Box { lower, upper } => {
                Vector::from_fn(lower.dim(), |i| y[i].max(lower[i]).min(upper[i]))
            }
        })
    }

    /// Minimizer of `(w − y)ᵀ A (w − y)` over the region, for positive
    /// definite `A`. Feasible `y` is returned unchanged.
    pub fn project_generalized(&self, a: &PsdMatrix<S>, y: &Vector<S>) -> Result<Vector<S>> {
        self.check_dim(y)?;
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        if self.contains(y, S::zero()) {
            return Ok(y.clone());
        }
        match self {
            FeasibleRegion::Ball { center, radius } => {
                project_ball_generalized(center, *radius, a, y)
            }
            FeasibleRegion::Box { lower, upper } => project_box_generalized(lower, upper, a, y),
        }
    }
}

/// KKT system for the ball: `w = (A + λI)⁻¹ A (y − center) + center` with the
/// multiplier `λ ≥ 0` driving `‖w − center‖` down to the radius. One symmetric
/// eigendecomposition turns each multiplier evaluation into O(n), and the
/// radial norm is strictly decreasing in λ, so bisection converges fast; 200
/// iterations shrink the bracket below any representable width.
fn project_ball_generalized<S: Scalar>(
    center: &Vector<S>,
    radius: S,
    a: &PsdMatrix<S>,
    y: &Vector<S>,
) -> Result<Vector<S>> {
    let n = center.dim();
    let (eigvals, eigvecs) = a.symmetric_eigen();
    let lambda_max = eigvals[n - 1];
    if eigvals[0] <= lambda_max * S::cast(1e-12) || eigvals[0] <= S::zero() {
        return Err(Error::Numeric(
            "generalized projection requires a positive definite matrix".into(),
        ));
    }
    let b = y.sub(center);
    // Coordinates of b in the eigenbasis.
    let b_rot: Vec<S> = eigvecs.iter().map(|q| q.dot(&b)).collect();
    let norm_at = |lam: S| -> S {
        let mut acc = S::zero();
        for (d, bi) in eigvals.iter().zip(&b_rot) {
            let z = *d * *bi / (*d + lam);
            acc += z * z;
        }
        acc.sqrt()
    };
    let mut lo = S::zero();
    let mut hi = S::one().max(lambda_max);
    let mut guard = 0;
    while norm_at(hi) > radius {
        hi = hi + hi;
        guard += 1;
        if guard > 400 {
            return Err(Error::Numeric(
                "ball projection failed to bracket the KKT multiplier".into(),
            ));
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) * S::cast(0.5);
        if norm_at(mid) > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Take the feasible end of the bracket so the iterate lands inside.
    let lam = hi;
    let mut w = center.clone();
    for ((d, bi), q) in eigvals.iter().zip(&b_rot).zip(&eigvecs) {
        w.axpy(*d * *bi / (*d + lam), q);
    }
    Ok(w)
}

/// Projected gradient descent on `½(w − y)ᵀ A (w − y)` over the box with step
/// `1/λ_max(A)` (power-iteration estimate), stopped at KKT residual ≤ 1e-10.
fn project_box_generalized<S: Scalar>(
    lower: &Vector<S>,
    upper: &Vector<S>,
    a: &PsdMatrix<S>,
    y: &Vector<S>,
) -> Result<Vector<S>> {
    let n = lower.dim();
    let lambda_max = a.power_iteration_max(50);
    let lambda_min = a.min_eigenvalue();
    if !(lambda_max > S::zero())
        || !lambda_max.is_finite()
        || lambda_min <= lambda_max * S::cast(1e-12)
    {
        return Err(Error::Numeric(
            "generalized projection requires a positive definite matrix".into(),
        ));
    }
    let step = lambda_max.recip();
    let clamp =
        |w: &Vector<S>| Vector::from_fn(n, |i| w[i].max(lower[i]).min(upper[i]));
    let kkt_residual = |w: &Vector<S>, grad: &Vector<S>| -> S {
        let mut worst = S::zero();
        for i in 0..n {
            let g = grad[i];
            let viol = if w[i] <= lower[i] {
                (-g).max(S::zero())
            } else if w[i] >= upper[i] {
                g.max(S::zero())
            } else {
                g.abs()
            };
            worst = worst.max(viol);
        }
        worst
    };
    let tol = S::cast(1e-10);
    let mut w = clamp(y);
    for _ in 0..100_000 {
        let grad = a.matvec(&w.sub(y));
        if kkt_residual(&w, &grad) <= tol {
            break;
        }
        let mut next = w.clone();
        next.axpy(-step, &grad);
        w = clamp(&next);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(entries: &[f64]) -> Vector<f64> {
        Vector::from_slice(entries)
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> PsdMatrix<f64> {
        let mut a = PsdMatrix::scaled_identity(n, rng.random::<f64>() * 0.5 + 0.1);
        for _ in 0..n + 2 {
            a.add_outer(&Vector::from_fn(n, |_| rng.random::<f64>() * 2.0 - 1.0));
        }
        a
    }

    #[test]
    fn euclidean_projection_examples() {
        let ball = FeasibleRegion::ball(Vector::zeros(2), 1.0).unwrap();
        assert_eq!(
            ball.project_euclidean(&v(&[2.0, 0.0])).unwrap().as_slice(),
            &[1.0, 0.0]
        );
        let bx = FeasibleRegion::axis_box(v(&[0.0, 0.0]), v(&[1.0, 1.0])).unwrap();
        assert_eq!(
            bx.project_euclidean(&v(&[-1.0, 0.5])).unwrap().as_slice(),
            &[0.0, 0.5]
        );
        // Interior points are fixed points.
        let inside = v(&[0.25, 0.75]);
        assert_eq!(
            bx.project_euclidean(&inside).unwrap().as_slice(),
            inside.as_slice()
        );
    }

    #[test]
    fn generalized_matches_euclidean_for_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let regions = vec![
            FeasibleRegion::ball(v(&[0.1, -0.3, 0.2]), 0.8).unwrap(),
            FeasibleRegion::axis_box(v(&[-1.0, -0.5, 0.0]), v(&[1.0, 0.5, 2.0])).unwrap(),
        ];
        let eye = PsdMatrix::scaled_identity(3, 1.0);
        for region in &regions {
            for _ in 0..500 {
                let y = Vector::from_fn(3, |_| rng.random::<f64>() * 4.0 - 2.0);
                let pe = region.project_euclidean(&y).unwrap();
                let pg = region.project_generalized(&eye, &y).unwrap();
                assert!(pe.dist(&pg) <= 1e-10, "{:?} vs {:?}", pe, pg);
            }
        }
    }

    #[test]
    fn generalized_fixes_feasible_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let region = FeasibleRegion::ball(Vector::zeros(4), 1.5).unwrap();
        for _ in 0..100 {
            let a = random_psd(&mut rng, 4);
            let y = region.random_point(&mut rng);
            let w = region.project_generalized(&a, &y).unwrap();
            assert_eq!(w.as_slice(), y.as_slice());
        }
    }

    #[test]
    fn ball_generalized_matches_grid_search() {
        // Minimize (w−y)ᵀA(w−y) over the unit disk; dense grid as the oracle.
        let region = FeasibleRegion::ball(Vector::zeros(2), 1.0).unwrap();
        let a = PsdMatrix::from_rows(&[vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let y = v(&[2.0, 2.0]);
        let w = region.project_generalized(&a, &y).unwrap();
        assert!((w.norm() - 1.0).abs() <= 1e-9, "solution on the sphere");
        let res = 2e-4;
        let steps = (2.0 / res) as usize + 1;
        let mut best = f64::INFINITY;
        for i in 0..steps {
            let x = -1.0 + i as f64 * res;
            for j in 0..steps {
                let yy = -1.0 + j as f64 * res;
                if x * x + yy * yy > 1.0 {
                    continue;
                }
                let q = a.quad_form(&v(&[x - 2.0, yy - 2.0]));
                if q < best {
                    best = q;
                }
            }
        }
        let ours = a.quad_form(&w.sub(&y));
        assert!(
            (ours - best).abs() <= 5e-4,
            "objective {ours} vs grid {best}"
        );
        assert!(ours <= best + 1e-12, "solver must not lose to the grid");
    }

    #[test]
    fn variational_inequality_and_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [2usize, 5] {
            let regions = vec![
                FeasibleRegion::ball(Vector::from_fn(n, |_| rng.random::<f64>() - 0.5), 1.0)
                    .unwrap(),
                FeasibleRegion::axis_box(
                    Vector::from_fn(n, |_| -1.0 - rng.random::<f64>()),
                    Vector::from_fn(n, |_| 1.0 + rng.random::<f64>()),
                )
                .unwrap(),
            ];
            for region in &regions {
                for _ in 0..20 {
                    let a = random_psd(&mut rng, n);
                    let y = Vector::from_fn(n, |_| rng.random::<f64>() * 6.0 - 3.0);
                    let w = region.project_generalized(&a, &y).unwrap();
                    let g = a.matvec(&w.sub(&y));
                    for _ in 0..25 {
                        let u = region.random_point(&mut rng);
                        // Optimality: ⟨A(w − y), u − w⟩ ≥ 0 over the region.
                        assert!(g.dot(&u.sub(&w)) >= -1e-8, "variational inequality");
                        // Pythagorean contraction in the A-norm.
                        let dw = a.quad_form(&w.sub(&u));
                        let dy = a.quad_form(&y.sub(&u));
                        assert!(dw <= dy + 1e-8, "contraction {dw} > {dy}");
                    }
                }
            }
        }
    }

    #[test]
    fn generalized_rejects_indefinite_matrix() {
        let region = FeasibleRegion::ball(Vector::zeros(2), 1.0).unwrap();
        let a = PsdMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(region.project_generalized(&a, &v(&[3.0, 0.0])).is_err());
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let region = FeasibleRegion::ball(Vector::zeros(3), 1.0).unwrap();
        assert!(matches!(
            region.project_euclidean(&v(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
