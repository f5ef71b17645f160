//! Regret-curve post-processing: scaling-law fits, Monte Carlo aggregation,
//! and bound-constant estimation.
//!
//! Bound verification is phrased as "the normalized ratio stays bounded by a
//! fitted constant" — the theory only pins asymptotic orders, never absolute
//! constants, so the fits report residuals instead of hiding them.

use crate::learners::ProblemBounds;
use crate::{Error, Result, Scalar};

/// Growth models fitted against cumulative-regret checkpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingModel {
    /// `y = c·n·ln(aT)`.
    LogGrowth,
    /// `y = c·√T`.
    SqrtGrowth,
    /// `y = c + c'·√(Δ·n·lnT)`.
    DeltaLog,
}

/// One fitted model: the constants in model order and the ℓ2 residual norm.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit<S> {
    pub model: ScalingModel,
    pub constants: Vec<S>,
    pub residual_norm: S,
}

/// A cumulative value at one horizon checkpoint; `delta` is only read by the
/// suboptimality-aware model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint<S> {
    pub horizon: usize,
    pub value: S,
    pub delta: S,
}

impl<S: Scalar> Checkpoint<S> {
    pub fn new(horizon: usize, value: S) -> Self {
        Checkpoint {
            horizon,
            value,
            delta: S::zero(),
        }
    }
}

fn solve_two_by_two<S: Scalar>(m: [[S; 2]; 2], b: [S; 2]) -> Result<[S; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m[0][0]
        .abs()
        .max(m[0][1].abs())
        .max(m[1][0].abs())
        .max(m[1][1].abs());
    if det.abs() <= S::cast(1e-12) * scale.max(S::one()) * scale.max(S::one()) {
        return Err(Error::Numeric("degenerate design matrix".into()));
    }
    Ok([
        (m[1][1] * b[0] - m[0][1] * b[1]) / det,
        (-m[1][0] * b[0] + m[0][0] * b[1]) / det,
    ])
}

/// Least-squares fit of the chosen model on ≥ 5 checkpoints.
pub fn fit_scaling<S: Scalar>(
    points: &[Checkpoint<S>],
    model: ScalingModel,
    dim: usize,
) -> Result<ScalingFit<S>> {
    if points.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "need at least 5 checkpoints, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| p.horizon < 2) {
        return Err(Error::InvalidInput(
            "checkpoints must have horizon ≥ 2".into(),
        ));
    }
    let n = S::cast(dim as f64);
    let (constants, predict): (Vec<S>, Box<dyn Fn(&Checkpoint<S>) -> S>) = match model {
        ScalingModel::LogGrowth => {
            // y = p·lnT + q with p = c·n and q = c·n·ln a.
            let mut m = [[S::zero(); 2]; 2];
            let mut b = [S::zero(); 2];
            for pt in points {
                let x = S::cast(pt.horizon as f64).ln();
                m[0][0] += x * x;
                m[0][1] += x;
                m[1][0] += x;
                m[1][1] += S::one();
                b[0] += x * pt.value;
                b[1] += pt.value;
            }
            let [p, q] = solve_two_by_two(m, b)?;
            if p.abs() <= S::cast(1e-300) {
                return Err(Error::Numeric("log model slope vanished".into()));
            }
            let c = p / n;
            let a = (q / p).exp();
            (
                vec![c, a],
                Box::new(move |pt: &Checkpoint<S>| {
                    c * n * (a * S::cast(pt.horizon as f64)).ln()
                }),
            )
        }
        ScalingModel::SqrtGrowth => {
            // y = c·√T through the origin.
            let mut num = S::zero();
            let mut den = S::zero();
            for pt in points {
                let x = S::cast(pt.horizon as f64).sqrt();
                num += x * pt.value;
                den += x * x;
            }
            if den <= S::zero() {
                return Err(Error::Numeric("degenerate design matrix".into()));
            }
            let c = num / den;
            (
                vec![c],
                Box::new(move |pt: &Checkpoint<S>| c * S::cast(pt.horizon as f64).sqrt()),
            )
        }
        ScalingModel::DeltaLog => {
            // y = c + c'·√(Δ·n·lnT).
            let mut m = [[S::zero(); 2]; 2];
            let mut b = [S::zero(); 2];
            for pt in points {
                let z = (pt.delta * n * S::cast(pt.horizon as f64).ln()).max(S::zero()).sqrt();
                m[0][0] += S::one();
                m[0][1] += z;
                m[1][0] += z;
                m[1][1] += z * z;
                b[0] += pt.value;
                b[1] += z * pt.value;
            }
            let [c, cp] = solve_two_by_two(m, b)?;
            (
                vec![c, cp],
                Box::new(move |pt: &Checkpoint<S>| {
                    c + cp
                        * (pt.delta * n * S::cast(pt.horizon as f64).ln())
                            .max(S::zero())
                            .sqrt()
                }),
            )
        }
    };
    let mut residual = S::zero();
    for pt in points {
        let r = pt.value - predict(pt);
        residual += r * r;
    }
    Ok(ScalingFit {
        model,
        constants,
        residual_norm: residual.sqrt(),
    })
}

/// Two-term bound fit `y ≈ c₁·u + c₂·√(Δ·u)` on samples `(u, Δ, y)`, where
/// `u` is the caller's log factor. Used to pin the robustness-bound constants
/// on one noise level before reusing them on another.
pub fn fit_bound_constants<S: Scalar>(samples: &[(S, S, S)]) -> Result<(S, S)> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least 2 samples to fit two constants".into(),
        ));
    }
    let mut m = [[S::zero(); 2]; 2];
    let mut b = [S::zero(); 2];
    for &(u, delta, y) in samples {
        let z = (delta * u).max(S::zero()).sqrt();
        m[0][0] += u * u;
        m[0][1] += u * z;
        m[1][0] += u * z;
        m[1][1] += z * z;
        b[0] += u * y;
        b[1] += z * y;
    }
    let [c1, c2] = solve_two_by_two(m, b)?;
    Ok((c1, c2))
}

/// The bound-normalized ratio `value / (B·n·ln(DKT/(Bn)))`.
pub fn bound_ratio<S: Scalar>(
    value: S,
    dim: usize,
    horizon: usize,
    bounds: &ProblemBounds<S>,
) -> Result<S> {
    let n = S::cast(dim as f64);
    let arg = bounds.region_diameter * bounds.action_diameter * S::cast(horizon as f64)
        / (bounds.interaction_bound * n);
    if arg <= S::one() {
        return Err(Error::InvalidInput(
            "horizon too small for the log normalizer".into(),
        ));
    }
    Ok(value / (bounds.interaction_bound * n * arg.ln()))
}

/// `value / √T`.
pub fn sqrt_ratio<S: Scalar>(value: S, horizon: usize) -> S {
    value / S::cast(horizon as f64).sqrt()
}

/// The plain ratio sequence `value / (n·lnT)` at the given checkpoints.
pub fn log_ratio_sequence<S: Scalar>(points: &[Checkpoint<S>], dim: usize) -> Vec<S> {
    let n = S::cast(dim as f64);
    points
        .iter()
        .map(|p| p.value / (n * S::cast(p.horizon as f64).ln()))
        .collect()
}

/// Sample mean and standard error over ≥ 30 trials.
pub fn monte_carlo_mean<S: Scalar>(values: &[S]) -> Result<(S, S)> {
    if values.len() < 30 {
        return Err(Error::InvalidInput(format!(
            "need at least 30 trials, got {}",
            values.len()
        )));
    }
    let count = S::cast(values.len() as f64);
    let mean = values.iter().copied().sum::<S>() / count;
    let mut ss = S::zero();
    for v in values {
        let d = *v - mean;
        ss += d * d;
    }
    let variance = ss / (count - S::one());
    Ok((mean, (variance / count).sqrt()))
}

/// Summary CSV over (trace, ratio) rows:
/// `n, T, learner, policy, R, Rtilde, V, Delta, ratio_log, ratio_sqrt`.
pub fn summary_csv<S: Scalar>(traces: &[&crate::sim::ExperimentTrace<S>]) -> String {
    use crate::sim::format_scalar;
    let mut out = String::from("n,T,learner,policy,R,Rtilde,V,Delta,ratio_log,ratio_sqrt\n");
    for trace in traces {
        let ratio_log = bound_ratio(
            trace.total_tilde(),
            trace.dim,
            trace.horizon.max(1),
            &trace.bounds,
        )
        .map(|r| format_scalar(r))
        .unwrap_or_else(|_| "nan".into());
        let ratio_sqrt = format_scalar(sqrt_ratio(trace.total_tilde(), trace.horizon.max(1)));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            trace.dim,
            trace.horizon,
            trace.learner,
            trace.policy,
            format_scalar(trace.total_regret()),
            format_scalar(trace.total_tilde()),
            format_scalar(trace.total_v()),
            format_scalar(trace.total_delta()),
            ratio_log,
            ratio_sqrt,
        ));
    }
    out
}
