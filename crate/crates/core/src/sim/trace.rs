//! Per-round records, the experiment trace, and its CSV format.
//!
//! The CSV carries one header line with the config fingerprint and the
//! `(D, K, B)` constants, a column-name line, then one row per round in
//! full-precision decimal text (17 significant digits), so traces re-parse
//! without loss and replay byte-for-byte.

use std::path::Path;

use crate::learners::ProblemBounds;
use crate::linalg::Vector;
use crate::sim::InstanceSpec;
use crate::{Error, Result, Scalar};

/// Everything recorded about one protocol round.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrace<S> {
    pub round: usize,
    /// The learner's prediction `ĉ_t`.
    pub prediction: Vector<S>,
    /// `x̂_t`, the action induced by the prediction.
    pub learner_action: Vector<S>,
    /// `x_t`, the agent's action.
    pub agent_action: Vector<S>,
    /// `⟨c*, x_t − x̂_t⟩`.
    pub inst_regret: S,
    /// `⟨ĉ_t − c*, x̂_t − x_t⟩`.
    pub inst_tilde: S,
    /// `⟨ĉ_t − c*, x̂_t − x_t⟩²`.
    pub inst_v: S,
    /// The agent's own suboptimality `ℓ_t(c*)`.
    pub inst_delta: S,
    pub cum_regret: S,
    pub cum_tilde: S,
    pub cum_v: S,
    pub cum_delta: S,
}

/// One full experiment run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentTrace<S> {
    pub fingerprint: String,
    pub seed: u64,
    pub dim: usize,
    pub horizon: usize,
    pub learner: String,
    pub policy: String,
    pub bounds: ProblemBounds<S>,
    pub rounds: Vec<RoundTrace<S>>,
}

/// Full-precision decimal text: 17 significant digits round-trip any f64.
pub fn format_scalar<S: Scalar>(x: S) -> String {
    format!("{x:.16e}")
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

impl<S: Scalar> ExperimentTrace<S> {
    pub(crate) fn assemble(
        spec: &InstanceSpec<S>,
        learner: &str,
        policy: &str,
        bounds: ProblemBounds<S>,
        rounds: Vec<RoundTrace<S>>,
    ) -> Self {
        let description = format!("{};learner={learner};policy={policy}", spec.describe());
        ExperimentTrace {
            fingerprint: format!("{:016x}", fnv1a64(description.as_bytes())),
            seed: spec.seed,
            dim: spec.dim,
            horizon: spec.horizon,
            learner: learner.to_string(),
            policy: policy.to_string(),
            bounds,
            rounds,
        }
    }

    pub fn total_regret(&self) -> S {
        self.rounds.last().map_or(S::zero(), |r| r.cum_regret)
    }

    pub fn total_tilde(&self) -> S {
        self.rounds.last().map_or(S::zero(), |r| r.cum_tilde)
    }

    pub fn total_v(&self) -> S {
        self.rounds.last().map_or(S::zero(), |r| r.cum_v)
    }

    pub fn total_delta(&self) -> S {
        self.rounds.last().map_or(S::zero(), |r| r.cum_delta)
    }

    /// Cumulative surrogate regret after the given 1-based round.
    pub fn tilde_at(&self, round: usize) -> Option<S> {
        self.rounds.get(round.checked_sub(1)?).map(|r| r.cum_tilde)
    }

    /// Recompute all prefix sums from the instantaneous columns and compare
    /// against the stored running sums at the given relative tolerance.
    pub fn validate_running_sums(&self, rel_tol: S) -> Result<()> {
        let mut sums = [S::zero(); 4];
        for row in &self.rounds {
            sums[0] += row.inst_regret;
            sums[1] += row.inst_tilde;
            sums[2] += row.inst_v;
            sums[3] += row.inst_delta;
            for (stored, fresh) in [
                (row.cum_regret, sums[0]),
                (row.cum_tilde, sums[1]),
                (row.cum_v, sums[2]),
                (row.cum_delta, sums[3]),
            ] {
                let tol = rel_tol * stored.abs().max(S::one());
                if (stored - fresh).abs() > tol {
                    return Err(Error::Numeric(format!(
                        "running sum mismatch at round {}: {stored} vs {fresh}",
                        row.round
                    )));
                }
            }
        }
        Ok(())
    }

    /// CSV serialization; see the module docs for the layout.
    pub fn to_csv(&self) -> String {
        let n = self.dim;
        let mut out = String::new();
        out.push_str(&format!(
            "# fingerprint={} seed={} n={} T={} learner={} policy={} D={} K={} B={}\n",
            self.fingerprint,
            self.seed,
            n,
            self.horizon,
            self.learner,
            self.policy,
            format_scalar(self.bounds.region_diameter),
            format_scalar(self.bounds.action_diameter),
            format_scalar(self.bounds.interaction_bound),
        ));
        out.push('t');
        for prefix in ["chat", "xhat", "x"] {
            for i in 1..=n {
                out.push_str(&format!(",{prefix}{i}"));
            }
        }
        out.push_str(",inst_regret,inst_tilde,inst_V,inst_delta,R,Rtilde,V,Delta\n");
        for row in &self.rounds {
            out.push_str(&row.round.to_string());
            for vec in [&row.prediction, &row.learner_action, &row.agent_action] {
                for x in vec.iter() {
                    out.push(',');
                    out.push_str(&format_scalar(*x));
                }
            }
            for x in [
                row.inst_regret,
                row.inst_tilde,
                row.inst_v,
                row.inst_delta,
                row.cum_regret,
                row.cum_tilde,
                row.cum_v,
                row.cum_delta,
            ] {
                out.push(',');
                out.push_str(&format_scalar(x));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty trace file".into()))?;
        let header = header
            .strip_prefix("# ")
            .ok_or_else(|| Error::InvalidInput("missing trace header".into()))?;
        let mut fields = std::collections::HashMap::new();
        for pair in header.split(' ') {
            if let Some((k, v)) = pair.split_once('=') {
                fields.insert(k.to_string(), v.to_string());
            }
        }
        let lookup = |key: &str| -> Result<String> {
            fields
                .get(key)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("trace header missing {key}")))
        };
        let parse_scalar = |text: &str| -> Result<S> {
            text.parse::<S>()
                .map_err(|_| Error::InvalidInput(format!("bad number in trace: {text}")))
        };
        let dim: usize = lookup("n")?
            .parse()
            .map_err(|_| Error::InvalidInput("bad n in trace header".into()))?;
        let horizon: usize = lookup("T")?
            .parse()
            .map_err(|_| Error::InvalidInput("bad T in trace header".into()))?;
        let seed: u64 = lookup("seed")?
            .parse()
            .map_err(|_| Error::InvalidInput("bad seed in trace header".into()))?;
        let bounds = ProblemBounds::new(
            parse_scalar(&lookup("D")?)?,
            parse_scalar(&lookup("K")?)?,
            parse_scalar(&lookup("B")?)?,
        )?;
        // Skip the column-name line.
        lines.next();
        let mut rounds = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            let expected = 1 + 3 * dim + 8;
            if cells.len() != expected {
                return Err(Error::InvalidInput(format!(
                    "trace row has {} cells, expected {expected}",
                    cells.len()
                )));
            }
            let round: usize = cells[0]
                .parse()
                .map_err(|_| Error::InvalidInput("bad round index".into()))?;
            let take = |offset: usize, len: usize| -> Result<Vec<S>> {
                cells[offset..offset + len]
                    .iter()
                    .map(|c| parse_scalar(c))
                    .collect()
            };
            let prediction = Vector::new(take(1, dim)?);
            let learner_action = Vector::new(take(1 + dim, dim)?);
            let agent_action = Vector::new(take(1 + 2 * dim, dim)?);
            let tail = take(1 + 3 * dim, 8)?;
            rounds.push(RoundTrace {
                round,
                prediction,
                learner_action,
                agent_action,
                inst_regret: tail[0],
                inst_tilde: tail[1],
                inst_v: tail[2],
                inst_delta: tail[3],
                cum_regret: tail[4],
                cum_tilde: tail[5],
                cum_v: tail[6],
                cum_delta: tail[7],
            });
        }
        Ok(ExperimentTrace {
            fingerprint: lookup("fingerprint")?,
            seed,
            dim,
            horizon,
            learner: lookup("learner")?,
            policy: lookup("policy")?,
            bounds,
            rounds,
        })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}
