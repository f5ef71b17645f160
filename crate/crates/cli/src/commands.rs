//! Subcommand implementations.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use invopt_core::learners::LearnerConfig;
use invopt_core::metrics::{monte_carlo_mean, summary_csv};
use invopt_core::sim::{
    gen_lower_bound_instance, random_unit_objective, run_configured, ActionSetGenerator,
    AgentPolicy, ExperimentTrace, InstanceSpec,
};

use crate::config::{parse_learner_kind, ExperimentConfig, SweepConfig};
use crate::svg::render_regret_chart;
use crate::{runtime, usage, Failure};

/// `--out-dir` flag, then `INVOPT_OUT_DIR`, then the configured default.
fn resolve_out_dir(flag: Option<PathBuf>, configured: &Path) -> PathBuf {
    flag.or_else(|| std::env::var_os("INVOPT_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| configured.to_path_buf())
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))
}

fn sanitize(label: &str) -> String {
    label.replace([':', '/'], "-")
}

pub fn trace_file_name(trace: &ExperimentTrace<f64>) -> String {
    format!(
        "trace_{}_{}_n{}_T{}_seed{}.csv",
        sanitize(&trace.learner),
        sanitize(&trace.policy),
        trace.dim,
        trace.horizon,
        trace.seed
    )
}

pub fn run(config_path: &Path, out_dir: Option<PathBuf>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", config_path.display())))?;
    let config = ExperimentConfig::parse(&text).map_err(usage)?;
    let out = resolve_out_dir(out_dir, &config.out_dir);
    ensure_dir(&out)?;
    // Canonical form of what actually ran, for exact replays.
    std::fs::write(out.join("config_resolved.txt"), config.to_text())
        .map_err(|e| Failure::runtime(format!("writing resolved config: {e}")))?;

    let seeds = config.seeds.seeds();
    let results: Vec<Result<ExperimentTrace<f64>, invopt_core::Error>> = seeds
        .par_iter()
        .map(|&seed| {
            let spec = config.instance(seed)?;
            run_configured(&spec, &config.learner, &config.agent)
        })
        .collect();
    let mut traces = Vec::with_capacity(results.len());
    for result in results {
        traces.push(result.map_err(runtime)?);
    }
    for trace in &traces {
        let path = out.join(trace_file_name(trace));
        trace
            .write_csv(&path)
            .map_err(|e| Failure::runtime(format!("writing {}: {e}", path.display())))?;
        println!(
            "wrote {} (R={:.6} Rtilde={:.6} Delta={:.6})",
            path.display(),
            trace.total_regret(),
            trace.total_tilde(),
            trace.total_delta()
        );
    }
    let refs: Vec<&ExperimentTrace<f64>> = traces.iter().collect();
    std::fs::write(out.join("summary.csv"), summary_csv(&refs))
        .map_err(|e| Failure::runtime(format!("writing summary: {e}")))?;

    // Prefix sums and normalized ratios at the configured checkpoints.
    if !config.checkpoints.is_empty() {
        let mut csv =
            String::from("seed,T,R,Rtilde,V,Delta,ratio_log,ratio_sqrt\n");
        for trace in &traces {
            for &t in &config.checkpoints {
                let Some(row) = trace.rounds.get(t.saturating_sub(1)) else {
                    continue;
                };
                let ratio_log = invopt_core::metrics::bound_ratio(
                    row.cum_tilde,
                    trace.dim,
                    t,
                    &trace.bounds,
                )
                .map(|r| format!("{r}"))
                .unwrap_or_else(|_| "nan".into());
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    trace.seed,
                    t,
                    row.cum_regret,
                    row.cum_tilde,
                    row.cum_v,
                    row.cum_delta,
                    ratio_log,
                    invopt_core::metrics::sqrt_ratio(row.cum_tilde, t),
                ));
            }
        }
        std::fs::write(out.join("checkpoints.csv"), csv)
            .map_err(|e| Failure::runtime(format!("writing checkpoints: {e}")))?;
    }
    Ok(())
}

pub fn lowerbound(
    dim: usize,
    bound: f64,
    horizon: Option<usize>,
    trials: usize,
    learner: &str,
    seed: u64,
    out_dir: Option<PathBuf>,
) -> Result<(), Failure> {
    if trials < 30 {
        return Err(Failure::usage(format!(
            "need at least 30 trials for a meaningful mean, got {trials}"
        )));
    }
    if dim == 0 {
        return Err(Failure::usage("dimension must be positive"));
    }
    let horizon = horizon.unwrap_or(dim);
    if horizon < dim {
        return Err(Failure::usage(format!(
            "horizon {horizon} is smaller than the dimension {dim}"
        )));
    }
    let learner_config = parse_learner_kind(learner).map_err(usage)?;
    if matches!(learner_config, LearnerConfig::Arc2d) && dim != 2 {
        return Err(Failure::usage(
            "the arc2d learner only runs in dimension 2",
        ));
    }

    let stats: Vec<Result<f64, invopt_core::Error>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let spec = gen_lower_bound_instance(dim, bound, horizon, seed + i as u64)?;
            let trace = run_configured(&spec, &learner_config, &AgentPolicy::Optimal)?;
            // Regret accumulated over the first n rounds.
            Ok(trace.rounds[dim - 1].cum_regret)
        })
        .collect();
    let mut values = Vec::with_capacity(trials);
    for s in stats {
        values.push(s.map_err(runtime)?);
    }
    let (mean, stderr) = monte_carlo_mean(&values).map_err(runtime)?;
    let threshold = bound * dim as f64 / 4.0;
    println!(
        "first-{dim}-round regret over {trials} trials ({learner}): mean={mean:.6} stderr={stderr:.6}"
    );
    println!("lower-bound threshold Bn/4 = {threshold:.6}");

    if let Some(out) = out_dir.or_else(|| std::env::var_os("INVOPT_OUT_DIR").map(PathBuf::from))
    {
        ensure_dir(&out)?;
        let csv = format!(
            "n,B,T,learner,trials,mean_first_n_regret,stderr,threshold\n{dim},{bound},{horizon},{learner},{trials},{mean},{stderr},{threshold}\n"
        );
        std::fs::write(out.join("lowerbound_summary.csv"), csv)
            .map_err(|e| Failure::runtime(format!("writing summary: {e}")))?;
    }
    Ok(())
}

pub fn arc2d_bench(
    horizon: usize,
    trials: usize,
    generator: &str,
    seed: u64,
    out_dir: Option<PathBuf>,
) -> Result<(), Failure> {
    if trials < 30 {
        return Err(Failure::usage(format!(
            "need at least 30 trials for a meaningful mean, got {trials}"
        )));
    }
    let generator = match generator {
        "segments" => ActionSetGenerator::Segments2D,
        "polygons" => ActionSetGenerator::Polygons2D { points: 5 },
        other => {
            return Err(Failure::usage(format!(
                "unknown generator `{other}` (use segments or polygons)"
            )))
        }
    };

    let stats: Vec<Result<f64, invopt_core::Error>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = seed + i as u64;
            let spec = InstanceSpec {
                dim: 2,
                horizon,
                region: invopt_core::region::FeasibleRegion::ball(
                    invopt_core::linalg::Vector::zeros(2),
                    1.0,
                )?,
                true_objective: random_unit_objective(2, trial_seed),
                generator: generator.clone(),
                action_diameter: 1.0,
                interaction_bound: None,
                seed: trial_seed,
            };
            let trace = run_configured(&spec, &LearnerConfig::Arc2d, &AgentPolicy::Optimal)?;
            Ok(trace.total_regret())
        })
        .collect();
    let mut values = Vec::with_capacity(trials);
    for s in stats {
        values.push(s.map_err(runtime)?);
    }
    let (mean, stderr) = monte_carlo_mean(&values).map_err(runtime)?;
    let bound = std::f64::consts::TAU;
    println!(
        "arc2d cumulative regret over {trials} trials at T={horizon}: mean={mean:.6} stderr={stderr:.6}"
    );
    println!("constant expected-regret bound 2π = {bound:.6}");

    if let Some(out) = out_dir.or_else(|| std::env::var_os("INVOPT_OUT_DIR").map(PathBuf::from))
    {
        ensure_dir(&out)?;
        let csv = format!(
            "T,trials,generator,mean_regret,stderr,bound\n{horizon},{trials},{},{mean},{stderr},{bound}\n",
            match generator {
                ActionSetGenerator::Segments2D => "segments",
                _ => "polygons",
            }
        );
        std::fs::write(out.join("arc2d_summary.csv"), csv)
            .map_err(|e| Failure::runtime(format!("writing summary: {e}")))?;
    }
    Ok(())
}

pub fn sweep(config_path: &Path, out_dir: Option<PathBuf>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", config_path.display())))?;
    let config = SweepConfig::parse(&text).map_err(usage)?;
    let out = resolve_out_dir(out_dir, &config.out_dir);
    ensure_dir(&out)?;

    struct Cell {
        dim: usize,
        horizon: usize,
        learner: LearnerConfig<f64>,
        agent: AgentPolicy<f64>,
        seed: u64,
    }
    let mut cells = Vec::new();
    for &dim in &config.dims {
        for &horizon in &config.horizons {
            for learner in &config.learners {
                if matches!(learner, LearnerConfig::Arc2d) && dim != 2 {
                    eprintln!("note: skipping arc2d cell at n={dim} (needs n=2)");
                    continue;
                }
                for agent in &config.agents {
                    for seed in config.seeds.seeds() {
                        cells.push(Cell {
                            dim,
                            horizon,
                            learner: learner.clone(),
                            agent: agent.clone(),
                            seed,
                        });
                    }
                }
            }
        }
    }
    let results: Vec<Result<ExperimentTrace<f64>, invopt_core::Error>> = cells
        .par_iter()
        .map(|cell| {
            let spec = InstanceSpec {
                dim: cell.dim,
                horizon: cell.horizon,
                region: config.region.build(cell.dim)?,
                true_objective: match &config.objective {
                    crate::config::ObjectiveSpec::Explicit(v) => {
                        invopt_core::linalg::Vector::from_slice(v)
                    }
                    crate::config::ObjectiveSpec::RandomUnit => {
                        random_unit_objective(cell.dim, cell.seed)
                    }
                },
                generator: config.generator.clone(),
                action_diameter: config.action_diameter,
                interaction_bound: config.interaction_bound,
                seed: cell.seed,
            };
            spec.validate()?;
            run_configured(&spec, &cell.learner, &cell.agent)
        })
        .collect();
    let mut traces = Vec::with_capacity(results.len());
    for result in results {
        traces.push(result.map_err(runtime)?);
    }
    // Deterministic row order regardless of the parallel schedule.
    traces.sort_by(|a, b| {
        (a.dim, a.horizon, &a.learner, &a.policy, a.seed).cmp(&(
            b.dim,
            b.horizon,
            &b.learner,
            &b.policy,
            b.seed,
        ))
    });
    let refs: Vec<&ExperimentTrace<f64>> = traces.iter().collect();
    let path = out.join("summary.csv");
    std::fs::write(&path, summary_csv(&refs))
        .map_err(|e| Failure::runtime(format!("writing summary: {e}")))?;
    println!("wrote {} ({} cells)", path.display(), traces.len());
    Ok(())
}

pub fn plot(out: &Path, trace_paths: &[PathBuf]) -> Result<(), Failure> {
    let mut traces = Vec::new();
    for path in trace_paths {
        let trace = ExperimentTrace::<f64>::read_csv(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        traces.push((label, trace));
    }
    let svg = render_regret_chart(&traces);
    std::fs::write(out, svg)
        .map_err(|e| Failure::runtime(format!("writing {}: {e}", out.display())))?;
    println!("wrote {}", out.display());
    Ok(())
}
