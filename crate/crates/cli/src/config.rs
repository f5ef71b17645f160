//! The experiment configuration file: a flat, line-oriented `key = value`
//! format with `[section]` headers. Unknown sections or keys are rejected up
//! front, values are decimal text, and `#` lines are comments. Geometric
//! objects are tagged records (`kind` followed by its numeric fields).

use std::collections::HashSet;
use std::path::PathBuf;

use invopt_core::geometry::ActionSet;
use invopt_core::learners::LearnerConfig;
use invopt_core::linalg::Vector;
use invopt_core::region::FeasibleRegion;
use invopt_core::sim::{
    random_unit_objective, ActionSetGenerator, AgentPolicy, InstanceSpec,
};
use invopt_core::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum SeedSpec {
    Single(u64),
    /// Inclusive range, one run per seed.
    Range(u64, u64),
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::Single(s) => vec![*s],
            SeedSpec::Range(a, b) => (*a..=*b).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionSpec {
    /// `Ball(0, 1)` in the instance dimension.
    UnitBall,
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl RegionSpec {
    pub fn build(&self, dim: usize) -> Result<FeasibleRegion<f64>> {
        match self {
            RegionSpec::UnitBall => FeasibleRegion::ball(Vector::zeros(dim), 1.0),
            RegionSpec::Ball { center, radius } => {
                if center.len() != dim {
                    return Err(Error::InvalidConfig(format!(
                        "region center has {} coordinates, instance dimension is {dim}",
                        center.len()
                    )));
                }
                FeasibleRegion::ball(Vector::from_slice(center), *radius)
            }
            RegionSpec::Box { lower, upper } => {
                if lower.len() != dim || upper.len() != dim {
                    return Err(Error::InvalidConfig(
                        "region box bounds do not match the instance dimension".into(),
                    ));
                }
                FeasibleRegion::axis_box(Vector::from_slice(lower), Vector::from_slice(upper))
            }
        }
    }

    fn to_value(&self) -> String {
        match self {
            RegionSpec::UnitBall => "unit_ball".into(),
            RegionSpec::Ball { center, radius } => {
                format!("ball {} {}", join_numbers(center), fmt_num(*radius))
            }
            RegionSpec::Box { lower, upper } => {
                format!("box {} {}", join_numbers(lower), join_numbers(upper))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObjectiveSpec {
    Explicit(Vec<f64>),
    /// A fresh uniform unit vector per seed.
    RandomUnit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub horizon: usize,
    pub seeds: SeedSpec,
    pub region: RegionSpec,
    pub objective: ObjectiveSpec,
    pub generator: ActionSetGenerator<f64>,
    pub action_diameter: f64,
    pub interaction_bound: Option<f64>,
    pub learner: LearnerConfig<f64>,
    pub agent: AgentPolicy<f64>,
    pub out_dir: PathBuf,
    pub checkpoints: Vec<usize>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw = RawConfig::parse(text)?;
        raw.check_sections(&["instance", "learner", "agent", "output"])?;

        let dim: usize = raw.required("instance", "dim")?;
        let horizon: usize = raw.required("instance", "horizon")?;
        let seeds = parse_seeds(&raw)?;
        let region = parse_region(raw.required_str("instance", "region")?.as_str())?;
        let objective = parse_objective(
            raw.required_str("instance", "objective")?.as_str(),
        )?;
        let explicit_sets = raw
            .repeated("instance", "set")
            .iter()
            .map(|v| parse_action_set(v, dim))
            .collect::<Result<Vec<_>>>()?;
        let generator = parse_generator(
            raw.required_str("instance", "generator")?.as_str(),
            explicit_sets,
        )?;
        let action_diameter: f64 = raw.required("instance", "action_diameter")?;
        let interaction_bound: Option<f64> = raw.optional("instance", "interaction_bound")?;

        let learner = parse_learner(&raw)?;
        let agent = parse_agent(&raw)?;

        let out_dir = PathBuf::from(
            raw.optional_str("output", "dir")?
                .unwrap_or_else(|| "out".into()),
        );
        let checkpoints = match raw.optional_str("output", "checkpoints")? {
            Some(text) => parse_list::<usize>(&text)?,
            None => Vec::new(),
        };

        raw.reject_unused()?;
        Ok(ExperimentConfig {
            dim,
            horizon,
            seeds,
            region,
            objective,
            generator,
            action_diameter,
            interaction_bound,
            learner,
            agent,
            out_dir,
            checkpoints,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("[instance]\n");
        out.push_str(&format!("dim = {}\n", self.dim));
        out.push_str(&format!("horizon = {}\n", self.horizon));
        match &self.seeds {
            SeedSpec::Single(s) => out.push_str(&format!("seed = {s}\n")),
            SeedSpec::Range(a, b) => out.push_str(&format!("seeds = {a}..{b}\n")),
        }
        out.push_str(&format!("region = {}\n", self.region.to_value()));
        match &self.objective {
            ObjectiveSpec::Explicit(v) => {
                out.push_str(&format!("objective = {}\n", join_numbers(v)))
            }
            ObjectiveSpec::RandomUnit => out.push_str("objective = random_unit\n"),
        }
        out.push_str(&format!("generator = {}\n", generator_value(&self.generator)));
        if let ActionSetGenerator::Explicit(sets) = &self.generator {
            for set in sets {
                out.push_str(&format!("set = {}\n", action_set_value(set)));
            }
        }
        out.push_str(&format!(
            "action_diameter = {}\n",
            fmt_num(self.action_diameter)
        ));
        if let Some(b) = self.interaction_bound {
            out.push_str(&format!("interaction_bound = {}\n", fmt_num(b)));
        }
        out.push_str("\n[learner]\n");
        out.push_str(&format!("kind = {}\n", self.learner.kind_label()));
        match &self.learner {
            LearnerConfig::Ons { eta: Some(eta) } => {
                out.push_str(&format!("eta = {}\n", fmt_num(*eta)))
            }
            LearnerConfig::MetaGrad { grid: Some(grid) } => {
                out.push_str(&format!("grid = {}\n", join_numbers(grid)))
            }
            LearnerConfig::Ogd { scale: Some(scale) } => {
                out.push_str(&format!("step_scale = {}\n", fmt_num(*scale)))
            }
            _ => {}
        }
        out.push_str("\n[agent]\n");
        match &self.agent {
            AgentPolicy::Optimal => out.push_str("kind = optimal\n"),
            AgentPolicy::PerturbedObjective { noise_scale } => {
                out.push_str("kind = perturbed\n");
                out.push_str(&format!("sigma = {}\n", fmt_num(*noise_scale)));
            }
            AgentPolicy::SuboptimalMix { probability } => {
                out.push_str("kind = mix\n");
                out.push_str(&format!("rho = {}\n", fmt_num(*probability)));
            }
        }
        out.push_str("\n[output]\n");
        out.push_str(&format!("dir = {}\n", self.out_dir.display()));
        if !self.checkpoints.is_empty() {
            let list: Vec<String> = self.checkpoints.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("checkpoints = {}\n", list.join(" ")));
        }
        out
    }

    /// The per-seed instance this config describes.
    pub fn instance(&self, seed: u64) -> Result<InstanceSpec<f64>> {
        let region = self.region.build(self.dim)?;
        let objective = match &self.objective {
            ObjectiveSpec::Explicit(v) => {
                if v.len() != self.dim {
                    return Err(Error::InvalidConfig(format!(
                        "objective has {} coordinates, instance dimension is {}",
                        v.len(),
                        self.dim
                    )));
                }
                Vector::from_slice(v)
            }
            ObjectiveSpec::RandomUnit => random_unit_objective(self.dim, seed),
        };
        let spec = InstanceSpec {
            dim: self.dim,
            horizon: self.horizon,
            region,
            true_objective: objective,
            generator: self.generator.clone(),
            action_diameter: self.action_diameter,
            interaction_bound: self.interaction_bound,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Sweep configuration: the cross product of the listed cells.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub dims: Vec<usize>,
    pub horizons: Vec<usize>,
    pub learners: Vec<LearnerConfig<f64>>,
    pub agents: Vec<AgentPolicy<f64>>,
    pub seeds: SeedSpec,
    pub region: RegionSpec,
    pub objective: ObjectiveSpec,
    pub generator: ActionSetGenerator<f64>,
    pub action_diameter: f64,
    pub interaction_bound: Option<f64>,
    pub out_dir: PathBuf,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw = RawConfig::parse(text)?;
        raw.check_sections(&["sweep"])?;
        let dims = parse_list::<usize>(&raw.required_str("sweep", "dims")?)?;
        let horizons = parse_list::<usize>(&raw.required_str("sweep", "horizons")?)?;
        let learners = raw
            .required_str("sweep", "learners")?
            .split_whitespace()
            .map(parse_learner_kind)
            .collect::<Result<Vec<_>>>()?;
        let agents = raw
            .required_str("sweep", "agents")?
            .split_whitespace()
            .map(parse_agent_label)
            .collect::<Result<Vec<_>>>()?;
        let seeds = match raw.optional_str("sweep", "seeds")? {
            Some(text) => parse_seed_value(&text)?,
            None => SeedSpec::Single(0),
        };
        let region = match raw.optional_str("sweep", "region")? {
            Some(text) => parse_region(&text)?,
            None => RegionSpec::UnitBall,
        };
        let objective = match raw.optional_str("sweep", "objective")? {
            Some(text) => parse_objective(&text)?,
            None => ObjectiveSpec::RandomUnit,
        };
        let generator =
            parse_generator(&raw.required_str("sweep", "generator")?, Vec::new())?;
        let action_diameter: f64 = raw.required("sweep", "action_diameter")?;
        let interaction_bound: Option<f64> = raw.optional("sweep", "interaction_bound")?;
        let out_dir = PathBuf::from(
            raw.optional_str("sweep", "dir")?
                .unwrap_or_else(|| "out".into()),
        );
        raw.reject_unused()?;
        if dims.is_empty() || horizons.is_empty() || learners.is_empty() || agents.is_empty() {
            return Err(Error::InvalidConfig("sweep lists must be non-empty".into()));
        }
        Ok(SweepConfig {
            dims,
            horizons,
            learners,
            agents,
            seeds,
            region,
            objective,
            generator,
            action_diameter,
            interaction_bound,
            out_dir,
        })
    }
}

// ---------------------------------------------------------------------------
// Raw line-oriented parsing
// ---------------------------------------------------------------------------

struct RawConfig {
    // (section, key, value, line number)
    entries: Vec<(String, String, String, usize)>,
    used: std::cell::RefCell<HashSet<usize>>,
    sections: Vec<String>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut sections = Vec::new();
        let mut current: Option<String> = None;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim().to_string();
                if sections.contains(&name) {
                    return Err(Error::InvalidConfig(format!(
                        "duplicate section [{name}] at line {}",
                        idx + 1
                    )));
                }
                sections.push(name.clone());
                current = Some(name);
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("expected `key = value` at line {}", idx + 1))
            })?;
            let section = current.clone().ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "key outside any [section] at line {}",
                    idx + 1
                ))
            })?;
            entries.push((
                section,
                key.trim().to_string(),
                value.trim().to_string(),
                idx + 1,
            ));
        }
        Ok(RawConfig {
            entries,
            used: std::cell::RefCell::new(HashSet::new()),
            sections,
        })
    }

    fn check_sections(&self, allowed: &[&str]) -> Result<()> {
        for s in &self.sections {
            if !allowed.contains(&s.as_str()) {
                return Err(Error::InvalidConfig(format!("unknown section [{s}]")));
            }
        }
        Ok(())
    }

    fn lookup(&self, section: &str, key: &str) -> Result<Option<String>> {
        let mut found = None;
        for (i, (s, k, v, line)) in self.entries.iter().enumerate() {
            if s == section && k == key {
                if found.is_some() {
                    return Err(Error::InvalidConfig(format!(
                        "duplicate key `{key}` in [{section}] at line {line}"
                    )));
                }
                self.used.borrow_mut().insert(i);
                found = Some(v.clone());
            }
        }
        Ok(found)
    }

    fn repeated(&self, section: &str, key: &str) -> Vec<String> {
        let mut out = Vec::new();
        for (i, (s, k, v, _)) in self.entries.iter().enumerate() {
            if s == section && k == key {
                self.used.borrow_mut().insert(i);
                out.push(v.clone());
            }
        }
        out
    }

    fn required_str(&self, section: &str, key: &str) -> Result<String> {
        self.lookup(section, key)?.ok_or_else(|| {
            Error::InvalidConfig(format!("missing key `{key}` in [{section}]"))
        })
    }

    fn optional_str(&self, section: &str, key: &str) -> Result<Option<String>> {
        self.lookup(section, key)
    }

    fn required<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<T> {
        let text = self.required_str(section, key)?;
        text.parse::<T>().map_err(|_| {
            Error::InvalidConfig(format!("bad value for `{key}` in [{section}]: {text}"))
        })
    }

    fn optional<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.lookup(section, key)? {
            Some(text) => text
                .parse::<T>()
                .map(Some)
                .map_err(|_| {
                    Error::InvalidConfig(format!("bad value for `{key}` in [{section}]: {text}"))
                }),
            None => Ok(None),
        }
    }

    fn reject_unused(&self) -> Result<()> {
        for (i, (section, key, _, line)) in self.entries.iter().enumerate() {
            if !self.used.borrow().contains(&i) {
                return Err(Error::InvalidConfig(format!(
                    "unknown key `{key}` in [{section}] at line {line}"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Value parsers
// ---------------------------------------------------------------------------

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| Error::InvalidConfig(format!("bad list entry: {t}")))
        })
        .collect()
}

fn parse_seed_value(text: &str) -> Result<SeedSpec> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad seed range: {text}")))?;
        let b: u64 = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad seed range: {text}")))?;
        if b < a {
            return Err(Error::InvalidConfig(format!("empty seed range: {text}")));
        }
        Ok(SeedSpec::Range(a, b))
    } else {
        Ok(SeedSpec::Single(text.parse().map_err(|_| {
            Error::InvalidConfig(format!("bad seed: {text}"))
        })?))
    }
}

fn parse_seeds(raw: &RawConfig) -> Result<SeedSpec> {
    let single = raw.optional_str("instance", "seed")?;
    let range = raw.optional_str("instance", "seeds")?;
    match (single, range) {
        (Some(_), Some(_)) => Err(Error::InvalidConfig(
            "use either `seed` or `seeds`, not both".into(),
        )),
        (Some(s), None) => parse_seed_value(&s).and_then(|spec| match spec {
            SeedSpec::Single(_) => Ok(spec),
            _ => Err(Error::InvalidConfig("`seed` takes a single value".into())),
        }),
        (None, Some(r)) => parse_seed_value(&r),
        (None, None) => Ok(SeedSpec::Single(0)),
    }
}

fn parse_region(text: &str) -> Result<RegionSpec> {
    let mut parts = text.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty region".into()))?;
    let numbers: Vec<f64> = parts
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad region number: {t}")))
        })
        .collect::<Result<Vec<_>>>()?;
    match kind {
        "unit_ball" => {
            if !numbers.is_empty() {
                return Err(Error::InvalidConfig("unit_ball takes no numbers".into()));
            }
            Ok(RegionSpec::UnitBall)
        }
        "ball" => {
            if numbers.len() < 2 {
                return Err(Error::InvalidConfig(
                    "ball region needs center coordinates and a radius".into(),
                ));
            }
            let (center, radius) = numbers.split_at(numbers.len() - 1);
            Ok(RegionSpec::Ball {
                center: center.to_vec(),
                radius: radius[0],
            })
        }
        "box" => {
            if numbers.is_empty() || !numbers.len().is_multiple_of(2) {
                return Err(Error::InvalidConfig(
                    "box region needs equal-length lower and upper bounds".into(),
                ));
            }
            let (lower, upper) = numbers.split_at(numbers.len() / 2);
            Ok(RegionSpec::Box {
                lower: lower.to_vec(),
                upper: upper.to_vec(),
            })
        }
        other => Err(Error::InvalidConfig(format!("unknown region kind: {other}"))),
    }
}

fn parse_objective(text: &str) -> Result<ObjectiveSpec> {
    if text == "random_unit" {
        return Ok(ObjectiveSpec::RandomUnit);
    }
    Ok(ObjectiveSpec::Explicit(parse_list::<f64>(text)?))
}

fn parse_generator(
    text: &str,
    explicit_sets: Vec<ActionSet<f64>>,
) -> Result<ActionSetGenerator<f64>> {
    let mut parts = text.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty generator".into()))?;
    let numbers: Vec<f64> = parts
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad generator number: {t}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let arity = |want: usize| -> Result<()> {
        if numbers.len() != want {
            return Err(Error::InvalidConfig(format!(
                "generator `{kind}` takes {want} numbers, got {}",
                numbers.len()
            )));
        }
        Ok(())
    };
    match kind {
        "balls" => {
            arity(2)?;
            Ok(ActionSetGenerator::RandomBalls {
                radius_min: numbers[0],
                radius_max: numbers[1],
            })
        }
        "boxes" => {
            arity(1)?;
            Ok(ActionSetGenerator::RandomBoxes {
                half_width_max: numbers[0],
            })
        }
        "vertices" => {
            arity(1)?;
            Ok(ActionSetGenerator::RandomVertexSets {
                points: numbers[0] as usize,
            })
        }
        "lowerbound" => {
            arity(1)?;
            Ok(ActionSetGenerator::LowerBoundSegments { bound: numbers[0] })
        }
        "segments2d" => {
            arity(0)?;
            Ok(ActionSetGenerator::Segments2D)
        }
        "polygons2d" => {
            arity(1)?;
            Ok(ActionSetGenerator::Polygons2D {
                points: numbers[0] as usize,
            })
        }
        "explicit" => {
            if explicit_sets.is_empty() {
                return Err(Error::InvalidConfig(
                    "explicit generator needs at least one `set = ...` line".into(),
                ));
            }
            Ok(ActionSetGenerator::Explicit(explicit_sets))
        }
        other => Err(Error::InvalidConfig(format!(
            "unknown generator kind: {other}"
        ))),
    }
}

pub fn parse_action_set(text: &str, dim: usize) -> Result<ActionSet<f64>> {
    let mut parts = text.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty action set".into()))?;
    let numbers: Vec<f64> = parts
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad action-set number: {t}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let vec_at = |offset: usize| Vector::from_slice(&numbers[offset..offset + dim]);
    match kind {
        "ball" => {
            if numbers.len() != dim + 1 {
                return Err(Error::InvalidConfig("ball set needs n + 1 numbers".into()));
            }
            ActionSet::ball(vec_at(0), numbers[dim])
        }
        "box" => {
            if numbers.len() != 2 * dim {
                return Err(Error::InvalidConfig("box set needs 2n numbers".into()));
            }
            ActionSet::axis_box(vec_at(0), vec_at(dim))
        }
        "segment" => {
            if numbers.len() != 2 * dim {
                return Err(Error::InvalidConfig("segment set needs 2n numbers".into()));
            }
            ActionSet::segment(vec_at(0), vec_at(dim))
        }
        "vertices" => {
            if numbers.is_empty() {
                return Err(Error::InvalidConfig("vertex set needs a point count".into()));
            }
            let m = numbers[0] as usize;
            if numbers.len() != 1 + m * dim {
                return Err(Error::InvalidConfig(format!(
                    "vertex set declares {m} points but has {} numbers",
                    numbers.len() - 1
                )));
            }
            ActionSet::vertices((0..m).map(|i| vec_at(1 + i * dim)).collect())
        }
        other => Err(Error::InvalidConfig(format!(
            "unknown action set kind: {other}"
        ))),
    }
}

pub fn action_set_value(set: &ActionSet<f64>) -> String {
    match set {
        ActionSet::Ball { center, radius } => format!(
            "ball {} {}",
            join_numbers(center.as_slice()),
            fmt_num(*radius)
        ),
        ActionSet::Box { lower, upper } => format!(
            "box {} {}",
            join_numbers(lower.as_slice()),
            join_numbers(upper.as_slice())
        ),
        ActionSet::Segment { a, b } => format!(
            "segment {} {}",
            join_numbers(a.as_slice()),
            join_numbers(b.as_slice())
        ),
        ActionSet::VertexSet { points } => {
            let mut out = format!("vertices {}", points.len());
            for p in points {
                out.push(' ');
                out.push_str(&join_numbers(p.as_slice()));
            }
            out
        }
    }
}

fn generator_value(generator: &ActionSetGenerator<f64>) -> String {
    match generator {
        ActionSetGenerator::RandomBalls {
            radius_min,
            radius_max,
        } => format!("balls {} {}", fmt_num(*radius_min), fmt_num(*radius_max)),
        ActionSetGenerator::RandomBoxes { half_width_max } => {
            format!("boxes {}", fmt_num(*half_width_max))
        }
        ActionSetGenerator::RandomVertexSets { points } => format!("vertices {points}"),
        ActionSetGenerator::LowerBoundSegments { bound } => {
            format!("lowerbound {}", fmt_num(*bound))
        }
        ActionSetGenerator::Segments2D => "segments2d".into(),
        ActionSetGenerator::Polygons2D { points } => format!("polygons2d {points}"),
        ActionSetGenerator::Explicit(_) => "explicit".into(),
    }
}

fn parse_learner(raw: &RawConfig) -> Result<LearnerConfig<f64>> {
    let kind = raw.required_str("learner", "kind")?;
    let eta: Option<f64> = raw.optional("learner", "eta")?;
    let grid = match raw.optional_str("learner", "grid")? {
        Some(text) => Some(parse_list::<f64>(&text)?),
        None => None,
    };
    let scale: Option<f64> = raw.optional("learner", "step_scale")?;
    let reject = |opt_name: &str, present: bool| -> Result<()> {
        if present {
            return Err(Error::InvalidConfig(format!(
                "`{opt_name}` does not apply to learner `{kind}`"
            )));
        }
        Ok(())
    };
    match kind.as_str() {
        "ons" => {
            reject("grid", grid.is_some())?;
            reject("step_scale", scale.is_some())?;
            Ok(LearnerConfig::Ons { eta })
        }
        "metagrad" => {
            reject("eta", eta.is_some())?;
            reject("step_scale", scale.is_some())?;
            Ok(LearnerConfig::MetaGrad { grid })
        }
        "ogd" => {
            reject("eta", eta.is_some())?;
            reject("grid", grid.is_some())?;
            Ok(LearnerConfig::Ogd { scale })
        }
        "arc2d" => {
            reject("eta", eta.is_some())?;
            reject("grid", grid.is_some())?;
            reject("step_scale", scale.is_some())?;
            Ok(LearnerConfig::Arc2d)
        }
        other => Err(Error::InvalidConfig(format!("unknown learner: {other}"))),
    }
}

pub fn parse_learner_kind(text: &str) -> Result<LearnerConfig<f64>> {
    match text {
        "ons" => Ok(LearnerConfig::Ons { eta: None }),
        "metagrad" => Ok(LearnerConfig::MetaGrad { grid: None }),
        "ogd" => Ok(LearnerConfig::Ogd { scale: None }),
        "arc2d" => Ok(LearnerConfig::Arc2d),
        other => Err(Error::InvalidConfig(format!("unknown learner: {other}"))),
    }
}

fn parse_agent(raw: &RawConfig) -> Result<AgentPolicy<f64>> {
    let kind = raw.required_str("agent", "kind")?;
    let sigma: Option<f64> = raw.optional("agent", "sigma")?;
    let rho: Option<f64> = raw.optional("agent", "rho")?;
    match kind.as_str() {
        "optimal" => {
            if sigma.is_some() || rho.is_some() {
                return Err(Error::InvalidConfig(
                    "optimal agent takes no parameters".into(),
                ));
            }
            Ok(AgentPolicy::Optimal)
        }
        "perturbed" => {
            if rho.is_some() {
                return Err(Error::InvalidConfig("`rho` is for the mix agent".into()));
            }
            Ok(AgentPolicy::PerturbedObjective {
                noise_scale: sigma.ok_or_else(|| {
                    Error::InvalidConfig("perturbed agent needs `sigma`".into())
                })?,
            })
        }
        "mix" => {
            if sigma.is_some() {
                return Err(Error::InvalidConfig(
                    "`sigma` is for the perturbed agent".into(),
                ));
            }
            Ok(AgentPolicy::SuboptimalMix {
                probability: rho.ok_or_else(|| {
                    Error::InvalidConfig("mix agent needs `rho`".into())
                })?,
            })
        }
        other => Err(Error::InvalidConfig(format!("unknown agent: {other}"))),
    }
}

/// Parse an agent given as a compact label: `optimal`, `perturbed:0.1`,
/// `mix:0.25` (the same labels traces carry).
pub fn parse_agent_label(text: &str) -> Result<AgentPolicy<f64>> {
    if text == "optimal" {
        return Ok(AgentPolicy::Optimal);
    }
    if let Some(sigma) = text.strip_prefix("perturbed:") {
        return Ok(AgentPolicy::PerturbedObjective {
            noise_scale: sigma
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad agent label: {text}")))?,
        });
    }
    if let Some(rho) = text.strip_prefix("mix:") {
        return Ok(AgentPolicy::SuboptimalMix {
            probability: rho
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad agent label: {text}")))?,
        });
    }
    Err(Error::InvalidConfig(format!("unknown agent label: {text}")))
}

fn fmt_num(x: f64) -> String {
    // Shortest text that round-trips; config files stay human-readable.
    format!("{x}")
}

fn join_numbers(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| fmt_num(*x))
        .collect::<Vec<_>>()
        .join(" ")
}
