//! Experiment configuration: the on-disk JSON form every report echoes back.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use sccp_core::cutvol::FloatingMode;
use sccp_core::{BodySpec, ConvexSet, Vector};

use crate::CliError;

/// One experiment. `command` selects the subcommand; the remaining fields are
/// shared by all of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub body: BodySpec,
    /// Seed of the ChaCha8 generator behind every random direction or cut.
    #[serde(default)]
    pub seed: u64,
    /// Command tolerance; see [`ExperimentConfig::tol_or`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Directory receiving `<command>.csv` and `<command>.json`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Section statistics over a direction × level grid.
    Section { directions: Directions, levels: Levels },
    /// Centroid-curve line fits per direction and the concurrency verdict.
    Sccp {
        directions: Directions,
        #[serde(default = "default_n_levels")]
        n_levels: usize,
    },
    Cutvol(CutTask),
    /// Shell distances against the recession cone.
    Asym { radii: Vec<f64> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Section { .. } => "section",
            Command::Sccp { .. } => "sccp",
            Command::Cutvol(_) => "cutvol",
            Command::Asym { .. } => "asym",
        }
    }
}

fn default_n_levels() -> usize {
    12
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Directions {
    /// Explicit vectors, normalized on use.
    List(Vec<Vec<f64>>),
    /// Deterministic grid of admissible normals.
    Grid(usize),
    /// Seeded random admissible normals.
    Random(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Levels {
    List(Vec<f64>),
    /// `n` levels spread over each direction's admissible interval.
    Auto(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cuts {
    /// Explicit cut vectors `a` (hyperplane `<a, x> = 1`).
    List(Vec<Vec<f64>>),
    /// Seeded random cuts meeting the body.
    Random(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum CutTask {
    Volume { cuts: Cuts },
    Gradient { cuts: Cuts },
    /// Anchors are base coordinates `x'`; the anchor is the boundary point above them.
    ParallelScan { k: f64, anchors: Vec<Vec<f64>> },
    HomothetyScan { k: f64, anchors: Vec<Vec<f64>> },
    Floating { mode: FloatingMode, n_normals: usize },
}

impl CutTask {
    pub fn name(&self) -> &'static str {
        match self {
            CutTask::Volume { .. } => "volume",
            CutTask::Gradient { .. } => "gradient",
            CutTask::ParallelScan { .. } => "parallel-scan",
            CutTask::HomothetyScan { .. } => "homothety-scan",
            CutTask::Floating { .. } => "floating",
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_vectors(name: &str, vectors: &[Vec<f64>], dim: usize) -> Result<(), CliError> {
    if vectors.is_empty() {
        return Err(invalid(format!("{name} must not be empty")));
    }
    for v in vectors {
        if v.len() != dim {
            return Err(invalid(format!("{name}: expected {dim} components, got {v:?}")));
        }
        if v.iter().any(|x| !x.is_finite()) || v.iter().all(|x| *x == 0.0) {
            return Err(invalid(format!("{name}: {v:?} must be finite and nonzero")));
        }
    }
    Ok(())
}

fn check_count(name: &str, n: usize) -> Result<(), CliError> {
    if n == 0 {
        Err(invalid(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: Self = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The configured tolerance, or the command's default.
    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Structural checks that make the whole config unusable; per-item numerical
    /// failures are reported as row diagnostics instead.
    pub fn validate(&self) -> Result<(), CliError> {
        let dim = self.body.dim();
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(invalid(format!("tol must be positive, got {tol}")));
            }
        }
        let check_directions = |d: &Directions| match d {
            Directions::List(v) => check_vectors("directions", v, dim),
            Directions::Grid(n) | Directions::Random(n) => check_count("direction count", *n),
        };
        match &self.command {
            Command::Section { directions, levels } => {
                check_directions(directions)?;
                match levels {
                    Levels::List(t) if t.is_empty() || t.iter().any(|x| !x.is_finite()) => {
                        Err(invalid("levels must be a nonempty list of finite numbers"))
                    }
                    Levels::Auto(n) => check_count("level count", *n),
                    Levels::List(_) => Ok(()),
                }
            }
            Command::Sccp { directions, n_levels } => {
                check_directions(directions)?;
                if *n_levels < 8 {
                    return Err(invalid(format!("n_levels must be at least 8, got {n_levels}")));
                }
                Ok(())
            }
            Command::Cutvol(task) => match task {
                CutTask::Volume { cuts } | CutTask::Gradient { cuts } => match cuts {
                    Cuts::List(v) => check_vectors("cuts", v, dim),
                    Cuts::Random(n) => check_count("cut count", *n),
                },
                CutTask::ParallelScan { k, anchors } | CutTask::HomothetyScan { k, anchors } => {
                    if !(*k > 0.0 && k.is_finite()) {
                        return Err(invalid(format!("k must be positive, got {k}")));
                    }
                    if anchors.is_empty() || anchors.iter().any(|a| a.len() != dim - 1 || a.iter().any(|x| !x.is_finite())) {
                        return Err(invalid(format!("anchors must be a nonempty list of {}-component base points", dim - 1)));
                    }
                    Ok(())
                }
                CutTask::Floating { mode, n_normals } => {
                    if let FloatingMode::Translate { e, .. } = mode {
                        if e.dim() != dim {
                            return Err(invalid(format!("floating direction needs {dim} components")));
                        }
                    }
                    check_count("n_normals", *n_normals)
                }
            },
            Command::Asym { radii } => {
                if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                    return Err(invalid("radii must be a nonempty list of positive numbers"));
                }
                if radii.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("radii must be strictly increasing"));
                }
                Ok(())
            }
        }
    }

    /// Resolves a direction spec into unit vectors (seeded for `random`).
    pub fn resolve_directions(&self, spec: &Directions) -> Vec<Vector> {
        match spec {
            Directions::List(v) => v.iter().map(|c| Vector::from_slice(c).expect("validated").normalize()).collect(),
            Directions::Grid(n) => self.body.admissible_normal_grid(*n),
            Directions::Random(n) => {
                let mut rng = self.rng();
                (0..*n).map(|_| self.body.random_admissible_normal(&mut rng)).collect()
            }
        }
    }
}
