//! Built-in experiment configurations, one per named example.

use sccp_core::cutvol::FloatingMode;
use sccp_core::{BodySpec, Profile, Vector};

use crate::config::{Command, CutTask, Cuts, Directions, ExperimentConfig, Levels};
use crate::CliError;

pub const SECTION: &[&str] = &["disk", "parabola"];
pub const SCCP: &[&str] = &["ellipsoid", "paraboloid", "hyperboloid", "controls"];
pub const CUTVOL: &[&str] = &["parabola", "paraboloid", "hyperbola", "sphere-gradient", "quartic", "cosh", "floating"];
pub const ASYM: &[&str] = &["fig1", "hyperboloid", "paraboloid"];

fn config(body: BodySpec, command: Command) -> ExperimentConfig {
    ExperimentConfig { body, seed: 0, tol: None, out: None, command }
}

fn ellipsoid_3d() -> BodySpec {
    BodySpec::ellipsoid(&[1.0, 2.0, 3.0]).unwrap().translated(Vector::xyz(0.5, -1.0, 2.0)).unwrap()
}

fn paraboloid_3d() -> BodySpec {
    BodySpec::paraboloid(&[1.0, 0.5]).unwrap().translated(Vector::xyz(1.0, 2.0, -1.0)).unwrap()
}

fn hyperboloid_3d() -> BodySpec {
    BodySpec::hyperboloid_sheet(&[1.0, 2.0]).unwrap().translated(Vector::xyz(-1.0, 0.5, 1.0)).unwrap()
}

fn scan(body: BodySpec, k: f64, xs: &[f64], homothety: bool) -> ExperimentConfig {
    let anchors = xs.iter().map(|&x| vec![x]).collect();
    let task = if homothety { CutTask::HomothetyScan { k, anchors } } else { CutTask::ParallelScan { k, anchors } };
    config(body, Command::Cutvol(task))
}

/// The preset `name` of subcommand `command`.
pub fn preset(command: &str, name: &str) -> Result<ExperimentConfig, CliError> {
    let found = match (command, name) {
        ("section", "disk") => Some(config(
            BodySpec::ball(2, 1.0).unwrap(),
            Command::Section {
                directions: Directions::List(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]]),
                levels: Levels::List(vec![-0.5, 0.0, 0.5]),
            },
        )),
        ("section", "parabola") => Some(config(
            BodySpec::paraboloid(&[1.0]).unwrap(),
            Command::Section {
                // Normals (-m, 1) of the chords y = m x + c, m in {-1, 0.3, 1, 2}.
                directions: Directions::List(vec![vec![1.0, 1.0], vec![-0.3, 1.0], vec![-1.0, 1.0], vec![-2.0, 1.0]]),
                levels: Levels::Auto(6),
            },
        )),
        ("sccp", "ellipsoid") => {
            Some(config(ellipsoid_3d(), Command::Sccp { directions: Directions::Grid(12), n_levels: 16 }))
        }
        ("sccp", "paraboloid") => {
            Some(config(paraboloid_3d(), Command::Sccp { directions: Directions::Grid(12), n_levels: 12 }))
        }
        ("sccp", "hyperboloid") => {
            Some(config(hyperboloid_3d(), Command::Sccp { directions: Directions::Grid(12), n_levels: 12 }))
        }
        ("sccp", "controls") => Some(config(
            BodySpec::superellipsoid(4.0, &[1.0, 1.0]).unwrap(),
            Command::Sccp { directions: Directions::Grid(8), n_levels: 16 },
        )),
        ("cutvol", "parabola") => Some(scan(BodySpec::paraboloid(&[1.0]).unwrap(), 1.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], false)),
        ("cutvol", "paraboloid") => Some(config(
            BodySpec::paraboloid(&[1.0, 1.0]).unwrap(),
            Command::Cutvol(CutTask::ParallelScan {
                k: 1.0,
                anchors: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0], vec![-0.5, 0.7]],
            }),
        )),
        ("cutvol", "hyperbola") => {
            Some(scan(BodySpec::hyperboloid_sheet(&[1.0]).unwrap(), 2.0, &[-1.5, -0.5, 0.0, 0.7, 2.0], true))
        }
        ("cutvol", "sphere-gradient") => Some(config(
            BodySpec::ball(3, 1.0).unwrap(),
            Command::Cutvol(CutTask::Gradient { cuts: Cuts::Random(10) }),
        )),
        ("cutvol", "quartic") => Some(scan(
            BodySpec::function_epigraph(2, Profile::Quartic).unwrap(),
            1.0,
            &[-2.0, -1.0, 0.0, 1.0, 2.0],
            false,
        )),
        ("cutvol", "cosh") => {
            Some(scan(BodySpec::function_epigraph(2, Profile::Cosh).unwrap(), 2.0, &[0.0, 0.5, 1.0], true))
        }
        ("cutvol", "floating") => Some(config(
            BodySpec::paraboloid(&[1.0]).unwrap(),
            Command::Cutvol(CutTask::Floating {
                mode: FloatingMode::Translate { lambda: 1.0, e: Vector::xy(0.0, 1.0) },
                n_normals: 9,
            }),
        )),
        ("asym", "fig1") => Some(config(
            BodySpec::function_epigraph(2, Profile::Exp).unwrap(),
            Command::Asym { radii: vec![1e1, 1e2, 1e3, 1e4] },
        )),
        ("asym", "hyperboloid") => Some(config(
            BodySpec::hyperboloid_sheet(&[1.0, 2.0]).unwrap(),
            Command::Asym { radii: vec![1e1, 1e2, 1e3, 1e4] },
        )),
        ("asym", "paraboloid") => Some(config(
            BodySpec::paraboloid(&[1.0, 1.0]).unwrap(),
            Command::Asym { radii: vec![1e1, 1e2, 1e3, 1e4] },
        )),
        _ => None,
    };
    found.ok_or_else(|| {
        let known = match command {
            "section" => SECTION,
            "sccp" => SCCP,
            "cutvol" => CUTVOL,
            _ => ASYM,
        };
        CliError::Config(format!("unknown {command} preset {name:?}; known: {}", known.join(", ")))
    })
}
