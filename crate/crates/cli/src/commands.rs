//! The four experiments. Work items run in parallel; tables are assembled in
//! input order so identical configs give identical rows.

use rayon::prelude::*;
use serde_json::json;

use sccp_core::asymptotics::{blowdown_check, distance_trend, shell_distance, ShellDistance};
use sccp_core::centroids::{centroid_curve_stats, classify_lines, fit_line, sample_levels, LineFit};
use sccp_core::cutvol::{
    cut_gradient, cut_volume_with, floating_constancy, homothety_cut_estimates, parallel_cut_estimates, CutOptions,
    CutParam, VolumeEstimate,
};
use sccp_core::sections::{admissible_levels, section_diameter, section_stats_with, SectionOptions};
use sccp_core::{BodySpec, ConvexSet, ExtReal, GeomError, Point, Vector};

use crate::config::{CutTask, Cuts, Directions, ExperimentConfig, Levels};
use crate::report::{axis_names, max_of, spread_summary, Table};
use crate::CliError;

/// Default tolerances per command when the config gives none.
pub const SECTION_TOL: f64 = 1e-8;
pub const CLASSIFY_TOL: f64 = 1e-5;
pub const VOLUME_TOL: f64 = 1e-8;
pub const AUDIT_TOL: f64 = 1e-4;

type Outcome = (Table, serde_json::Value);

/// A resolved work item, or the input that could not be turned into one.
type Item = Result<(Vector, f64), (Vec<f64>, GeomError)>;

fn cols(parts: &[&[String]]) -> Vec<String> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn counts(table: &Table) -> serde_json::Value {
    json!({ "rows": table.rows.len(), "failed": table.diagnostics.len() })
}

pub fn cmd_section(cfg: &ExperimentConfig, directions: &Directions, levels: &Levels) -> Outcome {
    let body = &cfg.body;
    let dim = body.dim();
    let opts = SectionOptions { rel_tol: cfg.tol_or(SECTION_TOL), ..SectionOptions::default() };
    let mut items: Vec<Item> = Vec::new();
    for u in cfg.resolve_directions(directions) {
        match levels {
            Levels::List(ts) => items.extend(ts.iter().map(|&t| Ok((u, t)))),
            Levels::Auto(n) => match admissible_levels(body, &u).and_then(|i| sample_levels(&i, *n)) {
                Ok(ts) => items.extend(ts.into_iter().map(|t| Ok((u, t)))),
                Err(e) => items.push(Err((u.as_slice().to_vec(), e))),
            },
        }
    }
    let results: Vec<_> = items
        .par_iter()
        .map(|item| {
            let (u, t) = item.as_ref().map_err(Clone::clone)?;
            let input = [u.as_slice(), &[*t]].concat();
            section_stats_with(body, u, *t, &opts).map_err(|e| (input, e))
        })
        .collect();
    let mut table = Table::new(cols(&[
        &axis_names("u", dim),
        &names(&["t", "measure"]),
        &axis_names("c", dim),
        &names(&["err", "n_evals"]),
    ]));
    let mut centroid_err: f64 = 0.0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => {
                centroid_err = centroid_err.max(s.centroid_err);
                table.push(
                    [s.u.as_slice(), &[s.t, s.measure], s.centroid.as_slice(), &[s.err_estimate, s.n_evals as f64]].concat(),
                );
            }
            Err((input, e)) => table.fail(i, input, e),
        }
    }
    let mut summary = counts(&table);
    summary["max_err"] = json!(max_of(&table.column("err")));
    summary["max_centroid_err"] = json!(centroid_err);
    (table, summary)
}

fn line_with_err(body: &BodySpec, u: &Vector, n_levels: usize) -> Result<(LineFit, f64), GeomError> {
    let levels = sample_levels(&admissible_levels(body, u)?, n_levels)?;
    let stats = centroid_curve_stats(body, u, &levels)?;
    let err = stats.iter().map(|s| s.centroid_err).fold(0.0, f64::max);
    let points: Vec<Point> = stats.iter().map(|s| s.centroid).collect();
    Ok((fit_line(&points)?, err))
}

pub fn cmd_sccp(cfg: &ExperimentConfig, directions: &Directions, n_levels: usize) -> Outcome {
    let body = &cfg.body;
    let dim = body.dim();
    let dirs = cfg.resolve_directions(directions);
    let results: Vec<_> = dirs.par_iter().map(|u| line_with_err(body, u, n_levels)).collect();
    let mut table = Table::new(cols(&[
        &axis_names("u", dim),
        &axis_names("b", dim),
        &axis_names("d", dim),
        &names(&["residual_rms", "residual_norm", "n_points", "err"]),
    ]));
    let mut lines = Vec::new();
    for (i, (u, r)) in dirs.iter().zip(results).enumerate() {
        match r {
            Ok((fit, err)) => {
                table.push(
                    [
                        u.as_slice(),
                        fit.base.as_slice(),
                        fit.dir.as_slice(),
                        &[fit.residual_rms, fit.residual_norm, fit.n_points as f64, err],
                    ]
                    .concat(),
                );
                lines.push(fit);
            }
            Err(e) => table.fail(i, u.as_slice().to_vec(), e),
        }
    }
    let tol = cfg.tol_or(CLASSIFY_TOL);
    let mut summary = counts(&table);
    summary["tol"] = json!(tol);
    summary["max_residual_norm"] = json!(max_of(&table.column("residual_norm")));
    summary["verdict"] = if lines.len() >= 2 {
        match classify_lines(&lines, tol) {
            Ok(v) => json!(v),
            Err(e) => json!({ "error": e.to_string() }),
        }
    } else {
        json!({ "error": "fewer than two centroid lines" })
    };
    (table, summary)
}

/// Translation moving the body strictly above the origin along the last axis when
/// the origin lies in it; zero otherwise.
pub fn origin_shift(body: &BodySpec) -> Result<Vector, CliError> {
    let d = body.dim();
    if body.defining_function(&Vector::zeros(d)) > 0.0 {
        return Ok(Vector::zeros(d));
    }
    let down = -Vector::basis(d, d - 1);
    match body.support(&down) {
        // Lowest point of the body ends at height 1.
        ExtReal::Finite(h) => Ok(Vector::basis(d, d - 1) * (h + 1.0)),
        ExtReal::PosInfinity => Err(CliError::Config("body contains the origin and cannot be shifted off it".into())),
    }
}

/// Cut through the body with the origin on the bounded side.
fn random_cut<R: rand::Rng>(rng: &mut R, body: &BodySpec) -> Vector {
    let d = body.dim();
    loop {
        let dir = if body.is_bounded() {
            let mut v = Vector::zeros(d);
            for i in 0..d {
                v[i] = rng.random_range(-1.0..1.0);
            }
            if !(v.norm() > 0.1 && v.norm() <= 1.0) {
                continue;
            }
            v.normalize()
        } else {
            -body.random_admissible_normal(rng)
        };
        let Some(lo) = body.support(&-dir).finite().map(|h| -h) else { continue };
        let base = lo.max(0.0);
        let s = match body.support(&dir) {
            ExtReal::Finite(hi) if hi > base => base + (hi - base) * rng.random_range(0.1..0.9),
            ExtReal::Finite(_) => continue,
            ExtReal::PosInfinity => base + rng.random_range(0.2..3.0),
        };
        return dir / s;
    }
}

/// Boundary point above base coordinates `x'` (absolute).
fn graph_point(body: &BodySpec, base: &[f64]) -> Result<Point, GeomError> {
    let d = body.dim();
    let t = body.translation();
    let local: Vec<f64> = base.iter().zip(t.as_slice()).map(|(x, s)| x - s).collect();
    let h = body.height(&local).ok_or(GeomError::NotGraphLike)?;
    let mut p = Vector::zeros(d);
    for (i, x) in base.iter().enumerate() {
        p[i] = *x;
    }
    p[d - 1] = h + t.last();
    Ok(p)
}

pub fn cmd_cutvol(cfg: &ExperimentConfig, task: &CutTask) -> Result<Outcome, CliError> {
    let body = &cfg.body;
    let dim = body.dim();
    let outcome = match task {
        CutTask::Volume { cuts } | CutTask::Gradient { cuts } => {
            let shift = origin_shift(body)?;
            let shifted = body.clone().translated(shift).expect("finite shift");
            let vectors: Vec<Vector> = match cuts {
                Cuts::List(v) => v.iter().map(|c| Vector::from_slice(c).expect("validated")).collect(),
                Cuts::Random(n) => {
                    let mut rng = cfg.rng();
                    (0..*n).map(|_| random_cut(&mut rng, &shifted)).collect()
                }
            };
            let (table, mut summary) = if let CutTask::Volume { .. } = task {
                volume_rows(cfg, &shifted, &vectors)
            } else {
                gradient_rows(cfg, &shifted, &shift, &vectors)
            };
            summary["shift"] = json!(shift);
            (table, summary)
        }
        CutTask::ParallelScan { k, anchors } | CutTask::HomothetyScan { k, anchors } => {
            let parallel = matches!(task, CutTask::ParallelScan { .. });
            let results: Vec<Result<(Point, VolumeEstimate), GeomError>> = anchors
                .par_iter()
                .map(|base| {
                    let p = graph_point(body, base)?;
                    let v = if parallel {
                        parallel_cut_estimates(body, *k, &[p])?
                    } else {
                        homothety_cut_estimates(body, *k, &[p])?
                    };
                    Ok((p, v[0]))
                })
                .collect();
            let mut table = Table::new(cols(&[&axis_names("", dim), &names(&["value", "err"])]));
            for (i, (base, r)) in anchors.iter().zip(results).enumerate() {
                match r {
                    Ok((p, v)) => table.push([p.as_slice(), &[v.value.to_f64(), v.err]].concat()),
                    Err(e) => table.fail(i, base.clone(), e),
                }
            }
            let summary = constancy_summary(cfg, &table);
            (table, summary)
        }
        CutTask::Floating { mode, n_normals } => {
            let mut table = Table::new(cols(&[&axis_names("u", dim), &names(&["value", "err"])]));
            match floating_constancy(body, *mode, *n_normals) {
                Ok(stats) => {
                    for ((u, v), e) in stats.normals.iter().zip(&stats.values).zip(&stats.errs) {
                        table.push([u.as_slice(), &[*v, *e]].concat());
                    }
                }
                Err(e) => table.fail(0, Vec::new(), e),
            }
            let summary = constancy_summary(cfg, &table);
            (table, summary)
        }
    };
    let (table, mut summary) = outcome;
    summary["task"] = json!(task.name());
    Ok((table, summary))
}

fn constancy_summary(cfg: &ExperimentConfig, table: &Table) -> serde_json::Value {
    let tol = cfg.tol_or(AUDIT_TOL);
    let values = table.column("value");
    let mut summary = counts(table);
    summary["tol"] = json!(tol);
    summary["max_err"] = json!(max_of(&table.column("err")));
    let spread = spread_summary(&values);
    summary["constant"] = match spread.get("rel_spread").and_then(|s| s.as_f64()) {
        Some(s) => json!(s <= tol),
        None => serde_json::Value::Null,
    };
    summary["spread"] = spread;
    summary
}

fn volume_rows(cfg: &ExperimentConfig, body: &BodySpec, vectors: &[Vector]) -> Outcome {
    let dim = body.dim();
    let opts = CutOptions { rel_tol: cfg.tol_or(VOLUME_TOL), ..CutOptions::default() };
    let results: Vec<_> =
        vectors.par_iter().map(|a| CutParam::new(*a).map(|cut| cut_volume_with(body, &cut, &opts))).collect();
    let mut table = Table::new(cols(&[&axis_names("a", dim), &names(&["V", "err", "n_evals"])]));
    for (i, (a, r)) in vectors.iter().zip(results).enumerate() {
        match r {
            Ok(v) => table.push([a.as_slice(), &[v.value.to_f64(), v.err, v.n_evals as f64]].concat()),
            Err(e) => table.fail(i, a.as_slice().to_vec(), e),
        }
    }
    let mut summary = counts(&table);
    summary["max_err"] = json!(max_of(&table.column("err")));
    (table, summary)
}

fn gradient_rows(cfg: &ExperimentConfig, body: &BodySpec, shift: &Vector, vectors: &[Vector]) -> Outcome {
    let dim = body.dim();
    let results: Vec<_> = vectors
        .par_iter()
        .map(|a| {
            let cut = CutParam::new(*a)?;
            let r = cut_gradient(body, &cut)?;
            let diameter = section_diameter(body, &cut.normal(), cut.level())?;
            Ok::<_, GeomError>((r, diameter))
        })
        .collect();
    let mut table = Table::new(cols(&[
        &axis_names("a", dim),
        &names(&["V"]),
        &axis_names("g", dim),
        &names(&["lambda"]),
        &axis_names("c", dim),
        &names(&["measure", "measure_from_gradient", "identity_residual", "moment_residual", "diameter", "err"]),
    ]));
    let tol = cfg.tol_or(AUDIT_TOL);
    let (mut worst_identity, mut worst_measure, mut passed) = (0.0f64, 0.0f64, 0usize);
    for (i, (a, r)) in vectors.iter().zip(results).enumerate() {
        match r {
            Ok((g, diameter)) => {
                let identity = g.identity_residual / diameter;
                let measure = (g.measure_from_gradient / g.section_measure - 1.0).abs();
                worst_identity = worst_identity.max(identity);
                worst_measure = worst_measure.max(measure);
                passed += usize::from(identity <= tol && measure <= tol);
                // Centroids go back to the caller's frame.
                let centroid = g.centroid - *shift;
                table.push(
                    [
                        a.as_slice(),
                        &[g.volume],
                        g.grad.as_slice(),
                        &[g.lambda],
                        centroid.as_slice(),
                        &[
                            g.section_measure,
                            g.measure_from_gradient,
                            g.identity_residual,
                            g.moment_residual,
                            diameter,
                            g.err_estimate,
                        ],
                    ]
                    .concat(),
                );
            }
            Err(e) => table.fail(i, a.as_slice().to_vec(), e),
        }
    }
    let mut summary = counts(&table);
    summary["tol"] = json!(tol);
    summary["max_identity_residual_over_diameter"] = json!(worst_identity);
    summary["max_measure_mismatch"] = json!(worst_measure);
    summary["passed"] = json!(passed);
    (table, summary)
}

pub fn cmd_asym(cfg: &ExperimentConfig, radii: &[f64]) -> Outcome {
    let body = &cfg.body;
    let cone = body.recession_cone();
    let results: Vec<Result<(ShellDistance, f64), GeomError>> = radii
        .par_iter()
        .map(|&r| Ok((shell_distance(body, &cone, r)?, blowdown_check(body, r)?)))
        .collect();
    let mut table = Table::new(names(&["R", "d_asym", "d_blowdown", "err"]));
    let mut shells = Vec::new();
    for (i, (r, res)) in radii.iter().zip(results).enumerate() {
        match res {
            Ok((s, blow)) => {
                table.push(vec![s.r, s.d_asym, blow, s.err]);
                shells.push(s);
            }
            Err(e) => table.fail(i, vec![*r], e),
        }
    }
    let mut summary = counts(&table);
    summary["cone"] = json!(cone);
    summary["one_sided"] =
        shells.iter().map(|s| json!({ "R": s.r, "body_to_cone": s.body_to_cone, "cone_to_body": s.cone_to_body })).collect();
    let spans = radii.len() >= 4 && radii[radii.len() - 1] >= 100.0 * radii[0];
    summary["verdict"] = if !table.diagnostics.is_empty() {
        json!(null)
    } else if !spans {
        summary["verdict_note"] = json!("a verdict needs at least 4 radii spanning two decades");
        json!(null)
    } else {
        distance_trend(&shells).map_or(json!(null), |v| json!(v))
    };
    (table, summary)
}
