//! Paired comparison of the descent solver against the nearest support
//! vector baseline over the undesirable points of a dataset.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::model::{Label, ModelForm, StaticMask, SvmModel, WeightVector};
use crate::solver::{nearest_support_vector, solve_action, SolverConfig};
use crate::trainer::Dataset;

use super::interpret::undesirable_points;
use super::risk::{risk_feature_positions, risk_score_vector};
use super::stats::{mean, median, sign_test};

/// Per-point outcome in dataset order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PointComparison {
    pub index: usize,
    pub dist_gd: f64,
    pub dist_baseline: f64,
    pub iterations: usize,
    pub feasibility_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_before: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_gd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_baseline: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonReport {
    /// Points where both methods produced an answer.
    pub n_points: usize,
    pub mean_dist_gd: f64,
    pub mean_dist_baseline: f64,
    pub median_dist_gd: f64,
    pub median_dist_baseline: f64,
    pub sign_test_p: f64,
    /// Points where the descent answer is strictly closer.
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_risk_decreased_gd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_risk_decreased_baseline: Option<f64>,
    /// Mean |action| per feature, descent then baseline.
    pub mean_abs_action_gd: Vec<f64>,
    pub mean_abs_action_baseline: Vec<f64>,
    pub feature_names: Vec<String>,
    /// Undesirable points skipped because either method failed.
    pub unsolved: usize,
    pub low_power: bool,
    pub points: Vec<PointComparison>,
}

/// Relative slack under which two distances count as a tie.
const TIE_TOL: f64 = 1e-12;

/// Run both methods on every point labeled and predicted +1.
///
/// Risk fractions are filled in when the dataset carries a scaler and all
/// ten risk features; points are mapped back to raw units first.
pub fn compare_solutions(
    model: &SvmModel,
    dataset: &Dataset,
    w: &WeightVector,
    cfg: &SolverConfig,
) -> Result<ComparisonReport> {
    let kernel = match &model.form {
        ModelForm::Kernel(k) => k,
        ModelForm::Linear(_) => {
            return Err(Error::InvalidModel(
                "the baseline needs support vectors; linear-form models carry none".into(),
            ))
        }
    };
    check_dim(model.dim(), w.len())?;
    let idx = undesirable_points(model, dataset)?;
    if idx.is_empty() {
        return Err(Error::NoUndesirablePoints);
    }
    let mask = StaticMask::empty();
    let y0 = Label::Positive;

    let risk = match (&dataset.scaler, risk_feature_positions(&dataset.feature_names)) {
        (Some(s), Some(_)) => Some(s),
        _ => None,
    };
    let raw_risk = |x: &[f64]| -> Option<f64> {
        let s = risk?;
        let raw = s.invert(x).ok()?;
        risk_score_vector(&dataset.feature_names, &raw).ok()
    };

    type Solved = (PointComparison, Vec<f64>, Vec<f64>);
    let solved: Vec<Option<Solved>> = idx
        .par_iter()
        .map(|&i| {
            let x0 = &dataset.points[i];
            let gd = solve_action(model, x0, y0, w, &mask, cfg)
                .ok()
                .filter(|r| r.converged)?;
            let base = nearest_support_vector(kernel, x0, y0, w).ok()?;
            let row = PointComparison {
                index: i,
                dist_gd: gd.distance,
                dist_baseline: base.distance,
                iterations: gd.iterations,
                feasibility_residual: gd.feasibility_residual,
                risk_before: raw_risk(x0),
                risk_gd: raw_risk(&gd.xn),
                risk_baseline: raw_risk(&base.xn),
            };
            Some((row, gd.action, base.action))
        })
        .collect();
    let unsolved = solved.iter().filter(|s| s.is_none()).count();
    let solved: Vec<Solved> = solved.into_iter().flatten().collect();
    Ok(summarize(solved, unsolved, model.dim(), names_for(model, dataset)))
}

fn names_for(model: &SvmModel, dataset: &Dataset) -> Vec<String> {
    if dataset.feature_names.len() == model.dim() {
        dataset.feature_names.clone()
    } else {
        model.feature_names.clone()
    }
}

fn summarize(
    solved: Vec<(PointComparison, Vec<f64>, Vec<f64>)>,
    unsolved: usize,
    d: usize,
    feature_names: Vec<String>,
) -> ComparisonReport {
    let n = solved.len();
    let dg: Vec<f64> = solved.iter().map(|s| s.0.dist_gd).collect();
    let db: Vec<f64> = solved.iter().map(|s| s.0.dist_baseline).collect();
    let (mut wins, mut losses, mut ties) = (0, 0, 0);
    for (a, b) in dg.iter().zip(&db) {
        let tol = TIE_TOL * b.abs().max(1.0);
        if a < &(b - tol) {
            wins += 1;
        } else if a > &(b + tol) {
            losses += 1;
        } else {
            ties += 1;
        }
    }

    let frac = |pick: fn(&PointComparison) -> Option<f64>| -> Option<f64> {
        if n == 0 {
            return None;
        }
        let mut dec = 0usize;
        for (row, _, _) in &solved {
            if pick(row)? < row.risk_before? {
                dec += 1;
            }
        }
        Some(dec as f64 / n as f64)
    };
    let mean_abs = |k: usize| -> Vec<f64> {
        (0..d)
            .map(|j| {
                if n == 0 {
                    0.0
                } else {
                    solved
                        .iter()
                        .map(|s| if k == 0 { s.1[j].abs() } else { s.2[j].abs() })
                        .sum::<f64>()
                        / n as f64
                }
            })
            .collect()
    };

    ComparisonReport {
        n_points: n,
        mean_dist_gd: mean(&dg),
        mean_dist_baseline: mean(&db),
        median_dist_gd: median(&dg),
        median_dist_baseline: median(&db),
        sign_test_p: sign_test(wins, losses),
        wins,
        losses,
        ties,
        frac_risk_decreased_gd: frac(|r| r.risk_gd),
        frac_risk_decreased_baseline: frac(|r| r.risk_baseline),
        mean_abs_action_gd: mean_abs(0),
        mean_abs_action_baseline: mean_abs(1),
        feature_names,
        unsolved,
        low_power: n < 10,
        points: solved.into_iter().map(|s| s.0).collect(),
    }
}

impl ComparisonReport {
    /// Per-point rows as CSV, one line per solved point.
    pub fn write_points_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(out);
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        wr.write_record([
            "index",
            "dist_gd",
            "dist_baseline",
            "iterations",
            "feasibility_residual",
            "risk_before",
            "risk_gd",
            "risk_baseline",
        ])
        .map_err(csv_err)?;
        for p in &self.points {
            wr.write_record([
                p.index.to_string(),
                p.dist_gd.to_string(),
                p.dist_baseline.to_string(),
                p.iterations.to_string(),
                p.feasibility_residual.to_string(),
                opt(p.risk_before),
                opt(p.risk_gd),
                opt(p.risk_baseline),
            ])
            .map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.into())
}
