use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::model::{Label, StaticMask, SvmModel, WeightVector};
use crate::solver::{solve_action, SolverConfig};
use crate::trainer::Dataset;

use super::stats::{mean, median};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InterpretabilityRow {
    pub feature_name: String,
    pub mean_amplitude: f64,
    pub median_amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InterpretabilityReport {
    /// Sorted by mean amplitude, largest first.
    pub rows: Vec<InterpretabilityRow>,
    pub solved: usize,
    /// Undesirable points whose solve failed or did not converge.
    pub unsolved: usize,
    /// Fewer than 10 solved points.
    pub low_power: bool,
}

/// Indices of points labeled +1 that the model also predicts as +1.
pub(crate) fn undesirable_points(model: &SvmModel, dataset: &Dataset) -> Result<Vec<usize>> {
    check_dim(model.dim(), dataset.dim())?;
    let mut out = Vec::new();
    for (i, (p, &l)) in dataset.points.iter().zip(&dataset.labels).enumerate() {
        if l == Label::Positive && model.predict(p)? == Label::Positive {
            out.push(i);
        }
    }
    Ok(out)
}

/// Rank features by how far they move when every undesirable point is sent
/// to the opposite margin under uniform weights. Amplitudes are measured on
/// the normalized feature scale, so features are comparable.
pub fn interpretability_ranking(
    model: &SvmModel,
    dataset: &Dataset,
    cfg: &SolverConfig,
) -> Result<InterpretabilityReport> {
    let idx = undesirable_points(model, dataset)?;
    if idx.is_empty() {
        return Err(Error::NoUndesirablePoints);
    }
    let d = model.dim();
    let w = WeightVector::ones(d);
    let mask = StaticMask::empty();
    let actions: Vec<Option<Vec<f64>>> = idx
        .par_iter()
        .map(|&i| {
            solve_action(model, &dataset.points[i], Label::Positive, &w, &mask, cfg)
                .ok()
                .filter(|r| r.converged)
                .map(|r| r.action)
        })
        .collect();
    let solved: Vec<&Vec<f64>> = actions.iter().flatten().collect();
    let unsolved = actions.len() - solved.len();

    let names = if dataset.feature_names.len() == d {
        &dataset.feature_names
    } else {
        &model.feature_names
    };
    let mut rows: Vec<InterpretabilityRow> = (0..d)
        .map(|j| {
            let amps: Vec<f64> = solved.iter().map(|a| a[j].abs()).collect();
            InterpretabilityRow {
                feature_name: names[j].clone(),
                mean_amplitude: if amps.is_empty() { 0.0 } else { mean(&amps) },
                median_amplitude: if amps.is_empty() { 0.0 } else { median(&amps) },
            }
        })
        .collect();
    // stable: ties keep feature order
    rows.sort_by(|a, b| b.mean_amplitude.total_cmp(&a.mean_amplitude));
    Ok(InterpretabilityReport {
        rows,
        solved: solved.len(),
        unsolved,
        low_power: solved.len() < 10,
    })
}
