use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

use super::Dataset;

/// Affine map of one feature from `[min, max]` onto `[−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureScale {
    pub min: f64,
    pub max: f64,
}

impl FeatureScale {
    /// Constant feature; every value maps to 0.
    pub fn is_degenerate(&self) -> bool {
        self.min == self.max
    }

    fn is_identity(&self) -> bool {
        self.min == -1.0 && self.max == 1.0
    }

    pub fn apply(&self, x: f64) -> f64 {
        if self.is_identity() {
            x
        } else if self.is_degenerate() {
            0.0
        } else {
            2.0 * (x - self.min) / (self.max - self.min) - 1.0
        }
    }

    pub fn invert(&self, u: f64) -> f64 {
        if self.is_identity() {
            u
        } else if self.is_degenerate() {
            self.min
        } else {
            self.min + (u + 1.0) * 0.5 * (self.max - self.min)
        }
    }

    /// Change in raw units for a change `du` on the normalized scale.
    pub fn invert_delta(&self, du: f64) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            du * 0.5 * (self.max - self.min)
        }
    }
}

/// Per-feature scaler onto the unit box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub features: Vec<FeatureScale>,
}

impl Scaler {
    pub fn fit(points: &[Vec<f64>]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyDataset)?;
        let mut features: Vec<FeatureScale> = first.iter().map(|&v| FeatureScale { min: v, max: v }).collect();
        for p in points {
            check_dim(features.len(), p.len())?;
            for (f, &v) in features.iter_mut().zip(p) {
                f.min = f.min.min(v);
                f.max = f.max.max(v);
            }
        }
        Ok(Self { features })
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    pub fn degenerate_features(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.features[i].is_degenerate()).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self.features.iter().zip(x).map(|(f, &v)| f.apply(v)).collect())
    }

    pub fn invert(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), u.len())?;
        Ok(self.features.iter().zip(u).map(|(f, &v)| f.invert(v)).collect())
    }
}

/// Rescale every feature onto `[−1, 1]`. Constant features map to 0 and
/// are reported by [`Scaler::degenerate_features`].
pub fn normalize_to_unit_box(dataset: &Dataset) -> Result<(Dataset, Scaler)> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let scaler = Scaler::fit(&dataset.points)?;
    let points = dataset
        .points
        .iter()
        .map(|p| scaler.apply(p))
        .collect::<Result<Vec<_>>>()?;
    let out = Dataset {
        points,
        labels: dataset.labels.clone(),
        feature_names: dataset.feature_names.clone(),
        generator_seed: dataset.generator_seed,
        scaler: Some(scaler.clone()),
    };
    Ok((out, scaler))
}
