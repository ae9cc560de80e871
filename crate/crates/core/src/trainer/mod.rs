//! Synthetic datasets, unit-box normalization and SMO training.

mod datasets;
mod scaler;
mod smo;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::kernels::KernelSpec;
use crate::model::{default_feature_names, Label};

pub use datasets::{gen_circles, gen_linear, gen_moons, generate, SyntheticKind};
pub use scaler::{normalize_to_unit_box, FeatureScale, Scaler};
pub use smo::{train_svm, train_svm_with_report, TrainReport};

/// Labeled points sharing one feature space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Dataset {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub feature_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_seed: Option<u64>,
    /// Maps raw units to the normalized points, when normalization happened.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaler: Option<Scaler>,
}

impl Dataset {
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<Label>, feature_names: Option<Vec<String>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if points.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument("points have dimension 0".into()));
        }
        for p in &points {
            check_dim(dim, p.len())?;
            if let Some(index) = p.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        let feature_names = match feature_names {
            Some(names) => {
                check_dim(dim, names.len())?;
                names
            }
            None => default_feature_names(dim),
        };
        Ok(Self {
            points,
            labels,
            feature_names,
            generator_seed: None,
            scaler: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct TrainConfig {
    pub kernel: KernelSpec,
    pub box_c: f64,
    /// Stop when the maximal KKT violating pair gap drops below this.
    pub tol_kkt: f64,
    /// Iteration budget, in multiples of the training set size.
    pub max_passes: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            kernel: KernelSpec::Rbf { gamma: 1.0 },
            box_c: 10.0,
            tol_kkt: 1e-3,
            max_passes: 1000,
        }
    }
}
