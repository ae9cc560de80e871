//! Versioned JSON model document. Reals are written in shortest
//! round-trip form and parsed exactly, so save/load is bit-lossless.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::kernels::KernelSpec;
use crate::model::{KernelForm, LinearForm, ModelForm, SvmModel};
use crate::trainer::Scaler;

pub const SCHEMA_VERSION: u32 = 1;

/// A model plus what the tools need around it.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelDocument {
    pub model: SvmModel,
    /// Raw-unit scaler the model's inputs were normalized with.
    pub scaler: Option<Scaler>,
    pub weight_presets: BTreeMap<String, Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Wire {
    schema_version: u32,
    model: WireModel,
    feature_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scaler: Option<Scaler>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    weight_presets: BTreeMap<String, Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
enum WireModel {
    Linear {
        v: Vec<f64>,
        b: f64,
    },
    #[serde(rename_all = "camelCase")]
    Kernel {
        kernel: KernelSpec,
        support_vectors: Vec<Vec<f64>>,
        dual_coefs: Vec<f64>,
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        box_c: Option<f64>,
    },
}

impl ModelDocument {
    pub fn new(model: SvmModel) -> Self {
        Self {
            model,
            scaler: None,
            weight_presets: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let model = match &self.model.form {
            ModelForm::Linear(l) => WireModel::Linear { v: l.v.clone(), b: l.b },
            ModelForm::Kernel(k) => WireModel::Kernel {
                kernel: k.kernel,
                support_vectors: k.support_vectors().map(<[f64]>::to_vec).collect(),
                dual_coefs: k.dual_coefs().to_vec(),
                b: k.b,
                box_c: k.box_c,
            },
        };
        let wire = Wire {
            schema_version: SCHEMA_VERSION,
            model,
            feature_names: self.model.feature_names.clone(),
            scaler: self.scaler.clone(),
            weight_presets: self.weight_presets.clone(),
        };
        Ok(serde_json::to_string_pretty(&wire)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: Wire = serde_json::from_str(text)?;
        if wire.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidModel(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                wire.schema_version
            )));
        }
        let model = match wire.model {
            WireModel::Linear { v, b } => SvmModel::linear(LinearForm::new(v, b)?),
            WireModel::Kernel {
                kernel,
                support_vectors,
                dual_coefs,
                b,
                box_c,
            } => SvmModel::kernel(KernelForm::new(support_vectors, dual_coefs, b, kernel, box_c)?),
        };
        let model = model.with_feature_names(wire.feature_names)?;
        if let Some(s) = &wire.scaler {
            check_dim(model.dim(), s.dim())?;
        }
        for w in wire.weight_presets.values() {
            check_dim(model.dim(), w.len())?;
        }
        Ok(Self {
            model,
            scaler: wire.scaler,
            weight_presets: wire.weight_presets,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
