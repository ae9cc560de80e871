//! Kernel evaluation and analytic gradients with respect to the second argument.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::model::dot;

/// Kernel family and parameters.
///
/// The polynomial kernel is `(γ·xᵀy + c)^D`; `γ = 1` gives the plain
/// `(xᵀy + c)^D` form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum KernelSpec {
    Linear,
    Rbf {
        gamma: f64,
    },
    #[serde(alias = "poly")]
    Polynomial {
        degree: u32,
        gamma: f64,
        coef0: f64,
    },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Rbf { gamma } => {
                if gamma > 0.0 && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidKernel(format!("rbf gamma must be positive, got {gamma}")))
                }
            }
            KernelSpec::Polynomial { degree, gamma, coef0 } => {
                if degree < 1 {
                    return Err(Error::InvalidKernel("polynomial degree must be >= 1".into()));
                }
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidKernel(format!(
                        "polynomial gamma must be positive, got {gamma}"
                    )));
                }
                if !coef0.is_finite() {
                    return Err(Error::InvalidKernel("polynomial coef0 is not finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Rbf { .. } => "rbf",
            KernelSpec::Polynomial { .. } => "polynomial",
        }
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => dot(x, y),
            KernelSpec::Rbf { gamma } => (-gamma * sq_dist(x, y)).exp(),
            KernelSpec::Polynomial { degree, gamma, coef0 } => (gamma * dot(x, y) + coef0).powi(degree as i32),
        }
    }

    /// `out += scale · ∂K(x, y)/∂y`.
    pub(crate) fn add_grad_unchecked(&self, x: &[f64], y: &[f64], scale: f64, out: &mut [f64]) {
        match *self {
            KernelSpec::Linear => {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o += scale * xi;
                }
            }
            KernelSpec::Rbf { gamma } => {
                let k = (-gamma * sq_dist(x, y)).exp();
                let s = scale * 2.0 * gamma * k;
                for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
                    *o += s * (xi - yi);
                }
            }
            KernelSpec::Polynomial { degree, gamma, coef0 } => {
                let base = gamma * dot(x, y) + coef0;
                let s = scale * degree as f64 * gamma * base.powi(degree as i32 - 1);
                for (o, xi) in out.iter_mut().zip(x) {
                    *o += s * xi;
                }
            }
        }
    }
}

impl std::fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelSpec::Linear => write!(f, "linear"),
            KernelSpec::Rbf { gamma } => write!(f, "rbf(gamma={gamma})"),
            KernelSpec::Polynomial { degree, gamma, coef0 } => {
                write!(f, "polynomial(degree={degree}, gamma={gamma}, coef0={coef0})")
            }
        }
    }
}

/// `K(x, y)`.
pub fn kernel_eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    Ok(spec.eval_unchecked(x, y))
}

/// Gradient of `K(x, ·)` evaluated at `y`.
pub fn kernel_grad(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_dim(x.len(), y.len())?;
    let mut out = vec![0.0; x.len()];
    spec.add_grad_unchecked(x, y, 1.0, &mut out);
    Ok(out)
}

fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}
