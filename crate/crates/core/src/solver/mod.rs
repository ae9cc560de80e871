//! Minimum-weighted-distance actions onto the opposite margin.
//!
//! The linear case has an exact closed form which doubles as the oracle for
//! the iterative solver. The kernel case walks along the constraint surface
//! `f(x) + y0 = 0` with a projected Lagrangian gradient, restoring
//! feasibility after every step, starting from support vectors that already
//! sit on (or beyond) the target margin.

mod baseline;
mod descent;
mod kernel;
mod linear;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::model::{
    outside_soft_box, weighted_distance, FeatureVector, Label, ModelForm, StaticMask, SvmModel, WeightVector, SOFT_BOX,
};

pub use baseline::{nearest_support_vector, BASELINE_MARGIN_TOL};
pub use kernel::{constraint_gradient, constraint_value, kernel_action_gd, kernel_lagrangian_grad, kernel_lambda};
pub use linear::{initial_point_linear, linear_action_gd, linear_closed_form, linear_grad, linear_lambda};

/// Which gradient of the distance term the Lagrangian uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    /// `−2(w⊙w⊙[x0−x])`, the true gradient of the weighted distance.
    #[default]
    Exact,
    /// `−2(w⊙[x0−x])`, with unsquared weights. Descent then
    /// minimizes `Σ wᵢ(x0ᵢ−xᵢ)²`; reported distances still use `wᵢ²`.
    Unsquared,
}

impl GradientMode {
    /// Per-coordinate metric `mᵢ` so that the descent objective is `Σ mᵢ Δᵢ²`.
    pub(crate) fn metric(self, w: &[f64]) -> Vec<f64> {
        match self {
            GradientMode::Exact => w.iter().map(|x| x * x).collect(),
            GradientMode::Unsquared => w.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum StepRule {
    Fixed,
    #[serde(rename_all = "camelCase")]
    Backtracking {
        shrink: f64,
        sufficient_decrease: f64,
    },
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::Backtracking {
            shrink: 0.5,
            sufficient_decrease: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Initial (or fixed) step length.
    pub step_init: f64,
    pub step_rule: StepRule,
    /// Stop when the projected gradient norm or the iterate change falls
    /// below this.
    pub tol_step: f64,
    /// Feasibility kept during descent, `|f(x) + y0|`.
    pub tol_feas: f64,
    /// Feasibility required of a converged result.
    pub tol_feas_accept: f64,
    /// Restore feasibility every this many steps.
    pub project_every: usize,
    pub gradient: GradientMode,
    /// Number of margin seeds tried by the kernel solver.
    pub multi_start: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            step_init: 0.05,
            step_rule: StepRule::default(),
            tol_step: 1e-8,
            tol_feas: 1e-6,
            tol_feas_accept: 1e-3,
            project_every: 1,
            gradient: GradientMode::Exact,
            multi_start: 3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        use crate::error::Error::InvalidArgument;
        if self.max_iters == 0 {
            return Err(InvalidArgument("maxIters must be >= 1".into()));
        }
        if self.project_every == 0 || self.multi_start == 0 {
            return Err(InvalidArgument("projectEvery and multiStart must be >= 1".into()));
        }
        let positive = [self.step_init, self.tol_step, self.tol_feas, self.tol_feas_accept];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(InvalidArgument("step and tolerances must be positive".into()));
        }
        if let StepRule::Backtracking {
            shrink,
            sufficient_decrease,
        } = self.step_rule
        {
            if !(shrink > 0.0 && shrink < 1.0) || !(0.0..1.0).contains(&sufficient_decrease) {
                return Err(InvalidArgument(
                    "backtracking needs shrink in (0,1), decrease in [0,1)".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GradientDescent,
    ClosedForm,
    NearestSupportVector,
}

/// Recommended point and its diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionResult {
    pub xn: FeatureVector,
    /// `xn − x0`.
    pub action: Vec<f64>,
    /// Weighted distance between `x0` and `xn`.
    pub distance: f64,
    pub iterations: usize,
    /// `|f(xn) + y0|`.
    pub feasibility_residual: f64,
    pub converged: bool,
    pub method: Method,
    /// Closed-form optimum distance, for linear models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ActionResult {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        x0: &[f64],
        xn: Vec<f64>,
        w: &[f64],
        decision_value: f64,
        y0: Label,
        iterations: usize,
        converged: bool,
        method: Method,
    ) -> Result<Self> {
        let distance = weighted_distance(x0, &xn, w)?;
        let action = xn.iter().zip(x0).map(|(a, b)| a - b).collect();
        let warnings = outside_soft_box(&xn)
            .into_iter()
            .map(|i| format!("feature {i} = {:.4} lies outside [-{SOFT_BOX}, {SOFT_BOX}]", xn[i]))
            .collect();
        Ok(Self {
            xn: FeatureVector::new(xn)?,
            action,
            distance,
            iterations,
            feasibility_residual: (decision_value + y0.value()).abs(),
            converged,
            method,
            oracle_distance: None,
            warnings,
        })
    }
}

/// Solve for the cheapest point on the target margin of `model`.
///
/// Linear models (and linear-kernel expansions) fold static features into
/// the intercept and descend in the reduced space; the closed-form optimum
/// is attached as `oracle_distance`. Kernel models pin static coordinates.
pub fn solve_action(
    model: &SvmModel,
    x0: &[f64],
    y0: Label,
    w: &WeightVector,
    mask: &StaticMask,
    cfg: &SolverConfig,
) -> Result<ActionResult> {
    check_dim(model.dim(), x0.len())?;
    check_dim(model.dim(), w.len())?;
    mask.check_against(x0)?;
    cfg.validate()?;

    let linear = match &model.form {
        ModelForm::Linear(l) => Some(l.clone()),
        ModelForm::Kernel(k) => k.to_linear(),
    };
    match (linear, &model.form) {
        (Some(lin), _) => linear::solve_reduced(&lin, x0, y0, w, mask, cfg),
        (None, ModelForm::Kernel(k)) => kernel::solve_masked(k, x0, y0, w, mask, cfg),
        (None, ModelForm::Linear(_)) => unreachable!(),
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
