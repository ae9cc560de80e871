use crate::error::{check_dim, Result};
use crate::model::{dot, reduce_static_linear, weighted_distance, Label, LinearForm, StaticMask, WeightVector};

use super::descent::{descend, ConstrainedProblem};
use super::{ActionResult, GradientMode, Method, SolverConfig};

/// Multiplier that makes the Lagrangian gradient orthogonal to `v`:
/// `λ = 2vᵀ(m⊙[x0−xj]) / vᵀv` with `m = w⊙w` (exact) or `m = w` (unsquared).
pub fn linear_lambda(v: &[f64], w: &[f64], x0: &[f64], xj: &[f64], mode: GradientMode) -> Result<f64> {
    check_dims(v, w, x0, xj)?;
    let vv = LinearForm { v: v.to_vec(), b: 0.0 }.norm_sq()?;
    let m = mode.metric(w);
    Ok(lambda_with_metric(v, vv, &m, x0, xj))
}

/// `∇L = −2(m⊙[x0−xj]) + λv`, orthogonal to `v`.
pub fn linear_grad(v: &[f64], w: &[f64], x0: &[f64], xj: &[f64], mode: GradientMode) -> Result<Vec<f64>> {
    check_dims(v, w, x0, xj)?;
    let vv = LinearForm { v: v.to_vec(), b: 0.0 }.norm_sq()?;
    let m = mode.metric(w);
    Ok(grad_with_metric(v, vv, &m, x0, xj))
}

/// Unweighted orthogonal projection of `x0` onto `vᵀx + b + y0 = 0`.
pub fn initial_point_linear(model: &LinearForm, x0: &[f64], y0: Label) -> Result<Vec<f64>> {
    let vv = model.norm_sq()?;
    let c = model.decision_value(x0)? + y0.value();
    Ok(project(&model.v, vv, c, x0.to_vec()))
}

/// Exact minimizer of the weighted distance on the target hyperplane.
pub fn linear_closed_form(model: &LinearForm, x0: &[f64], y0: Label, w: &WeightVector) -> Result<ActionResult> {
    check_dim(model.dim(), w.len())?;
    let m = GradientMode::Exact.metric(w);
    let xn = closed_form_with_metric(model, x0, y0, &m)?;
    let f = model.decision_value(&xn)?;
    ActionResult::assemble(x0, xn, w, f, y0, 0, true, Method::ClosedForm)
}

/// Projected gradient descent on the target hyperplane, started from the
/// unweighted projection of `x0`.
pub fn linear_action_gd(
    model: &LinearForm,
    x0: &[f64],
    y0: Label,
    w: &WeightVector,
    cfg: &SolverConfig,
) -> Result<ActionResult> {
    solve_reduced(model, x0, y0, w, &StaticMask::empty(), cfg)
}

pub(crate) fn solve_reduced(
    model: &LinearForm,
    x0: &[f64],
    y0: Label,
    w: &WeightVector,
    mask: &StaticMask,
    cfg: &SolverConfig,
) -> Result<ActionResult> {
    check_dim(model.dim(), x0.len())?;
    check_dim(model.dim(), w.len())?;
    cfg.validate()?;
    let d = model.dim();
    let (reduced, rx0) = reduce_static_linear(model, x0, mask)?;
    let rw = w.select(&mask.actionable_indices(d));
    let metric = cfg.gradient.metric(&rw);

    let problem = LinearProblem::new(&reduced, &rx0, y0, &metric)?;
    let c0 = problem.constraint(&rx0);
    let (rxn, iterations, stopped) = if c0.abs() <= cfg.tol_feas {
        (rx0.clone(), 0, true)
    } else {
        let start = project(&reduced.v, problem.vv, c0, rx0.clone());
        let run = descend(&problem, start, cfg)?;
        (run.x, run.iterations, run.stopped)
    };

    let xn = mask.embed(&rxn, d);
    let f = model.decision_value(&xn)?;
    let residual = (f + y0.value()).abs();
    let converged = stopped && residual <= cfg.tol_feas_accept;
    let mut result = ActionResult::assemble(x0, xn, w, f, y0, iterations, converged, Method::GradientDescent)?;

    let oracle = mask.embed(&closed_form_with_metric(&reduced, &rx0, y0, &metric)?, d);
    result.oracle_distance = Some(weighted_distance(x0, &oracle, w)?);
    Ok(result)
}

struct LinearProblem<'a> {
    v: &'a [f64],
    b: f64,
    vv: f64,
    y0: f64,
    x0: &'a [f64],
    metric: &'a [f64],
}

impl<'a> LinearProblem<'a> {
    fn new(model: &'a LinearForm, x0: &'a [f64], y0: Label, metric: &'a [f64]) -> Result<Self> {
        Ok(Self {
            v: &model.v,
            b: model.b,
            vv: model.norm_sq()?,
            y0: y0.value(),
            x0,
            metric,
        })
    }

    fn constraint(&self, x: &[f64]) -> f64 {
        dot(self.v, x) + self.b + self.y0
    }
}

impl ConstrainedProblem for LinearProblem<'_> {
    fn objective(&self, x: &[f64]) -> f64 {
        metric_distance(self.x0, x, self.metric)
    }

    fn projected_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(grad_with_metric(self.v, self.vv, self.metric, self.x0, x))
    }

    fn restore(&self, x: Vec<f64>) -> Option<Vec<f64>> {
        let c = self.constraint(&x);
        Some(project(self.v, self.vv, c, x))
    }

    fn residual(&self, x: &[f64]) -> f64 {
        self.constraint(x).abs()
    }
}

pub(crate) fn metric_distance(x0: &[f64], x: &[f64], m: &[f64]) -> f64 {
    x0.iter().zip(x).zip(m).map(|((a, b), mi)| mi * (a - b) * (a - b)).sum()
}

fn lambda_with_metric(v: &[f64], vv: f64, m: &[f64], x0: &[f64], xj: &[f64]) -> f64 {
    let num: f64 = v
        .iter()
        .zip(m)
        .zip(x0.iter().zip(xj))
        .map(|((vi, mi), (a, b))| vi * mi * (a - b))
        .sum();
    2.0 * num / vv
}

fn grad_with_metric(v: &[f64], vv: f64, m: &[f64], x0: &[f64], xj: &[f64]) -> Vec<f64> {
    let lambda = lambda_with_metric(v, vv, m, x0, xj);
    (0..v.len())
        .map(|i| -2.0 * m[i] * (x0[i] - xj[i]) + lambda * v[i])
        .collect()
}

/// `x − (c / vᵀv) v`.
fn project(v: &[f64], vv: f64, c: f64, mut x: Vec<f64>) -> Vec<f64> {
    let s = c / vv;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= s * vi;
    }
    x
}

/// Stationarity `−2m⊙(x0−x) + λv = 0` gives `xᵢ = x0ᵢ − λvᵢ/(2mᵢ)` and
/// `λ = (vᵀx0 + b + y0) / Σ vᵢ²/(2mᵢ)`.
fn closed_form_with_metric(model: &LinearForm, x0: &[f64], y0: Label, m: &[f64]) -> Result<Vec<f64>> {
    model.norm_sq()?;
    let c0 = model.decision_value(x0)? + y0.value();
    let denom: f64 = model.v.iter().zip(m).map(|(v, mi)| v * v / (2.0 * mi)).sum();
    let lambda = c0 / denom;
    Ok(x0
        .iter()
        .zip(&model.v)
        .zip(m)
        .map(|((x, v), mi)| x - lambda * v / (2.0 * mi))
        .collect())
}

fn check_dims(v: &[f64], w: &[f64], x0: &[f64], xj: &[f64]) -> Result<()> {
    check_dim(v.len(), w.len())?;
    check_dim(v.len(), x0.len())?;
    check_dim(v.len(), xj.len())
}
