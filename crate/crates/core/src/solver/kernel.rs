use crate::error::{check_dim, Error, Result};
use crate::model::{weighted_distance_unchecked, KernelForm, Label, StaticMask, WeightVector};

use super::descent::{descend, ConstrainedProblem};
use super::linear::metric_distance;
use super::{ActionResult, GradientMode, Method, SolverConfig};

/// `f(x) + y0`; zero on the target margin.
pub fn constraint_value(model: &KernelForm, x: &[f64], y0: Label) -> Result<f64> {
    Ok(model.decision_value(x)? + y0.value())
}

/// `Σ (αᵢyᵢ) ∂K(xᵢ, x)/∂x`.
pub fn constraint_gradient(model: &KernelForm, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(model.dim(), x.len())?;
    Ok(gradient_unchecked(model, x))
}

/// `λ = 2gᵀ(m⊙[x0−xj]) / gᵀg` where `g` is the constraint gradient at `xj`.
pub fn kernel_lambda(model: &KernelForm, w: &[f64], x0: &[f64], xj: &[f64], mode: GradientMode) -> Result<f64> {
    check_dim(model.dim(), w.len())?;
    check_dim(model.dim(), x0.len())?;
    let g = constraint_gradient(model, xj)?;
    let gg: f64 = g.iter().map(|v| v * v).sum();
    if gg == 0.0 {
        return Err(Error::StationaryConstraint {
            residual: model.decision_value_unchecked(xj).abs(),
        });
    }
    let m = mode.metric(w);
    let num: f64 = (0..g.len()).map(|i| g[i] * m[i] * (x0[i] - xj[i])).sum();
    Ok(2.0 * num / gg)
}

/// `∇L = −2(m⊙[x0−xj]) + λg` with `λ` from [`kernel_lambda`]; orthogonal to
/// the constraint gradient `g` at `xj`.
pub fn kernel_lagrangian_grad(
    model: &KernelForm,
    w: &[f64],
    x0: &[f64],
    xj: &[f64],
    mode: GradientMode,
) -> Result<Vec<f64>> {
    let lambda = kernel_lambda(model, w, x0, xj, mode)?;
    let g = gradient_unchecked(model, xj);
    let m = mode.metric(w);
    Ok((0..g.len())
        .map(|i| -2.0 * m[i] * (x0[i] - xj[i]) + lambda * g[i])
        .collect())
}

/// Descend along the target margin of a kernel model, seeded from the
/// nearest support vectors that lie on or beyond it.
pub fn kernel_action_gd(
    model: &KernelForm,
    x0: &[f64],
    y0: Label,
    w: &WeightVector,
    cfg: &SolverConfig,
) -> Result<ActionResult> {
    solve_masked(model, x0, y0, w, &StaticMask::empty(), cfg)
}

pub(crate) fn solve_masked(
    model: &KernelForm,
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

    let d = model.dim();
    let pinned: Vec<bool> = (0..d).map(|i| mask.contains(i)).collect();
    let metric = cfg.gradient.metric(w);
    let problem = KernelProblem {
        model,
        x0,
        y0: y0.value(),
        metric: &metric,
        pinned: &pinned,
        tol_feas: cfg.tol_feas,
    };

    let c0 = problem.constraint(x0);
    if c0.abs() <= cfg.tol_feas {
        return ActionResult::assemble(
            x0,
            x0.to_vec(),
            w,
            c0 - y0.value(),
            y0,
            0,
            true,
            Method::GradientDescent,
        );
    }

    let seeds = margin_seeds(&problem, w, cfg.multi_start);
    let mut starts: Vec<Vec<f64>> = seeds.into_iter().filter_map(|s| problem.feasible_start(s)).collect();
    if starts.is_empty() {
        // pinned coordinates can leave every seed off the reachable slice
        starts = problem.ray_starts(w, cfg.multi_start);
    }
    if starts.is_empty() {
        return Err(Error::TargetUnreachable(format!(
            "no point on the {} margin was found along the searched directions",
            y0.opposite()
        )));
    }

    let mut best: Option<(f64, ActionResult)> = None;
    let mut last_err = None;
    for start in starts {
        let run = match descend(&problem, start, cfg) {
            Ok(run) => run,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let f = model.decision_value_unchecked(&run.x);
        let residual = (f + y0.value()).abs();
        let converged = run.stopped && residual <= cfg.tol_feas_accept;
        let result = ActionResult::assemble(x0, run.x, w, f, y0, run.iterations, converged, Method::GradientDescent)?;
        let better = match &best {
            None => true,
            Some((_, b)) => {
                (result.converged && !b.converged) || (result.converged == b.converged && result.distance < b.distance)
            }
        };
        if better {
            best = Some((result.distance, result));
        }
    }
    match (best, last_err) {
        (Some((_, r)), _) => Ok(r),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("at least one start was descended"),
    }
}

/// Seed points, nearest first under the weighted distance: support vectors
/// on or beyond the target margin, or failing that, any on the target side.
fn margin_seeds(problem: &KernelProblem<'_>, w: &[f64], k: usize) -> Vec<Vec<f64>> {
    let model = problem.model;
    let target = -problem.y0;
    let mut on_margin = Vec::new();
    let mut target_side = Vec::new();
    for (i, sv) in model.support_vectors().enumerate() {
        let q = target * model.decision_value_unchecked(sv);
        let seed = problem.pin(sv);
        let dist = weighted_distance_unchecked(problem.x0, &seed, w);
        if q >= 1.0 - super::BASELINE_MARGIN_TOL {
            on_margin.push((dist, i, seed));
        } else if q > 0.0 {
            target_side.push((dist, i, seed));
        }
    }
    let mut pool = if on_margin.is_empty() { target_side } else { on_margin };
    pool.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    pool.into_iter().take(k).map(|(_, _, s)| s).collect()
}

struct KernelProblem<'a> {
    model: &'a KernelForm,
    x0: &'a [f64],
    y0: f64,
    metric: &'a [f64],
    pinned: &'a [bool],
    tol_feas: f64,
}

impl KernelProblem<'_> {
    fn constraint(&self, x: &[f64]) -> f64 {
        self.model.decision_value_unchecked(x) + self.y0
    }

    fn masked_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = gradient_unchecked(self.model, x);
        for (gi, &p) in g.iter_mut().zip(self.pinned) {
            if p {
                *gi = 0.0;
            }
        }
        g
    }

    fn pin(&self, sv: &[f64]) -> Vec<f64> {
        sv.iter()
            .zip(self.x0)
            .zip(self.pinned)
            .map(|((&s, &x), &p)| if p { x } else { s })
            .collect()
    }

    fn tol_tight(&self) -> f64 {
        self.tol_feas * 1e-4
    }

    /// Turn a seed into a feasible starting point: use it as is when it sits
    /// on the margin, else bisect along the ray from `x0` through it, else
    /// Newton-project it.
    fn feasible_start(&self, seed: Vec<f64>) -> Option<Vec<f64>> {
        let cs = self.constraint(&seed);
        if cs.abs() <= self.tol_feas {
            return Some(seed);
        }
        let c0 = self.constraint(self.x0);
        let along = |t: f64| -> Vec<f64> { self.x0.iter().zip(&seed).map(|(a, b)| a + t * (b - a)).collect() };
        for t in [1.0, 1.25, 1.5, 2.0, 3.0, 4.0] {
            let ct = self.constraint(&along(t));
            if ct.signum() != c0.signum() {
                let (mut lo, mut hi) = (0.0, t);
                let mut mid_point = along(t);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    mid_point = along(mid);
                    let cm = self.constraint(&mid_point);
                    if cm.abs() <= self.tol_tight() || hi - lo < 1e-16 {
                        break;
                    }
                    if cm.signum() == c0.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                if self.constraint(&mid_point).abs() <= self.tol_feas {
                    return Some(mid_point);
                }
                break;
            }
        }
        self.restore(seed)
    }
}

impl KernelProblem<'_> {
    /// Fallback starts: march out from `x0` along the free axes and toward
    /// the nearest support vectors until the constraint changes sign, then
    /// bisect. Returns up to `k` hits, nearest first.
    fn ray_starts(&self, w: &[f64], k: usize) -> Vec<Vec<f64>> {
        const MAX_REACH: f64 = 4.0;
        const NEAREST_SVS: usize = 20;
        let d = self.x0.len();
        let c0 = self.constraint(self.x0);

        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for i in (0..d).filter(|&i| !self.pinned[i]) {
            for sign in [-1.0, 1.0] {
                let mut e = vec![0.0; d];
                e[i] = sign;
                dirs.push(e);
            }
        }
        let mut svs: Vec<(f64, Vec<f64>)> = self
            .model
            .support_vectors()
            .map(|sv| {
                let s = self.pin(sv);
                (weighted_distance_unchecked(self.x0, &s, w), s)
            })
            .collect();
        svs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, s) in svs.into_iter().take(NEAREST_SVS) {
            let u: Vec<f64> = s.iter().zip(self.x0).map(|(a, b)| a - b).collect();
            let n = super::norm(&u);
            if n > 0.0 {
                dirs.push(u.into_iter().map(|v| v / n).collect());
            }
        }

        let mut hits: Vec<(f64, Vec<f64>)> = Vec::new();
        for u in &dirs {
            let at = |t: f64| -> Vec<f64> { self.x0.iter().zip(u).map(|(a, b)| a + t * b).collect() };
            let (mut lo, mut t) = (0.0, 0.02);
            while t <= MAX_REACH {
                let ct = self.constraint(&at(t));
                if ct.is_finite() && ct.signum() != c0.signum() {
                    let mut hi = t;
                    let mut z = at(hi);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        z = at(mid);
                        let cm = self.constraint(&z);
                        if cm.abs() <= self.tol_tight() || hi - lo < 1e-16 {
                            break;
                        }
                        if cm.signum() == c0.signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    if self.constraint(&z).abs() <= self.tol_feas {
                        hits.push((weighted_distance_unchecked(self.x0, &z, w), z));
                    }
                    break;
                }
                lo = t;
                t *= 1.3;
            }
        }
        hits.sort_by(|a, b| a.0.total_cmp(&b.0));
        hits.into_iter().take(k).map(|(_, z)| z).collect()
    }
}

impl ConstrainedProblem for KernelProblem<'_> {
    fn objective(&self, x: &[f64]) -> f64 {
        metric_distance(self.x0, x, self.metric)
    }

    fn projected_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.masked_gradient(x);
        let gg: f64 = g.iter().map(|v| v * v).sum();
        if !(gg > 0.0 && gg.is_finite()) {
            return Err(Error::StationaryConstraint {
                residual: self.constraint(x).abs(),
            });
        }
        let d = x.len();
        let num: f64 = (0..d).map(|i| g[i] * self.metric[i] * (self.x0[i] - x[i])).sum();
        let lambda = 2.0 * num / gg;
        Ok((0..d)
            .map(|i| {
                if self.pinned[i] {
                    0.0
                } else {
                    -2.0 * self.metric[i] * (self.x0[i] - x[i]) + lambda * g[i]
                }
            })
            .collect())
    }

    /// One-dimensional root find of `c(y + s·g(y))`: Newton first, then a
    /// bracketing bisection if Newton stalls or runs away.
    fn restore(&self, y: Vec<f64>) -> Option<Vec<f64>> {
        let dir = self.masked_gradient(&y);
        let dd: f64 = dir.iter().map(|v| v * v).sum();
        if !(dd > 0.0 && dd.is_finite()) {
            return None;
        }
        let dnorm = dd.sqrt();
        let at = |s: f64| -> Vec<f64> { y.iter().zip(&dir).map(|(a, b)| a + s * b).collect() };

        let mut s = 0.0;
        let mut best: Option<(f64, Vec<f64>)> = None;
        for _ in 0..30 {
            let z = at(s);
            let c = self.constraint(&z);
            if !c.is_finite() {
                break;
            }
            if best.as_ref().is_none_or(|b| c.abs() < b.0) {
                best = Some((c.abs(), z.clone()));
            }
            if c.abs() <= self.tol_tight() {
                return Some(z);
            }
            let slope: f64 = self.masked_gradient(&z).iter().zip(&dir).map(|(a, b)| a * b).sum();
            if slope == 0.0 || !slope.is_finite() {
                break;
            }
            let next = s - c / slope;
            // runaway: more than one unit of movement in feature space
            if (next * dnorm).abs() > 1.0 {
                break;
            }
            s = next;
        }
        if let Some((c, z)) = &best {
            if *c <= self.tol_feas {
                return Some(z.clone());
            }
        }

        let c_start = self.constraint(&y);
        let mut h = (c_start.abs() / dd).max(1e-12);
        while h * dnorm <= 2.0 {
            for sign in [-1.0, 1.0] {
                let t = sign * h;
                let ct = self.constraint(&at(t));
                if ct.is_finite() && ct.signum() != c_start.signum() {
                    let (mut lo, mut hi) = (0.0, t);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        let z = at(mid);
                        let cm = self.constraint(&z);
                        if cm.abs() <= self.tol_tight() || (hi - lo).abs() < 1e-17 {
                            return (cm.abs() <= self.tol_feas).then_some(z);
                        }
                        if cm.signum() == c_start.signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    return None;
                }
            }
            h *= 2.0;
        }
        None
    }

    fn residual(&self, x: &[f64]) -> f64 {
        self.constraint(x).abs()
    }
}

fn gradient_unchecked(model: &KernelForm, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for (sv, &a) in model.support_vectors().zip(model.dual_coefs()) {
        if a != 0.0 {
            model.kernel.add_grad_unchecked(sv, x, a, &mut g);
        }
    }
    g
}
