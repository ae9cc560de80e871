use crate::error::Result;

use super::{norm, SolverConfig, StepRule};

/// An equality-constrained distance minimization seen through its
/// projected Lagrangian gradient.
pub(crate) trait ConstrainedProblem {
    /// `Σ mᵢ (x0ᵢ − xᵢ)²`.
    fn objective(&self, x: &[f64]) -> f64;
    /// `∇L` with the multiplier chosen so it is orthogonal to the
    /// constraint gradient.
    fn projected_gradient(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// Move `x` back onto the constraint, if possible.
    fn restore(&self, x: Vec<f64>) -> Option<Vec<f64>>;
    fn residual(&self, x: &[f64]) -> f64;
}

pub(crate) struct Descent {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// A stopping tolerance was met before `max_iters`.
    pub stopped: bool,
}

const MIN_STEP: f64 = 1e-12;
const MAX_STEP: f64 = 1e6;

/// Projected gradient descent from a feasible `start`. Trial steps use the
/// Barzilai-Borwein length when available; backtracking then enforces
/// sufficient decrease on the restored point. Returns the best feasible
/// iterate seen.
pub(crate) fn descend<P: ConstrainedProblem>(problem: &P, start: Vec<f64>, cfg: &SolverConfig) -> Result<Descent> {
    let mut x = start;
    let mut fx = problem.objective(&x);
    let mut grad = problem.projected_gradient(&x)?;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut t_prev = cfg.step_init;

    let mut best = (x.clone(), fx);
    let mut iterations = 0;
    let mut stopped = false;

    'outer: for iter in 0..cfg.max_iters {
        let gnorm = norm(&grad);
        if gnorm <= cfg.tol_step {
            stopped = true;
            break;
        }
        let restore_now = (iter + 1) % cfg.project_every == 0;

        let (x_new, f_new) = match cfg.step_rule {
            StepRule::Fixed => {
                let cand = axpy(&x, -cfg.step_init, &grad);
                let cand = if restore_now {
                    match problem.restore(cand) {
                        Some(c) => c,
                        None => break,
                    }
                } else {
                    cand
                };
                let f = problem.objective(&cand);
                (cand, f)
            }
            StepRule::Backtracking {
                shrink,
                sufficient_decrease,
            } => {
                let mut t = prev
                    .as_ref()
                    .and_then(|(xp, gp)| bb_step(&x, xp, &grad, gp))
                    .unwrap_or(t_prev * 2.0)
                    .clamp(MIN_STEP, MAX_STEP);
                loop {
                    if t * gnorm <= cfg.tol_step {
                        // no admissible step longer than the tolerance
                        stopped = true;
                        break 'outer;
                    }
                    let cand = axpy(&x, -t, &grad);
                    let cand = if restore_now { problem.restore(cand) } else { Some(cand) };
                    if let Some(cand) = cand {
                        let f = problem.objective(&cand);
                        if f <= fx - sufficient_decrease * t * gnorm * gnorm {
                            t_prev = t;
                            break (cand, f);
                        }
                    }
                    t *= shrink;
                }
            }
        };

        let step = x_new.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let old = std::mem::replace(&mut x, x_new);
        fx = f_new;
        iterations += 1;
        if restore_now && fx < best.1 && problem.residual(&x) <= cfg.tol_feas {
            best = (x.clone(), fx);
        }
        if step <= cfg.tol_step {
            stopped = true;
            break;
        }
        let new_grad = problem.projected_gradient(&x)?;
        prev = Some((old, std::mem::replace(&mut grad, new_grad)));
    }

    Ok(Descent {
        x: best.0,
        iterations,
        stopped,
    })
}

fn axpy(x: &[f64], a: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + a * di).collect()
}

fn bb_step(x: &[f64], x_prev: &[f64], g: &[f64], g_prev: &[f64]) -> Option<f64> {
    let mut ss = 0.0;
    let mut sy = 0.0;
    for i in 0..x.len() {
        let s = x[i] - x_prev[i];
        let y = g[i] - g_prev[i];
        ss += s * s;
        sy += s * y;
    }
    (sy > 0.0 && ss > 0.0).then(|| ss / sy)
}
