//! Soft-margin C-SVC dual solved by sequential minimal optimization.
//!
//! We solve
//!   min_α ½ αᵀQα − eᵀα   s.t. yᵀα = 0, 0 ≤ αᵢ ≤ C,
//! with `Qᵢⱼ = yᵢyⱼK(xᵢ, xⱼ)`, picking the maximal violating pair each
//! iteration. The pair update and intercept follow the usual libsvm scheme.

use crate::error::{Error, Result};
use crate::model::{KernelForm, Label, SvmModel};

use super::{Dataset, TrainConfig};

const TAU: f64 = 1e-12;

/// Training diagnostics alongside the model.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    /// Dual variables for every training point, in dataset order.
    pub alphas: Vec<f64>,
    pub iterations: usize,
    /// Final maximal violating pair gap.
    pub gap: f64,
}

pub fn train_svm(dataset: &Dataset, cfg: &TrainConfig) -> Result<SvmModel> {
    train_svm_with_report(dataset, cfg).map(|(m, _)| m)
}

pub fn train_svm_with_report(dataset: &Dataset, cfg: &TrainConfig) -> Result<(SvmModel, TrainReport)> {
    let n = dataset.len();
    if n < 2 || dataset.count(Label::Positive) == 0 || dataset.count(Label::Negative) == 0 {
        return Err(Error::SingleClass);
    }
    cfg.kernel.validate()?;
    let c = cfg.box_c;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("C must be positive, got {c}")));
    }
    if cfg.tol_kkt.is_nan() || cfg.tol_kkt <= 0.0 {
        return Err(Error::InvalidArgument("tolKKT must be positive".into()));
    }

    let y: Vec<f64> = dataset.labels.iter().map(|l| l.value()).collect();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = y[i] * y[j] * cfg.kernel.eval_unchecked(&dataset.points[i], &dataset.points[j]);
            q[i * n + j] = k;
            q[j * n + i] = k;
        }
    }

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = cfg.max_passes.saturating_mul(n).max(1);
    let mut iterations = 0;

    let gap = loop {
        // i maximizes −yG over I_up, j minimizes it over I_low
        let mut g_max = f64::NEG_INFINITY;
        let mut g_min = f64::INFINITY;
        let (mut i, mut j) = (usize::MAX, usize::MAX);
        for t in 0..n {
            let v = -y[t] * grad[t];
            let up = if y[t] > 0.0 { alpha[t] < c } else { alpha[t] > 0.0 };
            let low = if y[t] > 0.0 { alpha[t] > 0.0 } else { alpha[t] < c };
            if up && v > g_max {
                g_max = v;
                i = t;
            }
            if low && v < g_min {
                g_min = v;
                j = t;
            }
        }
        let gap = g_max - g_min;
        if gap <= cfg.tol_kkt || i == usize::MAX || j == usize::MAX {
            break gap.max(0.0);
        }
        if iterations >= max_iter {
            return Err(Error::TrainingDidNotConverge { iterations, gap });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qi = &q[i * n..(i + 1) * n];
        let (qii, qjj, qij) = (qi[i], q[j * n + j], qi[j]);
        if y[i] != y[j] {
            let quad = (qii + qjj + 2.0 * qij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (qii + qjj - 2.0 * qij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        let qj = &q[j * n..(j + 1) * n];
        for t in 0..n {
            grad[t] += qi[t] * di + qj[t] * dj;
        }
    };

    let b = -rho(&alpha, &grad, &y, c);

    let mut svs = Vec::new();
    let mut coefs = Vec::new();
    for t in 0..n {
        if alpha[t] > 0.0 {
            svs.push(dataset.points[t].clone());
            coefs.push(alpha[t] * y[t]);
        }
    }
    let form = KernelForm::new(svs, coefs, b, cfg.kernel, Some(c))?;
    let model = SvmModel::kernel(form).with_feature_names(dataset.feature_names.clone())?;
    Ok((
        model,
        TrainReport {
            alphas: alpha,
            iterations,
            gap,
        },
    ))
}

/// Average `yG` over free variables, or the midpoint of the feasible
/// interval when none are free.
fn rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut free = 0usize;
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum += yg;
        }
    }
    if free > 0 {
        sum / free as f64
    } else {
        0.5 * (ub + lb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelSpec;

    fn ds(points: Vec<Vec<f64>>, labels: Vec<i64>) -> Dataset {
        let labels = labels.into_iter().map(|l| Label::from_i64(l).unwrap()).collect();
        Dataset::new(points, labels, None).unwrap()
    }

    #[test]
    fn two_separable_points() {
        let data = ds(vec![vec![1.0, 0.0], vec![-1.0, 0.0]], vec![1, -1]);
        let cfg = TrainConfig {
            kernel: KernelSpec::Linear,
            tol_kkt: 1e-9,
            ..TrainConfig::default()
        };
        let model = train_svm(&data, &cfg).unwrap();
        assert_eq!(model.n_support(), 2);
        assert!((model.decision_value(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-9);
        assert!((model.decision_value(&[-1.0, 0.0]).unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn xor_with_rbf() {
        let data = ds(
            vec![vec![1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0], vec![-1.0, 1.0]],
            vec![1, 1, -1, -1],
        );
        let model = train_svm(&data, &TrainConfig::default()).unwrap();
        for (p, l) in data.points.iter().zip(&data.labels) {
            assert_eq!(model.predict(p).unwrap(), *l);
        }
    }

    #[test]
    fn single_class_rejected() {
        let data = ds(vec![vec![1.0], vec![2.0]], vec![1, 1]);
        assert!(matches!(
            train_svm(&data, &TrainConfig::default()),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let data = crate::trainer::gen_moons(100, 0.2, 4).unwrap();
        let cfg = TrainConfig {
            max_passes: 0,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train_svm(&data, &cfg),
            Err(Error::TrainingDidNotConverge { .. })
        ));
    }
}
