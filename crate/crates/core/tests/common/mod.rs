//! Reference implementations written straight from the formulas, kept
//! separate from the library so tests compare two independent codings.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use svmact_core::{KernelForm, KernelSpec, Label, TrainConfig};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `‖a − b‖ / ‖b‖`.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b)) / norm(b)
}

pub fn kernel_ref(spec: &KernelSpec, x: &[f64], y: &[f64]) -> f64 {
    match *spec {
        KernelSpec::Linear => dot(x, y),
        KernelSpec::Rbf { gamma } => {
            let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            (-gamma * d2).exp()
        }
        KernelSpec::Polynomial { degree, gamma, coef0 } => (gamma * dot(x, y) + coef0).powf(degree as f64),
    }
}

pub fn decision_ref(model: &KernelForm, x: &[f64]) -> f64 {
    model
        .support_vectors()
        .zip(model.dual_coefs())
        .map(|(s, a)| a * kernel_ref(&model.kernel, s, x))
        .sum::<f64>()
        + model.b
}

/// Analytic gradient of the decision function, coded from the kernel
/// derivatives independently of the library.
pub fn decision_grad_ref(model: &KernelForm, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for (s, a) in model.support_vectors().zip(model.dual_coefs()) {
        let (scale, dir): (f64, Vec<f64>) = match model.kernel {
            KernelSpec::Linear => (1.0, s.to_vec()),
            KernelSpec::Rbf { gamma } => (2.0 * gamma * kernel_ref(&model.kernel, s, x), sub(s, x)),
            KernelSpec::Polynomial { degree, gamma, coef0 } => (
                degree as f64 * gamma * (gamma * dot(s, x) + coef0).powf(degree as f64 - 1.0),
                s.to_vec(),
            ),
        };
        for (gi, di) in g.iter_mut().zip(&dir) {
            *gi += a * scale * di;
        }
    }
    g
}

/// Central differences with a step scaled to each coordinate.
pub fn fd_grad(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-5 * x[i].abs().max(1.0);
            y[i] = x[i] + h;
            let up = f(&y);
            y[i] = x[i] - h;
            let down = f(&y);
            y[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Minimizer of `Σ mᵢ(xᵢ − x0ᵢ)²` on `vᵀx + b + y0 = 0`, from the
/// stationarity conditions `2m⊙(x − x0) + λv = 0`.
pub fn closed_form_ref(v: &[f64], b: f64, x0: &[f64], y0: Label, m: &[f64]) -> Vec<f64> {
    let c = dot(v, x0) + b + y0.value();
    let s: f64 = v.iter().zip(m).map(|(vi, mi)| vi * vi / (2.0 * mi)).sum();
    let lambda = c / s;
    x0.iter()
        .zip(v)
        .zip(m)
        .map(|((x, vi), mi)| x - lambda * vi / (2.0 * mi))
        .collect()
}

pub fn weighted_distance_ref(x0: &[f64], x: &[f64], w: &[f64]) -> f64 {
    x0.iter()
        .zip(x)
        .zip(w)
        .map(|((a, b), wi)| wi * wi * (a - b) * (a - b))
        .sum()
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_label(rng: &mut ChaCha8Rng) -> Label {
    if rng.random_bool(0.5) {
        Label::Positive
    } else {
        Label::Negative
    }
}

pub fn random_kernel(rng: &mut ChaCha8Rng) -> KernelSpec {
    if rng.random_bool(0.5) {
        KernelSpec::Rbf {
            gamma: rng.random_range(0.1..2.0),
        }
    } else {
        KernelSpec::Polynomial {
            degree: rng.random_range(1..=5),
            gamma: rng.random_range(0.2..1.5),
            coef0: rng.random_range(0.0..1.5),
        }
    }
}

pub fn random_kernel_model(rng: &mut ChaCha8Rng, d: usize) -> KernelForm {
    let n = rng.random_range(1..=8);
    let svs = (0..n).map(|_| uniform_vec(rng, d, -1.0, 1.0)).collect();
    let coefs = uniform_vec(rng, n, -2.0, 2.0);
    KernelForm::new(svs, coefs, rng.random_range(-1.0..1.0), random_kernel(rng), None).unwrap()
}

/// Training settings tight enough that margin support vectors sit on the
/// margin to well within the baseline's tolerance.
pub fn tight_train(kernel: KernelSpec) -> TrainConfig {
    TrainConfig {
        kernel,
        box_c: 10.0,
        tol_kkt: 1e-8,
        max_passes: 2000,
    }
}
