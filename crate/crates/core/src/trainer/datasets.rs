//! Two-dimensional toy problems: separable blobs, concentric circles and
//! interleaving half moons. Every generator is deterministic in its seed
//! and returns points normalized to the unit box.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Label;

use super::{normalize_to_unit_box, Dataset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntheticKind {
    Linear,
    Circles,
    Moons,
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(SyntheticKind::Linear),
            "circles" => Ok(SyntheticKind::Circles),
            "moons" => Ok(SyntheticKind::Moons),
            other => Err(Error::InvalidArgument(format!("unknown dataset kind `{other}`"))),
        }
    }
}

/// Dispatch on `kind`; circles use an inner/outer radius ratio of 0.5.
pub fn generate(kind: SyntheticKind, n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    match kind {
        SyntheticKind::Linear => gen_linear(n, noise, seed),
        SyntheticKind::Circles => gen_circles(n, noise, 0.5, seed),
        SyntheticKind::Moons => gen_moons(n, noise, seed),
    }
}

/// Two square clusters centred at ±(1, 1), separable by `x + y = 0`
/// before jitter.
pub fn gen_linear(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    check_args(n, noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, noise).expect("noise checked");
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let label = if k < n / 2 { Label::Positive } else { Label::Negative };
        let c = label.value();
        let x = c + rng.random_range(-0.9..0.9) + jitter.sample(&mut rng);
        let y = c + rng.random_range(-0.9..0.9) + jitter.sample(&mut rng);
        rows.push((vec![x, y], label));
    }
    finish(rows, seed, &mut rng)
}

/// Outer unit circle (label −1) around an inner circle of radius `factor`
/// (label +1).
pub fn gen_circles(n: usize, noise: f64, factor: f64, seed: u64) -> Result<Dataset> {
    check_args(n, noise)?;
    if !(factor > 0.0 && factor < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "factor must lie in (0, 1), got {factor}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, noise).expect("noise checked");
    let n_out = n - n / 2;
    let n_in = n / 2;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n_out {
        let t = 2.0 * PI * k as f64 / n_out as f64;
        rows.push((vec![t.cos(), t.sin()], Label::Negative));
    }
    for k in 0..n_in {
        let t = 2.0 * PI * k as f64 / n_in as f64;
        rows.push((vec![factor * t.cos(), factor * t.sin()], Label::Positive));
    }
    add_jitter(&mut rows, &jitter, &mut rng);
    finish(rows, seed, &mut rng)
}

/// Upper arc `(cos t, sin t)` (label −1) interleaved with the lower arc
/// `(1 − cos t, 0.5 − sin t)` (label +1), `t ∈ [0, π]`.
pub fn gen_moons(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    check_args(n, noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, noise).expect("noise checked");
    let n_out = n - n / 2;
    let n_in = n / 2;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n_out {
        let t = PI * k as f64 / (n_out - 1) as f64;
        rows.push((vec![t.cos(), t.sin()], Label::Negative));
    }
    for k in 0..n_in {
        let t = PI * k as f64 / (n_in - 1) as f64;
        rows.push((vec![1.0 - t.cos(), 0.5 - t.sin()], Label::Positive));
    }
    add_jitter(&mut rows, &jitter, &mut rng);
    finish(rows, seed, &mut rng)
}

fn check_args(n: usize, noise: f64) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("need at least 4 points, got {n}")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise must be >= 0, got {noise}")));
    }
    Ok(())
}

fn add_jitter(rows: &mut [(Vec<f64>, Label)], jitter: &Normal<f64>, rng: &mut ChaCha8Rng) {
    for (p, _) in rows.iter_mut() {
        for v in p.iter_mut() {
            *v += jitter.sample(rng);
        }
    }
}

fn finish(mut rows: Vec<(Vec<f64>, Label)>, seed: u64, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    rows.shuffle(rng);
    let (points, labels): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let raw = Dataset::new(points, labels, Some(vec!["x".into(), "y".into()]))?;
    let (mut ds, _) = normalize_to_unit_box(&raw)?;
    ds.generator_seed = Some(seed);
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw_points(ds: &Dataset) -> Vec<Vec<f64>> {
        let s = ds.scaler.as_ref().unwrap();
        ds.points.iter().map(|p| s.invert(p).unwrap()).collect()
    }

    #[test]
    fn balanced_and_normalized() {
        for kind in [SyntheticKind::Linear, SyntheticKind::Circles, SyntheticKind::Moons] {
            for n in [4, 7, 200] {
                let ds = generate(kind, n, 0.1, 3).unwrap();
                assert_eq!(ds.len(), n);
                let pos = ds.count(Label::Positive) as i64;
                let neg = ds.count(Label::Negative) as i64;
                assert!((pos - neg).abs() <= 1);
                for p in &ds.points {
                    assert!(p.iter().all(|v| (-1.0..=1.0).contains(v)));
                }
                assert_eq!(ds.generator_seed, Some(3));
            }
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        for kind in [SyntheticKind::Linear, SyntheticKind::Circles, SyntheticKind::Moons] {
            let a = generate(kind, 50, 0.2, 99).unwrap();
            let b = generate(kind, 50, 0.2, 99).unwrap();
            assert_eq!(a, b);
            let c = generate(kind, 50, 0.2, 100).unwrap();
            assert_ne!(a.points, c.points);
        }
    }

    #[test]
    fn noiseless_circles_are_nested() {
        let ds = gen_circles(101, 0.0, 0.5, 1).unwrap();
        let radius = |p: &Vec<f64>| (p[0] * p[0] + p[1] * p[1]).sqrt();
        let inner_max = ds
            .points
            .iter()
            .zip(&ds.labels)
            .filter(|(_, l)| **l == Label::Positive)
            .map(|(p, _)| radius(p))
            .fold(0.0, f64::max);
        let outer_min = ds
            .points
            .iter()
            .zip(&ds.labels)
            .filter(|(_, l)| **l == Label::Negative)
            .map(|(p, _)| radius(p))
            .fold(f64::INFINITY, f64::min);
        assert!(inner_max < outer_min);
    }

    #[test]
    fn noiseless_moons_lie_on_arcs() {
        let ds = gen_moons(60, 0.0, 5).unwrap();
        for (p, l) in raw_points(&ds).iter().zip(&ds.labels) {
            let residual = match l {
                Label::Negative => p[0] * p[0] + p[1] * p[1] - 1.0,
                Label::Positive => (p[0] - 1.0).powi(2) + (p[1] - 0.5).powi(2) - 1.0,
            };
            assert!(residual.abs() < 1e-9, "{p:?} {l:?} {residual}");
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(gen_linear(3, 0.1, 0).is_err());
        assert!(gen_moons(10, -0.1, 0).is_err());
        assert!(gen_circles(10, 0.1, 1.5, 0).is_err());
        assert!("spirals".parse::<SyntheticKind>().is_err());
    }
}
