mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use svmact_core::solver::{initial_point_linear, kernel_action_gd, linear_action_gd};
use svmact_core::trainer::{gen_circles, gen_linear, gen_moons, train_svm};
use svmact_core::{
    nearest_support_vector, solve_action, weighted_distance, GradientMode, KernelForm, KernelSpec, Label, LinearForm,
    ModelForm, SolverConfig, StaticMask, SvmModel, WeightVector,
};

fn kernel_of(model: &SvmModel) -> &KernelForm {
    match &model.form {
        ModelForm::Kernel(k) => k,
        ModelForm::Linear(_) => panic!("expected a kernel model"),
    }
}

#[test]
fn static_slice_matches_grid_search() {
    // f = x₀ + 2x₁ − x₂ with x₂ pinned; the reachable slice is a line in
    // (x₀, x₁), scanned densely for the cheapest feasible point
    let model = SvmModel::linear(LinearForm::new(vec![1.0, 2.0, -1.0], 0.3).unwrap());
    let x0 = [0.2, 0.4, -0.7];
    let w = WeightVector::new(vec![0.6, 0.9, 1.0]).unwrap();
    let mask = StaticMask::from_point(&x0, &[2]).unwrap();
    let r = solve_action(&model, &x0, Label::Positive, &w, &mask, &SolverConfig::default()).unwrap();
    assert_eq!(r.xn[2].to_bits(), x0[2].to_bits());

    // x₀ + 2x₁ + 0.7 + 0.3 + 1 = 0  ⇒  x₁ = −(x₀ + 2)/2
    let mut best = f64::INFINITY;
    for k in 0..=400_000 {
        let a = -3.0 + k as f64 * 1e-5;
        let b = -(a + 2.0) / 2.0;
        best = best.min(weighted_distance(&x0, &[a, b, x0[2]], &w).unwrap());
    }
    assert!((r.distance - best).abs() < 1e-8, "{} vs grid {}", r.distance, best);
}

#[test]
fn empty_mask_matches_direct_solvers() {
    let lin = LinearForm::new(vec![0.5, -0.25], 0.1).unwrap();
    let x0 = [0.3, 0.9];
    let w = WeightVector::new(vec![0.4, 1.0]).unwrap();
    let cfg = SolverConfig::default();
    let direct = linear_action_gd(&lin, &x0, Label::Negative, &w, &cfg).unwrap();
    let via = solve_action(
        &SvmModel::linear(lin),
        &x0,
        Label::Negative,
        &w,
        &StaticMask::empty(),
        &cfg,
    )
    .unwrap();
    assert_eq!(direct, via);

    let data = gen_moons(80, 0.1, 3).unwrap();
    let model = train_svm(&data, &tight_train(KernelSpec::Rbf { gamma: 1.0 })).unwrap();
    let p = &data.points[0];
    let y0 = model.predict(p).unwrap();
    let direct = kernel_action_gd(kernel_of(&model), p, y0, &w, &cfg).unwrap();
    let via = solve_action(&model, p, y0, &w, &StaticMask::empty(), &cfg).unwrap();
    assert_eq!(direct, via);
}

#[test]
fn kernel_static_coordinate_has_zero_action() {
    let data = gen_moons(120, 0.1, 5).unwrap();
    let model = train_svm(&data, &tight_train(KernelSpec::Rbf { gamma: 1.0 })).unwrap();
    let cfg = SolverConfig::default();
    let mut solved = 0;
    for p in data.points.iter().take(40) {
        let y0 = model.predict(p).unwrap();
        for i in 0..2 {
            let mask = StaticMask::from_point(p, &[i]).unwrap();
            if let Ok(r) = solve_action(&model, p, y0, &WeightVector::ones(2), &mask, &cfg) {
                assert_eq!(r.action[i], 0.0);
                assert_eq!(r.xn[i].to_bits(), p[i].to_bits());
                solved += 1;
            }
        }
    }
    assert!(solved > 40, "only {solved} pinned solves succeeded");
}

#[test]
fn gd_never_worse_than_baseline_on_synthetic_sets() {
    let setups = [
        (gen_linear(200, 0.1, 17).unwrap(), KernelSpec::Linear),
        (gen_moons(200, 0.1, 17).unwrap(), KernelSpec::Rbf { gamma: 1.0 }),
        (
            gen_circles(200, 0.1, 0.5, 17).unwrap(),
            KernelSpec::Polynomial {
                degree: 4,
                gamma: 1.0,
                coef0: 1.0,
            },
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cfg = SolverConfig::default();
    for (data, kernel) in setups {
        let model = train_svm(&data, &tight_train(kernel)).unwrap();
        let k = kernel_of(&model);
        let mut compared = 0;
        for p in &data.points {
            let y0 = model.predict(p).unwrap();
            let w = WeightVector::new(uniform_vec(&mut rng, 2, 0.1, 1.0)).unwrap();
            let (Ok(gd), Ok(base)) = (
                solve_action(&model, p, y0, &w, &StaticMask::empty(), &cfg),
                nearest_support_vector(k, p, y0, &w),
            ) else {
                continue;
            };
            if gd.converged {
                assert!(
                    gd.distance <= base.distance + 1e-9,
                    "{kernel}: {} > {}",
                    gd.distance,
                    base.distance
                );
                compared += 1;
            }
        }
        assert!(compared >= 150, "{kernel}: only {compared} points compared");
    }
}

#[test]
fn unsquared_gradient_mode_minimizes_plain_weighted_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cfg = SolverConfig {
        gradient: GradientMode::Unsquared,
        ..SolverConfig::default()
    };
    for _ in 0..200 {
        let d = rng.random_range(2..=6);
        let v = uniform_vec(&mut rng, d, -1.0, 1.0);
        let model = LinearForm::new(v.clone(), 0.1).unwrap();
        let x0 = uniform_vec(&mut rng, d, -1.0, 1.0);
        let w = uniform_vec(&mut rng, d, 0.05, 1.0);
        let wv = WeightVector::new(w.clone()).unwrap();
        let r = linear_action_gd(&model, &x0, Label::Positive, &wv, &cfg).unwrap();
        let oracle = closed_form_ref(&v, 0.1, &x0, Label::Positive, &w);
        assert!(norm(&sub(&r.xn, &oracle)) < 1e-4);
        // reported distance still uses squared weights
        assert!((r.distance - weighted_distance_ref(&x0, &r.xn, &w)).abs() < 1e-12);
    }
}

#[test]
fn unreachable_margin_is_an_error() {
    // f = 0.5·K(s, x) ∈ (0, 0.5] never reaches +1
    let k = KernelForm::new(
        vec![vec![0.0, 0.0]],
        vec![0.5],
        0.0,
        KernelSpec::Rbf { gamma: 1.0 },
        None,
    )
    .unwrap();
    let r = kernel_action_gd(
        &k,
        &[0.3, 0.3],
        Label::Negative,
        &WeightVector::ones(2),
        &SolverConfig::default(),
    );
    assert!(matches!(r, Err(svmact_core::Error::TargetUnreachable(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// The descent never ends farther from x0 than the point it started at.
    #[test]
    fn linear_descent_improves_on_its_start(
        v in prop::collection::vec(-1.0f64..1.0, 2..6),
        seed in any::<u64>(),
    ) {
        prop_assume!(norm(&v) > 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = v.len();
        let model = LinearForm::new(v, rng.random_range(-0.5..0.5)).unwrap();
        let x0 = uniform_vec(&mut rng, d, -1.0, 1.0);
        let w = WeightVector::new(uniform_vec(&mut rng, d, 0.05, 1.0)).unwrap();
        let y0 = random_label(&mut rng);
        let start = initial_point_linear(&model, &x0, y0).unwrap();
        let r = linear_action_gd(&model, &x0, y0, &w, &SolverConfig::default()).unwrap();
        prop_assert!(r.distance <= weighted_distance(&x0, &start, &w).unwrap() + 1e-12);
    }

    /// Converged kernel results sit on the target margin.
    #[test]
    fn kernel_results_feasible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.random_range(2..=4);
        let model = random_kernel_model(&mut rng, d);
        let x0 = uniform_vec(&mut rng, d, -1.0, 1.0);
        let y0 = random_label(&mut rng);
        let w = WeightVector::new(uniform_vec(&mut rng, d, 0.1, 1.0)).unwrap();
        if let Ok(r) = kernel_action_gd(&model, &x0, y0, &w, &SolverConfig::default()) {
            if r.converged {
                prop_assert!((decision_ref(&model, &r.xn) + y0.value()).abs() <= 1e-3);
            }
        }
    }
}
