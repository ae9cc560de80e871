use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use svmact_core::trainer::{gen_moons, train_svm};
use svmact_core::{
    nearest_support_vector, solve_action, KernelForm, KernelSpec, Label, LinearForm, ModelForm, SolverConfig,
    StaticMask, SvmModel, TrainConfig, WeightVector,
};

fn linear(c: &mut Criterion) {
    let mut group = c.benchmark_group("linear_action");
    for d in [2usize, 10, 100] {
        let v: Vec<f64> = (0..d).map(|i| ((i * 37 % 11) as f64 - 5.0) / 5.0 + 0.05).collect();
        let model = SvmModel::linear(LinearForm::new(v, 0.1).unwrap());
        let x0: Vec<f64> = (0..d).map(|i| ((i * 13 % 7) as f64 - 3.0) / 3.0).collect();
        let w = WeightVector::new((0..d).map(|i| 0.2 + 0.8 * (i % 5) as f64 / 4.0).collect()).unwrap();
        let cfg = SolverConfig::default();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| solve_action(&model, black_box(&x0), Label::Positive, &w, &StaticMask::empty(), &cfg).unwrap())
        });
    }
    group.finish();
}

fn kernel(c: &mut Criterion) {
    let data = gen_moons(400, 0.1, 42).unwrap();
    let cfg = TrainConfig {
        kernel: KernelSpec::Rbf { gamma: 1.0 },
        tol_kkt: 1e-6,
        ..TrainConfig::default()
    };
    let model = train_svm(&data, &cfg).unwrap();
    let ModelForm::Kernel(form) = &model.form else {
        unreachable!()
    };
    let form: &KernelForm = form;
    let w = WeightVector::ones(2);
    let solver = SolverConfig::default();
    let points: Vec<(Vec<f64>, Label)> = data
        .points
        .iter()
        .take(16)
        .map(|p| (p.clone(), model.predict(p).unwrap()))
        .collect();

    let mut group = c.benchmark_group("kernel_action");
    group.sample_size(20);
    group.bench_function("descent_moons_400", |b| {
        b.iter(|| {
            for (p, y0) in &points {
                let _ = black_box(solve_action(&model, p, *y0, &w, &StaticMask::empty(), &solver));
            }
        })
    });
    group.bench_function("nearest_sv_moons_400", |b| {
        b.iter(|| {
            for (p, y0) in &points {
                let _ = black_box(nearest_support_vector(form, p, *y0, &w));
            }
        })
    });
    group.finish();
}

criterion_group!(benches, linear, kernel);
criterion_main!(benches);
