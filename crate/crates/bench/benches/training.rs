use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use svmact_core::trainer::{gen_circles, train_svm};
use svmact_core::{KernelSpec, TrainConfig};

fn smo(c: &mut Criterion) {
    let mut group = c.benchmark_group("smo_circles");
    group.sample_size(10);
    for n in [200usize, 800] {
        let data = gen_circles(n, 0.1, 0.5, 42).unwrap();
        for (name, kernel) in [
            ("rbf", KernelSpec::Rbf { gamma: 1.0 }),
            (
                "poly4",
                KernelSpec::Polynomial {
                    degree: 4,
                    gamma: 1.0,
                    coef0: 1.0,
                },
            ),
        ] {
            let cfg = TrainConfig {
                kernel,
                ..TrainConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &data, |b, data| {
                b.iter(|| train_svm(data, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, smo);
criterion_main!(benches);
