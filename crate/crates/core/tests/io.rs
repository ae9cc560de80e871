mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use svmact_core::io::{load_csv_dataset, parse_libsvm_model, save_csv_dataset, CsvOptions, ModelDocument};
use svmact_core::trainer::{gen_circles, train_svm};
use svmact_core::{KernelForm, KernelSpec, SvmModel, TrainConfig};

#[test]
fn trained_model_survives_a_file_round_trip() {
    let data = gen_circles(120, 0.1, 0.5, 2).unwrap();
    let model = train_svm(&data, &TrainConfig::default()).unwrap();
    let mut doc = ModelDocument::new(model);
    doc.scaler = data.scaler.clone();
    doc.weight_presets.insert("cheap-x".into(), vec![0.1, 1.0]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    doc.save(&path).unwrap();
    let back = ModelDocument::load(&path).unwrap();
    assert_eq!(back, doc);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let x = uniform_vec(&mut rng, 2, -2.0, 2.0);
        assert_eq!(
            doc.model.decision_value(&x).unwrap().to_bits(),
            back.model.decision_value(&x).unwrap().to_bits()
        );
    }
}

#[test]
fn libsvm_import_reaches_a_native_fixpoint() {
    let text = "svm_type c_svc\nkernel_type rbf\ngamma 0.5\nnr_class 2\ntotal_sv 2\nrho 0.125\nlabel -1 1\n\
                nr_sv 1 1\nSV\n0.75 1:0.1 4:-0.3\n-0.75 2:0.9\n";
    let model = parse_libsvm_model(text).unwrap();
    assert_eq!(model.dim(), 4);
    let once = ModelDocument::new(model.clone()).to_json().unwrap();
    let twice = ModelDocument::from_json(&once).unwrap().to_json().unwrap();
    assert_eq!(once, twice);
    assert_eq!(ModelDocument::from_json(&once).unwrap().model, model);
}

#[test]
fn csv_file_round_trip_and_normalization() {
    let data = gen_circles(40, 0.05, 0.5, 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    save_csv_dataset(&data, &path).unwrap();
    let (raw, none) = load_csv_dataset(
        &path,
        &CsvOptions {
            normalize: false,
            ..CsvOptions::default()
        },
    )
    .unwrap();
    assert!(none.is_none());
    assert_eq!(raw.points, data.points);
    // already spanning [−1, 1], so normalizing is the identity
    let (norm, scaler) = load_csv_dataset(&path, &CsvOptions::default()).unwrap();
    assert_eq!(norm.points, data.points);
    assert!(scaler.is_some());
}

proptest! {
    #[test]
    fn document_round_trip_is_bit_exact(
        svs in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 3), 1..6),
        b in -1e6f64..1e6,
        gamma in 1e-6f64..10.0,
    ) {
        let coefs: Vec<f64> = svs.iter().map(|s| s[0] / 7.0).collect();
        let model = SvmModel::kernel(KernelForm::new(svs, coefs, b, KernelSpec::Rbf { gamma }, None).unwrap());
        let doc = ModelDocument::new(model);
        prop_assert_eq!(ModelDocument::from_json(&doc.to_json().unwrap()).unwrap(), doc);
    }
}
