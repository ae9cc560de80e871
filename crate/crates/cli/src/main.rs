use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use svmact_cli::inputs::{apply_static, parse_label, parse_named, parse_point, resolve_weights};
use svmact_cli::render;
use svmact_cli::service::{router, Registry};
use svmact_core::analysis::{risk_feature_positions, risk_score, weight_preset, STULONG_PRESET};
use svmact_core::io::{load_csv_dataset, save_csv_dataset, CsvOptions};
use svmact_core::trainer::train_svm_with_report;
use svmact_core::{
    compare_solutions, generate, interpretability_ranking, nearest_support_vector, solve_action, Dataset, KernelSpec,
    ModelDocument, ModelForm, SolverConfig, StaticMask, SyntheticKind, TrainConfig,
};

#[derive(Parser)]
#[command(name = "svmact", version, about = "Minimal-cost actions that flip SVM decisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Linear,
    Circles,
    Moons,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelName {
    Linear,
    Rbf,
    Poly,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset as CSV.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train an SVM on a CSV dataset and write a model document.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value = "rbf")]
        kernel: KernelName,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 0.0)]
        coef0: f64,
        /// Box constraint.
        #[arg(long = "C", alias = "c", default_value_t = 10.0)]
        box_c: f64,
        /// KKT tolerance of the SMO stopping rule.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value = "label")]
        label_column: String,
        /// Train on the CSV values as given instead of scaling to [-1, 1].
        #[arg(long)]
        no_normalize: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recommend the cheapest change that flips one point's class.
    Act {
        #[arg(long)]
        model: PathBuf,
        /// `name=value,...` or values in feature order.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Current class (+1 or -1); the model's prediction by default.
        #[arg(long, allow_hyphen_values = true)]
        label: Option<String>,
        /// Preset name or comma-separated weights in (0, 1].
        #[arg(long, default_value = "ones")]
        weights: String,
        /// Features that must not change, as `name` or `name=value`.
        #[arg(long = "static", allow_hyphen_values = true)]
        static_features: Option<String>,
        /// The point is in raw units and is scaled with the model's scaler.
        #[arg(long)]
        raw: bool,
        /// Also report the nearest qualifying support vector.
        #[arg(long)]
        baseline: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare descent against the nearest-support-vector baseline.
    Compare {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "ones")]
        weights: String,
        #[arg(long, default_value = "label")]
        label_column: String,
        /// Write per-point distances as CSV.
        #[arg(long)]
        points_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Rank features by how much the recommended actions change them.
    Interpret {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "label")]
        label_column: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the cardiovascular risk score on raw feature values.
    Risk {
        /// `SUBSC=...,TRIC=...,...` with all ten risk features.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Preload every `*.json` model document in this directory.
        #[arg(long)]
        models_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            kind,
            n,
            noise,
            seed,
            out,
        } => {
            let kind = match kind {
                Kind::Linear => SyntheticKind::Linear,
                Kind::Circles => SyntheticKind::Circles,
                Kind::Moons => SyntheticKind::Moons,
            };
            let data = generate(kind, n, noise, seed)?;
            save_csv_dataset(&data, &out)?;
            println!("seed {seed}");
            println!("wrote {} points to {}", data.len(), out.display());
        }
        Command::Train {
            data,
            kernel,
            gamma,
            degree,
            coef0,
            box_c,
            tol,
            label_column,
            no_normalize,
            out,
        } => {
            let opts = CsvOptions {
                label_column,
                normalize: !no_normalize,
                ..CsvOptions::default()
            };
            let (dataset, scaler) = load_csv_dataset(&data, &opts)?;
            let kernel = match kernel {
                KernelName::Linear => KernelSpec::Linear,
                KernelName::Rbf => KernelSpec::Rbf { gamma },
                KernelName::Poly => KernelSpec::Polynomial { degree, gamma, coef0 },
            };
            let cfg = TrainConfig {
                kernel,
                box_c,
                tol_kkt: tol,
                ..TrainConfig::default()
            };
            let (model, report) = train_svm_with_report(&dataset, &cfg)?;
            let correct = dataset
                .points
                .iter()
                .zip(&dataset.labels)
                .filter(|(p, y)| model.predict(p).is_ok_and(|l| l == **y))
                .count();
            let mut doc = ModelDocument::new(model);
            doc.scaler = scaler;
            if risk_feature_positions(&doc.model.feature_names).is_some() {
                let w = weight_preset(STULONG_PRESET, &doc.model.feature_names)?;
                doc.weight_presets.insert(STULONG_PRESET.into(), w.as_slice().to_vec());
            }
            doc.save(&out)?;
            println!("kernel {}", doc.model.kernel_spec());
            println!("support vectors {}", doc.model.n_support());
            println!("iterations {}  KKT gap {:.3e}", report.iterations, report.gap);
            println!(
                "training accuracy {:.2}% ({correct} of {})",
                100.0 * correct as f64 / dataset.len() as f64,
                dataset.len()
            );
            println!("wrote {}", out.display());
        }
        Command::Act {
            model,
            point,
            label,
            weights,
            static_features,
            raw,
            baseline,
            json,
        } => act(&model, &point, label, &weights, static_features, raw, baseline, json)?,
        Command::Compare {
            model,
            data,
            weights,
            label_column,
            points_out,
            json,
        } => {
            let doc = ModelDocument::load(&model)?;
            let dataset = load_for_model(&doc, &data, label_column)?;
            let w = resolve_weights(&weights, &doc)?;
            let report = compare_solutions(&doc.model, &dataset, &w, &SolverConfig::default())?;
            if let Some(path) = points_out {
                let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                report.write_points_csv(file)?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", render::comparison_summary(&report));
            }
        }
        Command::Interpret {
            model,
            data,
            label_column,
            json,
        } => {
            let doc = ModelDocument::load(&model)?;
            let dataset = load_for_model(&doc, &data, label_column)?;
            let report = interpretability_ranking(&doc.model, &dataset, &SolverConfig::default())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", render::ranking_table(&report));
            }
        }
        Command::Risk { point } => {
            println!("{:.6}", risk_score(&parse_named(&point)?)?);
        }
        Command::Serve { host, port, models_dir } => serve(&host, port, models_dir)?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn act(
    model: &Path,
    point: &str,
    label: Option<String>,
    weights: &str,
    static_features: Option<String>,
    raw: bool,
    baseline: bool,
    json: bool,
) -> Result<()> {
    let doc = ModelDocument::load(model)?;
    let names = &doc.model.feature_names;
    let mut x0 = parse_point(point, names)?;
    let mut mask = match &static_features {
        Some(spec) => apply_static(spec, &mut x0, names)?,
        None => StaticMask::empty(),
    };
    if raw {
        let Some(scaler) = &doc.scaler else {
            bail!("--raw needs a model document with a scaler");
        };
        x0 = scaler.apply(&x0)?;
        mask = StaticMask::from_point(&x0, mask.indices())?;
    }
    let y0 = match label {
        Some(l) => parse_label(&l)?,
        None => doc.model.predict(&x0)?,
    };
    let w = resolve_weights(weights, &doc)?;
    let result = solve_action(&doc.model, &x0, y0, &w, &mask, &SolverConfig::default())?;
    let base = if baseline {
        let ModelForm::Kernel(k) = &doc.model.form else {
            bail!("the support-vector baseline needs a kernel expansion");
        };
        Some(nearest_support_vector(k, &x0, y0, &w)?)
    } else {
        None
    };
    if json {
        let body = serde_json::json!({ "x0": x0, "y0": y0, "result": result, "baseline": base });
        println!("{}", serde_json::to_string_pretty(&body)?);
        return Ok(());
    }
    println!("current class {y0}, moving to the {} margin", y0.opposite());
    print!("{}", render::action_table(names, &x0, &result, doc.scaler.as_ref()));
    if let Some(b) = base {
        println!("\nnearest support vector");
        print!("{}", render::action_table(names, &x0, &b, doc.scaler.as_ref()));
    }
    Ok(())
}

/// Read a CSV in raw units and bring it onto the model's scale.
fn load_for_model(doc: &ModelDocument, path: &Path, label_column: String) -> Result<Dataset> {
    let opts = CsvOptions {
        label_column,
        normalize: false,
        ..CsvOptions::default()
    };
    let (raw, _) = load_csv_dataset(path, &opts)?;
    if raw.feature_names != doc.model.feature_names {
        bail!(
            "dataset features {:?} do not match the model's {:?}",
            raw.feature_names,
            doc.model.feature_names
        );
    }
    let Some(scaler) = &doc.scaler else {
        return Ok(raw);
    };
    let points = raw
        .points
        .iter()
        .map(|p| scaler.apply(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut data = Dataset::new(points, raw.labels, Some(raw.feature_names))?;
    data.scaler = Some(scaler.clone());
    Ok(data)
}

fn serve(host: &str, port: u16, models_dir: Option<PathBuf>) -> Result<()> {
    let registry = Arc::new(Registry::default());
    if let Some(dir) = models_dir {
        let n = registry
            .load_dir(&dir)
            .with_context(|| format!("loading models from {}", dir.display()))?;
        eprintln!("loaded {n} models from {}", dir.display());
    }
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((host, port)).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(registry))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
