//! Minimum-cost actions that move a point across a trained SVM decision
//! boundary onto the opposite margin.
//!
//! The crate covers the model representation and kernels, the action solver
//! and its nearest-support-vector baseline, an SMO trainer with synthetic
//! datasets, analysis helpers (feature ranking, risk score, paired
//! comparison) and model/dataset I/O.
//!
//! ```
//! use svmact_core::{linear_closed_form, Label, LinearForm, WeightVector};
//!
//! let model = LinearForm::new(vec![1.0, 1.0], 0.0).unwrap();
//! let r = linear_closed_form(&model, &[1.0, 1.0], Label::Positive, &WeightVector::ones(2)).unwrap();
//! assert!((r.xn[0] + 0.5).abs() < 1e-12 && (r.xn[1] + 0.5).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod error;
pub mod io;
pub mod kernels;
pub mod model;
pub mod solver;
pub mod trainer;

pub use analysis::{compare_solutions, interpretability_ranking, risk_score, ComparisonReport, InterpretabilityRow};
pub use error::{Error, Result};
pub use io::{parse_libsvm_model, ModelDocument};
pub use kernels::{kernel_eval, kernel_grad, KernelSpec};
pub use model::{
    weighted_distance, FeatureVector, KernelForm, Label, LinearForm, ModelForm, StaticMask, SvmModel, WeightVector,
};
pub use solver::{
    linear_closed_form, nearest_support_vector, solve_action, ActionResult, GradientMode, Method, SolverConfig,
    StepRule,
};
pub use trainer::{generate, train_svm, Dataset, SyntheticKind, TrainConfig};
