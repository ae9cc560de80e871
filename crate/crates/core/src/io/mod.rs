//! Model documents, libsvm import and CSV datasets.

mod csv;
mod document;
mod libsvm;

pub use self::csv::{load_csv_dataset, read_csv_dataset, save_csv_dataset, write_csv_dataset, CsvOptions};
pub use document::{ModelDocument, SCHEMA_VERSION};
pub use libsvm::{parse_libsvm_model, parse_libsvm_model_with_dim};
