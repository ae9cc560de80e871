//! Command-line and HTTP front ends for `svmact-core`.

pub mod inputs;
pub mod render;
pub mod service;
