//! Linear atherosclerosis risk score on raw clinical units, plus the
//! matching feature order and actionability weight preset.

use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::model::WeightVector;

/// Feature names and coefficients, in canonical order.
pub const RISK_COEFFICIENTS: [(&str, f64); 10] = [
    ("SUBSC", 0.0072),
    ("TRIC", 0.0036),
    ("TRIGL", 0.00004),
    ("SYST", 0.0088),
    ("DIAST", 0.0068),
    ("BMI", 0.0191),
    ("WEIGHT", 0.0037),
    ("CHLST", 0.0049),
    ("ALCO_CONS", -0.1903),
    ("TOBA_CONS", 0.8468),
];

pub const RISK_INTERCEPT: f64 = -1.0558;

/// Name of the shipped weight preset for the ten risk features.
pub const STULONG_PRESET: &str = "stulong-default";

const STULONG_WEIGHTS: [f64; 10] = [1.0, 1.0, 0.5, 0.5, 0.5, 0.2, 0.2, 0.1, 0.05, 0.05];

/// Reference feature amplitudes (mean, median) for the RBF (γ = 1, C = 10)
/// model on the original clinical data, all-ones weights. Not reproducible
/// without that data; kept for comparison only.
pub const REFERENCE_AMPLITUDES_RBF: [(&str, f64, f64); 10] = [
    ("TOBA_CONS", 0.1989, 0.1689),
    ("CHLST", 0.0750, 0.0604),
    ("BMI", 0.0749, 0.0666),
    ("SYST", 0.0661, 0.0508),
    ("TRIGL", 0.0552, 0.0444),
    ("DIAST", 0.0525, 0.0398),
    ("TRIC", 0.0407, 0.0308),
    ("WEIGHT", 0.0376, 0.0265),
    ("SUBSC", 0.0373, 0.0269),
    ("ALCO_CONS", 0.0294, 0.0195),
];

/// Same, for the degree-4 polynomial model.
pub const REFERENCE_AMPLITUDES_POLY: [(&str, f64, f64); 10] = [
    ("TOBA_CONS", 0.2059, 0.2035),
    ("CHLST", 0.1159, 0.1071),
    ("TRIC", 0.1056, 0.0744),
    ("TRIGL", 0.0992, 0.0854),
    ("WEIGHT", 0.0900, 0.0648),
    ("SYST", 0.0834, 0.0757),
    ("ALCO_CONS", 0.0785, 0.0624),
    ("BMI", 0.0707, 0.0630),
    ("DIAST", 0.0684, 0.0576),
    ("SUBSC", 0.0654, 0.0536),
];

/// Raw clinical ranges (min, max) for the ten features.
pub const RISK_FEATURE_RANGES: [(&str, f64, f64); 10] = [
    ("SUBSC", 4.0, 70.0),
    ("TRIC", 1.0, 35.0),
    ("TRIGL", 42.0, 1197.0),
    ("SYST", 80.0, 200.0),
    ("DIAST", 50.0, 125.0),
    ("BMI", 16.98, 44.96),
    ("WEIGHT", 52.0, 133.0),
    ("CHLST", 134.0, 510.0),
    ("ALCO_CONS", 1.0, 1.67),
    ("TOBA_CONS", 0.0, 1.25),
];

fn canonical(name: &str) -> String {
    let upper = name.trim().to_ascii_uppercase();
    if upper == "TOBA_CONSO" {
        "TOBA_CONS".to_string()
    } else {
        upper
    }
}

/// Risk score from raw-unit features keyed by name. Extra keys are ignored.
pub fn risk_score(features: &HashMap<String, f64>) -> Result<f64> {
    let lookup: HashMap<String, f64> = features.iter().map(|(k, &v)| (canonical(k), v)).collect();
    let mut score = 0.0;
    for (name, coef) in RISK_COEFFICIENTS {
        let v = lookup
            .get(name)
            .ok_or_else(|| Error::MissingFeature(name.to_string()))?;
        score += coef * v;
    }
    Ok(score + RISK_INTERCEPT)
}

/// Positions of the ten risk features inside `names`, if all are present.
pub fn risk_feature_positions(names: &[String]) -> Option<[usize; 10]> {
    let canon: Vec<String> = names.iter().map(|n| canonical(n)).collect();
    let mut out = [0usize; 10];
    for (slot, (name, _)) in out.iter_mut().zip(RISK_COEFFICIENTS) {
        *slot = canon.iter().position(|c| c == name)?;
    }
    Some(out)
}

/// Risk score of a raw-unit vector laid out according to `names`.
pub fn risk_score_vector(names: &[String], raw: &[f64]) -> Result<f64> {
    check_dim(names.len(), raw.len())?;
    let pos = risk_feature_positions(names).ok_or_else(|| {
        let canon: Vec<String> = names.iter().map(|n| canonical(n)).collect();
        let missing = RISK_COEFFICIENTS
            .iter()
            .find(|(n, _)| !canon.iter().any(|c| c == n))
            .map_or("?", |(n, _)| *n);
        Error::MissingFeature(missing.to_string())
    })?;
    let score: f64 = RISK_COEFFICIENTS
        .iter()
        .zip(pos)
        .map(|((_, coef), p)| coef * raw[p])
        .sum();
    Ok(score + RISK_INTERCEPT)
}

/// Named weight presets laid out for `names`. The Stulong preset requires
/// all ten risk features; other features get weight 1.
pub fn weight_preset(name: &str, names: &[String]) -> Result<WeightVector> {
    match name {
        "ones" | "uniform" => Ok(WeightVector::ones(names.len())),
        STULONG_PRESET => {
            let pos = risk_feature_positions(names)
                .ok_or_else(|| Error::MissingFeature("stulong-default needs all ten risk features".into()))?;
            let mut w = vec![1.0; names.len()];
            for (p, v) in pos.iter().zip(STULONG_WEIGHTS) {
                w[*p] = v;
            }
            WeightVector::new(w)
        }
        other => Err(Error::InvalidArgument(format!("unknown weight preset `{other}`"))),
    }
}

pub fn risk_feature_names() -> Vec<String> {
    RISK_COEFFICIENTS.iter().map(|(n, _)| n.to_string()).collect()
}
