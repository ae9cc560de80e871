//! Parsing of user-supplied points, weights and static masks, shared by the
//! command line and the HTTP service.

use std::collections::HashMap;

use svmact_core::analysis::weight_preset;
use svmact_core::{Error, Label, ModelDocument, Result, StaticMask, WeightVector};

/// Parse `"name=value,..."` (any order, every feature once) or a plain
/// comma-separated list in feature order.
pub fn parse_point(text: &str, names: &[String]) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.iter().all(|p| !p.contains('=')) {
        let values = parts.iter().map(|p| parse_number(p)).collect::<Result<Vec<_>>>()?;
        if values.len() != names.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                found: values.len(),
            });
        }
        return Ok(values);
    }
    let mut out: Vec<Option<f64>> = vec![None; names.len()];
    for p in parts {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got `{p}`")))?;
        let i = feature_index(key.trim(), names)?;
        if out[i].replace(parse_number(value.trim())?).is_some() {
            return Err(Error::InvalidArgument(format!("feature `{}` given twice", names[i])));
        }
    }
    out.iter()
        .zip(names)
        .map(|(v, n)| v.ok_or_else(|| Error::MissingFeature(n.clone())))
        .collect()
}

/// A feature given by name or by 0-based index.
pub fn feature_index(key: &str, names: &[String]) -> Result<usize> {
    if let Some(i) = names.iter().position(|n| n == key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if i < names.len() => Ok(i),
        _ => Err(Error::MissingFeature(key.to_string())),
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidArgument(format!("`{s}` is not a finite number")))
}

pub fn parse_label(text: &str) -> Result<Label> {
    match text.trim() {
        "+1" | "1" => Ok(Label::Positive),
        "-1" => Ok(Label::Negative),
        other => Err(Error::InvalidArgument(format!("label must be +1 or -1, got `{other}`"))),
    }
}

/// A preset name (document presets first, then built-ins) or a
/// comma-separated list.
pub fn resolve_weights(spec: &str, doc: &ModelDocument) -> Result<WeightVector> {
    let spec = spec.trim();
    if let Some(w) = doc.weight_presets.get(spec) {
        return WeightVector::new(w.clone());
    }
    if spec.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return weight_preset(spec, &doc.model.feature_names);
    }
    let values = spec
        .split(',')
        .map(|p| parse_number(p.trim()))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != doc.model.dim() {
        return Err(Error::DimensionMismatch {
            expected: doc.model.dim(),
            found: values.len(),
        });
    }
    WeightVector::new(values)
}

/// Apply `"feature=value,..."` to `x0` and pin those features there. A bare
/// feature name pins it at its current value.
pub fn apply_static(spec: &str, x0: &mut [f64], names: &[String]) -> Result<StaticMask> {
    let mut indices = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = match part.split_once('=') {
            Some((k, v)) => (k.trim(), Some(parse_number(v.trim())?)),
            None => (part, None),
        };
        let i = feature_index(key, names)?;
        if let Some(v) = value {
            x0[i] = v;
        }
        indices.push(i);
    }
    StaticMask::from_point(x0, &indices)
}

/// Named raw feature values, as accepted by the risk score.
pub fn parse_named(text: &str) -> Result<HashMap<String, f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got `{p}`")))?;
            Ok((k.trim().to_string(), parse_number(v.trim())?))
        })
        .collect()
}
