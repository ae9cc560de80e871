//! Import of binary C-SVC models in the libsvm text format.
//!
//! libsvm evaluates `Σ coefᵢ K(svᵢ, x) − rho` and predicts the first entry of
//! the `label` line when that is positive. When the first label is −1 the
//! coefficients and rho are negated so the decision value keeps our sign
//! convention. The box constraint is not part of the format and stays
//! unknown.

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::model::{KernelForm, SvmModel};

/// Parse a libsvm model, taking the dimension from the largest index seen.
pub fn parse_libsvm_model(text: &str) -> Result<SvmModel> {
    parse(text, None)
}

/// Parse a libsvm model into a fixed dimension `dim`; trailing features
/// that no support vector mentions are zero.
pub fn parse_libsvm_model_with_dim(text: &str, dim: usize) -> Result<SvmModel> {
    parse(text, Some(dim))
}

fn parse(text: &str, dim: Option<usize>) -> Result<SvmModel> {
    let err = |line: usize, message: String| Error::Parse { line, message };

    let mut kernel_type: Option<String> = None;
    let mut gamma: Option<f64> = None;
    let mut degree: u32 = 3;
    let mut coef0 = 0.0;
    let mut rho: Option<f64> = None;
    let mut flip = false;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let mut saw_sv = false;
    for (no, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        if line == "SV" {
            saw_sv = true;
            break;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let one = |what: &str| -> Result<&str> {
            match rest.as_slice() {
                [v] => Ok(v),
                _ => Err(err(no, format!("`{what}` expects one value"))),
            }
        };
        let num = |what: &str| -> Result<f64> {
            one(what)?
                .parse::<f64>()
                .map_err(|_| err(no, format!("`{what}` value is not a number")))
        };
        match key {
            "svm_type" => {
                let t = one(key)?;
                if t != "c_svc" {
                    return Err(err(no, format!("unsupported svm_type `{t}`")));
                }
            }
            "kernel_type" => kernel_type = Some(one(key)?.to_string()),
            "gamma" => gamma = Some(num(key)?),
            "degree" => {
                degree = one(key)?
                    .parse()
                    .map_err(|_| err(no, "`degree` must be a non-negative integer".into()))?
            }
            "coef0" => coef0 = num(key)?,
            "rho" => rho = Some(num(key)?),
            "nr_class" => {
                if one(key)? != "2" {
                    return Err(err(no, "only binary models (nr_class 2) are supported".into()));
                }
            }
            "label" => {
                let labels: Vec<i64> = rest
                    .iter()
                    .map(|s| s.parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(no, "labels must be integers".into()))?;
                match labels.as_slice() {
                    [1, -1] => flip = false,
                    [-1, 1] => flip = true,
                    _ => return Err(err(no, format!("labels must be 1 and -1, got {labels:?}"))),
                }
            }
            "total_sv" | "nr_sv" | "probA" | "probB" => {}
            other => return Err(err(no, format!("unknown header key `{other}`"))),
        }
    }
    if !saw_sv {
        return Err(err(text.lines().count().max(1), "missing `SV` section".into()));
    }

    let kernel = match kernel_type.as_deref() {
        Some("linear") => KernelSpec::Linear,
        Some("rbf") => KernelSpec::Rbf {
            gamma: gamma.ok_or_else(|| err(0, "rbf kernel needs `gamma`".into()))?,
        },
        Some("polynomial") => KernelSpec::Polynomial {
            degree,
            gamma: gamma.ok_or_else(|| err(0, "polynomial kernel needs `gamma`".into()))?,
            coef0,
        },
        Some(other) => return Err(Error::InvalidKernel(format!("unsupported kernel_type `{other}`"))),
        None => return Err(err(0, "missing `kernel_type`".into())),
    };
    let rho = rho.ok_or_else(|| err(0, "missing `rho`".into()))?;

    let mut coefs = Vec::new();
    let mut sparse: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut max_index = 0;
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let coef: f64 = parts
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| err(no, "support vector line must start with its coefficient".into()))?;
        let mut entries = Vec::new();
        for tok in parts {
            let (i, v) = tok
                .split_once(':')
                .ok_or_else(|| err(no, format!("expected index:value, got `{tok}`")))?;
            let i: usize = i
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| err(no, format!("bad feature index `{i}`")))?;
            let v: f64 = v.parse().map_err(|_| err(no, format!("bad feature value `{v}`")))?;
            max_index = max_index.max(i);
            entries.push((i - 1, v));
        }
        coefs.push(coef);
        sparse.push(entries);
    }
    if coefs.is_empty() {
        return Err(Error::InvalidModel("no support vectors".into()));
    }

    let d = match dim {
        Some(d) if d < max_index => {
            return Err(Error::InvalidModel(format!(
                "feature index {max_index} exceeds the requested dimension {d}"
            )))
        }
        Some(d) => d,
        None => max_index.max(1),
    };
    let svs: Vec<Vec<f64>> = sparse
        .into_iter()
        .map(|entries| {
            let mut x = vec![0.0; d];
            for (i, v) in entries {
                x[i] = v;
            }
            x
        })
        .collect();
    let sign = if flip { -1.0 } else { 1.0 };
    let coefs = coefs.into_iter().map(|c| sign * c).collect();
    let form = KernelForm::new(svs, coefs, -sign * rho, kernel, None)?;
    Ok(SvmModel::kernel(form))
}
