//! SVM model representation, decision function, weighted distance and
//! static-feature reduction.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::kernels::KernelSpec;

/// Solver outputs outside this box get a warning diagnostic.
pub const SOFT_BOX: f64 = 1.05;

/// A point in feature space. Entries are finite; the dimension is at least 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("feature vector is empty".into()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for FeatureVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(v: FeatureVector) -> Self {
        v.0
    }
}

/// Per-feature cost of acting on a feature. Every weight lies in (0, 1];
/// the larger the weight, the harder the feature is to change.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("weight vector is empty".into()));
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value > 0.0 && value <= 1.0) {
                return Err(Error::InvalidWeight { index, value });
            }
        }
        Ok(Self(weights))
    }

    pub fn ones(dim: usize) -> Self {
        Self(vec![1.0; dim])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Restrict to the given feature indices.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self(indices.iter().map(|&i| self.0[i]).collect())
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(v: WeightVector) -> Self {
        v.0
    }
}

/// Binary class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_i64(value: i64) -> Result<Self> {
        match value {
            -1 => Ok(Label::Negative),
            1 => Ok(Label::Positive),
            other => Err(Error::InvalidLabel(other)),
        }
    }

    pub fn from_sign(value: f64) -> Self {
        if value >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

impl TryFrom<i64> for Label {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        Self::from_i64(value)
    }
}

impl From<Label> for i64 {
    fn from(label: Label) -> i64 {
        match label {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Negative => write!(f, "-1"),
            Label::Positive => write!(f, "+1"),
        }
    }
}

/// Hyperplane `vᵀx + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub v: Vec<f64>,
    pub b: f64,
}

impl LinearForm {
    pub fn new(v: Vec<f64>, b: f64) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidModel("decision vector is empty".into()));
        }
        if let Some(index) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if !b.is_finite() {
            return Err(Error::InvalidModel("intercept is not finite".into()));
        }
        Ok(Self { v, b })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(dot(&self.v, x) + self.b)
    }

    pub(crate) fn norm_sq(&self) -> Result<f64> {
        let vv = dot(&self.v, &self.v);
        if vv > 0.0 {
            Ok(vv)
        } else {
            Err(Error::DegenerateModel)
        }
    }
}

/// Kernel expansion `Σ (αᵢyᵢ) K(xᵢ, x) + b` over the support vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelForm {
    dim: usize,
    /// Row-major, `n_sv × dim`.
    support_vectors: Vec<f64>,
    dual_coefs: Vec<f64>,
    pub b: f64,
    pub kernel: KernelSpec,
    /// Training box constraint, when known.
    pub box_c: Option<f64>,
}

impl KernelForm {
    pub fn new(
        support_vectors: Vec<Vec<f64>>,
        dual_coefs: Vec<f64>,
        b: f64,
        kernel: KernelSpec,
        box_c: Option<f64>,
    ) -> Result<Self> {
        if support_vectors.is_empty() {
            return Err(Error::InvalidModel("no support vectors".into()));
        }
        if support_vectors.len() != dual_coefs.len() {
            return Err(Error::InvalidModel(format!(
                "{} support vectors but {} dual coefficients",
                support_vectors.len(),
                dual_coefs.len()
            )));
        }
        let dim = support_vectors[0].len();
        if dim == 0 {
            return Err(Error::InvalidModel("support vectors have dimension 0".into()));
        }
        let mut flat = Vec::with_capacity(dim * support_vectors.len());
        for sv in &support_vectors {
            check_dim(dim, sv.len())?;
            flat.extend_from_slice(sv);
        }
        if flat.iter().chain(&dual_coefs).any(|x| !x.is_finite()) || !b.is_finite() {
            return Err(Error::InvalidModel("non-finite model parameter".into()));
        }
        kernel.validate()?;
        if let Some(c) = box_c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidModel(format!("box constraint {c} must be positive")));
            }
            // small slack for rounding in exported models
            let limit = c * (1.0 + 1e-9);
            if let Some(i) = dual_coefs.iter().position(|a| a.abs() > limit) {
                return Err(Error::InvalidModel(format!(
                    "|dual coefficient {i}| = {} exceeds C = {c}",
                    dual_coefs[i].abs()
                )));
            }
        }
        Ok(Self {
            dim,
            support_vectors: flat,
            dual_coefs,
            b,
            kernel,
            box_c,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_support(&self) -> usize {
        self.dual_coefs.len()
    }

    pub fn support_vector(&self, i: usize) -> &[f64] {
        &self.support_vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn support_vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.support_vectors.chunks_exact(self.dim)
    }

    pub fn dual_coefs(&self) -> &[f64] {
        &self.dual_coefs
    }

    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.decision_value_unchecked(x))
    }

    pub(crate) fn decision_value_unchecked(&self, x: &[f64]) -> f64 {
        self.support_vectors()
            .zip(&self.dual_coefs)
            .map(|(sv, &a)| a * self.kernel.eval_unchecked(sv, x))
            .sum::<f64>()
            + self.b
    }

    /// Collapse a linear-kernel expansion to its hyperplane.
    pub fn to_linear(&self) -> Option<LinearForm> {
        if self.kernel != KernelSpec::Linear {
            return None;
        }
        let mut v = vec![0.0; self.dim];
        for (sv, &a) in self.support_vectors().zip(&self.dual_coefs) {
            for (vi, si) in v.iter_mut().zip(sv) {
                *vi += a * si;
            }
        }
        Some(LinearForm { v, b: self.b })
    }

    /// Whether support vector `i` is strictly inside the box (0 < α < C).
    /// Unknown C counts every support vector as non-bound.
    pub fn is_non_bound(&self, i: usize) -> bool {
        match self.box_c {
            Some(c) => self.dual_coefs[i].abs() < c - 1e-9,
            None => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelForm {
    Linear(LinearForm),
    Kernel(KernelForm),
}

/// A trained binary SVM with named features.
#[derive(Clone, Debug, PartialEq)]
pub struct SvmModel {
    pub form: ModelForm,
    pub feature_names: Vec<String>,
}

impl SvmModel {
    pub fn linear(form: LinearForm) -> Self {
        let names = default_feature_names(form.dim());
        Self {
            form: ModelForm::Linear(form),
            feature_names: names,
        }
    }

    pub fn kernel(form: KernelForm) -> Self {
        let names = default_feature_names(form.dim());
        Self {
            form: ModelForm::Kernel(form),
            feature_names: names,
        }
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        check_dim(self.dim(), names.len())?;
        self.feature_names = names;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        match &self.form {
            ModelForm::Linear(l) => l.dim(),
            ModelForm::Kernel(k) => k.dim(),
        }
    }

    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        match &self.form {
            ModelForm::Linear(l) => l.decision_value(x),
            ModelForm::Kernel(k) => k.decision_value(x),
        }
    }

    /// Sign of the decision value; an exact zero maps to +1.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        Ok(Label::from_sign(self.decision_value(x)?))
    }

    pub fn kernel_spec(&self) -> KernelSpec {
        match &self.form {
            ModelForm::Linear(_) => KernelSpec::Linear,
            ModelForm::Kernel(k) => k.kernel,
        }
    }

    pub fn n_support(&self) -> usize {
        match &self.form {
            ModelForm::Linear(_) => 0,
            ModelForm::Kernel(k) => k.n_support(),
        }
    }
}

pub fn default_feature_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("f{i}")).collect()
}

/// Features the user forbids changing, with their fixed values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StaticMask {
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl StaticMask {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Pairs `(index, value)`; at least one feature must stay actionable.
    pub fn new(pairs: Vec<(usize, f64)>, dim: usize) -> Result<Self> {
        let mut pairs = pairs;
        pairs.sort_by_key(|p| p.0);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidMask(format!("index {} repeated", w[0].0)));
            }
        }
        if let Some(&(i, _)) = pairs.iter().find(|p| p.0 >= dim) {
            return Err(Error::InvalidMask(format!(
                "index {i} out of range for dimension {dim}"
            )));
        }
        if pairs.len() >= dim && dim > 0 {
            return Err(Error::InvalidMask("every feature is static; nothing actionable".into()));
        }
        if let Some(&(i, _)) = pairs.iter().find(|p| !p.1.is_finite()) {
            return Err(Error::InvalidMask(format!("value at index {i} is not finite")));
        }
        let (indices, values) = pairs.into_iter().unzip();
        Ok(Self { indices, values })
    }

    /// Pin the given coordinates at their values in `x0`.
    pub fn from_point(x0: &[f64], indices: &[usize]) -> Result<Self> {
        let pairs = indices
            .iter()
            .map(|&i| {
                x0.get(i)
                    .map(|&v| (i, v))
                    .ok_or_else(|| Error::InvalidMask(format!("index {i} out of range for dimension {}", x0.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs, x0.len())
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn actionable_indices(&self, dim: usize) -> Vec<usize> {
        (0..dim).filter(|&i| !self.contains(i)).collect()
    }

    /// Mask must fit `dim` and agree bitwise with `x0` on its coordinates.
    pub(crate) fn check_against(&self, x0: &[f64]) -> Result<()> {
        if self.indices.len() >= x0.len() && !self.is_empty() {
            return Err(Error::InvalidMask("every feature is static; nothing actionable".into()));
        }
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            match x0.get(i) {
                None => {
                    return Err(Error::InvalidMask(format!(
                        "index {i} out of range for dimension {}",
                        x0.len()
                    )))
                }
                Some(x) if x.to_bits() != v.to_bits() => {
                    return Err(Error::InvalidMask(format!(
                        "static value {v} at index {i} differs from the point ({x})"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Rebuild a full vector from actionable coordinates.
    pub(crate) fn embed(&self, reduced: &[f64], dim: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(dim);
        let mut r = reduced.iter();
        let mut s = self.indices.iter().zip(&self.values).peekable();
        for i in 0..dim {
            match s.peek() {
                Some(&(&si, &sv)) if si == i => {
                    out.push(sv);
                    s.next();
                }
                _ => out.push(*r.next().expect("reduced vector too short")),
            }
        }
        out
    }
}

/// Weighted cost `Σ wᵢ² (x0ᵢ − xnᵢ)²`.
pub fn weighted_distance(x0: &[f64], xn: &[f64], w: &[f64]) -> Result<f64> {
    check_dim(x0.len(), xn.len())?;
    check_dim(x0.len(), w.len())?;
    Ok(weighted_distance_unchecked(x0, xn, w))
}

pub(crate) fn weighted_distance_unchecked(x0: &[f64], xn: &[f64], w: &[f64]) -> f64 {
    x0.iter()
        .zip(xn)
        .zip(w)
        .map(|((a, b), wi)| {
            let d = wi * (a - b);
            d * d
        })
        .sum()
}

/// Fold static coordinates into the intercept: `b' = b + Σ_static vᵢ x0ᵢ`.
/// Returns the reduced hyperplane and `x0` restricted to actionable features.
pub fn reduce_static_linear(model: &LinearForm, x0: &[f64], mask: &StaticMask) -> Result<(LinearForm, Vec<f64>)> {
    check_dim(model.dim(), x0.len())?;
    if mask.is_empty() {
        return Ok((model.clone(), x0.to_vec()));
    }
    if mask.len() >= model.dim() {
        return Err(Error::InvalidMask("every feature is static; nothing actionable".into()));
    }
    if let Some(&i) = mask.indices().iter().find(|&&i| i >= model.dim()) {
        return Err(Error::InvalidMask(format!("index {i} out of range")));
    }
    let b = model.b
        + mask
            .indices()
            .iter()
            .zip(mask.values())
            .map(|(&i, &val)| model.v[i] * val)
            .sum::<f64>();
    let keep = mask.actionable_indices(model.dim());
    let v = keep.iter().map(|&i| model.v[i]).collect();
    let x = keep.iter().map(|&i| x0[i]).collect();
    Ok((LinearForm { v, b }, x))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn outside_soft_box(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > SOFT_BOX)
        .map(|(i, _)| i)
        .collect()
}
