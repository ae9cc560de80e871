use crate::error::{check_dim, Error, Result};
use crate::model::{weighted_distance_unchecked, KernelForm, Label, WeightVector};

use super::{ActionResult, Method};

/// A support vector qualifies as a baseline answer when
/// `−y0·f(s) ≥ 1 − BASELINE_MARGIN_TOL`.
pub const BASELINE_MARGIN_TOL: f64 = 1e-6;

/// Move to the closest (weighted) support vector that is at least on the
/// margin of the desired class.
pub fn nearest_support_vector(model: &KernelForm, x0: &[f64], y0: Label, w: &WeightVector) -> Result<ActionResult> {
    check_dim(model.dim(), x0.len())?;
    check_dim(model.dim(), w.len())?;
    let target = -y0.value();

    let mut best: Option<(f64, usize, f64)> = None;
    let mut target_side = 0;
    for (i, sv) in model.support_vectors().enumerate() {
        let f = model.decision_value_unchecked(sv);
        let q = target * f;
        if q > 0.0 {
            target_side += 1;
        }
        if q < 1.0 - BASELINE_MARGIN_TOL {
            continue;
        }
        let d = weighted_distance_unchecked(x0, sv, w);
        if best.is_none_or(|(bd, _, _)| d < bd) {
            best = Some((d, i, f));
        }
    }

    let Some((_, i, f)) = best else {
        return Err(Error::NoQualifyingSupportVector(format!(
            "0 of {} support vectors reach the {} margin ({} are on that side of the boundary)",
            model.n_support(),
            y0.opposite(),
            target_side
        )));
    };
    let xn = model.support_vector(i).to_vec();
    ActionResult::assemble(x0, xn, w, f, y0, 0, true, Method::NearestSupportVector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelSpec;

    /// Linear kernel model whose margin at x = 1 is the target for y0 = −1.
    fn two_sv_model(svs: Vec<Vec<f64>>) -> KernelForm {
        // f(x) = x₀ + 0·x₁, qualifying when f ≥ 1; a third SV on the
        // negative side never qualifies
        let mut all = svs;
        all.push(vec![-1.0, 0.0]);
        let n = all.len();
        let mut coefs = vec![0.0; n];
        coefs[n - 1] = -1.0;
        KernelForm::new(all, coefs, 0.0, KernelSpec::Linear, None).unwrap()
    }

    #[test]
    fn picks_closest_qualifying() {
        let m = two_sv_model(vec![vec![1.0, 0.0], vec![3.0, 0.0]]);
        let r = nearest_support_vector(&m, &[0.0, 0.0], Label::Negative, &WeightVector::ones(2)).unwrap();
        assert_eq!(r.xn.as_slice(), &[1.0, 0.0]);
        assert_eq!(r.method, Method::NearestSupportVector);
    }

    #[test]
    fn weights_reorder_candidates() {
        // f = 2·(0.5x₀ + 0.5x₁) = x₀ + x₁, so (1,0) and (0,2) both qualify
        let m = KernelForm::new(
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![0.5, 0.5]],
            vec![0.0, 0.0, 2.0],
            0.0,
            KernelSpec::Linear,
            None,
        )
        .unwrap();
        let w = WeightVector::new(vec![1.0, 0.1]).unwrap();
        let r = nearest_support_vector(&m, &[0.0, 0.0], Label::Negative, &w).unwrap();
        assert_eq!(r.xn.as_slice(), &[0.0, 2.0]);
        assert!((r.distance - 0.04).abs() < 1e-15);
    }

    #[test]
    fn no_qualifying_support_vector() {
        let m = KernelForm::new(vec![vec![0.5, 0.0]], vec![1.0], 0.0, KernelSpec::Linear, None).unwrap();
        // f(sv) = 0.25 < 1
        let err = nearest_support_vector(&m, &[0.0, 0.0], Label::Negative, &WeightVector::ones(2)).unwrap_err();
        assert!(matches!(err, Error::NoQualifyingSupportVector(_)));
    }
}
