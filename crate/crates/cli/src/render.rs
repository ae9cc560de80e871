//! Plain-text tables for terminal output.

use svmact_core::analysis::InterpretabilityReport;
use svmact_core::trainer::Scaler;
use svmact_core::{ActionResult, ComparisonReport};

/// Per-feature action table. Raw-unit changes are shown when a scaler is
/// known.
pub fn action_table(names: &[String], x0: &[f64], r: &ActionResult, scaler: Option<&Scaler>) -> String {
    let width = names.iter().map(|n| n.len()).max().unwrap_or(0).max(7);
    let mut out = format!("{:<width$}  {:>12}  {:>12}  {:>12}", "feature", "x0", "xn", "change");
    if scaler.is_some() {
        out.push_str(&format!("  {:>14}", "change (raw)"));
    }
    out.push('\n');
    for (i, name) in names.iter().enumerate() {
        out.push_str(&format!(
            "{name:<width$}  {:>12.6}  {:>12.6}  {:>+12.6}",
            x0[i], r.xn[i], r.action[i]
        ));
        if let Some(s) = scaler {
            out.push_str(&format!("  {:>+14.6}", s.features[i].invert_delta(r.action[i])));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "distance {:.6e}  residual {:.3e}  iterations {}  converged {}\n",
        r.distance, r.feasibility_residual, r.iterations, r.converged
    ));
    if let Some(o) = r.oracle_distance {
        out.push_str(&format!("closed-form distance {o:.6e}\n"));
    }
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

pub fn comparison_summary(r: &ComparisonReport) -> String {
    let mut out = format!(
        "points {}  unsolved {}\n\
         {:<22}{:>14}{:>14}\n\
         {:<22}{:>14.6e}{:>14.6e}\n\
         {:<22}{:>14.6e}{:>14.6e}\n\
         wins {}  losses {}  ties {}  sign-test p {:.3e}\n",
        r.n_points,
        r.unsolved,
        "",
        "descent",
        "nearest SV",
        "mean distance",
        r.mean_dist_gd,
        r.mean_dist_baseline,
        "median distance",
        r.median_dist_gd,
        r.median_dist_baseline,
        r.wins,
        r.losses,
        r.ties,
        r.sign_test_p,
    );
    if let (Some(g), Some(b)) = (r.frac_risk_decreased_gd, r.frac_risk_decreased_baseline) {
        out.push_str(&format!(
            "risk decreased          {:>13.1}%{:>13.1}%\n",
            g * 100.0,
            b * 100.0
        ));
    }
    if r.low_power {
        out.push_str("warning: fewer than 10 points, the sign test has little power\n");
    }
    out
}

pub fn ranking_table(r: &InterpretabilityReport) -> String {
    let width = r
        .rows
        .iter()
        .map(|row| row.feature_name.len())
        .max()
        .unwrap_or(0)
        .max(7);
    let mut out = format!(
        "{:<width$}  {:>14}  {:>16}\n",
        "feature", "mean |change|", "median |change|"
    );
    for row in &r.rows {
        out.push_str(&format!(
            "{:<width$}  {:>14.6}  {:>16.6}\n",
            row.feature_name, row.mean_amplitude, row.median_amplitude
        ));
    }
    out.push_str(&format!("solved {}  unsolved {}\n", r.solved, r.unsolved));
    if r.low_power {
        out.push_str("warning: fewer than 10 points solved\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use svmact_core::{solve_action, Label, LinearForm, SolverConfig, StaticMask, SvmModel, WeightVector};

    #[test]
    fn action_table_lists_every_feature() {
        let model = SvmModel::linear(LinearForm::new(vec![1.0, -1.0], 0.0).unwrap());
        let x0 = [0.5, -0.5];
        let r = solve_action(
            &model,
            &x0,
            Label::Positive,
            &WeightVector::ones(2),
            &StaticMask::empty(),
            &SolverConfig::default(),
        )
        .unwrap();
        let t = action_table(&model.feature_names, &x0, &r, None);
        assert!(t.lines().nth(1).unwrap().starts_with("f1 ") && t.lines().nth(2).unwrap().starts_with("f2 "));
        assert!(t.contains("closed-form distance"));
    }
}
