/// Exact two-sided sign test: `min(1, 2·P[X ≤ min(wins, losses)])` with
/// `X ~ Binomial(wins + losses, ½)`. Ties are dropped beforehand.
pub fn sign_test(wins: usize, losses: usize) -> f64 {
    let n = wins + losses;
    if n == 0 {
        return 1.0;
    }
    let k = wins.min(losses);
    let ln_half_n = n as f64 * std::f64::consts::LN_2;
    let mut ln_choose = 0.0;
    let mut tail = 0.0;
    for i in 0..=k {
        if i > 0 {
            ln_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        tail += (ln_choose - ln_half_n).exp();
    }
    (2.0 * tail).min(1.0)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tail by integer enumeration of all 2ⁿ outcomes' counts.
    fn enumerated(wins: usize, losses: usize) -> f64 {
        let n = wins + losses;
        let k = wins.min(losses);
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![1u64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        let tail: u64 = row[..=k].iter().sum();
        (2.0 * tail as f64 / 2f64.powi(n as i32)).min(1.0)
    }

    #[test]
    fn matches_enumeration_up_to_30() {
        for n in 0..=30 {
            for wins in 0..=n {
                let p = sign_test(wins, n - wins);
                let e = if n == 0 { 1.0 } else { enumerated(wins, n - wins) };
                assert!((p - e).abs() <= 1e-12 * e.max(1e-300), "n={n} wins={wins}: {p} vs {e}");
            }
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(sign_test(0, 0), 1.0);
        assert_eq!(sign_test(5, 5), 1.0);
        // 2 · 2⁻¹⁰
        assert!((sign_test(10, 0) - 2.0 / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn median_even_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
