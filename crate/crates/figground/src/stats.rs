//! Sample statistics and Welch's unequal-variance t-test.
//!
//! Two-group comparisons use Welch's t; for two groups the classical
//! one-way analysis of variance is equivalent with F = t^2, so reports
//! quote t, the Welch-Satterthwaite degrees of freedom, and the two-sided
//! p-value.

use crate::error::Error;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation with the n-1 normalization.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    var.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Welch {
    pub t: f64,
    pub df: f64,
    /// Two-sided p-value.
    pub p: f64,
}

/// Welch's two-sample t-test (two-sided). Groups need at least two
/// observations each.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<Welch, Error> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Contract("welch test needs >= 2 observations per group".into()));
    }
    let (ma, mb) = (mean(a), mean(b));
    let (sa, sb) = (sample_std(a), sample_std(b));
    let va = sa * sa / a.len() as f64;
    let vb = sb * sb / b.len() as f64;
    let se2 = va + vb;
    if se2 == 0.0 {
        // Identical constant groups: no evidence of a difference.
        let p = if ma == mb { 1.0 } else { 0.0 };
        return Ok(Welch { t: 0.0, df: (a.len() + b.len() - 2) as f64, p });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / (va * va / (a.len() as f64 - 1.0) + vb * vb / (b.len() as f64 - 1.0));
    let p = two_sided_p(t, df);
    Ok(Welch { t, df, p })
}

/// Two-sided p-value for Student's t with `df` degrees of freedom, via the
/// regularized incomplete beta function.
pub fn two_sided_p(t: f64, df: f64) -> f64 {
    let x = df / (df + t * t);
    incomplete_beta(0.5 * df, 0.5, x)
}

/// ln Gamma(x) by the Lanczos approximation.
fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 6] = [
        76.180_091_729_471_46,
        -86.505_320_329_416_77,
        24.014_098_240_830_91,
        -1.231_739_572_450_155,
        0.120_865_097_386_617_9e-2,
        -0.539_523_938_495_3e-5,
    ];
    let mut y = x;
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000_000_000_190_015;
    for c in COEF {
        y += 1.0;
        ser += c / y;
    }
    -tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// Regularized incomplete beta I_x(a, b) by continued fraction.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(a, b, x) / a
    } else {
        1.0 - front * betacf(b, a, 1.0 - x) / b
    }
}

/// Continued-fraction evaluation for the incomplete beta (modified Lentz).
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 3e-16;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: integrate the t density by Simpson's rule.
    fn p_by_quadrature(t: f64, df: f64) -> f64 {
        let t = t.abs();
        let ln_norm = ln_gamma((df + 1.0) / 2.0)
            - ln_gamma(df / 2.0)
            - 0.5 * (df * std::f64::consts::PI).ln();
        let pdf = |x: f64| (ln_norm - (df + 1.0) / 2.0 * (1.0 + x * x / df).ln()).exp();
        // Tail mass from t to a far cutoff.
        let hi = t + 400.0;
        let n = 400_000;
        let h = (hi - t) / n as f64;
        let mut sum = pdf(t) + pdf(hi);
        for i in 1..n {
            let x = t + i as f64 * h;
            sum += pdf(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        2.0 * sum * h / 3.0
    }

    #[test]
    fn p_values_match_quadrature_oracle() {
        for (t, df) in [(1.0, 5.0), (2.5, 12.0), (0.3, 30.0), (4.0, 8.5), (1.8974, 5.88)] {
            let p = two_sided_p(t, df);
            let oracle = p_by_quadrature(t, df);
            assert!(
                (p - oracle).abs() < 1e-6,
                "t={t} df={df}: p={p} oracle={oracle}"
            );
        }
    }

    #[test]
    fn textbook_two_sample_case() {
        // Hand-computed: a = {1..5}, b = {2,4,6,8,10}.
        // mean 3 vs 6, s^2 2.5 vs 10, t = -3 / sqrt(0.5 + 2) = -1.8974,
        // df = 6.25 / (0.25/4 + 4/4) = 5.882.
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 4.0, 6.0, 8.0, 10.0];
        let w = welch_t_test(&a, &b).unwrap();
        assert!((w.t - (-1.897_366_596_101_028)).abs() < 1e-12);
        assert!((w.df - 5.882_352_941_176_47).abs() < 1e-10);
        let oracle = p_by_quadrature(w.t, w.df);
        assert!((w.p - oracle).abs() < 1e-6);
        assert!(w.p > 0.05 && w.p < 0.2);
    }

    #[test]
    fn identical_arms_show_no_significance() {
        let a = [3.0, 4.0, 5.0, 6.0];
        let w = welch_t_test(&a, &a).unwrap();
        assert_eq!(w.t, 0.0);
        assert!((w.p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn welch_is_antisymmetric_under_arm_exchange() {
        let a = [1.0, 2.0, 3.5, 2.2];
        let b = [4.0, 5.5, 6.1, 5.0, 4.4];
        let ab = welch_t_test(&a, &b).unwrap();
        let ba = welch_t_test(&b, &a).unwrap();
        assert!((ab.t + ba.t).abs() < 1e-12);
        assert!((ab.p - ba.p).abs() < 1e-12);
        assert!((ab.df - ba.df).abs() < 1e-12);
    }

    #[test]
    fn std_is_nonnegative_and_zero_for_singletons() {
        assert_eq!(sample_std(&[4.2]), 0.0);
        assert!(sample_std(&[1.0, 5.0, 9.0]) > 0.0);
    }
}
