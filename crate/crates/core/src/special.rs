//! Constants, Bernoulli numbers, log-gamma and the Barnes G-function.

use rug::{Float, Rational};
use std::sync::OnceLock;

/// zeta'(-1) = 1/12 - log A (Glaisher's constant), 30 significant digits.
pub const ZETA_PRIME_M1: f64 = -0.165_421_143_700_450_929_213_919_660_243;

/// Largest Bernoulli index kept in the table.
pub const MAX_BERNOULLI: usize = 64;

fn bernoulli_table() -> &'static Vec<Rational> {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Akiyama-Tanigawa; yields B_1 = +1/2, irrelevant since only even indices are used.
        let n = MAX_BERNOULLI;
        let mut out = Vec::with_capacity(n + 1);
        let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            a.push(Rational::from((1, (m + 1) as u64)));
            for j in (1..=m).rev() {
                let diff = Rational::from(&a[j - 1] - &a[j]);
                a[j - 1] = diff * (j as u64);
            }
            out.push(a[0].clone());
        }
        out
    })
}

/// Exact Bernoulli number B_n for n <= 64 (B_1 = +1/2 convention).
pub fn bernoulli_exact(n: usize) -> Option<Rational> {
    bernoulli_table().get(n).cloned()
}

/// B_n as f64.
pub fn bernoulli(n: usize) -> f64 {
    bernoulli_table()[n].to_f64()
}

/// log Gamma(x) for x > 0, evaluated through MPFR at 128 bits.
pub fn ln_gamma(x: f64) -> f64 {
    Float::with_val(128, x).ln_gamma().to_f64()
}

/// log n!
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Asymptotic series for log G(z+1) truncated after `terms` Bernoulli corrections.
pub fn barnes_log_g_asymptotic(z: f64, terms: usize) -> f64 {
    let lz = z.ln();
    let mut s = 0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * (2.0 * std::f64::consts::PI).ln()
        - lz / 12.0
        + ZETA_PRIME_M1;
    for k in 1..=terms {
        let k_f = k as f64;
        s += bernoulli(2 * k + 2) / (4.0 * k_f * (k_f + 1.0) * z.powi(2 * k as i32));
    }
    s
}

/// log G(x) for x > 0. Exact recursion at integers, shifted asymptotic series otherwise.
pub fn barnes_log_g(x: f64) -> f64 {
    assert!(x > 0.0, "barnes_log_g requires x > 0");
    if x.fract() == 0.0 && x < 1e7 {
        let n = x as u64;
        // log G(n) = sum_{k=1}^{n-2} log k!
        let mut s = 0.0;
        let mut lf = 0.0;
        for k in 1..n.saturating_sub(1) {
            lf += (k as f64).ln();
            s += lf;
        }
        return s;
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 30.0 {
        shift += ln_gamma(y);
        y += 1.0;
    }
    barnes_log_g_asymptotic(y - 1.0, 12) - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli_exact(0).unwrap(), Rational::from(1));
        assert_eq!(bernoulli_exact(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli_exact(4).unwrap(), Rational::from((-1, 30)));
        assert_eq!(bernoulli_exact(12).unwrap(), Rational::from((-691, 2730)));
        assert_eq!(bernoulli_exact(3).unwrap(), Rational::from(0));
        assert!(bernoulli_exact(64).is_some());
        assert!(bernoulli_exact(65).is_none());
    }

    #[test]
    fn zeta_prime_matches_glaisher() {
        let log_a = 0.248_754_477_033_784_262_547_518_825_51_f64;
        assert!((ZETA_PRIME_M1 - (1.0 / 12.0 - log_a)).abs() < 1e-16);
    }

    #[test]
    fn barnes_recursion() {
        assert_eq!(barnes_log_g(1.0), 0.0);
        assert_eq!(barnes_log_g(2.0), 0.0);
        assert!((barnes_log_g(5.0) - (12.0f64).ln()).abs() < 1e-14);
        // G(x+1) = Gamma(x) G(x) off the integers
        let x = 3.7;
        assert!((barnes_log_g(x + 1.0) - barnes_log_g(x) - ln_gamma(x)).abs() < 1e-12);
    }

    #[test]
    fn barnes_asymptotic_at_fifty() {
        let exact = barnes_log_g(51.0);
        let m = 3;
        let approx = barnes_log_g_asymptotic(50.0, m);
        let next = (bernoulli(2 * m + 4) / (4.0 * 4.0 * 5.0 * 50f64.powi(8))).abs();
        assert!((exact - approx).abs() <= next + 1e-12 * exact.abs());
    }
}
