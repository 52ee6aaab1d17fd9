//! Exact finite-N oracles in extended precision.
//!
//! Moments and incomplete-gamma entries are assembled as exact rationals (an f64
//! input is a dyadic rational) and rounded once; determinants use LU with
//! partial pivoting in MPFR floats.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;

/// Largest supported m + N.
pub const MAX_INDEX: usize = 120;
pub const DEFAULT_BITS: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactContext {
    pub n: usize,
    /// m = cN
    pub m: usize,
    pub a: f64,
    pub precision_bits: u32,
}

impl ExactContext {
    pub fn new(n: usize, m: usize, a: f64, precision_bits: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be positive".into()));
        }
        if precision_bits < 128 {
            return Err(Error::Domain(format!("precision_bits must be >= 128, got {precision_bits}")));
        }
        if m + n > MAX_INDEX {
            return Err(Error::Domain(format!("m + N = {} exceeds the supported bound {MAX_INDEX}", m + n)));
        }
        if !a.is_finite() {
            return Err(Error::Domain("a must be finite".into()));
        }
        Ok(Self { n, m, a, precision_bits })
    }

    pub fn c(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    fn a_rational(&self) -> Rational {
        Rational::from_f64(self.a).expect("finite a")
    }

    fn float(&self, v: impl Into<f64>) -> Float {
        Float::with_val(self.precision_bits, v.into())
    }
}

fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

fn moment_or_zero(ctx: &ExactContext, a: &Rational, k: usize) -> Rational {
    let (n, m) = (ctx.n, ctx.m);
    if k >= m + n {
        return Rational::new();
    }
    let top = m + n - 1 - k;
    let na = Rational::from(a * Integer::from(n));
    let mut s = Rational::new();
    for j in 0..=m.min(top) {
        let i = top - j;
        let mut term = Rational::from(binomial(m, j));
        term *= Rational::from(-a.clone()).pow((m - j) as u32);
        term *= Rational::from(-na.clone()).pow(i as u32);
        term /= factorial(i);
        s += term;
    }
    s
}

/// nu_k / (2 pi i) as an exact rational.
pub fn contour_moment_exact(ctx: &ExactContext, k: usize) -> Result<Rational> {
    if k >= ctx.m + ctx.n {
        return Err(Error::IndexOutOfRange { k, max: ctx.m + ctx.n - 1 });
    }
    Ok(moment_or_zero(ctx, &ctx.a_rational(), k))
}

/// nu_k / (2 pi i): coefficient of z^{m+N-1-k} in (z-a)^m e^{-Naz}.
pub fn contour_moment(ctx: &ExactContext, k: usize) -> Result<Float> {
    contour_moment_exact(ctx, k).map(|r| Float::with_val(ctx.precision_bits, &r))
}

/// (1/2 pi i) times the contour integral of z^k omega(z) on |z| = radius, by the trapezoid rule.
pub fn contour_moment_quadrature(ctx: &ExactContext, k: usize, radius: f64, points: usize) -> Float {
    let bits = ctx.precision_bits;
    let pi = Float::with_val(bits, Constant::Pi);
    let a = ctx.float(ctx.a);
    let na = Float::with_val(bits, &a * ctx.n as u32);
    let mut total = Complex::with_val(bits, (0, 0));
    for j in 0..points {
        let theta = Float::with_val(bits, &pi * (2 * j) as u32) / points as u32;
        let z = Complex::with_val(bits, (Float::with_val(bits, radius) * theta.clone().cos(), Float::with_val(bits, radius) * theta.sin()));
        let za = Complex::with_val(bits, &z - &a);
        // z^{k+1} (z-a)^m e^{-Naz} / z^{m+N}, the extra z from dz = i z dtheta
        let mut v = Complex::with_val(bits, za.pow(ctx.m as u32));
        v *= Complex::with_val(bits, -(Complex::with_val(bits, &z * &na))).exp();
        let e = (k + 1) as i64 - (ctx.m + ctx.n) as i64;
        v *= Complex::with_val(bits, z.pow(e));
        total += v;
    }
    let (re, _) = (total / points as u32).into_real_imag();
    re
}

/// log|det| and sign of a square matrix by LU with partial pivoting.
pub fn logdet(mut m: Vec<Vec<Float>>, bits: u32) -> Result<(Float, i32)> {
    let n = m.len();
    let mut sign = 1;
    let mut logabs = Float::with_val(bits, 0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].clone().abs().partial_cmp(&m[j][col].clone().abs()).unwrap())
            .unwrap();
        if m[piv][col].is_zero() {
            return Err(Error::SingularHankel { bits });
        }
        if piv != col {
            m.swap(piv, col);
            sign = -sign;
        }
        let p = m[col][col].clone();
        if p.is_sign_negative() {
            sign = -sign;
        }
        logabs += Float::with_val(bits, p.clone().abs().ln());
        for r in col + 1..n {
            let factor = Float::with_val(bits, &m[r][col] / &p);
            for c in col..n {
                let sub = Float::with_val(bits, &factor * &m[col][c]);
                m[r][c] -= sub;
            }
        }
    }
    Ok((logabs, sign))
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<Float>>, mut b: Vec<Float>, bits: u32) -> Result<Vec<Float>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).unwrap())
            .unwrap();
        if a[piv][col].is_zero() {
            return Err(Error::SingularHankel { bits });
        }
        a.swap(piv, col);
        b.swap(piv, col);
        for r in col + 1..n {
            let factor = Float::with_val(bits, &a[r][col] / &a[col][col]);
            for c in col..n {
                let sub = Float::with_val(bits, &factor * &a[col][c]);
                a[r][c] -= sub;
            }
            let sub = Float::with_val(bits, &factor * &b[col]);
            b[r] -= sub;
        }
    }
    let mut x = vec![Float::with_val(bits, 0); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s -= Float::with_val(bits, &a[r][c] * &x[c]);
        }
        x[r] = s / &a[r][r];
    }
    Ok(x)
}

#[derive(Debug, Clone)]
pub struct MomentTable {
    /// nu_k / (2 pi i), k = 0..=2N-1 (entries beyond m+N-1 vanish)
    pub nu: Vec<Float>,
    pub hankel_logdet: Float,
    pub hankel_sign: i32,
}

pub fn moment_table(ctx: &ExactContext) -> Result<MomentTable> {
    let bits = ctx.precision_bits;
    let a = ctx.a_rational();
    let nu: Vec<Float> = (0..2 * ctx.n).map(|k| Float::with_val(bits, &moment_or_zero(ctx, &a, k))).collect();
    let h: Vec<Vec<Float>> = (0..ctx.n).map(|j| (0..ctx.n).map(|k| nu[j + k].clone()).collect()).collect();
    let (hankel_logdet, hankel_sign) = logdet(h, bits)?;
    Ok(MomentTable { nu, hankel_logdet, hankel_sign })
}

/// Orientation sign (-1)^{N(N-1)/2} relating det[nu_{j+k}/(2 pi i)] to the positive Gram determinant.
pub fn orientation_sign(n: usize) -> i32 {
    if (n * (n - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn ln_factorial_mp(n: usize, bits: u32) -> Float {
    Float::with_val(bits, Float::with_val(bits, n as u32 + 1).ln_gamma())
}

/// log Z_N(a, c) with c = m/N.
pub fn exact_logz(ctx: &ExactContext) -> Result<Float> {
    let bits = ctx.precision_bits;
    let t = moment_table(ctx)?;
    if t.hankel_sign * orientation_sign(ctx.n) != 1 {
        return Err(Error::SingularHankel { bits });
    }
    let ln_n = Float::with_val(bits, ctx.n as u32).ln();
    let mut s = ln_factorial_mp(ctx.n, bits) + t.hankel_logdet;
    for k in 0..ctx.n {
        s += ln_factorial_mp(ctx.m + k, bits);
        s -= Float::with_val(bits, &ln_n * (ctx.m + k + 1) as u32);
    }
    Ok(s)
}

/// Exact log Z_N(0, m/N) from the Barnes G product form.
pub fn reference_logz_exact(n: usize, m: usize, bits: u32) -> Float {
    let ln_n = Float::with_val(bits, n as u32).ln();
    let mut s = ln_factorial_mp(n, bits);
    // log G(N+m+1) - log G(m+1) = sum_{j=m}^{N+m-1} log j!
    for j in m..n + m {
        s += ln_factorial_mp(j, bits);
    }
    // ((c+1/2)N^2 + N/2) = mN + N^2/2 + N/2
    let coef = (m * n) as f64 + (n * n + n) as f64 / 2.0;
    s - Float::with_val(bits, &ln_n * coef)
}

/// Monic p_N: coefficients c_0..c_N with c_N = 1.
pub fn exact_op(ctx: &ExactContext) -> Result<Vec<Float>> {
    let bits = ctx.precision_bits;
    let t = moment_table(ctx)?;
    let n = ctx.n;
    let a: Vec<Vec<Float>> = (0..n).map(|i| (0..n).map(|j| t.nu[i + j].clone()).collect()).collect();
    let b: Vec<Float> = (0..n).map(|i| Float::with_val(bits, -&t.nu[i + n])).collect();
    let mut coeffs = solve(a, b, bits)?;
    coeffs.push(Float::with_val(bits, 1));
    Ok(coeffs)
}

/// Subleading coefficient A_11 of p_N(z) = z^N + A_11 z^{N-1} + ...
pub fn exact_a11(ctx: &ExactContext) -> Result<Float> {
    let c = exact_op(ctx)?;
    Ok(c[ctx.n - 1].clone())
}

/// Evaluate a polynomial with big-float coefficients at a complex point.
pub fn eval_poly(coeffs: &[Float], z: Complex64, bits: u32) -> Complex64 {
    let zc = Complex::with_val(bits, (z.re, z.im));
    let mut acc = Complex::with_val(bits, (0, 0));
    for c in coeffs.iter().rev() {
        acc *= &zc;
        acc += c;
    }
    let (re, im) = acc.into_real_imag();
    Complex64::new(re.to_f64(), im.to_f64())
}

/// log p_N(z) at a complex point (principal log), for comparisons where p_N is large.
pub fn log_eval_poly(coeffs: &[Float], z: Complex64, bits: u32) -> Complex64 {
    let zc = Complex::with_val(bits, (z.re, z.im));
    let mut acc = Complex::with_val(bits, (0, 0));
    for c in coeffs.iter().rev() {
        acc *= &zc;
        acc += c;
    }
    let l = acc.ln();
    let (re, im) = l.into_real_imag();
    Complex64::new(re.to_f64(), im.to_f64())
}

/// P[lambda_min > t] for the n x n LUE with weight x^{alpha_n} e^{-N_w x}.
pub fn lue_gap_probability(n: usize, alpha_n: usize, t: f64, n_w: usize, bits: u32) -> Result<Float> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if n == 0 || n_w == 0 {
        return Err(Error::Domain("n and N_w must be positive".into()));
    }
    lue_gap_probability_exact(n, alpha_n, &Rational::from_f64(t).unwrap(), n_w, bits)
}

/// Same as `lue_gap_probability` with an exact rational threshold.
pub fn lue_gap_probability_exact(n: usize, alpha_n: usize, t: &Rational, n_w: usize, bits: u32) -> Result<Float> {
    if *t < 0 {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if n == 0 || n_w == 0 {
        return Err(Error::Domain("n and N_w must be positive".into()));
    }
    if *t == 0 {
        return Ok(Float::with_val(bits, 1));
    }
    let x = Rational::from(t * Integer::from(n_w));
    let nw = Integer::from(n_w);
    let smax = 2 * (n - 1) + alpha_n;
    // partial exponential sums sum_{i<=s} x^i/i!
    let mut partial = Vec::with_capacity(smax + 1);
    let mut term = Rational::from(1);
    let mut acc = Rational::new();
    for i in 0..=smax {
        if i > 0 {
            term *= &x;
            term /= Integer::from(i);
        }
        acc += &term;
        partial.push(acc.clone());
    }
    let entry = |s: usize, with_sum: bool| -> Float {
        let mut r = Rational::from(factorial(s)) / Integer::from(nw.clone().pow((s + 1) as u32));
        if with_sum {
            r *= &partial[s];
        }
        Float::with_val(bits, &r)
    };
    let build = |with_sum: bool| -> Vec<Vec<Float>> {
        (0..n).map(|j| (0..n).map(|k| entry(j + k + alpha_n, with_sum)).collect()).collect()
    };
    let (lt, st) = logdet(build(true), bits)?;
    let (l0, s0) = logdet(build(false), bits)?;
    if st != s0 {
        return Err(Error::SingularHankel { bits });
    }
    let xf = Float::with_val(bits, &x);
    let logp = lt - l0 - xf * n as u32;
    Ok(logp.exp())
}

#[derive(Debug, Clone)]
pub struct DualityCheck {
    pub lhs: Float,
    pub rhs: Float,
    pub residual: Float,
}

/// Both sides of P[lambda_1 > x^2] = e^{-cN^2 x^2} Z_N(x,c)/Z_N(0,c), size-m LUE with weight l^N e^{-Nl}.
pub fn duality_check(n: usize, m: usize, x: f64, bits: u32) -> Result<DualityCheck> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x must be nonnegative, got {x}")));
    }
    let xq = Rational::from_f64(x).unwrap();
    let x2 = Rational::from(&xq * &xq);
    let lhs = lue_gap_probability_exact(m, n, &x2, n, bits)?;
    let zx = exact_logz(&ExactContext::new(n, m, x, bits)?)?;
    let z0 = exact_logz(&ExactContext::new(n, m, 0.0, bits)?)?;
    let xr = Float::with_val(bits, x);
    let expo = zx - z0 - Float::with_val(bits, &xr * &xr) * (m * n) as u32;
    let rhs = expo.exp();
    let residual = Float::with_val(bits, &lhs - &rhs).abs();
    Ok(DualityCheck { lhs, rhs, residual })
}

pub fn duality_residual(n: usize, m: usize, x: f64, bits: u32) -> Result<Float> {
    duality_check(n, m, x, bits).map(|d| d.residual)
}

/// log E|det(G_N - z)|^{2m} = log Z_N(|z|, m/N) - log Z_N^{Gin}.
pub fn exact_log_charpoly_moment(n: usize, m: usize, z_abs: f64, bits: u32) -> Result<Float> {
    let z = exact_logz(&ExactContext::new(n, m, z_abs, bits)?)?;
    Ok(z - reference_logz_exact(n, 0, bits))
}

pub fn exact_charpoly_moment(n: usize, m: usize, z_abs: f64, bits: u32) -> Result<Float> {
    exact_log_charpoly_moment(n, m, z_abs, bits).map(|l| l.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &Float) -> f64 {
        v.to_f64()
    }

    #[test]
    fn context_validation() {
        assert!(ExactContext::new(0, 1, 0.0, 256).is_err());
        assert!(ExactContext::new(2, 2, 0.0, 64).is_err());
        assert!(ExactContext::new(60, 61, 0.0, 256).is_err());
        assert!(ExactContext::new(60, 60, 0.0, 256).is_ok());
    }

    #[test]
    fn trivial_moments() {
        let ctx = ExactContext::new(1, 0, 0.7, 256).unwrap();
        assert_eq!(contour_moment_exact(&ctx, 0).unwrap(), Rational::from(1));
        assert!(matches!(contour_moment(&ctx, 1), Err(Error::IndexOutOfRange { .. })));
        // a = 0: only k = N-1 survives
        let ctx = ExactContext::new(3, 2, 0.0, 256).unwrap();
        for k in 0..5 {
            let v = contour_moment_exact(&ctx, k).unwrap();
            assert_eq!(v, Rational::from(if k == 2 { 1 } else { 0 }));
        }
    }

    #[test]
    fn moments_match_contour_quadrature() {
        let ctx = ExactContext::new(2, 2, 0.5, 256).unwrap();
        for k in 0..=2 {
            let exact = contour_moment(&ctx, k).unwrap();
            let quad = contour_moment_quadrature(&ctx, k, 2.0, 256);
            let diff = Float::with_val(256, &exact - &quad).abs();
            assert!(diff < 1e-20, "k={k}: {}", diff.to_f64());
        }
    }

    #[test]
    fn small_partition_functions() {
        let z = exact_logz(&ExactContext::new(1, 1, 0.0, 256).unwrap()).unwrap();
        assert!(z.clone().abs() < 1e-70);
        let z = exact_logz(&ExactContext::new(2, 2, 0.0, 256).unwrap()).unwrap();
        let r = reference_logz_exact(2, 2, 256);
        assert!(Float::with_val(256, &z - &r).abs() < 1e-30);
        let f64_ref = crate::freeenergy::reference_logz(2, 1.0).unwrap();
        assert!((f(&r) - f64_ref).abs() < 1e-13);
    }

    #[test]
    fn even_in_a() {
        for &(n, m) in &[(3usize, 3usize), (4, 2)] {
            let p = exact_logz(&ExactContext::new(n, m, 0.4, 256).unwrap()).unwrap();
            let q = exact_logz(&ExactContext::new(n, m, -0.4, 256).unwrap()).unwrap();
            assert!(Float::with_val(256, &p - &q).abs() < 1e-60);
        }
    }

    #[test]
    fn op_trivial_and_orthogonal() {
        let ctx = ExactContext::new(4, 4, 0.0, 256).unwrap();
        let c = exact_op(&ctx).unwrap();
        for v in &c[..4] {
            assert!(v.clone().abs() < 1e-60);
        }
        let ctx = ExactContext::new(5, 5, 1.1, 256).unwrap();
        let c = exact_op(&ctx).unwrap();
        let t = moment_table(&ctx).unwrap();
        for j in 0..5 {
            let mut s = Float::with_val(256, 0);
            for (i, ci) in c.iter().enumerate() {
                s += Float::with_val(256, ci * &t.nu[i + j]);
            }
            assert!(s.abs() < 1e-50);
        }
    }

    #[test]
    fn lue_gap_trivial() {
        assert_eq!(f(&lue_gap_probability(3, 2, 0.0, 3, 256).unwrap()), 1.0);
        let p = lue_gap_probability(1, 0, 1.3, 1, 256).unwrap();
        assert!((f(&p) - (-1.3f64).exp()).abs() < 1e-15);
        let mut prev = 1.0;
        for k in 1..20 {
            let p = f(&lue_gap_probability(3, 3, 0.1 * k as f64, 3, 256).unwrap());
            assert!(p <= prev && p >= 0.0);
            prev = p;
        }
        assert!(lue_gap_probability(2, 2, -1.0, 2, 256).is_err());
    }

    #[test]
    fn duality_examples() {
        assert!(duality_residual(2, 2, 0.0, 256).unwrap() < 1e-70);
        assert!(duality_residual(2, 2, 0.5, 256).unwrap() < 1e-30);
        assert!(duality_residual(4, 4, 1.0, 256).unwrap() < 1e-25);
    }

    #[test]
    fn charpoly_exact_examples() {
        // z = 0: prod_k Gamma(m+k+1)/(Gamma(k+1) N^m)
        let (n, m) = (4usize, 3usize);
        let v = exact_log_charpoly_moment(n, m, 0.0, 256).unwrap();
        let mut expect = 0.0;
        for k in 0..n {
            expect += crate::special::ln_factorial((m + k) as u64) - crate::special::ln_factorial(k as u64)
                - m as f64 * (n as f64).ln();
        }
        assert!((f(&v) - expect).abs() < 1e-12);
        let one = exact_log_charpoly_moment(5, 0, 0.8, 256).unwrap();
        assert!(one.abs() < 1e-60);
    }
}
