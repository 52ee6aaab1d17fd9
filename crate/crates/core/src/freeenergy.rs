//! Energies, Robin constants, O(1) constants and the large-N expansion of log Z_N(a, c).

use crate::error::{Error, Result};
use crate::geometry::{solve_q, PreGeometry, Regime};
use crate::quad;
use crate::special::{barnes_log_g, bernoulli, ln_factorial, ZETA_PRIME_M1};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

fn need_regime(regime: Regime) -> Result<()> {
    match regime {
        Regime::AtCriticality => Err(Error::Domain("formula needs regime post or pre".into())),
        _ => Ok(()),
    }
}

fn xlogx(c: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * c.ln()
    }
}

pub fn energy_post(a: f64, c: f64) -> f64 {
    0.75 + 1.5 * c + 0.5 * c * xlogx(c) - 0.5 * (c + 1.0).powi(2) * (c + 1.0).ln() - c * a * a
}

/// I^pre written in terms of (a, q).
pub fn energy_pre_q(a: f64, c: f64, q: f64) -> f64 {
    let a2 = a * a;
    let q2 = q * q;
    let aq2 = a2 * q2;
    0.375 + a2 / 8.0 + 3.0 / (8.0 * a2 * q2 * q2) - 5.0 / (8.0 * q2) + (0.75 + a2 / 8.0) * aq2
        - 3.0 * aq2 * aq2 / 8.0
        + (2.0 * a * q).ln()
        + 2.0 * c * (2.0 * a * q2).ln()
        + c * c * (1.0 + aq2 - 2.0 * aq2 * q2).ln()
        - (c + 1.0).powi(2) * (1.0 + aq2).ln()
}

pub fn energy_pre(a: f64, c: f64) -> Result<f64> {
    Ok(energy_pre_q(a, c, solve_q(a, c)?))
}

pub fn energy(a: f64, c: f64, regime: Regime) -> Result<f64> {
    need_regime(regime)?;
    match regime {
        Regime::Post => Ok(energy_post(a, c)),
        _ => energy_pre(a, c),
    }
}

/// Re g(a) in the pre-critical phase.
pub fn re_g_at_a(a: f64, c: f64) -> Result<f64> {
    let q = solve_q(a, c)?;
    let aq2 = a * a * q * q;
    Ok(aq2 / 2.0 - 0.5 + ((1.0 + aq2) / (2.0 * a * q * q)).ln()
        + c * ((1.0 + aq2) / (1.0 + aq2 - 2.0 * aq2 * q * q)).ln())
}

/// d/da Re g(a) = a q^2.
pub fn d_re_g_da(a: f64, c: f64) -> Result<f64> {
    let q = solve_q(a, c)?;
    Ok(a * q * q)
}

pub fn robin_constant(a: f64, c: f64, regime: Regime) -> Result<f64> {
    need_regime(regime)?;
    match regime {
        Regime::Post => Ok((c + 1.0) / 2.0 - (c + 1.0) / 2.0 * (c + 1.0).ln()),
        _ => {
            let q = solve_q(a, c)?;
            let a2 = a * a;
            let aq2 = a2 * q * q;
            Ok(c * q.ln() - (c + 1.0) * ((1.0 + aq2) / (2.0 * a * q)).ln() + 0.75 + a2 / 4.0 + c / 2.0
                - (a2 / 4.0 + c + 0.75) * aq2
                + aq2 * aq2 / 2.0)
        }
    }
}

/// (1/2) * integral of Q against the equilibrium measure.
pub fn potential_integral(a: f64, c: f64, regime: Regime) -> Result<f64> {
    need_regime(regime)?;
    match regime {
        Regime::Post => Ok(c + 0.25 + 0.5 * c * xlogx(c) - 0.5 * c * (1.0 + c) * (1.0 + c).ln() - c * a * a),
        _ => {
            let q = solve_q(a, c)?;
            let a2 = a * a;
            let aq2 = a2 * q * q;
            Ok(0.375 + a2 / 4.0 + c / 2.0 - (a2 / 4.0 + c + 0.5) * aq2 + 0.375 * aq2 * aq2
                - c * re_g_at_a(a, c)?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub robin: f64,
    pub potential_integral: f64,
    pub energy: f64,
    pub re_g_a: Option<f64>,
}

pub fn energy_breakdown(a: f64, c: f64, regime: Regime) -> Result<EnergyBreakdown> {
    Ok(EnergyBreakdown {
        robin: robin_constant(a, c, regime)?,
        potential_integral: potential_integral(a, c, regime)?,
        energy: energy(a, c, regime)?,
        re_g_a: if regime == Regime::Pre { Some(re_g_at_a(a, c)?) } else { None },
    })
}

pub fn d_energy_pre_da(a: f64, c: f64) -> Result<f64> {
    let q = solve_q(a, c)?;
    let q2 = q * q;
    let aq2 = a * a * q2;
    Ok(-(1.0 - aq2) * (2.0 - q2 - aq2 * q2) / (2.0 * a * q2))
}

pub fn d_fconst_pre_da(a: f64, c: f64) -> Result<f64> {
    let q = solve_q(a, c)?;
    let q2 = q * q;
    let a4q4 = (a * q).powi(4);
    let a4q6 = a4q4 * q2;
    Ok(-q2 * (1.0 - a4q4).powi(2) / (8.0 * a * (1.0 - q2) * (1.0 - a4q6).powi(2)))
}

/// d/da (I^pre - I^post).
pub fn d_energy_diff_da(a: f64, c: f64) -> Result<f64> {
    let q = solve_q(a, c)?;
    let q2 = q * q;
    Ok((1.0 - q2).powi(2) * (1.0 - (a * q).powi(4)) / (2.0 * a * q2 * q2))
}

pub fn fconst_post(c: f64) -> f64 {
    (c / (1.0 + c)).ln() / 12.0
}

pub fn fconst_pre_q(a: f64, q: f64) -> f64 {
    let q2 = q * q;
    let aq2 = a * a * q2;
    let num = 4.0 * (1.0 + aq2 - 2.0 * aq2 * q2).ln();
    let den = 4.0 * (1.0 + aq2).ln() + 3.0 * (1.0 - q2).ln() + (1.0 - aq2 * aq2 * q2).ln();
    (num - den) / 24.0
}

pub fn fconst(a: f64, c: f64, regime: Regime) -> Result<f64> {
    need_regime(regime)?;
    match regime {
        Regime::Post => Ok(fconst_post(c)),
        _ => Ok(fconst_pre_q(a, solve_q(a, c)?)),
    }
}

/// log det_zeta of the Laplacian, evaluated from the conformal data.
pub fn detzeta_log(a: f64, c: f64, regime: Regime) -> Result<f64> {
    need_regime(regime)?;
    match regime {
        Regime::Post => Ok(-(c / (1.0 + c)).ln() / 6.0),
        _ => {
            let g = PreGeometry::new(a, c)?;
            let one = Complex64::new(1.0, 0.0);
            let fp = |w: Complex64| g.f_prime(one / w);
            let ratio = g.r.powi(4) * fp(g.z_plus) * fp(g.z_minus) / fp(Complex64::new(g.q, 0.0)).powi(2);
            Ok(ratio.ln().re / 12.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailTerm {
    /// power of N
    pub exponent: i32,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionTerms {
    pub n2: f64,
    pub nlogn: f64,
    pub n_coeff: f64,
    pub logn: f64,
    #[serde(rename = "const")]
    pub constant: f64,
    pub tail: Vec<TailTerm>,
    pub chi: i32,
    /// Order of the neglected remainder as a power of N.
    pub error_order: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub n: u64,
    pub terms: ExpansionTerms,
    pub value: f64,
}

/// Bernoulli tail of the post-critical expansion, k = 1..=m pairs.
pub fn post_tail(c: f64, m: usize) -> Vec<TailTerm> {
    let mut out = Vec::with_capacity(2 * m);
    for k in 1..=m {
        let kf = k as f64;
        out.push(TailTerm {
            exponent: 1 - 2 * k as i32,
            coefficient: bernoulli(2 * k) / (2.0 * kf * (2.0 * kf - 1.0)),
        });
        let diff = (c + 1.0).powi(-2 * k as i32) - if c > 0.0 { c.powi(-2 * k as i32) } else { 0.0 };
        out.push(TailTerm {
            exponent: -2 * k as i32,
            coefficient: bernoulli(2 * k + 2) / (4.0 * kf * (kf + 1.0)) * diff,
        });
    }
    out
}

/// Magnitude of the first term dropped from the tail when m pairs are kept.
pub fn first_omitted_tail_term(n: u64, m: usize) -> f64 {
    let k = (m + 1) as f64;
    (bernoulli(2 * m + 2) / (2.0 * k * (2.0 * k - 1.0))).abs() * (n as f64).powf(-(2.0 * k - 1.0))
}

pub fn expansion_terms(a: f64, c: f64, regime: Regime, m: usize) -> Result<ExpansionTerms> {
    need_regime(regime)?;
    let chi = if regime == Regime::Pre { 1 } else { 0 };
    let (tail, error_order) = match regime {
        Regime::Post => (post_tail(c, m), -(2 * m as i32 + 1)),
        _ => (Vec::new(), -1),
    };
    Ok(ExpansionTerms {
        n2: -energy(a, c, regime)?,
        nlogn: 0.5,
        n_coeff: 0.5 * (2.0 * PI).ln() - 1.0,
        logn: (6 - chi) as f64 / 12.0,
        constant: 0.5 * (2.0 * PI).ln() + chi as f64 * ZETA_PRIME_M1 + fconst(a, c, regime)?,
        tail,
        chi,
        error_order,
    })
}

impl ExpansionTerms {
    pub fn evaluate(&self, n: u64) -> f64 {
        let nf = n as f64;
        let ln = nf.ln();
        let tail: f64 = self.tail.iter().map(|t| t.coefficient * nf.powi(t.exponent)).sum();
        self.n2 * nf * nf + self.nlogn * nf * ln + self.n_coeff * nf + self.logn * ln + self.constant + tail
    }
}

/// Large-N expansion of log Z_N(a, c) with m Bernoulli pairs in the post-critical tail.
pub fn expansion(n: u64, a: f64, c: f64, regime: Regime, m: usize) -> Result<Expansion> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let terms = expansion_terms(a, c, regime, m)?;
    let value = terms.evaluate(n);
    Ok(Expansion { n, terms, value })
}

/// log Z_N(0, c) = log N! + log G(N+cN+1) - log G(cN+1) - ((c+1/2)N^2 + N/2) log N.
pub fn reference_logz(n: u64, c: f64) -> Result<f64> {
    if n == 0 || !(c >= 0.0) {
        return Err(Error::Domain(format!("need N >= 1 and c >= 0, got N={n}, c={c}")));
    }
    let nf = n as f64;
    let cn = c * nf;
    Ok(ln_factorial(n) + barnes_log_g(nf + cn + 1.0) - barnes_log_g(cn + 1.0)
        - ((c + 0.5) * nf * nf + nf / 2.0) * nf.ln())
}

/// H^pre and G^pre written through F(|z|); an independent coding of 3/4 - I^pre and F^pre.
pub fn charpoly_h_g_pre(z_abs: f64, c: f64) -> Result<(f64, f64)> {
    let g = PreGeometry::new(z_abs, c)?;
    let f = g.inverse_f(Complex64::new(z_abs, 0.0))?.re;
    let z2 = z_abs * z_abs;
    let f2 = f * f;
    let f4 = f2 * f2;
    let quartic = f4 + z2 * f2 - 2.0 * z2;
    let h = 0.375 - z2 / 8.0 - 3.0 * f4 / (8.0 * z2) + 5.0 * f2 / 8.0 - (0.75 + z2 / 8.0) * z2 / f2
        + 0.375 * z2 * z2 / f4
        + (2.0 * c * c - 1.0) * f.ln()
        + (c + 1.0).powi(2) * (f2 + z2).ln()
        - (2.0 * c + 1.0) * (2.0 * z_abs).ln()
        - c * c * quartic.ln();
    // (F^2 - 1)^3 in the denominator; with q = 1/F this is the (1 - q^2)^3 factor of F^pre
    let logg = (4.0 * f.ln() + 4.0 * quartic.ln() - 4.0 * (f2 + z2).ln() - 3.0 * (f2 - 1.0).ln()
        - (f4 * f2 - z2 * z2).ln())
        / 24.0;
    Ok((h, logg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharpolyMoment {
    pub chi: i32,
    pub h: f64,
    pub log_g: f64,
    pub value: f64,
}

/// log E|det(G_N - z)|^{2cN} from the large-N expansion.
pub fn charpoly_moment_asymp(z_abs: f64, c: f64, n: u64) -> Result<CharpolyMoment> {
    let regime = crate::geometry::classify(z_abs, c, crate::geometry::TAU)?;
    need_regime(regime)?;
    let nf = n as f64;
    let (chi, h, log_g, tail) = match regime {
        Regime::Post => {
            let mut tail = 0.0;
            for k in 1..=8 {
                let kf = k as f64;
                tail += bernoulli(2 * k + 2) / (4.0 * kf * (kf + 1.0))
                    * ((c + 1.0).powi(-2 * k as i32) - c.powi(-2 * k as i32) - 1.0)
                    * nf.powi(-2 * k as i32);
            }
            (0, 0.75 - energy_post(z_abs, c), fconst_post(c), tail)
        }
        _ => (1, 0.75 - energy_pre(z_abs, c)?, fconst(z_abs, c, Regime::Pre)?, 0.0),
    };
    let value = (1 - chi) as f64 / 12.0 * nf.ln() + (chi - 1) as f64 * ZETA_PRIME_M1 + log_g + h * nf * nf + tail;
    Ok(CharpolyMoment { chi, h, log_g, value })
}

/// Energy of a radial potential: w(r1) - log r1 - (1/4) int_{r0}^{r1} r w'(r)^2 dr.
pub fn radial_energy<W, D>(w: W, dw: D, r0: f64, r1: f64) -> Result<f64>
where
    W: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let integral = quad::integrate(|r| r * dw(r).powi(2), r0, r1, 1e-13)?;
    Ok(w(r1) - r1.ln() - 0.25 * integral)
}

/// Solve r w'(r) = target on [lo, hi] by bisection.
pub fn radial_support<D: Fn(f64) -> f64>(dw: D, target: f64, lo: f64, hi: f64) -> Result<f64> {
    let g = |r: f64| r * dw(r) - target;
    let (mut lo, mut hi) = (lo, hi);
    let (glo, ghi) = (g(lo), g(hi));
    if glo == 0.0 {
        return Ok(lo);
    }
    if glo.signum() == ghi.signum() {
        return Err(Error::Domain("bisection bracket does not change sign".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::a_cri;

    #[test]
    fn energy_examples() {
        assert!((energy_post(0.0, 1e-300) - 0.75).abs() < 1e-12);
        assert!((energy_post(0.0, 1.0) - (2.25 - 2.0 * 2f64.ln())).abs() < 1e-15);
        let h = 1e-6;
        let fd = (energy_post(0.3 + h, 1.0) - energy_post(0.3 - h, 1.0)) / (2.0 * h);
        assert!((fd + 2.0 * 0.3).abs() < 1e-8);
        let e = energy_pre(100.0, 1.0).unwrap() + 2.0 * 100f64.ln();
        assert!((e - 0.75).abs() < 1e-3);
    }

    #[test]
    fn robin_examples() {
        assert!((robin_constant(0.0, 1e-300, Regime::Post).unwrap() - 0.5).abs() < 1e-12);
        let r = robin_constant(100.0, 1.0, Regime::Pre).unwrap() + 100f64.ln();
        assert!((r - 0.5).abs() < 1e-3);
        assert!((re_g_at_a(100.0, 1.0).unwrap() - 100f64.ln()).abs() < 1e-3);
        for &(a, c, reg) in &[(0.2, 1.0, Regime::Post), (1.2, 1.0, Regime::Pre), (1.0, 9.0 / 16.0, Regime::Pre)] {
            let b = energy_breakdown(a, c, reg).unwrap();
            assert!((b.robin + b.potential_integral - b.energy).abs() < 1e-13);
        }
    }

    #[test]
    fn fconst_examples() {
        assert!((fconst(0.2, 1.0, Regime::Post).unwrap() - 0.5f64.ln() / 12.0).abs() < 1e-16);
        assert!(fconst(200.0, 1.0, Regime::Pre).unwrap().abs() < 1e-6);
        assert!((detzeta_log(0.2, 1.0, Regime::Post).unwrap() + 0.5f64.ln() / 6.0).abs() < 1e-16);
        assert!(fconst(a_cri(1.0), 1.0, Regime::AtCriticality).is_err());
    }

    #[test]
    fn derivative_of_difference_vanishes_at_criticality() {
        let a = a_cri(1.0) + 1e-9;
        assert!(d_energy_diff_da(a, 1.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn expansion_structure() {
        let e = expansion(8, 0.2, 1.0, Regime::Post, 2).unwrap();
        assert_eq!(e.terms.chi, 0);
        assert_eq!(e.terms.logn, 0.5);
        assert_eq!(e.terms.tail.len(), 4);
        assert_eq!(e.terms.tail[0].exponent, -1);
        assert!((e.terms.tail[0].coefficient - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(e.terms.error_order, -5);
        let p = expansion(8, 1.2, 1.0, Regime::Pre, 2).unwrap();
        assert_eq!(p.terms.chi, 1);
        assert!((p.terms.logn - 5.0 / 12.0).abs() < 1e-16);
        assert!(p.terms.tail.is_empty());
    }

    #[test]
    fn reference_examples() {
        assert!(reference_logz(1, 1.0).unwrap().abs() < 1e-14);
        assert!(reference_logz(1, 0.0).unwrap().abs() < 1e-14);
        // a = 0 expansion within the next Bernoulli term at N = 8
        let exact = reference_logz(8, 1.0).unwrap();
        let e = expansion(8, 0.0, 1.0, Regime::Post, 2).unwrap().value;
        assert!((exact - e).abs() <= 3.0 * first_omitted_tail_term(8, 2));
    }

    #[test]
    fn charpoly_forms_agree() {
        for &(z, c) in &[(1.0, 9.0 / 16.0), (1.2, 1.0), (2.0, 0.5)] {
            let (h, lg) = charpoly_h_g_pre(z, c).unwrap();
            assert!((h - (0.75 - energy_pre(z, c).unwrap())).abs() < 1e-12);
            assert!((lg - fconst(z, c, Regime::Pre).unwrap()).abs() < 1e-12);
        }
        // post, z = 0: H = -3c/2 + ((c+1)^2/2) log(c+1) - (c^2/2) log c
        let m = charpoly_moment_asymp(0.0, 1.0, 8).unwrap();
        assert!((m.h - (-1.5 + 2.0 * 2f64.ln())).abs() < 1e-15);
        // consistency with the a = 0 reference ratio Z_N(0,c)/Z_N(0,0)
        let exact = reference_logz(8, 1.0).unwrap() - reference_logz(8, 0.0).unwrap();
        assert!((m.value - exact).abs() < 1e-6);
    }

    #[test]
    fn radial_oracle() {
        let e = radial_energy(|r| r * r, |r| 2.0 * r, 0.0, 1.0).unwrap();
        assert!((e - 0.75).abs() < 1e-13);
        let c = 1.0;
        let w = move |r: f64| r * r - 2.0 * c * r.ln();
        let dw = move |r: f64| 2.0 * r - 2.0 * c / r;
        let r0 = radial_support(dw, 0.0, 0.1, 3.0).unwrap();
        let r1 = radial_support(dw, 2.0, 0.1, 3.0).unwrap();
        let e = radial_energy(w, dw, r0, r1).unwrap();
        assert!((e - energy_post(0.0, 1.0)).abs() < 1e-10);
        let shifted = radial_energy(|r| w(r) + 0.1, dw, r0, r1).unwrap();
        assert!((shifted - e - 0.1).abs() < 1e-12);
    }
}
