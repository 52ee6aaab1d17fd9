//! Large deviations of the smallest LUE eigenvalue.

use crate::error::{Error, Result};
use crate::freeenergy::{energy_post, energy_pre, fconst_post, fconst};
use crate::geometry::Regime;
use crate::quad;
use crate::special::ZETA_PRIME_M1;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LueParams {
    pub alpha: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

impl LueParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::Domain(format!("alpha must be nonnegative, got {alpha}")));
        }
        let s = (alpha + 1.0).sqrt();
        // (s-1)^2 = alpha^2 / (s+1)^2 keeps lambda_minus accurate for small alpha
        Ok(Self { alpha, lambda_minus: (alpha / (s + 1.0)).powi(2), lambda_plus: (s + 1.0).powi(2) })
    }

    /// Edge constant delta with density ~ (delta/pi) sqrt(x - lambda_minus).
    pub fn edge_delta(&self) -> f64 {
        0.5 * (self.lambda_plus - self.lambda_minus).sqrt() / self.lambda_minus
    }
}

pub fn mp_density(p: &LueParams, x: f64) -> f64 {
    if x <= p.lambda_minus || x >= p.lambda_plus {
        return 0.0;
    }
    ((p.lambda_plus - x) * (x - p.lambda_minus)).sqrt() / (2.0 * PI * x)
}

/// Total mass of the Marchenko-Pastur law, x = l- + (l+ - l-) sin^2 phi.
pub fn mp_mass(p: &LueParams) -> Result<f64> {
    let w = p.lambda_plus - p.lambda_minus;
    quad::integrate(
        |phi| {
            let (s, c) = phi.sin_cos();
            let x = p.lambda_minus + w * s * s;
            // sqrt((l+ - x)(x - l-)) dx = w^2 s^2 c^2 * 2 dphi
            2.0 * w * w * s * s * c * c / (2.0 * PI * x)
        },
        0.0,
        PI / 2.0,
        1e-13,
    )
}

fn pushed(t: f64, alpha: f64) -> Result<LueParams> {
    let p = LueParams::new(alpha)?;
    if !(alpha > 0.0) {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    if !(t > p.lambda_minus) {
        return Err(Error::Domain(format!("need t > lambda_minus = {}, got {t}", p.lambda_minus)));
    }
    Ok(p)
}

/// Rate function Phi(t; alpha) = alpha^2 (I^pre - I^post)(sqrt(t/alpha), 1/alpha).
pub fn phi(t: f64, alpha: f64) -> Result<f64> {
    pushed(t, alpha)?;
    let a = (t / alpha).sqrt();
    let c = 1.0 / alpha;
    Ok(alpha * alpha * (energy_pre(a, c)? - energy_post(a, c)))
}

/// Constant correction Psi(t; alpha) = (F^pre - F^post)(sqrt(t/alpha), 1/alpha).
pub fn psi(t: f64, alpha: f64) -> Result<f64> {
    pushed(t, alpha)?;
    let a = (t / alpha).sqrt();
    let c = 1.0 / alpha;
    Ok(fconst(a, c, Regime::Pre)? - fconst_post(c))
}

fn kc_big(t: f64, alpha: f64) -> f64 {
    t + 2.0 * (alpha + 2.0)
}

pub fn kc_theta(t: f64, alpha: f64) -> Result<f64> {
    if !(t > 0.0) || !(alpha > 0.0) {
        return Err(Error::Domain(format!("need t > 0 and alpha > 0, got t={t}, alpha={alpha}")));
    }
    let b = kc_big(t, alpha);
    let d = 27.0 * alpha * alpha * t;
    let rad = (b * b * b - d) / d;
    if rad < 0.0 {
        return Err(Error::Domain(format!("negative radicand at t={t}")));
    }
    Ok(rad.sqrt().atan())
}

/// Right edge U(t) of the constrained density.
pub fn kc_u(t: f64, alpha: f64) -> Result<f64> {
    let th = kc_theta(t, alpha)?;
    Ok(4.0 / 3.0 * kc_big(t, alpha) * ((th + 2.0 * PI) / 3.0).cos().powi(2))
}

/// Coulomb-gas action S(t).
pub fn kc_action(t: f64, alpha: f64) -> Result<f64> {
    let u = kc_u(t, alpha)?;
    let (su, st) = (u.sqrt(), t.sqrt());
    Ok((u + t) / 2.0 - (u - t).powi(2) / 32.0 + alpha / 4.0 * (su - st).powi(2) - ((u - t) / 4.0).ln()
        + alpha * alpha / 4.0 * (t * u).ln()
        - alpha * (alpha + 2.0) * ((su + st) / 2.0).ln())
}

/// Density of the remaining eigenvalues conditioned on lambda_1 > t.
pub fn constrained_density(t: f64, alpha: f64, x: f64) -> Result<f64> {
    pushed(t, alpha)?;
    let u = kc_u(t, alpha)?;
    if !(x > t && x < u) {
        return Err(Error::Domain(format!("x={x} outside the support ({t}, {u})")));
    }
    Ok((u - x).sqrt() / (2.0 * PI * (x - t).sqrt()) * (x - alpha * (t / u).sqrt()) / x)
}

/// Mass of the constrained density, x = t + (U - t) sin^2 phi.
pub fn constrained_mass(t: f64, alpha: f64) -> Result<f64> {
    pushed(t, alpha)?;
    let u = kc_u(t, alpha)?;
    let w = u - t;
    let k = alpha * (t / u).sqrt();
    quad::integrate(
        |phi| {
            let (s, c) = phi.sin_cos();
            let x = t + w * s * s;
            // sqrt(U-x)/sqrt(x-t) dx = 2 w c^2 dphi
            2.0 * w * c * c * (x - k) / (2.0 * PI * x)
        },
        0.0,
        PI / 2.0,
        1e-13,
    )
}

/// Large-t asymptote t - alpha log t.
pub fn phi_large_t(t: f64, alpha: f64) -> f64 {
    t - alpha * t.ln()
}

/// Limiting coefficient of (t - lambda_minus)^3 in Phi.
pub fn cubic_coefficient(alpha: f64) -> Result<f64> {
    let p = LueParams::new(alpha)?;
    Ok((alpha + 1.0).sqrt() / (12.0 * p.lambda_minus.powi(2)))
}

/// Least-squares fit of Phi ~ C x^3 + D x^4, x = t - lambda_minus on [lo, hi]; returns C.
pub fn fit_cubic_coefficient(alpha: f64, lo: f64, hi: f64, points: usize) -> Result<f64> {
    let p = LueParams::new(alpha)?;
    let (mut s66, mut s67, mut s77, mut s6y, mut s7y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in 0..points {
        let x = lo + (hi - lo) * k as f64 / (points - 1) as f64;
        let y = phi(p.lambda_minus + x, alpha)? / (x * x * x);
        // fit y = C + D x with weights 1
        s66 += 1.0;
        s67 += x;
        s77 += x * x;
        s6y += y;
        s7y += x * y;
    }
    let det = s66 * s77 - s67 * s67;
    Ok((s6y * s77 - s67 * s7y) / det)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LdpTerms {
    pub phi: f64,
    pub psi: f64,
    pub value: f64,
}

/// -Phi n^2 - (1/12) log(alpha n) + zeta'(-1) + Psi, or the leading term alone.
pub fn ldp_log_probability(n: u64, alpha: f64, t: f64, with_constant: bool) -> Result<LdpTerms> {
    let ph = phi(t, alpha)?;
    let ps = psi(t, alpha)?;
    let nf = n as f64;
    let mut value = -ph * nf * nf;
    if with_constant {
        value += -(alpha * nf).ln() / 12.0 + ZETA_PRIME_M1 + ps;
    }
    Ok(LdpTerms { phi: ph, psi: ps, value })
}
