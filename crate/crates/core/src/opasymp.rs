//! Exterior asymptotics of the planar orthogonal polynomial p_N.

use crate::error::{Error, Result};
use crate::geometry::{post_geometry, ModelParams, PostGeometry, PreGeometry, Regime};
use crate::quad;
use num_complex::Complex64;
use serde::Serialize;

type C = Complex64;
pub type Mat2 = [[C; 2]; 2];

const I2: Mat2 = [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]];

fn mat_add(x: &Mat2, y: &Mat2) -> Mat2 {
    [[x[0][0] + y[0][0], x[0][1] + y[0][1]], [x[1][0] + y[1][0], x[1][1] + y[1][1]]]
}

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn mat_scale(x: &Mat2, s: C) -> Mat2 {
    [[x[0][0] * s, x[0][1] * s], [x[1][0] * s, x[1][1] * s]]
}

fn mat_conj(x: &Mat2) -> Mat2 {
    [[x[0][0].conj(), x[0][1].conj()], [x[1][0].conj(), x[1][1].conj()]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GeomData {
    Post(PostGeometry),
    Pre(PreGeometry),
}

/// The g-function: closed form after the transition, ray quadrature of g' before it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GEvaluator {
    pub params: ModelParams,
    pub geom: GeomData,
    pub quadrature_tol: f64,
    /// Radius of the far anchor point on the ray through z.
    pub reference_radius: f64,
    /// Laurent coefficients of g(z) - log z in powers of 1/z, starting at 1/z (pre only).
    laurent: Vec<C>,
}

/// Number of Laurent terms kept for the far anchor.
const LAURENT_TERMS: usize = 60;

impl GEvaluator {
    pub fn new(params: ModelParams) -> Result<Self> {
        let (a, c) = (params.a, params.c);
        match params.regime {
            Regime::Post => {
                let g = post_geometry(a, c)?;
                Ok(Self {
                    params,
                    geom: GeomData::Post(g),
                    quadrature_tol: 0.0,
                    reference_radius: g.outer_radius,
                    laurent: Vec::new(),
                })
            }
            Regime::Pre => {
                let g = PreGeometry::new(a, c)?;
                let reach = g.beta.norm().max(a).max(g.b);
                let laurent = laurent_coefficients(&g, LAURENT_TERMS);
                Ok(Self {
                    params,
                    geom: GeomData::Pre(g),
                    quadrature_tol: 1e-13,
                    reference_radius: 8.0 * reach.max(1.0),
                    laurent,
                })
            }
            Regime::AtCriticality => Err(Error::Domain("g-function is not defined at criticality".into())),
        }
    }

    /// Radius outside which z is treated as exterior to the motherbody.
    pub fn exterior_radius(&self) -> f64 {
        match &self.geom {
            GeomData::Post(g) => g.outer_radius,
            GeomData::Pre(g) => g.exterior_radius(),
        }
    }

    pub fn is_exterior(&self, z: C) -> bool {
        z.norm() > self.exterior_radius()
    }

    /// g'(z); pre: 2g' = a - c/(z-a) + (c+1)/z - a(z - R/q)sqrt((z-beta)(z-beta_bar))/((z-a)z).
    pub fn g_prime(&self, z: C) -> Result<C> {
        let (a, c) = (self.params.a, self.params.c);
        match &self.geom {
            GeomData::Post(_) => Ok(1.0 / z + c * (1.0 / z - 1.0 / (z - a))),
            GeomData::Pre(g) => {
                let s = g.sqrt_branch(z)?;
                let y = a * (z - g.b) * s / ((z - a) * z);
                Ok((a - c / (z - a) + (c + 1.0) / z - y) / 2.0)
            }
        }
    }

    /// g(z) - log z from the Laurent series; valid for |z| well beyond |beta|, a and R/q.
    fn far_correction(&self, z: C) -> C {
        let t = 1.0 / z;
        let mut p = t;
        let mut s = C::new(0.0, 0.0);
        for &co in &self.laurent {
            s += co * p;
            p *= t;
        }
        s
    }

    pub fn g(&self, z: C) -> Result<C> {
        let (a, c) = (self.params.a, self.params.c);
        match &self.geom {
            GeomData::Post(_) => {
                if a == 0.0 {
                    return Ok(z.ln());
                }
                Ok(z.ln() + c * (z / (z - a)).ln())
            }
            GeomData::Pre(_) => {
                let zref = z * (self.reference_radius / z.norm());
                if z.norm() >= self.reference_radius {
                    return Ok(z.ln() + self.far_correction(z));
                }
                let d = zref - z;
                let integral = quad::integrate_complex(
                    |u| {
                        let w = z + d * u;
                        match self.g_prime(w) {
                            Ok(gp) => (gp - 1.0 / w) * d,
                            Err(_) => C::new(f64::NAN, f64::NAN),
                        }
                    },
                    0.0,
                    1.0,
                    self.quadrature_tol,
                );
                let integral = match integral {
                    Ok(v) if v.re.is_finite() && v.im.is_finite() => v,
                    _ => {
                        // report the first point of the ray on the cut
                        for k in 0..=1000 {
                            let w = z + d * (k as f64 / 1000.0);
                            if let Err(e) = self.g_prime(w) {
                                return Err(e);
                            }
                        }
                        integral?
                    }
                };
                Ok(z.ln() + self.far_correction(zref) - integral)
            }
        }
    }

    /// Coefficient of 1/z in g(z) - log z.
    pub fn inverse_z_coefficient(&self) -> f64 {
        match &self.geom {
            GeomData::Post(_) => self.params.c * self.params.a,
            GeomData::Pre(_) => self.laurent[0].re,
        }
    }
}

/// Laurent coefficients e_n of g(z) - log z = sum_{n>=1} e_n z^{-n} (pre-critical).
fn laurent_coefficients(g: &PreGeometry, terms: usize) -> Vec<C> {
    let (a, c) = (g.a, g.c);
    let n = terms + 2;
    // S(t) = sqrt(1 - 2 Re(beta) t + |beta|^2 t^2), t = 1/z
    let p1 = -2.0 * g.beta.re;
    let p2 = g.beta.norm_sqr();
    let mut s = vec![0.0f64; n + 1];
    s[0] = 1.0;
    for k in 1..=n {
        let mut v = if k == 1 { p1 } else if k == 2 { p2 } else { 0.0 };
        for j in 1..k {
            v -= s[j] * s[k - j];
        }
        s[k] = v / 2.0;
    }
    // (1 - b t) S(t)
    let mut u = vec![0.0f64; n + 1];
    for k in 0..=n {
        u[k] = s[k] - if k >= 1 { g.b * s[k - 1] } else { 0.0 };
    }
    // y = a (1 - b t) S / (1 - a t)
    let mut y = vec![0.0f64; n + 1];
    let mut acc = 0.0;
    for k in 0..=n {
        acc = acc * a + u[k];
        y[k] = a * acc;
    }
    // 2g' = a + (c+1) t - c t/(1 - a t) - y
    let mut d = vec![0.0f64; n + 1];
    d[0] = a - y[0];
    for k in 1..=n {
        d[k] = -y[k] - c * a.powi(k as i32 - 1);
        if k == 1 {
            d[k] += c + 1.0;
        }
    }
    // g' - 1/z = sum_{k>=2} (d_k/2) z^{-k}  =>  g - log z = -sum (d_k/2) z^{1-k}/(k-1)
    (2..=terms + 1).map(|k| C::new(-d[k] / (2.0 * (k as f64 - 1.0)), 0.0)).collect()
}

/// Coefficients of the rational corrections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RHCoefficients {
    pub n: u64,
    pub gamma11: C,
    pub gamma12: C,
    pub h11: Mat2,
    pub h12: Mat2,
    pub h21: Mat2,
    pub h22: Mat2,
    pub beta: C,
}

/// gamma12 / gamma11 written as the resolvent sum.
pub fn gamma_ratio(g: &PreGeometry) -> C {
    let bb = g.beta_bar;
    0.8 * (1.0 / (bb - g.b) + 1.0 / (2.0 * (bb - g.beta)) - 1.0 / (bb - g.a) - 1.0 / bb)
}

pub fn rh_coefficients(g: &PreGeometry, n: u64) -> Result<RHCoefficients> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let (a, bb) = (g.a, g.beta_bar);
    let inner = a * (bb - g.b) * (bb - g.beta).sqrt() / ((bb - a) * bb);
    let gamma11 = 2f64.powf(-2.0 / 3.0) * inner.powf(2.0 / 3.0);
    let gamma12 = gamma_ratio(g) * gamma11;
    let nf = n as f64;
    let rk = (g.r * g.kappa).sqrt();
    let rk4 = rk.sqrt();
    let i = C::new(0.0, 1.0);
    let pref = C::new(1.0, 1.0) / (128.0 * 2f64.sqrt() * rk4 * gamma11.powf(2.5) * nf);
    // The off-diagonal pair carries an extra factor i; without it the 1/N part of
    // p_N is not cancelled and the pre error decays only like 1/N.
    let off = i * (19.0 * gamma11 + 30.0 * i * rk * gamma12) / 3.0;
    let h11 = mat_scale(
        &[[3.0 * gamma11 - 10.0 * i * rk * gamma12, off], [off, -3.0 * gamma11 + 10.0 * i * rk * gamma12]],
        pref,
    );
    let pref2 = 5.0 * rk4 / (48.0 * 2f64.sqrt() * gamma11.powf(1.5) * nf);
    let h12 = mat_scale(&[[C::new(-1.0, 1.0), C::new(1.0, 1.0)], [C::new(1.0, 1.0), C::new(1.0, -1.0)]], pref2);
    Ok(RHCoefficients { n, gamma11, gamma12, h11, h12, h21: mat_conj(&h11), h22: mat_conj(&h12), beta: g.beta })
}

/// Smallest |det R2| accepted before R2 is declared singular.
pub const R2_DET_FLOOR: f64 = 1e-30;

/// Entries of R1(z) R2(z) - I.
pub fn r_entries(co: &RHCoefficients, z: C) -> Result<Mat2> {
    let (b, bb) = (co.beta, co.beta.conj());
    if z == b || z == bb {
        return Err(Error::SingularR2 { re: z.re, im: z.im });
    }
    let db = 1.0 / (z - b);
    let r2 = mat_add(&I2, &mat_add(&mat_scale(&co.h21, db), &mat_scale(&co.h22, db * db)));
    let det = r2[0][0] * r2[1][1] - r2[0][1] * r2[1][0];
    if !(det.norm() >= R2_DET_FLOOR) {
        return Err(Error::SingularR2 { re: z.re, im: z.im });
    }
    let inv = mat_scale(&[[r2[1][1], -r2[0][1]], [-r2[1][0], r2[0][0]]], 1.0 / det);
    let dbb = 1.0 / (z - bb);
    let conj1 = mat_mul(&mat_mul(&r2, &co.h11), &inv);
    let conj2 = mat_mul(&mat_mul(&r2, &co.h12), &inv);
    let r1 = mat_add(&I2, &mat_add(&mat_scale(&conj1, dbb), &mat_scale(&conj2, dbb * dbb)));
    let p = mat_mul(&r1, &r2);
    Ok([[p[0][0] - 1.0, p[0][1]], [p[1][0], p[1][1] - 1.0]])
}

/// Coefficient of 1/z in R11 by the trapezoid rule on |z| = radius.
pub fn residue_r11_numeric(co: &RHCoefficients, radius: f64, points: usize) -> Result<C> {
    let mut s = C::new(0.0, 0.0);
    for k in 0..points {
        let z = C::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / points as f64);
        s += r_entries(co, z)?[0][0] * z;
    }
    Ok(s / points as f64)
}

/// Closed form -q^2 (1-a^4q^4)^2 / (16 a (1-q^2)(1-a^4q^6)^2) / N.
pub fn residue_r11_closed(a: f64, q: f64, n: u64) -> f64 {
    let q2 = q * q;
    let a4 = a.powi(4);
    -q2 * (1.0 - a4 * q2 * q2).powi(2) / (16.0 * a * (1.0 - q2) * (1.0 - a4 * q2 * q2 * q2).powi(2)) / n as f64
}

/// Main term of p_N(z) with its error class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PAsymp {
    pub value: C,
    pub log_value: C,
    /// -1 means O(N^{-inf}); otherwise the power of N in the relative error.
    pub error_order: i32,
}

pub fn p_asymp(ge: &GEvaluator, z: C, n: u64) -> Result<PAsymp> {
    if !ge.is_exterior(z) {
        return Err(Error::Domain(format!(
            "z={z} is inside the exterior proxy radius {}",
            ge.exterior_radius()
        )));
    }
    let nf = n as f64;
    let gz = ge.g(z)?;
    match &ge.geom {
        GeomData::Post(_) => {
            let log_value = nf * gz;
            Ok(PAsymp { value: log_value.exp(), log_value, error_order: -1 })
        }
        GeomData::Pre(g) => {
            let co = rh_coefficients(g, n)?;
            let r = r_entries(&co, z)?;
            let f = g.inverse_f(z)?;
            let fp = g.inverse_f_prime(z)?;
            let pref = (g.r * fp).sqrt() * (1.0 + r[0][0]) - (g.kappa * fp).sqrt() / (f - g.q) * r[0][1];
            let log_value = pref.ln() + nf * gz;
            Ok(PAsymp { value: log_value.exp(), log_value, error_order: 2 })
        }
    }
}

/// Leading coefficient of A11 in the pre-critical regime.
pub fn a11_pre_leading(a: f64, q: f64) -> f64 {
    let q2 = q * q;
    let aq2 = a * a * q2;
    (1.0 - aq2) * (2.0 - q2 - aq2 * q2) / (4.0 * a * q2)
}

pub fn a11_asymp(n: u64, a: f64, c: f64, regime: Regime) -> Result<f64> {
    let nf = n as f64;
    match regime {
        Regime::Post => Ok(c * a * nf),
        Regime::Pre => {
            let q = crate::geometry::solve_q(a, c)?;
            Ok(a11_pre_leading(a, q) * nf + residue_r11_closed(a, q, n))
        }
        Regime::AtCriticality => Err(Error::Domain("A11 asymptotics need a definite regime".into())),
    }
}

/// d/da log Z_N = 2N A11.
pub fn dlogz_da(n: u64, a: f64, c: f64, regime: Regime) -> Result<f64> {
    Ok(2.0 * n as f64 * a11_asymp(n, a, c, regime)?)
}
