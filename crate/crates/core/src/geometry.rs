//! Phase classification, the pre-critical conformal map and droplet geometry.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default tie tolerance on a - a_cri.
pub const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Post,
    Pre,
    AtCriticality,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Post => "post",
            Regime::Pre => "pre",
            Regime::AtCriticality => "critical",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub a: f64,
    pub c: f64,
    pub regime: Regime,
}

impl ModelParams {
    pub fn new(a: f64, c: f64) -> Result<Self> {
        Self::with_tol(a, c, TAU)
    }

    pub fn with_tol(a: f64, c: f64, tol: f64) -> Result<Self> {
        let regime = classify(a, c, tol)?;
        Ok(Self { a, c, regime })
    }
}

/// a_cri(c) = sqrt(c+1) - sqrt(c).
pub fn a_cri(c: f64) -> f64 {
    // rationalised to avoid cancellation at large c
    1.0 / ((c + 1.0).sqrt() + c.sqrt())
}

/// c_cri(a) = (1-a^2)^2 / (4a^2), the inverse relation on 0 < a < 1.
pub fn c_cri(a: f64) -> f64 {
    let d = 1.0 - a * a;
    d * d / (4.0 * a * a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValues {
    pub c: f64,
    pub a_cri: f64,
}

pub fn critical_values(c: f64) -> Result<CriticalValues> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    Ok(CriticalValues { c, a_cri: a_cri(c) })
}

pub fn classify(a: f64, c: f64, tol: f64) -> Result<Regime> {
    if !(a >= 0.0) || !(c > 0.0) {
        return Err(Error::Domain(format!("need a >= 0 and c > 0, got a={a}, c={c}")));
    }
    let d = a - a_cri(c);
    Ok(if d < -tol {
        Regime::Post
    } else if d > tol {
        Regime::Pre
    } else {
        Regime::AtCriticality
    })
}

/// Residual of the q-cubic q^6 - ((a^2+4c+2)/(2a^2)) q^4 + 1/(2a^4), scaled by 2a^4.
pub fn cubic_residual(a: f64, c: f64, q: f64) -> f64 {
    let u = q * q;
    let a2 = a * a;
    2.0 * a2 * a2 * u * u * u - a2 * (a2 + 4.0 * c + 2.0) * u * u + 1.0
}

/// Solve the q-cubic as a cubic in u = q^2 by the trigonometric formula.
pub fn solve_q(a: f64, c: f64) -> Result<f64> {
    if !(a > 0.0) || !(c > 0.0) {
        return Err(Error::NoValidRoot { a, c });
    }
    let a2 = a * a;
    let big_a = (a2 + 4.0 * c + 2.0) / (2.0 * a2);
    let d = 1.0 / (2.0 * a2 * a2);
    // u^3 - A u^2 + d = 0, u = t + A/3
    let p = -big_a * big_a / 3.0;
    let q0 = d - 2.0 * big_a.powi(3) / 27.0;
    let r = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q0 / (p * r)).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    let cubic = |u: f64| (u - big_a) * u * u + d;
    let dcubic = |u: f64| (3.0 * u - 2.0 * big_a) * u;
    let mut best: Option<f64> = None;
    for k in 0..3 {
        let mut u = r * (phi - 2.0 * PI * k as f64 / 3.0).cos() + big_a / 3.0;
        for _ in 0..3 {
            let du = dcubic(u);
            if du == 0.0 {
                break;
            }
            let step = cubic(u) / du;
            u -= step;
            if step.abs() <= 1e-17 * u.abs() {
                break;
            }
        }
        let ok = u > 0.0 && u <= 1.0 + 1e-12 && 1.0 - a2 * u >= 0.0;
        if ok {
            let u = u.min(1.0);
            best = Some(match best {
                // near criticality two admissible roots merge; keep the one that yields kappa > 0 maximally
                Some(prev) if prev < u => prev,
                _ => u,
            });
        }
    }
    best.map(f64::sqrt).ok_or(Error::NoValidRoot { a, c })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PreGeometry {
    pub a: f64,
    pub c: f64,
    pub q: f64,
    pub r: f64,
    pub kappa: f64,
    pub beta: Complex64,
    pub beta_bar: Complex64,
    /// b = R/q
    pub b: f64,
    pub z_plus: Complex64,
    pub z_minus: Complex64,
}

impl PreGeometry {
    pub fn new(a: f64, c: f64) -> Result<Self> {
        let q = solve_q(a, c)?;
        Ok(Self::from_q(a, c, q))
    }

    pub fn from_q(a: f64, c: f64, q: f64) -> Self {
        let aq = a * q;
        let r = (1.0 + aq * aq) / (2.0 * aq);
        let kappa = (1.0 - q * q) * (1.0 - aq * aq) / (2.0 * aq);
        let beta = Complex64::new(r * q - kappa / q, 2.0 * (kappa * r).sqrt());
        let im = (kappa / r).sqrt();
        Self {
            a,
            c,
            q,
            r,
            kappa,
            beta,
            beta_bar: beta.conj(),
            b: r / q,
            z_plus: Complex64::new(q, im),
            z_minus: Complex64::new(q, -im),
        }
    }

    /// f(w) = R w - kappa/(w-q) - kappa/q.
    pub fn f(&self, w: Complex64) -> Complex64 {
        self.r * w - self.kappa / (w - self.q) - self.kappa / self.q
    }

    pub fn f_prime(&self, w: Complex64) -> Complex64 {
        let d = w - self.q;
        self.r + self.kappa / (d * d)
    }

    /// sqrt((z-beta)(z-beta_bar)) with the cut on the segment [beta_bar, beta], ~ z at infinity.
    pub fn sqrt_branch(&self, z: Complex64) -> Result<Complex64> {
        let w = z - self.beta.re;
        let h = self.beta.im;
        if w.re.abs() <= 1e-14 * (1.0 + h) && w.im.abs() <= h {
            return Err(Error::BranchCut { re: z.re, im: z.im });
        }
        let t = h / w;
        Ok(w * (1.0 + t * t).sqrt())
    }

    /// Inverse map F(z) = (z + |beta| + sqrt(...)) / (2R).
    pub fn inverse_f(&self, z: Complex64) -> Result<Complex64> {
        let s = self.sqrt_branch(z)?;
        Ok((z + self.beta.norm() + s) / (2.0 * self.r))
    }

    pub fn inverse_f_prime(&self, z: Complex64) -> Result<Complex64> {
        let s = self.sqrt_branch(z)?;
        Ok((1.0 + (z - self.beta.re) / s) / (2.0 * self.r))
    }

    /// Radius beyond which points are treated as exterior to the motherbody.
    pub fn exterior_radius(&self) -> f64 {
        let outer = (0..256)
            .map(|k| self.f(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 256.0)).norm())
            .fold(0.0, f64::max);
        1.15 * self.beta.norm().max(self.b).max(self.a).max(outer)
    }
}

pub fn pre_geometry(a: f64, c: f64) -> Result<PreGeometry> {
    PreGeometry::new(a, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PostGeometry {
    pub outer_radius: f64,
    pub inner_center: f64,
    pub inner_radius: f64,
    pub beta: f64,
    pub b: f64,
}

/// Post-critical data; requires (1-a^2)^2 - 4a^2 c > 0.
pub fn post_geometry(a: f64, c: f64) -> Result<PostGeometry> {
    let disc = (1.0 - a * a).powi(2) - 4.0 * a * a * c;
    if !(a >= 0.0) || !(c > 0.0) || !(disc > 0.0) || a >= 1.0 {
        return Err(Error::Domain(format!("no post-critical geometry at a={a}, c={c}")));
    }
    let (beta, b) = if a == 0.0 {
        (0.0, f64::INFINITY)
    } else {
        let s = disc.sqrt();
        // beta written without cancellation: (a^2+1-s)/(2a) = 2a(1+c)/(a^2+1+s)
        (2.0 * a * (1.0 + c) / (a * a + 1.0 + s), (a * a + 1.0 + s) / (2.0 * a))
    };
    Ok(PostGeometry { outer_radius: (1.0 + c).sqrt(), inner_center: a, inner_radius: c.sqrt(), beta, b })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryComponent {
    pub theta: Vec<f64>,
    pub points: Vec<Complex64>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DropletBoundary {
    pub regime: Regime,
    /// Euler characteristic of the droplet.
    pub chi: i32,
    pub components: Vec<BoundaryComponent>,
}

pub fn droplet_boundary(params: &ModelParams, n_points: usize) -> Result<DropletBoundary> {
    if n_points < 8 {
        return Err(Error::Domain(format!("need at least 8 points, got {n_points}")));
    }
    let thetas: Vec<f64> = (0..n_points).map(|k| 2.0 * PI * k as f64 / n_points as f64).collect();
    match params.regime {
        Regime::Post => {
            let g = post_geometry(params.a, params.c)?;
            let circle = |center: f64, radius: f64| BoundaryComponent {
                theta: thetas.clone(),
                points: thetas.iter().map(|&t| center + Complex64::from_polar(radius, t)).collect(),
                closed: true,
            };
            Ok(DropletBoundary {
                regime: Regime::Post,
                chi: 0,
                components: vec![circle(0.0, g.outer_radius), circle(g.inner_center, g.inner_radius)],
            })
        }
        Regime::Pre => {
            let g = PreGeometry::new(params.a, params.c)?;
            let points = thetas.iter().map(|&t| g.f(Complex64::from_polar(1.0, t))).collect();
            Ok(DropletBoundary {
                regime: Regime::Pre,
                chi: 1,
                components: vec![BoundaryComponent { theta: thetas, points, closed: true }],
            })
        }
        Regime::AtCriticality => Err(Error::Domain("critical boundary is not rendered".into())),
    }
}

/// Winding number of a closed polygon around p.
pub fn winding_number(points: &[Complex64], p: Complex64) -> i32 {
    let mut total = 0.0;
    for (i, z) in points.iter().enumerate() {
        let next = points[(i + 1) % points.len()];
        total += ((next - p) / (z - p)).arg();
    }
    (total / (2.0 * PI)).round() as i32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn critical_value_examples() {
        assert!((a_cri(9.0 / 16.0) - 0.5).abs() < 1e-15);
        assert!((a_cri(1e-14) - 1.0).abs() < 1e-6);
        assert!((c_cri(0.5) - 9.0 / 16.0).abs() < 1e-15);
        assert!(critical_values(0.0).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(0.25, 9.0 / 16.0, TAU).unwrap(), Regime::Post);
        assert_eq!(classify(1.0, 9.0 / 16.0, TAU).unwrap(), Regime::Pre);
        assert_eq!(classify(0.5, 9.0 / 16.0, TAU).unwrap(), Regime::AtCriticality);
        assert_eq!(classify(0.0, 1.0, TAU).unwrap(), Regime::Post);
        assert!(classify(-0.1, 1.0, TAU).is_err());
        assert!(classify(0.1, 0.0, TAU).is_err());
    }

    #[test]
    fn q_at_criticality_is_one() {
        // q = 1 reduces the cubic to a^4 - (4c+2)a^2 + 1 = 0, whose smaller root is a_cri^2
        for &cc in &[0.25, 9.0 / 16.0, 1.0, 4.0] {
            let a = a_cri(cc);
            let a2 = a * a;
            assert!((a2 * a2 - (4.0 * cc + 2.0) * a2 + 1.0).abs() < 1e-14);
            assert!((solve_q(a, cc).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn q_large_a() {
        let q = solve_q(100.0, 1.0).unwrap();
        assert!((100.0 * q - 1.0).abs() < 2e-4);
        assert!(cubic_residual(100.0, 1.0, q).abs() < 1e-12);
    }

    #[test]
    fn pre_geometry_example() {
        let g = PreGeometry::new(1.0, 9.0 / 16.0).unwrap();
        assert!(cubic_residual(1.0, 9.0 / 16.0, g.q).abs() < 1e-14);
        assert!((g.f(c(1.0 / g.q, 0.0)) - 1.0).norm() < 1e-12);
        let aq = g.a * g.q;
        assert!((g.r - (1.0 + aq * aq) / (2.0 * aq)).abs() < 1e-14);
        assert!((g.kappa - (1.0 - g.q * g.q) * (1.0 - aq * aq) / (2.0 * aq)).abs() < 1e-14);
        assert!((g.f(g.z_plus) - g.beta).norm() < 1e-12);
        assert!(g.beta.im > 0.0);
    }

    #[test]
    fn inverse_map() {
        for &(a, cc) in &[(1.0, 9.0 / 16.0), (1.2, 1.0), (2.0, 1.0)] {
            let g = PreGeometry::new(a, cc).unwrap();
            for k in 0..12 {
                let w = Complex64::from_polar(2.0, 0.3 + k as f64 * PI / 6.0);
                assert!((g.inverse_f(g.f(w)).unwrap() - w).norm() < 1e-12);
            }
            assert!((g.inverse_f(c(a, 0.0)).unwrap() - 1.0 / g.q).norm() < 1e-12);
            // large-z expansion
            let z = c(1e4, 0.0);
            let expect = z / g.r + g.kappa / (g.r * g.q) + g.beta.im.powi(2) / (4.0 * g.r * z);
            assert!((g.inverse_f(z).unwrap() - expect).norm() < 1e-8);
            // (|beta| - Re beta)/2 = kappa/q
            assert!(((g.beta.norm() - g.beta.re) / 2.0 - g.kappa / g.q).abs() < 1e-13);
        }
    }

    #[test]
    fn branch_cut_detected() {
        let g = PreGeometry::new(1.2, 1.0).unwrap();
        assert!(matches!(g.inverse_f(c(g.beta.re, 0.0)), Err(Error::BranchCut { .. })));
        assert!(g.inverse_f(c(g.beta.re, 2.0 * g.beta.im)).is_ok());
    }

    #[test]
    fn boundaries() {
        let post = ModelParams::new(0.25, 9.0 / 16.0).unwrap();
        let bd = droplet_boundary(&post, 64).unwrap();
        assert_eq!(bd.chi, 0);
        assert_eq!(bd.components.len(), 2);
        let g = post_geometry(0.25, 9.0 / 16.0).unwrap();
        assert!(g.outer_radius - (g.inner_center + g.inner_radius) > 0.0);
        assert!(g.beta <= g.b);

        let pre = ModelParams::new(1.0, 9.0 / 16.0).unwrap();
        let bd = droplet_boundary(&pre, 256).unwrap();
        assert_eq!(bd.chi, 1);
        assert_eq!(bd.components.len(), 1);
        // the insertion point a = f(1/q) is the image of an exterior point
        assert_eq!(winding_number(&bd.components[0].points, c(1.0, 0.0)), 0);
        assert_eq!(winding_number(&bd.components[0].points, c(0.0, 0.0)), 1);
        assert!(droplet_boundary(&pre, 4).is_err());
    }
}
