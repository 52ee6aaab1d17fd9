//! Hastings-McLeod solution of Painleve II and the Tracy-Widom distribution.

use crate::error::{Error, Result};
use crate::geometry::a_cri;
use crate::special::ZETA_PRIME_M1;
use rug::Float;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;
use twofloat::TwoFloat;

/// Beyond this |x| the Maclaurin series gets expensive and the asymptotic forms are used.
const SERIES_LIMIT: f64 = 30.0;

fn series_bits(x: f64) -> u32 {
    // Terms grow like exp((2/3)|x|^{3/2}); keep ~100 bits above the largest term.
    128 + (1.5 * x.abs().powf(1.5)).ceil() as u32
}

/// (Ai(x), Ai'(x)) in MPFR at the given precision using the Maclaurin series.
pub fn airy_pair_mp(x: f64, bits: u32) -> (Float, Float) {
    let xf = Float::with_val(bits, x);
    let x2 = Float::with_val(bits, &xf * &xf);
    let x3 = Float::with_val(bits, &x2 * &xf);
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));

    // f = sum x^{3k} 3^k (1/3)_k / (3k)!, g = sum x^{3k+1} 3^k (2/3)_k / (3k+1)!
    let mut tf = Float::with_val(bits, 1);
    let mut tg = xf.clone();
    let mut tfp = Float::with_val(bits, &x2 / 2u32);
    let mut tgp = Float::with_val(bits, 1);
    let mut f = tf.clone();
    let mut g = tg.clone();
    let mut fp = tfp.clone();
    let mut gp = tgp.clone();
    let mut k: u64 = 1;
    loop {
        let kk = k as f64;
        tf *= &x3;
        tf /= (3.0 * kk - 1.0) * 3.0 * kk;
        tg *= &x3;
        tg /= 3.0 * kk * (3.0 * kk + 1.0);
        if k >= 2 {
            tfp *= &x3;
            tfp /= 3.0 * (kk - 1.0) * (3.0 * kk - 1.0);
        }
        tgp *= &x3;
        tgp /= (3.0 * kk - 2.0) * 3.0 * kk;
        f += &tf;
        g += &tg;
        if k >= 2 {
            fp += &tfp;
        }
        gp += &tgp;
        let scale = Float::with_val(bits, f.abs_ref()) + Float::with_val(bits, g.abs_ref()) + 1u32;
        let big = tf.clone().abs().max(&tg.clone().abs()).max(&tfp.clone().abs()).max(&tgp.clone().abs());
        if k > 3 && big < Float::with_val(bits, &eps * &scale) {
            break;
        }
        k += 1;
    }
    let zero = Float::with_val(bits, 0);
    let c1 = zero.clone().ai();
    let third = Float::with_val(bits, 1) / 3u32;
    use rug::ops::Pow;
    let c2 = Float::with_val(bits, 3).pow(Float::with_val(bits, -&third)) / Float::with_val(bits, &third).gamma();
    let ai = Float::with_val(bits, &c1 * &f) - Float::with_val(bits, &c2 * &g);
    let aip = Float::with_val(bits, &c1 * &fp) - Float::with_val(bits, &c2 * &gp);
    (ai, aip)
}

fn asym_coeffs(terms: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..terms {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// Large-|x| asymptotic forms of (Ai, Ai'), truncated after `terms` terms.
pub fn airy_asymptotic(x: f64, terms: usize) -> (f64, f64) {
    let (u, v) = asym_coeffs(terms);
    let ax = x.abs();
    let zeta = 2.0 / 3.0 * ax.powf(1.5);
    let q = ax.powf(0.25);
    if x > 0.0 {
        let (mut su, mut sv, mut p) = (0.0, 0.0, 1.0);
        for k in 0..terms {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            su += sign * u[k] * p;
            sv += sign * v[k] * p;
            p /= zeta;
        }
        let pref = (-zeta).exp() / (2.0 * PI.sqrt());
        (pref / q * su, -pref * q * sv)
    } else {
        let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
        let mut p = 1.0;
        for k in 0..terms {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                ue += sign * u[k] * p;
                ve += sign * v[k] * p;
            } else {
                uo += sign * u[k] * p;
                vo += sign * v[k] * p;
            }
            p /= zeta;
        }
        let th = zeta + PI / 4.0;
        let ai = (th.sin() * ue - th.cos() * uo) / (PI.sqrt() * q);
        let aip = -q / PI.sqrt() * (th.cos() * ve + th.sin() * vo);
        (ai, aip)
    }
}

/// (Ai(x), Ai'(x)).
pub fn airy(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_LIMIT {
        let (a, b) = airy_pair_mp(x, series_bits(x));
        (a.to_f64(), b.to_f64())
    } else {
        airy_asymptotic(x, 12)
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy(x).1
}

/// Tail integrals (int_s^inf Ai^2, int_s^inf x Ai^2) in closed form.
pub fn airy_tail_integrals(s: f64) -> (f64, f64) {
    let (a, ap) = airy(s);
    let i1 = ap * ap - s * a * a;
    let i2 = -(s * s * a * a - s * ap * ap + a * ap) / 3.0;
    (i1, i2)
}

// Dormand-Prince 5(4) tableau as exact ratios.
const C: [(i64, i64); 7] = [(0, 1), (1, 5), (3, 10), (4, 5), (8, 9), (1, 1), (1, 1)];
const A: [[(i64, i64); 6]; 7] = [
    [(0, 1); 6],
    [(1, 5), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(3, 40), (9, 40), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(44, 45), (-56, 15), (32, 9), (0, 1), (0, 1), (0, 1)],
    [(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729), (0, 1), (0, 1)],
    [(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656), (0, 1)],
    [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
];
const B5: [(i64, i64); 7] = [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84), (0, 1)];
const B4: [(i64, i64); 7] =
    [(5179, 57600), (0, 1), (7571, 16695), (393, 640), (-92097, 339200), (187, 2100), (1, 40)];

struct Tableau {
    c: [TwoFloat; 7],
    a: [[TwoFloat; 6]; 7],
    b5: [TwoFloat; 7],
    b4: [TwoFloat; 7],
}

fn ratio(r: (i64, i64)) -> TwoFloat {
    // TwoFloat division is only good to ~1e-18, so refine with one residual correction
    let (a, b) = (TwoFloat::from(r.0 as f64), TwoFloat::from(r.1 as f64));
    let x = TwoFloat::from(r.0 as f64 / r.1 as f64);
    x + (a - x * b) / b
}

fn tableau() -> &'static Tableau {
    static T: OnceLock<Tableau> = OnceLock::new();
    T.get_or_init(|| Tableau {
        c: C.map(ratio),
        a: A.map(|row| row.map(ratio)),
        b5: B5.map(ratio),
        b4: B4.map(ratio),
    })
}

fn to_dd(x: &Float) -> TwoFloat {
    let hi = x.to_f64();
    let lo = Float::with_val(x.prec(), x - hi).to_f64();
    TwoFloat::new_add(hi, lo)
}

/// State (hm_q, hm_q', int_s^{s_max} hm_q^2, int_s^{s_max} x hm_q^2) in double-double.
type State = [TwoFloat; 4];

fn rhs(s: TwoFloat, y: &State) -> State {
    let q = y[0];
    let q2 = q * q;
    [y[1], s * q + 2.0 * q2 * q, -q2, -(s * q2)]
}

fn dp_step(s: TwoFloat, y: &State, h: TwoFloat) -> (State, f64) {
    let t = tableau();
    let zero = TwoFloat::from(0.0);
    let mut k = [[zero; 4]; 7];
    k[0] = rhs(s, y);
    for i in 1..7 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(i) {
            for (d, v) in yi.iter_mut().enumerate() {
                *v += h * t.a[i][j] * kj[d];
            }
        }
        k[i] = rhs(s + t.c[i] * h, &yi);
    }
    let mut y5 = *y;
    let mut diff = [zero; 4];
    for i in 0..7 {
        for d in 0..4 {
            y5[d] += h * t.b5[i] * k[i][d];
            diff[d] += h * (t.b5[i] - t.b4[i]) * k[i][d];
        }
    }
    let mut err: f64 = 0.0;
    for d in 0..4 {
        let (a, b) = (f64::from(y[d]).abs(), f64::from(y5[d]).abs());
        // q and q' are tiny near s_max, so they are controlled in relative terms
        let sc = if d < 2 { a.max(b).max(1e-300) } else { 1.0 + a.max(b) };
        err = err.max(f64::from(diff[d]).abs() / sc);
    }
    (y5, err)
}

/// Linearised growth exp((2 sqrt 2 / 3)|s|^{3/2}) of perturbations of the solution between 0 and s < 0.
fn growth(s: f64) -> f64 {
    (2.0 * 2f64.sqrt() / 3.0 * s.min(0.0).abs().powf(1.5)).exp()
}

/// Smallest local tolerance used; the double-double unit roundoff is about 1e-32.
const LOCAL_TOL_FLOOR: f64 = 1e-28;

/// Local tolerance at s such that errors committed there stay below `tol` once carried to `s_min`.
fn local_tol(tol: f64, s: f64, s_min: f64) -> f64 {
    (tol * growth(s) / growth(s_min)).max(LOCAL_TOL_FLOOR)
}

/// Integrates from (s0, y0) to s1 with step control; returns the end state and the accepted step count.
fn integrate(s0: f64, y0: State, s1: f64, tol: f64, s_floor: f64, h_init: f64) -> Result<(State, usize)> {
    if s0 == s1 {
        return Ok((y0, 0));
    }
    let dir = if s1 < s0 { -1.0 } else { 1.0 };
    let target = TwoFloat::from(s1);
    let mut s = TwoFloat::from(s0);
    let mut y = y0;
    let mut h = h_init.abs().min((s1 - s0).abs()) * dir;
    let mut steps = 0;
    loop {
        let remaining = f64::from(target - s);
        let last = h.abs() >= remaining.abs();
        let h_try = if last { target - s } else { TwoFloat::from(h) };
        let sf = f64::from(s);
        let lt = local_tol(tol, sf, s_floor);
        let (y_new, err) = dp_step(s, &y, h_try);
        if !err.is_finite() {
            return Err(Error::BlowUp { s: sf });
        }
        if err <= lt {
            s = if last { target } else { s + h_try };
            y = y_new;
            steps += 1;
            let sf = f64::from(s);
            let q = f64::from(y[0]);
            if !q.is_finite() || q.abs() > 10.0 * (sf.min(-1.0) / -2.0).sqrt() {
                return Err(Error::BlowUp { s: sf });
            }
            if last {
                return Ok((y, steps));
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * (lt / err).powf(0.2)).clamp(0.2, 5.0) };
        h = f64::from(h_try) * fac;
        if h.abs() < 1e-12 {
            return Err(Error::BlowUp { s: sf });
        }
    }
}

/// Hastings-McLeod solution on a descending grid with F_TW at the grid nodes.
#[derive(Debug, Clone, Serialize)]
pub struct TWSolution {
    pub s_grid: Vec<f64>,
    pub q_vals: Vec<f64>,
    #[serde(rename = "F_vals")]
    pub f_vals: Vec<f64>,
    pub ode_tol: f64,
    #[serde(skip)]
    states: Vec<State>,
    #[serde(skip)]
    tail: (f64, f64),
    pub steps: usize,
}

/// Spacing of the stored grid.
pub const GRID_STEP: f64 = 1.0 / 16.0;

pub fn hastings_mcleod(s_min: f64, s_max: f64, tol: f64) -> Result<TWSolution> {
    if !(s_max >= 6.0) || !(s_min >= -12.0) || !(s_min < s_max) {
        return Err(Error::Domain(format!("need -12 <= s_min < s_max and s_max >= 6, got [{s_min}, {s_max}]")));
    }
    if !(tol >= 1e-12) {
        return Err(Error::Domain(format!("ode tolerance {tol:e} below 1e-12")));
    }
    let (a, ap) = airy_pair_mp(s_max, series_bits(s_max));
    let zero = TwoFloat::from(0.0);
    let mut y: State = [to_dd(&a), to_dd(&ap), zero, zero];
    let tail = airy_tail_integrals(s_max);
    let mut s_grid = vec![s_max];
    let mut states = vec![y];
    let mut steps = 0;
    let mut s = s_max;
    let mut h = 0.05;
    while s > s_min {
        let next = (s - GRID_STEP).max(s_min);
        let (y_new, n) = integrate(s, y, next, tol, s_min, h)?;
        steps += n;
        h = (s - next).abs() / n.max(1) as f64;
        s = next;
        y = y_new;
        s_grid.push(s);
        states.push(y);
    }
    let q_vals = states.iter().map(|st| f64::from(st[0])).collect();
    let f_vals = s_grid.iter().zip(&states).map(|(&t, st)| log_cdf_from_state(t, st, tail).exp()).collect();
    Ok(TWSolution { s_grid, q_vals, f_vals, ode_tol: tol, states, tail, steps })
}

fn log_cdf_from_state(t: f64, st: &State, tail: (f64, f64)) -> f64 {
    let v = (st[3] + tail.1) - (st[2] + tail.0) * t;
    -f64::from(v)
}

impl TWSolution {
    pub fn s_min(&self) -> f64 {
        *self.s_grid.last().unwrap()
    }

    pub fn s_max(&self) -> f64 {
        self.s_grid[0]
    }

    /// State at t reached from the nearest stored node above it.
    fn state_at(&self, t: f64) -> Result<State> {
        if t < self.s_min() - 1e-12 {
            return Err(Error::GridTooShort { t });
        }
        let k = (((self.s_max() - t) / GRID_STEP).floor() as usize).min(self.s_grid.len() - 1);
        let (st, _) = integrate(self.s_grid[k], self.states[k], t, self.ode_tol, self.s_min(), GRID_STEP / 4.0)?;
        Ok(st)
    }

    /// log F_TW(t).
    pub fn log_cdf(&self, t: f64) -> Result<f64> {
        if t >= self.s_max() {
            let (i1, i2) = airy_tail_integrals(t);
            return Ok(-(i2 - t * i1));
        }
        let st = self.state_at(t)?;
        Ok(log_cdf_from_state(t, &st, self.tail))
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(self.log_cdf(t)?.exp())
    }

    /// Hastings-McLeod q at s.
    pub fn hm_q(&self, s: f64) -> Result<f64> {
        if s >= self.s_max() {
            return Ok(airy_ai(s));
        }
        Ok(f64::from(self.state_at(s)?[0]))
    }

    /// d/dt log F_TW(t) = int_t^inf q^2.
    pub fn d_log_cdf(&self, t: f64) -> Result<f64> {
        if t >= self.s_max() {
            return Ok(airy_tail_integrals(t).0);
        }
        Ok(f64::from(self.state_at(t)?[2]) + self.tail.0)
    }

    /// Largest relative change of (q, q') at a checkpoint when the preceding interval is redone at tol/100.
    pub fn checkpoint_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for k in 1..self.s_grid.len() {
            let (st, _) = integrate(
                self.s_grid[k - 1],
                self.states[k - 1],
                self.s_grid[k],
                self.ode_tol * 1e-2,
                self.s_min(),
                GRID_STEP / 4.0,
            )?;
            for d in 0..2 {
                let stored = f64::from(self.states[k][d]);
                let rel = f64::from(st[d] - self.states[k][d]).abs() / stored.abs().max(1e-300);
                worst = worst.max(rel / growth(self.s_grid[k]) * growth(self.s_min()));
            }
        }
        Ok(worst)
    }
}

/// Convenience wrapper around `TWSolution::cdf`.
pub fn tw_cdf(sol: &TWSolution, t: f64) -> Result<f64> {
    sol.cdf(t)
}

/// Left-tail expansion of log F_TW(t), t -> -inf; `with_correction` adds log(1 + 3/(64|t|^3)).
pub fn left_tail_log(t: f64, with_correction: bool) -> f64 {
    let x = t.abs();
    let mut v = 2f64.ln() / 24.0 + ZETA_PRIME_M1 - x.ln() / 8.0 - x.powi(3) / 12.0;
    if with_correction {
        v += (1.0 + 3.0 / (64.0 * x.powi(3))).ln();
    }
    v
}

/// Leading right-tail asymptotic of 1 - F_TW(t).
/// Laplace on the integral of (x - t) Ai(x)^2 gives 16 pi, not 32 pi.
pub fn right_tail(t: f64) -> f64 {
    (-4.0 * t.powf(1.5) / 3.0).exp() / (16.0 * PI * t.powf(1.5))
}

/// Coefficient of s N^{-2/3} in the critical scaling of a.
pub fn critical_scale(c: f64) -> f64 {
    a_cri(c).powf(1.0 / 3.0) / (2.0 * c.powf(1.0 / 6.0) * (c + 1.0).powf(1.0 / 6.0))
}

pub fn critical_a(s: f64, c: f64, n: u64) -> Result<f64> {
    if !(c > 0.0) || n == 0 {
        return Err(Error::Domain(format!("need c > 0 and N >= 1, got c={c}, N={n}")));
    }
    Ok(a_cri(c) - critical_scale(c) * s * (n as f64).powf(-2.0 / 3.0))
}

/// Terms of the critical-window expansion of log Z_N.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalExpansion {
    pub n: u64,
    pub c: f64,
    pub s: f64,
    pub a: f64,
    pub smooth: f64,
    pub log_tw: f64,
    pub value: f64,
}

pub fn critical_expansion(sol: &TWSolution, n: u64, c: f64, s: f64) -> Result<CriticalExpansion> {
    let a = critical_a(s, c, n)?;
    let nf = n as f64;
    let lead = 0.75 + 1.5 * c + 0.5 * c * c * c.ln() - 0.5 * (c + 1.0).powi(2) * (c + 1.0).ln() - c * a * a;
    let l2pi = (2.0 * PI).ln();
    let smooth = -lead * nf * nf + 0.5 * nf * nf.ln() + (0.5 * l2pi - 1.0) * nf + 0.5 * nf.ln() + 0.5 * l2pi
        + (c / (1.0 + c)).ln() / 12.0;
    let log_tw = sol.log_cdf(c.powf(-2.0 / 3.0) * s)?;
    Ok(CriticalExpansion { n, c, s, a, smooth, log_tw, value: smooth + log_tw })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_gamma;

    #[test]
    fn airy_at_zero() {
        let ai0 = 3f64.powf(-2.0 / 3.0) / ln_gamma(2.0 / 3.0).exp();
        assert!((airy_ai(0.0) - ai0).abs() < 1e-15);
        let aip0 = -3f64.powf(-1.0 / 3.0) / ln_gamma(1.0 / 3.0).exp();
        assert!((airy_ai_prime(0.0) - aip0).abs() < 1e-15);
    }

    #[test]
    fn airy_matches_mpfr() {
        for &x in &[-8.0, -3.3, -0.5, 0.7, 2.0, 5.0, 8.0] {
            let want = Float::with_val(256, x).ai().to_f64();
            let got = airy_ai(x);
            assert!(((got - want) / want).abs() < 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn airy_ode_residual() {
        // second differences in 256-bit arithmetic with a dyadic step, truncation ~ h^2/12
        let h = 2f64.powi(-20);
        for i in 0..=32 {
            let x = -8.0 + 0.5 * i as f64;
            let (p, _) = airy_pair_mp(x + h, 256);
            let (m, _) = airy_pair_mp(x - h, 256);
            let (c0, _) = airy_pair_mp(x, 256);
            let d2 = Float::with_val(256, &p + &m) - Float::with_val(256, &c0 * 2u32);
            let d2 = d2.to_f64() / (h * h);
            assert!((d2 - x * airy_ai(x)).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn airy_asymptotic_overlap() {
        let x: f64 = 5.0;
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let exact = airy_ai(x);
        for terms in 1..6 {
            let (a, _) = airy_asymptotic(x, terms);
            let (u, _) = asym_coeffs(terms + 1);
            let omitted = u[terms] / zeta.powi(terms as i32);
            assert!(((a - exact) / exact).abs() < omitted, "terms={terms}");
        }
        // negative side against MPFR
        let (a, ap) = airy_asymptotic(-30.0, 10);
        let (am, apm) = airy_pair_mp(-30.0, 400);
        assert!((a - am.to_f64()).abs() < 1e-12);
        assert!((ap - apm.to_f64()).abs() < 1e-10);
    }

    #[test]
    fn tail_integrals_by_quadrature() {
        let s = 1.5;
        let (i1, i2) = airy_tail_integrals(s);
        let q1 = crate::quad::integrate(|x| airy_ai(x).powi(2), s, 20.0, 1e-14).unwrap();
        let q2 = crate::quad::integrate(|x| x * airy_ai(x).powi(2), s, 20.0, 1e-14).unwrap();
        assert!((i1 - q1).abs() < 1e-13);
        assert!((i2 - q2).abs() < 1e-13);
    }

    #[test]
    fn hastings_mcleod_basic() {
        let sol = hastings_mcleod(-10.0, 8.0, 1e-12).unwrap();
        assert!(sol.q_vals.iter().all(|&q| q > 0.0));
        for w in sol.f_vals.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!((sol.q_vals[0] / airy_ai(8.0) - 1.0).abs() < 1e-8);
        let q10 = sol.hm_q(-10.0).unwrap();
        assert!((q10 / 5f64.sqrt() - 1.0).abs() < 1e-3, "q(-10) = {q10}");
        assert!((sol.cdf(8.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(matches!(sol.cdf(-11.0), Err(Error::GridTooShort { .. })));
    }

    #[test]
    fn known_values() {
        // F_TW(-2) ~ 0.41322 (GUE), mean location check
        let sol = hastings_mcleod(-8.0, 8.0, 1e-12).unwrap();
        let f = sol.cdf(-2.0).unwrap();
        assert!((f - 0.413_224).abs() < 1e-5, "{f}");
    }

    #[test]
    fn right_tail_constant() {
        // 1 - F ~ int_t^inf (x - t) Ai(x)^2 dx at large t
        for &t in &[8.0, 12.0, 20.0] {
            let (i1, i2) = airy_tail_integrals(t);
            let mass = i2 - t * i1;
            let rel = mass / right_tail(t) - 1.0;
            assert!(rel.abs() < 3.0 / t.powf(1.5), "t={t} rel={rel}");
        }
    }

    #[test]
    fn derivative_is_tail_mass() {
        let sol = hastings_mcleod(-8.0, 8.0, 1e-12).unwrap();
        for &t in &[-6.0, -3.1, 0.0, 2.5] {
            let h = 1e-4;
            let fd = (sol.log_cdf(t + h).unwrap() - sol.log_cdf(t - h).unwrap()) / (2.0 * h);
            assert!((fd - sol.d_log_cdf(t).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn critical_scaling_center() {
        let a = critical_a(0.0, 1.0, 8).unwrap();
        assert_eq!(a, a_cri(1.0));
        assert!(critical_a(1.0, 1.0, 8).unwrap() < a);
    }
}
