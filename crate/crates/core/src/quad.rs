//! Adaptive Gauss-Kronrod (7/15) quadrature for real and complex integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Integrate a complex-valued f over [a, b] to absolute tolerance `tol`.
pub fn integrate_complex<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let mut stack = vec![(a, b, tol)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_total = 0.0;
    let mut evals = 0usize;
    while let Some((lo, hi, t)) = stack.pop() {
        let (val, err) = gk15(&mut f, lo, hi);
        evals += 1;
        let tiny = (hi - lo).abs() < 1e-14 * (1.0 + lo.abs());
        if err <= t.max(1e-15 * val.norm()) || tiny {
            total += val;
            err_total += err;
        } else if evals > 200_000 {
            return Err(Error::Quadrature { estimate: total.re, error: err });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * t));
            stack.push((mid, hi, 0.5 * t));
        }
    }
    if !total.re.is_finite() || !total.im.is_finite() || err_total > 100.0 * tol.max(1e-15 * total.norm()) {
        return Err(Error::Quadrature { estimate: total.re, error: err_total });
    }
    Ok(total)
}

/// Integrate a real f over [a, b] to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, tol).map(|z| z.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
        let v = integrate(|x| (-x).exp(), 0.0, 30.0, 1e-13).unwrap();
        assert!((v - (1.0 - (-30f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn complex_circle() {
        // (1/2pi) int_0^{2pi} e^{i t} e^{-i t} dt = 1
        let v = integrate_complex(|t| Complex64::from_polar(1.0, t) * Complex64::from_polar(1.0, -t), 0.0, 1.0, 1e-14).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn sqrt_endpoint() {
        let v = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }
}
