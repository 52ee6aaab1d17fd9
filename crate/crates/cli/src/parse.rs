use num_complex::Complex64;

/// A real that may have been given as a fraction p/q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real {
    pub value: f64,
    pub ratio: Option<(i64, u64)>,
}

impl Real {
    /// m = value * n when that is an integer.
    pub fn times_integer(&self, n: usize) -> Option<usize> {
        match self.ratio {
            Some((p, q)) => {
                let num = p.checked_mul(n as i64)?;
                (num >= 0 && num % q as i64 == 0).then(|| (num / q as i64) as usize)
            }
            None => {
                let m = self.value * n as f64;
                (m >= 0.0 && (m - m.round()).abs() < 1e-9).then(|| m.round() as usize)
            }
        }
    }
}

pub fn real(s: &str) -> Result<Real, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let q: u64 = q.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        if q == 0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        Ok(Real { value: p as f64 / q as f64, ratio: Some((p, q)) })
    } else {
        let value: f64 = s.trim().parse().map_err(|_| format!("not a number: '{s}'"))?;
        if !value.is_finite() {
            return Err(format!("not finite: '{s}'"));
        }
        Ok(Real { value, ratio: None })
    }
}

/// lo:hi:steps, steps points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps).map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64).collect()
    }
}

pub fn grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be lo:hi:steps, got '{s}'"));
    }
    let lo = real(parts[0])?.value;
    let hi = real(parts[1])?.value;
    let steps: usize = parts[2].parse().map_err(|_| format!("bad step count in '{s}'"))?;
    if steps == 0 || hi < lo {
        return Err(format!("grid needs steps >= 1 and lo <= hi, got '{s}'"));
    }
    Ok(Grid { lo, hi, steps })
}

/// "re" or "re,im".
pub fn complex(s: &str) -> Result<Complex64, String> {
    let mut it = s.split(',');
    let re = real(it.next().unwrap_or(""))?.value;
    let im = match it.next() {
        Some(v) => real(v)?.value,
        None => 0.0,
    };
    if it.next().is_some() {
        return Err(format!("complex value must be re or re,im, got '{s}'"));
    }
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let c = real("9/16").unwrap();
        assert_eq!(c.value, 0.5625);
        assert_eq!(c.times_integer(16), Some(9));
        assert_eq!(c.times_integer(8), None);
        assert_eq!(real("0.5").unwrap().times_integer(4), Some(2));
        assert!(real("1/0").is_err());
    }

    #[test]
    fn grids() {
        let g = grid("0.5:5:10").unwrap();
        let p = g.points();
        assert_eq!(p.len(), 10);
        assert_eq!(p[0], 0.5);
        assert_eq!(p[9], 5.0);
        assert!(grid("1:0:3").is_err());
        assert!(grid("1:2").is_err());
        assert_eq!(grid("-8:-8:1").unwrap().points(), vec![-8.0]);
    }

    #[test]
    fn complex_values() {
        assert_eq!(complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(complex("1,-2").unwrap(), Complex64::new(1.0, -2.0));
        assert!(complex("1,2,3").is_err());
    }
}
