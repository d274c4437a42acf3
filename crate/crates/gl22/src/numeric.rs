//! Scalar helpers shared by all modules.

use nalgebra::Matrix2;
pub use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub type Mat2 = Matrix2<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Denominators below this magnitude are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Relative tolerance with an absolute floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Tolerance { rel, abs }
    }

    pub fn bound(&self, scale: f64) -> f64 {
        (self.rel * scale).max(self.abs)
    }

    pub fn close(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.bound(a.norm().max(b.norm()))
    }
}

pub fn mat2(a: C64, b: C64, c: C64, d: C64) -> Mat2 {
    Matrix2::new(a, b, c, d)
}

pub fn mat2_max_abs(m: &Mat2) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fail with a pole error if `value` is too small.
pub fn guard(value: C64, point: &str) -> crate::Result<C64> {
    if value.norm() < POLE_THRESHOLD || !value.is_finite() {
        Err(crate::Error::Pole { point: point.to_string(), distance: value.norm() })
    } else {
        Ok(value)
    }
}
