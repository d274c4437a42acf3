//! The ten coefficient functions A…L and their identities.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::fundrep::richardson;
use crate::numeric::{guard, C64, ONE, ZERO};
use crate::params::{GlobalParams, Kinematics, RepData};
use crate::{Error, Result};

/// Whether the r-matrix carries the constant ±½ shifts (trigonometric) or
/// not (rational).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Structure {
    Trigonometric,
    Rational,
}

impl Structure {
    pub fn constant(self) -> C64 {
        match self {
            Structure::Trigonometric => ONE,
            Structure::Rational => ZERO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
    pub g: C64,
    pub h: C64,
    pub k: C64,
    pub l: C64,
}

impl CoefficientSet {
    pub const NAMES: [&'static str; 10] = ["A", "B", "C", "D", "E", "F", "G", "H", "K", "L"];
    const SHIFT: [f64; 10] = [1.0, -1.0, 0.0, -1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0];

    pub fn to_array(&self) -> [C64; 10] {
        [self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h, self.k, self.l]
    }

    pub fn from_array(v: [C64; 10]) -> Self {
        let [a, b, c, d, e, f, g, h, k, l] = v;
        CoefficientSet { a, b, c, d, e, f, g, h, k, l }
    }

    pub fn zero() -> Self {
        CoefficientSet::from_array([ZERO; 10])
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        CoefficientSet::from_array(self.to_array().map(f))
    }

    pub fn max_diff(&self, other: &CoefficientSet) -> f64 {
        self.to_array().iter().zip(other.to_array()).fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    fn scale(&self) -> f64 {
        1.0 + self.to_array().iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
    }

    /// A − D = −B + E = G + L, relative to the coefficient size.
    pub fn linear_residual(&self) -> f64 {
        let x = self.a - self.d;
        let y = -self.b + self.e;
        let z = self.g + self.l;
        (x - y).norm().max((y - z).norm()) / self.scale()
    }

    /// ¼(A+B−c)(A+B+c) = ¼(3A−B)(3D−E) + 4GL = CF + HK with constant c,
    /// relative to the square of the coefficient size.
    pub fn quadratic_residual(&self, constant: C64) -> f64 {
        let s = self.a + self.b;
        let p = (s - constant) * (s + constant) * 0.25;
        let q = (self.a * 3.0 - self.b) * (self.d * 3.0 - self.e) * 0.25 + self.g * self.l * 4.0;
        let r = self.c * self.f + self.h * self.k;
        (p - q).norm().max((q - r).norm()) / self.scale().powi(2)
    }

    /// (A, B, C, D, E, F, G, H, K, L) += λ(1, −1, 0, −1, 1, 0, 1, 0, 0, 1).
    pub fn shifted(&self, lambda: C64) -> Self {
        let mut v = self.to_array();
        for (x, s) in v.iter_mut().zip(Self::SHIFT) {
            *x += lambda * s;
        }
        CoefficientSet::from_array(v)
    }
}

/// The coefficient formulas with numerator weights n₁, n₂ and denominator
/// `den`; the trigonometric case uses n = z and den = z₁ − z₂.
pub fn coefficient_form(s1: &RepData, s2: &RepData, n1: C64, n2: C64, den: C64, structure: Structure) -> CoefficientSet {
    let (q1, q2) = (s1.q, s2.q);
    let a = (n1 * 0.25 + n2 * 0.25 + n1 * q1 / (q2 * 4.0) + n2 * q2 / (q1 * 4.0)) / den;
    let b = n1 * 2.0 / den - structure.constant() - a;
    let g = (-n1 * q1 / (q2 * 4.0) + n2 * q2 / (q1 * 4.0)) / den;
    CoefficientSet {
        a,
        b,
        c: (n1 * s1.a * s2.c - n2 * s2.a * s1.c) / den,
        d: a,
        e: b,
        f: (n1 * s1.b * s2.d - n2 * s2.b * s1.d) / den,
        g,
        h: (n1 * s1.a * s2.d - n2 * s2.b * s1.c) / den,
        k: (-n1 * s1.b * s2.c + n2 * s2.a * s1.d) / den,
        l: -g,
    }
}

pub fn coefficients(kin1: &Kinematics, kin2: &Kinematics) -> Result<CoefficientSet> {
    let (z1, z2) = (kin1.z(), kin2.z());
    let den = guard(z1 - z2, "z₁ = z₂").map_err(|_| Error::Collision(format!("z₁ = z₂ = {z1}")))?;
    Ok(coefficient_form(&kin1.rep, &kin2.rep, z1, z2, den, Structure::Trigonometric))
}

/// Jacobian of (A…L) with respect to (x₁, x₂, γ₁, γ₂, h, λ), optionally
/// with α appended, and its singular values.
pub fn coefficient_jacobian(kin1: &Kinematics, kin2: &Kinematics, with_alpha: bool) -> Result<(DMatrix<C64>, Vec<f64>)> {
    let base = [kin1.x, kin2.x, kin1.gamma, kin2.gamma, kin1.gp.h, ZERO, kin1.gp.alpha];
    let nparam = if with_alpha { 7 } else { 6 };
    let eval = |p: &[C64; 7]| -> Result<[C64; 10]> {
        let gp = GlobalParams::with_hprime(p[4], (ONE - p[4] * p[4]).sqrt(), p[6])?;
        let k1 = Kinematics::new(&gp, p[0], p[2])?;
        let k2 = Kinematics::new(&gp, p[1], p[3])?;
        Ok(coefficients(&k1, &k2)?.shifted(p[5]).to_array())
    };
    eval(&base)?;
    let step = 1e-3;
    for j in 0..nparam {
        for sgn in [-1.0, 1.0] {
            let mut p = base;
            p[j] += step * sgn;
            eval(&p)?;
        }
    }
    let mut jac = DMatrix::<C64>::zeros(10, nparam);
    for j in 0..nparam {
        for i in 0..10 {
            let f = |v: C64| {
                let mut p = base;
                p[j] = v;
                eval(&p).expect("checked above")[i]
            };
            jac[(i, j)] = richardson(f, base[j], step);
        }
    }
    let sv = jac.clone().svd(false, false).singular_values.iter().copied().collect();
    Ok((jac, sv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;
    use crate::params::Branch;

    fn pair() -> (Kinematics, Kinematics) {
        let g = GlobalParams::new(c(0.3, 0.1), c(1.3, -0.2), Branch::Plus).unwrap();
        (
            Kinematics::new(&g, c(2.0, 0.5), c(1.1, 0.3)).unwrap(),
            Kinematics::new(&g, c(-1.7, 1.2), c(0.7, -0.4)).unwrap(),
        )
    }

    #[test]
    fn identities() {
        let (k1, k2) = pair();
        let co = coefficients(&k1, &k2).unwrap();
        assert!(co.linear_residual() < 1e-14);
        assert!(co.quadratic_residual(ONE) < 1e-13);
        assert_eq!(co.g, -co.l);
        assert!(((co.a + co.b + ONE) * 0.5 - k1.z() / (k1.z() - k2.z())).norm() < 1e-14);
    }

    #[test]
    fn shift_keeps_identities() {
        let (k1, k2) = pair();
        let co = coefficients(&k1, &k2).unwrap().shifted(c(0.3, 0.7));
        assert!(co.linear_residual() < 1e-14);
        assert!(co.quadratic_residual(ONE) < 1e-13);
        assert!((co.a - co.d).norm() > 0.1);
    }

    #[test]
    fn rank_is_six() {
        let (k1, k2) = pair();
        let (_, sv) = coefficient_jacobian(&k1, &k2, false).unwrap();
        assert!(sv.iter().filter(|&&s| s > 1e-8).count() == 6, "{sv:?}");
        let (_, sv) = coefficient_jacobian(&k1, &k2, true).unwrap();
        assert!(sv.iter().filter(|&&s| s > 1e-8).count() == 6, "{sv:?}");
    }
}
