//! Uniformising parameter y distinguishing the four fundamentals at equal z.

use serde::{Deserialize, Serialize};

use super::{GlobalParams, Kinematics};
use crate::numeric::{guard, mat2, Mat2, C64, I, ONE, ZERO};
use crate::Result;

/// z = −k²(y⁴−1)/(y⁴−k⁴), usable also at the special points y⁴ = 1.
pub fn z_of_y(y: C64, k: C64) -> C64 {
    let y4 = y.powi(4);
    -k * k * (y4 - ONE) / (y4 - k.powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YParams {
    pub y: C64,
    pub k: C64,
    pub eta: C64,
    pub kappa: C64,
    /// The same representation built from (x, γ).
    pub kin: Kinematics,
    pub x: C64,
    pub z: C64,
    pub q: C64,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub t_tilde: Mat2,
    pub w_tilde: Mat2,
    pub u_tilde: Mat2,
}

impl YParams {
    pub fn new(y: C64, k: C64, eta: C64, kappa: C64) -> Result<Self> {
        guard(y, "y = 0")?;
        for (pt, name) in [(ONE, "y = 1"), (-ONE, "y = −1"), (I, "y = i"), (-I, "y = −i")] {
            guard(y - pt, name)?;
        }
        for (pt, name) in [(k, "y = k"), (-k, "y = −k"), (I * k, "y = ik"), (-I * k, "y = −ik")] {
            guard(y - pt, name)?;
        }
        let km = k - k.inv();
        let alpha = km * kappa * 0.5;
        let gp = GlobalParams::from_k(k, alpha)?;
        let y2 = y * y;
        let k2 = k * k;
        let x = -(y2 - ONE) / (y2 + ONE);
        let gamma = (y2 + k2) / (k * y * 2.0) * eta;
        let kin = Kinematics::new(&gp, x, gamma)?;

        let z = z_of_y(y, k);
        let q = -(y2 * y2 - k2 * k2) / (k2 * km * y2 * 2.0);
        let a = eta * (y2 + k2) / (k * y * 2.0);
        let b = -kappa * (y2 - k2) / (k * eta * y * 2.0);
        let c = -eta * (y2 + ONE) / (kappa * km * y);
        let d = (y2 - ONE) / (eta * km * y);

        let r = Self::eigenbasis(k, kappa);
        let ri = r.try_inverse().expect("eigenbasis matrix is invertible");
        Ok(YParams {
            y,
            k,
            eta,
            kappa,
            kin,
            x,
            z,
            q,
            a,
            b,
            c,
            d,
            t_tilde: r * kin.t(),
            w_tilde: r * kin.w() * ri,
            u_tilde: r * kin.u() * ri,
        })
    }

    /// R = ((−2/(k−k⁻¹), κk), (−κ⁻¹/(k−k⁻¹), k⁻¹/2)).
    pub fn eigenbasis(k: C64, kappa: C64) -> Mat2 {
        let km = k - k.inv();
        mat2(-ONE * 2.0 / km, kappa * k, -kappa.inv() / km, k.inv() * 0.5)
    }

    /// Largest mismatch between the y-formulas and the (x, γ) construction.
    pub fn consistency_residual(&self) -> f64 {
        let rep = &self.kin.rep;
        [
            (self.z - rep.z).norm(),
            (self.q - rep.q).norm(),
            (self.a - rep.a).norm(),
            (self.b - rep.b).norm(),
            (self.c - rep.c).norm(),
            (self.d - rep.d).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn u_offdiag(&self) -> f64 {
        self.u_tilde[(0, 1)].norm().max(self.u_tilde[(1, 0)].norm())
    }

    pub fn w_diag(&self) -> f64 {
        self.w_tilde[(0, 0)].norm().max(self.w_tilde[(1, 1)].norm())
    }

    /// T̃ = ((ηy, κη⁻¹y), (−½κ⁻¹ηy⁻¹, ½η⁻¹y⁻¹)).
    pub fn expected_t_tilde(&self) -> Mat2 {
        let (y, e, kp) = (self.y, self.eta, self.kappa);
        mat2(e * y, kp / e * y, -(e / (kp * y)) * 0.5, (e * y).inv() * 0.5)
    }

    /// W̃ = ((0, −4κ(1+k²z)), (−κ⁻¹(1+k⁻²z), 0)) / (k+k⁻¹).
    pub fn expected_w_tilde(&self) -> Mat2 {
        let (k, z, kp) = (self.k, self.z, self.kappa);
        let f = (k + k.inv()).inv();
        mat2(ZERO, -kp * (ONE + k * k * z) * 4.0 * f, -(ONE + z / (k * k)) / kp * f, ZERO)
    }

    /// Ũ = (k⁴−1)z/(4(k²+z)(1+k²z)) · diag(1, −1).
    pub fn expected_u_tilde(&self) -> Mat2 {
        let (k, z) = (self.k, self.z);
        let k2 = k * k;
        let f = (k2 * k2 - ONE) * z / ((k2 + z) * (ONE + k2 * z) * 4.0);
        mat2(f, ZERO, ZERO, -f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c, mat2_max_abs};

    fn sample() -> YParams {
        YParams::new(c(0.7, 0.4), c(0.9, 0.5), c(1.1, -0.3), c(0.8, 0.2)).unwrap()
    }

    #[test]
    fn formulas_agree_with_direct_construction() {
        let p = sample();
        assert!(p.consistency_residual() < 1e-12, "{}", p.consistency_residual());
    }

    #[test]
    fn eigenbasis_structure() {
        let p = sample();
        assert!(p.u_offdiag() < 1e-12);
        assert!(p.w_diag() < 1e-12);
        assert!(mat2_max_abs(&(p.u_tilde - p.expected_u_tilde())) < 1e-12);
        assert!(mat2_max_abs(&(p.t_tilde - p.expected_t_tilde())) < 1e-12);
        assert!(mat2_max_abs(&(p.w_tilde - p.expected_w_tilde())) < 1e-12);
    }

    #[test]
    fn special_points() {
        let k = c(0.9, 0.5);
        assert!(z_of_y(ONE, k).norm() < 1e-15);
        assert!(z_of_y(I, k).norm() < 1e-15);
        assert!(z_of_y(c(1e-9, 0.0), k).norm() > 0.0);
        assert!(YParams::new(ONE, k, ONE, ONE).is_err());
        assert!(YParams::new(I * k, k, ONE, ONE).is_err());
    }
}
