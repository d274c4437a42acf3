//! Global parameters and per-site kinematics of the fundamental representation.

mod quantum;
mod reparam;

pub use quantum::{quantum_charges, solve_xplus, xpm_classical, xpm_residual, QuantumSideData};
pub use reparam::{z_of_y, YParams};

use serde::{Deserialize, Serialize};

use crate::numeric::{guard, mat2, Mat2, Tolerance, C64, I, ONE, ZERO};
use crate::{Error, Result};

/// Sign choice for h′ relative to the principal square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Deformation modulus h (with h′ and k) and the constant α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalParams {
    pub h: C64,
    pub hprime: C64,
    pub alpha: C64,
    pub k: C64,
}

impl GlobalParams {
    /// h′ = ±√(1−h²) on the principal branch, k = h + ih′.
    pub fn new(h: C64, alpha: C64, branch: Branch) -> Result<Self> {
        let hprime = (ONE - h * h).sqrt() * branch.sign();
        GlobalParams::with_hprime(h, hprime, alpha)
    }

    /// Use an explicitly chosen h′; it must satisfy h² + h′² = 1.
    pub fn with_hprime(h: C64, hprime: C64, alpha: C64) -> Result<Self> {
        if alpha.norm() < 1e-300 || !alpha.is_finite() {
            return Err(Error::Invalid("alpha must be nonzero".into()));
        }
        if hprime.norm() < crate::numeric::POLE_THRESHOLD {
            return Err(Error::Degenerate(format!("h′ vanishes at h = {h}")));
        }
        let defect = (h * h + hprime * hprime - ONE).norm();
        if defect > 1e-9 * (1.0 + h.norm_sqr()) {
            return Err(Error::Invalid(format!("h² + h′² − 1 = {defect:.3e}")));
        }
        Ok(GlobalParams { h, hprime, alpha, k: h + I * hprime })
    }

    /// Parametrise by the modulus k: h = (k+k⁻¹)/2, h′ = −(i/2)(k−k⁻¹).
    pub fn from_k(k: C64, alpha: C64) -> Result<Self> {
        if k.norm() < 1e-300 {
            return Err(Error::Invalid("k must be nonzero".into()));
        }
        let h = (k + k.inv()) * 0.5;
        let hprime = -I * 0.5 * (k - k.inv());
        let mut gp = GlobalParams::with_hprime(h, hprime, alpha)?;
        gp.k = k;
        Ok(gp)
    }

    /// Residuals of h²+h′²=1 and of the two k relations.
    pub fn invariant_residual(&self) -> f64 {
        let k = self.k;
        let a = (self.h * self.h + self.hprime * self.hprime - ONE).norm();
        let b = ((k + k.inv()) * 0.5 - self.h).norm();
        let c = (-I * 0.5 * (k - k.inv()) - self.hprime).norm();
        a.max(b).max(c)
    }
}

/// Self-dual points (z*₊, z*₋, x*₊, x*₋) = ((ih+h′)², (ih−h′)², +1, −1).
pub fn selfdual_points(gp: &GlobalParams) -> (C64, C64, C64, C64) {
    let p = I * gp.h + gp.hprime;
    let m = I * gp.h - gp.hprime;
    (p * p, m * m, ONE, -ONE)
}

/// The invariant cross-ratio s = (ih + h′)⁴.
pub fn crossratio(gp: &GlobalParams) -> C64 {
    (I * gp.h + gp.hprime).powi(4)
}

/// The data entering the representation and the coefficient formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepData {
    pub z: C64,
    pub q: C64,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl RepData {
    /// T = ((a, −b), (−c, d)).
    pub fn t(&self) -> Mat2 {
        mat2(self.a, -self.b, -self.c, self.d)
    }
}

/// Per-site parameters (x, γ) with everything derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    pub gp: GlobalParams,
    pub x: C64,
    pub gamma: C64,
    pub rep: RepData,
    /// W₁₁ = (z−1)/h, evaluated in a form that stays finite at h = 0.
    pub w11: C64,
}

/// Frequently used site polynomials.
pub struct SitePolys {
    pub p1: C64,
    pub p2: C64,
    pub s: C64,
}

pub fn site_polys(gp: &GlobalParams, x: C64) -> SitePolys {
    SitePolys { p1: gp.hprime * x - I * gp.h, p2: gp.h * x + I * gp.hprime, s: x * x - ONE }
}

impl Kinematics {
    pub fn new(gp: &GlobalParams, x: C64, gamma: C64) -> Result<Self> {
        if gamma.norm() < 1e-300 || !gamma.is_finite() || !x.is_finite() {
            return Err(Error::Invalid("gamma must be finite and nonzero".into()));
        }
        let SitePolys { p1, p2, s } = site_polys(gp, x);
        guard(x - ONE, "x = +1")?;
        guard(x + ONE, "x = −1")?;
        guard(p1, "x = ih/h′")?;
        guard(p2, "x = −ih′/h")?;
        let (h, hp, al) = (gp.h, gp.hprime, gp.alpha);
        let dd = p1 * p2;
        let z = I * x / dd;
        let q = -dd / (hp * s);
        let rep = RepData {
            z,
            q,
            a: gamma,
            b: -al * dd / (gamma * hp * s),
            c: I * gamma / (al * p1),
            d: x * p1 / (gamma * hp * s),
        };
        let w11 = (I * 2.0 * h * x - hp * (x * x + ONE)) / dd;
        Ok(Kinematics { gp: *gp, x, gamma, rep, w11 })
    }

    /// The gauge γ = λ(h′x−ih)/(h′√(x²−1)) in which U takes its simple form.
    pub fn preferred(gp: &GlobalParams, x: C64, lambda: C64) -> Result<Self> {
        let SitePolys { p1, s, .. } = site_polys(gp, x);
        let root = guard(s, "x = ±1")?.sqrt();
        Kinematics::new(gp, x, lambda * p1 / (gp.hprime * root))
    }

    pub fn z(&self) -> C64 {
        self.rep.z
    }

    pub fn q(&self) -> C64 {
        self.rep.q
    }

    pub fn t(&self) -> Mat2 {
        self.rep.t()
    }

    /// W = ((W₁₁, 2α), (2z/α, −W₁₁)).
    pub fn w(&self) -> Mat2 {
        let al = self.gp.alpha;
        mat2(self.w11, al * 2.0, self.rep.z * 2.0 / al, -self.w11)
    }

    fn uv_den(&self) -> C64 {
        let (z, h) = (self.rep.z, self.gp.h);
        z * z + (h * h * 4.0 - 2.0) * z + ONE
    }

    /// U = ((−h², hα), (−h/α, h²)) / (z + z⁻¹ − 2 + 4h²).
    pub fn u(&self) -> Mat2 {
        let (z, h, al) = (self.rep.z, self.gp.h, self.gp.alpha);
        let f = z / self.uv_den();
        mat2(-h * h * f, h * al * f, -h / al * f, h * h * f)
    }

    /// V = −(z − 1 + 2h²) / (z + z⁻¹ − 2 + 4h²).
    pub fn v(&self) -> C64 {
        let (z, h) = (self.rep.z, self.gp.h);
        -(z - ONE + h * h * 2.0) * z / self.uv_den()
    }

    /// Largest violation of ad−bc=1, det T=1, Tr W=0, TM=qWT, and of the
    /// closed forms for z and q.
    pub fn constraint_residual(&self) -> f64 {
        let RepData { z, q, a, b, c, d } = self.rep;
        let t = self.t();
        let w = self.w();
        let m = mat2(ONE, ZERO, ZERO, -ONE);
        let tm = t * m - w * t * q;
        let scale = 1.0 + t.norm() * (1.0 + w.norm() * q.norm());
        let SitePolys { p1, p2, s } = site_polys(&self.gp, self.x);
        let zr = (z * p1 * p2 - I * self.x).norm() / (1.0 + (p1 * p2).norm() * z.norm());
        let qr = (q * self.gp.hprime * s + p1 * p2).norm() / (1.0 + (p1 * p2).norm());
        [
            (a * d - b * c - ONE).norm(),
            (t.determinant() - ONE).norm(),
            w.trace().norm(),
            crate::numeric::mat2_max_abs(&tm) / scale,
            zr,
            qr,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn satisfies_constraints(&self, tol: &Tolerance) -> bool {
        self.constraint_residual() <= tol.bound(1.0).max(1e-10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c, r};

    fn gp(h: C64) -> GlobalParams {
        GlobalParams::new(h, r(1.0), Branch::Plus).unwrap()
    }

    #[test]
    fn principal_roots() {
        assert_eq!(gp(r(0.0)).hprime, r(1.0));
        assert!((gp(r(0.6)).hprime - r(0.8)).norm() < 1e-15);
        let g = gp(c(0.3, 0.1));
        assert!(g.invariant_residual() < 1e-15);
        let m = GlobalParams::new(c(0.3, 0.1), r(1.0), Branch::Minus).unwrap();
        assert!((m.hprime + g.hprime).norm() < 1e-15);
        assert!(m.invariant_residual() < 1e-15);
    }

    #[test]
    fn degenerate_modulus_rejected() {
        assert!(matches!(GlobalParams::new(r(1.0), r(1.0), Branch::Plus), Err(Error::Degenerate(_))));
        assert!(GlobalParams::new(r(0.3), r(0.0), Branch::Plus).is_err());
    }

    #[test]
    fn from_k_round_trip() {
        let g = gp(c(0.3, 0.1));
        let h = GlobalParams::from_k(g.k, g.alpha).unwrap();
        assert!((h.h - g.h).norm() < 1e-15 && (h.hprime - g.hprime).norm() < 1e-15);
    }

    #[test]
    fn rational_point() {
        let g = gp(r(0.0));
        let x = c(2.0, 0.3);
        let k = Kinematics::new(&g, x, r(1.0)).unwrap();
        assert!((k.z() - ONE).norm() < 1e-15);
        assert!((k.q() - (-I * x / (x * x - ONE))).norm() < 1e-15);
        // W₁₁ = iu with u = x + 1/x
        assert!((k.w11 - I * (x + x.inv())).norm() < 1e-14);
    }

    #[test]
    fn poles_reported() {
        let g = gp(c(0.3, 0.1));
        for x in [r(1.0), r(-1.0), I * g.h / g.hprime, -I * g.hprime / g.h] {
            assert!(matches!(Kinematics::new(&g, x, r(1.0)), Err(Error::Pole { .. })));
        }
    }

    #[test]
    fn approach_selfdual() {
        let g = gp(c(0.3, 0.1));
        let (zp, ..) = selfdual_points(&g);
        let k = Kinematics::new(&g, r(1.0 + 1e-7), r(1.0)).unwrap();
        assert!((k.z() - zp).norm() < 1e-6);
        assert!(k.q().norm() > 1e5);
    }

    #[test]
    fn selfdual_values() {
        let g = gp(r(0.6));
        let (zp, zm, xp, xm) = selfdual_points(&g);
        assert!((zp - c(0.28, 0.96)).norm() < 1e-15);
        assert!((zp.norm() - 1.0).abs() < 1e-15 && (zm.norm() - 1.0).abs() < 1e-15);
        assert_eq!((xp, xm), (ONE, -ONE));
        let h0 = selfdual_points(&gp(r(0.0)));
        assert!((h0.0 - ONE).norm() < 1e-15 && (h0.1 - ONE).norm() < 1e-15);
        assert!((crossratio(&g) - c(0.28, 0.96) * c(0.28, 0.96)).norm() < 1e-15);
        assert!((crossratio(&gp(r(0.0))) - ONE).norm() < 1e-15);
    }

    #[test]
    fn constraints_hold() {
        let g = gp(c(0.3, 0.1));
        let k = Kinematics::new(&g, c(2.0, 0.5), c(1.1, 0.3)).unwrap();
        assert!(k.constraint_residual() < 1e-13);
    }
}
