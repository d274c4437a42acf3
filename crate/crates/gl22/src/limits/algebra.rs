//! Structure matrices (W, U, V) of the limiting loop algebras.

use serde::{Deserialize, Serialize};

use super::{path, LimitFamily, LimitSetup, LimitSite};
use crate::numeric::{mat2, C64, I, Mat2, ONE, ZERO};
use crate::params::GlobalParams;
use crate::Result;

/// How the loop derivation acts on the spectral coordinate (u = y² for the
/// twisted limits): ∂_u for rational limits, z∂_z for trigonometric ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitAlgebra {
    pub w: Mat2,
    pub u: Mat2,
    pub v: C64,
    pub derivation: Derivation,
}

impl LimitAlgebra {
    pub fn dist(&self, other: &LimitAlgebra) -> f64 {
        let m = |a: &Mat2, b: &Mat2| (a - b).iter().fold(0.0, |acc: f64, z| acc.max(z.norm()));
        m(&self.w, &other.w).max(m(&self.u, &other.u)).max((self.v - other.v).norm())
    }
}

fn derivation(family: LimitFamily) -> Derivation {
    match family.structure() {
        crate::rmatrix::Structure::Rational => Derivation::Additive,
        crate::rmatrix::Structure::Trigonometric => Derivation::Multiplicative,
    }
}

/// Closed-form limit data at the limit variable `var` (see
/// [`LimitFamily::variable`]). The conventional families reduce to the
/// standard affine structure W = diag(1, −1), U = V = 0.
pub fn limit_algebra(family: LimitFamily, setup: &LimitSetup, var: C64) -> LimitAlgebra {
    let al = setup.alpha;
    let (w, u, v) = match family {
        LimitFamily::FullRational => {
            let x = var;
            let u = x + x.inv();
            let d = u * u - 4.0;
            (mat2(I * u, al * 2.0, al.inv() * 2.0, -I * u), mat2(ZERO, -I * al, I / al, ZERO) / d, -u / d)
        }
        LimitFamily::TwistedRational => {
            let u = var * var;
            (mat2(ZERO, al * 2.0, u * 2.0 / al, ZERO), mat2(-ONE, ZERO, ZERO, ONE) / (u * 4.0), -(u * 2.0).inv())
        }
        LimitFamily::TwistedTrigonometric => {
            let z = var * var;
            (mat2(ZERO, al * 2.0, z * 2.0 / al, ZERO), mat2(-ONE, ZERO, ZERO, ONE) * C64::from(0.25), C64::new(-0.5, 0.0))
        }
        LimitFamily::SpecialTrigInf => {
            let x = var;
            let zt = -x * 4.0 / ((x - ONE) * (x - ONE));
            let f = zt / (zt - ONE);
            (mat2(-ONE, al, -zt / al, ONE), mat2(-ONE, ZERO, -al.inv() * 2.0, ONE) * (f * 0.25), -f * 0.5)
        }
        LimitFamily::SpecialTrigZero => {
            let z = var;
            (mat2(z - ONE, ZERO, ZERO, ONE - z), Mat2::zeros(), -z / (z - ONE))
        }
        LimitFamily::SpecialRational => (mat2(-var, ZERO, ZERO, var), Mat2::zeros(), -var.inv()),
        LimitFamily::ConventionalRational | LimitFamily::ConventionalTrigonometric => {
            (mat2(ONE, ZERO, ZERO, -ONE), Mat2::zeros(), ZERO)
        }
    };
    LimitAlgebra { w, u, v, derivation: derivation(family) }
}

/// The exact (W, U, V) at the path point ε, rescaled and conjugated so that
/// it tends to [`limit_algebra`]. `None` for the conventional families,
/// whose reduction is only asserted in closed form.
pub fn scaled_algebra(family: LimitFamily, setup: &LimitSetup, eps: f64, var: C64) -> Result<Option<LimitAlgebra>> {
    let e = C64::new(eps, 0.0);
    let site = LimitSite::new(var, ONE);
    let (w, u, vv) = match family {
        LimitFamily::ConventionalRational | LimitFamily::ConventionalTrigonometric => return Ok(None),
        LimitFamily::FullRational => {
            let k = path(family, setup, eps, &site)?;
            (k.w(), k.u() * (I * e), k.v() * I * e)
        }
        LimitFamily::TwistedRational => {
            let k = path(family, setup, eps, &site)?;
            let g0 = GlobalParams::with_hprime(setup.h, (ONE - setup.h * setup.h).sqrt(), setup.alpha)?;
            let r = mat2(ONE, ZERO, (setup.alpha * e).inv(), ONE);
            let ri = mat2(ONE, ZERO, -(setup.alpha * e).inv(), ONE);
            let s = I * g0.h * e * e / g0.hprime;
            let wf = (g0.hprime - I * g0.h) / (I * e);
            (r * k.w() * ri * wf, r * k.u() * ri * s, k.v() * s)
        }
        LimitFamily::TwistedTrigonometric | LimitFamily::SpecialTrigZero => {
            let k = path(family, setup, eps, &site)?;
            let w = if family == LimitFamily::SpecialTrigZero { k.w() * e } else { k.w() };
            (w, k.u(), k.v())
        }
        LimitFamily::SpecialTrigInf => {
            let k = path(family, setup, eps, &site)?;
            (k.w() / e, k.u(), k.v())
        }
        LimitFamily::SpecialRational => {
            let k = path(family, setup, eps, &site)?;
            let s = I * e;
            (k.w() * s, k.u() * s, k.v() * s)
        }
    };
    Ok(Some(LimitAlgebra { w, u, v: vv, derivation: derivation(family) }))
}

/// Remove the twist by a v-dependent rescaling of the generators: Q by
/// f_Q(v), S by f_S(v) and A by f_A(v). Returns the transformed data, or
/// `None` where no such rescaling is needed or available.
pub fn untwisted(family: LimitFamily, setup: &LimitSetup, var: C64) -> Option<LimitAlgebra> {
    let la = limit_algebra(family, setup, var);
    // (log-derivatives of f_Q, f_S, f_A with respect to the derivation, f_Q/f_S, f_A)
    let (dq, ds, da, ratio, fa) = match family {
        LimitFamily::TwistedRational => {
            let u = var * var;
            let d = (u * 4.0).inv();
            (d, -d, (u * 2.0).inv(), u.sqrt(), u.sqrt())
        }
        LimitFamily::TwistedTrigonometric => {
            let z = var * var;
            (C64::new(0.25, 0.0), C64::new(-0.25, 0.0), C64::new(0.5, 0.0), z.sqrt(), z.sqrt())
        }
        LimitFamily::SpecialTrigZero => {
            let z = var;
            (ZERO, ZERO, z / (z - ONE), ONE, z - ONE)
        }
        _ => return None,
    };
    let d = mat2(ratio, ZERO, ZERO, ONE);
    let di = mat2(ratio.inv(), ZERO, ZERO, ONE);
    Some(LimitAlgebra {
        w: d * la.w * di / fa,
        u: la.u + mat2(dq, ZERO, ZERO, ds),
        v: la.v + da,
        derivation: la.derivation,
    })
}
