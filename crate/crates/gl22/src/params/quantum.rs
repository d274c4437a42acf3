//! Scalars of the quantum-deformed representation and their classical limit.

use serde::{Deserialize, Serialize};

use super::{site_polys, GlobalParams, SitePolys};
use crate::numeric::{guard, C64, I, ONE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumSideData {
    pub g: f64,
    pub qdef: C64,
    pub xplus: C64,
    pub xminus: C64,
    pub q2c: C64,
    pub q2d: C64,
    pub p: C64,
    pub k: C64,
    /// |first − second| closed form of q^{2C}; vanishes on the constraint.
    pub q2c_discrepancy: f64,
}

/// x± = (h′x−ih)(1 ± x(hx+ih′)/(2g(x²−1))) to the requested order,
/// together with the deformation parameter q = 1 + h/(2g).
pub fn xpm_classical(gp: &GlobalParams, x: C64, g: f64, order: u8) -> Result<(C64, C64, C64)> {
    if !(g > 0.0) {
        return Err(Error::Invalid("coupling g must be positive".into()));
    }
    if order > 1 {
        return Err(Error::Invalid(format!("expansion order {order} not available")));
    }
    let SitePolys { p1, p2, s } = site_polys(gp, x);
    guard(s, "x = ±1")?;
    let qdef = ONE + gp.h / (2.0 * g);
    if order == 0 {
        return Ok((p1, p1, qdef));
    }
    let shift = x * p2 / (s * (2.0 * g));
    Ok((p1 * (ONE + shift), p1 * (ONE - shift), qdef))
}

/// Left minus right side of the quadratic relation between x⁺ and x⁻.
pub fn xpm_residual(xp: C64, xm: C64, q: C64, g: f64) -> C64 {
    let qq = q - q.inv();
    xp / q + q / xp - q * xm - (q * xm).inv() + I * g * qq * (xp / (q * xm) - q * xm / xp) - I / g
}

/// Solve the quadratic relation for x⁺ given x⁻, returning the root closest
/// to `guess`.
pub fn solve_xplus(xm: C64, q: C64, g: f64, guess: C64) -> C64 {
    let qq = q - q.inv();
    let a2 = q.inv() + I * g * qq / (q * xm);
    let a1 = -(q * xm + (q * xm).inv() + I / g);
    let a0 = q - I * g * qq * q * xm;
    let disc = (a1 * a1 - a2 * a0 * 4.0).sqrt();
    // the numerically stable pair of roots
    let sgn = if (a1.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let big = -(a1 + disc * sgn) * 0.5;
    let r1 = big / a2;
    let r2 = a0 / big;
    if (r1 - guess).norm() <= (r2 - guess).norm() {
        r1
    } else {
        r2
    }
}

/// q^{2D}, both closed forms of q^{2C}, and the central charges P, K.
pub fn quantum_charges(xplus: C64, xminus: C64, qdef: C64, g: f64, alpha: C64) -> QuantumSideData {
    let qq = qdef - qdef.inv();
    let q2d = xplus / (qdef * xminus);
    let first = qdef * (qq / xplus - I / g) / (qq / xminus - I / g);
    let second = qdef.inv() * (qq * xplus + I / g) / (qq * xminus + I / g);
    let p = alpha * g * (ONE - first * q2d);
    let k = g / alpha * (first.inv() - q2d.inv());
    QuantumSideData {
        g,
        qdef,
        xplus,
        xminus,
        q2c: first,
        q2d,
        p,
        k,
        q2c_discrepancy: (first - second).norm(),
    }
}
