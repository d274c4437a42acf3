//! Affine extension: the derivation matrices U, V and the central cocycle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::algebra::{eps, AlgebraElement, GeneratorTerm, Kind, LoopAlgebra};
use crate::numeric::{mat2, mat2_max_abs, Mat2, C64, I, ONE, ZERO};
use crate::params::{selfdual_points, site_polys, GlobalParams, Kinematics, SitePolys};
use crate::{Error, Result};

/// x-derivatives of the representation data in the gauge where U takes its
/// simple form (γ ∝ (h′x−ih)/(h′√(x²−1)) with a constant prefactor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XDerivatives {
    pub dz: C64,
    pub dq: C64,
    pub dt: Mat2,
    pub dw: Mat2,
}

pub fn x_derivatives(kin: &Kinematics) -> XDerivatives {
    let gp = &kin.gp;
    let (h, hp, al, x) = (gp.h, gp.hprime, gp.alpha, kin.x);
    let SitePolys { p1, p2, s } = site_polys(gp, x);
    let rep = &kin.rep;
    let dd = p1 * p2;
    let ddp = hp * p2 + h * p1;
    let dz = I / dd - I * x * ddp / (dd * dd);
    let dq = -ddp / (hp * s) + x * dd * 2.0 / (hp * s * s);
    let lg = hp / p1 - x / s;
    let gamma = kin.gamma;
    let da = gamma * lg;
    let db = al * dq / gamma - rep.b * lg;
    let dc = rep.c * (lg - hp / p1);
    let dd_ = (p1 + x * hp) / (gamma * hp * s) - rep.d * (x * 2.0 / s + lg);
    let n = I * h * x * 2.0 - hp * (x * x + ONE);
    let dn = I * h * 2.0 - hp * x * 2.0;
    let dw11 = dn / dd - n * ddp / (dd * dd);
    XDerivatives {
        dz,
        dq,
        dt: mat2(da, -db, -dc, dd_),
        dw: mat2(dw11, ZERO, dz * 2.0 / al, -dw11),
    }
}

/// Residuals of the three derivation identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivationReport {
    /// z (dT/dz) T⁻¹ − U
    pub t_eq: f64,
    /// (z/q) dq/dz − V
    pub q_eq: f64,
    /// z dW/dz − [U, W] + V W
    pub w_eq: f64,
}

impl DerivationReport {
    pub fn max(&self) -> f64 {
        self.t_eq.max(self.q_eq).max(self.w_eq)
    }
}

pub fn derivation_check(kin: &Kinematics) -> Result<DerivationReport> {
    let d = x_derivatives(kin);
    let dz = crate::numeric::guard(d.dz, "dz/dx = 0")?;
    let z = kin.z();
    let t = kin.t();
    let tinv = t.try_inverse().ok_or_else(|| Error::Degenerate("T is singular".into()))?;
    let (u, v, w) = (kin.u(), kin.v(), kin.w());
    let zt = d.dt * (z / dz) * tinv;
    let zq = z / kin.q() * d.dq / dz;
    let zw = d.dw * (z / dz);
    let rel = |m: &Mat2, sc: f64| mat2_max_abs(m) / (1.0 + sc);
    Ok(DerivationReport {
        t_eq: rel(&(zt - u), mat2_max_abs(&u)),
        q_eq: (zq - v).norm() / (1.0 + v.norm()),
        w_eq: rel(&(zw - (u * w - w * u) + w * v), mat2_max_abs(&w) * (1.0 + mat2_max_abs(&u) + v.norm())),
    })
}

/// Richardson-extrapolated central difference of a holomorphic function.
pub fn richardson<F: Fn(C64) -> C64>(f: F, x: C64, step: f64) -> C64 {
    let central = |hh: f64| (f(x + hh) - f(x - hh)) / (2.0 * hh);
    (central(step / 2.0) * 4.0 - central(step)) / 3.0
}

/// Largest mismatch between the analytic x-derivatives and finite differences.
pub fn derivative_fd_residual(kin: &Kinematics, step: f64) -> Result<f64> {
    let gp = kin.gp;
    let lam = kin.gamma * gp.hprime * (kin.x * kin.x - ONE).sqrt() / site_polys(&gp, kin.x).p1;
    let at = |x: C64| Kinematics::preferred(&gp, x, lam);
    // keep the square-root branch continuous around x
    let branch = |k: &Kinematics| if (k.gamma - kin.gamma).norm() < 1e-3 * (1.0 + kin.gamma.norm()) { 1.0 } else { -1.0 };
    at(kin.x + step)?;
    at(kin.x - step)?;
    let d = x_derivatives(kin);
    let mut worst: f64 = 0.0;
    let mut cmp = |an: C64, fd: C64| worst = worst.max((an - fd).norm() / (1.0 + an.norm()));
    let get = |x: C64, f: &dyn Fn(&Kinematics) -> C64| {
        let k = at(x).expect("checked above");
        f(&k)
    };
    cmp(d.dz, richardson(|x| get(x, &|k| k.z()), kin.x, step));
    cmp(d.dq, richardson(|x| get(x, &|k| k.q()), kin.x, step));
    cmp(d.dw[(0, 0)], richardson(|x| get(x, &|k| k.w11), kin.x, step));
    let t_entry = |i: usize, j: usize| move |k: &Kinematics| k.t()[(i, j)] * branch(k);
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        cmp(d.dt[(i, j)], richardson(|x| get(x, &t_entry(i, j)), kin.x, step));
    }
    Ok(worst)
}

/// F₁ = zW₁₂, F₂ = W₁₁, F₃ = W₂₁/z must be affine-linear in z; returns the
/// largest second divided difference over the given sites, relative to the
/// size of the values.
pub fn w_linearity_residual(w_of: &dyn Fn(&Kinematics) -> Mat2, sites: [&Kinematics; 3]) -> f64 {
    let zs: Vec<C64> = sites.iter().map(|k| k.z()).collect();
    let ws: Vec<Mat2> = sites.iter().map(|k| w_of(k)).collect();
    let fs: [Box<dyn Fn(usize) -> C64>; 3] = [
        Box::new(|i| zs[i] * ws[i][(0, 1)]),
        Box::new(|i| ws[i][(0, 0)]),
        Box::new(|i| ws[i][(1, 0)] / zs[i]),
    ];
    let mut worst: f64 = 0.0;
    for f in &fs {
        let val = f(0) * (zs[1] - zs[2]) + f(1) * (zs[2] - zs[0]) + f(2) * (zs[0] - zs[1]);
        let vdm = (zs[0] - zs[1]) * (zs[1] - zs[2]) * (zs[2] - zs[0]);
        let sc = f(0).norm().max(f(1).norm()).max(f(2).norm());
        worst = worst.max((val / vdm).norm() / (1.0 + sc));
    }
    worst
}

/// Finite Laurent polynomial Σ cₙ zⁿ.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Laurent {
    coeffs: BTreeMap<i32, C64>,
}

impl Laurent {
    pub fn monomial(n: i32, c: C64) -> Self {
        let mut l = Laurent::default();
        l.coeffs.insert(n, c);
        l
    }

    pub fn constant(c: C64) -> Self {
        Laurent::monomial(0, c)
    }

    pub fn from_terms(terms: &[(i32, C64)]) -> Self {
        let mut l = Laurent::default();
        for &(n, c) in terms {
            *l.coeffs.entry(n).or_insert(ZERO) += c;
        }
        l
    }

    pub fn coeff(&self, n: i32) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or(ZERO)
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (&a, &ca) in &self.coeffs {
            for (&b, &cb) in &other.coeffs {
                *out.coeffs.entry(a + b).or_insert(ZERO) += ca * cb;
            }
        }
        out
    }

    pub fn derivative(&self) -> Laurent {
        let mut out = Laurent::default();
        for (&n, &c) in &self.coeffs {
            if n != 0 {
                out.coeffs.insert(n - 1, c * n as f64);
            }
        }
        out
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().map(|(&n, &c)| c * z.powi(n)).sum()
    }

    pub fn min_degree(&self) -> i32 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    /// Coefficient of z⁻¹.
    pub fn residue(&self) -> C64 {
        self.coeff(-1)
    }

    /// Residue at 0 of self(z)·Σ tₙzⁿ for a Taylor series t.
    fn residue_against(&self, taylor: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .filter(|(&n, _)| n <= -1)
            .map(|(&n, &c)| c * taylor.get((-1 - n) as usize).copied().unwrap_or(ZERO))
            .sum()
    }
}

/// Taylor coefficients of 1/(1 + βz + z²), β = 4h² − 2, up to degree n.
fn inverse_quadratic_series(h: C64, n: usize) -> Vec<C64> {
    let beta = h * h * 4.0 - 2.0;
    let mut p = vec![ZERO; n + 1];
    p[0] = ONE;
    if n >= 1 {
        p[1] = -beta;
    }
    for k in 2..=n {
        p[k] = -beta * p[k - 1] - p[k - 2];
    }
    p
}

/// Taylor coefficients about 0 of U(z)/z (matrix-valued) and V(z)/z.
pub fn uv_over_z_series(gp: &GlobalParams, n: usize) -> (Vec<Mat2>, Vec<C64>) {
    let (h, al) = (gp.h, gp.alpha);
    let p = inverse_quadratic_series(h, n);
    let m = mat2(-h * h, h * al, -h / al, h * h);
    let u = p.iter().map(|&c| m * c).collect();
    let c0 = ONE - h * h * 2.0;
    let v = (0..=n).map(|k| c0 * p[k] - if k > 0 { p[k - 1] } else { ZERO }).collect();
    (u, v)
}

/// Largest admissible contour radius: the circle must enclose no pole of U, V.
pub fn max_contour_radius(gp: &GlobalParams) -> f64 {
    let (zp, zm, ..) = selfdual_points(gp);
    zp.norm().min(zm.norm()).min(1.0)
}

/// Coefficient of the central charge C in the bracket [f·s, g·t} as the
/// residue at 0 on a circle |z| = r₀ inside all poles of U and V.
pub fn cocycle(f: &Laurent, s: Kind, g: &Laurent, t: Kind, gp: &GlobalParams, r0: f64) -> Result<C64> {
    let rmax = max_contour_radius(gp);
    if !(r0 > 0.0 && r0 < rmax) {
        return Err(Error::Contour { radius: r0, pole: rmax });
    }
    let fdg = f.mul(&g.derivative()).residue();
    let fg = f.mul(g);
    let order = (-fg.min_degree()).max(0) as usize;
    let (us, vs) = uv_over_z_series(gp, order);
    let u_res = |i: usize, j: usize| {
        let col: Vec<C64> = us.iter().map(|m| m[(i, j)]).collect();
        fg.residue_against(&col)
    };
    let ee = |a: u8, b: u8, c: u8, d: u8| eps(a, c) * eps(b, d);
    let sym = |a: u8, b: u8, c: u8, d: u8| ee(a, b, c, d) + eps(a, d) * eps(b, c);
    use Kind::*;
    let val = match (s, t) {
        (R(a, b), R(c, d)) => fdg * (-0.5 * sym(a, b, c, d)),
        (L(a, b), L(c, d)) => fdg * (0.5 * sym(a, b, c, d)),
        (Q(a, b), Q(c, d)) => u_res(0, 1) * ee(a, b, c, d),
        (Q(a, b), S(c, d)) => (fdg - u_res(0, 0)) * ee(a, b, c, d),
        (S(..), Q(..)) => return cocycle(g, t, f, s, gp, r0),
        (S(a, b), S(c, d)) => -u_res(1, 0) * ee(a, b, c, d),
        (A, B) => -(fdg - fg.residue_against(&vs)),
        (B, A) => return cocycle(g, t, f, s, gp, r0).map(|v| -v),
        (C | D, _) | (_, C | D) => {
            return Err(Error::Invalid("cocycle is defined on the loop algebra only".into()));
        }
        _ => ZERO,
    };
    Ok(val)
}

/// Largest violation of the graded cocycle condition
/// ω(x,[y,z]) ± ω(y,[z,x]) ± ω(z,[x,y]) = 0, split by sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CocycleJacobiReport {
    /// Triples built from R and L only, where ω is the ordinary loop cocycle.
    pub undeformed: f64,
    /// Triples involving Q, S, A or B. Reported, not asserted.
    pub deformed: f64,
    /// Largest single term of any sum, the scale the residuals compare to.
    pub largest_term: f64,
}

fn omega(x: GeneratorTerm, e: &AlgebraElement, gp: &GlobalParams, r0: f64) -> Result<C64> {
    let f = Laurent::monomial(x.level, x.coeff);
    e.terms().try_fold(ZERO, |acc, t| Ok(acc + cocycle(&f, x.kind, &Laurent::monomial(t.level, t.coeff), t.kind, gp, r0)?))
}

/// Cocycle condition over all basis triples with levels in [−bound, bound].
pub fn cocycle_jacobi(gp: &GlobalParams, bound: i32, r0: f64) -> Result<CocycleJacobiReport> {
    let alg = LoopAlgebra::new(gp.h, gp.alpha)?;
    let basis = LoopAlgebra::level_basis(bound);
    let elem = |t: GeneratorTerm| AlgebraElement::from_term(t);
    let mut rep = CocycleJacobiReport { undeformed: 0.0, deformed: 0.0, largest_term: 0.0 };
    for (i, &x) in basis.iter().enumerate() {
        for (j, &y) in basis.iter().enumerate().skip(i) {
            for &z in &basis[j..] {
                let (px, py, pz) = (x.kind.parity(), y.kind.parity(), z.kind.parity());
                let terms = [
                    omega(x, &alg.bracket_elements(&elem(y), &elem(z)), gp, r0)? * px.koszul(pz),
                    omega(y, &alg.bracket_elements(&elem(z), &elem(x)), gp, r0)? * py.koszul(px),
                    omega(z, &alg.bracket_elements(&elem(x), &elem(y)), gp, r0)? * pz.koszul(py),
                ];
                rep.largest_term = terms.iter().fold(rep.largest_term, |m, t| m.max(t.norm()));
                let v: C64 = terms.iter().sum();
                let plain = [x, y, z].iter().all(|t| matches!(t.kind, Kind::R(..) | Kind::L(..)));
                let slot = if plain { &mut rep.undeformed } else { &mut rep.deformed };
                *slot = slot.max(v.norm());
            }
        }
    }
    Ok(rep)
}
