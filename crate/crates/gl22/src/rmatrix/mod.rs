//! The fundamental classical r-matrix: coefficients, state-action and
//! universal constructions, identities, CYBE and the s/t split.

mod coeffs;

pub use coeffs::{coefficient_jacobian, coefficients, coefficient_form, CoefficientSet, Structure};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::fundrep::{represent_kind, Kind};
use crate::numeric::{guard, C64, ONE, ZERO};
use crate::params::Kinematics;
use crate::superlinalg::{embed_legs, graded_swap, kron_graded, GradedOperator, GradedSpace};
use crate::{Error, Result};

const PHI1: usize = 0;
const PHI2: usize = 1;
const PSI1: usize = 2;
const PSI2: usize = 3;

fn st(i: usize, j: usize) -> usize {
    i * 4 + j
}

pub fn pair_space() -> GradedSpace {
    GradedSpace::fundamental().tensor(&GradedSpace::fundamental())
}

/// 16×16 operator of the state action with the given coefficients. The
/// rational structure drops the constant ±½ shifts.
pub fn table_matrix(co: &CoefficientSet, structure: Structure) -> GradedOperator {
    let one = match structure {
        Structure::Trigonometric => ONE,
        Structure::Rational => ZERO,
    };
    let CoefficientSet { a, b, c, d, e, f, g, h, k, l } = *co;
    let mut m = DMatrix::<C64>::zeros(16, 16);
    m[(st(PHI1, PHI1), st(PHI1, PHI1))] = a;
    m[(st(PHI2, PHI2), st(PHI2, PHI2))] = a;
    let col = st(PHI1, PHI2);
    m[(st(PHI2, PHI1), col)] += (a + b + one) * 0.5;
    m[(st(PHI1, PHI2), col)] += (a - b) * 0.5;
    m[(st(PSI1, PSI2), col)] += c;
    m[(st(PSI2, PSI1), col)] -= c;
    let col = st(PHI2, PHI1);
    m[(st(PHI2, PHI1), col)] += (a - b) * 0.5;
    m[(st(PHI1, PHI2), col)] += (a + b - one) * 0.5;
    m[(st(PSI1, PSI2), col)] -= c;
    m[(st(PSI2, PSI1), col)] += c;
    m[(st(PSI1, PSI1), st(PSI1, PSI1))] = -d;
    m[(st(PSI2, PSI2), st(PSI2, PSI2))] = -d;
    let col = st(PSI1, PSI2);
    m[(st(PSI2, PSI1), col)] -= (d + e + one) * 0.5;
    m[(st(PSI1, PSI2), col)] -= (d - e) * 0.5;
    m[(st(PHI1, PHI2), col)] -= f;
    m[(st(PHI2, PHI1), col)] += f;
    let col = st(PSI2, PSI1);
    m[(st(PSI2, PSI1), col)] -= (d - e) * 0.5;
    m[(st(PSI1, PSI2), col)] -= (d + e - one) * 0.5;
    m[(st(PHI1, PHI2), col)] += f;
    m[(st(PHI2, PHI1), col)] -= f;
    for p in [PHI1, PHI2] {
        for s in [PSI1, PSI2] {
            m[(st(p, s), st(p, s))] += g;
            m[(st(s, p), st(p, s))] += h;
            m[(st(s, p), st(s, p))] += l;
            m[(st(p, s), st(s, p))] += k;
        }
    }
    GradedOperator::endo(&pair_space(), m)
}

/// r-matrix together with the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub op: GradedOperator,
    pub kin1: Kinematics,
    pub kin2: Kinematics,
    pub coeffs: CoefficientSet,
}

pub fn r_fund_table(kin1: &Kinematics, kin2: &Kinematics) -> Result<RMatrix> {
    let coeffs = coefficients(kin1, kin2)?;
    Ok(RMatrix { op: table_matrix(&coeffs, Structure::Trigonometric), kin1: *kin1, kin2: *kin2, coeffs })
}

/// One term c·X⊗Y of a generator tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorTerm {
    pub coeff: f64,
    pub left: Kind,
    pub right: Kind,
}

fn t(coeff: f64, left: Kind, right: Kind) -> TensorTerm {
    TensorTerm { coeff, left, right }
}

fn odd_pairs(out: &mut Vec<TensorTerm>, sign: f64, q_first: bool) {
    use crate::fundrep::eps;
    for al in 0..2u8 {
        for b in 0..2u8 {
            for ga in 0..2u8 {
                for d in 0..2u8 {
                    let e = eps(al, ga) * eps(b, d);
                    if e == 0.0 {
                        continue;
                    }
                    let (l, r) = if q_first {
                        (Kind::Q(al, b), Kind::S(ga, d))
                    } else {
                        (Kind::S(ga, d), Kind::Q(al, b))
                    };
                    out.push(t(sign * e, l, r));
                }
            }
        }
    }
}

/// Generator content of s₁₂.
pub fn s12_terms() -> Vec<TensorTerm> {
    let mut v = vec![
        t(1.0, Kind::R(0, 1), Kind::R(0, 1)),
        t(-1.0, Kind::R(1, 1), Kind::R(0, 0)),
        t(-1.0, Kind::L(0, 1), Kind::L(0, 1)),
        t(1.0, Kind::L(1, 1), Kind::L(0, 0)),
        t(-1.0, Kind::A, Kind::B),
    ];
    odd_pairs(&mut v, -1.0, true);
    v
}

/// Generator content of s₂₁ (the graded flip of s₁₂).
pub fn s21_terms() -> Vec<TensorTerm> {
    let mut v = vec![
        t(1.0, Kind::R(0, 1), Kind::R(0, 1)),
        t(-1.0, Kind::R(0, 0), Kind::R(1, 1)),
        t(-1.0, Kind::L(0, 1), Kind::L(0, 1)),
        t(1.0, Kind::L(0, 0), Kind::L(1, 1)),
        t(-1.0, Kind::B, Kind::A),
    ];
    odd_pairs(&mut v, 1.0, false);
    v
}

/// Σ c ρ₁(X z₁^m) ⊗ ρ₂(Y z₂^n) over the terms, with levels (m, n).
pub fn tensor_terms(terms: &[TensorTerm], kin1: &Kinematics, kin2: &Kinematics, levels: (i32, i32)) -> Result<GradedOperator> {
    let v = GradedSpace::fundamental();
    let f1 = kin1.z().powi(levels.0);
    let f2 = kin2.z().powi(levels.1);
    let mut acc = DMatrix::<C64>::zeros(16, 16);
    for term in terms {
        let x = GradedOperator::endo(&v, represent_kind(term.left, kin1)? * f1);
        let y = GradedOperator::endo(&v, represent_kind(term.right, kin2)? * f2);
        acc += kron_graded(&x, &y).into_matrix() * C64::new(term.coeff, 0.0);
    }
    Ok(GradedOperator::endo(&pair_space(), acc))
}

/// (s₁₂, s₂₁, t₁₂) in the fundamental representation.
pub fn st_split(kin1: &Kinematics, kin2: &Kinematics) -> Result<(GradedOperator, GradedOperator, GradedOperator)> {
    let s12 = tensor_terms(&s12_terms(), kin1, kin2, (0, 0))?;
    let s21 = tensor_terms(&s21_terms(), kin1, kin2, (0, 0))?;
    let t12 = &s12 + &s21;
    Ok((s12, s21, t12))
}

fn universal_with(kin1: &Kinematics, kin2: &Kinematics, z1: C64, z2: C64) -> Result<GradedOperator> {
    let den = guard(z1 - z2, "z₁ = z₂").map_err(|_| Error::Collision(format!("z₁ = z₂ = {z1}")))?;
    let (s12, s21, _) = st_split(kin1, kin2)?;
    Ok(&s12.scale(z1 / den) + &s21.scale(z2 / den))
}

/// r = s₁₂ + z₂/(z₁−z₂) t₁₂, built from represented generators.
pub fn r_fund_universal(kin1: &Kinematics, kin2: &Kinematics) -> Result<GradedOperator> {
    universal_with(kin1, kin2, kin1.z(), kin2.z())
}

/// Universal form with the spectral parameter replaced by ζ = z + δz²,
/// i.e. with W₁₁ no longer affine in the spectral parameter.
pub fn r_universal_bent(kin1: &Kinematics, kin2: &Kinematics, delta: C64) -> Result<GradedOperator> {
    let bend = |z: C64| z + delta * z * z;
    universal_with(kin1, kin2, bend(kin1.z()), bend(kin2.z()))
}

/// The affine r-matrix r̂ = r − C⊗D. The central charge C acts as zero in
/// an evaluation representation, so on the fundamental representation r̂
/// is just r.
pub fn r_affine_fund(kin1: &Kinematics, kin2: &Kinematics) -> Result<GradedOperator> {
    Ok(r_fund_table(kin1, kin2)?.op)
}

/// c z₁^m z₂^n A⊗A, a deformation the CYBE cannot detect: A acts as a
/// scalar in any evaluation representation, so the term commutes with every
/// embedded r.
pub fn central_deformation(kin1: &Kinematics, kin2: &Kinematics, m: i32, n: i32, c: C64) -> Result<GradedOperator> {
    Ok(tensor_terms(&[t(1.0, Kind::A, Kind::A)], kin1, kin2, (m, n))?.scale(c))
}

/// ‖r(1,2) + P r(2,1) P‖.
pub fn antisymmetry_residual(r12: &GradedOperator, r21: &GradedOperator) -> f64 {
    let v = GradedSpace::fundamental();
    let p = graded_swap(&v, &v);
    let flipped = &(&p * r21) * &p;
    (r12 + &flipped).max_abs()
}

/// CYBE on three legs, for any r given as a function of two site indices.
pub fn cybe_residual_with(r: &dyn Fn(usize, usize) -> Result<GradedOperator>) -> Result<f64> {
    let v = GradedSpace::fundamental();
    let r12 = embed_legs(&r(0, 1)?, (1, 2), 3, &v)?;
    let r13 = embed_legs(&r(0, 2)?, (1, 3), 3, &v)?;
    let r23 = embed_legs(&r(1, 2)?, (2, 3), 3, &v)?;
    let (s12, s13, s23) = (sparse_rows(&r12), sparse_rows(&r13), sparse_rows(&r23));
    let n = r12.matrix().nrows();
    let mut total = DMatrix::<C64>::zeros(n, n);
    for (a, b) in [(&s12, &s13), (&s12, &s23), (&s13, &s23)] {
        accumulate_product(&mut total, a, b, ONE);
        accumulate_product(&mut total, b, a, -ONE);
    }
    Ok(total.iter().fold(0.0, |acc, z| acc.max(z.norm())))
}

/// Nonzero entries of each row; embedded two-leg operators are sparse.
fn sparse_rows(op: &GradedOperator) -> Vec<Vec<(usize, C64)>> {
    let m = op.matrix();
    (0..m.nrows()).map(|i| (0..m.ncols()).filter(|&j| m[(i, j)] != ZERO).map(|j| (j, m[(i, j)])).collect()).collect()
}

/// out += s·(A B) for row-sparse A and B.
fn accumulate_product(out: &mut DMatrix<C64>, a: &[Vec<(usize, C64)>], b: &[Vec<(usize, C64)>], s: C64) {
    for (i, row) in a.iter().enumerate() {
        for &(k, av) in row {
            for &(j, bv) in &b[k] {
                out[(i, j)] += s * av * bv;
            }
        }
    }
}

pub fn cybe_residual(k1: &Kinematics, k2: &Kinematics, k3: &Kinematics) -> Result<f64> {
    let ks = [k1, k2, k3];
    cybe_residual_with(&|i, j| Ok(r_fund_table(ks[i], ks[j])?.op))
}

/// Which invariants survive an identity shift of the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub linear_residual: f64,
    pub quadratic_residual: f64,
    pub gauge_a_eq_d: f64,
    /// ‖r_shifted − r − λ·Id‖
    pub identity_defect: f64,
}

pub fn shift_identity(rm: &RMatrix, lambda: C64) -> (RMatrix, ShiftReport) {
    let coeffs = rm.coeffs.shifted(lambda);
    let op = table_matrix(&coeffs, Structure::Trigonometric);
    let id = GradedOperator::identity(&pair_space()).scale(lambda);
    let report = ShiftReport {
        linear_residual: coeffs.linear_residual(),
        quadratic_residual: coeffs.quadratic_residual(ONE),
        gauge_a_eq_d: (coeffs.a - coeffs.d).norm(),
        identity_defect: (&(&op - &rm.op) - &id).max_abs(),
    };
    (RMatrix { op, kin1: rm.kin1, kin2: rm.kin2, coeffs }, report)
}
