//! Fundamental evaluation representation on (φ¹, φ², ψ¹, ψ²).

use nalgebra::DMatrix;

use super::algebra::{eps, AlgebraElement, GeneratorTerm, Kind, LoopAlgebra};
use crate::numeric::C64;
use crate::params::Kinematics;
use crate::superlinalg::{supercommutator, GradedOperator, GradedSpace};
use crate::{Error, Result};

const PHI: usize = 0;
const PSI: usize = 2;

/// Level-0 matrix of a generator.
pub fn represent_kind(kind: Kind, kin: &Kinematics) -> Result<DMatrix<C64>> {
    let rep = &kin.rep;
    let mut m = DMatrix::zeros(4, 4);
    let e = |x: u8, y: u8| C64::new(eps(x, y), 0.0);
    match kind {
        Kind::R(a, b) | Kind::L(a, b) => {
            let off = if matches!(kind, Kind::R(..)) { PHI } else { PSI };
            for cc in 0..2u8 {
                m[(off + a as usize, off + cc as usize)] += e(b, cc) * 0.5;
                m[(off + b as usize, off + cc as usize)] += e(a, cc) * 0.5;
            }
        }
        Kind::Q(al, b) | Kind::S(al, b) => {
            let (up, down) = if matches!(kind, Kind::Q(..)) { (rep.a, -rep.b) } else { (-rep.c, rep.d) };
            for cc in 0..2u8 {
                m[(PSI + al as usize, PHI + cc as usize)] += up * e(b, cc);
                m[(PHI + b as usize, PSI + cc as usize)] += down * e(al, cc);
            }
        }
        Kind::A => {
            for i in 0..4 {
                m[(i, i)] = rep.q * 0.5;
            }
        }
        Kind::B => {
            let v = (rep.q * 2.0).inv();
            for i in 0..4 {
                m[(i, i)] = if i < 2 { -v } else { v };
            }
        }
        Kind::C | Kind::D => {
            return Err(Error::NotRepresented(kind.to_string()));
        }
    }
    Ok(m)
}

/// ρ(t) = coeff · zⁿ · ρ(kind).
pub fn represent(t: GeneratorTerm, kin: &Kinematics) -> Result<GradedOperator> {
    let m = represent_kind(t.kind, kin)? * (t.coeff * kin.z().powi(t.level));
    Ok(GradedOperator::endo(&GradedSpace::fundamental(), m))
}

pub fn represent_element(x: &AlgebraElement, kin: &Kinematics) -> Result<GradedOperator> {
    let mut m = DMatrix::zeros(4, 4);
    for t in x.terms() {
        m += represent_kind(t.kind, kin)? * (t.coeff * kin.z().powi(t.level));
    }
    Ok(GradedOperator::endo(&GradedSpace::fundamental(), m))
}

/// Max over all generator pairs with levels in [−level_bound, level_bound]
/// of ‖[ρ(s), ρ(t)} − ρ([s, t])‖, relative to the size of the operands.
pub fn homomorphism_residual(kin: &Kinematics, level_bound: i32) -> Result<f64> {
    let alg = LoopAlgebra::new(kin.gp.h, kin.gp.alpha)?;
    let basis = LoopAlgebra::level_basis(level_bound);
    let reps: Vec<GradedOperator> = basis.iter().map(|&t| represent(t, kin)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (s, rs) in basis.iter().zip(&reps) {
        for (t, rt) in basis.iter().zip(&reps) {
            let lhs = supercommutator(rs, rt)?;
            let rhs = represent_element(&alg.bracket(*s, *t)?, kin)?;
            let scale = 1.0 + rs.max_abs() * rt.max_abs();
            worst = worst.max(lhs.dist(&rhs) / scale);
        }
    }
    Ok(worst)
}

/// Supertrace, used to check tracelessness.
pub fn supertrace(m: &DMatrix<C64>) -> C64 {
    m[(0, 0)] + m[(1, 1)] - m[(2, 2)] - m[(3, 3)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c, r, ONE};
    use crate::params::{Branch, GlobalParams};

    fn kin() -> Kinematics {
        let gp = GlobalParams::new(r(0.3), r(1.0), Branch::Plus).unwrap();
        Kinematics::new(&gp, r(2.0), r(1.0)).unwrap()
    }

    #[test]
    fn a_is_half_q() {
        let k = kin();
        let a = represent(GeneratorTerm::new(Kind::A, 0), &k).unwrap();
        assert!((a.matrix() - DMatrix::<C64>::identity(4, 4) * (k.q() * 0.5)).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn r12_is_cartan() {
        let k = kin();
        let m = represent_kind(Kind::R(0, 1), &k).unwrap();
        // R¹²φ¹ = −½φ¹, R¹²φ² = +½φ²
        assert_eq!(m[(0, 0)], r(-0.5));
        assert_eq!(m[(1, 1)], r(0.5));
        let sq = &m * &m;
        assert!((sq[(0, 0)] - r(0.25)).norm() < 1e-15 && (sq[(1, 1)] - r(0.25)).norm() < 1e-15);
        assert!(supertrace(&m).norm() < 1e-15);
    }

    #[test]
    fn odd_generators_square_to_zero() {
        let k = kin();
        for kind in [Kind::Q(0, 0), Kind::Q(1, 0), Kind::S(0, 1), Kind::S(1, 1)] {
            let m = represent_kind(kind, &k).unwrap();
            assert!((&m * &m).iter().all(|z| z.norm() < 1e-15), "{kind}");
        }
    }

    #[test]
    fn levels_scale_by_z() {
        let k = kin();
        let t = GeneratorTerm::new(Kind::Q(0, 1), 3).scaled(c(0.0, 2.0));
        let m = represent(t, &k).unwrap();
        let m0 = represent_kind(Kind::Q(0, 1), &k).unwrap();
        let diff = m.matrix() - m0 * (c(0.0, 2.0) * k.z().powi(3));
        assert!(diff.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn affine_generators_rejected() {
        assert!(matches!(represent(GeneratorTerm::new(Kind::C, 0), &kin()), Err(Error::NotRepresented(_))));
        assert!(represent(GeneratorTerm::new(Kind::D, 0), &kin()).is_err());
    }

    #[test]
    fn qs_anticommutator_matches_bracket() {
        let k = kin();
        let q = represent(GeneratorTerm::new(Kind::Q(0, 0), 0), &k).unwrap();
        let s = represent(GeneratorTerm::new(Kind::S(1, 1), 0), &k).unwrap();
        let lhs = supercommutator(&q, &s).unwrap();
        // {Q¹¹, S²²} = −R¹² + L¹² − h⁻¹(z−1)A, written out by hand
        let h = k.gp.h;
        let rhs = represent_kind(Kind::R(0, 1), &k).unwrap() * r(-1.0)
            + represent_kind(Kind::L(0, 1), &k).unwrap()
            - represent_kind(Kind::A, &k).unwrap() * ((k.z() - ONE) / h);
        assert!((lhs.matrix() - rhs).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn level_zero_sweep() {
        assert!(homomorphism_residual(&kin(), 0).unwrap() < 1e-10);
    }

    #[test]
    fn level_two_sweep() {
        let gp = GlobalParams::new(c(0.3, 0.1), c(1.3, -0.2), Branch::Plus).unwrap();
        let k = Kinematics::new(&gp, c(2.0, 0.5), c(1.1, 0.3)).unwrap();
        assert!(homomorphism_residual(&k, 2).unwrap() < 1e-10);
    }
}
