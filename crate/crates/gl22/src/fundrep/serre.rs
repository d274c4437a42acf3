//! Chevalley generators in the fundamental representation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::algebra::Kind;
use super::represent::represent_kind;
use crate::numeric::C64;
use crate::params::Kinematics;
use crate::Result;

/// Symmetric Cartan matrix of the distinguished Dynkin diagram.
pub const CARTAN: [[f64; 3]; 3] = [[2.0, -1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, 1.0, -2.0]];

#[derive(Debug, Clone, PartialEq)]
pub struct Chevalley {
    pub h: [DMatrix<C64>; 3],
    pub e: [DMatrix<C64>; 3],
    pub f: [DMatrix<C64>; 3],
}

impl Chevalley {
    pub fn new(kin: &Kinematics) -> Result<Self> {
        let rep = |k| represent_kind(k, kin);
        let h1 = rep(Kind::R(0, 1))? * C64::new(2.0, 0.0);
        let h3 = rep(Kind::L(0, 1))? * C64::new(-2.0, 0.0);
        let h2 = rep(Kind::A)? * (-kin.w11) - &h1 * C64::from(0.5) - &h3 * C64::from(0.5);
        Ok(Chevalley {
            e: [-rep(Kind::R(1, 1))?, rep(Kind::Q(0, 0))?, -rep(Kind::L(1, 1))?],
            f: [rep(Kind::R(0, 0))?, -rep(Kind::S(1, 1))?, rep(Kind::L(0, 0))?],
            h: [h1, h2, h3],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SerreReport {
    /// max over j, k of ‖[H_j, E_k] − A_jk E_k‖ and ‖[H_j, F_k] + A_jk F_k‖
    pub cartan: f64,
    /// [E₁,F₁] − H₁, {E₂,F₂} + H₂, [E₃,F₃] + H₃
    pub diagonal: f64,
    /// [E_j, F_k} for j ≠ k
    pub off_diagonal: f64,
    /// [E₁,E₃], {E₂,E₂}, [F₁,F₃], {F₂,F₂}
    pub serre: f64,
}

impl SerreReport {
    pub fn max(&self) -> f64 {
        self.cartan.max(self.diagonal).max(self.off_diagonal).max(self.serre)
    }
}

fn norm(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn odd(j: usize) -> bool {
    j == 1
}

/// Supercommutator with the grading of simple root j (only root 2 is odd).
fn sbracket(a: &DMatrix<C64>, b: &DMatrix<C64>, both_odd: bool) -> DMatrix<C64> {
    if both_odd {
        a * b + b * a
    } else {
        a * b - b * a
    }
}

pub fn serre_chevalley_check(kin: &Kinematics) -> Result<SerreReport> {
    let ch = Chevalley::new(kin)?;
    let mut cartan: f64 = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            let a = CARTAN[j][k];
            cartan = cartan.max(norm(&(sbracket(&ch.h[j], &ch.e[k], false) - &ch.e[k] * C64::from(a))));
            cartan = cartan.max(norm(&(sbracket(&ch.h[j], &ch.f[k], false) + &ch.f[k] * C64::from(a))));
        }
    }
    let signs = [1.0, -1.0, -1.0];
    let mut diagonal: f64 = 0.0;
    let mut off_diagonal: f64 = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            let b = sbracket(&ch.e[j], &ch.f[k], odd(j) && odd(k));
            if j == k {
                diagonal = diagonal.max(norm(&(b - &ch.h[j] * C64::from(signs[j]))));
            } else {
                off_diagonal = off_diagonal.max(norm(&b));
            }
        }
    }
    let serre = [
        norm(&sbracket(&ch.e[0], &ch.e[2], false)),
        norm(&sbracket(&ch.e[1], &ch.e[1], true)),
        norm(&sbracket(&ch.f[0], &ch.f[2], false)),
        norm(&sbracket(&ch.f[1], &ch.f[1], true)),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(SerreReport { cartan, diagonal, off_diagonal, serre })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c, r};
    use crate::params::{Branch, GlobalParams};

    #[test]
    fn chevalley_relations() {
        let gp = GlobalParams::new(c(0.3, 0.1), c(1.3, -0.2), Branch::Plus).unwrap();
        for x in [r(2.0), c(-1.4, 0.8)] {
            let kin = Kinematics::new(&gp, x, c(1.1, 0.3)).unwrap();
            let rep = serre_chevalley_check(&kin).unwrap();
            assert!(rep.max() < 1e-10, "{rep:?}");
        }
    }

    #[test]
    fn rational_point_is_finite() {
        // h = 0 is fine because W₁₁ is evaluated in its finite form
        let gp = GlobalParams::new(r(0.0), r(1.0), Branch::Plus).unwrap();
        let kin = Kinematics::new(&gp, r(2.0), r(1.0)).unwrap();
        assert!(serre_chevalley_check(&kin).unwrap().max() < 1e-10);
    }

    #[test]
    fn wrong_cartan_entry_detected() {
        let gp = GlobalParams::new(r(0.3), r(1.0), Branch::Plus).unwrap();
        let kin = Kinematics::new(&gp, r(2.0), r(1.0)).unwrap();
        let ch = Chevalley::new(&kin).unwrap();
        // A₂₂ = 0: H₂ commutes with E₂ only because of the q-dependence of H₂
        let b = sbracket(&ch.h[1], &ch.e[1], false);
        assert!(norm(&b) < 1e-12);
        let b = sbracket(&ch.h[0], &ch.e[1], false);
        assert!((norm(&(b + &ch.e[1])) < 1e-12) && norm(&ch.e[1]) > 0.1);
    }
}
