//! Structure constants of the deformed loop algebra.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numeric::{C64, ONE, ZERO};
use crate::superlinalg::Parity;
use crate::{Error, Result};

/// ε^{ab} with ε^{12} = +1; indices are 0-based.
pub fn eps(a: u8, b: u8) -> f64 {
    match (a, b) {
        (0, 1) => 1.0,
        (1, 0) => -1.0,
        _ => 0.0,
    }
}

/// Generator labels. R and L are symmetric in their indices and stored with
/// the smaller index first; indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    R(u8, u8),
    L(u8, u8),
    Q(u8, u8),
    S(u8, u8),
    A,
    B,
    C,
    D,
}

impl Kind {
    pub fn r(a: u8, b: u8) -> Kind {
        Kind::R(a.min(b), a.max(b))
    }

    pub fn l(a: u8, b: u8) -> Kind {
        Kind::L(a.min(b), a.max(b))
    }

    pub fn parity(self) -> Parity {
        match self {
            Kind::Q(..) | Kind::S(..) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// All sixteen loop generators (no C, D).
    pub fn loop_basis() -> Vec<Kind> {
        let mut out = Vec::with_capacity(16);
        for (a, b) in [(0, 0), (0, 1), (1, 1)] {
            out.push(Kind::R(a, b));
        }
        for (a, b) in [(0, 0), (0, 1), (1, 1)] {
            out.push(Kind::L(a, b));
        }
        for a in 0..2 {
            for b in 0..2 {
                out.push(Kind::Q(a, b));
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                out.push(Kind::S(a, b));
            }
        }
        out.push(Kind::A);
        out.push(Kind::B);
        out
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::R(a, b) => write!(f, "R{}{}", a + 1, b + 1),
            Kind::L(a, b) => write!(f, "L{}{}", a + 1, b + 1),
            Kind::Q(a, b) => write!(f, "Q{}{}", a + 1, b + 1),
            Kind::S(a, b) => write!(f, "S{}{}", a + 1, b + 1),
            Kind::A => write!(f, "A"),
            Kind::B => write!(f, "B"),
            Kind::C => write!(f, "C"),
            Kind::D => write!(f, "D"),
        }
    }
}

/// A multiple of a generator at a given loop level; C and D carry level 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorTerm {
    pub kind: Kind,
    pub level: i32,
    pub coeff: C64,
}

impl GeneratorTerm {
    pub fn new(kind: Kind, level: i32) -> Self {
        let kind = match kind {
            Kind::R(a, b) => Kind::r(a, b),
            Kind::L(a, b) => Kind::l(a, b),
            k => k,
        };
        let level = if matches!(kind, Kind::C | Kind::D) { 0 } else { level };
        GeneratorTerm { kind, level, coeff: ONE }
    }

    pub fn scaled(mut self, s: C64) -> Self {
        self.coeff *= s;
        self
    }
}

/// Finite linear combination of generators at integer levels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlgebraElement {
    terms: BTreeMap<(Kind, i32), C64>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn from_term(t: GeneratorTerm) -> Self {
        let mut e = AlgebraElement::zero();
        e.push(t);
        e
    }

    pub fn push(&mut self, t: GeneratorTerm) {
        if t.coeff == ZERO {
            return;
        }
        let t = GeneratorTerm::new(t.kind, t.level).scaled(t.coeff);
        let key = (t.kind, t.level);
        let v = self.terms.entry(key).or_insert(ZERO);
        *v += t.coeff;
        if *v == ZERO {
            self.terms.remove(&key);
        }
    }

    fn add(&mut self, kind: Kind, level: i32, coeff: C64) {
        self.push(GeneratorTerm { kind, level, coeff });
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, s: C64) {
        for (&(k, l), &c) in &other.terms {
            self.add(k, l, c * s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = GeneratorTerm> + '_ {
        self.terms.iter().map(|(&(kind, level), &coeff)| GeneratorTerm { kind, level, coeff })
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    /// Coefficient of a generator at a level.
    pub fn coeff(&self, kind: Kind, level: i32) -> C64 {
        let t = GeneratorTerm::new(kind, level);
        self.terms.get(&(t.kind, t.level)).copied().unwrap_or(ZERO)
    }
}

/// The deformed loop algebra at fixed (h, α).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopAlgebra {
    pub h: C64,
    pub alpha: C64,
}

impl LoopAlgebra {
    pub fn new(h: C64, alpha: C64) -> Result<Self> {
        if h.norm() < 1e-300 {
            return Err(Error::Degenerate("loop brackets contain 1/h".into()));
        }
        if alpha.norm() < 1e-300 {
            return Err(Error::Invalid("alpha must be nonzero".into()));
        }
        Ok(LoopAlgebra { h, alpha })
    }

    /// Bracket of two basis generators (coefficients included).
    pub fn bracket(&self, s: GeneratorTerm, t: GeneratorTerm) -> Result<AlgebraElement> {
        for k in [s.kind, t.kind] {
            if matches!(k, Kind::C | Kind::D) {
                return Err(Error::Invalid(format!("{k} is outside the loop algebra")));
            }
        }
        let mut out = AlgebraElement::zero();
        self.basis_bracket(s.kind, t.kind, s.level, t.level, &mut out, s.coeff * t.coeff);
        Ok(out)
    }

    /// Bracket extended bilinearly.
    pub fn bracket_elements(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for s in x.terms() {
            for t in y.terms() {
                self.basis_bracket(s.kind, t.kind, s.level, t.level, &mut out, s.coeff * t.coeff);
            }
        }
        out
    }

    fn basis_bracket(&self, s: Kind, t: Kind, m: i32, n: i32, out: &mut AlgebraElement, w: C64) {
        use Kind::*;
        let l = m + n;
        let hinv = self.h.inv();
        let al = self.alpha;
        match (s, t) {
            (R(a, b), R(c, d)) => {
                out.add(Kind::r(a, d), l, w * eps(b, c));
                out.add(Kind::r(b, c), l, w * eps(a, d));
            }
            (L(a, b), L(c, d)) => {
                out.add(Kind::l(a, d), l, w * eps(b, c));
                out.add(Kind::l(b, c), l, w * eps(a, d));
            }
            (R(a, b), Q(g, d)) => {
                out.add(Q(g, a), l, w * 0.5 * eps(b, d));
                out.add(Q(g, b), l, w * 0.5 * eps(a, d));
            }
            (R(a, b), S(g, d)) => {
                out.add(S(g, a), l, w * 0.5 * eps(b, d));
                out.add(S(g, b), l, w * 0.5 * eps(a, d));
            }
            (L(a, b), Q(g, d)) => {
                out.add(Q(a, d), l, w * 0.5 * eps(b, g));
                out.add(Q(b, d), l, w * 0.5 * eps(a, g));
            }
            (L(a, b), S(g, d)) => {
                out.add(S(a, d), l, w * 0.5 * eps(b, g));
                out.add(S(b, d), l, w * 0.5 * eps(a, g));
            }
            (Q(a, b), Q(g, d)) => {
                out.add(A, l, w * al * 2.0 * eps(a, g) * eps(b, d));
            }
            (Q(a, b), S(g, d)) => {
                let ee = eps(a, g) * eps(b, d);
                out.add(Kind::r(b, d), l, -w * eps(a, g));
                out.add(Kind::l(a, g), l, w * eps(b, d));
                out.add(A, l + 1, -w * hinv * ee);
                out.add(A, l, w * hinv * ee);
            }
            (S(a, b), S(g, d)) => {
                out.add(A, l + 1, -w * 2.0 / al * eps(a, g) * eps(b, d));
            }
            (B, Q(a, b)) => {
                out.add(Q(a, b), l + 1, w * hinv);
                out.add(Q(a, b), l, -w * hinv);
                out.add(S(a, b), l, w * al * 2.0);
            }
            (B, S(a, b)) => {
                out.add(Q(a, b), l + 1, w * 2.0 / al);
                out.add(S(a, b), l + 1, -w * hinv);
                out.add(S(a, b), l, w * hinv);
            }
            // remaining orders follow from graded antisymmetry
            (Q(..) | S(..), R(..) | L(..) | B) | (L(..), R(..)) | (S(..), Q(..)) => {
                let sign = -s.parity().koszul(t.parity());
                self.basis_bracket(t, s, n, m, out, w * sign);
            }
            _ => {}
        }
    }

    /// Graded Jacobi combination for three elements.
    pub fn jacobi(&self, x: &AlgebraElement, px: Parity, y: &AlgebraElement, py: Parity, z: &AlgebraElement, pz: Parity) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        let xyz = self.bracket_elements(x, &self.bracket_elements(y, z));
        let yzx = self.bracket_elements(y, &self.bracket_elements(z, x));
        let zxy = self.bracket_elements(z, &self.bracket_elements(x, y));
        out.add_scaled(&xyz, C64::new(px.koszul(pz), 0.0));
        out.add_scaled(&yzx, C64::new(py.koszul(px), 0.0));
        out.add_scaled(&zxy, C64::new(pz.koszul(py), 0.0));
        out
    }

    /// Basis elements with levels in [−bound, bound].
    pub fn level_basis(bound: i32) -> Vec<GeneratorTerm> {
        let mut out = Vec::new();
        for kind in Kind::loop_basis() {
            for level in -bound..=bound {
                out.push(GeneratorTerm::new(kind, level));
            }
        }
        out
    }

    /// Max Jacobi violation over all triples of basis generators with levels
    /// in [−bound, bound]. The graded Jacobi combination is symmetric up to
    /// sign under permutations, so unordered triples suffice.
    pub fn jacobi_residual(&self, bound: i32) -> f64 {
        let basis = Self::level_basis(bound);
        let elems: Vec<AlgebraElement> = basis.iter().map(|&t| AlgebraElement::from_term(t)).collect();
        let n = basis.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst: f64 = 0.0;
                for j in i..n {
                    let xy = self.bracket_elements(&elems[i], &elems[j]);
                    for k in j..n {
                        let (px, py, pz) = (basis[i].kind.parity(), basis[j].kind.parity(), basis[k].kind.parity());
                        let yz = self.bracket_elements(&elems[j], &elems[k]);
                        let zx = self.bracket_elements(&elems[k], &elems[i]);
                        let mut acc = AlgebraElement::zero();
                        acc.add_scaled(&self.bracket_elements(&elems[i], &yz), C64::new(px.koszul(pz), 0.0));
                        acc.add_scaled(&self.bracket_elements(&elems[j], &zx), C64::new(py.koszul(px), 0.0));
                        acc.add_scaled(&self.bracket_elements(&elems[k], &xy), C64::new(pz.koszul(py), 0.0));
                        worst = worst.max(acc.max_abs());
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}
