//! Z2-graded linear algebra on small dense spaces.
//!
//! Tensor products follow the Koszul rule
//! `(A⊗B)(v⊗w) = (-1)^{|B||v|} (Av)⊗(Bw)` and use first-factor-major
//! basis ordering.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::numeric::{C64, ONE, ZERO};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Parity {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Koszul sign (-1)^{|self||other|}.
    pub fn koszul(self, other: Parity) -> f64 {
        if self.is_odd() && other.is_odd() {
            -1.0
        } else {
            1.0
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    parities: Vec<Parity>,
}

impl GradedSpace {
    pub fn new(parities: Vec<Parity>) -> Self {
        GradedSpace { parities }
    }

    /// The fundamental space with basis (φ¹, φ², ψ¹, ψ²).
    pub fn fundamental() -> Self {
        use Parity::*;
        GradedSpace::new(vec![Even, Even, Odd, Odd])
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        let mut p = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.parities {
            for &b in &other.parities {
                p.push(a + b);
            }
        }
        GradedSpace::new(p)
    }

    pub fn tensor_power(&self, n: usize) -> GradedSpace {
        let mut out = GradedSpace::new(vec![Parity::Even]);
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }
}

/// A dense linear map between graded spaces. The degree is inferred from
/// the sparsity pattern; `None` means the operator is inhomogeneous.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    space_out: GradedSpace,
    space_in: GradedSpace,
    mat: DMatrix<C64>,
    parity: Option<Parity>,
}

fn infer_parity(out: &GradedSpace, inp: &GradedSpace, mat: &DMatrix<C64>) -> Option<Parity> {
    let mut even = false;
    let mut odd = false;
    for i in 0..mat.nrows() {
        for j in 0..mat.ncols() {
            if mat[(i, j)] != ZERO {
                match out.parity(i) + inp.parity(j) {
                    Parity::Even => even = true,
                    Parity::Odd => odd = true,
                }
            }
        }
    }
    match (even, odd) {
        (_, false) => Some(Parity::Even),
        (false, true) => Some(Parity::Odd),
        (true, true) => None,
    }
}

impl GradedOperator {
    pub fn new(space_out: GradedSpace, space_in: GradedSpace, mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != space_out.dim() || mat.ncols() != space_in.dim() {
            return Err(Error::Dimension(format!(
                "matrix {}x{} vs spaces {}->{}",
                mat.nrows(),
                mat.ncols(),
                space_in.dim(),
                space_out.dim()
            )));
        }
        let parity = infer_parity(&space_out, &space_in, &mat);
        Ok(GradedOperator { space_out, space_in, mat, parity })
    }

    /// Endomorphism of `space`; panics on a shape mismatch (internal use).
    pub fn endo(space: &GradedSpace, mat: DMatrix<C64>) -> Self {
        GradedOperator::new(space.clone(), space.clone(), mat).expect("endomorphism shape")
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let n = space.dim();
        GradedOperator::endo(space, DMatrix::identity(n, n))
    }

    pub fn zeros(space: &GradedSpace) -> Self {
        let n = space.dim();
        GradedOperator::endo(space, DMatrix::zeros(n, n))
    }

    /// Endomorphism of the fundamental space with a single unit entry.
    pub fn unit(space: &GradedSpace, row: usize, col: usize) -> Self {
        let n = space.dim();
        let mut m = DMatrix::zeros(n, n);
        m[(row, col)] = ONE;
        GradedOperator::endo(space, m)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn space_in(&self) -> &GradedSpace {
        &self.space_in
    }

    pub fn space_out(&self) -> &GradedSpace {
        &self.space_out
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Max-abs distance to another operator of the same shape.
    pub fn dist(&self, other: &GradedOperator) -> f64 {
        (&self.mat - &other.mat).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn scale(&self, s: C64) -> GradedOperator {
        self.with_matrix(&self.mat * s)
    }

    fn with_matrix(&self, mat: DMatrix<C64>) -> GradedOperator {
        let parity = infer_parity(&self.space_out, &self.space_in, &mat);
        GradedOperator { space_out: self.space_out.clone(), space_in: self.space_in.clone(), mat, parity }
    }

    /// Split into (even, odd) homogeneous parts.
    pub fn homogeneous_parts(&self) -> (GradedOperator, GradedOperator) {
        let mut even = self.mat.clone();
        let mut odd = self.mat.clone();
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                match self.space_out.parity(i) + self.space_in.parity(j) {
                    Parity::Even => odd[(i, j)] = ZERO,
                    Parity::Odd => even[(i, j)] = ZERO,
                }
            }
        }
        (self.with_matrix(even), self.with_matrix(odd))
    }

    pub fn compose(&self, rhs: &GradedOperator) -> Result<GradedOperator> {
        if self.space_in != rhs.space_out {
            return Err(Error::Dimension("composition of incompatible spaces".into()));
        }
        let mat = &self.mat * &rhs.mat;
        let parity = infer_parity(&self.space_out, &rhs.space_in, &mat);
        Ok(GradedOperator { space_out: self.space_out.clone(), space_in: rhs.space_in.clone(), mat, parity })
    }

    fn same_shape(&self, rhs: &GradedOperator) -> Result<()> {
        if self.space_in != rhs.space_in || self.space_out != rhs.space_out {
            Err(Error::Dimension("operators act on different spaces".into()))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, rhs: &GradedOperator) -> Result<GradedOperator> {
        self.same_shape(rhs)?;
        Ok(self.with_matrix(&self.mat + &rhs.mat))
    }

    pub fn try_sub(&self, rhs: &GradedOperator) -> Result<GradedOperator> {
        self.same_shape(rhs)?;
        Ok(self.with_matrix(&self.mat - &rhs.mat))
    }
}

impl Add for &GradedOperator {
    type Output = GradedOperator;
    fn add(self, rhs: &GradedOperator) -> GradedOperator {
        self.try_add(rhs).expect("operator shapes")
    }
}

impl Sub for &GradedOperator {
    type Output = GradedOperator;
    fn sub(self, rhs: &GradedOperator) -> GradedOperator {
        self.try_sub(rhs).expect("operator shapes")
    }
}

impl Mul for &GradedOperator {
    type Output = GradedOperator;
    fn mul(self, rhs: &GradedOperator) -> GradedOperator {
        self.compose(rhs).expect("operator shapes")
    }
}

impl Mul<C64> for &GradedOperator {
    type Output = GradedOperator;
    fn mul(self, rhs: C64) -> GradedOperator {
        self.scale(rhs)
    }
}

impl Neg for &GradedOperator {
    type Output = GradedOperator;
    fn neg(self) -> GradedOperator {
        self.scale(-ONE)
    }
}

/// Graded tensor product. Inhomogeneous right factors are handled entrywise,
/// which is the same as summing over their homogeneous parts.
pub fn kron_graded(a: &GradedOperator, b: &GradedOperator) -> GradedOperator {
    let (ao, ai) = (a.space_out(), a.space_in());
    let (bo, bi) = (b.space_out(), b.space_in());
    let (na_o, na_i, nb_o, nb_i) = (ao.dim(), ai.dim(), bo.dim(), bi.dim());
    let mut m = DMatrix::zeros(na_o * nb_o, na_i * nb_i);
    for i in 0..na_o {
        for j in 0..na_i {
            let aij = a.mat[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..nb_o {
                for l in 0..nb_i {
                    let bkl = b.mat[(k, l)];
                    if bkl == ZERO {
                        continue;
                    }
                    let s = (bo.parity(k) + bi.parity(l)).koszul(ai.parity(j));
                    m[(i * nb_o + k, j * nb_i + l)] = aij * bkl * s;
                }
            }
        }
    }
    GradedOperator::new(ao.tensor(bo), ai.tensor(bi), m).expect("kron shape")
}

/// P: V⊗W → W⊗V, v⊗w ↦ (-1)^{|v||w|} w⊗v.
pub fn graded_swap(v: &GradedSpace, w: &GradedSpace) -> GradedOperator {
    let (nv, nw) = (v.dim(), w.dim());
    let mut m = DMatrix::zeros(nv * nw, nv * nw);
    for a in 0..nv {
        for b in 0..nw {
            m[(b * nv + a, a * nw + b)] = C64::new(v.parity(a).koszul(w.parity(b)), 0.0);
        }
    }
    GradedOperator::new(w.tensor(v), v.tensor(w), m).expect("swap shape")
}

fn multi_index(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

fn flat_index(ix: &[usize], dims: &[usize]) -> usize {
    ix.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

type SignedMap = Vec<(usize, f64)>;

/// Image index and Koszul sign of every input basis state under the leg
/// permutation.
fn permutation_map(legs: &[GradedSpace], perm: &[usize]) -> Result<(Vec<GradedSpace>, SignedMap)> {
    let n = legs.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Invalid(format!("{perm:?} is not a permutation of {n} legs")));
    }
    let dims_in: Vec<usize> = legs.iter().map(|s| s.dim()).collect();
    let mut out_legs = vec![GradedSpace::new(vec![]); n];
    for a in 0..n {
        out_legs[perm[a]] = legs[a].clone();
    }
    let dims_out: Vec<usize> = out_legs.iter().map(|s| s.dim()).collect();
    let total: usize = dims_in.iter().product();
    let map = (0..total)
        .map(|idx| {
            let ix = multi_index(idx, &dims_in);
            let mut sign = 1.0;
            for a in 0..n {
                for b in (a + 1)..n {
                    if perm[a] > perm[b] {
                        sign *= legs[a].parity(ix[a]).koszul(legs[b].parity(ix[b]));
                    }
                }
            }
            let mut ox = vec![0; n];
            for a in 0..n {
                ox[perm[a]] = ix[a];
            }
            (flat_index(&ox, &dims_out), sign)
        })
        .collect();
    Ok((out_legs, map))
}

fn leg_product(ls: &[GradedSpace]) -> GradedSpace {
    ls.iter().fold(GradedSpace::new(vec![Parity::Even]), |acc, s| acc.tensor(s))
}

/// Operator moving tensor leg `a` of the input to position `perm[a]` of the
/// output, with the Koszul sign of the reordering.
pub fn graded_permutation(legs: &[GradedSpace], perm: &[usize]) -> Result<GradedOperator> {
    let (out_legs, map) = permutation_map(legs, perm)?;
    let mut m = DMatrix::zeros(map.len(), map.len());
    for (idx, &(o, sign)) in map.iter().enumerate() {
        m[(o, idx)] = C64::new(sign, 0.0);
    }
    GradedOperator::new(leg_product(&out_legs), leg_product(legs), m)
}

/// Place `op` (acting on legs i⊗j, 1-based, i<j) into an n-leg product of
/// copies of `leg`, identity elsewhere.
pub fn embed_legs(op: &GradedOperator, legs: (usize, usize), n: usize, leg: &GradedSpace) -> Result<GradedOperator> {
    let (i, j) = legs;
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::LegIndex { i, j, n });
    }
    let pair = leg.tensor(leg);
    if op.space_in() != &pair || op.space_out() != &pair {
        return Err(Error::Dimension("embedded operator must act on leg⊗leg".into()));
    }
    let rest = leg.tensor_power(n - 2);
    let base = kron_graded(op, &GradedOperator::identity(&rest));
    // leg 0 -> i-1, leg 1 -> j-1, others fill remaining slots in order;
    // conjugating by the signed permutation P is a relabelling, P⁻¹ = Pᵀ
    let mut perm = vec![i - 1, j - 1];
    perm.extend((0..n).filter(|&p| p != i - 1 && p != j - 1));
    let (_, map) = permutation_map(&vec![leg.clone(); n], &perm)?;
    let dim = map.len();
    let mut m = DMatrix::zeros(dim, dim);
    for c in 0..dim {
        let (oc, sc) = map[c];
        for r in 0..dim {
            let v = base.mat[(r, c)];
            if v != ZERO {
                let (or, sr) = map[r];
                m[(or, oc)] = v * (sr * sc);
            }
        }
    }
    GradedOperator::new(leg.tensor_power(n), leg.tensor_power(n), m)
}

/// AB − (−1)^{|A||B|} BA for homogeneous A, B.
pub fn supercommutator(a: &GradedOperator, b: &GradedOperator) -> Result<GradedOperator> {
    let pa = a.parity().ok_or(Error::Inhomogeneous)?;
    let pb = b.parity().ok_or(Error::Inhomogeneous)?;
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    Ok(&ab - &ba.scale(C64::new(pa.koszul(pb), 0.0)))
}

/// Ordinary commutator, valid for any operators.
pub fn commutator(a: &GradedOperator, b: &GradedOperator) -> GradedOperator {
    &(a * b) - &(b * a)
}
