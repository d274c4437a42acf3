//! Discrete maps between fundamental representations: conjugation,
//! inversion, statistics flip and duality, with checks of how the
//! coefficients and the r-matrix transform.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::numeric::{guard, mat2, mat2_max_abs, Mat2, C64, I, ONE, ZERO};
use crate::params::{crossratio, site_polys, GlobalParams, Kinematics};
use crate::rmatrix::{coefficients, r_fund_table, CoefficientSet};
use crate::superlinalg::{kron_graded, GradedOperator, GradedSpace};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    ConjugationSite1,
    ConjugationSite2,
    Inversion,
    StatisticsFlip,
    Duality,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 5] = [
        SymmetryKind::ConjugationSite1,
        SymmetryKind::ConjugationSite2,
        SymmetryKind::Inversion,
        SymmetryKind::StatisticsFlip,
        SymmetryKind::Duality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryKind::ConjugationSite1 => "conjugation_site1",
            SymmetryKind::ConjugationSite2 => "conjugation_site2",
            SymmetryKind::Inversion => "inversion",
            SymmetryKind::StatisticsFlip => "statistics_flip",
            SymmetryKind::Duality => "duality",
        }
    }
}

/// Named residuals of one verification, plus values that are only recorded
/// (currently the cross-ratio before and after the map).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub name: String,
    pub checks: Vec<(String, f64)>,
    #[serde(default)]
    pub recorded: Vec<(String, C64)>,
}

impl SymmetryReport {
    fn new(name: &str) -> Self {
        SymmetryReport { name: name.to_string(), checks: Vec::new(), recorded: Vec::new() }
    }

    fn record_crossratio(&mut self, before: &GlobalParams, after: &GlobalParams) {
        self.recorded.push(("s".into(), crossratio(before)));
        self.recorded.push(("s′".into(), crossratio(after)));
    }

    fn push(&mut self, label: &str, value: f64) {
        self.checks.push((label.to_string(), value));
    }

    pub fn max(&self) -> f64 {
        self.checks.iter().fold(0.0, |acc, (_, v)| acc.max(*v))
    }

    pub fn worst(&self) -> Option<&(String, f64)> {
        self.checks.iter().max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

fn mrel(a: &Mat2, b: &Mat2) -> f64 {
    mat2_max_abs(&(a - b)) / (1.0 + mat2_max_abs(a).max(mat2_max_abs(b)))
}

/// Conjugated site: x′ = 1/x, γ′ = −αq/γ; z′ = z and q′ = −q.
pub fn conjugate_site(kin: &Kinematics) -> Result<Kinematics> {
    let x = guard(kin.x, "x = 0")?;
    Kinematics::new(&kin.gp, x.inv(), -kin.gp.alpha * kin.q() / kin.gamma)
}

/// Inverted site: x′ = i(hx+ih′)/(h′x−ih), γ′ = γ/(h′x−ih); z′ = 1/z.
pub fn invert_z(kin: &Kinematics) -> Result<Kinematics> {
    guard(kin.z(), "z = 0")?;
    let p = site_polys(&kin.gp, kin.x);
    Kinematics::new(&kin.gp, I * p.p2 / p.p1, kin.gamma / p.p1)
}

/// Statistics-flipped site: x unchanged, γ′ = α(h′x−ih)(hx+ih′)x/(h′γ(x²−1)).
pub fn statistics_flip(kin: &Kinematics) -> Result<Kinematics> {
    let gp = &kin.gp;
    let p = site_polys(gp, kin.x);
    Kinematics::new(gp, kin.x, gp.alpha * p.p1 * p.p2 * kin.x / (gp.hprime * kin.gamma * p.s))
}

/// Dual global parameters: k′ = ik, α′ = −i(k+k⁻¹)/(k−k⁻¹)·α.
pub fn dual_params(gp: &GlobalParams) -> Result<GlobalParams> {
    let k = gp.k;
    let km = guard(k - k.inv(), "h′ = 0")?;
    GlobalParams::from_k(I * k, -I * (k + k.inv()) / km * gp.alpha)
}

/// Same (x, γ) under the dual global parameters; z′ = −z.
pub fn duality(kin: &Kinematics) -> Result<Kinematics> {
    Kinematics::new(&dual_params(&kin.gp)?, kin.x, kin.gamma)
}

/// At the self-dual modulus k = √i: x′ = −x with γ and α unchanged.
pub fn selfdual_composite(kin: &Kinematics) -> Result<Kinematics> {
    let k2 = kin.gp.k * kin.gp.k;
    if (k2 - I).norm() > 1e-12 {
        return Err(Error::Invalid(format!("composite map needs k² = i, got {k2}")));
    }
    Kinematics::new(&kin.gp, -kin.x, kin.gamma)
}

/// Apply linear maps to each leg of an operator on V⊗V, respecting the
/// graded elementary decomposition r = Σ c e_ij ⊗ e_kl.
pub fn map_legs(r: &GradedOperator, f1: &dyn Fn(&DMatrix<C64>) -> DMatrix<C64>, f2: &dyn Fn(&DMatrix<C64>) -> DMatrix<C64>) -> GradedOperator {
    let v = GradedSpace::fundamental();
    let par = |i: usize| v.parity(i);
    let unit = |i: usize, j: usize| {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(i, j)] = ONE;
        m
    };
    let mut out = DMatrix::<C64>::zeros(16, 16);
    for i in 0..4 {
        for j in 0..4 {
            let a = GradedOperator::endo(&v, f1(&unit(i, j)));
            for k in 0..4 {
                for l in 0..4 {
                    let val = r.get(i * 4 + k, j * 4 + l);
                    if val == ZERO {
                        continue;
                    }
                    let cf = val * (par(k) + par(l)).koszul(par(j));
                    let b = GradedOperator::endo(&v, f2(&unit(k, l)));
                    out += kron_graded(&a, &b).into_matrix() * cf;
                }
            }
        }
    }
    GradedOperator::endo(&r.space_out().clone(), out)
}

fn sigma() -> DMatrix<C64> {
    let mut s = DMatrix::<C64>::zeros(4, 4);
    for o in [0, 2] {
        s[(o, o + 1)] = ONE;
        s[(o + 1, o)] = -ONE;
    }
    s
}

/// Supertranspose (M^{st})_{ij} = (−1)^{(|i|+|j|)|j|} M_{ji}.
pub fn supertranspose(m: &DMatrix<C64>) -> DMatrix<C64> {
    let v = GradedSpace::fundamental();
    DMatrix::from_fn(4, 4, |i, j| m[(j, i)] * (v.parity(i) + v.parity(j)).koszul(v.parity(j)))
}

/// The one-site action of conjugation on represented generators:
/// J ↦ −Σ J^{st} Σ⁻¹.
pub fn conjugation_site_map(m: &DMatrix<C64>) -> DMatrix<C64> {
    let s = sigma();
    let sinv = s.clone().try_inverse().expect("Σ invertible");
    -(&s * supertranspose(m) * sinv)
}

/// The one-site state relabelling φᵃ ↔ ψᵃ.
pub fn flip_site_map(m: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, j| m[((i + 2) % 4, (j + 2) % 4)])
}

/// Conjugation by blockdiag(ε, ε) on one site.
pub fn inversion_site_map(m: &DMatrix<C64>) -> DMatrix<C64> {
    let s = sigma();
    let sinv = s.clone().try_inverse().expect("Σ invertible");
    &s * m * sinv
}

fn identity_map(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.clone()
}

fn push_constraints(rep: &mut SymmetryReport, images: &[&Kinematics]) {
    let worst = images.iter().fold(0.0, |acc: f64, k| acc.max(k.constraint_residual()));
    rep.push("image constraints", worst);
}

fn push_coeff(rep: &mut SymmetryReport, label: &str, a: C64, b: C64) {
    rep.push(label, rel(a, b));
}

pub fn verify_conjugation(kin1: &Kinematics, kin2: &Kinematics) -> Result<SymmetryReport> {
    let mut rep = SymmetryReport::new("conjugation");
    let c = coefficients(kin1, kin2)?;
    let b1 = conjugate_site(kin1)?;
    let b2 = conjugate_site(kin2)?;
    push_constraints(&mut rep, &[&b1, &b2]);
    rep.push("z′ = z", rel(b1.z(), kin1.z()));
    rep.push("q′ = −q", rel(b1.q(), -kin1.q()));
    rep.push("T′ = T·((0,−1),(1,0))", mrel(&b1.t(), &(kin1.t() * mat2(ZERO, -ONE, ONE, ZERO))));

    let s1 = coefficients(&b1, kin2)?;
    push_coeff(&mut rep, "site 1: A = −½(A−B)", s1.a, -(c.a - c.b) * 0.5);
    push_coeff(&mut rep, "site 1: ½(A−B) = −A", (s1.a - s1.b) * 0.5, -c.a);
    push_coeff(&mut rep, "site 1: ½(A+B±1) invariant", s1.a + s1.b, c.a + c.b);
    push_coeff(&mut rep, "site 1: ½(D+E±1) invariant", s1.d + s1.e, c.d + c.e);
    push_coeff(&mut rep, "site 1: G = L", s1.g, c.l);
    push_coeff(&mut rep, "site 1: L = G", s1.l, c.g);
    push_coeff(&mut rep, "site 1: H = −F", s1.h, -c.f);
    push_coeff(&mut rep, "site 1: F = H", s1.f, c.h);
    push_coeff(&mut rep, "site 1: K = −C", s1.k, -c.c);
    push_coeff(&mut rep, "site 1: C = K", s1.c, c.k);

    let s2 = coefficients(kin1, &b2)?;
    push_coeff(&mut rep, "site 2: H = C", s2.h, c.c);
    push_coeff(&mut rep, "site 2: C = −H", s2.c, -c.h);
    push_coeff(&mut rep, "site 2: K = F", s2.k, c.f);
    push_coeff(&mut rep, "site 2: F = −K", s2.f, -c.k);

    let both = coefficients(&b1, &b2)?;
    push_coeff(&mut rep, "both: C = F", both.c, c.f);
    push_coeff(&mut rep, "both: F = C", both.f, c.c);
    push_coeff(&mut rep, "both: H = K", both.h, c.k);
    push_coeff(&mut rep, "both: K = H", both.k, c.h);

    let r = r_fund_table(kin1, kin2)?.op;
    let mapped1 = map_legs(&r, &conjugation_site_map, &identity_map);
    rep.push("operator: site 1", mapped1.dist(&r_fund_table(&b1, kin2)?.op));
    let mapped2 = map_legs(&r, &identity_map, &conjugation_site_map);
    rep.push("operator: site 2", mapped2.dist(&r_fund_table(kin1, &b2)?.op));

    let bb1 = conjugate_site(&b1)?;
    let bb2 = conjugate_site(&b2)?;
    rep.push("twice: x restored", (bb1.x - kin1.x).norm().max((bb2.x - kin2.x).norm()));
    rep.push("twice: γ orbit factor −1", rel(bb1.gamma, -kin1.gamma));
    rep.push("twice on both sites: coefficients restored", coefficients(&bb1, &bb2)?.max_diff(&c));
    Ok(rep)
}

pub fn verify_inversion(kin1: &Kinematics, kin2: &Kinematics) -> Result<SymmetryReport> {
    let mut rep = SymmetryReport::new("inversion");
    let c = coefficients(kin1, kin2)?;
    let i1 = invert_z(kin1)?;
    let i2 = invert_z(kin2)?;
    push_constraints(&mut rep, &[&i1, &i2]);
    let al = kin1.gp.alpha;
    rep.push("z′z = 1", (i1.z() * kin1.z() - ONE).norm());
    rep.push("q′ = zq", rel(i1.q(), kin1.z() * kin1.q()));
    let rm = mat2(ZERO, I * al, I / al, ZERO);
    rep.push("T′ = RT", mrel(&i1.t(), &(rm * kin1.t())));
    let ci = coefficients(&i1, &i2)?;
    for (n, (a, b)) in CoefficientSet::NAMES.iter().zip(ci.to_array().into_iter().zip(c.to_array())) {
        push_coeff(&mut rep, &format!("{n} ↦ −{n}"), a, -b);
    }
    let r = r_fund_table(kin1, kin2)?.op;
    let mapped = map_legs(&r, &inversion_site_map, &inversion_site_map).scale(-ONE);
    rep.push("operator: r′ = −(V⊗V) r (V⊗V)⁻¹", mapped.dist(&r_fund_table(&i1, &i2)?.op));
    let ii = invert_z(&i1)?;
    rep.push("twice: x restored", (ii.x - kin1.x).norm());
    rep.push("twice: z restored", (ii.z() - kin1.z()).norm());
    rep.push("twice: γ orbit factor −1", rel(ii.gamma, -kin1.gamma));
    Ok(rep)
}

pub fn verify_statistics_flip(kin1: &Kinematics, kin2: &Kinematics) -> Result<SymmetryReport> {
    let mut rep = SymmetryReport::new("statistics_flip");
    let c = coefficients(kin1, kin2)?;
    let f1 = statistics_flip(kin1)?;
    let f2 = statistics_flip(kin2)?;
    push_constraints(&mut rep, &[&f1, &f2]);
    let gp = &kin1.gp;
    let (h, hp, al, z) = (gp.h, gp.hprime, gp.alpha, kin1.z());
    rep.push("z′ = z", rel(f1.z(), z));
    rep.push("q′ = q", rel(f1.q(), kin1.q()));
    let rm = mat2(h, al / z, -z / al, -h) * (I / hp);
    rep.push("T′ = RT·((0,1),(1,0))", mrel(&f1.t(), &(rm * kin1.t() * mat2(ZERO, ONE, ONE, ZERO))));
    let cf = coefficients(&f1, &f2)?;
    push_coeff(&mut rep, "A′ = D", cf.a, c.d);
    push_coeff(&mut rep, "B′ = E", cf.b, c.e);
    push_coeff(&mut rep, "D′ = A", cf.d, c.a);
    push_coeff(&mut rep, "E′ = B", cf.e, c.b);
    push_coeff(&mut rep, "G′ = −L", cf.g, -c.l);
    push_coeff(&mut rep, "L′ = −G", cf.l, -c.g);
    push_coeff(&mut rep, "H′ = K", cf.h, c.k);
    push_coeff(&mut rep, "K′ = H", cf.k, c.h);
    push_coeff(&mut rep, "C′ = −F", cf.c, -c.f);
    push_coeff(&mut rep, "F′ = −C", cf.f, -c.c);
    let r = r_fund_table(kin1, kin2)?.op;
    let mapped = map_legs(&r, &flip_site_map, &flip_site_map).scale(-ONE);
    rep.push("operator: r′ = −(flipped r)", mapped.dist(&r_fund_table(&f1, &f2)?.op));
    let ff = statistics_flip(&f1)?;
    rep.push("twice: γ restored", rel(ff.gamma, kin1.gamma));
    Ok(rep)
}

pub fn verify_duality(kin1: &Kinematics, kin2: &Kinematics) -> Result<SymmetryReport> {
    let mut rep = SymmetryReport::new("duality");
    let c = coefficients(kin1, kin2)?;
    let (mut a, mut b) = (*kin1, *kin2);
    for step in 1..=4 {
        let (na, nb) = (duality(&a)?, duality(&b)?);
        push_constraints(&mut rep, &[&na, &nb]);
        let gp = &a.gp;
        let k = gp.k;
        rep.push(&format!("step {step}: z′ = −z"), rel(na.z(), -a.z()));
        rep.push(&format!("step {step}: q′"), rel(na.q(), I * (k - k.inv()) / (k + k.inv()) * a.q()));
        let rm = mat2(ONE, ZERO, a.z() / (gp.alpha * gp.h), ONE);
        rep.push(&format!("step {step}: T′ = RT"), mrel(&na.t(), &(rm * a.t())));
        rep.push(&format!("step {step}: coefficients invariant"), coefficients(&na, &nb)?.max_diff(&c));
        a = na;
        b = nb;
    }
    rep.push("four steps: k restored", (a.gp.k - kin1.gp.k).norm());
    rep.push("four steps: α restored", rel(a.gp.alpha, kin1.gp.alpha));
    Ok(rep)
}

/// The composite map available at k = √i.
pub fn verify_selfdual_composite(kin1: &Kinematics, kin2: &Kinematics) -> Result<SymmetryReport> {
    let mut rep = SymmetryReport::new("selfdual_composite");
    let c = coefficients(kin1, kin2)?;
    let m1 = selfdual_composite(kin1)?;
    let m2 = selfdual_composite(kin2)?;
    rep.push("z′ = −z", rel(m1.z(), -kin1.z()));
    rep.push("coefficients invariant", coefficients(&m1, &m2)?.max_diff(&c));
    Ok(rep)
}

pub fn verify(kind: SymmetryKind, kin1: &Kinematics, kin2: &Kinematics) -> Result<SymmetryReport> {
    let (mut rep, image) = match kind {
        SymmetryKind::ConjugationSite1 | SymmetryKind::ConjugationSite2 => (verify_conjugation(kin1, kin2)?, conjugate_site(kin1)?),
        SymmetryKind::Inversion => (verify_inversion(kin1, kin2)?, invert_z(kin1)?),
        SymmetryKind::StatisticsFlip => (verify_statistics_flip(kin1, kin2)?, statistics_flip(kin1)?),
        SymmetryKind::Duality => (verify_duality(kin1, kin2)?, duality(kin1)?),
    };
    rep.record_crossratio(&kin1.gp, &image.gp);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fundrep::{represent_kind, Kind};
    use crate::numeric::c;
    use crate::params::Branch;

    fn pair() -> (Kinematics, Kinematics) {
        let g = GlobalParams::new(c(0.3, 0.1), c(1.3, -0.2), Branch::Plus).unwrap();
        (
            Kinematics::new(&g, c(2.0, 0.5), c(1.1, 0.3)).unwrap(),
            Kinematics::new(&g, c(-1.7, 1.2), c(0.7, -0.4)).unwrap(),
        )
    }

    fn assert_report(r: &SymmetryReport) {
        assert!(r.max() < 1e-10, "{:?}", r.worst());
    }

    #[test]
    fn conjugation() {
        let (a, b) = pair();
        assert_report(&verify_conjugation(&a, &b).unwrap());
    }

    #[test]
    fn conjugation_acts_on_generators() {
        let (a, _) = pair();
        let ab = conjugate_site(&a).unwrap();
        for kind in crate::fundrep::Kind::loop_basis() {
            let lhs = conjugation_site_map(&represent_kind(kind, &a).unwrap());
            let rhs = represent_kind(kind, &ab).unwrap();
            assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12), "{kind}");
        }
        // the other supertranspose convention fails on the odd generators
        let other = |m: &DMatrix<C64>| {
            let v = GradedSpace::fundamental();
            let st = DMatrix::from_fn(4, 4, |i, j| m[(j, i)] * (v.parity(i) + v.parity(j)).koszul(v.parity(i)));
            let s = sigma();
            -(&s * st * s.clone().try_inverse().unwrap())
        };
        let q = represent_kind(Kind::Q(0, 1), &a).unwrap();
        assert!((other(&q) - represent_kind(Kind::Q(0, 1), &ab).unwrap()).iter().any(|z| z.norm() > 1e-3));
    }

    #[test]
    fn inversion() {
        let (a, b) = pair();
        assert_report(&verify_inversion(&a, &b).unwrap());
    }

    #[test]
    fn statistics() {
        let (a, b) = pair();
        let rep = verify_statistics_flip(&a, &b).unwrap();
        assert_report(&rep);
        // the un-signed relation C′ = F does not hold
        let cf = coefficients(&statistics_flip(&a).unwrap(), &statistics_flip(&b).unwrap()).unwrap();
        let co = coefficients(&a, &b).unwrap();
        assert!((cf.c - co.f).norm() > 1e-3);
    }

    #[test]
    fn naive_flip_without_grading_fails() {
        let (a, b) = pair();
        let r = r_fund_table(&a, &b).unwrap().op;
        let target = r_fund_table(&statistics_flip(&a).unwrap(), &statistics_flip(&b).unwrap()).unwrap().op;
        let m = r.matrix();
        let naive = DMatrix::from_fn(16, 16, |i, j| {
            let s = |t: usize| ((t / 4 + 2) % 4) * 4 + (t % 4 + 2) % 4;
            m[(s(i), s(j))]
        });
        let diff = (&naive + target.matrix()).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        assert!(diff > 1e-3);
    }

    #[test]
    fn duality_orbit() {
        let g = GlobalParams::from_k(c(0.9, 0.5), c(1.3, -0.2)).unwrap();
        let a = Kinematics::new(&g, c(2.0, 0.5), c(1.1, 0.3)).unwrap();
        let b = Kinematics::new(&g, c(-1.7, 1.2), c(0.7, -0.4)).unwrap();
        let rep = verify_duality(&a, &b).unwrap();
        assert_report(&rep);
        let k4 = rep.checks.iter().find(|(n, _)| n == "four steps: k restored").unwrap().1;
        assert_eq!(k4, 0.0);
    }

    #[test]
    fn crossratio_is_recorded() {
        let (a, b) = pair();
        for kind in SymmetryKind::ALL {
            let rep = verify(kind, &a, &b).unwrap();
            assert_eq!(rep.recorded.len(), 2);
            // ih + h′ = i/k, so s = k⁻⁴ and k ↦ ik leaves it alone
            assert!((rep.recorded[0].1 - a.gp.k.powi(-4)).norm() < 1e-13);
            assert!((rep.recorded[1].1 - rep.recorded[0].1).norm() < 1e-12, "{}", rep.name);
        }
    }

    #[test]
    fn selfdual_point() {
        let k = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let g = GlobalParams::from_k(k, c(1.3, -0.2)).unwrap();
        assert!((g.h - g.hprime).norm() < 1e-15);
        let a = Kinematics::new(&g, c(2.0, 0.5), c(1.1, 0.3)).unwrap();
        let b = Kinematics::new(&g, c(-1.7, 1.2), c(0.7, -0.4)).unwrap();
        assert_report(&verify_selfdual_composite(&a, &b).unwrap());
        let (p, _) = pair();
        assert!(selfdual_composite(&p).is_err());
    }
}
