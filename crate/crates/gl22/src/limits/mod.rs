//! Degenerate limits of the fundamental r-matrix: parameter paths,
//! rescalings, closed-form limit coefficients and convergence checks.

mod algebra;
mod graph;

pub use algebra::{limit_algebra, scaled_algebra, untwisted, Derivation, LimitAlgebra};
pub use graph::{degeneration_graph, DegenerationGraph, GraphNode, SpecialPoint, EXPECTED_ARROWS};

use serde::{Deserialize, Serialize};

use crate::numeric::{guard, loglog_slope, C64, I, ONE};
use crate::params::{GlobalParams, Kinematics, RepData};
use crate::rmatrix::{cybe_residual_with, coefficient_form, table_matrix, CoefficientSet, Structure};
use crate::superlinalg::GradedOperator;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitFamily {
    FullRational,
    ConventionalRational,
    ConventionalTrigonometric,
    TwistedRational,
    TwistedTrigonometric,
    SpecialTrigInf,
    SpecialTrigZero,
    SpecialRational,
}

impl LimitFamily {
    pub const ALL: [LimitFamily; 8] = [
        LimitFamily::FullRational,
        LimitFamily::ConventionalRational,
        LimitFamily::ConventionalTrigonometric,
        LimitFamily::TwistedRational,
        LimitFamily::TwistedTrigonometric,
        LimitFamily::SpecialTrigInf,
        LimitFamily::SpecialTrigZero,
        LimitFamily::SpecialRational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitFamily::FullRational => "full_rational",
            LimitFamily::ConventionalRational => "conventional_rational",
            LimitFamily::ConventionalTrigonometric => "conventional_trigonometric",
            LimitFamily::TwistedRational => "twisted_rational",
            LimitFamily::TwistedTrigonometric => "twisted_trigonometric",
            LimitFamily::SpecialTrigInf => "special_trig_inf",
            LimitFamily::SpecialTrigZero => "special_trig_zero",
            LimitFamily::SpecialRational => "special_rational",
        }
    }

    pub fn from_name(s: &str) -> Option<LimitFamily> {
        LimitFamily::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn structure(self) -> Structure {
        match self {
            LimitFamily::FullRational
            | LimitFamily::ConventionalRational
            | LimitFamily::TwistedRational
            | LimitFamily::SpecialRational => Structure::Rational,
            _ => Structure::Trigonometric,
        }
    }

    /// What the per-site limit variable means.
    pub fn variable(self) -> &'static str {
        match self {
            LimitFamily::FullRational | LimitFamily::SpecialTrigInf => "x",
            LimitFamily::ConventionalRational | LimitFamily::SpecialRational => "u",
            LimitFamily::ConventionalTrigonometric => "z̃",
            LimitFamily::TwistedRational | LimitFamily::TwistedTrigonometric => "y",
            LimitFamily::SpecialTrigZero => "z",
        }
    }
}

/// Data held fixed along a path. `alpha` is α, or the finite rescaled α̃
/// for the families where α itself degenerates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitSetup {
    pub h: C64,
    pub alpha: C64,
    pub x0: C64,
}

impl Default for LimitSetup {
    fn default() -> Self {
        LimitSetup { h: C64::new(0.3, 0.1), alpha: C64::new(1.3, -0.2), x0: C64::new(2.0, 1.0) }
    }
}

/// Limit variable and normalisation of one site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitSite {
    pub v: C64,
    pub gamma: C64,
}

impl LimitSite {
    pub fn new(v: C64, gamma: C64) -> Self {
        LimitSite { v, gamma }
    }
}

fn principal(h: C64, alpha: C64) -> Result<GlobalParams> {
    GlobalParams::with_hprime(h, (ONE - h * h).sqrt(), alpha)
}

fn fixed(setup: &LimitSetup) -> Result<GlobalParams> {
    principal(setup.h, setup.alpha)
}

/// The conventional rational limit zooms in on x₀, which must avoid the four
/// points where the rescaling prefactor degenerates.
fn zoom_base(setup: &LimitSetup) -> Result<GlobalParams> {
    let gp = fixed(setup)?;
    let x0 = setup.x0;
    guard(x0 - ONE, "x₀ = +1")?;
    guard(x0 + ONE, "x₀ = −1")?;
    guard(gp.hprime * x0 - I * gp.h, "x₀ = ih/h′")?;
    guard(gp.h * x0 + I * gp.hprime, "x₀ = −ih′/h")?;
    Ok(gp)
}

/// The full kinematics at ε for a site.
pub fn path(family: LimitFamily, setup: &LimitSetup, eps: f64, site: &LimitSite) -> Result<Kinematics> {
    let e = C64::new(eps, 0.0);
    let LimitSite { v, gamma } = *site;
    let (gp, x) = match family {
        LimitFamily::FullRational => (principal(e, setup.alpha)?, v),
        LimitFamily::ConventionalRational => (zoom_base(setup)?, setup.x0 * (ONE + e * v)),
        LimitFamily::ConventionalTrigonometric => {
            let gp = principal(setup.h, setup.alpha / e)?;
            let x = I * gp.h / gp.hprime * (ONE + e / v);
            (gp, x)
        }
        LimitFamily::TwistedRational => {
            let g0 = fixed(setup)?;
            let w = g0.hprime - I * g0.h;
            let gp = GlobalParams::with_hprime(g0.h, g0.hprime, I * e / w * setup.alpha)?;
            (gp, ONE + e * w / g0.hprime * v)
        }
        LimitFamily::TwistedTrigonometric => (principal(e.inv(), setup.alpha)?, ONE - e / v),
        LimitFamily::SpecialTrigInf => (principal(e.inv(), e * setup.alpha * 0.5)?, v),
        LimitFamily::SpecialTrigZero => (principal(e, setup.alpha)?, -I * (v - ONE) / (e * v)),
        LimitFamily::SpecialRational => (principal(e * e, setup.alpha)?, v / e),
    };
    Kinematics::new(&gp, x, gamma)
}

/// Prefactor applied to r along the path.
pub fn rescale(family: LimitFamily, setup: &LimitSetup, eps: f64) -> Result<C64> {
    let e = C64::new(eps, 0.0);
    Ok(match family {
        LimitFamily::FullRational | LimitFamily::SpecialRational => I * e,
        LimitFamily::ConventionalRational => {
            let gp = zoom_base(setup)?;
            let (h, hp, x0) = (gp.h, gp.hprime, setup.x0);
            -h * hp * e * (x0 * x0 - ONE) / ((h * x0 + I * hp) * (hp * x0 - I * h))
        }
        LimitFamily::TwistedRational => {
            let gp = fixed(setup)?;
            I * gp.h * e * e / gp.hprime
        }
        _ => ONE,
    })
}

/// Site data shared by both twisted limits: a = γ, b = α/(2yγ),
/// c = −γy/α, d = 1/(2γ), q = 1/(2y), z = y².
pub fn twisted_site_data(y: C64, gamma: C64, alpha: C64) -> RepData {
    RepData { z: y * y, q: (y * 2.0).inv(), a: gamma, b: alpha / (y * gamma * 2.0), c: -gamma * y / alpha, d: (gamma * 2.0).inv() }
}

/// Site data of the rational limit at h = 0 (u = x + 1/x).
pub fn rational_site_data(x: C64, gamma: C64, alpha: C64) -> RepData {
    let s = x * x - ONE;
    RepData { z: ONE, q: -I * x / s, a: gamma, b: -I * alpha * x / (gamma * s), c: I * gamma / (alpha * x), d: x * x / (gamma * s) }
}

/// Site data of the h → ∞ special limit; z is the finite z̃ = −4x/(x−1)².
pub fn special_inf_site_data(x: C64, gamma: C64, alpha: C64) -> RepData {
    RepData {
        z: -x * 4.0 / ((x - ONE) * (x - ONE)),
        q: -(x - ONE) / (x + ONE),
        a: gamma,
        b: -alpha / (gamma * 2.0) * (x - ONE) / (x + ONE),
        c: gamma * 2.0 / (alpha * (x - ONE)),
        d: x / (gamma * (x + ONE)),
    }
}

fn collision(d: C64, what: &str) -> Result<C64> {
    guard(d, what).map_err(|_| Error::Collision(what.to_string()))
}

/// Closed-form coefficients of the limiting r-matrix.
pub fn limit_coefficients(family: LimitFamily, setup: &LimitSetup, s1: &LimitSite, s2: &LimitSite) -> Result<CoefficientSet> {
    let (v1, v2, g1, g2) = (s1.v, s2.v, s1.gamma, s2.gamma);
    let zero = C64::new(0.0, 0.0);
    let al = setup.alpha;
    Ok(match family {
        LimitFamily::FullRational => {
            let den = collision((v1 + v1.inv()) - (v2 + v2.inv()), "u₁ = u₂")?;
            let d1 = rational_site_data(v1, g1, al);
            let d2 = rational_site_data(v2, g2, al);
            coefficient_form(&d1, &d2, ONE, ONE, den, Structure::Rational)
        }
        LimitFamily::ConventionalRational => {
            let s = collision(v1 - v2, "u₁ = u₂")?.inv();
            CoefficientSet { a: s, b: s, c: zero, d: s, e: s, f: zero, g: zero, h: g1 / g2 * s, k: g2 / g1 * s, l: zero }
        }
        LimitFamily::ConventionalTrigonometric => {
            let den = collision(v1 - v2, "z̃₁ = z̃₂")?;
            let a = (v1 + v2) * 0.5 / den;
            let q = C64::new(0.25, 0.0);
            CoefficientSet { a, b: a, c: zero, d: a, e: a, f: zero, g: q, h: g1 / g2 * v1 / den, k: g2 / g1 * v2 / den, l: -q }
        }
        LimitFamily::TwistedRational => {
            collision(v1 - v2, "y₁ = y₂")?;
            collision(v1 + v2, "y₁ = −y₂")?;
            let (y1, y2) = (v1, v2);
            let a = (y1 + y2) / (y1 * y2 * (y1 - y2) * 4.0);
            let b = C64::new(2.0, 0.0) / (y1 * y1 - y2 * y2) - a;
            let g = (y1 * y2 * 4.0).inv();
            CoefficientSet {
                a,
                b,
                c: g1 * g2 / (al * (y1 + y2)),
                d: a,
                e: b,
                f: -al / (g1 * g2 * y1 * y2 * (y1 + y2) * 4.0),
                g,
                h: g1 / (g2 * y2 * (y1 - y2) * 2.0),
                k: g2 / (g1 * y1 * (y1 - y2) * 2.0),
                l: -g,
            }
        }
        LimitFamily::TwistedTrigonometric => {
            collision(v1 - v2, "y₁ = y₂")?;
            collision(v1 + v2, "y₁ = −y₂")?;
            let (y1, y2) = (v1, v2);
            let a = (y1 + y2) / (y1 - y2) * 0.25;
            let b = (y1 * y1 + y2 * y2) / (y1 * y1 - y2 * y2) - a;
            CoefficientSet {
                a,
                b,
                c: -g1 * g2 * y1 * y2 / (al * (y1 + y2)),
                d: a,
                e: b,
                f: al / (g1 * g2 * (y1 + y2) * 4.0),
                g: zero,
                h: y1 * g1 / (g2 * (y1 - y2) * 2.0),
                k: y2 * g2 / (g1 * (y1 - y2) * 2.0),
                l: zero,
            }
        }
        LimitFamily::SpecialTrigInf => {
            let d1 = special_inf_site_data(v1, g1, al);
            let d2 = special_inf_site_data(v2, g2, al);
            let den = collision(d1.z - d2.z, "z̃₁ = z̃₂")?;
            coefficient_form(&d1, &d2, d1.z, d2.z, den, Structure::Trigonometric)
        }
        LimitFamily::SpecialTrigZero => {
            let den = collision(v1 - v2, "z₁ = z₂")?;
            let site = |z: C64, g: C64| RepData { z, q: (z - ONE).inv(), a: g, b: zero, c: zero, d: g.inv() };
            coefficient_form(&site(v1, g1), &site(v2, g2), v1, v2, den, Structure::Trigonometric)
        }
        LimitFamily::SpecialRational => {
            let s = collision(v1 - v2, "u₁ = u₂")?.inv();
            let dm = (v1 - v2) / (v1 * v2 * 4.0);
            let g = (v1 + v2) / (v1 * v2 * 4.0);
            CoefficientSet { a: s + dm, b: s - dm, c: zero, d: s + dm, e: s - dm, f: zero, g, h: g1 / g2 * s, k: g2 / g1 * s, l: -g }
        }
    })
}

pub fn limit_r(family: LimitFamily, setup: &LimitSetup, s1: &LimitSite, s2: &LimitSite) -> Result<GradedOperator> {
    Ok(table_matrix(&limit_coefficients(family, setup, s1, s2)?, family.structure()))
}

/// rescale(ε)·r at the path point ε.
pub fn rescaled_r(family: LimitFamily, setup: &LimitSetup, eps: f64, s1: &LimitSite, s2: &LimitSite) -> Result<GradedOperator> {
    let k1 = path(family, setup, eps, s1)?;
    let k2 = path(family, setup, eps, s2)?;
    // Near a limit the spectral parameters approach each other like a power
    // of ε, so only a separation at the level of rounding counts as a
    // collision here.
    let (z1, z2) = (k1.z(), k2.z());
    if (z1 - z2).norm() <= 1e-13 * z1.norm().max(z2.norm()) {
        return Err(Error::Collision(format!("z₁ = z₂ = {z1} at ε = {eps}")));
    }
    let co = coefficient_form(&k1.rep, &k2.rep, z1, z2, z1 - z2, Structure::Trigonometric);
    Ok(table_matrix(&co, Structure::Trigonometric).scale(rescale(family, setup, eps)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub family: LimitFamily,
    pub eps: Vec<f64>,
    pub errors: Vec<f64>,
    /// fitted p in error ∝ ε^p
    pub order: f64,
}

impl ConvergenceReport {
    pub fn passes(&self, min_order: f64) -> bool {
        self.order >= min_order && self.errors.iter().all(|e| e.is_finite())
    }
}

pub fn convergence_check(family: LimitFamily, setup: &LimitSetup, eps_list: &[f64], s1: &LimitSite, s2: &LimitSite) -> Result<ConvergenceReport> {
    if eps_list.len() < 2 || eps_list.windows(2).any(|w| !(w[1] < w[0])) || eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Invalid("ε list must be positive and strictly decreasing".into()));
    }
    let lim = limit_r(family, setup, s1, s2)?;
    let errors = eps_list
        .iter()
        .map(|&e| Ok(rescaled_r(family, setup, e, s1, s2)?.dist(&lim)))
        .collect::<Result<Vec<f64>>>()?;
    let order = loglog_slope(eps_list, &errors);
    Ok(ConvergenceReport { family, eps: eps_list.to_vec(), errors, order })
}

/// CYBE residual of the limiting r-matrix on three sites.
pub fn limit_cybe(family: LimitFamily, setup: &LimitSetup, sites: &[LimitSite; 3]) -> Result<f64> {
    cybe_residual_with(&|i, j| limit_r(family, setup, &sites[i], &sites[j]))
}

/// Generic limit variables for each family, away from its special points.
pub fn default_sites(family: LimitFamily) -> [LimitSite; 3] {
    let c = C64::new;
    let gam = [c(1.1, 0.3), c(0.7, -0.4), c(0.9, 0.2)];
    let v = match family {
        LimitFamily::FullRational | LimitFamily::SpecialTrigInf => [c(2.0, 0.5), c(-1.7, 1.2), c(3.1, -0.5)],
        LimitFamily::ConventionalRational => [c(0.7, 0.0), c(-1.3, 0.4), c(0.0, 2.2)],
        LimitFamily::ConventionalTrigonometric | LimitFamily::SpecialTrigZero => [c(1.5, 0.2), c(-0.8, 0.9), c(0.4, -1.1)],
        LimitFamily::TwistedRational | LimitFamily::TwistedTrigonometric => [c(0.8, 0.3), c(-1.2, 0.5), c(0.5, -0.9)],
        LimitFamily::SpecialRational => [c(0.7, 0.2), c(-1.3, 0.4), c(0.0, 2.2)],
    };
    [LimitSite::new(v[0], gam[0]), LimitSite::new(v[1], gam[1]), LimitSite::new(v[2], gam[2])]
}

/// Solve u = x + 1/x for the root with |x| ≥ 1.
pub fn x_from_u(u: C64) -> C64 {
    let r = (u * u - 4.0).sqrt();
    let a = (u + r) * 0.5;
    let b = (u - r) * 0.5;
    if a.norm() >= b.norm() {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;

    const EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

    #[test]
    fn every_family_converges() {
        let setup = LimitSetup::default();
        for fam in LimitFamily::ALL {
            let [s1, s2, _] = default_sites(fam);
            let rep = convergence_check(fam, &setup, &EPS, &s1, &s2).unwrap_or_else(|e| panic!("{} {e}", fam.name()));
            assert!(rep.passes(0.9), "{} {:?}", fam.name(), rep);
        }
    }

    #[test]
    fn every_limit_satisfies_cybe() {
        let setup = LimitSetup::default();
        for fam in LimitFamily::ALL {
            let v = limit_cybe(fam, &setup, &default_sites(fam)).unwrap();
            assert!(v < 1e-10, "{} {v}", fam.name());
        }
    }

    #[test]
    fn limit_identities() {
        let setup = LimitSetup::default();
        for fam in LimitFamily::ALL {
            let [s1, s2, _] = default_sites(fam);
            let co = limit_coefficients(fam, &setup, &s1, &s2).unwrap();
            assert!(co.linear_residual() < 1e-13, "{}", fam.name());
            assert!(co.quadratic_residual(fam.structure().constant()) < 1e-13, "{}", fam.name());
            let r12 = limit_r(fam, &setup, &s1, &s2).unwrap();
            let r21 = limit_r(fam, &setup, &s2, &s1).unwrap();
            assert!(crate::rmatrix::antisymmetry_residual(&r12, &r21) < 1e-12, "{}", fam.name());
        }
    }

    #[test]
    fn twisted_families_share_site_data() {
        let setup = LimitSetup::default();
        let [s1, s2, _] = default_sites(LimitFamily::TwistedRational);
        let d1 = twisted_site_data(s1.v, s1.gamma, setup.alpha);
        let d2 = twisted_site_data(s2.v, s2.gamma, setup.alpha);
        let den = d1.z - d2.z;
        let rat = coefficient_form(&d1, &d2, ONE, ONE, den, Structure::Rational);
        let trig = coefficient_form(&d1, &d2, d1.z, d2.z, den, Structure::Trigonometric);
        let lr = limit_coefficients(LimitFamily::TwistedRational, &setup, &s1, &s2).unwrap();
        let lt = limit_coefficients(LimitFamily::TwistedTrigonometric, &setup, &s1, &s2).unwrap();
        assert!(lr.max_diff(&rat) < 1e-12);
        assert!(lt.max_diff(&trig) < 1e-12);
    }

    #[test]
    fn near_flat_momentum() {
        // y = 1/(2p) puts q = p
        let p = c(0.4, 0.1);
        let d = twisted_site_data((p * 2.0).inv(), ONE, ONE);
        assert!((d.q - p).norm() < 1e-15);
    }

    #[test]
    fn collisions_and_bad_eps() {
        let setup = LimitSetup::default();
        let s = LimitSite::new(c(0.8, 0.3), ONE);
        assert!(matches!(limit_coefficients(LimitFamily::TwistedRational, &setup, &s, &s), Err(Error::Collision(_))));
        let m = LimitSite::new(-s.v, ONE);
        assert!(limit_coefficients(LimitFamily::TwistedTrigonometric, &setup, &s, &m).is_err());
        assert!(convergence_check(LimitFamily::FullRational, &setup, &[1e-3, 1e-2], &s, &m).is_err());
    }

    #[test]
    fn conventional_rational_excludes_four_points() {
        let setup = LimitSetup::default();
        let gp = fixed(&setup).unwrap();
        let s = default_sites(LimitFamily::ConventionalRational);
        for x0 in [ONE, -ONE, I * gp.h / gp.hprime, -I * gp.hprime / gp.h] {
            let bad = LimitSetup { x0, ..setup };
            assert!(matches!(rescale(LimitFamily::ConventionalRational, &bad, 1e-3), Err(Error::Pole { .. })));
            assert!(convergence_check(LimitFamily::ConventionalRational, &bad, &[1e-2, 1e-3], &s[0], &s[1]).is_err());
        }
    }

    #[test]
    fn names_round_trip() {
        for f in LimitFamily::ALL {
            assert_eq!(LimitFamily::from_name(f.name()), Some(f));
        }
        assert!((x_from_u(c(2.5, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
    }
}
