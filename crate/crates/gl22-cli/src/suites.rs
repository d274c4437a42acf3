//! The verification suites behind `gl22 verify`.

use gl22::fundrep::{derivation_check, derivative_fd_residual, homomorphism_residual, serre_chevalley_check, w_linearity_residual, LoopAlgebra};
use gl22::limits::{self, LimitFamily, LimitSetup};
use gl22::numeric::{loglog_slope, Tolerance, C64};
use gl22::params::{quantum_charges, solve_xplus, xpm_classical, xpm_residual, Branch, GlobalParams, Kinematics};
use gl22::rmatrix::{antisymmetry_residual, coefficient_jacobian, coefficients, cybe_residual, r_fund_table, r_fund_universal, shift_identity};
use gl22::sampling::Sampler;
use gl22::symmetries::{self, SymmetryKind};
use rayon::prelude::*;

use crate::args::SuiteName;
use crate::report::{Check, Comparison, SuiteResult};

/// Everything a suite needs to choose its parameter points.
#[derive(Debug, Clone)]
pub struct SuiteContext {
    pub h: Option<C64>,
    pub alpha: Option<C64>,
    /// explicit (x, γ) sites; used instead of random ones when there are enough
    pub sites: Vec<(C64, C64)>,
    pub seed: u64,
    pub samples: usize,
    pub tol: Tolerance,
    pub levels: i32,
    pub family: Option<LimitFamily>,
}

/// Finite-difference agreement is limited by the step, not by rounding.
const FD_THRESHOLD: f64 = 1e-6;
const Q2C_THRESHOLD: f64 = 1e-8;
const ORDER_MIN: f64 = 0.9;
const SHIFT_LAMBDA: C64 = C64::new(0.37, 0.21);

type Point = gl22::Result<(GlobalParams, Vec<Kinematics>)>;

impl SuiteContext {
    fn sampler(&self, suite: SuiteName) -> Sampler {
        Sampler::new(self.seed ^ ((suite as u64 + 1) << 40))
    }

    fn global(&self, s: &mut Sampler) -> gl22::Result<GlobalParams> {
        let mut gp = s.global()?;
        if let Some(h) = self.h {
            gp = GlobalParams::new(h, gp.alpha, Branch::Plus)?;
        }
        if let Some(al) = self.alpha {
            gp = GlobalParams::with_hprime(gp.h, gp.hprime, al)?;
        }
        Ok(gp)
    }

    /// Parameter points with `n` sites each, generated sequentially so that
    /// the result depends only on the seed.
    fn points(&self, suite: SuiteName, n: usize) -> Vec<Point> {
        let mut s = self.sampler(suite);
        if self.sites.len() >= n {
            let pt = self.global(&mut s).and_then(|gp| {
                let ks = self.sites[..n].iter().map(|&(x, g)| Kinematics::new(&gp, x, g)).collect::<gl22::Result<Vec<_>>>()?;
                Ok((gp, ks))
            });
            return vec![pt];
        }
        (0..self.samples)
            .map(|_| {
                let gp = self.global(&mut s)?;
                let ks = s.sites(&gp, n)?;
                Ok((gp, ks))
            })
            .collect()
    }

    fn bound(&self) -> f64 {
        self.tol.bound(1.0)
    }
}

fn per_point(points: Vec<Point>, f: impl Fn(usize, &GlobalParams, &[Kinematics]) -> Vec<Check> + Sync) -> Vec<Check> {
    points
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| match p {
            Ok((gp, ks)) => f(i, &gp, &ks),
            Err(e) => vec![Check::failed(format!("parameter point #{i}"), 0.0, e)],
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn run_suite(name: SuiteName, ctx: &SuiteContext) -> SuiteResult {
    match name {
        SuiteName::Cybe => cybe(ctx),
        SuiteName::Jacobi => jacobi(ctx),
        SuiteName::Identities => identities(ctx),
        SuiteName::Symmetries => symmetries_suite(ctx),
        SuiteName::Limits => limits_suite(ctx),
        SuiteName::Affine => affine(ctx),
        SuiteName::Quantum => quantum(ctx),
    }
}

pub fn suite_label(name: SuiteName) -> &'static str {
    match name {
        SuiteName::Cybe => "cybe",
        SuiteName::Jacobi => "jacobi",
        SuiteName::Identities => "identities",
        SuiteName::Symmetries => "symmetries",
        SuiteName::Limits => "limits",
        SuiteName::Affine => "affine",
        SuiteName::Quantum => "quantum",
    }
}

fn cybe(ctx: &SuiteContext) -> SuiteResult {
    let tol = ctx.bound();
    let mut out = SuiteResult::new("cybe");
    out.checks = per_point(ctx.points(SuiteName::Cybe, 3), |i, _, k| {
        vec![
            Check::eval(format!("yang-baxter #{i}"), tol, cybe_residual(&k[0], &k[1], &k[2])),
            Check::eval(
                format!("table = universal form #{i}"),
                tol,
                r_fund_table(&k[0], &k[1]).and_then(|t| Ok(t.op.dist(&r_fund_universal(&k[0], &k[1])?))),
            ),
            Check::eval(
                format!("antisymmetry #{i}"),
                tol,
                r_fund_table(&k[0], &k[1]).and_then(|a| Ok(antisymmetry_residual(&a.op, &r_fund_table(&k[1], &k[0])?.op))),
            ),
        ]
    });
    out
}

fn jacobi(ctx: &SuiteContext) -> SuiteResult {
    let tol = ctx.bound();
    let mut out = SuiteResult::new("jacobi");
    let points = ctx.points(SuiteName::Jacobi, 1);
    if let Some(Ok((gp, _))) = points.first() {
        let name = format!("jacobi, levels within ±{}", ctx.levels);
        out.checks.push(match LoopAlgebra::new(gp.h, gp.alpha) {
            Ok(la) => Check::at_most(name, la.jacobi_residual(ctx.levels), tol),
            Err(e) => Check::failed(name, tol, e),
        });
    }
    out.checks.extend(per_point(points, |i, _, k| {
        vec![
            Check::eval(format!("representation homomorphism #{i}"), tol, homomorphism_residual(&k[0], 0)),
            Check::eval(format!("serre-chevalley #{i}"), tol, serre_chevalley_check(&k[0]).map(|r| r.max())),
        ]
    }));
    out
}

fn identities(ctx: &SuiteContext) -> SuiteResult {
    let tol = ctx.bound();
    let mut out = SuiteResult::new("identities");
    out.checks = per_point(ctx.points(SuiteName::Identities, 2), |i, _, k| {
        let co = match coefficients(&k[0], &k[1]) {
            Ok(c) => c,
            Err(e) => return vec![Check::failed(format!("coefficients #{i}"), tol, e)],
        };
        let mut v = vec![
            Check::at_most(format!("linear #{i}"), co.linear_residual(), tol),
            Check::at_most(format!("quadratic #{i}"), co.quadratic_residual(gl22::numeric::ONE), tol),
        ];
        v.push(match coefficient_jacobian(&k[0], &k[1], false) {
            Ok((_, sv)) => Check::new(format!("independent parameters #{i}"), sv.iter().filter(|&&s| s > 1e-8).count() as f64, 6.0, Comparison::Equal),
            Err(e) => Check::failed(format!("independent parameters #{i}"), 6.0, e),
        });
        match r_fund_table(&k[0], &k[1]) {
            Ok(rm) => {
                let (_, rep) = shift_identity(&rm, SHIFT_LAMBDA);
                v.push(Check::at_most(format!("shift is λ·Id #{i}"), rep.identity_defect, tol));
                v.push(Check::at_most(format!("shift keeps quadratic #{i}"), rep.quadratic_residual, tol));
            }
            Err(e) => v.push(Check::failed(format!("shift #{i}"), tol, e)),
        }
        v
    });
    out
}

fn symmetries_suite(ctx: &SuiteContext) -> SuiteResult {
    let tol = ctx.bound();
    let mut out = SuiteResult::new("symmetries");
    let points = ctx.points(SuiteName::Symmetries, 2);
    out.checks = per_point(points, |i, _, k| {
        let mut v = vec![];
        for kind in SymmetryKind::ALL {
            match symmetries::verify(kind, &k[0], &k[1]) {
                Ok(rep) => v.extend(rep.checks.iter().map(|(n, r)| Check::at_most(format!("{}: {n} #{i}", kind.name()), *r, tol))),
                Err(e) => v.push(Check::failed(format!("{} #{i}", kind.name()), tol, e)),
            }
        }
        v
    });
    // the composite exists only at k² = i
    let mut s = ctx.sampler(SuiteName::Symmetries);
    let k = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let name = "selfdual_composite";
    let alpha = ctx.alpha.unwrap_or_else(|| s.unit_scale());
    match GlobalParams::from_k(k, alpha).and_then(|gp| s.sites(&gp, 2)) {
        Ok(ks) => match symmetries::verify_selfdual_composite(&ks[0], &ks[1]) {
            Ok(rep) => out.checks.extend(rep.checks.iter().map(|(n, r)| Check::at_most(format!("{name}: {n}"), *r, tol))),
            Err(e) => out.checks.push(Check::failed(name, tol, e)),
        },
        Err(e) => out.checks.push(Check::failed(name, tol, e)),
    }
    out
}

fn limits_suite(ctx: &SuiteContext) -> SuiteResult {
    let tol = ctx.bound();
    let mut out = SuiteResult::new("limits");
    let mut setup = LimitSetup::default();
    if let Some(h) = ctx.h {
        setup.h = h;
    }
    if let Some(a) = ctx.alpha {
        setup.alpha = a;
    }
    let eps = [1e-2, 1e-3, 1e-4];
    let families: Vec<LimitFamily> = match ctx.family {
        Some(f) => vec![f],
        None => LimitFamily::ALL.to_vec(),
    };
    let results: Vec<(Vec<Check>, Option<limits::ConvergenceReport>)> = families
        .par_iter()
        .map(|&fam| {
            let n = fam.name();
            let sites = limits::default_sites(fam);
            let mut v = vec![];
            let conv = limits::convergence_check(fam, &setup, &eps, &sites[0], &sites[1]);
            let conv = match conv {
                Ok(c) => {
                    v.push(Check::new(format!("{n}: convergence order"), c.order, ORDER_MIN, Comparison::AtLeast));
                    Some(c)
                }
                Err(e) => {
                    v.push(Check::failed(format!("{n}: convergence order"), ORDER_MIN, e));
                    None
                }
            };
            v.push(Check::eval(format!("{n}: yang-baxter"), tol, limits::limit_cybe(fam, &setup, &sites)));
            match limits::limit_coefficients(fam, &setup, &sites[0], &sites[1]) {
                Ok(co) => {
                    v.push(Check::at_most(format!("{n}: linear"), co.linear_residual(), tol));
                    v.push(Check::at_most(format!("{n}: quadratic"), co.quadratic_residual(fam.structure().constant()), tol));
                }
                Err(e) => v.push(Check::failed(format!("{n}: identities"), tol, e)),
            }
            let var = sites[0].v;
            let lim = limits::limit_algebra(fam, &setup, var);
            let errs: gl22::Result<Vec<Option<f64>>> =
                eps.iter().map(|&e| Ok(limits::scaled_algebra(fam, &setup, e, var)?.map(|a| a.dist(&lim)))).collect();
            match errs {
                Ok(errs) if errs.iter().all(Option::is_some) => {
                    let errs: Vec<f64> = errs.into_iter().flatten().collect();
                    v.push(Check::new(format!("{n}: structure matrices order"), loglog_slope(&eps, &errs), ORDER_MIN, Comparison::AtLeast));
                }
                Ok(_) => {}
                Err(e) => v.push(Check::failed(format!("{n}: structure matrices order"), ORDER_MIN, e)),
            }
            (v, conv)
        })
        .collect();
    for (v, c) in results {
        out.checks.extend(v);
        out.convergence.extend(c);
    }
    if ctx.family.is_none() {
        let (missing, extra) = limits::degeneration_graph().diff_against_expected();
        out.checks.push(Check::new("degeneration graph: arrow mismatches", (missing.len() + extra.len()) as f64, 0.0, Comparison::Equal));
    }
    out
}

fn affine(ctx: &SuiteContext) -> SuiteResult {
    let tol = ctx.bound();
    let mut out = SuiteResult::new("affine");
    out.checks = per_point(ctx.points(SuiteName::Affine, 3), |i, gp, k| {
        // the derivation acts in the gauge where γ follows x
        let pref: gl22::Result<Vec<Kinematics>> = k.iter().map(|s| Kinematics::preferred(gp, s.x, s.gamma)).collect();
        let pref = match pref {
            Ok(p) => p,
            Err(e) => return vec![Check::failed(format!("preferred gauge #{i}"), tol, e)],
        };
        vec![
            Check::eval(format!("derivation #{i}"), tol, derivation_check(&pref[0]).map(|r| r.max())),
            Check::eval(format!("finite differences #{i}"), FD_THRESHOLD, derivative_fd_residual(&pref[0], 1e-6)),
            Check::at_most(format!("W linear in z #{i}"), w_linearity_residual(&|s: &Kinematics| s.w(), [&k[0], &k[1], &k[2]]), tol),
        ]
    });
    out
}

fn quantum(ctx: &SuiteContext) -> SuiteResult {
    let mut out = SuiteResult::new("quantum");
    out.checks = per_point(ctx.points(SuiteName::Quantum, 1), |i, gp, k| {
        let x = k[0].x;
        let gs = [1e2, 1e3, 1e4];
        let res: gl22::Result<Vec<f64>> = gs
            .iter()
            .map(|&g| {
                let (xp, xm, q) = xpm_classical(gp, x, g, 1)?;
                Ok(xpm_residual(xp, xm, q, g).norm())
            })
            .collect();
        let mut v = vec![match res {
            Ok(r) => Check::at_most(format!("constraint order |p − 2| #{i}"), (-loglog_slope(&gs, &r) - 2.0).abs(), 0.1),
            Err(e) => Check::failed(format!("constraint order #{i}"), 0.1, e),
        }];
        v.push(match xpm_classical(gp, x, 1e3, 1) {
            Ok((xp, xm, q)) => {
                let xp = solve_xplus(xm, q, 1e3, xp);
                Check::at_most(format!("q^2C closed forms agree #{i}"), quantum_charges(xp, xm, q, 1e3, gp.alpha).q2c_discrepancy, Q2C_THRESHOLD)
            }
            Err(e) => Check::failed(format!("q^2C closed forms agree #{i}"), Q2C_THRESHOLD, e),
        });
        v
    });
    out
}
