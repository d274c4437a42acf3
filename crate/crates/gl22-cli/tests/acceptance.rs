//! Acceptance criteria, one line each. Runs with its own harness so the
//! lines are printed even when everything passes.

use std::process::Command;
use std::time::Instant;

use gl22::fundrep::{derivation_check, derivative_fd_residual, homomorphism_residual, serre_chevalley_check, LoopAlgebra};
use gl22::limits::{self, LimitFamily, LimitSetup};
use gl22::numeric::{loglog_slope, C64, ONE};
use gl22::params::{quantum_charges, solve_xplus, xpm_classical, xpm_residual, GlobalParams, Kinematics};
use gl22::rmatrix::{antisymmetry_residual, coefficient_jacobian, coefficients, cybe_residual, r_fund_table, r_fund_universal};
use gl22::sampling::Sampler;
use gl22::symmetries::{self, SymmetryKind};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn pairs(seed: u64, n: usize) -> Vec<(Kinematics, Kinematics)> {
    let mut s = Sampler::new(seed);
    (0..n)
        .map(|_| {
            let (_, k) = s.point(2).unwrap();
            (k[0], k[1])
        })
        .collect()
}

fn fmax(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn c1_cybe() -> Outcome {
    let t = Instant::now();
    let mut s = Sampler::new(101);
    let worst = fmax((0..100).map(|_| {
        let (_, k) = s.point(3).unwrap();
        cybe_residual(&k[0], &k[1], &k[2]).unwrap()
    }));
    let secs = t.elapsed().as_secs_f64();
    outcome(worst < 1e-9 && secs < 30.0, format!("max residual {worst:.2e} over 100 triples in {secs:.1} s (need < 1e-9, < 30 s)"))
}

fn c2_dual_construction() -> Outcome {
    let worst = fmax(pairs(102, 100).iter().map(|(a, b)| r_fund_table(a, b).unwrap().op.dist(&r_fund_universal(a, b).unwrap())));
    outcome(worst < 1e-10, format!("max entrywise difference {worst:.2e} over 100 pairs (need < 1e-10)"))
}

fn c3_identities() -> Outcome {
    let ps = pairs(103, 200);
    let mut lin: f64 = 0.0;
    let mut quad: f64 = 0.0;
    for (a, b) in &ps {
        let co = coefficients(a, b).unwrap();
        lin = lin.max(co.linear_residual());
        quad = quad.max(co.quadratic_residual(ONE));
    }
    let mut ranks = vec![];
    for (a, b) in ps.iter().take(10) {
        for with_alpha in [false, true] {
            let (_, sv) = coefficient_jacobian(a, b, with_alpha).unwrap();
            ranks.push(sv.iter().filter(|&&s| s > 1e-8).count());
        }
    }
    let rank_ok = ranks.iter().all(|&r| r == 6);
    outcome(
        lin < 1e-10 && quad < 1e-10 && rank_ok,
        format!("linear {lin:.2e}, quadratic {quad:.2e} over 200 pairs (need < 1e-10); ranks {:?} (need 6)", {
            let mut r = ranks.clone();
            r.dedup();
            r
        }),
    )
}

fn c4_antisymmetry() -> Outcome {
    let worst = fmax(pairs(104, 100).iter().map(|(a, b)| antisymmetry_residual(&r_fund_table(a, b).unwrap().op, &r_fund_table(b, a).unwrap().op)));
    outcome(worst < 1e-11, format!("max |r₁₂ + P r₂₁ P| {worst:.2e} over 100 pairs (need < 1e-11)"))
}

fn c5_jacobi() -> Outcome {
    let t = Instant::now();
    let mut s = Sampler::new(105);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let gp = s.global().unwrap();
        worst = worst.max(LoopAlgebra::new(gp.h, gp.alpha).unwrap().jacobi_residual(3));
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(worst < 1e-11 && secs < 60.0, format!("max residual {worst:.2e}, all triples with levels in [−3, 3] at 3 random (h, α), {secs:.1} s (need < 1e-11, < 60 s)"))
}

fn c6_homomorphism() -> Outcome {
    let mut s = Sampler::new(106);
    let worst = fmax((0..50).map(|_| {
        let (_, k) = s.point(1).unwrap();
        homomorphism_residual(&k[0], 0).unwrap()
    }));
    outcome(worst < 1e-9, format!("max residual {worst:.2e} over all level-0 pairs at 50 kinematics (need < 1e-9)"))
}

fn c7_constraints() -> Outcome {
    let mut s = Sampler::new(107);
    let worst = fmax((0..200).map(|_| s.point(1).unwrap().1[0].constraint_residual()));
    outcome(worst < 1e-10, format!("max residual {worst:.2e} over 200 kinematics (need < 1e-10)"))
}

fn c8_affine() -> Outcome {
    let mut s = Sampler::new(108);
    let mut der: f64 = 0.0;
    let mut fd: f64 = 0.0;
    for _ in 0..50 {
        let gp = s.global().unwrap();
        let x = s.x(&gp);
        let k = Kinematics::preferred(&gp, x, s.unit_scale()).unwrap();
        der = der.max(derivation_check(&k).unwrap().max());
        fd = fd.max(derivative_fd_residual(&k, 1e-6).unwrap());
    }
    outcome(der < 1e-10 && fd < 1e-6, format!("derivation identities {der:.2e} (need < 1e-10), finite differences {fd:.2e} (need < 1e-6) over 50 points"))
}

fn c9_quantum() -> Outcome {
    let mut s = Sampler::new(109);
    let gs = [1e2, 1e3, 1e4];
    let mut slopes = vec![];
    let mut disc: f64 = 0.0;
    for _ in 0..10 {
        let gp = s.global().unwrap();
        let x = s.x(&gp);
        let res: Vec<f64> = gs
            .iter()
            .map(|&g| {
                let (xp, xm, q) = xpm_classical(&gp, x, g, 1).unwrap();
                xpm_residual(xp, xm, q, g).norm()
            })
            .collect();
        slopes.push(-loglog_slope(&gs, &res));
        let (xp, xm, q) = xpm_classical(&gp, x, 1e3, 1).unwrap();
        let xp = solve_xplus(xm, q, 1e3, xp);
        disc = disc.max(quantum_charges(xp, xm, q, 1e3, gp.alpha).q2c_discrepancy);
    }
    let dev = fmax(slopes.iter().map(|p| (p - 2.0).abs()));
    outcome(dev <= 0.1 && disc < 1e-8, format!("exponent within {dev:.3} of 2 at 10 points (need ≤ 0.1); q^2C forms differ by {disc:.2e} (need < 1e-8)"))
}

fn c10_symmetries() -> Outcome {
    let ps = pairs(110, 50);
    let mut rel: f64 = 0.0;
    let mut group: f64 = 0.0;
    let mut worst_name = String::new();
    let mut absorb = |rep: &symmetries::SymmetryReport| {
        for (n, r) in &rep.checks {
            if n.starts_with("twice") || n.starts_with("four steps") {
                group = group.max(*r);
            } else if *r > rel {
                rel = *r;
                worst_name = format!("{}: {n}", rep.name);
            }
        }
    };
    for (a, b) in &ps {
        for kind in SymmetryKind::ALL {
            absorb(&symmetries::verify(kind, a, b).unwrap());
        }
    }
    let mut s = Sampler::new(1110);
    let k = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    for _ in 0..10 {
        let gp = GlobalParams::from_k(k, s.unit_scale()).unwrap();
        let ks = s.sites(&gp, 2).unwrap();
        absorb(&symmetries::verify_selfdual_composite(&ks[0], &ks[1]).unwrap());
    }
    // the group relations are compositions of exact maps, so only rounding remains
    outcome(
        rel < 1e-10 && group < 1e-13,
        format!("relations {rel:.2e} (worst: {worst_name}; need < 1e-10); group relations {group:.2e} (rounding only, need < 1e-13)"),
    )
}

fn c11_limits() -> Outcome {
    let setup = LimitSetup::default();
    let eps = [1e-2, 1e-3, 1e-4];
    let mut lines = vec![];
    let mut ok = true;
    for fam in LimitFamily::ALL {
        let s = limits::default_sites(fam);
        let conv = limits::convergence_check(fam, &setup, &eps, &s[0], &s[1]).unwrap();
        let cy = limits::limit_cybe(fam, &setup, &s).unwrap();
        ok &= conv.order >= 0.9 && cy < 1e-9;
        lines.push(format!("{} p={:.3} cybe={cy:.1e}", fam.name(), conv.order));
    }
    let (missing, extra) = limits::degeneration_graph().diff_against_expected();
    ok &= missing.is_empty() && extra.is_empty();
    outcome(ok, format!("{}; graph mismatches {} (need order ≥ 0.9, cybe < 1e-9, 0 mismatches)", lines.join(", "), missing.len() + extra.len()))
}

fn c12_serre() -> Outcome {
    let mut s = Sampler::new(112);
    let worst = fmax((0..50).map(|_| serre_chevalley_check(&s.point(1).unwrap().1[0]).unwrap().max()));
    outcome(worst < 1e-10, format!("max residual {worst:.2e} over 50 kinematics (need < 1e-10)"))
}

fn c13_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let p = dir.path().join(name);
        let st = Command::new(env!("CARGO_BIN_EXE_gl22"))
            .args(["verify", "--seed", "1234", "--samples", "4", "-o"])
            .arg(&p)
            .env("GL22_THREADS", threads)
            .status()
            .unwrap();
        (st.code(), std::fs::read(&p).unwrap_or_default())
    };
    let (c1, a) = run("a.json", "4");
    let (c2, b) = run("b.json", "4");
    let (c3, c) = run("c.json", "1");
    let same = !a.is_empty() && a == b && a == c;
    outcome(same && c1 == Some(0) && c2 == c1 && c3 == c1, format!("three runs (4, 4, 1 threads): byte-identical = {same}, exit codes {c1:?} {c2:?} {c3:?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("classical Yang-Baxter equation", c1_cybe),
        ("table form equals universal form", c2_dual_construction),
        ("coefficient identities and rank", c3_identities),
        ("graded antisymmetry", c4_antisymmetry),
        ("loop-algebra Jacobi identity", c5_jacobi),
        ("evaluation representation homomorphism", c6_homomorphism),
        ("kinematic constraints", c7_constraints),
        ("affine consistency", c8_affine),
        ("quantum-side constraint order", c9_quantum),
        ("discrete symmetries", c10_symmetries),
        ("limits and degeneration graph", c11_limits),
        ("Serre-Chevalley relations", c12_serre),
        ("deterministic reports", c13_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = match std::panic::catch_unwind(f) {
            Ok(o) => o,
            Err(e) => {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            }
        };
        if !o.pass {
            failed += 1;
        }
        println!("acceptance {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
