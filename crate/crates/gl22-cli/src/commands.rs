use std::collections::BTreeMap;
use std::path::Path;

use gl22::fundrep::{represent, GeneratorTerm, Kind};
use gl22::limits::{self, LimitFamily, LimitSetup, LimitSite};
use gl22::numeric::{C64, ONE};
use gl22::params::{Branch, GlobalParams, Kinematics};
use gl22::rmatrix::{antisymmetry_residual, coefficients, cybe_residual, r_fund_table, CoefficientSet};
use gl22::sampling::Sampler;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::{Environment, Report, SCHEMA};
use crate::suites::{run_suite, SuiteContext};
use crate::{CliError, CliResult, Format, Outcome, RunConfig};

pub fn cmd_verify(cfg: &RunConfig) -> Report {
    let ctx = SuiteContext {
        h: cfg.h,
        alpha: cfg.alpha,
        sites: cfg.sites.clone(),
        seed: cfg.seed,
        samples: cfg.samples,
        tol: cfg.tolerance,
        levels: cfg.levels,
        family: cfg.family,
    };
    let suites = cfg.suites.iter().map(|&s| run_suite(s, &ctx)).collect();
    let env = Environment { version: env!("CARGO_PKG_VERSION").to_string(), seed: cfg.seed, samples: cfg.samples, tolerance: cfg.tolerance };
    Report::new(env, suites)
}

/// Parameters of a dumped matrix. Complex numbers serialise as [re, im].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpHeader {
    /// "trigonometric", "rational" (h = 0, rescaled by iε) or "generator"
    pub form: String,
    pub h: C64,
    pub hprime: C64,
    pub alpha: C64,
    pub x1: C64,
    pub gamma1: C64,
    pub z1: C64,
    pub q1: C64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x2: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma2: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z2: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q2: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coefficients: Option<BTreeMap<String, C64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dump {
    pub schema: u32,
    pub header: DumpHeader,
    pub rows: usize,
    pub cols: usize,
    /// row-major
    pub data: Vec<C64>,
}

impl Dump {
    pub fn matrix(&self) -> CliResult<DMatrix<C64>> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::Config(format!("dump has {} entries for a {}×{} matrix", self.data.len(), self.rows, self.cols)));
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }
}

pub fn load_dump(path: &Path) -> CliResult<Dump> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn named(co: &CoefficientSet) -> BTreeMap<String, C64> {
    CoefficientSet::NAMES.iter().map(|n| n.to_string()).zip(co.to_array()).collect()
}

fn global(cfg: &RunConfig) -> CliResult<GlobalParams> {
    let h = cfg.h.ok_or_else(|| CliError::Config("--h is required".into()))?;
    Ok(GlobalParams::new(h, cfg.alpha.unwrap_or(ONE), Branch::Plus)?)
}

/// Header and matrix at the configured pair of sites. At h = 0 the spectral
/// parameters coincide, and the finite object is the rescaled rational limit.
pub fn pair_dump(cfg: &RunConfig) -> CliResult<Dump> {
    let gp = global(cfg)?;
    let [(x1, g1), (x2, g2)] = [cfg.sites[0], cfg.sites[1]];
    let (header, m) = if gp.h == C64::new(0.0, 0.0) {
        let setup = LimitSetup { alpha: gp.alpha, ..LimitSetup::default() };
        let (s1, s2) = (LimitSite::new(x1, g1), LimitSite::new(x2, g2));
        let co = limits::limit_coefficients(LimitFamily::FullRational, &setup, &s1, &s2)?;
        let d1 = limits::rational_site_data(x1, g1, gp.alpha);
        let d2 = limits::rational_site_data(x2, g2, gp.alpha);
        let r = limits::limit_r(LimitFamily::FullRational, &setup, &s1, &s2)?;
        (
            DumpHeader {
                form: "rational".into(),
                h: gp.h,
                hprime: gp.hprime,
                alpha: gp.alpha,
                x1,
                gamma1: g1,
                z1: d1.z,
                q1: d1.q,
                x2: Some(x2),
                gamma2: Some(g2),
                z2: Some(d2.z),
                q2: Some(d2.q),
                coefficients: Some(named(&co)),
                generator: None,
                level: None,
            },
            r.into_matrix(),
        )
    } else {
        let k1 = Kinematics::new(&gp, x1, g1)?;
        let k2 = Kinematics::new(&gp, x2, g2)?;
        let rm = r_fund_table(&k1, &k2)?;
        (
            DumpHeader {
                form: "trigonometric".into(),
                h: gp.h,
                hprime: gp.hprime,
                alpha: gp.alpha,
                x1,
                gamma1: g1,
                z1: k1.z(),
                q1: k1.q(),
                x2: Some(x2),
                gamma2: Some(g2),
                z2: Some(k2.z()),
                q2: Some(k2.q()),
                coefficients: Some(named(&rm.coeffs)),
                generator: None,
                level: None,
            },
            rm.op.into_matrix(),
        )
    };
    Ok(to_dump(header, &m))
}

fn to_dump(header: DumpHeader, m: &DMatrix<C64>) -> Dump {
    let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
    Dump { schema: SCHEMA, header, rows: m.nrows(), cols: m.ncols(), data }
}

pub fn parse_kind(s: &str) -> CliResult<Kind> {
    Kind::loop_basis()
        .into_iter()
        .chain([Kind::C, Kind::D])
        .find(|k| k.to_string() == s || matches!(k, Kind::R(..) | Kind::L(..)) && flip_name(k) == s)
        .ok_or_else(|| CliError::Config(format!("unknown generator {s:?}")))
}

/// R and L are symmetric in their indices, so "R21" names R12.
fn flip_name(k: &Kind) -> String {
    let n = k.to_string();
    let b = n.as_bytes();
    format!("{}{}{}", b[0] as char, b[2] as char, b[1] as char)
}

pub fn generator_dump(cfg: &RunConfig, name: &str) -> CliResult<Dump> {
    let gp = global(cfg)?;
    let kind = parse_kind(name)?;
    let (x, g) = cfg.sites[0];
    let k = Kinematics::new(&gp, x, g)?;
    let op = represent(GeneratorTerm::new(kind, cfg.level), &k)?;
    let header = DumpHeader {
        form: "generator".into(),
        h: gp.h,
        hprime: gp.hprime,
        alpha: gp.alpha,
        x1: x,
        gamma1: g,
        z1: k.z(),
        q1: k.q(),
        x2: None,
        gamma2: None,
        z2: None,
        q2: None,
        coefficients: None,
        generator: Some(kind.to_string()),
        level: Some(cfg.level),
    };
    Ok(to_dump(header, op.matrix()))
}

pub fn cmd_dump(cfg: &RunConfig) -> CliResult<String> {
    let d = match &cfg.generator {
        Some(g) => generator_dump(cfg, g)?,
        None => pair_dump(cfg)?,
    };
    Ok(serde_json::to_string(&d)? + "\n")
}

pub fn cmd_coeffs(cfg: &RunConfig) -> CliResult<String> {
    let d = pair_dump(cfg)?;
    let co = d.header.coefficients.clone().expect("pair dumps carry coefficients");
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                schema: u32,
                header: DumpHeader,
            }
            Ok(serde_json::to_string_pretty(&Out { schema: SCHEMA, header: d.header })? + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["name", "re", "im"])?;
            for (n, z) in co {
                w.write_record([n, z.re.to_string(), z.im.to_string()])?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub h_re: f64,
    pub h_im: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub x1_re: f64,
    pub x1_im: f64,
    pub x2_re: f64,
    pub x2_im: f64,
    pub x3_re: f64,
    pub x3_im: f64,
    pub cybe: Option<f64>,
    pub antisymmetry: Option<f64>,
    pub linear: Option<f64>,
    pub quadratic: Option<f64>,
    pub error: Option<String>,
}

fn sweep_point(index: usize, gp: &GlobalParams, k: &[Kinematics]) -> SweepRow {
    let mut row = SweepRow {
        index,
        h_re: gp.h.re,
        h_im: gp.h.im,
        alpha_re: gp.alpha.re,
        alpha_im: gp.alpha.im,
        x1_re: k[0].x.re,
        x1_im: k[0].x.im,
        x2_re: k[1].x.re,
        x2_im: k[1].x.im,
        x3_re: k[2].x.re,
        x3_im: k[2].x.im,
        cybe: None,
        antisymmetry: None,
        linear: None,
        quadratic: None,
        error: None,
    };
    let r = (|| -> gl22::Result<()> {
        let co = coefficients(&k[0], &k[1])?;
        row.linear = Some(co.linear_residual());
        row.quadratic = Some(co.quadratic_residual(ONE));
        row.antisymmetry = Some(antisymmetry_residual(&r_fund_table(&k[0], &k[1])?.op, &r_fund_table(&k[1], &k[0])?.op));
        row.cybe = Some(cybe_residual(&k[0], &k[1], &k[2])?);
        Ok(())
    })();
    if let Err(e) = r {
        row.error = Some(e.to_string());
    }
    row
}

/// Random points, evaluated in parallel; rows come out in sampling order.
pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<Outcome> {
    let mut s = Sampler::new(cfg.seed);
    let mut points = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let mut gp = s.global()?;
        if let Some(h) = cfg.h {
            gp = GlobalParams::new(h, gp.alpha, Branch::Plus)?;
        }
        if let Some(a) = cfg.alpha {
            gp = GlobalParams::with_hprime(gp.h, gp.hprime, a)?;
        }
        let ks = s.sites(&gp, 3)?;
        points.push((gp, ks));
    }
    let rows: Vec<SweepRow> = points.par_iter().enumerate().map(|(i, (gp, ks))| sweep_point(i, gp, ks)).collect();
    let pass = rows.iter().all(|r| r.error.is_none());
    let mut w = csv::Writer::from_writer(vec![]);
    for r in &rows {
        w.serialize(r)?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8");
    Ok(Outcome { text, pass })
}

pub fn cmd_graph(cfg: &RunConfig) -> CliResult<Outcome> {
    let g = limits::degeneration_graph();
    let (missing, extra) = g.diff_against_expected();
    let pass = missing.is_empty() && extra.is_empty();
    let text = if cfg.dot {
        g.to_dot()
    } else {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            graph: &'a limits::DegenerationGraph,
            matches_expected: bool,
        }
        serde_json::to_string_pretty(&Out { schema: SCHEMA, graph: &g, matches_expected: pass })? + "\n"
    };
    Ok(Outcome { text, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_names() {
        assert_eq!(parse_kind("R12").unwrap(), Kind::R(0, 1));
        assert_eq!(parse_kind("R21").unwrap(), Kind::R(0, 1));
        assert_eq!(parse_kind("Q21").unwrap(), Kind::Q(1, 0));
        assert_eq!(parse_kind("B").unwrap(), Kind::B);
        assert!(parse_kind("X1").is_err());
    }
}
