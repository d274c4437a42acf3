// Oracle values are quoted to more digits than f64 holds.
#![allow(clippy::excessive_precision, clippy::type_complexity)]

use gl22::fundrep::affine::uv_over_z_series;
use gl22::numeric::{c, mat2_max_abs, C64, ONE};
use gl22::params::{Branch, GlobalParams, Kinematics};
use gl22::rmatrix::coefficients;
use gl22::sampling::Sampler;
use proptest::prelude::*;

#[test]
fn constraints_hold_on_random_points() {
    let mut s = Sampler::new(11);
    for _ in 0..200 {
        let (_, sites) = s.point(1).unwrap();
        let r = sites[0].constraint_residual();
        assert!(r < 1e-10, "{r} at {:?}", sites[0].x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverting_x_keeps_z_and_flips_q(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let gp = s.global().unwrap();
        let x = s.x(&gp);
        let g = s.unit_scale();
        let k = Kinematics::new(&gp, x, g).unwrap();
        let ki = Kinematics::new(&gp, x.inv(), g).unwrap();
        prop_assert!((k.z() - ki.z()).norm() < 1e-12 * (1.0 + k.z().norm()));
        prop_assert!((k.q() + ki.q()).norm() < 1e-12 * (1.0 + k.q().norm()));
    }
}

/// 30-digit values of (A, B, C, D, E, F, G, H, K, L) computed independently
/// with mpmath from the per-site closed forms.
#[test]
fn coefficients_match_high_precision_values() {
    #[rustfmt::skip]
    let cases: [([C64; 6], [(f64, f64); 10]); 2] = [
        (
            [c(0.3, 0.1), c(1.3, -0.2), c(2.0, 0.5), c(1.1, 0.3), c(-1.7, 1.2), c(0.7, -0.4)],
            [
                (0.0065944949478731413292, -0.4965908951754185377),
                (-0.42960339442628876823, -0.95231024786560802999),
                (-0.4190854279465872961, 0.051123979764303602947),
                (0.0065944949478731413292, -0.4965908951754185377),
                (-0.42960339442628876823, -0.95231024786560802999),
                (-1.8738017166678020809, -0.34518697342079641958),
                (-0.4381188305021526125, 0.12188854171375901428),
                (1.4116101387248947734, -0.14979750066805469256),
                (-1.0930662212044231044, 0.066479985498455889456),
                (0.4381188305021526125, -0.12188854171375901428),
            ],
        ),
        (
            [c(0.55, -0.2), c(0.8, 0.6), c(-3.2, 1.5), c(1.4, 0.0), c(0.3, -2.1), c(0.6, 0.9)],
            [
                (-0.16651497735207909016, -0.20805503656754932876),
                (-0.81730896478971815755, -0.25044907705463727622),
                (0.26806318894849748343, -0.23428687893160518307),
                (-0.16651497735207909016, -0.20805503656754932876),
                (-0.81730896478971815755, -0.25044907705463727622),
                (-0.023041499733849012858, 0.25367104396686971322),
                (-0.20625807083172284331, 0.17267228498185291965),
                (-0.16395935910579986475, -0.17102059620378732235),
                (-0.13104775598989754214, -0.79125465953748460756),
                (0.20625807083172284331, -0.17267228498185291965),
            ],
        ),
    ];
    for ([h, al, x1, g1, x2, g2], want) in cases {
        let gp = GlobalParams::new(h, al, Branch::Plus).unwrap();
        let k1 = Kinematics::new(&gp, x1, g1).unwrap();
        let k2 = Kinematics::new(&gp, x2, g2).unwrap();
        let got = coefficients(&k1, &k2).unwrap().to_array();
        for (g, (re, im)) in got.iter().zip(want) {
            assert!((g - c(re, im)).norm() < 1e-13, "{g} vs {re}+{im}i");
        }
    }
}

/// The Taylor data for U/z and V/z, summed to order n, matches direct
/// evaluation up to a remainder of order |z|^{n+1}.
#[test]
fn truncated_series_agree_with_closed_forms() {
    let gp = GlobalParams::new(c(0.3, 0.1), c(1.3, -0.2), Branch::Plus).unwrap();
    let n = 30;
    let (us, vs) = uv_over_z_series(&gp, n);
    let (h, al) = (gp.h, gp.alpha);
    for z in [c(0.05, 0.02), c(-0.1, 0.1), c(0.0, 0.2)] {
        let den = z * z + (h * h * 4.0 - 2.0) * z + ONE;
        let u = gl22::numeric::mat2(-h * h, h * al, -h / al, h * h) / den;
        let v = -(z - ONE + h * h * 2.0) / den;
        let mut su = gl22::numeric::Mat2::zeros();
        let mut sv = C64::new(0.0, 0.0);
        let mut zk = ONE;
        for k in 0..=n {
            su += us[k] * zk;
            sv += vs[k] * zk;
            zk *= z;
        }
        assert!(mat2_max_abs(&(su - u)) < 1e-12);
        assert!((sv - v).norm() < 1e-12);
    }
    // the remainder really is of order n+1
    let (us, _) = uv_over_z_series(&gp, 2);
    let z = c(0.01, 0.0);
    let den = z * z + (h * h * 4.0 - 2.0) * z + ONE;
    let u = gl22::numeric::mat2(-h * h, h * al, -h / al, h * h) / den;
    let s = us[0] + us[1] * z + us[2] * z * z;
    let err = mat2_max_abs(&(s - u));
    assert!(err < 1e-5 && err > 1e-9, "{err}");
}
