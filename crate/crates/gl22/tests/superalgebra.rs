use gl22::numeric::C64;
use gl22::superlinalg::{embed_legs, graded_swap, kron_graded, GradedOperator, GradedSpace, Parity};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_op(space: &GradedSpace, seed: u64) -> GradedOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.dim();
    let m = DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    GradedOperator::endo(space, m)
}

fn homogeneous(space: &GradedSpace, seed: u64, odd: bool) -> GradedOperator {
    let (even, oddp) = random_op(space, seed).homogeneous_parts();
    if odd {
        oddp
    } else {
        even
    }
}

fn sign(bits: u8) -> f64 {
    if bits % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kron_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let v = GradedSpace::fundamental();
        let (a, b, c) = (random_op(&v, s1), random_op(&v, s2), random_op(&v, s3));
        let left = kron_graded(&kron_graded(&a, &b), &c);
        let right = kron_graded(&a, &kron_graded(&b, &c));
        prop_assert!(left.dist(&right) < 1e-13);
    }

    #[test]
    fn super_interchange_law(s in any::<[u64; 4]>(), p in any::<[bool; 4]>()) {
        let v = GradedSpace::fundamental();
        let a = homogeneous(&v, s[0], p[0]);
        let b = homogeneous(&v, s[1], p[1]);
        let c = homogeneous(&v, s[2], p[2]);
        let d = homogeneous(&v, s[3], p[3]);
        let lhs = &kron_graded(&a, &b) * &kron_graded(&c, &d);
        let sg = sign((p[1] && p[2]) as u8);
        let rhs = kron_graded(&(&a * &c), &(&b * &d)).scale(C64::new(sg, 0.0));
        prop_assert!(lhs.dist(&rhs) < 1e-12);
    }

    #[test]
    fn swap_conjugation_exchanges_factors(s in any::<[u64; 2]>(), p in any::<[bool; 2]>()) {
        let v = GradedSpace::fundamental();
        let a = homogeneous(&v, s[0], p[0]);
        let b = homogeneous(&v, s[1], p[1]);
        let sw = graded_swap(&v, &v);
        let lhs = &(&sw * &kron_graded(&a, &b)) * &sw;
        let sg = sign((p[0] && p[1]) as u8);
        prop_assert!(lhs.dist(&kron_graded(&b, &a).scale(C64::new(sg, 0.0))) < 1e-13);
    }

    /// Entry-by-entry oracle for placing a two-leg operator into three legs:
    /// the only sign is the Koszul sign of the operator part passing the
    /// spectator leg.
    #[test]
    fn embedding_matches_state_oracle(seed in any::<u64>()) {
        let v = GradedSpace::fundamental();
        let pair = v.tensor(&v);
        let m = random_op(&pair, seed);
        let p = |i: usize| v.parity(i).bit();
        let r12 = embed_legs(&m, (1, 2), 3, &v).unwrap();
        let r13 = embed_legs(&m, (1, 3), 3, &v).unwrap();
        let r23 = embed_legs(&m, (2, 3), 3, &v).unwrap();
        let idx = |i: usize, j: usize, k: usize| i * 16 + j * 4 + k;
        let mut worst: f64 = 0.0;
        for i in 0..4 { for j in 0..4 { for k in 0..4 {
            for a in 0..4 { for b in 0..4 { for c in 0..4 {
                let col = idx(i, j, k);
                let row = idx(a, b, c);
                let e12 = if c == k { m.get(a * 4 + b, i * 4 + j) } else { C64::new(0.0, 0.0) };
                let e13 = if b == j { m.get(a * 4 + c, i * 4 + k) * sign((p(k) + p(c)) * p(j)) } else { C64::new(0.0, 0.0) };
                let e23 = if a == i { m.get(b * 4 + c, j * 4 + k) * sign((p(j) + p(k) + p(b) + p(c)) * p(i)) } else { C64::new(0.0, 0.0) };
                worst = worst
                    .max((r12.get(row, col) - e12).norm())
                    .max((r13.get(row, col) - e13).norm())
                    .max((r23.get(row, col) - e23).norm());
            }}}
        }}}
        prop_assert!(worst < 1e-14, "{}", worst);
    }
}

#[test]
fn parity_arithmetic() {
    let e = Parity::from_bit(0);
    let o = Parity::from_bit(1);
    assert_eq!(o + o, e);
    assert_eq!(o.koszul(o), -1.0);
    assert_eq!(o.koszul(e), 1.0);
    assert_eq!(GradedSpace::fundamental().tensor_power(3).dim(), 64);
}

#[test]
fn bad_leg_indices_are_rejected() {
    let v = GradedSpace::fundamental();
    let m = GradedOperator::identity(&v.tensor(&v));
    assert!(embed_legs(&m, (2, 1), 3, &v).is_err());
    assert!(embed_legs(&m, (1, 4), 3, &v).is_err());
}
