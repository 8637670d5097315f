use std::sync::Arc;

use dfilt::weyl::{int, rat};
use dfilt::{AlgebraKind, MonomialKey, Operator, Signature};
use proptest::prelude::*;

fn sig_strategy() -> impl Strategy<Value = Arc<Signature>> {
    (0usize..=4, 0usize..=4, prop_oneof![Just(AlgebraKind::Weyl), Just(AlgebraKind::Homogenized)])
        .prop_filter("1 <= n + p <= 4", |(n, p, _)| (1..=4).contains(&(n + p)))
        .prop_map(|(n, p, k)| Signature::new(n, p, k).unwrap())
}

/// Up to four terms, each of total degree at most 4.
fn op_strategy(sig: Arc<Signature>) -> impl Strategy<Value = Operator> {
    let width = sig.width();
    let term = (proptest::collection::vec(0usize..width, 0..=4), -5i64..=5, 1i64..=3);
    proptest::collection::vec(term, 0..=4).prop_map(move |terms| {
        Operator::from_terms(
            &sig,
            terms.into_iter().map(|(vars, num, den)| {
                let mut e = vec![0u16; width];
                for v in vars {
                    e[v] += 1;
                }
                (MonomialKey::from_exponents(&e), rat(num, den))
            }),
        )
    })
}

fn triple() -> impl Strategy<Value = (Operator, Operator, Operator)> {
    sig_strategy().prop_flat_map(|s| (op_strategy(s.clone()), op_strategy(s.clone()), op_strategy(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        let one = Operator::one(a.signature());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&one * &a, a);
    }
}

#[test]
fn canonical_brackets() {
    for kind in [AlgebraKind::Weyl, AlgebraKind::Homogenized] {
        let s = Signature::new(2, 2, kind).unwrap();
        let h = Operator::h(&s);
        for i in 0..2 {
            let (x, d) = (Operator::x(&s, i), Operator::dx(&s, i));
            assert_eq!(&(&d * &x) - &(&x * &d), h);
            let (t, dt) = (Operator::t(&s, i), Operator::dt(&s, i));
            assert_eq!(&(&dt * &t) - &(&t * &dt), h);
            assert_eq!(&Operator::dx(&s, i) * &Operator::x(&s, 1 - i), &Operator::x(&s, 1 - i) * &Operator::dx(&s, i));
        }
    }
}

#[test]
fn dt_power_past_t() {
    let s = Signature::homogenized(1, 1);
    let (t, dt, h) = (Operator::t(&s, 0), Operator::dt(&s, 0), Operator::h(&s));
    for k in 1..=6u32 {
        let lhs = &dt.pow(k) * &t;
        let rhs = &(&t * &dt.pow(k)) + &(&h * &dt.pow(k - 1)).scale(&int(k as i64));
        assert_eq!(lhs, rhs, "k = {k}");
    }
}

#[test]
fn commutative_ring_has_no_brackets() {
    let s = Signature::commutative(1, 1);
    let (x, d) = (Operator::x(&s, 0), Operator::dx(&s, 0));
    assert_eq!(&d * &x, &x * &d);
}

#[test]
fn h_is_central() {
    let s = Signature::homogenized(2, 1);
    let h = Operator::h(&s);
    for op in [Operator::x(&s, 1), Operator::dx(&s, 0), Operator::t(&s, 0), Operator::dt(&s, 0)] {
        assert!(h.commutator(&op).unwrap().is_zero());
    }
}
