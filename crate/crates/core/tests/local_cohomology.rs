use dfilt::localcohom::{self, act, FunctionalEquation, LaurentElement, QuasiHomogeneousInput};
use dfilt::restriction::UniPoly;
use dfilt::resolution;
use dfilt::weyl::{int, rat};
use dfilt::{OrderSpec, Operator, Rat, Signature};
use proptest::prelude::*;

fn poly(n: usize, exps: &[&[u32]]) -> Operator {
    let s = Signature::commutative(n, 0);
    exps.iter().fold(Operator::zero(&s), |acc, e| {
        let m = e.iter().enumerate().fold(Operator::one(&s), |m, (i, &k)| &m * &Operator::x(&s, i).pow(k));
        &acc + &m
    })
}

fn cases() -> Vec<(&'static str, QuasiHomogeneousInput, UniPoly, i64, i64)> {
    let r = |a, b| rat(a, b);
    vec![
        (
            "x^2+y^3",
            QuasiHomogeneousInput::new(&poly(2, &[&[2, 0], &[0, 3]]), vec![r(1, 2), r(1, 3)]).unwrap(),
            UniPoly::from_roots(&[(r(-1, 1), 1), (r(-5, 6), 1), (r(-7, 6), 1)]),
            1,
            0,
        ),
        (
            "x^2+y^2",
            QuasiHomogeneousInput::new(&poly(2, &[&[2, 0], &[0, 2]]), vec![r(1, 2), r(1, 2)]).unwrap(),
            UniPoly::from_roots(&[(r(-1, 1), 2)]),
            1,
            0,
        ),
        (
            "four squares",
            QuasiHomogeneousInput::new(&poly(4, &[&[2, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 2]]), vec![r(1, 2); 4])
                .unwrap(),
            UniPoly::from_roots(&[(r(-1, 1), 1), (r(-2, 1), 1)]),
            2,
            1,
        ),
    ]
}

#[test]
fn b_functions_are_certified() {
    for (name, q, b, kp, k1) in cases() {
        let got = localcohom::bernstein_sato_qh(&q).unwrap();
        assert_eq!(got.b_f, b, "{name}");
        assert_eq!((got.k_prime, got.k1()), (kp, k1), "{name}");
        let fe = FunctionalEquation::solve(&q, &got.b_f).unwrap().expect(name);
        assert!(fe.verify(&q), "{name}");
    }
}

#[test]
fn a_proper_divisor_of_b_has_no_functional_equation() {
    let (_, q, _, _, _) = cases().remove(0);
    let partial = UniPoly::from_roots(&[(rat(-1, 1), 1), (rat(-5, 6), 1)]);
    assert!(FunctionalEquation::solve(&q, &partial).unwrap().is_none());
}

#[test]
fn presentations_are_involutive_with_exact_lifts() {
    for (name, q, _, kp, _) in cases() {
        let p1 = localcohom::presentation_prop1(&q, kp);
        let c1 = localcohom::check_presentation(&q, kp, &p1, false).unwrap();
        assert!(c1.all_pass(), "{name}: O[1/f]");
        let p2 = localcohom::presentation_prop2(&q, kp);
        let c2 = localcohom::check_presentation(&q, kp, &p2, true).unwrap();
        assert!(c2.all_pass(), "{name}: O[1/f]/O");
    }
}

#[test]
fn strictness_for_f_to_the_s() {
    for (name, q, _, _, _) in cases() {
        assert!(localcohom::m_strictness(&q).unwrap().holds(), "{name}");
    }
}

#[test]
fn four_squares_restriction() {
    let (_, q, _, _, _) = cases().remove(2);
    let r = localcohom::presentation_prop4(&q).unwrap();
    assert!(r.matches());
    assert_eq!(r.presentation.ranks(), vec![2, 7]);
    let mut s1 = r.presentation.modules[1].f_shifts.clone();
    s1.sort();
    assert_eq!(s1, vec![0, 1, 1, 1, 1, 1, 2]);
}

/// The minimal restriction for the cusp keeps `S_12`, which is not in `D(θ+1, f)`.
#[test]
fn cusp_restriction_keeps_the_rotation_field() {
    let (_, q, _, _, _) = cases().remove(0);
    let r = localcohom::presentation_prop4(&q).unwrap();
    assert_eq!(r.presentation.ranks(), vec![1, 3]);
    let mut s1 = r.presentation.modules[1].f_shifts.clone();
    s1.sort();
    assert_eq!(s1, vec![0, 1, 1]);
    // Same module as the presentation of O[1/f]/O with generator 1/f.
    let p2 = localcohom::presentation_prop2(&q, 1);
    assert!(dfilt::groebner::same_submodule(&r.presentation.maps[0], &p2.rows, &p2.target, &p2.sig).unwrap());
    assert!(!r.same_relations);
}

#[test]
fn betti_of_local_cohomology_cusp() {
    let (_, q, _, _, _) = cases().remove(0);
    let p2 = localcohom::presentation_prop2(&q, 1);
    let m = resolution::minimal_filtered_resolution(&p2.rows, &p2.target, OrderSpec::f(), 2).unwrap();
    let b = resolution::betti(&m.complex).unwrap();
    assert_eq!((b.get(0, 0), b.get(1, 0), b.get(1, 1)), (1, 1, 2));
}

fn weyl_op() -> impl Strategy<Value = Operator> {
    let s = Signature::weyl(2, 0);
    let term = (proptest::collection::vec(0usize..4, 0..=3), -3i64..=3);
    proptest::collection::vec(term, 1..=3).prop_map(move |terms| {
        terms.into_iter().fold(Operator::zero(&s), |acc, (vars, c)| {
            let m = vars.iter().fold(Operator::one(&s), |m, &v| {
                let g = if v < 2 { Operator::x(&s, v) } else { Operator::dx(&s, v - 2) };
                &m * &g
            });
            &acc + &m.scale(&int(c))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_respects_products(p in weyl_op(), q in weyl_op(), k in 1u32..=2, modulo in any::<bool>()) {
        let f = poly(2, &[&[2, 0], &[0, 3]]);
        let g = LaurentElement::new(&f, &Operator::x(f.signature(), 1), k, modulo).unwrap();
        let lhs = act(&(&p * &q), &g).unwrap();
        let rhs = act(&p, &act(&q, &g).unwrap()).unwrap();
        prop_assert!(lhs.add(&rhs.scale(&-Rat::from_integer(1.into()))).is_zero());
    }
}
