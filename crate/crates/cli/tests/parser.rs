use dfilt::weyl::rat;
use dfilt::{AlgebraKind, MonomialKey, Operator, Signature};
use dfilt_cli::parse::{parse_elements, parse_operator, parse_univariate};
use proptest::prelude::*;

fn operator() -> impl Strategy<Value = Operator> {
    (1usize..=3, 0usize..=2, prop_oneof![Just(AlgebraKind::Weyl), Just(AlgebraKind::Homogenized), Just(AlgebraKind::Commutative)])
        .prop_flat_map(|(n, p, kind)| {
            let sig = Signature::new(n, p, kind).unwrap();
            let width = sig.width();
            let term = (proptest::collection::vec(0u16..=3, width), -40i64..=40, 1i64..=7);
            proptest::collection::vec(term, 0..=5).prop_map(move |ts| {
                Operator::from_terms(&sig, ts.into_iter().map(|(e, a, b)| (MonomialKey::from_exponents(&e), rat(a, b))))
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn render_parse_round_trip(op in operator()) {
        let text = op.to_string();
        let back = parse_operator(&text, op.signature()).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, op);
    }
}

#[test]
fn vectors_and_polynomials() {
    let s = Signature::weyl(1, 1);
    let els = parse_elements("[t, 1]; [dt*t, -x1]", &s).unwrap();
    assert_eq!(els[1].coords[0].to_string(), "t*dt + 1");
    assert!(parse_elements("[t, 1]; t", &s).is_err());
    assert_eq!(parse_univariate("(s+1)^2*(s+2)").unwrap().to_string(), "(s+1)^2(s+2)");
}
