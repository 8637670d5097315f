use dfilt::localcohom::{self, QuasiHomogeneousInput};
use dfilt::resolution::{self, FreeComplex};
use dfilt::restriction;
use dfilt::weyl::rat;
use dfilt::{ModuleElement, OrderKind, OrderSpec, Operator, PositionStrategy, ShiftedFreeModule, Signature};

fn cusp() -> QuasiHomogeneousInput {
    let s = Signature::commutative(2, 0);
    let f = &Operator::x(&s, 0).pow(2) + &Operator::x(&s, 1).pow(3);
    QuasiHomogeneousInput::new(&f, vec![rat(1, 2), rat(1, 3)]).unwrap()
}

#[test]
fn koszul_has_no_positive_homology() {
    for p in [1, 2] {
        let k = restriction::koszul_complex(&Signature::weyl(1, p)).unwrap();
        assert_eq!(k.ranks(), if p == 1 { vec![1, 1] } else { vec![1, 2, 1] });
        k.check_composition().unwrap();
        for i in 1..=p {
            assert!(resolution::homology_vanishes(&k, i).unwrap(), "p = {p}, i = {i}");
        }
    }
}

#[test]
fn betti_numbers_do_not_depend_on_the_order() {
    let p2 = localcohom::presentation_prop2(&cusp(), 1);
    let top = OrderSpec::new(OrderKind::F, PositionStrategy::Top);
    let a = resolution::minimal_filtered_resolution(&p2.rows, &p2.target, top, 2).unwrap();
    // Swapping x1 and x2 changes the tie-breaking of the term order.
    let swapped: Vec<ModuleElement> = p2.rows.iter().map(|r| r.map_ops(&p2.sig, |o| o.permute_x(&[1, 0]))).collect();
    let pot = OrderSpec::new(OrderKind::F, PositionStrategy::Pot);
    let b = resolution::minimal_filtered_resolution(&swapped, &p2.target, pot, 2).unwrap();
    let (ba, bb) = (resolution::betti(&a.complex).unwrap(), resolution::betti(&b.complex).unwrap());
    assert_eq!(ba, bb);
    assert_eq!((ba.get(0, 0), ba.get(1, 0), ba.get(1, 1)), (1, 1, 2));
}

#[test]
fn resolutions_are_complexes_adapted_to_their_filtrations() {
    let p2 = localcohom::presentation_prop2(&cusp(), 1);
    let h = p2.sig.with_kind(dfilt::AlgebraKind::Homogenized);
    let rows: Vec<ModuleElement> = p2
        .rows
        .iter()
        .map(|r| dfilt::filtration::homogenize(&r.with_kind(dfilt::AlgebraKind::Homogenized), &p2.target).unwrap())
        .collect();
    let c = resolution::free_resolution(&h, &rows, &p2.target, OrderSpec::f(), 3).unwrap();
    c.check_composition().unwrap();
    assert!(c.is_adapted().unwrap());
    let m = resolution::minimalize(&c).unwrap();
    assert!(m.complex.is_minimal());
    assert!(m.verify_cokernel(&c).unwrap());
}

#[test]
fn complexes_round_trip_through_homogenization() {
    let s = Signature::weyl(1, 0);
    let x = Operator::x(&s, 0);
    let d = Operator::dx(&s, 0);
    let c = FreeComplex::new(
        &s,
        vec![ShiftedFreeModule::free(1), ShiftedFreeModule::with_f_shifts(vec![1])],
        vec![vec![ModuleElement::new(&s, vec![&(&x * &d) + &Operator::one(&s)])]],
    )
    .unwrap();
    assert_eq!(c.homogenize().unwrap().dehomogenize(), c);
}
