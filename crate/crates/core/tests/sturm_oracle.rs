#[path = "support/descartes.rs"]
mod descartes;

use descartes::{compare, mul, oracle, q, End};

#[test]
fn sturm_agrees_with_descartes_bisection() {
    let cases = 1500;
    let (agree, with_roots, first) = compare(0x5eed, cases);
    assert_eq!(first, None);
    assert_eq!(agree, cases);
    assert!(with_roots > cases / 4);
}

#[test]
fn oracle_sanity() {
    // (x − 1)(x − 2)(x + 3)
    let p = mul(
        &mul(&[q(-1, 1), q(1, 1)], &[q(-2, 1), q(1, 1)]),
        &[q(3, 1), q(1, 1)],
    );
    assert_eq!(oracle(&p, &End::NegInf, &End::PosInf), 3);
    assert_eq!(oracle(&p, &End::At(q(1, 1)), &End::At(q(2, 1))), 1);
    assert_eq!(oracle(&p, &End::At(q(0, 1)), &End::At(q(1, 1))), 1);
    assert_eq!(oracle(&mul(&p, &p), &End::NegInf, &End::PosInf), 3);
}
