// Characteristic 2 quadratic forms: Arf, discriminant, Clifford invariant,
// moves and isometry certificates.

use modpcoh::cohomology::is_zero_global;
use modpcoh::parse;
use modpcoh::quadform::{arf, cancellation_pair, is_isomorphic, revoy_move, ChainSearch, Iso, Move, QuadForm};
use modpcoh::upoly::Field;

pub fn run_example() {
    let f2 = parse::field("GF(2)").unwrap();
    for s in ["qf([0,0],[0,0])", "qf([1,1],[0,0])", "qf([1,1],[1,1])"] {
        let q = QuadForm::parse(&f2, s).unwrap();
        println!("{q}: Arf {}", arf(&q).unwrap());
    }

    let f4 = parse::field("GF(4)[w]").unwrap();
    let (a, b) = (parse::element(&f4, "w").unwrap(), parse::element(&f4, "w+1").unwrap());
    let (l, r) = cancellation_pair(&f4, &a, &b).unwrap();
    match is_isomorphic(&l, &r, &ChainSearch::default_for(&f4)).unwrap() {
        Iso::Yes(c) => println!("{l} ~ {r}: {c:?}"),
        other => panic!("expected an isometry, got {other:?}"),
    }

    let k = parse::field("GF(2)(x)").unwrap();
    let q = QuadForm::parse(&k, "qf([x, 1/x], [1, x+1])").unwrap();
    let moved = revoy_move(&q, &Move::C(0, k.one())).unwrap();
    println!("{q}  --C(0,1)-->  {moved}");
    println!("disc {} / {}", k.format(&q.disc_value().unwrap()), k.format(&moved.disc_value().unwrap()));
    let diff = modpcoh::cohomology::CohClass::additive(q.clifford().rep.sub(&moved.clifford().rep));
    println!("clifford difference: {}", is_zero_global(&diff));
    assert!(is_zero_global(&diff).is_zero());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
