// Invariants from a spec file, and a randomized invariance check.

use modpcoh::cohomology::is_zero_global;
use modpcoh::invariants::{eval_invariant, verify_invariance, InvariantSpec, PairSource, TorsorData};
use modpcoh::quadform::QuadForm;

const SPEC: &str = "\
family = O_even
field = GF(2)(x)
arity = 1
c = [x; x+1]
e = {x}
f = {}
";

pub fn run_example() {
    let spec = InvariantSpec::parse(SPEC).unwrap();
    for s in ["qf([1,x],[0,0])", "qf([x,1/x],[1,1])"] {
        let q = QuadForm::parse(&spec.field, s).unwrap();
        let v = eval_invariant(&spec, &TorsorData::Form(q)).unwrap();
        println!("{s}: {}  ({})", v.rep, is_zero_global(&v));
    }
    let rep = verify_invariance(&spec, &PairSource::RevoyMoves { blocks: 2, odd: false }, 30, 11);
    println!("invariance under moves: {rep}");
    assert_eq!(rep.fail, 0);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
