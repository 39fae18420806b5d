// Ramification filtration, residues and zero tests over k0(t).

use modpcoh::cohomology::{filtration_level, global_decompose, is_zero_global, reciprocity_check, residue, CohClass};
use modpcoh::parse;

pub fn run_example() {
    let k = parse::field("GF(2)(x,t)").unwrap();
    for (class, place) in [("[1/t^2; x]", "t"), ("[x/t^2; t]", "t"), ("[x; t]", "t"), ("[x; t]", "inf")] {
        let c = CohClass::additive(parse::symbol_sum(&k, class).unwrap());
        let v = parse::place(&k, place).unwrap();
        let la = filtration_level(&c, &v).unwrap();
        let res = residue(&c, &v).map(|r| r.to_string()).unwrap_or_else(|e| e.to_string());
        println!("{class} at {}: level {}, residue {res}", la.place_label, la.level);
    }

    let c = CohClass::additive(parse::symbol_sum(&k, "[x; t]").unwrap());
    println!("is_zero [x; t]: {}", is_zero_global(&c));
    assert!(reciprocity_check(&c).unwrap());

    let k3 = parse::field("GF(3)(x,t)").unwrap();
    let c = CohClass::additive(parse::symbol_sum(&k3, "[x; (t-1)/(t+1)]").unwrap());
    let d = global_decompose(&c).unwrap();
    for la in &d.local {
        println!("GF(3): ramified at {} with residue {}", la.place_label, la.residue.as_ref().unwrap());
    }
    assert!(reciprocity_check(&c).unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
