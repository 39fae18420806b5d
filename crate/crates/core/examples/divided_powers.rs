// Divided powers of Milnor classes in characteristic 2.

use modpcoh::form::expand;
use modpcoh::invariants::gamma;
use modpcoh::parse;

pub fn run_example() {
    let k = parse::field("GF(2)(x,y,z,w)").unwrap();
    let x = parse::symbol_sum(&k, "{x, y} + {z, w}").unwrap();
    let y = parse::symbol_sum(&k, "{x, z}").unwrap();
    for i in 0..=3 {
        println!("gamma_{i}({x}) = {}", gamma(&x, i).unwrap().rep);
    }
    // γ_2(x + y) = γ_2(x) + γ_1(x)γ_1(y) + γ_2(y)
    let lhs = expand(&gamma(&x.concat(&y), 2).unwrap().rep);
    let mut rhs = gamma(&x, 2).unwrap().rep;
    rhs = rhs.concat(&x.times_milnor(&y));
    rhs = rhs.concat(&gamma(&y, 2).unwrap().rep);
    assert_eq!(lhs, expand(&rhs));
    println!("gamma_2(x + y) as a form: {lhs}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
