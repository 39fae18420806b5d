// Arithmetic in GF(p^m) and in rational function fields over it.

use modpcoh::gf::{pinned_modulus, Gf};
use modpcoh::parse;
use modpcoh::upoly::Field;

pub fn run_example() {
    let gf = Gf::new(2, 3).unwrap();
    println!("GF(8) modulus (low degree first): {:?}", pinned_modulus(2, 3).unwrap());
    let g = gf.gen();
    for i in 0..7 {
        let e = gf.exp(i);
        println!("g^{i} = {}  trace {}", gf.format(e, "g"), gf.trace(e));
    }
    assert_eq!(gf.pow(g, 7), 1);
    let r = gf.as_solve(g).map(|u| gf.format(u, "g"));
    println!("u^2 + u = g has root {r:?}");

    let k = parse::field("GF(4)[w](x,t)").unwrap();
    let a = parse::element(&k, "(x*t + w)/(t^2 + x)").unwrap();
    let b = parse::element(&k, "t - w^2").unwrap();
    let c = k.mul(&a, &b);
    println!("in {k}: ({}) * ({}) = {}", k.format(&a), k.format(&b), k.format(&c));
    assert_eq!(k.div(&c, &b).unwrap(), a);
    println!("d/dt of {} = {}", k.format(&a), k.format(&k.partial(&a, 1)));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
