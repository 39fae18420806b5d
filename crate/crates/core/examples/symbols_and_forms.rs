// Symbols `[a; b1, ..., bn}` and their differential forms `a dlog b1 ^ ... ^ dlog bn`.

use modpcoh::form::{expand, exterior_d, kato_rewrite_random, milnor_rewrite_random, RewriteLevel};
use modpcoh::parse;

pub fn run_example() {
    let k = parse::field("GF(2)(x,y)").unwrap();
    let s = parse::symbol_sum(&k, "[x; x*y, y+1] + [1; x, y]").unwrap();
    let w = expand(&s);
    println!("{s}  =>  {w}");
    println!("d of it: {}", exterior_d(&w));

    // Rewrites that only use symbol relations keep the form exactly.
    let r = kato_rewrite_random(&s, 7, 5, RewriteLevel::Forms);
    assert_eq!(expand(&r), w);
    println!("rewritten: {r}");

    let m = parse::symbol_sum(&k, "{x, y} + {x+1, y}").unwrap();
    let m2 = milnor_rewrite_random(&m, 3, 4);
    assert_eq!(expand(&m), expand(&m2));
    println!("Milnor {m}  ~  {m2}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
