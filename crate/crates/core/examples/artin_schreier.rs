// Artin–Schreier normal forms: `a` modulo `{u^p - u}` in k0(t).

use modpcoh::cohomology::as_normal_form;
use modpcoh::parse;
use modpcoh::suite::splitting_search;

pub fn run_example() {
    let k = parse::field("GF(2)(t)").unwrap();
    for s in ["1/t^2", "t^2 + t", "1/(t^2+t)", "(t^4 + t + 1)/t^4", "1", "1/(t^2+1) + 1/(t+1)"] {
        let a = parse::element(&k, s).unwrap();
        let nf = as_normal_form(&k, &a).unwrap();
        let split = splitting_search(&k, &a);
        println!("{s:>22}  ->  {:<12} {}  (search: {})", k.format(&nf.rep), nf.verdict, if split { "split" } else { "no root" });
        assert_eq!(nf.verdict.is_zero(), split);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
