// Discriminant class of an étale algebra GF(2)[X]/(f).

use modpcoh::cohomology::is_zero_global;
use modpcoh::gf::Gf;
use modpcoh::invariants::{disc_parity_oracle, etale_disc};
use modpcoh::tower::Tower;

pub fn run_example() {
    let gf = Gf::new(2, 1).unwrap();
    let k = Tower::new(gf.clone(), &[]).unwrap();
    // coefficients from the constant term up
    for f in [vec![1, 1, 1], vec![0, 1, 1], vec![1, 1, 0, 1], vec![1, 0, 0, 1], vec![1, 1, 0, 0, 1]] {
        let fe: Vec<_> = f.iter().map(|&c| k.from_gf(c)).collect();
        let zero = is_zero_global(&etale_disc(&k, &fe).unwrap()).is_zero();
        let parity = disc_parity_oracle(&gf, &f).unwrap();
        println!("f = {f:?}: class zero {zero}, factor parity matches degree {parity}");
        assert_eq!(zero, parity);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
