//! Random elements of towers, for property tests and verification suites.

use rand::Rng;

use crate::tower::{Elem, Tower};
use crate::upoly::{self as up, Field};

/// A random polynomial with every partial degree at most `deg`.
pub fn poly<R: Rng>(k: &Tower, rng: &mut R, deg: usize) -> Elem {
    if k.depth() == 0 {
        return Elem::C(rng.gen_range(0..k.gf().q()));
    }
    let b = k.base();
    let n = rng.gen_range(0..=deg);
    let coeffs = (0..=n).map(|_| if rng.gen_bool(0.6) { poly(&b, rng, deg) } else { b.zero() }).collect();
    k.from_poly(coeffs)
}

pub fn nonzero_poly<R: Rng>(k: &Tower, rng: &mut R, deg: usize) -> Elem {
    loop {
        let e = poly(k, rng, deg);
        if !k.is_zero(&e) {
            return e;
        }
    }
}

/// A random rational function with numerator and denominator degrees at most `deg`.
pub fn rational<R: Rng>(k: &Tower, rng: &mut R, deg: usize) -> Elem {
    let n = poly(k, rng, deg);
    if rng.gen_bool(0.5) {
        return n;
    }
    let d = nonzero_poly(k, rng, deg);
    k.div(&n, &d).unwrap()
}

pub fn nonzero_rational<R: Rng>(k: &Tower, rng: &mut R, deg: usize) -> Elem {
    loop {
        let e = rational(k, rng, deg);
        if !k.is_zero(&e) {
            return e;
        }
    }
}

/// A random monic polynomial in the top variable, of exact degree `deg`,
/// with polynomial coefficients of degree at most `cdeg`.
pub fn monic_top<R: Rng>(k: &Tower, rng: &mut R, deg: usize, cdeg: usize) -> Elem {
    let b = k.base();
    let mut coeffs: Vec<Elem> = (0..deg).map(|_| poly(&b, rng, cdeg)).collect();
    coeffs.push(b.one());
    k.from_poly(up::trim(&b, coeffs))
}

/// A random element of the constant field, viewed in `k`.
pub fn constant<R: Rng>(k: &Tower, rng: &mut R) -> Elem {
    k.from_gf(rng.gen_range(0..k.gf().q()))
}
