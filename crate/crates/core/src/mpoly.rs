//! Sparse multivariate polynomials over GF(q), converted to and from tower elements.

use std::collections::BTreeMap;

use crate::gf::Gf;
use crate::tower::{Elem, Tower};
use crate::upoly::{self as up, Field};

/// Exponent vector (one entry per tower variable) to coefficient.
pub type MPoly = BTreeMap<Vec<u32>, u32>;

pub fn add_term(gf: &Gf, a: &mut MPoly, exps: Vec<u32>, c: u32) {
    if c == 0 {
        return;
    }
    let e = a.entry(exps).or_insert(0);
    *e = gf.add(*e, c);
    if *e == 0 {
        a.retain(|_, v| *v != 0);
    }
}

pub fn add(gf: &Gf, a: &MPoly, b: &MPoly) -> MPoly {
    let mut out = a.clone();
    for (e, &c) in b {
        add_term(gf, &mut out, e.clone(), c);
    }
    out
}

pub fn mul(gf: &Gf, a: &MPoly, b: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (ea, &ca) in a {
        for (eb, &cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_term(gf, &mut out, e, gf.mul(ca, cb));
        }
    }
    out
}

pub fn pow(gf: &Gf, a: &MPoly, e: u32, nvars: usize) -> MPoly {
    let mut r = MPoly::from([(vec![0; nvars], 1)]);
    for _ in 0..e {
        r = mul(gf, &r, a);
    }
    r
}

/// Largest exponent of each variable.
pub fn degrees(a: &MPoly, nvars: usize) -> Vec<u32> {
    let mut d = vec![0; nvars];
    for e in a.keys() {
        for (x, y) in d.iter_mut().zip(e) {
            *x = (*x).max(*y);
        }
    }
    d
}

/// Sparse form of a polynomial element; `None` if `e` has a denominator.
pub fn to_mpoly(k: &Tower, e: &Elem) -> Option<MPoly> {
    if k.depth() == 0 {
        let Elem::C(c) = e else { unreachable!() };
        return Some(if *c == 0 { MPoly::new() } else { MPoly::from([(vec![], *c)]) });
    }
    let (n, d) = k.num_den(e);
    if d.len() != 1 {
        return None;
    }
    let b = k.base();
    let mut out = MPoly::new();
    for (i, c) in n.iter().enumerate() {
        for (mut ex, v) in to_mpoly(&b, c)? {
            ex.push(i as u32);
            out.insert(ex, v);
        }
    }
    Some(out)
}

pub fn from_mpoly(k: &Tower, a: &MPoly) -> Elem {
    if k.depth() == 0 {
        return Elem::C(a.get(&vec![]).copied().unwrap_or(0));
    }
    let b = k.base();
    let mut by_top: BTreeMap<u32, MPoly> = BTreeMap::new();
    for (e, &c) in a {
        let (low, top) = e.split_at(e.len() - 1);
        by_top.entry(top[0]).or_default().insert(low.to_vec(), c);
    }
    let n = by_top.keys().last().map_or(0, |&x| x as usize + 1);
    let mut coeffs = vec![b.zero(); n];
    for (t, m) in by_top {
        coeffs[t as usize] = from_mpoly(&b, &m);
    }
    k.from_poly(up::trim(&b, coeffs))
}

/// Writes `e = num/den` with polynomial `num` and `den`.
pub fn clear_denominators(k: &Tower, e: &Elem) -> (Elem, Elem) {
    if k.depth() == 0 {
        return (e.clone(), k.one());
    }
    let b = k.base();
    let (n, d) = k.num_den(e);
    // common polynomial denominator of all coefficients
    let mut l = b.one();
    for c in n.iter().chain(d) {
        let (_, cd) = clear_denominators(&b, c);
        if b.div(&l, &cd).is_some_and(|q| is_poly(&b, &q)) {
            continue;
        }
        l = b.mul(&l, &cd);
    }
    let lift = k.lift(l);
    let num = k.mul(&k.from_poly(n.to_vec()), &lift);
    let den = k.mul(&k.from_poly(d.to_vec()), &lift);
    (num, den)
}

fn is_poly(k: &Tower, e: &Elem) -> bool {
    k.is_polynomial(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let k = Tower::gf_vars(3, 2, &["x", "y", "z"]).unwrap();
        let (x, y, z) = (k.var(0), k.var(1), k.var(2));
        let e = k.add(&k.mul(&k.mul(&x, &y), &z), &k.add(&k.pow(&y, 3), &k.from_gf(5)));
        let m = to_mpoly(&k, &e).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(from_mpoly(&k, &m), e);
    }

    #[test]
    fn clears_nested_denominators() {
        let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
        let (x, t) = (k.var(0), k.var(1));
        let one = k.one();
        let e = k.div(&k.add(&t, &k.inv(&x).unwrap()), &k.add(&t, &one)).unwrap();
        let (n, d) = clear_denominators(&k, &e);
        assert!(k.is_polynomial(&n) && k.is_polynomial(&d));
        assert_eq!(k.div(&n, &d).unwrap(), e);
    }
}
