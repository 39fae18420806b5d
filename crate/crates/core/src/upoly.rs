//! Dense univariate polynomials over an abstract field.
//!
//! A polynomial is a `Vec` of coefficients, lowest degree first, with no
//! trailing zeros. The zero polynomial is the empty vector.

use std::fmt::Debug;
use std::hash::Hash;

/// Field operations needed by the polynomial routines.
pub trait Field: Clone + Debug {
    type E: Clone + Eq + Hash + Ord + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn characteristic(&self) -> u32;
    /// Image of an integer under Z -> F.
    fn from_int(&self, n: i64) -> Self::E;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
    fn div(&self, a: &Self::E, b: &Self::E) -> Option<Self::E> {
        Some(self.mul(a, &self.inv(b)?))
    }
    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }
    fn pow(&self, a: &Self::E, mut e: u64) -> Self::E {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }
}

impl Field for crate::gf::Gf {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        crate::gf::Gf::add(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        crate::gf::Gf::neg(self, *a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        crate::gf::Gf::mul(self, *a, *b)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        crate::gf::Gf::inv(self, *a)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u32 {
        self.p()
    }
    fn from_int(&self, n: i64) -> u32 {
        crate::gf::Gf::from_int(self, n)
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        crate::gf::Gf::pow(self, *a, e)
    }
}

pub type Poly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, mut a: Poly<F::E>) -> Poly<F::E> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn deg<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(f: &F, c: F::E) -> Poly<F::E> {
    trim(f, vec![c])
}

pub fn monomial<F: Field>(f: &F, c: F::E, k: usize) -> Poly<F::E> {
    if f.is_zero(&c) {
        return vec![];
    }
    let mut v = vec![f.zero(); k];
    v.push(c);
    v
}

/// The polynomial `X`.
pub fn x<F: Field>(f: &F) -> Poly<F::E> {
    vec![f.zero(), f.one()]
}

pub fn add<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let v = (0..n).map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, v)
}

pub fn neg<F: Field>(f: &F, a: &[F::E]) -> Poly<F::E> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn sub<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    add(f, a, &neg(f, b))
}

pub fn scale<F: Field>(f: &F, a: &[F::E], c: &F::E) -> Poly<F::E> {
    if f.is_zero(c) {
        return vec![];
    }
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !f.is_zero(y) {
                r[i + j] = f.add(&r[i + j], &f.mul(x, y));
            }
        }
    }
    trim(f, r)
}

pub fn pow<F: Field>(f: &F, a: &[F::E], mut e: u64) -> Poly<F::E> {
    let mut r = vec![f.one()];
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = mul(f, &r, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mul(f, &b, &b);
        }
    }
    r
}

pub fn lead<F: Field>(a: &[F::E]) -> Option<&F::E> {
    a.last()
}

pub fn is_monic<F: Field>(f: &F, a: &[F::E]) -> bool {
    a.last().is_some_and(|c| f.is_one(c))
}

/// `a` divided by its leading coefficient; zero stays zero.
pub fn monic<F: Field>(f: &F, a: &[F::E]) -> Poly<F::E> {
    match a.last() {
        None => vec![],
        Some(l) => scale(f, a, &f.inv(l).expect("nonzero leading coefficient")),
    }
}

/// Quotient and remainder; panics on division by the zero polynomial.
pub fn divrem<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> (Poly<F::E>, Poly<F::E>) {
    let db = deg(b).expect("division by zero polynomial");
    let linv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        if f.is_zero(&r[k]) {
            continue;
        }
        let c = f.mul(&r[k], &linv);
        for (i, bi) in b.iter().enumerate() {
            if !f.is_zero(bi) {
                r[k - db + i] = f.sub(&r[k - db + i], &f.mul(&c, bi));
            }
        }
        q[k - db] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    divrem(f, a, b).1
}

/// Exact quotient; panics if `b` does not divide `a`.
pub fn div_exact<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    let (q, r) = divrem(f, a, b);
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn ext_gcd<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> (Poly<F::E>, Poly<F::E>, Poly<F::E>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![f.one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last().cloned() {
        None => (vec![], vec![], vec![]),
        Some(l) => {
            let li = f.inv(&l).unwrap();
            (scale(f, &r0, &li), scale(f, &s0, &li), scale(f, &t0, &li))
        }
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod<F: Field>(f: &F, a: &[F::E], m: &[F::E]) -> Option<Poly<F::E>> {
    let (g, s, _) = ext_gcd(f, a, m);
    (g.len() == 1).then(|| rem(f, &s, m))
}

pub fn derivative<F: Field>(f: &F, a: &[F::E]) -> Poly<F::E> {
    let v = a.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_int(i as i64))).collect();
    trim(f, v)
}

pub fn eval<F: Field>(f: &F, a: &[F::E], x: &F::E) -> F::E {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// `a(b(X))`.
pub fn compose<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    a.iter().rev().fold(vec![], |acc, c| add(f, &mul(f, &acc, b), &constant(f, c.clone())))
}

pub fn mul_mod<F: Field>(f: &F, a: &[F::E], b: &[F::E], m: &[F::E]) -> Poly<F::E> {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_mod<F: Field>(f: &F, a: &[F::E], mut e: u128, m: &[F::E]) -> Poly<F::E> {
    let mut r = rem(f, &[f.one()], m);
    let mut b = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(f, &r, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(f, &b, &b, m);
        }
    }
    r
}

/// Writes `a = sum_k c_k m^k` with `deg c_k < deg m`, lowest digit first.
pub fn adic_digits<F: Field>(f: &F, a: &[F::E], m: &[F::E]) -> Vec<Poly<F::E>> {
    let mut out = Vec::new();
    let mut a = a.to_vec();
    while !a.is_empty() {
        let (q, r) = divrem(f, &a, m);
        out.push(r);
        a = q;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Gf;

    #[test]
    fn ext_gcd_bezout() {
        let f = Gf::new(3, 2).unwrap();
        let a = vec![1, 2, 0, 1, 4];
        let b = vec![2, 0, 1];
        let (g, s, t) = ext_gcd(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b)), g);
        assert_eq!(gcd(&f, &a, &b), g);
    }

    #[test]
    fn divrem_reconstructs() {
        let f = Gf::new(2, 3).unwrap();
        let a = vec![3, 0, 5, 7, 1, 2];
        let b = vec![1, 6, 3];
        let (q, r) = divrem(&f, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }

    #[test]
    fn digits_recombine() {
        let f = Gf::new(2, 1).unwrap();
        let a = vec![1, 1, 0, 1, 1, 0, 1];
        let m = vec![1, 1, 1];
        let d = adic_digits(&f, &a, &m);
        let back = d.iter().rev().fold(vec![], |acc, c| add(&f, &mul(&f, &acc, &m), c));
        assert_eq!(back, a);
    }
}
