//! Finite fields GF(p^m) with table-driven arithmetic.
//!
//! Elements are encoded as `u32` integers whose base-`p` digits are the
//! coefficients of the element written as a polynomial in the generator
//! `g` (the class of `x` modulo the pinned defining polynomial). The pinned
//! polynomials are primitive, so `g` generates the multiplicative group and
//! multiplication goes through discrete log / exponent tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_ORDER: u32 = 1 << 20;

pub(crate) struct GfInner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field GF(p^m) built from a pinned primitive polynomial.
#[derive(Clone)]
pub struct Gf(Arc<GfInner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus
    }
}
impl Eq for Gf {}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The pinned defining polynomial for GF(p^m), low degree first, monic.
///
/// This is the primitive polynomial whose lower coefficients
/// `c0 + c1 p + ... + c_{m-1} p^{m-1}` form the smallest integer.
pub fn pinned_modulus(p: u32, m: u32) -> Option<Vec<u32>> {
    if !is_prime(p) || m == 0 || (p as u64).checked_pow(m).is_none_or(|q| q > MAX_ORDER as u64) {
        return None;
    }
    let n = p.pow(m) as u64 - 1;
    let primes = prime_factors(n);
    let one = {
        let mut v = vec![0; m as usize];
        v[0] = 1;
        v
    };
    (1..p.pow(m)).find_map(|code| {
        let mut c: Vec<u32> = (0..m).map(|i| (code / p.pow(i)) % p).collect();
        if c[0] == 0 {
            return None;
        }
        c.push(1);
        let ok = xpow_mod(&c, p, n) == one && primes.iter().all(|&f| xpow_mod(&c, p, n / f) != one);
        ok.then_some(c)
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mulmod_poly(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut r = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x as u64 * y as u64) % p64;
            }
        }
    }
    for k in (m..r.len()).rev() {
        let c = r[k];
        if c != 0 {
            for i in 0..=m {
                let idx = k - m + i;
                r[idx] = (r[idx] + (p64 - c) * modulus[i] as u64) % p64;
            }
        }
    }
    r[..m].iter().map(|&x| x as u32).collect()
}

/// x^e modulo a monic polynomial over GF(p).
fn xpow_mod(modulus: &[u32], p: u32, mut e: u64) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut r = vec![0; m];
    r[0] = 1;
    let mut b = vec![0; m];
    if m > 1 {
        b[1] = 1;
    } else {
        b[0] = (p - modulus[0]) % p;
    }
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod_poly(&r, &b, modulus, p);
        }
        b = mulmod_poly(&b, &b, modulus, p);
        e >>= 1;
    }
    r
}

impl Gf {
    /// GF(p^m) with the pinned modulus. Instances are cached.
    pub fn new(p: u32, m: u32) -> Result<Gf> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Gf>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(p, m)) {
            return Ok(f.clone());
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let modulus = pinned_modulus(p, m).ok_or_else(|| {
            Error::InvalidField(format!("no pinned modulus for GF({p}^{m})"))
        })?;
        let f = Gf::with_modulus(p, modulus)?;
        cache.lock().unwrap().insert((p, m), f.clone());
        Ok(f)
    }

    /// GF(p^m) from an explicit monic primitive polynomial (low degree first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Gf> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let m = modulus.len() as u32 - 1;
        if m == 0 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus must be monic with digits < p".into()));
        }
        let q = (p as u64).pow(m);
        if q > MAX_ORDER as u64 {
            return Err(Error::BudgetExceeded(format!("GF({p}^{m}) exceeds table cap")));
        }
        let q = q as u32;
        let mut exp = vec![0u32; 2 * (q as usize - 1) + 1];
        let mut log = vec![u32::MAX; q as usize];
        let mut digits = vec![0u32; m as usize];
        digits[0] = 1;
        for i in 0..(q - 1) as usize {
            let v = encode(&digits, p);
            if log[v as usize] != u32::MAX {
                return Err(Error::InvalidField(format!(
                    "modulus {modulus:?} is not primitive over GF({p})"
                )));
            }
            log[v as usize] = i as u32;
            exp[i] = v;
            // multiply by the generator: shift and reduce
            let top = digits[m as usize - 1];
            for k in (1..m as usize).rev() {
                digits[k] = digits[k - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for k in 0..m as usize {
                    digits[k] = (digits[k] + (p - top) * modulus[k]) % p;
                }
            }
        }
        for i in (q - 1) as usize..exp.len() {
            exp[i] = exp[i - (q as usize - 1)];
        }
        Ok(Gf(Arc::new(GfInner { p, m, q, modulus, exp, log })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    /// Field order p^m.
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The generator `g`.
    pub fn gen(&self) -> u32 {
        if self.0.m == 1 {
            self.0.exp[1]
        } else {
            self.0.p
        }
    }

    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.0.log[a as usize] + self.0.log[b as usize];
        self.0.exp[i as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.0.log[a as usize];
        Some(self.0.exp[((self.0.q - 1 - l) % (self.0.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % (self.0.q as u64 - 1))) % (self.0.q as u64 - 1)) as usize]
    }

    /// Discrete log base `g`; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    /// The element g^i.
    pub fn exp(&self, i: u64) -> u32 {
        self.0.exp[(i % (self.0.q as u64 - 1)) as usize]
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.0.p as u64)
    }

    /// Inverse Frobenius; total since Frobenius is bijective on a finite field.
    pub fn pth_root(&self, a: u32) -> u32 {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    /// Absolute trace to GF(p), returned as an integer in `0..p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.0.m {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        debug_assert!(acc < self.0.p);
        acc
    }

    /// Base-p digits (coordinates in the basis 1, g, ..., g^{m-1}).
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.0.m)
            .map(|_| {
                let d = a % self.0.p;
                a /= self.0.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        encode(d, self.0.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }

    /// Solves x^p - x = a. A solution exists iff the absolute trace of `a` vanishes.
    pub fn as_solve(&self, a: u32) -> Option<u32> {
        if self.trace(a) != 0 {
            return None;
        }
        // x -> x^p - x is GF(p)-linear; solve on coordinates.
        let p = self.0.p;
        let m = self.0.m as usize;
        let cols: Vec<Vec<u32>> = (0..m)
            .map(|i| {
                let b = self.from_digits(&unit(m, i));
                self.digits(self.sub(self.frobenius(b), b))
            })
            .collect();
        let rows: Vec<Vec<u32>> = (0..m).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let sol = crate::linalg::solve_mod_p(p, &rows, &self.digits(a))?;
        Some(self.from_digits(&sol))
    }

    pub fn format(&self, a: u32, gen: &str) -> String {
        if self.0.m == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => gen.to_string(),
                _ => format!("{gen}^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

fn unit(m: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; m];
    v[i] = 1;
    v
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_moduli_are_primitive() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            for m in 1..=12 {
                if (p as u64).pow(m) <= 1 << 12 {
                    Gf::new(p, m).unwrap();
                }
            }
        }
        assert_eq!(pinned_modulus(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(pinned_modulus(2, 3).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(pinned_modulus(2, 4).unwrap(), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn frobenius_is_automorphism_small_fields() {
        for &(p, m) in &[(2, 1), (2, 2), (2, 3), (2, 6), (3, 1), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = Gf::new(p, m).unwrap();
            let mut seen = vec![false; f.q() as usize];
            for a in f.elements() {
                let fa = f.frobenius(a);
                assert!(!seen[fa as usize]);
                seen[fa as usize] = true;
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(fa, f.frobenius(b)));
                    assert_eq!(f.frobenius(f.mul(a, b)), f.mul(fa, f.frobenius(b)));
                }
            }
        }
    }

    #[test]
    fn as_solve_matches_exhaustive_search() {
        for &(p, m) in &[(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = Gf::new(p, m).unwrap();
            for a in f.elements() {
                let brute = f.elements().find(|&x| f.sub(f.frobenius(x), x) == a);
                match f.as_solve(a) {
                    Some(x) => {
                        assert!(brute.is_some());
                        assert_eq!(f.sub(f.frobenius(x), x), a);
                    }
                    None => assert!(brute.is_none(), "GF({p}^{m}) a={a}"),
                }
            }
        }
    }

    #[test]
    fn gf2_one_has_no_as_root() {
        let f = Gf::new(2, 1).unwrap();
        assert_eq!(f.as_solve(0), Some(0));
        assert_eq!(f.as_solve(1), None);
    }

    #[test]
    fn inverse_and_pth_root() {
        let f = Gf::new(3, 4).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.frobenius(f.pth_root(a)), a);
        }
    }
}
