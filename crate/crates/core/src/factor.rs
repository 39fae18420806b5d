//! Factorization of univariate polynomials and partial fractions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::tower::{Elem, Tower};
use crate::upoly::{self as up, Field, Poly};

pub type Factorization<E> = Vec<(Poly<E>, usize)>;

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i` and each `g_i` squarefree, pairwise coprime.
///
/// Needs p-th roots of coefficients when `f' = 0`; `pth_root` supplies them.
pub fn squarefree<F: Field>(
    f: &F,
    a: &[F::E],
    pth_root: &dyn Fn(&F::E) -> Option<F::E>,
) -> Result<Factorization<F::E>> {
    let a = up::monic(f, a);
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let p = f.characteristic() as usize;
    let mut out = Vec::new();
    let da = up::derivative(f, &a);
    let mut c = up::gcd(f, &a, &da);
    let mut w = up::div_exact(f, &a, &c);
    let mut i = 1;
    while w.len() > 1 {
        let y = up::gcd(f, &w, &c);
        let z = up::div_exact(f, &w, &y);
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        c = up::div_exact(f, &c, &y);
        w = y;
    }
    if c.len() > 1 {
        let mut root = Vec::new();
        for (k, coef) in c.iter().enumerate() {
            if k % p == 0 {
                root.push(pth_root(coef).ok_or_else(|| {
                    Error::UnsupportedCoefficientField("inseparable factor".into())
                })?);
            } else if !f.is_zero(coef) {
                unreachable!("derivative vanished on a non p-th power");
            }
        }
        for (g, j) in squarefree(f, &root, pth_root)? {
            out.push((g, j * p));
        }
    }
    out.sort_by(|x, y| (x.0.len(), &x.0, x.1).cmp(&(y.0.len(), &y.0, y.1)));
    Ok(out)
}

/// Complete factorization over GF(q) into monic irreducibles.
pub fn factor_gf(gf: &Gf, a: &[u32]) -> Result<Factorization<u32>> {
    let a = up::trim(gf, a.to_vec());
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_fac7);
    let mut out = Vec::new();
    for (g, i) in squarefree(gf, &a, &|c| Some(gf.pth_root(*c)))? {
        for (d, h) in distinct_degree(gf, &g) {
            for irr in equal_degree(gf, &h, d, &mut rng) {
                out.push((irr, i));
            }
        }
    }
    out.sort_by(|x, y| (x.0.len(), &x.0, x.1).cmp(&(y.0.len(), &y.0, y.1)));
    Ok(out)
}

fn distinct_degree(gf: &Gf, f: &[u32]) -> Vec<(usize, Poly<u32>)> {
    let q = gf.q() as u128;
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = up::x(gf);
    let mut h = x.clone();
    let mut d = 0;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.len() - 1, f));
            break;
        }
        h = up::pow_mod(gf, &h, q, &f);
        let g = up::gcd(gf, &up::sub(gf, &h, &x), &f);
        if g.len() > 1 {
            f = up::div_exact(gf, &f, &g);
            h = up::rem(gf, &h, &f);
            out.push((d, g));
        }
    }
    out
}

fn equal_degree(gf: &Gf, f: &[u32], d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<u32>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let q = gf.q() as u128;
    loop {
        let a: Poly<u32> = up::trim(gf, (0..n).map(|_| rng.gen_range(0..gf.q())).collect());
        if a.len() < 2 {
            continue;
        }
        let b = if gf.p() == 2 {
            // absolute trace map a + a^2 + ... + a^(2^(m d - 1))
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..(gf.m() as usize * d) {
                cur = up::mul_mod(gf, &cur, &cur, f);
                acc = up::add(gf, &acc, &cur);
            }
            acc
        } else {
            // a^((q^d - 1)/2) = (a^(1+q+...+q^(d-1)))^((q-1)/2)
            let mut norm = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = up::pow_mod(gf, &cur, q, f);
                norm = up::mul_mod(gf, &norm, &cur, f);
            }
            let e = up::pow_mod(gf, &norm, (q - 1) / 2, f);
            up::sub(gf, &e, &[1])
        };
        let g = up::gcd(gf, &b, f);
        if g.len() > 1 && g.len() < f.len() {
            let h = up::div_exact(gf, f, &g);
            let mut out = equal_degree(gf, &g, d, rng);
            out.extend(equal_degree(gf, &h, d, rng));
            return out;
        }
    }
}

fn to_gf_poly(k0: &Tower, a: &[Elem]) -> Option<Poly<u32>> {
    a.iter().map(|c| k0.to_gf(c)).collect()
}

fn from_gf_poly(k0: &Tower, a: &[u32]) -> Poly<Elem> {
    a.iter().map(|&c| k0.from_gf(c)).collect()
}

/// Factorization over the coefficient field `k0` into monic irreducibles.
///
/// Exact for finite `k0`, for polynomials with constant coefficients, and
/// over GF(q)(x) up to degree 3 after removing rational roots.
pub fn factor_over(k0: &Tower, a: &[Elem]) -> Result<Factorization<Elem>> {
    let a = up::trim(k0, a.to_vec());
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(c) = to_gf_poly(k0, &a) {
        return Ok(factor_gf(k0.gf(), &c)?
            .into_iter()
            .map(|(g, i)| (from_gf_poly(k0, &g), i))
            .collect());
    }
    if k0.depth() > 1 {
        return Err(Error::UnsupportedCoefficientField(format!(
            "factoring over {k0} needs a coefficient field with at most one variable"
        )));
    }
    let mut out = Vec::new();
    for (g, i) in squarefree(k0, &a, &|c| k0.pth_root(c))? {
        for h in split_rational_roots(k0, &g)? {
            out.push((h, i));
        }
    }
    out.sort_by(|x, y| (x.0.len(), &x.0, x.1).cmp(&(y.0.len(), &y.0, y.1)));
    Ok(out)
}

/// Splits a squarefree monic polynomial over GF(q)(x) into linear factors
/// and an irreducible cofactor of degree 2 or 3.
fn split_rational_roots(k0: &Tower, g: &[Elem]) -> Result<Vec<Poly<Elem>>> {
    let mut out = Vec::new();
    let mut rest = g.to_vec();
    for r in rational_roots(k0, g)? {
        let lin = vec![k0.neg(&r), k0.one()];
        rest = up::div_exact(k0, &rest, &lin);
        out.push(lin);
    }
    match rest.len() - 1 {
        0 => {}
        1 => out.push(rest),
        2 | 3 => out.push(rest),
        n => {
            return Err(Error::UnsupportedCoefficientField(format!(
                "degree {n} factor without roots over {k0}"
            )))
        }
    }
    Ok(out)
}

/// Distinct roots in GF(q)(x) of a polynomial over GF(q)(x).
pub fn rational_roots(k0: &Tower, g: &[Elem]) -> Result<Vec<Elem>> {
    assert_eq!(k0.depth(), 1);
    let gf = k0.gf().clone();
    let g = up::monic(k0, g);
    if g.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    // clear denominators to get a primitive polynomial over GF(q)[x]
    let mut l: Poly<u32> = vec![1];
    for c in &g {
        let (_, d) = k0.num_den(c);
        let d = to_gf_poly(&k0.base(), d).unwrap();
        let gg = up::gcd(&gf, &l, &d);
        l = up::mul(&gf, &l, &up::div_exact(&gf, &d, &gg));
    }
    let lift = k0.from_poly(from_gf_poly(&k0.base(), &l));
    let coeffs: Vec<Poly<u32>> = g
        .iter()
        .map(|c| {
            let e = k0.mul(c, &lift);
            to_gf_poly(&k0.base(), k0.num_den(&e).0).unwrap()
        })
        .collect();
    let lowest = coeffs.iter().position(|c| !c.is_empty()).unwrap();
    let mut roots = Vec::new();
    if lowest > 0 {
        roots.push(k0.zero());
    }
    if coeffs.len() - 1 == lowest {
        return Ok(roots);
    }
    let nums = divisors(&gf, &coeffs[lowest])?;
    let dens = divisors(&gf, coeffs.last().unwrap())?;
    let mut seen = std::collections::BTreeSet::new();
    for n in &nums {
        for d in &dens {
            if up::gcd(&gf, n, d).len() > 1 {
                continue;
            }
            for u in 1..gf.q() {
                let num = up::scale(&gf, n, &u);
                let cand = k0
                    .frac(from_gf_poly(&k0.base(), &num), from_gf_poly(&k0.base(), d))
                    .unwrap();
                if seen.contains(&cand) {
                    continue;
                }
                if k0.is_zero(&up::eval(k0, &g, &cand)) {
                    seen.insert(cand.clone());
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// All monic divisors of a nonzero polynomial over GF(q).
fn divisors(gf: &Gf, a: &[u32]) -> Result<Vec<Poly<u32>>> {
    let mut out = vec![vec![1u32]];
    for (g, e) in factor_gf(gf, a)? {
        let mut next = Vec::new();
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = up::mul(gf, &cur, &g);
                next.push(cur.clone());
            }
        }
        if next.len() > 4096 {
            return Err(Error::BudgetExceeded("too many divisors in root search".into()));
        }
        out = next;
    }
    Ok(out)
}

/// Whether a polynomial over GF(q) is irreducible, by trial division by all
/// monic polynomials of degree at most half. Intended for small inputs.
pub fn is_irreducible_brute(gf: &Gf, a: &[u32]) -> bool {
    let n = match up::deg(a) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let q = gf.q() as u64;
    for d in 1..=n / 2 {
        for code in 0..q.pow(d as u32) {
            let mut cand: Poly<u32> = (0..d).map(|i| ((code / q.pow(i as u32)) % q) as u32).collect();
            cand.push(1);
            if up::rem(gf, a, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Partial-fraction decomposition `r = poly + sum_π sum_j c_{π,j}/π^j` in
/// the top variable of a tower, with `deg c_{π,j} < deg π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub poly: Poly<Elem>,
    /// `(π, [c_1, c_2, ...])` with `c_j` the coefficient of `1/π^j`.
    pub terms: Vec<(Poly<Elem>, Vec<Poly<Elem>>)>,
}

pub fn partial_fractions(k: &Tower, r: &Elem) -> Result<PartialFractions> {
    let k0 = k.base();
    let (n, d) = k.num_den(r);
    let (poly, rem0) = up::divrem(&k0, n, d);
    let mut terms = Vec::new();
    if d.len() > 1 {
        for (pi, e) in factor_over(&k0, d)? {
            let pe = up::pow(&k0, &pi, e as u64);
            let co = up::div_exact(&k0, d, &pe);
            let inv = up::inv_mod(&k0, &co, &pe).expect("coprime cofactor");
            let ni = up::mul_mod(&k0, &rem0, &inv, &pe);
            let digits = up::adic_digits(&k0, &ni, &pi);
            let mut cs = vec![vec![]; e];
            for (kk, dgt) in digits.into_iter().enumerate() {
                cs[e - 1 - kk] = dgt;
            }
            terms.push((pi, cs));
        }
    }
    Ok(PartialFractions { poly, terms })
}

impl PartialFractions {
    pub fn recombine(&self, k: &Tower) -> Elem {
        let k0 = k.base();
        let mut acc = k.from_poly(self.poly.clone());
        for (pi, cs) in &self.terms {
            for (j, c) in cs.iter().enumerate() {
                if c.is_empty() {
                    continue;
                }
                let den = up::pow(&k0, pi, j as u64 + 1);
                acc = k.add(&acc, &k.frac(c.clone(), den).unwrap());
            }
        }
        acc
    }
}

/// A field embedding GF(q) -> GF(q^d), given by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: Gf,
    pub big: Gf,
    image: Vec<u32>,
}

impl Embedding {
    pub fn new(small: &Gf, d: u32) -> Result<Embedding> {
        let big = Gf::new(small.p(), small.m() * d)?;
        // image of g: a root of the small modulus in the big field
        let modulus: Poly<u32> = small.modulus().to_vec();
        let g_img = if small.m() == 1 {
            0
        } else {
            big.elements()
                .find(|&z| up::eval(&big, &modulus, &z) == 0)
                .expect("modulus has a root in the extension")
        };
        let image = small
            .elements()
            .map(|a| {
                small
                    .digits(a)
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, &c)| big.add(acc, big.mul(c, big.pow(g_img, i as u64))))
            })
            .collect();
        Ok(Embedding { small: small.clone(), big, image })
    }

    pub fn map(&self, a: u32) -> u32 {
        self.image[a as usize]
    }

    /// Preimage of an element lying in the subfield.
    pub fn preimage(&self, b: u32) -> Option<u32> {
        self.image.iter().position(|&x| x == b).map(|i| i as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn small_examples() {
        let gf = Gf::new(2, 1).unwrap();
        let f = factor_gf(&gf, &[0, 1, 1]).unwrap();
        assert_eq!(f, vec![(vec![0, 1], 1), (vec![1, 1], 1)]);
        assert_eq!(factor_gf(&gf, &[1, 1, 1]).unwrap(), vec![(vec![1, 1, 1], 1)]);
        assert_eq!(factor_gf(&gf, &[]), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn random_factorizations_multiply_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(p, m) in &[(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)] {
            let gf = Gf::new(p, m).unwrap();
            for _ in 0..40 {
                let n = rng.gen_range(1..=8);
                let mut a: Poly<u32> = (0..n).map(|_| rng.gen_range(0..gf.q())).collect();
                a.push(rng.gen_range(1..gf.q()));
                let fs = factor_gf(&gf, &a).unwrap();
                let mut prod = vec![*a.last().unwrap()];
                for (g, e) in &fs {
                    assert!(up::is_monic(&gf, g));
                    if g.len() <= 5 {
                        assert!(is_irreducible_brute(&gf, g));
                    }
                    prod = up::mul(&gf, &prod, &up::pow(&gf, g, *e as u64));
                }
                assert_eq!(prod, a);
            }
        }
    }

    #[test]
    fn roots_over_rational_function_field() {
        let k0 = Tower::gf_vars(2, 1, &["x"]).unwrap();
        let x = k0.var(0);
        let one = k0.one();
        // (t - x)(t - 1/(x+1)) (t^2 + t + x)
        let r2 = k0.inv(&k0.add(&x, &one)).unwrap();
        let l1 = vec![x.clone(), one.clone()];
        let l2 = vec![r2.clone(), one.clone()];
        let q = vec![x.clone(), one.clone(), one.clone()];
        let f = up::mul(&k0, &up::mul(&k0, &l1, &l2), &q);
        let fs = factor_over(&k0, &f).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().any(|(g, _)| *g == q));
    }

    #[test]
    fn partial_fractions_simple() {
        let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
        let t = k.var(0);
        let r = k.inv(&k.mul(&t, &k.add(&t, &k.one()))).unwrap();
        let pf = partial_fractions(&k, &r).unwrap();
        assert!(pf.poly.is_empty());
        assert_eq!(pf.terms.len(), 2);
        for (_, cs) in &pf.terms {
            assert_eq!(cs, &vec![vec![Elem::C(1)]]);
        }
        assert_eq!(pf.recombine(&k), r);
    }

    #[test]
    fn embedding_is_homomorphism() {
        let small = Gf::new(2, 2).unwrap();
        let e = Embedding::new(&small, 3).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.map(small.mul(a, b)), e.big.mul(e.map(a), e.map(b)));
                assert_eq!(e.map(small.add(a, b)), e.big.add(e.map(a), e.map(b)));
            }
        }
    }
}
