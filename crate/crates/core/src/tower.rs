//! Towers GF(q) ⊂ GF(q)(x_1) ⊂ … ⊂ GF(q)(x_1,…,x_r).
//!
//! An element at depth `d ≥ 1` is a reduced fraction `num/den` of
//! polynomials in the top variable `x_d` whose coefficients are elements at
//! depth `d-1`; `den` is monic and coprime to `num`. This normal form is
//! unique, so structural equality is field equality.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::upoly::{self as up, Field, Poly};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Elem {
    /// An element of the constant field.
    C(u32),
    /// A fraction over the next lower level.
    R(Arc<Rat>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rat {
    pub num: Poly<Elem>,
    pub den: Poly<Elem>,
}

/// A field GF(p^m)(x_1,…,x_d).
#[derive(Clone)]
pub struct Tower {
    gf: Gf,
    gen: Arc<str>,
    vars: Arc<Vec<String>>,
    depth: usize,
}

impl PartialEq for Tower {
    fn eq(&self, o: &Self) -> bool {
        self.gf == o.gf && self.depth == o.depth && self.vars[..self.depth] == o.vars[..o.depth]
    }
}
impl Eq for Tower {}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gf.m() == 1 {
            write!(f, "GF({})", self.gf.p())?;
        } else {
            write!(f, "GF({}^{})[{}]", self.gf.p(), self.gf.m(), self.gen)?;
        }
        if self.depth > 0 {
            write!(f, "({})", self.vars[..self.depth].join(","))?;
        }
        Ok(())
    }
}

impl Tower {
    pub fn new(gf: Gf, vars: &[&str]) -> Result<Tower> {
        Tower::with_generator(gf, "g", vars)
    }

    pub fn with_generator(gf: Gf, gen: &str, vars: &[&str]) -> Result<Tower> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) || *v == gen {
                return Err(Error::InvalidField(format!("duplicate name {v}")));
            }
        }
        Ok(Tower {
            gf,
            gen: gen.into(),
            vars: Arc::new(vars.iter().map(|s| s.to_string()).collect()),
            depth: vars.len(),
        })
    }

    /// GF(p^m)(vars) with the pinned modulus.
    pub fn gf_vars(p: u32, m: u32, vars: &[&str]) -> Result<Tower> {
        Tower::new(Gf::new(p, m)?, vars)
    }

    pub fn gf(&self) -> &Gf {
        &self.gf
    }
    pub fn p(&self) -> u32 {
        self.gf.p()
    }
    pub fn depth(&self) -> usize {
        self.depth
    }
    pub fn generator_name(&self) -> &str {
        &self.gen
    }
    pub fn var_names(&self) -> &[String] {
        &self.vars[..self.depth]
    }
    pub fn is_finite(&self) -> bool {
        self.depth == 0
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names().iter().position(|v| v == name)
    }

    /// The tower with the top variable removed.
    pub fn base(&self) -> Tower {
        assert!(self.depth > 0, "finite field has no base");
        Tower { depth: self.depth - 1, ..self.clone() }
    }

    /// The tower truncated to `d` variables.
    pub fn truncate(&self, d: usize) -> Tower {
        assert!(d <= self.depth);
        Tower { depth: d, ..self.clone() }
    }

    /// The same variables over another constant field.
    pub fn with_constants(&self, gf: Gf) -> Tower {
        Tower { gf, ..self.clone() }
    }

    /// Adds a new top variable.
    pub fn extend(&self, name: &str) -> Result<Tower> {
        let mut names: Vec<&str> = self.var_names().iter().map(|s| s.as_str()).collect();
        names.push(name);
        Tower::with_generator(self.gf.clone(), &self.gen, &names)
    }

    pub fn top_name(&self) -> &str {
        &self.vars[self.depth - 1]
    }

    fn rat<'a>(&self, e: &'a Elem) -> &'a Rat {
        match e {
            Elem::R(r) => r,
            Elem::C(_) => panic!("constant-field element used at depth {}", self.depth),
        }
    }

    /// Numerator and denominator in the top variable.
    pub fn num_den<'a>(&self, e: &'a Elem) -> (&'a [Elem], &'a [Elem]) {
        let r = self.rat(e);
        (&r.num, &r.den)
    }

    /// Builds `num/den` over the base and normalizes.
    pub fn frac(&self, num: Poly<Elem>, den: Poly<Elem>) -> Result<Elem> {
        let b = self.base();
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(self.zero());
        }
        let g = up::gcd(&b, &num, &den);
        let (num, den) = if g.len() > 1 {
            (up::div_exact(&b, &num, &g), up::div_exact(&b, &den, &g))
        } else {
            (num, den)
        };
        let l = b.inv(den.last().unwrap()).unwrap();
        let (num, den) = if b.is_one(&l) {
            (num, den)
        } else {
            (up::scale(&b, &num, &l), up::scale(&b, &den, &l))
        };
        Ok(Elem::R(Arc::new(Rat { num, den })))
    }

    /// A polynomial in the top variable.
    pub fn from_poly(&self, num: Poly<Elem>) -> Elem {
        let b = self.base();
        let num = up::trim(&b, num);
        Elem::R(Arc::new(Rat { num, den: vec![b.one()] }))
    }

    /// Embeds an element of the base as a constant in the top variable.
    pub fn lift(&self, e: Elem) -> Elem {
        let b = self.base();
        self.from_poly(up::constant(&b, e))
    }

    /// Embeds an element of `self.truncate(from)`.
    pub fn lift_from(&self, e: Elem, from: usize) -> Elem {
        (from..self.depth).fold(e, |acc, d| self.truncate(d + 1).lift(acc))
    }

    pub fn from_gf(&self, c: u32) -> Elem {
        self.lift_from(Elem::C(c), 0)
    }

    /// The variable `x_i` (0-based).
    pub fn var(&self, i: usize) -> Elem {
        assert!(i < self.depth);
        let t = self.truncate(i + 1);
        let b = t.base();
        let x = t.from_poly(vec![b.zero(), b.one()]);
        self.lift_from(x, i + 1)
    }

    pub fn var_named(&self, name: &str) -> Option<Elem> {
        self.var_index(name).map(|i| self.var(i))
    }

    /// The top variable.
    pub fn t(&self) -> Elem {
        self.var(self.depth - 1)
    }

    /// Whether `e` does not involve the top variable.
    pub fn is_base(&self, e: &Elem) -> bool {
        let (n, d) = self.num_den(e);
        n.len() <= 1 && d.len() == 1
    }

    pub fn to_base(&self, e: &Elem) -> Option<Elem> {
        self.is_base(e).then(|| {
            let (n, _) = self.num_den(e);
            n.first().cloned().unwrap_or_else(|| self.base().zero())
        })
    }

    /// Constant-field value if `e` lies in GF(q).
    pub fn to_gf(&self, e: &Elem) -> Option<u32> {
        let mut cur = e.clone();
        for d in (1..=self.depth).rev() {
            cur = self.truncate(d).to_base(&cur)?;
        }
        match cur {
            Elem::C(c) => Some(c),
            Elem::R(_) => unreachable!(),
        }
    }

    /// Whether `e` is a polynomial in all variables.
    pub fn is_polynomial(&self, e: &Elem) -> bool {
        if self.depth == 0 {
            return true;
        }
        let (n, d) = self.num_den(e);
        let b = self.base();
        d.len() == 1 && n.iter().all(|c| b.is_polynomial(c))
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, e: &Elem, i: usize) -> Elem {
        assert!(i < self.depth);
        let b = self.base();
        let (n, d) = self.num_den(e);
        let top = i == self.depth - 1;
        let diff = |a: &[Elem]| -> Poly<Elem> {
            if top {
                up::derivative(&b, a)
            } else {
                up::trim(&b, a.iter().map(|c| b.partial(c, i)).collect())
            }
        };
        let dn = diff(n);
        if d.len() == 1 {
            return self.frac(dn, d.to_vec()).unwrap();
        }
        let dd = diff(d);
        let num = up::sub(&b, &up::mul(&b, &dn, d), &up::mul(&b, n, &dd));
        self.frac(num, up::mul(&b, d, d)).unwrap()
    }

    /// The p-th power map.
    pub fn frobenius(&self, e: &Elem) -> Elem {
        if self.depth == 0 {
            return match e {
                Elem::C(c) => Elem::C(self.gf.frobenius(*c)),
                Elem::R(_) => unreachable!(),
            };
        }
        let b = self.base();
        let p = self.p() as usize;
        let spread = |a: &[Elem]| -> Poly<Elem> {
            let mut v = vec![b.zero(); (a.len().max(1) - 1) * p + 1];
            for (k, c) in a.iter().enumerate() {
                v[k * p] = b.frobenius(c);
            }
            up::trim(&b, v)
        };
        let (n, d) = self.num_den(e);
        Elem::R(Arc::new(Rat { num: spread(n), den: spread(d) }))
    }

    /// The unique `g` with `g^p = e`, if any.
    pub fn pth_root(&self, e: &Elem) -> Option<Elem> {
        if self.depth == 0 {
            return match e {
                Elem::C(c) => Some(Elem::C(self.gf.pth_root(*c))),
                Elem::R(_) => unreachable!(),
            };
        }
        let b = self.base();
        let p = self.p() as usize;
        let shrink = |a: &[Elem]| -> Option<Poly<Elem>> {
            let mut v = Vec::new();
            for (k, c) in a.iter().enumerate() {
                if k % p == 0 {
                    v.push(b.pth_root(c)?);
                } else if !b.is_zero(c) {
                    return None;
                }
            }
            Some(up::trim(&b, v))
        };
        let (n, d) = self.num_den(e);
        Some(Elem::R(Arc::new(Rat { num: shrink(n)?, den: shrink(d)? })))
    }

    /// Substitutes `s` for the top variable.
    pub fn compose_top(&self, e: &Elem, s: &Elem) -> Result<Elem> {
        let (n, d) = self.num_den(e);
        let ev = |a: &[Elem]| {
            a.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, s), &self.lift(c.clone())))
        };
        self.div(&ev(n), &ev(d)).ok_or(Error::DivisionByZero)
    }

    /// Applies `x_i ↦ subs[i]` for every variable (an endomorphism of the tower).
    pub fn substitute(&self, e: &Elem, subs: &[Elem]) -> Result<Elem> {
        self.substitute_into(e, self, subs)
    }

    /// Image of `e` in `target` under `x_i ↦ subs[i]` (constants kept).
    pub fn substitute_into(&self, e: &Elem, target: &Tower, subs: &[Elem]) -> Result<Elem> {
        if self.depth == 0 {
            let Elem::C(c) = e else { unreachable!() };
            return Ok(target.from_gf(*c));
        }
        let b = self.base();
        let (n, d) = self.num_den(e);
        let v = &subs[self.depth - 1];
        let ev = |a: &[Elem]| -> Result<Elem> {
            let mut acc = target.zero();
            for c in a.iter().rev() {
                let c = b.substitute_into(c, target, subs)?;
                acc = target.add(&target.mul(&acc, v), &c);
            }
            Ok(acc)
        };
        let num = ev(n)?;
        let den = ev(d)?;
        target.div(&num, &den).ok_or(Error::DivisionByZero)
    }

    /// Rebuilds `e` in `target` (same variables) with constants mapped by `f`.
    ///
    /// `f` must be a field embedding for the result to stay normalized.
    pub fn map_constants(&self, e: &Elem, target: &Tower, f: &dyn Fn(u32) -> u32) -> Elem {
        match e {
            Elem::C(c) => Elem::C(f(*c)),
            Elem::R(r) => {
                let b = self.base();
                let tb = target.base();
                let num = r.num.iter().map(|c| b.map_constants(c, &tb, f)).collect();
                let den = r.den.iter().map(|c| b.map_constants(c, &tb, f)).collect();
                Elem::R(Arc::new(Rat { num, den }))
            }
        }
    }

    /// Value at `t = a` for `a` in the base, or `None` at a pole.
    pub fn eval_top(&self, e: &Elem, a: &Elem) -> Option<Elem> {
        let b = self.base();
        let (n, d) = self.num_den(e);
        b.div(&up::eval(&b, n, a), &up::eval(&b, d, a))
    }

    /// Total degree bound: max over variables of numerator/denominator degrees.
    pub fn degree_bound(&self, e: &Elem) -> usize {
        if self.depth == 0 {
            return 0;
        }
        let b = self.base();
        let (n, d) = self.num_den(e);
        let here = (n.len().max(1) - 1).max(d.len() - 1);
        let below = n.iter().chain(d).map(|c| b.degree_bound(c)).max().unwrap_or(0);
        here.max(below)
    }

    /// Integer power, negative exponents allowed.
    pub fn powi(&self, e: &Elem, k: i64) -> Result<Elem> {
        let x = self.pow(e, k.unsigned_abs());
        if k < 0 {
            self.inv(&x).ok_or(Error::DivisionByZero)
        } else {
            Ok(x)
        }
    }

    pub fn sum<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Elem {
        it.into_iter().fold(self.zero(), |a, b| self.add(&a, b))
    }

    pub fn product<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Elem {
        it.into_iter().fold(self.one(), |a, b| self.mul(&a, b))
    }

    /// `e^p - e`.
    pub fn wp(&self, e: &Elem) -> Elem {
        self.sub(&self.frobenius(e), e)
    }

    pub fn format(&self, e: &Elem) -> String {
        if self.depth == 0 {
            return match e {
                Elem::C(c) => self.gf.format(*c, &self.gen),
                Elem::R(_) => unreachable!(),
            };
        }
        let (n, d) = self.num_den(e);
        let ns = self.format_poly(n);
        if d.len() == 1 {
            return ns;
        }
        let ds = self.format_poly(d);
        format!("{}/{}", wrap(&ns), wrap(&ds))
    }

    fn format_poly(&self, a: &[Elem]) -> String {
        let b = self.base();
        let t = self.top_name();
        let mut parts = Vec::new();
        for (k, c) in a.iter().enumerate().rev() {
            if b.is_zero(c) {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => t.to_string(),
                _ => format!("{t}^{k}"),
            };
            let cs = b.format(c);
            parts.push(if mono.is_empty() {
                cs
            } else if b.is_one(c) {
                mono
            } else {
                format!("{}*{mono}", wrap(&cs))
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

fn wrap(s: &str) -> String {
    if s.contains(['+', '/', '-']) {
        format!("({s})")
    } else {
        s.to_string()
    }
}

impl Field for Tower {
    type E = Elem;

    fn zero(&self) -> Elem {
        if self.depth == 0 {
            Elem::C(0)
        } else {
            Elem::R(Arc::new(Rat { num: vec![], den: vec![self.base().one()] }))
        }
    }

    fn one(&self) -> Elem {
        if self.depth == 0 {
            Elem::C(1)
        } else {
            let o = self.base().one();
            Elem::R(Arc::new(Rat { num: vec![o.clone()], den: vec![o] }))
        }
    }

    fn add(&self, a: &Elem, c: &Elem) -> Elem {
        if self.depth == 0 {
            return match (a, c) {
                (Elem::C(x), Elem::C(y)) => Elem::C(self.gf.add(*x, *y)),
                _ => unreachable!(),
            };
        }
        let b = self.base();
        let (an, ad) = self.num_den(a);
        let (cn, cd) = self.num_den(c);
        if an.is_empty() {
            return c.clone();
        }
        if cn.is_empty() {
            return a.clone();
        }
        if ad == cd {
            if ad.len() == 1 {
                return self.from_poly(up::add(&b, an, cn));
            }
            return self.frac(up::add(&b, an, cn), ad.to_vec()).unwrap();
        }
        let g = up::gcd(&b, ad, cd);
        let (ad_g, cd_g) = if g.len() > 1 {
            (up::div_exact(&b, ad, &g), up::div_exact(&b, cd, &g))
        } else {
            (ad.to_vec(), cd.to_vec())
        };
        let num = up::add(&b, &up::mul(&b, an, &cd_g), &up::mul(&b, cn, &ad_g));
        let den = up::mul(&b, ad, &cd_g);
        if g.len() == 1 {
            // coprime denominators give a reduced sum up to units
            if num.is_empty() {
                return self.zero();
            }
            return Elem::R(Arc::new(Rat { num, den }));
        }
        self.frac(num, den).unwrap()
    }

    fn neg(&self, a: &Elem) -> Elem {
        if self.depth == 0 {
            return match a {
                Elem::C(x) => Elem::C(self.gf.neg(*x)),
                _ => unreachable!(),
            };
        }
        if self.p() == 2 {
            return a.clone();
        }
        let b = self.base();
        let (n, d) = self.num_den(a);
        Elem::R(Arc::new(Rat { num: up::neg(&b, n), den: d.to_vec() }))
    }

    fn mul(&self, a: &Elem, c: &Elem) -> Elem {
        if self.depth == 0 {
            return match (a, c) {
                (Elem::C(x), Elem::C(y)) => Elem::C(self.gf.mul(*x, *y)),
                _ => unreachable!(),
            };
        }
        let b = self.base();
        let (an, ad) = self.num_den(a);
        let (cn, cd) = self.num_den(c);
        if an.is_empty() || cn.is_empty() {
            return self.zero();
        }
        if ad.len() == 1 && cd.len() == 1 {
            return self.from_poly(up::mul(&b, an, cn));
        }
        let cut = |x: &[Elem], y: &[Elem]| -> (Poly<Elem>, Poly<Elem>) {
            if x.len() == 1 || y.len() == 1 {
                return (x.to_vec(), y.to_vec());
            }
            let g = up::gcd(&b, x, y);
            if g.len() == 1 {
                (x.to_vec(), y.to_vec())
            } else {
                (up::div_exact(&b, x, &g), up::div_exact(&b, y, &g))
            }
        };
        let (an2, cd2) = cut(an, cd);
        let (cn2, ad2) = cut(cn, ad);
        let num = up::mul(&b, &an2, &cn2);
        let den = up::mul(&b, &ad2, &cd2);
        let l = den.last().unwrap().clone();
        if b.is_one(&l) {
            Elem::R(Arc::new(Rat { num, den }))
        } else {
            let li = b.inv(&l).unwrap();
            Elem::R(Arc::new(Rat { num: up::scale(&b, &num, &li), den: up::scale(&b, &den, &li) }))
        }
    }

    fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.depth == 0 {
            return match a {
                Elem::C(x) => self.gf.inv(*x).map(Elem::C),
                _ => unreachable!(),
            };
        }
        let b = self.base();
        let (n, d) = self.num_den(a);
        let l = b.inv(n.last()?)?;
        Some(Elem::R(Arc::new(Rat { num: up::scale(&b, d, &l), den: up::scale(&b, n, &l) })))
    }

    fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::C(x) => *x == 0,
            Elem::R(r) => r.num.is_empty(),
        }
    }

    fn characteristic(&self) -> u32 {
        self.p()
    }

    fn from_int(&self, n: i64) -> Elem {
        self.from_gf(self.gf.from_int(n))
    }
}

/// An element together with the field it lives in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldElement {
    pub field: Tower,
    pub value: Elem,
}

/// Arithmetic operation selector for [`gf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Div,
    /// Power by the integer value of the second operand's constant.
    Pow(i64),
    Frobenius,
}

/// Checked arithmetic between elements of one tower.
pub fn gf_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let f = &a.field;
    let value = match op {
        ArithOp::Add => f.add(&a.value, &b.value),
        ArithOp::Mul => f.mul(&a.value, &b.value),
        ArithOp::Div => f.div(&a.value, &b.value).ok_or(Error::DivisionByZero)?,
        ArithOp::Pow(k) => f.powi(&a.value, k)?,
        ArithOp::Frobenius => f.frobenius(&a.value),
    };
    Ok(FieldElement { field: f.clone(), value })
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2xt() -> Tower {
        Tower::gf_vars(2, 1, &["x", "t"]).unwrap()
    }

    #[test]
    fn field_axioms_on_samples() {
        let k = gf2xt();
        let x = k.var(0);
        let t = k.var(1);
        let one = k.one();
        let a = k.div(&k.add(&x, &t), &k.add(&k.mul(&x, &t), &one)).unwrap();
        let b = k.div(&k.mul(&x, &x), &k.add(&t, &x)).unwrap();
        assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), one);
        assert_eq!(k.sub(&k.add(&a, &b), &b), a);
        let lhs = k.mul(&a, &k.add(&b, &x));
        let rhs = k.add(&k.mul(&a, &b), &k.mul(&a, &x));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_of_variable() {
        let k = Tower::gf_vars(2, 1, &["x"]).unwrap();
        let x = k.var(0);
        assert_eq!(k.frobenius(&x), k.mul(&x, &x));
        assert_eq!(k.pth_root(&k.mul(&x, &x)), Some(x.clone()));
        assert_eq!(k.pth_root(&x), None);
    }

    #[test]
    fn partials_obey_quotient_rule() {
        let k = Tower::gf_vars(3, 1, &["x", "y"]).unwrap();
        let x = k.var(0);
        let y = k.var(1);
        let f = k.div(&k.mul(&x, &y), &k.add(&x, &k.one())).unwrap();
        // d/dx (xy/(x+1)) = y/(x+1)^2
        let xp1 = k.add(&x, &k.one());
        assert_eq!(k.partial(&f, 0), k.div(&y, &k.mul(&xp1, &xp1)).unwrap());
        assert_eq!(k.partial(&f, 1), k.div(&x, &xp1).unwrap());
    }

    #[test]
    fn checked_arith_errors() {
        let k = gf2xt();
        let k2 = Tower::gf_vars(2, 1, &["x"]).unwrap();
        let a = FieldElement { field: k.clone(), value: k.var(0) };
        let z = FieldElement { field: k.clone(), value: k.zero() };
        let other = FieldElement { field: k2.clone(), value: k2.var(0) };
        assert_eq!(gf_arith(&a, &z, ArithOp::Div), Err(Error::DivisionByZero));
        assert_eq!(gf_arith(&a, &other, ArithOp::Add), Err(Error::FieldMismatch));
        assert_eq!(gf_arith(&a, &z, ArithOp::Add).unwrap().value, a.value);
    }
}
