//! Kato symbols `[a; b_1, …, b_n}` and differential forms in coordinates.
//!
//! A symbol stands for the form `a · db_1/b_1 ∧ … ∧ db_n/b_n`. Forms are
//! stored in the basis `dx_I` with `I` a set of variable indices encoded as
//! a bitmask.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sample;
use crate::tower::{Elem, Tower};
use crate::upoly::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTerm {
    pub coeff: Elem,
    pub args: Vec<Elem>,
}

/// A formal sum of symbols of one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSum {
    pub field: Tower,
    pub arity: usize,
    pub terms: Vec<SymbolTerm>,
}

impl SymbolSum {
    pub fn zero(field: &Tower, arity: usize) -> SymbolSum {
        SymbolSum { field: field.clone(), arity, terms: vec![] }
    }

    pub fn single(field: &Tower, coeff: Elem, args: Vec<Elem>) -> Result<SymbolSum> {
        let mut s = SymbolSum::zero(field, args.len());
        s.push(coeff, args)?;
        Ok(s)
    }

    /// The Milnor symbol `{b_1, …, b_n}`, i.e. `[1; b_1, …, b_n}`.
    pub fn milnor(field: &Tower, args: Vec<Elem>) -> Result<SymbolSum> {
        SymbolSum::single(field, field.one(), args)
    }

    pub fn push(&mut self, coeff: Elem, args: Vec<Elem>) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::parse("symbol", format!("arity {} in a sum of arity {}", args.len(), self.arity)));
        }
        if args.iter().any(|b| self.field.is_zero(b)) {
            return Err(Error::DivisionByZero);
        }
        self.terms.push(SymbolTerm { coeff, args });
        Ok(())
    }

    pub fn concat(&self, other: &SymbolSum) -> SymbolSum {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn neg(&self) -> SymbolSum {
        let k = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|t| SymbolTerm { coeff: k.neg(&t.coeff), args: t.args.clone() })
            .collect();
        SymbolSum { terms, ..self.clone() }
    }

    pub fn sub(&self, other: &SymbolSum) -> SymbolSum {
        self.concat(&other.neg())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Elem) -> SymbolSum {
        let k = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|t| SymbolTerm { coeff: k.mul(&t.coeff, c), args: t.args.clone() })
            .collect();
        SymbolSum { terms, ..self.clone() }
    }

    /// Product with a Milnor class: `[a; b⃗} · {c⃗} = [a; b⃗, c⃗}`.
    pub fn times_milnor(&self, other: &SymbolSum) -> SymbolSum {
        let k = &self.field;
        let mut out = SymbolSum::zero(k, self.arity + other.arity);
        for s in &self.terms {
            for o in &other.terms {
                let mut args = s.args.clone();
                args.extend(o.args.iter().cloned());
                out.terms.push(SymbolTerm { coeff: k.mul(&s.coeff, &o.coeff), args });
            }
        }
        out
    }

    /// Coefficientwise Frobenius: `[a; b⃗} ↦ [a^p; b⃗}`.
    pub fn frobenius_coeffs(&self) -> SymbolSum {
        let k = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|t| SymbolTerm { coeff: k.frobenius(&t.coeff), args: t.args.clone() })
            .collect();
        SymbolSum { terms, ..self.clone() }
    }

    /// Applies a field map to every entry.
    pub fn map(&self, field: &Tower, f: &dyn Fn(&Elem) -> Result<Elem>) -> Result<SymbolSum> {
        let mut out = SymbolSum::zero(field, self.arity);
        for t in &self.terms {
            let args = t.args.iter().map(f).collect::<Result<Vec<_>>>()?;
            out.push(f(&t.coeff)?, args)?;
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for SymbolSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let k = &self.field;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let args: Vec<String> = t.args.iter().map(|b| k.format(b)).collect();
                if args.is_empty() {
                    format!("[{}]", k.format(&t.coeff))
                } else {
                    format!("[{}; {}]", k.format(&t.coeff), args.join(", "))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A differential form `sum_I f_I dx_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    pub field: Tower,
    pub degree: usize,
    pub coeffs: BTreeMap<u32, Elem>,
}

/// Sign of `dx_I ∧ dx_J` relative to `dx_{I∪J}`, or 0 if they overlap.
pub fn wedge_sign(i: u32, j: u32) -> i32 {
    if i & j != 0 {
        return 0;
    }
    let mut inversions = 0;
    for b in 0..32 {
        if j & (1 << b) != 0 {
            inversions += (i >> (b + 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Variable indices of a mask, increasing.
pub fn mask_indices(m: u32) -> Vec<usize> {
    (0..32).filter(|b| m & (1 << b) != 0).collect()
}

impl DiffForm {
    pub fn zero(field: &Tower, degree: usize) -> DiffForm {
        DiffForm { field: field.clone(), degree, coeffs: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(field: &Tower, f: Elem) -> DiffForm {
        let mut w = DiffForm::zero(field, 0);
        w.add_term(0, f);
        w
    }

    /// `f dx_I`.
    pub fn monomial(field: &Tower, mask: u32, f: Elem) -> DiffForm {
        let mut w = DiffForm::zero(field, mask.count_ones() as usize);
        w.add_term(mask, f);
        w
    }

    pub fn add_term(&mut self, mask: u32, f: Elem) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        let k = &self.field;
        if k.is_zero(&f) {
            return;
        }
        match self.coeffs.remove(&mask) {
            None => {
                self.coeffs.insert(mask, f);
            }
            Some(old) => {
                let s = k.add(&old, &f);
                if !k.is_zero(&s) {
                    self.coeffs.insert(mask, s);
                }
            }
        }
    }

    pub fn coeff(&self, mask: u32) -> Elem {
        self.coeffs.get(&mask).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &DiffForm) -> DiffForm {
        assert_eq!(self.degree, o.degree);
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffForm {
        let k = &self.field;
        DiffForm {
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, k.neg(c))).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &DiffForm) -> DiffForm {
        self.add(&o.neg())
    }

    pub fn scale(&self, f: &Elem) -> DiffForm {
        let k = &self.field;
        let mut out = DiffForm::zero(k, self.degree);
        for (m, c) in &self.coeffs {
            out.add_term(*m, k.mul(c, f));
        }
        out
    }

    pub fn wedge(&self, o: &DiffForm) -> DiffForm {
        let k = &self.field;
        let mut out = DiffForm::zero(k, self.degree + o.degree);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                let s = wedge_sign(*a, *b);
                if s == 0 {
                    continue;
                }
                let c = k.mul(ca, cb);
                out.add_term(a | b, if s < 0 { k.neg(&c) } else { c });
            }
        }
        out
    }

    /// Coefficientwise map into another tower.
    pub fn map(&self, field: &Tower, f: &dyn Fn(&Elem) -> Result<Elem>) -> Result<DiffForm> {
        let mut out = DiffForm::zero(field, self.degree);
        for (m, c) in &self.coeffs {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let k = &self.field;
        let names = k.var_names();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                let basis: Vec<String> = mask_indices(*m).iter().map(|&i| format!("d{}", names[i])).collect();
                if basis.is_empty() {
                    k.format(c)
                } else {
                    format!("({})*{}", k.format(c), basis.join("^"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `db/b` in coordinates.
pub fn dlog(k: &Tower, b: &Elem) -> DiffForm {
    let inv = k.inv(b).expect("dlog of zero");
    let mut w = DiffForm::zero(k, 1);
    for i in 0..k.depth() {
        w.add_term(1 << i, k.mul(&k.partial(b, i), &inv));
    }
    w
}

/// `df` in coordinates.
pub fn d_function(k: &Tower, f: &Elem) -> DiffForm {
    let mut w = DiffForm::zero(k, 1);
    for i in 0..k.depth() {
        w.add_term(1 << i, k.partial(f, i));
    }
    w
}

/// Coordinate expansion of a symbol sum.
pub fn expand(s: &SymbolSum) -> DiffForm {
    let k = &s.field;
    let mut out = DiffForm::zero(k, s.arity);
    for t in &s.terms {
        if k.is_zero(&t.coeff) {
            continue;
        }
        let mut w = DiffForm::function(k, t.coeff.clone());
        for b in &t.args {
            w = w.wedge(&dlog(k, b));
        }
        out = out.add(&w);
    }
    out
}

pub fn exterior_d(w: &DiffForm) -> DiffForm {
    let k = &w.field;
    let mut out = DiffForm::zero(k, w.degree + 1);
    for (m, c) in &w.coeffs {
        for i in 0..k.depth() {
            let s = wedge_sign(1 << i, *m);
            if s == 0 {
                continue;
            }
            let dc = k.partial(c, i);
            out.add_term(m | (1 << i), if s < 0 { k.neg(&dc) } else { dc });
        }
    }
    out
}

/// `[a; b⃗} ↦ [a^p - a; b⃗}` termwise.
pub fn wp_operator(s: &SymbolSum) -> SymbolSum {
    let k = &s.field;
    let terms = s
        .terms
        .iter()
        .map(|t| SymbolTerm { coeff: k.wp(&t.coeff), args: t.args.clone() })
        .collect();
    SymbolSum { terms, ..s.clone() }
}

/// Product of the variables in `mask`.
pub fn mask_monomial(k: &Tower, mask: u32) -> Elem {
    mask_indices(mask).iter().fold(k.one(), |acc, &i| k.mul(&acc, &k.var(i)))
}

/// The section `f dx_I ↦ [f·x_I; x_{i_1}, …, x_{i_n}}` of `expand`.
pub fn canonical_symbolize(w: &DiffForm) -> SymbolSum {
    let k = &w.field;
    let mut s = SymbolSum::zero(k, w.degree);
    for (m, c) in &w.coeffs {
        let args = mask_indices(*m).iter().map(|&i| k.var(i)).collect();
        s.terms.push(SymbolTerm { coeff: k.mul(c, &mask_monomial(k, *m)), args });
    }
    s
}

/// `𝒫` on a raw form through the canonical section:
/// `f dx_I ↦ (f^p x_I^{p-1} - f) dx_I`.
pub fn wp_form(w: &DiffForm) -> DiffForm {
    let k = &w.field;
    let p = k.p() as u64;
    let mut out = DiffForm::zero(k, w.degree);
    for (m, c) in &w.coeffs {
        let xi = k.pow(&mask_monomial(k, *m), p - 1);
        out.add_term(*m, k.sub(&k.mul(&k.frobenius(c), &xi), c));
    }
    out
}

/// Which relations [`kato_rewrite_random`] may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteLevel {
    /// Relations that hold among forms.
    Forms,
    /// Also `[a^p; b⃗} ≡ [a; b⃗}`, valid only modulo `𝒫`.
    Cohomology,
}

/// Applies `steps` random relation moves. With [`RewriteLevel::Forms`] the
/// expansion is unchanged.
pub fn kato_rewrite_random(s: &SymbolSum, seed: u64, steps: usize, level: RewriteLevel) -> SymbolSum {
    let k = s.field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = s.clone();
    let n = cur.arity;
    for _ in 0..steps {
        let nmoves = if level == RewriteLevel::Cohomology { 6 } else { 5 };
        let mv = rng.gen_range(0..nmoves);
        if cur.terms.is_empty() && mv != 2 && mv != 3 {
            continue;
        }
        let pick = |rng: &mut ChaCha8Rng, cur: &SymbolSum| rng.gen_range(0..cur.terms.len().max(1));
        match mv {
            // coefficient additivity
            0 => {
                let i = pick(&mut rng, &cur);
                let t = cur.terms.remove(i);
                let a1 = sample::poly(&k, &mut rng, 1);
                cur.terms.push(SymbolTerm { coeff: a1.clone(), args: t.args.clone() });
                cur.terms.push(SymbolTerm { coeff: k.sub(&t.coeff, &a1), args: t.args });
            }
            // b_i ↦ b_i c with a compensating term
            1 if n > 0 => {
                let i = pick(&mut rng, &cur);
                let j = rng.gen_range(0..n);
                let c = sample::nonzero_poly(&k, &mut rng, 1);
                let t = cur.terms.remove(i);
                let mut a1 = t.args.clone();
                a1[j] = k.mul(&a1[j], &c);
                let mut a2 = t.args.clone();
                a2[j] = c;
                cur.terms.push(SymbolTerm { coeff: t.coeff.clone(), args: a1 });
                cur.terms.push(SymbolTerm { coeff: k.neg(&t.coeff), args: a2 });
            }
            // insert a term with a repeated argument
            2 if n >= 2 => {
                let b = sample::nonzero_poly(&k, &mut rng, 1);
                let mut args: Vec<Elem> = (0..n).map(|_| sample::nonzero_poly(&k, &mut rng, 1)).collect();
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if i != j {
                    args[i] = b.clone();
                    args[j] = b;
                    let coeff = sample::poly(&k, &mut rng, 1);
                    let at = rng.gen_range(0..=cur.terms.len());
                    cur.terms.insert(at, SymbolTerm { coeff, args });
                }
            }
            // the relation [u+v; u+v, …} = [u; u, …} + [v; v, …}
            3 if n >= 1 => {
                let u = sample::nonzero_poly(&k, &mut rng, 1);
                let v = sample::nonzero_poly(&k, &mut rng, 1);
                let w = k.add(&u, &v);
                if !k.is_zero(&w) {
                    let rest: Vec<Elem> = (1..n).map(|_| sample::nonzero_poly(&k, &mut rng, 1)).collect();
                    let with = |x: &Elem| {
                        let mut a = vec![x.clone()];
                        a.extend(rest.iter().cloned());
                        a
                    };
                    cur.terms.push(SymbolTerm { coeff: w.clone(), args: with(&w) });
                    cur.terms.push(SymbolTerm { coeff: k.neg(&u), args: with(&u) });
                    cur.terms.push(SymbolTerm { coeff: k.neg(&v), args: with(&v) });
                }
            }
            // remove terms with a repeated argument or zero coefficient
            4 => {
                cur.terms.retain(|t| {
                    !k.is_zero(&t.coeff) && !(0..t.args.len()).any(|i| t.args[i + 1..].contains(&t.args[i]))
                });
            }
            // [a; b⃗} ↦ [a^p; b⃗}, or back when a is a p-th power
            5 => {
                let i = pick(&mut rng, &cur);
                let t = &mut cur.terms[i];
                t.coeff = match k.pth_root(&t.coeff) {
                    Some(r) if rng.gen_bool(0.5) => r,
                    _ => k.frobenius(&t.coeff),
                };
            }
            _ => {}
        }
    }
    cur
}

/// Random relation moves among Milnor symbols `{b_1, …, b_n}` with prime-field
/// coefficients: multiplicativity, antisymmetry, `p` copies of a symbol, and
/// the Steinberg relation `{a, 1-a} = 0`. The expansion is unchanged.
pub fn milnor_rewrite_random(s: &SymbolSum, seed: u64, steps: usize) -> SymbolSum {
    let k = s.field.clone();
    let p = k.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = s.clone();
    let n = cur.arity;
    if n == 0 {
        return cur;
    }
    for _ in 0..steps {
        match rng.gen_range(0..4) {
            0 if !cur.terms.is_empty() => {
                let i = rng.gen_range(0..cur.terms.len());
                let j = rng.gen_range(0..n);
                let c = sample::nonzero_poly(&k, &mut rng, 1);
                let t = cur.terms.remove(i);
                let mut a1 = t.args.clone();
                a1[j] = k.div(&a1[j], &c).unwrap();
                let mut a2 = t.args;
                a2[j] = c;
                cur.terms.push(SymbolTerm { coeff: t.coeff.clone(), args: a1 });
                cur.terms.push(SymbolTerm { coeff: t.coeff, args: a2 });
            }
            1 if !cur.terms.is_empty() && n >= 2 => {
                let i = rng.gen_range(0..cur.terms.len());
                let j = rng.gen_range(0..n - 1);
                let t = &mut cur.terms[i];
                t.args.swap(j, j + 1);
                t.coeff = k.neg(&t.coeff);
            }
            2 => {
                let args: Vec<Elem> = (0..n).map(|_| sample::nonzero_poly(&k, &mut rng, 1)).collect();
                for _ in 0..p {
                    cur.terms.push(SymbolTerm { coeff: k.one(), args: args.clone() });
                }
            }
            3 if n >= 2 => {
                let a = sample::nonzero_poly(&k, &mut rng, 1);
                let b = k.sub(&k.one(), &a);
                if k.is_zero(&b) {
                    continue;
                }
                let mut args: Vec<Elem> = (0..n).map(|_| sample::nonzero_poly(&k, &mut rng, 1)).collect();
                let i = rng.gen_range(0..n - 1);
                args[i] = a;
                args[i + 1] = b;
                let at = rng.gen_range(0..=cur.terms.len());
                cur.terms.insert(at, SymbolTerm { coeff: k.one(), args });
            }
            _ => {}
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_basic() {
        let k = Tower::gf_vars(2, 1, &["x"]).unwrap();
        let x = k.var(0);
        let a = k.add(&x, &k.one());
        let s = SymbolSum::single(&k, a.clone(), vec![x.clone()]).unwrap();
        assert_eq!(expand(&s), DiffForm::monomial(&k, 1, k.div(&a, &x).unwrap()));
        let dup = SymbolSum::single(&k, k.one(), vec![x.clone(), x.clone()]).unwrap();
        assert!(expand(&dup).is_zero());
    }

    #[test]
    fn d_of_x_dy() {
        let k = Tower::gf_vars(3, 1, &["x", "y"]).unwrap();
        let w = DiffForm::monomial(&k, 0b10, k.var(0));
        assert_eq!(exterior_d(&w), DiffForm::monomial(&k, 0b11, k.one()));
    }

    #[test]
    fn canonical_section_round_trip() {
        let k = Tower::gf_vars(3, 1, &["x", "y"]).unwrap();
        let mut w = DiffForm::zero(&k, 1);
        w.add_term(1, k.add(&k.var(1), &k.one()));
        w.add_term(2, k.inv(&k.var(0)).unwrap());
        assert_eq!(expand(&canonical_symbolize(&w)), w);
        assert_eq!(expand(&wp_operator(&canonical_symbolize(&w))), wp_form(&w));
    }

    #[test]
    fn forms_level_rewrites_preserve_expansion() {
        let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
        let s = SymbolSum::single(&k, k.var(0), vec![k.var(1), k.add(&k.var(0), &k.one())]).unwrap();
        for seed in 0..10 {
            let r = kato_rewrite_random(&s, seed, 12, RewriteLevel::Forms);
            assert_eq!(expand(&r), expand(&s));
        }
    }

    #[test]
    fn milnor_rewrites_preserve_expansion() {
        let k = Tower::gf_vars(3, 1, &["x", "y"]).unwrap();
        let s = SymbolSum::milnor(&k, vec![k.var(0), k.add(&k.var(1), &k.one())]).unwrap();
        for seed in 0..10 {
            let r = milnor_rewrite_random(&s, seed, 10);
            assert_eq!(expand(&r), expand(&s));
        }
    }
}
