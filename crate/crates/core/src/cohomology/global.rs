//! Global decisions over `k0(t)`: zero tests, Artin–Schreier normal forms,
//! decomposition into local data and reciprocity.

use std::fmt;

use crate::error::{Error, Result};
use crate::factor::partial_fractions;
use crate::form::{expand, DiffForm, SymbolSum};
use crate::tower::{Elem, Tower};
use crate::upoly::{self as up, Field, Poly};

use super::local::{analyze, places, LocalAnalysis, Place};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    NonZero(String),
    Unknown(String),
}

impl Verdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, Verdict::Zero)
    }
    pub fn is_nonzero(&self) -> bool {
        matches!(self, Verdict::NonZero(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Zero => f.write_str("zero"),
            Verdict::NonZero(w) => write!(f, "nonzero {w}"),
            Verdict::Unknown(r) => write!(f, "unknown {r}"),
        }
    }
}

/// A class in `H^{i,j}` given by a symbol sum of arity `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub field: Tower,
    pub bidegree: (usize, usize),
    pub rep: SymbolSum,
}

impl CohClass {
    pub fn new(rep: SymbolSum, i: usize) -> Result<CohClass> {
        let j = rep.arity;
        if i != j && i != j + 1 {
            return Err(Error::WrongDimension { expected: j + 1, got: i });
        }
        Ok(CohClass { field: rep.field.clone(), bidegree: (i, j), rep })
    }

    /// A class in `H^{n+1,n}`.
    pub fn additive(rep: SymbolSum) -> CohClass {
        let n = rep.arity;
        CohClass { field: rep.field.clone(), bidegree: (n + 1, n), rep }
    }

    pub fn form(&self) -> DiffForm {
        expand(&self.rep)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Zero test in `H^{n,n}`: the coordinate expansion is injective.
pub fn hnn_is_zero(c: &CohClass) -> bool {
    assert_eq!(c.bidegree.0, c.bidegree.1, "hnn_is_zero needs bidegree (n,n)");
    c.form().is_zero()
}

pub fn is_zero_global(c: &CohClass) -> Verdict {
    assert_eq!(c.bidegree.0, c.bidegree.1 + 1, "is_zero_global needs bidegree (n+1,n)");
    form_is_zero(&c.form())
}

/// Display without whitespace, so witnesses stay `key=value` tokens.
pub fn compact(x: &impl fmt::Display) -> String {
    x.to_string().chars().filter(|c| !c.is_whitespace()).collect()
}

fn unknown(e: Error) -> Verdict {
    Verdict::Unknown(e.to_string())
}

/// Zero test in `H^{n+1,n}` of a form representative.
pub fn form_is_zero(w: &DiffForm) -> Verdict {
    let k = &w.field;
    let n = w.degree;
    if w.is_zero() || n > k.depth() {
        return Verdict::Zero;
    }
    if k.depth() == 0 {
        let c = k.to_gf(&w.coeff(0)).unwrap();
        return if k.gf().trace(c) == 0 {
            Verdict::Zero
        } else {
            Verdict::NonZero(format!("trace={}", k.gf().trace(c)))
        };
    }
    let pls = match places(k, w) {
        Ok(p) => p,
        Err(e) => return unknown(e),
    };
    let mut constant = None;
    for pl in &pls {
        let la = match analyze(k, w, pl) {
            Ok(la) => la,
            Err(e) => return unknown(e),
        };
        if la.level > 0 {
            return Verdict::NonZero(format!("place={} level={}", la.place_label, la.level));
        }
        let res = la.residue.as_ref().unwrap();
        if n > 0 {
            match form_is_zero(&expand(res)) {
                Verdict::Zero => {}
                Verdict::NonZero(_) => {
                    return Verdict::NonZero(format!("place={} residue={}", la.place_label, compact(res)))
                }
                u @ Verdict::Unknown(_) => return u,
            }
        }
        if *pl == Place::Infinity {
            constant = la.unramified.clone();
        }
    }
    let constant = constant.expect("infinity is always analyzed");
    match form_is_zero(&expand(&constant)) {
        Verdict::NonZero(_) => Verdict::NonZero(format!("constant={}", compact(&constant))),
        v => v,
    }
}

/// Residue of `c` at `v`; `NotTame` when the level is positive.
pub fn residue(c: &CohClass, v: &Place) -> Result<SymbolSum> {
    let la = analyze(&c.field, &c.form(), v)?;
    if la.level > 0 {
        return Err(Error::NotTame(format!("level {} at {}", la.level, la.place_label)));
    }
    Ok(la.residue.unwrap())
}

pub fn filtration_level(c: &CohClass, v: &Place) -> Result<LocalAnalysis> {
    analyze(&c.field, &c.form(), v)
}

/// Local data at the places where the class is ramified, and the constant part.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub local: Vec<LocalAnalysis>,
    /// The unramified part at `∞`, over `k0`.
    pub constant: SymbolSum,
}

pub fn global_decompose(c: &CohClass) -> Result<Decomposition> {
    let k = &c.field;
    let w = c.form();
    let mut local = Vec::new();
    let mut constant = SymbolSum::zero(&k.base(), c.rep.arity);
    for pl in places(k, &w)? {
        let la = analyze(k, &w, &pl)?;
        if pl == Place::Infinity {
            constant = la.unramified.clone().unwrap_or(constant);
        }
        let ramified = la.level > 0 || la.residue.as_ref().is_some_and(|r| !expand(r).is_zero());
        if ramified {
            local.push(la);
        }
    }
    Ok(Decomposition { local, constant })
}

/// Whether the residues of a tame class sum to zero in `H^{n,n-1}(k0)`.
pub fn reciprocity_check(c: &CohClass) -> Result<bool> {
    let k = &c.field;
    let k0 = k.base();
    let w = c.form();
    let n = c.rep.arity;
    if n == 0 {
        return Ok(true);
    }
    let mut total = SymbolSum::zero(&k0, n - 1);
    for pl in places(k, &w)? {
        let la = analyze(k, &w, &pl)?;
        if la.level > 0 {
            return Err(Error::NotTame(format!("level {} at {}", la.level, la.place_label)));
        }
        let res = la.residue.unwrap();
        if !pl.is_rational() {
            if !form_is_zero(&expand(&res)).is_zero() {
                return Err(Error::NonRationalRamification(la.place_label));
            }
            continue;
        }
        total = total.concat(&res);
    }
    match form_is_zero(&expand(&total)) {
        Verdict::Zero => Ok(true),
        Verdict::NonZero(_) => Ok(false),
        Verdict::Unknown(r) => Err(Error::UnsupportedResidueField(r)),
    }
}

/// Pulls `[t]·w` back along `t = z^p - z` (the top variable is reused for `z`)
/// and tests it for zero.
pub fn cyclic_kill_check(w: &CohClass) -> Result<Verdict> {
    let k = &w.field;
    let t = k.t();
    let prod = w.rep.scale(&t);
    let mut subs: Vec<Elem> = (0..k.depth()).map(|i| k.var(i)).collect();
    subs[k.depth() - 1] = k.wp(&t);
    let pulled = prod.map(k, &|e| k.substitute(e, &subs))?;
    Ok(form_is_zero(&expand(&pulled)))
}

/// Result of Artin–Schreier reduction of an element of `k0(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub rep: Elem,
    pub verdict: Verdict,
}

/// Reduces `a` modulo `𝒫(K)` by removing poles of order divisible by p.
pub fn as_normal_form(k: &Tower, a: &Elem) -> Result<NormalForm> {
    if k.depth() == 0 {
        let c = k.to_gf(a).unwrap();
        let tr = k.gf().trace(c);
        return Ok(if tr == 0 {
            NormalForm { rep: k.zero(), verdict: Verdict::Zero }
        } else {
            NormalForm { rep: a.clone(), verdict: Verdict::NonZero(format!("trace={tr}")) }
        });
    }
    let k0 = k.base();
    let mut cur = a.clone();
    let mut stuck = false;
    loop {
        let pf = partial_fractions(k, &cur)?;
        match reduction_step(k, &pf)? {
            Step::Subtract(e) => cur = k.sub(&cur, &k.wp(&e)),
            Step::Stuck => {
                stuck = true;
                break;
            }
            Step::Done => break,
        }
    }
    let pf = partial_fractions(k, &cur)?;
    let polar = pf.terms.iter().any(|(_, cs)| cs.iter().any(|c| !c.is_empty()));
    let c0 = pf.poly.first().cloned().unwrap_or_else(|| k0.zero());
    let inner = as_normal_form(&k0, &c0)?;
    let rep = k.add(&k.sub(&cur, &k.lift(c0)), &k.lift(inner.rep));
    let verdict = if stuck || polar || pf.poly.len() > 1 {
        Verdict::NonZero(format!("rep={}", compact(&k.format(&rep))))
    } else {
        inner.verdict
    };
    Ok(NormalForm { rep, verdict })
}

enum Step {
    Subtract(Elem),
    Stuck,
    Done,
}

/// Finds the highest removable pole of order divisible by p.
fn reduction_step(k: &Tower, pf: &crate::factor::PartialFractions) -> Result<Step> {
    let k0 = k.base();
    let p = k.p() as usize;
    let mut best: Option<(usize, Elem)> = None;
    let mut stuck_at: Option<usize> = None;
    let mut consider = |order: usize, e: Option<Elem>| {
        if best.as_ref().is_some_and(|(o, _)| *o >= order) {
            return;
        }
        match e {
            Some(e) => best = Some((order, e)),
            None => stuck_at = Some(stuck_at.map_or(order, |s| s.max(order))),
        }
    };
    let deg = pf.poly.len().saturating_sub(1);
    for i in (1..=deg).rev().filter(|i| i % p == 0) {
        let c = &pf.poly[i];
        if k0.is_zero(c) {
            continue;
        }
        let e = k0.pth_root(c).map(|r| k.mul(&k.lift(r), &k.pow(&k.t(), (i / p) as u64)));
        consider(i, e);
        break;
    }
    for (pi, cs) in &pf.terms {
        for j in (1..=cs.len()).rev().filter(|j| j % p == 0) {
            let c = &cs[j - 1];
            if c.is_empty() {
                continue;
            }
            let root = residue_pth_root(&k0, pi, c)?;
            let e = root.map(|r| {
                let den = up::pow(&k0, pi, (j / p) as u64);
                k.frac(r, den).unwrap()
            });
            consider(j, e);
            break;
        }
    }
    Ok(match (best, stuck_at) {
        (Some((_, e)), _) => Step::Subtract(e),
        (None, Some(_)) => Step::Stuck,
        (None, None) => Step::Done,
    })
}

/// A p-th root of `c` in `k0[t]/(π)`, if one is found.
fn residue_pth_root(k0: &Tower, pi: &[Elem], c: &Poly<Elem>) -> Result<Option<Poly<Elem>>> {
    if pi.len() == 2 {
        return Ok(k0.pth_root(&c[0]).map(|r| vec![r]));
    }
    if k0.depth() == 0 {
        let q = k0.gf().q() as u128;
        let d = (pi.len() - 1) as u32;
        let e = q.pow(d) / k0.p() as u128;
        return Ok(Some(up::pow_mod(k0, c, e, pi)));
    }
    Err(Error::UnsupportedCoefficientField(format!(
        "residue field of degree {} over {k0}",
        pi.len() - 1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::SymbolSum;

    #[test]
    fn hnn_examples() {
        let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
        let (x, y) = (k.var(0), k.var(1));
        let xx = SymbolSum::milnor(&k, vec![x.clone()]).unwrap();
        let two = CohClass::new(xx.concat(&xx), 1).unwrap();
        assert!(hnn_is_zero(&two));
        let xy = CohClass::new(SymbolSum::milnor(&k, vec![x.clone(), y]).unwrap(), 2).unwrap();
        assert!(!hnn_is_zero(&xy));
        let xxs = CohClass::new(SymbolSum::milnor(&k, vec![x.clone(), x]).unwrap(), 2).unwrap();
        assert!(hnn_is_zero(&xxs));
    }

    #[test]
    fn normal_form_examples() {
        let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
        let t = k.t();
        let a = k.inv(&k.mul(&t, &t)).unwrap();
        let nf = as_normal_form(&k, &a).unwrap();
        assert_eq!(nf.rep, k.inv(&t).unwrap());
        assert!(nf.verdict.is_nonzero());
        assert!(as_normal_form(&k, &k.one()).unwrap().verdict.is_nonzero());
        let u = k.div(&k.add(&t, &k.one()), &k.pow(&k.add(&k.mul(&t, &t), &k.add(&t, &k.one())), 2)).unwrap();
        assert!(as_normal_form(&k, &k.wp(&u)).unwrap().verdict.is_zero());
    }

    #[test]
    fn x_dlog_t_is_nonzero_with_residue_x() {
        let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
        let c = CohClass::additive(SymbolSum::single(&k, k.var(0), vec![k.t()]).unwrap());
        assert_eq!(is_zero_global(&c), Verdict::NonZero("place=(t) residue=[x]".into()));
        assert!(reciprocity_check(&c).unwrap());
    }

    #[test]
    fn t_dlog_t_is_zero() {
        let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
        let c = CohClass::additive(SymbolSum::single(&k, k.t(), vec![k.t()]).unwrap());
        assert_eq!(is_zero_global(&c), Verdict::Zero);
    }

    #[test]
    fn cyclic_cover_kills_t_times_x() {
        let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
        let w = CohClass::new(SymbolSum::milnor(&k, vec![k.var(0)]).unwrap(), 1).unwrap();
        assert_eq!(cyclic_kill_check(&w).unwrap(), Verdict::Zero);
    }

    #[test]
    fn residues_at_two_rational_places_cancel() {
        let k = Tower::gf_vars(3, 1, &["x", "t"]).unwrap();
        let (x, t) = (k.var(0), k.t());
        let b = k.div(&k.sub(&t, &k.one()), &k.add(&t, &k.one())).unwrap();
        let c = CohClass::additive(SymbolSum::single(&k, x, vec![b]).unwrap());
        let d = global_decompose(&c).unwrap();
        assert_eq!(d.local.len(), 2);
        assert!(d.local.iter().all(|l| l.level == 0));
        assert!(reciprocity_check(&c).unwrap());
        assert!(is_zero_global(&c).is_nonzero());
    }
}
