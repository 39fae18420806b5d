//! Local analysis of a class of `H^{n+1,n}(k0(t))` at a closed point of the
//! projective line over `k0`.
//!
//! The place is moved to `t = 0` by an automorphism of `k0(t)` (after a
//! constant-field extension for non-rational places with constant
//! polynomial). The form is then written in logarithmic coordinates
//!
//! ```text
//! w = sum_I A_I dlog x_I + sum_J B_J dlog x_J ∧ dlog t
//! ```
//!
//! and the Laurent coefficients of `A_I`, `B_J` are reduced level by level.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factor::{factor_gf, factor_over, Embedding};
use crate::form::{exterior_d, mask_indices, mask_monomial, wedge_sign, DiffForm, SymbolSum};
use crate::mpoly;
use crate::tower::{Elem, Tower};
use crate::upoly::{Field, Poly};

/// A closed point of the projective line over `k0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    /// A monic irreducible polynomial in `t` over `k0`.
    Finite(Poly<Elem>),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.len() - 1,
            Place::Infinity => 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// `(π)` or `inf`, with `π` written in the tower's top variable.
    pub fn label(&self, k: &Tower) -> String {
        match self {
            Place::Finite(pi) => format!("({})", k.format(&k.from_poly(pi.clone()))),
            Place::Infinity => "inf".into(),
        }
    }

    /// The rational place `t = a`.
    pub fn at(k0: &Tower, a: Elem) -> Place {
        Place::Finite(vec![k0.neg(&a), k0.one()])
    }
}

/// The graded image of a class at its level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Graded {
    Tame,
    /// Level prime to p: a form in `Ω^n` of the residue field.
    Coprime(DiffForm),
    /// Level divisible by p: forms in `Ω^n` and `Ω^{n-1}`, not both closed.
    Divisible(DiffForm, DiffForm),
}

#[derive(Clone, Debug)]
pub struct LocalAnalysis {
    pub place: Place,
    pub place_label: String,
    pub uniformizer: String,
    pub residue_field: Tower,
    pub level: usize,
    pub graded: Graded,
    /// Residue in `H^{n,n-1}` of the residue field (level 0 only).
    pub residue: Option<SymbolSum>,
    /// Unramified part `sum_I [a_I; x_I}` over the residue field (level 0 only).
    pub unramified: Option<SymbolSum>,
}

/// A form transported so that the place sits at `t = 0`.
#[derive(Clone, Debug)]
pub struct Localized {
    pub field: Tower,
    pub form: DiffForm,
}

/// Pulls back `w` along `x_i ↦ subs[i]` (within one tower).
pub fn pullback(w: &DiffForm, subs: &[Elem]) -> Result<DiffForm> {
    let k = &w.field;
    let diffs: Vec<DiffForm> = subs.iter().map(|s| crate::form::d_function(k, s)).collect();
    let mut out = DiffForm::zero(k, w.degree);
    for (mask, c) in &w.coeffs {
        let mut term = DiffForm::function(k, k.substitute(c, subs)?);
        for i in mask_indices(*mask) {
            term = term.wedge(&diffs[i]);
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// Moves `place` to `t = 0`.
pub fn localize(k: &Tower, w: &DiffForm, place: &Place) -> Result<Localized> {
    let s = k.depth() - 1;
    let mut subs: Vec<Elem> = (0..k.depth()).map(|i| k.var(i)).collect();
    let t = k.t();
    match place {
        Place::Infinity => {
            subs[s] = k.inv(&t).unwrap();
            Ok(Localized { field: k.clone(), form: pullback(w, &subs)? })
        }
        Place::Finite(pi) if pi.len() == 2 => {
            let alpha = k.lift(k.base().neg(&pi[0]));
            subs[s] = k.add(&t, &alpha);
            Ok(Localized { field: k.clone(), form: pullback(w, &subs)? })
        }
        Place::Finite(pi) => {
            let k0 = k.base();
            let consts: Option<Vec<u32>> = pi.iter().map(|c| k0.to_gf(c)).collect();
            let Some(consts) = consts else {
                return Err(Error::UnsupportedResidueField(format!(
                    "place {} of degree {} over {k0}",
                    place.label(k),
                    pi.len() - 1
                )));
            };
            let emb = Embedding::new(k.gf(), (pi.len() - 1) as u32)?;
            let big = k.with_constants(emb.big.clone());
            let image: Poly<u32> = consts.iter().map(|&c| emb.map(c)).collect();
            let theta = factor_gf(&emb.big, &image)?
                .into_iter()
                .find(|(f, _)| f.len() == 2)
                .map(|(f, _)| emb.big.neg(f[0]))
                .expect("irreducible polynomial splits over its residue field");
            let wb = w.map(&big, &|c| Ok(k.map_constants(c, &big, &|x| emb.map(x))))?;
            let mut subs: Vec<Elem> = (0..big.depth()).map(|i| big.var(i)).collect();
            subs[s] = big.add(&big.t(), &big.from_gf(theta));
            Ok(Localized { field: big, form: pullback(&wb, &subs)? })
        }
    }
}

/// Coefficients of `t^{-N}, …, t^0` in the expansion at `t = 0`.
pub fn laurent(k: &Tower, a: &Elem) -> (usize, Vec<Elem>) {
    let b = k.base();
    let (n, d) = k.num_den(a);
    if n.is_empty() {
        return (0, vec![b.zero()]);
    }
    let vn = n.iter().position(|c| !b.is_zero(c)).unwrap();
    let vd = d.iter().position(|c| !b.is_zero(c)).unwrap();
    if vd <= vn {
        let c0 = if vd == vn { b.div(&n[vn], &d[vd]).unwrap() } else { b.zero() };
        return (0, vec![c0]);
    }
    let big_n = vd - vn;
    let n1 = &n[vn..];
    let d1 = &d[vd..];
    let d0inv = b.inv(&d1[0]).unwrap();
    let mut q: Vec<Elem> = Vec::with_capacity(big_n + 1);
    for kk in 0..=big_n {
        let mut acc = n1.get(kk).cloned().unwrap_or_else(|| b.zero());
        for i in 1..=kk.min(d1.len() - 1) {
            acc = b.sub(&acc, &b.mul(&d1[i], &q[kk - i]));
        }
        q.push(b.mul(&acc, &d0inv));
    }
    (big_n, q)
}

/// The `e = 0` component of the p-basis expansion of `a`, as its p-th root:
/// the unique `c` with `a - c^p` in the span of `x^e k^p`, `e ≠ 0`.
pub fn cartier_root(k: &Tower, a: &Elem) -> Elem {
    if k.depth() == 0 {
        return k.pth_root(a).unwrap();
    }
    let p = k.p();
    let (n, d) = mpoly::clear_denominators(k, a);
    let prod = k.mul(&n, &k.pow(&d, p as u64 - 1));
    let m = mpoly::to_mpoly(k, &prod).unwrap();
    let gf = k.gf();
    let mut root = mpoly::MPoly::new();
    for (e, c) in m {
        if e.iter().all(|x| x % p == 0) {
            root.insert(e.iter().map(|x| x / p).collect(), gf.pth_root(c));
        }
    }
    k.div(&mpoly::from_mpoly(k, &root), &d).unwrap()
}

fn to_dx(k: &Tower, coeffs: &BTreeMap<u32, Elem>, degree: usize) -> DiffForm {
    let mut w = DiffForm::zero(k, degree);
    for (m, a) in coeffs {
        w.add_term(*m, k.div(a, &mask_monomial(k, *m)).unwrap());
    }
    w
}

fn symbols(k: &Tower, coeffs: &BTreeMap<u32, Elem>, arity: usize, sign: bool) -> SymbolSum {
    let mut s = SymbolSum::zero(k, arity);
    for (m, a) in coeffs {
        let args = mask_indices(*m).iter().map(|&i| k.var(i)).collect();
        let c = if sign { k.neg(a) } else { a.clone() };
        s.push(c, args).unwrap();
    }
    s
}

fn accumulate(k: &Tower, map: &mut BTreeMap<u32, Elem>, mask: u32, v: Elem) {
    if k.is_zero(&v) {
        return;
    }
    let s = match map.remove(&mask) {
        Some(old) => k.add(&old, &v),
        None => v,
    };
    if !k.is_zero(&s) {
        map.insert(mask, s);
    }
}

/// Filtration level, graded image and (at level 0) residue of the class of
/// `w ∈ Ω^n(k0(t))` at `place`.
pub fn analyze(k: &Tower, w: &DiffForm, place: &Place) -> Result<LocalAnalysis> {
    assert!(k.depth() >= 1, "local analysis needs a top variable");
    let n = w.degree;
    let loc = localize(k, w, place)?;
    let kk = &loc.field;
    let k0 = kk.base();
    let s = k0.depth();
    let tbit = 1u32 << s;
    let p = kk.p() as usize;
    let t = kk.t();

    // Laurent data of the logarithmic coordinates
    let mut a: Vec<BTreeMap<u32, Elem>> = vec![BTreeMap::new()];
    let mut b: Vec<BTreeMap<u32, Elem>> = vec![BTreeMap::new()];
    for (mask, c) in &loc.form.coeffs {
        let (is_b, low) = (mask & tbit != 0, mask & !tbit);
        let mut coord = kk.mul(c, &mask_monomial(kk, low));
        if is_b {
            coord = kk.mul(&coord, &t);
        }
        let (big_n, series) = laurent(kk, &coord);
        let target = if is_b { &mut b } else { &mut a };
        while target.len() <= big_n {
            target.push(BTreeMap::new());
        }
        for (i, v) in series.into_iter().enumerate() {
            accumulate(&k0, &mut target[big_n - i], low, v);
        }
    }
    let top = a.len().max(b.len()) - 1;
    a.resize(top + 1, BTreeMap::new());
    b.resize(top + 1, BTreeMap::new());

    let gf = k0.gf().clone();
    let base = |level: usize, graded: Graded| LocalAnalysis {
        place: place.clone(),
        place_label: place.label(k),
        uniformizer: match place {
            Place::Infinity => format!("1/{}", k.top_name()),
            Place::Finite(pi) => k.format(&k.from_poly(pi.clone())),
        },
        residue_field: k0.clone(),
        level,
        graded,
        residue: None,
        unramified: None,
    };

    for j in (1..=top).rev() {
        if j % p != 0 {
            let jinv = gf.inv(gf.from_int(j as i64)).unwrap();
            let bj = std::mem::take(&mut b[j]);
            for (jm, bv) in bj {
                let outer = if jm.count_ones() % 2 == 1 { gf.neg(jinv) } else { jinv };
                for i in 0..s {
                    let sg = wedge_sign(1 << i, jm);
                    if sg == 0 {
                        continue;
                    }
                    let c = if sg < 0 { gf.neg(outer) } else { outer };
                    let term = k0.mul(&k0.mul(&k0.var(i), &k0.partial(&bv, i)), &k0.from_gf(c));
                    accumulate(&k0, &mut a[j], jm | (1 << i), term);
                }
            }
            if !a[j].is_empty() {
                return Ok(base(j, Graded::Coprime(to_dx(&k0, &a[j], n))));
            }
        } else {
            let ea = to_dx(&k0, &a[j], n);
            let eb = if n > 0 { to_dx(&k0, &b[j], n - 1) } else { DiffForm::zero(&k0, 0) };
            let closed = |e: &DiffForm| exterior_d(e).is_zero();
            if !closed(&ea) || (n > 0 && !closed(&eb)) {
                return Ok(base(j, Graded::Divisible(ea, eb)));
            }
            for (m, v) in std::mem::take(&mut a[j]) {
                let c = cartier_root(&k0, &v);
                accumulate(&k0, &mut a[j / p], m, c);
            }
            for (m, v) in std::mem::take(&mut b[j]) {
                let c = cartier_root(&k0, &v);
                accumulate(&k0, &mut b[j / p], m, c);
            }
        }
    }
    let mut out = base(0, Graded::Tame);
    out.unramified = Some(symbols(&k0, &a[0], n, false));
    out.residue = Some(if n == 0 {
        SymbolSum::zero(&k0, 0)
    } else {
        symbols(&k0, &b[0], n - 1, (n - 1) % 2 == 1)
    });
    Ok(out)
}

/// Candidate ramified places: factors of the denominators in `t`, and `∞`.
pub fn places(k: &Tower, w: &DiffForm) -> Result<Vec<Place>> {
    let k0 = k.base();
    let mut out: Vec<Place> = Vec::new();
    let mut dens: Vec<Poly<Elem>> = Vec::new();
    for c in w.coeffs.values() {
        let (_, d) = k.num_den(c);
        if d.len() > 1 && !dens.iter().any(|x| x.as_slice() == d) {
            dens.push(d.to_vec());
        }
    }
    for d in dens {
        for (pi, _) in factor_over(&k0, &d)? {
            let pl = Place::Finite(pi);
            if !out.contains(&pl) {
                out.push(pl);
            }
        }
    }
    out.sort_by(|x, y| (x.degree(), x).cmp(&(y.degree(), y)));
    out.push(Place::Infinity);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::expand;

    fn gf2xt() -> Tower {
        Tower::gf_vars(2, 1, &["x", "t"]).unwrap()
    }

    #[test]
    fn laurent_of_simple_pole() {
        let k = Tower::gf_vars(3, 1, &["t"]).unwrap();
        let t = k.t();
        // (1 + t)/t^2 = t^-2 + t^-1
        let a = k.div(&k.add(&k.one(), &t), &k.mul(&t, &t)).unwrap();
        let (n, c) = laurent(&k, &a);
        assert_eq!(n, 2);
        assert_eq!(c, vec![Elem::C(1), Elem::C(1), Elem::C(0)]);
    }

    #[test]
    fn one_over_t_p_times_dlog_x_has_level_one() {
        let k = gf2xt();
        let t = k.t();
        let a = k.inv(&k.mul(&t, &t)).unwrap();
        let w = expand(&SymbolSum::single(&k, a, vec![k.var(0)]).unwrap());
        let la = analyze(&k, &w, &Place::at(&k.base(), k.base().zero())).unwrap();
        assert_eq!(la.level, 1);
    }

    #[test]
    fn x_over_t2_dlog_t_has_level_two() {
        let k = gf2xt();
        let t = k.t();
        let a = k.div(&k.var(0), &k.mul(&t, &t)).unwrap();
        let w = expand(&SymbolSum::single(&k, a, vec![t.clone()]).unwrap());
        let la = analyze(&k, &w, &Place::at(&k.base(), k.base().zero())).unwrap();
        assert_eq!(la.level, 2);
        assert!(matches!(la.graded, Graded::Divisible(..)));
    }

    #[test]
    fn tame_residue_of_x_dlog_t() {
        let k = gf2xt();
        let w = expand(&SymbolSum::single(&k, k.var(0), vec![k.t()]).unwrap());
        let k0 = k.base();
        let la = analyze(&k, &w, &Place::at(&k0, k0.zero())).unwrap();
        assert_eq!(la.level, 0);
        let res = la.residue.unwrap();
        assert_eq!(res.terms.len(), 1);
        assert_eq!(res.terms[0].coeff, k0.var(0));
        let inf = analyze(&k, &w, &Place::Infinity).unwrap();
        assert_eq!(inf.residue.unwrap().terms[0].coeff, k0.var(0));
    }

    #[test]
    fn cartier_root_extracts_zero_component() {
        let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
        let (x, y) = (k.var(0), k.var(1));
        // x^2 y^2 + x + y^3 x^2 -> x y
        let a = k.add(&k.add(&k.mul(&k.mul(&x, &x), &k.mul(&y, &y)), &x), &k.mul(&k.pow(&y, 3), &k.mul(&x, &x)));
        assert_eq!(cartier_root(&k, &a), k.mul(&x, &y));
    }
}
