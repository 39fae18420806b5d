//! Bounded search for `w = 𝒫(σ) + dη`.
//!
//! With `Q` a common denominator of `w`, the ansatz `σ_I = S_I/Q` and
//! `η_K = H_K/Q^p` turns the equation into
//!
//! ```text
//! S_I^p x_I^{p-1} - S_I Q^{p-1} + (dH)_I = Q^p w_I
//! ```
//!
//! which is linear over GF(p) in the coordinates of the polynomials `S`, `H`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::form::{exterior_d, mask_indices, wedge_sign, wp_form, DiffForm};
use crate::linalg::System;
use crate::mpoly::{self, MPoly};
use crate::tower::{Elem, Tower};
use crate::upoly::{self as up, Field};

/// `σ` and `η` with `w = 𝒫(σ) + dη`, where `𝒫` acts through the canonical section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sigma: DiffForm,
    pub eta: DiffForm,
}

impl Witness {
    /// Recomputes `𝒫(σ) + dη`.
    pub fn image(&self) -> DiffForm {
        let mut out = wp_form(&self.sigma);
        if self.sigma.degree > 0 {
            out = out.add(&exterior_d(&self.eta));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    InImage(Witness),
    /// No witness with degrees up to the bound; not a proof of non-membership.
    NotWithin(usize),
}

/// Degree bounds tried by [`membership_auto`].
#[derive(Clone, Debug)]
pub struct DegreeSchedule {
    /// First bound; `None` means `2p` times the largest input degree.
    pub start: Option<usize>,
    pub growth: usize,
    pub cap: usize,
    pub max_unknowns: usize,
}

impl Default for DegreeSchedule {
    fn default() -> Self {
        DegreeSchedule { start: None, growth: 2, cap: 48, max_unknowns: 12_000 }
    }
}

fn subsets(r: usize, n: usize) -> Vec<u32> {
    (0u32..(1 << r)).filter(|m| m.count_ones() as usize == n).collect()
}

/// Monomials with exponent `i` bounded by `bounds[i]`.
fn monomials(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                (0..=b).map(move |x| {
                    let mut e = e.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
    }
    out
}

fn common_denominator(k: &Tower, w: &DiffForm) -> Elem {
    let dens: Vec<Elem> = w.coeffs.values().map(|c| mpoly::clear_denominators(k, c).1).collect();
    if k.depth() == 1 {
        let b = k.base();
        let mut l = vec![b.one()];
        for d in &dens {
            let dd = up::monic(&b, k.num_den(d).0);
            let g = up::gcd(&b, &l, &dd);
            l = up::mul(&b, &l, &up::div_exact(&b, &dd, &g));
        }
        return k.from_poly(l);
    }
    let mut seen: Vec<Elem> = Vec::new();
    let mut q = k.one();
    for d in dens {
        if let Some(monic) = normalize_unit(k, &d) {
            if !seen.contains(&monic) {
                q = k.mul(&q, &monic);
                seen.push(monic);
            }
        }
    }
    q
}

/// Divides a polynomial by its constant leading coefficient; `None` for constants.
fn normalize_unit(k: &Tower, d: &Elem) -> Option<Elem> {
    if k.to_gf(d).is_some() {
        return None;
    }
    let m = mpoly::to_mpoly(k, d)?;
    let (_, &lc) = m.iter().next_back()?;
    Some(k.mul(d, &k.from_gf(k.gf().inv(lc).unwrap())))
}

fn to_m(k: &Tower, e: &Elem) -> MPoly {
    mpoly::to_mpoly(k, e).expect("polynomial expected")
}

#[derive(Clone, Copy)]
enum Unknown {
    S(u32),
    H(u32),
}

/// Decides whether `w` has a witness with `S` of partial degrees at most `d`.
pub fn membership_bounded(w: &DiffForm, d: usize, max_unknowns: usize) -> Result<Membership> {
    let k = &w.field;
    let gf = k.gf().clone();
    let (p, m, r, n) = (k.p(), gf.m() as usize, k.depth(), w.degree);
    let trivial = Witness { sigma: DiffForm::zero(k, n), eta: DiffForm::zero(k, n.saturating_sub(1)) };
    if w.is_zero() {
        return Ok(Membership::InImage(trivial));
    }
    if r == 0 {
        let c = k.to_gf(&w.coeff(0)).unwrap();
        return Ok(match gf.as_solve(c) {
            Some(s) => Membership::InImage(Witness { sigma: DiffForm::function(k, Elem::C(s)), ..trivial }),
            None => Membership::NotWithin(d),
        });
    }
    let q = common_denominator(k, w);
    let qm = to_m(k, &q);
    let qp1 = mpoly::pow(&gf, &qm, p - 1, r);
    let qp = k.pow(&q, p as u64);
    let targets: Vec<(u32, MPoly)> =
        w.coeffs.iter().map(|(mask, c)| (*mask, to_m(k, &k.mul(c, &qp)))).collect();

    let dq = mpoly::degrees(&qp1, r);
    let mut hb = vec![0u32; r];
    for (v, b) in hb.iter_mut().enumerate() {
        let tdeg = targets.iter().map(|(_, t)| mpoly::degrees(t, r)[v]).max().unwrap_or(0);
        *b = (p * d as u32 + p - 1).max(d as u32 + dq[v]).max(tdeg) + 1;
    }
    let smon = monomials(&vec![d as u32; r]);
    let hmon = monomials(&hb);
    let s_masks = subsets(r, n);
    let h_masks = if n > 0 { subsets(r, n - 1) } else { vec![] };

    // columns: (kind, exponent, digit)
    let mut cols: Vec<(Unknown, Vec<u32>, usize)> = Vec::new();
    for &mask in &s_masks {
        for e in &smon {
            for j in 0..m {
                cols.push((Unknown::S(mask), e.clone(), j));
            }
        }
    }
    for &mask in &h_masks {
        for e in &hmon {
            let live = (0..r).any(|i| mask & (1 << i) == 0 && e[i] % p != 0);
            if live {
                for j in 0..m {
                    cols.push((Unknown::H(mask), e.clone(), j));
                }
            }
        }
    }
    if cols.len() > max_unknowns {
        return Err(Error::BudgetExceeded(format!("{} unknowns at degree {d}", cols.len())));
    }

    let basis: Vec<u32> = (0..m).map(|j| gf.pow(gf.gen(), j as u64)).collect();
    let mut row_index: HashMap<(u32, Vec<u32>, usize), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut put = |mask: u32, e: Vec<u32>, c: u32, col: usize, rows: &mut Vec<Vec<(usize, u32)>>| {
        for (dig, &v) in gf.digits(c).iter().enumerate() {
            if v == 0 {
                continue;
            }
            let key = (mask, e.clone(), dig);
            let idx = *row_index.entry(key).or_insert_with(|| {
                rows.push(Vec::new());
                rows.len() - 1
            });
            rows[idx].push((col, v));
        }
    };
    for (ci, (kind, e, j)) in cols.iter().enumerate() {
        let b = basis[*j];
        match kind {
            Unknown::S(mask) => {
                // S^p x_I^{p-1}
                let mut ep: Vec<u32> = e.iter().map(|x| x * p).collect();
                for i in mask_indices(*mask) {
                    ep[i] += p - 1;
                }
                put(*mask, ep, gf.frobenius(b), ci, &mut rows);
                // - S Q^{p-1}
                for (qe, &qc) in &qp1 {
                    let ex = e.iter().zip(qe).map(|(x, y)| x + y).collect();
                    put(*mask, ex, gf.neg(gf.mul(b, qc)), ci, &mut rows);
                }
            }
            Unknown::H(mask) => {
                for i in 0..r {
                    if mask & (1 << i) != 0 || e[i] % p == 0 {
                        continue;
                    }
                    let mut ex = e.clone();
                    ex[i] -= 1;
                    let mut c = gf.mul(b, gf.from_int(e[i] as i64));
                    if wedge_sign(1 << i, *mask) < 0 {
                        c = gf.neg(c);
                    }
                    put(mask | (1 << i), ex, c, ci, &mut rows);
                }
            }
        }
    }
    let mut rhs = vec![0u32; rows.len()];
    for (mask, t) in &targets {
        for (e, &c) in t {
            for (dig, &v) in gf.digits(c).iter().enumerate() {
                if v == 0 {
                    continue;
                }
                match row_index.get(&(*mask, e.clone(), dig)) {
                    Some(&i) => rhs[i] = v,
                    None => return Ok(Membership::NotWithin(d)),
                }
            }
        }
    }
    let mut sys = System::new(p, cols.len());
    for (row, &b) in rows.iter().zip(&rhs) {
        sys.push(row, b);
    }
    let Some(x) = sys.solve() else {
        return Ok(Membership::NotWithin(d));
    };

    let mut spoly: HashMap<u32, MPoly> = HashMap::new();
    let mut hpoly: HashMap<u32, MPoly> = HashMap::new();
    for (ci, (kind, e, j)) in cols.iter().enumerate() {
        if x[ci] == 0 {
            continue;
        }
        let c = gf.mul(basis[*j], gf.from_int(x[ci] as i64));
        let (target, mask) = match kind {
            Unknown::S(mk) => (&mut spoly, *mk),
            Unknown::H(mk) => (&mut hpoly, *mk),
        };
        mpoly::add_term(&gf, target.entry(mask).or_default(), e.clone(), c);
    }
    let mut sigma = DiffForm::zero(k, n);
    for (mask, s) in spoly {
        sigma.add_term(mask, k.div(&mpoly::from_mpoly(k, &s), &q).unwrap());
    }
    let mut eta = DiffForm::zero(k, n.saturating_sub(1));
    for (mask, h) in hpoly {
        eta.add_term(mask, k.div(&mpoly::from_mpoly(k, &h), &qp).unwrap());
    }
    let wit = Witness { sigma, eta };
    if wit.image() != *w {
        return Err(Error::DescentStuck("membership witness failed re-expansion".into()));
    }
    Ok(Membership::InImage(wit))
}

/// Largest degree appearing in numerators or denominators of `w`.
pub fn form_degree(w: &DiffForm) -> usize {
    w.coeffs.values().map(|c| w.field.degree_bound(c)).max().unwrap_or(0)
}

/// Runs [`membership_bounded`] along a geometric schedule of degree bounds.
pub fn membership_auto(w: &DiffForm, sched: &DegreeSchedule) -> Result<Membership> {
    let p = w.field.p() as usize;
    let mut d = sched.start.unwrap_or(2 * p * form_degree(w).max(1)).min(sched.cap);
    let mut last = Membership::NotWithin(d);
    loop {
        match membership_bounded(w, d, sched.max_unknowns) {
            Ok(Membership::InImage(wit)) => return Ok(Membership::InImage(wit)),
            Ok(nw) => last = nw,
            Err(Error::BudgetExceeded(msg)) => {
                return match last {
                    Membership::NotWithin(prev) if prev < d => Ok(Membership::NotWithin(prev)),
                    _ => Err(Error::BudgetExceeded(msg)),
                }
            }
            Err(e) => return Err(e),
        }
        if d >= sched.cap {
            return Ok(last);
        }
        d = (d * sched.growth).max(d + 1).min(sched.cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{canonical_symbolize, expand, wp_operator};

    #[test]
    fn x_dx_is_in_image() {
        let k = Tower::gf_vars(2, 1, &["x"]).unwrap();
        let w = DiffForm::monomial(&k, 1, k.var(0));
        match membership_bounded(&w, 2, 10_000).unwrap() {
            Membership::InImage(wit) => assert_eq!(wit.image(), w),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dlog_t_is_not_in_image() {
        let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
        let t = k.var(0);
        let w = DiffForm::monomial(&k, 1, k.inv(&t).unwrap());
        assert!(matches!(membership_bounded(&w, 6, 10_000).unwrap(), Membership::NotWithin(_)));
    }

    #[test]
    fn constructed_images_are_found() {
        let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
        let (x, t) = (k.var(0), k.var(1));
        let mut s = DiffForm::zero(&k, 1);
        s.add_term(1, k.div(&t, &k.add(&x, &k.one())).unwrap());
        let eta = DiffForm::function(&k, k.mul(&x, &t));
        let w = expand(&wp_operator(&canonical_symbolize(&s))).add(&exterior_d(&eta));
        match membership_auto(&w, &DegreeSchedule::default()).unwrap() {
            Membership::InImage(wit) => assert_eq!(wit.image(), w),
            other => panic!("{other:?}"),
        }
    }
}
