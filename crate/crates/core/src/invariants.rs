//! Cohomological invariants: evaluators for each family, `b_λ`, the étale
//! discriminant, divided powers, and a randomized invariance harness.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{as_normal_form, form_is_zero, CohClass, Verdict};
use crate::error::{Error, Result};
use crate::factor::{factor_gf, factor_over, Embedding};
use crate::form::{expand, kato_rewrite_random, RewriteLevel, SymbolSum, SymbolTerm};
use crate::quadform::{revoy_move, Move, QuadForm};
use crate::sample;
use crate::tower::{Elem, Tower};
use crate::upoly::{self as up, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    OEven,
    OOdd,
    SOOdd,
    SOEven,
    AbGp(usize, usize),
    MuP,
    ZP,
    SymN,
    OpEval,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::OEven => f.write_str("O_even"),
            Family::OOdd => f.write_str("O_odd"),
            Family::SOOdd => f.write_str("SO_odd"),
            Family::SOEven => f.write_str("SO_even"),
            Family::AbGp(r, s) => write!(f, "AbGp({r},{s})"),
            Family::MuP => f.write_str("MuP"),
            Family::ZP => f.write_str("ZP"),
            Family::SymN => f.write_str("SymN"),
            Family::OpEval => f.write_str("OpEval"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        let s = s.trim();
        Ok(match s {
            "O_even" => Family::OEven,
            "O_odd" => Family::OOdd,
            "SO_odd" => Family::SOOdd,
            "SO_even" => Family::SOEven,
            "MuP" => Family::MuP,
            "ZP" => Family::ZP,
            "SymN" => Family::SymN,
            "OpEval" => Family::OpEval,
            _ => {
                let inner = s
                    .strip_prefix("AbGp(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::parse("family", format!("unknown family {s}")))?;
                let (r, t) = inner.split_once(',').ok_or_else(|| Error::parse("family", "AbGp(r,s)"))?;
                let num = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::parse("family", format!("bad count {x}")));
                Family::AbGp(num(r)?, num(t)?)
            }
        })
    }
}

/// Whether a coefficient is an additive class `H^{i+1,i}` or a Milnor class `H^{i,i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Additive,
    Milnor,
}

/// Input to an invariant.
#[derive(Clone, Debug)]
pub enum TorsorData {
    Form(QuadForm),
    /// `([a_1], …, [a_r]; {b_1}, …, {b_s})`.
    Abelian { a: Vec<Elem>, b: Vec<Elem> },
    Unit(Elem),
    Additive(Elem),
    /// A separable polynomial, coefficients from the constant term up.
    Poly(Vec<Elem>),
    Class(SymbolSum),
}

#[derive(Clone, Debug)]
pub struct InvariantSpec {
    pub family: Family,
    pub field: Tower,
    /// Target bidegree is `(arity+1, arity)`.
    pub arity: usize,
    pub coeffs: BTreeMap<String, SymbolSum>,
    /// Fixed discriminant for `SO_even`.
    pub disc: Option<Elem>,
}

fn subset_key(prefix: &str, mask: u32) -> String {
    let idx: Vec<String> = (0..32).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{prefix}[{}]", idx.join(","))
}

impl InvariantSpec {
    /// Coefficient slots: name, kind and required arity (`None` when the
    /// slot cannot occur at this target arity).
    pub fn slots(family: Family, n: usize) -> Vec<(String, Kind, Option<usize>)> {
        let lower = |d: usize| n.checked_sub(d);
        let mut out = vec![];
        let mut add = |name: &str, kind, d| out.push((name.to_string(), kind, lower(d)));
        match family {
            Family::OEven => {
                add("c", Kind::Additive, 0);
                add("e", Kind::Milnor, 0);
                add("f", Kind::Milnor, 1);
            }
            Family::OOdd => {
                add("c", Kind::Additive, 0);
                add("e", Kind::Additive, 1);
                add("f", Kind::Milnor, 1);
                add("g", Kind::Milnor, 2);
            }
            Family::SOOdd => {
                add("c", Kind::Additive, 0);
                add("f", Kind::Milnor, 1);
            }
            Family::SOEven => {
                add("c", Kind::Additive, 0);
                add("e", Kind::Milnor, 0);
                add("f", Kind::Milnor, 1);
                add("lambda", Kind::Milnor, 2);
            }
            Family::AbGp(r, s) => {
                for mask in 0u32..(1 << s) {
                    let d = mask.count_ones() as usize;
                    add(&subset_key("c", mask), Kind::Additive, d);
                    for j in 1..=r {
                        add(&subset_key(&format!("e{j}"), mask), Kind::Milnor, d);
                    }
                }
            }
            Family::MuP => {
                add("v", Kind::Additive, 0);
                add("w", Kind::Additive, 1);
            }
            Family::ZP => {
                add("v", Kind::Additive, 0);
                add("w", Kind::Milnor, 0);
            }
            Family::SymN => {
                add("c", Kind::Additive, 0);
                add("e", Kind::Milnor, 0);
            }
            Family::OpEval => {
                add("c", Kind::Additive, 0);
                out.push(("e".into(), Kind::Milnor, Some(0)));
            }
        }
        out
    }

    pub fn new(
        family: Family,
        field: &Tower,
        arity: usize,
        coeffs: BTreeMap<String, SymbolSum>,
        disc: Option<Elem>,
    ) -> Result<InvariantSpec> {
        let slots = InvariantSpec::slots(family, arity);
        for (name, s) in &coeffs {
            let Some((_, kind, want)) = slots.iter().find(|(n, _, _)| n == name) else {
                return Err(Error::FamilyMismatch(format!("{family} has no coefficient {name}")));
            };
            if s.is_empty() {
                continue;
            }
            if s.field != *field {
                return Err(Error::FieldMismatch);
            }
            if Some(s.arity) != *want {
                return Err(Error::FamilyMismatch(format!(
                    "coefficient {name} has arity {}, expected {want:?}",
                    s.arity
                )));
            }
            if *kind == Kind::Milnor && !is_milnor(s) {
                return Err(Error::FamilyMismatch(format!("coefficient {name} must have prime-field coefficients")));
            }
        }
        let spec = InvariantSpec { family, field: field.clone(), arity, coeffs, disc };
        if family == Family::SOEven {
            let d = spec.disc.clone().ok_or_else(|| Error::FamilyMismatch("SO_even needs disc".into()))?;
            let lambda = spec.coeff("lambda", arity.saturating_sub(2));
            certify_side_condition(field, &d, &lambda)?;
        }
        Ok(spec)
    }

    fn coeff(&self, name: &str, arity: usize) -> SymbolSum {
        self.coeffs.get(name).cloned().unwrap_or_else(|| SymbolSum::zero(&self.field, arity))
    }

    /// Reads `key = value` lines: `family`, `field`, `arity`, `disc`, and
    /// one line per nonzero coefficient. `#` starts a comment.
    pub fn parse(text: &str) -> Result<InvariantSpec> {
        let mut kv: Vec<(String, String)> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse("spec", format!("expected key = value, got {line}")))?;
            kv.push((k.trim().to_string(), v.trim().to_string()));
        }
        let get = |key: &str| {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::parse("spec", format!("missing {key}")))
        };
        let family: Family = get("family")?.parse()?;
        let field = crate::parse::field(&get("field")?)?;
        let arity = get("arity")?.parse().map_err(|_| Error::parse("spec", "arity must be an integer"))?;
        let disc = match kv.iter().find(|(k, _)| k == "disc") {
            Some((_, v)) => Some(crate::parse::element(&field, v)?),
            None => None,
        };
        let mut coeffs = BTreeMap::new();
        for (k, v) in &kv {
            if ["family", "field", "arity", "disc"].contains(&k.as_str()) {
                continue;
            }
            coeffs.insert(k.clone(), crate::parse::symbol_sum(&field, v)?);
        }
        InvariantSpec::new(family, &field, arity, coeffs, disc)
    }
}

/// Coefficients lie in the prime field.
pub fn is_milnor(s: &SymbolSum) -> bool {
    let k = &s.field;
    s.terms.iter().all(|t| k.to_gf(&t.coeff).is_some_and(|c| c < k.p()))
}

fn certify_side_condition(k: &Tower, d: &Elem, lambda: &SymbolSum) -> Result<()> {
    let prod = SymbolSum::single(k, d.clone(), vec![])?.times_milnor(lambda);
    match form_is_zero(&expand(&prod)) {
        Verdict::Zero => Ok(()),
        Verdict::NonZero(w) => Err(Error::SideConditionViolated(format!("[d]·lambda is nonzero: {w}"))),
        Verdict::Unknown(r) => Err(Error::SideConditionViolated(format!("[d]·lambda not certified: {r}"))),
    }
}

fn push_all(acc: &mut SymbolSum, part: SymbolSum) {
    if part.terms.is_empty() {
        return;
    }
    assert_eq!(acc.arity, part.arity, "invariant terms of unequal arity");
    acc.terms.extend(part.terms);
}

fn mismatch(spec: &InvariantSpec, what: &str) -> Error {
    Error::FamilyMismatch(format!("{} expects {what}", spec.family))
}

pub fn eval_invariant(spec: &InvariantSpec, x: &TorsorData) -> Result<CohClass> {
    let k = &spec.field;
    let n = spec.arity;
    let mut out = SymbolSum::zero(k, n);
    let cof = |name: &str, d: usize| spec.coeff(name, n.saturating_sub(d));
    match (spec.family, x) {
        (Family::OEven | Family::SOEven, TorsorData::Form(q)) if !q.is_odd() => {
            push_all(&mut out, cof("c", 0));
            push_all(&mut out, q.disc()?.rep.times_milnor(&cof("e", 0)));
            if n >= 1 {
                push_all(&mut out, q.clifford().rep.times_milnor(&cof("f", 1)));
            }
            if spec.family == Family::SOEven && n >= 2 {
                let d = spec.disc.clone().unwrap();
                let diff = k.sub(&q.disc_value()?, &d);
                if !as_normal_form(k, &diff)?.verdict.is_zero() {
                    return Err(Error::SideConditionViolated(format!("disc(q) differs from {}", k.format(&d))));
                }
                push_all(&mut out, b_lambda(q, &cof("lambda", 2))?.rep);
            }
        }
        (Family::OOdd | Family::SOOdd, TorsorData::Form(q)) if q.is_odd() => {
            push_all(&mut out, cof("c", 0));
            let clif = q.clifford().rep;
            if n >= 1 {
                push_all(&mut out, clif.times_milnor(&cof("f", 1)));
            }
            if spec.family == Family::OOdd {
                let dodd = q.disc_odd()?.rep;
                if n >= 1 {
                    push_all(&mut out, cof("e", 1).times_milnor(&dodd));
                }
                if n >= 2 {
                    push_all(&mut out, clif.times_milnor(&dodd).times_milnor(&cof("g", 2)));
                }
            }
        }
        (Family::AbGp(r, s), TorsorData::Abelian { a, b }) => {
            if a.len() != r || b.len() != s {
                return Err(mismatch(spec, &format!("{r} additive and {s} multiplicative entries")));
            }
            if b.iter().any(|x| k.is_zero(x)) {
                return Err(Error::DivisionByZero);
            }
            for mask in 0u32..(1 << s) {
                let d = mask.count_ones() as usize;
                if d > n {
                    continue;
                }
                let sym: Vec<Elem> = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| b[i].clone()).collect();
                let prod = SymbolSum::milnor(k, sym)?;
                push_all(&mut out, cof(&subset_key("c", mask), d).times_milnor(&prod));
                for (j, aj) in a.iter().enumerate() {
                    let e = cof(&subset_key(&format!("e{}", j + 1), mask), d);
                    let aj = SymbolSum::single(k, aj.clone(), vec![])?;
                    push_all(&mut out, aj.times_milnor(&e).times_milnor(&prod));
                }
            }
        }
        (Family::MuP, TorsorData::Unit(beta)) => {
            push_all(&mut out, cof("v", 0));
            if n >= 1 {
                push_all(&mut out, cof("w", 1).times_milnor(&SymbolSum::milnor(k, vec![beta.clone()])?));
            }
        }
        (Family::ZP, TorsorData::Additive(a)) => {
            push_all(&mut out, cof("v", 0));
            push_all(&mut out, SymbolSum::single(k, a.clone(), vec![])?.times_milnor(&cof("w", 0)));
        }
        (Family::SymN, TorsorData::Poly(f)) => {
            push_all(&mut out, cof("c", 0));
            push_all(&mut out, etale_disc(k, f)?.rep.times_milnor(&cof("e", 0)));
        }
        (Family::OpEval, TorsorData::Class(xs)) => {
            if xs.arity != n {
                return Err(mismatch(spec, &format!("a class of arity {n}")));
            }
            push_all(&mut out, cof("c", 0));
            let e = spec.coeff("e", 0);
            push_all(&mut out, xs.times_milnor(&e));
        }
        _ => return Err(mismatch(spec, "a different kind of input")),
    }
    Ok(CohClass::additive(out))
}

/// `[u1 v1; u1, u2}·λ` for `q = [u1,v1] + [u2,v2]`, zero when `u1 = 0` or `u2 = 0`.
pub fn b_lambda(q: &QuadForm, lambda: &SymbolSum) -> Result<CohClass> {
    if q.is_odd() || q.dim() != 4 {
        return Err(Error::WrongDimension { expected: 4, got: q.dim() });
    }
    let k = &q.field;
    let (u1, v1) = &q.blocks[0];
    let (u2, _) = &q.blocks[1];
    if k.is_zero(u1) || k.is_zero(u2) {
        return Ok(CohClass::additive(SymbolSum::zero(k, 2 + lambda.arity)));
    }
    let base = SymbolSum::single(k, k.mul(u1, v1), vec![u1.clone(), u2.clone()])?;
    Ok(CohClass::additive(base.times_milnor(lambda)))
}

/// [`b_lambda`] after certifying `[disc q]·λ = 0`.
pub fn b_lambda_checked(q: &QuadForm, lambda: &SymbolSum) -> Result<CohClass> {
    certify_side_condition(&q.field, &q.disc_value()?, lambda)?;
    b_lambda(q, lambda)
}

fn require_char2(k: &Tower) -> Result<()> {
    if k.p() != 2 {
        return Err(Error::InvalidField(format!("{k} does not have characteristic 2")));
    }
    Ok(())
}

fn check_squarefree(k: &Tower, f: &[Elem]) -> Result<()> {
    let f = up::trim(k, f.to_vec());
    if f.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if f.len() > 2 && up::gcd(k, &f, &up::derivative(k, &f)).len() > 1 {
        return Err(Error::NotSquarefree);
    }
    Ok(())
}

/// Class of `ξ(f) = sum_{i<j} r_i r_j/(r_i+r_j)^2` in `H^{1,0}(F)`.
///
/// Over a finite field the roots are found in a splitting field; otherwise
/// the class is summed over irreducible factors, which must have degree ≤ 2.
pub fn etale_disc(k: &Tower, f: &[Elem]) -> Result<CohClass> {
    require_char2(k)?;
    check_squarefree(k, f)?;
    let f = up::monic(k, &up::trim(k, f.to_vec()));
    let value = if k.is_finite() {
        let coeffs: Vec<u32> = f.iter().map(|c| k.to_gf(c).unwrap()).collect();
        k.from_gf(disc_by_splitting(k.gf(), &coeffs)?)
    } else {
        let mut acc = k.zero();
        for (g, _) in factor_over(k, &f)? {
            match g.len() - 1 {
                1 => {}
                2 => acc = k.add(&acc, &k.div(&g[0], &k.mul(&g[1], &g[1])).unwrap()),
                d => {
                    return Err(Error::SplittingBudgetExceeded(format!(
                        "irreducible factor of degree {d} over {k}"
                    )))
                }
            }
        }
        acc
    };
    Ok(CohClass::additive(SymbolSum::single(k, value, vec![])?))
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// `ξ(f)` over GF(q), via the roots of `f` in GF(q^L).
pub fn disc_by_splitting(gf: &crate::gf::Gf, f: &[u32]) -> Result<u32> {
    let factors = factor_gf(gf, f)?;
    let l = factors.iter().fold(1u32, |acc, (g, _)| lcm(acc, (g.len() - 1) as u32));
    let budget = crate::gf::MAX_ORDER as f64;
    if (gf.q() as f64).powi(l as i32) > budget {
        return Err(Error::SplittingBudgetExceeded(format!("splitting field of degree {l} over GF({})", gf.q())));
    }
    let emb = Embedding::new(gf, l)?;
    let big = emb.big.clone();
    let image: Vec<u32> = f.iter().map(|&c| emb.map(c)).collect();
    let roots: Vec<u32> = factor_gf(&big, &image)?.into_iter().map(|(g, _)| big.neg(g[0])).collect();
    let mut xi = 0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let s = big.add(roots[i], roots[j]);
            let t = big.mul(big.mul(roots[i], roots[j]), big.inv(big.mul(s, s)).unwrap());
            xi = big.add(xi, t);
        }
    }
    emb.preimage(xi).ok_or_else(|| Error::SplittingBudgetExceeded("ξ is not Galois-invariant".into()))
}

/// Whether the discriminant class of a squarefree `f` over GF(q) vanishes,
/// by the parity of the number of irreducible factors.
pub fn disc_parity_oracle(gf: &crate::gf::Gf, f: &[u32]) -> Result<bool> {
    let deg = f.len() - 1;
    let r = factor_gf(gf, f)?.len();
    Ok(r % 2 == deg % 2)
}

fn milnor_copies(x: &SymbolSum) -> Result<Vec<Vec<Elem>>> {
    let k = &x.field;
    let mut out = Vec::new();
    for t in &x.terms {
        let c = k.to_gf(&t.coeff).filter(|&c| c < k.p());
        let Some(c) = c else {
            return Err(Error::FamilyMismatch("divided powers need prime-field coefficients".into()));
        };
        for _ in 0..c {
            out.push(t.args.clone());
        }
    }
    Ok(out)
}

/// `γ_i(sum_j s_j) = sum_{|T|=i} prod_{j∈T} s_j` on a Milnor class.
pub fn gamma(x: &SymbolSum, i: usize) -> Result<CohClass> {
    let k = &x.field;
    let m = x.arity;
    if k.p() != 2 && m % 2 == 1 {
        return Err(Error::UnsupportedParity);
    }
    let copies = milnor_copies(x)?;
    let mut out = SymbolSum::zero(k, i * m);
    let mut idx: Vec<usize> = (0..i).collect();
    if i == 0 {
        out.terms.push(SymbolTerm { coeff: k.one(), args: vec![] });
    } else if i <= copies.len() {
        loop {
            let args: Vec<Elem> = idx.iter().flat_map(|&j| copies[j].iter().cloned()).collect();
            out.terms.push(SymbolTerm { coeff: k.one(), args });
            let mut pos = i;
            while pos > 0 && idx[pos - 1] == copies.len() - i + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            for q in pos..i {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    CohClass::new(out, i * m)
}

/// Sources of isomorphic input pairs for [`verify_invariance`].
#[derive(Clone, Debug)]
pub enum PairSource {
    /// Random forms with `blocks` blocks (odd when `odd`), moved by a random move.
    RevoyMoves { blocks: usize, odd: bool },
    /// Random squarefree polynomials of degree `deg` and a shift `x ↦ x + c`.
    PolyShift { deg: usize },
    /// Random classes of the spec's arity and a cohomology-level rewrite.
    KatoRewrite,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    /// `(seed, message)` for each failing or unknown trial.
    pub notes: Vec<(u64, String)>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pass={} fail={} unknown={}", self.pass, self.fail, self.unknown)
    }
}

fn random_form<R: Rng>(k: &Tower, rng: &mut R, blocks: usize, odd: bool) -> QuadForm {
    let bl = (0..blocks).map(|_| (sample::poly(k, rng, 1), sample::poly(k, rng, 1))).collect();
    let diag = odd.then(|| sample::nonzero_poly(k, rng, 1));
    QuadForm::new(k, bl, diag).unwrap()
}

fn random_move<R: Rng>(k: &Tower, rng: &mut R, q: &QuadForm) -> Move {
    let nb = q.blocks.len();
    let i = rng.gen_range(0..nb);
    let beta = sample::nonzero_poly(k, rng, 1);
    match rng.gen_range(0..4) {
        0 if nb >= 2 => Move::A(rng.gen_range(0..nb - 1)),
        1 => Move::B(i, beta),
        2 => Move::C(i, beta),
        _ => Move::D(i, beta),
    }
}

fn random_squarefree<R: Rng>(k: &Tower, rng: &mut R, deg: usize) -> Vec<Elem> {
    loop {
        let mut f: Vec<Elem> = (0..deg).map(|_| sample::constant(k, rng)).collect();
        f.push(k.one());
        if check_squarefree(k, &f).is_ok() {
            return f;
        }
    }
}

/// Evaluates the invariant on `trials` random isomorphic pairs and certifies
/// equality of the two values. Trials are independent and seeded by `seed + i`.
pub fn verify_invariance(spec: &InvariantSpec, source: &PairSource, trials: usize, seed: u64) -> Report {
    let k = &spec.field;
    let mut rep = Report::default();
    for i in 0..trials {
        let s = seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let pair = match source {
            PairSource::RevoyMoves { blocks, odd } => {
                let q = random_form(k, &mut rng, *blocks, *odd);
                let mv = random_move(k, &mut rng, &q);
                revoy_move(&q, &mv).map(|q2| (TorsorData::Form(q), TorsorData::Form(q2)))
            }
            PairSource::PolyShift { deg } => {
                let f = random_squarefree(k, &mut rng, *deg);
                let c = sample::constant(k, &mut rng);
                let shifted = up::compose(k, &f, &[c, k.one()]);
                Ok((TorsorData::Poly(f), TorsorData::Poly(shifted)))
            }
            PairSource::KatoRewrite => {
                let mut x = SymbolSum::zero(k, spec.arity);
                for _ in 0..2 {
                    let args = (0..spec.arity).map(|_| sample::nonzero_poly(k, &mut rng, 1)).collect();
                    x.push(sample::poly(k, &mut rng, 1), args).unwrap();
                }
                let y = kato_rewrite_random(&x, s, 6, RewriteLevel::Cohomology);
                Ok((TorsorData::Class(x), TorsorData::Class(y)))
            }
        };
        let outcome = pair.and_then(|(x, y)| {
            let a = eval_invariant(spec, &x)?;
            let b = eval_invariant(spec, &y)?;
            Ok(form_is_zero(&expand(&a.rep.sub(&b.rep))))
        });
        match outcome {
            Ok(Verdict::Zero) => rep.pass += 1,
            Ok(Verdict::NonZero(w)) => {
                rep.fail += 1;
                rep.notes.push((s, w));
            }
            Ok(Verdict::Unknown(r)) => {
                rep.unknown += 1;
                rep.notes.push((s, r));
            }
            Err(e) => {
                rep.unknown += 1;
                rep.notes.push((s, e.to_string()));
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::hnn_is_zero;
    use crate::gf::Gf;

    #[test]
    fn etale_disc_of_quadratic() {
        let k = Tower::gf_vars(2, 2, &[]).unwrap();
        for c in 0..4 {
            let f = vec![k.from_gf(c), k.one(), k.one()];
            if check_squarefree(&k, &f).is_err() {
                continue;
            }
            let d = etale_disc(&k, &f).unwrap();
            assert_eq!(d.rep.terms[0].coeff, k.from_gf(c));
        }
        let x = vec![k.zero(), k.one()];
        assert_eq!(etale_disc(&k, &x).unwrap().rep.terms[0].coeff, k.zero());
    }

    #[test]
    fn parity_matches_splitting_degree_four() {
        let gf = Gf::new(2, 1).unwrap();
        for code in 0u32..16 {
            let mut f: Vec<u32> = (0..4).map(|i| code >> i & 1).collect();
            f.push(1);
            let k = Tower::new(gf.clone(), &[]).unwrap();
            let fe: Vec<Elem> = f.iter().map(|&c| k.from_gf(c)).collect();
            if check_squarefree(&k, &fe).is_err() {
                continue;
            }
            let xi = disc_by_splitting(&gf, &f).unwrap();
            assert_eq!(gf.trace(xi) == 0, disc_parity_oracle(&gf, &f).unwrap(), "{f:?}");
        }
    }

    #[test]
    fn gamma_basics() {
        let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
        let x = SymbolSum::milnor(&k, vec![k.var(0), k.var(1)]).unwrap();
        assert_eq!(gamma(&x, 1).unwrap().rep, x);
        let g0 = gamma(&x, 0).unwrap();
        assert_eq!(g0.bidegree, (0, 0));
        assert!(!hnn_is_zero(&g0));
        let k3 = Tower::gf_vars(3, 1, &["x"]).unwrap();
        assert_eq!(gamma(&SymbolSum::milnor(&k3, vec![k3.var(0)]).unwrap(), 2), Err(Error::UnsupportedParity));
    }

    #[test]
    fn abelian_symbol_product() {
        let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert("e1[1]".to_string(), SymbolSum::milnor(&k, vec![]).unwrap());
        let spec = InvariantSpec::new(Family::AbGp(1, 1), &k, 1, coeffs, None).unwrap();
        let v = eval_invariant(&spec, &TorsorData::Abelian { a: vec![k.var(0)], b: vec![k.var(1)] }).unwrap();
        let want = SymbolSum::single(&k, k.var(0), vec![k.var(1)]).unwrap();
        assert_eq!(expand(&v.rep), expand(&want));
    }

    #[test]
    fn o_even_disc_over_gf2() {
        let k = Tower::gf_vars(2, 1, &[]).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert("e".to_string(), SymbolSum::milnor(&k, vec![]).unwrap());
        let spec = InvariantSpec::new(Family::OEven, &k, 0, coeffs, None).unwrap();
        let q = QuadForm::parse(&k, "qf([1,1],[0,0])").unwrap();
        let v = eval_invariant(&spec, &TorsorData::Form(q)).unwrap();
        assert!(form_is_zero(&v.form()).is_nonzero());
        let rep = verify_invariance(&spec, &PairSource::RevoyMoves { blocks: 2, odd: false }, 20, 1);
        assert_eq!((rep.pass, rep.fail), (20, 0));
    }

    #[test]
    fn spec_file_round_trip() {
        let text = "family = SO_even\nfield = GF(2)(x)\narity = 2\ndisc = 0\nlambda = {}\nc = [x; x, x+1]\n";
        let spec = InvariantSpec::parse(text).unwrap();
        assert_eq!(spec.family, Family::SOEven);
        assert!(InvariantSpec::parse("family = SO_even\nfield = GF(2)(x)\narity = 2\ndisc = x\nlambda = {}\n").is_err());
    }
}
