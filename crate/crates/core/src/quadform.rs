//! Nonsingular quadratic forms in characteristic 2.
//!
//! A form is an orthogonal sum of blocks `[a,b] = a x^2 + xy + b y^2`, plus
//! an optional line `<c>` in odd dimension. For `a ≠ 0`, `[a,b] ≅ a<<ab]]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::cohomology::{as_normal_form, form_is_zero, CohClass, Verdict};
use crate::error::{Error, Result};
use crate::form::{expand, SymbolSum};
use crate::gf::Gf;
use crate::tower::{Elem, Tower};
use crate::upoly::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    pub field: Tower,
    pub blocks: Vec<(Elem, Elem)>,
    pub diag: Option<Elem>,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        let bs: Vec<String> =
            self.blocks.iter().map(|(a, b)| format!("[{},{}]", k.format(a), k.format(b))).collect();
        write!(f, "qf({}", bs.join(","))?;
        if let Some(c) = &self.diag {
            write!(f, "; diag={}", k.format(c))?;
        }
        f.write_str(")")
    }
}

fn check_char2(k: &Tower) -> Result<()> {
    if k.p() != 2 {
        return Err(Error::InvalidField(format!("{k} does not have characteristic 2")));
    }
    Ok(())
}

impl QuadForm {
    pub fn new(field: &Tower, blocks: Vec<(Elem, Elem)>, diag: Option<Elem>) -> Result<QuadForm> {
        check_char2(field)?;
        if diag.as_ref().is_some_and(|c| field.is_zero(c)) {
            return Err(Error::SingularForm("diagonal entry is zero".into()));
        }
        Ok(QuadForm { field: field.clone(), blocks, diag })
    }

    pub fn parse(field: &Tower, s: &str) -> Result<QuadForm> {
        let (blocks, diag) = crate::parse::form_parts(field, s)?;
        QuadForm::new(field, blocks, diag)
    }

    /// `n` copies of the hyperbolic plane `[0,0]`.
    pub fn hyperbolic(field: &Tower, n: usize) -> QuadForm {
        QuadForm { field: field.clone(), blocks: vec![(field.zero(), field.zero()); n], diag: None }
    }

    /// `<<a]] = [1,a]`.
    pub fn pfister(field: &Tower, a: Elem) -> QuadForm {
        QuadForm { field: field.clone(), blocks: vec![(field.one(), a)], diag: None }
    }

    pub fn dim(&self) -> usize {
        2 * self.blocks.len() + usize::from(self.diag.is_some())
    }

    pub fn is_odd(&self) -> bool {
        self.diag.is_some()
    }

    /// Orthogonal sum; at most one summand may be odd.
    pub fn sum(&self, o: &QuadForm) -> Result<QuadForm> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.diag.is_some() && o.diag.is_some() {
            return Err(Error::OddDimension("sum of two odd forms".into()));
        }
        let mut blocks = self.blocks.clone();
        blocks.extend(o.blocks.iter().cloned());
        Ok(QuadForm { field: self.field.clone(), blocks, diag: self.diag.clone().or(o.diag.clone()) })
    }

    /// `c·q`, rewritten in block form: `c[a,b] ≅ [ca, b/c]`.
    pub fn scale(&self, c: &Elem) -> Result<QuadForm> {
        let k = &self.field;
        let ci = k.inv(c).ok_or(Error::DivisionByZero)?;
        let blocks = self.blocks.iter().map(|(a, b)| (k.mul(c, a), k.mul(&ci, b))).collect();
        let diag = self.diag.as_ref().map(|d| k.mul(c, d));
        Ok(QuadForm { field: k.clone(), blocks, diag })
    }

    /// Upper-triangular coefficient array in the block basis.
    pub fn matrix(&self) -> Vec<Vec<Elem>> {
        let k = &self.field;
        let n = self.dim();
        let mut m = vec![vec![k.zero(); n]; n];
        for (i, (a, b)) in self.blocks.iter().enumerate() {
            m[2 * i][2 * i] = a.clone();
            m[2 * i][2 * i + 1] = k.one();
            m[2 * i + 1][2 * i + 1] = b.clone();
        }
        if let Some(c) = &self.diag {
            m[n - 1][n - 1] = c.clone();
        }
        m
    }

    /// `sum a_i b_i`; its class in `F/𝒫(F)` is the Arf invariant.
    pub fn disc_value(&self) -> Result<Elem> {
        if self.is_odd() {
            return Err(Error::OddDimension("disc needs an even form".into()));
        }
        let k = &self.field;
        Ok(k.sum(&self.blocks.iter().map(|(a, b)| k.mul(a, b)).collect::<Vec<_>>()))
    }

    pub fn disc(&self) -> Result<CohClass> {
        let k = &self.field;
        Ok(CohClass::additive(SymbolSum::single(k, self.disc_value()?, vec![])?))
    }

    /// The square class `{c}` of an odd form.
    pub fn disc_odd(&self) -> Result<CohClass> {
        let Some(c) = &self.diag else {
            return Err(Error::EvenDimension("disc_odd needs an odd form".into()));
        };
        CohClass::new(SymbolSum::milnor(&self.field, vec![c.clone()])?, 1)
    }

    /// `sum_{a≠0} [ab; a}`, plus `[disc r; c}` for `<c> + r`.
    pub fn clifford(&self) -> CohClass {
        let k = &self.field;
        let mut s = SymbolSum::zero(k, 1);
        for (a, b) in &self.blocks {
            if !k.is_zero(a) {
                s.push(k.mul(a, b), vec![a.clone()]).unwrap();
            }
        }
        if let Some(c) = &self.diag {
            let r = QuadForm { diag: None, ..self.clone() };
            let d = r.disc_value().unwrap();
            if !k.is_zero(&d) {
                s.push(d, vec![c.clone()]).unwrap();
            }
        }
        CohClass::additive(s)
    }

    /// Value of the form at a vector in the block basis.
    pub fn eval(&self, v: &[Elem]) -> Elem {
        eval_matrix(&self.field, &self.matrix(), v)
    }
}

pub fn eval_matrix(k: &Tower, m: &[Vec<Elem>], v: &[Elem]) -> Elem {
    let mut acc = k.zero();
    for i in 0..m.len() {
        for j in i..m.len() {
            if !k.is_zero(&m[i][j]) {
                acc = k.add(&acc, &k.mul(&m[i][j], &k.mul(&v[i], &v[j])));
            }
        }
    }
    acc
}

fn polar(k: &Tower, m: &[Vec<Elem>], u: &[Elem], v: &[Elem]) -> Elem {
    let mut acc = k.zero();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if !k.is_zero(&m[i][j]) {
                let t = k.add(&k.mul(&u[i], &v[j]), &k.mul(&u[j], &v[i]));
                acc = k.add(&acc, &k.mul(&m[i][j], &t));
            }
        }
    }
    acc
}

/// Symplectic reduction of `sum_{i≤j} m_ij x_i x_j`.
pub fn from_matrix(k: &Tower, m: &[Vec<Elem>]) -> Result<QuadForm> {
    check_char2(k)?;
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(n, m.iter().map(|r| r.len()).max().unwrap_or(0)));
    }
    let mut rest: Vec<Vec<Elem>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect();
    let mut blocks = Vec::new();
    loop {
        let mut pair = None;
        'search: for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let b = polar(k, m, &rest[i], &rest[j]);
                if !k.is_zero(&b) {
                    pair = Some((i, j, b));
                    break 'search;
                }
            }
        }
        let Some((i, j, b)) = pair else { break };
        let v = rest.remove(j);
        let u = rest.remove(i);
        let binv = k.inv(&b).unwrap();
        let v: Vec<Elem> = v.iter().map(|x| k.mul(x, &binv)).collect();
        blocks.push((eval_matrix(k, m, &u), eval_matrix(k, m, &v)));
        for w in rest.iter_mut() {
            let cu = polar(k, m, w, &v);
            let cv = polar(k, m, w, &u);
            for idx in 0..n {
                let t = k.add(&k.mul(&cu, &u[idx]), &k.mul(&cv, &v[idx]));
                w[idx] = k.add(&w[idx], &t);
            }
        }
    }
    let diag = match rest.len() {
        0 => None,
        1 => {
            let c = eval_matrix(k, m, &rest[0]);
            if k.is_zero(&c) {
                return Err(Error::SingularForm("form vanishes on the radical".into()));
            }
            Some(c)
        }
        r => return Err(Error::SingularForm(format!("radical of dimension {r}"))),
    };
    QuadForm::new(k, blocks, diag)
}

/// Revoy chain moves on the block list, and the moves that slide
/// `β<c>` into a block of an odd form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// `[a_i + b_{i+1}, b_i] + [a_{i+1} + b_i, b_{i+1}]`.
    A(usize),
    /// `[β^2 a_i, β^-2 b_i]`.
    B(usize, Elem),
    /// `[a_i + β^2 b_i + β, b_i]`.
    C(usize, Elem),
    /// `[a_i, b_i + β^2 a_i + β]`.
    D(usize, Elem),
    /// `a_i ↦ a_i + β^2 c`.
    E(usize, Elem),
    /// `b_i ↦ b_i + β^2 c`.
    F(usize, Elem),
    /// `c ↦ β^2 c`.
    G(Elem),
}

impl Move {
    pub fn label(&self, k: &Tower) -> String {
        match self {
            Move::A(i) => format!("A({i})"),
            Move::B(i, b) => format!("B({i},{})", k.format(b)),
            Move::C(i, b) => format!("C({i},{})", k.format(b)),
            Move::D(i, b) => format!("D({i},{})", k.format(b)),
            Move::E(i, b) => format!("E({i},{})", k.format(b)),
            Move::F(i, b) => format!("F({i},{})", k.format(b)),
            Move::G(b) => format!("G({})", k.format(b)),
        }
    }
}

pub fn revoy_move(q: &QuadForm, mv: &Move) -> Result<QuadForm> {
    let k = &q.field;
    let nb = q.blocks.len();
    let mut out = q.clone();
    let check = |i: usize| if i < nb { Ok(()) } else { Err(Error::BadIndex(format!("block {i} of {nb}"))) };
    let diag = || q.diag.clone().ok_or_else(|| Error::EvenDimension("move needs an odd form".into()));
    match mv {
        Move::A(i) => {
            check(*i + 1)?;
            let (a0, b0) = q.blocks[*i].clone();
            let (a1, b1) = q.blocks[*i + 1].clone();
            out.blocks[*i] = (k.add(&a0, &b1), b0.clone());
            out.blocks[*i + 1] = (k.add(&a1, &b0), b1);
        }
        Move::B(i, beta) => {
            check(*i)?;
            if k.is_zero(beta) {
                return Err(Error::ZeroBeta);
            }
            let (a, b) = &q.blocks[*i];
            let b2 = k.mul(beta, beta);
            out.blocks[*i] = (k.mul(&b2, a), k.div(b, &b2).unwrap());
        }
        Move::C(i, beta) => {
            check(*i)?;
            let (a, b) = &q.blocks[*i];
            let t = k.add(&k.mul(&k.mul(beta, beta), b), beta);
            out.blocks[*i] = (k.add(a, &t), b.clone());
        }
        Move::D(i, beta) => {
            check(*i)?;
            let (a, b) = &q.blocks[*i];
            let t = k.add(&k.mul(&k.mul(beta, beta), a), beta);
            out.blocks[*i] = (a.clone(), k.add(b, &t));
        }
        Move::E(i, beta) | Move::F(i, beta) => {
            check(*i)?;
            let c = diag()?;
            let t = k.mul(&k.mul(beta, beta), &c);
            let (a, b) = &q.blocks[*i];
            out.blocks[*i] =
                if matches!(mv, Move::E(..)) { (k.add(a, &t), b.clone()) } else { (a.clone(), k.add(b, &t)) };
        }
        Move::G(beta) => {
            let c = diag()?;
            if k.is_zero(beta) {
                return Err(Error::ZeroBeta);
            }
            out.diag = Some(k.mul(&k.mul(beta, beta), &c));
        }
    }
    Ok(out)
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum Iso {
    Yes(Certificate),
    No(String),
    Unknown(String),
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// Columns are the images of the target's block basis in the source's.
    Isometry(Vec<Vec<Elem>>),
    /// A move sequence from the source to the target (up to block order).
    Moves(Vec<Move>),
}

impl Iso {
    pub fn is_yes(&self) -> bool {
        matches!(self, Iso::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, Iso::No(_))
    }
}

/// Checks `q(M x) = q'(x)` coefficientwise, with `M` given by its columns.
pub fn verify_isometry(q: &QuadForm, target: &QuadForm, cols: &[Vec<Elem>]) -> bool {
    let k = &q.field;
    let m = q.matrix();
    let mt = target.matrix();
    let n = target.dim();
    if cols.len() != n || q.dim() != n {
        return false;
    }
    for i in 0..n {
        if eval_matrix(k, &m, &cols[i]) != mt[i][i] {
            return false;
        }
        for j in i + 1..n {
            if polar(k, &m, &cols[i], &cols[j]) != mt[i][j] {
                return false;
            }
        }
    }
    true
}

/// Arf invariant over a finite field, in GF(2).
pub fn arf(q: &QuadForm) -> Result<u32> {
    let k = &q.field;
    if !k.is_finite() {
        return Err(Error::InvalidField(format!("{k} is not finite")));
    }
    let d = q.disc_value()?;
    Ok(k.gf().trace(k.to_gf(&d).unwrap()))
}

/// Zeros of `q` on `F^dim` (finite `F`).
pub fn point_count(q: &QuadForm) -> u64 {
    let gf = q.field.gf().clone();
    let m = to_u32(&q.matrix());
    let n = m.len();
    all_vectors(&gf, n).filter(|v| eval_u32(&gf, &m, v) == 0).count() as u64
}

fn to_u32(m: &[Vec<Elem>]) -> Vec<Vec<u32>> {
    m.iter().map(|r| r.iter().map(|e| if let Elem::C(c) = e { *c } else { panic!("finite field expected") }).collect()).collect()
}

fn all_vectors(gf: &Gf, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let q = gf.q() as u64;
    (0..q.pow(n as u32)).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect()
    })
}

fn eval_u32(gf: &Gf, m: &[Vec<u32>], v: &[u32]) -> u32 {
    let mut acc = 0;
    for i in 0..m.len() {
        for j in i..m.len() {
            if m[i][j] != 0 {
                acc = gf.add(acc, gf.mul(m[i][j], gf.mul(v[i], v[j])));
            }
        }
    }
    acc
}

fn polar_u32(gf: &Gf, m: &[Vec<u32>], u: &[u32], v: &[u32]) -> u32 {
    let mut acc = 0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if m[i][j] != 0 {
                let t = gf.add(gf.mul(u[i], v[j]), gf.mul(u[j], v[i]));
                acc = gf.add(acc, gf.mul(m[i][j], t));
            }
        }
    }
    acc
}

/// Backtracking search for an isometry `target → q` over a finite field.
pub fn find_isometry(q: &QuadForm, target: &QuadForm) -> Option<Vec<Vec<Elem>>> {
    let gf = q.field.gf().clone();
    let n = q.dim();
    if target.dim() != n {
        return None;
    }
    let m = to_u32(&q.matrix());
    let mt = to_u32(&target.matrix());
    let vecs: Vec<(Vec<u32>, u32)> =
        all_vectors(&gf, n).map(|v| (v.clone(), eval_u32(&gf, &m, &v))).filter(|(v, _)| v.iter().any(|&x| x != 0)).collect();
    // the radical line first, then the blocks in order
    let mut order: Vec<usize> = (0..n).collect();
    if target.is_odd() {
        order.rotate_right(1);
    }
    let mut chosen: Vec<Option<usize>> = vec![None; n];
    fn rec(
        depth: usize,
        order: &[usize],
        chosen: &mut Vec<Option<usize>>,
        vecs: &[(Vec<u32>, u32)],
        gf: &Gf,
        m: &[Vec<u32>],
        mt: &[Vec<u32>],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let slot = order[depth];
        for (ci, (v, qv)) in vecs.iter().enumerate() {
            if *qv != mt[slot][slot] {
                continue;
            }
            let ok = order[..depth].iter().all(|&o| {
                let w = &vecs[chosen[o].unwrap()].0;
                let want = if o < slot { mt[o][slot] } else { mt[slot][o] };
                polar_u32(gf, m, v, w) == want
            });
            if !ok {
                continue;
            }
            chosen[slot] = Some(ci);
            if rec(depth + 1, order, chosen, vecs, gf, m, mt) {
                return true;
            }
            chosen[slot] = None;
        }
        false
    }
    if !rec(0, &order, &mut chosen, &vecs, &gf, &m, &mt) {
        return None;
    }
    let cols = chosen.iter().map(|c| vecs[c.unwrap()].0.iter().map(|&x| Elem::C(x)).collect()).collect();
    Some(cols)
}

/// Search configuration for isomorphism over infinite fields.
#[derive(Clone, Debug)]
pub struct ChainSearch {
    pub betas: Vec<Elem>,
    pub depth: usize,
    pub max_states: usize,
}

impl ChainSearch {
    /// `β ∈ {1, v, v+1, 1/v}` for each variable `v`.
    pub fn default_for(k: &Tower) -> ChainSearch {
        let mut betas = vec![k.one()];
        for i in 0..k.depth() {
            let v = k.var(i);
            betas.push(v.clone());
            betas.push(k.add(&v, &k.one()));
            betas.push(k.inv(&v).unwrap());
        }
        ChainSearch { betas, depth: 12, max_states: 20_000 }
    }
}

fn canonical_key(q: &QuadForm) -> (Vec<(Elem, Elem)>, Option<Elem>) {
    let mut b = q.blocks.clone();
    b.sort();
    (b, q.diag.clone())
}

fn moves_for(q: &QuadForm, betas: &[Elem]) -> Vec<Move> {
    let nb = q.blocks.len();
    let mut out = Vec::new();
    for i in 0..nb {
        if i + 1 < nb {
            out.push(Move::A(i));
        }
        for b in betas {
            out.push(Move::B(i, b.clone()));
            out.push(Move::C(i, b.clone()));
            out.push(Move::D(i, b.clone()));
            if q.is_odd() {
                out.push(Move::E(i, b.clone()));
                out.push(Move::F(i, b.clone()));
            }
        }
    }
    if q.is_odd() {
        for b in betas {
            out.push(Move::G(b.clone()));
        }
    }
    out
}

/// Breadth-first search over move sequences, with block order ignored.
pub fn chain_search(q: &QuadForm, target: &QuadForm, cfg: &ChainSearch) -> Option<Vec<Move>> {
    let goal = canonical_key(target);
    let start = canonical_key(q);
    if start == goal {
        return Some(vec![]);
    }
    let mut prev: HashMap<(Vec<(Elem, Elem)>, Option<Elem>), (Option<(Vec<(Elem, Elem)>, Option<Elem>)>, Option<Move>)> =
        HashMap::new();
    prev.insert(start.clone(), (None, None));
    let mut queue = VecDeque::from([(q.clone(), 0usize)]);
    while let Some((cur, d)) = queue.pop_front() {
        if d >= cfg.depth {
            continue;
        }
        let ck = canonical_key(&cur);
        for mv in moves_for(&cur, &cfg.betas) {
            let Ok(next) = revoy_move(&cur, &mv) else { continue };
            let nk = canonical_key(&next);
            if prev.contains_key(&nk) {
                continue;
            }
            prev.insert(nk.clone(), (Some(ck.clone()), Some(mv)));
            if nk == goal {
                let mut path = Vec::new();
                let mut at = nk;
                while let Some((Some(p), Some(m))) = prev.get(&at).cloned() {
                    path.push(m);
                    at = p;
                }
                path.reverse();
                return Some(path);
            }
            if prev.len() >= cfg.max_states {
                return None;
            }
            queue.push_back((next, d + 1));
        }
    }
    None
}

fn verdict_differs(v: Verdict) -> std::result::Result<bool, String> {
    match v {
        Verdict::Zero => Ok(false),
        Verdict::NonZero(_) => Ok(true),
        Verdict::Unknown(r) => Err(r),
    }
}

/// Whether the invariants of two forms of one parity separate them.
fn invariants_differ(q: &QuadForm, o: &QuadForm) -> Result<Option<String>> {
    let k = &q.field;
    if !q.is_odd() {
        let d = k.sub(&q.disc_value()?, &o.disc_value()?);
        if as_normal_form(k, &d)?.verdict.is_nonzero() {
            return Ok(Some(format!("disc: {} vs {}", k.format(&q.disc_value()?), k.format(&o.disc_value()?))));
        }
    } else {
        let ratio = k.mul(q.diag.as_ref().unwrap(), o.diag.as_ref().unwrap());
        if k.pth_root(&ratio).is_none() {
            return Ok(Some("disc_odd: square classes differ".into()));
        }
    }
    let diff = q.clifford().rep.sub(&o.clifford().rep);
    match verdict_differs(form_is_zero(&expand(&diff))) {
        Ok(true) => Ok(Some(format!("clifford: {} vs {}", q.clifford(), o.clifford()))),
        Ok(false) => Ok(None),
        Err(r) => Err(Error::UnsupportedResidueField(r)),
    }
}

pub fn is_isomorphic(q: &QuadForm, o: &QuadForm, cfg: &ChainSearch) -> Result<Iso> {
    if q.field != o.field {
        return Err(Error::FieldMismatch);
    }
    if q.dim() != o.dim() {
        return Err(Error::DimensionMismatch(q.dim(), o.dim()));
    }
    let k = &q.field;
    if k.is_finite() {
        if !q.is_odd() {
            let (a, b) = (arf(q)?, arf(o)?);
            if a != b {
                return Ok(Iso::No(format!("arf: {a} vs {b}")));
            }
        }
        return Ok(match find_isometry(q, o) {
            Some(cols) => Iso::Yes(Certificate::Isometry(cols)),
            None => Iso::Unknown("no isometry found".into()),
        });
    }
    match invariants_differ(q, o) {
        Ok(Some(w)) => return Ok(Iso::No(w)),
        Ok(None) => {}
        Err(e) => return Ok(Iso::Unknown(e.to_string())),
    }
    Ok(match chain_search(q, o, cfg) {
        Some(path) => Iso::Yes(Certificate::Moves(path)),
        None => Iso::Unknown(format!("no move chain within depth {}", cfg.depth)),
    })
}

/// `<<a1]] + <<a1+d]]` against `<<d]] + H`.
pub fn pfister_sum_identity(k: &Tower, d: &Elem, a1: &Elem, cfg: &ChainSearch) -> Result<Iso> {
    let lhs = QuadForm::pfister(k, a1.clone()).sum(&QuadForm::pfister(k, k.add(a1, d)))?;
    let rhs = QuadForm::pfister(k, d.clone()).sum(&QuadForm::hyperbolic(k, 1))?;
    is_isomorphic(&lhs, &rhs, cfg)
}

/// `<b> + b<<a]]` against `<b> + H`.
pub fn cancellation_pair(k: &Tower, a: &Elem, b: &Elem) -> Result<(QuadForm, QuadForm)> {
    let line = QuadForm::new(k, vec![], Some(b.clone()))?;
    let lhs = line.sum(&QuadForm::pfister(k, a.clone()).scale(b)?)?;
    let rhs = line.sum(&QuadForm::hyperbolic(k, 1))?;
    Ok((lhs, rhs))
}

/// Every upper-triangular coefficient array of size `n` over `gf`, by index.
fn decode(gf: &Gf, n: usize, mut idx: u64) -> Vec<Vec<u32>> {
    let q = gf.q() as u64;
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            m[i][j] = (idx % q) as u32;
            idx /= q;
        }
    }
    m
}

fn encode(gf: &Gf, m: &[Vec<u32>]) -> u64 {
    let q = gf.q() as u64;
    let n = m.len();
    let mut idx = 0;
    let mut mul = 1;
    for i in 0..n {
        for j in i..n {
            idx += m[i][j] as u64 * mul;
            mul *= q;
        }
    }
    idx
}

/// Coefficients of `q(T x)` where `T` sends `x_i ↦ x_i + c x_j`, or scales `x_i` by `c` when `i == j`.
fn substitute_u32(gf: &Gf, m: &[Vec<u32>], i: usize, j: usize, c: u32) -> Vec<Vec<u32>> {
    let n = m.len();
    let mut out = m.to_vec();
    let at = |r: usize, s: usize| if r <= s { (r, s) } else { (s, r) };
    if i == j {
        let c2 = gf.mul(c, c);
        out[i][i] = gf.mul(m[i][i], c2);
        for k in 0..n {
            if k != i {
                let (r, s) = at(i, k);
                out[r][s] = gf.mul(m[r][s], c);
            }
        }
        return out;
    }
    // x_i^2 ↦ x_i^2 + c^2 x_j^2
    out[j][j] = gf.add(out[j][j], gf.mul(m[i][i], gf.mul(c, c)));
    for k in 0..n {
        if k == i {
            continue;
        }
        let (r, s) = at(i, k);
        let v = gf.mul(m[r][s], c);
        if v == 0 {
            continue;
        }
        // x_i x_k ↦ x_i x_k + c x_j x_k
        let (r2, s2) = at(j, k);
        out[r2][s2] = gf.add(out[r2][s2], v);
    }
    out
}

/// Dimension of the radical of the polar form, and whether `q` is nonzero on it
/// (checked only when that dimension is 1).
fn nonsingular_u32(gf: &Gf, m: &[Vec<u32>]) -> bool {
    let n = m.len();
    let mut b: Vec<Vec<u32>> = (0..n)
        .map(|r| (0..n).map(|s| if r < s { m[r][s] } else if s < r { m[s][r] } else { 0 }).collect())
        .collect();
    // row reduce, tracking pivot columns
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| b[r][col] != 0) else { continue };
        b.swap(row, pr);
        let inv = gf.inv(b[row][col]).unwrap();
        for x in b[row].iter_mut() {
            *x = gf.mul(*x, inv);
        }
        for r in 0..n {
            if r != row && b[r][col] != 0 {
                let f = b[r][col];
                for c2 in 0..n {
                    let t = gf.mul(f, b[row][c2]);
                    b[r][c2] = gf.sub(b[r][c2], t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    match n - pivots.len() {
        0 => true,
        1 => {
            let free = (0..n).find(|c| !pivots.contains(c)).unwrap();
            let mut v = vec![0; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = gf.neg(b[r][free]);
            }
            eval_u32(gf, m, &v) != 0
        }
        _ => false,
    }
}

/// Isomorphism orbits of all nonsingular forms of dimension `n` over a finite
/// field, as lists of coefficient arrays.
pub fn brute_force_orbit(gf: &Gf, n: usize, budget: u64) -> Result<Vec<Vec<Vec<Vec<u32>>>>> {
    let total = (gf.q() as u64).checked_pow((n * (n + 1) / 2) as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded(format!("{total} forms exceed budget {budget}")));
    }
    let mut parent: Vec<u32> = (0..total as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    // transvections with an additive basis of scalars, and one scaling
    let mut gens: Vec<(usize, usize, u32)> = Vec::new();
    let basis: Vec<u32> = (0..gf.m()).map(|e| gf.exp(e as u64)).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for &c in &basis {
                    gens.push((i, j, c));
                }
            }
        }
    }
    if n > 0 && gf.q() > 2 {
        gens.push((0, 0, gf.gen()));
    }
    let mut keep: Vec<bool> = vec![false; total as usize];
    for idx in 0..total {
        let m = decode(gf, n, idx);
        if !nonsingular_u32(gf, &m) {
            continue;
        }
        keep[idx as usize] = true;
        for &(i, j, c) in &gens {
            let t = encode(gf, &substitute_u32(gf, &m, i, j, c)) as u32;
            let (a, b) = (find(&mut parent, idx as u32), find(&mut parent, t));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let mut groups: HashMap<u32, Vec<Vec<Vec<u32>>>> = HashMap::new();
    for idx in 0..total {
        if keep[idx as usize] {
            let r = find(&mut parent, idx as u32);
            groups.entry(r).or_default().push(decode(gf, n, idx));
        }
    }
    let mut out: Vec<_> = groups.into_values().collect();
    out.sort_by_key(|g| encode(gf, &g[0]));
    Ok(out)
}

/// Converts a coefficient array to block form.
pub fn form_of_array(gf: &Gf, m: &[Vec<u32>]) -> Result<QuadForm> {
    let k = Tower::new(gf.clone(), &[])?;
    let em: Vec<Vec<Elem>> = m.iter().map(|r| r.iter().map(|&x| Elem::C(x)).collect()).collect();
    from_matrix(&k, &em)
}

/// Zeros on `F^n` of a coefficient array.
pub fn point_count_array(gf: &Gf, m: &[Vec<u32>]) -> u64 {
    all_vectors(gf, m.len()).filter(|v| eval_u32(gf, m, v) == 0).count() as u64
}

/// The forms `sum a_i x_{2i}^2 + x_{2i} x_{2i+1} + b_i x_{2i+1}^2` over GF(2):
/// the quadratic refinements of the standard symplectic form.
pub fn symplectic_refinements(k: &Tower, blocks: usize) -> Vec<QuadForm> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << (2 * blocks)) {
        let bl = (0..blocks)
            .map(|i| (k.from_gf((bits >> (2 * i)) & 1), k.from_gf((bits >> (2 * i + 1)) & 1)))
            .collect();
        out.push(QuadForm { field: k.clone(), blocks: bl, diag: None });
    }
    out
}

/// The set of all `(a,b)` blocks of a form, ignoring order.
pub fn block_multiset(q: &QuadForm) -> HashSet<(Elem, Elem)> {
    q.blocks.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Tower {
        Tower::gf_vars(2, 1, &[]).unwrap()
    }

    #[test]
    fn from_matrix_examples() {
        let k = gf2();
        let (z, o) = (k.zero(), k.one());
        let q = from_matrix(&k, &[vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]]).unwrap();
        assert_eq!(q.blocks, vec![(z.clone(), z.clone())]);
        let l = from_matrix(&k, &[vec![o.clone()]]).unwrap();
        assert_eq!(l.diag, Some(o.clone()));
        assert!(from_matrix(&k, &[vec![o.clone(), z.clone()], vec![z.clone(), o]]).is_err());
    }

    #[test]
    fn moves_preserve_point_counts_over_gf4() {
        let k = Tower::gf_vars(2, 2, &[]).unwrap();
        let els: Vec<Elem> = (0..4).map(|c| k.from_gf(c)).collect();
        for a in &els {
            for b in &els {
                let q = QuadForm::new(&k, vec![(a.clone(), b.clone()), (b.clone(), k.one())], None).unwrap();
                let pc = point_count(&q);
                for beta in &els[1..] {
                    for mv in [Move::A(0), Move::B(1, beta.clone()), Move::C(0, beta.clone()), Move::D(1, beta.clone())] {
                        assert_eq!(point_count(&revoy_move(&q, &mv).unwrap()), pc);
                    }
                }
                assert_eq!(revoy_move(&revoy_move(&q, &Move::A(0)).unwrap(), &Move::A(0)).unwrap(), q);
            }
        }
    }

    #[test]
    fn arf_separates_dim_four() {
        let k = gf2();
        let h2 = QuadForm::parse(&k, "qf([0,0],[0,0])").unwrap();
        let other = QuadForm::parse(&k, "qf([1,1],[0,0])").unwrap();
        let cfg = ChainSearch::default_for(&k);
        assert!(matches!(is_isomorphic(&h2, &other, &cfg).unwrap(), Iso::No(w) if w == "arf: 0 vs 1"));
        let split = symplectic_refinements(&k, 2);
        let zero = split.iter().filter(|q| arf(q).unwrap() == 0).count();
        assert_eq!((zero, split.len() - zero), (10, 6));
    }

    #[test]
    fn cancellation_failure_has_explicit_isometry() {
        let k = Tower::gf_vars(2, 2, &[]).unwrap();
        for a in 0..4 {
            for b in 1..4 {
                let (l, r) = cancellation_pair(&k, &k.from_gf(a), &k.from_gf(b)).unwrap();
                let Iso::Yes(Certificate::Isometry(m)) = is_isomorphic(&l, &r, &ChainSearch::default_for(&k)).unwrap() else {
                    panic!("no isometry");
                };
                assert!(verify_isometry(&l, &r, &m));
            }
        }
    }

    #[test]
    fn orbits_over_gf2_match_arf() {
        let gf = Gf::new(2, 1).unwrap();
        let orbits = brute_force_orbit(&gf, 2, 1 << 20).unwrap();
        assert_eq!(orbits.len(), 2);
        let mut sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        sizes.sort();
        // xy-coefficient 1 is forced; Arf 1 only for x^2+xy+y^2
        assert_eq!(sizes, vec![1, 3]);
        assert_eq!(brute_force_orbit(&gf, 3, 1 << 20).unwrap().len(), 1);
    }

    #[test]
    fn clifford_of_twisted_pfister_is_ramified() {
        let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
        let q = QuadForm::pfister(&k, k.var(0)).scale(&k.t()).unwrap().sum(&QuadForm::hyperbolic(&k, 1)).unwrap();
        let v = form_is_zero(&q.clifford().form());
        assert_eq!(v, Verdict::NonZero("place=(t) residue=[x]".into()));
    }
}
