//! Verification batteries. Each battery runs seeded trials against an
//! independent oracle and tallies pass, fail and unknown outcomes.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{
    as_normal_form, cyclic_kill_check, filtration_level, form_is_zero, global_decompose, is_zero_global,
    reciprocity_check, residue, CohClass, Verdict,
};
use crate::error::{Error, Result};
use crate::form::{expand, kato_rewrite_random, milnor_rewrite_random, RewriteLevel, SymbolSum};
use crate::gf::Gf;
use crate::invariants::{b_lambda, disc_by_splitting, disc_parity_oracle, etale_disc, gamma};
use crate::membership::{membership_auto, DegreeSchedule, Membership};
use crate::parse;
use crate::quadform::{
    arf, brute_force_orbit, cancellation_pair, find_isometry, form_of_array, pfister_sum_identity, revoy_move,
    symplectic_refinements, verify_isometry, ChainSearch, Certificate, Iso, Move, QuadForm,
};
use crate::sample;
use crate::tower::{Elem, Tower};
use crate::upoly::Field;

pub const SUITES: &[&str] = &[
    "classify-f2",
    "identities",
    "reciprocity",
    "operations",
    "invariance",
    "filtration",
    "cyclic",
    "normal-form",
    "etale",
    "blambda",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    /// Record lines for failing and unknown trials, plus summary facts.
    pub lines: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: &str, seed: u64) -> SuiteReport {
        SuiteReport { name: name.into(), seed, pass: 0, fail: 0, unknown: 0, lines: vec![] }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.unknown
    }

    pub fn ok(&self) -> bool {
        self.fail == 0
    }

    /// Fraction of trials that ended Unknown.
    pub fn unknown_rate(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.unknown as f64 / self.total() as f64
        }
    }

    pub fn record(&mut self, trial: impl fmt::Display, o: Outcome, detail: impl fmt::Display) {
        match o {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::Unknown => self.unknown += 1,
        }
        if o != Outcome::Pass {
            self.lines.push(format!("trial={trial} outcome={o} detail={detail}"));
        }
    }

    pub fn note(&mut self, line: String) {
        self.lines.push(line);
    }

    pub fn absorb(&mut self, o: SuiteReport) {
        self.pass += o.pass;
        self.fail += o.fail;
        self.unknown += o.unknown;
        self.lines.extend(o.lines.into_iter().map(|l| format!("battery={} {l}", o.name)));
    }

    pub fn summary(&self) -> String {
        format!("suite={} pass={} fail={} unknown={} seed={}", self.name, self.pass, self.fail, self.unknown, self.seed)
    }
}

fn verdict_outcome(v: &Verdict, want_zero: bool) -> Outcome {
    match v {
        Verdict::Zero if want_zero => Outcome::Pass,
        Verdict::NonZero(_) if !want_zero => Outcome::Pass,
        Verdict::Unknown(_) => Outcome::Unknown,
        _ => Outcome::Fail,
    }
}

fn rng_for(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial as u64))
}

/// Runs a named suite. `trials` overrides the default trial count of the
/// randomized batteries.
pub fn run_suite(name: &str, trials: Option<usize>, seed: u64) -> Result<SuiteReport> {
    let n = |d: usize| trials.unwrap_or(d);
    let mut rep = SuiteReport::new(name, seed);
    match name {
        "classify-f2" => rep.absorb(classify(4)?),
        "identities" => rep.absorb(identities()?),
        "reciprocity" => rep.absorb(reciprocity(n(200), seed)),
        "operations" => {
            rep.absorb(divided_powers(n(100), seed));
            rep.absorb(normal_form(n(500), seed));
            rep.absorb(etale(6)?);
        }
        "invariance" => {
            rep.absorb(revoy_invariance(n(1000), seed));
            rep.absorb(b_lambda_invariance(n(100), seed));
        }
        "filtration" => rep.absorb(filtration(n(200), seed)),
        "cyclic" => rep.absorb(cyclic(n(50), seed)),
        "normal-form" => rep.absorb(normal_form(n(500), seed)),
        "etale" => rep.absorb(etale(6)?),
        "blambda" => rep.absorb(b_lambda_invariance(n(100), seed)),
        _ => return Err(Error::parse("suite", format!("unknown suite `{name}`; expected one of {}", SUITES.join(", ")))),
    }
    Ok(rep)
}

/// Orbit partitions of nonsingular forms over GF(2) and GF(4) against the
/// `(dim, Arf)` classification, and the Arf split of symplectic refinements.
pub fn classify(max_dim: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("classify", 0);
    let k2 = Tower::gf_vars(2, 1, &[])?;
    let blocks = max_dim / 2;
    let mut split = [0usize; 2];
    for q in symplectic_refinements(&k2, blocks) {
        split[arf(&q)? as usize] += 1;
    }
    let expected = [(1usize << (2 * blocks - 1)) + (1 << (blocks - 1)), (1 << (2 * blocks - 1)) - (1 << (blocks - 1))];
    rep.note(format!("refinements dim={} arf0={} arf1={}", 2 * blocks, split[0], split[1]));
    rep.record(format!("refinements-{}", 2 * blocks), if split == expected { Outcome::Pass } else { Outcome::Fail }, format!("{split:?}"));
    for m in [1, 2] {
        let gf = Gf::new(2, m)?;
        for n in 1..=max_dim {
            let orbits = brute_force_orbit(&gf, n, 1 << 22)?;
            let mut keys: HashMap<Option<u32>, usize> = HashMap::new();
            let mut coherent = true;
            for (oi, orbit) in orbits.iter().enumerate() {
                let mut key = None;
                for (j, arr) in orbit.iter().enumerate() {
                    let q = form_of_array(&gf, arr)?;
                    let a = if q.is_odd() { None } else { Some(arf(&q)?) };
                    if j == 0 {
                        key = Some(a);
                    } else if key != Some(a) {
                        coherent = false;
                    }
                }
                if keys.insert(key.flatten(), oi).is_some() {
                    coherent = false;
                }
            }
            let want = if n % 2 == 1 { 1 } else { 2 };
            let ok = coherent && orbits.len() == want;
            let label = format!("GF({})-dim{n}", gf.q());
            rep.note(format!("orbits field=GF({}) dim={n} count={}", gf.q(), orbits.len()));
            rep.record(label, if ok { Outcome::Pass } else { Outcome::Fail }, format!("orbits={}", orbits.len()));
        }
    }
    Ok(rep)
}

fn isometry_outcome(l: &QuadForm, r: &QuadForm) -> (Outcome, String) {
    match find_isometry(r, l) {
        Some(cols) if verify_isometry(r, l, &cols) => (Outcome::Pass, String::new()),
        Some(_) => (Outcome::Fail, format!("bad isometry {l} -> {r}")),
        None => (Outcome::Fail, format!("no isometry {l} -> {r}")),
    }
}

/// Cancellation failure and the Pfister sum identity, exhaustively over
/// GF(2), GF(4) and GF(8), each certified by an explicit isometry.
pub fn identities() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("identities", 0);
    for m in 1..=3 {
        let k = Tower::gf_vars(2, m, &[])?;
        let elems: Vec<Elem> = k.gf().elements().map(|c| k.from_gf(c)).collect();
        for a in &elems {
            for b in elems.iter().filter(|b| !k.is_zero(b)) {
                let (l, r) = cancellation_pair(&k, a, b)?;
                let (o, d) = isometry_outcome(&l, &r);
                rep.record(format!("cancel GF({}) a={} b={}", k.gf().q(), k.format(a), k.format(b)), o, d);
            }
        }
        let cfg = ChainSearch::default_for(&k);
        for d in &elems {
            for a1 in &elems {
                let trial = format!("pfister-sum GF({}) d={} a1={}", k.gf().q(), k.format(d), k.format(a1));
                let (o, det) = match pfister_sum_identity(&k, d, a1, &cfg)? {
                    Iso::Yes(Certificate::Isometry(_)) => {
                        let lhs = QuadForm::pfister(&k, a1.clone()).sum(&QuadForm::pfister(&k, k.add(a1, d)))?;
                        let rhs = QuadForm::pfister(&k, d.clone()).sum(&QuadForm::hyperbolic(&k, 1))?;
                        isometry_outcome(&lhs, &rhs)
                    }
                    Iso::Yes(Certificate::Moves(p)) => (Outcome::Pass, format!("moves={}", p.len())),
                    Iso::No(w) => (Outcome::Fail, w),
                    Iso::Unknown(w) => (Outcome::Unknown, w),
                };
                rep.record(trial, o, det);
            }
        }
    }
    Ok(rep)
}

fn random_block<R: Rng>(k: &Tower, rng: &mut R) -> (Elem, Elem) {
    let mut entry = || {
        let n = sample::poly(k, rng, 2);
        if k.depth() == 0 {
            return n;
        }
        k.div(&n, &sample::nonzero_poly(k, rng, 2)).unwrap()
    };
    (entry(), entry())
}

fn random_revoy_move<R: Rng>(k: &Tower, rng: &mut R, nb: usize) -> Move {
    let i = rng.gen_range(0..nb);
    let beta = sample::nonzero_rational(k, rng, 1);
    match rng.gen_range(0..4) {
        0 if nb >= 2 => Move::A(rng.gen_range(0..nb - 1)),
        0 | 1 => Move::B(i, beta),
        2 => Move::C(i, beta),
        _ => Move::D(i, beta),
    }
}

fn classes_agree(a: &CohClass, b: &CohClass) -> Verdict {
    is_zero_global(&CohClass::additive(a.rep.sub(&b.rep)))
}

/// `disc` and `clifford` before and after a random move A–D on random even
/// forms over GF(2), GF(4) and GF(2)(x).
pub fn revoy_invariance(trials: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("revoy", seed);
    let fields = [
        Tower::gf_vars(2, 1, &[]).unwrap(),
        Tower::gf_vars(2, 2, &[]).unwrap(),
        Tower::gf_vars(2, 1, &["x"]).unwrap(),
    ];
    let mut nontrivial = 0;
    for i in 0..trials {
        let k = &fields[i % fields.len()];
        let mut rng = rng_for(seed, i);
        let nb = rng.gen_range(1..=3);
        let q = QuadForm::new(k, (0..nb).map(|_| random_block(k, &mut rng)).collect(), None).unwrap();
        let mv = random_revoy_move(k, &mut rng, nb);
        let outcome = (|| -> Result<(Outcome, String)> {
            let q2 = revoy_move(&q, &mv)?;
            nontrivial += is_zero_global(&q.clifford()).is_nonzero() as usize;
            let dv = as_normal_form(k, &k.add(&q.disc_value()?, &q2.disc_value()?))?.verdict;
            let cv = classes_agree(&q.clifford(), &q2.clifford());
            let o = match (verdict_outcome(&dv, true), verdict_outcome(&cv, true)) {
                (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
                (Outcome::Unknown, _) | (_, Outcome::Unknown) => Outcome::Unknown,
                _ => Outcome::Pass,
            };
            Ok((o, format!("form={q} move={} disc={dv} clifford={cv}", mv.label(k))))
        })();
        match outcome {
            Ok((o, d)) => rep.record(i, o, d),
            Err(e) => rep.record(i, Outcome::Unknown, e),
        }
    }
    rep.note(format!("nonzero-clifford={nontrivial}"));
    rep
}

/// A random product `c·prod (t + α)^e` with `α, c` among small constants of `k0`.
fn rational_ramified<R: Rng>(k: &Tower, rng: &mut R, alphas: &[Elem], max_factors: usize) -> Elem {
    let k0 = k.base();
    let mut out = k.lift(alphas[rng.gen_range(0..alphas.len())].clone());
    if k.is_zero(&out) {
        out = k.one();
    }
    for _ in 0..rng.gen_range(0..=max_factors) {
        let a = k.lift(alphas[rng.gen_range(0..alphas.len())].clone());
        let f = k.add(&k.t(), &a);
        let e = rng.gen_range(-1i64..=2);
        out = k.mul(&out, &k.powi(&f, e).unwrap());
    }
    let _ = k0;
    out
}

fn small_constants(k: &Tower) -> Vec<Elem> {
    let k0 = k.base();
    let mut out = vec![k0.zero(), k0.one()];
    if k0.depth() > 0 {
        let x = k0.var(k0.depth() - 1);
        out.push(x.clone());
        out.push(k0.add(&x, &k0.one()));
    } else {
        out.extend(k0.gf().elements().skip(2).map(|c| k0.from_gf(c)));
    }
    out
}

/// Random 4-dimensional forms `[u1,v1] + [u2,v2]` over GF(2)(x)(t) with
/// trivial discriminant and rational ramification.
fn trivial_disc_form<R: Rng>(k: &Tower, rng: &mut R) -> QuadForm {
    let al = small_constants(k);
    let u1 = rational_ramified(k, rng, &al, 2);
    let v1 = rational_ramified(k, rng, &al, 2);
    let u2 = rational_ramified(k, rng, &al, 2);
    let e = if rng.gen_bool(0.5) { k.zero() } else { rational_ramified(k, rng, &al, 1) };
    let v2 = k.div(&k.add(&k.mul(&u1, &v1), &k.wp(&e)), &u2).unwrap();
    QuadForm::new(k, vec![(u1, v1), (u2, v2)], None).unwrap()
}

/// `b_λ` with `λ = 1` before and after random moves A–D on trivial-discriminant
/// forms. Moves leading to non-rational ramification are resampled.
pub fn b_lambda_invariance(trials: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("blambda", seed);
    let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
    let lambda = SymbolSum::milnor(&k, vec![]).unwrap();
    let al = small_constants(&k);
    let mut resampled = 0;
    let mut nontrivial = 0;
    for i in 0..trials {
        let mut rng = rng_for(seed, i);
        let mut last = None;
        for _attempt in 0..40 {
            let q = trivial_disc_form(&k, &mut rng);
            let mv = match rng.gen_range(0..4) {
                0 => Move::A(0),
                r => {
                    let beta = rational_ramified(&k, &mut rng, &al, 1);
                    let j = rng.gen_range(0..2);
                    [Move::B(j, beta.clone()), Move::C(j, beta.clone()), Move::D(j, beta)][r - 1].clone()
                }
            };
            let res = (|| -> Result<(Verdict, String)> {
                let q2 = revoy_move(&q, &mv)?;
                nontrivial += is_zero_global(&b_lambda(&q, &lambda)?).is_nonzero() as usize;
                let d = CohClass::additive(b_lambda(&q, &lambda)?.rep.sub(&b_lambda(&q2, &lambda)?.rep));
                let dec = global_decompose(&d)?;
                let v = is_zero_global(&d);
                Ok((v, format!("form={q} move={} ramified={}", mv.label(&k), dec.local.len())))
            })();
            match res {
                Ok((Verdict::Unknown(_), _)) | Err(_) => {
                    resampled += 1;
                    last = Some(res);
                }
                Ok(r) => {
                    last = Some(Ok(r));
                    break;
                }
            }
        }
        match last {
            Some(Ok((v, d))) => rep.record(i, verdict_outcome(&v, true), format!("{d} verdict={v}")),
            Some(Err(e)) => rep.record(i, Outcome::Unknown, e),
            None => rep.record(i, Outcome::Unknown, "no sample"),
        }
    }
    rep.note(format!("resampled={resampled} nonzero-blambda={nontrivial}"));
    rep
}

/// Hand-derived filtration levels and residues over GF(2)(x)(t).
pub const LEVEL_CORPUS: &[(&str, &str, usize, Option<&str>)] = &[
    ("[1/t^2; x]", "t", 1, None),
    ("[1/t; x]", "t", 1, None),
    ("[x/t; t]", "t", 1, None),
    ("[1/t; t]", "t", 0, Some("[0]")),
    ("[x/t^2; t]", "t", 2, None),
    ("[1/t^3; x]", "t", 3, None),
    ("[1/t^4; x]", "t", 1, None),
    ("[x; t]", "t", 0, Some("[x]")),
    ("[x+1; t]", "t", 0, Some("[x+1]")),
    ("[x; t+1]", "t+1", 0, Some("[x]")),
    ("[x; t^3]", "t", 0, Some("[x]")),
    ("[x; t]", "inf", 0, Some("[x]")),
    ("[t; x]", "inf", 1, None),
    ("[x; x]", "t", 0, Some("[0]")),
];

/// Corpus levels, then `is_zero_global` against bounded membership on
/// random `H^{2,1}` classes over GF(2)(t).
pub fn filtration(trials: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("filtration", seed);
    let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
    for (i, (cls, pl, level, res)) in LEVEL_CORPUS.iter().enumerate() {
        let got = (|| -> Result<(usize, Option<SymbolSum>)> {
            let c = CohClass::additive(parse::symbol_sum(&k, cls)?);
            let place = parse::place(&k, pl)?;
            let la = filtration_level(&c, &place)?;
            let r = if la.level == 0 { Some(residue(&c, &place)?) } else { None };
            Ok((la.level, r))
        })();
        let o = match (&got, res) {
            (Ok((l, r)), want) if l == level => match (r, want) {
                (None, None) => Outcome::Pass,
                (Some(r), Some(w)) => {
                    let w = parse::symbol_sum(&k.base(), w).unwrap();
                    match form_is_zero(&expand(&r.sub(&w))) {
                        Verdict::Zero => Outcome::Pass,
                        Verdict::Unknown(_) => Outcome::Unknown,
                        Verdict::NonZero(_) => Outcome::Fail,
                    }
                }
                _ => Outcome::Fail,
            },
            (Err(_), _) => Outcome::Unknown,
            _ => Outcome::Fail,
        };
        let detail = match &got {
            Ok((l, r)) => format!("class={cls} place={pl} level={l} residue={}", r.as_ref().map_or("-".into(), |r| r.to_string())),
            Err(e) => format!("class={cls} place={pl} error={e}"),
        };
        rep.record(format!("corpus-{i}"), o, detail);
    }
    let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
    let sched = DegreeSchedule::default();
    let mut zeros = 0;
    for i in 0..trials {
        let mut rng = rng_for(seed, i);
        let mut x = SymbolSum::zero(&k, 1);
        for _ in 0..rng.gen_range(1..=2) {
            x.push(sample::rational(&k, &mut rng, 3), vec![sample::nonzero_rational(&k, &mut rng, 2)]).unwrap();
        }
        match i % 3 {
            0 => {
                let y = kato_rewrite_random(&x, rng.gen(), 4, RewriteLevel::Cohomology);
                x = x.sub(&y);
            }
            1 => {
                let b = parse::element(&k, ["t", "t+1", "t^2+t+1"][rng.gen_range(0..3)]).unwrap();
                x.push(sample::nonzero_poly(&k, &mut rng, 1), vec![b]).unwrap();
            }
            _ => {}
        }
        let c = CohClass::additive(x.clone());
        let v = is_zero_global(&c);
        zeros += v.is_zero() as usize;
        let m = membership_auto(&c.form(), &sched);
        let o = match (&v, &m) {
            (Verdict::Zero, Ok(Membership::InImage(_))) => Outcome::Pass,
            (Verdict::NonZero(_), Ok(Membership::NotWithin(_))) => Outcome::Pass,
            (Verdict::Unknown(_), _) | (_, Err(_)) => Outcome::Unknown,
            _ => Outcome::Fail,
        };
        let ms = match &m {
            Ok(Membership::InImage(_)) => "in-image".to_string(),
            Ok(Membership::NotWithin(d)) => format!("not-within-{d}"),
            Err(e) => e.to_string(),
        };
        rep.record(i, o, format!("class={x} verdict={v} membership={ms}"));
    }
    rep.note(format!("random zero={zeros} nonzero={}", trials - zeros));
    rep
}

/// Residue sums of tame classes with rational ramification over
/// GF(2)(x)(t) and GF(3)(x)(t), arities 1 and 2.
pub fn reciprocity(trials: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("reciprocity", seed);
    let fields = [Tower::gf_vars(2, 1, &["x", "t"]).unwrap(), Tower::gf_vars(3, 1, &["x", "t"]).unwrap()];
    for i in 0..trials {
        let k = &fields[i % 2];
        let mut rng = rng_for(seed, i);
        let al = small_constants(k);
        let n = 1 + (i / 2) % 2;
        let mut x = SymbolSum::zero(k, n);
        for _ in 0..rng.gen_range(1..=2) {
            let mut a = k.lift(sample::nonzero_poly(&k.base(), &mut rng, 1));
            if rng.gen_bool(0.3) {
                a = k.add(&a, &k.lift(k.base().wp(&sample::poly(&k.base(), &mut rng, 1))));
            }
            let mut args = vec![rational_ramified(k, &mut rng, &al, 2)];
            if n == 2 {
                let b = if rng.gen_bool(0.5) {
                    k.lift(sample::nonzero_poly(&k.base(), &mut rng, 1))
                } else {
                    rational_ramified(k, &mut rng, &al, 1)
                };
                args.push(b);
            }
            x.push(a, args).unwrap();
        }
        let c = CohClass::additive(x.clone());
        match reciprocity_check(&c) {
            Ok(true) => rep.record(i, Outcome::Pass, ""),
            Ok(false) => rep.record(i, Outcome::Fail, format!("class={x}")),
            Err(e) => rep.record(i, Outcome::Fail, format!("class={x} error={e}")),
        }
    }
    rep
}

/// `[t]·w` pulled back along `t = z^2 - z`, for Milnor `w` over GF(2)(x)(t).
pub fn cyclic(trials: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("cyclic", seed);
    let k = Tower::gf_vars(2, 1, &["x", "t"]).unwrap();
    let pool = ["x", "x+1", "x^2+x+1", "t", "x*t", "t+1"];
    let pool: Vec<Elem> = pool.iter().map(|s| parse::element(&k, s).unwrap()).collect();
    for i in 0..trials {
        let mut rng = rng_for(seed, i);
        let n = rng.gen_range(1..=2);
        let mut w = SymbolSum::zero(&k, n);
        for _ in 0..rng.gen_range(1..=2) {
            let args = (0..n).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
            w.push(k.one(), args).unwrap();
        }
        let c = CohClass::new(w.clone(), n).unwrap();
        match cyclic_kill_check(&c) {
            Ok(v) => rep.record(i, verdict_outcome(&v, true), format!("w={w} verdict={v}")),
            Err(e) => rep.record(i, Outcome::Unknown, format!("w={w} error={e}")),
        }
    }
    rep
}

/// Whether `a = u^2 + u` has a solution `u ∈ GF(2)(t)`, by exhaustive search
/// over numerators. A reduced solution `N/D` forces `den(a) = D^2`.
pub fn splitting_search(k: &Tower, a: &Elem) -> bool {
    let (num, den) = k.num_den(a);
    let (num, den) = (k.from_poly(num.to_vec()), k.from_poly(den.to_vec()));
    let Some(d) = k.pth_root(&den) else { return false };
    let deg = |e: &Elem| k.num_den(e).0.len().saturating_sub(1);
    let bound = deg(&num).div_ceil(2).max(deg(&d));
    let b = k.base();
    for code in 0u64..(1 << (bound + 1)) {
        let coeffs: Vec<Elem> = (0..=bound).map(|j| b.from_gf((code >> j & 1) as u32)).collect();
        let n = k.from_poly(coeffs);
        if k.add(&k.mul(&n, &n), &k.mul(&n, &d)) == num {
            return true;
        }
    }
    false
}

/// Artin–Schreier normal form verdicts against [`splitting_search`] over GF(2)(t).
pub fn normal_form(trials: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("normal-form", seed);
    let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
    for i in 0..trials {
        let mut rng = rng_for(seed, i);
        let a = if i % 2 == 0 {
            k.wp(&sample::rational(&k, &mut rng, 2))
        } else {
            sample::rational(&k, &mut rng, 3)
        };
        let split = splitting_search(&k, &a);
        match as_normal_form(&k, &a) {
            Ok(nf) => {
                let o = verdict_outcome(&nf.verdict, split);
                rep.record(i, o, format!("a={} split={split} verdict={}", k.format(&a), nf.verdict));
            }
            Err(e) => rep.record(i, Outcome::Unknown, format!("a={} error={e}", k.format(&a))),
        }
    }
    rep
}

/// Convolution and representation independence of `γ_i` on `H^{2,2}(GF(2)(x,y))`.
pub fn divided_powers(trials: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("divided-powers", seed);
    let k = Tower::gf_vars(2, 1, &["x", "y"]).unwrap();
    let random_class = |rng: &mut ChaCha8Rng| {
        let mut s = SymbolSum::zero(&k, 2);
        for _ in 0..rng.gen_range(1..=3) {
            s.push(k.one(), vec![sample::nonzero_poly(&k, rng, 1), sample::nonzero_poly(&k, rng, 1)]).unwrap();
        }
        s
    };
    let same = |a: &SymbolSum, b: &SymbolSum| expand(a) == expand(b);
    for i in 0..trials {
        let mut rng = rng_for(seed, i);
        let x = random_class(&mut rng);
        let y = random_class(&mut rng);
        let res = (|| -> Result<bool> {
            for deg in 0..=3 {
                let lhs = gamma(&x.concat(&y), deg)?.rep;
                let mut rhs = SymbolSum::zero(&k, 2 * deg);
                for j in 0..=deg {
                    rhs = rhs.concat(&gamma(&x, j)?.rep.times_milnor(&gamma(&y, deg - j)?.rep));
                }
                if !same(&lhs, &rhs) {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        match res {
            Ok(true) => rep.record(format!("conv-{i}"), Outcome::Pass, ""),
            Ok(false) => rep.record(format!("conv-{i}"), Outcome::Fail, format!("x={x} y={y}")),
            Err(e) => rep.record(format!("conv-{i}"), Outcome::Unknown, e),
        }
        let x2 = milnor_rewrite_random(&x, rng.gen(), 6);
        let res = (|| -> Result<bool> {
            for deg in 0..=3 {
                if !same(&gamma(&x, deg)?.rep, &gamma(&x2, deg)?.rep) {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        match res {
            Ok(true) => rep.record(format!("rewrite-{i}"), Outcome::Pass, ""),
            Ok(false) => rep.record(format!("rewrite-{i}"), Outcome::Fail, format!("x={x} x'={x2}")),
            Err(e) => rep.record(format!("rewrite-{i}"), Outcome::Unknown, e),
        }
    }
    rep
}

/// Étale discriminant of every squarefree `f` over GF(2) up to `max_deg`:
/// splitting-field trace, the class-level evaluator and the parity oracle.
pub fn etale(max_deg: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("etale", 0);
    let gf = Gf::new(2, 1)?;
    let k = Tower::new(gf.clone(), &[])?;
    for deg in 1..=max_deg {
        for code in 0u32..(1 << deg) {
            let mut f: Vec<u32> = (0..deg).map(|j| code >> j & 1).collect();
            f.push(1);
            let fe: Vec<Elem> = f.iter().map(|&c| k.from_gf(c)).collect();
            let cls = match etale_disc(&k, &fe) {
                Ok(c) => c,
                Err(Error::NotSquarefree) => continue,
                Err(e) => return Err(e),
            };
            let split_zero = gf.trace(disc_by_splitting(&gf, &f)?) == 0;
            let class_zero = is_zero_global(&cls).is_zero();
            let parity = disc_parity_oracle(&gf, &f)?;
            let o = if split_zero == parity && class_zero == parity { Outcome::Pass } else { Outcome::Fail };
            rep.record(format!("f={f:?}"), o, format!("splitting={split_zero} class={class_zero} parity={parity}"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_search_basics() {
        let k = Tower::gf_vars(2, 1, &["t"]).unwrap();
        let t = k.t();
        assert!(splitting_search(&k, &k.wp(&k.inv(&t).unwrap())));
        assert!(!splitting_search(&k, &k.inv(&t).unwrap()));
        assert!(!splitting_search(&k, &k.one()));
        assert!(splitting_search(&k, &k.zero()));
    }

    #[test]
    fn small_batteries_pass() {
        for rep in [normal_form(40, 3), reciprocity(20, 3), cyclic(6, 3), divided_powers(5, 3)] {
            assert_eq!(rep.fail, 0, "{}: {:?}", rep.name, rep.lines);
        }
        assert_eq!(etale(4).unwrap().fail, 0);
    }

    #[test]
    fn corpus_levels() {
        let rep = filtration(0, 1);
        assert_eq!((rep.fail, rep.unknown), (0, 0), "{:?}", rep.lines);
    }

    #[test]
    fn unknown_suite_is_a_parse_error() {
        assert!(matches!(run_suite("nope", None, 0), Err(Error::Parse { .. })));
    }
}
