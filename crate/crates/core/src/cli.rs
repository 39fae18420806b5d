//! Command-line front end.
//!
//! Every command prints lines of `key=value` pairs (record mode) or
//! `key: value` lines (text mode). Exit codes: 0 success, 1 a NonZero or No
//! answer, 2 Unknown or a failed computation, 3 usage and parse errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::cohomology::{
    as_normal_form, compact, filtration_level, form_is_zero, global_decompose, hnn_is_zero, is_zero_global,
    residue, CohClass, Graded, LocalAnalysis, Verdict,
};
use crate::error::{Error, Result};
use crate::factor::factor_over;
use crate::form::SymbolSum;
use crate::gf::Gf;
use crate::invariants::{eval_invariant, gamma, verify_invariance, Family, InvariantSpec, PairSource, TorsorData};
use crate::parse;
use crate::quadform::{is_isomorphic, revoy_move, Certificate, ChainSearch, Iso, Move, QuadForm};
use crate::suite::run_suite;
use crate::tower::{Elem, Tower};
use crate::upoly::Field;

/// Environment variable naming the configuration file.
pub const CONFIG_ENV: &str = "MODPCOH_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "modpcoh", version, about = "Exact mod-p cohomology of function fields and quadratic form invariants")]
pub struct Cli {
    /// RNG seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cap on states explored by searches.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Emit `key=value` records instead of text.
    #[arg(long, global = true)]
    pub records: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Factor a polynomial in the top variable over the base field.
    Factor {
        #[arg(long)]
        field: String,
        poly: String,
        #[arg(long)]
        degree: Option<String>,
    },
    /// Artin–Schreier normal form of an element of k0(t).
    AsNf {
        #[arg(long)]
        field: String,
        elem: String,
        #[arg(long)]
        degree: Option<String>,
    },
    /// Residue of a tame class at a place.
    Residue {
        #[arg(long)]
        field: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        place: String,
        #[arg(long)]
        degree: Option<String>,
    },
    /// Filtration level and graded piece at a place.
    Filtration {
        #[arg(long)]
        field: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        place: String,
        #[arg(long)]
        degree: Option<String>,
    },
    /// Local data at every ramified place, plus the constant part.
    Decompose {
        #[arg(long)]
        field: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        degree: Option<String>,
    },
    /// Zero test. `{...}` classes are Milnor symbols, `[...]` classes additive.
    Iszero {
        #[arg(long)]
        field: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        degree: Option<String>,
    },
    QfDisc {
        #[arg(long)]
        field: String,
        form: String,
    },
    QfClif {
        #[arg(long)]
        field: String,
        form: String,
    },
    /// Isomorphism test with a certificate or a distinguishing invariant.
    QfIso {
        #[arg(long)]
        field: String,
        lhs: String,
        rhs: String,
    },
    /// Apply a move such as `A(0)`, `B(1,x)` or `G(x+1)`.
    QfMove {
        #[arg(long)]
        field: String,
        form: String,
        #[arg(long = "move")]
        mv: String,
    },
    /// Evaluate the invariant of a spec file on an input.
    InvEval {
        #[arg(long)]
        spec: PathBuf,
        input: String,
    },
    /// Randomized invariance check of a spec file.
    InvVerify {
        #[arg(long)]
        spec: PathBuf,
        /// `revoy`, `shift` or `rewrite`.
        #[arg(long, default_value = "revoy")]
        source: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        blocks: usize,
    },
    /// Divided power `γ_i` of a Milnor class.
    Gamma {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        class: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Run a verification suite.
    Suite {
        name: String,
        #[arg(long)]
        trials: Option<usize>,
    },
}

/// Settings from the configuration file, overridden by flags.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    /// Moduli by `(p, m)`, coefficients from the constant term up.
    pub field_table: BTreeMap<(u32, u32), Vec<u32>>,
    pub seed: u64,
    pub records: bool,
    pub chain_depth: Option<usize>,
    pub budget: Option<usize>,
}

impl RunConfig {
    /// Reads `key = value` lines. Moduli are `modulus = p m c0 c1 ... cm`.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, val)) = line.split_once('=') else {
                return Err(Error::parse("config", format!("expected key = value, got `{line}`")));
            };
            let (key, val) = (key.trim(), val.trim());
            let num = |v: &str| v.parse::<u64>().map_err(|_| Error::parse("config", format!("bad number `{v}` for {key}")));
            match key {
                "seed" => cfg.seed = num(val)?,
                "records" => cfg.records = matches!(val, "true" | "1" | "yes"),
                "chain_depth" => cfg.chain_depth = Some(positive(num(val)?)?),
                "budget" => cfg.budget = Some(positive(num(val)?)?),
                "modulus" => {
                    let nums: Vec<u64> = val.split_whitespace().map(num).collect::<Result<_>>()?;
                    if nums.len() < 3 {
                        return Err(Error::parse("config", "modulus needs p, m and coefficients"));
                    }
                    let (p, m) = (nums[0] as u32, nums[1] as u32);
                    cfg.field_table.insert((p, m), nums[2..].iter().map(|&c| c as u32).collect());
                }
                _ => return Err(Error::parse("config", format!("unknown key `{key}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn from_env() -> Result<RunConfig> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::parse("config", format!("{}: {e}", PathBuf::from(path).display())))?;
                RunConfig::parse(&text)
            }
            None => Ok(RunConfig::default()),
        }
    }
}

fn positive(v: u64) -> Result<usize> {
    if v == 0 {
        return Err(Error::parse("config", "caps must be positive"));
    }
    Ok(v as usize)
}

/// One output line: ordered `(key, value)` pairs.
type Line = Vec<(String, String)>;

struct Output {
    /// Preformatted record lines, printed as is in both modes.
    raw: Vec<String>,
    lines: Vec<Line>,
    code: i32,
}

impl Output {
    fn new() -> Output {
        Output { raw: vec![], lines: vec![], code: 0 }
    }

    fn line(&mut self, pairs: &[(&str, String)]) {
        self.lines.push(pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect());
    }

    fn verdict(&mut self, v: &Verdict) {
        let mut l: Line = vec![];
        match v {
            Verdict::Zero => l.push(("verdict".into(), "zero".into())),
            Verdict::NonZero(w) => {
                l.push(("verdict".into(), "nonzero".into()));
                l.extend(witness_pairs(w));
                self.code = self.code.max(1);
            }
            Verdict::Unknown(r) => {
                l.push(("verdict".into(), "unknown".into()));
                l.push(("reason".into(), r.clone()));
                self.code = 2;
            }
        }
        self.lines.push(l);
    }
}

fn witness_pairs(w: &str) -> Line {
    w.split_whitespace()
        .map(|tok| match tok.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => ("witness".to_string(), tok.to_string()),
        })
        .collect()
}

fn render_value(v: &str, records: bool) -> String {
    if records && (v.is_empty() || v.contains(char::is_whitespace) || v.contains('"')) {
        format!("{v:?}")
    } else {
        v.to_string()
    }
}

fn render(out: &Output, records: bool, seed: u64, w: &mut impl Write) -> std::io::Result<()> {
    for l in &out.raw {
        writeln!(w, "{l}")?;
    }
    if out.lines.is_empty() {
        return Ok(());
    }
    for line in &out.lines {
        if records {
            let mut parts: Vec<String> =
                line.iter().map(|(k, v)| format!("{k}={}", render_value(v, true))).collect();
            parts.push(format!("seed={seed}"));
            writeln!(w, "{}", parts.join(" "))?;
        } else {
            for (k, v) in line {
                writeln!(w, "{k}: {v}")?;
            }
        }
    }
    if !records {
        writeln!(w, "seed: {seed}")?;
    }
    Ok(())
}

/// Parses argv, runs the command and writes to stdout and stderr. Returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`dispatch`] with explicit output streams.
pub fn dispatch_to<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let cfg = match RunConfig::from_env() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 3;
        }
    };
    let seed = cli.seed.unwrap_or(cfg.seed);
    let records = cli.records || cfg.records;
    let ctx = Ctx { seed, budget: cli.budget.or(cfg.budget), chain_depth: cfg.chain_depth, table: cfg.field_table };
    match run(&cli.cmd, &ctx) {
        Ok(o) => {
            let _ = render(&o, records, seed, out);
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Parse { .. }) {
                3
            } else {
                2
            }
        }
    }
}

struct Ctx {
    seed: u64,
    budget: Option<usize>,
    chain_depth: Option<usize>,
    table: BTreeMap<(u32, u32), Vec<u32>>,
}

impl Ctx {
    fn field(&self, s: &str, degree: Option<&str>) -> Result<Tower> {
        let k = parse::field(s)?;
        let gf = match self.table.get(&(k.p(), k.gf().m())) {
            Some(m) => Gf::with_modulus(k.p(), m.clone())?,
            None => k.gf().clone(),
        };
        let mut names: Vec<String> = k.var_names().to_vec();
        if let Some(v) = degree {
            let Some(i) = names.iter().position(|n| n == v) else {
                return Err(Error::parse("field", format!("--degree names `{v}`, which is not a variable of {s}")));
            };
            let top = names.remove(i);
            names.push(top);
        }
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        Tower::with_generator(gf, k.generator_name(), &refs)
    }

    fn chain(&self, k: &Tower) -> ChainSearch {
        let mut c = ChainSearch::default_for(k);
        if let Some(d) = self.chain_depth {
            c.depth = d;
        }
        if let Some(b) = self.budget {
            c.max_states = b;
        }
        c
    }
}

/// A class literal: `{...}` gives a Milnor class, anything else an additive one.
fn class(k: &Tower, s: &str) -> Result<CohClass> {
    let rep = parse::symbol_sum(k, s)?;
    if s.trim_start().starts_with('{') {
        let n = rep.arity;
        CohClass::new(rep, n)
    } else {
        Ok(CohClass::additive(rep))
    }
}

fn zero_verdict(c: &CohClass) -> Verdict {
    if c.bidegree.0 == c.bidegree.1 {
        if hnn_is_zero(c) {
            Verdict::Zero
        } else {
            Verdict::NonZero(format!("form={}", compact(&c.form())))
        }
    } else {
        is_zero_global(c)
    }
}

fn graded_label(g: &Graded) -> &'static str {
    match g {
        Graded::Tame => "tame",
        Graded::Coprime(_) => "coprime",
        Graded::Divisible(..) => "divisible",
    }
}

fn local_line(la: &LocalAnalysis) -> Vec<(&'static str, String)> {
    let mut l = vec![
        ("place", la.place_label.clone()),
        ("level", la.level.to_string()),
        ("graded", graded_label(&la.graded).to_string()),
    ];
    if let Some(r) = &la.residue {
        l.push(("residue", compact(r)));
    }
    l
}

/// `{a,b}` for coefficient-one terms, `[c;a,b]` otherwise.
pub fn milnor_string(s: &SymbolSum) -> String {
    let k = &s.field;
    if s.terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = s
        .terms
        .iter()
        .map(|t| {
            let args: Vec<String> = t.args.iter().map(|a| compact(&k.format(a))).collect();
            if k.is_one(&t.coeff) {
                format!("{{{}}}", args.join(","))
            } else {
                format!("[{};{}]", compact(&k.format(&t.coeff)), args.join(","))
            }
        })
        .collect();
    parts.join("+")
}

/// `GF(p)(v1, v2, ...)` with the variables of a class literal in order of appearance.
fn infer_field(class: &str) -> String {
    let mut vars: Vec<String> = Vec::new();
    let mut cur = String::new();
    for c in class.chars().chain(std::iter::once(' ')) {
        if c.is_ascii_alphanumeric() || c == '_' {
            cur.push(c);
        } else {
            if cur.starts_with(|c: char| c.is_ascii_alphabetic()) && !vars.contains(&cur) {
                vars.push(cur.clone());
            }
            cur.clear();
        }
    }
    if vars.is_empty() {
        "GF(2)".into()
    } else {
        format!("GF(2)({})", vars.join(","))
    }
}

fn parse_move(k: &Tower, s: &str) -> Result<Move> {
    let s = s.trim();
    let bad = || Error::parse("move", format!("expected A(i), B(i,β) ... G(β), got `{s}`"));
    let (name, rest) = s.split_at(s.find('(').ok_or_else(bad)?);
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let (first, second) = match inner.split_once(',') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (inner.trim(), None),
    };
    let idx = || first.parse::<usize>().map_err(|_| bad());
    let beta = |e: &str| parse::element(k, e);
    Ok(match (name.trim(), second) {
        ("A", None) => Move::A(idx()?),
        ("B", Some(b)) => Move::B(idx()?, beta(b)?),
        ("C", Some(b)) => Move::C(idx()?, beta(b)?),
        ("D", Some(b)) => Move::D(idx()?, beta(b)?),
        ("E", Some(b)) => Move::E(idx()?, beta(b)?),
        ("F", Some(b)) => Move::F(idx()?, beta(b)?),
        ("G", None) => Move::G(beta(first)?),
        _ => return Err(bad()),
    })
}

/// Polynomial coefficients of `s` read in a fresh variable `X`.
fn poly_input(k: &Tower, s: &str) -> Result<Vec<Elem>> {
    let kx = k.extend("X")?;
    let e = parse::element(&kx, s)?;
    if !kx.is_polynomial(&e) {
        return Err(Error::parse("poly", format!("`{s}` is not a polynomial in X")));
    }
    Ok(kx.num_den(&e).0.to_vec())
}

fn torsor_input(spec: &InvariantSpec, s: &str) -> Result<TorsorData> {
    let k = &spec.field;
    Ok(match spec.family {
        Family::OEven | Family::OOdd | Family::SOEven | Family::SOOdd => TorsorData::Form(QuadForm::parse(k, s)?),
        Family::AbGp(..) => {
            let (a, b) = s.split_once('|').ok_or_else(|| Error::parse("abelian", "expected `a1,... | b1,...`"))?;
            let list = |t: &str| -> Result<Vec<Elem>> {
                t.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| parse::element(k, x)).collect()
            };
            TorsorData::Abelian { a: list(a)?, b: list(b)? }
        }
        Family::MuP => TorsorData::Unit(parse::element(k, s)?),
        Family::ZP => TorsorData::Additive(parse::element(k, s)?),
        Family::SymN => TorsorData::Poly(poly_input(k, s)?),
        Family::OpEval => TorsorData::Class(parse::symbol_sum(k, s)?),
    })
}

fn read_spec(path: &PathBuf) -> Result<InvariantSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse("spec", format!("{}: {e}", path.display())))?;
    InvariantSpec::parse(&text)
}

fn run(cmd: &Cmd, ctx: &Ctx) -> Result<Output> {
    let mut o = Output::new();
    match cmd {
        Cmd::Factor { field, poly, degree } => {
            let k = ctx.field(field, degree.as_deref())?;
            if k.depth() == 0 {
                return Err(Error::parse("field", "factor needs at least one variable"));
            }
            let e = parse::element(&k, poly)?;
            if !k.is_polynomial(&e) {
                return Err(Error::parse("poly", format!("`{poly}` is not a polynomial in {}", k.top_name())));
            }
            let b = k.base();
            for (f, mult) in factor_over(&b, k.num_den(&e).0)? {
                o.line(&[("factor", compact(&k.format(&k.from_poly(f)))), ("multiplicity", mult.to_string())]);
            }
        }
        Cmd::AsNf { field, elem, degree } => {
            let k = ctx.field(field, degree.as_deref())?;
            let nf = as_normal_form(&k, &parse::element(&k, elem)?)?;
            o.line(&[("rep", compact(&k.format(&nf.rep)))]);
            o.verdict(&nf.verdict);
        }
        Cmd::Residue { field, class: c, place, degree } => {
            let k = ctx.field(field, degree.as_deref())?;
            let c = class(&k, c)?;
            let v = parse::place(&k, place)?;
            let r = residue(&c, &v)?;
            o.line(&[("place", v.label(&k)), ("residue", compact(&r))]);
        }
        Cmd::Filtration { field, class: c, place, degree } => {
            let k = ctx.field(field, degree.as_deref())?;
            let la = filtration_level(&class(&k, c)?, &parse::place(&k, place)?)?;
            o.line(&local_line(&la));
        }
        Cmd::Decompose { field, class: c, degree } => {
            let k = ctx.field(field, degree.as_deref())?;
            let d = global_decompose(&class(&k, c)?)?;
            for la in &d.local {
                o.line(&local_line(la));
            }
            o.line(&[("constant", compact(&d.constant))]);
        }
        Cmd::Iszero { field, class: c, degree } => {
            let k = ctx.field(field, degree.as_deref())?;
            o.verdict(&zero_verdict(&class(&k, c)?));
        }
        Cmd::QfDisc { field, form } => {
            let k = ctx.field(field, None)?;
            let q = QuadForm::parse(&k, form)?;
            let c = if q.is_odd() { q.disc_odd()? } else { q.disc()? };
            o.line(&[("disc", compact(&c.rep))]);
            o.verdict(&zero_verdict(&c));
        }
        Cmd::QfClif { field, form } => {
            let k = ctx.field(field, None)?;
            let c = QuadForm::parse(&k, form)?.clifford();
            o.line(&[("clifford", compact(&c.rep))]);
            o.verdict(&form_is_zero(&c.form()));
        }
        Cmd::QfIso { field, lhs, rhs } => {
            let k = ctx.field(field, None)?;
            let (l, r) = (QuadForm::parse(&k, lhs)?, QuadForm::parse(&k, rhs)?);
            match is_isomorphic(&l, &r, &ctx.chain(&k))? {
                Iso::Yes(Certificate::Isometry(cols)) => {
                    let cols: Vec<String> = cols
                        .iter()
                        .map(|c| format!("({})", c.iter().map(|e| compact(&k.format(e))).collect::<Vec<_>>().join(",")))
                        .collect();
                    o.line(&[("answer", "yes".into()), ("isometry", cols.join(""))]);
                }
                Iso::Yes(Certificate::Moves(path)) => {
                    let p: Vec<String> = path.iter().map(|m| compact(&m.label(&k))).collect();
                    o.line(&[("answer", "yes".into()), ("moves", p.join(";"))]);
                }
                Iso::No(w) => {
                    o.line(&[("answer", "no".into()), ("witness", w)]);
                    o.code = 1;
                }
                Iso::Unknown(w) => {
                    o.line(&[("answer", "unknown".into()), ("reason", w)]);
                    o.code = 2;
                }
            }
        }
        Cmd::QfMove { field, form, mv } => {
            let k = ctx.field(field, None)?;
            let q = QuadForm::parse(&k, form)?;
            let m = parse_move(&k, mv)?;
            o.line(&[("form", compact(&revoy_move(&q, &m)?))]);
        }
        Cmd::InvEval { spec, input } => {
            let sp = read_spec(spec)?;
            let v = eval_invariant(&sp, &torsor_input(&sp, input)?)?;
            o.line(&[("family", sp.family.to_string()), ("value", compact(&v.rep))]);
            o.verdict(&is_zero_global(&v));
        }
        Cmd::InvVerify { spec, source, trials, blocks } => {
            let sp = read_spec(spec)?;
            let src = match source.as_str() {
                "revoy" => PairSource::RevoyMoves {
                    blocks: *blocks,
                    odd: matches!(sp.family, Family::OOdd | Family::SOOdd),
                },
                "shift" => PairSource::PolyShift { deg: 3 },
                "rewrite" => PairSource::KatoRewrite,
                _ => return Err(Error::parse("source", format!("expected revoy, shift or rewrite, got `{source}`"))),
            };
            let rep = verify_invariance(&sp, &src, *trials, ctx.seed);
            for (s, note) in &rep.notes {
                o.line(&[("trial", s.to_string()), ("note", note.clone())]);
            }
            o.line(&[
                ("family", sp.family.to_string()),
                ("pass", rep.pass.to_string()),
                ("fail", rep.fail.to_string()),
                ("unknown", rep.unknown.to_string()),
            ]);
            o.code = if rep.fail > 0 { 1 } else if rep.unknown > 0 { 2 } else { 0 };
        }
        Cmd::Gamma { i, class: c, field } => {
            let f = field.clone().unwrap_or_else(|| infer_field(c));
            let k = ctx.field(&f, None)?;
            let x = parse::symbol_sum(&k, c)?;
            let g = gamma(&x, *i)?;
            o.line(&[("gamma", milnor_string(&g.rep)), ("bidegree", format!("({},{})", g.bidegree.0, g.bidegree.1))]);
        }
        Cmd::Suite { name, trials } => {
            let rep = run_suite(name, *trials, ctx.seed)?;
            o.raw.extend(rep.lines.iter().cloned());
            o.raw.push(rep.summary());
            o.code = if rep.ok() { 0 } else { 1 };
        }
    }
    Ok(o)
}
