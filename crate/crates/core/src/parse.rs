//! Literal grammars: field towers, elements, symbol sums, places and
//! quadratic forms. The productions are listed in `docs/grammar.txt`.

use crate::cohomology::Place;
use crate::error::{Error, Result};
use crate::factor::factor_over;
use crate::form::SymbolSum;
use crate::gf::Gf;
use crate::tower::{Elem, Tower};
use crate::upoly::Field;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Punct(char),
}

fn lex(s: &str, production: &'static str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            let v = txt.parse().map_err(|_| Error::parse(production, format!("integer {txt} too large")))?;
            out.push(Tok::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()[]{};,=".contains(c) {
            out.push(Tok::Punct(c));
            i += 1;
        } else {
            return Err(Error::parse(production, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: Vec<Tok>,
    pos: usize,
    prod: &'static str,
    k: Option<&'a Tower>,
}

impl<'a> Cursor<'a> {
    fn new(s: &str, prod: &'static str, k: Option<&'a Tower>) -> Result<Self> {
        Ok(Cursor { toks: lex(s, prod)?, pos: 0, prod, k })
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.prod, msg.into()))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn is(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn eat(&mut self, c: char) -> bool {
        let hit = self.is(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}' at token {}", self.pos))
        }
    }

    fn num(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err(format!("expected integer at token {}", self.pos)),
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected name at token {}", self.pos)),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err(format!("trailing input at token {}", self.pos))
        }
    }

    fn tower(&self) -> &'a Tower {
        self.k.expect("element parsing needs a field")
    }

    // expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Elem> {
        let k = self.tower();
        let neg = self.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = k.neg(&acc);
        }
        loop {
            if self.eat('+') {
                acc = k.add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = k.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    // term := power (('*'|'/') power)*
    fn term(&mut self) -> Result<Elem> {
        let k = self.tower();
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = k.mul(&acc, &self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                acc = match k.div(&acc, &d) {
                    Some(q) => q,
                    None => return Err(Error::DivisionByZero),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    // power := atom ['^' ['-'] int]
    fn power(&mut self) -> Result<Elem> {
        let k = self.tower();
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = self.num()? as i64;
        let e = if neg { -e } else { e };
        if e < 0 && k.is_zero(&base) {
            return Err(Error::DivisionByZero);
        }
        k.powi(&base, e)
    }

    // atom := int | name | '(' expr ')'
    fn atom(&mut self) -> Result<Elem> {
        let k = self.tower();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(k.from_gf(k.gf().from_int((n % k.p() as u64) as i64)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(v) = k.var_named(&name) {
                    Ok(v)
                } else if name == k.generator_name() && k.gf().m() > 1 {
                    Ok(k.from_gf(k.gf().gen()))
                } else {
                    self.err(format!("unknown name {name} in {k}"))
                }
            }
            Some(Tok::Punct('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.err(format!("expected element at token {}", self.pos)),
        }
    }

    // args := expr (',' expr)*
    fn args(&mut self, close: char) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        if self.is(close) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn prime_power(n: u64) -> Option<(u64, u64)> {
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = n;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// `GF(q)` for a prime power `q`, `GF(p^m)`, `GF(p^m)[g]`, each optionally followed by `(x, y, ...)`.
pub fn field(s: &str) -> Result<Tower> {
    let mut c = Cursor::new(s, "field", None)?;
    if c.ident()? != "GF" {
        return c.err("expected GF");
    }
    c.expect('(')?;
    let mut p = c.num()?;
    let mut m = if c.eat('^') { c.num()? } else { 1 };
    c.expect(')')?;
    if m == 1 && !is_prime(p) {
        if let Some((q, e)) = prime_power(p) {
            (p, m) = (q, e);
        }
    }
    if !is_prime(p) || p > u32::MAX as u64 {
        return c.err(format!("{p} is not a prime or prime power"));
    }
    if m == 0 || m > 64 {
        return c.err(format!("bad extension degree {m}"));
    }
    let gen = if c.eat('[') {
        let g = c.ident()?;
        c.expect(']')?;
        g
    } else {
        "g".to_string()
    };
    let mut vars = Vec::new();
    if c.eat('(') {
        loop {
            vars.push(c.ident()?);
            if !c.eat(',') {
                break;
            }
        }
        c.expect(')')?;
    }
    c.done()?;
    let gf = Gf::new(p as u32, m as u32)?;
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    Tower::with_generator(gf, &gen, &names)
}

/// An arithmetic expression in the generator and the variables of `k`.
pub fn element(k: &Tower, s: &str) -> Result<Elem> {
    let mut c = Cursor::new(s, "element", Some(k))?;
    let e = c.expr()?;
    c.done()?;
    Ok(e)
}

/// `[a; b1, ..., bn]` (or `[a}` style closers), `{b1, ..., bn}` for `[1; b⃗]`,
/// joined by `+`. The empty sum is `0`.
pub fn symbol_sum(k: &Tower, s: &str) -> Result<SymbolSum> {
    let mut c = Cursor::new(s, "symbol", Some(k))?;
    if c.peek() == Some(&Tok::Num(0)) && c.toks.len() == 1 {
        return c.err("the empty sum needs an arity; use an explicit term");
    }
    let mut sum: Option<SymbolSum> = None;
    loop {
        let (coeff, args) = if c.eat('[') {
            let a = c.expr()?;
            let args = if c.eat(';') { c.args(']')? } else { vec![] };
            if !c.eat(']') {
                c.expect('}')?;
            }
            (a, args)
        } else if c.eat('{') {
            let args = c.args('}')?;
            c.expect('}')?;
            (k.one(), args)
        } else {
            return c.err(format!("expected '[' or '{{' at token {}", c.pos));
        };
        if args.iter().any(|b| k.is_zero(b)) {
            return c.err("symbol argument is zero");
        }
        match &mut sum {
            None => sum = Some(SymbolSum::single(k, coeff, args)?),
            Some(acc) => {
                if acc.arity != args.len() {
                    return c.err(format!("arity {} after arity {}", args.len(), acc.arity));
                }
                acc.push(coeff, args)?;
            }
        }
        if !c.eat('+') {
            break;
        }
    }
    c.done()?;
    Ok(sum.unwrap())
}

/// `inf` or a polynomial in the top variable; non-monic input is normalized.
pub fn place(k: &Tower, s: &str) -> Result<Place> {
    let st = s.trim();
    if st == "inf" || st == "∞" {
        return Ok(Place::Infinity);
    }
    let e = element(k, st)?;
    let (n, d) = k.num_den(&e);
    if d.len() != 1 || n.len() < 2 {
        return Err(Error::parse("place", format!("{st} is not a nonconstant polynomial in {}", k.top_name())));
    }
    let k0 = k.base();
    let f = factor_over(&k0, n)?;
    if f.len() != 1 || f[0].1 != 1 {
        return Err(Error::parse("place", format!("{st} is not irreducible")));
    }
    Ok(Place::Finite(f[0].0.clone()))
}

/// Blocks and optional diagonal entry of `qf([a,b], ...; diag=c)`.
pub fn form_parts(k: &Tower, s: &str) -> Result<(Vec<(Elem, Elem)>, Option<Elem>)> {
    let mut c = Cursor::new(s, "form", Some(k))?;
    if c.ident()? != "qf" {
        return c.err("expected qf(");
    }
    c.expect('(')?;
    let mut blocks = Vec::new();
    let mut diag = None;
    while c.eat('[') {
        let a = c.expr()?;
        c.expect(',')?;
        let b = c.expr()?;
        c.expect(']')?;
        blocks.push((a, b));
        if !c.eat(',') {
            break;
        }
    }
    if c.eat(';') || matches!(c.peek(), Some(Tok::Ident(s)) if s == "diag") {
        if c.ident()? != "diag" {
            return c.err("expected diag=");
        }
        c.expect('=')?;
        diag = Some(c.expr()?);
    }
    c.expect(')')?;
    c.done()?;
    Ok((blocks, diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        let k = field("GF(2^3)[a](x, t)").unwrap();
        assert_eq!(k.to_string(), "GF(2^3)[a](x,t)");
        assert_eq!(field("GF(3)").unwrap().depth(), 0);
        assert_eq!(field("GF(4)").unwrap().to_string(), field("GF(2^2)").unwrap().to_string());
        assert!(matches!(field("GF(6)"), Err(Error::Parse { production: "field", .. })));
        assert!(field("GF(2)(x,x)").is_err());
    }

    #[test]
    fn elements_round_trip_through_format() {
        let k = field("GF(3^2)[g](x,t)").unwrap();
        for s in ["(x+1)/t^2", "g*x^2 - 2*t", "1/(x*t + g)", "x^-2", "-(t)"] {
            let e = element(&k, s).unwrap();
            assert_eq!(element(&k, &k.format(&e)).unwrap(), e, "{s}");
        }
        assert!(element(&k, "x/0").is_err());
        assert!(element(&k, "y").is_err());
    }

    #[test]
    fn symbols() {
        let k = field("GF(2)(x,y)").unwrap();
        let s = symbol_sum(&k, "[x; y] + [1; x+y]").unwrap();
        assert_eq!(s.arity, 1);
        assert_eq!(s.terms.len(), 2);
        assert_eq!(symbol_sum(&k, "{x,y}").unwrap().terms[0].coeff, k.one());
        assert_eq!(symbol_sum(&k, "[x]").unwrap().arity, 0);
        assert!(symbol_sum(&k, "[x; y] + [x]").is_err());
        assert!(symbol_sum(&k, "[x; 0]").is_err());
    }

    #[test]
    fn places_and_forms() {
        let k = field("GF(2)(x,t)").unwrap();
        assert_eq!(place(&k, "inf").unwrap(), Place::Infinity);
        assert!(place(&k, "t+x").unwrap().is_rational());
        assert!(place(&k, "t^2").is_err());
        let (b, d) = form_parts(&k, "qf([x,1],[0,0]; diag=t)").unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(d, Some(k.t()));
        let (b, d) = form_parts(&k, "qf(diag=1)").unwrap();
        assert!(b.is_empty() && d.is_some());
    }
}
