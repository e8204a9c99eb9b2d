//! Text and JSON encodings of [`RationalFunction`].
//!
//! Text: `(<num>)/(<form> <form> …)` where the numerator is a sum of terms
//! `coeff*x1^2*x3^1` and forms are `x3` or `x3-x1`, one per multiplicity.
//! JSON: `{"arity":d,"num":[[p,q,[e1,…,ed]],…],"den":[[a,b],…]}` with `p`
//! and `q` emitted as numbers when they fit in 64 bits and as decimal strings
//! otherwise.

use num::bigint::BigInt;
use num::{One, ToPrimitive};
use serde_json::{json, Value};

use super::poly::{Monomial, Polynomial};
use super::q::Q;
use super::rational::{LinearForm, RationalFunction};
use crate::error::{Error, Result};

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let v = self.int()?;
        match v.to_usize() {
            Some(0) => Err(Error::Syntax { pos: at, msg: "x0 is not a variable".into() }),
            Some(i) => Ok(i),
            None => Err(Error::Syntax { pos: at, msg: "variable index too large".into() }),
        }
    }

    fn var(&mut self) -> Result<usize> {
        self.expect(b'x')?;
        self.index()
    }
}

fn parse_term(lx: &mut Lexer, negate: bool) -> Result<(Q, Vec<(usize, u32)>)> {
    let mut coeff = Q::one();
    let mut vars = Vec::new();
    if lx.peek().is_some_and(|c| c.is_ascii_digit()) {
        let n = lx.int()?;
        coeff = if lx.eat(b'/') {
            let at = lx.pos;
            let d = lx.int()?;
            if d == BigInt::from(0) {
                return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
            }
            Q::new(n, d)
        } else {
            Q::from_integer(n)
        };
        if !lx.eat(b'*') {
            return Ok((if negate { -coeff } else { coeff }, vars));
        }
    }
    loop {
        let i = lx.var()?;
        let e = if lx.eat(b'^') {
            lx.int()?.to_u32().ok_or(Error::Syntax { pos: lx.pos, msg: "exponent too large".into() })?
        } else {
            1
        };
        vars.push((i, e));
        if !lx.eat(b'*') {
            break;
        }
    }
    Ok((if negate { -coeff } else { coeff }, vars))
}

/// Parses the canonical text form. The arity defaults to the largest variable index.
pub fn parse_text(s: &str, arity: Option<usize>) -> Result<RationalFunction> {
    let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
    lx.expect(b'(')?;
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        if lx.peek() == Some(b')') {
            if first {
                return lx.err("empty numerator");
            }
            break;
        }
        let mut neg = false;
        if !first && !lx.eat(b'+') {
            if lx.eat(b'-') {
                neg = true;
            } else {
                return lx.err("expected `+` or `-` between terms");
            }
        }
        while let Some(c @ (b'-' | b'+')) = lx.peek() {
            lx.pos += 1;
            if c == b'-' {
                neg = !neg;
            }
        }
        terms.push(parse_term(&mut lx, neg)?);
        first = false;
    }
    lx.expect(b')')?;
    let mut den = Vec::new();
    if lx.eat(b'/') {
        lx.expect(b'(')?;
        while lx.peek() != Some(b')') {
            let at = lx.pos;
            let a = lx.var()?;
            let b = if lx.eat(b'-') { lx.var()? } else { 0 };
            if b >= a {
                return Err(Error::Syntax { pos: at, msg: "denominator form must be x_a-x_b with b < a".into() });
            }
            den.push(LinearForm { a, b });
        }
        lx.expect(b')')?;
    }
    if lx.peek().is_some() {
        return lx.err("trailing input");
    }
    let maxv = terms
        .iter()
        .flat_map(|t| t.1.iter().map(|v| v.0))
        .chain(den.iter().map(|l| l.a))
        .max()
        .unwrap_or(0);
    let d = arity.unwrap_or(maxv);
    if maxv > d {
        return Err(Error::ArityMismatch { expected: d, found: maxv });
    }
    let mut num = Polynomial::zero(d);
    for (c, vars) in terms {
        let mut m = Monomial::one(d);
        for (i, e) in vars {
            m.0[i - 1] += e;
        }
        num.add_term(m, c);
    }
    RationalFunction::new(num, &den)
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn json_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer string `{s}`"))),
        _ => Err(Error::Parse("expected an integer".into())),
    }
}

pub fn to_json(f: &RationalFunction) -> Value {
    let num: Vec<Value> = f
        .num
        .terms
        .iter()
        .rev()
        .map(|(m, c)| json!([int_json(c.numer()), int_json(c.denom()), m.0]))
        .collect();
    let den: Vec<Value> = f.den_list().iter().map(|l| json!([l.a, l.b])).collect();
    json!({"arity": f.arity, "num": num, "den": den})
}

pub fn from_json(v: &Value) -> Result<RationalFunction> {
    let bad = |m: &str| Error::Parse(format!("rational function JSON: {m}"));
    let arity = v["arity"].as_u64().ok_or_else(|| bad("missing arity"))? as usize;
    let mut num = Polynomial::zero(arity);
    for t in v["num"].as_array().ok_or_else(|| bad("missing num"))? {
        let t = t.as_array().ok_or_else(|| bad("term must be an array"))?;
        if t.len() != 3 {
            return Err(bad("term must be [p,q,[exps]]"));
        }
        let p = json_int(&t[0])?;
        let q = json_int(&t[1])?;
        if q == BigInt::from(0) {
            return Err(bad("zero denominator"));
        }
        let exps: Vec<u32> = t[2]
            .as_array()
            .ok_or_else(|| bad("exponents must be an array"))?
            .iter()
            .map(|e| e.as_u64().map(|x| x as u32).ok_or_else(|| bad("bad exponent")))
            .collect::<Result<_>>()?;
        if exps.len() != arity {
            return Err(Error::ArityMismatch { expected: arity, found: exps.len() });
        }
        num.add_term(Monomial(exps), Q::new(p, q));
    }
    let mut den = Vec::new();
    for l in v["den"].as_array().ok_or_else(|| bad("missing den"))? {
        let a = l[0].as_u64().ok_or_else(|| bad("bad form"))? as usize;
        let b = l[1].as_u64().ok_or_else(|| bad("bad form"))? as usize;
        den.push(LinearForm::new(a, b)?);
    }
    RationalFunction::new(num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["(1/2*x1^1 + 1*x3^1)/(x3 x3-x1)", "(0)", "(-5/3)/(x1 x1 x2-x1)", "(1*x1^2*x2^1)"] {
            let f = parse_text(s, None).unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn text_accepts_loose_spacing_and_signs() {
        let f = parse_text("( x1 - 2*x2 )/( x2 )", None).unwrap();
        assert_eq!(f.to_string(), "(1*x1^1 + -2*x2^1)/(x2)");
    }

    #[test]
    fn text_rejects_x0_with_a_position() {
        match parse_text("(x0)", None) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_text("(1)/(x1-x2)", None).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let f = parse_text("(123456789012345678901234567890/7*x1^3 + -1/2*x2^1)/(x2-x1 x2-x1)", None).unwrap();
        let v = to_json(&f);
        let g = from_json(&v).unwrap();
        assert_eq!(f, g);
        assert_eq!(to_json(&g).to_string(), v.to_string());
    }
}
