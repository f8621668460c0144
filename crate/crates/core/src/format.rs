//! Text and JSON renderings of modular equations, and a parser for the text
//! form.
//!
//! Text uses descending powers of the equation variable and writes
//! coefficients in `J`, `G2`, `G3`, e.g. `X^6 + 10*X^3 - G2*X + 5`. A
//! coefficient with several monomials is parenthesized with its leading
//! term made positive: `- (J - 746)*X`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ModEqPoly, Mono, NormalPoly};

fn mono_text(m: &Mono) -> String {
    let mut parts = Vec::new();
    match m.j {
        0 => {}
        1 => parts.push("J".to_string()),
        d => parts.push(format!("J^{d}")),
    }
    if m.g3 == 1 {
        parts.push("G3".to_string());
    }
    match m.g2 {
        0 => {}
        1 => parts.push("G2".to_string()),
        a => parts.push(format!("G2^{a}")),
    }
    parts.join("*")
}

/// Monomials from the most negative valuation down to the constant.
fn ordered(p: &NormalPoly<BigInt>) -> Vec<(Mono, BigInt)> {
    let mut v: Vec<(Mono, BigInt)> = p.terms().map(|(m, c)| (*m, c.clone())).collect();
    v.sort_by_key(|(m, _)| m.valuation());
    v
}

/// Terms as `(is_negative, magnitude text)`.
fn signed_terms(p: &NormalPoly<BigInt>) -> Vec<(bool, String)> {
    ordered(p)
        .into_iter()
        .map(|(m, c)| {
            let mag = c.abs();
            let body = mono_text(&m);
            let text = if body.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                body
            } else {
                format!("{mag}*{body}")
            };
            (c.is_negative(), text)
        })
        .collect()
}

fn join_signed(terms: &[(bool, String)]) -> String {
    let mut out = String::new();
    for (i, (neg, t)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(t);
    }
    out
}

/// A normal-form polynomial on its own, e.g. `J^2 - 1002*J + 59895`.
pub fn normal_to_text(p: &NormalPoly<BigInt>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    join_signed(&signed_terms(p))
}

/// The equation in the variable `var`.
pub fn to_text(eq: &ModEqPoly<BigInt>, var: &str) -> String {
    let mut terms: Vec<(bool, String)> = Vec::new();
    for d in (0..eq.coeffs.len()).rev() {
        let c = &eq.coeffs[d];
        if c.is_zero() {
            continue;
        }
        let power = match d {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{d}"),
        };
        let st = signed_terms(c);
        let (neg, body) = if st.len() == 1 {
            let (neg, t) = st.into_iter().next().expect("one term");
            if power.is_empty() {
                (neg, t)
            } else if t == "1" {
                (neg, power)
            } else {
                (neg, format!("{t}*{power}"))
            }
        } else {
            let neg = st[0].0;
            let inner: Vec<(bool, String)> = st.into_iter().map(|(n, t)| (n != neg, t)).collect();
            let group = format!("({})", join_signed(&inner));
            if power.is_empty() {
                (neg, group)
            } else {
                (neg, format!("{group}*{power}"))
            }
        };
        terms.push((neg, body));
    }
    if terms.is_empty() {
        return "0".into();
    }
    join_signed(&terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub jdeg: u32,
    pub g2: u8,
    pub g3: u8,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonCoeff {
    pub fdeg: usize,
    pub terms: Vec<JsonTerm>,
}

/// `[{fdeg, terms: [{jdeg, g2, g3, coeff}]}]`, coefficients as decimal
/// strings, highest `fdeg` first.
pub fn to_json(eq: &ModEqPoly<BigInt>) -> Vec<JsonCoeff> {
    (0..eq.coeffs.len())
        .rev()
        .filter(|&d| !eq.coeffs[d].is_zero())
        .map(|d| JsonCoeff {
            fdeg: d,
            terms: ordered(&eq.coeffs[d])
                .into_iter()
                .map(|(m, c)| JsonTerm {
                    jdeg: m.j,
                    g2: m.g2,
                    g3: m.g3,
                    coeff: c.to_string(),
                })
                .collect(),
        })
        .collect()
}

pub fn from_json(items: &[JsonCoeff], label: &str) -> Result<ModEqPoly<BigInt>> {
    let deg = items.iter().map(|c| c.fdeg).max().unwrap_or(0);
    let mut coeffs = vec![NormalPoly::zero(()); deg + 1];
    for item in items {
        for t in &item.terms {
            if t.g2 > 2 || t.g3 > 1 {
                return Err(Error::Parse(format!("monomial G2^{} G3^{} is not in normal form", t.g2, t.g3)));
            }
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            coeffs[item.fdeg].add_term(Mono::new(t.jdeg, t.g2, t.g3), &c);
        }
    }
    Ok(ModEqPoly::new(coeffs, label))
}

/// Polynomials in the equation variable with normal-form coefficients.
type Expr = BTreeMap<usize, NormalPoly<BigInt>>;

fn expr_const(c: BigInt) -> Expr {
    let mut e = Expr::new();
    if !c.is_zero() {
        e.insert(0, NormalPoly::constant(c));
    }
    e
}

fn expr_add(a: &Expr, b: &Expr, negate: bool) -> Expr {
    let mut out = a.clone();
    for (d, c) in b {
        let slot = out.entry(*d).or_insert_with(|| NormalPoly::zero(()));
        *slot = if negate { slot.sub(c) } else { slot.add(c) };
        if slot.is_zero() {
            out.remove(d);
        }
    }
    out
}

fn expr_mul(a: &Expr, b: &Expr) -> Expr {
    let mut out = Expr::new();
    for (da, ca) in a {
        for (db, cb) in b {
            let term = Expr::from([(da + db, ca.mul(cb))]);
            out = expr_add(&out, &term, false);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    var: String,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = Expr::new();
        let mut negate = self.eat('-');
        if !negate {
            self.eat('+');
        }
        loop {
            let t = self.product()?;
            acc = expr_add(&acc, &t, negate);
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = expr_mul(&acc, &f);
            } else if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // juxtaposition: 22 G2^2 F^2
                let f = self.power()?;
                acc = expr_mul(&acc, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let n = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.clone(),
            other => return Err(Error::Parse(format!("expected exponent, found {other:?}"))),
        };
        self.pos += 1;
        let n: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
        let mut acc = expr_const(BigInt::one());
        for _ in 0..n {
            acc = expr_mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(expr_const(n)),
            Some(Tok::Op('(')) => {
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                let e = self.power()?;
                Ok(expr_add(&Expr::new(), &e, true))
            }
            Some(Tok::Ident(name)) => {
                let mono = match name.as_str() {
                    "J" => Mono::new(1, 0, 0),
                    "G2" => Mono::new(0, 1, 0),
                    "G3" => Mono::new(0, 0, 1),
                    v if v == self.var => {
                        return Ok(Expr::from([(1, NormalPoly::one(()))]));
                    }
                    other => return Err(Error::Parse(format!("unknown symbol {other}"))),
                };
                Ok(Expr::from([(0, NormalPoly::monomial(mono, BigInt::one()))]))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses the text form (either renderer output or hand-written input such
/// as `(486 - G3^2)*F^2`), reducing `G2^3` and `G3^2`.
pub fn parse_text(s: &str, var: &str) -> Result<ModEqPoly<BigInt>> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
        var: var.to_string(),
    };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    let deg = e.keys().max().copied().unwrap_or(0);
    let mut coeffs = vec![NormalPoly::zero(()); deg + 1];
    for (d, c) in e {
        coeffs[d] = c;
    }
    Ok(ModEqPoly::new(coeffs, ""))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_parses_small_equations() {
        for (text, var) in [
            ("X^6 + 10*X^3 - G2*X + 5", "X"),
            ("X^8 + 14*X^6 + 63*X^4 + 70*X^2 + G3*X - 7", "X"),
            ("F^12 - 990*F^6 + 440*G2*F^4 + 165*G3*F^3 + 22*G2^2*F^2 + G3*G2*F - 11", "F"),
            ("X^2 - (J - 746)*X + 13", "X"),
        ] {
            let eq = parse_text(text, var).unwrap();
            assert_eq!(to_text(&eq, var), text);
            let back = from_json(&to_json(&eq), "").unwrap();
            assert_eq!(back, eq);
        }
    }

    #[test]
    fn parser_reduces_relations_and_accepts_juxtaposition() {
        let a = parse_text("(486 - G3^2)F^2 - 9 G3 F - 27", "F").unwrap();
        let b = parse_text("-(J - 2214)*F^2 - 9*G3*F - 27", "F").unwrap();
        assert_eq!(a, b);
        let c = parse_text("G2^3 - J", "F").unwrap();
        assert!(c.coeffs.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_text("X^2 + Y", "X").is_err());
        assert!(parse_text("(X + 1", "X").is_err());
        assert!(parse_text("X $ 1", "X").is_err());
    }
}
