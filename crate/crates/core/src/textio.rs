//! Parsing and printing of polynomials, reports, traces and mapping tables.
//!
//! ASCII grammar (whitespace between tokens is ignored):
//!
//! ```text
//! poly     := '0' | sign? term (('+' | '-') term)*
//! term     := coeff? monomial
//! coeff    := rational? 'i'? '*'?
//! monomial := factor ('#' factor)*
//! factor   := atom ('*' atom)*
//! atom     := IDENT | 'd' ('^' INT)? '(' factor ')'
//! ```
//!
//! An identifier's trailing digits are its component (`phi12` is variable
//! `phi`, component 12); without digits the component is 1. A standalone `i`
//! at the start of a term is the imaginary unit.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{MappingId, TableEntry};
use crate::coeff::Coefficient;
use crate::identity::{ProofTrace, Report};
use crate::limits::{ClassicalMappingSet, Relation};
use crate::tensor::{TensorMonomial, TensorPolynomial};
use crate::word::{AtomBase, EAtom, EWord, Generator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Ascii,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(format!(
                "unknown format `{s}` (expected ascii, latex or json)"
            )),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Ascii => "ascii",
            Format::Latex => "latex",
            Format::Json => "json",
        })
    }
}

// ------------------------------------------------------------------ parsing

pub fn parse_poly(text: &str) -> Result<TensorPolynomial, ParseError> {
    if text.trim() == "0" {
        return Ok(TensorPolynomial::zero());
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let mut out = TensorPolynomial::zero();
    let mut sign = match p.peek() {
        Some(b'-') => {
            p.pos += 1;
            -1
        }
        Some(b'+') => {
            p.pos += 1;
            1
        }
        _ => 1,
    };
    loop {
        let (c, m) = p.term()?;
        out.add_term(&Coefficient::from(sign) * &c, m);
        p.skip_ws();
        match p.peek() {
            None => return Ok(out),
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(_) => return Err(p.error(&["'+'", "'-'", "'#'", "'*'", "end of input"])),
        }
        p.pos += 1;
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn standalone_i(&self) -> bool {
        self.peek() == Some(b'i')
            && !self
                .src
                .get(self.pos + 1)
                .copied()
                .is_some_and(is_ident_char)
    }

    fn term(&mut self) -> Result<(Coefficient, TensorMonomial), ParseError> {
        self.skip_ws();
        let mut coeff = None;
        if let Some(num) = self.digits() {
            let num: BigInt = num.parse().expect("digits");
            let mut value = BigRational::from_integer(num);
            if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let den: BigInt = self
                    .digits()
                    .ok_or(ParseError {
                        offset: at,
                        expected: vec!["denominator".into()],
                    })?
                    .parse()
                    .expect("digits");
                if den.is_zero() {
                    return Err(self.error(&["nonzero denominator"]));
                }
                value /= BigRational::from_integer(den);
            }
            coeff = Some(Coefficient::new(value, BigRational::zero()));
        }
        self.skip_ws();
        if self.standalone_i() {
            self.pos += 1;
            let r = coeff.map_or_else(BigRational::one, |c| c.re().clone());
            coeff = Some(Coefficient::new(BigRational::zero(), r));
        }
        if coeff.is_some() {
            self.eat(b'*');
        }
        let mut factors = vec![self.factor()?];
        while self.eat(b'#') {
            factors.push(self.factor()?);
        }
        Ok((
            coeff.unwrap_or_else(Coefficient::one),
            TensorMonomial::new(factors),
        ))
    }

    fn factor(&mut self) -> Result<EWord, ParseError> {
        let mut w = self.atom()?;
        while self.eat(b'*') {
            w = w.product(&self.atom()?);
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<EWord, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            return Err(self.error(&["identifier", "'d('"]));
        }
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        if ident == "d" {
            let save = self.pos;
            let mut power = 1i32;
            if self.eat(b'^') {
                self.skip_ws();
                let neg = self.peek() == Some(b'-');
                if neg {
                    self.pos += 1;
                }
                let at = self.pos;
                let n: i32 = self
                    .digits()
                    .and_then(|d| d.parse().ok())
                    .ok_or(ParseError {
                        offset: at,
                        expected: vec!["integer exponent".into()],
                    })?;
                power = if neg { -n } else { n };
                if !self.eat(b'(') {
                    return Err(self.error(&["'('"]));
                }
            } else if !self.eat(b'(') {
                self.pos = save;
                return Ok(EWord::generator(Generator::new("d", 1)));
            }
            let inner = self.factor()?;
            if !self.eat(b')') {
                return Err(self.error(&["')'", "'*'"]));
            }
            return Ok(inner.derivative(power));
        }
        let split = ident.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (name, digits) = ident.split_at(split);
        let component = if digits.is_empty() {
            1
        } else {
            match digits.parse::<u32>() {
                Ok(c) if c >= 1 => c,
                _ => {
                    return Err(ParseError {
                        offset: start + split,
                        expected: vec!["component index >= 1".into()],
                    })
                }
            }
        };
        Ok(EWord::generator(Generator::new(name, component)))
    }
}

// ----------------------------------------------------------------- printing

fn rational_ascii(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_latex(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn atom_ascii(a: &EAtom) -> String {
    let body = match a.base() {
        AtomBase::Generator(g) => g.to_string(),
        AtomBase::Grouped(w) => word_ascii(w),
    };
    match a.power() {
        0 => body,
        1 => format!("d({body})"),
        p => format!("d^{p}({body})"),
    }
}

fn word_ascii(w: &EWord) -> String {
    w.atoms()
        .iter()
        .map(atom_ascii)
        .collect::<Vec<_>>()
        .join("*")
}

fn atom_latex(a: &EAtom) -> String {
    let d = |p: i32| {
        if p == 1 {
            "\\partial".to_string()
        } else {
            format!("\\partial^{{{p}}}")
        }
    };
    match (a.base(), a.power()) {
        (AtomBase::Generator(g), 0) => generator_latex(g),
        (AtomBase::Generator(g), p) => format!("{} {}", d(p), generator_latex(g)),
        (AtomBase::Grouped(w), p) => format!("{}({})", d(p), word_latex(w)),
    }
}

fn generator_latex(g: &Generator) -> String {
    format!("{}_{{{}}}", g.variable(), g.component())
}

fn word_latex(w: &EWord) -> String {
    w.atoms()
        .iter()
        .map(atom_latex)
        .collect::<Vec<_>>()
        .join(" \\cdot ")
}

pub fn monomial_ascii(m: &TensorMonomial) -> String {
    m.factors()
        .iter()
        .map(word_ascii)
        .collect::<Vec<_>>()
        .join(" # ")
}

fn monomial_latex(m: &TensorMonomial) -> String {
    m.factors()
        .iter()
        .map(word_latex)
        .collect::<Vec<_>>()
        .join(" \\otimes ")
}

/// Splits a coefficient into signed real-or-imaginary pieces: `(negative,
/// magnitude-prefix)` where the prefix is empty for 1.
fn coefficient_pieces(c: &Coefficient, latex: bool) -> Vec<(bool, String)> {
    let rat = if latex {
        rational_latex
    } else {
        rational_ascii
    };
    let sep = if latex { "\\," } else { "*" };
    let mut out = Vec::new();
    if !c.re().is_zero() {
        let r = c.re().abs();
        let s = if r.is_one() {
            String::new()
        } else {
            format!("{}{sep}", rat(&r))
        };
        out.push((c.re().is_negative(), s));
    }
    if !c.im().is_zero() {
        let r = c.im().abs();
        let s = if r.is_one() {
            format!("i{sep}")
        } else {
            format!("{}i{sep}", rat(&r))
        };
        out.push((c.im().is_negative(), s));
    }
    out
}

fn poly_text(p: &TensorPolynomial, latex: bool) -> String {
    let mut s = String::new();
    for (m, c) in p.terms() {
        let body = if latex {
            monomial_latex(m)
        } else {
            monomial_ascii(m)
        };
        for (neg, prefix) in coefficient_pieces(c, latex) {
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&prefix);
            s.push_str(&body);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn atom_json(a: &EAtom) -> Value {
    match a.base() {
        AtomBase::Generator(g) => json!({
            "variable": g.variable(),
            "component": g.component(),
            "power": a.power(),
        }),
        AtomBase::Grouped(w) => json!({
            "group": w.atoms().iter().map(atom_json).collect::<Vec<_>>(),
            "power": a.power(),
        }),
    }
}

pub fn coefficient_json(c: &Coefficient) -> Value {
    json!({ "re": rational_ascii(c.re()), "im": rational_ascii(c.im()) })
}

pub fn term_json(c: &Coefficient, m: &TensorMonomial) -> Value {
    json!({
        "coefficient": coefficient_json(c),
        "factors": m.factors().iter().map(|w| w.atoms().iter().map(atom_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "text": monomial_ascii(m),
    })
}

pub fn poly_json(p: &TensorPolynomial) -> Value {
    Value::Array(p.terms().map(|(m, c)| term_json(c, m)).collect())
}

pub fn print_poly(p: &TensorPolynomial, fmt: Format) -> String {
    match fmt {
        Format::Ascii => poly_text(p, false),
        Format::Latex => poly_text(p, true),
        Format::Json => json!({ "terms": poly_json(p) }).to_string(),
    }
}

fn raw_terms_text(terms: &[(Coefficient, TensorMonomial)], fmt: Format) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (c, m) in terms {
        let text = print_poly(&TensorPolynomial::term(c.clone(), m.clone()), fmt);
        match text.strip_prefix('-') {
            Some(rest) if !s.is_empty() => {
                s.push_str(" - ");
                s.push_str(rest);
            }
            _ if !s.is_empty() => {
                s.push_str(" + ");
                s.push_str(&text);
            }
            _ => s.push_str(&text),
        }
    }
    s
}

// ------------------------------------------------------- reports and traces

fn orders_text(orders: &[usize]) -> String {
    orders
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn report_json(r: &Report) -> Value {
    json!({
        "family": r.family,
        "identity": r.identity.to_string(),
        "orders": r.orders,
        "mode": r.mode,
        "pass": r.pass,
        "residual_terms": poly_json(&r.residual),
        "term_counts": r.term_counts,
    })
}

/// One line per report; failing reports carry their residual.
pub fn print_report(r: &Report, fmt: Format) -> String {
    match fmt {
        Format::Json => report_json(r).to_string(),
        _ => {
            let head = format!(
                "{} {} {} orders=({}) {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.family,
                r.identity,
                orders_text(&r.orders),
                r.mode
            );
            if r.pass {
                head
            } else {
                format!(
                    "{head} residual[{}]: {}",
                    r.residual.len(),
                    print_poly(&r.residual, fmt)
                )
            }
        }
    }
}

pub fn print_trace(t: &ProofTrace, fmt: Format) -> String {
    match fmt {
        Format::Json => json!({
            "family": t.family,
            "identity": t.identity.to_string(),
            "orders": t.orders,
            "mode": t.mode,
            "steps": t.steps.iter().map(|s| json!({
                "label": s.label,
                "terms": s.terms.iter().map(|(c, m)| term_json(c, m)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "pass": t.residual().is_zero(),
        })
        .to_string(),
        _ => {
            let mut out = format!(
                "{} {} orders=({}) {}\n",
                t.family,
                t.identity,
                orders_text(&t.orders),
                t.mode
            );
            for s in &t.steps {
                out.push_str(&format!(
                    "  {} [{} terms]\n    = {}\n",
                    s.label,
                    s.terms.len(),
                    raw_terms_text(&s.terms, fmt)
                ));
            }
            out.push_str(if t.residual().is_zero() {
                "  residual vanishes\n"
            } else {
                "  residual does not vanish\n"
            });
            out
        }
    }
}

pub fn print_table(family: &str, entries: &[TableEntry], fmt: Format) -> String {
    match fmt {
        Format::Json => json!({
            "family": family,
            "mappings": entries.iter().map(|e| json!({
                "mapping": e.mapping.to_string(),
                "definition": e.definition,
                "orders": [e.orders.0, e.orders.1],
                "value": poly_json(&e.value),
            })).collect::<Vec<_>>(),
        })
        .to_string(),
        _ => {
            let mut out = String::new();
            for e in entries {
                out.push_str(&format!(
                    "{}(phi, psi) := {}\n    at orders ({},{}) = {}\n",
                    e.mapping,
                    e.definition,
                    e.orders.0,
                    e.orders.1,
                    print_poly(&e.value, fmt)
                ));
            }
            out
        }
    }
}

pub fn print_limit(
    set: &ClassicalMappingSet,
    comparison: &[(MappingId, Relation)],
    reference: Option<&str>,
    fmt: Format,
) -> String {
    match fmt {
        Format::Json => {
            let mut v = json!({
                "family": set.origin.to_string(),
                "limit_mode": set.mode.to_string(),
                "mappings": set.forms.iter().map(|(m, p)| json!({
                    "mapping": m.to_string(),
                    "value": poly_json(p),
                })).collect::<Vec<_>>(),
            });
            if let Some(r) = reference {
                v["reference"] = json!(r);
                v["comparison"] = comparison
                    .iter()
                    .map(
                        |(m, rel)| json!({ "mapping": m.to_string(), "relation": rel.to_string() }),
                    )
                    .collect();
            }
            v.to_string()
        }
        _ => {
            let mut out = format!("limit of {} ({})\n", set.origin, set.mode);
            for (m, p) in &set.forms {
                out.push_str(&format!("  {m}(phi1, psi1) = {}\n", print_poly(p, fmt)));
            }
            if let Some(r) = reference {
                for (m, rel) in comparison {
                    out.push_str(&format!("  {m} vs {r}: {rel}\n"));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &str) -> EWord {
        EWord::var(v, 1)
    }

    #[test]
    fn parse_examples() {
        let p = parse_poly("f1 # f2*g1 # g2").unwrap();
        let expected = TensorPolynomial::monomial(TensorMonomial::new(vec![
            EWord::var("f", 1),
            EWord::var("f", 2).product(&EWord::var("g", 1)),
            EWord::var("g", 2),
        ]));
        assert_eq!(p, expected);

        let p = parse_poly("-i*d(f*g)").unwrap();
        let expected = TensorPolynomial::word(w("f").product(&w("g")).derivative(1))
            .scale(&Coefficient::minus_i());
        assert_eq!(p, expected);

        let err = parse_poly("f # # g").unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn parse_coefficients() {
        let half_i = parse_poly("1/2i*f").unwrap();
        assert_eq!(
            half_i.coefficient(&TensorMonomial::single(w("f"))),
            Some(&Coefficient::new(
                BigRational::zero(),
                BigRational::new(1.into(), 2.into())
            ))
        );
        assert_eq!(parse_poly("2 f - f").unwrap(), parse_poly("f").unwrap());
        assert_eq!(parse_poly("i f1").unwrap(), parse_poly("i*f1").unwrap());
        assert!(parse_poly("f - f").unwrap().is_zero());
        assert!(parse_poly(" 0 ").unwrap().is_zero());
        assert!(parse_poly("1/0 f").is_err());
        assert!(parse_poly("f0").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("2").is_err());
    }

    #[test]
    fn identifiers_i_and_d() {
        let p = parse_poly("i1 * d1").unwrap();
        assert_eq!(
            p,
            TensorPolynomial::word(EWord::var("i", 1).product(&EWord::var("d", 1)))
        );
        let q = parse_poly("d^-1(f*g) + d^2(h)").unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(parse_poly("d^0(f*g)").unwrap(), parse_poly("f*g").unwrap());
    }

    #[test]
    fn ascii_printing() {
        let p = TensorPolynomial::monomial(TensorMonomial::new(vec![w("f"), w("g").derivative(1)]));
        assert_eq!(print_poly(&p, Format::Ascii), "f1 # d(g1)");
        let q = TensorPolynomial::word(w("f").product(&w("g")).derivative(1))
            .scale(&Coefficient::minus_i());
        assert_eq!(print_poly(&q, Format::Ascii), "-i*d(f1*g1)");
        assert_eq!(print_poly(&TensorPolynomial::zero(), Format::Ascii), "0");
        assert_eq!(print_poly(&TensorPolynomial::zero(), Format::Latex), "0");
        let inv = TensorPolynomial::word(w("f").product(&w("g")).derivative(-1))
            .scale(&Coefficient::rational(1, 2));
        assert_eq!(print_poly(&inv, Format::Ascii), "1/2*d^-1(f1*g1)");
    }

    #[test]
    fn latex_printing() {
        let q = TensorPolynomial::word(w("f").product(&w("g")).derivative(1))
            .scale(&Coefficient::minus_i());
        assert_eq!(
            print_poly(&q, Format::Latex),
            "-i\\,\\partial(f_{1} \\cdot g_{1})"
        );
        let t =
            TensorPolynomial::monomial(TensorMonomial::new(vec![w("f").derivative(-1), w("g")]));
        assert_eq!(
            print_poly(&t, Format::Latex),
            "\\partial^{-1} f_{1} \\otimes g_{1}"
        );
    }

    #[test]
    fn complex_coefficient_round_trip() {
        let p = TensorPolynomial::word(w("f")).scale(&Coefficient::from_ints(2, -3));
        let s = print_poly(&p, Format::Ascii);
        assert_eq!(s, "2*f1 - 3i*f1");
        assert_eq!(parse_poly(&s).unwrap(), p);
    }

    #[test]
    fn json_shape() {
        let p = parse_poly("-i*d(f*g) # h").unwrap();
        let v: Value = serde_json::from_str(&print_poly(&p, Format::Json)).unwrap();
        let term = &v["terms"][0];
        assert_eq!(term["coefficient"]["im"], "-1");
        assert_eq!(term["factors"][0][0]["power"], 1);
        assert_eq!(term["text"], "d(f1*g1) # h1");
    }
}
