//! Recursive-descent parser for the expression grammar shared by all
//! commands.
//!
//! ```text
//! element   := ['-'] term (('+' | '-') term)*
//! term      := factor (('*' | '/') factor)*
//! factor    := atom ('^' int)?
//! atom      := var | int | '(' element ')'
//! symbol    := '[' element ',' element ')'
//! class     := symbol ('*' symbol)*
//! bilinear  := '<<' element (',' element)* '>>'
//! quadratic := '<<' element (',' element)* ';' element ']]'
//! ```
//!
//! Variables are the tower's names (default `a1..aN`), `t` for a rational
//! function base and `w` for the generator of an extension base field.
//! Printing any canonical object and parsing it back is the identity.

use ilsf::brauer::{BrauerClass, SymbolAS};
use ilsf::laurent::{FieldTower, LaurentPoly};
use ilsf::quadforms::{BilPfister, QuadPfister};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Any object the grammar can denote.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedExpr {
    Element(LaurentPoly),
    Class(BrauerClass),
    Bilinear(BilPfister),
    Quadratic(QuadPfister),
}

impl fmt::Display for ParsedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParsedExpr::Element(x) => write!(f, "{x}"),
            ParsedExpr::Class(c) => write!(f, "{c}"),
            ParsedExpr::Bilinear(b) => write!(f, "{b}"),
            ParsedExpr::Quadratic(q) => write!(f, "{q}"),
        }
    }
}

/// Parse a source string over the tower, dispatching on the leading token:
/// `[` starts a symbol class, `<<` a form, anything else an element.
pub fn parse_expression(src: &str, tower: &FieldTower) -> Result<ParsedExpr, ParseError> {
    let mut p = Parser::new(src, tower);
    p.skip_ws();
    let out = if p.peek_str("[") {
        ParsedExpr::Class(p.class()?)
    } else if p.peek_str("<<") {
        p.form()?
    } else {
        ParsedExpr::Element(p.element()?)
    };
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parse just a Laurent element.
pub fn parse_element(src: &str, tower: &FieldTower) -> Result<LaurentPoly, ParseError> {
    match parse_expression(src, tower)? {
        ParsedExpr::Element(x) => Ok(x),
        other => Err(ParseError {
            pos: 0,
            msg: format!("expected an element, found {other}"),
        }),
    }
}

/// Parse a symbol class.
pub fn parse_class(src: &str, tower: &FieldTower) -> Result<BrauerClass, ParseError> {
    match parse_expression(src, tower)? {
        ParsedExpr::Class(c) => Ok(c),
        other => Err(ParseError {
            pos: 0,
            msg: format!("expected a symbol class, found {other}"),
        }),
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    tower: &'a FieldTower,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, tower: &'a FieldTower) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            tower,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_str(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.peek_str(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        self.src[start..self.pos]
            .parse::<i64>()
            .map_err(|_| ParseError {
                pos: start,
                msg: "integer out of range".into(),
            })
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.bytes.len()
                && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Some(&self.src[start..self.pos])
        } else {
            None
        }
    }

    fn element(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = if self.eat("-") {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat("+") {
                acc = acc.add(&self.term()?);
            } else if self.eat("-") {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat("*") {
                acc = acc.mul(&self.factor()?);
            } else if self.eat("/") {
                let d = self.factor()?;
                acc = acc.mul(&self.exact_inverse(&d)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, ParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat("^") {
            let e = self.integer()?;
            self.power(&base, e)
        } else {
            Ok(base)
        }
    }

    fn power(&self, base: &LaurentPoly, e: i64) -> Result<LaurentPoly, ParseError> {
        if e.unsigned_abs() > 64 {
            return Err(self.err("exponent out of the supported range -64..=64"));
        }
        if e >= 0 {
            Ok(base.pow(e as u32))
        } else {
            let inv = self.exact_inverse(base)?;
            Ok(inv.pow(e.unsigned_abs() as u32))
        }
    }

    fn exact_inverse(&self, x: &LaurentPoly) -> Result<LaurentPoly, ParseError> {
        if let Some((m, c)) = x.as_single_term() {
            let ci = c.inv().map_err(|e| self.err(e.to_string()))?;
            return Ok(self.tower.monomial(m.inv(), ci));
        }
        // a constant with possibly several base-field terms is still a unit
        if !x.is_zero() && x.terms().all(|(m, _)| m.is_unit()) {
            let c = x.leading_coeff().expect("nonzero");
            let ci = c.inv().map_err(|e| self.err(e.to_string()))?;
            return Ok(self.tower.constant(ci));
        }
        Err(self.err("only single-term elements and constants can be inverted exactly"))
    }

    fn atom(&mut self) -> Result<LaurentPoly, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("(") {
            let inner = self.element()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if let Some(name) = self.ident() {
            if let Some(i) = self.tower.names().iter().position(|n| n == name) {
                return Ok(self.tower.var(i));
            }
            if name == "t" {
                if !self.tower.base().is_rat_func() {
                    return Err(self.err_at(start, format!(
                        "variable `t` needs a rational function base, tower is over {}",
                        self.tower.base()
                    )));
                }
                return Ok(self.tower.constant(self.tower.base().t_pow(1)));
            }
            if name == "w" {
                if self.tower.base().ext_degree() < 2 {
                    return Err(self.err_at(start, format!(
                        "variable `w` needs an extension base field, tower is over {}",
                        self.tower.base()
                    )));
                }
                return Ok(self.tower.constant(self.tower.base().gen_w()));
            }
            return Err(self.err_at(start, format!("unknown variable `{name}`")));
        }
        let c = self.integer().map_err(|_| self.err("expected a variable, number or `(`"))?;
        Ok(self.tower.constant(self.tower.base().elem_int(c)))
    }

    fn symbol(&mut self) -> Result<SymbolAS, ParseError> {
        self.expect("[")?;
        let a = self.element()?;
        self.expect(",")?;
        let b = self.element()?;
        self.expect(")")?;
        SymbolAS::new(a, b).map_err(|e| self.err(e.to_string()))
    }

    fn class(&mut self) -> Result<BrauerClass, ParseError> {
        let mut symbols = vec![self.symbol()?];
        while self.eat("*") {
            symbols.push(self.symbol()?);
        }
        BrauerClass::new(self.tower.clone(), symbols).map_err(|e| self.err(e.to_string()))
    }

    fn form(&mut self) -> Result<ParsedExpr, ParseError> {
        self.expect("<<")?;
        let mut slots = vec![self.element()?];
        loop {
            if self.eat(",") {
                slots.push(self.element()?);
            } else if self.eat(";") {
                let as_slot = self.element()?;
                self.expect("]]")?;
                let q = QuadPfister::new(self.tower.clone(), slots, as_slot)
                    .map_err(|e| self.err(e.to_string()))?;
                return Ok(ParsedExpr::Quadratic(q));
            } else if self.eat(">>") {
                let b = BilPfister::new(self.tower.clone(), slots)
                    .map_err(|e| self.err(e.to_string()))?;
                return Ok(ParsedExpr::Bilinear(b));
            } else {
                return Err(self.err("expected `,`, `;` or `>>` in a form"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ilsf::basefield::BaseFieldDesc;
    use ilsf::laurent::{Monomial, ValueVec};

    fn tower(n: usize) -> FieldTower {
        FieldTower::new(BaseFieldDesc::prime_field(2).unwrap(), n)
    }

    #[test]
    fn element_with_negative_exponent() {
        let t = tower(2);
        let x = parse_element("a2^-1 + a1", &t).unwrap();
        assert_eq!(x.valuation().unwrap(), ValueVec::new(vec![0, -1]));
        assert_eq!(x.num_terms(), 2);
        assert_eq!(x.coeff(&Monomial::new(vec![1, 0])), Some(&t.base().one()));
    }

    #[test]
    fn class_with_two_symbols() {
        let t = tower(3);
        let c = parse_class("[a2^-1, a1) * [a3^-1, a2)", &t).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c, ilsf::brauer::lemma_div_witness(&t).unwrap());
    }

    #[test]
    fn quadratic_form() {
        let t = tower(3);
        let ParsedExpr::Quadratic(q) = parse_expression("<<a1, a2; a3^-1]]", &t).unwrap() else {
            panic!("expected a quadratic form");
        };
        assert_eq!(q.bil_slots(), &[t.var(0), t.var(1)]);
        assert_eq!(q.as_slot(), &t.var_pow(2, -1));
    }

    #[test]
    fn bilinear_form_with_binomial_slot() {
        let t = tower(3);
        let ParsedExpr::Bilinear(b) = parse_expression("<<1 + a1, a3>>", &t).unwrap() else {
            panic!("expected a bilinear form");
        };
        assert_eq!(b.slots()[0], t.one().add(&t.var(0)));
    }

    #[test]
    fn errors_carry_position() {
        let t = tower(2);
        let e = parse_element("a1 + a7", &t).unwrap_err();
        assert!(e.msg.contains("unknown variable"));
        assert_eq!(e.pos, 5);
        assert!(parse_element("a1 +", &t).is_err());
        assert!(parse_element("a1^99999999999999999999", &t).is_err());
        // extreme negative exponents reject cleanly instead of wrapping
        assert!(parse_element("a1^-9223372036854775808", &t).is_err());
        assert!(parse_element("a1^65", &t).is_err());
    }

    #[test]
    fn twisted_class_roundtrip_over_ratfunc_base() {
        let k = BaseFieldDesc::parse("F2(t)").unwrap();
        let tw = FieldTower::new(k, 2);
        let src = "[t^-1, a1) * [t^-3, a2)";
        let c = parse_class(src, &tw).unwrap();
        assert_eq!(c.to_string(), src);
        assert_eq!(parse_class(&c.to_string(), &tw).unwrap(), c);
    }

    #[test]
    fn ratfunc_coefficients() {
        let k = BaseFieldDesc::parse("F2(t)").unwrap();
        let tw = FieldTower::new(k.clone(), 1);
        let x = parse_element("t^-2 * a1 + a1^2", &tw).unwrap();
        assert_eq!(x.coeff(&Monomial::new(vec![1])), Some(&k.t_pow(-2)));
        // division form
        let y = parse_element("(1/(t+1)) * a1", &tw).unwrap();
        assert_eq!(
            y.coeff(&Monomial::new(vec![1])),
            Some(&k.one().div(&k.t_pow(1).add(&k.one())).unwrap())
        );
    }

    #[test]
    fn print_parse_roundtrip_examples() {
        let t = tower(3);
        for src in [
            "a2^-1 + a1",
            "[a2^-1, a1) * [a3^-1, a2)",
            "<<a1, a2>>",
            "<<a1, a2; a3^-1]]",
            "1 + a1*a2^2",
        ] {
            let parsed = parse_expression(src, &t).unwrap();
            let printed = parsed.to_string();
            let reparsed = parse_expression(&printed, &t).unwrap();
            assert_eq!(parsed, reparsed, "roundtrip failed for `{src}` -> `{printed}`");
        }
    }
}
