//! Scalar grammar shared by every file format.
//!
//! ```text
//! rational := int | int "/" posint
//! coeff    := rational "i"? | "i"
//! monomial := var ("^" posint)? ("*" monomial)?
//! term     := coeff ("*" monomial)? | monomial
//! poly     := sign? term (("+"|"-") term)*
//! var      := "x" posint
//! ```
//!
//! A Gaussian rational such as `1-2i` is a two-term constant polynomial
//! under this grammar. Whitespace between tokens is ignored.

use num_bigint::BigInt;

use super::gaussian::GaussianRational;
use super::poly::{Monomial, MultiPoly};
use super::rational::Rational;
use crate::error::{Error, Result};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, col0, _src: src }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col0 + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn small(&mut self, what: &str) -> Result<usize> {
        let v = self.digits()?;
        let v: usize = v.try_into().map_err(|_| self.err(format!("{} too large", what)))?;
        Ok(v)
    }

    fn rational(&mut self) -> Result<Rational> {
        let numer = self.digits()?;
        if self.eat('/') {
            let at = self.pos;
            let denom = self.digits()?;
            return Rational::from_bigints(numer, denom)
                .ok_or_else(|| Error::parse(self.line, self.col0 + at, "zero denominator"));
        }
        Ok(Rational::from_bigints(numer, BigInt::from(1)).expect("nonzero denominator"))
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut exps: Vec<u16> = Vec::new();
        loop {
            if !self.eat('x') {
                return Err(self.err("expected variable"));
            }
            let idx = self.small("variable index")?;
            if idx == 0 || idx > u16::MAX as usize {
                return Err(self.err("variable index must be in 1..65535"));
            }
            let mut e = 1usize;
            if self.eat('^') {
                e = self.small("exponent")?;
                if e == 0 || e > u16::MAX as usize {
                    return Err(self.err("exponent must be positive"));
                }
            }
            if exps.len() < idx {
                exps.resize(idx, 0);
            }
            let slot = &mut exps[idx - 1];
            *slot = slot.checked_add(e as u16).ok_or_else(|| self.err("exponent overflow"))?;
            let save = self.pos;
            if self.eat('*') {
                if self.peek() == Some('x') {
                    continue;
                }
                self.pos = save;
            }
            return Ok(Monomial::from_exponents(exps));
        }
    }

    fn term(&mut self) -> Result<(Monomial, GaussianRational)> {
        let c = match self.peek() {
            Some('x') => return Ok((self.monomial()?, GaussianRational::one())),
            Some('i') => {
                self.pos += 1;
                GaussianRational::i()
            }
            Some(ch) if ch.is_ascii_digit() => {
                let r = self.rational()?;
                if self.eat('i') {
                    GaussianRational::new(Rational::zero(), r)
                } else {
                    GaussianRational::real(r)
                }
            }
            Some(ch) => return Err(self.err(format!("unexpected character '{}'", ch))),
            None => return Err(self.err("unexpected end of input")),
        };
        if self.eat('*') {
            return Ok((self.monomial()?, c));
        }
        Ok((Monomial::one(), c))
    }

    fn poly(&mut self) -> Result<MultiPoly> {
        let mut terms = Vec::new();
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if negative { -c } else { c }));
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(ch) => return Err(self.err(format!("unexpected character '{}'", ch))),
            }
        }
        Ok(MultiPoly::from_terms(terms))
    }
}

/// Parses a polynomial (or constant) scalar. `line` and `column` locate the
/// text inside a larger document for error reporting.
pub fn parse_poly_at(text: &str, line: usize, column: usize) -> Result<MultiPoly> {
    let mut cur = Cursor::new(text, line, column);
    if cur.peek().is_none() {
        return Err(cur.err("empty scalar"));
    }
    cur.poly()
}

pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    parse_poly_at(text, 1, 1)
}

pub fn parse_gaussian_at(text: &str, line: usize, column: usize) -> Result<GaussianRational> {
    let p = parse_poly_at(text, line, column)?;
    p.constant_value()
        .ok_or_else(|| Error::parse(line, column, format!("'{}' is not a constant", text)))
}

pub fn parse_gaussian(text: &str) -> Result<GaussianRational> {
    parse_gaussian_at(text, 1, 1)
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let g = parse_gaussian(text)?;
    if !g.im.is_zero() {
        return Err(Error::parse(1, 1, format!("'{}' is not real", text)));
    }
    Ok(g.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_gaussian("1-2i").unwrap(), GaussianRational::new(1.into(), (-2).into()));
        let p = parse_poly("x1^2*x2 - 1/3").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.to_string(), "x1^2*x2-1/3");
    }

    #[test]
    fn imaginary_forms() {
        assert_eq!(parse_gaussian("i").unwrap(), GaussianRational::i());
        assert_eq!(parse_gaussian("-i").unwrap(), -GaussianRational::i());
        assert_eq!(parse_gaussian("1/2i").unwrap(), GaussianRational::new(0.into(), Rational::new(1, 2)));
        assert_eq!(parse_poly("2*x1+3i*x1").unwrap().to_string(), "2*x1+3i*x1");
        assert_eq!(parse_poly("x2*x1").unwrap().to_string(), "x1*x2");
        assert_eq!(parse_poly("x1*x1").unwrap().to_string(), "x1^2");
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(
            parse_rational("1/0").unwrap_err(),
            Error::Parse { line: 1, column: 3, message: "zero denominator".into() }
        );
        match parse_poly_at("x1+*", 4, 10).unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (4, 13)),
            e => panic!("{e:?}"),
        }
        assert!(parse_poly("x0").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_gaussian("x1").is_err());
    }
}
