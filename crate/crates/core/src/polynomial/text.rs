//! Bracket syntax for integrands.
//!
//! ```text
//! monomials:    [[c,[e1,...,en]], ...]
//! linear forms: [[c,[M,[a1,...,an]]], ...]
//! ```
//!
//! Coefficients are integers or `p/q`; whitespace is ignored.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExponentVector, LinearFormSum, MonomialSum};
use crate::error::ParseError;
use crate::Rational;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(ParseError::new(
                self.pos,
                format!("expected '{}', found '{}'", c as char, b as char),
            )),
            None => Err(ParseError::new(
                self.pos,
                format!("expected '{}', found end of input", c as char),
            )),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(start, "expected digits"));
        }
        let s = core::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("decimal digits"))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.digits()?;
        Ok(if negative { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let numer = self.integer()?;
        if self.eat(b'/') {
            let at = self.pos;
            let denom = self.digits()?;
            if denom.is_zero() {
                return Err(ParseError::new(at, "zero denominator"));
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let v = self.integer()?;
        if v.sign() == num_bigint::Sign::Minus {
            return Err(ParseError::new(at, "negative exponent"));
        }
        u32::try_from(v).map_err(|_| ParseError::new(at, "exponent too large"))
    }

    /// Parses `[item, item, ...]` (at least one item).
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.peek() == Some(b']') {
            return Err(ParseError::new(self.pos, "empty list"));
        }
        loop {
            out.push(item(self)?);
            if self.eat(b',') {
                continue;
            }
            self.expect(b']')?;
            return Ok(out);
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(ParseError::new(self.pos, "trailing characters")),
        }
    }
}

fn check_dim(dim: &mut Option<usize>, len: usize, at: usize) -> Result<(), ParseError> {
    match *dim {
        None => {
            *dim = Some(len);
            Ok(())
        }
        Some(d) if d == len => Ok(()),
        Some(d) => Err(ParseError::new(
            at,
            format!("vector has length {len}, expected {d}"),
        )),
    }
}

/// Parses `[[c,[e1,...,en]],...]`. The dimension is taken from the first
/// exponent vector; equal exponent vectors are merged.
pub fn parse_monomial_list(text: &str) -> Result<MonomialSum, ParseError> {
    let mut cur = Cursor::new(text);
    let mut dim = None;
    let terms = cur.list(|c| {
        c.expect(b'[')?;
        let coef = c.rational()?;
        c.expect(b',')?;
        c.skip_ws();
        let at = c.pos;
        let exps = c.list(Cursor::exponent)?;
        check_dim(&mut dim, exps.len(), at)?;
        c.expect(b']')?;
        Ok((coef, exps))
    })?;
    cur.finish()?;
    let mut p = MonomialSum::new(dim.expect("nonempty list"));
    for (coef, exps) in terms {
        p.add_term(coef, ExponentVector::new(exps));
    }
    Ok(p)
}

/// Parses `[[c,[M,[a1,...,an]]],...]`.
pub fn parse_linear_form_list(text: &str) -> Result<LinearFormSum, ParseError> {
    let mut cur = Cursor::new(text);
    let mut dim = None;
    let terms = cur.list(|c| {
        c.expect(b'[')?;
        let coef = c.rational()?;
        c.expect(b',')?;
        c.expect(b'[')?;
        let power = c.exponent()?;
        c.expect(b',')?;
        c.skip_ws();
        let at = c.pos;
        let form = c.list(Cursor::rational)?;
        check_dim(&mut dim, form.len(), at)?;
        c.expect(b']')?;
        c.expect(b']')?;
        Ok((coef, power, form))
    })?;
    cur.finish()?;
    let mut f = LinearFormSum::new(dim.expect("nonempty list"));
    for (coef, power, form) in terms {
        f.add_term(coef, power, form);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn monomial_examples() {
        let p = parse_monomial_list("[[3,[2,4,6]], [7,[0,3,5]]]").unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&ExponentVector::new(vec![2, 4, 6])), q(3, 1));
        assert_eq!(p.coefficient(&ExponentVector::new(vec![0, 3, 5])), q(7, 1));

        let one = parse_monomial_list("[[1,[0,0]]]").unwrap();
        assert_eq!(one.dim(), 2);
        assert_eq!(one.coefficient(&ExponentVector::zero(2)), q(1, 1));

        let merged = parse_monomial_list("[[1/2,[1,0]],[1/2,[1,0]]]").unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.coefficient(&ExponentVector::new(vec![1, 0])), q(1, 1));
    }

    #[test]
    fn linear_form_examples() {
        let f = parse_linear_form_list("[[3,[10,[2,4,6]]], [7,[12,[0,3,5]]]]").unwrap();
        assert_eq!(f.dim(), 3);
        let terms = f.to_vec();
        // canonical order puts the higher power first
        assert_eq!(terms[0].power, 12);
        assert_eq!(terms[0].coefficient, q(7, 1));
        assert_eq!(terms[0].form, vec![q(0, 1), q(3, 1), q(5, 1)]);
        assert_eq!(terms[1].power, 10);
        assert_eq!(terms[1].form, vec![q(2, 1), q(4, 1), q(6, 1)]);

        let c = parse_linear_form_list("[[1,[0,[0,0]]]]").unwrap();
        assert_eq!(c.to_vec()[0].power, 0);

        let g = parse_linear_form_list("[[2,[1,[1,1]]]]").unwrap();
        assert_eq!(g.to_string(), "[[2,[1,[1,1]]]]");
        let r = parse_linear_form_list("[[-1/3,[2,[1/2,-4]]]]").unwrap();
        assert_eq!(r.to_vec()[0].form, vec![q(1, 2), q(-4, 1)]);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_monomial_list("[[1,[1,2]],[1,[1]]]").unwrap_err();
        assert_eq!(e.offset, 14);
        let e = parse_monomial_list("[[1,[1,-2]]]").unwrap_err();
        assert_eq!(e.offset, 7);
        assert!(e.message.contains("negative"));
        let e = parse_monomial_list("[[1,[1,2]]").unwrap_err();
        assert_eq!(e.offset, 10);
        assert!(parse_monomial_list("[[1,[1]]] x").is_err());
        assert!(parse_monomial_list("[[1/0,[1]]]").is_err());
        assert!(parse_linear_form_list("[[1,[1,[1,2]],[2,[1,[1]]]]").is_err());
        assert!(parse_monomial_list("[]").is_err());
    }
}
