//! Text grammar for polynomials.
//!
//! ```text
//! expr   = [sign] term { sign term }
//! sign   = "+" | "-"
//! term   = factor { ["*"] factor }
//! factor = atom [ "^" integer ]
//! atom   = integer | variable | "(" expr ")"
//! ```
//!
//! Whitespace is ignored between tokens. Multiplication may be implicit
//! (`2xy`, `3(x+y)^2`); a run of letters is split greedily into the longest
//! declared variable names. Coefficients are reduced modulo `p`.

use crate::error::ParseError;
use crate::field::PrimeField;
use crate::poly::{Monomial, Poly};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u64 = 1 << 20;

pub fn parse_poly(text: &str, vars: &[String], field: PrimeField) -> Result<Poly, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0, vars, field };
    parser.skip_ws();
    if parser.at_end() {
        return Err(parser.error("empty input"));
    }
    let p = parser.expr()?;
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    field: PrimeField,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            let neg = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            let t = if neg { t.neg() } else { t };
            acc = acc.add(&t).expect("same ring");
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_')
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else if !self.starts_factor() {
                break;
            }
            let start = self.pos;
            let f = self.factor()?;
            acc = acc.mul(&f).map_err(|_| ParseError::ExponentOverflow { pos: start })?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let start = self.pos;
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let exp_pos = self.pos;
        let k = self.integer()?;
        if k > MAX_EXPONENT {
            return Err(ParseError::ExponentOverflow { pos: exp_pos });
        }
        base.pow(k).map_err(|_| ParseError::ExponentOverflow { pos: start })
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse().map_err(|_| ParseError::ExponentOverflow { pos: start })
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                // reduce digit by digit so arbitrarily long literals work
                let p = self.field.modulus() as u64;
                let v = self.src[start..self.pos].iter().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Poly::constant(self.field, self.nvars(), v as i64))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.variable(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn variable(&mut self) -> Result<Poly, ParseError> {
        let rest = &self.src[self.pos..];
        let best = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty() && rest.starts_with(v.as_bytes()))
            .max_by_key(|(_, v)| v.len());
        match best {
            Some((i, v)) => {
                self.pos += v.len();
                Ok(Poly::term(self.field, Monomial::var(self.nvars(), i), 1))
            }
            None => {
                let len = rest.iter().take_while(|c| c.is_ascii_alphanumeric() || **c == b'_').count();
                Err(ParseError::UnknownVariable {
                    name: String::from_utf8_lossy(&rest[..len]).into_owned(),
                    pos: self.pos,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn literal_examples() {
        let v = vars(&["x", "y", "z"]);
        let p = parse_poly("x^3 + y^3 + z^3", &v, f(5)).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.homogeneous_degree(), Some(3));
        assert!(parse_poly("x - x", &v, f(5)).unwrap().is_zero());
        assert!(parse_poly("7*x*y", &v, f(7)).unwrap().is_zero());
    }

    #[test]
    fn implicit_multiplication_and_parens() {
        let v = vars(&["x", "y"]);
        let a = parse_poly("2xy", &v, f(5)).unwrap();
        let b = parse_poly("2 * x * y", &v, f(5)).unwrap();
        assert_eq!(a, b);
        let c = parse_poly("(x + y)^2 - x^2 - y^2", &v, f(7)).unwrap();
        assert_eq!(c, parse_poly("2x y", &v, f(7)).unwrap());
        let d = parse_poly("-3(x-y)", &v, f(7)).unwrap();
        assert_eq!(d.display(&v).to_string(), "4*x + 3*y");
    }

    #[test]
    fn multi_letter_variables() {
        let v = vars(&["x", "x1", "y"]);
        let p = parse_poly("x1x", &v, f(3)).unwrap();
        assert_eq!(p.display(&v).to_string(), "x*x1");
    }

    #[test]
    fn errors_carry_positions() {
        let v = vars(&["x", "y"]);
        assert_eq!(parse_poly("x + w", &v, f(5)), Err(ParseError::UnknownVariable { name: "w".into(), pos: 4 }));
        assert!(matches!(parse_poly("x +", &v, f(5)), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("(x + y", &v, f(5)), Err(ParseError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_poly("x^", &v, f(5)), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_poly("x^99999999999999999999999", &v, f(5)),
            Err(ParseError::ExponentOverflow { pos: 2 })
        ));
        assert!(matches!(parse_poly("", &v, f(5)), Err(ParseError::Syntax { pos: 0, .. })));
    }
}
