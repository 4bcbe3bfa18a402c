//! Text syntax for scalars and vectors.
//!
//! ```text
//! vector := scalar ("," scalar)*          optionally wrapped in "( ... )"
//! scalar := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | atom
//! atom   := decimal | "sqrt" "(" scalar ")" | "(" scalar ")"
//! ```
//!
//! Decimals are read exactly (`1.25` is `5/4`). The argument of `sqrt` must
//! evaluate to a nonnegative rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::real::Real;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
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
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn scalar(&mut self) -> Result<Real> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Real> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                let rhs = self.unary()?;
                acc = match acc.checked_div(&rhs) {
                    Some(v) => v,
                    None => return self.err("division by zero"),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Real> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Real> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.scalar()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.decimal(),
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt") {
                    return self.err("unknown identifier");
                }
                self.pos += 4;
                self.expect(b'(')?;
                let start = self.pos;
                let arg = self.scalar()?;
                self.expect(b')')?;
                let q = match arg.to_rational() {
                    Some(q) => q,
                    None => {
                        self.pos = start;
                        return self.err("sqrt argument must be rational");
                    }
                };
                Real::sqrt_of(&q).map_err(|e| Error::Parse {
                    pos: start,
                    msg: e.to_string(),
                })
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn decimal(&mut self) -> Result<Real> {
        let start = self.pos;
        let mut int = BigInt::zero();
        let mut den = BigInt::one();
        let mut digits = 0;
        let mut seen_dot = false;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                int = int * 10u32 + u32::from(c - b'0');
                if seen_dot {
                    den *= 10u32;
                }
                digits += 1;
                self.pos += 1;
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits == 0 {
            self.pos = start;
            return self.err("malformed number");
        }
        Ok(Real::from_rational(BigRational::new(int, den)))
    }
}

/// Parse a single scalar expression.
pub fn parse_scalar(text: &str) -> Result<Real> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let v = p.scalar()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Split at commas that are not nested inside parentheses.
fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((start, &text[start..]));
    parts
}

/// Strip one pair of enclosing parentheses if they wrap a comma list.
fn unwrap_tuple(text: &str) -> &str {
    let t = text.trim();
    if !(t.starts_with('(') && t.ends_with(')')) {
        return t;
    }
    let inner = &t[1..t.len() - 1];
    // the outer pair must match each other and enclose a top-level comma
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return t;
                }
            }
            _ => {}
        }
    }
    if depth == 0 && split_top_level(inner).len() > 1 {
        inner
    } else {
        t
    }
}

/// Parse a comma-separated list of scalar expressions.
pub fn parse_components(text: &str) -> Result<Vec<Real>> {
    let body = unwrap_tuple(text);
    let offset = body.as_ptr() as usize - text.as_ptr() as usize;
    split_top_level(body)
        .into_iter()
        .map(|(at, part)| {
            if part.trim().is_empty() {
                return Err(Error::Parse {
                    pos: offset + at,
                    msg: "empty component".into(),
                });
            }
            parse_scalar(part).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset + at,
                    msg,
                },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_scalar("2/7").unwrap(), Real::ratio(2, 7));
        assert_eq!(parse_scalar(" 1.25 ").unwrap(), Real::ratio(5, 4));
        assert_eq!(parse_scalar("-3/6").unwrap(), Real::ratio(-1, 2));
        assert_eq!(parse_scalar("1/2/2").unwrap(), Real::ratio(1, 4));
    }

    #[test]
    fn parses_surds() {
        let phi = parse_scalar("(1+sqrt(5))/2").unwrap();
        assert_eq!(phi.to_string(), "1/2 + 1/2*sqrt(5)");
        let v = parse_components("(1+sqrt(5))/2, sqrt(2)").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1], Real::sqrt_int(2).unwrap());
        // division by a surd rationalizes
        assert_eq!(
            parse_scalar("1/sqrt(2)").unwrap(),
            parse_scalar("sqrt(2)/2").unwrap()
        );
        assert_eq!(parse_scalar("sqrt(2)*sqrt(8)").unwrap(), Real::from_integer(4));
    }

    #[test]
    fn tuple_wrapping() {
        assert_eq!(parse_components("(1/2, 1/3)").unwrap().len(), 2);
        assert_eq!(parse_components("(1/2)").unwrap(), vec![Real::ratio(1, 2)]);
        assert_eq!(
            parse_components("(sqrt(2)), (1/3)").unwrap(),
            vec![Real::sqrt_int(2).unwrap(), Real::ratio(1, 3)]
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_scalar("sqrt(-2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("sqrt(sqrt(2))"), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("2x"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_components("1,,2"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_scalar(""), Err(Error::Parse { .. })));
    }
}
