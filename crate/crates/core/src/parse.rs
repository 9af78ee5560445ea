//! Text grammar for exact reals, numerator specs and integer ranges.
//!
//! Reals accept arithmetic over integers, decimals, `sqrt(..)` / `sqrtN`
//! and the alias `golden`:
//!
//! ```text
//! 5/6   0.7   1.25e-3   (sqrt5-1)/2   (-1+1*sqrt(5))/2   sqrt(2)-1   golden
//! ```
//!
//! Everything evaluates exactly; decimals become rationals. A value may use
//! only one radicand.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::ParseError;
use crate::exactreal::{ExactReal, QuadSurd};
use crate::numerators::NumeratorSpec;

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: i64 = 4096;

pub fn parse_real(input: &str) -> Result<ExactReal, ParseError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0, depth: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::new(p.pos, "unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
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

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.pos, "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<ExactReal, ParseError> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            let at = self.pos;
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = acc.add(&rhs).map_err(|e| ParseError::new(at, e.to_string()))?;
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = acc.sub(&rhs).map_err(|e| ParseError::new(at, e.to_string()))?;
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExactReal, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let at = self.pos;
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = acc.mul(&rhs).map_err(|e| ParseError::new(at, e.to_string()))?;
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = acc.div(&rhs).map_err(|e| ParseError::new(at, e.to_string()))?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExactReal, ParseError> {
        self.enter()?;
        let v = if self.eat(b'-') {
            self.unary()?.neg()
        } else if self.eat(b'+') {
            self.unary()?
        } else {
            self.atom()?
        };
        self.depth -= 1;
        Ok(v)
    }

    fn atom(&mut self) -> Result<ExactReal, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(ParseError::new(self.pos, "expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(_) if self.eat_word("sqrt") => {
                let arg_at = self.pos;
                let arg = if self.peek() == Some(b'(') {
                    self.atom()?
                } else if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.number()?
                } else {
                    return Err(ParseError::new(self.pos, "expected radicand after sqrt"));
                };
                sqrt_of(&arg).map_err(|msg| ParseError::new(arg_at, msg))
            }
            Some(_) if self.eat_word("golden") => Ok(ExactReal::golden()),
            Some(_) => Err(ParseError::new(start, "expected a number, '(' or sqrt")),
            None => Err(ParseError::new(start, "unexpected end of input")),
        }
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<ExactReal, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let int_part = self.digits().to_vec();
        let mut frac_part = Vec::new();
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            frac_part = self.digits().to_vec();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseError::new(start, "expected digits"));
        }
        let mut exponent: i64 = 0;
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E')
        {
            self.pos += 1;
            let neg = match self.src.get(self.pos) {
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
            let exp_at = self.pos;
            let exp_digits = self.digits();
            if exp_digits.is_empty() {
                return Err(ParseError::new(exp_at, "expected exponent digits"));
            }
            if exp_digits.len() > 6 {
                return Err(ParseError::new(exp_at, "exponent out of range"));
            }
            let e: i64 = std::str::from_utf8(exp_digits).unwrap().parse().unwrap();
            exponent = if neg { -e } else { e };
        }
        exponent -= frac_part.len() as i64;
        if exponent.abs() > MAX_EXPONENT {
            return Err(ParseError::new(start, "exponent out of range"));
        }
        let mut all = int_part;
        all.extend_from_slice(&frac_part);
        let mantissa = BigInt::parse_bytes(&all, 10).unwrap_or_else(BigInt::zero);
        let ten = BigInt::from(10);
        let v = if exponent >= 0 {
            BigRational::from_integer(mantissa * Pow::pow(&ten, exponent as u64))
        } else {
            BigRational::new(mantissa, Pow::pow(&ten, (-exponent) as u64))
        };
        Ok(ExactReal::Rational(v))
    }
}

/// `sqrt(u/v) = sqrt(u*v) / v` for a non-negative rational.
fn sqrt_of(arg: &ExactReal) -> Result<ExactReal, String> {
    let v = arg.as_rational().ok_or("sqrt argument must be rational")?;
    if v.is_negative() {
        return Err("sqrt of a negative number".into());
    }
    let radicand = v.numer() * v.denom();
    QuadSurd::normalize(BigInt::zero(), BigInt::one(), radicand, v.denom().clone())
        .map(ExactReal::from)
        .map_err(|e| e.to_string())
}

/// Parses `4,3,2,1,1`, `all:N`, `rcf-of:<real>`, `varnum` or `engel`.
pub fn parse_numerators(input: &str) -> Result<NumeratorSpec, ParseError> {
    let trimmed = input.trim();
    let lead = input.len() - input.trim_start().len();
    if trimmed == "varnum" {
        return Ok(NumeratorSpec::VarNum);
    }
    if trimmed == "engel" {
        return Ok(NumeratorSpec::Engel);
    }
    if let Some(rest) = trimmed.strip_prefix("all:") {
        let n = parse_positive(rest, lead + 4)?;
        return Ok(NumeratorSpec::Constant(n));
    }
    if let Some(rest) = trimmed.strip_prefix("rcf-of:") {
        let y = parse_real(rest).map_err(|e| ParseError::new(e.pos + lead + 7, e.msg))?;
        return Ok(NumeratorSpec::RcfOf(y));
    }
    let mut list = Vec::new();
    let mut offset = lead;
    for part in trimmed.split(',') {
        list.push(parse_positive(part, offset)?);
        offset += part.len() + 1;
    }
    Ok(NumeratorSpec::List(list))
}

fn parse_positive(s: &str, offset: usize) -> Result<BigInt, ParseError> {
    let t = s.trim();
    let at = offset + (s.len() - s.trim_start().len());
    if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
        return Err(ParseError::new(at, format!("expected a positive integer, found {t:?}")));
    }
    let v = BigInt::parse_bytes(t.as_bytes(), 10).expect("digits only");
    if v.is_zero() {
        return Err(ParseError::new(at, "numerators must be positive"));
    }
    Ok(v)
}

/// Parses `a..b` (half open), `a..=b` (inclusive) or a single `n`.
pub fn parse_range(input: &str) -> Result<std::ops::RangeInclusive<u64>, ParseError> {
    let t = input.trim();
    let lead = input.len() - input.trim_start().len();
    let num = |s: &str, at: usize| -> Result<u64, ParseError> {
        s.trim().parse::<u64>().map_err(|_| ParseError::new(at, format!("expected integer, found {s:?}")))
    };
    if let Some((a, b)) = t.split_once("..") {
        let lo = num(a, lead)?;
        if let Some(b) = b.strip_prefix('=') {
            let hi = num(b, lead + a.len() + 3)?;
            return Ok(lo..=hi);
        }
        let hi = num(b, lead + a.len() + 2)?;
        // empty when hi <= lo
        return Ok(if hi == 0 { 1..=0 } else { lo..=hi - 1 });
    }
    let n = num(t, lead)?;
    Ok(n..=n)
}
