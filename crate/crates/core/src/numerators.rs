//! Where the numerators `a_i` of an expansion come from.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::exactreal::ExactReal;
use crate::expansion::PartialQuotient;

/// A parsed numerator specification, see [`crate::parse::parse_numerators`].
#[derive(Clone, Debug, PartialEq)]
pub enum NumeratorSpec {
    /// Explicit finite list.
    List(Vec<BigInt>),
    /// The same numerator forever (`all:N`).
    Constant(BigInt),
    /// Regular continued fraction digits of `y` (`rcf-of:y`).
    RcfOf(ExactReal),
    /// `a = floor(1/x)` at each step.
    VarNum,
    /// `1, b_1, b_2, ...`: each numerator is the previous digit.
    Engel,
}

/// Supplies the next numerator given the current remainder and the
/// previously emitted quotient. `None` ends the expansion.
pub trait NumeratorSource {
    fn next_numerator(
        &mut self,
        x: &ExactReal,
        prev: Option<&PartialQuotient>,
    ) -> Result<Option<BigInt>>;
}

impl NumeratorSpec {
    pub fn source(&self) -> Box<dyn NumeratorSource> {
        match self {
            NumeratorSpec::List(v) => Box::new(ListSource { items: v.clone(), pos: 0 }),
            NumeratorSpec::Constant(n) => Box::new(ConstantSource(n.clone())),
            NumeratorSpec::RcfOf(y) => Box::new(RcfDigits::new(y.clone())),
            NumeratorSpec::VarNum => Box::new(VarNumSource),
            NumeratorSpec::Engel => Box::new(EngelSource),
        }
    }
}

pub struct ListSource {
    items: Vec<BigInt>,
    pos: usize,
}

impl ListSource {
    pub fn new(items: Vec<BigInt>) -> Self {
        ListSource { items, pos: 0 }
    }
}

impl NumeratorSource for ListSource {
    fn next_numerator(&mut self, _: &ExactReal, _: Option<&PartialQuotient>) -> Result<Option<BigInt>> {
        let v = self.items.get(self.pos).cloned();
        self.pos += 1;
        Ok(v)
    }
}

pub struct ConstantSource(pub BigInt);

impl NumeratorSource for ConstantSource {
    fn next_numerator(&mut self, _: &ExactReal, _: Option<&PartialQuotient>) -> Result<Option<BigInt>> {
        Ok(Some(self.0.clone()))
    }
}

/// Gauss-map digits of `y`; stops when `y` hits zero.
pub struct RcfDigits {
    y: ExactReal,
}

impl RcfDigits {
    pub fn new(y: ExactReal) -> Self {
        RcfDigits { y }
    }

    pub fn next_digit(&mut self) -> Result<Option<BigInt>> {
        if self.y.is_zero() {
            return Ok(None);
        }
        let (a, rest) = self.y.recip()?.floor_frac()?;
        self.y = rest;
        Ok(Some(a))
    }
}

impl NumeratorSource for RcfDigits {
    fn next_numerator(&mut self, _: &ExactReal, _: Option<&PartialQuotient>) -> Result<Option<BigInt>> {
        self.next_digit()
    }
}

pub struct VarNumSource;

impl NumeratorSource for VarNumSource {
    fn next_numerator(&mut self, x: &ExactReal, _: Option<&PartialQuotient>) -> Result<Option<BigInt>> {
        Ok(Some(x.recip()?.floor()?))
    }
}

pub struct EngelSource;

impl NumeratorSource for EngelSource {
    fn next_numerator(&mut self, _: &ExactReal, prev: Option<&PartialQuotient>) -> Result<Option<BigInt>> {
        Ok(Some(prev.map_or_else(BigInt::one, |q| q.b.clone())))
    }
}

/// RCF digits `[0; d_1, ..., d_k]` evaluated exactly.
pub fn rcf_value(digits: &[BigInt]) -> num_rational::BigRational {
    use num_rational::BigRational;
    let mut v = BigRational::zero();
    for d in digits.iter().rev() {
        v = (BigRational::from_integer(d.clone()) + v).recip();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn rcf_digits_of_rational_terminate() {
        let mut src = RcfDigits::new(ExactReal::ratio(7, 10).unwrap());
        let mut digits = Vec::new();
        while let Some(d) = src.next_digit().unwrap() {
            digits.push(d);
        }
        let expect: Vec<BigInt> = [1, 2, 3].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(digits, expect);
        assert_eq!(rcf_value(&digits), BigRational::new(7.into(), 10.into()));
    }

    #[test]
    fn golden_digits_are_ones() {
        let mut src = RcfDigits::new(ExactReal::golden());
        for _ in 0..20 {
            assert_eq!(src.next_digit().unwrap(), Some(BigInt::one()));
        }
    }
}
