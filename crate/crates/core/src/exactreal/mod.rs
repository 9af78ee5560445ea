//! Exact real numbers: rationals, quadratic surds and refinable intervals.
//!
//! Every `⌊·⌋` taken elsewhere in the crate goes through [`ExactReal::floor`],
//! which is exact for the first two variants and decided by refinement for
//! intervals (failing with [`Error::PrecisionExhausted`] rather than guessing).

mod interval;
mod surd;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use interval::{
    BinOp, ExactSource, IntervalReal, Mobius, Node, RandomUnitReal, RealSource, DEFAULT_BUDGET,
};
pub use surd::{square_free_split, QuadSurd, Quadratic};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug)]
pub enum ExactReal {
    Rational(BigRational),
    Surd(QuadSurd),
    Interval(IntervalReal),
}

impl PartialEq for ExactReal {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactReal::Rational(a), ExactReal::Rational(b)) => a == b,
            (ExactReal::Surd(a), ExactReal::Surd(b)) => a == b,
            (ExactReal::Interval(a), ExactReal::Interval(b)) => {
                Arc::ptr_eq(a.node(), b.node()) && a.lo() == b.lo() && a.hi() == b.hi()
            }
            _ => false,
        }
    }
}

impl From<Quadratic> for ExactReal {
    fn from(q: Quadratic) -> Self {
        match q {
            Quadratic::Rational(v) => ExactReal::Rational(v),
            Quadratic::Surd(s) => ExactReal::Surd(s),
        }
    }
}

impl From<BigRational> for ExactReal {
    fn from(v: BigRational) -> Self {
        ExactReal::Rational(v)
    }
}

impl From<BigInt> for ExactReal {
    fn from(v: BigInt) -> Self {
        ExactReal::Rational(BigRational::from_integer(v))
    }
}

impl From<IntervalReal> for ExactReal {
    fn from(v: IntervalReal) -> Self {
        ExactReal::Interval(v)
    }
}

pub(crate) fn rational_to_f64(v: &BigRational) -> f64 {
    if let Some(f) = v.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    // scale both parts down to avoid overflow
    let shift = v.numer().bits().max(v.denom().bits()).saturating_sub(60);
    let n = (v.numer() >> shift as usize).to_f64().unwrap_or(0.0);
    let d = (v.denom() >> shift as usize).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        f64::INFINITY
    } else {
        n / d
    }
}

impl ExactReal {
    pub fn from_int(v: i64) -> Self {
        BigInt::from(v).into()
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `num / den` in lowest terms.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactReal::Rational(BigRational::new(num.into(), den)))
    }

    /// `(p + q*sqrt(d)) / r`, normalized (possibly to a rational).
    pub fn surd(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
        r: impl Into<BigInt>,
    ) -> Result<Self> {
        Ok(QuadSurd::normalize(p.into(), q.into(), d.into(), r.into())?.into())
    }

    /// `(sqrt(5) - 1) / 2`, the fixed point of the Gauss map.
    pub fn golden() -> Self {
        Self::surd(-1, 1, 5, 2).expect("golden ratio is a valid surd")
    }

    /// A uniform random real in (0, 1) driven by `seed`.
    pub fn random_unit(seed: u64, budget: u32) -> Self {
        ExactReal::Interval(IntervalReal::random_unit(seed, budget))
    }

    /// Views an exact value as an interval refinable up to `budget` bits.
    pub fn to_interval(&self, bits: u32, budget: u32) -> Result<IntervalReal> {
        match self {
            ExactReal::Interval(v) => Ok(v.clone()),
            exact => IntervalReal::from_source(Arc::new(ExactSource(exact.clone())), bits, budget),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactReal::Interval(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactReal::Rational(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rational(v) if v.is_zero())
    }

    pub fn floor(&self) -> Result<BigInt> {
        match self {
            ExactReal::Rational(v) => Ok(v.floor().to_integer()),
            ExactReal::Surd(s) => Ok(s.floor()),
            ExactReal::Interval(v) => Ok(v.floor_refined()?.0),
        }
    }

    /// `floor(self * 2^bits)`, exact variants only.
    pub fn floor_scaled(&self, bits: u32) -> Result<BigInt> {
        match self {
            ExactReal::Rational(v) => {
                Ok((v.numer() << bits as usize).div_floor(v.denom()))
            }
            ExactReal::Surd(s) => Ok(s.floor_scaled(bits)),
            ExactReal::Interval(v) => {
                let scaled = v.mobius(&Mobius::scale(&BigRational::from_integer(
                    BigInt::one() << bits as usize,
                )))?;
                Ok(scaled.floor_refined()?.0)
            }
        }
    }

    /// `(floor(v), v - floor(v))`. For intervals, the remainder keeps the
    /// precision that decided the floor.
    pub fn floor_frac(&self) -> Result<(BigInt, ExactReal)> {
        match self {
            ExactReal::Interval(v) => {
                let (f, refined) = v.floor_refined()?;
                let shift = Mobius::add_rational(&BigRational::from_integer(-&f));
                Ok((f, ExactReal::Interval(refined.mobius(&shift)?)))
            }
            exact => {
                let f = exact.floor()?;
                let rest = exact.sub(&ExactReal::from(f.clone()))?;
                Ok((f, rest))
            }
        }
    }

    pub fn frac(&self) -> Result<ExactReal> {
        Ok(self.floor_frac()?.1)
    }

    pub fn signum(&self) -> Result<Ordering> {
        match self {
            ExactReal::Rational(v) => Ok(v.cmp(&BigRational::zero())),
            ExactReal::Surd(s) => Ok(s.signum()),
            ExactReal::Interval(v) => Ok(v.signum_refined()?.0),
        }
    }

    pub fn cmp_exact(&self, other: &ExactReal) -> Result<Ordering> {
        self.sub(other)?.signum()
    }

    pub fn lt(&self, other: &ExactReal) -> Result<bool> {
        Ok(self.cmp_exact(other)? == Ordering::Less)
    }

    pub fn neg(&self) -> ExactReal {
        match self {
            ExactReal::Rational(v) => ExactReal::Rational(-v),
            ExactReal::Surd(s) => ExactReal::Surd(s.neg()),
            ExactReal::Interval(v) => ExactReal::Interval(
                v.mobius(&Mobius::scale(&BigRational::from_integer((-1).into())))
                    .expect("negation has no pole"),
            ),
        }
    }

    pub fn abs(&self) -> Result<ExactReal> {
        Ok(if self.signum()? == Ordering::Less { self.neg() } else { self.clone() })
    }

    pub fn recip(&self) -> Result<ExactReal> {
        ExactReal::one().div(self)
    }

    pub fn add(&self, other: &ExactReal) -> Result<ExactReal> {
        self.arith(other, ArithOp::Add)
    }
    pub fn sub(&self, other: &ExactReal) -> Result<ExactReal> {
        self.arith(other, ArithOp::Sub)
    }
    pub fn mul(&self, other: &ExactReal) -> Result<ExactReal> {
        self.arith(other, ArithOp::Mul)
    }
    pub fn div(&self, other: &ExactReal) -> Result<ExactReal> {
        self.arith(other, ArithOp::Div)
    }

    pub fn mul_int(&self, k: &BigInt) -> Result<ExactReal> {
        self.mul(&ExactReal::from(k.clone()))
    }

    pub fn arith(&self, other: &ExactReal, op: ArithOp) -> Result<ExactReal> {
        use ExactReal::*;
        match (self, other) {
            (Rational(a), Rational(b)) => rational_arith(a, b, op),
            (Surd(a), Surd(b)) => surd_arith(a, b, op),
            (Surd(a), Rational(b)) => surd_rational_arith(a, b, op),
            (Rational(a), Surd(b)) => rational_surd_arith(a, b, op),
            (Interval(a), Rational(b)) => {
                let map = match op {
                    ArithOp::Add => Mobius::add_rational(b),
                    ArithOp::Sub => Mobius::add_rational(&-b),
                    ArithOp::Mul => Mobius::scale(b),
                    ArithOp::Div => {
                        if b.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        Mobius::scale(&b.recip())
                    }
                };
                Ok(Interval(a.mobius(&map)?))
            }
            (Rational(a), Interval(b)) => {
                let map = match op {
                    ArithOp::Add => Mobius::add_rational(a),
                    ArithOp::Sub => Mobius::reflect(a),
                    ArithOp::Mul => Mobius::scale(a),
                    ArithOp::Div => Mobius::over(a),
                };
                Ok(Interval(b.mobius(&map)?))
            }
            (Interval(a), exact) => {
                let b = exact.to_interval(a.bits(), a.budget())?;
                Ok(Interval(a.binary(bin_op(op), &b)?))
            }
            (exact, Interval(b)) => {
                let a = exact.to_interval(b.bits(), b.budget())?;
                Ok(Interval(a.binary(bin_op(op), b)?))
            }
        }
    }

    /// Approximate value, for reporting and float-mode seeding only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(v) => rational_to_f64(v),
            ExactReal::Surd(s) => s.to_f64(),
            ExactReal::Interval(v) => v.midpoint_f64(),
        }
    }

    /// Checks `0 < self < 1`.
    pub fn in_open_unit(&self) -> Result<bool> {
        Ok(self.signum()? == Ordering::Greater && self.lt(&ExactReal::one())?)
    }

    /// Same value with a different refinement budget (intervals only).
    pub fn with_budget(&self, budget: u32) -> ExactReal {
        match self {
            ExactReal::Interval(v) => ExactReal::Interval(v.with_budget(budget)),
            exact => exact.clone(),
        }
    }

    pub fn budget(&self) -> Option<u32> {
        match self {
            ExactReal::Interval(v) => Some(v.budget()),
            _ => None,
        }
    }
}

fn bin_op(op: ArithOp) -> BinOp {
    match op {
        ArithOp::Add => BinOp::Add,
        ArithOp::Sub => BinOp::Sub,
        ArithOp::Mul => BinOp::Mul,
        ArithOp::Div => BinOp::Div,
    }
}

fn rational_arith(a: &BigRational, b: &BigRational, op: ArithOp) -> Result<ExactReal> {
    Ok(ExactReal::Rational(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    }))
}

fn surd_arith(a: &QuadSurd, b: &QuadSurd, op: ArithOp) -> Result<ExactReal> {
    Ok(match op {
        ArithOp::Add => a.add(b)?,
        ArithOp::Sub => a.add(&b.neg())?,
        ArithOp::Mul => a.mul(b)?,
        ArithOp::Div => {
            if a.d() != b.d() {
                return Err(Error::IncompatibleSurds { left: a.d().clone(), right: b.d().clone() });
            }
            match b.recip()? {
                Quadratic::Surd(rb) => a.mul(&rb)?,
                Quadratic::Rational(rb) => a.mul_rational(&rb)?,
            }
        }
    }
    .into())
}

fn surd_rational_arith(a: &QuadSurd, b: &BigRational, op: ArithOp) -> Result<ExactReal> {
    Ok(match op {
        ArithOp::Add => a.add_rational(b)?,
        ArithOp::Sub => a.add_rational(&-b)?,
        ArithOp::Mul => a.mul_rational(b)?,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a.mul_rational(&b.recip())?
        }
    }
    .into())
}

fn rational_surd_arith(a: &BigRational, b: &QuadSurd, op: ArithOp) -> Result<ExactReal> {
    Ok(match op {
        ArithOp::Add => b.add_rational(a)?,
        ArithOp::Sub => b.neg().add_rational(a)?,
        ArithOp::Mul => b.mul_rational(a)?,
        ArithOp::Div => match b.recip()? {
            Quadratic::Surd(rb) => rb.mul_rational(a)?,
            Quadratic::Rational(rb) => Quadratic::Rational(a * rb),
        },
    }
    .into())
}

/// Prints rationals as `p/q` (or `p`) and surds as `(p+q*sqrt(d))/r`; both
/// forms parse back to the identical value.
impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(v) if v.denom().is_one() => write!(f, "{}", v.numer()),
            ExactReal::Rational(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            ExactReal::Surd(s) => write!(f, "{s}"),
            ExactReal::Interval(v) => write!(f, "[{}, {}]", v.lo(), v.hi()),
        }
    }
}
