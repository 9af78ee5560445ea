//! Quadratic surds `(p + q*sqrt(d)) / r` over the integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest radicand we normalize. Square-free extraction is done by trial
/// division up to the cube root, which stays cheap below 2^64.
const MAX_RADICAND_BITS: u64 = 64;

/// An irrational quadratic number `(p + q*sqrt(d)) / r`.
///
/// Invariants (enforced by [`QuadSurd::normalize`]): `q != 0`, `d > 1` is
/// square-free, `r > 0` and `gcd(p, q, r) = 1`. Under these invariants the
/// representation of a value is unique, so structural equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

/// Either a rational or an irrational surd, the result of normalizing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quadratic {
    Rational(BigRational),
    Surd(QuadSurd),
}

/// Splits `d >= 1` as `s^2 * core` with `core` square-free.
pub fn square_free_split(d: &BigInt) -> Result<(BigInt, BigInt)> {
    if d.bits() > MAX_RADICAND_BITS {
        return Err(Error::RadicandTooLarge(d.clone()));
    }
    let mut m: u128 = d.to_u128().ok_or_else(|| Error::domain("radicand must be positive"))?;
    if m == 0 {
        return Err(Error::domain("radicand must be positive"));
    }
    let mut square: u128 = 1;
    let mut core: u128 = 1;
    let mut k: u128 = 2;
    while k * k * k <= m {
        if m % k == 0 {
            let mut e = 0u32;
            while m % k == 0 {
                m /= k;
                e += 1;
            }
            square *= k.pow(e / 2);
            if e % 2 == 1 {
                core *= k;
            }
        }
        k += if k == 2 { 1 } else { 2 };
    }
    // What remains has at most two prime factors, all larger than k.
    let root = m.sqrt();
    if root * root == m {
        square *= root;
    } else {
        core *= m;
    }
    Ok((BigInt::from(square), BigInt::from(core)))
}

impl QuadSurd {
    /// Normalizes `(p + q*sqrt(d)) / r`, collapsing to a rational when the
    /// irrational part vanishes.
    pub fn normalize(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Result<Quadratic> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::domain("negative radicand"));
        }
        if q.is_zero() || d.is_zero() {
            return Ok(Quadratic::Rational(BigRational::new(p, r)));
        }
        let (s, core) = square_free_split(&d)?;
        let q = q * s;
        if core.is_one() {
            return Ok(Quadratic::Rational(BigRational::new(p + q, r)));
        }
        let (mut p, mut q, mut r) = (p, q, r);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Ok(Quadratic::Surd(QuadSurd { p, q, d: core, r }))
    }

    /// Builds from parts already known to be normalized. Only used where the
    /// radicand is known to be square-free.
    fn reduce(p: BigInt, q: BigInt, d: &BigInt, r: BigInt) -> Result<Quadratic> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if q.is_zero() {
            return Ok(Quadratic::Rational(BigRational::new(p, r)));
        }
        let (mut p, mut q, mut r) = (p, q, r);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Ok(Quadratic::Surd(QuadSurd { p, q, d: d.clone(), r }))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }

    /// `floor(q * sqrt(d))`, exact because `q*sqrt(d)` is never an integer.
    fn floor_irrational_part(&self) -> BigInt {
        let mag = (&self.q * &self.q * &self.d).sqrt();
        if self.q.is_positive() {
            mag
        } else {
            -mag - 1
        }
    }

    pub fn floor(&self) -> BigInt {
        let m = &self.p + self.floor_irrational_part();
        m.div_floor(&self.r)
    }

    /// `floor(self * 2^bits)`.
    pub fn floor_scaled(&self, bits: u32) -> BigInt {
        let scale = BigInt::one() << bits;
        let p = &self.p * &scale;
        let q = &self.q * &scale;
        let mag = (&q * &q * &self.d).sqrt();
        let irr = if q.is_positive() { mag } else { -mag - 1 };
        (p + irr).div_floor(&self.r)
    }

    pub fn signum(&self) -> Ordering {
        let zero = BigInt::zero();
        let p_sign = self.p.cmp(&zero);
        let q_sign = self.q.cmp(&zero);
        match (p_sign, q_sign) {
            (Ordering::Less, Ordering::Less) | (Ordering::Equal, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Greater) | (Ordering::Equal, Ordering::Greater) => {
                Ordering::Greater
            }
            (_, Ordering::Equal) => unreachable!("normalized surds have q != 0"),
            (Ordering::Greater, Ordering::Less) => {
                // p - |q| sqrt d: compare p^2 with q^2 d
                (&self.p * &self.p).cmp(&(&self.q * &self.q * &self.d))
            }
            (Ordering::Less, Ordering::Greater) => {
                (&self.q * &self.q * &self.d).cmp(&(&self.p * &self.p))
            }
        }
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd { p: -&self.p, q: -&self.q, d: self.d.clone(), r: self.r.clone() }
    }

    fn check_radicand(&self, other: &QuadSurd) -> Result<()> {
        if self.d != other.d {
            return Err(Error::IncompatibleSurds { left: self.d.clone(), right: other.d.clone() });
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadSurd) -> Result<Quadratic> {
        self.check_radicand(other)?;
        Self::reduce(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.d,
            &self.r * &other.r,
        )
    }

    pub fn mul(&self, other: &QuadSurd) -> Result<Quadratic> {
        self.check_radicand(other)?;
        Self::reduce(
            &self.p * &other.p + &self.q * &other.q * &self.d,
            &self.p * &other.q + &self.q * &other.p,
            &self.d,
            &self.r * &other.r,
        )
    }

    /// `1 / self`, rationalizing the denominator.
    pub fn recip(&self) -> Result<Quadratic> {
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        Self::reduce(&self.r * &self.p, -(&self.r * &self.q), &self.d, norm)
    }

    pub fn add_rational(&self, v: &BigRational) -> Result<Quadratic> {
        Self::reduce(
            &self.p * v.denom() + v.numer() * &self.r,
            &self.q * v.denom(),
            &self.d,
            &self.r * v.denom(),
        )
    }

    pub fn mul_rational(&self, v: &BigRational) -> Result<Quadratic> {
        Self::reduce(&self.p * v.numer(), &self.q * v.numer(), &self.d, &self.r * v.denom())
    }

    pub fn to_f64(&self) -> f64 {
        let d = big_to_f64(&self.d);
        (big_to_f64(&self.p) + big_to_f64(&self.q) * d.sqrt()) / big_to_f64(&self.r)
    }
}

pub(crate) fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(if v.sign() == Sign::Minus { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.p, sign, self.q.abs(), self.d, self.r)
    }
}
