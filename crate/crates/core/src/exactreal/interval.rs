//! Refinable interval reals.
//!
//! A value is an expression tree whose leaves are [`RealSource`]s: pure
//! functions from a requested bit count to an enclosing dyadic interval.
//! Evaluating the tree at a given leaf precision gives rational bounds,
//! which are rounded outward to dyadics and cached on the value.
//!
//! Integer Möbius maps `(a*x + b) / (c*x + d)` applied to an interval value
//! are fused into a single node, so iterating a continued fraction map keeps
//! the tree at depth one no matter how long the orbit runs.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// Default refinement budget in bits.
pub const DEFAULT_BUDGET: u32 = 4096;

/// Extra bits kept when rounding rational bounds outward to dyadics.
const GUARD_BITS: u32 = 16;

const COMPOSE_GCD_BITS: u64 = 256;

/// A real number known only through enclosures.
///
/// `approx(bits)` must return `m` with the value in `[m, m + 1] * 2^-bits`,
/// and must depend on nothing but `self` and `bits`.
pub trait RealSource: Send + Sync + fmt::Debug {
    fn approx(&self, bits: u32) -> BigInt;
    fn label(&self) -> String;
}

/// Uniform random real in (0, 1) whose binary digits are a ChaCha20 stream.
///
/// The first 256 bits form the seed rational `m / 2^256`; every further
/// refinement reads more of the same stream.
pub struct RandomUnitReal {
    seed: u64,
    words: Mutex<(ChaCha20Rng, Vec<u32>)>,
}

impl RandomUnitReal {
    pub fn new(seed: u64) -> Self {
        RandomUnitReal { seed, words: Mutex::new((ChaCha20Rng::seed_from_u64(seed), Vec::new())) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The leading 256 bits as a rational `m / 2^256`.
    pub fn seed_rational(&self) -> BigRational {
        BigRational::new(self.approx(256), BigInt::one() << 256usize)
    }
}

impl fmt::Debug for RandomUnitReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RandomUnitReal").field("seed", &self.seed).finish()
    }
}

impl RealSource for RandomUnitReal {
    fn approx(&self, bits: u32) -> BigInt {
        let words_needed = (bits as usize).div_ceil(32);
        let mut guard = self.words.lock().expect("random source poisoned");
        let (rng, words) = &mut *guard;
        while words.len() < words_needed {
            words.push(rng.next_u32());
        }
        let digits: Vec<u32> = words[..words_needed].iter().rev().copied().collect();
        let m = BigUint::new(digits) >> (words_needed * 32 - bits as usize);
        BigInt::from(m)
    }

    fn label(&self) -> String {
        format!("random:{}", self.seed)
    }
}

/// An exact value viewed as a refinable source.
#[derive(Debug)]
pub struct ExactSource(pub super::ExactReal);

impl RealSource for ExactSource {
    fn approx(&self, bits: u32) -> BigInt {
        self.0.floor_scaled(bits).expect("exact sources have exact floors")
    }

    fn label(&self) -> String {
        self.0.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Integer Möbius map `(m[0]*x + m[1]) / (m[2]*x + m[3])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius(pub [BigInt; 4]);

impl Mobius {
    pub fn identity() -> Self {
        Mobius([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &other.0;
        let mut m = [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h];
        // content removal is quadratic in size; long orbits have coprime
        // entries anyway, so only bother while they are small
        if m.iter().any(|v| v.bits() > COMPOSE_GCD_BITS) {
            return Mobius(m);
        }
        let g = m.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if !g.is_zero() && !g.is_one() {
            for v in m.iter_mut() {
                *v /= &g;
            }
        }
        Mobius(m)
    }

    pub fn determinant(&self) -> BigInt {
        &self.0[0] * &self.0[3] - &self.0[1] * &self.0[2]
    }

    /// `x + u/v`
    pub fn add_rational(v: &BigRational) -> Mobius {
        Mobius([v.denom().clone(), v.numer().clone(), BigInt::zero(), v.denom().clone()])
    }

    /// `x * u/v`
    pub fn scale(v: &BigRational) -> Mobius {
        Mobius([v.numer().clone(), BigInt::zero(), BigInt::zero(), v.denom().clone()])
    }

    /// `(u/v) / x`
    pub fn over(v: &BigRational) -> Mobius {
        Mobius([BigInt::zero(), v.numer().clone(), v.denom().clone(), BigInt::zero()])
    }

    /// `u/v - x`
    pub fn reflect(v: &BigRational) -> Mobius {
        Mobius([-v.denom(), v.numer().clone(), BigInt::zero(), v.denom().clone()])
    }

    fn apply(&self, x: &BigRational) -> Option<BigRational> {
        let [a, b, c, d] = &self.0;
        let num = a * x.numer() + b * x.denom();
        let den = c * x.numer() + d * x.denom();
        // bounds are rounded to dyadics right after, so skip the gcd here
        match den.sign_cmp() {
            Ordering::Equal => None,
            Ordering::Greater => Some(BigRational::new_raw(num, den)),
            Ordering::Less => Some(BigRational::new_raw(-num, -den)),
        }
    }

    fn denominator_sign(&self, x: &BigRational) -> Ordering {
        let den = &self.0[2] * x.numer() + &self.0[3] * x.denom();
        den.sign_cmp()
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

#[derive(Debug)]
pub enum Node {
    Leaf(Arc<dyn RealSource>),
    Mobius { map: Mobius, inner: Arc<Node> },
    Binary { op: BinOp, left: Arc<Node>, right: Arc<Node> },
}

type Bounds = (BigRational, BigRational);

impl Node {
    /// Rational bounds with every leaf read at `bits`; `None` when a
    /// denominator enclosure still contains zero.
    fn eval(&self, bits: u32) -> Option<Bounds> {
        match self {
            Node::Leaf(src) => {
                let m = src.approx(bits);
                let den = BigInt::one() << bits as usize;
                Some((BigRational::new_raw(m.clone(), den.clone()), BigRational::new_raw(m + 1, den)))
            }
            Node::Mobius { map, inner } => {
                let (lo, hi) = inner.eval(bits)?;
                let s_lo = map.denominator_sign(&lo);
                let s_hi = map.denominator_sign(&hi);
                if s_lo == Ordering::Equal || s_lo != s_hi {
                    return None;
                }
                let a = map.apply(&lo)?;
                let b = map.apply(&hi)?;
                Some(if rat_cmp(&a, &b) != Ordering::Greater { (a, b) } else { (b, a) })
            }
            Node::Binary { op, left, right } => {
                let (a, b) = left.eval(bits)?;
                let (c, d) = right.eval(bits)?;
                match op {
                    BinOp::Add => Some((a + c, b + d)),
                    BinOp::Sub => Some((a - d, b - c)),
                    BinOp::Mul => Some(hull([&a * &c, &a * &d, &b * &c, &b * &d])),
                    BinOp::Div => {
                        if !c.is_positive() && !d.is_negative() {
                            return None;
                        }
                        let (rc, rd) = (c.recip(), d.recip());
                        Some(hull([&a * &rc, &a * &rd, &b * &rc, &b * &rd]))
                    }
                }
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            Node::Leaf(src) => src.label(),
            Node::Mobius { map, inner } => {
                let [a, b, c, d] = &map.0;
                format!("mobius[{a},{b};{c},{d}]({})", inner.describe())
            }
            Node::Binary { op, left, right } => {
                format!("{:?}({}, {})", op, left.describe(), right.describe())
            }
        }
    }
}

fn hull(vals: [BigRational; 4]) -> Bounds {
    let mut it = vals.into_iter();
    let first = it.next().expect("four values");
    let (mut lo, mut hi) = (first.clone(), first);
    for v in it {
        if rat_cmp(&v, &lo) == Ordering::Less {
            lo = v;
        } else if rat_cmp(&v, &hi) == Ordering::Greater {
            hi = v;
        }
    }
    (lo, hi)
}

/// Cross-multiplied comparison. `Ord` on `BigRational` walks a continued
/// fraction expansion, which is ruinous for the nearly equal endpoints of a
/// tight enclosure.
pub(crate) fn rat_cmp(a: &BigRational, b: &BigRational) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

fn round_down(v: &BigRational, bits: u32) -> BigRational {
    let den = BigInt::one() << bits as usize;
    dyadic((v.numer() * &den).div_floor(v.denom()), bits)
}

fn round_up(v: &BigRational, bits: u32) -> BigRational {
    let den = BigInt::one() << bits as usize;
    dyadic(-((-(v.numer() * &den)).div_floor(v.denom())), bits)
}

/// `m / 2^bits` in lowest terms without a general gcd.
fn dyadic(m: BigInt, bits: u32) -> BigRational {
    let Some(tz) = m.trailing_zeros() else {
        return BigRational::zero();
    };
    let shift = tz.min(u64::from(bits));
    BigRational::new_raw(m >> shift as usize, BigInt::one() << (u64::from(bits) - shift) as usize)
}

/// A value enclosed by dyadic bounds `[lo, hi]`, refinable up to `budget`
/// leaf bits.
#[derive(Clone)]
pub struct IntervalReal {
    node: Arc<Node>,
    lo: BigRational,
    hi: BigRational,
    bits: u32,
    budget: u32,
}

impl fmt::Debug for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntervalReal")
            .field("node", &self.node.describe())
            .field("bits", &self.bits)
            .field("budget", &self.budget)
            .finish()
    }
}

impl IntervalReal {
    /// Evaluates `node` starting at `bits`, doubling on poles, up to `budget`.
    pub fn from_node(node: Arc<Node>, bits: u32, budget: u32) -> Result<Self> {
        let mut bits = bits.clamp(1, budget.max(1));
        loop {
            if let Some((lo, hi)) = node.eval(bits) {
                let g = bits + GUARD_BITS;
                return Ok(IntervalReal {
                    lo: round_down(&lo, g),
                    hi: round_up(&hi, g),
                    node,
                    bits,
                    budget,
                });
            }
            bits = next_bits(bits, budget).ok_or(Error::PrecisionExhausted { budget })?;
        }
    }

    pub fn from_source(src: Arc<dyn RealSource>, bits: u32, budget: u32) -> Result<Self> {
        Self::from_node(Arc::new(Node::Leaf(src)), bits, budget)
    }

    pub fn random_unit(seed: u64, budget: u32) -> Self {
        Self::from_source(Arc::new(RandomUnitReal::new(seed)), 256, budget.max(256))
            .expect("leaf evaluation never fails")
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }
    pub fn hi(&self) -> &BigRational {
        &self.hi
    }
    pub fn bits(&self) -> u32 {
        self.bits
    }
    pub fn budget(&self) -> u32 {
        self.budget
    }
    pub fn node(&self) -> &Arc<Node> {
        &self.node
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn with_budget(&self, budget: u32) -> Self {
        IntervalReal { budget, ..self.clone() }
    }

    /// One refinement step: doubles the leaf precision.
    pub fn refine(&self) -> Result<Self> {
        let bits = next_bits(self.bits, self.budget)
            .ok_or(Error::PrecisionExhausted { budget: self.budget })?;
        Self::from_node(self.node.clone(), bits, self.budget)
    }

    /// Refines until the enclosure is no wider than `2^-target_bits`.
    pub fn refine_to(&self, target_bits: u32) -> Result<Self> {
        let target = BigRational::new(BigInt::one(), BigInt::one() << target_bits as usize);
        let mut cur = self.clone();
        while rat_cmp(&cur.width(), &target) == Ordering::Greater {
            cur = cur.refine()?;
        }
        Ok(cur)
    }

    /// Exact floor together with the refined value that decided it.
    pub fn floor_refined(&self) -> Result<(BigInt, IntervalReal)> {
        let mut cur = self.clone();
        loop {
            let f_lo = cur.lo.floor().to_integer();
            let f_hi = cur.hi.floor().to_integer();
            if f_lo == f_hi {
                return Ok((f_lo, cur));
            }
            cur = cur.refine()?;
        }
    }

    pub fn signum_refined(&self) -> Result<(Ordering, IntervalReal)> {
        let mut cur = self.clone();
        loop {
            if cur.lo.is_positive() {
                return Ok((Ordering::Greater, cur));
            }
            if cur.hi.is_negative() {
                return Ok((Ordering::Less, cur));
            }
            if cur.lo.is_zero() && cur.hi.is_zero() {
                return Ok((Ordering::Equal, cur));
            }
            cur = cur.refine()?;
        }
    }

    /// Applies an integer Möbius map, fusing with an outer Möbius node.
    pub fn mobius(&self, map: &Mobius) -> Result<Self> {
        let node = match &*self.node {
            Node::Mobius { map: inner_map, inner } => {
                Node::Mobius { map: map.compose(inner_map), inner: inner.clone() }
            }
            _ => Node::Mobius { map: map.clone(), inner: self.node.clone() },
        };
        Self::from_node(Arc::new(node), self.bits, self.budget)
    }

    pub fn binary(&self, op: BinOp, other: &IntervalReal) -> Result<Self> {
        let node = Node::Binary { op, left: self.node.clone(), right: other.node.clone() };
        Self::from_node(
            Arc::new(node),
            self.bits.max(other.bits),
            self.budget.max(other.budget),
        )
    }

    pub fn midpoint_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigInt::from(2);
        super::rational_to_f64(&mid)
    }

    pub fn describe(&self) -> String {
        self.node.describe()
    }
}

fn next_bits(bits: u32, budget: u32) -> Option<u32> {
    if bits >= budget {
        None
    } else {
        Some(bits.saturating_mul(2).min(budget))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_source_is_prefix_stable() {
        let a = RandomUnitReal::new(42);
        let b = RandomUnitReal::new(42);
        let long = a.approx(1000);
        let short = b.approx(77);
        assert_eq!(long >> (1000 - 77), short);
        // asking for fewer bits afterwards still agrees
        assert_eq!(a.approx(77), short);
        assert!(a.approx(64) < (BigInt::one() << 64));
    }

    #[test]
    fn mobius_compose_matches_application() {
        let m1 = Mobius([2.into(), 1.into(), 1.into(), 3.into()]);
        let m2 = Mobius([0.into(), 5.into(), 1.into(), 2.into()]);
        let x = BigRational::new(3.into(), 7.into());
        let direct = m1.apply(&m2.apply(&x).unwrap()).unwrap();
        assert_eq!(m1.compose(&m2).apply(&x).unwrap(), direct);
    }

    #[test]
    fn floor_refines_until_decided() {
        let v = IntervalReal::random_unit(3, 4096);
        let m = v.mobius(&Mobius::over(&BigRational::from_integer(1000.into()))).unwrap();
        let (f, refined) = m.floor_refined().unwrap();
        assert!(refined.lo().floor().to_integer() == f);
        assert!(f >= BigInt::from(1000));
    }

    #[test]
    fn integer_valued_interval_exhausts() {
        let src = Arc::new(ExactSource(super::super::ExactReal::from_int(1)));
        let v = IntervalReal::from_source(src, 8, 64).unwrap();
        // enclosures of 1 are [1, 1 + eps], so 1 - v always straddles 0
        let shifted = v.mobius(&Mobius::reflect(&BigRational::from_integer(1.into()))).unwrap();
        assert!(matches!(shifted.floor_refined(), Err(Error::PrecisionExhausted { budget: 64 })));
    }
}
