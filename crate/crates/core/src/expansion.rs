//! Proper continued fraction expansions
//!
//! ```text
//! x = a_1 / (b_1 + a_2 / (b_2 + ...)),    b_i >= a_i >= 1
//! ```
//!
//! together with their convergents, matrix products and the rational
//! expansion enumerator.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactreal::ExactReal;
use crate::numerators::{ListSource, NumeratorSource};

/// One step `a / b` of an expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialQuotient {
    pub a: BigInt,
    pub b: BigInt,
}

impl PartialQuotient {
    /// Checks `b >= a >= 1`.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a < BigInt::one() || b < a {
            return Err(Error::NotProper { a, b });
        }
        Ok(PartialQuotient { a, b })
    }
}

impl fmt::Display for PartialQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

#[derive(Serialize, Deserialize)]
struct QuotientRepr {
    a: String,
    b: String,
}

impl Serialize for PartialQuotient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuotientRepr { a: self.a.to_string(), b: self.b.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialQuotient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = QuotientRepr::deserialize(d)?;
        let parse = |s: &str| {
            if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
                return Err(D::Error::custom(format!("not a decimal integer: {s:?}")));
            }
            Ok(BigInt::parse_bytes(s.as_bytes(), 10).expect("digits only"))
        };
        PartialQuotient::new(parse(&r.a)?, parse(&r.b)?).map_err(D::Error::custom)
    }
}

/// A (prefix of a) PCF expansion. Equality is sequence equality of the
/// quotients plus the tail, not value equality.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PcfExpansion {
    pub quotients: Vec<PartialQuotient>,
    /// The remainder `x_n` after the last quotient, when known.
    pub tail: Option<ExactReal>,
}

impl PcfExpansion {
    pub fn new(quotients: Vec<PartialQuotient>, tail: Option<ExactReal>) -> Self {
        PcfExpansion { quotients, tail }
    }

    /// Builds from `(a, b)` pairs, rejecting improper ones.
    pub fn from_pairs<I, A, B>(pairs: I, tail: Option<ExactReal>) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<BigInt>,
        B: Into<BigInt>,
    {
        let quotients =
            pairs.into_iter().map(|(a, b)| PartialQuotient::new(a, b)).collect::<Result<_>>()?;
        Ok(PcfExpansion { quotients, tail })
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn numerators(&self) -> Vec<BigInt> {
        self.quotients.iter().map(|q| q.a.clone()).collect()
    }

    /// Tail is exactly zero: a terminated rational expansion.
    pub fn terminated(&self) -> bool {
        self.tail.as_ref().is_some_and(ExactReal::is_zero)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.quotients).expect("quotients serialize")
    }

    /// Parses `[{"a": "4", "b": "4"}, ...]`. The tail is not part of the
    /// encoding.
    pub fn from_json(s: &str) -> Result<Self> {
        let quotients: Vec<PartialQuotient> =
            serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Ok(PcfExpansion { quotients, tail: None })
    }
}

impl fmt::Display for PcfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, q) in self.quotients.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "]")
    }
}

/// Unreduced convergents `(p_n, q_n)` for `n = -1, 0, 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentSeq {
    pairs: Vec<(BigInt, BigInt)>,
}

impl ConvergentSeq {
    fn start() -> Self {
        ConvergentSeq {
            pairs: vec![(BigInt::one(), BigInt::zero()), (BigInt::zero(), BigInt::one())],
        }
    }

    fn push(&mut self, q: &PartialQuotient) {
        let k = self.pairs.len();
        let (p1, q1) = &self.pairs[k - 1];
        let (p2, q2) = &self.pairs[k - 2];
        let next = (&q.b * p1 + &q.a * p2, &q.b * q1 + &q.a * q2);
        self.pairs.push(next);
    }

    /// Largest available index `n`.
    pub fn last_index(&self) -> usize {
        self.pairs.len() - 2
    }

    fn slot(n: isize) -> usize {
        assert!(n >= -1, "convergents are indexed from -1");
        (n + 1) as usize
    }

    pub fn p(&self, n: isize) -> &BigInt {
        &self.pairs[Self::slot(n)].0
    }

    pub fn q(&self, n: isize) -> &BigInt {
        &self.pairs[Self::slot(n)].1
    }

    pub fn pair(&self, n: isize) -> (&BigInt, &BigInt) {
        let (p, q) = &self.pairs[Self::slot(n)];
        (p, q)
    }

    /// The reduced value `c_n = p_n / q_n`, for `n >= 0`.
    pub fn reduced(&self, n: isize) -> BigRational {
        BigRational::new(self.p(n).clone(), self.q(n).clone())
    }

    /// Pairs from index 1 upwards.
    pub fn iter(&self) -> impl Iterator<Item = (&BigInt, &BigInt)> {
        self.pairs.iter().skip(2).map(|(p, q)| (p, q))
    }
}

/// Incremental convergent recurrence, for callers that generate quotients
/// on the fly.
#[derive(Clone, Debug)]
pub struct ConvergentBuilder(ConvergentSeq);

impl Default for ConvergentBuilder {
    fn default() -> Self {
        ConvergentBuilder(ConvergentSeq::start())
    }
}

impl ConvergentBuilder {
    pub fn push(&mut self, q: &PartialQuotient) -> (&BigInt, &BigInt) {
        self.0.push(q);
        let (p, q) = self.0.pairs.last().expect("nonempty");
        (p, q)
    }

    pub fn current(&self) -> (&BigInt, &BigInt) {
        let (p, q) = self.0.pairs.last().expect("nonempty");
        (p, q)
    }

    pub fn finish(self) -> ConvergentSeq {
        self.0
    }
}

/// One step: `b = floor(a/x)` and `x' = a/x - b`.
pub fn pcf_step(x: &ExactReal, a: &BigInt) -> Result<(BigInt, ExactReal)> {
    if *a < BigInt::one() {
        return Err(Error::domain("numerator must be positive"));
    }
    if x.signum()? != std::cmp::Ordering::Greater {
        return Err(Error::domain("remainder must be positive"));
    }
    let ratio = ExactReal::from(a.clone()).div(x)?;
    let (b, rest) = ratio.floor_frac()?;
    if b < *a {
        return Err(Error::domain(format!("remainder is not below 1 (floor({a}/x) = {b})")));
    }
    Ok((b, rest))
}

/// Expands `x` with numerators drawn from `source`, stopping at a zero
/// remainder, when the source runs dry, or after `max_len` steps.
pub fn expand(
    x: &ExactReal,
    source: &mut dyn NumeratorSource,
    max_len: usize,
) -> Result<PcfExpansion> {
    if !x.in_open_unit()? {
        return Err(Error::domain("x must lie in (0, 1)"));
    }
    let mut quotients: Vec<PartialQuotient> = Vec::new();
    let mut rem = x.clone();
    while quotients.len() < max_len && !rem.is_zero() {
        let Some(a) = source.next_numerator(&rem, quotients.last())? else {
            break;
        };
        let (b, next) = pcf_step(&rem, &a)?;
        quotients.push(PartialQuotient { a, b });
        rem = next;
    }
    Ok(PcfExpansion { quotients, tail: Some(rem) })
}

/// Expands with an explicit numerator list.
pub fn expand_with(x: &ExactReal, numerators: &[BigInt]) -> Result<PcfExpansion> {
    expand(x, &mut ListSource::new(numerators.to_vec()), numerators.len())
}

/// The remainders `x_0 = x, x_1, ..., x_n` of an expansion of `x`, checking
/// each digit along the way.
pub fn remainders(x: &ExactReal, e: &PcfExpansion) -> Result<Vec<ExactReal>> {
    let mut out = vec![x.clone()];
    for (i, q) in e.quotients.iter().enumerate() {
        let (b, next) = pcf_step(out.last().expect("nonempty"), &q.a)?;
        if b != q.b {
            return Err(Error::domain(format!(
                "quotient {} is {}/{} but floor(a/x) = {b}",
                i + 1,
                q.a,
                q.b
            )));
        }
        out.push(next);
    }
    Ok(out)
}

pub fn convergents(e: &PcfExpansion) -> ConvergentSeq {
    let mut seq = ConvergentSeq::start();
    for q in &e.quotients {
        seq.push(q);
    }
    seq
}

pub type Matrix2 = [[BigInt; 2]; 2];

pub fn mat_mul(x: &Matrix2, y: &Matrix2) -> Matrix2 {
    [
        [&x[0][0] * &y[0][0] + &x[0][1] * &y[1][0], &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1]],
        [&x[1][0] * &y[0][0] + &x[1][1] * &y[1][0], &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1]],
    ]
}

pub fn mat_det(m: &Matrix2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// `B_{a,b} = [[0, a], [1, b]]`.
pub fn digit_matrix(q: &PartialQuotient) -> Matrix2 {
    [[BigInt::zero(), q.a.clone()], [BigInt::one(), q.b.clone()]]
}

/// `M_n = B_{a_1,b_1} ... B_{a_n,b_n}`.
pub fn moebius_product(e: &PcfExpansion, n: usize) -> Result<Matrix2> {
    if n > e.len() {
        return Err(Error::domain(format!("index {n} exceeds expansion length {}", e.len())));
    }
    let mut m = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    for q in &e.quotients[..n] {
        m = mat_mul(&m, &digit_matrix(q));
    }
    Ok(m)
}

/// `x = (p_{n-1} x_n + p_n) / (q_{n-1} x_n + q_n)`.
pub fn reconstruct(e: &PcfExpansion) -> Result<ExactReal> {
    let tail = e.tail.as_ref().ok_or_else(|| Error::domain("expansion has no tail"))?;
    let c = convergents(e);
    let n = e.len() as isize;
    let num = tail.mul_int(c.p(n - 1))?.add(&ExactReal::from(c.p(n).clone()))?;
    let den = tail.mul_int(c.q(n - 1))?.add(&ExactReal::from(c.q(n).clone()))?;
    num.div(&den)
}

/// Value of the finite continued fraction with a zero tail.
pub fn value_of(quotients: &[PartialQuotient]) -> BigRational {
    let mut v = BigRational::zero();
    for q in quotients.iter().rev() {
        v = BigRational::from_integer(q.a.clone()) / (BigRational::from_integer(q.b.clone()) + v);
    }
    v
}

/// The image set `{T_N(t0/s0)} = {k/t0 : 0 <= k < t0}`, each value paired
/// with the least `N` reaching it, sorted by value.
pub fn rational_images(t0: &BigInt, s0: &BigInt) -> Result<Vec<(BigRational, BigInt)>> {
    if !t0.is_positive() || t0 >= s0 {
        return Err(Error::domain("need 0 < t0 < s0"));
    }
    if !t0.gcd(s0).is_one() {
        return Err(Error::NotCoprime { t0: t0.clone(), s0: s0.clone() });
    }
    let t = t0.to_u64().ok_or_else(|| Error::domain("t0 too large to enumerate"))?;
    let mut first: BTreeMap<BigInt, BigInt> = BTreeMap::new();
    for n in 1..=t {
        let n = BigInt::from(n);
        let k = (&n * s0).mod_floor(t0);
        first.entry(k).or_insert(n);
    }
    Ok(first.into_iter().map(|(k, n)| (BigRational::new(k, t0.clone()), n)).collect())
}

/// Every PCF expansion of `x = t0/s0`, with numerators `1..=t` at a
/// remainder `t/s`. Optionally keeps only expansions of one length.
pub fn enumerate_rational_expansions(
    x: &BigRational,
    length_filter: Option<usize>,
) -> Result<Vec<PcfExpansion>> {
    if !x.is_positive() || *x >= BigRational::one() {
        return Err(Error::domain("x must lie in (0, 1)"));
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    enumerate_from(x, &mut path, length_filter, &mut out);
    Ok(out)
}

fn enumerate_from(
    x: &BigRational,
    path: &mut Vec<PartialQuotient>,
    filter: Option<usize>,
    out: &mut Vec<PcfExpansion>,
) {
    if filter.is_some_and(|l| path.len() >= l) {
        return;
    }
    let (t, s) = (x.numer(), x.denom());
    let mut n = BigInt::one();
    while &n <= t {
        let ns = &n * s;
        let (b, r) = ns.div_mod_floor(t);
        path.push(PartialQuotient { a: n.clone(), b });
        if r.is_zero() {
            if filter.is_none_or(|l| path.len() == l) {
                let tail = Some(ExactReal::zero());
                out.push(PcfExpansion { quotients: path.clone(), tail });
            }
        } else {
            enumerate_from(&BigRational::new(r, t.clone()), path, filter, out);
        }
        path.pop();
        n += 1;
    }
}

/// The length `n - 1` expansion of `(n-1)/n`:
/// `[(n-2)/(n-2), ..., 1/1, 1/2]`.
pub fn longest_chain(n: &BigInt) -> Result<PcfExpansion> {
    if *n < BigInt::from(2) {
        return Err(Error::domain("need n >= 2"));
    }
    let x = ExactReal::ratio(n - 1, n.clone())?;
    let mut numerators: Vec<BigInt> = Vec::new();
    let mut k: BigInt = n - 2;
    while k.is_positive() {
        numerators.push(k.clone());
        k -= 1;
    }
    numerators.push(BigInt::one());
    let e = expand_with(&x, &numerators)?;
    debug_assert_eq!(e.len() as u64 + 1, n.to_u64().unwrap_or(u64::MAX));
    Ok(e)
}

/// The expansion of `1 - x` read off from one of `x`.
///
/// With `b_1 >= 2 a_1` the result is `[1/1, a_1/(b_1-a_1), a_2/b_2, ...]`;
/// with `b_1 = a_1` it is `[a_2/(b_1 b_2 + a_2), b_1 a_3/b_3, a_4/b_4, ...]`,
/// which is only proper when `b_1 a_3 <= b_3`. Inputs too short for the
/// second form are extended from the tail using numerator 1.
pub fn one_minus_transform(e: &PcfExpansion) -> Result<PcfExpansion> {
    let first = e.quotients.first().ok_or_else(|| Error::domain("empty expansion"))?;
    let (a1, b1) = (&first.a, &first.b);
    let two_a1 = a1 * 2;
    if *b1 >= two_a1 {
        let mut quotients = vec![
            PartialQuotient { a: BigInt::one(), b: BigInt::one() },
            PartialQuotient { a: a1.clone(), b: b1 - a1 },
        ];
        quotients.extend(e.quotients[1..].iter().cloned());
        return Ok(PcfExpansion { quotients, tail: e.tail.clone() });
    }
    if b1 != a1 {
        return Err(Error::MiddleCase { a1: a1.clone(), b1: b1.clone() });
    }

    let mut e = e.clone();
    while e.len() < 2 {
        let tail = e.tail.clone().ok_or_else(|| Error::domain("expansion too short and has no tail"))?;
        if tail.is_zero() {
            return Err(Error::domain("x = 1 has no expansion of 1 - x"));
        }
        let (b, next) = pcf_step(&tail, &BigInt::one())?;
        e.quotients.push(PartialQuotient { a: BigInt::one(), b });
        e.tail = Some(next);
    }
    let q2 = &e.quotients[1];
    let head = PartialQuotient { a: q2.a.clone(), b: b1 * &q2.b + &q2.a };
    if e.len() == 2 {
        let tail = match &e.tail {
            Some(t) => {
                let t = t.mul_int(b1)?;
                if !t.lt(&ExactReal::one())? {
                    return Err(Error::ImproperResult);
                }
                Some(t)
            }
            None => None,
        };
        return Ok(PcfExpansion { quotients: vec![head], tail });
    }
    let q3 = &e.quotients[2];
    let second = PartialQuotient { a: b1 * &q3.a, b: q3.b.clone() };
    if second.b < second.a {
        return Err(Error::ImproperResult);
    }
    let mut quotients = vec![head, second];
    quotients.extend(e.quotients[3..].iter().cloned());
    Ok(PcfExpansion { quotients, tail: e.tail.clone() })
}
