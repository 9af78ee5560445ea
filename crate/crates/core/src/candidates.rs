//! Which integer pairs `(p, q)` can be convergents of some proper expansion
//! of `x`.
//!
//! Every convergent satisfies `|q x - p| < x`. Pairs meeting that bound are
//! *candidates*: odd when `p/q > x`, even when `p/q < x`. Odd candidates are
//! exactly the possible `(p_1, q_1)`; even ones need the divisor test of
//! [`realizable_as_q2`].

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactreal::ExactReal;
use crate::expansion::{convergents, pcf_step, remainders, PartialQuotient, PcfExpansion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePair {
    pub p: BigInt,
    pub q: BigInt,
    pub parity: Parity,
}

impl CandidatePair {
    /// Returns the pair with its parity if `|q x - p| < x`, `p, q >= 1`.
    pub fn classify(x: &ExactReal, p: &BigInt, q: &BigInt) -> Result<Option<CandidatePair>> {
        if !p.is_positive() || !q.is_positive() {
            return Ok(None);
        }
        let diff = x.mul_int(q)?.sub(&ExactReal::from(p.clone()))?;
        if !diff.abs()?.lt(x)? {
            return Ok(None);
        }
        let parity = match diff.signum()? {
            Ordering::Less => Parity::Odd,
            Ordering::Greater => Parity::Even,
            Ordering::Equal => return Ok(None),
        };
        Ok(Some(CandidatePair { p: p.clone(), q: q.clone(), parity }))
    }
}

/// `T_N(x) = {N / x}`.
pub fn t_n(x: &ExactReal, n: &BigInt) -> Result<ExactReal> {
    if x.signum()? != Ordering::Greater || ExactReal::one().lt(x)? {
        return Err(Error::domain("T_N needs 0 < x <= 1"));
    }
    ExactReal::from(n.clone()).div(x)?.frac()
}

/// The Gauss map `T(x) = T_1(x)`.
pub fn gauss(x: &ExactReal) -> Result<ExactReal> {
    t_n(x, &BigInt::one())
}

fn check_unit(x: &ExactReal) -> Result<()> {
    if !x.in_open_unit()? {
        return Err(Error::domain("x must lie in (0, 1)"));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    /// `x - |q_n x - p_n|` for `n = 1..len`.
    pub margins: Vec<ExactReal>,
    pub holds: bool,
}

/// Checks `|q_n x - p_n| < x` along an expansion.
pub fn approximation_bound_check(x: &ExactReal, e: &PcfExpansion) -> Result<BoundReport> {
    let c = convergents(e);
    let mut margins = Vec::with_capacity(e.len());
    let mut holds = true;
    for n in 1..=e.len() as isize {
        let (p, q) = c.pair(n);
        let err = x.mul_int(q)?.sub(&ExactReal::from(p.clone()))?.abs()?;
        let margin = x.sub(&err)?;
        holds &= margin.signum()? == Ordering::Greater;
        margins.push(margin);
    }
    Ok(BoundReport { margins, holds })
}

/// `(floor(p/x), floor(p/x) + 1)`: the odd and even partners of `p`.
pub fn candidate_q_for_p(x: &ExactReal, p: &BigInt) -> Result<(BigInt, BigInt)> {
    check_unit(x)?;
    let q = ExactReal::from(p.clone()).div(x)?.floor()?;
    let q_even = &q + 1;
    Ok((q, q_even))
}

/// The candidates with denominator `q`: odd `p = floor(qx) + 1` when
/// `{qx} > 1 - x`, even `p = floor(qx)` when `{qx} < x` and `p >= 1`.
pub fn candidate_p_for_q(x: &ExactReal, q: &BigInt) -> Result<(Option<BigInt>, Option<BigInt>)> {
    check_unit(x)?;
    let (f, frac) = x.mul_int(q)?.floor_frac()?;
    let one_minus = ExactReal::one().sub(x)?;
    let odd = if one_minus.lt(&frac)? { Some(&f + 1) } else { None };
    let even = if frac.lt(x)? && f.is_positive() { Some(f) } else { None };
    Ok((odd, even))
}

/// `floor(k r)` for `k = 1..=count`.
pub fn beatty(r: &ExactReal, count: u64) -> Result<Vec<BigInt>> {
    (1..=count).map(|k| r.mul_int(&BigInt::from(k))?.floor()).collect()
}

/// Beatty terms not exceeding `n_max`.
fn beatty_upto(r: &ExactReal, n_max: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut k = 1u64;
    loop {
        let v = r.mul_int(&BigInt::from(k))?.floor()?;
        let v = v.to_u64().ok_or_else(|| Error::domain("Beatty term overflow"))?;
        if v > n_max {
            return Ok(out);
        }
        out.push(v);
        k += 1;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RayleighReport {
    pub n_max: u64,
    pub from_x: usize,
    pub from_complement: usize,
    pub overlaps: Vec<u64>,
    pub missing: Vec<u64>,
    pub holds: bool,
}

/// Checks that the Beatty sequences of `1/x` and `1/(1-x)` partition
/// `[1, n_max]`.
pub fn rayleigh_partition_check(x: &ExactReal, n_max: u64) -> Result<RayleighReport> {
    check_unit(x)?;
    let r = x.recip()?;
    let s = ExactReal::one().sub(x)?.recip()?;
    let a = beatty_upto(&r, n_max)?;
    let b = beatty_upto(&s, n_max)?;
    let mut hits = vec![0u8; n_max as usize + 1];
    for &v in a.iter().chain(&b) {
        hits[v as usize] += 1;
    }
    let overlaps: Vec<u64> = (1..=n_max).filter(|&k| hits[k as usize] > 1).collect();
    let missing: Vec<u64> = (1..=n_max).filter(|&k| hits[k as usize] == 0).collect();
    let holds = overlaps.is_empty() && missing.is_empty();
    Ok(RayleighReport { n_max, from_x: a.len(), from_complement: b.len(), overlaps, missing, holds })
}

#[derive(Clone, Debug)]
pub struct ReturnTimeReport {
    /// Number of `k <= q` whose `{kx}` lands in the return interval.
    pub returns: u64,
    /// Whether `k = q` is itself a return (the `p`-th one).
    pub q_is_return: bool,
    /// Length of the induced rotation, `|p + x - qx|` (even) or `p - qx` (odd).
    pub rotation_length: ExactReal,
    /// `x * T_p(x)`.
    pub expected_length: ExactReal,
    pub holds: bool,
}

/// Checks that `qx` is the `p`-th return of `0` to `[0, x)` (even) or
/// `[1-x, 1)` (odd) under rotation by `x`, and that the induced rotation
/// has length `x T_p(x)`.
pub fn return_time_check(x: &ExactReal, pair: &CandidatePair) -> Result<ReturnTimeReport> {
    check_unit(x)?;
    if !pair.p.is_positive() {
        return Err(Error::domain("candidate pairs have p >= 1"));
    }
    let q = pair.q.to_u64().ok_or_else(|| Error::domain("q too large to enumerate"))?;
    let one_minus = ExactReal::one().sub(x)?;
    let mut returns = 0u64;
    let mut last = false;
    let mut frac = ExactReal::zero();
    for _ in 1..=q {
        frac = frac.add(x)?;
        if !frac.lt(&ExactReal::one())? {
            frac = frac.sub(&ExactReal::one())?;
        }
        last = match pair.parity {
            Parity::Even => frac.lt(x)?,
            Parity::Odd => !frac.lt(&one_minus)?,
        };
        returns += u64::from(last);
    }
    let p = ExactReal::from(pair.p.clone());
    let qx = x.mul_int(&pair.q)?;
    let rotation_length = match pair.parity {
        Parity::Even => p.add(x)?.sub(&qx)?,
        Parity::Odd => p.sub(&qx)?,
    };
    let expected_length = x.mul(&t_n(x, &pair.p)?)?;
    let holds = BigInt::from(returns) == pair.p
        && last
        && rotation_length.cmp_exact(&expected_length)? == Ordering::Equal;
    Ok(ReturnTimeReport { returns, q_is_return: last, rotation_length, expected_length, holds })
}

/// A prefix `[a_1/b_1, ..., a_k/b_k]` of an expansion of `x` whose `k`-th
/// convergent is `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationWitness {
    pub quotients: Vec<PartialQuotient>,
    pub index: usize,
}

impl RealizationWitness {
    /// Re-runs the expansion of `x` with the witness numerators and checks
    /// that the digits and the final convergent match.
    pub fn verify(&self, x: &ExactReal, p: &BigInt, q: &BigInt) -> Result<bool> {
        let e = PcfExpansion::new(self.quotients.clone(), None);
        if remainders(x, &e).is_err() {
            return Ok(false);
        }
        let c = convergents(&e);
        Ok(c.pair(self.index as isize) == (p, q))
    }

    pub fn flat(&self) -> Vec<BigInt> {
        self.quotients.iter().flat_map(|q| [q.a.clone(), q.b.clone()]).collect()
    }
}

/// The odd candidate `(p, floor(p/x))` realized as `(p_1, q_1)` with `a_1 = p`.
pub fn realize_odd(x: &ExactReal, p: &BigInt) -> Result<RealizationWitness> {
    let (b, _) = pcf_step(x, p)?;
    Ok(RealizationWitness { quotients: vec![PartialQuotient { a: p.clone(), b }], index: 1 })
}

/// Ascending divisors of a positive integer.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let other = n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Decides whether the even candidate `(p, floor(p/x) + 1)` occurs as
/// `(p_2, q_2)`: it does iff some divisor `a | p` has `T_p(x) + T_a(x) > 1`.
/// The first such divisor yields the witness
/// `a_1 = a, b_1 = floor(a/x), a_2 = q - b_1 p/a, b_2 = p/a`.
pub fn realizable_as_q2(x: &ExactReal, p: &BigInt) -> Result<Option<RealizationWitness>> {
    check_unit(x)?;
    if !p.is_positive() {
        return Err(Error::domain("p must be positive"));
    }
    let tp = t_n(x, p)?;
    let q = candidate_q_for_p(x, p)?.1;
    for a in divisors(p) {
        let ta = t_n(x, &a)?;
        if ExactReal::one().lt(&tp.add(&ta)?)? {
            let b1 = ExactReal::from(a.clone()).div(x)?.floor()?;
            let b2 = p / &a;
            let a2 = &q - &b1 * &b2;
            let quotients = vec![PartialQuotient { a, b: b1 }, PartialQuotient { a: a2, b: b2 }];
            return Ok(Some(RealizationWitness { quotients, index: 2 }));
        }
    }
    Ok(None)
}

/// Brute force for the same question: for each divisor `a_1 | p` (in
/// increasing order) search `a_2` in `[1, min(p/a_1, bound)]` with
/// `floor(a_2 / T_{a_1}(x)) = p/a_1`.
///
/// Fails with `BoundTooSmall` when nothing was found but some search range
/// was cut short by `bound`.
pub fn realizable_as_q2_oracle(
    x: &ExactReal,
    p: &BigInt,
    bound: &BigInt,
) -> Result<Option<RealizationWitness>> {
    check_unit(x)?;
    let mut capped = false;
    for a1 in divisors(p) {
        let (b1, x1) = pcf_step(x, &a1)?;
        if x1.is_zero() {
            continue;
        }
        let b2 = p / &a1;
        let limit = if b2 > *bound {
            capped = true;
            bound.clone()
        } else {
            b2.clone()
        };
        let mut a2 = BigInt::one();
        while a2 <= limit {
            if ExactReal::from(a2.clone()).div(&x1)?.floor()? == b2 {
                let quotients = vec![
                    PartialQuotient { a: a1, b: b1 },
                    PartialQuotient { a: a2, b: b2 },
                ];
                return Ok(Some(RealizationWitness { quotients, index: 2 }));
            }
            a2 += 1;
        }
    }
    if capped {
        return Err(Error::BoundTooSmall { bound: bound.clone() });
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CutoffVerdict {
    GuaranteedRealizable,
    Undetermined,
}

/// `{qx} < max(x/2, x T(x))` guarantees that the even candidate
/// `(floor(qx), q)` is some `(p_2, q_2)`. Says nothing otherwise.
pub fn q2_cutoff_check(x: &ExactReal, q: &BigInt) -> Result<CutoffVerdict> {
    check_unit(x)?;
    let frac = x.mul_int(q)?.frac()?;
    if !frac.lt(x)? {
        return Err(Error::domain("(floor(qx), q) is not an even candidate"));
    }
    let half = x.div(&ExactReal::from_int(2))?;
    let xt = x.mul(&gauss(x)?)?;
    let threshold = if half.lt(&xt)? { xt } else { half };
    Ok(if frac.lt(&threshold)? {
        CutoffVerdict::GuaranteedRealizable
    } else {
        CutoffVerdict::Undetermined
    })
}

/// Replaces quotients `k, k+1, k+2` by the single quotient
/// `a_k (b_{k+1} b_{k+2} + a_{k+2}) / (b_k (b_{k+1} b_{k+2} + a_{k+2}) + a_{k+1} b_{k+2})`,
/// giving an expansion of `x` whose `q_k` is the old `q_{k+2}`.
pub fn push_down_index(x: &ExactReal, e: &PcfExpansion, k: usize) -> Result<PcfExpansion> {
    if k == 0 || e.len() < k + 2 {
        return Err(Error::domain(format!("need 1 <= k and length >= k + 2 (k = {k}, length {})", e.len())));
    }
    let prefix = PcfExpansion::new(e.quotients[..k - 1].to_vec(), None);
    let rems = remainders(x, &prefix)?;
    let x_prev = rems.last().expect("x_0 is always present");
    let (qk, qk1, qk2) = (&e.quotients[k - 1], &e.quotients[k], &e.quotients[k + 1]);
    let m = &qk1.b * &qk2.b + &qk2.a;
    let a = &qk.a * &m;
    let b = &qk.b * &m + &qk1.a * &qk2.b;
    let (b_check, tail) = pcf_step(x_prev, &a)?;
    if b_check != b {
        return Err(Error::domain(format!("pushed-down digit {b} disagrees with floor {b_check}")));
    }
    let mut quotients = prefix.quotients;
    quotients.push(PartialQuotient { a, b });
    Ok(PcfExpansion::new(quotients, Some(tail)))
}

/// `(a_k, a_{k+1}, a_{k+2}, b_k, b_{k+1}, b_{k+2})`.
pub type LiftTuple = [BigInt; 6];

#[derive(Clone, Debug, Default)]
pub struct LiftSearch {
    pub solutions: Vec<LiftTuple>,
    /// Some enumeration range was cut short by the bound.
    pub truncated: bool,
}

/// All ways to split step data `(a', b', x')` at index `k` into three steps
/// `k, k+1, k+2` (the inverse of [`push_down_index`]), with every entry at
/// most `bound`. Results are in lexicographic order.
pub fn lift_index_search(
    a_prime: &BigInt,
    b_prime: &BigInt,
    x_prime: &ExactReal,
    bound: u64,
) -> Result<LiftSearch> {
    let ap = a_prime.to_u64().ok_or_else(|| Error::domain("a' too large"))?;
    let bp = b_prime.to_u64().ok_or_else(|| Error::domain("b' too large"))?;
    if ap == 0 || bp < ap {
        return Err(Error::domain("need b' >= a' >= 1"));
    }
    let mut out = LiftSearch::default();
    for ak in divisors(a_prime).iter().map(|d| d.to_u64().expect("divides a u64")) {
        if ak > bound {
            out.truncated = true;
            break;
        }
        let m = ap / ak;
        for bk2 in 1..m {
            if bk2 > bound {
                out.truncated = true;
                break;
            }
            for bk1 in 1..=(m - 1) / bk2 {
                if bk1 > bound {
                    out.truncated = true;
                    break;
                }
                let ak2 = m - bk1 * bk2;
                if ak2 == 0 || ak2 > bk2 {
                    continue;
                }
                for ak1 in 1..=bk1 {
                    let Some(rest) = bp.checked_sub(ak1 * bk2) else { break };
                    if rest % m != 0 {
                        continue;
                    }
                    let bk = rest / m;
                    if bk < ak {
                        continue;
                    }
                    if bk > bound {
                        out.truncated = true;
                        continue;
                    }
                    // x' < a_{k+1} a_{k+2} / (b_{k+1} (b_{k+2} + 1) + a_{k+2})
                    let limit = ExactReal::ratio(ak1 * ak2, bk1 * (bk2 + 1) + ak2)?;
                    if x_prime.lt(&limit)? {
                        out.solutions.push([ak, ak1, ak2, bk, bk1, bk2].map(BigInt::from));
                    }
                }
            }
        }
    }
    out.solutions.sort();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SharpnessReport {
    pub prefix: PcfExpansion,
    /// `(1 + eps) a_1 ... a_{n+1} > p_{n+1}`.
    pub product_claim: bool,
    /// `a_{n+1} / q_{n+1} > (1 - eps) / q_n`.
    pub ratio_claim: bool,
    /// `(1 + eps) a_1 ... a_{n+1} / p_{n+1}`.
    pub product_margin: BigRational,
    /// `a_{n+1} q_n / ((1 - eps) q_{n+1})`.
    pub ratio_margin: BigRational,
}

/// Builds numerators with every `b_i = a_i` that bring both inequalities
/// behind `|q_n x - p_n| < x` within a factor `1 + eps` of equality.
pub fn sharpness_witness(n: usize, eps: &BigRational) -> Result<SharpnessReport> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if !eps.is_positive() || *eps >= BigRational::one() {
        return Err(Error::domain("eps must lie in (0, 1)"));
    }
    let one = BigRational::one();
    let target = &one + eps;
    // a_n > 1/eps - 1
    let a_n_min: BigInt = (eps.recip() - &one).floor().to_integer() + 1;
    let ratio_ok = |ratio: &BigRational| Pow::pow(&one + ratio, n) < target;

    let mut a: Vec<BigInt> = Vec::with_capacity(n + 1);
    let (mut p_prev, mut p_cur) = (BigInt::one(), BigInt::zero());
    for i in 1..=n + 1 {
        let mut lo = if i == n { a_n_min.clone() } else { BigInt::one() };
        if i >= 2 {
            // p_i = a_i (p_{i-1} + p_{i-2}); need (1 + p_{i-1}/p_i)^n < 1 + eps
            let ok = |ai: &BigInt| {
                let pi = ai * (&p_cur + &p_prev);
                ratio_ok(&BigRational::new(p_cur.clone(), pi))
            };
            let mut hi = lo.clone();
            while !ok(&hi) {
                hi *= 2;
            }
            while lo < hi {
                let mid: BigInt = (&lo + &hi) >> 1;
                if ok(&mid) {
                    hi = mid;
                } else {
                    lo = &mid + 1;
                }
            }
            if i == n {
                lo = lo.max(a_n_min.clone());
            }
        }
        let p_next = &lo * (&p_cur + &p_prev);
        p_prev = std::mem::replace(&mut p_cur, p_next);
        a.push(lo);
    }
    let quotients: Vec<PartialQuotient> =
        a.iter().map(|v| PartialQuotient { a: v.clone(), b: v.clone() }).collect();
    let tail = ExactReal::ratio(1, 2)?;
    let prefix = PcfExpansion::new(quotients, Some(tail));
    let c = convergents(&prefix);
    let n1 = (n + 1) as isize;
    let prod: BigInt = a.iter().product();
    let product_margin = BigRational::new(prod, c.p(n1).clone()) * &target;
    let ratio_margin = BigRational::new(&a[n] * c.q(n1 - 1), c.q(n1).clone()) / (&one - eps);
    Ok(SharpnessReport {
        product_claim: product_margin > one,
        ratio_claim: ratio_margin > one,
        prefix,
        product_margin,
        ratio_margin,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FractionalPartReport {
    pub below_x: bool,
    pub even_formula: bool,
    pub above_one_minus_x: bool,
    pub odd_formula: bool,
    /// `floor(qx) = 0`: only possible at `q = 1`, where the even formula
    /// holds vacuously.
    pub p_zero: bool,
    pub holds: bool,
}

/// Checks `{qx} < x <=> floor(floor(qx)/x) + 1 = q` (for `floor(qx) >= 1`)
/// and `{qx} > 1 - x <=> floor((floor(qx) + 1)/x) = q`.
pub fn fractional_part_characterization(x: &ExactReal, q: &BigInt) -> Result<FractionalPartReport> {
    check_unit(x)?;
    let (f, frac) = x.mul_int(q)?.floor_frac()?;
    let below_x = frac.lt(x)?;
    let above_one_minus_x = ExactReal::one().sub(x)?.lt(&frac)?;
    let even_formula = ExactReal::from(f.clone()).div(x)?.floor()? + 1 == *q;
    let odd_formula = ExactReal::from(&f + 1).div(x)?.floor()? == *q;
    let p_zero = f.is_zero();
    let holds = (p_zero || below_x == even_formula) && above_one_minus_x == odd_formula;
    Ok(FractionalPartReport { below_x, even_formula, above_one_minus_x, odd_formula, p_zero, holds })
}

/// One row of a sweep over numerators `p`.
#[derive(Clone, Debug)]
pub struct NumeratorRow {
    pub p: BigInt,
    pub q_odd: BigInt,
    pub q_even: BigInt,
    /// Witness for `(p, q_even)` as `(p_2, q_2)`, if realizable.
    pub witness: Option<RealizationWitness>,
    pub cutoff: CutoffVerdict,
    /// Brute-force answer, when requested: `Ok(realizable)` or the oracle's
    /// own failure (`BoundTooSmall`).
    pub oracle: Option<std::result::Result<bool, Error>>,
}

pub fn classify_numerator(x: &ExactReal, p: &BigInt, oracle_bound: Option<&BigInt>) -> Result<NumeratorRow> {
    let (q_odd, q_even) = candidate_q_for_p(x, p)?;
    let witness = realizable_as_q2(x, p)?;
    let cutoff = q2_cutoff_check(x, &q_even)?;
    let oracle = oracle_bound.map(|bound| realizable_as_q2_oracle(x, p, bound).map(|w| w.is_some()));
    Ok(NumeratorRow { p: p.clone(), q_odd, q_even, witness, cutoff, oracle })
}

/// One row of a sweep over denominators `q`. The `frac` column against the
/// cutoff verdict and realizability is the raw data for probing how sharp
/// the cutoff is.
#[derive(Clone, Debug)]
pub struct DenominatorRow {
    pub q: BigInt,
    pub frac: ExactReal,
    pub p_odd: Option<BigInt>,
    pub p_even: Option<BigInt>,
    pub even_witness: Option<RealizationWitness>,
    pub cutoff: Option<CutoffVerdict>,
}

pub fn classify_denominator(x: &ExactReal, q: &BigInt) -> Result<DenominatorRow> {
    let (p_odd, p_even) = candidate_p_for_q(x, q)?;
    let frac = x.mul_int(q)?.frac()?;
    let (even_witness, cutoff) = match &p_even {
        Some(p) => (realizable_as_q2(x, p)?, Some(q2_cutoff_check(x, q)?)),
        None => (None, None),
    };
    Ok(DenominatorRow { q: q.clone(), frac, p_odd, p_even, even_witness, cutoff })
}

/// Reduces `p/q` by the gcd; used for display of convergents.
pub fn reduce_pair(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let g = p.gcd(q);
    if g.is_zero() {
        return (p.clone(), q.clone());
    }
    (p / &g, q / &g)
}
