//! The joint map on the unit square
//!
//! ```text
//! T(x, y) = (a/x - b, 1/y - a),    a = floor(1/y),  b = floor(a/x)
//! ```
//!
//! The `y` coordinate runs the Gauss map and feeds its digits to `x` as
//! numerators, so each `y` picks out one proper expansion of `x`. Also here:
//! orbit statistics, denominator growth, and the special families
//! (variable numerators, Engel, greedy `N`) with their `y(x)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactreal::{ExactReal, DEFAULT_BUDGET};
use crate::expansion::{pcf_step, ConvergentBuilder, ConvergentSeq, PartialQuotient, PcfExpansion};
use crate::numerators::rcf_value;

#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    pub x: ExactReal,
    pub y: ExactReal,
    pub step: u64,
}

impl JointState {
    pub fn new(x: ExactReal, y: ExactReal) -> Self {
        JointState { x, y, step: 0 }
    }
}

/// The cylinder `Δ(a over b)`: `x in (a/(b+1), a/b)`, `y in (1/(a+1), 1/a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderAddress {
    pub a: BigInt,
    pub b: BigInt,
}

impl CylinderAddress {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        CylinderAddress { a: a.into(), b: b.into() }
    }

    /// `1 / ((a+1) b (b+1))`.
    pub fn area(&self) -> BigRational {
        let b = &self.b;
        BigRational::new(BigInt::one(), (&self.a + 1) * b * (b + 1))
    }

    pub fn contains_f64(&self, x: f64, y: f64) -> bool {
        let (a, b) = (self.a.to_f64().unwrap_or(f64::MAX), self.b.to_f64().unwrap_or(f64::MAX));
        a / (b + 1.0) < x && x < a / b && 1.0 / (a + 1.0) < y && y < 1.0 / a
    }
}

/// One application of the joint map.
pub fn joint_step(s: &JointState) -> Result<(JointState, CylinderAddress)> {
    let (x_zero, y_zero) = (s.x.is_zero(), s.y.is_zero());
    if x_zero || y_zero {
        return Err(Error::ZeroCoordinate { x_zero, y_zero });
    }
    let (a, y_next) = s.y.recip()?.floor_frac()?;
    let (b, x_next) = pcf_step(&s.x, &a)?;
    let next = JointState { x: x_next, y: y_next, step: s.step + 1 };
    Ok((next, CylinderAddress { a, b }))
}

/// Inverse branch on `Δ(a over b)`: `x = a/(b + x')`, `y = 1/(a + y')`.
pub fn joint_inverse(s: &JointState, addr: &CylinderAddress) -> Result<JointState> {
    let a = ExactReal::from(addr.a.clone());
    let b = ExactReal::from(addr.b.clone());
    let x = a.div(&b.add(&s.x)?)?;
    let y = ExactReal::one().div(&a.add(&s.y)?)?;
    Ok(JointState { x, y, step: s.step.saturating_sub(1) })
}

/// The cylinder containing an interior point; points on a grid line (only
/// possible for rational coordinates) are rejected.
pub fn cylinder_of(s: &JointState) -> Result<CylinderAddress> {
    if s.x.is_zero() || s.y.is_zero() {
        return Err(Error::ZeroCoordinate { x_zero: s.x.is_zero(), y_zero: s.y.is_zero() });
    }
    let (a, y_rest) = s.y.recip()?.floor_frac()?;
    let (b, x_rest) = ExactReal::from(a.clone()).div(&s.x)?.floor_frac()?;
    if y_rest.is_zero() || x_rest.is_zero() {
        return Err(Error::OnBoundary);
    }
    Ok(CylinderAddress { a, b })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Truncation {
    ZeroCoordinate { step: u64, x_zero: bool, y_zero: bool },
    PrecisionExhausted { step: u64, budget: u32 },
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitOptions {
    /// Interval budgets are doubled on exhaustion up to this many bits.
    pub max_budget: u32,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { max_budget: 1 << 16 }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub digits: Vec<CylinderAddress>,
    pub convergents: ConvergentSeq,
    /// `(k, ln(q_k) / k)`.
    pub growth_samples: Vec<(u64, f64)>,
    pub truncated: Option<Truncation>,
    pub final_state: JointState,
}

impl OrbitRecord {
    pub fn expansion(&self) -> PcfExpansion {
        let quotients =
            self.digits.iter().map(|d| PartialQuotient { a: d.a.clone(), b: d.b.clone() }).collect();
        PcfExpansion::new(quotients, Some(self.final_state.x.clone()))
    }
}

/// Natural log of a positive big integer.
pub fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift as usize).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn step_escalating(s: &JointState, opts: &OrbitOptions) -> Result<(JointState, CylinderAddress)> {
    let mut cur = s.clone();
    loop {
        match joint_step(&cur) {
            Err(Error::PrecisionExhausted { budget }) if budget < opts.max_budget => {
                let nb = budget.saturating_mul(2).min(opts.max_budget);
                cur.x = cur.x.with_budget(nb);
                cur.y = cur.y.with_budget(nb);
            }
            other => return other,
        }
    }
}

/// Iterates the joint map `n` times, escalating interval budgets as needed.
/// A zero coordinate or an exhausted budget ends the orbit early and is
/// recorded in `truncated`.
pub fn orbit(x0: &ExactReal, y0: &ExactReal, n: u64, opts: &OrbitOptions) -> Result<OrbitRecord> {
    if !x0.in_open_unit()? || !y0.in_open_unit()? {
        return Err(Error::domain("orbit needs 0 < x0, y0 < 1"));
    }
    let mut state = JointState::new(x0.clone(), y0.clone());
    let mut digits = Vec::new();
    let mut conv = ConvergentBuilder::default();
    let mut growth_samples = Vec::new();
    let mut truncated = None;
    for k in 1..=n {
        match step_escalating(&state, opts) {
            Ok((next, addr)) => {
                let (_, q) = conv.push(&PartialQuotient { a: addr.a.clone(), b: addr.b.clone() });
                growth_samples.push((k, ln_big(q) / k as f64));
                digits.push(addr);
                state = next;
            }
            Err(Error::ZeroCoordinate { x_zero, y_zero }) => {
                truncated = Some(Truncation::ZeroCoordinate { step: k - 1, x_zero, y_zero });
                break;
            }
            Err(Error::PrecisionExhausted { budget }) => {
                truncated = Some(Truncation::PrecisionExhausted { step: k - 1, budget });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(OrbitRecord {
        digits,
        convergents: conv.finish(),
        growth_samples,
        truncated,
        final_state: state,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate {
    /// Steps actually taken.
    pub steps: u64,
    /// `q_n^(1/n)`.
    pub estimate: f64,
    /// Least-squares slope of `ln(q_k)/k` against `k` over the last half.
    pub trend_slope: f64,
    /// `(max - min) / estimate` of `q_k^(1/k)` over the last quarter.
    pub final_quarter_oscillation: f64,
    /// Too few steps for the estimate to mean much.
    pub reliable: bool,
    pub truncated: Option<Truncation>,
}

/// Steps below which a growth estimate is flagged unreliable.
pub const RELIABLE_STEPS: u64 = 100;

pub fn growth_from_record(rec: &OrbitRecord) -> GrowthEstimate {
    let samples = &rec.growth_samples;
    let steps = samples.len() as u64;
    let estimate = samples.last().map_or(f64::NAN, |&(_, r)| r.exp());
    let half = &samples[samples.len() / 2..];
    let trend_slope = if half.len() >= 2 {
        let m = half.len() as f64;
        let mean_k = half.iter().map(|&(k, _)| k as f64).sum::<f64>() / m;
        let mean_r = half.iter().map(|&(_, r)| r).sum::<f64>() / m;
        let cov: f64 = half.iter().map(|&(k, r)| (k as f64 - mean_k) * (r - mean_r)).sum();
        let var: f64 = half.iter().map(|&(k, _)| (k as f64 - mean_k).powi(2)).sum();
        cov / var
    } else {
        f64::NAN
    };
    let quarter = &samples[samples.len() * 3 / 4..];
    let (lo, hi) = quarter
        .iter()
        .map(|&(_, r)| r.exp())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let final_quarter_oscillation = if quarter.is_empty() { f64::NAN } else { (hi - lo) / estimate };
    GrowthEstimate {
        steps,
        estimate,
        trend_slope,
        final_quarter_oscillation,
        reliable: steps >= RELIABLE_STEPS,
        truncated: rec.truncated.clone(),
    }
}

/// Estimates `lim q_n^(1/n)` along the orbit of `(x0, y0)`.
pub fn growth_exponent(
    x0: &ExactReal,
    y0: &ExactReal,
    n: u64,
    opts: &OrbitOptions,
) -> Result<GrowthEstimate> {
    Ok(growth_from_record(&orbit(x0, y0, n, opts)?))
}

/// Eigenvalues `(b ± sqrt(b^2 + 4a)) / 2` of `B_{a,b}`.
pub fn eigenvalues_of_digit_matrix(a: &BigInt, b: &BigInt) -> Result<(ExactReal, ExactReal)> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::domain("digits must be positive"));
    }
    let disc: BigInt = b * b + a * 4;
    let plus = ExactReal::surd(b.clone(), 1, disc.clone(), 2)?;
    let minus = ExactReal::surd(b.clone(), -1, disc, 2)?;
    Ok((plus, minus))
}

/// Visit counts per cylinder.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    pub counts: BTreeMap<CylinderAddress, u64>,
    pub total: u64,
    /// Orbits cut short (exact mode) or float restarts (float mode).
    pub interruptions: u64,
}

impl FrequencyTable {
    pub fn record(&mut self, addr: CylinderAddress) {
        *self.counts.entry(addr).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &FrequencyTable) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
        self.total += other.total;
        self.interruptions += other.interruptions;
    }

    pub fn frequency(&self, addr: &CylinderAddress) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        *self.counts.get(addr).unwrap_or(&0) as f64 / self.total as f64
    }

    pub fn rows(&self) -> impl Iterator<Item = (&CylinderAddress, u64, f64)> {
        self.counts.iter().map(move |(k, &v)| (k, v, v as f64 / self.total as f64))
    }
}

/// Cylinder visit frequencies along an exact or interval orbit.
pub fn birkhoff_cylinder_frequencies(
    x0: &ExactReal,
    y0: &ExactReal,
    n: u64,
    opts: &OrbitOptions,
) -> Result<FrequencyTable> {
    let rec = orbit(x0, y0, n, opts)?;
    let mut t = FrequencyTable::default();
    for d in rec.digits {
        t.record(d);
    }
    t.interruptions = u64::from(rec.truncated.is_some());
    Ok(t)
}

/// The same statistic in double precision. Individual float orbits lose
/// track of the true orbit within a few dozen steps but remain typical for
/// the measure; a point that collapses onto a grid line is replaced by a
/// fresh random point.
pub fn birkhoff_frequencies_f64(seed: u64, n: u64) -> FrequencyTable {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let fresh = |rng: &mut ChaCha20Rng| -> f64 {
        loop {
            let v: f64 = rng.gen();
            if v > 0.0 {
                return v;
            }
        }
    };
    let mut t = FrequencyTable::default();
    let (mut x, mut y) = (fresh(&mut rng), fresh(&mut rng));
    for _ in 0..n {
        let a = (1.0 / y).floor();
        let b = (a / x).floor();
        t.record(CylinderAddress {
            a: BigInt::from_f64(a).unwrap_or_default(),
            b: BigInt::from_f64(b).unwrap_or_default(),
        });
        x = a / x - b;
        y = 1.0 / y - a;
        if !(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0) {
            x = fresh(&mut rng);
            y = fresh(&mut rng);
            t.interruptions += 1;
        }
    }
    t
}

/// Jittered stratified estimate of each cylinder's area: one uniform point
/// in each cell of a `side x side` grid.
pub fn cylinder_area_monte_carlo(
    cylinders: &[CylinderAddress],
    side: u64,
    seed: u64,
) -> Vec<(CylinderAddress, f64)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; cylinders.len()];
    let h = 1.0 / side as f64;
    for i in 0..side {
        for j in 0..side {
            let x = (i as f64 + rng.gen::<f64>()) * h;
            let y = (j as f64 + rng.gen::<f64>()) * h;
            if x <= 0.0 || y <= 0.0 {
                continue;
            }
            let a = (1.0 / y).floor();
            let b = (a / x).floor();
            for (c, cyl) in counts.iter_mut().zip(cylinders) {
                if cyl.a.to_f64() == Some(a) && cyl.b.to_f64() == Some(b) {
                    *c += 1;
                }
            }
        }
    }
    let total = (side * side) as f64;
    cylinders.iter().cloned().zip(counts.into_iter().map(|c| c as f64 / total)).collect()
}

/// Which quadrants of the unit square the images of `samples` random
/// points of `Δ(a over b)` reach, in the order
/// `[x<1/2 y<1/2, x>=1/2 y<1/2, x<1/2 y>=1/2, x>=1/2 y>=1/2]`.
pub fn cylinder_image_quadrants(addr: &CylinderAddress, samples: u32, seed: u64) -> Result<[bool; 4]> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (a, b) = (&addr.a, &addr.b);
    let den: u64 = 1 << 40;
    let mut hit = [false; 4];
    for _ in 0..samples {
        // exact rationals strictly inside the rectangle
        let u = BigRational::new(BigInt::from(rng.gen_range(1..den)), BigInt::from(den));
        let v = BigRational::new(BigInt::from(rng.gen_range(1..den)), BigInt::from(den));
        let x_lo = BigRational::new(a.clone(), b + 1);
        let x_hi = BigRational::new(a.clone(), b.clone());
        let y_lo = BigRational::new(BigInt::one(), a + 1);
        let y_hi = BigRational::new(BigInt::one(), a.clone());
        let x = &x_lo + (&x_hi - &x_lo) * u;
        let y = &y_lo + (&y_hi - &y_lo) * v;
        let s = JointState::new(x.into(), y.into());
        let (next, got) = joint_step(&s)?;
        if got != *addr {
            return Err(Error::domain("sample escaped its cylinder"));
        }
        let half = ExactReal::ratio(1, 2)?;
        let right = !next.x.lt(&half)?;
        let top = !next.y.lt(&half)?;
        hit[usize::from(right) + 2 * usize::from(top)] = true;
    }
    Ok(hit)
}

/// Per-orbit seeds drawn from one ChaCha20 stream keyed by `base`:
/// `(x_seed, y_seed)` for orbit `i` are the `2i`-th and `2i+1`-th outputs.
pub fn orbit_seeds(base: u64, orbits: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha20Rng::seed_from_u64(base);
    (0..orbits).map(|_| (rng.gen(), rng.gen())).collect()
}

/// One orbit of a simulation run.
#[derive(Clone, Debug)]
pub struct OrbitDigest {
    pub seed: u64,
    pub orbit: u64,
    pub n: u64,
    pub growth: GrowthEstimate,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub digests: Vec<OrbitDigest>,
    pub frequencies: FrequencyTable,
}

impl Simulation {
    pub fn truncated(&self) -> bool {
        self.digests.iter().any(|d| d.growth.truncated.is_some())
    }
}

/// Runs `orbits` independent orbits of length `n` from random interval
/// seeds, in parallel. `y` fixes the second coordinate for every orbit
/// (e.g. golden for the RCF regime); otherwise it is random too. Results are
/// merged in orbit order, so output does not depend on scheduling.
pub fn simulate(
    base_seed: u64,
    orbits: u64,
    n: u64,
    y: Option<&ExactReal>,
    budget: u32,
    opts: &OrbitOptions,
) -> Result<Simulation> {
    let seeds = orbit_seeds(base_seed, orbits);
    let results: Vec<Result<OrbitRecord>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&(sx, sy)| {
                scope.spawn(move || {
                    let x = ExactReal::random_unit(sx, budget);
                    let y = y.cloned().unwrap_or_else(|| ExactReal::random_unit(sy, budget));
                    orbit(&x, &y, n, opts)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("orbit thread panicked")).collect()
    });
    let mut digests = Vec::new();
    let mut frequencies = FrequencyTable::default();
    for (i, rec) in results.into_iter().enumerate() {
        let rec = rec?;
        let mut t = FrequencyTable::default();
        for d in &rec.digits {
            t.record(d.clone());
        }
        t.interruptions = u64::from(rec.truncated.is_some());
        frequencies.merge(&t);
        digests.push(OrbitDigest {
            seed: seeds[i].0,
            orbit: i as u64,
            n,
            growth: growth_from_record(&rec),
        });
    }
    Ok(Simulation { digests, frequencies })
}

/// Variable-numerator step: `a = floor(1/x)`, `b = floor(a/x)`,
/// `x' = a/x - b`. Always `a <= b <= a^2 + a - 1`.
pub fn varnum_step(x: &ExactReal) -> Result<(BigInt, BigInt, ExactReal)> {
    if !x.in_open_unit()? {
        return Err(Error::domain("x must lie in (0, 1)"));
    }
    let a = x.recip()?.floor()?;
    let (b, next) = pcf_step(x, &a)?;
    Ok((a, b, next))
}

/// Engel step: `b = floor(1/x)`, `x' = 1/(b x) - 1`.
pub fn engel_step(x: &ExactReal) -> Result<(BigInt, ExactReal)> {
    if !x.in_open_unit()? {
        return Err(Error::domain("x must lie in (0, 1)"));
    }
    let b = x.recip()?.floor()?;
    let next = x.mul_int(&b)?.recip()?.sub(&ExactReal::one())?;
    Ok((b, next))
}

/// Greedy `N` step, i.e. `T_N`.
pub fn greedy_step(x: &ExactReal, n: &BigInt) -> Result<(BigInt, ExactReal)> {
    pcf_step(x, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    VarNum,
    Engel,
    Greedy(BigInt),
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::VarNum => "varnum".into(),
            Family::Engel => "engel".into(),
            Family::Greedy(n) => format!("greedy{n}"),
        }
    }

    /// `y = [0; N, N, ...]` for greedy `N`.
    pub fn constant_y(&self) -> Option<ExactReal> {
        match self {
            Family::Greedy(n) => ExactReal::surd(-n, 1, n * n + 4, 2).ok(),
            _ => None,
        }
    }

    /// Applies the family's scalar map once.
    pub fn advance(&self, x: &ExactReal) -> Result<ExactReal> {
        Ok(match self {
            Family::VarNum => varnum_step(x)?.2,
            Family::Engel => engel_step(x)?.1,
            Family::Greedy(n) => greedy_step(x, n)?.1,
        })
    }
}

/// The family's expansion of `x` generated by its scalar map, up to `depth`
/// quotients. Engel digits `b_1, b_2, ...` become quotients
/// `1/b_1, b_1/b_2, b_2/b_3, ...`.
pub fn family_expansion(x: &ExactReal, family: &Family, depth: usize) -> Result<PcfExpansion> {
    let mut quotients = Vec::new();
    let mut cur = x.clone();
    let mut prev_b = BigInt::one();
    while quotients.len() < depth && !cur.is_zero() {
        match family {
            Family::VarNum => {
                let (a, b, next) = varnum_step(&cur)?;
                quotients.push(PartialQuotient { a, b });
                cur = next;
            }
            Family::Engel => {
                let (b, next) = engel_step(&cur)?;
                quotients.push(PartialQuotient { a: prev_b.clone(), b: b.clone() });
                prev_b = b;
                cur = next;
            }
            Family::Greedy(n) => {
                let (b, next) = greedy_step(&cur, n)?;
                quotients.push(PartialQuotient { a: n.clone(), b });
                cur = next;
            }
        }
    }
    // Engel keeps the scalar remainder; the expansion tail is b_k times it
    let tail = match family {
        Family::Engel => cur.mul_int(&prev_b)?,
        _ => cur,
    };
    Ok(PcfExpansion::new(quotients, Some(tail)))
}

/// The first `depth` RCF digits of the `y` for which the joint map
/// reproduces the family's expansion of `x`: the expansion's numerators.
/// Shorter when the expansion of a rational `x` terminates.
pub fn y_of_x(x: &ExactReal, family: &Family, depth: usize) -> Result<Vec<BigInt>> {
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    Ok(family_expansion(x, family, depth)?.numerators())
}

/// Engel `y(x)` digits via the shift rule
/// `y(T~ x) = 1 / (1 + G(1/y(x) - 1))`, unwound from the inside out starting
/// at `y = 1` and expanded back to RCF digits.
pub fn engel_y_digits_via_shift(x: &ExactReal, depth: usize) -> Result<Vec<BigInt>> {
    let mut bs = Vec::new();
    let mut cur = x.clone();
    // one extra digit so that RCF canonicalization can only touch the last
    while bs.len() < depth && !cur.is_zero() {
        let (b, next) = engel_step(&cur)?;
        bs.push(b);
        cur = next;
    }
    let one = BigRational::one();
    let mut y = one.clone();
    for b in bs.iter().rev() {
        // 1/y(x) - 1 = 1 / (b - 1 + 1/y(T~x))
        let w = (BigRational::from_integer(b - 1) + y.recip()).recip();
        y = (&one + w).recip();
    }
    let mut digits = rcf_digits(&y);
    digits.truncate(depth.min(bs.len()));
    Ok(digits)
}

/// Regular continued fraction digits of a rational in `(0, 1]`.
pub fn rcf_digits(v: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut v = v.clone();
    while v.is_positive() {
        let r = v.recip();
        let a = r.floor();
        out.push(a.to_integer());
        v = r - a;
    }
    out
}

/// A rational `y` whose first RCF digits are exactly `digits` (a trailing
/// digit `2` keeps the expansion canonical and the orbit off zero).
pub fn seed_y(digits: &[BigInt]) -> ExactReal {
    let mut d = digits.to_vec();
    d.push(BigInt::from(2));
    ExactReal::Rational(rcf_value(&d))
}

/// Compares the family's scalar-map expansion with the joint orbit seeded
/// by `y_of_x`, digit for digit.
pub fn family_embedding_check(x: &ExactReal, family: &Family, depth: usize) -> Result<bool> {
    let scalar = family_expansion(x, family, depth)?;
    let y = match family.constant_y() {
        Some(y) => y,
        None => seed_y(&scalar.numerators()),
    };
    let rec = orbit(x, &y, scalar.len() as u64, &OrbitOptions::default())?;
    let joint = rec.expansion();
    Ok(joint.quotients == scalar.quotients)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// The expansion ended before `depth` digits; `y` is a representative of
    /// its cylinder.
    Terminated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatterRow {
    pub x: BigRational,
    pub y: BigRational,
    pub digits: usize,
    /// `|y(Fx) - H(y(x))|` at finite depth, where `F` is the family's
    /// scalar map and `H` the matching map on `y`.
    pub residual: Option<BigRational>,
    pub status: RowStatus,
}

/// The map on `y` matching one step of the family's scalar map.
fn y_shift(family: &Family, y: &BigRational, first_digit: &BigInt) -> BigRational {
    let one = BigRational::one();
    match family {
        // Gauss map
        Family::VarNum | Family::Greedy(_) => y.recip() - BigRational::from_integer(first_digit.clone()),
        // 1 / (1 + G(1/y - 1))
        Family::Engel => {
            let w = y.recip() - &one;
            let g = w.recip() - w.recip().floor();
            (&one + g).recip()
        }
    }
}

/// `y(x)` on the grid `x = k/(grid+1)`, `k = 1..=grid`.
pub fn emit_y_scatter(family: &Family, grid: u64, depth: usize) -> Result<Vec<ScatterRow>> {
    if grid < 2 {
        return Err(Error::domain("grid must be at least 2"));
    }
    let den = BigInt::from(grid + 1);
    let mut rows = Vec::new();
    for k in 1..=grid {
        let xr = BigRational::new(BigInt::from(k), den.clone());
        let x = ExactReal::Rational(xr.clone());
        let digits = y_of_x(&x, family, depth)?;
        if digits.len() < depth {
            rows.push(ScatterRow {
                x: xr,
                y: rcf_value_of(&seed_y(&digits)),
                digits: digits.len(),
                residual: None,
                status: RowStatus::Terminated,
            });
            continue;
        }
        let y = rcf_value(&digits);
        let next = family.advance(&x)?;
        let residual = if next.is_zero() {
            None
        } else {
            let next_digits = y_of_x(&next, family, depth)?;
            let lhs = rcf_value(&next_digits);
            let rhs = y_shift(family, &y, &digits[0]);
            Some((lhs - rhs).abs())
        };
        rows.push(ScatterRow { x: xr, y, digits: depth, residual, status: RowStatus::Ok });
    }
    Ok(rows)
}

fn rcf_value_of(v: &ExactReal) -> BigRational {
    v.as_rational().cloned().expect("seed_y is rational")
}

/// A fresh interval-valued random point in `(0, 1)` for the given seed.
pub fn random_unit(seed: u64) -> ExactReal {
    ExactReal::random_unit(seed, DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn golden() -> ExactReal {
        ExactReal::golden()
    }

    fn q(n: i64, d: i64) -> ExactReal {
        ExactReal::ratio(n, d).unwrap()
    }

    #[test]
    fn joint_step_examples() {
        let s = JointState::new(golden(), golden());
        let (next, addr) = joint_step(&s).unwrap();
        assert_eq!(addr, CylinderAddress::new(1, 1));
        assert_eq!((next.x.clone(), next.y.clone()), (golden(), golden()));
        assert_eq!(joint_inverse(&next, &addr).unwrap().x, golden());

        // y golden: numerators all 1, so the digits are the RCF digits of x
        let x = ExactReal::surd(-1, 1, 7, 2).unwrap();
        let rec = orbit(&x, &golden(), 8, &OrbitOptions::default()).unwrap();
        let mut rcf = crate::numerators::RcfDigits::new(x.clone());
        for d in &rec.digits {
            assert_eq!(d.a, big(1));
            assert_eq!(Some(d.b.clone()), rcf.next_digit().unwrap());
        }

        let rec = orbit(&q(3, 7), &golden(), 10, &OrbitOptions::default()).unwrap();
        assert!(matches!(rec.truncated, Some(Truncation::ZeroCoordinate { x_zero: true, .. })));
        let s = JointState::new(ExactReal::zero(), golden());
        assert!(matches!(joint_step(&s), Err(Error::ZeroCoordinate { x_zero: true, y_zero: false })));
    }

    #[test]
    fn cylinder_examples() {
        let c = |x, y| cylinder_of(&JointState::new(q(x, 10), q(y, 10)));
        assert_eq!(c(7, 7).unwrap(), CylinderAddress::new(1, 1));
        assert_eq!(c(4, 7).unwrap(), CylinderAddress::new(1, 2));
        assert!(matches!(c(5, 7), Err(Error::OnBoundary)));
        assert!(matches!(c(7, 5), Err(Error::OnBoundary)));
        let total: BigRational = (1..=40)
            .flat_map(|a| (a..=2000).map(move |b| CylinderAddress::new(a, b).area()))
            .sum();
        let one = BigRational::one();
        assert!(total < one && total > BigRational::new(big(97), big(100)));
    }

    #[test]
    fn orbit_examples() {
        let rec = orbit(&golden(), &golden(), 10, &OrbitOptions::default()).unwrap();
        let qs: Vec<_> = (1..=10).map(|n| rec.convergents.q(n).clone()).collect();
        assert_eq!(qs, [1, 2, 3, 5, 8, 13, 21, 34, 55, 89].map(big).to_vec());
        let y3 = Family::Greedy(big(3)).constant_y().unwrap();
        let rec = orbit(&ExactReal::surd(-1, 1, 3, 1).unwrap(), &y3, 10, &OrbitOptions::default()).unwrap();
        assert!(rec.digits.iter().all(|d| d.a == big(3) && d.b >= big(3)));
        let rec = orbit(&golden(), &golden(), 0, &OrbitOptions::default()).unwrap();
        assert!(rec.digits.is_empty() && rec.growth_samples.is_empty());
    }

    #[test]
    fn growth_examples() {
        let g = growth_exponent(&golden(), &golden(), 400, &OrbitOptions::default()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((g.estimate - phi).abs() < 0.01, "{g:?}");
        let g = growth_exponent(&golden(), &golden(), 1, &OrbitOptions::default()).unwrap();
        assert_eq!(g.estimate, 1.0);
        assert!(!g.reliable);
    }

    #[test]
    fn interval_orbit_escalates_budget() {
        let x = ExactReal::random_unit(11, 256);
        let rec = orbit(&x, &golden(), 300, &OrbitOptions { max_budget: 1 << 14 }).unwrap();
        assert_eq!(rec.digits.len(), 300, "{:?}", rec.truncated);
        let rec = orbit(&x, &golden(), 300, &OrbitOptions { max_budget: 256 }).unwrap();
        assert!(matches!(rec.truncated, Some(Truncation::PrecisionExhausted { .. })));
    }

    #[test]
    fn eigenvalue_examples() {
        let (p, m) = eigenvalues_of_digit_matrix(&big(1), &big(1)).unwrap();
        assert_eq!(p, ExactReal::surd(1, 1, 5, 2).unwrap());
        assert_eq!(m, ExactReal::surd(1, -1, 5, 2).unwrap());
        let (p, m) = eigenvalues_of_digit_matrix(&big(2), &big(3)).unwrap();
        assert_eq!(p, ExactReal::surd(3, 1, 17, 2).unwrap());
        assert_eq!(p.mul(&m).unwrap(), ExactReal::from_int(-2));
        assert_eq!(p.add(&m).unwrap(), ExactReal::from_int(3));
        // square discriminant gives rational eigenvalues
        let (p, m) = eigenvalues_of_digit_matrix(&big(2), &big(1)).unwrap();
        assert_eq!((p, m), (ExactReal::from_int(2), ExactReal::from_int(-1)));
    }

    #[test]
    fn frequency_examples() {
        let t = birkhoff_cylinder_frequencies(&ExactReal::surd(-1, 1, 7, 2).unwrap(), &golden(), 30, &OrbitOptions::default()).unwrap();
        assert!(t.counts.keys().all(|c| c.a == big(1)));
        let sum: f64 = t.rows().map(|(_, _, f)| f).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        let f = birkhoff_frequencies_f64(5, 20_000);
        assert_eq!(f.total, 20_000);
        assert!(f.frequency(&CylinderAddress::new(1, 1)) > 0.1);
    }

    #[test]
    fn scalar_map_examples() {
        assert_eq!(varnum_step(&golden()).unwrap(), (big(1), big(1), golden()));
        assert_eq!(varnum_step(&q(2, 5)).unwrap(), (big(2), big(5), ExactReal::zero()));
        assert_eq!(varnum_step(&q(9, 10)).unwrap(), (big(1), big(1), q(1, 9)));
        assert_eq!(engel_step(&q(1, 2)).unwrap(), (big(2), ExactReal::zero()));
        assert_eq!(engel_step(&q(2, 3)).unwrap(), (big(1), q(1, 2)));
        let e = family_expansion(&q(2, 3), &Family::Engel, 10).unwrap();
        assert_eq!(e.to_string(), "[1/1,1/2]");
        assert_eq!(crate::expansion::reconstruct(&e).unwrap(), q(2, 3));
    }

    #[test]
    fn y_of_x_examples() {
        let x = ExactReal::surd(-1, 1, 3, 1).unwrap();
        assert_eq!(y_of_x(&x, &Family::Greedy(big(3)), 5).unwrap(), vec![big(3); 5]);
        let d = y_of_x(&x, &Family::Engel, 8).unwrap();
        assert_eq!(d[0], big(1));
        assert!(d.windows(2).skip(1).all(|w| w[0] <= w[1]));
        assert_eq!(engel_y_digits_via_shift(&x, 8).unwrap(), d);
        assert_eq!(y_of_x(&golden(), &Family::VarNum, 6).unwrap(), vec![big(1); 6]);
        for fam in [Family::VarNum, Family::Engel, Family::Greedy(big(2))] {
            assert!(family_embedding_check(&x, &fam, 12).unwrap(), "{fam:?}");
        }
    }

    #[test]
    fn scatter_examples() {
        let rows = emit_y_scatter(&Family::VarNum, 3, 4).unwrap();
        let xs: Vec<_> = rows.iter().map(|r| r.x.clone()).collect();
        assert_eq!(xs, [1, 2, 3].map(|k| BigRational::new(big(k), big(4))).to_vec());
        let half = BigRational::new(big(1), big(2));
        for r in emit_y_scatter(&Family::Engel, 60, 6).unwrap() {
            assert!(r.y > half, "{r:?}");
        }
    }
}
