use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use properfrac::candidates::{
    candidate_q_for_p, lift_index_search, push_down_index, rayleigh_partition_check, CandidatePair,
    Parity,
};
use properfrac::expansion::{convergents, expand_with, one_minus_transform, reconstruct};
use properfrac::gauss2d::{
    engel_step, joint_inverse, joint_step, varnum_step, CylinderAddress, FrequencyTable, JointState,
};
use properfrac::parse::{parse_numerators, parse_range, parse_real};
use properfrac::{ExactReal, PartialQuotient, PcfExpansion};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `{k sqrt(d) / m}`: an irrational in (0, 1).
fn unit_surd() -> impl Strategy<Value = ExactReal> {
    (prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13]), 1i64..30, 1i64..12).prop_map(|(d, k, m)| {
        ExactReal::surd(0, k, d, m).unwrap().frac().unwrap()
    })
}

fn unit_rational() -> impl Strategy<Value = ExactReal> {
    (2i64..5000).prop_flat_map(|s| (1..s).prop_map(move |t| ExactReal::ratio(t, s).unwrap()))
}

fn numerators(max_len: usize) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec((1i64..=10).prop_map(BigInt::from), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinant_and_bound(x in unit_surd(), ns in numerators(30)) {
        let e = expand_with(&x, &ns).unwrap();
        let c = convergents(&e);
        let mut prod = BigInt::one();
        for n in 1..=e.len() as isize {
            prod *= &e.quotients[n as usize - 1].a;
            let (p, q) = c.pair(n);
            let (pp, qp) = c.pair(n - 1);
            let sign = if n % 2 == 0 { big(1) } else { big(-1) };
            prop_assert_eq!(pp * q - p * qp, sign * &prod);
            let err = x.mul_int(q).unwrap().sub(&ExactReal::from(p.clone())).unwrap().abs().unwrap();
            prop_assert!(err.lt(&x).unwrap());
        }
    }

    #[test]
    fn reconstruction_is_exact(x in prop_oneof![unit_surd(), unit_rational()], ns in numerators(12)) {
        let e = expand_with(&x, &ns).unwrap();
        prop_assert_eq!(reconstruct(&e).unwrap(), x);
        for q in &e.quotients {
            prop_assert!(q.b >= q.a);
        }
    }

    #[test]
    fn json_round_trip(pairs in prop::collection::vec((1u64..1_000_000, 0u64..1_000_000), 0..20)) {
        let e = PcfExpansion::from_pairs(pairs.iter().map(|&(a, d)| (a, a + d)), None).unwrap();
        let back = PcfExpansion::from_json(&e.to_json()).unwrap();
        prop_assert_eq!(&back.quotients, &e.quotients);
        prop_assert_eq!(back.to_json(), e.to_json());
    }

    #[test]
    fn display_parses_back(x in prop_oneof![unit_surd(), unit_rational()]) {
        prop_assert_eq!(parse_real(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn parsers_never_panic(s in "\\PC{0,40}") {
        for r in [parse_real(&s).err(), parse_numerators(&s).err(), parse_range(&s).err()].into_iter().flatten() {
            prop_assert!(r.pos <= s.len());
        }
    }

    #[test]
    fn candidates_are_unique(x in unit_surd(), p in 1i64..=500) {
        let p = big(p);
        let (q_odd, q_even) = candidate_q_for_p(&x, &p).unwrap();
        prop_assert_eq!(&q_even - &q_odd, big(1));
        let lo: BigInt = (&q_odd - 3i32).max(big(1));
        let mut odd = Vec::new();
        let mut even = Vec::new();
        let mut q = lo;
        while q <= &q_even + 3 {
            if let Some(c) = CandidatePair::classify(&x, &p, &q).unwrap() {
                match c.parity {
                    Parity::Odd => odd.push(q.clone()),
                    Parity::Even => even.push(q.clone()),
                }
            }
            q += 1;
        }
        prop_assert_eq!(odd, vec![q_odd]);
        prop_assert_eq!(even, vec![q_even]);
    }

    #[test]
    fn push_down_keeps_denominator_and_parity(x in unit_surd(), ns in numerators(8), k in 1usize..5) {
        let e = expand_with(&x, &ns).unwrap();
        prop_assume!(e.len() >= k + 2);
        let r = push_down_index(&x, &e, k).unwrap();
        let (c_old, c_new) = (convergents(&e), convergents(&r));
        prop_assert_eq!(c_new.pair(k as isize), c_old.pair(k as isize + 2));
        // the pushed-down quotient is proper and its tail continues the expansion
        let tail = r.tail.clone().unwrap();
        prop_assert!(tail.in_open_unit().unwrap());
        // lifting undoes pushing down
        let last = r.quotients.last().unwrap();
        let found = lift_index_search(&last.a, &last.b, &tail, 10_000).unwrap();
        let original: Vec<BigInt> = {
            let (qk, qk1, qk2) = (&e.quotients[k - 1], &e.quotients[k], &e.quotients[k + 1]);
            vec![qk.a.clone(), qk1.a.clone(), qk2.a.clone(), qk.b.clone(), qk1.b.clone(), qk2.b.clone()]
        };
        if original.iter().all(|v| *v <= big(10_000)) {
            prop_assert!(found.solutions.iter().any(|s| s.to_vec() == original));
        } else {
            prop_assert!(found.truncated);
        }
    }

    #[test]
    fn one_minus_shifts_denominators(x in unit_surd(), ns in numerators(10)) {
        let e = expand_with(&x, &ns).unwrap();
        let (a1, b1) = (&e.quotients[0].a, &e.quotients[0].b);
        let y = ExactReal::one().sub(&x).unwrap();
        if *b1 >= a1 * 2 {
            let r = one_minus_transform(&e).unwrap();
            prop_assert_eq!(reconstruct(&r).unwrap(), y.clone());
            let (c, d) = (convergents(&e), convergents(&r));
            for n in 1..=e.len() as isize {
                prop_assert_eq!(d.q(n + 1), c.q(n));
            }
        }
    }

    #[test]
    fn inverse_branch_restores_state(xn in 1i64..10_000, yn in 1i64..10_000) {
        let x = ExactReal::ratio(xn, 10_007).unwrap();
        let y = ExactReal::ratio(yn, 10_009).unwrap();
        let s = JointState::new(x, y);
        let (next, addr) = joint_step(&s).unwrap();
        prop_assert!(addr.b >= addr.a);
        let back = joint_inverse(&next, &addr).unwrap();
        prop_assert_eq!(back.x, s.x);
        prop_assert_eq!(back.y, s.y);
    }

    #[test]
    fn scalar_family_digits(x in unit_rational()) {
        let mut cur = x.clone();
        while !cur.is_zero() {
            let (a, b, next) = varnum_step(&cur).unwrap();
            prop_assert!(a <= b && b <= &a * &a + &a - 1);
            cur = next;
        }
        let mut cur = x;
        let mut prev = big(0);
        while !cur.is_zero() {
            let (b, next) = engel_step(&cur).unwrap();
            prop_assert!(b >= prev);
            prev = b;
            cur = next;
        }
    }

    #[test]
    fn rayleigh_small(x in unit_surd()) {
        prop_assert!(rayleigh_partition_check(&x, 500).unwrap().holds);
    }

    #[test]
    fn frequency_merge_is_associative(
        a in prop::collection::vec((1i64..4, 1i64..6), 0..30),
        b in prop::collection::vec((1i64..4, 1i64..6), 0..30),
        c in prop::collection::vec((1i64..4, 1i64..6), 0..30),
    ) {
        let table = |v: &[(i64, i64)]| {
            let mut t = FrequencyTable::default();
            for &(x, y) in v {
                t.record(CylinderAddress::new(x, x.max(y)));
            }
            t
        };
        let (ta, tb, tc) = (table(&a), table(&b), table(&c));
        let mut left = ta.clone();
        left.merge(&tb);
        left.merge(&tc);
        let mut bc = tb.clone();
        bc.merge(&tc);
        let mut right = ta;
        right.merge(&bc);
        prop_assert_eq!(left, right);
    }
}

/// Random arithmetic over `Q(sqrt(d))`.
#[derive(Clone, Debug)]
enum Tree {
    Leaf(i64, i64, i64),
    Op(u8, Box<Tree>, Box<Tree>),
}

fn tree() -> impl Strategy<Value = Tree> {
    let leaf = (-20i64..20, -5i64..5, 1i64..9).prop_map(|(p, q, r)| Tree::Leaf(p, q, r));
    leaf.prop_recursive(8, 64, 2, |inner| {
        (0u8..4, inner.clone(), inner).prop_map(|(op, l, r)| Tree::Op(op, Box::new(l), Box::new(r)))
    })
}

fn eval(t: &Tree, d: i64, interval: bool) -> Option<ExactReal> {
    match t {
        Tree::Leaf(p, q, r) => {
            let v = ExactReal::surd(*p, *q, d, *r).ok()?;
            if interval {
                Some(ExactReal::Interval(v.to_interval(200, 200).ok()?))
            } else {
                Some(v)
            }
        }
        Tree::Op(op, l, r) => {
            let (a, b) = (eval(l, d, interval)?, eval(r, d, interval)?);
            match op {
                0 => a.add(&b).ok(),
                1 => a.sub(&b).ok(),
                2 => a.mul(&b).ok(),
                _ => a.div(&b).ok(),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn surd_arithmetic_lies_in_interval_enclosure(t in tree(), d in prop::sample::select(vec![2i64, 3, 5, 7])) {
        let Some(exact) = eval(&t, d, false) else { return Ok(()) };
        // division by an enclosure of zero fails at this precision
        let Some(ExactReal::Interval(iv)) = eval(&t, d, true) else { return Ok(()) };
        prop_assert!(exact.is_exact());
        let lo = ExactReal::Rational(iv.lo().clone());
        let hi = ExactReal::Rational(iv.hi().clone());
        prop_assert!(!exact.lt(&lo).unwrap(), "{} below {}", exact, lo);
        prop_assert!(!hi.lt(&exact).unwrap(), "{} above {}", exact, hi);
    }
}

#[test]
fn fractional_part_characterization_sweep() {
    use properfrac::candidates::fractional_part_characterization;
    for x in test_set() {
        for q in 1..=500 {
            let r = fractional_part_characterization(&x, &big(q)).unwrap();
            assert!(r.holds, "x = {x}, q = {q}: {r:?}");
        }
    }
}

fn test_set() -> Vec<ExactReal> {
    vec![
        ExactReal::golden(),
        ExactReal::surd(-1, 1, 2, 1).unwrap(),
        ExactReal::surd(-1, 1, 3, 1).unwrap(),
    ]
}

#[test]
fn quotient_constructor_rejects_improper() {
    assert!(PartialQuotient::new(3, 2).is_err());
    assert!(PartialQuotient::new(0, 2).is_err());
    assert!(PartialQuotient::new(2, 2).is_ok());
}
