use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use properfrac::candidates::{
    approximation_bound_check, classify_denominator, classify_numerator, lift_index_search,
    push_down_index, rayleigh_partition_check, sharpness_witness, CutoffVerdict,
    RealizationWitness,
};
use properfrac::expansion::{
    convergents, enumerate_rational_expansions, expand, expand_with, one_minus_transform,
    rational_images,
};
use properfrac::gauss2d::{
    birkhoff_frequencies_f64, cylinder_area_monte_carlo, eigenvalues_of_digit_matrix,
    emit_y_scatter, engel_y_digits_via_shift, growth_exponent, orbit_seeds, simulate, y_of_x,
    CylinderAddress, Family, FrequencyTable, OrbitDigest, OrbitOptions,
};
use properfrac::numerators::{rcf_value, NumeratorSpec};
use properfrac::parse::{parse_numerators, parse_range, parse_real};
use properfrac::report::{self, fmt_float, CsvTable};
use properfrac::{Error, ExactReal, ParseError, PcfExpansion};

use crate::{Cli, Command, Failure, Rendered};

fn parse_failure(what: &'static str, input: &str, err: ParseError) -> Failure {
    Failure::Parse { what, input: input.to_string(), err }
}

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::Domain(msg.into()))
}

/// A real-number argument, or `random:SEED` for an interval-valued random real.
fn real_arg(cli: &Cli, what: &'static str, s: &str) -> Result<ExactReal, Failure> {
    if let Some(seed) = s.trim().strip_prefix("random:") {
        let seed = seed
            .trim()
            .parse::<u64>()
            .map_err(|_| parse_failure(what, s, ParseError { pos: 7, msg: "expected a 64-bit seed".into() }))?;
        return Ok(ExactReal::random_unit(seed, cli.precision_bits));
    }
    parse_real(s).map_err(|e| parse_failure(what, s, e))
}

fn unit_arg(cli: &Cli, what: &'static str, s: &str) -> Result<ExactReal, Failure> {
    let x = real_arg(cli, what, s)?;
    if !x.in_open_unit()? {
        return Err(domain(format!("{what} must lie strictly between 0 and 1")));
    }
    Ok(x)
}

fn int_arg(what: &'static str, s: &str) -> Result<BigInt, Failure> {
    BigInt::parse_bytes(s.trim().as_bytes(), 10)
        .ok_or_else(|| parse_failure(what, s, ParseError { pos: 0, msg: "expected an integer".into() }))
}

fn rational_arg(what: &'static str, s: &str) -> Result<BigRational, Failure> {
    let v = parse_real(s).map_err(|e| parse_failure(what, s, e))?;
    v.as_rational().cloned().ok_or_else(|| domain(format!("{what} must be rational")))
}

fn numerators_arg(s: &str) -> Result<NumeratorSpec, Failure> {
    parse_numerators(s).map_err(|e| parse_failure("numerators", s, e))
}

fn range_arg(what: &'static str, s: &str) -> Result<std::ops::RangeInclusive<u64>, Failure> {
    parse_range(s).map_err(|e| parse_failure(what, s, e))
}

fn family_arg(s: &str) -> Result<Family, Failure> {
    match s.trim() {
        "varnum" => Ok(Family::VarNum),
        "engel" => Ok(Family::Engel),
        other => match other.strip_prefix("greedy:") {
            Some(n) => {
                let n = int_arg("family", n)
                    .map_err(|_| parse_failure("family", s, ParseError { pos: 7, msg: "expected N".into() }))?;
                if !n.is_positive() {
                    return Err(domain("greedy N must be positive"));
                }
                Ok(Family::Greedy(n))
            }
            None => Err(parse_failure(
                "family",
                s,
                ParseError { pos: 0, msg: "expected varnum, engel or greedy:N".into() },
            )),
        },
    }
}

/// Exact values print exactly; interval values as their midpoint.
fn real_str(v: &ExactReal) -> String {
    if v.is_exact() {
        v.to_string()
    } else {
        fmt_float(v.to_f64())
    }
}

fn opts(cli: &Cli) -> OrbitOptions {
    OrbitOptions { max_budget: cli.precision_bits.saturating_mul(16) }
}

fn witness_str(w: &RealizationWitness) -> String {
    w.flat().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cutoff_str(c: CutoffVerdict) -> &'static str {
    match c {
        CutoffVerdict::GuaranteedRealizable => "guaranteed_realizable",
        CutoffVerdict::Undetermined => "undetermined",
    }
}

fn rendered(json: Value, table: CsvTable) -> Rendered {
    Rendered { json, table, side_tables: Vec::new(), violation: None }
}

pub fn dispatch(cli: &Cli) -> Result<Rendered, Failure> {
    match &cli.command {
        Command::Expand { x, numerators, len } => cmd_expand(cli, x, numerators, *len),
        Command::Classify { x, p, q, oracle, search_bound } => {
            cmd_classify(cli, x, p.as_deref(), q.as_deref(), *oracle, search_bound)
        }
        Command::Simulate { n, orbits, y, freq_out, float } => {
            cmd_simulate(cli, *n, *orbits, y.as_deref(), freq_out.clone(), *float)
        }
        Command::Growth { x, y, n } => cmd_growth(cli, x.as_deref(), y.as_deref(), *n),
        Command::Yofx { family, grid, depth, x } => cmd_yofx(cli, family, *grid, *depth, x.as_deref()),
        Command::Rational { x, list } => cmd_rational(x, *list),
        Command::OneMinus { x, numerators, len } => cmd_one_minus(cli, x, numerators, *len),
        Command::PushDown { x, numerators, len, k } => cmd_push_down(cli, x, numerators, *len, *k),
        Command::Lift { a, b, x, bound } => cmd_lift(cli, a, b, x, *bound),
        Command::Sharpness { n, eps } => cmd_sharpness(*n, eps),
        Command::Rayleigh { x, n_max } => cmd_rayleigh(cli, x, *n_max),
        Command::Eigen { a, b } => cmd_eigen(a, b),
        Command::Cylinders { side } => cmd_cylinders(cli, *side),
    }
}

fn cmd_expand(cli: &Cli, xs: &str, ns: &str, len: usize) -> Result<Rendered, Failure> {
    let x = unit_arg(cli, "x", xs)?;
    let spec = numerators_arg(ns)?;
    let e = expand(&x, spec.source().as_mut(), len)?;
    let c = convergents(&e);
    let bound = approximation_bound_check(&x, &e)?;

    let mut rows = Vec::new();
    let mut table = CsvTable::new(&["n", "a", "b", "p", "q", "reduced", "det_residual", "bound_margin"]);
    let mut product = BigInt::one();
    let mut violation = None;
    for (i, pq) in e.quotients.iter().enumerate() {
        let n = i as isize + 1;
        product *= &pq.a;
        let (p, q) = c.pair(n);
        let (pp, qp) = c.pair(n - 1);
        let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let residual = pp * q - p * qp - sign * &product;
        if !residual.is_zero() && violation.is_none() {
            violation = Some(format!("determinant identity fails at n = {n}"));
        }
        let margin = real_str(&bound.margins[i]);
        let reduced = c.reduced(n);
        rows.push(json!({
            "n": n,
            "a": report::int(&pq.a),
            "b": report::int(&pq.b),
            "p": report::int(p),
            "q": report::int(q),
            "reduced": report::rat(&reduced),
            "det_residual": report::int(&residual),
            "bound_margin": margin,
        }));
        table.push(vec![
            n.to_string(),
            pq.a.to_string(),
            pq.b.to_string(),
            p.to_string(),
            q.to_string(),
            report::fmt_rat(&reduced),
            residual.to_string(),
            margin,
        ]);
    }
    if !bound.holds && violation.is_none() {
        violation = Some("|q_n x - p_n| < x fails".into());
    }
    let json = report::document(
        "expand",
        json!({
            "x": real_str(&x),
            "numerators": ns,
            "expansion": report::expansion(&e),
            "length": e.len(),
            "terminated": e.terminated(),
            "tail": e.tail.as_ref().map(real_str),
            "convergents": rows,
            "bound_holds": bound.holds,
        }),
    );
    Ok(Rendered { violation, ..rendered(json, table) })
}

fn cmd_classify(
    cli: &Cli,
    xs: &str,
    p: Option<&str>,
    q: Option<&str>,
    oracle: bool,
    bound: &str,
) -> Result<Rendered, Failure> {
    let x = unit_arg(cli, "x", xs)?;
    let bound = int_arg("search bound", bound)?;
    let mut violation = None;
    let mut rows = Vec::new();
    let mut table = CsvTable::new(&["x", "p", "q", "parity", "realizable", "witness", "cutoff", "oracle"]);
    let x_desc = real_str(&x);

    if let Some(ps) = p {
        for p in range_arg("p range", ps)? {
            if p == 0 {
                return Err(domain("p must be positive"));
            }
            let p = BigInt::from(p);
            let row = classify_numerator(&x, &p, oracle.then_some(&bound))?;
            let realizable = row.witness.is_some();
            let oracle_val = match &row.oracle {
                None => Value::Null,
                Some(Ok(v)) => Value::Bool(*v),
                Some(Err(_)) => Value::String("bound_too_small".into()),
            };
            if let Some(Ok(v)) = &row.oracle {
                if *v != realizable && violation.is_none() {
                    violation = Some(format!("divisor test and oracle disagree at p = {p}"));
                }
            }
            if row.cutoff == CutoffVerdict::GuaranteedRealizable && !realizable && violation.is_none() {
                violation = Some(format!("cutoff guarantees p = {p} but no witness exists"));
            }
            rows.push(json!({
                "p": report::int(&row.p),
                "q_odd": report::int(&row.q_odd),
                "q_even": report::int(&row.q_even),
                "q2_realizable": realizable,
                "witness": row.witness.as_ref().map(|w| report::ints(&w.flat())),
                "cutoff": cutoff_str(row.cutoff),
                "oracle": oracle_val,
            }));
            let oracle_cell = match oracle_val {
                Value::Bool(b) => b.to_string(),
                Value::String(s) => s,
                _ => String::new(),
            };
            let odd_witness = format!("{} {}", row.p, row.q_odd);
            table.push(vec![
                x_desc.clone(),
                row.p.to_string(),
                row.q_odd.to_string(),
                "odd".into(),
                "true".into(),
                odd_witness,
                String::new(),
                String::new(),
            ]);
            table.push(vec![
                x_desc.clone(),
                row.p.to_string(),
                row.q_even.to_string(),
                "even".into(),
                realizable.to_string(),
                row.witness.as_ref().map(witness_str).unwrap_or_default(),
                cutoff_str(row.cutoff).into(),
                oracle_cell,
            ]);
        }
    } else if let Some(qs) = q {
        for q in range_arg("q range", qs)? {
            if q == 0 {
                return Err(domain("q must be positive"));
            }
            let row = classify_denominator(&x, &BigInt::from(q))?;
            let realizable = row.even_witness.is_some();
            rows.push(json!({
                "q": report::int(&row.q),
                "frac": real_str(&row.frac),
                "p_odd": row.p_odd.as_ref().map(report::int),
                "p_even": row.p_even.as_ref().map(report::int),
                "even_realizable": row.p_even.as_ref().map(|_| realizable),
                "witness": row.even_witness.as_ref().map(|w| report::ints(&w.flat())),
                "cutoff": row.cutoff.map(cutoff_str),
            }));
            if let Some(p) = &row.p_odd {
                table.push(vec![
                    x_desc.clone(),
                    p.to_string(),
                    row.q.to_string(),
                    "odd".into(),
                    "true".into(),
                    format!("{p} {}", row.q),
                    String::new(),
                    String::new(),
                ]);
            }
            if let Some(p) = &row.p_even {
                table.push(vec![
                    x_desc.clone(),
                    p.to_string(),
                    row.q.to_string(),
                    "even".into(),
                    realizable.to_string(),
                    row.even_witness.as_ref().map(witness_str).unwrap_or_default(),
                    row.cutoff.map(cutoff_str).unwrap_or_default().into(),
                    String::new(),
                ]);
            }
        }
    }
    let json = report::document("classify", json!({"x": x_desc, "rows": rows}));
    Ok(Rendered { violation, ..rendered(json, table) })
}

fn cmd_simulate(
    cli: &Cli,
    n: u64,
    orbits: u64,
    y: Option<&str>,
    freq_out: Option<std::path::PathBuf>,
    float: bool,
) -> Result<Rendered, Failure> {
    let (json, table, freqs) = if float {
        let mut t = FrequencyTable::default();
        for (sx, _) in orbit_seeds(cli.seed, orbits) {
            t.merge(&birkhoff_frequencies_f64(sx, n));
        }
        let json = report::document(
            "simulate",
            json!({
                "mode": "float",
                "seed": cli.seed.to_string(),
                "n": n,
                "orbits": orbits,
                "frequencies": report::frequencies(&t),
            }),
        );
        (json, report::frequency_table(&t), t)
    } else {
        let y = y.map(|s| unit_arg(cli, "y", s)).transpose()?;
        let sim = simulate(cli.seed, orbits, n, y.as_ref(), cli.precision_bits, &opts(cli))?;
        let json = report::document(
            "simulate",
            json!({
                "mode": "interval",
                "seed": cli.seed.to_string(),
                "n": n,
                "orbits": orbits,
                "y": y.as_ref().map(real_str),
                "partial": sim.truncated(),
                "digests": sim.digests.iter().map(report::orbit_digest_json).collect::<Vec<_>>(),
                "frequencies": report::frequencies(&sim.frequencies),
            }),
        );
        (json, report::orbit_digest_table(&sim.digests), sim.frequencies)
    };
    let mut out = rendered(json, table);
    if let Some(path) = freq_out {
        out.side_tables.push((path, report::frequency_table(&freqs)));
    }
    Ok(out)
}

fn cmd_growth(cli: &Cli, x: Option<&str>, y: Option<&str>, n: u64) -> Result<Rendered, Failure> {
    let (sx, sy) = orbit_seeds(cli.seed, 1)[0];
    let x = match x {
        Some(s) => unit_arg(cli, "x", s)?,
        None => ExactReal::random_unit(sx, cli.precision_bits),
    };
    let y = match y {
        Some(s) => unit_arg(cli, "y", s)?,
        None => ExactReal::random_unit(sy, cli.precision_bits),
    };
    let g = growth_exponent(&x, &y, n, &opts(cli))?;
    let digest = OrbitDigest { seed: sx, orbit: 0, n, growth: g.clone() };
    let mut body = report::growth(&g);
    if let Value::Object(m) = &mut body {
        m.insert("x".into(), json!(real_str(&x)));
        m.insert("y".into(), json!(real_str(&y)));
        m.insert("n".into(), json!(n));
        m.insert("partial".into(), json!(g.truncated.is_some()));
    }
    Ok(rendered(report::document("growth", body), report::orbit_digest_table(&[digest])))
}

fn cmd_yofx(cli: &Cli, fs: &str, grid: u64, depth: usize, x: Option<&str>) -> Result<Rendered, Failure> {
    let family = family_arg(fs)?;
    if depth == 0 {
        return Err(domain("depth must be at least 1"));
    }
    if let Some(xs) = x {
        let x = unit_arg(cli, "x", xs)?;
        let digits = y_of_x(&x, &family, depth)?;
        let mut violation = None;
        if family == Family::Engel && engel_y_digits_via_shift(&x, depth)? != digits {
            violation = Some("engel y(x) routes disagree".to_string());
        }
        let mut table = CsvTable::new(&["index", "digit"]);
        for (i, d) in digits.iter().enumerate() {
            table.push(vec![(i + 1).to_string(), d.to_string()]);
        }
        let json = report::document(
            "yofx",
            json!({
                "family": family.name(),
                "x": real_str(&x),
                "depth": depth,
                "digits": report::ints(&digits),
                "y": report::rat(&rcf_value(&digits)),
            }),
        );
        return Ok(Rendered { violation, ..rendered(json, table) });
    }
    let rows = emit_y_scatter(&family, grid, depth)?;
    let mut violation = None;
    if family == Family::Engel {
        let half = BigRational::new(1.into(), 2.into());
        if let Some(r) = rows.iter().find(|r| r.y <= half) {
            violation = Some(format!("engel y({}) <= 1/2", r.x));
        }
    }
    let json = report::document(
        "yofx",
        json!({
            "family": family.name(),
            "grid": grid,
            "depth": depth,
            "rows": report::scatter_json(&rows),
        }),
    );
    let table = report::scatter_table(&rows, &family.name(), depth);
    Ok(Rendered { violation, ..rendered(json, table) })
}

fn cmd_rational(xs: &str, list: bool) -> Result<Rendered, Failure> {
    let x = rational_arg("x", xs)?;
    let (t0, s0) = (x.numer().clone(), x.denom().clone());
    let images = rational_images(&t0, &s0)?;
    let all = enumerate_rational_expansions(&x, None)?;
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for e in &all {
        *counts.entry(e.len()).or_insert(0) += 1;
    }
    let max_length = counts.keys().next_back().copied().unwrap_or(0);
    let mut violation = None;
    let t = usize::try_from(&t0).unwrap_or(usize::MAX);
    if max_length != t || (1..=t).any(|l| !counts.contains_key(&l)) {
        violation = Some(format!("lengths of {x} do not cover exactly 1..={t0}"));
    }
    let mut body = json!({
        "x": report::rat(&x),
        "t0": report::int(&t0),
        "s0": report::int(&s0),
        "images": images
            .iter()
            .map(|(v, n)| json!({"value": report::rat(v), "least_n": report::int(n)}))
            .collect::<Vec<_>>(),
        "count": all.len(),
        "length_counts": counts.iter().map(|(l, c)| (l.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
        "max_length": max_length,
    });
    let table = if list {
        body["expansions"] = Value::Array(all.iter().map(report::expansion).collect());
        let mut t = CsvTable::new(&["index", "length", "expansion"]);
        for (i, e) in all.iter().enumerate() {
            t.push(vec![(i + 1).to_string(), e.len().to_string(), e.to_string()]);
        }
        t
    } else {
        let mut t = CsvTable::new(&["length", "count"]);
        for (l, c) in &counts {
            t.push(vec![l.to_string(), c.to_string()]);
        }
        t
    };
    Ok(Rendered { violation, ..rendered(report::document("rational", body), table) })
}

fn quotient_table(e: &PcfExpansion) -> CsvTable {
    let mut t = CsvTable::new(&["i", "a", "b"]);
    for (i, q) in e.quotients.iter().enumerate() {
        t.push(vec![(i + 1).to_string(), q.a.to_string(), q.b.to_string()]);
    }
    t
}

fn cmd_one_minus(cli: &Cli, xs: &str, ns: &str, len: usize) -> Result<Rendered, Failure> {
    let x = unit_arg(cli, "x", xs)?;
    let e = expand(&x, numerators_arg(ns)?.source().as_mut(), len)?;
    let r = one_minus_transform(&e)?;
    // re-expanding 1 - x with the derived numerators must give the same digits
    let y = ExactReal::one().sub(&x)?;
    let check = expand_with(&y, &r.numerators())?;
    let verified = check.quotients == r.quotients;
    let json = report::document(
        "one-minus",
        json!({
            "x": real_str(&x),
            "expansion": report::expansion(&e),
            "one_minus": report::expansion(&r),
            "verified": verified,
        }),
    );
    let violation = (!verified).then(|| "derived expansion of 1 - x does not re-expand".to_string());
    Ok(Rendered { violation, ..rendered(json, quotient_table(&r)) })
}

fn cmd_push_down(cli: &Cli, xs: &str, ns: &str, len: usize, k: usize) -> Result<Rendered, Failure> {
    let x = unit_arg(cli, "x", xs)?;
    let e = expand(&x, numerators_arg(ns)?.source().as_mut(), len)?;
    let r = push_down_index(&x, &e, k)?;
    let before = convergents(&e).q(k as isize + 2).clone();
    let after = convergents(&r).q(k as isize).clone();
    let json = report::document(
        "push-down",
        json!({
            "x": real_str(&x),
            "k": k,
            "before": report::expansion(&e),
            "after": report::expansion(&r),
            "q_before": report::int(&before),
            "q_after": report::int(&after),
        }),
    );
    let violation = (before != after).then(|| format!("q_{k} = {after} but q_{} was {before}", k + 2));
    Ok(Rendered { violation, ..rendered(json, quotient_table(&r)) })
}

fn cmd_lift(cli: &Cli, a: &str, b: &str, xs: &str, bound: u64) -> Result<Rendered, Failure> {
    let a = int_arg("a", a)?;
    let b = int_arg("b", b)?;
    let x = unit_arg(cli, "x", xs)?;
    let found = lift_index_search(&a, &b, &x, bound)?;
    let mut table = CsvTable::new(&["a_k", "a_k1", "a_k2", "b_k", "b_k1", "b_k2"]);
    for s in &found.solutions {
        table.push(s.iter().map(|v| v.to_string()).collect());
    }
    let json = report::document(
        "lift",
        json!({
            "a": report::int(&a),
            "b": report::int(&b),
            "x": real_str(&x),
            "solutions": found.solutions.iter().map(|s| report::ints(s)).collect::<Vec<_>>(),
            "truncated": found.truncated,
        }),
    );
    Ok(rendered(json, table))
}

fn cmd_sharpness(n: usize, eps: &str) -> Result<Rendered, Failure> {
    let eps = rational_arg("eps", eps)?;
    let r = sharpness_witness(n, &eps)?;
    let json = report::document(
        "sharpness",
        json!({
            "n": n,
            "eps": report::rat(&eps),
            "prefix": report::expansion(&r.prefix),
            "product_claim": r.product_claim,
            "ratio_claim": r.ratio_claim,
            "product_margin": report::rat(&r.product_margin),
            "ratio_margin": report::rat(&r.ratio_margin),
        }),
    );
    let violation = (!(r.product_claim && r.ratio_claim)).then(|| "construction misses a claim".to_string());
    Ok(Rendered { violation, ..rendered(json, quotient_table(&r.prefix)) })
}

fn cmd_rayleigh(cli: &Cli, xs: &str, n_max: u64) -> Result<Rendered, Failure> {
    let x = unit_arg(cli, "x", xs)?;
    let r = rayleigh_partition_check(&x, n_max)?;
    let mut table = CsvTable::new(&["n_max", "from_x", "from_complement", "overlaps", "missing", "holds"]);
    table.push(vec![
        r.n_max.to_string(),
        r.from_x.to_string(),
        r.from_complement.to_string(),
        r.overlaps.len().to_string(),
        r.missing.len().to_string(),
        r.holds.to_string(),
    ]);
    let mut body = serde_json::to_value(&r).map_err(|e| domain(e.to_string()))?;
    body["x"] = json!(real_str(&x));
    let violation = (!r.holds).then(|| "Beatty sequences do not partition".to_string());
    Ok(Rendered { violation, ..rendered(report::document("rayleigh", body), table) })
}

fn cmd_eigen(a: &str, b: &str) -> Result<Rendered, Failure> {
    let a = int_arg("a", a)?;
    let b = int_arg("b", b)?;
    let (plus, minus) = eigenvalues_of_digit_matrix(&a, &b)?;
    let ok = plus.mul(&minus)? == ExactReal::from(-&a) && plus.add(&minus)? == ExactReal::from(b.clone());
    let mut table = CsvTable::new(&["a", "b", "plus", "minus"]);
    table.push(vec![a.to_string(), b.to_string(), plus.to_string(), minus.to_string()]);
    let json = report::document(
        "eigen",
        json!({"a": report::int(&a), "b": report::int(&b), "plus": report::real(&plus), "minus": report::real(&minus)}),
    );
    let violation = (!ok).then(|| "eigenvalues fail Vieta".to_string());
    Ok(Rendered { violation, ..rendered(json, table) })
}

/// The nine cylinders of largest area.
pub fn smallest_cylinders() -> Vec<CylinderAddress> {
    [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 4), (3, 3), (1, 5), (2, 4)]
        .into_iter()
        .map(|(a, b)| CylinderAddress::new(a, b))
        .collect()
}

fn cmd_cylinders(cli: &Cli, side: u64) -> Result<Rendered, Failure> {
    if side == 0 {
        return Err(domain("side must be positive"));
    }
    let est = cylinder_area_monte_carlo(&smallest_cylinders(), side, cli.seed);
    let mut rows = Vec::new();
    let mut table = CsvTable::new(&["a", "b", "estimate", "exact", "relative_error"]);
    for (c, e) in &est {
        let exact = c.area();
        let ef = exact.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
            / exact.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        let rel = (e - ef) / ef;
        rows.push(json!({
            "a": report::int(&c.a),
            "b": report::int(&c.b),
            "estimate": report::float(*e),
            "exact": report::rat(&exact),
            "relative_error": report::float(rel),
        }));
        table.push(vec![c.a.to_string(), c.b.to_string(), fmt_float(*e), report::fmt_rat(&exact), fmt_float(rel)]);
    }
    let json = report::document(
        "cylinders",
        json!({"side": side, "samples": side * side, "seed": cli.seed.to_string(), "cells": rows}),
    );
    Ok(rendered(json, table))
}
