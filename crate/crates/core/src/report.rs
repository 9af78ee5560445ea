//! JSON and CSV rendering. Big integers, rationals and floats are written as
//! decimal strings so output is bit-exact and diffable.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::candidates::{CandidatePair, Parity, RealizationWitness};
use crate::error::{Error, Result};
use crate::exactreal::ExactReal;
use crate::expansion::{ConvergentSeq, PcfExpansion};
use crate::gauss2d::{
    FrequencyTable, GrowthEstimate, OrbitDigest, RowStatus, ScatterRow, Truncation,
};

pub const SCHEMA: u64 = 1;

pub fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn rat(v: &BigRational) -> Value {
    Value::String(fmt_rat(v))
}

pub fn real(v: &ExactReal) -> Value {
    Value::String(v.to_string())
}

/// Shortest representation that parses back to the same `f64`.
pub fn float(v: f64) -> Value {
    Value::String(fmt_float(v))
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

pub fn fmt_rat(v: &BigRational) -> String {
    if v.denom() == &BigInt::from(1) {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn expansion(e: &PcfExpansion) -> Value {
    Value::Array(e.quotients.iter().map(|q| json!({"a": int(&q.a), "b": int(&q.b)})).collect())
}

/// `n, p_n, q_n, p_n/q_n` for `n = 1..=last`.
pub fn convergents(c: &ConvergentSeq) -> Value {
    let rows = (1..=c.last_index() as isize)
        .map(|n| {
            let (p, q) = c.pair(n);
            json!({"n": n, "p": int(p), "q": int(q), "reduced": rat(&c.reduced(n))})
        })
        .collect();
    Value::Array(rows)
}

pub fn witness(w: &RealizationWitness) -> Value {
    json!({"index": w.index, "quotients": expansion(&PcfExpansion::new(w.quotients.clone(), None))})
}

pub fn parity(p: Parity) -> &'static str {
    match p {
        Parity::Odd => "odd",
        Parity::Even => "even",
    }
}

pub fn candidate(c: &CandidatePair) -> Value {
    json!({"p": int(&c.p), "q": int(&c.q), "parity": parity(c.parity)})
}

pub fn truncation(t: &Option<Truncation>) -> Value {
    serde_json::to_value(t).unwrap_or(Value::Null)
}

pub fn growth(g: &GrowthEstimate) -> Value {
    json!({
        "steps": g.steps,
        "estimate": float(g.estimate),
        "trend_slope": float(g.trend_slope),
        "final_quarter_oscillation": float(g.final_quarter_oscillation),
        "reliable": g.reliable,
        "truncated": truncation(&g.truncated),
    })
}

pub fn frequencies(t: &FrequencyTable) -> Value {
    let rows: Vec<Value> = t
        .rows()
        .map(|(c, n, f)| json!({"a": int(&c.a), "b": int(&c.b), "count": n, "freq": float(f)}))
        .collect();
    json!({"total": t.total, "interruptions": t.interruptions, "cells": rows})
}

/// Wraps a command's fields in the versioned envelope.
pub fn document(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        m.extend(fields);
    } else {
        m.insert("result".into(), body);
    }
    Value::Object(m)
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// A header plus string rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}

pub fn frequency_table(t: &FrequencyTable) -> CsvTable {
    let mut out = CsvTable::new(&["a", "b", "count", "freq"]);
    for (c, n, f) in t.rows() {
        out.push(vec![c.a.to_string(), c.b.to_string(), n.to_string(), fmt_float(f)]);
    }
    out
}

pub fn orbit_digest_json(d: &OrbitDigest) -> Value {
    let mut v = growth(&d.growth);
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), Value::String(d.seed.to_string()));
        m.insert("orbit".into(), json!(d.orbit));
        m.insert("n".into(), json!(d.n));
    }
    v
}

pub fn orbit_digest_table(ds: &[OrbitDigest]) -> CsvTable {
    let mut out = CsvTable::new(&["seed", "orbit", "n", "steps", "estimate", "truncated"]);
    for d in ds {
        out.push(vec![
            d.seed.to_string(),
            d.orbit.to_string(),
            d.n.to_string(),
            d.growth.steps.to_string(),
            fmt_float(d.growth.estimate),
            d.growth.truncated.is_some().to_string(),
        ]);
    }
    out
}

fn status(s: &RowStatus) -> &'static str {
    match s {
        RowStatus::Ok => "ok",
        RowStatus::Terminated => "terminated",
    }
}

pub fn scatter_json(rows: &[ScatterRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "x": rat(&r.x),
                    "y": rat(&r.y),
                    "digits": r.digits,
                    "residual": r.residual.as_ref().map(rat),
                    "status": status(&r.status),
                })
            })
            .collect(),
    )
}

pub fn scatter_table(rows: &[ScatterRow], family: &str, depth: usize) -> CsvTable {
    let mut out = CsvTable::new(&[
        "x_num", "x_den", "y_num", "y_den", "family", "depth", "residual", "status",
    ]);
    for r in rows {
        out.push(vec![
            r.x.numer().to_string(),
            r.x.denom().to_string(),
            r.y.numer().to_string(),
            r.y.denom().to_string(),
            family.to_string(),
            depth.to_string(),
            r.residual.as_ref().map(fmt_rat).unwrap_or_default(),
            status(&r.status).to_string(),
        ]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss2d::CylinderAddress;

    #[test]
    fn envelope_and_csv() {
        let doc = document("demo", json!({"x": "1/2"}));
        assert_eq!(to_json_string(&doc), "{\n  \"command\": \"demo\",\n  \"schema\": 1,\n  \"x\": \"1/2\"\n}\n");
        let mut t = FrequencyTable::default();
        t.record(CylinderAddress::new(1, 2));
        t.record(CylinderAddress::new(1, 1));
        t.record(CylinderAddress::new(1, 1));
        let csv = frequency_table(&t).render().unwrap();
        assert_eq!(csv, "a,b,count,freq\n1,1,2,0.6666666666666666\n1,2,1,0.3333333333333333\n");
    }

    #[test]
    fn exact_values_are_strings() {
        let big = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        assert_eq!(int(&big), json!("123456789012345678901234567890"));
        assert_eq!(rat(&BigRational::new(6.into(), 4.into())), json!("3/2"));
        assert_eq!(float(0.1), json!("0.1"));
        assert_eq!(float(f64::NAN), json!("NaN"));
    }
}
