//! JSON and DOT formats for matrices and classes.
//!
//! A matrix is `{"n": 3, "mode": "exact", "entries": [["0", "0+1*a", ...], ...]}`.
//! Exact entries are `p+q*a` strings, or `(p+q*a)/d` for non-integral
//! values; float entries are JSON numbers. Class exports number nodes from 1
//! in discovery order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{class_graph_stats, BMatrix, MutationClass};
use crate::error::{Error, Result};
use crate::scalars::{Mode, Scalar};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    mode: String,
    entries: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ListedDoc {
    label: u32,
    #[serde(flatten)]
    matrix: MatrixDoc,
}

#[derive(Debug, Clone, Serialize)]
struct ClassDoc {
    size: usize,
    edge_count: usize,
    degree_histogram: Vec<(usize, usize)>,
    origin: MatrixDoc,
    representatives: Vec<MatrixDoc>,
    edges: Vec<(usize, usize)>,
}

fn scalar_value(x: &Scalar) -> Value {
    match x {
        Scalar::Exact(r) => Value::String(r.to_string()),
        Scalar::Float(v) => serde_json::Number::from_f64(*v)
            .map(Value::Number)
            .unwrap_or(Value::Null),
    }
}

fn parse_value(v: &Value, mode: Mode) -> Result<Scalar> {
    match (mode, v) {
        (Mode::Exact, Value::String(s)) => Scalar::parse(s, Mode::Exact),
        (Mode::Exact, Value::Number(n)) if n.is_i64() => Scalar::parse(&n.to_string(), Mode::Exact),
        (Mode::Float, Value::Number(n)) => n
            .as_f64()
            .map(Scalar::Float)
            .ok_or_else(|| Error::Malformed(format!("bad number {n}"))),
        (Mode::Float, Value::String(s)) => Scalar::parse(s, Mode::Float),
        _ => Err(Error::Malformed(format!(
            "entry {v} does not fit {mode} mode"
        ))),
    }
}

fn to_doc(b: &BMatrix) -> MatrixDoc {
    MatrixDoc {
        n: b.n(),
        mode: b.mode().to_string(),
        entries: b
            .rows()
            .iter()
            .map(|r| r.iter().map(scalar_value).collect())
            .collect(),
    }
}

fn from_doc(doc: &MatrixDoc) -> Result<BMatrix> {
    let mode: Mode = doc.mode.parse()?;
    if doc.entries.len() != doc.n {
        return Err(Error::Malformed(format!(
            "n = {} but {} rows given",
            doc.n,
            doc.entries.len()
        )));
    }
    let rows = doc
        .entries
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| parse_value(v, mode))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    BMatrix::new(rows)
}

pub fn matrix_from_json(s: &str) -> Result<BMatrix> {
    from_doc(&serde_json::from_str(s)?)
}

pub fn matrix_to_json(b: &BMatrix) -> String {
    serde_json::to_string_pretty(&to_doc(b)).expect("matrix document serializes")
}

/// Parses `{"matrices": [{"label": 1, "n": .., "mode": .., "entries": ..}, ..]}`.
pub fn listed_from_json(s: &str) -> Result<Vec<(u32, BMatrix)>> {
    #[derive(Deserialize)]
    struct Doc {
        matrices: Vec<ListedDoc>,
    }
    let doc: Doc = serde_json::from_str(s)?;
    doc.matrices
        .iter()
        .map(|m| Ok((m.label, from_doc(&m.matrix)?)))
        .collect()
}

pub fn class_to_json(cls: &MutationClass) -> String {
    let stats = class_graph_stats(cls);
    let doc = ClassDoc {
        size: stats.nodes,
        edge_count: stats.edges,
        degree_histogram: stats.degree_histogram.into_iter().collect(),
        origin: to_doc(cls.origin()),
        representatives: cls.representatives().map(to_doc).collect(),
        edges: cls.edges().iter().map(|&(i, j)| (i + 1, j + 1)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("class document serializes")
}

pub fn class_to_dot(cls: &MutationClass) -> String {
    let mut out = String::from("graph mutation_class {\n");
    for i in 1..=cls.len() {
        writeln!(out, "  {i};").unwrap();
    }
    for &(i, j) in cls.edges() {
        writeln!(out, "  {} -- {};", i + 1, j + 1).unwrap();
    }
    out.push_str("}\n");
    out
}
