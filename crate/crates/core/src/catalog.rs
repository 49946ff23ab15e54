//! Built-in weak Landau–Ginzburg models.
//!
//! Only the models are stored here. Their expected records are recomputed by
//! [`expected_record`] and cross-checked against brute-force expansion in the
//! test suite, so no reference value is typed in by hand.

use rug::{Float, Integer};
use serde::Serialize;

use crate::conifold::{find_conifold, ConifoldConfig};
use crate::laurent::{LaurentPolynomial, DEFAULT_INDEX_HORIZON};
use crate::mp::DEFAULT_PREC;
use crate::Error;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub model: LaurentPolynomial,
}

type TermList = &'static [(&'static [i64], i64)];

const ENTRIES: &[(&str, &str, usize, TermList)] = &[
    ("p1", "x + 1/x", 1, &[(&[1], 1), (&[-1], 1)]),
    (
        "p2",
        "x + y + 1/(xy)",
        2,
        &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)],
    ),
    (
        "p1xp1",
        "x + 1/x + y + 1/y",
        2,
        &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)],
    ),
    (
        "p3",
        "x + y + z + 1/(xyz)",
        3,
        &[
            (&[1, 0, 0], 1),
            (&[0, 1, 0], 1),
            (&[0, 0, 1], 1),
            (&[-1, -1, -1], 1),
        ],
    ),
];

fn build(entry: &(&'static str, &'static str, usize, TermList)) -> CatalogEntry {
    let (name, description, vars, terms) = *entry;
    CatalogEntry {
        name,
        description,
        model: LaurentPolynomial::from_integer_terms(vars, terms)
            .expect("catalog models are valid"),
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    ENTRIES.iter().map(build).collect()
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    ENTRIES.iter().find(|e| e.0 == name).map(build)
}

/// Quantities every catalog model is expected to reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedRecord {
    pub name: String,
    /// Conifold point coordinates, printed to 30 significant digits.
    pub conifold_point: Vec<String>,
    pub t_con: String,
    pub index_r: usize,
    /// `(n, n!Gₙ)` for the first nonzero terms.
    #[serde(serialize_with = "ser_leading")]
    pub leading_terms: Vec<(usize, Integer)>,
}

fn ser_leading<S: serde::Serializer>(v: &[(usize, Integer)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(n, c)| (n, c.to_string())))
}

fn digits30(f: &Float) -> String {
    f.to_string_radix(10, Some(30))
}

/// Recomputes the record for `entry` through the exact pipeline.
pub fn expected_record(entry: &CatalogEntry, leading: usize) -> Result<ExpectedRecord, Error> {
    let conifold = find_conifold(&entry.model, &ConifoldConfig::with_prec(DEFAULT_PREC))?;
    let index_r = entry.model.index(DEFAULT_INDEX_HORIZON)?;
    let mut leading_terms = Vec::with_capacity(leading);
    let mut n_max = 4 * index_r * leading.max(1);
    loop {
        leading_terms.clear();
        let cst = entry.model.cst_sequence(n_max)?;
        for (n, c) in cst.iter().enumerate() {
            if *c != 0 && leading_terms.len() < leading {
                leading_terms.push((n, c.numer().clone()));
            }
        }
        if leading_terms.len() >= leading {
            break;
        }
        n_max *= 2;
    }
    Ok(ExpectedRecord {
        name: entry.name.to_string(),
        conifold_point: conifold.point.iter().map(digits30).collect(),
        t_con: digits30(&conifold.value),
        index_r,
        leading_terms,
    })
}
