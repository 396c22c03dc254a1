//! Oracles backed by user-supplied JSON tables.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "metric": [["1"]],
//!   "unit": 1,
//!   "entries": [
//!     {"g": 1, "d": 1, "alpha": 1, "insertions": [1, 1],
//!      "poly": [{"coeff": "-1/12", "exps": [1, 1]}]}
//!   ]
//! }
//! ```
//! Colors are one-based, insertions sorted, rationals are `"p/q"` strings
//! and a term may carry `"e": k` for the Hodge-parameter power. Keys that
//! are absent are Unknown.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_answer, CohFTSpec, DrOracle, DrPoly, OracleKey, Query};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Scalar};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub g: u32,
    pub d: u32,
    pub alpha: usize,
    pub insertions: Vec<usize>,
    pub poly: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub metric: Vec<Vec<String>>,
    pub unit: usize,
    pub entries: Vec<EntryDoc>,
}

pub struct TableOracle {
    spec: CohFTSpec,
    entries: BTreeMap<OracleKey, DrPoly>,
}

impl TableOracle {
    pub fn entries(&self) -> &BTreeMap<OracleKey, DrPoly> {
        &self.entries
    }
}

impl DrOracle for TableOracle {
    fn spec(&self) -> &CohFTSpec {
        &self.spec
    }

    fn dr_poly(&self, key: &OracleKey) -> Query {
        match self.entries.get(key) {
            Some(p) => Query::Known(p.clone()),
            None => Query::Unknown,
        }
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// Parses and validates a table document.
pub fn table_oracle(json: &str) -> Result<TableOracle> {
    let doc: TableDoc = serde_json::from_str(json).map_err(|e| schema(e.to_string()))?;
    from_doc(&doc)
}

pub fn from_doc(doc: &TableDoc) -> Result<TableOracle> {
    let n = doc.dimension;
    if n == 0 {
        return Err(schema("dimension must be positive"));
    }
    if doc.metric.len() != n || doc.metric.iter().any(|r| r.len() != n) {
        return Err(schema(format!("metric must be {n}x{n}")));
    }
    let mut eta = Vec::with_capacity(n);
    for row in &doc.metric {
        let mut r = Vec::with_capacity(n);
        for s in row {
            r.push(Scalar::from_rational(
                parse_rational(s).map_err(|e| schema(e.to_string()))?,
            ));
        }
        eta.push(r);
    }
    if doc.unit == 0 || doc.unit > n {
        return Err(schema(format!("unit must lie in 1..={n}")));
    }
    let name = doc.name.clone().unwrap_or_else(|| "table".to_string());
    let spec = CohFTSpec::new(&name, eta, doc.unit - 1, false).map_err(|e| match e {
        Error::NonSymmetric => Error::Validation {
            key: "metric".into(),
            reason: "metric is not symmetric".into(),
        },
        Error::Singular(_) => Error::Validation {
            key: "metric".into(),
            reason: "metric is not invertible".into(),
        },
        other => other,
    })?;
    let mut entries = BTreeMap::new();
    let mut uses_eps = false;
    for (idx, e) in doc.entries.iter().enumerate() {
        let at = |m: String| schema(format!("entry {idx}: {m}"));
        if e.alpha == 0 || e.alpha > n {
            return Err(at(format!("alpha {} outside 1..={n}", e.alpha)));
        }
        if e.insertions.len() < 2 {
            return Err(at("at least two insertions are required".into()));
        }
        if e.insertions.iter().any(|&c| c == 0 || c > n) {
            return Err(at("insertion color out of range".into()));
        }
        if e.insertions.windows(2).any(|w| w[0] > w[1]) {
            return Err(at("insertions must be sorted".into()));
        }
        let key = OracleKey::new(
            e.g,
            e.d,
            e.alpha - 1,
            e.insertions.iter().map(|c| c - 1).collect(),
        );
        let mut p = DrPoly::zero(key.n());
        for t in &e.poly {
            if t.exps.len() != key.n() {
                return Err(at(format!(
                    "exponent vector of length {} for {} insertions",
                    t.exps.len(),
                    key.n()
                )));
            }
            let c = parse_rational(&t.coeff).map_err(|err| at(err.to_string()))?;
            let epow = t.e.unwrap_or(0);
            uses_eps |= epow > 0;
            p.add(epow, t.exps.clone(), c);
        }
        if entries.contains_key(&key) {
            return Err(at(format!("duplicate key {key}")));
        }
        check_answer(&spec, &key, &p).map_err(|reason| Error::Validation {
            key: key.to_string(),
            reason,
        })?;
        entries.insert(key, p);
    }
    let spec = CohFTSpec { uses_eps, ..spec };
    Ok(TableOracle { spec, entries })
}

/// Writes the answers of `oracle` on `keys` as a table; Unknown keys are
/// left out.
pub fn export_table(oracle: &dyn DrOracle, keys: &[OracleKey]) -> TableDoc {
    let spec = oracle.spec();
    let metric = spec
        .eta
        .iter()
        .map(|r| r.iter().map(|c| format_rational(c.re())).collect())
        .collect();
    let mut entries = Vec::new();
    for k in keys {
        if let Query::Known(p) = oracle.dr_poly(k) {
            entries.push(EntryDoc {
                g: k.g,
                d: k.d,
                alpha: k.alpha + 1,
                insertions: k.insertions.iter().map(|c| c + 1).collect(),
                poly: p
                    .terms()
                    .iter()
                    .map(|((e, x), c)| TermDoc {
                        coeff: format_rational(c),
                        e: (*e > 0).then_some(*e),
                        exps: x.clone(),
                    })
                    .collect(),
            });
        }
    }
    TableDoc {
        name: Some(spec.name.clone()),
        dimension: spec.dim,
        metric,
        unit: spec.unit + 1,
        entries,
    }
}
