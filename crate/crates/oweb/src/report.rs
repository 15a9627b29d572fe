//! Relation-suite report records and serialization.
//!
//! Every check run by the relation suite (and by the CLI's other suites)
//! produces one [`RelationRecord`].  The JSON rendering is the canonical
//! machine-readable output; the table and CSV renderings are derived from
//! the same data.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of a single relation instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Both sides evaluated and agree exactly.
    Pass,
    /// Both sides evaluated and differ; `residual_nnz` counts the
    /// nonzero entries of the difference.
    Fail,
    /// The instance was not evaluated because it exceeds the size cap.
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "fail"),
            Status::Skip => write!(f, "skip"),
        }
    }
}

/// One verified relation instance.
#[derive(Debug, Clone, Serialize)]
pub struct RelationRecord {
    /// Stable relation identifier, e.g. `"bigon"`.
    pub relation: String,
    /// Instance parameters (always includes `m`; `k`, `i`, `j` as needed).
    /// A `BTreeMap` keeps JSON output deterministic.
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    /// Nonzero entries of the evaluated left side (0 when skipped).
    pub lhs_nnz: usize,
    /// Nonzero entries of the evaluated right side (0 when skipped).
    pub rhs_nnz: usize,
    /// Nonzero entries of lhs − rhs (0 on pass or skip).
    pub residual_nnz: usize,
}

impl RelationRecord {
    pub fn new(
        relation: impl Into<String>,
        params: BTreeMap<String, i64>,
        status: Status,
        lhs_nnz: usize,
        rhs_nnz: usize,
        residual_nnz: usize,
    ) -> Self {
        RelationRecord {
            relation: relation.into(),
            params,
            status,
            lhs_nnz,
            rhs_nnz,
            residual_nnz,
        }
    }

    /// Convenience: a record with parameters given as (key, value) pairs.
    pub fn with_params(
        relation: impl Into<String>,
        params: &[(&str, i64)],
        status: Status,
        lhs_nnz: usize,
        rhs_nnz: usize,
        residual_nnz: usize,
    ) -> Self {
        let map = params
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<_, _>>();
        Self::new(relation, map, status, lhs_nnz, rhs_nnz, residual_nnz)
    }
}

/// True iff no record failed (skips are not failures).
pub fn all_pass(records: &[RelationRecord]) -> bool {
    records.iter().all(|r| r.status != Status::Fail)
}

/// Counts of (pass, fail, skip).
pub fn tally(records: &[RelationRecord]) -> (usize, usize, usize) {
    let mut t = (0, 0, 0);
    for r in records {
        match r.status {
            Status::Pass => t.0 += 1,
            Status::Fail => t.1 += 1,
            Status::Skip => t.2 += 1,
        }
    }
    t
}

/// Canonical JSON rendering (array of records, deterministic key order).
pub fn to_json(records: &[RelationRecord]) -> String {
    serde_json::to_string_pretty(records).expect("report serialization cannot fail")
}

fn params_string(params: &BTreeMap<String, i64>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Human-readable fixed-width table, one line per record.
pub fn to_table(records: &[RelationRecord]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<32} {:<24} {:<6} {:>8} {:>8} {:>8}\n",
        "relation", "params", "status", "lhs_nnz", "rhs_nnz", "res_nnz"
    ));
    for r in records {
        out.push_str(&format!(
            "{:<32} {:<24} {:<6} {:>8} {:>8} {:>8}\n",
            r.relation,
            params_string(&r.params),
            r.status,
            r.lhs_nnz,
            r.rhs_nnz,
            r.residual_nnz
        ));
    }
    let (p, f, s) = tally(records);
    out.push_str(&format!("total: {p} pass, {f} fail, {s} skip\n"));
    out
}

/// CSV rendering with a fixed header.
pub fn to_csv(records: &[RelationRecord]) -> String {
    let mut out = String::from("relation,params,status,lhs_nnz,rhs_nnz,residual_nnz\n");
    for r in records {
        out.push_str(&format!(
            "{},\"{}\",{},{},{},{}\n",
            r.relation,
            params_string(&r.params),
            r.status,
            r.lhs_nnz,
            r.rhs_nnz,
            r.residual_nnz
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<RelationRecord> {
        vec![
            RelationRecord::with_params("bigon", &[("m", 3), ("k", 2)], Status::Pass, 3, 3, 0),
            RelationRecord::with_params("square", &[("m", 3), ("k", 1)], Status::Fail, 5, 4, 2),
            RelationRecord::with_params("clasp", &[("m", 5), ("k", 6)], Status::Skip, 0, 0, 0),
        ]
    }

    #[test]
    fn json_is_deterministic_and_well_formed() {
        let r = sample();
        let j1 = to_json(&r);
        let j2 = to_json(&r);
        assert_eq!(j1, j2);
        let parsed: serde_json::Value = serde_json::from_str(&j1).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 3);
        assert_eq!(parsed[0]["relation"], "bigon");
        assert_eq!(parsed[0]["params"]["m"], 3);
        assert_eq!(parsed[1]["status"], "fail");
        assert_eq!(parsed[1]["residual_nnz"], 2);
    }

    #[test]
    fn all_pass_ignores_skips() {
        let r = sample();
        assert!(!all_pass(&r));
        let ok: Vec<_> = r
            .into_iter()
            .filter(|x| x.status != Status::Fail)
            .collect();
        assert!(all_pass(&ok));
        assert_eq!(tally(&ok), (1, 0, 1));
    }

    #[test]
    fn table_and_csv_contain_every_record() {
        let r = sample();
        let t = to_table(&r);
        assert!(t.contains("bigon"));
        assert!(t.contains("1 pass, 1 fail, 1 skip"));
        let c = to_csv(&r);
        assert_eq!(c.lines().count(), 4);
        assert!(c.lines().nth(2).unwrap().contains("square"));
    }
}
