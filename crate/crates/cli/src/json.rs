//! JSON documents emitted by the CLI. Every number that can grow is a
//! decimal string; see `docs/schema.md`.

use serde::{Deserialize, Serialize};

use fano_qc_core::gw::gw_invariants;
use fano_qc_core::{GwTable, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LEntry {
    pub m: usize,
    pub d: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwEntry {
    pub d: usize,
    pub classes: [usize; 3],
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwTableJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    #[serde(rename = "L")]
    pub l: Vec<LEntry>,
    pub gw: Vec<GwEntry>,
}

impl GwTableJson {
    pub fn from_table(table: &GwTable) -> Self {
        let p = table.params();
        GwTableJson {
            n: p.n(),
            k: p.k(),
            l: table
                .entries()
                .into_iter()
                .map(|((m, d), v)| LEntry {
                    m,
                    d,
                    value: v.to_string(),
                })
                .collect(),
            gw: gw_invariants(table)
                .into_iter()
                .map(|r| GwEntry {
                    d: r.d,
                    classes: r.classes,
                    value: r.value.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub target: String,
    /// Factor multiplying `rows`: `"1"` or `"1/h"`.
    pub scale: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub shifted: bool,
    pub rows: Vec<Vec<String>>,
}

pub fn matrix_rows(m: &PolyMatrix) -> Vec<Vec<String>> {
    m.rows()
        .map(|r| r.iter().map(|p| p.to_string()).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorTerm {
    pub order: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub target: String,
    pub operator: String,
    pub terms: Vec<OperatorTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEntry {
    pub i: usize,
    pub alpha: usize,
    pub offset: usize,
    pub diagonal: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSystemJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub target: String,
    pub integral: bool,
    pub q: Vec<QEntry>,
    #[serde(rename = "Q0")]
    pub q0: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}
