//! Text, JSON and LaTeX renderings of each pipeline stage.

use std::cmp::Reverse;
use std::fmt::Write as _;

use clap::ValueEnum;
use fano_qc_core::gw::{gw_invariants, primitive_relations};
use fano_qc_core::{GwTable, Pipeline, PolyMatrix, QSystem};

use crate::json::{
    matrix_rows, GwTableJson, MatrixJson, OperatorJson, OperatorTerm, QEntry, QSystemJson,
};
use crate::latex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Pf,
    OmegaPf,
    QMatrices,
    Lplus,
    OmegaHat,
    Dubrovin,
    Gw,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Pf => "pf",
            Target::OmegaPf => "omega-pf",
            Target::QMatrices => "q-matrices",
            Target::Lplus => "lplus",
            Target::OmegaHat => "omega-hat",
            Target::Dubrovin => "dubrovin",
            Target::Gw => "gw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Latex,
}

/// The rendered target, ending in a newline.
pub fn render(p: &Pipeline, target: Target, format: Format) -> String {
    let mut out = match format {
        Format::Table => text(p, target),
        Format::Json => json(p, target),
        Format::Latex => tex(p, target),
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

/// `(matrix, scale, shifted)` for the matrix targets.
fn matrix_target(p: &Pipeline, target: Target) -> Option<(PolyMatrix, &'static str, bool)> {
    match target {
        Target::OmegaPf => Some((p.omega_pf.connection_matrix(), "1", false)),
        Target::Lplus => Some((p.lplus.clone(), "1", false)),
        Target::OmegaHat => Some((p.normalized.matrix().clone(), "1/h", false)),
        Target::Dubrovin => Some((p.dubrovin.matrix().clone(), "1/h", p.dubrovin.is_shifted())),
        _ => None,
    }
}

/// `Q_i^α` ordered as they are solved: `α` ascending, then `i` descending.
fn solve_order(system: &QSystem) -> Vec<((usize, usize), &PolyMatrix)> {
    let mut v: Vec<_> = system.entries().collect();
    v.sort_by_key(|&((i, a), _)| (a, Reverse(i)));
    v
}

fn q_offset(system: &QSystem, i: usize, alpha: usize) -> usize {
    i + alpha * system.params().index()
}

fn text(p: &Pipeline, target: Target) -> String {
    if target == Target::Gw {
        return gw_text(&p.table);
    }
    let mut out = String::new();
    let _ = writeln!(out, "# {} {}", p.params, target.name());
    if let Some((m, scale, shifted)) = matrix_target(p, target) {
        if shifted {
            let _ = writeln!(out, "# shifted by -({}-1)! q/h I", p.params.n());
        }
        if scale != "1" {
            let _ = writeln!(out, "# ({scale}) *");
        }
        let _ = write!(out, "{m}");
        return out;
    }
    match target {
        Target::Pf => {
            let _ = writeln!(out, "{}", p.operator);
        }
        Target::QMatrices => {
            for ((i, a), m) in solve_order(&p.system) {
                let off = q_offset(&p.system, i, a);
                let diag: Vec<String> = m
                    .diagonal(off as isize)
                    .iter()
                    .map(|e| e.to_string())
                    .collect();
                let _ = writeln!(out, "Q_{i}^{a} = diag_{off}({})", diag.join(", "));
            }
            let _ = writeln!(out, "Q_0 =");
            let _ = write!(out, "{}", p.system.q_matrix(0));
        }
        _ => unreachable!("matrix and gw targets handled above"),
    }
    out
}

pub fn gw_text(table: &GwTable) -> String {
    let params = table.params();
    let mut out = String::new();
    let _ = writeln!(out, "# {params} structure constants");
    for ((m, d), v) in table.entries() {
        let _ = writeln!(out, "L_{m}^{d} = {v}");
    }
    let _ = writeln!(out, "# three-point invariants");
    for r in gw_invariants(table) {
        let [a, b, c] = r.classes;
        let _ = writeln!(out, "GW_{}(b_{a}, b_{b}, b_{c}) = {}", r.d, r.value);
    }
    let _ = writeln!(out, "# primitive classes");
    for rel in primitive_relations(params) {
        let _ = writeln!(out, "{rel}");
    }
    out
}

fn json(p: &Pipeline, target: Target) -> String {
    let (n, k) = (p.params.n(), p.params.k());
    let name = target.name().to_string();
    if let Some((m, scale, shifted)) = matrix_target(p, target) {
        pretty(&MatrixJson {
            n,
            k,
            target: name,
            scale: scale.into(),
            shifted,
            rows: matrix_rows(&m),
        })
    } else {
        match target {
            Target::Pf => pretty(&OperatorJson {
                n,
                k,
                target: name,
                operator: p.operator.to_string(),
                terms: p
                    .operator
                    .coeffs()
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(order, c)| OperatorTerm {
                        order,
                        coeff: c.to_string(),
                    })
                    .collect(),
            }),
            Target::QMatrices => pretty(&QSystemJson {
                n,
                k,
                target: name,
                integral: p.system.is_integral(),
                q: solve_order(&p.system)
                    .into_iter()
                    .map(|((i, alpha), m)| {
                        let offset = q_offset(&p.system, i, alpha);
                        QEntry {
                            i,
                            alpha,
                            offset,
                            diagonal: m
                                .diagonal(offset as isize)
                                .iter()
                                .map(|e| e.to_string())
                                .collect(),
                        }
                    })
                    .collect(),
                q0: matrix_rows(&p.system.q_matrix(0)),
            }),
            Target::Gw => pretty(&GwTableJson::from_table(&p.table)),
            _ => unreachable!("matrix targets handled above"),
        }
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn tex(p: &Pipeline, target: Target) -> String {
    if let Some((m, scale, _)) = matrix_target(p, target) {
        let prefix = if scale == "1/h" { "\\dfrac{1}{h}" } else { "" };
        return format!("{prefix}{}", latex::matrix(&m));
    }
    let mut out = String::new();
    match target {
        Target::Pf => {
            let _ = write!(
                out,
                "P^{{{},{}}} = {}",
                p.params.n(),
                p.params.k(),
                latex::operator(&p.operator)
            );
        }
        Target::QMatrices => {
            out.push_str("\\begin{align*}\n");
            for ((i, a), m) in solve_order(&p.system) {
                let off = q_offset(&p.system, i, a);
                let diag: Vec<String> = m.diagonal(off as isize).iter().map(latex::poly).collect();
                let _ = writeln!(
                    out,
                    " Q_{{{i}}}^{{{a}}} &= \\diag_{{{off}}}({}) \\\\",
                    diag.join(",")
                );
            }
            let _ = writeln!(out, " Q_0 &= {}", latex::matrix(&p.system.q_matrix(0)));
            out.push_str("\\end{align*}");
        }
        Target::Gw => {
            out.push_str("\\begin{align*}\n");
            for ((m, d), v) in p.table.entries() {
                let _ = writeln!(out, " L_{{{m}}}^{{{d}}} &= {v} \\\\");
            }
            out.push_str("\\end{align*}");
        }
        _ => unreachable!("matrix targets handled above"),
    }
    out
}
