//! The `verify` check list for one `(N, k)`.

use fano_qc_core::birkhoff::{
    assemble_lplus, dubrovin_from, normalized_connection, solve_q_system_with, verify_gauge,
};
use fano_qc_core::gw::{
    pairing_symmetry_check, quantum_mult_table, quantum_relation_check, structural_constants,
    vanishing_range_check,
};
use fano_qc_core::picard_fuchs::{build_omega_pf, picard_fuchs_operator};
use fano_qc_core::weyl::{adapted_check, reduced_operator};
use fano_qc_core::{AdaptedFamily, DiffOperator, FanoParams, SolveOptions};

use crate::json::{CheckJson, VerifyJson};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Informational checks never fail a run.
    pub informational: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            informational: false,
            detail: detail.into(),
        }
    }

    fn info(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            informational: true,
            ..Check::new(name, passed, detail)
        }
    }

    fn ok(name: &'static str) -> Self {
        Check::new(name, true, "")
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Check::new(name, false, format!("not run: {why}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub params: FanoParams,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn to_json(&self) -> VerifyJson {
        VerifyJson {
            n: self.params.n(),
            k: self.params.k(),
            passed: self.passed(),
            checks: self
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.to_string(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

fn adapted(name: &'static str, family: &AdaptedFamily) -> Check {
    let report = adapted_check(family);
    if report.passed() {
        Check::ok(name)
    } else {
        Check::new(name, false, report.to_string().trim_end().to_string())
    }
}

fn same_operator(name: &'static str, family: &AdaptedFamily, expected: &DiffOperator) -> Check {
    match reduced_operator(family) {
        Ok(op) if &op == expected => Check::ok(name),
        Ok(op) => Check::new(name, false, format!("got {op}")),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

pub fn run_checks(params: FanoParams) -> Report {
    run_checks_with(params, SolveOptions::default())
}

pub fn run_checks_with(params: FanoParams, options: SolveOptions) -> Report {
    let mut checks = Vec::new();
    let operator = picard_fuchs_operator(params);
    let pf = build_omega_pf(params);
    checks.push(adapted("omega-pf adapted", &pf));
    checks.push(same_operator("omega-pf reduced operator", &pf, &operator));

    const LATER: [&str; 10] = [
        "omega-hat adapted",
        "omega-hat reduced operator",
        "omega-hat 1/h-linear",
        "gauge identity",
        "matrix shape",
        "vanishing range",
        "pairing symmetry",
        "quantum relation",
        "product table",
        "integrality",
    ];
    let system = match solve_q_system_with(&pf, options) {
        Ok(s) => {
            checks.push(Check::ok("q-system"));
            s
        }
        Err(e) => {
            checks.push(Check::new("q-system", false, e.to_string()));
            checks.extend(LATER.iter().map(|n| Check::skipped(n, "q-system failed")));
            return Report { params, checks };
        }
    };
    let lplus = assemble_lplus(&system);
    let normalized = match normalized_connection(&system, &pf) {
        Ok(c) => c,
        Err(e) => {
            let why = e.to_string();
            checks.extend(LATER.iter().map(|n| Check::skipped(n, &why)));
            return Report { params, checks };
        }
    };
    let hat = normalized.family();
    checks.push(adapted("omega-hat adapted", &hat));
    checks.push(same_operator("omega-hat reduced operator", &hat, &operator));
    checks.push(Check::new(
        "omega-hat 1/h-linear",
        normalized.is_inverse_h_linear(),
        "",
    ));
    checks.push(Check::new(
        "gauge identity",
        verify_gauge(&lplus, &pf, &normalized),
        "",
    ));

    let dubrovin = dubrovin_from(normalized);
    let table = structural_constants(&dubrovin);
    checks.push(match &table {
        Ok(_) => Check::ok("matrix shape"),
        Err(e) => Check::new("matrix shape", false, e.to_string()),
    });
    checks.push(Check::new(
        "vanishing range",
        vanishing_range_check(&dubrovin),
        "",
    ));
    checks.push(Check::new(
        "pairing symmetry",
        pairing_symmetry_check(&dubrovin),
        "",
    ));
    checks.push(Check::new(
        "quantum relation",
        quantum_relation_check(&dubrovin),
        "",
    ));
    checks.push(match quantum_mult_table(&dubrovin) {
        Ok(t) => {
            let symmetric = t.iter().all(|(&(i, j), v)| t.get(&(j, i)) == Some(v));
            Check::new(
                "product table",
                symmetric,
                if symmetric { "" } else { "not commutative" },
            )
        }
        Err(e) => Check::new("product table", false, e.to_string()),
    });

    let q_int = system.is_integral();
    let l_int = table.as_ref().map(|t| t.is_integral()).unwrap_or(false);
    let detail = format!(
        "Q matrices {}; k*L {}",
        if q_int { "integral" } else { "non-integral" },
        if l_int { "integral" } else { "non-integral" }
    );
    checks.push(Check::info("integrality", q_int && l_int, detail));
    Report { params, checks }
}
