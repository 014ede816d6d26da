//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fano_qc::{render, Format, Target};
use fano_qc_core::birkhoff::verify_gauge;
use fano_qc_core::exact::rat;
use fano_qc_core::gw::{
    pairing_symmetry_check, quantum_relation_check, structural_constants, vanishing_range_check,
};
use fano_qc_core::weyl::{adapted_check, reduced_operator};
use fano_qc_core::{FanoParams, Pipeline, Scheme, SolveOptions, TermOrder};

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn params(n: i64, k: i64) -> FanoParams {
    FanoParams::new(n, k).expect("valid parameters")
}

fn run(p: FanoParams) -> Result<Pipeline, String> {
    Pipeline::run(p).map_err(|e| format!("{p}: {e}"))
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn compare_golden(p: &Pipeline, cases: &[(Target, &str)]) -> Outcome {
    for &(target, file) in cases {
        let got = render(p, target, Format::Table);
        if got != golden(file) {
            return Err(format!("{} differs from {file}:\n{got}", target.name()));
        }
    }
    Ok(())
}

fn m5_3_constants() -> Outcome {
    let t = run(params(5, 3))?.table;
    let want = [((0, 1), 6), ((1, 1), 15), ((2, 1), 6), ((0, 2), 36)];
    for ((m, d), v) in want {
        if t.l(m, d) != rat(v) {
            return Err(format!("L_{m}^{d} = {}, expected {v}", t.l(m, d)));
        }
    }
    if t.entries().len() != want.len() {
        return Err(format!(
            "{} structure constants, expected 4",
            t.entries().len()
        ));
    }
    Ok(())
}

fn m7_5_golden() -> Outcome {
    let p = run(params(7, 5))?;
    compare_golden(
        &p,
        &[
            (Target::OmegaPf, "m7_5_omega_pf.txt"),
            (Target::QMatrices, "m7_5_q_matrices.txt"),
            (Target::Lplus, "m7_5_lplus.txt"),
            (Target::OmegaHat, "m7_5_omega_hat.txt"),
        ],
    )
}

fn m5_4_golden() -> Outcome {
    let p = run(params(5, 4))?;
    compare_golden(
        &p,
        &[
            (Target::QMatrices, "m5_4_q_matrices.txt"),
            (Target::Lplus, "m5_4_lplus.txt"),
            (Target::OmegaHat, "m5_4_omega_hat.txt"),
            (Target::Dubrovin, "m5_4_dubrovin.txt"),
        ],
    )
}

fn oracle_sweep() -> Outcome {
    for p in FanoParams::sweep(5, 12) {
        let pipeline = run(p)?;
        let got =
            reduced_operator(&pipeline.normalized.family()).map_err(|e| format!("{p}: {e}"))?;
        if got != pipeline.operator {
            return Err(format!("{p}: reduced operator {got}"));
        }
    }
    Ok(())
}

fn property_sweep() -> Outcome {
    for p in FanoParams::sweep(5, 12) {
        let pipeline = run(p)?;
        let fail = |what: &str| Err(format!("{p}: {what}"));
        let pf = adapted_check(&pipeline.omega_pf);
        if !pf.passed() {
            return fail(&format!("omega-pf not adapted: {pf}"));
        }
        let hat = adapted_check(&pipeline.normalized.family());
        if !hat.passed() {
            return fail(&format!("omega-hat not adapted: {hat}"));
        }
        if !verify_gauge(&pipeline.lplus, &pipeline.omega_pf, &pipeline.normalized) {
            return fail("gauge identity");
        }
        if !pairing_symmetry_check(&pipeline.dubrovin) {
            return fail("pairing symmetry");
        }
        if !quantum_relation_check(&pipeline.dubrovin) {
            return fail("quantum relation");
        }
        if let Err(e) = structural_constants(&pipeline.dubrovin) {
            return fail(&format!("homogeneity: {e}"));
        }
        if !vanishing_range_check(&pipeline.dubrovin) {
            return fail("vanishing range");
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let variants = [
        SolveOptions::default(),
        SolveOptions::default(),
        SolveOptions {
            scheme: Scheme::Unified,
            order: TermOrder::Reversed,
        },
        SolveOptions {
            scheme: Scheme::Displayed,
            order: TermOrder::Forward,
        },
        SolveOptions {
            scheme: Scheme::Displayed,
            order: TermOrder::Reversed,
        },
    ];
    for (n, k) in [(7, 5), (5, 4), (6, 2), (9, 7)] {
        let p = params(n, k);
        let mut outputs = Vec::new();
        for options in variants {
            let pipeline = Pipeline::run_with(p, options).map_err(|e| format!("{p}: {e}"))?;
            let mut bytes = render(&pipeline, Target::OmegaHat, Format::Table).into_bytes();
            bytes.extend(render(&pipeline, Target::OmegaHat, Format::Json).into_bytes());
            outputs.push(bytes);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{p}: omega-hat output differs between runs"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        (
            "M_5^3 structure constants",
            Duration::from_secs(1),
            m5_3_constants,
        ),
        ("M_7^5 golden matrices", Duration::from_secs(1), m7_5_golden),
        ("M_5^4 golden matrices", Duration::from_secs(1), m5_4_golden),
        (
            "reduced-operator sweep 5 <= N <= 12",
            Duration::from_secs(30),
            oracle_sweep,
        ),
        (
            "property sweep 5 <= N <= 12",
            Duration::from_secs(60),
            property_sweep,
        ),
        (
            "determinism of omega-hat",
            Duration::from_secs(60),
            determinism,
        ),
    ];
    let mut failed = 0;
    for (idx, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= limit {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("PASS  {}. {name} ({elapsed:.2?})", idx + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name} ({elapsed:.2?}): {why}", idx + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
