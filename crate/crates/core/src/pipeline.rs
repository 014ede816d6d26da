//! Every intermediate of one `(N, k)` run, computed once.

use crate::birkhoff::{
    assemble_lplus, dubrovin_from, normalized_connection, solve_q_system_with,
    NormalizedConnection, QSystem, SolveOptions,
};
use crate::gw::{structural_constants, GwTable};
use crate::matrix::PolyMatrix;
use crate::picard_fuchs::{build_omega_pf, picard_fuchs_operator, AdaptedFamily, FanoParams};
use crate::weyl::DiffOperator;
use crate::Result;

#[derive(Debug, Clone)]
pub struct Pipeline {
    pub params: FanoParams,
    pub operator: DiffOperator,
    pub omega_pf: AdaptedFamily,
    pub system: QSystem,
    pub lplus: PolyMatrix,
    /// `Ω̂` before any shift.
    pub normalized: NormalizedConnection,
    /// `Ω̂`, shifted when `N - k = 1`.
    pub dubrovin: NormalizedConnection,
    pub table: GwTable,
}

impl Pipeline {
    pub fn run(params: FanoParams) -> Result<Self> {
        Pipeline::run_with(params, SolveOptions::default())
    }

    pub fn run_with(params: FanoParams, options: SolveOptions) -> Result<Self> {
        let omega_pf = build_omega_pf(params);
        let system = solve_q_system_with(&omega_pf, options)?;
        let lplus = assemble_lplus(&system);
        let normalized = normalized_connection(&system, &omega_pf)?;
        let dubrovin = dubrovin_from(normalized.clone());
        let table = structural_constants(&dubrovin)?;
        Ok(Pipeline {
            params,
            operator: picard_fuchs_operator(params),
            omega_pf,
            system,
            lplus,
            normalized,
            dubrovin,
            table,
        })
    }
}
