//! Normalization of `Ω_PF` by the positive Birkhoff factor.
//!
//! `L_+ = Q_0 (I + h Q_1 + ... + h^{k-2} Q_{k-2})` with
//! `Q_0 = I + Σ_α q^α Q_0^α` and `Q_i = Σ_α q^α Q_i^α` for `i >= 1`, where each
//! `Q_i^α` is a constant `(i + α(N-k))`-diagonal matrix. Expanding the
//! differential equations for `L_+` in powers of `q` gives explicit identities
//! that determine every `Q_i^γ` from
//!
//! * `Q_{i+1}^γ` (same `γ`, larger `i`), and
//! * `Q_j^β` with `β < γ`,
//!
//! so the solver runs `γ = 1, 2, ...` and, inside each `γ`, `i = k-2, ..., 0`.
//! The normalized connection is then `(1/h) Q_0 ω Q_0^{-1}`.
//!
//! Two evaluation schemes are provided. [`Scheme::Displayed`] follows the
//! case split `γ = 1`, `γ = 2`, `γ >= 3` of the coefficient identities literally.
//! [`Scheme::Unified`] uses one formula for all `γ` with the conventions
//! `Q_0^0 = I` and `Q_j^0 = 0` for `j >= 1`. They must agree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use crate::exact::{rat, BigRat, QHPoly};
use crate::matrix::PolyMatrix;
use crate::picard_fuchs::{build_omega_pf, AdaptedFamily, FanoParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Unified,
    Displayed,
}

/// Order in which summands and commutators are evaluated. Exact arithmetic
/// makes the result independent of it; [`TermOrder::Reversed`] exists to
/// check exactly that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TermOrder {
    #[default]
    Forward,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub scheme: Scheme,
    pub order: TermOrder,
}

/// The constant matrices `Q_i^α`, `0 <= i <= k-2`, `α >= 1`,
/// `i + α(N-k) <= N-2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSystem {
    params: FanoParams,
    coeffs: BTreeMap<(usize, usize), PolyMatrix>,
}

impl QSystem {
    pub fn params(&self) -> FanoParams {
        self.params
    }

    /// `Q_i^α`, or `None` outside the index range (where it vanishes).
    pub fn get(&self, i: usize, alpha: usize) -> Option<&PolyMatrix> {
        self.coeffs.get(&(i, alpha))
    }

    /// `((i, α), Q_i^α)` ordered by `i`, then `α`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &PolyMatrix)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    /// `Q_i` as a polynomial matrix in `q` (for `i = 0` including `I`).
    pub fn q_matrix(&self, i: usize) -> PolyMatrix {
        let dim = self.params.dim();
        let mut out = if i == 0 {
            PolyMatrix::identity(dim)
        } else {
            PolyMatrix::zeros(dim)
        };
        for ((j, alpha), m) in &self.coeffs {
            if *j == i {
                out = &out + &m.map(|p| p.shift(*alpha as u32, 0));
            }
        }
        out
    }

    /// True when every `Q_i^α` has integer entries.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(PolyMatrix::is_integral)
    }
}

/// `R_{-1}, R_0, ..., R_{k-2}` recovered from an `Ω_PF`-shaped family.
struct PicardFuchsParts {
    omega: PolyMatrix,
    /// `r[l + 1] = R_l`.
    r: Vec<PolyMatrix>,
}

impl PicardFuchsParts {
    fn extract(family: &AdaptedFamily) -> Result<Self> {
        let dim = family.params().dim();
        let parts = family.decomposition()?;
        let shift = PolyMatrix::shift_down(dim);
        let mut raw = Vec::with_capacity(parts.thetas.len() + 1);
        raw.push(parts.omega.try_sub(&shift)?);
        raw.extend(parts.thetas);
        let mut r = Vec::with_capacity(raw.len());
        for (idx, m) in raw.iter().enumerate() {
            let l = idx as isize - 1;
            let mut constant = PolyMatrix::zeros(dim);
            for (row, col, e) in m.nonzero() {
                let unit = e
                    .as_monomial()
                    .filter(|(mono, _)| mono.q == 1 && mono.h == 0);
                let Some((_, c)) = unit else {
                    return Err(Error::UnsupportedFamily(format!(
                        "R_{l} entry ({}, {}) = {e} is not a constant multiple of q",
                        row + 1,
                        col + 1
                    )));
                };
                if col != dim - 1 {
                    return Err(Error::UnsupportedFamily(format!(
                        "R_{l} has an entry outside the last column at ({}, {})",
                        row + 1,
                        col + 1
                    )));
                }
                constant.set(row, col, QHPoly::constant(c.clone()));
            }
            r.push(constant);
        }
        Ok(PicardFuchsParts {
            omega: parts.omega,
            r,
        })
    }
}

struct Solver {
    dim: usize,
    /// `N - k`.
    index: usize,
    /// Number of `Q_i` with `i >= 0`, i.e. `k - 1`.
    count: usize,
    order: TermOrder,
    shift: PolyMatrix,
    zero: PolyMatrix,
    identity: PolyMatrix,
    r: Vec<PolyMatrix>,
    q: BTreeMap<(usize, usize), PolyMatrix>,
}

impl Solver {
    fn in_range(&self, i: usize, alpha: usize) -> bool {
        i < self.count && i + alpha * self.index < self.dim
    }

    /// `Q_i^α` with `Q_0^0 = I` and zero elsewhere out of range.
    fn q(&self, i: usize, alpha: usize) -> &PolyMatrix {
        if alpha == 0 {
            return if i == 0 { &self.identity } else { &self.zero };
        }
        self.q.get(&(i, alpha)).unwrap_or(&self.zero)
    }

    /// `R_l` for `l >= -1`, zero past `k - 2`.
    fn r(&self, l: isize) -> &PolyMatrix {
        self.r.get((l + 1) as usize).unwrap_or(&self.zero)
    }

    /// `[m, I_{-1}]`.
    fn comm(&self, m: &PolyMatrix) -> PolyMatrix {
        match self.order {
            TermOrder::Forward => &(m * &self.shift) - &(&self.shift * m),
            TermOrder::Reversed => -&(&(&self.shift * m) - &(m * &self.shift)),
        }
    }

    fn sum(&self, terms: Vec<PolyMatrix>) -> PolyMatrix {
        let fold = |acc: PolyMatrix, t: &PolyMatrix| &acc + t;
        match self.order {
            TermOrder::Forward => terms.iter().fold(self.zero.clone(), fold),
            TermOrder::Reversed => terms.iter().rev().fold(self.zero.clone(), fold),
        }
    }

    /// `[Q_1^{a+1}, I_{-1}] + Q_1^a R_{-1}`: the `q^a` coefficient of `[Q_1, ω]` per `dq`.
    fn q1_omega(&self, a: usize) -> PolyMatrix {
        &self.comm(self.q(1, a + 1)) + &(self.q(1, a) * self.r(-1))
    }

    fn unified(&self, i: usize, gamma: usize) -> PolyMatrix {
        let mut terms = Vec::new();
        if i == 0 {
            for b in 0..gamma {
                let a = gamma - 1 - b;
                let mut inner = self.q1_omega(a);
                if a == 0 {
                    inner = &inner + self.r(0);
                }
                terms.push(self.q(0, b) * &inner);
            }
        } else {
            if gamma == 1 {
                terms.push(self.r(i as isize).clone());
            }
            for j in 1..=i + 1 {
                terms.push(self.q(j, gamma - 1) * self.r(i as isize - j as isize));
            }
            terms.push(self.comm(self.q(i + 1, gamma)));
            for a in 0..gamma - 1 {
                terms.push(-&(&self.q1_omega(a) * self.q(i, gamma - 1 - a)));
            }
        }
        self.sum(terms)
    }

    fn displayed(&self, i: usize, gamma: usize) -> PolyMatrix {
        let mut terms = Vec::new();
        if i == 0 {
            let base = self.r(0) + &self.comm(self.q(1, 1));
            match gamma {
                1 => terms.push(base),
                2 => {
                    terms.push(self.q(0, 1) * &base);
                    terms.push(self.comm(self.q(1, 2)));
                    terms.push(self.q(1, 1) * self.r(-1));
                }
                _ => {
                    terms.push(self.comm(self.q(1, gamma)));
                    terms.push(self.q(1, gamma - 1) * self.r(-1));
                    terms.push(self.q(0, gamma - 1) * &base);
                    for alpha in 1..gamma - 1 {
                        let beta = gamma - 1 - alpha;
                        let inner =
                            &self.comm(self.q(1, beta + 1)) + &(self.q(1, beta) * self.r(-1));
                        terms.push(self.q(0, alpha) * &inner);
                    }
                }
            }
        } else {
            match gamma {
                1 => {
                    terms.push(self.r(i as isize).clone());
                    terms.push(self.comm(self.q(i + 1, 1)));
                }
                _ => {
                    for j in 1..=i + 1 {
                        terms.push(self.q(j, gamma - 1) * self.r(i as isize - j as isize));
                    }
                    terms.push(self.comm(self.q(i + 1, gamma)));
                    terms.push(-&(&self.comm(self.q(1, 1)) * self.q(i, gamma - 1)));
                    for alpha in 1..gamma.saturating_sub(1) {
                        let beta = gamma - 1 - alpha;
                        let left =
                            &self.comm(self.q(1, alpha + 1)) + &(self.q(1, alpha) * self.r(-1));
                        terms.push(-&(&left * self.q(i, beta)));
                    }
                }
            }
        }
        self.sum(terms)
    }
}

/// Solves for all `Q_i^α` of an `Ω_PF`-shaped family with default options.
pub fn solve_q_system(family: &AdaptedFamily) -> Result<QSystem> {
    solve_q_system_with(family, SolveOptions::default())
}

pub fn solve_q_system_with(family: &AdaptedFamily, options: SolveOptions) -> Result<QSystem> {
    let params = family.params();
    let parts = PicardFuchsParts::extract(family)?;
    let dim = params.dim();
    let mut solver = Solver {
        dim,
        index: params.index(),
        count: params.k() - 1,
        order: options.order,
        shift: PolyMatrix::shift_down(dim),
        zero: PolyMatrix::zeros(dim),
        identity: PolyMatrix::identity(dim),
        r: parts.r,
        q: BTreeMap::new(),
    };
    let gamma_max = (dim - 1) / solver.index;
    for gamma in 1..=gamma_max {
        for i in (0..solver.count).rev() {
            if !solver.in_range(i, gamma) {
                continue;
            }
            let rhs = match options.scheme {
                Scheme::Unified => solver.unified(i, gamma),
                Scheme::Displayed => solver.displayed(i, gamma),
            };
            let value = rhs.scale(&(BigRat::one() / rat(gamma as i64)));
            let band = i + gamma * solver.index;
            if !value.is_n_diagonal(band as isize)
                || !value.rows().flatten().all(QHPoly::is_constant)
            {
                return Err(Error::BandViolation {
                    i,
                    alpha: gamma,
                    expected: band,
                });
            }
            solver.q.insert((i, gamma), value);
        }
    }
    Ok(QSystem {
        params,
        coeffs: solver.q,
    })
}

/// `L_+ = Q_0 (I + h Q_1 + h^2 Q_2 + ...)`.
pub fn assemble_lplus(system: &QSystem) -> PolyMatrix {
    let p = system.params();
    let mut tail = PolyMatrix::identity(p.dim());
    for i in 1..p.k().saturating_sub(1) {
        tail = &tail + &system.q_matrix(i).map(|e| e.shift(0, i as i32));
    }
    &system.q_matrix(0) * &tail
}

/// `Ω̂ = (1/h) M dt`; `M` is independent of `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedConnection {
    params: FanoParams,
    m: PolyMatrix,
    shifted: bool,
}

impl NormalizedConnection {
    pub fn new(params: FanoParams, m: PolyMatrix, shifted: bool) -> Self {
        NormalizedConnection { params, m, shifted }
    }

    pub fn params(&self) -> FanoParams {
        self.params
    }

    /// `M = h Ω̂` (per `dt`).
    pub fn matrix(&self) -> &PolyMatrix {
        &self.m
    }

    /// True when `-((N-1)! q / h) I dt` has been added (only for `N - k = 1`).
    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    /// The matrix before the `N - k = 1` shift.
    pub fn unshifted_matrix(&self) -> PolyMatrix {
        if self.shifted {
            &self.m + &shift_term(self.params)
        } else {
            self.m.clone()
        }
    }

    /// This connection viewed as a family `(1/h) M dt`.
    pub fn family(&self) -> AdaptedFamily {
        AdaptedFamily::new(self.params, self.m.clone()).expect("dimension fixed by params")
    }

    pub fn is_inverse_h_linear(&self) -> bool {
        self.m.h_exponents().iter().all(|&j| j == 0)
    }
}

fn factorial(n: usize) -> BigRat {
    (1..=n as i64).fold(BigRat::one(), |acc, j| acc * rat(j))
}

/// `(N-1)! q I`.
fn shift_term(p: FanoParams) -> PolyMatrix {
    PolyMatrix::identity(p.dim()).scale_poly(&QHPoly::monomial(factorial(p.n() - 1), 1, 0))
}

/// `M = Q_0 ω Q_0^{-1}` with `ω = I_{-1} + q R_{-1}`.
pub fn normalized_connection(
    system: &QSystem,
    family: &AdaptedFamily,
) -> Result<NormalizedConnection> {
    let parts = PicardFuchsParts::extract(family)?;
    let q0 = system.q_matrix(0);
    let m = q0
        .try_mul(&parts.omega)?
        .try_mul(&q0.unipotent_inverse()?)?;
    Ok(NormalizedConnection::new(family.params(), m, false))
}

/// The full pipeline: `Ω_PF`, the `Q` system and the unshifted `Ω̂`.
pub fn normalize(p: FanoParams) -> Result<NormalizedConnection> {
    let family = build_omega_pf(p);
    let system = solve_q_system(&family)?;
    normalized_connection(&system, &family)
}

/// The restricted Dubrovin connection: `Ω̂` for `N - k >= 2`, and
/// `Ω̂ - ((N-1)! q / h) I dt` for `N - k = 1`.
pub fn dubrovin_connection(p: FanoParams) -> Result<NormalizedConnection> {
    Ok(dubrovin_from(normalize(p)?))
}

/// Applies the `N - k = 1` shift to an unshifted connection.
pub fn dubrovin_from(conn: NormalizedConnection) -> NormalizedConnection {
    let p = conn.params;
    if conn.shifted || p.index() != 1 {
        return conn;
    }
    let m = &conn.m - &shift_term(p);
    NormalizedConnection::new(p, m, true)
}

/// Checks `M = L_+ R L_+^{-1} + h L_+ (q d/dq)(L_+^{-1})`, the polynomial form of
/// `(1/h) M dt = L_+ Ω_PF L_+^{-1} + L_+ d(L_+^{-1})`.
pub fn verify_gauge(
    lplus: &PolyMatrix,
    family: &AdaptedFamily,
    conn: &NormalizedConnection,
) -> bool {
    let Ok(inv) = lplus.unipotent_inverse() else {
        return false;
    };
    let Ok(conj) = lplus.try_mul(family.r()).and_then(|m| m.try_mul(&inv)) else {
        return false;
    };
    let Ok(deriv) = lplus.try_mul(&inv.euler_derivative()) else {
        return false;
    };
    let rhs = &conj + &deriv.map(|p| p.shift(0, 1));
    rhs == conn.unshifted_matrix()
}
