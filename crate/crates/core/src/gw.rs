//! Structure constants and three-point invariants from the Dubrovin matrix.
//!
//! Column `β = N-2-m` of `M` (0-based) encodes
//! `b ∘ b_{N-2-m} = b_{N-1-m} + Σ_d L_m^d q^d b_{N-1-m-d(N-k)}`, so `M` is the
//! matrix of quantum multiplication by `b` on the basis `b_0, ..., b_{N-2}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::birkhoff::NormalizedConnection;
use crate::exact::{rat, BigRat, QHPoly};
use crate::matrix::PolyMatrix;
use crate::picard_fuchs::FanoParams;
use crate::{Error, Result};

/// `GW_{dA}(b, b_i, b_j)` with `classes = [1, i, j]` (indices of `b_*`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwRecord {
    pub d: usize,
    pub classes: [usize; 3],
    pub value: BigRat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwTable {
    params: FanoParams,
    /// `(m, d) -> L_m^d` over the whole range `0 <= m <= (N-1) - (N-k)d`.
    l: BTreeMap<(usize, usize), BigRat>,
}

impl GwTable {
    pub fn params(&self) -> FanoParams {
        self.params
    }

    /// `L_m^d`; zero outside `0 <= m <= (N-1) - (N-k)d`.
    pub fn l(&self, m: usize, d: usize) -> BigRat {
        self.l.get(&(m, d)).cloned().unwrap_or_else(BigRat::zero)
    }

    /// `((m, d), L_m^d)` ordered by `d`, then `m`.
    pub fn entries(&self) -> Vec<((usize, usize), &BigRat)> {
        let mut v: Vec<_> = self.l.iter().map(|(k, v)| (*k, v)).collect();
        v.sort_by_key(|((m, d), _)| (*d, *m));
        v
    }

    pub fn max_degree(&self) -> usize {
        (self.params.n() - 1) / self.params.index()
    }

    /// Whether every `k L_m^d` is an integer.
    pub fn is_integral(&self) -> bool {
        let k = rat(self.params.k() as i64);
        self.l.values().all(|v| (v * &k).is_integer())
    }
}

/// Range of `m` for which `L_m^d` may be nonzero.
pub fn in_range(p: FanoParams, m: usize, d: usize) -> bool {
    d >= 1 && p.index() * d < p.n() && m <= (p.n() - 1) - p.index() * d
}

/// Checks the shape of `M` and reads off `L_m^d`.
pub fn structural_constants(conn: &NormalizedConnection) -> Result<GwTable> {
    let p = conn.params();
    let m = conn.matrix();
    check_shape(p, m)?;
    let mut l = BTreeMap::new();
    for d in 1..=(p.n() - 1) / p.index() {
        for mm in 0..=(p.n() - 1 - p.index() * d) {
            let beta = p.dim() - 1 - mm;
            let alpha = beta + 1 - d * p.index();
            let value = m
                .get(alpha, beta)
                .coeff(crate::exact::Monomial::new(d as u32, 0));
            l.insert((mm, d), value);
        }
    }
    Ok(GwTable { params: p, l })
}

/// Every entry `(α, β)` must be `1` on the subdiagonal, zero below it, and
/// otherwise `c q^d` with `d(N-k) = β - α + 1`.
fn check_shape(p: FanoParams, m: &PolyMatrix) -> Result<()> {
    if m.dim() != p.dim() {
        return Err(Error::DimMismatch {
            left: p.dim(),
            right: m.dim(),
        });
    }
    for row in 0..m.dim() {
        for col in 0..m.dim() {
            let e = m.get(row, col);
            if row == col + 1 {
                if !e.is_one() {
                    return Err(Error::malformed(
                        row,
                        col,
                        format!("subdiagonal entry {e} is not 1"),
                    ));
                }
                continue;
            }
            if e.is_zero() {
                continue;
            }
            if row > col + 1 {
                return Err(Error::malformed(
                    row,
                    col,
                    format!("nonzero entry {e} below the subdiagonal"),
                ));
            }
            let span = col + 1 - row;
            let ok = span % p.index() == 0
                && e.as_monomial()
                    .is_some_and(|(mono, _)| mono.h == 0 && mono.q as usize == span / p.index());
            if !ok {
                return Err(Error::malformed(
                    row,
                    col,
                    format!("entry {e} violates the degree bookkeeping"),
                ));
            }
        }
    }
    Ok(())
}

/// Every nonzero structure constant sits inside `0 <= m <= (N-1) - (N-k)d`.
pub fn vanishing_range_check(conn: &NormalizedConnection) -> bool {
    let p = conn.params();
    conn.matrix().nonzero().all(|(row, col, e)| {
        if row == col + 1 {
            return true;
        }
        let Some((mono, _)) = e.as_monomial() else {
            return false;
        };
        let d = mono.q as usize;
        let m = p.dim() - 1 - col;
        row <= col && in_range(p, m, d) && col + 1 - row == d * p.index()
    })
}

/// `GW_{dA}(b, b_{N-2-m}, b_{m-1+d(N-k)}) = k L_m^d` for every in-range `(m, d)`.
pub fn gw_invariants(table: &GwTable) -> Vec<GwRecord> {
    let p = table.params;
    let k = rat(p.k() as i64);
    table
        .entries()
        .into_iter()
        .map(|((m, d), v)| GwRecord {
            d,
            classes: [1, p.n() - 2 - m, m + d * p.index() - 1],
            value: v * &k,
        })
        .collect()
}

/// `J M = M^T J` with `J_{α,β} = k δ_{α+β, N-2}`: multiplication by `b` is
/// self-adjoint for the intersection pairing.
pub fn pairing_symmetry_check(conn: &NormalizedConnection) -> bool {
    let p = conn.params();
    let m = conn.matrix();
    let dim = p.dim();
    let j = pairing_matrix(p);
    let lhs = &j * m;
    let rhs = &m.transpose() * &j;
    dim == m.dim() && lhs == rhs
}

pub fn pairing_matrix(p: FanoParams) -> PolyMatrix {
    let dim = p.dim();
    let mut j = PolyMatrix::zeros(dim);
    for a in 0..dim {
        j.set(a, dim - 1 - a, QHPoly::from_int(p.k() as i64));
    }
    j
}

/// `M̃^{N-1} = k^k q M̃^{k-1}` where `M̃ = M`, plus `k! q I` when `N - k = 1`.
pub fn quantum_relation_check(conn: &NormalizedConnection) -> bool {
    let p = conn.params();
    let tilde = tilde_matrix(conn);
    let lhs = tilde.pow((p.n() - 1) as u32);
    let kk = rat((p.k() as i64).pow(p.k() as u32));
    let rhs = tilde
        .pow((p.k() - 1) as u32)
        .scale_poly(&QHPoly::monomial(kk, 1, 0));
    lhs == rhs
}

/// `M̃ = M + k! q I` for `N - k = 1`, else `M`.
pub fn tilde_matrix(conn: &NormalizedConnection) -> PolyMatrix {
    let p = conn.params();
    if p.index() == 1 && conn.is_shifted() {
        let fact = (1..=p.k() as i64).fold(BigRat::one(), |acc, j| acc * rat(j));
        conn.matrix() + &PolyMatrix::identity(p.dim()).scale_poly(&QHPoly::monomial(fact, 1, 0))
    } else {
        conn.matrix().clone()
    }
}

/// One term `coeff q^{q_power} b_{basis}` of a quantum product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProductTerm {
    pub basis: usize,
    pub q_power: u32,
    pub coeff: BigRat,
}

/// `b_i ∘ b_j` for all `i, j`, on the subring generated by `b`.
///
/// With `v_i = M^i e_0` (the class `b^{∘i}`) forming a unitriangular matrix
/// `V`, `b_i = Σ_l (V^{-1})_{l,i} b^{∘l}`, so `b_i ∘ b_j = Σ_l (V^{-1})_{l,i} M^l e_j`.
pub fn quantum_mult_table(
    conn: &NormalizedConnection,
) -> Result<BTreeMap<(usize, usize), Vec<ProductTerm>>> {
    let m = conn.matrix();
    let dim = m.dim();
    let powers: Vec<PolyMatrix> =
        core::iter::successors(Some(PolyMatrix::identity(dim)), |acc| Some(acc * m))
            .take(dim)
            .collect();
    let mut v = PolyMatrix::zeros(dim);
    for (i, pw) in powers.iter().enumerate() {
        for row in 0..dim {
            v.set(row, i, pw.get(row, 0).clone());
        }
    }
    let c = v.unipotent_inverse()?;
    let mut table = BTreeMap::new();
    for i in 0..dim {
        // p_i(M) = Σ_l C_{l,i} M^l
        let mut poly_m = PolyMatrix::zeros(dim);
        for (l, pw) in powers.iter().enumerate() {
            let coeff = c.get(l, i);
            if !coeff.is_zero() {
                poly_m = &poly_m + &pw.scale_poly(coeff);
            }
        }
        for j in 0..dim {
            let mut e = vec![QHPoly::zero(); dim];
            e[j] = QHPoly::one();
            let col = poly_m.mul_vec(&e)?;
            let mut terms = Vec::new();
            for (basis, entry) in col.iter().enumerate() {
                for (mono, coeff) in entry.terms() {
                    if mono.h != 0 {
                        return Err(Error::malformed(basis, j, "product involves h"));
                    }
                    terms.push(ProductTerm {
                        basis,
                        q_power: mono.q,
                        coeff: coeff.clone(),
                    });
                }
            }
            terms.sort();
            table.insert((i, j), terms);
        }
    }
    Ok(table)
}

/// The relations involving primitive classes `a, ã`, with numbers filled in.
pub fn primitive_relations(p: FanoParams) -> [String; 2] {
    let (n, k) = (p.n(), p.k());
    if k == 1 {
        // A hyperplane is a projective space: no primitive classes.
        return [String::from("P(M) = 0"), String::from("P(M) = 0")];
    }
    let kk = num_bigint::BigUint::from(k).pow(k as u32);
    let b = if p.index() == 1 {
        let fact: num_bigint::BigUint = (1..=k).map(num_bigint::BigUint::from).product();
        format!("(b + {fact}q)")
    } else {
        String::from("b")
    };
    let power = |e: usize| match e {
        0 => String::new(),
        1 => b.clone(),
        _ => format!("{b}^{e}"),
    };
    [
        format!("{b}∘a = 0"),
        format!(
            "a∘ã = (1/{k})(a,ã)({} - {kk}q{})",
            power(n - 2),
            power(k - 2)
        ),
    ]
}
