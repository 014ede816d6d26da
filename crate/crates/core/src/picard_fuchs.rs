//! The Picard-Fuchs operator of `M_N^k` and its companion connection.
//!
//! With `λ_i` defined by `k ∏_{j=1}^{k-1} (kX + j) = Σ λ_i X^i`, the operator is
//!
//! ```text
//! P^{N,k} = (h∂)^{N-1} - q Σ_{γ<k} λ_γ h^{k-1-γ} (h∂)^γ
//! ```
//!
//! and the connection in the basis `[1], [h∂], ..., [(h∂)^{N-2}]` of
//! `D / (P^{N,k})` is `Ω_PF = (1/h) R dt` with
//! `R = I_{-1} + q Σ_{i=-1}^{k-2} h^{i+1} R_i`, `R_i = diag_{N-k+i}(0, ..., 0, λ_{k-2-i})`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exact::{rat, BigRat, Grading, QHPoly};
use crate::matrix::PolyMatrix;
use crate::weyl::DiffOperator;
use crate::{Error, Result};

/// `(N, k)` with `N > k >= 1`; `N >= 5` unless built with
/// [`FanoParams::new_relaxed`], which admits `N >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FanoParams {
    n: usize,
    k: usize,
}

impl FanoParams {
    pub const MIN_N: i64 = 5;
    pub const MIN_N_RELAXED: i64 = 3;

    pub fn new(n: i64, k: i64) -> Result<Self> {
        Self::checked(n, k, Self::MIN_N)
    }

    pub fn new_relaxed(n: i64, k: i64) -> Result<Self> {
        Self::checked(n, k, Self::MIN_N_RELAXED)
    }

    fn checked(n: i64, k: i64, min_n: i64) -> Result<Self> {
        let fail = |reason: &str| Error::InvalidParams {
            n,
            k,
            reason: reason.to_string(),
        };
        if k < 1 {
            return Err(fail("degree k must be at least 1"));
        }
        if n <= k {
            return Err(fail("Fano condition requires N > k"));
        }
        if n < min_n {
            return Err(if min_n == Self::MIN_N {
                fail("N must be at least 5")
            } else {
                fail("N must be at least 3")
            });
        }
        Ok(FanoParams {
            n: n as usize,
            k: k as usize,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `N - 1`, the size of every matrix in the pipeline.
    pub fn dim(&self) -> usize {
        self.n - 1
    }

    /// `N - k`; `c_1 = (N - k) b`.
    pub fn index(&self) -> usize {
        self.n - self.k
    }

    pub fn grading(&self) -> Grading {
        Grading::new(self.n as i64, self.k as i64)
    }

    /// Every Fano pair with `n_min <= N <= n_max`, ordered by `(N, k)`.
    pub fn sweep(n_min: usize, n_max: usize) -> Vec<FanoParams> {
        let mut out = Vec::new();
        for n in n_min.max(3)..=n_max {
            for k in 1..n {
                out.push(FanoParams { n, k });
            }
        }
        out
    }
}

impl core::fmt::Display for FanoParams {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "M_{}^{}", self.n, self.k)
    }
}

/// `[λ_0, ..., λ_{k-1}]`, coefficients of `k ∏_{j=1}^{k-1} (kX + j)`.
pub fn lambda_coeffs(k: usize) -> Vec<BigRat> {
    assert!(k >= 1, "k must be positive");
    let kk = rat(k as i64);
    // Ascending coefficients, starting from the constant polynomial k.
    let mut coeffs = vec![kk.clone()];
    for j in 1..k {
        let mut next = vec![BigRat::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c * rat(j as i64);
            next[i + 1] += c * &kk;
        }
        coeffs = next;
    }
    coeffs
}

/// `P^{N,k}`, monic of order `N - 1` in `h∂`.
pub fn picard_fuchs_operator(p: FanoParams) -> DiffOperator {
    let lambda = lambda_coeffs(p.k);
    let mut coeffs = vec![QHPoly::zero(); p.n];
    coeffs[p.n - 1] = QHPoly::one();
    for (gamma, l) in lambda.iter().enumerate() {
        coeffs[gamma] = QHPoly::monomial(-l.clone(), 1, (p.k - 1 - gamma) as i32);
    }
    DiffOperator::new(coeffs)
}

/// A family of connection forms `Ω = (1/h) R(q, h) dt`, stored through `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedFamily {
    params: FanoParams,
    r: PolyMatrix,
}

/// The splitting `Ω = (1/h) ω + θ_0 + h θ_1 + ...` read off `R` by powers of `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `ω` as a matrix (coefficient of `h^0` in `R`).
    pub omega: PolyMatrix,
    /// `θ_i` as matrices (coefficient of `h^{i+1}` in `R`).
    pub thetas: Vec<PolyMatrix>,
}

impl AdaptedFamily {
    /// Wraps `R`; adaptedness is not checked here, see [`crate::weyl::adapted_check`].
    pub fn new(params: FanoParams, r: PolyMatrix) -> Result<Self> {
        if r.dim() != params.dim() {
            return Err(Error::DimMismatch {
                left: params.dim(),
                right: r.dim(),
            });
        }
        Ok(AdaptedFamily { params, r })
    }

    pub fn params(&self) -> FanoParams {
        self.params
    }

    pub fn r(&self) -> &PolyMatrix {
        &self.r
    }

    pub fn into_r(self) -> PolyMatrix {
        self.r
    }

    /// The connection matrix `(1/h) R` itself (one negative power of `h`).
    pub fn connection_matrix(&self) -> PolyMatrix {
        self.r.map(|p| p.shift(0, -1))
    }

    pub fn decomposition(&self) -> Result<Decomposition> {
        let hs = self.r.h_exponents();
        if let Some(&lo) = hs.first() {
            if lo < 0 {
                return Err(Error::UnsupportedFamily(
                    "R has a negative power of h".into(),
                ));
            }
        }
        let top = hs.last().copied().unwrap_or(0);
        Ok(Decomposition {
            omega: self.r.h_coefficient(0),
            thetas: (1..=top).map(|j| self.r.h_coefficient(j)).collect(),
        })
    }

    /// True when `h R` carries no `h`, i.e. `Ω` is `1/h`-linear.
    pub fn is_inverse_h_linear(&self) -> bool {
        self.r.h_exponents().iter().all(|&j| j == 0)
    }
}

/// `R_i = diag_{N-k+i}(0, ..., 0, λ_{k-2-i})` for `i = -1, ..., k-2`.
pub fn r_part(p: FanoParams, i: isize) -> PolyMatrix {
    let dim = p.dim();
    let lambda = lambda_coeffs(p.k);
    let offset = p.index() as isize + i;
    let len = dim - offset as usize;
    let mut values = vec![QHPoly::zero(); len];
    values[len - 1] = QHPoly::constant(lambda[(p.k as isize - 2 - i) as usize].clone());
    PolyMatrix::diag(dim, offset, &values).expect("offset within range for Fano params")
}

/// `Ω_PF` for `M_N^k`.
pub fn build_omega_pf(p: FanoParams) -> AdaptedFamily {
    let dim = p.dim();
    let mut r = PolyMatrix::shift_down(dim);
    for i in -1..=(p.k as isize - 2) {
        let weight = QHPoly::monomial(rat(1), 1, (i + 1) as i32);
        r = &r + &r_part(p, i).scale_poly(&weight);
    }
    AdaptedFamily { params: p, r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{adapted_check, reduced_operator};

    fn ints(v: &[i64]) -> Vec<BigRat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_coeffs(5), ints(&[120, 1250, 4375, 6250, 3125]));
        assert_eq!(lambda_coeffs(4), ints(&[24, 176, 384, 256]));
        assert_eq!(lambda_coeffs(3), ints(&[6, 27, 27]));
        assert_eq!(lambda_coeffs(1), ints(&[1]));
    }

    #[test]
    fn lambda_zero_is_factorial_and_top_is_k_to_the_k() {
        for k in 1..10usize {
            let l = lambda_coeffs(k);
            let fact: i64 = (1..=k as i64).product();
            assert_eq!(l[0], rat(fact));
            assert_eq!(l[k - 1], rat((k as i64).pow(k as u32)));
        }
    }

    #[test]
    fn params_guard() {
        assert!(FanoParams::new(7, 5).is_ok());
        assert!(FanoParams::new(5, 5).is_err());
        assert!(FanoParams::new(6, 0).is_err());
        assert!(FanoParams::new(4, 2).is_err());
        assert!(FanoParams::new_relaxed(4, 2).is_ok());
        assert!(FanoParams::new_relaxed(3, 1).is_ok());
        assert!(FanoParams::new_relaxed(2, 1).is_err());
    }

    #[test]
    fn omega_pf_last_column_m7_5() {
        let f = build_omega_pf(FanoParams::new(7, 5).unwrap());
        let conn = f.connection_matrix();
        let col: Vec<_> = (0..6).map(|r| conn.get(r, 5).to_string()).collect();
        assert_eq!(
            col,
            [
                "120*q*h^3",
                "1250*q*h^2",
                "4375*q*h",
                "6250*q",
                "3125*q*h^-1",
                "0"
            ]
        );
        for r in 0..5 {
            assert_eq!(conn.get(r + 1, r).to_string(), "h^-1");
        }
    }

    #[test]
    fn omega_pf_last_column_m5_4() {
        let f = build_omega_pf(FanoParams::new(5, 4).unwrap());
        let col: Vec<_> = (0..4)
            .map(|r| f.connection_matrix().get(r, 3).to_string())
            .collect();
        assert_eq!(col, ["24*q*h^2", "176*q*h", "384*q", "256*q*h^-1"]);
    }

    #[test]
    fn r_parts_m7_5() {
        let p = FanoParams::new(7, 5).unwrap();
        let d = |n, v: &[i64]| PolyMatrix::diag_ints(6, n, v).unwrap();
        assert_eq!(r_part(p, -1), d(1, &[0, 0, 0, 0, 3125]));
        assert_eq!(r_part(p, 0), d(2, &[0, 0, 0, 6250]));
        assert_eq!(r_part(p, 1), d(3, &[0, 0, 4375]));
        assert_eq!(r_part(p, 2), d(4, &[0, 1250]));
        assert_eq!(r_part(p, 3), d(5, &[120]));
    }

    #[test]
    fn hyperplane_case_is_already_inverse_h_linear() {
        for n in 5..9 {
            let p = FanoParams::new(n, 1).unwrap();
            let f = build_omega_pf(p);
            let dim = p.dim();
            let mut expected = PolyMatrix::shift_down(dim);
            expected.set(0, dim - 1, QHPoly::q());
            assert_eq!(f.r(), &expected);
            assert!(f.is_inverse_h_linear());
            assert!(adapted_check(&f).passed());
        }
    }

    #[test]
    fn operator_m7_5() {
        let op = picard_fuchs_operator(FanoParams::new(7, 5).unwrap());
        assert_eq!(
            op.to_string(),
            "(h∂)^6 - 3125*q*(h∂)^4 - 6250*q*h*(h∂)^3 - 4375*q*h^2*(h∂)^2 - 1250*q*h^3*(h∂) - 120*q*h^4"
        );
    }

    /// `k q h^{k-1} ∏ (k∂ + j)` expanded with `∂ = h^{-1}(h∂)` must match the λ form.
    #[test]
    fn operator_matches_factored_form() {
        for (n, k) in [(7i64, 5i64), (5, 4), (5, 3), (9, 2)] {
            let p = FanoParams::new(n, k).unwrap();
            let h_inv = QHPoly::monomial(rat(1), 0, -1);
            let hd = DiffOperator::h_d();
            let d = hd.mul(&DiffOperator::from_poly(h_inv));
            let mut prod = DiffOperator::from_poly(QHPoly::monomial(rat(k), 1, (k - 1) as i32));
            for j in (1..k).rev() {
                let factor = d
                    .scale(&rat(k))
                    .add(&DiffOperator::from_poly(QHPoly::from_int(j)));
                prod = prod.mul(&factor);
            }
            let expected = hd.pow((n - 1) as u32).sub(&prod);
            assert_eq!(picard_fuchs_operator(p), expected, "{p}");
        }
    }

    #[test]
    fn m5_3_at_h_one() {
        let op = picard_fuchs_operator(FanoParams::new(5, 3).unwrap());
        let at_one: Vec<_> = op
            .coeffs()
            .iter()
            .map(|c| c.at_h_one().to_string())
            .collect();
        // ∂^4 - 3q(3∂+2)(3∂+1) = ∂^4 - 27q∂^2 - 27q∂ - 6q
        assert_eq!(at_one, ["-6*q", "-27*q", "-27*q", "0", "1"]);
    }

    #[test]
    fn r_parts_single_entry() {
        for p in FanoParams::sweep(5, 10) {
            let lambda = lambda_coeffs(p.k());
            for i in -1..=(p.k() as isize - 2) {
                let m = r_part(p, i);
                let offset = p.index() as isize + i;
                assert!(m.is_n_diagonal(offset));
                let nz: Vec<_> = m.nonzero().collect();
                assert_eq!(nz.len(), 1);
                let (r, c, v) = nz[0];
                assert_eq!(c, p.dim() - 1);
                assert_eq!(r, p.dim() - 1 - offset as usize);
                assert_eq!(
                    v.as_constant().unwrap(),
                    lambda[(p.k() as isize - 2 - i) as usize]
                );
            }
        }
    }

    #[test]
    fn omega_pf_is_adapted_and_reduces_to_picard_fuchs() {
        for n in 5..=12 {
            for k in 1..n {
                let p = FanoParams::new(n, k).unwrap();
                let f = build_omega_pf(p);
                assert!(adapted_check(&f).passed(), "{p}");
                assert_eq!(
                    reduced_operator(&f).unwrap(),
                    picard_fuchs_operator(p),
                    "{p}"
                );
            }
        }
        for (n, k) in [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
            let p = FanoParams::new_relaxed(n, k).unwrap();
            assert_eq!(
                reduced_operator(&build_omega_pf(p)).unwrap(),
                picard_fuchs_operator(p)
            );
        }
    }

    #[test]
    fn decomposition_m7_5() {
        let p = FanoParams::new(7, 5).unwrap();
        let parts = build_omega_pf(p).decomposition().unwrap();
        let q = QHPoly::q();
        assert_eq!(
            parts.omega,
            &PolyMatrix::shift_down(6) + &r_part(p, -1).scale_poly(&q)
        );
        assert_eq!(parts.thetas.len(), 4);
        for (i, theta) in parts.thetas.iter().enumerate() {
            assert_eq!(theta, &r_part(p, i as isize).scale_poly(&q));
        }
    }
}
