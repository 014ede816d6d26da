//! Operators `Σ_j c_j(q, h) (h∂)^j` with coefficients on the left, where
//! `∂ = d/dt = q d/dq`. Multiplication uses `(h∂) a = a (h∂) + h q ∂a/∂q`.
//!
//! The reduced operator of an adapted family `Ω = (1/h) (r_{α,β}) dt` is
//! `P_{N-1}` from `P_0 = 1`, `P_{β+1} = (h∂) P_β - Σ_{α<=β} r_{α,β} P_α`.
//! Two adapted families have the same reduced operator exactly when an adapted
//! gauge transformation relates them, so this gives an independent check on
//! the Birkhoff normalization.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::exact::{rat, BigRat, Grading, QHPoly};
use crate::matrix::PolyMatrix;
use crate::picard_fuchs::AdaptedFamily;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    /// `coeffs[j]` multiplies `(h∂)^j`; no trailing zeros.
    coeffs: Vec<QHPoly>,
}

impl DiffOperator {
    pub fn new(mut coeffs: Vec<QHPoly>) -> Self {
        while coeffs.last().is_some_and(QHPoly::is_zero) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DiffOperator::from_poly(QHPoly::one())
    }

    pub fn from_poly(p: QHPoly) -> Self {
        DiffOperator::new(vec![p])
    }

    /// `h∂`.
    pub fn h_d() -> Self {
        DiffOperator::new(vec![QHPoly::zero(), QHPoly::one()])
    }

    pub fn coeffs(&self) -> &[QHPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> QHPoly {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// Order in `h∂`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(QHPoly::is_one)
    }

    pub fn add(&self, other: &DiffOperator) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        DiffOperator::new((0..len).map(|j| &self.coeff(j) + &other.coeff(j)).collect())
    }

    pub fn sub(&self, other: &DiffOperator) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        DiffOperator::new((0..len).map(|j| &self.coeff(j) - &other.coeff(j)).collect())
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        DiffOperator::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// `p ∘ self` for a polynomial `p`.
    pub fn left_mul_poly(&self, p: &QHPoly) -> Self {
        DiffOperator::new(self.coeffs.iter().map(|c| p * c).collect())
    }

    /// Normal-form product `self ∘ other`.
    pub fn mul(&self, other: &DiffOperator) -> Self {
        let mut out: Vec<QHPoly> = vec![QHPoly::zero(); self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                // (h∂)^i b = Σ_l C(i, l) (h q d/dq)^l(b) (h∂)^{i-l}
                let mut deriv = b.clone();
                let mut binom = BigRat::one();
                for l in 0..=i {
                    if deriv.is_zero() {
                        break;
                    }
                    let term = &(a * &deriv).scale(&binom);
                    out[i - l + j] += term;
                    deriv = deriv.euler_derivative().shift(0, 1);
                    binom = binom * rat((i - l) as i64) / rat(l as i64 + 1);
                }
            }
        }
        DiffOperator::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = DiffOperator::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, j: usize) -> fmt::Result {
    match j {
        0 => Ok(()),
        1 => f.write_str("(h∂)"),
        _ => write!(f, "(h∂)^{j}"),
    }
}

/// Highest order first, e.g. `(h∂)^4 - 27*q*h*(h∂)^2 - 6*q*h^2`.
impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, body) = match c.as_monomial() {
                Some((m, v)) => (v.is_negative(), QHPoly::monomial(v.abs(), m.q, m.h)),
                None => (false, c.clone()),
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let compound = body.len() > 1;
            if j == 0 {
                if compound {
                    write!(f, "({body})")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if body.is_one() {
                fmt_power(f, j)?;
            } else {
                if compound {
                    write!(f, "({body})*")?;
                } else {
                    write!(f, "{body}*")?;
                }
                fmt_power(f, j)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// One failed entry of an adapted-condition check. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub detail: String,
}

impl Violation {
    fn new(row0: usize, col0: usize, detail: String) -> Self {
        Violation {
            row: row0 + 1,
            col: col0 + 1,
            detail,
        }
    }
}

/// Outcome of the four adapted conditions:
/// (P) polynomial, (H) homogeneous, (I) initial value, (N) normalization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdaptedReport {
    pub polynomial: Vec<Violation>,
    pub homogeneous: Vec<Violation>,
    pub initial: Vec<Violation>,
    pub normalization: Vec<Violation>,
}

impl AdaptedReport {
    pub fn passed(&self) -> bool {
        self.polynomial.is_empty()
            && self.homogeneous.is_empty()
            && self.initial.is_empty()
            && self.normalization.is_empty()
    }

    /// `(label, violations)` for each condition, in P, H, I, N order.
    pub fn conditions(&self) -> [(&'static str, &[Violation]); 4] {
        [
            ("P", &self.polynomial),
            ("H", &self.homogeneous),
            ("I", &self.initial),
            ("N", &self.normalization),
        ]
    }
}

impl fmt::Display for AdaptedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (label, list) in self.conditions() {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            if list.is_empty() {
                write!(f, "({label}) ok")?;
            } else {
                write!(f, "({label}) {} violation(s)", list.len())?;
                if let Some(v) = list.first() {
                    write!(f, ", first at ({}, {}): {}", v.row, v.col, v.detail)?;
                }
            }
        }
        Ok(())
    }
}

/// Checks (P), (H), (I), (N) for `Ω = (1/h) R dt`.
pub fn adapted_check(family: &AdaptedFamily) -> AdaptedReport {
    let r = family.r();
    let grading = family.params().grading();
    let dim = r.dim();
    let mut report = AdaptedReport::default();
    for row in 0..dim {
        for col in 0..dim {
            let e = r.get(row, col);
            if !e.is_polynomial() {
                report.polynomial.push(Violation::new(
                    row,
                    col,
                    format!("negative power of h in {e}"),
                ));
            }
            // (1/h) R has n-diagonal of degree 2n, so r_{α,β} has degree 2(β - α + 1).
            let want = 2 * (col as i64 - row as i64 + 1);
            if !e.is_homogeneous_of(grading, want) {
                report.homogeneous.push(Violation::new(
                    row,
                    col,
                    format!("{e} is not homogeneous of degree {want}"),
                ));
            }
            let at0 = e.at_q_zero();
            let want0 = row == col + 1;
            if (want0 && !at0.is_one()) || (!want0 && !at0.is_zero()) {
                report
                    .initial
                    .push(Violation::new(row, col, format!("value at q=0 is {at0}")));
            }
            if row == col + 1 && !e.is_one() {
                report.normalization.push(Violation::new(
                    row,
                    col,
                    format!("(-1)-diagonal entry is {e}, expected 1"),
                ));
            }
        }
    }
    report
}

/// Checks (P), (H), (I) for a gauge transformation `U`: polynomial in `q`
/// and `h`, entry `(α, β)` homogeneous of degree `2(β - α)`, and `U(0) = I`.
pub fn gauge_check(u: &PolyMatrix, grading: Grading) -> AdaptedReport {
    let dim = u.dim();
    let mut report = AdaptedReport::default();
    for row in 0..dim {
        for col in 0..dim {
            let e = u.get(row, col);
            if !e.is_polynomial() {
                report.polynomial.push(Violation::new(
                    row,
                    col,
                    format!("negative power of h in {e}"),
                ));
            }
            let want = 2 * (col as i64 - row as i64);
            if !e.is_homogeneous_of(grading, want) {
                report.homogeneous.push(Violation::new(
                    row,
                    col,
                    format!("{e} is not homogeneous of degree {want}"),
                ));
            }
            let at0 = e.at_q_zero();
            if (row == col && !at0.is_one()) || (row != col && !at0.is_zero()) {
                report
                    .initial
                    .push(Violation::new(row, col, format!("value at q=0 is {at0}")));
            }
        }
    }
    report
}

/// The reduced operator `P_{N-1}` of an adapted family.
pub fn reduced_operator(family: &AdaptedFamily) -> Result<DiffOperator> {
    let report = adapted_check(family);
    if !report.passed() {
        return Err(Error::NotAdapted(report));
    }
    let r = family.r();
    let dim = r.dim();
    let hd = DiffOperator::h_d();
    let mut ops: Vec<DiffOperator> = Vec::with_capacity(dim + 1);
    ops.push(DiffOperator::one());
    for beta in 0..dim {
        let mut next = hd.mul(&ops[beta]);
        for (alpha, p_alpha) in ops.iter().enumerate().take(beta + 1) {
            let coeff = r.get(alpha, beta);
            if !coeff.is_zero() {
                next = next.sub(&p_alpha.left_mul_poly(coeff));
            }
        }
        ops.push(next);
    }
    Ok(ops.pop().expect("at least one operator"))
}

/// `U*Ω = U^{-1} dU + U^{-1} Ω U`, i.e. `R' = U^{-1} R U + h U^{-1} (q d/dq) U`.
pub fn gauge_transform(family: &AdaptedFamily, u: &PolyMatrix) -> Result<AdaptedFamily> {
    let u_inv = u.unipotent_inverse()?;
    let conj = u_inv.try_mul(family.r())?.try_mul(u)?;
    let deriv = u_inv.try_mul(&u.euler_derivative())?.map(|p| p.shift(0, 1));
    AdaptedFamily::new(family.params(), conj.try_add(&deriv)?)
}
