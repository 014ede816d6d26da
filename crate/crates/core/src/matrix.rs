//! Square matrices over [`QHPoly`].
//!
//! Storage is dense and row-major with 0-based indices. Products skip zero
//! entries, which keeps the banded matrices of the recursion cheap. The
//! `n`-diagonal of a matrix is the set of entries `(i, i + n)`; products of an
//! `n`-diagonal and an `m`-diagonal matrix are `(n + m)`-diagonal.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::exact::{BigRat, QHPoly};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<QHPoly>,
}

impl PolyMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        PolyMatrix {
            dim,
            entries: vec![QHPoly::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = PolyMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, QHPoly::one());
        }
        m
    }

    /// `diag_n(values)`: `values` on the superdiagonal at offset `n` when
    /// `n >= 0`, or on the subdiagonal `(i - n, i)` when `n < 0`.
    pub fn diag(dim: usize, offset: isize, values: &[QHPoly]) -> Result<Self> {
        let width = offset.unsigned_abs();
        if width > dim {
            return Err(Error::OffsetOutOfRange { dim, offset });
        }
        if values.len() != dim - width {
            return Err(Error::LengthMismatch {
                expected: dim - width,
                found: values.len(),
            });
        }
        let mut m = PolyMatrix::zeros(dim);
        for (i, v) in values.iter().enumerate() {
            let (r, c) = if offset >= 0 {
                (i, i + width)
            } else {
                (i + width, i)
            };
            m.set(r, c, v.clone());
        }
        Ok(m)
    }

    /// Like [`PolyMatrix::diag`] with integer constants.
    pub fn diag_ints(dim: usize, offset: isize, values: &[i64]) -> Result<Self> {
        let polys: Vec<QHPoly> = values.iter().map(|&v| QHPoly::from_int(v)).collect();
        PolyMatrix::diag(dim, offset, &polys)
    }

    /// `I_{-1}`: ones on the first subdiagonal.
    pub fn shift_down(dim: usize) -> Self {
        let ones = vec![QHPoly::one(); dim - 1];
        PolyMatrix::diag(dim, -1, &ones).expect("length matches by construction")
    }

    pub fn from_rows(rows: Vec<Vec<QHPoly>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimMismatch { left: 0, right: 1 });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(PolyMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &QHPoly {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: QHPoly) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[QHPoly]> + '_ {
        self.entries.chunks(self.dim)
    }

    /// `(row, col, entry)` for every nonzero entry, row-major.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &QHPoly)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(idx, p)| (idx / self.dim, idx % self.dim, p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(QHPoly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&QHPoly) -> QHPoly) -> Self {
        PolyMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, p: &QHPoly) -> Self {
        self.map(|e| e * p)
    }

    /// Entrywise `q d/dq`.
    pub fn euler_derivative(&self) -> Self {
        self.map(QHPoly::euler_derivative)
    }

    pub fn transpose(&self) -> Self {
        let mut t = PolyMatrix::zeros(self.dim);
        for (r, c, p) in self.nonzero() {
            t.set(c, r, p.clone());
        }
        t
    }

    fn check_dim(&self, other: &PolyMatrix) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(PolyMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(PolyMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = PolyMatrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * n + j] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &PolyMatrix) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PolyMatrix::identity(self.dim);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[QHPoly]) -> Result<Vec<QHPoly>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| {
                let mut acc = QHPoly::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Offsets `n = col - row` of all diagonals carrying a nonzero entry.
    pub fn band_offsets(&self) -> BTreeSet<isize> {
        self.nonzero()
            .map(|(r, c, _)| c as isize - r as isize)
            .collect()
    }

    /// True when every nonzero entry lies on the `n`-diagonal.
    pub fn is_n_diagonal(&self, n: isize) -> bool {
        self.nonzero().all(|(r, c, _)| c as isize - r as isize == n)
    }

    /// The entries `(i, i + n)` of the `n`-diagonal, top to bottom.
    pub fn diagonal(&self, n: isize) -> Vec<QHPoly> {
        let width = n.unsigned_abs();
        if width >= self.dim {
            return Vec::new();
        }
        (0..self.dim - width)
            .map(|i| {
                if n >= 0 {
                    self.get(i, i + width).clone()
                } else {
                    self.get(i + width, i).clone()
                }
            })
            .collect()
    }

    /// Entrywise substitution `q = 0`.
    pub fn at_q_zero(&self) -> Self {
        self.map(QHPoly::at_q_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(QHPoly::is_polynomial)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(QHPoly::is_integral)
    }

    /// The matrix of coefficients of `h^j`.
    pub fn h_coefficient(&self, j: i32) -> Self {
        self.map(|p| p.h_coefficient(j))
    }

    /// Distinct powers of `h` occurring in any entry, ascending.
    pub fn h_exponents(&self) -> Vec<i32> {
        let set: BTreeSet<i32> = self.entries.iter().flat_map(|p| p.h_exponents()).collect();
        set.into_iter().collect()
    }

    /// Entries that keep `A` from being `I + (strictly upper triangular)`.
    fn unipotent_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for r in 0..self.dim {
            for c in 0..=r {
                let e = self.get(r, c);
                let ok = if r == c { e.is_one() } else { e.is_zero() };
                if !ok {
                    bad.push((r, c));
                }
            }
        }
        bad
    }

    pub fn is_unipotent(&self) -> bool {
        self.unipotent_violations().is_empty()
    }

    /// Exact inverse of `I + U` with `U` strictly upper triangular, by the
    /// finite series `I - U + U^2 - ...` (`U^dim = 0`).
    pub fn unipotent_inverse(&self) -> Result<Self> {
        let bad = self.unipotent_violations();
        if !bad.is_empty() {
            return Err(Error::not_unipotent(bad));
        }
        let id = PolyMatrix::identity(self.dim);
        let nil = self - &id;
        let mut out = id.clone();
        let mut power = id;
        for k in 1..self.dim {
            power = &power * &nil;
            if power.is_zero() {
                break;
            }
            out = if k % 2 == 1 {
                &out - &power
            } else {
                &out + &power
            };
        }
        Ok(out)
    }
}

impl<'a> Add<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_add(rhs).expect("matrix dimensions differ")
    }
}

impl<'a> Sub<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_sub(rhs).expect("matrix dimensions differ")
    }
}

impl<'a> Mul<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_mul(rhs).expect("matrix dimensions differ")
    }
}

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|p| -p)
    }
}

/// One row per line, `[a, b, ...]`, entries in canonical polynomial form.
impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str("[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for PolyMatrix {
    type Err = Error;

    /// Inverse of the `Display` form; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let inner = line
                .strip_prefix('[')
                .and_then(|l| l.strip_suffix(']'))
                .ok_or_else(|| {
                    Error::Parse(crate::exact::ParseError {
                        input: line.into(),
                        reason: "matrix row must be wrapped in [ ]".into(),
                    })
                })?;
            let row = inner
                .split(',')
                .map(|t| t.parse::<QHPoly>())
                .collect::<core::result::Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        PolyMatrix::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ints(dim: usize, n: isize, v: &[i64]) -> PolyMatrix {
        PolyMatrix::diag_ints(dim, n, v).unwrap()
    }

    /// Plain `i64` matrix product, the oracle for small constant cases.
    fn brute_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    out[i][j] += a[i][l] * b[l][j];
                }
            }
        }
        out
    }

    fn to_ints(m: &PolyMatrix) -> Vec<Vec<i64>> {
        m.rows()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        let c = p.as_constant().expect("constant entry");
                        i64::try_from(c.to_integer()).unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn shift_down_is_the_unit_subdiagonal() {
        let m = ints(6, -1, &[1, 1, 1, 1, 1]);
        assert_eq!(m, PolyMatrix::shift_down(6));
        for i in 0..5 {
            assert!(m.get(i + 1, i).is_one());
        }
        assert_eq!(m.band_offsets().into_iter().collect::<Vec<_>>(), vec![-1]);
    }

    #[test]
    fn top_right_corner() {
        let m = ints(6, 5, &[120]);
        assert_eq!(m.get(0, 5), &QHPoly::from_int(120));
        assert_eq!(m.nonzero().count(), 1);
    }

    #[test]
    fn diag_length_mismatch() {
        let err = PolyMatrix::diag_ints(4, 0, &[1, 2, 3]).unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                expected: 4,
                found: 3
            }
        );
        assert!(matches!(
            PolyMatrix::diag_ints(4, 5, &[]),
            Err(Error::OffsetOutOfRange { .. })
        ));
    }

    #[test]
    fn commutator_with_itself_vanishes() {
        let a = &ints(5, 2, &[1, 2, 3]) + &ints(5, -1, &[4, 5, 6, 7]);
        assert!(a.commutator(&a).unwrap().is_zero());
    }

    #[test]
    fn band_offsets_add() {
        let p = &ints(6, 3, &[1, 1, 1]) * &ints(6, 2, &[1, 1, 1, 1]);
        assert!(p.is_n_diagonal(5));
        assert!(!p.is_zero());
    }

    #[test]
    fn commutator_of_corner_with_shift() {
        let q31 = ints(6, 5, &[120]);
        let shift = PolyMatrix::shift_down(6);
        let expected = brute_mul(&to_ints(&q31), &to_ints(&shift));
        let back = brute_mul(&to_ints(&shift), &to_ints(&q31));
        let brute: Vec<Vec<i64>> = expected
            .iter()
            .zip(&back)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a - b).collect())
            .collect();
        let got = q31.commutator(&shift).unwrap();
        assert_eq!(to_ints(&got), brute);
        assert_eq!(got, ints(6, 4, &[120, -120]));
        // Q_2^1 = R_2 + [Q_3^1, I_{-1}] with R_2 = diag_4(0, 1250).
        assert_eq!(&ints(6, 4, &[0, 1250]) + &got, ints(6, 4, &[120, 1130]));
    }

    #[test]
    fn dim_mismatch() {
        let a = PolyMatrix::identity(3);
        let b = PolyMatrix::identity(4);
        assert_eq!(a.try_mul(&b), Err(Error::DimMismatch { left: 3, right: 4 }));
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn inverse_of_identity() {
        let id = PolyMatrix::identity(5);
        assert_eq!(id.unipotent_inverse().unwrap(), id);
    }

    #[test]
    fn inverse_of_q_shift() {
        let q = QHPoly::q();
        let upper =
            PolyMatrix::diag(4, 1, &[q.clone(), q.scale(&rat(2)), q.scale(&rat(3))]).unwrap();
        let a = &PolyMatrix::identity(4) + &upper;
        let inv = a.unipotent_inverse().unwrap();
        assert_eq!(&a * &inv, PolyMatrix::identity(4));
        assert_eq!(inv.get(0, 3), &"-6*q^3".parse::<QHPoly>().unwrap());
        assert_eq!(inv.get(0, 2), &"2*q^2".parse::<QHPoly>().unwrap());
    }

    #[test]
    fn non_unipotent_rejected() {
        let mut a = PolyMatrix::identity(3);
        a.set(1, 1, QHPoly::from_int(2));
        assert!(matches!(a.unipotent_inverse(), Err(Error::NotUnipotent(_))));
        let mut b = PolyMatrix::identity(3);
        b.set(2, 0, QHPoly::q());
        assert!(matches!(b.unipotent_inverse(), Err(Error::NotUnipotent(_))));
    }

    #[test]
    fn text_round_trip() {
        let m = &ints(4, 1, &[24, 128, 232]) + &PolyMatrix::identity(4);
        let text = m.to_string();
        assert_eq!(text.lines().next(), Some("[1, 24, 0, 0]"));
        assert_eq!(text.parse::<PolyMatrix>().unwrap(), m);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn banded(dim: usize, offset: isize) -> impl Strategy<Value = PolyMatrix> {
            let len = dim - offset.unsigned_abs();
            prop::collection::vec(-9i64..10, len)
                .prop_map(move |v| PolyMatrix::diag_ints(dim, offset, &v).unwrap())
        }

        fn banded_pair() -> impl Strategy<Value = (PolyMatrix, PolyMatrix, isize, isize)> {
            (3usize..=10)
                .prop_flat_map(|dim| {
                    let d = dim as isize;
                    (Just(dim), -(d - 1)..d, -(d - 1)..d)
                })
                .prop_flat_map(|(dim, n, m)| (banded(dim, n), banded(dim, m), Just(n), Just(m)))
        }

        fn unipotent() -> impl Strategy<Value = PolyMatrix> {
            (2usize..=7).prop_flat_map(|dim| {
                prop::collection::vec((-5i64..6, 0u32..3, 0i32..3), dim * dim).prop_map(
                    move |cells| {
                        let mut m = PolyMatrix::identity(dim);
                        for (idx, (c, q, h)) in cells.into_iter().enumerate() {
                            let (r, col) = (idx / dim, idx % dim);
                            if col > r {
                                m.set(r, col, QHPoly::monomial(rat(c), q, h));
                            }
                        }
                        m
                    },
                )
            })
        }

        proptest! {
            #[test]
            fn product_band_is_sum_of_bands((a, b, n, m) in banded_pair()) {
                let p = &a * &b;
                prop_assert!(p.is_n_diagonal(n + m));
            }

            #[test]
            fn unipotent_inverse_is_two_sided(a in unipotent()) {
                let inv = a.unipotent_inverse().unwrap();
                let id = PolyMatrix::identity(a.dim());
                prop_assert_eq!(&a * &inv, id.clone());
                prop_assert_eq!(&inv * &a, id);
            }
        }
    }
}
