//! Exact arithmetic over `Z/p`, `Z/p^2`, vectors and matrices over `Z/p`,
//! Gaussian binomials and big counts.
//!
//! Residues are always stored canonically in `[0, modulus)`, so derived
//! equality and hashing are structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn reduce(value: i64, modulus: u64) -> u64 {
    value.rem_euclid(modulus as i64) as u64
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Largest prime accepted as a group parameter.
pub const MAX_PRIME: u64 = 1_000_000;

/// Validates that `p` is an odd prime below [`MAX_PRIME`].
pub fn check_odd_prime(p: u64) -> Result<u32> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    if p >= MAX_PRIME {
        return Err(Error::Domain(format!(
            "{p} exceeds the supported bound {MAX_PRIME}"
        )));
    }
    Ok(p as u32)
}

/// An element of `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpScalar {
    value: u32,
    p: u32,
}

impl FpScalar {
    pub fn new(value: i64, p: u32) -> Self {
        FpScalar {
            value: reduce(value, p as u64) as u32,
            p,
        }
    }

    pub fn zero(p: u32) -> Self {
        FpScalar { value: 0, p }
    }

    pub fn one(p: u32) -> Self {
        FpScalar { value: 1, p }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let p = self.p as u64;
        let mut base = self.value as u64;
        let mut acc = 1 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        FpScalar {
            value: acc as u32,
            p: self.p,
        }
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(self) -> Result<Self> {
        fp_inv(self)
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FpScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.value + rhs.value;
        FpScalar {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn neg(self) -> Self {
        FpScalar {
            value: if self.value == 0 {
                0
            } else {
                self.p - self.value
            },
            p: self.p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar {
            value: ((self.value as u64 * rhs.value as u64) % self.p as u64) as u32,
            p: self.p,
        }
    }
}

/// Inverse of a non-zero residue.
pub fn fp_inv(x: FpScalar) -> Result<FpScalar> {
    if x.is_zero() {
        return Err(Error::Domain(format!("0 has no inverse mod {}", x.p)));
    }
    // Extended Euclid on (x, p).
    let (mut r0, mut r1) = (x.p as i64, x.value as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok(FpScalar::new(t0, x.p))
}

/// The inverse of 2 modulo an odd prime, `(p + 1) / 2`.
pub fn half(p: u32) -> FpScalar {
    FpScalar {
        value: p.div_ceil(2),
        p,
    }
}

/// An element of `Z/p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zp2Scalar {
    value: u64,
    p: u32,
}

impl Zp2Scalar {
    pub fn new(value: i64, p: u32) -> Self {
        let m = p as u64 * p as u64;
        Zp2Scalar {
            value: reduce(value, m),
            p,
        }
    }

    pub fn zero(p: u32) -> Self {
        Zp2Scalar { value: 0, p }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    /// The underlying prime `p` (the modulus is `p^2`).
    #[inline]
    pub fn prime(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p as u64 * self.p as u64
    }

    /// Reduction modulo `p`.
    #[inline]
    pub fn reduce(self) -> FpScalar {
        FpScalar {
            value: (self.value % self.p as u64) as u32,
            p: self.p,
        }
    }

    /// The inclusion `i21: Z/p -> Z/p^2`, `a |-> p a`.
    #[inline]
    pub fn embed(x: FpScalar) -> Self {
        Zp2Scalar {
            value: x.value as u64 * x.p as u64,
            p: x.p,
        }
    }

    /// For a multiple of `p`, the residue `value / p`.
    pub fn divide_by_p(self) -> Option<FpScalar> {
        self.value.is_multiple_of(self.p as u64).then(|| FpScalar {
            value: (self.value / self.p as u64) as u32,
            p: self.p,
        })
    }

    pub fn is_unit(self) -> bool {
        !self.value.is_multiple_of(self.p as u64)
    }
}

impl fmt::Display for Zp2Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Zp2Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

impl Add for Zp2Scalar {
    type Output = Zp2Scalar;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Zp2Scalar {
            value: (self.value + rhs.value) % self.modulus(),
            p: self.p,
        }
    }
}

impl Neg for Zp2Scalar {
    type Output = Zp2Scalar;
    fn neg(self) -> Self {
        let m = self.modulus();
        Zp2Scalar {
            value: (m - self.value) % m,
            p: self.p,
        }
    }
}

impl Sub for Zp2Scalar {
    type Output = Zp2Scalar;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Zp2Scalar {
    type Output = Zp2Scalar;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let m = self.modulus() as u128;
        Zp2Scalar {
            value: (self.value as u128 * rhs.value as u128 % m) as u64,
            p: self.p,
        }
    }
}

/// A vector over `F_p`; length zero is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    p: u32,
    entries: Vec<u32>,
}

impl FpVector {
    pub fn new<I: IntoIterator<Item = i64>>(p: u32, entries: I) -> Self {
        FpVector {
            p,
            entries: entries
                .into_iter()
                .map(|v| reduce(v, p as u64) as u32)
                .collect(),
        }
    }

    /// Builds from residues already in `[0, p)`.
    pub(crate) fn from_raw(p: u32, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&v| v < p));
        FpVector { p, entries }
    }

    pub fn zeros(p: u32, len: usize) -> Self {
        FpVector {
            p,
            entries: vec![0; len],
        }
    }

    /// The standard basis vector `e_i` (zero-based index).
    pub fn unit(p: u32, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(p, len);
        v.entries[i] = 1;
        v
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> FpScalar {
        FpScalar {
            value: self.entries[i],
            p: self.p,
        }
    }

    pub fn set(&mut self, i: usize, x: FpScalar) {
        debug_assert_eq!(x.p, self.p);
        self.entries[i] = x.value;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = FpScalar> + '_ {
        self.entries
            .iter()
            .map(move |&value| FpScalar { value, p: self.p })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn check_len(&self, other: &FpVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// Standard dot product `sum u_i w_i`; the empty sum is zero.
    pub fn dot(&self, other: &FpVector) -> Result<FpScalar> {
        self.check_len(other)?;
        Ok(FpScalar::new(
            dot_raw(&self.entries, &other.entries, self.p) as i64,
            self.p,
        ))
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.check_len(other)?;
        Ok(FpVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
        })
    }

    pub fn neg(&self) -> FpVector {
        FpVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .map(|&a| if a == 0 { 0 } else { self.p - a })
                .collect(),
        }
    }

    pub fn scale(&self, c: FpScalar) -> FpVector {
        FpVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .map(|&a| ((a as u64 * c.value as u64) % self.p as u64) as u32)
                .collect(),
        }
    }

    /// Concatenation `(self; other)`.
    pub fn concat(&self, other: &FpVector) -> FpVector {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        FpVector { p: self.p, entries }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> FpVector {
        FpVector {
            p: self.p,
            entries: self.entries[range].to_vec(),
        }
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.entries, ",")
    }
}

impl Serialize for FpVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

pub(crate) fn write_joined(f: &mut fmt::Formatter<'_>, xs: &[u32], sep: &str) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

#[inline]
pub(crate) fn dot_raw(a: &[u32], b: &[u32], p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        acc = (acc + x as u64 * y as u64) % p;
    }
    acc as u32
}

/// A dense row-major matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        Self::scalar(FpScalar::one(p), n)
    }

    /// `c * Id_n`.
    pub fn scalar(c: FpScalar, n: usize) -> Self {
        let mut m = Self::zeros(c.p, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.value;
        }
        m
    }

    /// Row-major entries, reduced mod `p`.
    pub fn from_row_major(p: u32, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            data: entries
                .iter()
                .map(|&v| reduce(v, p as u64) as u32)
                .collect(),
        })
    }

    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(p, rows.len(), cols, &flat)
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(p: u32, rows: usize, columns: &[FpVector]) -> Result<Self> {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {j} has length {}",
                    c.len()
                )));
            }
            for i in 0..rows {
                m.data[i * m.cols + j] = c.entries[i];
            }
        }
        Ok(m)
    }

    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FpScalar {
        FpScalar {
            value: self.data[r * self.cols + c],
            p: self.p,
        }
    }

    #[inline]
    pub(crate) fn raw(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FpScalar) {
        debug_assert_eq!(x.p, self.p);
        self.data[r * self.cols + c] = x.value;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> FpVector {
        FpVector::from_raw(
            self.p,
            self.data[r * self.cols..(r + 1) * self.cols].to_vec(),
        )
    }

    pub fn column(&self, c: usize) -> FpVector {
        FpVector::from_raw(self.p, (0..self.rows).map(|r| self.raw(r, c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.raw(i, j) == self.raw(j, i)))
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.raw(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc = (acc + self.raw(r, k) as u64 * other.raw(k, c) as u64) % p;
                }
                out.data[r * other.cols + c] = acc as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FpVector) -> Result<FpVector> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(FpVector::from_raw(self.p, self.mul_raw(&v.entries)))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, v: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|r| dot_raw(&self.data[r * self.cols..(r + 1) * self.cols], v, self.p))
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
        })
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        other.scale(-FpScalar::one(self.p)).add(self)
    }

    pub fn scale(&self, c: FpScalar) -> FpMatrix {
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|&a| ((a as u64 * c.value as u64) % self.p as u64) as u32)
                .collect(),
        }
    }

    /// The sub-block of `rows x cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FpMatrix {
        let mut m = Self::zeros(self.p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = self.raw(r0 + r, c0 + c);
            }
        }
        m
    }

    /// Assembles `[[top_left, top_right], [bottom_left, bottom_right]]` from
    /// four `n x n` blocks.
    pub fn from_blocks(
        top_left: &FpMatrix,
        top_right: &FpMatrix,
        bottom_left: &FpMatrix,
        bottom_right: &FpMatrix,
    ) -> Result<FpMatrix> {
        let n = top_left.rows;
        for b in [top_left, top_right, bottom_left, bottom_right] {
            if b.rows != n || b.cols != n {
                return Err(Error::Dimension("blocks must all be n x n".into()));
            }
        }
        let mut m = Self::zeros(top_left.p, 2 * n, 2 * n);
        for (b, r0, c0) in [
            (top_left, 0, 0),
            (top_right, 0, n),
            (bottom_left, n, 0),
            (bottom_right, n, n),
        ] {
            for r in 0..n {
                for c in 0..n {
                    m.data[(r0 + r) * 2 * n + c0 + c] = b.raw(r, c);
                }
            }
        }
        Ok(m)
    }

    /// Quadratic form `v^t M v`.
    pub(crate) fn quadratic_raw(&self, v: &[u32]) -> u32 {
        self.bilinear_raw(v, v)
    }

    /// Bilinear form `v^t M w`.
    pub(crate) fn bilinear_raw(&self, v: &[u32], w: &[u32]) -> u32 {
        let p = self.p as u64;
        let mut acc = 0u64;
        for (r, &vr) in v.iter().enumerate() {
            if vr == 0 {
                continue;
            }
            let row = dot_raw(&self.data[r * self.cols..(r + 1) * self.cols], w, self.p) as u64;
            acc = (acc + vr as u64 * row) % p;
        }
        acc as u32
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p as u64;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.raw(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = fp_inv(m.get(row, col)).expect("pivot is non-zero").value as u64;
            for c in 0..m.cols {
                let i = row * m.cols + c;
                m.data[i] = (m.data[i] as u64 * inv % p) as u32;
            }
            for r in 0..m.rows {
                let f = m.raw(r, col) as u64;
                if r == row || f == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let sub = f * m.raw(row, c) as u64 % p;
                    let i = r * m.cols + c;
                    m.data[i] = ((m.data[i] as u64 + p - sub) % p) as u32;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(";")?;
            }
            write_joined(f, &self.data[r * self.cols..(r + 1) * self.cols], ",")?;
        }
        f.write_str("]")
    }
}

impl Serialize for FpMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[u32]> = (0..self.rows)
            .map(|r| &self.data[r * self.cols..(r + 1) * self.cols])
            .collect();
        rows.serialize(s)
    }
}

/// An exact non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn pow(base: u64, exp: u32) -> Self {
        BigCount(BigUint::from(base).pow(exp))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for BigCount {
    /// Decimal string, so values beyond 2^53 survive JSON consumers.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: Self) -> Self {
        BigCount(self.0 + rhs.0)
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: Self) -> Self {
        BigCount(self.0 * rhs.0)
    }
}

impl std::iter::Sum for BigCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for BigCount {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(BigCount::one(), |a, b| a * b)
    }
}

/// Gaussian binomial `[n choose k]_p`, the number of `k`-dimensional
/// subspaces of `F_p^n`. Zero when `k < 0` or `k > n`.
pub fn p_binomial(n: i64, k: i64, p: u32) -> BigCount {
    if k < 0 || k > n || n < 0 {
        return BigCount::zero();
    }
    let p = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1u32;
        den *= p.pow((k - i) as u32) - 1u32;
    }
    debug_assert!((&num % &den).is_zero());
    BigCount(num / den)
}
