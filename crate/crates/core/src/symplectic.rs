//! The standard symplectic form on `F_p^{2n}`, similitude membership, and
//! isotropic subspaces.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result, ValidationError};
use crate::exec::{checked_pow, ensure_within, Caps, Execution};
use crate::modular::{FpMatrix, FpScalar, FpVector};

/// `Δ = [[0, I], [-I, 0]]` in `n x n` blocks.
pub fn delta(p: u32, n: usize) -> FpMatrix {
    let mut m = FpMatrix::zeros(p, 2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, FpScalar::one(p));
        m.set(n + i, i, -FpScalar::one(p));
    }
    m
}

/// `<<v, w>> = sum_i v_i w_{n+i} - v_{n+i} w_i`.
pub fn pairing(v: &FpVector, w: &FpVector) -> Result<FpScalar> {
    if v.len() != w.len() || !v.len().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "pairing of vectors of length {} and {}",
            v.len(),
            w.len()
        )));
    }
    let p = v.modulus();
    Ok(FpScalar::new(
        pairing_raw(v.as_slice(), w.as_slice(), p) as i64,
        p,
    ))
}

#[inline]
pub(crate) fn pairing_raw(v: &[u32], w: &[u32], p: u32) -> u32 {
    let n = v.len() / 2;
    let p = p as u64;
    let mut acc = 0u64;
    for i in 0..n {
        acc += v[i] as u64 * w[n + i] as u64 + (p - v[n + i] as u64) * w[i] as u64;
    }
    (acc % p) as u32
}

fn check_even_square(m: &FpMatrix) -> Result<usize> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "expected a square matrix of even size, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows() / 2)
}

/// The unique `l` with `m^t Δ m = l Δ`, or `None` when there is none.
/// `l = 0` is a legitimate answer.
pub fn symp_scalar_test(m: &FpMatrix) -> Result<Option<FpScalar>> {
    let n = check_even_square(m)?;
    let p = m.modulus();
    if n == 0 {
        return Ok(Some(FpScalar::zero(p)));
    }
    let cols: Vec<Vec<u32>> = (0..2 * n)
        .map(|c| m.column(c).as_slice().to_vec())
        .collect();
    let l = pairing_raw(&cols[0], &cols[n], p);
    Ok(form_matches(&cols, l, p).then(|| FpScalar::new(l as i64, p)))
}

/// Whether the columns satisfy `<<c_i, c_j>> = l Δ_ij` for all `i < j`.
pub(crate) fn form_matches(cols: &[Vec<u32>], l: u32, p: u32) -> bool {
    let n = cols.len() / 2;
    for i in 0..2 * n {
        for j in i + 1..2 * n {
            let want = if j == i + n && i < n { l } else { 0 };
            if pairing_raw(&cols[i], &cols[j], p) != want {
                return false;
            }
        }
    }
    true
}

/// True iff `m^t Δ m = l Δ` with `l != 0`.
pub fn is_sp_scalar(m: &FpMatrix) -> Result<bool> {
    Ok(symp_scalar_test(m)?.is_some_and(|l| !l.is_zero()))
}

/// A `2n x 2n` matrix known to satisfy `m^t Δ m = scalar_l Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SympScalarMatrix {
    m: FpMatrix,
    scalar_l: FpScalar,
}

impl SympScalarMatrix {
    pub fn new(m: FpMatrix) -> Result<Self> {
        match symp_scalar_test(&m)? {
            Some(scalar_l) => Ok(SympScalarMatrix { m, scalar_l }),
            None => Err(ValidationError::NotSympScalar {
                failing: crate::morphism::failing_identities(&m),
            }
            .into()),
        }
    }

    pub(crate) fn new_unchecked(m: FpMatrix, scalar_l: FpScalar) -> Self {
        SympScalarMatrix { m, scalar_l }
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.m
    }

    pub fn scalar(&self) -> FpScalar {
        self.scalar_l
    }

    pub fn into_matrix(self) -> FpMatrix {
        self.m
    }

    /// `n` where the matrix is `2n x 2n`.
    pub fn half_dim(&self) -> usize {
        self.m.rows() / 2
    }
}

/// A subspace of `F_p^d` stored by its reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: FpMatrix,
}

impl Subspace {
    /// The span of `vectors` (all of length `ambient_dim`).
    pub fn span(p: u32, ambient_dim: usize, vectors: &[FpVector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::Dimension(format!(
                "vector of length {} in F_p^{ambient_dim}",
                v.len()
            )));
        }
        let mut data = Vec::with_capacity(vectors.len() * ambient_dim);
        for v in vectors {
            data.extend_from_slice(v.as_slice());
        }
        Ok(Self::from_rows_raw(p, ambient_dim, vectors.len(), data))
    }

    pub(crate) fn from_rows_raw(p: u32, ambient_dim: usize, rows: usize, data: Vec<u32>) -> Self {
        let (r, pivots) = FpMatrix::from_raw(p, rows, ambient_dim, data).rref();
        Subspace {
            ambient_dim,
            basis: r.block(0, 0, pivots.len(), ambient_dim),
        }
    }

    pub fn zero(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: FpMatrix::zeros(p, 0, ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<FpVector> {
        (0..self.dim()).map(|r| self.basis.row(r)).collect()
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        let p = self.basis.modulus();
        let mut rows = self.basis.as_slice().to_vec();
        rows.extend_from_slice(v.as_slice());
        FpMatrix::from_raw(p, self.dim() + 1, self.ambient_dim, rows).rank() == self.dim()
    }

    /// The pairing vanishes on every pair of basis vectors.
    pub fn is_isotropic(&self) -> bool {
        let p = self.basis.modulus();
        let rows: Vec<&[u32]> = (0..self.dim())
            .map(|r| &self.basis.as_slice()[r * self.ambient_dim..(r + 1) * self.ambient_dim])
            .collect();
        rows.iter()
            .enumerate()
            .all(|(i, a)| rows[i + 1..].iter().all(|b| pairing_raw(a, b, p) == 0))
    }

    /// Contained in `V_1 = <e_2, ..., e_n, f_1, ..., f_n>`, i.e. every vector
    /// has first coordinate zero.
    pub fn inside_v1(&self) -> bool {
        (0..self.dim()).all(|r| self.basis.get(r, 0).is_zero())
    }
}

/// Every `k`-dimensional isotropic subspace of `F_p^{2n}` exactly once, in
/// canonical-basis order. With `restrict_to_v1` only those inside `V_1`.
///
/// Ordered tuples of independent vectors are grown inside the running perp
/// space and collapsed by canonical form. Empty when `k > n`.
pub fn enumerate_isotropic(
    p: u32,
    n: usize,
    k: usize,
    restrict_to_v1: bool,
    exec: Execution,
    caps: &Caps,
) -> Result<Vec<Subspace>> {
    let dim = 2 * n;
    if k > n {
        return Ok(Vec::new());
    }
    if k == 0 {
        return Ok(vec![Subspace::zero(p, dim)]);
    }
    // Ordered tuples visited: each step picks from a perp space of dim <= 2n - i.
    let work = (0..k as u64).try_fold(1u128, |acc, i| {
        acc.checked_mul(checked_pow(p as u64, dim as u64 - i)?)
    });
    ensure_within("isotropic subspace enumeration", work, caps.subspace_scan)?;

    let total = checked_pow(p as u64, dim as u64).expect("checked above") as u64;
    let decode = |mut idx: u64| {
        let mut v = vec![0u32; dim];
        for slot in v.iter_mut().rev() {
            *slot = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        v
    };
    let vectors: Vec<Vec<u32>> = (0..total).map(decode).collect();
    let allowed = |v: &[u32]| !restrict_to_v1 || v[0] == 0;

    let per_first = exec.map_range(1..total, |first| {
        let mut found = HashSet::new();
        let v0 = &vectors[first as usize];
        if allowed(v0) {
            let mut chosen = vec![v0.clone()];
            extend_isotropic(p, dim, k, &vectors, &allowed, &mut chosen, &mut found);
        }
        found
    });
    let mut all: HashSet<Subspace> = HashSet::new();
    for s in per_first {
        all.extend(s);
    }
    let mut out: Vec<Subspace> = all.into_iter().collect();
    out.sort();
    Ok(out)
}

fn extend_isotropic(
    p: u32,
    dim: usize,
    k: usize,
    vectors: &[Vec<u32>],
    allowed: &dyn Fn(&[u32]) -> bool,
    chosen: &mut Vec<Vec<u32>>,
    found: &mut HashSet<Subspace>,
) {
    if chosen.len() == k {
        let data = chosen.concat();
        found.insert(Subspace::from_rows_raw(p, dim, k, data));
        return;
    }
    let current_rank = chosen.len();
    for v in &vectors[1..] {
        if !allowed(v) || chosen.iter().any(|c| pairing_raw(c, v, p) != 0) {
            continue;
        }
        let mut data = chosen.concat();
        data.extend_from_slice(v);
        if FpMatrix::from_raw(p, current_rank + 1, dim, data).rank() != current_rank + 1 {
            continue;
        }
        chosen.push(v.clone());
        extend_isotropic(p, dim, k, vectors, allowed, chosen, found);
        chosen.pop();
    }
}

/// Which scalars `l` a similitude enumeration keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarFilter {
    Any,
    NonZero,
    Zero,
    Fixed(u32),
}

impl ScalarFilter {
    fn scalars(self, p: u32) -> Vec<u32> {
        match self {
            ScalarFilter::Any => (0..p).collect(),
            ScalarFilter::NonZero => (1..p).collect(),
            ScalarFilter::Zero => vec![0],
            ScalarFilter::Fixed(l) => vec![l % p],
        }
    }
}

/// All `2n x 2n` matrices `N` with `N^t Δ N = l Δ` for `l` in `filter`.
///
/// With `first_row_pinned`, row one is additionally forced to be
/// `(l, 0, ..., 0)`, the shape required of quotient maps of the exponent-`p^2`
/// family. Output is sorted by scalar, then by columns.
pub fn similitudes(
    p: u32,
    n: usize,
    filter: ScalarFilter,
    first_row_pinned: bool,
    exec: Execution,
) -> Vec<SympScalarMatrix> {
    let dim = 2 * n;
    let total = (p as u64).pow(dim as u32);
    let vectors: Vec<Vec<u32>> = (0..total)
        .map(|mut idx| {
            let mut v = vec![0u32; dim];
            for slot in v.iter_mut().rev() {
                *slot = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    for l in filter.scalars(p) {
        let fits = |col: usize, v: &[u32]| {
            if !first_row_pinned {
                return true;
            }
            if col == 0 {
                v[0] == l
            } else {
                v[0] == 0
            }
        };
        let firsts: Vec<usize> = (0..vectors.len())
            .filter(|&i| fits(0, &vectors[i]))
            .collect();
        let per_first = exec.map_slice(&firsts, |&first| {
            let mut found = Vec::new();
            let mut cols = vec![first];
            extend_similitude(p, n, l, &vectors, &fits, &mut cols, &mut found);
            found
        });
        for group in per_first {
            for cols in group {
                let columns: Vec<FpVector> = cols
                    .iter()
                    .map(|&c| FpVector::from_raw(p, vectors[c].clone()))
                    .collect();
                let m = FpMatrix::from_columns(p, dim, &columns).expect("consistent shape");
                out.push(SympScalarMatrix::new_unchecked(
                    m,
                    FpScalar::new(l as i64, p),
                ));
            }
        }
    }
    out
}

fn extend_similitude(
    p: u32,
    n: usize,
    l: u32,
    vectors: &[Vec<u32>],
    fits: &dyn Fn(usize, &[u32]) -> bool,
    cols: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let j = cols.len();
    if j == 2 * n {
        found.push(cols.clone());
        return;
    }
    for (idx, v) in vectors.iter().enumerate() {
        if !fits(j, v) {
            continue;
        }
        let ok = cols.iter().enumerate().all(|(i, &c)| {
            let want = if j == i + n && i < n { l } else { 0 };
            pairing_raw(&vectors[c], v, p) == want
        });
        if ok {
            cols.push(idx);
            extend_similitude(p, n, l, vectors, fits, cols, found);
            cols.pop();
        }
    }
}

/// The characterization of induced quotient maps of automorphisms of the
/// exponent-`p^2` family: `σ^t Δ σ = a_11 Δ` with `a_11 != 0`, first row
/// `(a_11, 0, ..., 0)`, `b_11 = 1`, and `b_j1 = c_j1 = 0` for `j >= 2`.
pub fn is_im_phi2(m: &FpMatrix) -> bool {
    let Ok(n) = check_even_square(m) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    let a11 = m.get(0, 0);
    if a11.is_zero() || (1..2 * n).any(|c| !m.get(0, c).is_zero()) {
        return false;
    }
    if m.get(n, n).value() != 1 || (1..2 * n).any(|r| r != n && !m.get(r, n).is_zero()) {
        return false;
    }
    symp_scalar_test(m).ok().flatten() == Some(a11)
}
