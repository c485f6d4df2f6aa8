//! Brute-force ground truth. Nothing here consults the parametrized morphism
//! code or the closed-form counts: homomorphisms come from generator images
//! and normal-form words checked against a Cayley table, and matrix or
//! subspace counts come from exhaustive scans.

use std::collections::HashSet;

use crate::counting::Quantity;
use crate::error::{Error, Result};
use crate::exec::{checked_pow, ensure_within, Caps, Execution};
use crate::group::{GroupElement, GroupId, GroupKind};
use crate::modular::BigCount;
use crate::symplectic::pairing_raw;

/// A group with its generating tuple `x_1..x_n, y_1..y_n`.
#[derive(Debug, Clone)]
pub struct PresentationSpec {
    pub group: GroupId,
    pub generators: Vec<GroupElement>,
}

impl PresentationSpec {
    pub fn standard(group: GroupId) -> Self {
        PresentationSpec {
            group,
            generators: group.generators(),
        }
    }

    /// Exponents of the normal-form word for `g`.
    ///
    /// First type: `x^u y^w z^c` with `z = [x_1, y_1]`, giving `(u, w, c)`.
    /// Second type: `x_1^e x_2^{u_2}.. y_1^{w_1} y_2^{w_2}..`, giving
    /// `(e, u, w1, w)`.
    pub fn normal_form(&self, g: &GroupElement) -> Vec<u64> {
        let p = self.group.p() as u64;
        let n = self.group.n();
        let c = g.coords();
        let dot = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<u64>();
        if self.group.kind().is_second_type() {
            let (u, w) = (&c[1..n], &c[n + 1..]);
            let twist = (c[0] % p) * c[n] + dot(u, w);
            let m = p * p;
            let mut out = c.clone();
            out[0] = (c[0] + m - (p * (twist % p)) % m) % m;
            out
        } else {
            let (u, w) = (&c[..n], &c[n..2 * n]);
            let mut out = c.clone();
            out[2 * n] = (c[2 * n] + p - dot(u, w) % p) % p;
            out
        }
    }

    /// The generators generate the group (closure from the identity).
    pub fn generates(&self, table: &CayleyTable) -> bool {
        let gens: Vec<u32> = self
            .generators
            .iter()
            .map(|g| self.group.index_of(g) as u32)
            .collect();
        let mut seen = vec![false; table.order];
        let mut stack = vec![table.identity];
        seen[table.identity as usize] = true;
        while let Some(a) = stack.pop() {
            for &g in &gens {
                let b = table.mul(a, g);
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The multiplication table on element indices.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    group: GroupId,
    order: usize,
    products: Vec<u32>,
    identity: u32,
}

impl CayleyTable {
    pub fn new(group: GroupId, exec: Execution, caps: &Caps) -> Result<Self> {
        let elements: Vec<GroupElement> = group.elements(caps)?.collect();
        let order = elements.len();
        ensure_within(
            "Cayley table",
            Some(order as u128 * order as u128),
            caps.candidates,
        )?;
        let rows = exec.map_slice(&elements, |a| {
            elements
                .iter()
                .map(|b| group.index_of(&a.multiply(b).expect("same group")) as u32)
                .collect::<Vec<u32>>()
        });
        Ok(CayleyTable {
            group,
            order,
            products: rows.concat(),
            identity: group.index_of(&group.identity()) as u32,
        })
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.products[a as usize * self.order + b as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    /// `a^k` for `k >= 0`.
    pub fn power(&self, a: u32, k: u64) -> u32 {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn inverse(&self, a: u32) -> u32 {
        (0..self.order as u32)
            .find(|&b| self.mul(a, b) == self.identity)
            .expect("groups have inverses")
    }
}

/// `table[g h] = table[g] table[h]` for every pair.
pub fn is_homomorphism_table(table: &[u32], cayley: &CayleyTable) -> bool {
    let n = cayley.order as u32;
    table.len() == cayley.order
        && (0..n).all(|g| {
            (0..n).all(|h| {
                table[cayley.mul(g, h) as usize] == cayley.mul(table[g as usize], table[h as usize])
            })
        })
}

/// The table is a bijection.
pub fn is_bijective_table(table: &[u32]) -> bool {
    let mut seen = vec![false; table.len()];
    table.iter().all(|&t| {
        let fresh = !seen[t as usize];
        seen[t as usize] = true;
        fresh
    })
}

/// Every homomorphism `G -> G`, found by trying all images of the generators,
/// extending along normal-form words and keeping the extensions that pass the
/// exhaustive homomorphism check. Tables are element-index maps, sorted.
pub fn enumerate_homs_by_generators(
    group: GroupId,
    exec: Execution,
    caps: &Caps,
) -> Result<Vec<Vec<u32>>> {
    let spec = PresentationSpec::standard(group);
    let gens = spec.generators.len();
    let order = group.order_u64().unwrap_or(u64::MAX);
    ensure_within(
        "generator-image candidates",
        checked_pow(order, gens as u64),
        caps.candidates,
    )?;
    let cayley = CayleyTable::new(group, exec, caps)?;
    let total = checked_pow(order, gens as u64).unwrap() as u64;
    let words: Vec<Vec<u64>> = group
        .elements(caps)?
        .map(|g| spec.normal_form(&g))
        .collect();
    let p = group.p() as u64;
    let max_exp = if group.kind().is_second_type() {
        p * p
    } else {
        p
    };
    let first_type = !group.kind().is_second_type();

    let found = exec.map_range(0..total, |t| {
        let mut images = Vec::with_capacity(gens + 1);
        let mut rest = t;
        for _ in 0..gens {
            images.push((rest % order) as u32);
            rest /= order;
        }
        images.reverse();
        if first_type {
            let n = group.n();
            let (x, y) = (images[0], images[n]);
            let comm = cayley.mul(
                cayley.mul(cayley.mul(x, y), cayley.inverse(x)),
                cayley.inverse(y),
            );
            images.push(comm);
        }
        let powers: Vec<Vec<u32>> = images
            .iter()
            .map(|&g| {
                let mut v = Vec::with_capacity(max_exp as usize);
                let mut acc = cayley.identity;
                for _ in 0..max_exp {
                    v.push(acc);
                    acc = cayley.mul(acc, g);
                }
                v
            })
            .collect();
        let table: Vec<u32> = words
            .iter()
            .map(|w| {
                w.iter()
                    .zip(&powers)
                    .fold(cayley.identity, |acc, (&e, pw)| {
                        cayley.mul(acc, pw[e as usize])
                    })
            })
            .collect();
        is_homomorphism_table(&table, &cayley).then_some(table)
    });
    let mut tables: Vec<Vec<u32>> = found.into_iter().flatten().collect();
    tables.sort();
    tables.dedup();
    Ok(tables)
}

/// Which matrices [`scan_matrices`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixPredicate {
    /// `N^t Δ N = 0`, optionally with every column's first coordinate zero.
    NullForm { inside_v1: bool },
    /// `N^t Δ N = l Δ` for some `l`, optionally requiring `l != 0`.
    ScalarForm { nonzero: bool },
    /// `N^t Δ N = l Δ` for this `l`.
    FixedForm(u32),
}

fn all_vectors(p: u32, dim: usize) -> Vec<Vec<u32>> {
    let total = (p as u64).pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0u32; dim];
            for slot in v.iter_mut().rev() {
                *slot = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            v
        })
        .collect()
}

/// Counts `dim x dim` matrices over `F_p` satisfying `predicate` by visiting
/// every one of the `p^{dim^2}` matrices.
pub fn scan_matrices(
    dim: usize,
    p: u32,
    predicate: MatrixPredicate,
    exec: Execution,
    caps: &Caps,
) -> Result<BigCount> {
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::Dimension(format!(
            "matrix scan needs even dim, got {dim}"
        )));
    }
    ensure_within(
        "matrix scan",
        checked_pow(p as u64, (dim * dim) as u64),
        caps.matrix_scan,
    )?;
    let n = dim / 2;
    let vectors = all_vectors(p, dim);
    let nv = vectors.len();
    let form: Vec<u32> = vectors
        .iter()
        .flat_map(|a| vectors.iter().map(|b| pairing_raw(a, b, p)))
        .collect();
    let in_v1: Vec<bool> = vectors.iter().map(|v| v[0] == 0).collect();
    let pairs: Vec<(usize, usize, bool)> = (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j, i < n && j == i + n)))
        .collect();

    let accept = |cols: &[usize]| -> bool {
        let target = match predicate {
            MatrixPredicate::NullForm { inside_v1 } => {
                if inside_v1 && !cols.iter().all(|&c| in_v1[c]) {
                    return false;
                }
                0
            }
            MatrixPredicate::ScalarForm { nonzero } => {
                let l = form[cols[0] * nv + cols[n]];
                if nonzero && l == 0 {
                    return false;
                }
                l
            }
            MatrixPredicate::FixedForm(l) => l % p,
        };
        pairs.iter().all(|&(i, j, hyperbolic)| {
            form[cols[i] * nv + cols[j]] == if hyperbolic { target } else { 0 }
        })
    };

    let count = exec.sum_range(0..nv as u64, |first| {
        let mut cols = vec![0usize; dim];
        cols[0] = first as usize;
        let mut hits = 0u64;
        loop {
            if accept(&cols) {
                hits += 1;
            }
            let mut pos = dim - 1;
            loop {
                if pos == 0 {
                    return hits;
                }
                cols[pos] += 1;
                if cols[pos] < nv {
                    break;
                }
                cols[pos] = 0;
                pos -= 1;
            }
        }
    });
    Ok(BigCount::from(count))
}

/// Counts `k`-dimensional subspaces of `F_p^dim` by collecting the span (as a
/// set of vectors) of every increasing `k`-tuple of vectors.
pub fn scan_subspaces(
    dim: usize,
    p: u32,
    k: usize,
    isotropic_only: bool,
    inside_v1: bool,
    exec: Execution,
    caps: &Caps,
) -> Result<BigCount> {
    if isotropic_only && !dim.is_multiple_of(2) {
        return Err(Error::Dimension("isotropy needs an even dimension".into()));
    }
    ensure_within(
        "subspace scan",
        checked_pow(p as u64, (dim * k) as u64),
        caps.subspace_scan,
    )?;
    if k > dim {
        return Ok(BigCount::zero());
    }
    if k == 0 {
        return Ok(BigCount::one());
    }
    let vectors = all_vectors(p, dim);
    let nv = vectors.len();
    let index_of = |v: &[u32]| {
        v.iter()
            .fold(0usize, |acc, &x| acc * p as usize + x as usize)
    };
    let span_size = (p as usize).pow(k as u32);
    let admissible = |v: &[u32]| !inside_v1 || v[0] == 0;

    let per_first = exec.map_range(1..nv as u64, |first| {
        let mut found: HashSet<Vec<u32>> = HashSet::new();
        let first = first as usize;
        if !admissible(&vectors[first]) {
            return found;
        }
        let mut tuple = vec![first];
        collect_spans(
            p,
            k,
            &vectors,
            nv,
            span_size,
            isotropic_only,
            &admissible,
            &index_of,
            &mut tuple,
            &mut found,
        );
        found
    });
    let mut all: HashSet<Vec<u32>> = HashSet::new();
    for s in per_first {
        all.extend(s);
    }
    Ok(BigCount::from(all.len() as u64))
}

#[allow(clippy::too_many_arguments)]
fn collect_spans(
    p: u32,
    k: usize,
    vectors: &[Vec<u32>],
    nv: usize,
    span_size: usize,
    isotropic_only: bool,
    admissible: &dyn Fn(&[u32]) -> bool,
    index_of: &dyn Fn(&[u32]) -> usize,
    tuple: &mut Vec<usize>,
    found: &mut HashSet<Vec<u32>>,
) {
    if tuple.len() == k {
        let dim = vectors[0].len();
        let mut span: Vec<u32> = Vec::with_capacity(span_size);
        for mut combo in 0..span_size {
            let mut acc = vec![0u32; dim];
            for &t in tuple.iter() {
                let c = (combo % p as usize) as u32;
                combo /= p as usize;
                for (a, &x) in acc.iter_mut().zip(&vectors[t]) {
                    *a = (*a + c * x) % p;
                }
            }
            span.push(index_of(&acc) as u32);
        }
        span.sort_unstable();
        span.dedup();
        if span.len() == span_size {
            found.insert(span);
        }
        return;
    }
    let last = *tuple.last().unwrap();
    for next in last + 1..nv {
        let v = &vectors[next];
        if !admissible(v) {
            continue;
        }
        if isotropic_only && tuple.iter().any(|&t| pairing_raw(&vectors[t], v, p) != 0) {
            continue;
        }
        tuple.push(next);
        collect_spans(
            p,
            k,
            vectors,
            nv,
            span_size,
            isotropic_only,
            admissible,
            index_of,
            tuple,
            found,
        );
        tuple.pop();
    }
}

/// Counts surjective linear maps `F_p^dim -> F_p^k`: a `k x dim` matrix is
/// surjective when `{Nv}` has `p^k` elements.
pub fn count_surjections(
    dim: usize,
    k: usize,
    p: u32,
    exec: Execution,
    caps: &Caps,
) -> Result<BigCount> {
    ensure_within(
        "surjection scan",
        checked_pow(p as u64, (k * dim + dim) as u64),
        caps.matrix_scan,
    )?;
    let sources = all_vectors(p, dim);
    let targets = (p as usize).pow(k as u32);
    let total = (p as u64).pow((k * dim) as u32);
    let count = exec.sum_range(0..total, |mut idx| {
        let mut entries = vec![0u32; k * dim];
        for slot in entries.iter_mut().rev() {
            *slot = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        let mut hit = vec![false; targets];
        let mut distinct = 0usize;
        for v in &sources {
            let image = (0..k).fold(0usize, |acc, r| {
                let row = &entries[r * dim..(r + 1) * dim];
                let x = row.iter().zip(v).map(|(&a, &b)| a * b).sum::<u32>() % p;
                acc * p as usize + x as usize
            });
            if !hit[image] {
                hit[image] = true;
                distinct += 1;
            }
        }
        (distinct == targets) as u64
    });
    Ok(BigCount::from(count))
}

/// The oracle value for a counted quantity and a short name of how it was
/// obtained.
pub fn oracle_count(
    quantity: Quantity,
    family: Option<GroupKind>,
    p: u32,
    n: usize,
    k: Option<usize>,
    exec: Execution,
    caps: &Caps,
) -> Result<(BigCount, &'static str)> {
    let need_k = || k.ok_or_else(|| Error::Domain(format!("{quantity} needs k")));
    let dim = 2 * n;
    Ok(match quantity {
        Quantity::AlphaK => (
            scan_subspaces(dim, p, need_k()?, true, false, exec, caps)?,
            "subspace scan",
        ),
        Quantity::BetaK => (
            scan_subspaces(dim, p, need_k()?, true, true, exec, caps)?,
            "subspace scan",
        ),
        Quantity::GammaK => (
            count_surjections(dim, need_k()?, p, exec, caps)?,
            "surjection scan",
        ),
        Quantity::CountX => (
            scan_matrices(
                dim,
                p,
                MatrixPredicate::NullForm { inside_v1: false },
                exec,
                caps,
            )?,
            "matrix scan",
        ),
        Quantity::CountY => (
            scan_matrices(
                dim,
                p,
                MatrixPredicate::NullForm { inside_v1: true },
                exec,
                caps,
            )?,
            "matrix scan",
        ),
        Quantity::SpOrder => (
            scan_matrices(dim, p, MatrixPredicate::FixedForm(1), exec, caps)?,
            "matrix scan",
        ),
        Quantity::ImPhi2Order => {
            let group = GroupId::es2(p as u64, n)?;
            let space = crate::morphism::MorphismSpace::new(
                group,
                crate::morphism::MorphismKind::Automorphisms,
                exec,
                caps,
            )?;
            let distinct: HashSet<_> = space
                .iter()
                .map(|m| m.induced_quotient_matrix().matrix().clone())
                .collect();
            (
                BigCount::from(distinct.len() as u64),
                "automorphism enumeration",
            )
        }
        Quantity::AutOrder | Quantity::EndOrder => {
            let kind = match family {
                Some(GroupKind::Es1 | GroupKind::Es1Tilde) => GroupKind::Es1,
                Some(GroupKind::Es2 | GroupKind::Es2Tilde) => GroupKind::Es2,
                None => return Err(Error::Domain(format!("{quantity} needs a group"))),
            };
            let group = GroupId::new(kind, p as u64, n)?;
            let autos = quantity == Quantity::AutOrder;
            match enumerate_homs_by_generators(group, exec, caps) {
                Ok(tables) => {
                    let c = tables
                        .iter()
                        .filter(|t| !autos || is_bijective_table(t))
                        .count();
                    (BigCount::from(c as u64), "generator-image oracle")
                }
                Err(Error::Resource { .. }) => {
                    let kind = if autos {
                        crate::morphism::MorphismKind::Automorphisms
                    } else {
                        crate::morphism::MorphismKind::Endomorphisms
                    };
                    let space = crate::morphism::MorphismSpace::new(group, kind, exec, caps)?;
                    (BigCount::from(space.len()), "parametrized enumeration")
                }
                Err(e) => return Err(e),
            }
        }
    })
}
