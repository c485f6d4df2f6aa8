//! Endomorphisms and automorphisms built from block-matrix parameters.
//!
//! For `ES_1` an endomorphism is `(u, w, z) |-> (Au + Cw, Du + Bw, z')` with
//! `z' = α(u) + β(w) + l z + 1/2 u^t(A^tD)u + 1/2 w^t(C^tB)w + w^t(C^tD)u`.
//! For `ES_2` it is `(u1, u, w1, w) |-> (a u1 + i21(s), π(Aũ + Cw̃), Dũ + Bw̃)`
//! with `s = α(u) + β(w̃) + 1/2 ũ^t(A^tD)ũ + 1/2 w̃^t(C^tB)w̃ + w̃^t(C^tD)ũ`.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::counting;
use crate::error::{BlockIdentity, Error, Result, ValidationError};
use crate::exec::{ensure_within, Caps, Execution};
use crate::group::{Cursor, Es1Element, Es2Element, GroupElement, GroupId, GroupKind, Payload};
use crate::modular::{dot_raw, half, FpMatrix, FpScalar, FpVector, Zp2Scalar};
use crate::symplectic::{similitudes, symp_scalar_test, ScalarFilter, SympScalarMatrix};

/// Parameters of an endomorphism of `ES_1(p, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endo1Params {
    pub a: FpMatrix,
    pub b: FpMatrix,
    pub c: FpMatrix,
    pub d: FpMatrix,
    /// Functional on `u`, length `n`.
    pub alpha: FpVector,
    /// Functional on `w`, length `n`.
    pub beta: FpVector,
}

/// Parameters of an endomorphism of `ES_2(p, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endo2Params {
    pub a: FpMatrix,
    pub b: FpMatrix,
    pub c: FpMatrix,
    pub d: FpMatrix,
    /// Functional on `u`, length `n - 1`.
    pub alpha: FpVector,
    /// Functional on `w̃`, length `n`.
    pub beta: FpVector,
    /// Multiplier of `u1`, congruent to `a_11` mod `p`.
    pub lift: Zp2Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EndoParams {
    First(Endo1Params),
    Second(Endo2Params),
}

impl EndoParams {
    fn blocks(&self) -> [&FpMatrix; 4] {
        match self {
            EndoParams::First(q) => [&q.a, &q.b, &q.c, &q.d],
            EndoParams::Second(q) => [&q.a, &q.b, &q.c, &q.d],
        }
    }

    fn functionals(&self) -> (&FpVector, &FpVector) {
        match self {
            EndoParams::First(q) => (&q.alpha, &q.beta),
            EndoParams::Second(q) => (&q.alpha, &q.beta),
        }
    }
}

/// A validated endomorphism together with cached block products.
#[derive(Debug, Clone)]
pub struct Morphism {
    group: GroupId,
    params: EndoParams,
    quotient: SympScalarMatrix,
    is_auto: bool,
    atd: FpMatrix,
    ctb: FpMatrix,
    ctd: FpMatrix,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.params == other.params
    }
}

impl Eq for Morphism {}

impl std::hash::Hash for Morphism {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.hash(state);
        self.params.hash(state);
    }
}

/// Which of the three block identities fail for `[[A, C], [D, B]]`.
pub(crate) fn failing_identities(m: &FpMatrix) -> Vec<BlockIdentity> {
    let n = m.rows() / 2;
    let a = m.block(0, 0, n, n);
    let c = m.block(0, n, n, n);
    let d = m.block(n, 0, n, n);
    let b = m.block(n, n, n, n);
    let at = a.transpose();
    let ct = c.transpose();
    let mut out = Vec::new();
    let diag = at
        .mul(&b)
        .unwrap()
        .sub(&d.transpose().mul(&c).unwrap())
        .unwrap();
    let scalar = n == 0 || diag == FpMatrix::scalar(diag.get(0, 0), n);
    if !scalar {
        out.push(BlockIdentity::ScalarDiagonal);
    }
    if !at.mul(&d).unwrap().is_symmetric() {
        out.push(BlockIdentity::AtdSymmetric);
    }
    if !ct.mul(&b).unwrap().is_symmetric() {
        out.push(BlockIdentity::CtbSymmetric);
    }
    out
}

fn check_shapes(group: &GroupId, params: &EndoParams) -> Result<()> {
    let n = group.n();
    let p = group.p();
    for (name, m) in ["A", "B", "C", "D"].iter().zip(params.blocks()) {
        if m.rows() != n || m.cols() != n || m.modulus() != p {
            return Err(ValidationError::Shape(format!(
                "{name} is {}x{} over F_{}, expected {n}x{n} over F_{p}",
                m.rows(),
                m.cols(),
                m.modulus()
            ))
            .into());
        }
    }
    let (alpha, beta) = params.functionals();
    let alpha_len = if group.kind().is_second_type() {
        n - 1
    } else {
        n
    };
    for (name, v, len) in [("alpha", alpha, alpha_len), ("beta", beta, n)] {
        if v.len() != len || v.modulus() != p {
            return Err(ValidationError::Shape(format!(
                "{name} has length {} over F_{}, expected {len} over F_{p}",
                v.len(),
                v.modulus()
            ))
            .into());
        }
    }
    Ok(())
}

/// Validates `params` as an endomorphism of the plain `ES_1(p, n)`.
pub fn build_endo_es1(params: Endo1Params, group: GroupId) -> Result<Morphism> {
    if group.kind() != GroupKind::Es1 {
        return Err(Error::Context(format!("ES_1 parameters for {group}")));
    }
    let params = EndoParams::First(params);
    check_shapes(&group, &params)?;
    let [a, b, c, d] = params.blocks();
    let sigma = FpMatrix::from_blocks(a, c, d, b)?;
    let l = symp_scalar_test(&sigma)?.ok_or_else(|| ValidationError::NotSympScalar {
        failing: failing_identities(&sigma),
    })?;
    Ok(Morphism::assemble(
        group,
        params,
        SympScalarMatrix::new_unchecked(sigma, l),
    ))
}

/// Validates `params` as an endomorphism of the plain `ES_2(p, n)`.
pub fn build_endo_es2(params: Endo2Params, group: GroupId) -> Result<Morphism> {
    if group.kind() != GroupKind::Es2 {
        return Err(Error::Context(format!("ES_2 parameters for {group}")));
    }
    let n = group.n();
    let params = EndoParams::Second(params);
    check_shapes(&group, &params)?;
    let EndoParams::Second(q) = &params else {
        unreachable!()
    };
    if (1..n).any(|j| !q.a.get(0, j).is_zero()) {
        return Err(ValidationError::FirstRowA.into());
    }
    if (0..n).any(|j| !q.c.get(0, j).is_zero()) {
        return Err(ValidationError::FirstRowC.into());
    }
    let a11 = q.a.get(0, 0);
    if q.lift.prime() != group.p() || q.lift.reduce() != a11 {
        return Err(ValidationError::LiftMismatch {
            a: q.lift.value(),
            a11: a11.value(),
        }
        .into());
    }
    let sigma = FpMatrix::from_blocks(&q.a, &q.c, &q.d, &q.b)?;
    let l = symp_scalar_test(&sigma)?.ok_or_else(|| ValidationError::NotSympScalar {
        failing: failing_identities(&sigma),
    })?;
    if l != a11 {
        return Err(ValidationError::ScalarNotA11 {
            found: l.value(),
            a11: a11.value(),
        }
        .into());
    }
    Ok(Morphism::assemble(
        group,
        params,
        SympScalarMatrix::new_unchecked(sigma, l),
    ))
}

/// Dispatches to [`build_endo_es1`] or [`build_endo_es2`].
pub fn build_endo(group: GroupId, params: EndoParams) -> Result<Morphism> {
    match params {
        EndoParams::First(q) => build_endo_es1(q, group),
        EndoParams::Second(q) => build_endo_es2(q, group),
    }
}

impl Morphism {
    fn assemble(group: GroupId, params: EndoParams, quotient: SympScalarMatrix) -> Morphism {
        let [a, b, c, d] = params.blocks();
        let at = a.transpose();
        let ct = c.transpose();
        let is_auto = match &params {
            EndoParams::First(_) => !quotient.scalar().is_zero(),
            EndoParams::Second(q) => q.lift.is_unit(),
        };
        Morphism {
            group,
            atd: at.mul(d).unwrap(),
            ctb: ct.mul(b).unwrap(),
            ctd: ct.mul(d).unwrap(),
            params,
            quotient,
            is_auto,
        }
    }

    /// The identity map of a plain group.
    pub fn identity(group: GroupId) -> Result<Morphism> {
        let p = group.p();
        let n = group.n();
        let id = FpMatrix::identity(p, n);
        let zero = FpMatrix::zeros(p, n, n);
        match group.kind() {
            GroupKind::Es1 => build_endo_es1(
                Endo1Params {
                    a: id.clone(),
                    b: id,
                    c: zero.clone(),
                    d: zero,
                    alpha: FpVector::zeros(p, n),
                    beta: FpVector::zeros(p, n),
                },
                group,
            ),
            GroupKind::Es2 => build_endo_es2(
                Endo2Params {
                    a: id.clone(),
                    b: id,
                    c: zero.clone(),
                    d: zero,
                    alpha: FpVector::zeros(p, n - 1),
                    beta: FpVector::zeros(p, n),
                    lift: Zp2Scalar::new(1, p),
                },
                group,
            ),
            _ => Err(Error::Context(format!("no parametrization for {group}"))),
        }
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn params(&self) -> &EndoParams {
        &self.params
    }

    /// `l` with `σ̄^t Δ σ̄ = l Δ`; equals `a_11` for `ES_2`.
    pub fn scalar(&self) -> FpScalar {
        self.quotient.scalar()
    }

    /// The multiplier `a` of `u1` (second type only).
    pub fn lift(&self) -> Option<Zp2Scalar> {
        match &self.params {
            EndoParams::Second(q) => Some(q.lift),
            EndoParams::First(_) => None,
        }
    }

    pub fn is_auto(&self) -> bool {
        self.is_auto
    }

    /// `σ̄ = [[A, C], [D, B]]`, the induced map on `G / Z(G)` in the basis
    /// `x̄_1..x̄_n, ȳ_1..ȳ_n`, with its scalar.
    pub fn induced_quotient_matrix(&self) -> &SympScalarMatrix {
        &self.quotient
    }

    /// For automorphisms of `ES_2`: whether `b_11 = 1` and `b_j1 = c_j1 = 0`
    /// for `j >= 2`. `None` for other morphisms.
    pub fn sigma_d_consequences_hold(&self) -> Option<bool> {
        let EndoParams::Second(q) = &self.params else {
            return None;
        };
        if !self.is_auto {
            return None;
        }
        let n = self.group.n();
        Some(
            q.b.get(0, 0).value() == 1
                && (1..n).all(|j| q.b.get(j, 0).is_zero() && q.c.get(j, 0).is_zero()),
        )
    }

    /// `σ(g)`.
    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        if g.group() != self.group {
            return Err(Error::Context(format!(
                "morphism of {} applied to an element of {}",
                self.group,
                g.group()
            )));
        }
        Ok(self.apply_unchecked(g))
    }

    pub(crate) fn apply_unchecked(&self, g: &GroupElement) -> GroupElement {
        let p = self.group.p();
        let h = half(p).value() as u64;
        let pp = p as u64;
        let [a, b, c, d] = self.params.blocks();
        let add = |x: Vec<u32>, y: Vec<u32>| -> Vec<u32> {
            x.into_iter().zip(y).map(|(s, t)| (s + t) % p).collect()
        };
        match (&self.params, g.payload()) {
            (EndoParams::First(q), Payload::First(e)) => {
                let u = e.u.as_slice();
                let w = e.w.as_slice();
                let nu = add(a.mul_raw(u), c.mul_raw(w));
                let nw = add(d.mul_raw(u), b.mul_raw(w));
                let quad = (self.atd.quadratic_raw(u) + self.ctb.quadratic_raw(w)) as u64 % pp;
                let z = dot_raw(q.alpha.as_slice(), u, p) as u64
                    + dot_raw(q.beta.as_slice(), w, p) as u64
                    + self.quotient.scalar().value() as u64 * e.z.value() as u64
                    + h * quad
                    + self.ctd.bilinear_raw(w, u) as u64;
                GroupElement::from_es1(
                    self.group,
                    Es1Element {
                        u: FpVector::from_raw(p, nu),
                        w: FpVector::from_raw(p, nw),
                        z: FpScalar::new((z % pp) as i64, p),
                    },
                )
            }
            (EndoParams::Second(q), Payload::Second(e)) => {
                let ut = e.u_tilde();
                let wt = e.w_tilde();
                let (ut, wt) = (ut.as_slice(), wt.as_slice());
                let quad = (self.atd.quadratic_raw(ut) + self.ctb.quadratic_raw(wt)) as u64 % pp;
                let s = dot_raw(q.alpha.as_slice(), e.u.as_slice(), p) as u64
                    + dot_raw(q.beta.as_slice(), wt, p) as u64
                    + h * quad
                    + self.ctd.bilinear_raw(wt, ut) as u64;
                let s = FpScalar::new((s % pp) as i64, p);
                let top = add(a.mul_raw(ut), c.mul_raw(wt));
                let bottom = add(d.mul_raw(ut), b.mul_raw(wt));
                GroupElement::from_es2(
                    self.group,
                    Es2Element {
                        u1: q.lift * e.u1 + Zp2Scalar::embed(s),
                        u: FpVector::from_raw(p, top[1..].to_vec()),
                        w1: FpScalar::new(bottom[0] as i64, p),
                        w: FpVector::from_raw(p, bottom[1..].to_vec()),
                    },
                )
            }
            _ => unreachable!("payload shape is fixed by the group kind"),
        }
    }

    /// Recovers the parameters of the endomorphism sending the generators
    /// `x_1..x_n, y_1..y_n` to `images`. Fails if no endomorphism does.
    pub fn from_generator_images(group: GroupId, images: &[GroupElement]) -> Result<Morphism> {
        let n = group.n();
        let p = group.p();
        if images.len() != 2 * n {
            return Err(Error::Dimension(format!(
                "{} generator images, expected {}",
                images.len(),
                2 * n
            )));
        }
        if let Some(g) = images.iter().find(|g| g.group() != group) {
            return Err(Error::Context(format!(
                "image in {} for a morphism of {group}",
                g.group()
            )));
        }
        let quotient: Vec<FpVector> = images.iter().map(|g| g.quotient_coords().0).collect();
        let sigma = FpMatrix::from_columns(p, 2 * n, &quotient)?;
        let a = sigma.block(0, 0, n, n);
        let c = sigma.block(0, n, n, n);
        let d = sigma.block(n, 0, n, n);
        let b = sigma.block(n, n, n, n);
        let atd = a.transpose().mul(&d)?;
        let ctb = c.transpose().mul(&b)?;
        let h = half(p);
        let not_endo = || Error::Domain("generator images do not extend to an endomorphism".into());
        let m = match group.kind() {
            GroupKind::Es1 => {
                let z = |g: &GroupElement| g.as_es1().expect("first type").z;
                let alpha = (0..n).map(|i| (z(&images[i]) - h * atd.get(i, i)).value() as i64);
                let beta = (0..n).map(|j| (z(&images[n + j]) - h * ctb.get(j, j)).value() as i64);
                build_endo_es1(
                    Endo1Params {
                        alpha: FpVector::new(p, alpha),
                        beta: FpVector::new(p, beta),
                        a,
                        b,
                        c,
                        d,
                    },
                    group,
                )
                .map_err(|_| not_endo())?
            }
            GroupKind::Es2 => {
                let first = |g: &GroupElement| g.as_es2().expect("second type").u1;
                let lift = first(&images[0]) - Zp2Scalar::embed(h * atd.get(0, 0));
                let shifted = |g: &GroupElement, corr: FpScalar| {
                    first(g)
                        .divide_by_p()
                        .map(|s| (s - h * corr).value() as i64)
                        .ok_or_else(not_endo)
                };
                let alpha = (1..n)
                    .map(|i| shifted(&images[i], atd.get(i, i)))
                    .collect::<Result<Vec<_>>>()?;
                let beta = (0..n)
                    .map(|j| shifted(&images[n + j], ctb.get(j, j)))
                    .collect::<Result<Vec<_>>>()?;
                build_endo_es2(
                    Endo2Params {
                        alpha: FpVector::new(p, alpha),
                        beta: FpVector::new(p, beta),
                        lift,
                        a,
                        b,
                        c,
                        d,
                    },
                    group,
                )
                .map_err(|_| not_endo())?
            }
            _ => return Err(Error::Context(format!("no parametrization for {group}"))),
        };
        let gens = group.generators();
        if gens
            .iter()
            .zip(images)
            .any(|(x, img)| m.apply_unchecked(x) != *img)
        {
            return Err(not_endo());
        }
        Ok(m)
    }

    /// Conjugation `g |-> h g h^-1`.
    pub fn inner_automorphism(h: &GroupElement) -> Result<Morphism> {
        let group = h.group();
        let hinv = h.inverse();
        let images: Vec<GroupElement> = group
            .generators()
            .iter()
            .map(|x| h.mul_unchecked(x).mul_unchecked(&hinv))
            .collect();
        Self::from_generator_images(group, &images)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if self.group != other.group {
            return Err(Error::Context(format!(
                "composing morphisms of {} and {}",
                self.group, other.group
            )));
        }
        let images: Vec<GroupElement> = self
            .group
            .generators()
            .iter()
            .map(|x| self.apply_unchecked(&other.apply_unchecked(x)))
            .collect();
        Self::from_generator_images(self.group, &images)
    }

    /// `f(σ(g), σ(h)) = l f(g, h)`.
    pub fn scalar_action_check(&self, g: &GroupElement, h: &GroupElement) -> Result<bool> {
        let lhs = self.apply(g)?.symplectic_f(&self.apply(h)?)?;
        Ok(lhs == self.scalar() * g.symplectic_f(h)?)
    }

    /// Images of all elements, by element index.
    pub fn table(&self, caps: &Caps) -> Result<Vec<u32>> {
        Ok(self
            .group
            .elements(caps)?
            .map(|g| self.group.index_of(&self.apply_unchecked(&g)) as u32)
            .collect())
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.params.blocks();
        let (alpha, beta) = self.params.functionals();
        write!(
            f,
            "{} A={a} B={b} C={c} D={d} alpha=[{alpha}] beta=[{beta}]",
            self.group
        )?;
        if let Some(lift) = self.lift() {
            write!(f, " a={lift}")?;
        }
        Ok(())
    }
}

impl Serialize for Morphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [a, b, c, d] = self.params.blocks();
        let (alpha, beta) = self.params.functionals();
        let mut st = s.serialize_struct("Morphism", 10)?;
        st.serialize_field("group", &self.group)?;
        st.serialize_field("A", a)?;
        st.serialize_field("B", b)?;
        st.serialize_field("C", c)?;
        st.serialize_field("D", d)?;
        st.serialize_field("alpha", alpha)?;
        st.serialize_field("beta", beta)?;
        st.serialize_field("a", &self.lift())?;
        st.serialize_field("l", &self.scalar())?;
        st.serialize_field("is_auto", &self.is_auto)?;
        st.end()
    }
}

/// Parsed but unvalidated morphism text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismSpec {
    pub group: GroupId,
    pub params: EndoParams,
}

impl MorphismSpec {
    pub fn build(self) -> Result<Morphism> {
        build_endo(self.group, self.params)
    }
}

impl FromStr for MorphismSpec {
    type Err = Error;

    /// `es1(p,n) A=[..] B=[..] C=[..] D=[..] alpha=[..] beta=[..]`, plus
    /// `a=..` for `es2`. Matrices are row-major, rows optionally separated by
    /// `;`. Omitted functionals are zero; an omitted `a` is `a_11`.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        c.eat("endo");
        let group = c.group_id()?;
        if !matches!(group.kind(), GroupKind::Es1 | GroupKind::Es2) {
            return Err(Error::Context(format!("no parametrization for {group}")));
        }
        let (p, n) = (group.p(), group.n());
        let mut blocks: [Option<FpMatrix>; 4] = Default::default();
        let mut alpha = None;
        let mut beta = None;
        let mut lift = None;
        loop {
            c.skip_ws();
            if c.rest().is_empty() {
                break;
            }
            let at = c.pos;
            let key = c.ident()?;
            c.expect("=")?;
            match key {
                "A" | "B" | "C" | "D" => {
                    let slot = ["A", "B", "C", "D"].iter().position(|k| *k == key).unwrap();
                    let at = c.pos;
                    let rows = bracketed_rows(&mut c)?;
                    let flat: Vec<i64> = rows.concat();
                    let shape_ok = flat.len() == n * n
                        && (rows.len() == 1 || rows.iter().all(|r| r.len() == n));
                    if !shape_ok {
                        return Err(Error::parse(at, format!("{key} must be {n}x{n}")));
                    }
                    blocks[slot] = Some(FpMatrix::from_row_major(p, n, n, &flat)?);
                }
                "alpha" | "beta" => {
                    let rows = bracketed_rows(&mut c)?;
                    let v = FpVector::new(p, rows.concat());
                    if key == "alpha" {
                        alpha = Some(v);
                    } else {
                        beta = Some(v);
                    }
                }
                "a" if group.kind().is_second_type() => {
                    lift = Some(Zp2Scalar::new(c.integer()?, p));
                }
                _ => return Err(Error::parse(at, format!("unknown key '{key}'"))),
            }
        }
        let mut take = |i: usize, name: &str| {
            blocks[i]
                .take()
                .ok_or_else(|| Error::parse(s.len(), format!("missing {name}")))
        };
        let (a, b, cc, d) = (take(0, "A")?, take(1, "B")?, take(2, "C")?, take(3, "D")?);
        let beta = beta.unwrap_or_else(|| FpVector::zeros(p, n));
        let params = if group.kind().is_second_type() {
            EndoParams::Second(Endo2Params {
                lift: lift.unwrap_or_else(|| Zp2Scalar::new(a.get(0, 0).value() as i64, p)),
                alpha: alpha.unwrap_or_else(|| FpVector::zeros(p, n - 1)),
                beta,
                a,
                b,
                c: cc,
                d,
            })
        } else {
            EndoParams::First(Endo1Params {
                alpha: alpha.unwrap_or_else(|| FpVector::zeros(p, n)),
                beta,
                a,
                b,
                c: cc,
                d,
            })
        };
        Ok(MorphismSpec { group, params })
    }
}

impl FromStr for Morphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<MorphismSpec>()?.build()
    }
}

fn bracketed_rows(c: &mut Cursor<'_>) -> Result<Vec<Vec<i64>>> {
    c.expect("[")?;
    let mut rows = vec![c.integer_list(&[';', ']'])?];
    while c.eat(";") {
        rows.push(c.integer_list(&[';', ']'])?);
    }
    c.expect("]")?;
    Ok(rows)
}

/// Endomorphisms or automorphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    Endomorphisms,
    Automorphisms,
}

/// Random-access enumeration of `End(G)` or `Aut(G)` from the parametrization:
/// every admissible `σ̄` combined with every choice of functionals (and of the
/// lift of `a_11` for `ES_2`). Distinct indices give distinct morphisms.
#[derive(Debug, Clone)]
pub struct MorphismSpace {
    group: GroupId,
    kind: MorphismKind,
    matrices: Vec<SympScalarMatrix>,
    per_matrix: u64,
}

impl MorphismSpace {
    pub fn new(group: GroupId, kind: MorphismKind, exec: Execution, caps: &Caps) -> Result<Self> {
        let second = match group.kind() {
            GroupKind::Es1 => false,
            GroupKind::Es2 => true,
            _ => return Err(Error::Context(format!("no parametrization for {group}"))),
        };
        let expected = match kind {
            MorphismKind::Endomorphisms => counting::end_order(&group),
            MorphismKind::Automorphisms => counting::aut_order(&group),
        };
        let what = match kind {
            MorphismKind::Endomorphisms => "endomorphism enumeration",
            MorphismKind::Automorphisms => "automorphism enumeration",
        };
        ensure_within(what, expected.to_u64().map(u128::from), caps.morphisms)?;
        let filter = match kind {
            MorphismKind::Endomorphisms => ScalarFilter::Any,
            MorphismKind::Automorphisms => ScalarFilter::NonZero,
        };
        let matrices = similitudes(group.p(), group.n(), filter, second, exec);
        let per_matrix = (group.p() as u64).pow(2 * group.n() as u32);
        Ok(MorphismSpace {
            group,
            kind,
            matrices,
            per_matrix,
        })
    }

    pub fn endomorphisms(group: GroupId, caps: &Caps) -> Result<Self> {
        Self::new(
            group,
            MorphismKind::Endomorphisms,
            Execution::default(),
            caps,
        )
    }

    pub fn automorphisms(group: GroupId, caps: &Caps) -> Result<Self> {
        Self::new(
            group,
            MorphismKind::Automorphisms,
            Execution::default(),
            caps,
        )
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    /// The admissible quotient matrices, one per block of `p^{2n}` morphisms.
    pub fn matrices(&self) -> &[SympScalarMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> u64 {
        self.matrices.len() as u64 * self.per_matrix
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `i`-th morphism, `0 <= i < len()`.
    pub fn get(&self, i: u64) -> Morphism {
        let sigma = &self.matrices[(i / self.per_matrix) as usize];
        let mut r = i % self.per_matrix;
        let p = self.group.p();
        let n = self.group.n();
        let m = sigma.matrix();
        let mut digits = |len: usize| {
            let v: Vec<u32> = (0..len)
                .map(|_| {
                    let d = (r % p as u64) as u32;
                    r /= p as u64;
                    d
                })
                .collect();
            FpVector::from_raw(p, v)
        };
        let (a, c, d, b) = (
            m.block(0, 0, n, n),
            m.block(0, n, n, n),
            m.block(n, 0, n, n),
            m.block(n, n, n, n),
        );
        let params = if self.group.kind().is_second_type() {
            let alpha = digits(n - 1);
            let beta = digits(n);
            let t = digits(1).get(0);
            EndoParams::Second(Endo2Params {
                lift: Zp2Scalar::new(a.get(0, 0).value() as i64 + p as i64 * t.value() as i64, p),
                alpha,
                beta,
                a,
                b,
                c,
                d,
            })
        } else {
            let alpha = digits(n);
            let beta = digits(n);
            EndoParams::First(Endo1Params {
                alpha,
                beta,
                a,
                b,
                c,
                d,
            })
        };
        Morphism::assemble(self.group, params, sigma.clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = Morphism> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Morphism {
        s.parse().unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let g = GroupId::es1(3, 1).unwrap();
        let id = Morphism::identity(g).unwrap();
        assert!(id.is_auto());
        assert_eq!(id.scalar().value(), 1);
        for x in g.elements(&Caps::default()).unwrap() {
            assert_eq!(id.apply(&x).unwrap(), x);
        }
        let zero = m("es1(3,1) A=[0] B=[0] C=[0] D=[0] alpha=[0] beta=[0]");
        assert!(!zero.is_auto());
        assert!(zero.apply(&el("es1(3,1):[2|1|2]")).unwrap().is_identity());
    }

    #[test]
    fn application_examples() {
        let s = m("es1(3,1) A=[2] B=[1] C=[0] D=[0] alpha=[0] beta=[0]");
        assert_eq!(s.scalar().value(), 2);
        assert_eq!(
            s.apply(&el("es1(3,1):[1|2|1]")).unwrap(),
            el("es1(3,1):[2|2|2]")
        );
        let s = m("es1(3,1) A=[1] B=[1] C=[0] D=[0] alpha=[1] beta=[0]");
        assert_eq!(
            s.apply(&el("es1(3,1):[1|0|0]")).unwrap(),
            el("es1(3,1):[1|0|1]")
        );
        let s = m("es2(3,1) A=[1] B=[1] C=[0] D=[0] alpha=[] beta=[0] a=1");
        assert_eq!(
            s.apply(&el("es2(3,1):[1|1]")).unwrap(),
            el("es2(3,1):[1|1]")
        );
        let s = m("es2(3,1) A=[1] B=[1] C=[0] D=[0] a=4");
        assert!(s.is_auto());
        assert_eq!(
            s.apply(&el("es2(3,1):[1|0]")).unwrap(),
            el("es2(3,1):[4|0]")
        );
        let s = m("es2(3,1) A=[0] B=[0] C=[0] D=[0] beta=[1] a=0");
        assert_eq!(
            s.apply(&el("es2(3,1):[5|2]")).unwrap(),
            el("es2(3,1):[6|0]")
        );
    }

    #[test]
    fn validation_errors() {
        let e = "es1(3,1) A=[1] B=[1] C=[0] D=[0] alpha=[0]"
            .parse::<MorphismSpec>()
            .unwrap()
            .build()
            .unwrap();
        assert!(e.is_auto());
        let err = "es1(3,2) A=[1,0;0,2] B=[1,0;0,1] C=[0,0;0,0] D=[0,0;0,0]"
            .parse::<Morphism>()
            .unwrap_err();
        assert_eq!(
            err,
            Error::Validation(ValidationError::NotSympScalar {
                failing: vec![BlockIdentity::ScalarDiagonal]
            })
        );
        assert!(err.to_string().starts_with("invalid: not in symp^scalar"));
        let err = "es2(3,2) A=[1,1;0,1] B=[1,0;0,1] C=[0,0;0,0] D=[0,0;0,0]"
            .parse::<Morphism>()
            .unwrap_err();
        assert_eq!(
            err.to_string(),
            "invalid: first-row constraint a_{1j}=0 violated"
        );
        let err = "es2(3,2) A=[1,0;0,1] B=[1,0;0,1] C=[0,1;0,0] D=[0,0;0,0]"
            .parse::<Morphism>()
            .unwrap_err();
        assert_eq!(err, Error::Validation(ValidationError::FirstRowC));
        let err = "es2(3,1) A=[1] B=[1] C=[0] D=[0] a=2"
            .parse::<Morphism>()
            .unwrap_err();
        assert!(matches!(
            err,
            Error::Validation(ValidationError::LiftMismatch { .. })
        ));
        let err = "es2(3,1) A=[2] B=[2] C=[0] D=[0] a=2"
            .parse::<Morphism>()
            .unwrap_err();
        assert!(matches!(
            err,
            Error::Validation(ValidationError::ScalarNotA11 { .. })
        ));
        let err = "es1(3,1) A=[1] B=[1] C=[0] D=[0] alpha=[0,0]"
            .parse::<Morphism>()
            .unwrap_err();
        assert!(matches!(err, Error::Validation(ValidationError::Shape(_))));
        assert!(matches!(
            "es1(3,1) A=[1,2] B=[1] C=[0] D=[0]".parse::<Morphism>(),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "es1(3,2) A=[1,0;0,1] B=[1,0;0,1] C=[0,0;0,0] D=[0,0;0,0] alpha=[1,2] beta=[0,1]",
            "es2(3,1) A=[1] B=[1] C=[0] D=[0] alpha=[] beta=[2] a=7",
        ] {
            assert_eq!(m(s).to_string(), s);
        }
    }

    #[test]
    fn inner_automorphisms() {
        let h = el("es1(3,1):[1|0|0]");
        let inner = Morphism::inner_automorphism(&h).unwrap();
        assert_eq!(
            inner.apply(&el("es1(3,1):[0|1|0]")).unwrap(),
            el("es1(3,1):[0|1|1]")
        );
        assert_eq!(
            *inner.induced_quotient_matrix().matrix(),
            FpMatrix::identity(3, 2)
        );
        let g = GroupId::es1(3, 1).unwrap();
        assert_eq!(
            Morphism::inner_automorphism(&g.identity()).unwrap(),
            Morphism::identity(g).unwrap()
        );
    }

    #[test]
    fn composition_matches_application() {
        let caps = Caps::default();
        for g in [GroupId::es1(3, 1).unwrap(), GroupId::es2(3, 1).unwrap()] {
            let space = MorphismSpace::endomorphisms(g, &caps).unwrap();
            let sample: Vec<Morphism> =
                (0..space.len()).step_by(17).map(|i| space.get(i)).collect();
            for s in &sample {
                for t in sample.iter().step_by(3) {
                    let st = s.compose(t).unwrap();
                    assert_eq!(st.scalar(), s.scalar() * t.scalar());
                    for x in g.elements(&caps).unwrap() {
                        assert_eq!(
                            st.apply(&x).unwrap(),
                            s.apply(&t.apply(&x).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn space_sizes_small() {
        let caps = Caps::default();
        let g1 = GroupId::es1(3, 1).unwrap();
        let g2 = GroupId::es2(3, 1).unwrap();
        assert_eq!(MorphismSpace::endomorphisms(g1, &caps).unwrap().len(), 729);
        assert_eq!(MorphismSpace::automorphisms(g1, &caps).unwrap().len(), 432);
        assert_eq!(MorphismSpace::endomorphisms(g2, &caps).unwrap().len(), 135);
        assert_eq!(MorphismSpace::automorphisms(g2, &caps).unwrap().len(), 54);
        let tight = Caps {
            morphisms: 100,
            ..Caps::default()
        };
        assert!(matches!(
            MorphismSpace::endomorphisms(g1, &tight),
            Err(Error::Resource { .. })
        ));
    }
}
