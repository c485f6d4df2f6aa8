//! Element arithmetic for `ES_1(p, n)`, `ES_2(p, n)` and their symplectic
//! ("tilde") presentations.
//!
//! Coordinates are kept in a fixed order, `(u, w, z)` for the first type and
//! `(u1, u, w1, w)` for the second, so element equality is structural and
//! element indices follow lexicographic coordinate order.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{checked_pow, ensure_within, Caps};
use crate::modular::{check_odd_prime, dot_raw, half, BigCount, FpScalar, FpVector, Zp2Scalar};

/// Which presentation a group uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    /// Heisenberg group, exponent `p`.
    Es1,
    /// Exponent `p^2`.
    Es2,
    /// `ES_1` with the symmetrised cocycle `1/2 <<v1, v2>>`.
    Es1Tilde,
    /// `ES_2` with the symmetrised cocycle `i21(1/2 <<v1, v2>>)`.
    Es2Tilde,
}

impl GroupKind {
    pub fn tag(self) -> &'static str {
        match self {
            GroupKind::Es1 => "es1",
            GroupKind::Es2 => "es2",
            GroupKind::Es1Tilde => "es1t",
            GroupKind::Es2Tilde => "es2t",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "es1" => GroupKind::Es1,
            "es2" => GroupKind::Es2,
            "es1t" => GroupKind::Es1Tilde,
            "es2t" => GroupKind::Es2Tilde,
            _ => return None,
        })
    }

    /// True for the exponent-`p^2` family.
    pub fn is_second_type(self) -> bool {
        matches!(self, GroupKind::Es2 | GroupKind::Es2Tilde)
    }

    pub fn is_tilde(self) -> bool {
        matches!(self, GroupKind::Es1Tilde | GroupKind::Es2Tilde)
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for GroupKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// A concrete group: family, odd prime `p` and rank `n`. Order `p^{2n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId {
    kind: GroupKind,
    p: u32,
    n: usize,
}

impl GroupId {
    pub fn new(kind: GroupKind, p: u64, n: usize) -> Result<Self> {
        let p = check_odd_prime(p)?;
        if n == 0 {
            return Err(Error::Domain("rank n must be at least 1".into()));
        }
        Ok(GroupId { kind, p, n })
    }

    pub fn es1(p: u64, n: usize) -> Result<Self> {
        Self::new(GroupKind::Es1, p, n)
    }

    pub fn es2(p: u64, n: usize) -> Result<Self> {
        Self::new(GroupKind::Es2, p, n)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The same `(p, n)` in another presentation.
    pub fn with_kind(&self, kind: GroupKind) -> GroupId {
        GroupId { kind, ..*self }
    }

    pub fn order(&self) -> BigCount {
        BigCount::pow(self.p as u64, 2 * self.n as u32 + 1)
    }

    /// `p^{2n+1}` when it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        checked_pow(self.p as u64, 2 * self.n as u64 + 1).map(|v| v as u64)
    }

    fn second(&self) -> bool {
        self.kind.is_second_type()
    }

    pub fn identity(&self) -> GroupElement {
        let p = self.p;
        let payload = if self.second() {
            Payload::Second(Es2Element {
                u1: Zp2Scalar::zero(p),
                u: FpVector::zeros(p, self.n - 1),
                w1: FpScalar::zero(p),
                w: FpVector::zeros(p, self.n - 1),
            })
        } else {
            Payload::First(Es1Element {
                u: FpVector::zeros(p, self.n),
                w: FpVector::zeros(p, self.n),
                z: FpScalar::zero(p),
            })
        };
        GroupElement {
            group: *self,
            payload,
        }
    }

    /// The fixed generator `z` of the center: `(0, 0, 1)` for the first type,
    /// `(p, 0, 0, 0)` for the second. Scalars `l` are measured against it.
    pub fn central_generator(&self) -> GroupElement {
        let mut coords = vec![0i64; self.coordinate_count()];
        if self.second() {
            coords[0] = self.p as i64;
        } else {
            coords[2 * self.n] = 1;
        }
        self.element(&coords).expect("valid coordinates")
    }

    /// `x_i` for `0 <= i < n`: the `i`-th basis vector in the `u`-part.
    pub fn generator_x(&self, i: usize) -> GroupElement {
        assert!(i < self.n);
        let mut coords = vec![0i64; self.coordinate_count()];
        coords[i] = 1;
        self.element(&coords).expect("valid coordinates")
    }

    /// `y_i` for `0 <= i < n`: the `i`-th basis vector in the `w`-part.
    pub fn generator_y(&self, i: usize) -> GroupElement {
        assert!(i < self.n);
        let mut coords = vec![0i64; self.coordinate_count()];
        coords[self.n + i] = 1;
        self.element(&coords).expect("valid coordinates")
    }

    /// `x_1, ..., x_n, y_1, ..., y_n`; their classes form the ordered basis of
    /// `G / Z(G)`.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.n)
            .map(|i| self.generator_x(i))
            .chain((0..self.n).map(|i| self.generator_y(i)))
            .collect()
    }

    /// Number of scalar coordinates in an element (`2n + 1` or `2n`).
    pub fn coordinate_count(&self) -> usize {
        if self.second() {
            2 * self.n
        } else {
            2 * self.n + 1
        }
    }

    /// Radix of each coordinate in canonical order.
    pub fn radices(&self) -> Vec<u64> {
        let p = self.p as u64;
        let mut r = vec![p; self.coordinate_count()];
        if self.second() {
            r[0] = p * p;
        }
        r
    }

    /// Builds an element from its flat coordinate list in canonical order:
    /// `u.., w.., z` or `u1, u.., w1, w..`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        let n = self.n;
        let p = self.p;
        if coords.len() != self.coordinate_count() {
            return Err(Error::Dimension(format!(
                "{} coordinates for {}, expected {}",
                coords.len(),
                self,
                self.coordinate_count()
            )));
        }
        let payload = if self.second() {
            Payload::Second(Es2Element {
                u1: Zp2Scalar::new(coords[0], p),
                u: FpVector::new(p, coords[1..n].iter().copied()),
                w1: FpScalar::new(coords[n], p),
                w: FpVector::new(p, coords[n + 1..].iter().copied()),
            })
        } else {
            Payload::First(Es1Element {
                u: FpVector::new(p, coords[..n].iter().copied()),
                w: FpVector::new(p, coords[n..2 * n].iter().copied()),
                z: FpScalar::new(coords[2 * n], p),
            })
        };
        Ok(GroupElement {
            group: *self,
            payload,
        })
    }

    pub fn element_count(&self) -> Option<u64> {
        self.order_u64()
    }

    /// Rank of `g` in lexicographic coordinate order.
    pub fn index_of(&self, g: &GroupElement) -> u64 {
        debug_assert_eq!(g.group, *self);
        let radices = self.radices();
        g.coords()
            .iter()
            .zip(&radices)
            .fold(0u64, |acc, (&c, &r)| acc * r + c)
    }

    /// Inverse of [`GroupId::index_of`].
    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let radices = self.radices();
        let mut coords = vec![0i64; radices.len()];
        for (slot, &r) in coords.iter_mut().zip(&radices).rev() {
            *slot = (index % r) as i64;
            index /= r;
        }
        self.element(&coords).expect("valid coordinates")
    }

    /// Every element exactly once, in lexicographic coordinate order.
    pub fn elements(&self, caps: &Caps) -> Result<impl Iterator<Item = GroupElement> + '_> {
        let count = ensure_within(
            "element enumeration",
            checked_pow(self.p as u64, 2 * self.n as u64 + 1),
            caps.elements,
        )?;
        Ok((0..count).map(move |i| self.element_at(i)))
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.tag(), self.p, self.n)
    }
}

impl Serialize for GroupId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Coordinates `(u, w, z)` of the first type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Es1Element {
    pub u: FpVector,
    pub w: FpVector,
    pub z: FpScalar,
}

/// Coordinates `(u1, u, w1, w)` of the second type; `u` and `w` have length
/// `n - 1` (empty when `n = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Es2Element {
    pub u1: Zp2Scalar,
    pub u: FpVector,
    pub w1: FpScalar,
    pub w: FpVector,
}

impl Es2Element {
    /// `u~ = (u1 mod p; u)`.
    pub fn u_tilde(&self) -> FpVector {
        FpVector::from_raw(
            self.w1.modulus(),
            std::iter::once(self.u1.reduce().value())
                .chain(self.u.as_slice().iter().copied())
                .collect(),
        )
    }

    /// `w~ = (w1; w)`.
    pub fn w_tilde(&self) -> FpVector {
        FpVector::from_raw(
            self.w1.modulus(),
            std::iter::once(self.w1.value())
                .chain(self.w.as_slice().iter().copied())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    First(Es1Element),
    Second(Es2Element),
}

/// An element together with the group it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: GroupId,
    payload: Payload,
}

/// Coordinates of `g Z(G)` against `x_1..x_n, y_1..y_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientVector(pub FpVector);

impl QuotientVector {
    pub fn coords(&self) -> &FpVector {
        &self.0
    }
}

impl GroupElement {
    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn as_es1(&self) -> Option<&Es1Element> {
        match &self.payload {
            Payload::First(e) => Some(e),
            Payload::Second(_) => None,
        }
    }

    pub fn as_es2(&self) -> Option<&Es2Element> {
        match &self.payload {
            Payload::Second(e) => Some(e),
            Payload::First(_) => None,
        }
    }

    pub(crate) fn from_es1(group: GroupId, e: Es1Element) -> Self {
        GroupElement {
            group,
            payload: Payload::First(e),
        }
    }

    pub(crate) fn from_es2(group: GroupId, e: Es2Element) -> Self {
        GroupElement {
            group,
            payload: Payload::Second(e),
        }
    }

    /// Flat coordinates in canonical order.
    pub fn coords(&self) -> Vec<u64> {
        match &self.payload {
            Payload::First(e) => {
                e.u.as_slice()
                    .iter()
                    .chain(e.w.as_slice())
                    .map(|&v| v as u64)
                    .chain(std::iter::once(e.z.value() as u64))
                    .collect()
            }
            Payload::Second(e) => std::iter::once(e.u1.value())
                .chain(e.u.as_slice().iter().map(|&v| v as u64))
                .chain(std::iter::once(e.w1.value() as u64))
                .chain(e.w.as_slice().iter().map(|&v| v as u64))
                .collect(),
        }
    }

    fn same_group(&self, other: &GroupElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::Context(format!(
                "elements of {} and {}",
                self.group, other.group
            )));
        }
        Ok(())
    }

    /// Group product `self * other`.
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_group(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        let g = self.group;
        let p = g.p;
        let payload = match (&self.payload, &other.payload) {
            (Payload::First(a), Payload::First(b)) => {
                let twist = if g.kind.is_tilde() {
                    // 1/2 (<u1, w2> - <u2, w1>)
                    let s = FpScalar::new(dot_raw(a.u.as_slice(), b.w.as_slice(), p) as i64, p)
                        - FpScalar::new(dot_raw(b.u.as_slice(), a.w.as_slice(), p) as i64, p);
                    half(p) * s
                } else {
                    FpScalar::new(dot_raw(a.u.as_slice(), b.w.as_slice(), p) as i64, p)
                };
                Payload::First(Es1Element {
                    u: a.u.add(&b.u).expect("same length"),
                    w: a.w.add(&b.w).expect("same length"),
                    z: a.z + b.z + twist,
                })
            }
            (Payload::Second(a), Payload::Second(b)) => {
                // <u~1, w~2> = w1_2 * (u1_1 mod p) + <u_1, w_2>
                let cross = |x: &Es2Element, y: &Es2Element| {
                    FpScalar::new(dot_raw(x.u.as_slice(), y.w.as_slice(), p) as i64, p)
                        + x.u1.reduce() * y.w1
                };
                let twist = if g.kind.is_tilde() {
                    half(p) * (cross(a, b) - cross(b, a))
                } else {
                    cross(a, b)
                };
                Payload::Second(Es2Element {
                    u1: a.u1 + b.u1 + Zp2Scalar::embed(twist),
                    u: a.u.add(&b.u).expect("same length"),
                    w1: a.w1 + b.w1,
                    w: a.w.add(&b.w).expect("same length"),
                })
            }
            _ => unreachable!("payload shape is fixed by the group kind"),
        };
        GroupElement { group: g, payload }
    }

    pub fn inverse(&self) -> GroupElement {
        let g = self.group;
        let p = g.p;
        let payload = match &self.payload {
            Payload::First(a) => {
                let z = if g.kind.is_tilde() {
                    -a.z
                } else {
                    FpScalar::new(dot_raw(a.u.as_slice(), a.w.as_slice(), p) as i64, p) - a.z
                };
                Payload::First(Es1Element {
                    u: a.u.neg(),
                    w: a.w.neg(),
                    z,
                })
            }
            Payload::Second(a) => {
                let u1 = if g.kind.is_tilde() {
                    -a.u1
                } else {
                    let t = FpScalar::new(dot_raw(a.u.as_slice(), a.w.as_slice(), p) as i64, p)
                        + a.u1.reduce() * a.w1;
                    Zp2Scalar::embed(t) - a.u1
                };
                Payload::Second(Es2Element {
                    u1,
                    u: a.u.neg(),
                    w1: -a.w1,
                    w: a.w.neg(),
                })
            }
        };
        GroupElement { group: g, payload }
    }

    /// `self^k` by repeated squaring; negative `k` goes through the inverse.
    pub fn power(&self, k: i64) -> GroupElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.group.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        match &self.payload {
            Payload::First(a) => a.u.is_zero() && a.w.is_zero() && a.z.is_zero(),
            Payload::Second(a) => {
                a.u1.value() == 0 && a.u.is_zero() && a.w1.is_zero() && a.w.is_zero()
            }
        }
    }

    /// `g h g^-1 h^-1`.
    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_group(other)?;
        Ok(self
            .mul_unchecked(other)
            .mul_unchecked(&self.inverse())
            .mul_unchecked(&other.inverse()))
    }

    /// Membership in the center, read off the coordinates: the `z`-axis for the
    /// first type and `p Z/p^2 + 0 + 0 + 0` for the second.
    pub fn is_central(&self) -> bool {
        match &self.payload {
            Payload::First(a) => a.u.is_zero() && a.w.is_zero(),
            Payload::Second(a) => {
                a.u1.reduce().is_zero() && a.u.is_zero() && a.w1.is_zero() && a.w.is_zero()
            }
        }
    }

    /// Smallest `k >= 1` with `g^k = e`; always `1`, `p` or `p^2`.
    pub fn order(&self) -> u64 {
        let p = self.group.p as u64;
        if self.is_identity() {
            1
        } else if self.power(p as i64).is_identity() {
            p
        } else {
            p * p
        }
    }

    /// For a central element `z^t`, the exponent `t`.
    pub fn central_exponent(&self) -> Option<FpScalar> {
        if !self.is_central() {
            return None;
        }
        match &self.payload {
            Payload::First(a) => Some(a.z),
            Payload::Second(a) => a.u1.divide_by_p(),
        }
    }

    /// Image in `G / Z(G) = F_p^{2n}`, ordered `(u-part, w-part)`. For the
    /// second type the `u`-part is `u~ = (u1 mod p, u)`.
    pub fn quotient_coords(&self) -> QuotientVector {
        QuotientVector(match &self.payload {
            Payload::First(a) => a.u.concat(&a.w),
            Payload::Second(a) => a.u_tilde().concat(&a.w_tilde()),
        })
    }

    /// `f(g, h)` defined by `[g, h] = z^{f(g, h)}` for the fixed central
    /// generator `z`.
    pub fn symplectic_f(&self, other: &GroupElement) -> Result<FpScalar> {
        let c = self.commutator(other)?;
        Ok(c.central_exponent().expect("commutators are central"))
    }

    /// `lambda: ES1~ -> ES1`, `(u, w, z) |-> (u, w, z + 1/2 <u, w>)`.
    pub fn lambda_iso(&self) -> Result<GroupElement> {
        self.shear(GroupKind::Es1Tilde, GroupKind::Es1, 1)
    }

    /// Inverse of [`GroupElement::lambda_iso`].
    pub fn lambda_inv(&self) -> Result<GroupElement> {
        self.shear(GroupKind::Es1, GroupKind::Es1Tilde, -1)
    }

    /// `delta: ES2~ -> ES2`, `(u1, u, w1, w) |-> (u1 + i21(1/2 <u~, w~>), u, w1, w)`.
    pub fn delta_iso(&self) -> Result<GroupElement> {
        self.shear(GroupKind::Es2Tilde, GroupKind::Es2, 1)
    }

    /// Inverse of [`GroupElement::delta_iso`].
    pub fn delta_inv(&self) -> Result<GroupElement> {
        self.shear(GroupKind::Es2, GroupKind::Es2Tilde, -1)
    }

    fn shear(&self, from: GroupKind, to: GroupKind, sign: i64) -> Result<GroupElement> {
        if self.group.kind != from {
            return Err(Error::Context(format!(
                "expected an element of {}, got {}",
                from, self.group
            )));
        }
        let p = self.group.p;
        let target = self.group.with_kind(to);
        let shift = |dot: u32| half(p) * FpScalar::new(sign * dot as i64, p);
        Ok(match &self.payload {
            Payload::First(a) => {
                let mut e = a.clone();
                e.z = a.z + shift(dot_raw(a.u.as_slice(), a.w.as_slice(), p));
                GroupElement::from_es1(target, e)
            }
            Payload::Second(a) => {
                let mut e = a.clone();
                let dot = dot_raw(a.u_tilde().as_slice(), a.w_tilde().as_slice(), p);
                e.u1 = a.u1 + Zp2Scalar::embed(shift(dot));
                GroupElement::from_es2(target, e)
            }
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::modular::write_joined;
        write!(f, "{}:[", self.group)?;
        match &self.payload {
            Payload::First(a) => {
                write_joined(f, a.u.as_slice(), ",")?;
                f.write_str("|")?;
                write_joined(f, a.w.as_slice(), ",")?;
                write!(f, "|{}]", a.z)
            }
            Payload::Second(a) => {
                if self.group.n == 1 {
                    write!(f, "{}|{}]", a.u1, a.w1)
                } else {
                    write!(f, "{}|", a.u1)?;
                    write_joined(f, a.u.as_slice(), ",")?;
                    write!(f, "|{}|", a.w1)?;
                    write_joined(f, a.w.as_slice(), ",")?;
                    f.write_str("]")
                }
            }
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Cursor over the textual syntax, tracking byte offsets for error messages.
pub(crate) struct Cursor<'a> {
    pub(crate) src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub(crate) fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{token}'")))
        }
    }

    pub(crate) fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(Error::parse(self.pos, "expected identifier"));
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    pub(crate) fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let mut len = 0;
        if rest.starts_with('-') {
            len = 1;
        }
        len += rest[len..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - len);
        let digits = &rest[..len];
        let v = digits
            .parse::<i64>()
            .map_err(|_| Error::parse(start, "expected integer"))?;
        self.pos += len;
        Ok(v)
    }

    /// Comma-separated integers up to (not including) one of `stops`.
    pub(crate) fn integer_list(&mut self, stops: &[char]) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.rest().starts_with(stops) {
            return Ok(out);
        }
        loop {
            out.push(self.integer()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(Error::parse(self.pos, "unexpected trailing input"))
        }
    }

    /// `kind(p,n)`.
    pub(crate) fn group_id(&mut self) -> Result<GroupId> {
        let start = self.pos;
        let tag = self.ident()?;
        let kind = GroupKind::from_tag(tag)
            .ok_or_else(|| Error::parse(start, format!("unknown group kind '{tag}'")))?;
        self.expect("(")?;
        let at = self.pos;
        let p = self.integer()?;
        self.expect(",")?;
        let n = self.integer()?;
        self.expect(")")?;
        if p < 0 || n < 1 {
            return Err(Error::parse(at, "p and n must be positive"));
        }
        GroupId::new(kind, p as u64, n as usize)
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        let g = c.group_id()?;
        c.finish()?;
        Ok(g)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    /// Parses `es1(p,n):[u..|w..|z]` or `es2(p,n):[u1|u..|w1|w..]`; for the
    /// second type with `n = 1` the short form `[u1|w1]` is also accepted.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        let group = c.group_id()?;
        c.expect(":")?;
        c.expect("[")?;
        let open = c.pos;
        let mut fields = Vec::new();
        loop {
            fields.push((c.pos, c.integer_list(&['|', ']'])?));
            if c.eat("]") {
                break;
            }
            c.expect("|")?;
        }
        c.finish()?;
        let n = group.n;
        let lengths: Vec<usize> = if group.kind.is_second_type() {
            if n == 1 && fields.len() == 2 {
                vec![1, 1]
            } else {
                vec![1, n - 1, 1, n - 1]
            }
        } else {
            vec![n, n, 1]
        };
        if fields.len() != lengths.len() {
            return Err(Error::parse(
                open,
                format!(
                    "expected {} '|'-separated fields for {group}",
                    lengths.len()
                ),
            ));
        }
        let mut coords = Vec::new();
        for ((pos, f), want) in fields.into_iter().zip(lengths) {
            if f.len() != want {
                return Err(Error::parse(pos, format!("expected {want} entries")));
            }
            coords.extend(f);
        }
        group.element(&coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(
            el("es1(3,1):[1|0|0]")
                .multiply(&el("es1(3,1):[0|1|0]"))
                .unwrap(),
            el("es1(3,1):[1|1|1]")
        );
        assert_eq!(
            el("es2(3,1):[1|0]")
                .multiply(&el("es2(3,1):[0|1]"))
                .unwrap(),
            el("es2(3,1):[4|1]")
        );
        let g = el("es2(3,2):[5|1|2|2]");
        assert_eq!(g.multiply(&g.group().identity()).unwrap(), g);
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let a = el("es1(3,1):[1|0|0]");
        let b = el("es1(5,1):[1|0|0]");
        assert!(matches!(a.multiply(&b), Err(Error::Context(_))));
        assert!(matches!(a.commutator(&b), Err(Error::Context(_))));
    }

    #[test]
    fn inverse_and_power_examples() {
        assert_eq!(el("es1(3,1):[1|0|0]").inverse(), el("es1(3,1):[2|0|0]"));
        assert_eq!(el("es2(3,1):[1|0]").inverse(), el("es2(3,1):[8|0]"));
        let g = el("es2(3,2):[4|2|1|1]");
        assert!(g.power(0).is_identity());
        assert_eq!(g.power(-1), g.inverse());
        assert_eq!(g.power(3), g.multiply(&g).unwrap().multiply(&g).unwrap());
    }

    #[test]
    fn commutator_examples() {
        let c = el("es1(3,1):[1|0|0]")
            .commutator(&el("es1(3,1):[0|1|0]"))
            .unwrap();
        assert_eq!(c, el("es1(3,1):[0|0|1]"));
        let c = el("es2(3,1):[1|0]")
            .commutator(&el("es2(3,1):[0|1]"))
            .unwrap();
        assert_eq!(c, el("es2(3,1):[3|0]"));
        assert_eq!(c, el("es2(3,1):[1|0]").power(3));
        let g = el("es1(3,2):[1,2|0,1|2]");
        assert!(g.commutator(&g).unwrap().is_identity());
    }

    #[test]
    fn order_and_center_examples() {
        assert_eq!(el("es2(3,1):[1|0]").order(), 9);
        assert_eq!(el("es2(3,1):[3|0]").order(), 3);
        assert!(el("es1(3,1):[0|0|2]").is_central());
        assert!(!el("es1(3,1):[1|0|2]").is_central());
        assert_eq!(GroupId::es1(3, 1).unwrap().identity().order(), 1);
    }

    #[test]
    fn lambda_delta_examples() {
        assert_eq!(
            el("es1t(3,1):[0|0|2]").lambda_iso().unwrap(),
            el("es1(3,1):[0|0|2]")
        );
        assert_eq!(
            el("es1t(3,1):[1|1|0]").lambda_iso().unwrap(),
            el("es1(3,1):[1|1|2]")
        );
        assert_eq!(
            el("es2t(3,1):[1|1]").delta_iso().unwrap(),
            el("es2(3,1):[7|1]")
        );
        assert!(matches!(
            el("es1(3,1):[1|1|0]").lambda_iso(),
            Err(Error::Context(_))
        ));
    }

    #[test]
    fn quotient_and_form_examples() {
        let f = el("es1(3,1):[1|0|0]")
            .symplectic_f(&el("es1(3,1):[0|1|0]"))
            .unwrap();
        assert_eq!(f.value(), 1);
        let g = el("es2(3,2):[4|1|2|0]");
        assert!(g.symplectic_f(&g).unwrap().is_zero());
        assert_eq!(el("es2(3,1):[4|2]").quotient_coords().0.as_slice(), &[1, 2]);
    }

    #[test]
    fn enumeration_sizes_and_order() {
        let caps = Caps::default();
        for (g, size) in [
            (GroupId::es1(3, 1).unwrap(), 27),
            (GroupId::es2(3, 2).unwrap(), 243),
            (GroupId::es1(5, 1).unwrap(), 125),
        ] {
            let all: Vec<_> = g.elements(&caps).unwrap().collect();
            assert_eq!(all.len(), size);
            assert!(all.windows(2).all(|w| w[0].coords() < w[1].coords()));
            for (i, e) in all.iter().enumerate() {
                assert_eq!(g.index_of(e), i as u64);
            }
        }
        let tight = Caps {
            elements: 26,
            ..Caps::default()
        };
        assert!(matches!(
            GroupId::es1(3, 1).unwrap().elements(&tight).err(),
            Some(Error::Resource { .. })
        ));
    }

    #[test]
    fn group_validation() {
        assert!(GroupId::es1(2, 1).is_err());
        assert!(GroupId::es1(15, 1).is_err());
        assert!(GroupId::es2(3, 0).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "es1(3,2):[1,0|2,1|0]",
            "es2(5,1):[24|3]",
            "es2(3,3):[8|1,2|0|2,2]",
            "es1t(3,1):[1|2|0]",
        ] {
            assert_eq!(el(s).to_string(), s);
        }
        assert_eq!(el("es2(3,1):[10||4|]").to_string(), "es2(3,1):[1|1]");
        assert_eq!(
            el(" es1(3,1) : [ -1 | 4 | 3 ] ").to_string(),
            "es1(3,1):[2|1|0]"
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = "es1(3,1):[1|0]".parse::<GroupElement>().unwrap_err();
        assert!(matches!(err, Error::Parse { position: 10, .. }), "{err:?}");
        let err = "es9(3,1):[1|0|0]".parse::<GroupElement>().unwrap_err();
        assert!(matches!(err, Error::Parse { position: 0, .. }));
        let err = "es1(3,1):[1|x|0]".parse::<GroupElement>().unwrap_err();
        assert!(matches!(err, Error::Parse { position: 12, .. }), "{err:?}");
        assert!(matches!(
            "es1(4,1):[1|0|0]".parse::<GroupElement>(),
            Err(Error::Domain(_))
        ));
    }
}
