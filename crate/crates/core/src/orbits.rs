//! Automorphism orbits, endomorphic images and the degeneration relation.
//!
//! Classification uses closed-form membership tests only; the brute-force
//! partitions and image sets are kept separate for cross-checking.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{Caps, Execution};
use crate::group::{GroupElement, GroupId, Payload};
use crate::modular::{BigCount, FpMatrix, FpScalar, FpVector, Zp2Scalar};
use crate::morphism::{build_endo_es2, Endo2Params, Morphism, MorphismKind, MorphismSpace};

/// Names of the automorphism orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitLabel {
    Identity,
    CentralNonId,
    Es1NonCentral,
    /// `O_b = p(Z/p^2) x {0} x {b} x {0}` for `b != 0`.
    Es2Ob(u32),
    Es2OrderP2,
    Es2HMinusK,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Identity => f.write_str("IDENTITY"),
            OrbitLabel::CentralNonId => f.write_str("CENTRAL_NONID"),
            OrbitLabel::Es1NonCentral => f.write_str("ES1_NONCENTRAL"),
            OrbitLabel::Es2Ob(b) => write!(f, "ES2_OB({b})"),
            OrbitLabel::Es2OrderP2 => f.write_str("ES2_ORDER_P2"),
            OrbitLabel::Es2HMinusK => f.write_str("ES2_H_MINUS_K"),
        }
    }
}

impl Serialize for OrbitLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `H`: first coordinate divisible by `p`.
fn in_h(g: &GroupElement) -> bool {
    match g.payload() {
        Payload::Second(e) => e.u1.reduce().is_zero(),
        Payload::First(_) => false,
    }
}

/// `K`: in `H` with the `u`- and `w`-blocks zero.
fn in_k(g: &GroupElement) -> bool {
    match g.payload() {
        Payload::Second(e) => e.u1.reduce().is_zero() && e.u.is_zero() && e.w.is_zero(),
        Payload::First(_) => false,
    }
}

/// The orbit of `g` under `Aut(G)`, from coordinates alone.
pub fn classify(g: &GroupElement) -> OrbitLabel {
    if g.is_identity() {
        return OrbitLabel::Identity;
    }
    if g.is_central() {
        return OrbitLabel::CentralNonId;
    }
    match g.payload() {
        Payload::First(_) => OrbitLabel::Es1NonCentral,
        Payload::Second(e) => {
            if in_k(g) {
                OrbitLabel::Es2Ob(e.w1.value())
            } else if !in_h(g) {
                OrbitLabel::Es2OrderP2
            } else {
                OrbitLabel::Es2HMinusK
            }
        }
    }
}

/// Every orbit label of `group`, in display order.
pub fn orbit_labels(group: &GroupId) -> Vec<OrbitLabel> {
    let mut out = vec![OrbitLabel::Identity, OrbitLabel::CentralNonId];
    if group.kind().is_second_type() {
        out.extend((1..group.p()).map(OrbitLabel::Es2Ob));
        out.push(OrbitLabel::Es2OrderP2);
        if group.n() > 1 {
            out.push(OrbitLabel::Es2HMinusK);
        }
    } else {
        out.push(OrbitLabel::Es1NonCentral);
    }
    out
}

fn check_label(label: OrbitLabel, group: &GroupId) -> Result<()> {
    let legal = match label {
        OrbitLabel::Es2Ob(b) => {
            group.kind().is_second_type() && b % group.p() != 0 && b < group.p()
        }
        other => orbit_labels(group).contains(&other),
    };
    if legal {
        Ok(())
    } else {
        Err(Error::Domain(format!("{label} is not an orbit of {group}")))
    }
}

/// Size of the orbit as an expression in `p` and `n`.
pub fn cardinality_formula(label: OrbitLabel) -> &'static str {
    match label {
        OrbitLabel::Identity => "1",
        OrbitLabel::CentralNonId => "p-1",
        OrbitLabel::Es1NonCentral => "p^(2n+1)-p",
        OrbitLabel::Es2Ob(_) => "p",
        OrbitLabel::Es2OrderP2 => "p^(2n+1)-p^(2n)",
        OrbitLabel::Es2HMinusK => "p^(2n)-p^2",
    }
}

/// Size of the orbit.
pub fn orbit_cardinality(label: OrbitLabel, group: &GroupId) -> Result<BigCount> {
    check_label(label, group)?;
    let p = group.p() as u64;
    let n = group.n() as u32;
    let pw = |e: u32| BigCount::pow(p, e).0;
    let v = match label {
        OrbitLabel::Identity => pw(0),
        OrbitLabel::CentralNonId => pw(1) - 1u32,
        OrbitLabel::Es1NonCentral => pw(2 * n + 1) - pw(1),
        OrbitLabel::Es2Ob(_) => pw(1),
        OrbitLabel::Es2OrderP2 => pw(2 * n + 1) - pw(2 * n),
        OrbitLabel::Es2HMinusK => pw(2 * n) - pw(2),
    };
    Ok(BigCount(v))
}

/// A representative of each orbit.
pub fn representative(label: OrbitLabel, group: &GroupId) -> Result<GroupElement> {
    check_label(label, group)?;
    let n = group.n();
    let mut c = vec![0i64; group.coordinate_count()];
    let second = group.kind().is_second_type();
    match label {
        OrbitLabel::Identity => {}
        OrbitLabel::CentralNonId => {
            return Ok(group.central_generator());
        }
        OrbitLabel::Es1NonCentral | OrbitLabel::Es2OrderP2 => c[0] = 1,
        OrbitLabel::Es2Ob(b) => c[n] = b as i64,
        OrbitLabel::Es2HMinusK => c[1] = 1,
    }
    debug_assert!(second || !matches!(label, OrbitLabel::Es2Ob(_)));
    group.element(&c)
}

/// The set `{σ(g) : σ in End(G)}`, by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ImageClass {
    Trivial,
    Center,
    SubgroupH,
    WholeGroup,
}

impl fmt::Display for ImageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImageClass::Trivial => "TRIVIAL",
            ImageClass::Center => "CENTER",
            ImageClass::SubgroupH => "SUBGROUP_H",
            ImageClass::WholeGroup => "WHOLE_GROUP",
        })
    }
}

impl ImageClass {
    pub fn contains(self, g: &GroupElement) -> bool {
        match self {
            ImageClass::Trivial => g.is_identity(),
            ImageClass::Center => g.is_central(),
            ImageClass::SubgroupH => in_h(g),
            ImageClass::WholeGroup => true,
        }
    }

    /// `1`, `p`, `p^{2n}` or `p^{2n+1}`.
    pub fn cardinality(self, group: &GroupId) -> BigCount {
        let p = group.p() as u64;
        let n = group.n() as u32;
        match self {
            ImageClass::Trivial => BigCount::one(),
            ImageClass::Center => BigCount::pow(p, 1),
            ImageClass::SubgroupH => BigCount::pow(p, 2 * n),
            ImageClass::WholeGroup => BigCount::pow(p, 2 * n + 1),
        }
    }
}

pub fn endo_image_class(g: &GroupElement) -> ImageClass {
    if g.is_identity() {
        ImageClass::Trivial
    } else if g.is_central() {
        ImageClass::Center
    } else if in_h(g) {
        ImageClass::SubgroupH
    } else {
        ImageClass::WholeGroup
    }
}

/// `{σ(g)}` over every enumerated endomorphism.
pub fn endo_image_set_bruteforce(g: &GroupElement, caps: &Caps) -> Result<BTreeSet<GroupElement>> {
    let space = MorphismSpace::endomorphisms(g.group(), caps)?;
    space.iter().map(|m| m.apply(g)).collect()
}

/// `g` degenerates to `h`: some endomorphism sends `g` to `h`.
pub fn degeneration(g: &GroupElement, h: &GroupElement) -> Result<bool> {
    if g.group() != h.group() {
        return Err(Error::Context(format!(
            "elements of {} and {}",
            g.group(),
            h.group()
        )));
    }
    Ok(endo_image_class(g).contains(h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    PartialOrder,
    NoPartialOrder,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::PartialOrder => "PARTIAL_ORDER",
            Verdict::NoPartialOrder => "NO_PARTIAL_ORDER",
        })
    }
}

/// Two elements that are mutually endomorphic but not automorphic.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub g: GroupElement,
    pub h: GroupElement,
    /// An endomorphism sending `g` to `h`.
    pub forward: Morphism,
    /// An endomorphism sending `h` to `g`.
    pub backward: Morphism,
    /// Number of automorphisms checked, none of which sends `g` to `h`.
    pub automorphisms_checked: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegenerationReport {
    pub group: GroupId,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Pairs `(x, y)` of distinct orbits with `x` degenerating to `y`.
    pub order_chains: Vec<(OrbitLabel, OrbitLabel)>,
    /// Orbits from smallest to largest when the relation is a total order.
    pub total_chain: Option<Vec<OrbitLabel>>,
}

/// Decides whether degeneration induces a partial order on orbits. For the
/// second type the witness pair is taken from `O_1` and `O_2`; mutual
/// degeneration is exhibited by explicit endomorphisms and non-automorphy is
/// checked against every automorphism.
pub fn partial_order_report(
    group: &GroupId,
    exec: Execution,
    caps: &Caps,
) -> Result<DegenerationReport> {
    let labels = orbit_labels(group);
    let reps: Vec<GroupElement> = labels
        .iter()
        .map(|&l| representative(l, group))
        .collect::<Result<_>>()?;
    let mut order_chains = Vec::new();
    let mut mutual = None;
    for (i, x) in reps.iter().enumerate() {
        for (j, y) in reps.iter().enumerate() {
            if i != j && degeneration(x, y)? {
                order_chains.push((labels[i], labels[j]));
                if mutual.is_none() && i < j && degeneration(y, x)? {
                    mutual = Some((i, j));
                }
            }
        }
    }
    if mutual.is_none() {
        let mut chain = labels.clone();
        let below = |l: &OrbitLabel| order_chains.iter().filter(|(x, _)| x == l).count();
        chain.sort_by_key(below);
        let total = chain
            .windows(2)
            .all(|w| order_chains.contains(&(w[1], w[0])));
        return Ok(DegenerationReport {
            group: *group,
            verdict: Verdict::PartialOrder,
            witness: None,
            order_chains,
            total_chain: total.then_some(chain),
        });
    }
    let witness = ob_witness(group, exec, caps)?;
    Ok(DegenerationReport {
        group: *group,
        verdict: Verdict::NoPartialOrder,
        witness: Some(witness),
        order_chains,
        total_chain: None,
    })
}

/// The endomorphism `(p t1, 0, b1, 0) |-> (p t2, 0, b2, 0)`:
/// `A = C = D = 0`, `B = diag(b2/b1, 0, ...)`, `β_1 = t2/b1`, `a = 0`.
fn ob_endomorphism(group: &GroupId, b1: FpScalar, b2: FpScalar, t2: FpScalar) -> Result<Morphism> {
    let p = group.p();
    let n = group.n();
    let inv = b1.inv()?;
    let zero = FpMatrix::zeros(p, n, n);
    let mut b = zero.clone();
    b.set(0, 0, b2 * inv);
    let mut beta = FpVector::zeros(p, n);
    beta.set(0, t2 * inv);
    build_endo_es2(
        Endo2Params {
            a: zero.clone(),
            b,
            c: zero.clone(),
            d: zero,
            alpha: FpVector::zeros(p, n - 1),
            beta,
            lift: Zp2Scalar::zero(p),
        },
        *group,
    )
}

fn ob_witness(group: &GroupId, exec: Execution, caps: &Caps) -> Result<Witness> {
    let p = group.p();
    let plain = group.with_kind(crate::group::GroupKind::Es2);
    let g = representative(OrbitLabel::Es2Ob(1), &plain)?;
    let h = representative(OrbitLabel::Es2Ob(2), &plain)?;
    let (one, two, zero) = (FpScalar::new(1, p), FpScalar::new(2, p), FpScalar::zero(p));
    let forward = ob_endomorphism(&plain, one, two, zero)?;
    let backward = ob_endomorphism(&plain, two, one, zero)?;
    if forward.apply(&g)? != h || backward.apply(&h)? != g {
        return Err(Error::Domain(
            "witness endomorphisms do not map as claimed".into(),
        ));
    }
    let autos = MorphismSpace::new(plain, MorphismKind::Automorphisms, exec, caps)?;
    let hits = exec.sum_range(0..autos.len(), |i| {
        (autos.get(i).apply_unchecked(&g) == h) as u64
    });
    if hits != 0 {
        return Err(Error::Domain(format!(
            "{hits} automorphisms send {g} to {h}"
        )));
    }
    Ok(Witness {
        g,
        h,
        forward,
        backward,
        automorphisms_checked: autos.len(),
    })
}

/// The degeneration relation on orbits computed by exhausting `End(G)`:
/// pairs of distinct orbit labels `(x, y)` with `σ(x-rep) = y-element` for
/// some `σ`.
pub fn partial_order_bruteforce(
    group: &GroupId,
    caps: &Caps,
) -> Result<Vec<(OrbitLabel, OrbitLabel)>> {
    let labels = orbit_labels(group);
    let space = MorphismSpace::endomorphisms(*group, caps)?;
    let mut pairs = Vec::new();
    for &x in &labels {
        let rep = representative(x, group)?;
        let images: BTreeSet<OrbitLabel> = space
            .iter()
            .map(|m| classify(&m.apply_unchecked(&rep)))
            .collect();
        for &y in &labels {
            if y != x && images.contains(&y) {
                pairs.push((x, y));
            }
        }
    }
    Ok(pairs)
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// The exact orbit partition under every enumerated automorphism. Classes are
/// sorted by their smallest element index; elements inside a class by index.
pub fn orbits_bruteforce(
    group: &GroupId,
    exec: Execution,
    caps: &Caps,
) -> Result<Vec<Vec<GroupElement>>> {
    let autos = MorphismSpace::new(*group, MorphismKind::Automorphisms, exec, caps)?;
    let elements: Vec<GroupElement> = group.elements(caps)?.collect();
    let size = elements.len() as u32;
    let fresh = || (0..size).collect::<Vec<u32>>();
    let parent = exec.fold_range(
        0..autos.len(),
        fresh,
        |mut parent, i| {
            let sigma = autos.get(i);
            for (idx, g) in elements.iter().enumerate() {
                let img = group.index_of(&sigma.apply_unchecked(g)) as u32;
                union(&mut parent, idx as u32, img);
            }
            parent
        },
        |mut a, mut b| {
            for x in 0..size {
                let r = find(&mut b, x);
                union(&mut a, x, r);
            }
            a
        },
    );
    let mut parent = parent;
    let mut classes: std::collections::BTreeMap<u32, Vec<GroupElement>> = Default::default();
    for (idx, g) in elements.into_iter().enumerate() {
        let r = find(&mut parent, idx as u32);
        classes.entry(r).or_default().push(g);
    }
    Ok(classes.into_values().collect())
}
