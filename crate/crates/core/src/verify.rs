//! Named self-checks run by `extraspecial verify`. The quick suite covers
//! `(p, n) = (3, 1)`; the full suite adds `(5, 1)` and `(3, 2)`.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use serde::Serialize;

use crate::counting::{self, Quantity};
use crate::exec::{Caps, Execution};
use crate::group::{GroupElement, GroupId, GroupKind};
use crate::modular::BigCount;
use crate::morphism::{MorphismKind, MorphismSpace};
use crate::oracle::{self, is_bijective_table, CayleyTable};
use crate::orbits::{self, classify, Verdict};
use crate::symplectic::is_im_phi2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = Box<dyn Fn(Execution, &Caps) -> std::result::Result<String, String>>;

fn gid(kind: GroupKind, p: u64, n: usize) -> GroupId {
    GroupId::new(kind, p, n).expect("valid group")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn group_axioms(g: GroupId, caps: &Caps) -> std::result::Result<String, String> {
    let els: Vec<GroupElement> = g.elements(caps).map_err(err)?.collect();
    let e = g.identity();
    for a in &els {
        if a.multiply(&e).map_err(err)? != *a
            || !a.multiply(&a.inverse()).map_err(err)?.is_identity()
        {
            return Err(format!("identity/inverse law fails at {a}"));
        }
        for b in &els {
            let ab = a.multiply(b).map_err(err)?;
            if !a.commutator(b).map_err(err)?.is_central() {
                return Err(format!("[{a}, {b}] not central"));
            }
            for c in els.iter().step_by(if els.len() > 30 { 7 } else { 1 }) {
                if ab.multiply(c).map_err(err)?
                    != a.multiply(&b.multiply(c).map_err(err)?).map_err(err)?
                {
                    return Err(format!("associativity fails at {a}, {b}, {c}"));
                }
            }
        }
    }
    Ok(format!("{} elements", els.len()))
}

fn shear_isomorphism(g: GroupId, caps: &Caps) -> std::result::Result<String, String> {
    let tilde = match g.kind() {
        GroupKind::Es1 => g.with_kind(GroupKind::Es1Tilde),
        _ => g.with_kind(GroupKind::Es2Tilde),
    };
    let map = |x: &GroupElement| {
        if tilde.kind() == GroupKind::Es1Tilde {
            x.lambda_iso()
        } else {
            x.delta_iso()
        }
    };
    let els: Vec<GroupElement> = tilde.elements(caps).map_err(err)?.collect();
    let mut seen = HashSet::new();
    for a in &els {
        let fa = map(a).map_err(err)?;
        seen.insert(fa.clone());
        for b in &els {
            let lhs = map(&a.multiply(b).map_err(err)?).map_err(err)?;
            if lhs != fa.multiply(&map(b).map_err(err)?).map_err(err)? {
                return Err(format!("not a homomorphism at {a}, {b}"));
            }
        }
    }
    if seen.len() != els.len() {
        return Err("not injective".into());
    }
    Ok(format!("{} -> {} bijective homomorphism", tilde, g))
}

fn endo_paths_agree(
    g: GroupId,
    exec: Execution,
    caps: &Caps,
) -> std::result::Result<String, String> {
    let oracle_tables = oracle::enumerate_homs_by_generators(g, exec, caps).map_err(err)?;
    let space = MorphismSpace::new(g, MorphismKind::Endomorphisms, exec, caps).map_err(err)?;
    let mut tables = exec.map_range(0..space.len(), |i| {
        space.get(i).table(caps).expect("within cap")
    });
    tables.sort();
    let before = tables.len();
    tables.dedup();
    if before != tables.len() {
        return Err("parametrization is not injective".into());
    }
    if tables != oracle_tables {
        return Err(format!(
            "parametrized {} vs oracle {} endomorphisms",
            tables.len(),
            oracle_tables.len()
        ));
    }
    let expect = counting::end_order(&g);
    if BigCount::from(tables.len() as u64) != expect {
        return Err(format!("{} endomorphisms, formula {expect}", tables.len()));
    }
    Ok(format!("{} endomorphisms on both paths", tables.len()))
}

fn autos_bijective(
    g: GroupId,
    exec: Execution,
    caps: &Caps,
) -> std::result::Result<String, String> {
    let autos = MorphismSpace::new(g, MorphismKind::Automorphisms, exec, caps).map_err(err)?;
    let bad = exec.sum_range(0..autos.len(), |i| {
        (!is_bijective_table(&autos.get(i).table(caps).expect("within cap"))) as u64
    });
    if bad > 0 {
        return Err(format!("{bad} automorphisms are not bijective"));
    }
    let expect = counting::aut_order(&g);
    if BigCount::from(autos.len()) != expect {
        return Err(format!("{} automorphisms, formula {expect}", autos.len()));
    }
    Ok(format!("{} automorphisms, all bijective", autos.len()))
}

fn orbit_partition(
    g: GroupId,
    exec: Execution,
    caps: &Caps,
) -> std::result::Result<String, String> {
    let classes = orbits::orbits_bruteforce(&g, exec, caps).map_err(err)?;
    let mut sizes = Vec::new();
    for class in &classes {
        let label = classify(&class[0]);
        if class.iter().any(|x| classify(x) != label) {
            return Err(format!("orbit of {} splits across labels", class[0]));
        }
        let formula = orbits::orbit_cardinality(label, &g).map_err(err)?;
        if formula != BigCount::from(class.len() as u64) {
            return Err(format!(
                "{label}: {} elements, formula {formula}",
                class.len()
            ));
        }
        sizes.push(class.len());
    }
    if classes.len() != orbits::orbit_labels(&g).len() {
        return Err(format!("{} orbits", classes.len()));
    }
    Ok(format!("orbit sizes {sizes:?}"))
}

fn quantity_matches(
    q: Quantity,
    family: Option<GroupKind>,
    p: u64,
    n: usize,
    ks: bool,
    exec: Execution,
    caps: &Caps,
) -> std::result::Result<String, String> {
    let k_values: Vec<Option<usize>> = if ks {
        (0..=n).map(Some).collect()
    } else {
        vec![None]
    };
    let mut seen = Vec::new();
    for k in k_values {
        let r =
            counting::CountReport::compute(q, family, p, n, k, true, exec, caps).map_err(err)?;
        if r.matches != Some(true) {
            return Err(format!(
                "{q}(p={p},n={n},k={k:?}): formula {} oracle {:?} ({})",
                r.formula_value,
                r.oracle_value.map(|v| v.to_string()),
                r.detail.unwrap_or_default()
            ));
        }
        seen.push(r.formula_value.to_string());
    }
    Ok(format!("{q} = {}", seen.join(",")))
}

fn consistency_identity() -> std::result::Result<String, String> {
    let mut checked = 0;
    for p in (3u64..=97).filter(|&q| crate::modular::is_prime(q)) {
        for n in 1..=6 {
            for kind in [GroupKind::Es1, GroupKind::Es2] {
                let g = gid(kind, p, n);
                let singular = if kind.is_second_type() {
                    counting::count_y(p as u32, n)
                } else {
                    counting::count_x(p as u32, n)
                };
                let rhs = counting::aut_order(&g) + BigCount::pow(p, 2 * n as u32) * singular;
                if counting::end_order(&g) != rhs {
                    return Err(format!("identity fails for {g}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} groups"))
}

fn degeneration_reports(exec: Execution, caps: &Caps) -> std::result::Result<String, String> {
    let r1 = orbits::partial_order_report(&gid(GroupKind::Es1, 3, 1), exec, caps).map_err(err)?;
    if r1.verdict != Verdict::PartialOrder || r1.total_chain.as_ref().map(Vec::len) != Some(3) {
        return Err("ES1(3,1) is not totally ordered".into());
    }
    let r2 = orbits::partial_order_report(&gid(GroupKind::Es2, 3, 1), exec, caps).map_err(err)?;
    let Some(w) = r2.witness.filter(|_| r2.verdict == Verdict::NoPartialOrder) else {
        return Err("ES2(3,1) reported a partial order".into());
    };
    Ok(format!(
        "ES1 chain of 3; ES2 witness {} <-> {} ({} automorphisms checked)",
        w.g, w.h, w.automorphisms_checked
    ))
}

fn scalar_law(g: GroupId, exec: Execution, caps: &Caps) -> std::result::Result<String, String> {
    let space = MorphismSpace::new(g, MorphismKind::Endomorphisms, exec, caps).map_err(err)?;
    let els: Vec<GroupElement> = g.elements(caps).map_err(err)?.collect();
    let bad = exec.sum_range(0..space.len(), |i| {
        let m = space.get(i);
        let images: Vec<GroupElement> = els
            .iter()
            .map(|x| m.apply(x).expect("same group"))
            .collect();
        let mut fails = 0;
        for (a, fa) in els.iter().zip(&images) {
            for (b, fb) in els.iter().zip(&images) {
                let lhs = fa.symplectic_f(fb).expect("same group");
                if lhs != m.scalar() * a.symplectic_f(b).expect("same group") {
                    fails += 1;
                }
            }
        }
        fails
    });
    if bad > 0 {
        return Err(format!("{bad} violations"));
    }
    Ok(format!(
        "{} endomorphisms x {} pairs",
        space.len(),
        els.len() * els.len()
    ))
}

fn sigma_d(g: GroupId, exec: Execution, caps: &Caps) -> std::result::Result<String, String> {
    let autos = MorphismSpace::new(g, MorphismKind::Automorphisms, exec, caps).map_err(err)?;
    let bad = autos
        .iter()
        .filter(|m| m.sigma_d_consequences_hold() != Some(true))
        .count();
    if bad > 0 {
        return Err(format!("{bad} automorphisms violate b_11=1, b_j1=c_j1=0"));
    }
    Ok(format!("{} automorphisms", autos.len()))
}

fn im_phi2(n: usize, exec: Execution, caps: &Caps) -> std::result::Result<String, String> {
    let g = gid(GroupKind::Es2, 3, n);
    let autos = MorphismSpace::new(g, MorphismKind::Automorphisms, exec, caps).map_err(err)?;
    let set: HashSet<_> = autos
        .iter()
        .map(|m| m.induced_quotient_matrix().matrix().clone())
        .collect();
    if let Some(m) = set.iter().find(|m| !is_im_phi2(m)) {
        return Err(format!("{m} fails the characterization"));
    }
    let expect = counting::im_phi2_order(n, 3);
    if BigCount::from(set.len() as u64) != expect {
        return Err(format!("{} matrices, formula {expect}", set.len()));
    }
    Ok(format!("{} matrices", set.len()))
}

fn cayley_generation(
    g: GroupId,
    exec: Execution,
    caps: &Caps,
) -> std::result::Result<String, String> {
    let t = CayleyTable::new(g, exec, caps).map_err(err)?;
    if !oracle::PresentationSpec::standard(g).generates(&t) {
        return Err("generators do not generate".into());
    }
    Ok(format!("{} elements reached", t.order()))
}

/// The checks in `suite`, in run order.
pub fn checks(suite: Suite) -> Vec<(String, Check)> {
    use GroupKind::{Es1, Es2};
    let mut out: Vec<(String, Check)> = Vec::new();
    let mut add = |name: String, f: Check| out.push((name, f));
    let mut small: Vec<(u64, usize)> = vec![(3, 1)];
    if suite == Suite::Full {
        small.extend([(5, 1), (3, 2)]);
    }
    for &(p, n) in &small {
        for kind in [Es1, Es2] {
            let g = gid(kind, p, n);
            add(
                format!("group axioms {g}"),
                Box::new(move |_, c| group_axioms(g, c)),
            );
            add(
                format!("presentation generates {g}"),
                Box::new(move |e, c| cayley_generation(g, e, c)),
            );
            add(
                format!("tilde isomorphism {g}"),
                Box::new(move |_, c| shear_isomorphism(g, c)),
            );
        }
    }
    for &(p, n) in small.iter().filter(|(_, n)| *n == 1) {
        for kind in [Es1, Es2] {
            let g = gid(kind, p, n);
            add(
                format!("endomorphisms {g}"),
                Box::new(move |e, c| endo_paths_agree(g, e, c)),
            );
        }
    }
    for kind in [Es1, Es2] {
        let g = gid(kind, 3, 1);
        add(
            format!("automorphisms {g}"),
            Box::new(move |e, c| autos_bijective(g, e, c)),
        );
        add(
            format!("orbits {g}"),
            Box::new(move |e, c| orbit_partition(g, e, c)),
        );
        add(
            format!("scalar law {g}"),
            Box::new(move |e, c| scalar_law(g, e, c)),
        );
    }
    if suite == Suite::Full {
        let g = gid(Es2, 3, 2);
        add(
            format!("orbits {g}"),
            Box::new(move |e, c| orbit_partition(g, e, c)),
        );
        add(
            format!("automorphism shape {g}"),
            Box::new(move |e, c| sigma_d(g, e, c)),
        );
    }
    add(
        "automorphism shape es2(3,1)".into(),
        Box::new(|e, c| sigma_d(gid(Es2, 3, 1), e, c)),
    );
    for &(p, n) in &small {
        for q in [Quantity::AlphaK, Quantity::BetaK, Quantity::GammaK] {
            add(
                format!("{q} p={p} n={n}"),
                Box::new(move |e, c| quantity_matches(q, None, p, n, true, e, c)),
            );
        }
        for q in [Quantity::CountX, Quantity::CountY, Quantity::SpOrder] {
            add(
                format!("{q} p={p} n={n}"),
                Box::new(move |e, c| quantity_matches(q, None, p, n, false, e, c)),
            );
        }
    }
    add(
        "end_order = aut_order + p^2n * count".into(),
        Box::new(|_, _| consistency_identity()),
    );
    add("degeneration order".into(), Box::new(degeneration_reports));
    add("im_phi2 n=1".into(), Box::new(|e, c| im_phi2(1, e, c)));
    if suite == Suite::Full {
        add("im_phi2 n=2".into(), Box::new(|e, c| im_phi2(2, e, c)));
    }
    out
}

/// Runs every check in `suite`.
pub fn run_suite(suite: Suite, exec: Execution, caps: &Caps) -> Vec<CheckOutcome> {
    checks(suite)
        .into_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let result = check(exec, caps);
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match result {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                name,
                passed,
                detail,
                seconds,
            }
        })
        .collect()
}

/// Orbit sizes keyed by label, as produced by the brute-force partition.
pub fn orbit_sizes(
    g: &GroupId,
    exec: Execution,
    caps: &Caps,
) -> crate::Result<BTreeMap<String, usize>> {
    Ok(orbits::orbits_bruteforce(g, exec, caps)?
        .into_iter()
        .map(|c| (classify(&c[0]).to_string(), c.len()))
        .collect())
}
