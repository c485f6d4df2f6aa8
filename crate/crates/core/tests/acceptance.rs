//! Acceptance run: one PASS/FAIL line per criterion with its wall time and
//! budget. Exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use extraspecial::counting::{self, Quantity};
use extraspecial::oracle::{
    self, is_bijective_table, is_homomorphism_table, CayleyTable, MatrixPredicate,
};
use extraspecial::orbits::{self, classify, Verdict};
use extraspecial::symplectic::is_im_phi2;
use extraspecial::{
    BigCount, Caps, Execution, GroupElement, GroupId, GroupKind, MorphismKind, MorphismSpace,
    OrbitLabel,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn es1(p: u64, n: usize) -> GroupId {
    GroupId::es1(p, n).unwrap()
}

fn es2(p: u64, n: usize) -> GroupId {
    GroupId::es2(p, n).unwrap()
}

fn endo_both_paths(g: GroupId, expected: u64, exec: Execution, caps: &Caps) -> Outcome {
    let space = MorphismSpace::new(g, MorphismKind::Endomorphisms, exec, caps).map_err(e)?;
    let mut param: Vec<Vec<u32>> =
        exec.map_range(0..space.len(), |i| space.get(i).table(caps).unwrap());
    param.sort();
    param.dedup();
    let oracle = oracle::enumerate_homs_by_generators(g, exec, caps).map_err(e)?;
    let cayley = CayleyTable::new(g, exec, caps).map_err(e)?;
    ensure(
        oracle.iter().all(|t| is_homomorphism_table(t, &cayley)),
        || "oracle produced a non-homomorphism".into(),
    )?;
    ensure(param.len() as u64 == space.len(), || {
        "parametrization repeats a map".into()
    })?;
    ensure(param.len() as u64 == expected, || {
        format!("parametrized {} != {expected}", param.len())
    })?;
    ensure(oracle.len() as u64 == expected, || {
        format!("oracle {} != {expected}", oracle.len())
    })?;
    ensure(param == oracle, || "the two sets of maps differ".into())?;
    Ok(format!("{g}: {expected} on both paths"))
}

fn criterion_1(exec: Execution, caps: &Caps) -> Outcome {
    endo_both_paths(es1(3, 1), 729, exec, caps)
}

fn criterion_2(exec: Execution, caps: &Caps) -> Outcome {
    endo_both_paths(es2(3, 1), 135, exec, caps)
}

fn criterion_3(exec: Execution, caps: &Caps) -> Outcome {
    let mut parts = Vec::new();
    for (g, expected) in [(es1(3, 1), 432u64), (es2(3, 1), 54)] {
        let autos = MorphismSpace::new(g, MorphismKind::Automorphisms, exec, caps).map_err(e)?;
        ensure(autos.len() == expected, || {
            format!("{g}: {} automorphisms", autos.len())
        })?;
        let tables: Vec<Vec<u32>> =
            exec.map_range(0..autos.len(), |i| autos.get(i).table(caps).unwrap());
        ensure(tables.iter().all(|t| is_bijective_table(t)), || {
            format!("{g}: non-bijective map")
        })?;
        let distinct: HashSet<&Vec<u32>> = tables.iter().collect();
        ensure(distinct.len() as u64 == expected, || {
            format!("{g}: repeated automorphism")
        })?;
        let homs = oracle::enumerate_homs_by_generators(g, exec, caps).map_err(e)?;
        let bijective = homs.iter().filter(|t| is_bijective_table(t)).count() as u64;
        ensure(bijective == expected, || {
            format!("{g}: oracle finds {bijective} bijections")
        })?;
        parts.push(format!("{g}: {expected}"));
    }
    Ok(parts.join(", "))
}

fn criterion_4(exec: Execution, caps: &Caps) -> Outcome {
    let mut parts = Vec::new();
    let cases: [(GroupId, &[usize]); 3] = [
        (es1(3, 1), &[1, 2, 24]),
        (es2(3, 1), &[1, 2, 3, 3, 18]),
        (es2(3, 2), &[1, 2, 3, 3, 162, 72]),
    ];
    for (g, expected) in cases {
        let classes = orbits::orbits_bruteforce(&g, exec, caps).map_err(e)?;
        let mut by_label: BTreeMap<OrbitLabel, usize> = BTreeMap::new();
        for class in &classes {
            let label = classify(&class[0]);
            ensure(class.iter().all(|x| classify(x) == label), || {
                format!("{g}: orbit of {} mixes labels", class[0])
            })?;
            ensure(by_label.insert(label, class.len()).is_none(), || {
                format!("{g}: label {label} covers two orbits")
            })?;
        }
        let sizes: Vec<usize> = orbits::orbit_labels(&g)
            .iter()
            .map(|l| by_label.get(l).copied().unwrap_or(0))
            .collect();
        ensure(sizes == expected, || format!("{g}: sizes {sizes:?}"))?;
        ensure(
            sizes.iter().sum::<usize>() as u64 == g.order_u64().unwrap(),
            || format!("{g}: sizes do not sum"),
        )?;
        parts.push(format!("{g} {sizes:?}"));
    }
    Ok(parts.join("; "))
}

fn criterion_5(exec: Execution, caps: &Caps) -> Outcome {
    let caps = Caps {
        matrix_scan: caps.matrix_scan.max(3u64.pow(16)),
        ..*caps
    };
    let scans = [
        (
            Quantity::CountX,
            3u32,
            1usize,
            33u64,
            MatrixPredicate::NullForm { inside_v1: false },
        ),
        (
            Quantity::CountY,
            3,
            1,
            9,
            MatrixPredicate::NullForm { inside_v1: true },
        ),
        (
            Quantity::CountX,
            3,
            2,
            252_801,
            MatrixPredicate::NullForm { inside_v1: false },
        ),
    ];
    let mut parts = Vec::new();
    for (q, p, n, expected, pred) in scans {
        let formula = if q == Quantity::CountX {
            counting::count_x(p, n)
        } else {
            counting::count_y(p, n)
        };
        let scanned = oracle::scan_matrices(2 * n, p, pred, exec, &caps).map_err(e)?;
        ensure(
            formula == BigCount::from(expected) && scanned == formula,
            || format!("{q}({p},{n}): formula {formula}, scan {scanned}, expected {expected}"),
        )?;
        parts.push(format!("{q}({p},{n})={expected}"));
    }
    let mut checked = 0;
    for (p, n) in [(3u32, 1usize), (3, 2), (5, 1)] {
        for k in 0..=n {
            let dim = 2 * n;
            let pairs = [
                (
                    "alpha",
                    counting::alpha_k(p, n, k).map_err(e)?,
                    oracle::scan_subspaces(dim, p, k, true, false, exec, &caps).map_err(e)?,
                ),
                (
                    "beta",
                    counting::beta_k(p, n, k).map_err(e)?,
                    oracle::scan_subspaces(dim, p, k, true, true, exec, &caps).map_err(e)?,
                ),
                (
                    "gamma",
                    counting::gamma_k(p, n, k).map_err(e)?,
                    oracle::count_surjections(dim, k, p, exec, &caps).map_err(e)?,
                ),
            ];
            for (name, formula, scan) in pairs {
                ensure(formula == scan, || {
                    format!("{name}_{k}({p},{n}): formula {formula}, scan {scan}")
                })?;
                checked += 1;
            }
        }
    }
    parts.push(format!("{checked} alpha/beta/gamma values"));
    Ok(parts.join(", "))
}

fn criterion_6(_: Execution, _: &Caps) -> Outcome {
    let mut checked = 0;
    for p in (3u32..=97).filter(|&q| (2..q).all(|d| q % d != 0)) {
        for n in 1..=6 {
            for g in [es1(p as u64, n), es2(p as u64, n)] {
                let singular = if g.kind() == GroupKind::Es2 {
                    counting::count_y(p, n)
                } else {
                    counting::count_x(p, n)
                };
                let rhs =
                    counting::aut_order(&g) + BigCount::pow(p as u64, 2 * n as u32) * singular;
                ensure(counting::end_order(&g) == rhs, || {
                    format!("{g}: identity fails")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} groups"))
}

fn criterion_7(exec: Execution, caps: &Caps) -> Outcome {
    let g1 = es1(3, 1);
    let r1 = orbits::partial_order_report(&g1, exec, caps).map_err(e)?;
    ensure(r1.verdict == Verdict::PartialOrder, || {
        "ES1(3,1) verdict".into()
    })?;
    let chain = r1.total_chain.clone().ok_or("ES1(3,1): no total chain")?;
    let labels: BTreeSet<OrbitLabel> = orbits::orbit_labels(&g1).into_iter().collect();
    ensure(
        chain.iter().copied().collect::<BTreeSet<_>>() == labels,
        || format!("chain {chain:?}"),
    )?;
    let brute: BTreeSet<(OrbitLabel, OrbitLabel)> = orbits::partial_order_bruteforce(&g1, caps)
        .map_err(e)?
        .into_iter()
        .collect();
    let reported: BTreeSet<(OrbitLabel, OrbitLabel)> = r1.order_chains.iter().copied().collect();
    ensure(brute == reported, || {
        format!("relation {reported:?} vs exhaustive {brute:?}")
    })?;
    for (i, &a) in chain.iter().enumerate() {
        for &b in &chain[i + 1..] {
            ensure(brute.contains(&(a, b)) != brute.contains(&(b, a)), || {
                format!("{a} and {b} are not strictly comparable")
            })?;
        }
    }

    let g2 = es2(3, 1);
    let r2 = orbits::partial_order_report(&g2, exec, caps).map_err(e)?;
    ensure(r2.verdict == Verdict::NoPartialOrder, || {
        "ES2(3,1) verdict".into()
    })?;
    let w = r2.witness.ok_or("ES2(3,1): no witness")?;
    ensure(w.g != w.h, || "witness pair is trivial".into())?;
    ensure(w.forward.apply(&w.g).map_err(e)? == w.h, || {
        format!("forward does not send {} to {}", w.g, w.h)
    })?;
    ensure(w.backward.apply(&w.h).map_err(e)? == w.g, || {
        format!("backward does not send {} to {}", w.h, w.g)
    })?;
    let cayley = CayleyTable::new(g2, exec, caps).map_err(e)?;
    for m in [&w.forward, &w.backward] {
        ensure(
            is_homomorphism_table(&m.table(caps).map_err(e)?, &cayley),
            || format!("{m} is not an endomorphism"),
        )?;
    }
    let autos = MorphismSpace::new(g2, MorphismKind::Automorphisms, exec, caps).map_err(e)?;
    ensure(autos.len() == 54, || {
        format!("{} automorphisms", autos.len())
    })?;
    let hits = autos
        .iter()
        .filter(|a| a.apply(&w.g).unwrap() == w.h)
        .count();
    ensure(hits == 0, || {
        format!("{hits} automorphisms send {} to {}", w.g, w.h)
    })?;
    Ok(format!(
        "ES1 chain {}; ES2 witness {} <-> {} over 54 automorphisms",
        chain
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" < "),
        w.g,
        w.h
    ))
}

fn scalar_law(g: GroupId, exec: Execution, caps: &Caps) -> Result<u64, String> {
    let space = MorphismSpace::new(g, MorphismKind::Endomorphisms, exec, caps).map_err(e)?;
    let els: Vec<GroupElement> = g.elements(caps).map_err(e)?.collect();
    let bad = exec.sum_range(0..space.len(), |i| {
        let m = space.get(i);
        let img: Vec<GroupElement> = els.iter().map(|x| m.apply(x).unwrap()).collect();
        let mut bad = 0;
        for (a, fa) in els.iter().zip(&img) {
            for (b, fb) in els.iter().zip(&img) {
                let lhs = fa.commutator(fb).unwrap();
                let rhs = a.commutator(b).unwrap().power(m.scalar().value() as i64);
                bad += (lhs != rhs) as u64;
            }
        }
        bad
    });
    ensure(bad == 0, || format!("{g}: {bad} violations"))?;
    Ok(space.len() * (els.len() as u64).pow(2))
}

fn shear_is_isomorphism(g: GroupId, caps: &Caps) -> Result<(), String> {
    let tilde = g.with_kind(if g.kind() == GroupKind::Es1 {
        GroupKind::Es1Tilde
    } else {
        GroupKind::Es2Tilde
    });
    let fwd = |x: &GroupElement| {
        if g.kind() == GroupKind::Es1 {
            x.lambda_iso()
        } else {
            x.delta_iso()
        }
    };
    let back = |x: &GroupElement| {
        if g.kind() == GroupKind::Es1 {
            x.lambda_inv()
        } else {
            x.delta_inv()
        }
    };
    let els: Vec<GroupElement> = tilde.elements(caps).map_err(e)?.collect();
    let images: Vec<GroupElement> = els.iter().map(|x| fwd(x).unwrap()).collect();
    let distinct: HashSet<&GroupElement> = images.iter().collect();
    ensure(distinct.len() == els.len(), || {
        format!("{tilde}: map is not injective")
    })?;
    for (a, fa) in els.iter().zip(&images) {
        ensure(back(fa).map_err(e)? == *a, || {
            format!("{tilde}: inverse fails at {a}")
        })?;
        for (b, fb) in els.iter().zip(&images) {
            ensure(
                fwd(&a.multiply(b).unwrap()).unwrap() == fa.multiply(fb).unwrap(),
                || format!("{tilde}: not multiplicative at {a}, {b}"),
            )?;
        }
    }
    Ok(())
}

fn criterion_8(exec: Execution, caps: &Caps) -> Outcome {
    let mut triples = 0;
    for g in [es1(3, 1), es2(3, 1)] {
        triples += scalar_law(g, exec, caps)?;
    }
    for (p, n) in [(3, 1), (5, 1), (3, 2)] {
        for g in [es1(p, n), es2(p, n)] {
            shear_is_isomorphism(g, caps)?;
        }
    }
    let mut autos_checked = 0;
    for g in [es2(3, 1), es2(3, 2)] {
        let autos = MorphismSpace::new(g, MorphismKind::Automorphisms, exec, caps).map_err(e)?;
        let bad = exec.sum_range(0..autos.len(), |i| {
            let m = autos.get(i);
            let b = m.induced_quotient_matrix().matrix();
            let n = g.n();
            // blocks [[A, C], [D, B]]
            let b11 = b.get(n, n).value();
            let low = (1..n).all(|j| b.get(n + j, n).value() == 0 && b.get(j, n).value() == 0);
            (!(b11 == 1 && low) || m.sigma_d_consequences_hold() != Some(true)) as u64
        });
        ensure(bad == 0, || {
            format!("{g}: {bad} automorphisms break the shape")
        })?;
        autos_checked += autos.len();
    }
    Ok(format!(
        "{triples} scalar-law triples, 6 shear isomorphisms, {autos_checked} automorphism shapes"
    ))
}

fn criterion_9(exec: Execution, caps: &Caps) -> Outcome {
    let g = es2(3, 1);
    let autos = MorphismSpace::new(g, MorphismKind::Automorphisms, exec, caps).map_err(e)?;
    let set: HashSet<_> = autos
        .iter()
        .map(|m| m.induced_quotient_matrix().matrix().clone())
        .collect();
    let expected = counting::im_phi2_order(1, 3);
    ensure(
        BigCount::from(set.len() as u64) == expected && expected == BigCount::from(6),
        || format!("{} matrices, formula {expected}", set.len()),
    )?;
    ensure(set.iter().all(is_im_phi2), || {
        "predicate rejects an image".into()
    })?;
    let mut accepted = 0;
    for m in extraspecial::symplectic::similitudes(
        3,
        1,
        extraspecial::symplectic::ScalarFilter::NonZero,
        false,
        exec,
    ) {
        let in_image = set.contains(m.matrix());
        ensure(is_im_phi2(m.matrix()) == in_image, || {
            format!("predicate disagrees at {}", m.matrix())
        })?;
        accepted += in_image as usize;
    }
    ensure(accepted == 6, || {
        format!("{accepted} similitudes in the image")
    })?;
    Ok("6 matrices, predicate exact over all similitudes".into())
}

fn main() -> ExitCode {
    let exec = Execution::default();
    let caps = Caps::from_env();
    type Criterion = fn(Execution, &Caps) -> Outcome;
    let criteria: [(u32, &str, Duration, Criterion); 9] = [
        (
            1,
            "endomorphisms es1(3,1)",
            Duration::from_secs(5),
            criterion_1,
        ),
        (
            2,
            "endomorphisms es2(3,1)",
            Duration::from_secs(5),
            criterion_2,
        ),
        (
            3,
            "automorphisms and bijectivity",
            Duration::from_secs(10),
            criterion_3,
        ),
        (4, "orbit partitions", Duration::from_secs(60), criterion_4),
        (
            5,
            "counting identities",
            Duration::from_secs(600),
            criterion_5,
        ),
        (
            6,
            "consistency identity p<=97 n<=6",
            Duration::from_secs(1),
            criterion_6,
        ),
        (7, "degeneration order", Duration::from_secs(5), criterion_7),
        (
            8,
            "structural properties",
            Duration::from_secs(60),
            criterion_8,
        ),
        (
            9,
            "induced quotient matrices",
            Duration::from_secs(5),
            criterion_9,
        ),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run(exec, &caps);
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        failed += !ok as u32;
        println!(
            "criterion {id} {}: {name} ({:.2}s of {}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
