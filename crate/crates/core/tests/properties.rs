use std::sync::OnceLock;

use extraspecial::counting::{self, Quantity};
use extraspecial::orbits::classify;
use extraspecial::{
    Caps, Execution, GroupElement, GroupId, GroupKind, Morphism, MorphismKind, MorphismSpace,
};
use proptest::prelude::*;

const KINDS: [GroupKind; 4] = [
    GroupKind::Es1,
    GroupKind::Es2,
    GroupKind::Es1Tilde,
    GroupKind::Es2Tilde,
];
const SHAPES: [(u64, usize); 5] = [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1)];

fn group() -> impl Strategy<Value = GroupId> {
    (0..KINDS.len(), 0..SHAPES.len())
        .prop_map(|(k, s)| GroupId::new(KINDS[k], SHAPES[s].0, SHAPES[s].1).unwrap())
}

fn elements(count: usize) -> impl Strategy<Value = Vec<GroupElement>> {
    group().prop_flat_map(move |g| {
        let order = g.order_u64().unwrap();
        proptest::collection::vec(0..order, count)
            .prop_map(move |idx| idx.into_iter().map(|i| g.element_at(i)).collect())
    })
}

fn mul(a: &GroupElement, b: &GroupElement) -> GroupElement {
    a.multiply(b).unwrap()
}

proptest! {
    #[test]
    fn group_axioms(v in elements(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let e = a.group().identity();
        prop_assert_eq!(mul(&mul(a, b), c), mul(a, &mul(b, c)));
        prop_assert_eq!(mul(a, &e), a.clone());
        prop_assert_eq!(mul(&e, a), a.clone());
        prop_assert!(mul(a, &a.inverse()).is_identity());
    }

    #[test]
    fn commutators_are_central_and_form_is_alternating(v in elements(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert!(a.commutator(b).unwrap().is_central());
        let fab = a.symplectic_f(b).unwrap();
        prop_assert_eq!(fab + b.symplectic_f(a).unwrap(), fab - fab);
        prop_assert_eq!(
            mul(a, c).symplectic_f(b).unwrap(),
            a.symplectic_f(b).unwrap() + c.symplectic_f(b).unwrap()
        );
    }

    #[test]
    fn element_order_is_minimal(v in elements(1)) {
        let a = &v[0];
        let ord = a.order();
        prop_assert!(a.power(ord as i64).is_identity());
        let p = a.group().p() as u64;
        prop_assert!(ord == 1 || ord == p || ord == p * p);
        if ord > 1 {
            prop_assert!(!a.power((ord / p) as i64).is_identity());
        }
    }

    #[test]
    fn elements_round_trip_through_text(v in elements(1)) {
        let a = &v[0];
        prop_assert_eq!(a.to_string().parse::<GroupElement>().unwrap(), a.clone());
        prop_assert_eq!(a.group().element_at(a.group().index_of(a)), a.clone());
    }

    #[test]
    fn shears_are_isomorphisms(v in elements(2)) {
        let g = v[0].group();
        type Shear = fn(&GroupElement) -> extraspecial::Result<GroupElement>;
        let (fwd, back): (Shear, Shear) = match g.kind() {
            GroupKind::Es1Tilde => (GroupElement::lambda_iso, GroupElement::lambda_inv),
            GroupKind::Es2Tilde => (GroupElement::delta_iso, GroupElement::delta_inv),
            _ => return Ok(()),
        };
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!(fwd(&mul(a, b)).unwrap(), mul(&fwd(a).unwrap(), &fwd(b).unwrap()));
        prop_assert_eq!(back(&fwd(a).unwrap()).unwrap(), a.clone());
    }
}

fn spaces() -> &'static [MorphismSpace] {
    static SPACES: OnceLock<Vec<MorphismSpace>> = OnceLock::new();
    SPACES.get_or_init(|| {
        let caps = Caps {
            morphisms: 100_000_000,
            ..Caps::default()
        };
        let mut out = Vec::new();
        for (p, n) in [(3, 2), (5, 1)] {
            for kind in [GroupKind::Es1, GroupKind::Es2] {
                let g = GroupId::new(kind, p, n).unwrap();
                out.push(
                    MorphismSpace::new(g, MorphismKind::Endomorphisms, Execution::default(), &caps)
                        .unwrap(),
                );
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerated_endomorphisms_are_homomorphisms(s in 0usize..4, i in any::<u64>(), j in any::<u64>(), x in any::<u64>(), y in any::<u64>()) {
        let space = &spaces()[s];
        let g = space.group();
        let order = g.order_u64().unwrap();
        let (a, b) = (g.element_at(x % order), g.element_at(y % order));
        let sigma = space.get(i % space.len());
        let tau = space.get(j % space.len());
        let img = |m: &Morphism, e: &GroupElement| m.apply(e).unwrap();
        prop_assert_eq!(img(&sigma, &mul(&a, &b)), mul(&img(&sigma, &a), &img(&sigma, &b)));
        prop_assert!(sigma.scalar_action_check(&a, &b).unwrap());
        let st = sigma.compose(&tau).unwrap();
        prop_assert_eq!(img(&st, &a), img(&sigma, &img(&tau, &a)));
        prop_assert_eq!(st.scalar(), sigma.scalar() * tau.scalar());
        prop_assert_eq!(sigma.to_string().parse::<Morphism>().unwrap(), sigma.clone());
        let rebuilt = Morphism::from_generator_images(g, &g.generators().iter().map(|x| img(&sigma, x)).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(rebuilt, sigma.clone());
        if sigma.is_auto() {
            prop_assert_eq!(classify(&img(&sigma, &a)), classify(&a));
        }
    }

    #[test]
    fn inner_automorphisms_fix_the_center(s in 0usize..4, x in any::<u64>(), y in any::<u64>()) {
        let g = spaces()[s].group();
        let order = g.order_u64().unwrap();
        let (h, a) = (g.element_at(x % order), g.element_at(y % order));
        let inner = Morphism::inner_automorphism(&h).unwrap();
        prop_assert!(inner.is_auto());
        prop_assert_eq!(inner.scalar().value(), 1);
        prop_assert_eq!(inner.apply(&g.central_generator()).unwrap(), g.central_generator());
        prop_assert_eq!(inner.apply(&a).unwrap(), mul(&mul(&h, &a), &h.inverse()));
    }

    #[test]
    fn polynomials_agree_with_exact_values(qi in 0usize..9, pi in 0usize..6, n in 1usize..5, k in 0usize..5, second in any::<bool>()) {
        let q = Quantity::ALL[qi];
        let p = [3u32, 5, 7, 11, 13, 101][pi];
        let k = q.takes_k().then_some(k.min(n));
        let family = Some(if second { GroupKind::Es2 } else { GroupKind::Es1 });
        let exact = q.formula(family, p, n, k).unwrap();
        let poly = q.polynomial(family, n, k).unwrap();
        prop_assert_eq!(poly.eval(p).to_string(), exact.to_string());
    }

    #[test]
    fn consistency_identity_holds(pi in 0usize..8, n in 1usize..8, second in any::<bool>()) {
        let p = [3u64, 5, 7, 11, 13, 97, 101, 65521][pi];
        let g = GroupId::new(if second { GroupKind::Es2 } else { GroupKind::Es1 }, p, n).unwrap();
        let singular = if second { counting::count_y(p as u32, n) } else { counting::count_x(p as u32, n) };
        let pow = (0..2 * n).fold(extraspecial::BigCount::one(), |acc, _| acc * extraspecial::BigCount::from(p));
        prop_assert_eq!(counting::end_order(&g), counting::aut_order(&g) + pow * singular);
    }
}
