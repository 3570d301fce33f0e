use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use dfk_core::generators::{
    enum_cf_spaces, enum_frames, random_cf_relation, random_mapping, random_mappings, GenBounds,
};
use dfk_core::io::{parse, serialize, Document, Structure};
use dfk_core::mapping::{self, d_on_morphism};
use dfk_core::order::poset_isomorphic;
use dfk_core::set::{BitSet, Relation};
use dfk_core::states::StateDomain;
use dfk_core::{ApproximableMapping, CfRelation, CfSpace, FinitePoset, GaSpace, InformationFrame};

fn frames() -> &'static [Arc<InformationFrame>] {
    static F: OnceLock<Vec<Arc<InformationFrame>>> = OnceLock::new();
    F.get_or_init(|| {
        enum_frames(&GenBounds::default())
            .unwrap()
            .into_iter()
            .map(Arc::new)
            .collect()
    })
}

fn spaces() -> &'static [Arc<CfSpace>] {
    static S: OnceLock<Vec<Arc<CfSpace>>> = OnceLock::new();
    S.get_or_init(|| {
        enum_cf_spaces(&GenBounds::default())
            .unwrap()
            .into_iter()
            .map(Arc::new)
            .collect()
    })
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn arb_relation(max: usize) -> impl Strategy<Value = Relation> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n)
            .prop_map(move |b| Relation::from_fn(n, |x, y| b[x * n + y]))
    })
}

/// Reflexive-transitive closure of random pairs `x < y`; always a poset.
fn arb_poset(max: usize) -> impl Strategy<Value = FinitePoset> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |b| {
            let mut leq = Relation::from_fn(n, |x, y| x == y || (x < y && b[x * n + y]));
            for k in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        if leq.contains(x, k) && leq.contains(k, y) {
                            leq.insert(x, y);
                        }
                    }
                }
            }
            FinitePoset::from_relation(ids(n), &leq).unwrap()
        })
    })
}

fn mapping_between(a: usize, b: usize, seed: u64) -> Option<ApproximableMapping> {
    let f = frames();
    random_mappings(&f[a % f.len()], &f[b % f.len()], seed, 1, 40).pop()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lower_is_dual_to_upper(theta in arb_relation(6), pick in any::<u64>()) {
        let n = theta.size();
        let g = GaSpace::from_relation(ids(n), theta).unwrap();
        let x = BitSet::from_indices((0..n).filter(|i| pick >> i & 1 == 1));
        prop_assert_eq!(g.lower(x), g.all().difference(g.upper(g.all().difference(x))));
        prop_assert!(g.upper(BitSet::EMPTY).is_empty());
    }

    #[test]
    fn upper_is_monotone_and_unions(theta in arb_relation(6), a in any::<u64>(), b in any::<u64>()) {
        let n = theta.size();
        let g = GaSpace::from_relation(ids(n), theta).unwrap();
        let x = BitSet::from_indices((0..n).filter(|i| a >> i & 1 == 1));
        let y = BitSet::from_indices((0..n).filter(|i| b >> i & 1 == 1));
        prop_assert!(g.upper(x).is_subset(g.upper(x.union(y))));
        prop_assert_eq!(g.upper(x.union(y)), g.upper(x).union(g.upper(y)));
    }

    #[test]
    fn operator_laws_hold_on_six_elements(theta in arb_relation(6)) {
        let n = theta.size();
        let reflexive = theta.is_reflexive();
        let transitive = theta.is_transitive();
        let laws = GaSpace::from_relation(ids(n), theta).unwrap().operator_laws().unwrap();
        prop_assert!(laws.passed(), "{:?}", laws.failures);
        prop_assert_eq!(laws.reflexive, reflexive);
        prop_assert_eq!(laws.transitive, transitive);
    }

    #[test]
    fn finite_way_below_is_the_order(p in arb_poset(5)) {
        prop_assert_eq!(p.way_below().unwrap(), p.leq_relation());
    }

    #[test]
    fn states_of_f_recover_the_poset(p in arb_poset(5)) {
        let p = Arc::new(p);
        let tau = mapping::tau(&p).unwrap();
        prop_assert!(poset_isomorphic(&p, tau.domain.poset()).is_some());
        prop_assert!(tau.roundtrip_failures().unwrap().is_empty());
    }

    #[test]
    fn identities_are_units(a in any::<usize>(), b in any::<usize>(), seed in any::<u64>()) {
        if let Some(h) = mapping_between(a, b, seed) {
            let left = ApproximableMapping::identity(h.source().clone()).then(&h).unwrap();
            let right = h.then(&ApproximableMapping::identity(h.target().clone())).unwrap();
            prop_assert_eq!(&left, &h);
            prop_assert_eq!(&right, &h);
        }
    }

    #[test]
    fn composition_is_associative(a in any::<usize>(), b in any::<usize>(), c in any::<usize>(), d in any::<usize>(), s in any::<u64>()) {
        let (g, h, k) = (
            mapping_between(a, b, s),
            mapping_between(b, c, s ^ 1),
            mapping_between(c, d, s ^ 2),
        );
        if let (Some(g), Some(h), Some(k)) = (g, h, k) {
            let gh = g.then(&h).unwrap();
            prop_assert!(gh.is_valid());
            prop_assert_eq!(gh.then(&k).unwrap(), g.then(&h.then(&k).unwrap()).unwrap());
        }
    }

    #[test]
    fn d_of_a_mapping_is_monotone(a in any::<usize>(), b in any::<usize>(), seed in any::<u64>()) {
        if let Some(h) = mapping_between(a, b, seed) {
            let da = StateDomain::new(h.source().clone()).unwrap();
            let db = StateDomain::new(h.target().clone()).unwrap();
            let m = d_on_morphism(&h, &da, &db).unwrap();
            prop_assert!(m.is_monotone());
        }
    }

    #[test]
    fn random_mappings_are_reproducible(a in any::<usize>(), b in any::<usize>(), seed in any::<u64>()) {
        prop_assert_eq!(mapping_between(a, b, seed), mapping_between(a, b, seed));
    }

    #[test]
    fn cf_identities_are_units(a in any::<usize>(), b in any::<usize>(), seed in any::<u64>()) {
        let s = spaces();
        let (u, v) = (&s[a % s.len()], &s[b % s.len()]);
        if let Some(d) = random_cf_relation(u, v, seed) {
            prop_assert_eq!(CfRelation::identity(u.clone()).then(&d).unwrap(), d.clone());
            prop_assert_eq!(d.then(&CfRelation::identity(v.clone())).unwrap(), d);
        }
    }

    #[test]
    fn text_round_trip_is_exact(a in any::<usize>(), seed in any::<u64>()) {
        let f = &frames()[a % frames().len()];
        let mut doc = Document::new();
        doc.push("a", Structure::Frame(f.clone()));
        if let Some(h) = random_mapping(f, f, seed) {
            doc.push("h", Structure::Mapping { source: "a".into(), target: "a".into(), mapping: h });
        }
        let text = serialize(&doc);
        let back = parse(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(back, doc);
    }
}
