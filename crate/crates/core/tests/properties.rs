mod common;

use girthkit::forest::is_admissible;
use girthkit::{
    edge_arrows, emit, girth, girth_exceeds, girth_of_system_exceeds, has_clean_intersections, is_forest, parse,
    semitidy_equivalence_check, Budget, CopySystem, Document, Mode, Partition, SearchOptions, Threshold,
};
use proptest::prelude::*;
use rand::Rng;

use common::*;

const BUDGET: u64 = 1 << 20;

fn budget() -> Budget {
    Budget::new(BUDGET)
}

fn labels() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1usize..12).prop_flat_map(|n| (prop::collection::vec(0usize..4, n), prop::collection::vec(0usize..4, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn girth_is_the_first_failing_bound(seed in any::<u64>()) {
        let h = random_linear(&mut rng(seed));
        match girth(&h) {
            Some(g) => {
                prop_assert!(girth_exceeds(&h, g - 1));
                prop_assert!(!girth_exceeds(&h, g));
            }
            None => prop_assert!(girth_exceeds(&h, h.m() + 1)),
        }
    }

    #[test]
    fn system_girth_is_monotone_in_the_threshold(seed in any::<u64>()) {
        let sys = random_system(&mut rng(seed), 4);
        let mut previous = true;
        for g in 2..=4 {
            let holds = match girth_of_system_exceeds(&sys, Threshold::Order(g), &budget()) {
                Ok(r) => r.holds,
                Err(_) => break,
            };
            prop_assert!(previous || !holds, "Girth > {} but not > {}", g, g - 1);
            previous = holds;
        }
    }

    #[test]
    fn masterless_witnesses_respect_the_threshold(seed in any::<u64>()) {
        let sys = random_system(&mut rng(seed), 4);
        if let Ok(r) = girth_of_system_exceeds(&sys, Threshold::Order(3), &budget()) {
            prop_assert_eq!(r.holds, r.witness.is_none());
            if let Some(c) = r.witness {
                let m = girthkit::cycle_metrics(&sys, &c).unwrap();
                prop_assert!(Threshold::Order(3).admits(m.order, m.length));
            }
        }
    }

    #[test]
    fn tidy_and_semitidy_agree(seed in any::<u64>()) {
        let sys = random_system(&mut rng(seed), 3);
        if let Ok(r) = semitidy_equivalence_check(&sys, 2, &budget()) {
            prop_assert!(r.agree);
        }
    }

    #[test]
    fn forest_test_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_linear(&mut r);
        let copies = random_copies(&mut r, &h, 5);
        let order = is_forest(&h, &copies).unwrap();
        prop_assert_eq!(order.is_some(), brute_force_forest(&h, &copies));
        if let Some(order) = order {
            prop_assert!(is_admissible(&h, &copies, &order));
        }
    }

    #[test]
    fn forests_stay_forests_without_their_last_copy(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_linear(&mut r);
        let copies = random_copies(&mut r, &h, 5);
        if let Some(order) = is_forest(&h, &copies).unwrap() {
            let kept: Vec<_> = order[..order.len() - 1].iter().map(|&i| copies[i].clone()).collect();
            prop_assert!(kept.is_empty() || is_forest(&h, &kept).unwrap().is_some());
        }
    }

    #[test]
    fn arrowing_survives_extra_copies(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_linear(&mut r);
        let copies = random_copies(&mut r, &h, 4);
        let mut more = copies.clone();
        more.extend(random_copies(&mut r, &h, 3).into_iter().filter(|c| !copies.contains(c)));
        let opts = SearchOptions::default();
        let few = edge_arrows(&CopySystem::new(h.clone(), copies, false).unwrap(), 2, &budget(), opts).unwrap();
        let many_sys = CopySystem::new(h, more, false).unwrap();
        let many = edge_arrows(&many_sys, 2, &budget(), opts).unwrap();
        prop_assert!(!few.arrows || many.arrows);
        if let Some(colour) = many.witness {
            for c in many_sys.copies() {
                prop_assert!(c.edges.iter().any(|&e| colour[e] != colour[c.edges[0]]));
            }
        }
    }

    #[test]
    fn parallel_search_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_linear(&mut r);
        let sys = CopySystem::new(h.clone(), random_copies(&mut r, &h, 4), false).unwrap();
        let colours = r.gen_range(2..=3);
        let seq = edge_arrows(&sys, colours, &budget(), SearchOptions::default()).unwrap();
        let par = edge_arrows(&sys, colours, &budget(), SearchOptions { parallel: true, deterministic: true }).unwrap();
        prop_assert_eq!(seq.arrows, par.arrows);
        prop_assert_eq!(seq.witness, par.witness);
    }

    #[test]
    fn clean_intersections_are_symmetric_in_copy_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_linear(&mut r);
        let mut copies = random_copies(&mut r, &h, 4);
        let forward = has_clean_intersections(&CopySystem::new(h.clone(), copies.clone(), false).unwrap()).0;
        copies.reverse();
        let backward = has_clean_intersections(&CopySystem::new(h, copies, false).unwrap()).0;
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn documents_roundtrip(seed in any::<u64>()) {
        let sys = random_system(&mut rng(seed), 4);
        for doc in [Document::hypergraph(sys.host()), Document::copy_system(&sys)] {
            let text = emit(&doc);
            let back = parse(&text, Mode::Strict).unwrap();
            prop_assert_eq!(emit(&back), text);
        }
        let back = parse(&emit(&Document::copy_system(&sys)), Mode::Strict).unwrap();
        let rebuilt = back.to_system().unwrap().copy_system().unwrap();
        prop_assert_eq!(rebuilt.host(), sys.host());
        prop_assert_eq!(rebuilt.copies(), sys.copies());
    }

    #[test]
    fn join_and_meet_bound_both_partitions((a, b) in labels()) {
        let (p, q) = (Partition::from_labels(&a), Partition::from_labels(&b));
        let (join, meet) = (p.join(&q), p.meet(&q));
        prop_assert!(p.refines(&join) && q.refines(&join));
        prop_assert!(meet.refines(&p) && meet.refines(&q));
        prop_assert_eq!(p.join(&p), p.clone());
        prop_assert_eq!(join.num_classes() <= meet.num_classes(), true);
    }
}
