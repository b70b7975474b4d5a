use super::*;
use crate::copy_system::has_clean_intersections;
use crate::hypergraph::{enumerate_copies, find_isomorphism, is_strongly_induced, CopyMode, Partite};
use crate::partition::Partition;
use crate::pretrain::{derive, is_linear_pretrain, Pretrain};
use crate::train::{Quasitrain, Train};

fn matching(m: usize) -> Hypergraph {
    let names: Vec<String> = (0..m).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect();
    let edges = (0..m).map(|i| vec![2 * i, 2 * i + 1]).collect();
    let class = (0..2 * m).map(|v| v % 2).collect();
    Hypergraph::new(names, edges, 2).unwrap().with_partite(Partite::uniform(2, class)).unwrap()
}

fn clique(n: usize) -> Hypergraph {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
    Hypergraph::numbered(n, edges, 2).unwrap()
}

fn induced_system(pattern: &Hypergraph, host: &Hypergraph) -> FlavoredSystem {
    let copies = enumerate_copies(host, pattern, CopyMode::Induced, false)
        .unwrap()
        .into_iter()
        .map(|e| Placement { map: e.map, image: e.image })
        .collect();
    FlavoredSystem { pattern: Structure::plain(pattern.clone()), target: Structure::plain(host.clone()), copies }
}

#[test]
fn picture_zero_of_triangles_in_k5() {
    let sys = induced_system(&clique(3), &clique(5));
    let pic = picture_zero(&sys).unwrap();
    assert_eq!((pic.host().n(), pic.host().m(), pic.copies.len()), (30, 30, 10));
    assert!(picture_violations(&pic).is_empty());
    assert_eq!(pic.music_line(0).len(), 6);
}

#[test]
fn picture_zero_of_one_copy_is_the_pattern() {
    let f = matching(2);
    let pic = picture_zero(&FlavoredSystem::trivial(&Structure::plain(f.clone()))).unwrap();
    assert!(find_isomorphism(&f, pic.host(), false, true).is_some());
}

#[test]
fn pretrain_picture_zero_keeps_wagons_apart() {
    let f = Pretrain::single_wagon(matching(2));
    let vertical = hj(&Structure::plain(matching(2)), 2, None, &Ctx::default()).unwrap();
    let vertical = FlavoredSystem { pattern: Structure::from_pretrain(&f), ..vertical };
    let pic = picture_zero(&vertical).unwrap();
    assert!(picture_violations(&pic).is_empty());
    assert!(wagons_within_copies(&pic));
    assert_eq!(pic.structure.relations[0].num_classes(), 5);
}

#[test]
fn amalgamation_with_one_copy_is_the_picture() {
    let sys = induced_system(&clique(3), &clique(4));
    let pic = picture_zero(&sys).unwrap();
    let cons = constituent(&pic, 0).unwrap();
    let am = amalgamate(&pic, 0, &FlavoredSystem::trivial(&cons.structure), 1, &Ctx::default()).unwrap();
    assert!(find_isomorphism(pic.host(), am.picture.host(), false, false).is_some());
    assert!(amalgamation_violations(&pic, &am, &FlavoredSystem::trivial(&cons.structure)).is_empty());
}

#[test]
fn amalgamation_counts() {
    let vertical = hj(&Structure::plain(matching(2)), 2, None, &Ctx::default()).unwrap();
    let pic = picture_zero(&vertical).unwrap();
    assert_eq!((pic.host().n(), pic.host().m()), (20, 10));
    let cons = constituent(&pic, 0).unwrap();
    assert_eq!((cons.structure.host.n(), cons.structure.host.m()), (6, 3));
    let lemma = hj(&cons.structure, 2, Some(2), &Ctx::default()).unwrap();
    assert_eq!((lemma.target.host.n(), lemma.target.host.m(), lemma.copies.len()), (18, 9, 7));
    let am = amalgamate(&pic, 0, &lemma, 1, &Ctx::default()).unwrap();
    assert_eq!(am.picture.host().n(), 18 + 7 * (20 - 6));
    assert_eq!(am.picture.host().m(), 9 + 7 * (10 - 3));
    assert_eq!(am.picture.copies.len(), 7 * 5);
    assert!(amalgamation_violations(&pic, &am, &lemma).is_empty());
}

#[test]
fn pretrain_amalgamation_bridges() {
    // two wagons: {a0b0, a1b1} and {a2b2}
    let f = Pretrain::from_labels(matching(3), &[0, 0, 1]).unwrap();
    let vertical = hj(&Structure::plain(matching(3)), 2, Some(1), &Ctx::default()).unwrap();
    let vertical = FlavoredSystem { pattern: Structure::from_pretrain(&f), ..vertical };
    let pic = picture_zero(&vertical).unwrap();
    for e in 0..vertical.target.host.m() {
        let cons = constituent(&pic, e).unwrap();
        let lemma = hj(&cons.structure, 2, Some(2), &Ctx::default()).unwrap();
        let am = amalgamate(&pic, e, &lemma, 1, &Ctx::default()).unwrap();
        assert!(amalgamation_violations(&pic, &am, &lemma).is_empty());
    }
}

#[test]
fn amalgamation_rejects_mismatch() {
    let sys = induced_system(&clique(3), &clique(4));
    let pic = picture_zero(&sys).unwrap();
    let other = hj(&Structure::plain(matching(2)), 2, Some(1), &Ctx::default()).unwrap();
    assert!(matches!(amalgamate(&pic, 0, &other, 1, &Ctx::default()), Err(Error::InvalidArgument(_))));
}

#[test]
fn quasitrain_amalgamation_needs_edges() {
    // a vertical copy whose constituent over some edge is empty
    let f = matching(1);
    let q = Quasitrain::associated(f.clone());
    let g = matching(2);
    let copy = Placement::along(&f, &g, vec![0, 1]).unwrap();
    let vertical =
        FlavoredSystem { pattern: Structure::from_quasitrain(&q), target: Structure::plain(g), copies: vec![copy] };
    let pic = picture_zero(&vertical).unwrap();
    let cons = constituent(&pic, 1).unwrap();
    let lemma = FlavoredSystem::trivial(&cons.structure);
    assert!(matches!(amalgamate(&pic, 1, &lemma, 1, &Ctx::default()), Err(Error::Precondition(_))));
}

#[test]
fn order_lift_follows_projection() {
    let f = matching(2).with_order(true);
    let g = matching(2).with_order(true);
    let vertical = hj(&Structure::plain(f), 2, Some(1), &Ctx::default()).unwrap();
    let vertical = FlavoredSystem { target: Structure::plain(vertical.target.host.with_order(true)), ..vertical };
    let _ = g;
    let pic = picture_zero(&vertical).unwrap();
    let lifted = order_lift(&pic).unwrap();
    assert!(lifted.psi.windows(2).all(|w| w[0] <= w[1]));
    assert!(lifted.host().is_ordered());
    assert!(picture_violations(&lifted).is_empty());
}

#[test]
fn trivial_partite_construction() {
    let f = Structure::plain(clique(3));
    let out = pc(&Handle::Trivial, &Handle::Trivial, &f, 2, &Ctx::default()).unwrap();
    assert!(find_isomorphism(&f.host, &out.target.host, false, false).is_some());
    assert_eq!(out.copies.len(), 1);
    assert!(out.violations().is_empty());
}

#[test]
fn partite_construction_over_hj() {
    let f = Structure::plain(matching(2));
    let run = pc_run(&Handle::Hj { exponent: Some(2) }, &Handle::Hj { exponent: Some(1) }, &f, 2, &Ctx::default());
    assert!(run.error.is_none());
    assert_eq!(run.trace.len(), 4);
    let out = run.output.unwrap();
    assert!(out.violations().is_empty());
    let sys = out.copy_system().unwrap();
    assert!(has_clean_intersections(&sys).0);
    assert!(out.target.host.is_linear());
    for c in &out.copies {
        assert!(is_strongly_induced(&c.image, &out.target.host).unwrap());
    }
}

#[test]
fn budget_keeps_partial_trace() {
    let f = Structure::plain(matching(2));
    let ctx = Ctx::new(Budgets { max_vertices: 60, ..Budgets::default() });
    let run = pc_run(&Handle::Hj { exponent: Some(2) }, &Handle::Hj { exponent: Some(2) }, &f, 2, &ctx);
    assert!(matches!(run.error, Some(Error::BudgetExceeded(_))));
    assert!(!run.pictures.is_empty());
    assert!(run.output.is_none());
}

#[test]
fn omega_two_on_an_edge() {
    let f = Structure::plain(Hypergraph::from_names(2, &["a", "b"], &[&["a", "b"]]).unwrap());
    let out = Handle::omega2().apply(&f, 2, &Ctx::default()).unwrap();
    assert_eq!((out.target.host.n(), out.target.host.m(), out.copies.len()), (2, 1, 1));
}

fn ordered_pretrain(labels: &[usize]) -> Pretrain {
    Pretrain::from_labels(matching(labels.len()).with_order(true), labels).unwrap()
}

#[test]
fn degenerate_extension() {
    let p = ordered_pretrain(&[0]);
    let run = ext(&Handle::Trivial, &Handle::Trivial, &Structure::from_pretrain(&p), 2, &Ctx::default()).unwrap();
    let out = &run.output;
    assert!(find_isomorphism(p.host(), &out.target.host, true, true).is_some());
    assert_eq!(out.copies.len(), 1);
    assert!(out.violations().is_empty());
}

#[test]
fn extension_of_two_wagons() {
    let p = ordered_pretrain(&[0, 1]);
    let run = ext(&Handle::Trivial, &Handle::Trivial, &Structure::from_pretrain(&p), 2, &Ctx::default()).unwrap();
    let out = &run.output;
    assert!(out.violations().is_empty());
    let h = out.target.pretrain().unwrap();
    assert!(is_linear_pretrain(&h));
    // every wagon is a copy of the assimilated wagon shape
    for w in 0..h.wagon_count() {
        assert_eq!(h.wagon_edges(w).len(), run.wagon.m());
    }
    // the output wagons are derived from the inner host
    let n = Pretrain::singletons(run.inner.target.host.clone());
    let d = derive(&n, &out.target.host).unwrap();
    assert_eq!(d.pretrain.wagons(), h.wagons());
}

#[test]
fn extension_rejects_nonlinear_input() {
    let h = Hypergraph::from_names(3, &["a", "b", "c", "d"], &[&["a", "b", "c"], &["a", "b", "d"]]).unwrap().with_order(true);
    let p = Pretrain::singletons(h);
    let r = ext(&Handle::Trivial, &Handle::Trivial, &Structure::from_pretrain(&p), 2, &Ctx::default());
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn degenerate_train_extension() {
    let h = matching(1).with_order(true);
    let chain = vec![Partition::discrete(1), Partition::single(1), Partition::single(1)];
    let t = Train::new(Quasitrain::new(h, chain).unwrap(), vec![vec![0], vec![0, 1]]).unwrap();
    let f = Structure::from_train(&t);
    let run = ext(&Handle::Trivial, &Handle::Trivial, &f, 2, &Ctx::default()).unwrap();
    assert!(run.output.target.validate().is_ok());
    assert_eq!(run.output.target.parameter, t.parameter());
    assert_eq!(run.wagon_hypergraph.flavor, Flavor::Train);
    assert!(run.output.violations().is_empty());
}

#[test]
fn handles_roundtrip_through_json() {
    let h = Handle::ups(Handle::Trivial);
    let s = serde_json::to_string(&h).unwrap();
    assert_eq!(serde_json::from_str::<Handle>(&s).unwrap(), h);
}

#[test]
fn recipes_parse_and_print() {
    for (text, h) in [
        ("cpl", Handle::cpl()),
        ("pc(rms, pc(hj,hj))", Handle::omega2()),
        ("hj:3", Handle::Hj { exponent: Some(3) }),
        ("ups(trivial)", Handle::ext(Handle::omega2(), Handle::Trivial)),
    ] {
        let parsed: Handle = text.parse().unwrap();
        assert_eq!(parsed, h);
        assert_eq!(parsed.to_string().parse::<Handle>().unwrap(), h);
    }
    for bad in ["", "pc(hj)", "hj:x", "rms)", "ext(hj,hj,hj)"] {
        assert!(bad.parse::<Handle>().is_err(), "{bad}");
    }
}
