//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use girthkit::construct::{FlavoredSystem, Placement, Structure};
use girthkit::forest::is_admissible;
use girthkit::{enumerate_copies, CopyMode, CopySystem, Hypergraph, Partite, Sub};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` disjoint k-edges, partite by position.
pub fn matching(k: usize, count: usize) -> Hypergraph {
    let names: Vec<String> = (0..count).flat_map(|c| (0..k).map(move |i| format!("{}{c}", (b'a' + i as u8) as char))).collect();
    let edges = (0..count).map(|c| (0..k).map(|i| c * k + i).collect()).collect();
    let class = (0..k * count).map(|v| v % k).collect();
    Hypergraph::new(names, edges, k).unwrap().with_partite(Partite::uniform(k, class)).unwrap()
}

pub fn clique(n: usize) -> Hypergraph {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
    Hypergraph::numbered(n, edges, 2).unwrap()
}

pub fn single_edge() -> Hypergraph {
    Hypergraph::from_names(2, &["x", "y"], &[&["x", "y"]]).unwrap()
}

/// All induced copies of `pattern` in `host`.
pub fn induced_system(pattern: &Hypergraph, host: &Hypergraph) -> FlavoredSystem {
    let copies = enumerate_copies(host, pattern, CopyMode::Induced, false)
        .unwrap()
        .into_iter()
        .map(|e| Placement { map: e.map, image: e.image })
        .collect();
    FlavoredSystem { pattern: Structure::plain(pattern.clone()), target: Structure::plain(host.clone()), copies }
}

/// A linear k-uniform hypergraph, `k` in 2..=3, with at most 8 vertices and 8 edges.
pub fn random_linear(rng: &mut ChaCha8Rng) -> Hypergraph {
    let k = rng.gen_range(2..=3);
    let n = rng.gen_range(k..=8);
    let target = rng.gen_range(1..=8);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    for _ in 0..40 {
        if edges.len() == target {
            break;
        }
        let mut e: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
        e.sort_unstable();
        if edges.iter().all(|f| f.iter().filter(|v| e.contains(v)).count() <= 1) {
            edges.push(e);
        }
    }
    Hypergraph::numbered(n, edges, k).unwrap()
}

/// Up to `max` distinct subhypergraphs spanned by one to three edges, sometimes induced.
pub fn random_copies(rng: &mut ChaCha8Rng, h: &Hypergraph, max: usize) -> Vec<Sub> {
    let mut out: Vec<Sub> = Vec::new();
    if h.m() == 0 {
        return out;
    }
    let wanted = rng.gen_range(1..=max);
    for _ in 0..4 * wanted {
        if out.len() == wanted {
            break;
        }
        let size = rng.gen_range(1..=3.min(h.m()));
        let picked: Vec<usize> = (0..h.m()).collect::<Vec<_>>().choose_multiple(rng, size).copied().collect();
        let span = h.span(&picked);
        let s = if rng.gen_bool(0.3) { h.induced(&span.vertices) } else { span };
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

pub fn random_system(rng: &mut ChaCha8Rng, max_copies: usize) -> CopySystem {
    let h = random_linear(rng);
    let copies = random_copies(rng, &h, max_copies);
    CopySystem::new(h, copies, true).unwrap()
}

/// Forest test by trying every enumeration.
pub fn brute_force_forest(h: &Hypergraph, copies: &[Sub]) -> bool {
    fn go(h: &Hypergraph, copies: &[Sub], order: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if order.len() == copies.len() {
            return is_admissible(h, copies, order);
        }
        for i in 0..copies.len() {
            if !used[i] {
                used[i] = true;
                order.push(i);
                if go(h, copies, order, used) {
                    return true;
                }
                order.pop();
                used[i] = false;
            }
        }
        false
    }
    go(h, copies, &mut Vec::new(), &mut vec![false; copies.len()])
}

/// Triangle x0x1x2 with a triangle on each of its sides.
pub fn figure_eleven() -> (Hypergraph, Vec<Sub>) {
    let h = Hypergraph::from_names(
        2,
        &["x0", "x1", "x2", "y0", "y1", "y2"],
        &[&["x0", "x1"], &["x1", "x2"], &["x0", "x2"], &["x1", "y0"], &["x2", "y0"], &["x2", "y1"], &["x0", "y1"], &["x0", "y2"], &["x1", "y2"]],
    )
    .unwrap();
    let tri = |names: [&str; 3]| {
        let vs: Vec<usize> = names.iter().map(|s| h.vertex_named(s).unwrap()).collect();
        h.induced(&vs)
    };
    let copies = vec![tri(["x0", "x1", "x2"]), tri(["x1", "x2", "y0"]), tri(["x2", "x0", "y1"]), tri(["x0", "x1", "y2"])];
    (h, copies)
}

/// Five triangles glued cyclically along a pentagon, and the three triangles of a fan triangulation.
pub fn pentagon() -> (Hypergraph, Vec<Sub>, Vec<Sub>) {
    let mut edges = Vec::new();
    for i in 0..5 {
        let (p, q, t) = (i, (i + 1) % 5, 5 + i);
        edges.push(vec![p.min(q), p.max(q)]);
        edges.push(vec![p, t]);
        edges.push(vec![q, t]);
    }
    edges.push(vec![0, 2]);
    edges.push(vec![0, 3]);
    let h = Hypergraph::numbered(10, edges, 2).unwrap();
    let ring: Vec<Sub> = (0..5).map(|i| h.induced(&[i, (i + 1) % 5, 5 + i])).collect();
    let fan: Vec<Sub> = [[0, 1, 2], [0, 2, 3], [0, 3, 4]].iter().map(|t| h.induced(t)).collect();
    (h, ring, fan)
}

/// Random k-partite k-uniform host on `pool` vertices per class, isolated vertices dropped.
pub fn random_partite(rng: &mut ChaCha8Rng, k: usize, edges: usize, pool: usize) -> Hypergraph {
    let mut names = Vec::new();
    let mut class = Vec::new();
    for c in 0..k {
        for j in 0..pool {
            names.push(format!("{c}.{j}"));
            class.push(c);
        }
    }
    let mut es: Vec<Vec<usize>> = Vec::new();
    for _ in 0..4 * edges {
        if es.len() == edges {
            break;
        }
        let e: Vec<usize> = (0..k).map(|c| c * pool + rng.gen_range(0..pool)).collect();
        if !es.contains(&e) {
            es.push(e);
        }
    }
    let h = Hypergraph::new(names, es, k).unwrap().with_partite(Partite::uniform(k, class)).unwrap();
    let (h, _) = h.without_isolated();
    h
}
