use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Hypergraph, Partite, Vertex};
use crate::oracle::min_hj_exponent;
use crate::partition::Partition;

use super::{Ctx, FlavoredSystem, Placement, Structure};

/// Line templates over `alphabet` letters in dimension `n`; `None` marks a
/// moving coordinate. Same order as the oracle's line list.
pub fn combinatorial_templates(alphabet: usize, n: usize) -> Vec<Vec<Option<usize>>> {
    let total = (alphabet + 1).pow(n as u32);
    let mut out = Vec::new();
    for t in 0..total {
        let mut x = t;
        let mut template = vec![None; n];
        for slot in template.iter_mut().rev() {
            let s = x % (alphabet + 1);
            x /= alphabet + 1;
            *slot = (s < alphabet).then_some(s);
        }
        if template.contains(&None) {
            out.push(template);
        }
    }
    out
}

/// Hales-Jewett partite lemma for a k-partite k-uniform structure.
///
/// Class `i` of the host is the set of `n`-tuples of class-`i` vertices, the
/// edge of a word `w` has class-`i` vertex `(w_1^i, ..., w_n^i)`, and every
/// combinatorial line gives one copy. Flavoured inputs get the product
/// relation on every level. The exponent is searched when not supplied.
pub fn hj(f: &Structure, r: usize, exponent: Option<usize>, ctx: &Ctx) -> Result<FlavoredSystem> {
    let pattern = &f.host;
    let part = match pattern.partite() {
        Some(p) if p.f.iter().all(|&x| x == 1) => p.clone(),
        _ => return invalid("HJ needs a k-partite k-uniform hypergraph"),
    };
    if pattern.m() == 0 {
        return Ok(FlavoredSystem::trivial(f));
    }
    let k = part.index_count();
    let a = pattern.m();
    let n = match exponent {
        Some(0) => return invalid("HJ exponent must be positive"),
        Some(n) => n,
        None => min_hj_exponent(a, r, ctx.budgets.max_hj_exponent, &ctx.nodes, ctx.search)?,
    };
    let too_big = || Error::BudgetExceeded(format!("HJ with exponent {n} is too large"));
    let classes: Vec<Vec<Vertex>> = (0..k).map(|c| pattern.class_vertices(c)).collect();
    let mut pos = vec![0usize; pattern.n()];
    for cl in &classes {
        for (j, &v) in cl.iter().enumerate() {
            pos[v] = j;
        }
    }
    let mut sizes = Vec::with_capacity(k);
    for cl in &classes {
        sizes.push(cl.len().checked_pow(n as u32).ok_or_else(too_big)?);
    }
    let words = a.checked_pow(n as u32).ok_or_else(too_big)?;
    let total: usize = sizes.iter().try_fold(0usize, |s, &x| s.checked_add(x)).ok_or_else(too_big)?;
    ctx.check_vertices(total.max(words), "HJ host")?;
    let mut offset = vec![0usize; k];
    for c in 1..k {
        offset[c] = offset[c - 1] + sizes[c - 1];
    }
    // vertex of class c for a tuple of class-c pattern vertices
    let tuple_id = |c: usize, tuple: &mut dyn Iterator<Item = Vertex>| -> Vertex {
        offset[c] + tuple.fold(0, |acc, v| acc * classes[c].len() + pos[v])
    };
    let mut names = Vec::with_capacity(total);
    let mut class = Vec::with_capacity(total);
    for c in 0..k {
        let len = classes[c].len();
        for idx in 0..sizes[c] {
            let mut digits = vec![0usize; n];
            let mut x = idx;
            for d in digits.iter_mut().rev() {
                *d = x % len;
                x /= len;
            }
            let parts: Vec<&str> = digits.iter().map(|&d| pattern.name(classes[c][d])).collect();
            names.push(format!("[{}]", parts.join(",")));
            class.push(c);
        }
    }
    // class-c vertex of pattern edge e
    let corner: Vec<Vec<Vertex>> = (0..a)
        .map(|e| {
            let mut row = vec![0; k];
            for &v in pattern.edge(e) {
                row[part.class[v]] = v;
            }
            row
        })
        .collect();
    let word_of = |w: usize| -> Vec<usize> {
        let mut letters = vec![0usize; n];
        let mut x = w;
        for l in letters.iter_mut().rev() {
            *l = x % a;
            x /= a;
        }
        letters
    };
    let mut edges = Vec::with_capacity(words);
    for w in 0..words {
        let letters = word_of(w);
        edges.push((0..k).map(|c| tuple_id(c, &mut letters.iter().map(|&l| corner[l][c]))).collect::<Vec<_>>());
    }
    let host = Hypergraph::from_parts(names, edges.clone(), Some(k), false, None).with_partite(Partite::uniform(k, class))?;
    let edge_of_word: Vec<usize> = edges
        .iter()
        .map(|e| {
            let mut s = e.clone();
            s.sort_unstable();
            host.edge_id(&s).unwrap()
        })
        .collect();
    let mut relations = Vec::with_capacity(f.relations.len());
    for rel in &f.relations {
        let mut labels = vec![Vec::new(); words];
        for w in 0..words {
            labels[edge_of_word[w]] = word_of(w).iter().map(|&l| rel.class_of(l)).collect::<Vec<_>>();
        }
        relations.push(Partition::from_labels(&labels));
    }
    let mut copies = Vec::new();
    for t in combinatorial_templates(a, n) {
        let map: Vec<Vertex> = (0..pattern.n())
            .map(|v| {
                let c = part.class[v];
                tuple_id(c, &mut t.iter().map(|s| s.map_or(v, |l| corner[l][c])))
            })
            .collect();
        copies.push(Placement::along(pattern, &host, map)?);
    }
    let target = Structure { host, flavor: f.flavor, relations, parameter: f.parameter.clone() };
    Ok(FlavoredSystem { pattern: f.clone(), target, copies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copy_system::CopySystem;
    use crate::hypergraph::{is_strongly_induced};
    use crate::oracle::{edge_arrows, SearchOptions};
    use crate::budget::Budget;
    use crate::pretrain::Pretrain;

    pub(crate) fn matching(m: usize) -> Hypergraph {
        let names: Vec<String> = (0..m).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect();
        let edges = (0..m).map(|i| vec![2 * i, 2 * i + 1]).collect();
        let class = (0..2 * m).map(|v| v % 2).collect();
        Hypergraph::new(names, edges, 2).unwrap().with_partite(Partite::uniform(2, class)).unwrap()
    }

    #[test]
    fn matching_of_two() {
        let f = Structure::plain(matching(2));
        let out = hj(&f, 2, None, &Ctx::default()).unwrap();
        let h = &out.target.host;
        assert_eq!((h.m(), h.class_vertices(0).len(), h.class_vertices(1).len()), (4, 4, 4));
        assert_eq!(out.copies.len(), 5);
        assert!(h.is_linear());
        assert!(out.violations().is_empty());
        for c in &out.copies {
            assert!(is_strongly_induced(&c.image, h).unwrap());
        }
        let sys = CopySystem::new(h.clone(), out.copies.iter().map(|c| c.image.clone()).collect(), false).unwrap();
        let rep = edge_arrows(&sys, 2, &Budget::unlimited(), SearchOptions::default()).unwrap();
        assert!(rep.arrows);
    }

    #[test]
    fn no_edges_is_trivial() {
        let h = Hypergraph::new(vec!["x".into(), "y".into()], vec![], 2).unwrap().with_partite(Partite::uniform(2, vec![0, 1])).unwrap();
        let out = hj(&Structure::plain(h.clone()), 3, None, &Ctx::default()).unwrap();
        assert_eq!(out.target.host, h);
        assert_eq!(out.copies.len(), 1);
    }

    #[test]
    fn pretrain_product_relation() {
        // two wagons of one edge each
        let p = Pretrain::singletons(matching(2));
        let f = Structure::from_pretrain(&p);
        let out = hj(&f, 2, Some(2), &Ctx::default()).unwrap();
        // product of a discrete relation is discrete
        assert_eq!(out.target.relations[0].num_classes(), 4);
        assert!(out.violations().is_empty());
        let single = Structure::from_pretrain(&Pretrain::single_wagon(matching(2)));
        let out = hj(&single, 2, Some(2), &Ctx::default()).unwrap();
        assert_eq!(out.target.relations[0].num_classes(), 1);
        assert!(out.violations().is_empty());
    }

    #[test]
    fn templates_match_oracle_lines() {
        let lines = crate::oracle::combinatorial_lines(3, 2);
        let templates = combinatorial_templates(3, 2);
        assert_eq!(lines.len(), templates.len());
        for (l, t) in lines.iter().zip(&templates) {
            let words: Vec<usize> = (0..3).map(|x| t.iter().fold(0, |w, s| w * 3 + s.unwrap_or(x))).collect();
            assert_eq!(&words, l);
        }
    }
}
