//! Pretrains: hypergraphs with an edge partition into wagons.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::copy_system::{CopyRef, CopySystem, View};
use crate::error::{invalid, precondition, Result};
use crate::hypergraph::{
    is_sorted_subset, shortest_cycle_in_family, sorted_intersection, strongly_induced_unchecked, EdgeCycle, EdgeId,
    Hypergraph, Partite, Sub, Vertex,
};
use crate::partition::{Partition, UnionFind};

/// A hypergraph with an equivalence relation on its edges.
///
/// Wagon ids are canonical: wagons are numbered in order of their least edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pretrain {
    host: Hypergraph,
    wagons: Partition,
    wagon_edges: Vec<Vec<EdgeId>>,
    wagon_vertices: Vec<Vec<Vertex>>,
}

impl Pretrain {
    pub fn new(host: Hypergraph, wagons: Partition) -> Result<Self> {
        if wagons.len() != host.m() {
            return invalid(format!("wagon partition covers {} edges, host has {}", wagons.len(), host.m()));
        }
        let wagon_edges = wagons.blocks();
        let wagon_vertices = wagon_edges.iter().map(|es| host.span(es).vertices).collect();
        Ok(Pretrain { host, wagons, wagon_edges, wagon_vertices })
    }

    /// Wagon labels given per edge id.
    pub fn from_labels(host: Hypergraph, labels: &[usize]) -> Result<Self> {
        let p = Partition::from_labels(labels);
        Self::new(host, p)
    }

    /// Every edge is its own wagon.
    pub fn singletons(host: Hypergraph) -> Self {
        let m = host.m();
        Self::new(host, Partition::discrete(m)).unwrap()
    }

    /// All edges in one wagon.
    pub fn single_wagon(host: Hypergraph) -> Self {
        let m = host.m();
        Self::new(host, Partition::single(m)).unwrap()
    }

    /// Builds the host from edges carrying wagon labels.
    pub fn from_labelled_edges(
        names: Vec<String>,
        edges: Vec<(Vec<Vertex>, usize)>,
        uniformity: Option<usize>,
        ordered: bool,
        partite: Option<Partite>,
    ) -> Result<Self> {
        let n = names.len();
        let mut seen = HashSet::new();
        let mut sorted = Vec::with_capacity(edges.len());
        for (e, _) in &edges {
            let mut s = e.clone();
            s.sort_unstable();
            if s.iter().any(|&v| v >= n) {
                return invalid("labelled edge leaves the vertex set");
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return invalid("labelled edge repeats a vertex");
            }
            if let Some(k) = uniformity {
                if s.len() != k {
                    return invalid(format!("labelled edge of size {} in a {k}-uniform host", s.len()));
                }
            }
            if !seen.insert(s.clone()) {
                return invalid(format!("edge {s:?} listed twice"));
            }
            sorted.push(s);
        }
        let host = Hypergraph::from_parts(names, sorted.clone(), uniformity, ordered, partite);
        let mut labels = vec![0; host.m()];
        for (s, (_, l)) in sorted.iter().zip(&edges) {
            labels[host.edge_id(s).unwrap()] = *l;
        }
        Self::from_labels(host, &labels)
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    pub fn wagons(&self) -> &Partition {
        &self.wagons
    }

    pub fn wagon_count(&self) -> usize {
        self.wagon_edges.len()
    }

    pub fn wagon_of(&self, e: EdgeId) -> usize {
        self.wagons.class_of(e)
    }

    pub fn equivalent(&self, a: EdgeId, b: EdgeId) -> bool {
        self.wagons.same(a, b)
    }

    pub fn wagon_edges(&self, w: usize) -> &[EdgeId] {
        &self.wagon_edges[w]
    }

    pub fn wagon_vertices(&self, w: usize) -> &[Vertex] {
        &self.wagon_vertices[w]
    }

    /// The wagon as a subhypergraph of the host.
    pub fn wagon_sub(&self, w: usize) -> Sub {
        Sub { vertices: self.wagon_vertices[w].clone(), edges: self.wagon_edges[w].clone() }
    }

    /// Wagons containing at least one edge of `s`, ascending.
    pub fn wagons_touching(&self, s: &Sub) -> Vec<usize> {
        let set: BTreeSet<usize> = s.edges.iter().map(|&e| self.wagon_of(e)).collect();
        set.into_iter().collect()
    }

    /// The subpretrain on `s`, with the map new vertex -> old.
    pub fn subpretrain(&self, s: &Sub) -> Result<(Pretrain, Vec<Vertex>)> {
        self.host.check_sub(s)?;
        let (h, map) = self.host.extract(s);
        // extraction keeps the relative order of edges
        let wagons = self.wagons.restrict(&s.edges);
        Ok((Pretrain::new(h, wagons)?, map))
    }

    pub fn into_host(self) -> Hypergraph {
        self.host
    }

    /// The same pretrain with the host order flag set.
    pub fn with_order(self, ordered: bool) -> Self {
        let Pretrain { host, wagons, wagon_edges, wagon_vertices } = self;
        Pretrain { host: host.with_order(ordered), wagons, wagon_edges, wagon_vertices }
    }
}

/// Transfers a sub of `from` to `to` along a vertex map `from -> to`.
pub(crate) fn map_sub(from: &Hypergraph, to: &Hypergraph, map: &[Vertex], s: &Sub) -> Option<Sub> {
    let vertices = s.vertices.iter().map(|&v| map[v]).collect();
    let mut edges = Vec::with_capacity(s.edges.len());
    for &e in &s.edges {
        let mut img: Vec<Vertex> = from.edge(e).iter().map(|&v| map[v]).collect();
        img.sort_unstable();
        edges.push(to.edge_id(&img)?);
    }
    Some(Sub::new(vertices, edges))
}

/// Linear host and wagons pairwise sharing at most one vertex.
pub fn is_linear_pretrain(p: &Pretrain) -> bool {
    if !p.host.is_linear() {
        return false;
    }
    let mut seen: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for w in 0..p.wagon_count() {
        let vs = p.wagon_vertices(w);
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if seen.insert((vs[i], vs[j]), w).is_some_and(|o| o != w) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WagonGirthReport {
    pub holds: bool,
    /// A short cycle of wagons, as wagon ids and connecting vertices.
    pub witness: Option<EdgeCycle>,
}

/// The girth of the wagon set system exceeds `g`; the host must be linear.
pub fn frak_girth_pretrain_exceeds(p: &Pretrain, g: usize) -> Result<WagonGirthReport> {
    if !p.host.is_linear() {
        return precondition("wagon girth needs a linear host");
    }
    let witness = if g < 2 { None } else { shortest_cycle_in_family(p.host.n(), &p.wagon_vertices, g) };
    Ok(WagonGirthReport { holds: witness.is_none(), witness })
}

// ---------------------------------------------------------------------------
// extensions

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub extension: bool,
    pub tame: bool,
    /// First failed clause, if any.
    pub failure: Option<String>,
}

/// Locates `base` inside `ext` by vertex names and checks it is a subpretrain.
pub fn locate_by_names(base: &Pretrain, ext: &Pretrain) -> Result<Sub> {
    let mut map = Vec::with_capacity(base.host.n());
    for name in base.host.names() {
        match ext.host.vertex_named(name) {
            Some(v) => map.push(v),
            None => return invalid(format!("vertex {name} is missing from the extension")),
        }
    }
    let sub = match map_sub(&base.host, &ext.host, &map, &base.host.whole()) {
        Some(s) => s,
        None => return invalid("an edge of the base is missing from the extension"),
    };
    let img: Vec<EdgeId> = (0..base.host.m())
        .map(|e| {
            let mut vs: Vec<Vertex> = base.host.edge(e).iter().map(|&v| map[v]).collect();
            vs.sort_unstable();
            ext.host.edge_id(&vs).unwrap()
        })
        .collect();
    for a in 0..img.len() {
        for b in a + 1..img.len() {
            if base.equivalent(a, b) != ext.equivalent(img[a], img[b]) {
                return invalid("the base relation is not the restriction of the extension's");
            }
        }
    }
    Ok(sub)
}

/// Extension and tame-extension check of `ext` over the base located by names.
pub fn is_extension(base: &Pretrain, ext: &Pretrain) -> Result<ExtensionReport> {
    let sub = locate_by_names(base, ext)?;
    Ok(extension_report(ext, &sub))
}

/// Extension check of `p` over its subpretrain `f`.
pub fn extension_report(p: &Pretrain, f: &Sub) -> ExtensionReport {
    let h = &p.host;
    let fail = |msg: String| ExtensionReport { extension: false, tame: false, failure: Some(msg) };
    let iso_h: BTreeSet<Vertex> = h.isolated().into_iter().collect();
    let iso_f: BTreeSet<Vertex> = f.isolated_in(h).into_iter().collect();
    if iso_h != iso_f {
        return fail("(i): isolated vertices differ".into());
    }
    // contraction of each wagon to F
    let mut contracted: Vec<Vec<Vertex>> = Vec::with_capacity(p.wagon_count());
    for w in 0..p.wagon_count() {
        let inside: Vec<EdgeId> = p.wagon_edges(w).iter().copied().filter(|&e| f.contains_edge(e)).collect();
        if inside.is_empty() {
            return fail(format!("(ii): wagon {w} has no edge in the base"));
        }
        contracted.push(h.span(&inside).vertices);
    }
    for a in 0..p.wagon_count() {
        for b in a + 1..p.wagon_count() {
            let big = sorted_intersection(p.wagon_vertices(a), p.wagon_vertices(b));
            let small = sorted_intersection(&contracted[a], &contracted[b]);
            if big != small {
                return fail(format!("(iii): wagons {a} and {b} meet outside their contractions"));
            }
        }
    }
    let tame_failure = if !strongly_induced_unchecked(f, h) {
        Some("tame: base is not strongly induced".to_string())
    } else {
        let mut bad = None;
        'outer: for e in 0..h.m() {
            for &x in h.edge(e) {
                if !f.contains_vertex(x) {
                    continue;
                }
                let ok = h.incident(x).iter().any(|&e2| f.contains_edge(e2) && p.equivalent(e, e2));
                if !ok {
                    bad = Some(format!("tame: edge {e} at vertex {x} has no equivalent base edge through it"));
                    break 'outer;
                }
            }
        }
        bad
    };
    ExtensionReport { extension: true, tame: tame_failure.is_none(), failure: tame_failure }
}

// ---------------------------------------------------------------------------
// wagon assimilation and semidirect extension

#[derive(Clone, Debug)]
pub struct Assimilation {
    pub pretrain: Pretrain,
    /// The standard copy of the input.
    pub standard: Sub,
    pub note: Option<String>,
}

/// Enlarges every wagon to a copy of the disjoint union of all wagons.
///
/// Fresh copies of the wagons preceding wagon `i` are placed before all old
/// vertices and those following it after them, so each new wagon is
/// order-isomorphic to the ordered disjoint union.
pub fn wagon_assimilation(p: &Pretrain) -> Result<Assimilation> {
    let h = &p.host;
    if !h.is_ordered() {
        return invalid("wagon assimilation needs an ordered pretrain");
    }
    let t = p.wagon_count();
    if t == 0 {
        return Ok(Assimilation { pretrain: p.clone(), standard: h.whole(), note: Some("no wagons, unchanged".into()) });
    }
    if t == 1 {
        return Ok(Assimilation { pretrain: p.clone(), standard: h.whole(), note: None });
    }
    // sort keys: (region, i, j, position); old vertices get region 1
    let mut keyed: Vec<((usize, usize, usize, usize), String, Option<usize>, Option<Vertex>)> = Vec::new();
    for v in 0..h.n() {
        keyed.push(((1, 0, 0, v), h.name(v).to_string(), h.class_of(v), Some(v)));
    }
    // fresh[(i, j)][k] = key of the fresh copy of the k-th vertex of wagon j inside wagon i
    for i in 0..t {
        for j in 0..t {
            if i == j {
                continue;
            }
            let region = if j < i { 0 } else { 2 };
            for (k, &v) in p.wagon_vertices(j).iter().enumerate() {
                keyed.push(((region, i, j, k), format!("wa{i}.{j}.{}", h.name(v)), h.class_of(v), None));
            }
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut id_of: HashMap<(usize, usize, usize, usize), Vertex> = HashMap::new();
    let mut names = Vec::with_capacity(keyed.len());
    let mut classes = Vec::with_capacity(keyed.len());
    let mut old_pos = vec![0; h.n()];
    for (idx, (key, name, class, old)) in keyed.into_iter().enumerate() {
        id_of.insert(key, idx);
        names.push(name);
        classes.push(class.unwrap_or(0));
        if let Some(v) = old {
            old_pos[v] = idx;
        }
    }
    let mut edges: Vec<(Vec<Vertex>, usize)> = Vec::new();
    for e in 0..h.m() {
        edges.push((h.edge(e).iter().map(|&v| old_pos[v]).collect(), p.wagon_of(e)));
    }
    for i in 0..t {
        for j in 0..t {
            if i == j {
                continue;
            }
            let region = if j < i { 0 } else { 2 };
            let pos: HashMap<Vertex, usize> = p.wagon_vertices(j).iter().enumerate().map(|(k, &v)| (v, k)).collect();
            for &e in p.wagon_edges(j) {
                let img = h.edge(e).iter().map(|v| id_of[&(region, i, j, pos[v])]).collect();
                edges.push((img, i));
            }
        }
    }
    let partite = h.partite().map(|q| Partite { f: q.f.clone(), class: classes });
    let out = Pretrain::from_labelled_edges(names, edges, h.uniformity(), true, partite)?;
    let standard = map_sub(h, &out.host, &old_pos, &h.whole()).unwrap();
    Ok(Assimilation { pretrain: out, standard, note: None })
}

/// Order isomorphism from the pattern sub `w` of `x` onto a wagon of `p`.
fn wagon_order_map(x: &Hypergraph, w: &Sub, p: &Pretrain, wagon: usize) -> Option<HashMap<Vertex, Vertex>> {
    let target = p.wagon_vertices(wagon);
    if target.len() != w.vertices.len() || p.wagon_edges(wagon).len() != w.edges.len() {
        return None;
    }
    let phi: HashMap<Vertex, Vertex> = w.vertices.iter().copied().zip(target.iter().copied()).collect();
    let mut imgs: Vec<Vec<Vertex>> = w
        .edges
        .iter()
        .map(|&e| {
            let mut s: Vec<Vertex> = x.edge(e).iter().map(|v| phi[v]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    imgs.sort();
    let mut have: Vec<Vec<Vertex>> = p.wagon_edges(wagon).iter().map(|&e| p.host.edge(e).to_vec()).collect();
    have.sort();
    (imgs == have).then_some(phi)
}

/// Extends every wagon of `p` along the pattern pair `(x, w)`.
///
/// A new vertex is placed right after the image of its nearest pattern
/// predecessor in `w`, or right before the image of the least vertex of `w` when
/// it precedes all of them. Ties are broken by wagon id, then pattern position.
pub fn semidirect_extend(p: &Pretrain, x: &Hypergraph, w: &Sub) -> Result<Assimilation> {
    let h = &p.host;
    if !h.is_ordered() || !x.is_ordered() {
        return invalid("semidirect extension needs ordered inputs");
    }
    x.check_sub(w)?;
    if !x.isolated().is_empty() {
        return invalid("pattern hypergraph has isolated vertices");
    }
    if !w.isolated_in(x).is_empty() || w.vertices.is_empty() {
        return invalid("pattern wagon has isolated vertices");
    }
    if x.uniformity() != h.uniformity() {
        return invalid("pattern and pretrain have different uniformity");
    }
    let mut maps = Vec::with_capacity(p.wagon_count());
    for wag in 0..p.wagon_count() {
        match wagon_order_map(x, w, p, wag) {
            Some(m) => maps.push(m),
            None => return invalid(format!("wagon {wag} is not order-isomorphic to the pattern wagon")),
        }
    }
    let both_partite = match (h.partite(), x.partite()) {
        (Some(a), Some(b)) if a.f == b.f => {
            for m in &maps {
                if m.iter().any(|(&s, &t)| b.class[s] != a.class[t]) {
                    return invalid("pattern wagon classes disagree with a wagon");
                }
            }
            true
        }
        _ => false,
    };
    let new_vertices: Vec<Vertex> = (0..x.n()).filter(|&v| !w.contains_vertex(v)).collect();
    let mut keyed: Vec<((usize, usize, usize, usize), String, usize, Option<Vertex>)> = Vec::new();
    for v in 0..h.n() {
        keyed.push(((v, 1, 0, 0), h.name(v).to_string(), h.class_of(v).unwrap_or(0), Some(v)));
    }
    for (wag, phi) in maps.iter().enumerate() {
        for &y in &new_vertices {
            let key = match w.vertices.iter().rev().find(|&&u| u < y) {
                Some(u) => (phi[u], 2, wag, y),
                None => (phi[&w.vertices[0]], 0, wag, y),
            };
            let class = x.class_of(y).unwrap_or(0);
            keyed.push((key, format!("sx{wag}.{}", x.name(y)), class, None));
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut id_of: HashMap<(usize, usize), Vertex> = HashMap::new();
    let mut names = Vec::with_capacity(keyed.len());
    let mut classes = Vec::with_capacity(keyed.len());
    let mut old_pos = vec![0; h.n()];
    for (idx, (key, name, class, old)) in keyed.into_iter().enumerate() {
        match old {
            Some(v) => old_pos[v] = idx,
            None => {
                id_of.insert((key.2, key.3), idx);
            }
        }
        names.push(name);
        classes.push(class);
    }
    let mut edges: Vec<(Vec<Vertex>, usize)> =
        (0..h.m()).map(|e| (h.edge(e).iter().map(|&v| old_pos[v]).collect(), p.wagon_of(e))).collect();
    let mut present: HashSet<Vec<Vertex>> = edges.iter().map(|(e, _)| {
        let mut s = e.clone();
        s.sort_unstable();
        s
    }).collect();
    for (wag, phi) in maps.iter().enumerate() {
        for e in 0..x.m() {
            if w.contains_edge(e) {
                continue;
            }
            let mut img: Vec<Vertex> = x
                .edge(e)
                .iter()
                .map(|&v| if w.contains_vertex(v) { old_pos[phi[&v]] } else { id_of[&(wag, v)] })
                .collect();
            img.sort_unstable();
            if !present.insert(img.clone()) {
                return invalid("a pattern edge lands on an existing edge");
            }
            edges.push((img, wag));
        }
    }
    let partite = if both_partite { h.partite().map(|q| Partite { f: q.f.clone(), class: classes }) } else { None };
    let out = Pretrain::from_labelled_edges(names, edges, h.uniformity(), true, partite)?;
    let standard = map_sub(h, &out.host, &old_pos, &h.whole()).unwrap();
    Ok(Assimilation { pretrain: out, standard, note: None })
}

// ---------------------------------------------------------------------------
// living hypergraphs and derived structures

#[derive(Clone, Debug)]
pub struct Derived {
    pub pretrain: Pretrain,
    /// Source wagon of `N` for each derived wagon.
    pub wagon_source: Vec<usize>,
    /// Covering `N`-edge for each edge of `H`.
    pub cover: Vec<EdgeId>,
}

/// Checks that `h` lives in `n` (same vertex count) and returns covering edges.
pub fn living_cover(h: &Hypergraph, n: &Hypergraph) -> Result<Vec<EdgeId>> {
    if h.n() != n.n() {
        return invalid("living requires a common vertex set");
    }
    let mut cover = Vec::with_capacity(h.m());
    for e in 0..h.m() {
        let x = h.edge(e)[0];
        match n.incident(x).iter().copied().find(|&f| is_sorted_subset(h.edge(e), n.edge(f))) {
            Some(f) => cover.push(f),
            None => return precondition(format!("living (i): edge {:?} is covered by no edge", h.edge(e))),
        }
    }
    for f in 0..n.m() {
        let fe = n.edge(f);
        for &v in fe {
            if !h.incident(v).iter().any(|&e| is_sorted_subset(h.edge(e), fe)) {
                return precondition(format!("living (ii): vertex {v} is isolated inside edge {fe:?}"));
            }
        }
    }
    Ok(cover)
}

/// The pretrain derived on `h` from the linear pretrain `n`.
pub fn derive(n: &Pretrain, h: &Hypergraph) -> Result<Derived> {
    if !n.host.is_linear() {
        return precondition("derivation needs a linear pretrain");
    }
    let cover = living_cover(h, &n.host)?;
    // an edge of size one may have several covers; classes are joined across all of them
    let t = n.wagon_count();
    let mut uf = UnionFind::new(h.m() + t);
    for e in 0..h.m() {
        let x = h.edge(e)[0];
        for &f in n.host.incident(x) {
            if is_sorted_subset(h.edge(e), n.host.edge(f)) {
                uf.union(e, h.m() + n.wagon_of(f));
            }
        }
    }
    let labels: Vec<usize> = (0..h.m()).map(|e| uf.find(e)).collect();
    let pretrain = Pretrain::from_labels(h.clone(), &labels)?;
    let wagon_source = (0..pretrain.wagon_count())
        .map(|w| n.wagon_of(cover[pretrain.wagon_edges(w)[0]]))
        .collect();
    Ok(Derived { pretrain, wagon_source, cover })
}

/// The copy `m` of `n` derived on `h`: same vertices, edges of `h` inside edges of `m`.
pub fn derived_copy(n: &Hypergraph, h: &Hypergraph, cover: &[EdgeId], m: &Sub) -> Sub {
    let edges = (0..h.m()).filter(|&e| m.contains_edge(cover[e]) || {
        let x = h.edge(e)[0];
        n.incident(x).iter().any(|&f| m.contains_edge(f) && is_sorted_subset(h.edge(e), n.edge(f)))
    });
    Sub::new(m.vertices.clone(), edges.collect())
}

/// Derives a whole system of copies.
pub fn derive_system(sys: &PretrainCopySystem, h: &Hypergraph) -> Result<PretrainCopySystem> {
    let d = derive(&sys.pretrain, h)?;
    let copies = sys.copies().iter().map(|m| derived_copy(sys.pretrain.host(), h, &d.cover, m)).collect();
    PretrainCopySystem::new(d.pretrain, copies, sys.is_extended())
}

/// Every outer copy splits as a disjoint union of tame extensions of its inner copies.
pub fn is_scattered(outer: &PretrainCopySystem, inner: &[Sub]) -> Result<bool> {
    let p = &outer.pretrain;
    let h = p.host();
    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); outer.copies().len()];
    for (i, f) in inner.iter().enumerate() {
        h.check_sub(f)?;
        let hits: Vec<usize> = outer.copies().iter().enumerate().filter(|(_, g)| f.is_subset_of(g)).map(|(j, _)| j).collect();
        match hits.as_slice() {
            [j] => owner[*j].push(i),
            [] => return invalid(format!("inner copy {i} lies in no outer copy")),
            _ => return invalid(format!("inner copy {i} lies in several outer copies")),
        }
    }
    for (j, g) in outer.copies().iter().enumerate() {
        let (gp, map) = p.subpretrain(g)?;
        let gh = gp.host();
        let back: HashMap<Vertex, usize> = map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // blocks of the disjoint union: joined along edges and wagons
        let mut uf = UnionFind::new(gh.n());
        for w in 0..gp.wagon_count() {
            let vs = gp.wagon_vertices(w);
            for pair in vs.windows(2) {
                uf.union(pair[0], pair[1]);
            }
        }
        let mut block_owner: HashMap<usize, usize> = HashMap::new();
        let mut local: Vec<Sub> = Vec::new();
        for (slot, &i) in owner[j].iter().enumerate() {
            let f = &inner[i];
            let vs: Vec<Vertex> = f.vertices.iter().map(|v| back[v]).collect();
            let inv: Vec<Vertex> = (0..h.n()).map(|v| back.get(&v).copied().unwrap_or(usize::MAX)).collect();
            let roots: BTreeSet<usize> = vs.iter().map(|&v| uf.find(v)).collect();
            if roots.len() > 1 {
                return Ok(false);
            }
            if let Some(&r) = roots.iter().next() {
                if block_owner.insert(r, slot).is_some() {
                    return Ok(false);
                }
            }
            local.push(map_sub(h, gh, &inv, f).unwrap());
        }
        let mut blocks: HashMap<usize, Vec<Vertex>> = HashMap::new();
        for v in 0..gh.n() {
            blocks.entry(uf.find(v)).or_default().push(v);
        }
        for (root, vs) in blocks {
            let slot = match block_owner.get(&root) {
                Some(&s) => s,
                None => return Ok(false),
            };
            let scope = gh.induced(&vs);
            let (bp, bmap) = gp.subpretrain(&scope)?;
            let inv: Vec<Vertex> = {
                let mut inv = vec![usize::MAX; gh.n()];
                for (i, &v) in bmap.iter().enumerate() {
                    inv[v] = i;
                }
                inv
            };
            let f = map_sub(gh, bp.host(), &inv, &local[slot]).unwrap();
            if !extension_report(&bp, &f).tame {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// systems of pretrains and big cycles

/// A pretrain with distinguished subpretrains. The relation on each copy is the
/// restriction of the host relation.
#[derive(Clone, Debug)]
pub struct PretrainCopySystem {
    pretrain: Pretrain,
    system: CopySystem,
}

impl PretrainCopySystem {
    pub fn new(pretrain: Pretrain, copies: Vec<Sub>, extended: bool) -> Result<Self> {
        let system = CopySystem::new(pretrain.host.clone(), copies, extended)?;
        Ok(PretrainCopySystem { pretrain, system })
    }

    /// The system of edge copies alone.
    pub fn edge_copies(pretrain: Pretrain) -> Self {
        let system = CopySystem::edge_copies(pretrain.host.clone());
        PretrainCopySystem { pretrain, system }
    }

    pub fn pretrain(&self) -> &Pretrain {
        &self.pretrain
    }

    pub fn copies(&self) -> &[Sub] {
        self.system.copies()
    }

    pub fn is_extended(&self) -> bool {
        self.system.is_extended()
    }

    pub fn extend(self) -> Self {
        PretrainCopySystem { pretrain: self.pretrain, system: self.system.extend() }
    }

    /// The underlying copy system, forgetting the wagons.
    pub fn as_copy_system(&self) -> &CopySystem {
        &self.system
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BigConnector {
    Vertex(Vertex),
    Wagon(usize),
}

impl BigConnector {
    pub fn is_vertex(self) -> bool {
        matches!(self, BigConnector::Vertex(_))
    }
}

/// `F1 q1 F2 q2 ... Fn qn` where `q_i` sits between `F_i` and `F_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigCycle {
    pub entries: Vec<(CopyRef, BigConnector)>,
}

impl BigCycle {
    pub fn new(entries: Vec<(CopyRef, BigConnector)>) -> Self {
        BigCycle { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BigCycleClass {
    Invalid(String),
    Unacceptable(String),
    Acceptable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Piece {
    Short(EdgeId),
    Long(EdgeId, usize, EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupremeCopy {
    pub copy: CopyRef,
    /// Replaced positions with their pieces.
    pub pieces: Vec<(usize, Piece)>,
    pub replacement: BigCycle,
    /// Whether the replacement cycle is again acceptable.
    pub replacement_acceptable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigGirthReport {
    pub holds: bool,
    pub reason: Option<String>,
    pub witness: Option<BigCycle>,
    pub cycles_checked: usize,
}

/// Big cycle over view slots.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BigResolved {
    copies: Vec<usize>,
    conns: Vec<BigConnector>,
}

struct Ctx<'a> {
    p: &'a Pretrain,
    view: View,
    /// Wagons met by each slot, ascending.
    touch: Vec<Vec<usize>>,
}

impl<'a> Ctx<'a> {
    fn new(sys: &'a PretrainCopySystem) -> Self {
        let view = sys.system.view();
        let touch = view.subs.iter().map(|s| sys.pretrain.wagons_touching(s)).collect();
        Ctx { p: &sys.pretrain, view, touch }
    }

    fn resolve(&self, c: &BigCycle) -> Result<BigResolved> {
        let mut copies = Vec::with_capacity(c.len());
        let mut conns = Vec::with_capacity(c.len());
        for &(r, q) in &c.entries {
            copies.push(self.view.resolve(r)?);
            match q {
                BigConnector::Vertex(v) if v >= self.p.host.n() => return invalid(format!("vertex {v} outside host")),
                BigConnector::Wagon(w) if w >= self.p.wagon_count() => return invalid(format!("wagon {w} does not exist")),
                _ => {}
            }
            conns.push(q);
        }
        Ok(BigResolved { copies, conns })
    }

    fn to_cycle(&self, r: &BigResolved) -> BigCycle {
        BigCycle { entries: r.copies.iter().zip(&r.conns).map(|(&c, &q)| (self.view.refs[c], q)).collect() }
    }

    fn touches(&self, slot: usize, w: usize) -> bool {
        self.touch[slot].binary_search(&w).is_ok()
    }

    fn violation(&self, r: &BigResolved) -> Option<String> {
        let n = r.copies.len();
        if n < 2 {
            return Some("length below 2".into());
        }
        for i in 0..n {
            if r.copies[i] == r.copies[(i + 1) % n] {
                return Some(format!("B1: copies {} and {} coincide", i + 1, (i + 1) % n + 1));
            }
        }
        let distinct: HashSet<_> = r.conns.iter().collect();
        if distinct.len() != n {
            return Some("B2: connectors repeat".into());
        }
        for i in 0..n {
            let (a, b) = (r.copies[i], r.copies[(i + 1) % n]);
            match r.conns[i] {
                BigConnector::Vertex(v) => {
                    if !self.view.subs[a].contains_vertex(v) || !self.view.subs[b].contains_vertex(v) {
                        return Some(format!("B3: vertex connector {} not shared", i + 1));
                    }
                }
                BigConnector::Wagon(w) => {
                    if !self.touches(a, w) || !self.touches(b, w) {
                        return Some(format!("B4: wagon connector {} misses an adjacent copy", i + 1));
                    }
                }
            }
        }
        None
    }

    /// Positions whose connector is a vertex of wagon `w`.
    fn marks(&self, r: &BigResolved, w: usize) -> Vec<usize> {
        let vs = self.p.wagon_vertices(w);
        (0..r.conns.len())
            .filter(|&i| matches!(r.conns[i], BigConnector::Vertex(v) if vs.binary_search(&v).is_ok()))
            .collect()
    }

    fn unacceptable(&self, r: &BigResolved) -> Option<String> {
        let n = r.conns.len();
        let h = &self.p.host;
        if twice_order(&r.conns) == 2 && !r.copies.iter().any(|&c| self.view.real[c]) {
            return Some("A1: order 1 without a real copy".into());
        }
        let mut connector_wagons = HashSet::new();
        for (i, q) in r.conns.iter().enumerate() {
            if let BigConnector::Wagon(w) = *q {
                connector_wagons.insert(w);
                let m = self.marks(r, w);
                let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
                if m.iter().any(|&j| j != prev && j != next) {
                    return Some(format!("A2: wagon connector {} holds a far vertex connector", i + 1));
                }
                if m.len() == 2 {
                    if let (BigConnector::Vertex(a), BigConnector::Vertex(b)) = (r.conns[prev], r.conns[next]) {
                        if h.incident(a).iter().any(|&f| h.edge(f).binary_search(&b).is_ok()) {
                            return Some(format!("A2: an edge covers both neighbours of wagon connector {}", i + 1));
                        }
                    }
                }
            }
        }
        let mut others: BTreeSet<usize> = BTreeSet::new();
        for q in &r.conns {
            if let BigConnector::Vertex(v) = *q {
                others.extend(h.incident(v).iter().map(|&e| self.p.wagon_of(e)));
            }
        }
        for w in others {
            if connector_wagons.contains(&w) {
                continue;
            }
            let m = self.marks(r, w);
            let ok = match m.len() {
                0 | 1 => true,
                2 => (m[0] + 1) % n == m[1] || (m[1] + 1) % n == m[0],
                _ => false,
            };
            if !ok {
                return Some(format!("A3: wagon {w} holds non-consecutive vertex connectors"));
            }
        }
        None
    }

    fn edge_in_wagon_fits(&self, f: EdgeId, q: BigConnector) -> bool {
        match q {
            BigConnector::Vertex(v) => self.p.host.edge(f).binary_search(&v).is_ok(),
            BigConnector::Wagon(w) => self.p.wagon_of(f) == w,
        }
    }

    fn supreme(&self, r: &BigResolved) -> Option<SupremeCopy> {
        let n = r.copies.len();
        let h = &self.p.host;
        let mut tried = HashSet::new();
        for &star in &r.copies {
            if !tried.insert(star) {
                continue;
            }
            let sub = &self.view.subs[star];
            let positions: Vec<usize> = (0..n).filter(|&i| r.copies[i] != star).collect();
            let mut cands: Vec<Vec<Piece>> = Vec::with_capacity(positions.len());
            for &i in &positions {
                let (left, right) = (r.conns[(i + n - 1) % n], r.conns[i]);
                let mut list: Vec<Piece> = sub
                    .edges
                    .iter()
                    .copied()
                    .filter(|&f| self.view.edge_slot(f).is_some())
                    .filter(|&f| self.edge_in_wagon_fits(f, left) && self.edge_in_wagon_fits(f, right))
                    .map(Piece::Short)
                    .collect();
                if let (BigConnector::Vertex(a), BigConnector::Vertex(b)) = (left, right) {
                    let covered = h.incident(a).iter().any(|&f| h.edge(f).binary_search(&b).is_ok());
                    if !covered {
                        for &f1 in &sub.edges {
                            if h.edge(f1).binary_search(&a).is_err() || self.view.edge_slot(f1).is_none() {
                                continue;
                            }
                            let w = self.p.wagon_of(f1);
                            if r.conns.contains(&BigConnector::Wagon(w)) {
                                continue;
                            }
                            for &f2 in &sub.edges {
                                if f2 != f1
                                    && self.p.wagon_of(f2) == w
                                    && h.edge(f2).binary_search(&b).is_ok()
                                    && self.view.edge_slot(f2).is_some()
                                {
                                    list.push(Piece::Long(f1, w, f2));
                                }
                            }
                        }
                    }
                }
                cands.push(list);
            }
            if cands.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut chosen = Vec::with_capacity(positions.len());
            if let Some(rep) = self.piece_dfs(r, star, &positions, &cands, &mut chosen) {
                let replacement_acceptable = self.unacceptable(&rep).is_none();
                return Some(SupremeCopy {
                    copy: self.view.refs[star],
                    pieces: positions.into_iter().zip(chosen).collect(),
                    replacement: self.to_cycle(&rep),
                    replacement_acceptable,
                });
            }
        }
        None
    }

    fn piece_dfs(
        &self,
        r: &BigResolved,
        star: usize,
        positions: &[usize],
        cands: &[Vec<Piece>],
        chosen: &mut Vec<Piece>,
    ) -> Option<BigResolved> {
        let k = chosen.len();
        if k == positions.len() {
            let rep = self.substitute(r, star, positions, chosen);
            return self.violation(&rep).is_none().then_some(rep);
        }
        for &piece in &cands[k] {
            if let (Piece::Long(_, w, _), true) = (piece, k > 0) {
                if chosen.iter().any(|c| matches!(c, Piece::Long(_, w2, _) if *w2 == w)) {
                    continue;
                }
            }
            if k > 0 && positions[k - 1] + 1 == positions[k] && last_edge(chosen[k - 1]) == first_edge(piece) {
                continue;
            }
            chosen.push(piece);
            if let Some(rep) = self.piece_dfs(r, star, positions, cands, chosen) {
                return Some(rep);
            }
            chosen.pop();
        }
        None
    }

    fn substitute(&self, r: &BigResolved, star: usize, positions: &[usize], chosen: &[Piece]) -> BigResolved {
        let n = r.copies.len();
        let mut copies = Vec::with_capacity(n + chosen.len());
        let mut conns = Vec::with_capacity(n + chosen.len());
        let mut k = 0;
        for i in 0..n {
            if r.copies[i] == star {
                copies.push(star);
            } else {
                match chosen[k] {
                    Piece::Short(f) => copies.push(self.view.edge_slot(f).unwrap()),
                    Piece::Long(f1, w, f2) => {
                        copies.push(self.view.edge_slot(f1).unwrap());
                        conns.push(BigConnector::Wagon(w));
                        copies.push(self.view.edge_slot(f2).unwrap());
                    }
                }
                debug_assert_eq!(positions[k], i);
                k += 1;
            }
            conns.push(r.conns[i]);
        }
        BigResolved { copies, conns }
    }
}

fn first_edge(p: Piece) -> EdgeId {
    match p {
        Piece::Short(f) | Piece::Long(f, _, _) => f,
    }
}

fn last_edge(p: Piece) -> EdgeId {
    match p {
        Piece::Short(f) | Piece::Long(_, _, f) => f,
    }
}

fn twice_order(conns: &[BigConnector]) -> usize {
    let n = conns.len();
    (0..n).map(|i| if conns[(i + n - 1) % n].is_vertex() == conns[i].is_vertex() { 2 } else { 1 }).sum()
}

fn canonical(r: &BigResolved) -> BigResolved {
    let n = r.copies.len();
    let mut best: Option<(Vec<(usize, BigConnector)>, BigResolved)> = None;
    for refl in [false, true] {
        for k in 0..n {
            let (copies, conns): (Vec<usize>, Vec<BigConnector>) = if refl {
                (0..n).map(|i| (r.copies[(k + n - i) % n], r.conns[(k + 2 * n - 1 - i) % n])).unzip()
            } else {
                (0..n).map(|i| (r.copies[(k + i) % n], r.conns[(k + i) % n])).unzip()
            };
            let key: Vec<(usize, BigConnector)> = copies.iter().copied().zip(conns.iter().copied()).collect();
            if best.as_ref().map_or(true, |(b, _)| key < *b) {
                best = Some((key, BigResolved { copies, conns }));
            }
        }
    }
    best.unwrap().1
}

/// Order of a big cycle: pure indices count one, mixed indices one half.
pub fn big_cycle_order(c: &BigCycle) -> f64 {
    let conns: Vec<BigConnector> = c.entries.iter().map(|e| e.1).collect();
    twice_order(&conns) as f64 / 2.0
}

/// Clause-precise classification against (B1)-(B4) and (A1)-(A3).
pub fn classify_big_cycle(sys: &PretrainCopySystem, c: &BigCycle) -> Result<BigCycleClass> {
    let ctx = Ctx::new(sys);
    let r = ctx.resolve(c)?;
    if let Some(reason) = ctx.violation(&r) {
        return Ok(BigCycleClass::Invalid(reason));
    }
    Ok(match ctx.unacceptable(&r) {
        Some(reason) => BigCycleClass::Unacceptable(reason),
        None => BigCycleClass::Acceptable,
    })
}

/// First supreme copy in order of first occurrence, with its pieces.
pub fn find_supreme_copy(sys: &PretrainCopySystem, c: &BigCycle) -> Result<Option<SupremeCopy>> {
    let ctx = Ctx::new(sys);
    let r = ctx.resolve(c)?;
    if let Some(reason) = ctx.violation(&r) {
        return precondition(format!("not a big cycle: {reason}"));
    }
    if let Some(reason) = ctx.unacceptable(&r) {
        return precondition(format!("big cycle is not acceptable: {reason}"));
    }
    Ok(ctx.supreme(&r))
}

struct BigSearch<'a> {
    ctx: &'a Ctx<'a>,
    /// Per slot: (neighbour slot, connectors joining them).
    adj: Vec<Vec<(usize, Vec<BigConnector>)>>,
    closing: HashMap<(usize, usize), usize>,
    g: usize,
    budget: &'a Budget,
    copies: Vec<usize>,
    conns: Vec<BigConnector>,
    used: HashSet<BigConnector>,
    best: Option<(usize, usize, Vec<(usize, BigConnector)>, BigResolved)>,
    checked: usize,
}

impl<'a> BigSearch<'a> {
    fn new(ctx: &'a Ctx<'a>, g: usize, budget: &'a Budget) -> Self {
        let view = &ctx.view;
        let h = &ctx.p.host;
        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
        let mut by_wagon: Vec<Vec<usize>> = vec![Vec::new(); ctx.p.wagon_count()];
        for (i, s) in view.subs.iter().enumerate() {
            for &v in &s.vertices {
                by_vertex[v].push(i);
            }
            for &w in &ctx.touch[i] {
                by_wagon[w].push(i);
            }
        }
        let mut adj = Vec::with_capacity(view.len());
        let mut closing = HashMap::new();
        for (i, s) in view.subs.iter().enumerate() {
            let mut near: Vec<usize> = s
                .vertices
                .iter()
                .flat_map(|&v| by_vertex[v].iter().copied())
                .chain(ctx.touch[i].iter().flat_map(|&w| by_wagon[w].iter().copied()))
                .filter(|&j| j != i)
                .collect();
            near.sort_unstable();
            near.dedup();
            let list: Vec<(usize, Vec<BigConnector>)> = near
                .into_iter()
                .map(|j| {
                    let vs = sorted_intersection(&s.vertices, &view.subs[j].vertices);
                    let ws = sorted_intersection(&ctx.touch[i], &ctx.touch[j]);
                    let conns =
                        vs.into_iter().map(BigConnector::Vertex).chain(ws.into_iter().map(BigConnector::Wagon)).collect();
                    (j, conns)
                })
                .collect();
            for (k, (j, _)) in list.iter().enumerate() {
                closing.insert((i, *j), k);
            }
            adj.push(list);
        }
        BigSearch {
            ctx,
            adj,
            closing,
            g,
            budget,
            copies: Vec::new(),
            conns: Vec::new(),
            used: HashSet::new(),
            best: None,
            checked: 0,
        }
    }

    fn run(&mut self) -> Result<()> {
        if self.g == 0 {
            return Ok(());
        }
        for start in 0..self.ctx.view.len() {
            self.copies.push(start);
            self.grow()?;
            self.copies.pop();
        }
        Ok(())
    }

    fn partial_twice_order(&self) -> usize {
        let k = self.conns.len();
        let mut total = 1;
        for i in 1..k {
            total += if self.conns[i - 1].is_vertex() == self.conns[i].is_vertex() { 2 } else { 1 };
        }
        total
    }

    fn grow(&mut self) -> Result<()> {
        self.budget.tick()?;
        let cur = *self.copies.last().unwrap();
        let first = self.copies[0];
        let k = self.copies.len();
        if k >= 2 && cur != first {
            if let Some(&slot) = self.closing.get(&(cur, first)) {
                for q in self.adj[cur][slot].1.clone() {
                    if self.used.contains(&q) {
                        continue;
                    }
                    self.conns.push(q);
                    self.finish();
                    self.conns.pop();
                }
            }
        }
        if k >= 2 * self.g {
            return Ok(());
        }
        let steps: Vec<(usize, BigConnector)> = self.adj[cur]
            .iter()
            .filter(|(j, _)| *j >= first)
            .flat_map(|(j, qs)| qs.iter().map(move |&q| (*j, q)))
            .collect();
        for (j, q) in steps {
            if self.used.contains(&q) {
                continue;
            }
            self.conns.push(q);
            if self.partial_twice_order() + 1 > 2 * self.g {
                self.conns.pop();
                continue;
            }
            self.used.insert(q);
            self.copies.push(j);
            self.grow()?;
            self.copies.pop();
            self.used.remove(&q);
            self.conns.pop();
        }
        Ok(())
    }

    fn finish(&mut self) {
        let r = BigResolved { copies: self.copies.clone(), conns: self.conns.clone() };
        let twice = twice_order(&r.conns);
        if twice > 2 * self.g {
            return;
        }
        if canonical(&r) != r {
            return;
        }
        debug_assert!(self.ctx.violation(&r).is_none());
        if self.ctx.unacceptable(&r).is_some() {
            return;
        }
        self.checked += 1;
        if self.ctx.supreme(&r).is_none() {
            let key: Vec<(usize, BigConnector)> = r.copies.iter().copied().zip(r.conns.iter().copied()).collect();
            let cand = (twice, r.copies.len(), key);
            let better = match &self.best {
                None => true,
                Some((t, l, k, _)) => cand < (*t, *l, k.clone()),
            };
            if better {
                self.best = Some((cand.0, cand.1, cand.2, r));
            }
        }
    }
}

/// Every acceptable big cycle of order at most `g` has a supreme copy, and the
/// pretrain is linear.
pub fn frak_girth_system_exceeds(sys: &PretrainCopySystem, g: usize, budget: &Budget) -> Result<BigGirthReport> {
    if !is_linear_pretrain(&sys.pretrain) {
        return Ok(BigGirthReport {
            holds: false,
            reason: Some("the pretrain is not linear".into()),
            witness: None,
            cycles_checked: 0,
        });
    }
    let ctx = Ctx::new(sys);
    let mut search = BigSearch::new(&ctx, g, budget);
    search.run()?;
    let witness = search.best.as_ref().map(|b| ctx.to_cycle(&b.3));
    Ok(BigGirthReport {
        holds: witness.is_none(),
        reason: witness.as_ref().map(|_| "an acceptable big cycle has no supreme copy".to_string()),
        witness,
        cycles_checked: search.checked,
    })
}

/// The order-one criterion: for every big cycle `F1 x F2 W` there are edges
/// `f1` of `F1` and `f2` of `F2` in `W` that both contain `x`.
pub fn order_one_criterion(sys: &PretrainCopySystem) -> Result<bool> {
    if !is_linear_pretrain(&sys.pretrain) {
        return Ok(false);
    }
    let ctx = Ctx::new(sys);
    let h = &sys.pretrain.host;
    let view = &ctx.view;
    for a in 0..view.len() {
        for b in 0..view.len() {
            if a == b {
                continue;
            }
            let shared_w = sorted_intersection(&ctx.touch[a], &ctx.touch[b]);
            if shared_w.is_empty() {
                continue;
            }
            for x in sorted_intersection(&view.subs[a].vertices, &view.subs[b].vertices) {
                for &w in &shared_w {
                    let has = |s: &Sub| {
                        s.edges.iter().any(|&f| sys.pretrain.wagon_of(f) == w && h.edge(f).binary_search(&x).is_ok())
                    };
                    if !(has(&view.subs[a]) && has(&view.subs[b])) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
