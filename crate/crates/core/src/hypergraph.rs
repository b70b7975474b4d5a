//! Hypergraphs, set systems, partite structures, subhypergraphs and embeddings.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Vertex class assignment of an f-partite hypergraph. Indices are `0..f.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partite {
    pub f: Vec<usize>,
    pub class: Vec<usize>,
}

impl Partite {
    /// k-partite with one vertex of each class per edge.
    pub fn uniform(k: usize, class: Vec<usize>) -> Self {
        Partite { f: vec![1; k], class }
    }

    pub fn index_count(&self) -> usize {
        self.f.len()
    }

    pub fn total(&self) -> usize {
        self.f.iter().sum()
    }
}

/// A finite hypergraph with sorted edges.
///
/// Edges are stored as sorted vertex lists and the edge list itself is sorted, so an
/// edge id is determined by the vertex set. A `uniformity` of `None` marks a
/// non-uniform set system. When `ordered` is set, the order is the vertex index order.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    names: Vec<String>,
    edges: Vec<Vec<Vertex>>,
    uniformity: Option<usize>,
    ordered: bool,
    partite: Option<Partite>,
    edge_index: HashMap<Vec<Vertex>, EdgeId>,
    incidence: Vec<Vec<EdgeId>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.edges == other.edges
            && self.uniformity == other.uniformity
            && self.ordered == other.ordered
            && self.partite == other.partite
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// A k-uniform hypergraph. Edges may be given in any order; duplicates are rejected.
    pub fn new(names: Vec<String>, edges: Vec<Vec<Vertex>>, k: usize) -> Result<Self> {
        if k < 2 {
            return invalid(format!("uniformity {k} is below 2"));
        }
        Self::build(names, edges, Some(k))
    }

    /// A set system: edges of arbitrary size at least 2.
    pub fn set_system(names: Vec<String>, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        Self::build(names, edges, None)
    }

    /// Convenience constructor from names.
    pub fn from_names(k: usize, vertices: &[&str], edges: &[&[&str]]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let pos: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut es = Vec::new();
        for e in edges {
            let mut ids = Vec::new();
            for v in e.iter() {
                match pos.get(v) {
                    Some(&i) => ids.push(i),
                    None => return invalid(format!("unknown vertex {v}")),
                }
            }
            es.push(ids);
        }
        Self::new(names, es, k)
    }

    /// Vertices named `0..n` as strings.
    pub fn numbered(n: usize, edges: Vec<Vec<Vertex>>, k: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges, k)
    }

    fn build(names: Vec<String>, mut edges: Vec<Vec<Vertex>>, k: Option<usize>) -> Result<Self> {
        let n = names.len();
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return invalid(format!("duplicate vertex {name}"));
            }
        }
        for e in edges.iter_mut() {
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return invalid(format!("edge {e:?} repeats a vertex"));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return invalid(format!("edge uses unknown vertex {v}"));
            }
            match k {
                Some(k) if e.len() != k => {
                    return invalid(format!("edge {e:?} has size {} in a {k}-uniform hypergraph", e.len()))
                }
                None if e.len() < 2 => return invalid(format!("set {e:?} has fewer than 2 elements")),
                _ => {}
            }
        }
        edges.sort();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return invalid("duplicate edge");
        }
        Ok(Self::assemble(names, edges, k, false, None))
    }

    fn assemble(
        names: Vec<String>,
        edges: Vec<Vec<Vertex>>,
        uniformity: Option<usize>,
        ordered: bool,
        partite: Option<Partite>,
    ) -> Self {
        let mut incidence = vec![Vec::new(); names.len()];
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
            edge_index.insert(e.clone(), i);
        }
        Hypergraph { names, edges, uniformity, ordered, partite, edge_index, incidence }
    }

    pub fn with_order(mut self, ordered: bool) -> Self {
        self.ordered = ordered;
        self
    }

    /// Attaches a partite structure, checking the class counts of every edge.
    pub fn with_partite(mut self, p: Partite) -> Result<Self> {
        if p.class.len() != self.n() {
            return invalid("class assignment does not cover every vertex");
        }
        if p.total() < 2 {
            return invalid("partite profile sums to less than 2");
        }
        if let Some(&c) = p.class.iter().find(|&&c| c >= p.f.len()) {
            return invalid(format!("class index {c} outside the index set"));
        }
        if let Some(k) = self.uniformity {
            if k != p.total() {
                return invalid(format!("profile sums to {} but edges have size {k}", p.total()));
            }
        }
        for e in &self.edges {
            let mut counts = vec![0usize; p.f.len()];
            for &v in e {
                counts[p.class[v]] += 1;
            }
            if counts != p.f {
                return invalid(format!("edge {e:?} has class profile {counts:?}, expected {:?}", p.f));
            }
        }
        self.partite = Some(p);
        Ok(self)
    }

    pub fn without_partite(mut self) -> Self {
        self.partite = None;
        self
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    pub fn partite(&self) -> Option<&Partite> {
        self.partite.as_ref()
    }

    pub fn class_of(&self, v: Vertex) -> Option<usize> {
        self.partite.as_ref().map(|p| p.class[v])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn vertex_named(&self, name: &str) -> Option<Vertex> {
        self.names.iter().position(|s| s == name)
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &[Vertex] {
        &self.edges[e]
    }

    /// Edge id of a vertex set, which need not be sorted.
    pub fn edge_id(&self, vs: &[Vertex]) -> Option<EdgeId> {
        if vs.windows(2).all(|w| w[0] < w[1]) {
            self.edge_index.get(vs).copied()
        } else {
            let mut s = vs.to_vec();
            s.sort_unstable();
            self.edge_index.get(&s).copied()
        }
    }

    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v].len()
    }

    pub fn isolated(&self) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| self.incidence[v].is_empty()).collect()
    }

    /// No two edges share two or more vertices.
    pub fn is_linear(&self) -> bool {
        let mut pairs = HashSet::new();
        for e in &self.edges {
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    if !pairs.insert((e[i], e[j])) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Vertices of class `c`.
    pub fn class_vertices(&self, c: usize) -> Vec<Vertex> {
        match &self.partite {
            Some(p) => (0..self.n()).filter(|&v| p.class[v] == c).collect(),
            None => Vec::new(),
        }
    }

    /// The whole hypergraph as a subhypergraph of itself.
    pub fn whole(&self) -> Sub {
        Sub { vertices: (0..self.n()).collect(), edges: (0..self.m()).collect() }
    }

    /// The induced subhypergraph on `vs`.
    pub fn induced(&self, vs: &[Vertex]) -> Sub {
        let mut vertices = vs.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let inside: HashSet<Vertex> = vertices.iter().copied().collect();
        let mut edges: Vec<EdgeId> = vertices
            .iter()
            .flat_map(|&v| self.incidence[v].iter().copied())
            .filter(|&e| self.edges[e].iter().all(|v| inside.contains(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Sub { vertices, edges }
    }

    /// The edge copy of `e`.
    pub fn edge_sub(&self, e: EdgeId) -> Sub {
        Sub { vertices: self.edges[e].clone(), edges: vec![e] }
    }

    /// Subhypergraph spanned by some edges, without isolated vertices.
    pub fn span(&self, edges: &[EdgeId]) -> Sub {
        let mut vertices: Vec<Vertex> = edges.iter().flat_map(|&e| self.edges[e].iter().copied()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        Sub { vertices, edges }
    }

    /// Checks that `s` is a subhypergraph of `self`.
    pub fn check_sub(&self, s: &Sub) -> Result<()> {
        if s.vertices.windows(2).any(|w| w[0] >= w[1]) || s.edges.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("subhypergraph lists are not strictly sorted");
        }
        if s.vertices.last().is_some_and(|&v| v >= self.n()) {
            return invalid("subhypergraph vertex outside host");
        }
        if s.edges.last().is_some_and(|&e| e >= self.m()) {
            return invalid("subhypergraph edge outside host");
        }
        for &e in &s.edges {
            if !self.edges[e].iter().all(|&v| s.contains_vertex(v)) {
                return invalid(format!("edge {:?} leaves the subhypergraph vertex set", self.edges[e]));
            }
        }
        Ok(())
    }

    /// Extracts `s` as a standalone hypergraph; returns it with the map new vertex -> old.
    pub fn extract(&self, s: &Sub) -> (Hypergraph, Vec<Vertex>) {
        let pos: HashMap<Vertex, usize> = s.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names = s.vertices.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges: Vec<Vec<Vertex>> =
            s.edges.iter().map(|&e| self.edges[e].iter().map(|v| pos[v]).collect()).collect();
        edges.sort();
        let partite = self.partite.as_ref().map(|p| Partite {
            f: p.f.clone(),
            class: s.vertices.iter().map(|&v| p.class[v]).collect(),
        });
        (Self::assemble(names, edges, self.uniformity, self.ordered, partite), s.vertices.clone())
    }

    /// Assembles a hypergraph from trusted parts; edges are sorted and indexed here.
    pub(crate) fn from_parts(
        names: Vec<String>,
        mut edges: Vec<Vec<Vertex>>,
        uniformity: Option<usize>,
        ordered: bool,
        partite: Option<Partite>,
    ) -> Self {
        for e in edges.iter_mut() {
            e.sort_unstable();
        }
        edges.sort();
        edges.dedup();
        Self::assemble(names, edges, uniformity, ordered, partite)
    }

    /// Same structure with vertices renamed.
    pub fn renamed(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n() {
            return invalid("rename list has wrong length");
        }
        let mut h = Self::build(names, self.edges.clone(), self.uniformity)?;
        h.ordered = self.ordered;
        h.partite = self.partite.clone();
        Ok(h)
    }

    /// Same hypergraph with vertex `v` moved to position `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Self {
        let mut names = vec![String::new(); self.n()];
        for v in 0..self.n() {
            names[perm[v]] = self.names[v].clone();
        }
        let edges = self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect()).collect();
        let partite = self.partite.as_ref().map(|p| {
            let mut class = vec![0; self.n()];
            for v in 0..self.n() {
                class[perm[v]] = p.class[v];
            }
            Partite { f: p.f.clone(), class }
        });
        Self::from_parts(names, edges, self.uniformity, self.ordered, partite)
    }

    /// Drops isolated vertices. Returns the map new vertex -> old.
    pub fn without_isolated(&self) -> (Hypergraph, Vec<Vertex>) {
        let keep: Vec<Vertex> = (0..self.n()).filter(|&v| self.degree(v) > 0).collect();
        let s = Sub { vertices: keep, edges: (0..self.m()).collect() };
        self.extract(&s)
    }
}

/// A subhypergraph, given by sorted vertex and edge id lists of its host.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sub {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

impl Sub {
    pub fn new(mut vertices: Vec<Vertex>, mut edges: Vec<EdgeId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        Sub { vertices, edges }
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_edge_copy_of(&self, h: &Hypergraph, e: EdgeId) -> bool {
        self.edges.len() == 1 && self.edges[0] == e && self.vertices == h.edge(e)
    }

    pub fn common_vertices(&self, other: &Sub) -> Vec<Vertex> {
        sorted_intersection(&self.vertices, &other.vertices)
    }

    pub fn common_edges(&self, other: &Sub) -> Vec<EdgeId> {
        sorted_intersection(&self.edges, &other.edges)
    }

    pub fn is_subset_of(&self, other: &Sub) -> bool {
        self.vertices.iter().all(|&v| other.contains_vertex(v)) && self.edges.iter().all(|&e| other.contains_edge(e))
    }

    /// Vertices lying in no edge of the subhypergraph.
    pub fn isolated_in(&self, h: &Hypergraph) -> Vec<Vertex> {
        let mut covered = HashSet::new();
        for &e in &self.edges {
            covered.extend(h.edge(e).iter().copied());
        }
        self.vertices.iter().copied().filter(|v| !covered.contains(v)).collect()
    }
}

pub(crate) fn sorted_intersection<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn is_sorted_subset<T: Ord>(small: &[T], big: &[T]) -> bool {
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// validation of unchecked input

/// An unchecked hypergraph description, as read from a document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawHypergraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<String>>,
    /// `None` for a set system.
    pub uniformity: Option<usize>,
    pub ordered: bool,
    pub partite: Option<RawPartite>,
}

/// An unchecked partite structure: profile `f` and the vertex list of every class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPartite {
    pub f: Vec<usize>,
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

/// Lists every violated invariant; an empty report means the input is valid.
pub fn validate(raw: &RawHypergraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |rule: &'static str, detail: String| out.push(Violation { rule, detail });
    let mut pos = HashMap::new();
    for (i, v) in raw.vertices.iter().enumerate() {
        if pos.insert(v.as_str(), i).is_some() {
            push("distinct-vertices", format!("vertex {v} listed twice"));
        }
    }
    if let Some(k) = raw.uniformity {
        if k < 2 {
            push("uniformity", format!("uniformity {k} is below 2"));
        }
    }
    let mut seen_edges = HashSet::new();
    for (i, e) in raw.edges.iter().enumerate() {
        let mut vs = Vec::new();
        for v in e {
            match pos.get(v.as_str()) {
                Some(&x) => vs.push(x),
                None => push("edge-subset", format!("edge {i} uses unknown vertex {v}")),
            }
        }
        vs.sort_unstable();
        let before = vs.len();
        vs.dedup();
        if vs.len() != before {
            push("edge-set", format!("edge {i} repeats a vertex"));
        }
        match raw.uniformity {
            Some(k) if e.len() != k => {
                push("uniformity", format!("edge {i} has {} vertices, expected {k}", e.len()))
            }
            None if e.len() < 2 => push("set-size", format!("set {i} has fewer than 2 elements")),
            _ => {}
        }
        if !seen_edges.insert(vs.clone()) {
            push("distinct-edges", format!("edge {i} duplicates an earlier edge"));
        }
    }
    if let Some(p) = &raw.partite {
        if p.f.iter().any(|&x| x == 0) {
            push("partite-profile", "profile values must be positive".into());
        }
        if p.f.iter().sum::<usize>() < 2 {
            push("partite-profile", "profile sums to less than 2".into());
        }
        if p.classes.len() != p.f.len() {
            push("partite-classes", format!("{} classes for {} indices", p.classes.len(), p.f.len()));
        }
        if let Some(k) = raw.uniformity {
            if k != p.f.iter().sum::<usize>() {
                push("partite-profile", format!("profile does not sum to the uniformity {k}"));
            }
        }
        let mut class_of: HashMap<&str, usize> = HashMap::new();
        for (c, members) in p.classes.iter().enumerate() {
            for v in members {
                if !pos.contains_key(v.as_str()) {
                    push("partite-classes", format!("class {c} lists unknown vertex {v}"));
                } else if class_of.insert(v.as_str(), c).is_some() {
                    push("partite-classes", format!("vertex {v} assigned to two classes"));
                }
            }
        }
        for v in &raw.vertices {
            if !class_of.contains_key(v.as_str()) {
                push("partite-classes", format!("vertex {v} has no class"));
            }
        }
        if p.classes.len() == p.f.len() {
            for (i, e) in raw.edges.iter().enumerate() {
                let mut counts = vec![0usize; p.f.len()];
                for v in e {
                    if let Some(&c) = class_of.get(v.as_str()) {
                        counts[c] += 1;
                    }
                }
                if counts != p.f {
                    push("partite-edge", format!("edge {i} meets the classes {counts:?}, expected {:?}", p.f));
                }
            }
        }
    }
    out
}

impl RawHypergraph {
    /// Builds the checked structure, failing with the first violation.
    pub fn build(&self) -> Result<Hypergraph> {
        if let Some(v) = validate(self).into_iter().next() {
            return invalid(v.to_string());
        }
        let pos: HashMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let edges = self.edges.iter().map(|e| e.iter().map(|v| pos[v.as_str()]).collect()).collect();
        let h = match self.uniformity {
            Some(k) => Hypergraph::new(self.vertices.clone(), edges, k)?,
            None => Hypergraph::set_system(self.vertices.clone(), edges)?,
        }
        .with_order(self.ordered);
        match &self.partite {
            None => Ok(h),
            Some(p) => {
                let mut class = vec![0; self.vertices.len()];
                for (c, members) in p.classes.iter().enumerate() {
                    for v in members {
                        class[pos[v.as_str()]] = c;
                    }
                }
                h.with_partite(Partite { f: p.f.clone(), class })
            }
        }
    }

    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        RawHypergraph {
            vertices: h.names.clone(),
            edges: h.edges.iter().map(|e| e.iter().map(|&v| h.names[v].clone()).collect()).collect(),
            uniformity: h.uniformity,
            ordered: h.ordered,
            partite: h.partite.as_ref().map(|p| RawPartite {
                f: p.f.clone(),
                classes: (0..p.f.len())
                    .map(|c| (0..h.n()).filter(|&v| p.class[v] == c).map(|v| h.names[v].clone()).collect())
                    .collect(),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// cycles

/// An n-cycle `e1 v1 ... en vn` with `v_i` in `e_i` and `e_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeCycle {
    pub edges: Vec<usize>,
    pub vertices: Vec<Vertex>,
}

impl EdgeCycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks the defining conditions against an indexed family of sorted sets.
    pub fn is_valid_in(&self, sets: &[Vec<Vertex>]) -> bool {
        let n = self.edges.len();
        if n < 2 || self.vertices.len() != n {
            return false;
        }
        let de: HashSet<_> = self.edges.iter().collect();
        let dv: HashSet<_> = self.vertices.iter().collect();
        if de.len() != n || dv.len() != n {
            return false;
        }
        (0..n).all(|i| {
            let v = self.vertices[i];
            sets[self.edges[i]].binary_search(&v).is_ok() && sets[self.edges[(i + 1) % n]].binary_search(&v).is_ok()
        })
    }
}

/// Shortest cycle of length at most `bound` in an indexed family of sorted sets over
/// `0..n`. Sets may repeat: two equal sets of size at least 2 form a 2-cycle.
///
/// The witness is the lexicographically least representation `(e1, v1, e2, ...)`
/// among all minimal cycles, which makes it canonical up to rotation and reflection.
pub fn shortest_cycle_in_family(n: usize, sets: &[Vec<Vertex>], bound: usize) -> Option<EdgeCycle> {
    let mut inc = vec![Vec::new(); n];
    for (i, s) in sets.iter().enumerate() {
        for &v in s {
            inc[v].push(i);
        }
    }
    let mut used_e = vec![false; sets.len()];
    let mut used_v = vec![false; n];
    for len in 2..=bound.min(sets.len()).min(n) {
        for e1 in 0..sets.len() {
            let mut es = vec![e1];
            let mut vs = Vec::new();
            used_e[e1] = true;
            let found = cycle_dfs(sets, &inc, len, &mut es, &mut vs, &mut used_e, &mut used_v);
            used_e[e1] = false;
            if found {
                return Some(EdgeCycle { edges: es, vertices: vs });
            }
        }
    }
    None
}

fn cycle_dfs(
    sets: &[Vec<Vertex>],
    inc: &[Vec<usize>],
    len: usize,
    es: &mut Vec<usize>,
    vs: &mut Vec<Vertex>,
    used_e: &mut [bool],
    used_v: &mut [bool],
) -> bool {
    let cur = *es.last().unwrap();
    let first = es[0];
    if es.len() == len {
        for &v in &sets[cur] {
            if !used_v[v] && sets[first].binary_search(&v).is_ok() {
                vs.push(v);
                return true;
            }
        }
        return false;
    }
    for &v in &sets[cur] {
        if used_v[v] {
            continue;
        }
        used_v[v] = true;
        vs.push(v);
        for &e in &inc[v] {
            if e <= first || used_e[e] {
                continue;
            }
            used_e[e] = true;
            es.push(e);
            if cycle_dfs(sets, inc, len, es, vs, used_e, used_v) {
                return true;
            }
            es.pop();
            used_e[e] = false;
        }
        vs.pop();
        used_v[v] = false;
    }
    false
}

/// Shortest n-cycle with `n <= bound`, as a canonical witness.
pub fn shortest_edge_cycle(h: &Hypergraph, bound: usize) -> Result<Option<EdgeCycle>> {
    if bound < 2 {
        return invalid(format!("cycle bound {bound} is below 2"));
    }
    Ok(shortest_cycle_in_family(h.n(), h.edges(), bound))
}

/// True iff `h` has no n-cycle for `n` in `2..=g`.
pub fn girth_exceeds(h: &Hypergraph, g: usize) -> bool {
    g < 2 || shortest_cycle_in_family(h.n(), h.edges(), g).is_none()
}

/// The girth, or `None` when there is no cycle at all.
pub fn girth(h: &Hypergraph) -> Option<usize> {
    shortest_cycle_in_family(h.n(), h.edges(), h.m().max(2)).map(|c| c.len())
}

// ---------------------------------------------------------------------------
// strong inducedness

/// Every host edge meets `f` inside a single edge of `f`.
pub fn is_strongly_induced(f: &Sub, h: &Hypergraph) -> Result<bool> {
    h.check_sub(f)?;
    Ok(strongly_induced_unchecked(f, h))
}

pub(crate) fn strongly_induced_unchecked(f: &Sub, h: &Hypergraph) -> bool {
    for e in h.edges() {
        let meet: Vec<Vertex> = e.iter().copied().filter(|&v| f.contains_vertex(v)).collect();
        let ok = match meet.first() {
            None => !f.edges.is_empty(),
            Some(&x) => h
                .incident(x)
                .iter()
                .any(|&g| f.contains_edge(g) && is_sorted_subset(&meet, h.edge(g))),
        };
        if !ok {
            return false;
        }
    }
    true
}

/// The three-clause form valid in linear hosts.
pub fn strongly_induced_linear_form(f: &Sub, h: &Hypergraph) -> Result<bool> {
    h.check_sub(f)?;
    let isolated: HashSet<Vertex> = f.isolated_in(h).into_iter().collect();
    for (id, e) in h.edges().iter().enumerate() {
        let meet: Vec<Vertex> = e.iter().copied().filter(|&v| f.contains_vertex(v)).collect();
        if meet.len() >= 2 && !f.contains_edge(id) {
            return Ok(false);
        }
        if meet.len() == 1 && isolated.contains(&meet[0]) {
            return Ok(false);
        }
    }
    Ok(!(f.edges.is_empty() && h.m() > 0))
}

// ---------------------------------------------------------------------------
// embeddings

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CopyMode {
    /// Induced copies.
    Induced,
    /// Not necessarily induced copies.
    Nni,
    /// Class-preserving induced copies.
    Partite,
    /// Class-preserving, not necessarily induced copies of an f-partite pattern.
    FPartite,
}

impl CopyMode {
    fn induced(self) -> bool {
        matches!(self, CopyMode::Induced | CopyMode::Partite)
    }

    fn partite(self) -> bool {
        matches!(self, CopyMode::Partite | CopyMode::FPartite)
    }
}

/// A vertex map from a pattern into a host, with its image and kind flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<Vertex>,
    pub image: Sub,
    pub induced: bool,
    pub strongly_induced: bool,
    pub partite: bool,
    pub order_preserving: bool,
}

/// All copies of `pattern` in `host`, one embedding per distinct image, sorted by image.
pub fn enumerate_copies(host: &Hypergraph, pattern: &Hypergraph, mode: CopyMode, respect_order: bool) -> Result<Vec<Embedding>> {
    if mode.partite() {
        let (hp, fp) = match (host.partite(), pattern.partite()) {
            (Some(a), Some(b)) => (a, b),
            _ => return invalid("partite copy modes need partite structures on both sides"),
        };
        if hp.index_count() != fp.index_count() {
            return invalid("host and pattern have different index sets");
        }
        if mode == CopyMode::FPartite && hp.f != fp.f {
            return invalid("host and pattern have different partite profiles");
        }
    }
    let mut found: BTreeMap<Sub, Vec<Vertex>> = BTreeMap::new();
    let mut search = EmbeddingSearch::new(host, pattern, mode.induced(), mode.partite(), respect_order);
    search.run(&mut |map, image| {
        found.entry(image).or_insert_with(|| map.to_vec());
        true
    });
    Ok(found
        .into_iter()
        .map(|(image, map)| {
            let order_preserving = map.windows(2).all(|w| w[0] < w[1]);
            let partite = match (host.partite(), pattern.partite()) {
                (Some(hp), Some(fp)) => (0..map.len()).all(|x| hp.class[map[x]] == fp.class[x]),
                _ => false,
            };
            let induced = host.induced(&image.vertices).edges == image.edges;
            let strongly_induced = strongly_induced_unchecked(&image, host);
            Embedding { map, image, induced, strongly_induced, partite, order_preserving }
        })
        .collect())
}

/// First isomorphism `a -> b` (edge-bijective), if any.
pub fn find_isomorphism(a: &Hypergraph, b: &Hypergraph, respect_order: bool, respect_classes: bool) -> Option<Vec<Vertex>> {
    if a.n() != b.n() || a.m() != b.m() {
        return None;
    }
    if respect_classes && (a.partite().is_none() || b.partite().is_none()) {
        return None;
    }
    let mut out = None;
    let mut search = EmbeddingSearch::new(b, a, true, respect_classes, respect_order);
    search.run(&mut |map, _| {
        out = Some(map.to_vec());
        false
    });
    out
}

struct EmbeddingSearch<'a> {
    host: &'a Hypergraph,
    pattern: &'a Hypergraph,
    induced: bool,
    classes: bool,
    ordered: bool,
    order: Vec<Vertex>,
    map: Vec<usize>,
    inv: Vec<usize>,
    pattern_edges: HashSet<Vec<Vertex>>,
}

const NONE: usize = usize::MAX;

impl<'a> EmbeddingSearch<'a> {
    fn new(host: &'a Hypergraph, pattern: &'a Hypergraph, induced: bool, classes: bool, ordered: bool) -> Self {
        // Greedy order: most edges into the placed set first, then degree.
        let n = pattern.n();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let best = (0..n)
                .filter(|&x| !placed[x])
                .max_by_key(|&x| {
                    let links = pattern
                        .incident(x)
                        .iter()
                        .filter(|&&e| pattern.edge(e).iter().any(|&y| placed[y]))
                        .count();
                    (links, pattern.degree(x), std::cmp::Reverse(x))
                })
                .unwrap();
            placed[best] = true;
            order.push(best);
        }
        EmbeddingSearch {
            host,
            pattern,
            induced,
            classes,
            ordered,
            order,
            map: vec![NONE; n],
            inv: vec![NONE; host.n()],
            pattern_edges: pattern.edges().iter().cloned().collect(),
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Vertex], Sub) -> bool) {
        if self.pattern.n() > self.host.n() {
            return;
        }
        self.step(0, visit);
    }

    fn step(&mut self, depth: usize, visit: &mut dyn FnMut(&[Vertex], Sub) -> bool) -> bool {
        if depth == self.order.len() {
            let mut vertices = self.map.clone();
            vertices.sort_unstable();
            let mut edges: Vec<EdgeId> = self
                .pattern
                .edges()
                .iter()
                .map(|e| {
                    let img: Vec<Vertex> = e.iter().map(|&x| self.map[x]).collect();
                    self.host.edge_id(&img).unwrap()
                })
                .collect();
            edges.sort_unstable();
            return visit(&self.map, Sub { vertices, edges });
        }
        let x = self.order[depth];
        let anchor = self.pattern.incident(x).iter().flat_map(|&e| self.pattern.edge(e).iter().copied()).find(|&y| self.map[y] != NONE);
        let candidates: Vec<Vertex> = match anchor {
            Some(y) => {
                let mut c: Vec<Vertex> =
                    self.host.incident(self.map[y]).iter().flat_map(|&e| self.host.edge(e).iter().copied()).collect();
                c.sort_unstable();
                c.dedup();
                c
            }
            None => (0..self.host.n()).collect(),
        };
        for v in candidates {
            if self.inv[v] != NONE || self.host.degree(v) < self.pattern.degree(x) {
                continue;
            }
            if self.classes && self.host.class_of(v) != self.pattern.class_of(x) {
                continue;
            }
            if self.ordered && !self.order_ok(x, v) {
                continue;
            }
            self.map[x] = v;
            self.inv[v] = x;
            if self.consistent(x, v) && !self.step(depth + 1, visit) {
                self.map[x] = NONE;
                self.inv[v] = NONE;
                return false;
            }
            self.map[x] = NONE;
            self.inv[v] = NONE;
        }
        true
    }

    fn order_ok(&self, x: Vertex, v: Vertex) -> bool {
        (0..self.map.len()).all(|y| {
            let w = self.map[y];
            w == NONE || y == x || ((y < x) == (w < v))
        })
    }

    fn consistent(&self, x: Vertex, v: Vertex) -> bool {
        for &e in self.pattern.incident(x) {
            let pe = self.pattern.edge(e);
            if pe.iter().all(|&y| self.map[y] != NONE) {
                let img: Vec<Vertex> = pe.iter().map(|&y| self.map[y]).collect();
                if self.host.edge_id(&img).is_none() {
                    return false;
                }
            }
        }
        if self.induced {
            for &e in self.host.incident(v) {
                let he = self.host.edge(e);
                if he.iter().all(|&w| self.inv[w] != NONE) {
                    let mut pre: Vec<Vertex> = he.iter().map(|&w| self.inv[w]).collect();
                    pre.sort_unstable();
                    if !self.pattern_edges.contains(&pre) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// True iff any two distinct edges meet inside the classes `a`.
pub fn is_a_intersecting(f: &Hypergraph, a: &[usize]) -> Result<bool> {
    let p = match f.partite() {
        Some(p) => p,
        None => return invalid("A-intersection needs a partite structure"),
    };
    if let Some(&i) = a.iter().find(|&&i| i >= p.index_count()) {
        return invalid(format!("index {i} is not in the index set"));
    }
    Ok((0..f.n()).all(|v| a.contains(&p.class[v]) || f.degree(v) <= 1))
}

/// Disjoint union; vertex names get the given prefixes, blocks appear in list order.
pub fn disjoint_union(parts: &[(&str, &Hypergraph)]) -> Result<Hypergraph> {
    let first = match parts.first() {
        Some(p) => p.1,
        None => return invalid("disjoint union of nothing"),
    };
    let mut names = Vec::new();
    let mut edges = Vec::new();
    let mut class = Vec::new();
    for (prefix, h) in parts {
        if h.uniformity() != first.uniformity() || h.partite().map(|p| &p.f) != first.partite().map(|p| &p.f) {
            return invalid("disjoint union of differently shaped hypergraphs");
        }
        let offset = names.len();
        names.extend(h.names().iter().map(|s| format!("{prefix}{s}")));
        edges.extend(h.edges().iter().map(|e| e.iter().map(|&v| v + offset).collect::<Vec<_>>()));
        if let Some(p) = h.partite() {
            class.extend(p.class.iter().copied());
        }
    }
    let partite = first.partite().map(|p| Partite { f: p.f.clone(), class });
    let h = Hypergraph::from_parts(names, edges, first.uniformity(), first.is_ordered(), partite);
    let mut seen = HashSet::new();
    if !h.names().iter().all(|s| seen.insert(s.as_str())) {
        return invalid("prefixes do not separate the vertex names");
    }
    Ok(h)
}
