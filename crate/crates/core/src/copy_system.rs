//! Systems of copies, cycles of copies, tidiness, master copies and Girth.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{invalid, precondition, Result};
use crate::hypergraph::{is_sorted_subset, sorted_intersection, EdgeId, Hypergraph, Sub, Vertex};

/// A host hypergraph with distinguished subhypergraphs. When `extended` is set the
/// logical collection also contains the edge copy of every host edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopySystem {
    host: Hypergraph,
    copies: Vec<Sub>,
    extended: bool,
}

/// Reference to a member of the (extended) collection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CopyRef {
    Real(usize),
    Edge(EdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Connector {
    Vertex(Vertex),
    Edge(EdgeId),
}

impl Connector {
    pub fn is_vertex(self) -> bool {
        matches!(self, Connector::Vertex(_))
    }
}

/// Cyclic sequence `F1 q1 F2 q2 ... Fn qn`; `entries[i] = (F_{i+1}, q_{i+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleOfCopies {
    pub entries: Vec<(CopyRef, Connector)>,
}

impl CycleOfCopies {
    pub fn new(entries: Vec<(CopyRef, Connector)>) -> Self {
        CycleOfCopies { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.rotate_left(k % self.len().max(1));
        CycleOfCopies { entries }
    }

    /// `F1 qn Fn ... q2 F2 q1`.
    pub fn reflected(&self) -> Self {
        let n = self.len();
        let entries = (0..n).map(|i| (self.entries[(n - i) % n].0, self.entries[(2 * n - 1 - i) % n].1)).collect();
        CycleOfCopies { entries }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleClass {
    Invalid(String),
    Untidy,
    SemitidyOnly,
    Tidy,
}

/// A threshold `g` (meaning `(g, 2g)`) or a pair `(g, n)` compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Threshold {
    Order(usize),
    Pair(usize, usize),
}

impl Threshold {
    pub fn pair(self) -> (usize, usize) {
        match self {
            Threshold::Order(g) => (g, 2 * g),
            Threshold::Pair(g, n) => (g, n),
        }
    }

    pub fn admits(self, order: usize, length: usize) -> bool {
        let (g, n) = self.pair();
        order < g || (order == g && length <= n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleMetrics {
    pub order: usize,
    pub length: usize,
}

/// A master copy with the edge each other position collapses to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasterCopy {
    pub copy: CopyRef,
    pub collapse: Vec<(usize, EdgeId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    pub holds: bool,
    /// A masterless cycle of least `(order, length)`, canonical among those.
    pub witness: Option<CycleOfCopies>,
    pub cycles_checked: usize,
}

/// Which cycles the Girth enumeration has to certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleFilter {
    Tidy,
    Semitidy,
}

impl CopySystem {
    pub fn new(host: Hypergraph, copies: Vec<Sub>, extended: bool) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, c) in copies.iter().enumerate() {
            host.check_sub(c).map_err(|e| crate::Error::InvalidArgument(format!("copy {i}: {e}")))?;
            if !seen.insert(c.clone()) {
                return invalid(format!("copy {i} repeats an earlier copy"));
            }
        }
        Ok(CopySystem { host, copies, extended })
    }

    /// The system of edge copies alone.
    pub fn edge_copies(host: Hypergraph) -> Self {
        CopySystem { host, copies: Vec::new(), extended: true }
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    pub fn copies(&self) -> &[Sub] {
        &self.copies
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn extend(mut self) -> Self {
        self.extended = true;
        self
    }

    pub fn with_extended(mut self, extended: bool) -> Self {
        self.extended = extended;
        self
    }

    /// The logical collection with a lookup from references.
    pub fn view(&self) -> View {
        View::new(self)
    }

    pub fn into_parts(self) -> (Hypergraph, Vec<Sub>, bool) {
        (self.host, self.copies, self.extended)
    }
}

/// Materialised members of the (extended) collection. Real copies come first; edge
/// copies follow for edges whose edge copy is not already a real copy.
#[derive(Clone, Debug)]
pub struct View {
    pub subs: Vec<Sub>,
    pub refs: Vec<CopyRef>,
    pub real: Vec<bool>,
    edge_slot: Vec<Option<usize>>,
}

impl View {
    fn new(sys: &CopySystem) -> Self {
        let h = &sys.host;
        let mut subs = sys.copies.clone();
        let mut refs: Vec<CopyRef> = (0..subs.len()).map(CopyRef::Real).collect();
        let mut real = vec![true; subs.len()];
        let mut edge_slot = vec![None; h.m()];
        for (i, c) in sys.copies.iter().enumerate() {
            if c.edges.len() == 1 && c.is_edge_copy_of(h, c.edges[0]) {
                edge_slot[c.edges[0]] = Some(i);
            }
        }
        if sys.extended {
            for e in 0..h.m() {
                if edge_slot[e].is_none() {
                    edge_slot[e] = Some(subs.len());
                    subs.push(h.edge_sub(e));
                    refs.push(CopyRef::Edge(e));
                    real.push(false);
                }
            }
        }
        View { subs, refs, real, edge_slot }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn resolve(&self, r: CopyRef) -> Result<usize> {
        match r {
            CopyRef::Real(i) if i < self.real.len() && self.real[i] && self.refs[i] == CopyRef::Real(i) => Ok(i),
            CopyRef::Edge(e) if e < self.edge_slot.len() => match self.edge_slot[e] {
                Some(i) => Ok(i),
                None => invalid(format!("edge copy of edge {e} is not in the system")),
            },
            _ => invalid(format!("dangling copy reference {r:?}")),
        }
    }

    /// Slot of an edge copy, if present.
    pub fn edge_slot(&self, e: EdgeId) -> Option<usize> {
        self.edge_slot.get(e).copied().flatten()
    }
}

// ---------------------------------------------------------------------------
// resolved cycles

/// Cycle over view slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Resolved {
    pub copies: Vec<usize>,
    pub conns: Vec<Connector>,
}

impl Resolved {
    pub fn from_cycle(view: &View, c: &CycleOfCopies) -> Result<Self> {
        let mut copies = Vec::with_capacity(c.len());
        let mut conns = Vec::with_capacity(c.len());
        for &(r, q) in &c.entries {
            copies.push(view.resolve(r)?);
            conns.push(q);
        }
        Ok(Resolved { copies, conns })
    }

    pub fn to_cycle(&self, view: &View) -> CycleOfCopies {
        CycleOfCopies { entries: self.copies.iter().zip(&self.conns).map(|(&c, &q)| (view.refs[c], q)).collect() }
    }

    /// First violated clause among (L1)-(L4).
    pub fn violation(&self, h: &Hypergraph, view: &View) -> Option<String> {
        let n = self.copies.len();
        if n < 2 {
            return Some("length below 2".into());
        }
        for i in 0..n {
            if self.copies[i] == self.copies[(i + 1) % n] {
                return Some(format!("L1: copies {} and {} coincide", i + 1, (i + 1) % n + 1));
            }
        }
        let distinct: HashSet<_> = self.conns.iter().collect();
        if distinct.len() != n {
            return Some("L2: connectors repeat".into());
        }
        for i in 0..n {
            let (a, b) = (&view.subs[self.copies[i]], &view.subs[self.copies[(i + 1) % n]]);
            match self.conns[i] {
                Connector::Vertex(v) => {
                    if v >= h.n() || !a.contains_vertex(v) || !b.contains_vertex(v) {
                        return Some(format!("L3: vertex connector {} not shared", i + 1));
                    }
                }
                Connector::Edge(e) => {
                    if e >= h.m() || !a.contains_edge(e) || !b.contains_edge(e) {
                        return Some(format!("L4: edge connector {} not shared", i + 1));
                    }
                }
            }
        }
        None
    }

    pub fn metrics(&self) -> CycleMetrics {
        let n = self.conns.len();
        let twice: usize = (0..n)
            .map(|i| if self.conns[(i + n - 1) % n].is_vertex() == self.conns[i].is_vertex() { 2 } else { 1 })
            .sum();
        CycleMetrics { order: twice / 2, length: n }
    }

    /// Positions `i` whose connector is a vertex contained in `f`.
    fn marks(&self, f: &[Vertex]) -> Vec<usize> {
        (0..self.conns.len())
            .filter(|&i| matches!(self.conns[i], Connector::Vertex(v) if f.binary_search(&v).is_ok()))
            .collect()
    }

    fn coverable(&self, m: &[usize]) -> bool {
        let n = self.conns.len();
        match m.len() {
            0 | 1 => true,
            2 => (m[0] + 1) % n == m[1] || (m[1] + 1) % n == m[0],
            _ => false,
        }
    }

    /// Host edges containing at least one vertex connector.
    fn touched_edges(&self, h: &Hypergraph) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .conns
            .iter()
            .filter_map(|q| match q {
                Connector::Vertex(v) => Some(h.incident(*v).to_vec()),
                _ => None,
            })
            .flatten()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_tidy(&self, h: &Hypergraph) -> bool {
        for q in &self.conns {
            if let Connector::Edge(e) = q {
                if self.conns.iter().any(|p| matches!(p, Connector::Vertex(v) if h.edge(*e).binary_search(v).is_ok())) {
                    return false;
                }
            }
        }
        self.touched_edges(h).into_iter().all(|f| self.coverable(&self.marks(h.edge(f))))
    }

    pub fn is_semitidy(&self, h: &Hypergraph) -> bool {
        let n = self.conns.len();
        let mut edge_conns = HashSet::new();
        for (i, q) in self.conns.iter().enumerate() {
            if let Connector::Edge(e) = *q {
                edge_conns.insert(e);
                let m = self.marks(h.edge(e));
                if m.len() > 1 || m.iter().any(|&j| j != (i + n - 1) % n && j != (i + 1) % n) {
                    return false;
                }
            }
        }
        self.touched_edges(h)
            .into_iter()
            .filter(|f| !edge_conns.contains(f))
            .all(|f| self.coverable(&self.marks(h.edge(f))))
    }

    /// Lexicographically least rotation or reflection.
    pub fn canonical(&self) -> Resolved {
        let n = self.copies.len();
        let mut best: Option<Resolved> = None;
        for refl in [false, true] {
            for k in 0..n {
                let (copies, conns): (Vec<usize>, Vec<Connector>) = if refl {
                    (0..n).map(|i| (self.copies[(k + n - i) % n], self.conns[(k + 2 * n - 1 - i) % n])).unzip()
                } else {
                    (0..n).map(|i| (self.copies[(k + i) % n], self.conns[(k + i) % n])).unzip()
                };
                let cand = Resolved { copies, conns };
                if best.as_ref().map_or(true, |b| cand.key() < b.key()) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap()
    }

    fn key(&self) -> Vec<(usize, Connector)> {
        self.copies.iter().copied().zip(self.conns.iter().copied()).collect()
    }
}

/// Classify a cycle against (L1)-(L4), tidiness and semitidiness.
pub fn classify_cycle(sys: &CopySystem, c: &CycleOfCopies) -> Result<CycleClass> {
    let view = sys.view();
    let r = Resolved::from_cycle(&view, c)?;
    let h = sys.host();
    if let Some(reason) = r.violation(h, &view) {
        return Ok(CycleClass::Invalid(reason));
    }
    Ok(if r.is_tidy(h) {
        debug_assert!(r.is_semitidy(h));
        CycleClass::Tidy
    } else if r.is_semitidy(h) {
        CycleClass::SemitidyOnly
    } else {
        CycleClass::Untidy
    })
}

/// Order and length of a valid cycle.
pub fn cycle_metrics(sys: &CopySystem, c: &CycleOfCopies) -> Result<CycleMetrics> {
    let view = sys.view();
    let r = Resolved::from_cycle(&view, c)?;
    if let Some(reason) = r.violation(sys.host(), &view) {
        return invalid(format!("not a cycle of copies: {reason}"));
    }
    Ok(r.metrics())
}

/// First master copy in order of first occurrence, with its collapse family.
pub fn find_master_copy(sys: &CopySystem, c: &CycleOfCopies) -> Result<Option<MasterCopy>> {
    let view = sys.view();
    let r = Resolved::from_cycle(&view, c)?;
    if let Some(reason) = r.violation(sys.host(), &view) {
        return invalid(format!("not a cycle of copies: {reason}"));
    }
    Ok(master_of(sys.host(), &view, &r))
}

pub(crate) fn master_of(h: &Hypergraph, view: &View, r: &Resolved) -> Option<MasterCopy> {
    let n = r.copies.len();
    let mut tried = HashSet::new();
    for &star in &r.copies {
        if !tried.insert(star) {
            continue;
        }
        let master = &view.subs[star];
        let positions: Vec<usize> = (0..n).filter(|&i| r.copies[i] != star).collect();
        // Candidate edges per replaced position, checked against adjacent connectors.
        let mut cands: Vec<Vec<EdgeId>> = Vec::with_capacity(positions.len());
        for &i in &positions {
            let left = r.conns[(i + n - 1) % n];
            let right = r.conns[i];
            let ok: Vec<EdgeId> = master
                .edges
                .iter()
                .copied()
                .filter(|&f| fits(h, f, left) && fits(h, f, right))
                .filter(|&f| view.edge_slot(f) != Some(star))
                .collect();
            cands.push(ok);
        }
        if cands.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut chosen: Vec<EdgeId> = Vec::with_capacity(positions.len());
        if collapse_dfs(view, r, &positions, &cands, &mut chosen) {
            return Some(MasterCopy { copy: view.refs[star], collapse: positions.into_iter().zip(chosen).collect() });
        }
    }
    None
}

fn fits(h: &Hypergraph, f: EdgeId, q: Connector) -> bool {
    match q {
        Connector::Vertex(v) => h.edge(f).binary_search(&v).is_ok(),
        Connector::Edge(e) => e == f,
    }
}

// Consecutive replaced positions need distinct edge copies.
fn collapse_dfs(view: &View, r: &Resolved, positions: &[usize], cands: &[Vec<EdgeId>], chosen: &mut Vec<EdgeId>) -> bool {
    let n = r.copies.len();
    let k = chosen.len();
    if k == positions.len() {
        if k >= 2 && positions[k - 1] + 1 == n && positions[0] == 0 && chosen[k - 1] == chosen[0] {
            return false;
        }
        return true;
    }
    for &f in &cands[k] {
        if k > 0 && positions[k - 1] + 1 == positions[k] && chosen[k - 1] == f {
            continue;
        }
        chosen.push(f);
        if collapse_dfs(view, r, positions, cands, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

// ---------------------------------------------------------------------------
// Girth

pub(crate) fn adjacency(view: &View, h: &Hypergraph) -> Vec<Vec<(usize, Vec<Vertex>, Vec<EdgeId>)>> {
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    for (i, s) in view.subs.iter().enumerate() {
        for &v in &s.vertices {
            by_vertex[v].push(i);
        }
    }
    let mut out = Vec::with_capacity(view.len());
    for (i, s) in view.subs.iter().enumerate() {
        let mut near: Vec<usize> = s.vertices.iter().flat_map(|&v| by_vertex[v].iter().copied()).filter(|&j| j != i).collect();
        near.sort_unstable();
        near.dedup();
        let list = near
            .into_iter()
            .map(|j| {
                (j, sorted_intersection(&s.vertices, &view.subs[j].vertices), sorted_intersection(&s.edges, &view.subs[j].edges))
            })
            .collect();
        out.push(list);
    }
    out
}

struct CycleSearch<'a> {
    h: &'a Hypergraph,
    view: &'a View,
    adj: Vec<Vec<(usize, Vec<Vertex>, Vec<EdgeId>)>>,
    overlap: HashMap<(usize, usize), usize>,
    threshold: Threshold,
    max_len: usize,
    filter: CycleFilter,
    budget: &'a Budget,
    copies: Vec<usize>,
    conns: Vec<Connector>,
    used: HashSet<Connector>,
    best: Option<(CycleMetrics, Resolved)>,
    checked: usize,
}

impl<'a> CycleSearch<'a> {
    fn new(h: &'a Hypergraph, view: &'a View, threshold: Threshold, filter: CycleFilter, budget: &'a Budget) -> Self {
        let (g, n) = threshold.pair();
        let max_len = n.min(2 * g).max(2 * g.saturating_sub(1));
        let adj = adjacency(view, h);
        let mut overlap = HashMap::new();
        for (i, list) in adj.iter().enumerate() {
            for (k, (j, _, _)) in list.iter().enumerate() {
                overlap.insert((i, *j), k);
            }
        }
        CycleSearch {
            h,
            view,
            adj,
            overlap,
            threshold,
            max_len,
            filter,
            budget,
            copies: Vec::new(),
            conns: Vec::new(),
            used: HashSet::new(),
            best: None,
            checked: 0,
        }
    }

    fn run(&mut self) -> Result<()> {
        if self.threshold.pair().0 == 0 || self.max_len < 2 {
            return Ok(());
        }
        for start in 0..self.view.len() {
            self.copies.push(start);
            self.grow()?;
            self.copies.pop();
        }
        Ok(())
    }

    // Twice the order contributed by the known indices, plus one for the first index.
    fn partial_twice_order(&self) -> usize {
        let k = self.conns.len();
        let mut total = 1;
        for i in 1..k {
            total += if self.conns[i - 1].is_vertex() == self.conns[i].is_vertex() { 2 } else { 1 };
        }
        total
    }

    fn tidy_compatible(&self, q: Connector) -> bool {
        if self.filter != CycleFilter::Tidy {
            return true;
        }
        match q {
            Connector::Vertex(v) => !self.conns.iter().any(|p| matches!(p, Connector::Edge(e) if self.h.edge(*e).binary_search(&v).is_ok())),
            Connector::Edge(e) => !self.conns.iter().any(|p| matches!(p, Connector::Vertex(v) if self.h.edge(e).binary_search(v).is_ok())),
        }
    }

    fn grow(&mut self) -> Result<()> {
        self.budget.tick()?;
        let (g, _) = self.threshold.pair();
        let cur = *self.copies.last().unwrap();
        let first = self.copies[0];
        let k = self.copies.len();
        // close the cycle
        if k >= 2 && cur != first {
            if let Some(&slot) = self.overlap.get(&(cur, first)) {
                let (_, vs, es) = &self.adj[cur][slot];
                let options: Vec<Connector> =
                    vs.iter().map(|&v| Connector::Vertex(v)).chain(es.iter().map(|&e| Connector::Edge(e))).collect();
                for q in options {
                    if self.used.contains(&q) || !self.tidy_compatible(q) {
                        continue;
                    }
                    self.conns.push(q);
                    self.finish();
                    self.conns.pop();
                }
            }
        }
        if k >= self.max_len {
            return Ok(());
        }
        let mut steps = Vec::new();
        for (j, vs, es) in &self.adj[cur] {
            if *j < first {
                continue;
            }
            for &v in vs {
                steps.push((*j, Connector::Vertex(v)));
            }
            for &e in es {
                steps.push((*j, Connector::Edge(e)));
            }
        }
        for (j, q) in steps {
            if self.used.contains(&q) || !self.tidy_compatible(q) {
                continue;
            }
            self.conns.push(q);
            // the index of the copy about to be placed adds at least one half
            if self.partial_twice_order() + 1 > 2 * g {
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
        let r = Resolved { copies: self.copies.clone(), conns: self.conns.clone() };
        let m = r.metrics();
        if !self.threshold.admits(m.order, m.length) {
            return;
        }
        let ok = match self.filter {
            CycleFilter::Tidy => r.is_tidy(self.h),
            CycleFilter::Semitidy => r.is_semitidy(self.h),
        };
        if !ok {
            return;
        }
        let canon = r.canonical();
        if canon != r {
            return;
        }
        self.checked += 1;
        if master_of(self.h, self.view, &r).is_none() {
            let better = match &self.best {
                None => true,
                Some((bm, br)) => (m, r.key()) < (*bm, br.key()),
            };
            if better {
                self.best = Some((m, r));
            }
        }
    }
}

/// Girth exceeds `t`: every tidy cycle with `h <= t` has a master copy.
pub fn girth_of_system_exceeds(sys: &CopySystem, t: Threshold, budget: &Budget) -> Result<GirthReport> {
    girth_with_filter(sys, t, CycleFilter::Tidy, budget)
}

/// The same check quantifying over the cycles admitted by `filter`.
pub fn girth_with_filter(sys: &CopySystem, t: Threshold, filter: CycleFilter, budget: &Budget) -> Result<GirthReport> {
    let h = sys.host();
    if !h.is_linear() {
        return precondition("Girth is defined for linear hosts only");
    }
    let view = sys.view();
    let mut search = CycleSearch::new(h, &view, t, filter, budget);
    search.run()?;
    let witness = search.best.as_ref().map(|(_, r)| r.to_cycle(&view));
    Ok(GirthReport { holds: witness.is_none(), witness, cycles_checked: search.checked })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemitidyAgreement {
    pub agree: bool,
    pub tidy: GirthReport,
    pub semitidy: GirthReport,
}

/// Decides Girth `> g` once over tidy and once over semitidy cycles and compares.
pub fn semitidy_equivalence_check(sys: &CopySystem, g: usize, budget: &Budget) -> Result<SemitidyAgreement> {
    let tidy = girth_with_filter(sys, Threshold::Order(g), CycleFilter::Tidy, budget)?;
    let semitidy = girth_with_filter(sys, Threshold::Order(g), CycleFilter::Semitidy, budget)?;
    Ok(SemitidyAgreement { agree: tidy.holds == semitidy.holds, tidy, semitidy })
}

// ---------------------------------------------------------------------------
// clean intersections

/// Every two real copies meet exactly in the intersection of one edge of each.
/// Returns the first failing pair.
pub fn has_clean_intersections(sys: &CopySystem) -> (bool, Option<(usize, usize)>) {
    let h = sys.host();
    let copies = sys.copies();
    for i in 0..copies.len() {
        for j in i + 1..copies.len() {
            if !clean_pair(h, &copies[i], &copies[j]) {
                return (false, Some((i, j)));
            }
        }
    }
    (true, None)
}

fn clean_pair(h: &Hypergraph, a: &Sub, b: &Sub) -> bool {
    let meet = sorted_intersection(&a.vertices, &b.vertices);
    let ea: Vec<EdgeId> = a.edges.iter().copied().filter(|&e| is_sorted_subset(&meet, h.edge(e))).collect();
    let eb: Vec<EdgeId> = b.edges.iter().copied().filter(|&e| is_sorted_subset(&meet, h.edge(e))).collect();
    ea.iter().any(|&x| eb.iter().any(|&y| sorted_intersection(h.edge(x), h.edge(y)) == meet))
}

/// The three-clause form valid in linear systems.
pub fn clean_intersections_linear_form(sys: &CopySystem) -> bool {
    let h = sys.host();
    let copies = sys.copies();
    let isolated: Vec<HashSet<Vertex>> = copies.iter().map(|c| c.isolated_in(h).into_iter().collect()).collect();
    for i in 0..copies.len() {
        for j in i + 1..copies.len() {
            let (a, b) = (&copies[i], &copies[j]);
            if a.edges.is_empty() || b.edges.is_empty() {
                return false;
            }
            let meet = sorted_intersection(&a.vertices, &b.vertices);
            if meet.len() >= 2 {
                let shared = sorted_intersection(&a.edges, &b.edges);
                if !shared.iter().any(|&e| h.edge(e) == meet.as_slice()) {
                    return false;
                }
            } else if meet.len() == 1 && (isolated[i].contains(&meet[0]) || isolated[j].contains(&meet[0])) {
                return false;
            }
        }
    }
    true
}
