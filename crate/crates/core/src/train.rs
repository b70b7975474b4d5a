//! Quasitrains (nested chains of wagon partitions) and trains with parameters.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{invalid, Result};
use crate::hypergraph::{disjoint_union as union_of_hypergraphs, shortest_cycle_in_family, EdgeCycle, Hypergraph, Sub};
use crate::partition::Partition;
use crate::pretrain::{
    extension_report, frak_girth_system_exceeds, locate_by_names, BigCycle, Pretrain, PretrainCopySystem,
};

/// `(H, ≡_0, ..., ≡_m)`: singleton classes at level 0, refining upwards, one
/// class at the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasitrain {
    host: Hypergraph,
    chain: Vec<Partition>,
}

/// Clause failures of the quasitrain conditions.
pub fn quasitrain_violations(host: &Hypergraph, chain: &[Partition]) -> Vec<String> {
    let mut out = Vec::new();
    if chain.len() < 2 {
        out.push(format!("height {} is below 1", chain.len().saturating_sub(1)));
        return out;
    }
    if let Some(mu) = chain.iter().position(|p| p.len() != host.m()) {
        out.push(format!("level {mu} does not partition the edge set"));
        return out;
    }
    if chain[0] != Partition::discrete(host.m()) {
        out.push("(i): level 0 has a class with two edges".into());
    }
    for mu in 0..chain.len() - 1 {
        if !chain[mu].refines(&chain[mu + 1]) {
            out.push(format!("(ii): level {mu} does not refine level {}", mu + 1));
        }
    }
    if chain.last().unwrap().num_classes() > 1 {
        out.push("(iii): the top level has more than one class".into());
    }
    out
}

impl Quasitrain {
    pub fn new(host: Hypergraph, chain: Vec<Partition>) -> Result<Self> {
        let v = quasitrain_violations(&host, &chain);
        if !v.is_empty() {
            return invalid(format!("not a quasitrain: {}", v.join("; ")));
        }
        Ok(Quasitrain { host, chain })
    }

    /// The height-1 quasitrain of a hypergraph.
    pub fn associated(host: Hypergraph) -> Self {
        let m = host.m();
        Quasitrain { host, chain: vec![Partition::discrete(m), Partition::single(m)] }
    }

    /// The height-2 quasitrain of a pretrain.
    pub fn from_pretrain(p: &Pretrain) -> Self {
        let m = p.host().m();
        Quasitrain {
            host: p.host().clone(),
            chain: vec![Partition::discrete(m), p.wagons().clone(), Partition::single(m)],
        }
    }

    /// Inverse of [`Quasitrain::from_pretrain`].
    pub fn to_pretrain(&self) -> Result<Pretrain> {
        if self.height() != 2 {
            return invalid("only height-2 quasitrains correspond to pretrains");
        }
        self.level(1)
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    pub fn height(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn chain(&self) -> &[Partition] {
        &self.chain
    }

    /// The pretrain `(H, ≡_mu)`.
    pub fn level(&self, mu: usize) -> Result<Pretrain> {
        match self.chain.get(mu) {
            Some(p) => Pretrain::new(self.host.clone(), p.clone()),
            None => invalid(format!("level {mu} above height {}", self.height())),
        }
    }

    /// Vertex sets of the `mu`-wagons.
    pub fn wagon_vertex_sets(&self, mu: usize) -> Vec<Vec<usize>> {
        self.chain[mu].blocks().iter().map(|es| self.host.span(es).vertices).collect()
    }
}

/// A quasitrain on an f-partite host with a parameter `(A_1, ..., A_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Train {
    quasi: Quasitrain,
    parameter: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainReport {
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Clause-precise check of the quasitrain and train conditions.
pub fn validate_train(host: &Hypergraph, chain: &[Partition], parameter: &[Vec<usize>]) -> TrainReport {
    let mut failures = quasitrain_violations(host, chain);
    if failures.is_empty() {
        failures.extend(train_violations(host, chain, parameter));
    }
    TrainReport { valid: failures.is_empty(), failures }
}

fn train_violations(host: &Hypergraph, chain: &[Partition], parameter: &[Vec<usize>]) -> Vec<String> {
    let mut out = Vec::new();
    let p = match host.partite() {
        Some(p) => p,
        None => return vec!["host has no partite structure".into()],
    };
    if p.total() < 2 {
        out.push("partite profile sums to less than 2".into());
    }
    let m = chain.len() - 1;
    if parameter.len() != m {
        out.push(format!("parameter has length {}, height is {m}", parameter.len()));
        return out;
    }
    for (mu, a) in parameter.iter().enumerate() {
        if let Some(i) = a.iter().find(|&&i| i >= p.index_count()) {
            out.push(format!("parameter A_{} names index {i} outside the index set", mu + 1));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for mu in 1..=m {
        let allowed: BTreeSet<usize> = parameter[mu - 1].iter().copied().collect();
        let lower = chain[mu - 1].blocks();
        let verts: Vec<Vec<usize>> = lower.iter().map(|es| host.span(es).vertices).collect();
        'pairs: for a in 0..lower.len() {
            for b in a + 1..lower.len() {
                if !chain[mu].same(lower[a][0], lower[b][0]) {
                    continue;
                }
                let shared = crate::hypergraph::sorted_intersection(&verts[a], &verts[b]);
                if let Some(&v) = shared.iter().find(|&&v| !allowed.contains(&p.class[v])) {
                    out.push(format!(
                        "(ii): level-{} wagons {a} and {b} meet in vertex {} outside V_A{mu}",
                        mu - 1,
                        host.name(v)
                    ));
                    break 'pairs;
                }
            }
        }
    }
    out
}

impl Train {
    pub fn new(quasi: Quasitrain, mut parameter: Vec<Vec<usize>>) -> Result<Self> {
        for a in parameter.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        let r = validate_train(&quasi.host, &quasi.chain, &parameter);
        if !r.valid {
            return invalid(format!("not a train: {}", r.failures.join("; ")));
        }
        Ok(Train { quasi, parameter })
    }

    pub fn quasitrain(&self) -> &Quasitrain {
        &self.quasi
    }

    pub fn parameter(&self) -> &[Vec<usize>] {
        &self.parameter
    }

    pub fn height(&self) -> usize {
        self.quasi.height()
    }

    pub fn host(&self) -> &Hypergraph {
        &self.quasi.host
    }
}

// ---------------------------------------------------------------------------
// girth sequences

/// A finite sequence of integers at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GirthSequence(Vec<usize>);

impl GirthSequence {
    pub fn new(terms: Vec<usize>) -> Result<Self> {
        if let Some(&t) = terms.iter().find(|&&t| t < 2) {
            return invalid(format!("girth sequence term {t} is below 2"));
        }
        Ok(GirthSequence(terms))
    }

    pub fn empty() -> Self {
        GirthSequence(Vec::new())
    }

    /// `(g)^m`.
    pub fn power(g: usize, m: usize) -> Result<Self> {
        Self::new(vec![g; m])
    }

    pub fn concat(&self, other: &GirthSequence) -> Self {
        GirthSequence(self.0.iter().chain(&other.0).copied().collect())
    }

    /// The least term; `None` stands for infinity on the empty sequence.
    pub fn inf(&self) -> Option<usize> {
        self.0.iter().min().copied()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqGirthWitness {
    /// The level `mu` whose wagon fails.
    pub level: usize,
    /// Id of the failing `mu`-wagon.
    pub wagon: usize,
    /// A short cycle of `(mu-1)`-wagon ids, absent when the wagon is not linear.
    pub cycle: Option<EdgeCycle>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqGirthReport {
    pub holds: bool,
    pub witness: Option<SeqGirthWitness>,
}

/// For every level `mu` and every `mu`-wagon, its `(mu-1)`-wagons form a linear
/// pretrain whose wagon girth exceeds `g_mu`.
pub fn frak_girth_seq_exceeds(q: &Quasitrain, g: &GirthSequence) -> Result<SeqGirthReport> {
    let m = q.height();
    if g.len() != m {
        return invalid(format!("girth sequence has length {}, height is {m}", g.len()));
    }
    let h = &q.host;
    for mu in 1..=m {
        let lower_blocks = q.chain[mu - 1].blocks();
        let lower_verts: Vec<Vec<usize>> = lower_blocks.iter().map(|es| h.span(es).vertices).collect();
        for (w, es) in q.chain[mu].blocks().into_iter().enumerate() {
            let sub = h.span(&es);
            let (wh, _) = h.extract(&sub);
            if !wh.is_linear() {
                return Ok(SeqGirthReport {
                    holds: false,
                    witness: Some(SeqGirthWitness { level: mu, wagon: w, cycle: None, reason: "wagon is not linear".into() }),
                });
            }
            let inner: BTreeSet<usize> = es.iter().map(|&e| q.chain[mu - 1].class_of(e)).collect();
            let ids: Vec<usize> = inner.into_iter().collect();
            let family: Vec<Vec<usize>> = ids.iter().map(|&i| lower_verts[i].clone()).collect();
            if let Some(mut c) = shortest_cycle_in_family(h.n(), &family, g.terms()[mu - 1]) {
                for e in c.edges.iter_mut() {
                    *e = ids[*e];
                }
                return Ok(SeqGirthReport {
                    holds: false,
                    witness: Some(SeqGirthWitness {
                        level: mu,
                        wagon: w,
                        cycle: Some(c),
                        reason: format!("a cycle of level-{} wagons", mu - 1),
                    }),
                });
            }
        }
    }
    Ok(SeqGirthReport { holds: true, witness: None })
}

// ---------------------------------------------------------------------------
// 1-extensions and disjoint unions

/// The unique quasitrain on `ext` containing `f` as a subquasitrain, where `ext`
/// is an extension of the level-1 pretrain of `f` (matched by vertex names).
pub fn lift_one_extension(f: &Quasitrain, ext: &Pretrain) -> Result<Quasitrain> {
    let base = f.level(1)?;
    let sub = locate_by_names(&base, ext)?;
    let rep = extension_report(ext, &sub);
    if !rep.extension {
        return invalid(format!("not an extension: {}", rep.failure.unwrap_or_default()));
    }
    let h = ext.host();
    // F edge id for each edge of the located copy
    let f_edge_of: std::collections::HashMap<usize, usize> = (0..f.host.m())
        .map(|e| {
            let mut vs: Vec<usize> = f.host.edge(e).iter().map(|v| h.vertex_named(f.host.name(*v)).unwrap()).collect();
            vs.sort_unstable();
            (h.edge_id(&vs).unwrap(), e)
        })
        .collect();
    let rep_edge: Vec<usize> = (0..h.m())
        .map(|e| {
            let w = ext.wagon_of(e);
            let inside = ext.wagon_edges(w).iter().find(|x| sub.contains_edge(**x)).unwrap();
            f_edge_of[inside]
        })
        .collect();
    let mut chain = vec![Partition::discrete(h.m()), ext.wagons().clone()];
    for mu in 2..=f.height() {
        let labels: Vec<usize> = (0..h.m()).map(|e| f.chain[mu].class_of(rep_edge[e])).collect();
        chain.push(Partition::from_labels(&labels));
    }
    Quasitrain::new(h.clone(), chain)
}

/// Disjoint union with fresh vertex names; lower levels blockwise, the top level whole.
pub fn disjoint_union(parts: &[Quasitrain]) -> Result<Quasitrain> {
    let m = match parts.first() {
        Some(q) => q.height(),
        None => return invalid("disjoint union of nothing"),
    };
    if parts.iter().any(|q| q.height() != m) {
        return invalid("disjoint union of quasitrains of different heights");
    }
    let prefixes: Vec<String> = (0..parts.len()).map(|i| format!("d{i}.")).collect();
    let named: Vec<(&str, &Hypergraph)> = prefixes.iter().map(|s| s.as_str()).zip(parts.iter().map(|q| &q.host)).collect();
    let h = union_of_hypergraphs(&named)?;
    let mut labels: Vec<Vec<(usize, usize)>> = vec![vec![(0, 0); h.m()]; m + 1];
    let mut offset = 0;
    for (i, q) in parts.iter().enumerate() {
        for e in 0..q.host.m() {
            let vs: Vec<usize> = q.host.edge(e).iter().map(|&v| v + offset).collect();
            let id = h.edge_id(&vs).unwrap();
            for mu in 0..=m {
                labels[mu][id] = if mu == m { (0, 0) } else { (i, q.chain[mu].class_of(e)) };
            }
        }
        offset += q.host.n();
    }
    let mut chain: Vec<Partition> = labels.iter().map(|l| Partition::from_labels(l)).collect();
    chain[0] = Partition::discrete(h.m());
    Quasitrain::new(h, chain)
}

/// Disjoint union of trains with a common parameter.
pub fn disjoint_union_trains(parts: &[Train]) -> Result<Train> {
    let first = match parts.first() {
        Some(t) => t,
        None => return invalid("disjoint union of nothing"),
    };
    if parts.iter().any(|t| t.parameter != first.parameter) {
        return invalid("disjoint union of trains with different parameters");
    }
    let q: Vec<Quasitrain> = parts.iter().map(|t| t.quasi.clone()).collect();
    Train::new(disjoint_union(&q)?, first.parameter.clone())
}

// ---------------------------------------------------------------------------
// systems of quasitrains

/// A quasitrain with distinguished subquasitrains; relations on copies are restrictions.
#[derive(Clone, Debug)]
pub struct QuasitrainCopySystem {
    quasi: Quasitrain,
    copies: Vec<Sub>,
    extended: bool,
}

impl QuasitrainCopySystem {
    pub fn new(quasi: Quasitrain, copies: Vec<Sub>, extended: bool) -> Result<Self> {
        for c in &copies {
            quasi.host.check_sub(c)?;
        }
        Ok(QuasitrainCopySystem { quasi, copies, extended })
    }

    pub fn quasitrain(&self) -> &Quasitrain {
        &self.quasi
    }

    pub fn copies(&self) -> &[Sub] {
        &self.copies
    }

    /// The system of pretrains `(H, ≡_mu, copies)`.
    pub fn at_level(&self, mu: usize) -> Result<PretrainCopySystem> {
        PretrainCopySystem::new(self.quasi.level(mu)?, self.copies.clone(), self.extended)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqBigGirthReport {
    pub holds: bool,
    /// Relation level `mu - 1` (or `m` for the final clause) that fails.
    pub failing_level: Option<usize>,
    pub witness: Option<BigCycle>,
    pub reason: Option<String>,
}

/// Level-wise wagon Girth: `(H, ≡_{mu-1})` exceeds `g_mu` for `mu` from `start`
/// to `m`, and `(H, ≡_m)` exceeds 1.
pub fn frak_girth_seq_system_exceeds(
    sys: &QuasitrainCopySystem,
    g: &GirthSequence,
    start: usize,
    budget: &Budget,
) -> Result<SeqBigGirthReport> {
    if start != 1 && start != 2 {
        return invalid(format!("start level {start} is not 1 or 2"));
    }
    let m = sys.quasi.height();
    if start > m + 1 || g.len() != m + 1 - start {
        return invalid(format!("girth sequence has length {}, expected {}", g.len(), (m + 1).saturating_sub(start)));
    }
    let checks: Vec<(usize, usize)> =
        (start..=m).map(|mu| (mu - 1, g.terms()[mu - start])).chain(std::iter::once((m, 1))).collect();
    for (level, bound) in checks {
        let r = frak_girth_system_exceeds(&sys.at_level(level)?, bound, budget)?;
        if !r.holds {
            return Ok(SeqBigGirthReport { holds: false, failing_level: Some(level), witness: r.witness, reason: r.reason });
        }
    }
    Ok(SeqBigGirthReport { holds: true, failing_level: None, witness: None, reason: None })
}

// ---------------------------------------------------------------------------
// revisions

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevisionReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Checks a supplied revision `(candidate, b)` of the train `f` of height `l + 1`.
pub fn verify_revision(f: &Train, candidate: &Train, b: &[Vec<usize>], g: usize, gs: &GirthSequence) -> Result<RevisionReport> {
    let l = f.height() - 1;
    let h = f.host();
    let p = match h.partite() {
        Some(p) => p,
        None => return invalid("train has no partite structure"),
    };
    if p.f.iter().any(|&x| x != 1) || h.uniformity() != Some(p.index_count()) {
        return invalid("revisions are defined for k-partite k-uniform trains");
    }
    if candidate.height() <= l {
        return invalid("candidate is not taller than the train");
    }
    let m = candidate.height() - l;
    if b.len() != m || gs.len() != l {
        return invalid(format!("expected {m} parameter sets and a girth sequence of length {l}"));
    }
    if candidate.host() != h {
        return invalid("candidate lives on a different hypergraph");
    }
    let mut failures = Vec::new();
    let (fc, cc) = (&f.quasi.chain, &candidate.quasi.chain);
    if cc[0] != fc[0] || (0..=l).any(|j| cc[m + j] != fc[1 + j]) {
        failures.push("chain: candidate does not interleave the train's relations".into());
    }
    let mut want: Vec<Vec<usize>> = b.iter().map(|x| {
        let mut x = x.clone();
        x.sort_unstable();
        x.dedup();
        x
    }).collect();
    want.extend(f.parameter[1..].iter().cloned());
    if candidate.parameter != want {
        failures.push("parameter: candidate parameter is not B followed by (A_2, ...)".into());
    }
    let seq = GirthSequence::power(g, m)?.concat(gs);
    let r = frak_girth_seq_exceeds(&candidate.quasi, &seq)?;
    if !r.holds {
        let w = r.witness.unwrap();
        failures.push(format!("girth: level {} wagon {} fails ({})", w.level, w.wagon, w.reason));
    }
    for (mu, set) in want[..m].iter().enumerate() {
        if set.len() > 1 {
            failures.push(format!("B_{} has {} elements", mu + 1, set.len()));
        }
        if set.iter().any(|i| !f.parameter[0].contains(i)) {
            failures.push(format!("B_{} is not inside A_1", mu + 1));
        }
    }
    Ok(RevisionReport { ok: failures.is_empty(), failures })
}
