//! Ramsey constructions: Rms, Hales-Jewett, pictures and partite amalgamation,
//! the partite construction, ordered lifts and the extension process.

mod ext;
mod hj;
mod pc;
mod picture;
mod rms;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use ext::{ext, ExtRun};
pub use hj::{combinatorial_templates, hj};
pub use pc::{pc, pc_run, PcRun, PcStep};
pub use picture::{
    amalgamate, amalgamation_violations, constituent, order_lift, picture_violations, picture_zero,
    wagons_within_copies, Amalgamation, Constituent, Picture,
};
pub use rms::rms;

use crate::budget::{Budget, DEFAULT_BUDGET};
use crate::copy_system::CopySystem;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, Sub, Vertex};
use crate::oracle::SearchOptions;
use crate::partition::Partition;
use crate::pretrain::{Pretrain, PretrainCopySystem};
use crate::train::{validate_train, Quasitrain, Train};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Plain,
    Pretrain,
    Quasitrain,
    Train,
}

/// A hypergraph with the edge relations of its flavour: none for plain
/// hypergraphs, the wagon partition for pretrains, levels `0..=m` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub host: Hypergraph,
    pub flavor: Flavor,
    pub relations: Vec<Partition>,
    /// Train parameter; empty for the other flavours.
    pub parameter: Vec<Vec<usize>>,
}

impl Structure {
    pub fn plain(host: Hypergraph) -> Self {
        Structure { host, flavor: Flavor::Plain, relations: Vec::new(), parameter: Vec::new() }
    }

    pub fn from_pretrain(p: &Pretrain) -> Self {
        Structure {
            host: p.host().clone(),
            flavor: Flavor::Pretrain,
            relations: vec![p.wagons().clone()],
            parameter: Vec::new(),
        }
    }

    pub fn from_quasitrain(q: &Quasitrain) -> Self {
        Structure {
            host: q.host().clone(),
            flavor: Flavor::Quasitrain,
            relations: q.chain().to_vec(),
            parameter: Vec::new(),
        }
    }

    pub fn from_train(t: &Train) -> Self {
        Structure {
            host: t.host().clone(),
            flavor: Flavor::Train,
            relations: t.quasitrain().chain().to_vec(),
            parameter: t.parameter().to_vec(),
        }
    }

    /// Checks the relations against the flavour.
    pub fn validate(&self) -> Result<()> {
        match self.flavor {
            Flavor::Plain => {
                if !self.relations.is_empty() {
                    return invalid("plain structure carries relations");
                }
            }
            Flavor::Pretrain => {
                self.pretrain()?;
            }
            Flavor::Quasitrain => {
                self.quasitrain()?;
            }
            Flavor::Train => {
                let r = validate_train(&self.host, &self.relations, &self.parameter);
                if !r.valid {
                    return invalid(format!("not a train: {}", r.failures.join("; ")));
                }
            }
        }
        Ok(())
    }

    pub fn pretrain(&self) -> Result<Pretrain> {
        match (self.flavor, self.relations.as_slice()) {
            (Flavor::Pretrain, [w]) => Pretrain::new(self.host.clone(), w.clone()),
            _ => invalid("structure is not a pretrain"),
        }
    }

    pub fn quasitrain(&self) -> Result<Quasitrain> {
        match self.flavor {
            Flavor::Quasitrain | Flavor::Train => Quasitrain::new(self.host.clone(), self.relations.clone()),
            Flavor::Pretrain => Ok(Quasitrain::from_pretrain(&self.pretrain()?)),
            Flavor::Plain => Ok(Quasitrain::associated(self.host.clone())),
        }
    }

    pub fn train(&self) -> Result<Train> {
        match self.flavor {
            Flavor::Train => Train::new(Quasitrain::new(self.host.clone(), self.relations.clone())?, self.parameter.clone()),
            _ => invalid("structure is not a train"),
        }
    }

    /// Same relations on a host with the same edge list.
    pub fn with_host(&self, host: Hypergraph) -> Self {
        Structure { host, ..self.clone() }
    }

    /// The substructure on `s`, with its vertex map new -> old.
    pub fn restrict(&self, s: &Sub) -> (Structure, Vec<Vertex>) {
        let (h, map) = self.host.extract(s);
        let relations = self.relations.iter().map(|p| p.restrict(&s.edges)).collect();
        (Structure { host: h, flavor: self.flavor, relations, parameter: self.parameter.clone() }, map)
    }

    /// Renumbers vertices, `perm[v]` being the new position of `v`.
    pub fn permuted(&self, perm: &[Vertex]) -> (Structure, Vec<EdgeId>) {
        let host = self.host.permuted(perm);
        let edge_map: Vec<EdgeId> = (0..self.host.m())
            .map(|e| {
                let mut vs: Vec<Vertex> = self.host.edge(e).iter().map(|&v| perm[v]).collect();
                vs.sort_unstable();
                host.edge_id(&vs).unwrap()
            })
            .collect();
        let mut inverse = vec![0; edge_map.len()];
        for (old, &new) in edge_map.iter().enumerate() {
            inverse[new] = old;
        }
        let relations = self.relations.iter().map(|p| p.pullback(&inverse)).collect();
        (Structure { host, flavor: self.flavor, relations, parameter: self.parameter.clone() }, edge_map)
    }

    /// True iff edges `a` and `b` agree on every relation of `self` as `c`, `d` do on `other`.
    fn same_relations(&self, a: EdgeId, b: EdgeId, other: &Structure, c: EdgeId, d: EdgeId) -> bool {
        self.relations.iter().zip(&other.relations).all(|(p, q)| p.same(a, b) == q.same(c, d))
    }
}

/// A copy of a pattern: vertex map from the pattern and its image.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub map: Vec<Vertex>,
    pub image: Sub,
}

impl Placement {
    /// Places `pattern` in `target` along `map`, taking the image of every edge.
    pub fn along(pattern: &Hypergraph, target: &Hypergraph, map: Vec<Vertex>) -> Result<Self> {
        let mut edges = Vec::with_capacity(pattern.m());
        for e in 0..pattern.m() {
            let mut vs: Vec<Vertex> = pattern.edge(e).iter().map(|&v| map[v]).collect();
            vs.sort_unstable();
            match target.edge_id(&vs) {
                Some(id) => edges.push(id),
                None => return invalid(format!("pattern edge {e} has no image edge")),
            }
        }
        Ok(Placement { image: Sub::new(map.clone(), edges), map })
    }

    /// Image of pattern edge `e`.
    pub fn edge_image(&self, pattern: &Hypergraph, target: &Hypergraph, e: EdgeId) -> Option<EdgeId> {
        let mut vs: Vec<Vertex> = pattern.edge(e).iter().map(|&v| self.map[v]).collect();
        vs.sort_unstable();
        target.edge_id(&vs)
    }

    pub fn compose(&self, inner: &Placement, pattern: &Hypergraph, target: &Hypergraph) -> Result<Placement> {
        Placement::along(pattern, target, inner.map.iter().map(|&v| self.map[v]).collect())
    }
}

/// Reasons why `p` is not a copy of `pattern` in `target` in the sense of their flavour.
pub fn placement_violations(pattern: &Structure, target: &Structure, p: &Placement) -> Vec<String> {
    let (f, h) = (&pattern.host, &target.host);
    let mut out = Vec::new();
    if p.map.len() != f.n() || p.map.iter().any(|&v| v >= h.n()) {
        return vec!["vertex map has the wrong shape".into()];
    }
    let mut seen = p.map.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != p.map.len() || seen != p.image.vertices {
        out.push("vertex map is not injective onto the image".into());
    }
    let imgs: Vec<Option<EdgeId>> = (0..f.m()).map(|e| p.edge_image(f, h, e)).collect();
    if imgs.iter().any(|x| x.is_none()) {
        out.push("a pattern edge has no image".into());
        return out;
    }
    let mut es: Vec<EdgeId> = imgs.iter().map(|x| x.unwrap()).collect();
    es.sort_unstable();
    if es != p.image.edges {
        out.push("image edges differ from the mapped pattern edges".into());
    }
    if let (Some(fp), Some(hp)) = (f.partite(), h.partite()) {
        if fp.index_count() == hp.index_count() && (0..f.n()).any(|v| fp.class[v] != hp.class[p.map[v]]) {
            out.push("vertex classes are not preserved".into());
        }
    }
    if pattern.relations.len() == target.relations.len() {
        for a in 0..f.m() {
            for b in a + 1..f.m() {
                let (x, y) = (imgs[a].unwrap(), imgs[b].unwrap());
                if !pattern.same_relations(a, b, target, x, y) {
                    out.push(format!("pattern edges {a}, {b} change their relation"));
                    return out;
                }
            }
        }
    }
    out
}

/// A target structure with placed copies of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlavoredSystem {
    pub pattern: Structure,
    pub target: Structure,
    pub copies: Vec<Placement>,
}

impl FlavoredSystem {
    /// The pattern in itself.
    pub fn trivial(pattern: &Structure) -> Self {
        let map: Vec<Vertex> = (0..pattern.host.n()).collect();
        let image = Sub::new(map.clone(), (0..pattern.host.m()).collect());
        FlavoredSystem { pattern: pattern.clone(), target: pattern.clone(), copies: vec![Placement { map, image }] }
    }

    pub fn copy_system(&self) -> Result<CopySystem> {
        CopySystem::new(self.target.host.clone(), self.copies.iter().map(|p| p.image.clone()).collect(), false)
    }

    /// The pretrain system at relation `level` (the wagon partition for pretrains).
    pub fn pretrain_system(&self, level: usize) -> Result<PretrainCopySystem> {
        let rel = match self.target.relations.get(level) {
            Some(r) => r.clone(),
            None => return invalid(format!("no relation at level {level}")),
        };
        let p = Pretrain::new(self.target.host.clone(), rel)?;
        PretrainCopySystem::new(p, self.copies.iter().map(|c| c.image.clone()).collect(), false)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, c) in self.copies.iter().enumerate() {
            for v in placement_violations(&self.pattern, &self.target, c) {
                out.push(format!("copy {i}: {v}"));
            }
        }
        out
    }

    /// Drops isolated vertices of the target.
    pub fn without_isolated(&self) -> Self {
        let (h, keep) = self.target.host.without_isolated();
        let pos: HashMap<Vertex, Vertex> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edge_of: Vec<EdgeId> = (0..self.target.host.m())
            .map(|e| {
                let vs: Vec<Vertex> = self.target.host.edge(e).iter().map(|v| pos[v]).collect();
                h.edge_id(&vs).unwrap()
            })
            .collect();
        let mut inverse = vec![0; edge_of.len()];
        for (old, &new) in edge_of.iter().enumerate() {
            inverse[new] = old;
        }
        let target = Structure {
            host: h,
            relations: self.target.relations.iter().map(|p| p.pullback(&inverse)).collect(),
            ..self.target.clone()
        };
        let copies = self
            .copies
            .iter()
            .filter(|c| c.map.iter().all(|v| pos.contains_key(v)))
            .map(|c| Placement {
                map: c.map.iter().map(|v| pos[v]).collect(),
                image: Sub::new(c.image.vertices.iter().map(|v| pos[v]).collect(), c.image.edges.iter().map(|&e| edge_of[e]).collect()),
            })
            .collect();
        FlavoredSystem { pattern: self.pattern.clone(), target, copies }
    }
}

/// Size limits for constructions; exceeding one is reported as budget exhaustion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub max_vertices: usize,
    pub max_class_size: usize,
    pub max_hj_exponent: usize,
    /// Colouring nodes for every oracle call made while constructing.
    pub nodes: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_vertices: 200_000, max_class_size: 12, max_hj_exponent: 6, nodes: DEFAULT_BUDGET }
    }
}

/// Shared state of a construction run.
pub struct Ctx {
    pub budgets: Budgets,
    pub nodes: Budget,
    pub search: SearchOptions,
}

impl Ctx {
    pub fn new(budgets: Budgets) -> Self {
        Ctx { nodes: Budget::labelled(budgets.nodes, "colouring search"), budgets, search: SearchOptions::default() }
    }

    pub(crate) fn check_vertices(&self, n: usize, what: &str) -> Result<()> {
        if n > self.budgets.max_vertices {
            return Err(Error::BudgetExceeded(format!("{what} needs {n} vertices, limit {}", self.budgets.max_vertices)));
        }
        Ok(())
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::new(Budgets::default())
    }
}

/// A recipe over the primitive constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handle {
    /// `(F, {F})`.
    Trivial,
    /// Least complete f-partite host whose non-induced copies arrow.
    Rms,
    /// Hales-Jewett partite lemma; the exponent is searched when absent.
    Hj { exponent: Option<usize> },
    /// Partite construction with a vertical construction and a partite lemma.
    Pc(Box<Handle>, Box<Handle>),
    /// Extension process for pretrains and trains.
    Ext(Box<Handle>, Box<Handle>),
}

impl Handle {
    pub fn hj() -> Self {
        Handle::Hj { exponent: None }
    }

    pub fn pc(vertical: Handle, lemma: Handle) -> Self {
        Handle::Pc(Box::new(vertical), Box::new(lemma))
    }

    /// Clean partite lemma `PC(HJ, HJ)`.
    pub fn cpl() -> Self {
        Handle::pc(Handle::hj(), Handle::hj())
    }

    /// `PC(Rms, CPL)`.
    pub fn omega2() -> Self {
        Handle::pc(Handle::Rms, Handle::cpl())
    }

    pub fn ext(phi: Handle, psi: Handle) -> Self {
        Handle::Ext(Box::new(phi), Box::new(psi))
    }

    /// The train extension `Ext(PC(Rms, CPL), inner)`.
    pub fn ups(inner: Handle) -> Self {
        Handle::ext(Handle::omega2(), inner)
    }

    pub fn apply(&self, f: &Structure, r: usize, ctx: &Ctx) -> Result<FlavoredSystem> {
        if r == 0 {
            return invalid("at least one colour is needed");
        }
        match self {
            Handle::Trivial => Ok(FlavoredSystem::trivial(f)),
            Handle::Rms => rms(f, r, ctx),
            Handle::Hj { exponent } => hj(f, r, *exponent, ctx),
            Handle::Pc(v, l) => pc(v, l, f, r, ctx),
            Handle::Ext(phi, psi) => ext(phi, psi, f, r, ctx).map(|run| run.output),
        }
    }
}

impl std::fmt::Display for Handle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Handle::Trivial => write!(f, "trivial"),
            Handle::Rms => write!(f, "rms"),
            Handle::Hj { exponent: None } => write!(f, "hj"),
            Handle::Hj { exponent: Some(n) } => write!(f, "hj:{n}"),
            Handle::Pc(v, l) => write!(f, "pc({v},{l})"),
            Handle::Ext(phi, psi) => write!(f, "ext({phi},{psi})"),
        }
    }
}

/// Recipes such as `hj`, `hj:2`, `cpl`, `omega2`, `pc(rms,cpl)`, `ext(trivial,hj)` or `ups(cpl)`.
impl std::str::FromStr for Handle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = compact.as_str();
        let h = parse_recipe(&mut rest)?;
        if !rest.is_empty() {
            return invalid(format!("trailing input {rest:?} in recipe {s:?}"));
        }
        Ok(h)
    }
}

fn parse_recipe(rest: &mut &str) -> Result<Handle> {
    let end = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == ':')).unwrap_or(rest.len());
    let (word, tail) = rest.split_at(end);
    *rest = tail;
    let args = |rest: &mut &str, count: usize| -> Result<Vec<Handle>> {
        let mut out = Vec::new();
        if !rest.starts_with('(') {
            return invalid(format!("{word} takes {count} argument(s)"));
        }
        *rest = &rest[1..];
        for i in 0..count {
            out.push(parse_recipe(rest)?);
            let sep = if i + 1 == count { ')' } else { ',' };
            if !rest.starts_with(sep) {
                return invalid(format!("expected {sep:?} in the arguments of {word}"));
            }
            *rest = &rest[1..];
        }
        Ok(out)
    };
    Ok(match word {
        "trivial" => Handle::Trivial,
        "rms" => Handle::Rms,
        "hj" => Handle::hj(),
        "cpl" => Handle::cpl(),
        "omega2" => Handle::omega2(),
        "pc" | "ext" => {
            let mut a = args(rest, 2)?;
            let (second, first) = (a.pop().unwrap(), a.pop().unwrap());
            if word == "pc" {
                Handle::pc(first, second)
            } else {
                Handle::ext(first, second)
            }
        }
        "ups" => Handle::ups(args(rest, 1)?.pop().unwrap()),
        w => match w.strip_prefix("hj:").map(str::parse::<usize>) {
            Some(Ok(n)) => Handle::Hj { exponent: Some(n) },
            _ => return invalid(format!("unknown recipe {w:?}")),
        },
    })
}

#[cfg(test)]
mod tests;
