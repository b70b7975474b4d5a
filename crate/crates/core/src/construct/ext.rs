use std::collections::BTreeSet;

use crate::error::{invalid, precondition, Error, Result};
use crate::hypergraph::{Hypergraph, Partite, Vertex};
use crate::partition::Partition;
use crate::pretrain::{is_linear_pretrain, semidirect_extend, wagon_assimilation};
use crate::train::{disjoint_union, lift_one_extension, Quasitrain};

use super::{Ctx, Flavor, FlavoredSystem, Handle, Placement, Structure};

/// Intermediate objects of an extension run.
#[derive(Clone, Debug)]
pub struct ExtRun {
    /// The input with its 1-wagons assimilated.
    pub assimilated: Quasitrain,
    /// The common shape of the assimilated 1-wagons.
    pub wagon: Hypergraph,
    /// The outer construction applied to the wagon, isolated vertices dropped.
    pub wagon_system: FlavoredSystem,
    /// Disjoint union of the semidirect extensions, one per wagon copy.
    pub blown_up: Quasitrain,
    /// Standard copies of the input in `blown_up`.
    pub standard: Vec<Placement>,
    /// One edge per 1-wagon of `blown_up`; higher levels shifted down by one.
    pub wagon_hypergraph: Structure,
    /// The inner construction applied to `wagon_hypergraph`.
    pub inner: FlavoredSystem,
    pub output: FlavoredSystem,
}

/// The extension process for ordered linear pretrains, quasitrains and trains.
/// `phi` acts on the wagon shape, `psi` on the wagon hypergraph with `r^e(X)` colours.
pub fn ext(phi: &Handle, psi: &Handle, f: &Structure, r: usize, ctx: &Ctx) -> Result<ExtRun> {
    if f.flavor == Flavor::Plain {
        return invalid("the extension process needs a pretrain or train");
    }
    if !f.host.is_ordered() {
        return invalid("the extension process needs an ordered input");
    }
    if f.host.m() == 0 {
        return invalid("the extension process needs at least one edge");
    }
    let q = f.quasitrain()?;
    let height = q.height();
    if height < 2 {
        return invalid("the extension process needs height at least 2");
    }
    if !is_linear_pretrain(&q.level(1)?) {
        return precondition("input is not linear");
    }

    // (1) assimilation
    let assim = wagon_assimilation(&q.level(1)?)?;
    let fhat = lift_one_extension(&q, &assim.pretrain)?;
    let p1 = fhat.level(1)?;
    let (wagon, _) = p1.host().extract(&p1.wagon_sub(0));

    // (2) outer construction on the wagon
    let wagon_system = phi.apply(&Structure::plain(wagon.clone()), r, ctx)?.without_isolated();
    let x = &wagon_system.target.host;
    if !x.is_ordered() {
        return invalid("the outer construction returned an unordered host");
    }

    // (3) one semidirect extension per wagon copy
    let mut parts = Vec::with_capacity(wagon_system.copies.len());
    for c in &wagon_system.copies {
        let sx = semidirect_extend(&p1, x, &c.image)?;
        parts.push(lift_one_extension(&fhat, &sx.pretrain)?);
    }
    let blown_up = disjoint_union(&parts)?;
    let g = blown_up.host();
    let mut standard = Vec::with_capacity(parts.len());
    for i in 0..parts.len() {
        let map: Option<Vec<Vertex>> = (0..f.host.n()).map(|v| g.vertex_named(&format!("d{i}.{}", f.host.name(v)))).collect();
        match map {
            Some(map) => standard.push(Placement::along(&f.host, g, map)?),
            None => return invalid("standard copy lost its vertex names"),
        }
    }

    // (4) wagon hypergraph
    let wagon_sets = blown_up.wagon_vertex_sets(1);
    let wagon_edges = blown_up.chain()[1].blocks();
    let width = x.n();
    if wagon_sets.iter().any(|s| s.len() != width) {
        return invalid("wagons of the blow-up differ in size");
    }
    if wagon_sets.iter().collect::<BTreeSet<_>>().len() != wagon_sets.len() {
        return precondition("two wagons share their vertex set");
    }
    let mut m_host = Hypergraph::new(g.names().to_vec(), wagon_sets.clone(), width)?.with_order(true);
    if let (Some(gp), Some(xp)) = (g.partite(), x.partite()) {
        let mut f_m = vec![0; gp.index_count()];
        for &v in &wagon_sets[0] {
            f_m[gp.class[v]] += 1;
        }
        if f_m.len() != xp.index_count() {
            return invalid("wagon shape and input have different index sets");
        }
        m_host = m_host.with_partite(Partite { f: f_m, class: gp.class.clone() })?;
    }
    // wagon id of each M edge
    let wagon_of_edge: Vec<usize> = (0..m_host.m())
        .map(|t| wagon_sets.iter().position(|s| s.as_slice() == m_host.edge(t)).unwrap())
        .collect();
    let wagon_hypergraph = if height == 2 && f.flavor != Flavor::Train {
        Structure::plain(m_host)
    } else {
        let mut chain = vec![Partition::discrete(m_host.m())];
        for mu in 2..=height {
            let labels: Vec<usize> = wagon_of_edge.iter().map(|&w| blown_up.chain()[mu].class_of(wagon_edges[w][0])).collect();
            chain.push(Partition::from_labels(&labels));
        }
        let train = f.flavor == Flavor::Train;
        Structure {
            host: m_host,
            flavor: if train { Flavor::Train } else { Flavor::Quasitrain },
            relations: chain,
            parameter: if train { f.parameter[1..].to_vec() } else { Vec::new() },
        }
    };

    // (5) inner construction
    let colours = u32::try_from(x.m())
        .ok()
        .and_then(|e| r.checked_pow(e))
        .ok_or_else(|| Error::BudgetExceeded(format!("{r}^{} colours overflow", x.m())))?;
    let inner = psi.apply(&wagon_hypergraph, colours, ctx)?;
    let n = &inner.target.host;
    if inner.target.relations.len() != wagon_hypergraph.relations.len() {
        return invalid("the inner construction dropped the relations of the wagon hypergraph");
    }

    // (6) insert X into the edges of N
    ctx.check_vertices(n.n(), "extension host")?;
    let mut edges = Vec::with_capacity(n.m() * x.m());
    let mut owner = Vec::with_capacity(n.m() * x.m());
    for t in 0..n.m() {
        let slot = n.edge(t);
        if slot.len() != width {
            return invalid("inner host has edges of the wrong size");
        }
        if let (Some(np), Some(xp)) = (n.partite(), x.partite()) {
            if (0..width).any(|j| np.class[slot[j]] != xp.class[j]) {
                return invalid("an inner edge does not match the wagon shape's classes");
            }
        }
        for e in x.edges() {
            let mut img: Vec<Vertex> = e.iter().map(|&j| slot[j]).collect();
            img.sort_unstable();
            edges.push(img);
            owner.push(t);
        }
    }
    let mut seen = BTreeSet::new();
    if !edges.iter().all(|e| seen.insert(e.clone())) {
        return precondition("inner host is not linear");
    }
    let partite = match (f.host.partite(), n.partite()) {
        (Some(fp), Some(np)) => Some(Partite { f: fp.f.clone(), class: np.class.clone() }),
        _ => None,
    };
    let h = Hypergraph::from_parts(n.names().to_vec(), edges.clone(), f.host.uniformity(), true, None);
    let h = match partite {
        Some(p) => h.with_partite(p)?,
        None => h,
    };
    let mut owner_of = vec![0; h.m()];
    for (e, &t) in edges.iter().zip(&owner) {
        owner_of[h.edge_id(e).unwrap()] = t;
    }
    let mut chain = vec![Partition::discrete(h.m()), Partition::from_labels(&owner_of)];
    for mu in 2..height {
        let labels: Vec<usize> = owner_of.iter().map(|&t| inner.target.relations[mu - 1].class_of(t)).collect();
        chain.push(Partition::from_labels(&labels));
    }
    chain.push(Partition::single(h.m()));
    let target = match f.flavor {
        Flavor::Pretrain => Structure { host: h, flavor: Flavor::Pretrain, relations: vec![chain[1].clone()], parameter: Vec::new() },
        flavor => Structure { host: h, flavor, relations: chain, parameter: f.parameter.clone() },
    };

    // (7) copies of the input through every inner copy
    let mut copies = Vec::new();
    let mut images = BTreeSet::new();
    for mc in &inner.copies {
        for st in &standard {
            let map: Vec<Vertex> = st.map.iter().map(|&v| mc.map[v]).collect();
            let p = Placement::along(&f.host, &target.host, map)?;
            if images.insert(p.image.clone()) {
                copies.push(p);
            }
        }
    }
    let output = FlavoredSystem { pattern: f.clone(), target, copies };
    Ok(ExtRun { assimilated: fhat, wagon, wagon_system, blown_up, standard, wagon_hypergraph, inner, output })
}
