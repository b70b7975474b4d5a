use std::collections::HashMap;

use crate::error::{invalid, precondition, Result};
use crate::hypergraph::{EdgeId, Hypergraph, Partite, Sub, Vertex};
use crate::partition::{Partition, UnionFind};

use super::{placement_violations, Ctx, Flavor, FlavoredSystem, Placement, Structure};

/// A structure fibred over a vertical system by `psi`, with copies of the
/// vertical pattern that project onto vertical copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Picture {
    pub vertical: FlavoredSystem,
    pub structure: Structure,
    pub copies: Vec<Placement>,
    /// Index of the vertical copy each copy projects onto.
    pub copy_image: Vec<usize>,
    pub psi: Vec<Vertex>,
}

impl Picture {
    pub fn host(&self) -> &Hypergraph {
        &self.structure.host
    }

    /// Vertices over the vertical vertex `x`.
    pub fn music_line(&self, x: Vertex) -> Vec<Vertex> {
        (0..self.psi.len()).filter(|&v| self.psi[v] == x).collect()
    }

    pub fn system(&self) -> FlavoredSystem {
        FlavoredSystem { pattern: self.vertical.pattern.clone(), target: self.structure.clone(), copies: self.copies.clone() }
    }
}

fn lifted_partite(g: &Hypergraph, psi: &[Vertex]) -> Option<Partite> {
    g.partite().map(|p| Partite { f: p.f.clone(), class: psi.iter().map(|&x| p.class[x]).collect() })
}

/// One disjoint copy of the pattern per vertical copy. Vertex `v` of copy `j`
/// is named `0.c{j}.{v}`. Lower relation levels never join two copies.
pub fn picture_zero(vertical: &FlavoredSystem) -> Result<Picture> {
    let f = &vertical.pattern;
    let g = &vertical.target.host;
    let plain_f = Structure::plain(f.host.clone());
    let plain_g = Structure::plain(g.clone());
    for (j, c) in vertical.copies.iter().enumerate() {
        let bad = placement_violations(&plain_f, &plain_g, c);
        if !bad.is_empty() {
            return invalid(format!("vertical copy {j} is not a copy of the pattern: {}", bad[0]));
        }
    }
    let nf = f.host.n();
    let mut names = Vec::new();
    let mut psi = Vec::new();
    let mut edges = Vec::new();
    for (j, c) in vertical.copies.iter().enumerate() {
        for v in 0..nf {
            names.push(format!("0.c{j}.{v}"));
            psi.push(c.map[v]);
        }
        edges.extend(f.host.edges().iter().map(|e| e.iter().map(|&v| j * nf + v).collect::<Vec<_>>()));
    }
    let partite = lifted_partite(g, &psi);
    let host = Hypergraph::from_parts(names, edges, f.host.uniformity(), false, partite);
    let mut copies = Vec::new();
    for j in 0..vertical.copies.len() {
        copies.push(Placement::along(&f.host, &host, (j * nf..(j + 1) * nf).collect())?);
    }
    let top = f.relations.len().saturating_sub(1);
    let mut relations = Vec::with_capacity(f.relations.len());
    for (mu, rel) in f.relations.iter().enumerate() {
        let mut labels = vec![(0, 0); host.m()];
        for (j, c) in copies.iter().enumerate() {
            for e in 0..f.host.m() {
                let id = c.edge_image(&f.host, &host, e).unwrap();
                let joined = mu == top && f.flavor != Flavor::Pretrain;
                labels[id] = if joined { (0, 0) } else { (j, rel.class_of(e)) };
            }
        }
        relations.push(Partition::from_labels(&labels));
    }
    let structure = Structure { host, flavor: f.flavor, relations, parameter: f.parameter.clone() };
    let copy_image = (0..copies.len()).collect();
    Ok(Picture { vertical: vertical.clone(), structure, copies, copy_image, psi })
}

/// The part of a picture over one vertical edge, as a |e|-partite structure
/// whose class `j` lies over the `j`-th vertex of the edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub edge: EdgeId,
    pub structure: Structure,
    /// Constituent vertex -> picture vertex.
    pub vertices: Vec<Vertex>,
    /// Constituent edge -> picture edge.
    pub edges: Vec<EdgeId>,
}

pub fn constituent(pic: &Picture, e: EdgeId) -> Result<Constituent> {
    let g = &pic.vertical.target.host;
    if e >= g.m() {
        return invalid(format!("vertical edge {e} does not exist"));
    }
    let ev = g.edge(e);
    let position: HashMap<Vertex, usize> = ev.iter().enumerate().map(|(j, &x)| (x, j)).collect();
    let h = pic.host();
    let vertices: Vec<Vertex> = (0..h.n()).filter(|v| position.contains_key(&pic.psi[*v])).collect();
    let edges: Vec<EdgeId> = (0..h.m()).filter(|&f| h.edge(f).iter().all(|v| position.contains_key(&pic.psi[*v]))).collect();
    let sub = Sub::new(vertices, edges);
    let (mut s, map) = pic.structure.restrict(&sub);
    let class: Vec<usize> = map.iter().map(|v| position[&pic.psi[*v]]).collect();
    s.host = s.host.without_partite().with_order(false).with_partite(Partite::uniform(ev.len(), class))?;
    if s.flavor == Flavor::Train {
        let gp = match g.partite() {
            Some(p) => p,
            None => return invalid("train pictures need a partite vertical host"),
        };
        s.parameter = pic
            .structure
            .parameter
            .iter()
            .map(|a| (0..ev.len()).filter(|&j| a.contains(&gp.class[ev[j]])).collect())
            .collect();
    }
    Ok(Constituent { edge: e, structure: s, vertices: map, edges: sub.edges })
}

/// Result of one partite amalgamation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgamation {
    pub picture: Picture,
    pub edge: EdgeId,
    /// One standard copy of the old picture host per lemma copy.
    pub standard: Vec<Placement>,
    /// Lemma host edge -> edge of the new picture (its vertices keep their ids).
    pub lemma_edges: Vec<EdgeId>,
}

/// Amalgamates `lemma`, a partite system of copies of the constituent over `e`,
/// into the picture. Lemma vertices come first and are named `{step}.h{i}`;
/// the fresh vertices of standard copy `s` are named `{step}.c{s}.{v}`.
pub fn amalgamate(pic: &Picture, e: EdgeId, lemma: &FlavoredSystem, step: usize, ctx: &Ctx) -> Result<Amalgamation> {
    let cons = constituent(pic, e)?;
    let hs = &lemma.target;
    let hh = &hs.host;
    let k = pic.vertical.target.host.edge(e).len();
    match hh.partite() {
        Some(p) if p.index_count() == k => {}
        _ => return invalid(format!("lemma host is not {k}-partite")),
    }
    if hs.relations.len() != pic.structure.relations.len() {
        return invalid("lemma and picture have different flavours");
    }
    if matches!(pic.structure.flavor, Flavor::Quasitrain | Flavor::Train) && cons.structure.host.m() == 0 {
        return precondition(format!("constituent over edge {e} has no edges"));
    }
    for (s, c) in lemma.copies.iter().enumerate() {
        let bad = placement_violations(&cons.structure, hs, c);
        if !bad.is_empty() {
            return invalid(format!("lemma copy {s} is not a copy of the constituent: {}", bad[0]));
        }
    }
    let pi = &pic.structure.host;
    let ev = pic.vertical.target.host.edge(e).to_vec();
    let inside: HashMap<Vertex, usize> = cons.vertices.iter().enumerate().map(|(j, &v)| (v, j)).collect();
    let fresh_per_copy = pi.n() - cons.vertices.len();
    ctx.check_vertices(hh.n() + lemma.copies.len() * fresh_per_copy, "amalgamation")?;

    let hp = hh.partite().unwrap();
    let mut names: Vec<String> = (0..hh.n()).map(|i| format!("{step}.h{i}")).collect();
    let mut psi: Vec<Vertex> = (0..hh.n()).map(|i| ev[hp.class[i]]).collect();
    let mut maps = Vec::with_capacity(lemma.copies.len());
    for (s, c) in lemma.copies.iter().enumerate() {
        let mut map = vec![0; pi.n()];
        for v in 0..pi.n() {
            map[v] = match inside.get(&v) {
                Some(&j) => c.map[j],
                None => {
                    names.push(format!("{step}.c{s}.{v}"));
                    psi.push(pic.psi[v]);
                    names.len() - 1
                }
            };
        }
        maps.push(map);
    }
    let mut edges: Vec<Vec<Vertex>> = hh.edges().to_vec();
    for map in &maps {
        edges.extend(pi.edges().iter().map(|f| f.iter().map(|&v| map[v]).collect::<Vec<_>>()));
    }
    let partite = lifted_partite(&pic.vertical.target.host, &psi);
    let host = Hypergraph::from_parts(names, edges, pi.uniformity(), false, partite);
    let lemma_edges: Vec<EdgeId> = hh.edges().iter().map(|f| host.edge_id(f).unwrap()).collect();
    let mut standard = Vec::with_capacity(maps.len());
    for map in &maps {
        standard.push(Placement::along(pi, &host, map.clone())?);
    }
    let edge_maps: Vec<Vec<EdgeId>> =
        standard.iter().map(|st| (0..pi.m()).map(|f| st.edge_image(pi, &host, f).unwrap()).collect()).collect();
    let mut relations = Vec::with_capacity(hs.relations.len());
    for (mu, hrel) in hs.relations.iter().enumerate() {
        let mut uf = UnionFind::new(host.m());
        for block in hrel.blocks() {
            for w in block.windows(2) {
                uf.union(lemma_edges[w[0]], lemma_edges[w[1]]);
            }
        }
        let prel = &pic.structure.relations[mu];
        for em in &edge_maps {
            for block in prel.blocks() {
                for w in block.windows(2) {
                    uf.union(em[w[0]], em[w[1]]);
                }
            }
        }
        relations.push(uf.into_partition());
    }
    let mut copies = Vec::new();
    let mut copy_image = Vec::new();
    for st in &standard {
        for (i, c) in pic.copies.iter().enumerate() {
            copies.push(st.compose(c, &pic.vertical.pattern.host, &host)?);
            copy_image.push(pic.copy_image[i]);
        }
    }
    let structure = Structure { host, flavor: pic.structure.flavor, relations, parameter: pic.structure.parameter.clone() };
    let picture = Picture { vertical: pic.vertical.clone(), structure, copies, copy_image, psi };
    Ok(Amalgamation { picture, edge: e, standard, lemma_edges })
}

/// Picture invariants that fail.
pub fn picture_violations(pic: &Picture) -> Vec<String> {
    let mut out = Vec::new();
    let g = &pic.vertical.target.host;
    let h = pic.host();
    if pic.psi.len() != h.n() || pic.psi.iter().any(|&x| x >= g.n()) {
        return vec!["projection has the wrong shape".into()];
    }
    let projected: Vec<Option<EdgeId>> = (0..h.m())
        .map(|f| {
            let mut img: Vec<Vertex> = h.edge(f).iter().map(|&v| pic.psi[v]).collect();
            img.sort_unstable();
            img.dedup();
            if img.len() == h.edge(f).len() {
                g.edge_id(&img)
            } else {
                None
            }
        })
        .collect();
    if let Some(f) = projected.iter().position(|x| x.is_none()) {
        out.push(format!("edge {f} does not project onto a vertical edge"));
    }
    if pic.copy_image.len() != pic.copies.len() {
        out.push("copy projection list has the wrong length".into());
        return out;
    }
    for (i, c) in pic.copies.iter().enumerate() {
        for v in placement_violations(&pic.vertical.pattern, &pic.structure, c) {
            out.push(format!("copy {i}: {v}"));
        }
        if c.map.len() != pic.vertical.pattern.host.n() {
            continue;
        }
        if h.induced(&c.image.vertices).edges != c.image.edges {
            out.push(format!("copy {i} is not induced"));
        }
        match pic.vertical.copies.get(pic.copy_image[i]) {
            Some(vc) if c.map.iter().zip(&vc.map).all(|(&v, &x)| pic.psi[v] == x) => {}
            _ => out.push(format!("copy {i} does not project onto its vertical copy")),
        }
    }
    if let Err(e) = pic.structure.validate() {
        out.push(e.to_string());
    }
    let vrel = &pic.vertical.target.relations;
    if vrel.len() == pic.structure.relations.len() && !vrel.is_empty() && projected.iter().all(|x| x.is_some()) {
        for (mu, rel) in pic.structure.relations.iter().enumerate() {
            for block in rel.blocks() {
                let first = projected[block[0]].unwrap();
                if block.iter().any(|&f| !vrel[mu].same(first, projected[f].unwrap())) {
                    out.push(format!("level {mu}: equivalent edges project to inequivalent edges"));
                    break;
                }
            }
        }
    }
    out
}

/// True iff every lower-level wagon lies inside a single copy.
pub fn wagons_within_copies(pic: &Picture) -> bool {
    let levels = match pic.structure.flavor {
        Flavor::Plain => 0,
        Flavor::Pretrain => 1,
        _ => pic.structure.relations.len() - 1,
    };
    pic.structure.relations[..levels]
        .iter()
        .all(|rel| rel.blocks().iter().all(|b| pic.copies.iter().any(|c| b.iter().all(|e| c.image.contains_edge(*e)))))
}

/// Failures of the amalgamation properties: standard copies and the lemma host
/// are substructures, equivalences between parts bridge through shared lemma
/// edges, and the result is a picture.
pub fn amalgamation_violations(before: &Picture, am: &Amalgamation, lemma: &FlavoredSystem) -> Vec<String> {
    let mut out: Vec<String> = picture_violations(&am.picture).into_iter().map(|v| format!("(d) {v}")).collect();
    let sigma = &am.picture.structure;
    for (s, st) in am.standard.iter().enumerate() {
        for v in placement_violations(&before.structure, sigma, st) {
            out.push(format!("(a) standard copy {s}: {v}"));
        }
    }
    for (mu, hrel) in lemma.target.relations.iter().enumerate() {
        if sigma.relations[mu].restrict(&am.lemma_edges) != *hrel {
            out.push(format!("(b) level {mu}: lemma host is not a substructure"));
        }
    }
    let in_lemma: Vec<bool> = {
        let mut v = vec![false; sigma.host.m()];
        for &e in &am.lemma_edges {
            v[e] = true;
        }
        v
    };
    for (mu, rel) in sigma.relations.iter().enumerate() {
        for block in rel.blocks() {
            let has_lemma = block.iter().any(|&e| in_lemma[e]);
            let touching: Vec<usize> = (0..am.standard.len()).filter(|&s| block.iter().any(|&e| am.standard[s].image.contains_edge(e))).collect();
            let bridged = |s: usize| block.iter().any(|&e| in_lemma[e] && am.standard[s].image.contains_edge(e));
            for &s in &touching {
                if has_lemma && !bridged(s) {
                    out.push(format!("(c1) level {mu}: standard copy {s} meets a lemma class without a shared edge"));
                }
                if touching.len() >= 2 && !bridged(s) {
                    out.push(format!("(c2) level {mu}: standard copy {s} meets another copy's class without a shared edge"));
                }
            }
        }
    }
    out
}

/// Orders the picture host by the position of each vertex's projection, ties by
/// vertex id.
pub fn order_lift(pic: &Picture) -> Result<Picture> {
    if !pic.vertical.target.host.is_ordered() {
        return invalid("order lift needs an ordered vertical host");
    }
    let n = pic.host().n();
    let mut by_key: Vec<Vertex> = (0..n).collect();
    by_key.sort_by_key(|&v| (pic.psi[v], v));
    let mut perm = vec![0; n];
    for (new, &old) in by_key.iter().enumerate() {
        perm[old] = new;
    }
    let (mut structure, edge_map) = pic.structure.permuted(&perm);
    structure.host = structure.host.with_order(true);
    let copies = pic
        .copies
        .iter()
        .map(|c| Placement {
            map: c.map.iter().map(|&v| perm[v]).collect(),
            image: Sub::new(c.image.vertices.iter().map(|&v| perm[v]).collect(), c.image.edges.iter().map(|&e| edge_map[e]).collect()),
        })
        .collect();
    let mut psi = vec![0; n];
    for v in 0..n {
        psi[perm[v]] = pic.psi[v];
    }
    Ok(Picture { vertical: pic.vertical.clone(), structure, copies, copy_image: pic.copy_image.clone(), psi })
}
