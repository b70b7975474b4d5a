use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Sub};

use super::picture::{amalgamate, constituent, order_lift, picture_zero, Picture};
use super::{Ctx, FlavoredSystem, Handle, Placement, Structure};

/// Sizes recorded for one amalgamation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcStep {
    pub edge: EdgeId,
    pub constituent_vertices: usize,
    pub constituent_edges: usize,
    pub lemma_vertices: usize,
    pub lemma_copies: usize,
    pub vertices: usize,
    pub edges: usize,
}

/// A partite construction run; on failure the pictures and steps reached so
/// far are kept alongside the error.
#[derive(Clone, Debug)]
pub struct PcRun {
    pub vertical: Option<FlavoredSystem>,
    /// Picture zero, then one picture per amalgamation, then the ordered lift if any.
    pub pictures: Vec<Picture>,
    pub trace: Vec<PcStep>,
    pub output: Option<FlavoredSystem>,
    pub error: Option<Error>,
}

impl PcRun {
    pub fn into_result(self) -> Result<FlavoredSystem> {
        match (self.output, self.error) {
            (Some(out), None) => Ok(out),
            (_, Some(e)) => Err(e),
            (None, None) => unreachable!("run finished without output"),
        }
    }
}

/// Keeps only the target edges lying in some copy.
fn covered_part(sys: &FlavoredSystem) -> FlavoredSystem {
    let h = &sys.target.host;
    let mut used = vec![false; h.m()];
    for c in &sys.copies {
        for &e in &c.image.edges {
            used[e] = true;
        }
    }
    if used.iter().all(|&u| u) {
        return sys.clone();
    }
    let kept: Vec<EdgeId> = (0..h.m()).filter(|&e| used[e]).collect();
    let mut new_id = vec![usize::MAX; h.m()];
    for (i, &e) in kept.iter().enumerate() {
        new_id[e] = i;
    }
    let (target, _) = sys.target.restrict(&Sub::new((0..h.n()).collect(), kept));
    let copies = sys
        .copies
        .iter()
        .map(|c| Placement { map: c.map.clone(), image: Sub::new(c.image.vertices.clone(), c.image.edges.iter().map(|&e| new_id[e]).collect()) })
        .collect();
    FlavoredSystem { pattern: sys.pattern.clone(), target, copies }
}

/// Runs `PC(vertical, lemma)` on `f` with `r` colours.
pub fn pc_run(vertical: &Handle, lemma: &Handle, f: &Structure, r: usize, ctx: &Ctx) -> PcRun {
    let mut run = PcRun { vertical: None, pictures: Vec::new(), trace: Vec::new(), output: None, error: None };
    if let Err(e) = pc_steps(vertical, lemma, f, r, ctx, &mut run) {
        run.error = Some(e);
    }
    run
}

fn pc_steps(vertical: &Handle, lemma: &Handle, f: &Structure, r: usize, ctx: &Ctx, run: &mut PcRun) -> Result<()> {
    let vsys = covered_part(&vertical.apply(f, r, ctx)?);
    run.vertical = Some(vsys.clone());
    let mut pic = picture_zero(&vsys)?;
    run.pictures.push(pic.clone());
    for e in 0..vsys.target.host.m() {
        let cons = constituent(&pic, e)?;
        let lsys = lemma.apply(&cons.structure, r, ctx)?;
        let am = amalgamate(&pic, e, &lsys, e + 1, ctx)?;
        pic = am.picture;
        run.trace.push(PcStep {
            edge: e,
            constituent_vertices: cons.structure.host.n(),
            constituent_edges: cons.structure.host.m(),
            lemma_vertices: lsys.target.host.n(),
            lemma_copies: lsys.copies.len(),
            vertices: pic.host().n(),
            edges: pic.host().m(),
        });
        run.pictures.push(pic.clone());
    }
    if vsys.target.host.is_ordered() {
        pic = order_lift(&pic)?;
        run.pictures.push(pic.clone());
    }
    run.output = Some(pic.system());
    Ok(())
}

pub fn pc(vertical: &Handle, lemma: &Handle, f: &Structure, r: usize, ctx: &Ctx) -> Result<FlavoredSystem> {
    pc_run(vertical, lemma, f, r, ctx).into_result()
}
