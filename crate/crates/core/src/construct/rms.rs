use crate::copy_system::CopySystem;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{enumerate_copies, CopyMode, Partite};
use crate::oracle::{complete_partite, edge_arrows};

use super::{Ctx, FlavoredSystem, Placement, Structure};

/// Least complete f-partite host whose not necessarily induced copies of `f`
/// arrow `f` with `r` colours. Relations of flavoured inputs are ignored; the
/// target is a plain hypergraph.
pub fn rms(f: &Structure, r: usize, ctx: &Ctx) -> Result<FlavoredSystem> {
    let pattern = &f.host;
    let k = match pattern.uniformity() {
        Some(k) if k > 0 => k,
        _ => return invalid("Rms needs a uniform hypergraph with nonempty edges"),
    };
    let (profile, classed) = match pattern.partite() {
        Some(p) => (p.f.clone(), pattern.clone()),
        None => (vec![k], pattern.clone().with_partite(Partite { f: vec![k], class: vec![0; pattern.n()] })?),
    };
    let start = (0..profile.len()).map(|c| classed.class_vertices(c).len()).max().unwrap_or(0).max(1);
    let start = start.max(profile.iter().copied().max().unwrap_or(1));
    let ordered = pattern.is_ordered();
    for size in start..=ctx.budgets.max_class_size {
        ctx.check_vertices(size * profile.len(), "Rms host")?;
        let host = complete_partite(&profile, size)?.with_order(ordered);
        let found = enumerate_copies(&host, &classed, CopyMode::FPartite, ordered)?;
        let copies: Vec<Placement> = found.into_iter().map(|e| Placement { map: e.map, image: e.image }).collect();
        if copies.is_empty() {
            continue;
        }
        let sys = CopySystem::new(host.clone(), copies.iter().map(|c| c.image.clone()).collect(), false)?;
        if edge_arrows(&sys, r, &ctx.nodes, ctx.search)?.arrows {
            let host = if pattern.partite().is_some() { host } else { host.without_partite() };
            return Ok(FlavoredSystem { pattern: f.clone(), target: Structure::plain(host), copies });
        }
    }
    Err(Error::BudgetExceeded(format!("no complete host with class size up to {}", ctx.budgets.max_class_size)))
}
