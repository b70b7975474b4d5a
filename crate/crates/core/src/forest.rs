//! Forests of copies: admissible enumerations, terminal and initial copies,
//! forest extensions and partial F-forests.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{invalid, precondition, Error, Result};
use crate::hypergraph::{enumerate_copies, sorted_intersection, CopyMode, Hypergraph, Sub};

/// Largest family handled by the subset search.
pub const MAX_FOREST_COPIES: usize = 20;

fn check_size(k: usize) -> Result<()> {
    if k > MAX_FOREST_COPIES {
        return Err(Error::BudgetExceeded(format!("{k} copies exceed the forest search bound {MAX_FOREST_COPIES}")));
    }
    Ok(())
}

/// Copies as vertex and edge sets, with the step condition evaluated against a
/// predecessor set given as a bitmask.
struct Family<'a> {
    host: &'a Hypergraph,
    copies: &'a [Sub],
}

impl Family<'_> {
    fn union(&self, mask: u32) -> (Vec<usize>, Vec<usize>) {
        let (mut vs, mut es) = (Vec::new(), Vec::new());
        for (i, c) in self.copies.iter().enumerate() {
            if mask >> i & 1 == 1 {
                vs.extend_from_slice(&c.vertices);
                es.extend_from_slice(&c.edges);
            }
        }
        vs.sort_unstable();
        vs.dedup();
        es.sort_unstable();
        es.dedup();
        (vs, es)
    }

    /// May copy `j` follow the copies in `mask`?
    fn step_ok(&self, mask: u32, j: usize, cache: &mut HashMap<u32, (Vec<usize>, Vec<usize>)>) -> bool {
        if mask == 0 {
            return true;
        }
        let (vs, es) = cache.entry(mask).or_insert_with(|| self.union(mask));
        let c = &self.copies[j];
        let z = sorted_intersection(&c.vertices, vs);
        if z.len() <= 1 {
            return true;
        }
        match self.host.edge_id(&z) {
            Some(e) => c.contains_edge(e) && es.binary_search(&e).is_ok(),
            None => false,
        }
    }
}

/// True iff `order` is an admissible enumeration of `copies`.
pub fn is_admissible(host: &Hypergraph, copies: &[Sub], order: &[usize]) -> bool {
    let mut seen = vec![false; copies.len()];
    if order.len() != copies.len() || !order.iter().all(|&i| i < copies.len() && !std::mem::replace(&mut seen[i], true)) {
        return false;
    }
    let (mut vs, mut es): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
    for (step, &j) in order.iter().enumerate() {
        let c = &copies[j];
        if step > 0 {
            let z = sorted_intersection(&c.vertices, &vs);
            if z.len() > 1 {
                match host.edge_id(&z) {
                    Some(e) if c.contains_edge(e) && es.binary_search(&e).is_ok() => {}
                    _ => return false,
                }
            }
        }
        vs.extend_from_slice(&c.vertices);
        vs.sort_unstable();
        vs.dedup();
        es.extend_from_slice(&c.edges);
        es.sort_unstable();
        es.dedup();
    }
    true
}

/// Admissible prefix sets reachable from the prefixes in `starts`; `parent[m]`
/// is the copy added last on the way to `m`.
fn reachable(fam: &Family, starts: &[u32]) -> HashMap<u32, usize> {
    let k = fam.copies.len();
    let mut parent: HashMap<u32, usize> = HashMap::new();
    let mut cache = HashMap::new();
    let mut frontier: Vec<u32> = Vec::new();
    for &s in starts {
        if parent.insert(s, s.trailing_zeros() as usize).is_none() {
            frontier.push(s);
        }
    }
    while let Some(mask) = frontier.pop() {
        for j in 0..k {
            let next = mask | 1 << j;
            if next == mask || parent.contains_key(&next) {
                continue;
            }
            if fam.step_ok(mask, j, &mut cache) {
                parent.insert(next, j);
                frontier.push(next);
            }
        }
    }
    parent
}

fn unwind(parent: &HashMap<u32, usize>, mut mask: u32) -> Vec<usize> {
    let mut order = Vec::new();
    while mask != 0 {
        let j = parent[&mask];
        order.push(j);
        mask &= !(1 << j);
    }
    order.reverse();
    order
}

fn full(k: usize) -> u32 {
    if k == 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// An admissible enumeration of `copies` if they form a forest. The host must be linear.
pub fn is_forest(host: &Hypergraph, copies: &[Sub]) -> Result<Option<Vec<usize>>> {
    check_size(copies.len())?;
    if !host.is_linear() {
        return precondition("forests of copies need a linear host");
    }
    for c in copies {
        host.check_sub(c)?;
    }
    if copies.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let fam = Family { host, copies };
    let starts: Vec<u32> = (0..copies.len()).map(|i| 1 << i).collect();
    let parent = reachable(&fam, &starts);
    Ok(parent.contains_key(&full(copies.len())).then(|| unwind(&parent, full(copies.len()))))
}

/// Terminal copies and, per copy, whether it can start an admissible enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestShape {
    pub terminal: Vec<usize>,
    pub initial: Vec<bool>,
}

pub fn terminal_and_initial(host: &Hypergraph, copies: &[Sub]) -> Result<ForestShape> {
    if is_forest(host, copies)?.is_none() {
        return precondition("the copies do not form a forest");
    }
    let k = copies.len();
    let fam = Family { host, copies };
    let all = full(k);
    let starts: Vec<u32> = (0..k).map(|i| 1 << i).collect();
    let parent = reachable(&fam, &starts);
    let mut cache = HashMap::new();
    let terminal: Vec<usize> = (0..k)
        .filter(|&j| {
            let rest = all & !(1 << j);
            rest == 0 || (parent.contains_key(&rest) && fam.step_ok(rest, j, &mut cache))
        })
        .collect();
    let initial: Vec<bool> = (0..k).map(|i| reachable(&fam, &[1 << i]).contains_key(&all)).collect();
    debug_assert!(k < 2 || terminal.len() >= 2);
    Ok(ForestShape { terminal, initial })
}

/// Advances `pick` to the next increasing selection from `0..n`.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] != i + n - k {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Copies added to a family to make it a forest, with a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestExtension {
    /// Indices into the candidate list.
    pub added: Vec<usize>,
    /// Admissible enumeration of the family followed by the added copies,
    /// indices `0..n` for the family and `n + i` for `added[i]`.
    pub enumeration: Vec<usize>,
}

/// Least set of at most `(|family| - 2) / (g - 1)` candidates meeting the
/// family whose union with it is a forest. Candidates equal to a family member are skipped.
pub fn forest_extension(
    host: &Hypergraph,
    family: &[Sub],
    candidates: &[Sub],
    g: usize,
    cap: usize,
    budget: &Budget,
) -> Result<Option<ForestExtension>> {
    if family.len() < 2 || family.len() > cap {
        return invalid(format!("family size {} outside [2, {cap}]", family.len()));
    }
    if g < 2 {
        return invalid("girth parameter must be at least 2");
    }
    let bound = (family.len() - 2) / (g - 1);
    let mut touched: Vec<usize> = family.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    touched.sort_unstable();
    touched.dedup();
    let pool: Vec<usize> = (0..candidates.len())
        .filter(|&i| !family.contains(&candidates[i]) && !sorted_intersection(&candidates[i].vertices, &touched).is_empty())
        .collect();
    for size in 0..=bound.min(pool.len()) {
        check_size(family.len() + size)?;
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            budget.tick()?;
            let mut all: Vec<Sub> = family.to_vec();
            all.extend(pick.iter().map(|&p| candidates[pool[p]].clone()));
            if let Some(order) = is_forest(host, &all)? {
                let added = pick.iter().map(|&p| pool[p]).collect();
                return Ok(Some(ForestExtension { added, enumeration: order }));
            }
            if !next_combination(&mut pick, pool.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Outcome of the bounded partial-forest search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartialForest {
    /// Copies of the pattern in the host forming a forest whose union induces the set.
    Yes { copies: Vec<Sub>, enumeration: Vec<usize> },
    /// No forest of at most `cap` copies inside the host was found.
    Unknown { cap: usize },
}

/// Searches among copies of `f` in `h` meeting `x` for a forest of at most
/// `cap` copies whose union contains `x` and induces `h[x]` on it.
pub fn is_partial_forest(h: &Hypergraph, x: &[usize], f: &Hypergraph, cap: usize, budget: &Budget) -> Result<PartialForest> {
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    if x.iter().any(|&v| v >= h.n()) {
        return invalid("vertex set is not inside the host");
    }
    if x.is_empty() {
        return Ok(PartialForest::Yes { copies: Vec::new(), enumeration: Vec::new() });
    }
    let target = h.induced(&x).edges;
    let pool: Vec<Sub> = enumerate_copies(h, f, CopyMode::Induced, false)?
        .into_iter()
        .map(|e| e.image)
        .filter(|s| !sorted_intersection(&s.vertices, &x).is_empty())
        .collect();
    for size in 1..=cap.min(pool.len()).min(MAX_FOREST_COPIES) {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            budget.tick()?;
            let chosen: Vec<Sub> = pick.iter().map(|&p| pool[p].clone()).collect();
            let mut vs: Vec<usize> = chosen.iter().flat_map(|c| c.vertices.iter().copied()).collect();
            let mut es: Vec<usize> = chosen.iter().flat_map(|c| c.edges.iter().copied()).collect();
            vs.sort_unstable();
            vs.dedup();
            es.sort_unstable();
            es.dedup();
            let covers = sorted_intersection(&x, &vs).len() == x.len();
            let induced = covers && target.iter().all(|e| es.binary_search(e).is_ok());
            if induced {
                if let Some(order) = is_forest(h, &chosen)? {
                    return Ok(PartialForest::Yes { copies: chosen, enumeration: order });
                }
            }
            if !next_combination(&mut pick, pool.len()) {
                break;
            }
        }
    }
    Ok(PartialForest::Unknown { cap })
}
