//! Exhaustive colouring searches: edge and vertex arrowing, Hales-Jewett
//! exponents and product Ramsey numbers.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::copy_system::CopySystem;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Hypergraph, Partite, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Split the colouring tree at the root across threads.
    pub parallel: bool,
    /// With `parallel`, return the same witness as the sequential search.
    pub deterministic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowReport {
    pub arrows: bool,
    /// A colour per item (edge or vertex id) with no monochromatic copy.
    pub witness: Option<Vec<usize>>,
    pub explored: u64,
}

/// Items `0..n`, colour classes `0..r`, and the sets that must not all be
/// monochromatic. Items are tried in descending membership count, ties by id; the
/// witness is the least failing colouring in that item order.
struct ColouringSearch<'a> {
    sets: &'a [Vec<usize>],
    member_of: Vec<Vec<usize>>,
    order: Vec<usize>,
    r: usize,
}

struct State {
    // -1 untouched, -2 bichromatic, else the common colour
    status: Vec<i64>,
    coloured: Vec<usize>,
    alive: usize,
    colour: Vec<usize>,
}

impl<'a> ColouringSearch<'a> {
    fn new(n: usize, sets: &'a [Vec<usize>], r: usize) -> Self {
        let mut member_of = vec![Vec::new(); n];
        for (s, items) in sets.iter().enumerate() {
            for &i in items {
                member_of[i].push(s);
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(member_of[i].len()), i));
        ColouringSearch { sets, member_of, order, r }
    }

    fn fresh(&self) -> State {
        State {
            status: vec![-1; self.sets.len()],
            coloured: vec![0; self.sets.len()],
            alive: self.sets.len(),
            colour: vec![0; self.member_of.len()],
        }
    }

    /// Colours `item`; false if this completes a monochromatic set.
    fn assign(&self, st: &mut State, item: usize, c: usize, undo: &mut Vec<(usize, i64)>) -> bool {
        st.colour[item] = c;
        let mut ok = true;
        for &s in &self.member_of[item] {
            undo.push((s, st.status[s]));
            st.coloured[s] += 1;
            match st.status[s] {
                -1 => st.status[s] = c as i64,
                -2 => {}
                x if x == c as i64 => {}
                _ => {
                    st.status[s] = -2;
                    st.alive -= 1;
                }
            }
            if st.status[s] >= 0 && st.coloured[s] == self.sets[s].len() {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&self, st: &mut State, item: usize, undo: &mut Vec<(usize, i64)>) {
        for _ in 0..self.member_of[item].len() {
            let (s, prev) = undo.pop().unwrap();
            st.coloured[s] -= 1;
            if st.status[s] == -2 && prev != -2 {
                st.alive += 1;
            }
            st.status[s] = prev;
        }
        st.colour[item] = 0;
    }

    /// Depth-first from position `pos`; true once a failing colouring sits in `st.colour`.
    fn dfs(&self, st: &mut State, pos: usize, budget: &Budget, stop: Option<&AtomicBool>) -> Result<bool> {
        budget.tick()?;
        if st.alive == 0 {
            for &i in &self.order[pos..] {
                st.colour[i] = 0;
            }
            return Ok(true);
        }
        if pos == self.order.len() {
            return Ok(false);
        }
        if stop.is_some_and(|f| f.load(Ordering::Relaxed)) {
            return Err(Error::BudgetExceeded("cancelled".into()));
        }
        let item = self.order[pos];
        let mut undo = Vec::new();
        for c in 0..self.r {
            let ok = self.assign(st, item, c, &mut undo);
            if ok && self.dfs(st, pos + 1, budget, stop)? {
                return Ok(true);
            }
            self.unassign(st, item, &mut undo);
        }
        Ok(false)
    }

    fn run(&self, budget: &Budget, opts: SearchOptions) -> Result<Option<Vec<usize>>> {
        if self.sets.iter().any(|s| s.is_empty()) {
            return Ok(None);
        }
        if !opts.parallel || self.order.is_empty() || self.r < 2 {
            let mut st = self.fresh();
            return Ok(if self.dfs(&mut st, 0, budget, None)? { Some(st.colour) } else { None });
        }
        let first = self.order[0];
        let found = AtomicBool::new(false);
        let flag = if opts.deterministic { None } else { Some(&found) };
        let branches: Vec<Result<Option<Vec<usize>>>> = (0..self.r)
            .into_par_iter()
            .map(|c| {
                let mut st = self.fresh();
                let mut undo = Vec::new();
                if !self.assign(&mut st, first, c, &mut undo) {
                    return Ok(None);
                }
                match self.dfs(&mut st, 1, budget, flag) {
                    Ok(true) => {
                        found.store(true, Ordering::Relaxed);
                        Ok(Some(st.colour))
                    }
                    Ok(false) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect();
        if let Some(w) = branches.iter().find_map(|b| b.as_ref().ok().and_then(|w| w.clone())) {
            return Ok(Some(w));
        }
        for b in branches {
            b?;
        }
        Ok(None)
    }
}

/// Arrowing over an arbitrary family: every `r`-colouring of `0..n` makes some set
/// of `sets` monochromatic.
pub fn family_arrows(n: usize, sets: &[Vec<usize>], r: usize, budget: &Budget, opts: SearchOptions) -> Result<ArrowReport> {
    if r == 0 {
        return invalid("at least one colour is needed");
    }
    if let Some(&i) = sets.iter().flatten().find(|&&i| i >= n) {
        return invalid(format!("item {i} out of range"));
    }
    let before = budget.used();
    let search = ColouringSearch::new(n, sets, r);
    let witness = search.run(budget, opts)?;
    Ok(ArrowReport { arrows: witness.is_none(), witness, explored: budget.used() - before })
}

fn copy_family(sys: &CopySystem, pick: impl Fn(&Sub) -> Vec<usize>) -> Vec<Vec<usize>> {
    sys.view().subs.iter().map(pick).collect()
}

/// Every `r`-colouring of the host edges leaves some copy monochromatic.
pub fn edge_arrows(sys: &CopySystem, r: usize, budget: &Budget, opts: SearchOptions) -> Result<ArrowReport> {
    let sets = copy_family(sys, |s| s.edges.clone());
    family_arrows(sys.host().m(), &sets, r, budget, opts)
}

/// Every `r`-colouring of the host vertices leaves some copy monochromatic.
pub fn vertex_arrows(sys: &CopySystem, r: usize, budget: &Budget, opts: SearchOptions) -> Result<ArrowReport> {
    let sets = copy_family(sys, |s| s.vertices.clone());
    family_arrows(sys.host().n(), &sets, r, budget, opts)
}

/// Combinatorial lines in `[alphabet]^n`, words encoded in base `alphabet`
/// with the first coordinate most significant.
pub fn combinatorial_lines(alphabet: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    // templates over alphabet + 1 symbols, the last one the wildcard
    let total = (alphabet + 1).pow(n as u32);
    let mut template = vec![0usize; n];
    for t in 0..total {
        let mut x = t;
        for slot in template.iter_mut().rev() {
            *slot = x % (alphabet + 1);
            x /= alphabet + 1;
        }
        if !template.contains(&alphabet) {
            continue;
        }
        let line = (0..alphabet)
            .map(|a| template.iter().fold(0, |w, &s| w * alphabet + if s == alphabet { a } else { s }))
            .collect();
        out.push(line);
    }
    out
}

/// Least `n <= cap` such that every `r`-colouring of `[alphabet]^n` has a
/// monochromatic combinatorial line.
pub fn min_hj_exponent(alphabet: usize, r: usize, cap: usize, budget: &Budget, opts: SearchOptions) -> Result<usize> {
    if alphabet == 0 {
        return invalid("the alphabet of edges is empty");
    }
    for n in 1..=cap {
        let words = alphabet.checked_pow(n as u32).ok_or_else(|| Error::BudgetExceeded("word count overflows".into()))?;
        let lines = combinatorial_lines(alphabet, n);
        if family_arrows(words, &lines, r, budget, opts)?.arrows {
            return Ok(n);
        }
    }
    Err(Error::BudgetExceeded(format!("no exponent up to {cap}")))
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Cartesian products of per-class choices, each flattened and sorted.
fn products(choices: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for opts in choices {
        acc = acc.iter().flat_map(|a| opts.iter().map(move |o| a.iter().chain(o).copied().collect())).collect();
    }
    for e in acc.iter_mut() {
        e.sort_unstable();
    }
    acc
}

/// The complete f-partite hypergraph with `size` vertices per class, vertices
/// numbered class by class.
pub fn complete_partite(f: &[usize], size: usize) -> Result<Hypergraph> {
    if f.is_empty() || f.iter().sum::<usize>() == 0 {
        return invalid("empty partite profile");
    }
    let classes: Vec<Vec<usize>> = (0..f.len()).map(|i| (i * size..(i + 1) * size).collect()).collect();
    let choices: Vec<Vec<Vec<usize>>> = f.iter().zip(&classes).map(|(&fi, c)| subsets(c, fi)).collect();
    let edges = products(&choices);
    let names = (0..f.len()).flat_map(|i| (0..size).map(move |j| format!("{i}.{j}"))).collect();
    let class = (0..f.len() * size).map(|v| v / size).collect();
    Hypergraph::new(names, edges, f.iter().sum())?.with_partite(Partite { f: f.to_vec(), class })
}

/// `K^f_size` with all its induced subhypergraphs `K^f_m` (one `m`-set per class).
pub fn product_ramsey_system(f: &[usize], m: usize, size: usize) -> Result<CopySystem> {
    if m > size {
        return invalid("copy class size exceeds host class size");
    }
    let h = complete_partite(f, size)?;
    let classes: Vec<Vec<usize>> = (0..f.len()).map(|i| (i * size..(i + 1) * size).collect()).collect();
    let choices: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| subsets(c, m)).collect();
    let copies = products(&choices).into_iter().map(|vs| h.induced(&vs)).collect();
    CopySystem::new(h, copies, false)
}

/// Least class size `M` in `m..=cap` with `K^f_M -> (K^f_m)_r`.
pub fn min_product_ramsey(f: &[usize], m: usize, r: usize, cap: usize, budget: &Budget, opts: SearchOptions) -> Result<usize> {
    if let Some(&fi) = f.iter().find(|&&fi| fi > m) {
        return invalid(format!("class size {m} is below the profile entry {fi}"));
    }
    for size in m..=cap {
        let sys = product_ramsey_system(f, m, size)?;
        if edge_arrows(&sys, r, budget, opts)?.arrows {
            return Ok(size);
        }
    }
    Err(Error::BudgetExceeded(format!("no class size up to {cap}")))
}

/// Clique system: `K^(k)_n` with all its `K^(k)_m`.
pub fn clique_system(k: usize, m: usize, n: usize) -> Result<CopySystem> {
    product_ramsey_system(&[k], m, n)
}
