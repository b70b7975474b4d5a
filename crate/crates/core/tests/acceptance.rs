//! Acceptance checks 1 to 11. Prints one line per criterion and exits non-zero
//! if any fails. Criterion 12 lives in the cli crate.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use girthkit::construct::{
    amalgamate, amalgamation_violations, constituent, hj, picture_violations, picture_zero, Picture,
};
use girthkit::oracle::product_ramsey_system;
use girthkit::{
    edge_arrows, forest_extension, frak_girth_seq_exceeds, frak_girth_seq_system_exceeds, frak_girth_system_exceeds,
    girth_exceeds, girth_of_system_exceeds, has_clean_intersections, is_a_intersecting, is_forest,
    is_strongly_induced, min_hj_exponent, min_product_ramsey, semitidy_equivalence_check, validate_train, verify_revision,
    Budget, Budgets, CopySystem, Ctx, Error, Flavor, FlavoredSystem, GirthSequence, Handle, Hypergraph, Partite,
    Partition, Pretrain, PretrainCopySystem, Quasitrain, Result, SearchOptions, Structure, Threshold, Train,
};
use girthkit::train::QuasitrainCopySystem;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;

/// Node budget of a single Girth or wagon-Girth decision.
const CHECK_BUDGET: u64 = 1 << 22;
/// Colouring nodes allowed for the toy partite construction.
const CPL_BUDGET: u64 = 1 << 24;
const RAMSEY_TIME_LIMIT: Duration = Duration::from_secs(60);
/// HJ lemmas are used while the amalgamated picture stays below this many vertices.
const PICTURE_LIMIT: usize = 600;
const AMALGAMATIONS: usize = 100;

type Outcome = std::result::Result<String, String>;

fn budget() -> Budget {
    Budget::new(CHECK_BUDGET)
}

fn det() -> SearchOptions {
    SearchOptions { parallel: true, deterministic: true }
}

fn holds(r: Result<bool>) -> Option<bool> {
    r.ok()
}

fn girth(sys: &CopySystem, t: Threshold) -> Option<bool> {
    holds(girth_of_system_exceeds(&sys.clone().extend(), t, &budget()).map(|r| r.holds))
}

fn ensure(ok: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------

fn girth_bridge() -> Outcome {
    let mut cases = 0;
    for seed in 0..100 {
        let h = random_linear(&mut rng(seed));
        let sys = CopySystem::new(h.clone(), vec![], true).map_err(err)?;
        for g in 2..=4 {
            let big = girth_of_system_exceeds(&sys, Threshold::Pair(g, g), &budget()).map_err(err)?.holds;
            let small = girth_exceeds(&h, g);
            ensure(big == small, format!("seed {seed}, g = {g}: Girth says {big}, girth says {small}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases agree"))
}

fn corpus() -> Vec<CopySystem> {
    (0..50).map(|i| random_system(&mut rng(1000 + i), 4)).collect()
}

fn wagon_bridge() -> Outcome {
    let mut cases = 0;
    for (i, sys) in corpus().iter().enumerate() {
        let ps = PretrainCopySystem::new(Pretrain::singletons(sys.host().clone()), sys.copies().to_vec(), true)
            .map_err(err)?;
        for g in 2..=3 {
            let frak = frak_girth_system_exceeds(&ps, g, &budget()).map_err(err)?.holds;
            let plain = girth_of_system_exceeds(sys, Threshold::Order(g), &budget()).map_err(err)?.holds;
            ensure(frak == plain, format!("system {i}, g = {g}: wagon Girth {frak}, Girth {plain}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases agree"))
}

fn semitidy() -> Outcome {
    let mut cases = 0;
    for (i, sys) in corpus().iter().enumerate() {
        for g in 2..=3 {
            let r = semitidy_equivalence_check(sys, g, &budget()).map_err(err)?;
            ensure(r.agree, format!("system {i}, g = {g}: tidy {} vs semitidy {}", r.tidy.holds, r.semitidy.holds))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, 0 discrepancies"))
}

fn forests() -> Outcome {
    let mut yes = 0;
    for seed in 0..500 {
        let mut r = rng(2000 + seed);
        let h = random_linear(&mut r);
        let copies = random_copies(&mut r, &h, 6);
        let dp = is_forest(&h, &copies).map_err(err)?.is_some();
        ensure(dp == brute_force_forest(&h, &copies), format!("seed {seed}: subset DP says {dp}"))?;
        yes += dp as usize;
    }
    let (h, copies) = figure_eleven();
    ensure(is_forest(&h, &copies).map_err(err)?.is_some(), "triangle with its three neighbours is not a forest")?;
    ensure(is_forest(&h, &copies[1..]).map_err(err)?.is_none(), "the three outer triangles form a forest")?;
    let (h, ring, fan) = pentagon();
    ensure(is_forest(&h, &ring).map_err(err)?.is_none(), "the pentagon ring is a forest")?;
    let mut candidates = fan.clone();
    candidates.extend(ring.iter().cloned());
    let ext = forest_extension(&h, &ring, &candidates, 2, 10, &Budget::unlimited()).map_err(err)?;
    let added = ext.map(|e| e.added.len());
    ensure(added == Some(3), format!("pentagon needs {added:?} extra copies, expected 3"))?;
    let tight = forest_extension(&h, &ring, &candidates, 3, 10, &Budget::unlimited()).map_err(err)?;
    ensure(tight.is_none(), "pentagon extends with a single copy")?;
    Ok(format!("500 random families ({yes} forests), figure and pentagon as expected"))
}

fn forest_shortcut() -> Outcome {
    let mut filtered = 0;
    let mut undecided = 0;
    for i in 0..200 {
        let sys = random_system(&mut rng(5000 + i), 6);
        let n = sys.copies().len();
        match girth_of_system_exceeds(&sys, Threshold::Order(n), &budget()) {
            Ok(r) if r.holds => {
                filtered += 1;
                let f = is_forest(sys.host(), sys.copies()).map_err(err)?;
                ensure(f.is_some(), format!("system {i} has Girth > {n} but is not a forest"))?;
            }
            Ok(_) => {}
            Err(Error::BudgetExceeded(_)) => undecided += 1,
            Err(e) => return Err(err(e)),
        }
    }
    Ok(format!("{filtered} of 200 systems pass the filter, all forests ({undecided} undecided)"))
}

fn hales_jewett() -> Outcome {
    let n = min_hj_exponent(2, 2, 4, &Budget::new(CHECK_BUDGET), det()).map_err(err)?;
    ensure(n == 2, format!("least HJ exponent {n}"))?;
    let f = matching(2, 2);
    let out = hj(&Structure::plain(f.clone()), 2, None, &Ctx::default()).map_err(err)?;
    let h = &out.target.host;
    ensure(h.m() == 4, format!("HJ host has {} edges", h.m()))?;
    ensure(h.is_linear(), "HJ host is not linear")?;
    for c in &out.copies {
        ensure(is_strongly_induced(&c.image, h).map_err(err)?, "an HJ copy is not strongly induced")?;
    }
    let sys = out.copy_system().map_err(err)?;
    ensure(edge_arrows(&sys, 2, &budget(), det()).map_err(err)?.arrows, "oracle finds a good colouring")?;
    for colouring in 0u32..1 << h.m() {
        let colour = |e: usize| (colouring >> e) & 1;
        let mono = sys.copies().iter().any(|c| c.edges.iter().all(|&e| colour(e) == colour(c.edges[0])));
        ensure(mono, format!("colouring {colouring:04b} leaves every copy multicoloured"))?;
    }
    let p = Pretrain::from_labels(f, &[0, 1]).map_err(err)?;
    let out = hj(&Structure::from_pretrain(&p), 2, None, &Ctx::default()).map_err(err)?;
    let v = out.violations();
    ensure(v.is_empty(), format!("pretrain HJ copy fails: {}", v.join("; ")))?;
    for c in &out.copies {
        let induced = out.target.host.induced(&c.image.vertices);
        ensure(induced == c.image, "a pretrain HJ copy is not induced")?;
    }
    Ok(format!("exponent 2, 4 edges, all 16 colourings arrow, {} pretrain copies induced", out.copies.len()))
}

fn ramsey() -> Outcome {
    let start = Instant::now();
    let n = min_product_ramsey(&[2], 3, 2, 8, &Budget::new(CHECK_BUDGET), det()).map_err(err)?;
    ensure(n == 6, format!("least clique size {n}"))?;
    let k5 = product_ramsey_system(&[2], 3, 5).map_err(err)?;
    let r = edge_arrows(&k5, 2, &Budget::new(CHECK_BUDGET), det()).map_err(err)?;
    let colouring = match r.witness {
        Some(w) if !r.arrows => w,
        _ => return Err("K5 arrows the triangle".into()),
    };
    for c in k5.copies() {
        let colours: Vec<usize> = c.edges.iter().map(|&e| colouring[e]).collect();
        ensure(colours.iter().any(|&x| x != colours[0]), "witness colouring has a monochromatic triangle")?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < RAMSEY_TIME_LIMIT, format!("took {elapsed:?}"))?;
    let shown: Vec<String> = k5.host().edges().iter().zip(&colouring).map(|(e, c)| format!("{}{}:{c}", e[0], e[1])).collect();
    Ok(format!("R(3,3) = 6 in {:.2?}; K5 colouring {}", elapsed, shown.join(" ")))
}

fn toy_cpl() -> Outcome {
    let ctx = Ctx { search: det(), ..Ctx::new(Budgets { nodes: CPL_BUDGET, ..Budgets::default() }) };
    let recipe = Handle::pc(Handle::hj(), Handle::hj());
    let out = recipe.apply(&Structure::plain(matching(2, 2)), 2, &ctx).map_err(|e| format!("{recipe} on the matching: {e}"))?;
    let sys = out.copy_system().map_err(err)?;
    ensure(has_clean_intersections(&sys).0, "intersections are not clean")?;
    ensure(sys.host().is_linear(), "host is not linear")?;
    ensure(girth(&sys, Threshold::Pair(2, 2)) == Some(true), "Girth > (2,2) not confirmed")?;
    ensure(edge_arrows(&sys, 2, &Budget::new(CPL_BUDGET), det()).map_err(err)?.arrows, "output does not arrow")?;
    Ok(format!("{} vertices, {} edges, {} copies", sys.host().n(), sys.host().m(), sys.copies().len()))
}

fn omega_two() -> Outcome {
    let plain = single_edge();
    let partite = plain.clone().with_partite(Partite::uniform(2, vec![0, 1])).map_err(err)?;
    let mut lines = Vec::new();
    for f in [plain, partite] {
        let out = Handle::omega2().apply(&Structure::plain(f.clone()), 2, &Ctx::default()).map_err(err)?;
        let sys = out.copy_system().map_err(err)?;
        let h = sys.host();
        ensure(girth(&sys, Threshold::Order(2)) == Some(true), "Girth > 2 not confirmed")?;
        for c in sys.copies() {
            ensure(is_strongly_induced(c, h).map_err(err)?, "a copy is not strongly induced")?;
        }
        ensure(has_clean_intersections(&sys).0, "intersections are not clean")?;
        if f.partite().is_some() {
            for a in [vec![0, 1], vec![]] {
                if is_a_intersecting(&f, &a).map_err(err)? {
                    ensure(is_a_intersecting(h, &a).map_err(err)?, format!("output is not {a:?}-intersecting"))?;
                }
            }
        }
        lines.push(format!("{}v/{}e/{}c", h.n(), h.m(), sys.copies().len()));
    }
    Ok(format!("plain {}, partite {}", lines[0], lines[1]))
}

// ---------------------------------------------------------------------------
// amalgamations

#[derive(Default)]
struct Tally {
    amalgamations: usize,
    nontrivial: usize,
    skipped: usize,
    confirmed: usize,
    unmet: usize,
    undecided: usize,
}

impl Tally {
    /// Asserts `conclusion` once every hypothesis is confirmed.
    fn lemma(&mut self, hypotheses: &[&dyn Fn() -> Option<bool>], conclusion: impl FnOnce() -> Option<bool>, name: &str) -> std::result::Result<(), String> {
        if !hypotheses.iter().all(|h| h() == Some(true)) {
            self.unmet += 1;
            return Ok(());
        }
        match conclusion() {
            Some(true) => self.confirmed += 1,
            Some(false) => return Err(format!("{name}: hypotheses hold, conclusion fails")),
            None => self.undecided += 1,
        }
        Ok(())
    }
}

fn wagon_girth(sys: &FlavoredSystem, level: usize, g: usize) -> Option<bool> {
    let ps = sys.pretrain_system(level).ok()?.extend();
    holds(frak_girth_system_exceeds(&ps, g, &budget()).map(|r| r.holds))
}

fn seq_girth(sys: &FlavoredSystem, g: usize) -> Option<bool> {
    let q = sys.target.quasitrain().ok()?;
    let seq = GirthSequence::power(g, q.height()).ok()?;
    let qs = QuasitrainCopySystem::new(q, sys.copies.iter().map(|c| c.image.clone()).collect(), true).ok()?;
    holds(frak_girth_seq_system_exceeds(&qs, &seq, 1, &budget()).map(|r| r.holds))
}

fn plain_girth(sys: &FlavoredSystem, t: Threshold) -> Option<bool> {
    girth(&sys.copy_system().ok()?, t)
}

fn vertical_strongly_induced(pic: &Picture) -> Option<bool> {
    let g = &pic.vertical.target.host;
    pic.vertical.copies.iter().map(|c| is_strongly_induced(&c.image, g).ok()).collect::<Option<Vec<bool>>>().map(|v| v.iter().all(|&b| b))
}

fn check_lemmas(t: &mut Tally, before: &Picture, after: &Picture, lemma: &FlavoredSystem) -> std::result::Result<(), String> {
    let (pi, sigma) = (before.system(), after.system());
    let lemma_host = &lemma.target.host;
    let g_linear = || Some(before.vertical.target.host.is_linear());
    let g_strong = || vertical_strongly_induced(before);
    match before.structure.flavor {
        Flavor::Plain => {
            for g in 2..=3 {
                let h_ok = || Some(lemma_host.is_linear() && lemma_host.partite().is_some());
                let pi_ok = || plain_girth(&pi, Threshold::Order(g));
                let h_girth = || plain_girth(lemma, Threshold::Pair(g, g));
                t.lemma(&[&h_ok, &pi_ok, &h_girth], || plain_girth(&sigma, Threshold::Order(g)), "order Girth amalgamation")?;
            }
            let g = 3;
            let pi_ok = || plain_girth(&pi, Threshold::Pair(g, g));
            let h_small = || Some(girth_exceeds(lemma_host, g));
            let h_girth = || plain_girth(lemma, Threshold::Order(g - 1));
            t.lemma(&[&g_linear, &g_strong, &pi_ok, &h_small, &h_girth], || plain_girth(&sigma, Threshold::Pair(g, g)), "pair Girth amalgamation")?;
        }
        Flavor::Pretrain => {
            for g in 2..=3 {
                let pi_ok = || wagon_girth(&pi, 0, g);
                let h_ok = || wagon_girth(lemma, 0, g);
                t.lemma(&[&g_linear, &g_strong, &pi_ok, &h_ok], || wagon_girth(&sigma, 0, g), "wagon Girth amalgamation")?;
            }
        }
        Flavor::Train | Flavor::Quasitrain => {
            let m = lemma.target.relations.len().saturating_sub(1);
            let levels = || Some((1..=m).all(|mu| wagon_girth(lemma, mu, 1) == Some(true)));
            let is_train_picture = || Some(picture_violations(after).is_empty() && after.structure.validate().is_ok());
            t.lemma(&[&levels], is_train_picture, "train parameter amalgamation")?;
            for g in 2..=3 {
                let pi_ok = || Some(picture_violations(before).is_empty()).filter(|&b| b).and_then(|_| seq_girth(&pi, g));
                let h_ok = || seq_girth(lemma, g);
                t.lemma(&[&g_strong, &pi_ok, &h_ok], || seq_girth(&sigma, g), "train sequence amalgamation")?;
            }
        }
    }
    Ok(())
}

fn verticals() -> std::result::Result<Vec<(String, FlavoredSystem)>, String> {
    let ctx = Ctx::default();
    let m = matching(2, 2);
    let hj_vertical = |f: &Hypergraph, n: usize| hj(&Structure::plain(f.clone()), 2, Some(n), &ctx).map_err(err);
    let two_wagons = Pretrain::from_labels(m.clone(), &[0, 1]).map_err(err)?;
    let one_wagon = Pretrain::single_wagon(m.clone());
    let low = Train::new(Quasitrain::associated(m.clone()), vec![vec![0]]).map_err(err)?;
    let chain = vec![Partition::discrete(2), Partition::from_labels(&[0, 1]), Partition::single(2)];
    let tall = Train::new(Quasitrain::new(m.clone(), chain).map_err(err)?, vec![vec![], vec![1]]).map_err(err)?;
    let with = |pattern: Structure, v: FlavoredSystem| FlavoredSystem { pattern, ..v };
    Ok(vec![
        ("K3 in K4".into(), induced_system(&clique(3), &clique(4))),
        ("K3 in K5".into(), induced_system(&clique(3), &clique(5))),
        ("HJ matching".into(), hj_vertical(&m, 2)?),
        ("HJ matching, two wagons".into(), with(Structure::from_pretrain(&two_wagons), hj_vertical(&m, 2)?)),
        ("HJ matching, one wagon".into(), with(Structure::from_pretrain(&one_wagon), hj_vertical(&m, 2)?)),
        ("HJ matching, height-1 train".into(), with(Structure::from_train(&low), hj_vertical(&m, 2)?)),
        ("HJ matching, height-2 train".into(), with(Structure::from_train(&tall), hj_vertical(&m, 2)?)),
        ("HJ 3-matching, pretrain".into(), {
            let m3 = matching(3, 2);
            let p = Pretrain::from_labels(m3.clone(), &[0, 1]).map_err(err)?;
            with(Structure::from_pretrain(&p), hj_vertical(&m3, 2)?)
        }),
    ])
}

fn amalgamations() -> Outcome {
    let ctx = Ctx::default();
    let mut t = Tally::default();
    let verticals = verticals()?;
    // pass p visits the vertical edges starting at edge p
    'outer: for pass in 0.. {
        if pass > 8 {
            return Err(format!("only {} amalgamations generated", t.amalgamations));
        }
        for (name, vertical) in &verticals {
            let mut pic = picture_zero(vertical).map_err(|e| format!("{name}: {e}"))?;
            let v = picture_violations(&pic);
            ensure(v.is_empty(), format!("{name}: picture zero fails: {}", v.join("; ")))?;
            let edges = vertical.target.host.m();
            for step in 0..edges {
                if t.amalgamations == AMALGAMATIONS {
                    break 'outer;
                }
                let e = (pass + step) % edges;
                let cons = constituent(&pic, e).map_err(|x| format!("{name}, edge {e}: {x}"))?;
                let grown = hj(&cons.structure, 2, Some(2), &ctx).map_err(|x| format!("{name}, edge {e}: {x}"))?;
                let size = grown.target.host.n() + grown.copies.len() * (pic.host().n() - cons.structure.host.n());
                let lemma = if size <= PICTURE_LIMIT { grown } else { FlavoredSystem::trivial(&cons.structure) };
                let am = match amalgamate(&pic, e, &lemma, step + 1, &ctx) {
                    Ok(am) => am,
                    Err(Error::Precondition(_)) => {
                        t.skipped += 1;
                        continue;
                    }
                    Err(x) => return Err(format!("{name}, edge {e}: {x}")),
                };
                let v = amalgamation_violations(&pic, &am, &lemma);
                ensure(v.is_empty(), format!("{name}, edge {e}: {}", v.join("; ")))?;
                let v = picture_violations(&am.picture);
                ensure(v.is_empty(), format!("{name}, edge {e}: result is no picture: {}", v.join("; ")))?;
                check_lemmas(&mut t, &pic, &am.picture, &lemma).map_err(|x| format!("{name}, edge {e}, pass {pass}: {x}"))?;
                t.amalgamations += 1;
                t.nontrivial += (lemma.copies.len() > 1) as usize;
                pic = am.picture;
            }
        }
    }
    Ok(format!(
        "{} amalgamations valid ({} with several lemma copies, {} skipped); lemma conclusions confirmed {}, hypotheses unmet {}, undecided {}",
        t.amalgamations, t.nontrivial, t.skipped, t.confirmed, t.unmet, t.undecided
    ))
}

// ---------------------------------------------------------------------------
// trains

fn coarsen(r: &mut ChaCha8Rng, p: &Partition) -> Partition {
    let classes = p.num_classes();
    let target = r.gen_range(1..=classes);
    let map: Vec<usize> = (0..classes).map(|_| r.gen_range(0..target)).collect();
    Partition::from_labels(&p.labels().iter().map(|&c| map[c]).collect::<Vec<_>>())
}

fn random_chain(r: &mut ChaCha8Rng, edges: usize, height: usize) -> Vec<Partition> {
    let mut chain = vec![Partition::discrete(edges)];
    for _ in 1..height {
        let next = coarsen(r, chain.last().unwrap());
        chain.push(next);
    }
    chain.push(Partition::single(edges));
    chain
}

/// A random k-partite train whose parameter sets have at most one element,
/// on a host with a cycle when `cyclic` is set.
fn random_train(r: &mut ChaCha8Rng, cyclic: bool) -> Option<Train> {
    for _ in 0..5000 {
        let k = r.gen_range(2..=3);
        let (edges, pool) = (r.gen_range(2..=8), r.gen_range(2..=3));
        let h = random_partite(r, k, edges, pool);
        if cyclic && girthkit::girth(&h).is_none() {
            continue;
        }
        let height = r.gen_range(1..=3);
        let chain = random_chain(r, h.m(), height);
        // every parameter with sets of size at most one, in random order
        let mut options: Vec<Vec<Vec<usize>>> = vec![vec![]];
        for _ in 0..height {
            options = options
                .into_iter()
                .flat_map(|p| {
                    (0..=k).map(move |c| {
                        let mut p = p.clone();
                        p.push(if c == k { vec![] } else { vec![c] });
                        p
                    })
                })
                .collect();
        }
        options.shuffle(r);
        if let Some(parameter) = options.into_iter().find(|p| validate_train(&h, &chain, p).valid) {
            return Train::new(Quasitrain::new(h, chain).ok()?, parameter).ok();
        }
    }
    None
}

fn trains() -> Outcome {
    let (mut held, mut cyclic) = (0, 0);
    for i in 0..50 {
        let mut r = rng(7000 + i);
        let t = random_train(&mut r, i % 2 == 0).ok_or(format!("no random train for seed {i}"))?;
        cyclic += girthkit::girth(t.host()).is_some() as usize;
        for g in 2..=3 {
            let seq = GirthSequence::power(g, t.height()).map_err(err)?;
            if frak_girth_seq_exceeds(t.quasitrain(), &seq).map_err(err)?.holds {
                held += 1;
                ensure(girth_exceeds(t.host(), g + 1), format!("train {i}: sequence girth ({g})^m but girth at most {}", g + 1))?;
            }
        }
    }
    let g = 3;
    let mut revisions = 0;
    for i in 0..60 {
        let mut r = rng(8000 + i);
        let k = r.gen_range(2..=3);
        let f = matching(k, r.gen_range(1..=4));
        let height = r.gen_range(1..=3);
        let chain = random_chain(&mut r, f.m(), height);
        let mut parameter: Vec<Vec<usize>> =
            (0..height).map(|_| (0..k).filter(|_| r.gen_bool(0.5)).collect()).collect();
        let train = Train::new(Quasitrain::new(f, chain).map_err(err)?, parameter.clone()).map_err(err)?;
        let gs = GirthSequence::power(g, height - 1).map_err(err)?;
        parameter[0] = vec![];
        let trivial = Train::new(train.quasitrain().clone(), parameter.clone()).map_err(err)?;
        let rep = verify_revision(&train, &trivial, &[vec![]], g, &gs).map_err(err)?;
        ensure(rep.ok, format!("matching train {i}: trivial revision rejected: {}", rep.failures.join("; ")))?;
        let mut pair = [0, 1];
        pair.shuffle(&mut r);
        parameter[0] = pair.to_vec();
        let mutated = Train::new(train.quasitrain().clone(), parameter).map_err(err)?;
        let rep = verify_revision(&train, &mutated, &[pair.to_vec()], g, &gs).map_err(err)?;
        ensure(!rep.ok && rep.failures.iter().any(|s| s.contains("2 elements")), format!("matching train {i}: mutation accepted"))?;
        revisions += 1;
    }
    Ok(format!("girth lemma hypothesis met {held} times in 100 ({cyclic} of 50 hosts have a cycle), {revisions} revisions accepted, mutations rejected"))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Girth and girth agree", girth_bridge),
        ("wagon Girth with singleton wagons", wagon_bridge),
        ("tidy and semitidy Girth agree", semitidy),
        ("forest oracle", forests),
        ("Girth above the family size gives a forest", forest_shortcut),
        ("Hales-Jewett construction", hales_jewett),
        ("classical Ramsey number", ramsey),
        ("partite construction with HJ lemmas", toy_cpl),
        ("Omega two on a single edge", omega_two),
        ("amalgamations", amalgamations),
        ("trains and revisions", trains),
    ];
    // optional arguments pick criteria by number
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
