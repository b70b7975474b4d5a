use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use girthkit::budget::DEFAULT_BUDGET;
use girthkit::construct::pc_run;
use girthkit::copy_system::has_clean_intersections;
use girthkit::io::{edge_names, Certificate, Outcome, RawCycle, System, Trace};
use girthkit::oracle::{combinatorial_lines, family_arrows, product_ramsey_system};
use girthkit::{
    edge_arrows, emit, export_dot, frak_girth_seq_system_exceeds, frak_girth_system_exceeds, girth_of_system_exceeds,
    is_forest, is_strongly_induced, min_hj_exponent, min_product_ramsey, parse, shortest_edge_cycle, Body, Budget,
    Budgets, Ctx, Document, Error, Flavor, GirthSequence, Handle, Hypergraph, Mode, SearchOptions, Threshold,
};

#[derive(Parser)]
#[command(name = "girthkit", version, about = "Girth-preserving Ramsey constructions and their checks")]
struct Cli {
    /// Witnesses independent of thread scheduling.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, env = "GIRTHKIT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Ignore unknown fields in input documents.
    #[arg(long, global = true)]
    lenient: bool,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a construction recipe, e.g. `hj`, `pc(rms,cpl)` or `ups(trivial)`.
    Construct {
        recipe: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        /// Directory for the step trace and intermediate pictures.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Decide a property of a hypergraph or copy system.
    Check {
        property: Property,
        #[arg(long)]
        input: PathBuf,
        /// `g`, `g,n`, or a girth sequence `g1,g2,...`.
        #[arg(long)]
        threshold: Option<String>,
        /// Relation level used as the wagon partition.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value_t = 2)]
        colors: usize,
    },
    /// Render a document as a Graphviz incidence graph.
    Export {
        format: ExportFormat,
        #[arg(long)]
        input: PathBuf,
    },
    /// Exhaustive Ramsey oracles with a certificate.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    /// Hypergraph girth.
    #[value(name = "girth")]
    Girth,
    /// Girth of a copy system.
    #[value(name = "Girth")]
    SystemGirth,
    /// Wagon girth of a pretrain or train system.
    #[value(name = "fGirth")]
    WagonGirth,
    #[value(name = "forest")]
    Forest,
    #[value(name = "clean")]
    Clean,
    #[value(name = "strind")]
    StronglyInduced,
    #[value(name = "arrow")]
    Arrow,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Least n with every colouring of [alphabet]^n having a monochromatic line.
    HjExponent {
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
    /// Least class size M with K^f_M arrowing K^f_m.
    Ramsey {
        /// Partite profile f, comma separated; `2` is the graph case.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        profile: Vec<usize>,
        /// Class size m of the copies.
        #[arg(long)]
        clique: usize,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
}

/// Outcome of a command: what to write and the exit status.
struct Done {
    text: String,
    outcome: Outcome,
}

fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Holds => 0,
        Outcome::Fails => 1,
        Outcome::BudgetExceeded => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    match result {
        Ok(done) => {
            if let Err(e) = write_out(cli.output.as_deref(), &done.text) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(exit_code(done.outcome))
        }
        Err(Error::BudgetExceeded(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn io_error(e: std::io::Error, path: &Path) -> Error {
    Error::InvalidArgument(format!("{}: {e}", path.display()))
}

fn load(path: &Path, lenient: bool) -> Result<Document, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(e, path))?;
    parse(&text, if lenient { Mode::Lenient } else { Mode::Strict })
}

fn search(cli: &Cli) -> SearchOptions {
    SearchOptions { parallel: true, deterministic: cli.deterministic }
}

fn run(cli: &Cli) -> Result<Done, Error> {
    match &cli.command {
        Command::Construct { recipe, input, colors, trace } => construct(cli, recipe, input, *colors, trace.as_deref()),
        Command::Check { property, input, threshold, level, colors } => {
            let doc = load(input, cli.lenient)?;
            let cert = check(cli, *property, &doc, threshold.as_deref(), *level, *colors)?;
            let outcome = cert.outcome;
            Ok(Done { text: emit(&Document::new(Body::Certificate(cert))), outcome })
        }
        Command::Export { format: ExportFormat::Dot, input } => {
            let doc = load(input, cli.lenient)?;
            Ok(Done { text: export_dot(&doc)?, outcome: Outcome::Holds })
        }
        Command::Oracle(o) => {
            let cert = oracle(cli, o)?;
            let outcome = cert.outcome;
            Ok(Done { text: emit(&Document::new(Body::Certificate(cert))), outcome })
        }
    }
}

fn construct(cli: &Cli, recipe: &str, input: &Path, colors: usize, trace: Option<&Path>) -> Result<Done, Error> {
    let handle: Handle = recipe.parse()?;
    let f = load(input, cli.lenient)?.to_structure()?;
    let mut ctx = Ctx::new(Budgets { nodes: cli.budget, ..Budgets::default() });
    ctx.search = search(cli);
    let (result, steps, pictures) = match &handle {
        Handle::Pc(v, l) => {
            let run = pc_run(v, l, &f, colors, &ctx);
            let pictures = run.pictures.clone();
            let steps = run.trace.clone();
            (run.into_result(), steps, pictures)
        }
        h => (h.apply(&f, colors, &ctx), Vec::new(), Vec::new()),
    };
    if let Some(dir) = trace {
        std::fs::create_dir_all(dir).map_err(|e| io_error(e, dir))?;
        let t = Trace { recipe: handle.clone(), colors, steps, error: result.as_ref().err().map(|e| e.to_string()) };
        let path = dir.join("trace.json");
        std::fs::write(&path, emit(&Document::new(Body::Trace(t)))).map_err(|e| io_error(e, &path))?;
        for (i, pic) in pictures.iter().enumerate() {
            let path = dir.join(format!("picture-{i}.json"));
            std::fs::write(&path, emit(&Document::picture(pic))).map_err(|e| io_error(e, &path))?;
        }
    }
    let out = result?;
    Ok(Done { text: emit(&Document::system(&out)), outcome: Outcome::Holds })
}

fn certificate(check: &str, holds: bool, detail: Value) -> Certificate {
    Certificate { check: check.to_string(), outcome: if holds { Outcome::Holds } else { Outcome::Fails }, detail }
}

fn system_of(doc: &Document) -> Result<System, Error> {
    match &doc.body {
        Body::CopySystem(_) => doc.to_system(),
        _ => Err(Error::InvalidArgument(format!("expected a copy-system document, found {}", doc.body.kind()))),
    }
}

fn host_of(doc: &Document) -> Result<Hypergraph, Error> {
    match &doc.body {
        Body::CopySystem(_) => Ok(doc.to_system()?.target.host),
        _ => Ok(doc.to_structure()?.host),
    }
}

fn numbers(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad threshold {text:?}"))))
        .collect()
}

fn required(threshold: Option<&str>) -> Result<Vec<usize>, Error> {
    numbers(threshold.ok_or_else(|| Error::InvalidArgument("--threshold is required".into()))?)
}

fn cycle_json(h: &Hypergraph, c: &girthkit::EdgeCycle) -> Value {
    json!({
        "edges": c.edges.iter().map(|&e| edge_names(h, e)).collect::<Vec<_>>(),
        "vertices": c.vertices.iter().map(|&v| h.name(v)).collect::<Vec<_>>(),
    })
}

fn to_json(c: &RawCycle) -> Value {
    serde_json::to_value(c).expect("cycles serialize")
}

fn check(
    cli: &Cli,
    property: Property,
    doc: &Document,
    threshold: Option<&str>,
    level: Option<usize>,
    colors: usize,
) -> Result<Certificate, Error> {
    let budget = Budget::new(cli.budget);
    Ok(match property {
        Property::Girth => {
            let h = host_of(doc)?;
            let g = match required(threshold)?.as_slice() {
                [g] => *g,
                _ => return Err(Error::InvalidArgument("girth takes a single threshold".into())),
            };
            let cycle = if g < 2 { None } else { shortest_edge_cycle(&h, g)? };
            let detail = json!({ "threshold": g, "cycle": cycle.as_ref().map(|c| cycle_json(&h, c)) });
            certificate("girth", cycle.is_none(), detail)
        }
        Property::SystemGirth => {
            let sys = system_of(doc)?.copy_system()?;
            let t = match required(threshold)?.as_slice() {
                [g] => Threshold::Order(*g),
                [g, n] => Threshold::Pair(*g, *n),
                _ => return Err(Error::InvalidArgument("Girth takes g or g,n".into())),
            };
            let r = girth_of_system_exceeds(&sys, t, &budget)?;
            let (g, n) = t.pair();
            let detail = json!({
                "threshold": [g, n],
                "cycles_checked": r.cycles_checked,
                "witness": r.witness.as_ref().map(|c| to_json(&RawCycle::from_cycle(sys.host(), c))),
            });
            certificate("Girth", r.holds, detail)
        }
        Property::WagonGirth => {
            let sys = system_of(doc)?;
            let terms = required(threshold)?;
            let h = sys.target.host.clone();
            let chain = matches!(sys.target.flavor, Flavor::Quasitrain | Flavor::Train);
            if chain && level.is_none() {
                let q = sys.quasitrain_system()?;
                let m = sys.target.relations.len() - 1;
                let start = (m + 1).checked_sub(terms.len()).filter(|s| *s == 1 || *s == 2).ok_or_else(|| {
                    Error::InvalidArgument(format!("a girth sequence of length {m} or {} is needed", m.saturating_sub(1)))
                })?;
                let seq = GirthSequence::new(terms.clone())?;
                let r = frak_girth_seq_system_exceeds(&q, &seq, start, &budget)?;
                let detail = json!({
                    "sequence": terms,
                    "failing_level": r.failing_level,
                    "reason": r.reason,
                    "witness": r.witness.as_ref().map(|c| to_json(&RawCycle::from_big_cycle(&h, c))),
                });
                certificate("fGirth", r.holds, detail)
            } else {
                let g = match terms.as_slice() {
                    [g] => *g,
                    _ => return Err(Error::InvalidArgument("fGirth at one level takes a single threshold".into())),
                };
                let level = level.unwrap_or(if chain { 1 } else { 0 });
                let r = frak_girth_system_exceeds(&sys.pretrain_system(level)?, g, &budget)?;
                let detail = json!({
                    "threshold": g,
                    "level": level,
                    "cycles_checked": r.cycles_checked,
                    "reason": r.reason,
                    "witness": r.witness.as_ref().map(|c| to_json(&RawCycle::from_big_cycle(&h, c))),
                });
                certificate("fGirth", r.holds, detail)
            }
        }
        Property::Forest => {
            let sys = system_of(doc)?;
            let order = is_forest(&sys.target.host, &sys.copies)?;
            certificate("forest", order.is_some(), json!({ "enumeration": order }))
        }
        Property::Clean => {
            let sys = system_of(doc)?.copy_system()?;
            let (holds, pair) = has_clean_intersections(&sys);
            certificate("clean", holds, json!({ "pair": pair }))
        }
        Property::StronglyInduced => {
            let sys = system_of(doc)?;
            let mut failing = None;
            for (i, c) in sys.copies.iter().enumerate() {
                if !is_strongly_induced(c, &sys.target.host)? {
                    failing = Some(i);
                    break;
                }
            }
            certificate("strind", failing.is_none(), json!({ "copy": failing }))
        }
        Property::Arrow => {
            let sys = system_of(doc)?.copy_system()?;
            let r = edge_arrows(&sys, colors, &budget, search(cli))?;
            let detail = json!({ "colors": colors, "explored": r.explored, "colouring": r.witness });
            certificate("arrow", r.arrows, detail)
        }
    })
}

fn oracle(cli: &Cli, o: &OracleCommand) -> Result<Certificate, Error> {
    let budget = Budget::new(cli.budget);
    let opts = search(cli);
    let found = |check: &str, value: Result<usize, Error>, detail: Value| -> Result<Certificate, Error> {
        match value {
            Ok(_) => Ok(certificate(check, true, detail)),
            Err(Error::BudgetExceeded(msg)) => Ok(Certificate {
                check: check.to_string(),
                outcome: Outcome::BudgetExceeded,
                detail: json!({ "reason": msg }),
            }),
            Err(e) => Err(e),
        }
    };
    match o {
        OracleCommand::HjExponent { alphabet, colors, cap } => {
            let value = min_hj_exponent(*alphabet, *colors, *cap, &budget, opts);
            let below = match &value {
                Ok(n) if *n > 1 => {
                    let lines = combinatorial_lines(*alphabet, n - 1);
                    family_arrows(alphabet.pow((n - 1) as u32), &lines, *colors, &Budget::unlimited(), opts)?.witness
                }
                _ => None,
            };
            let detail = json!({
                "alphabet": alphabet,
                "colors": colors,
                "exponent": value.as_ref().ok(),
                "colouring_below": below,
            });
            found("hj-exponent", value, detail)
        }
        OracleCommand::Ramsey { profile, clique, colors, cap } => {
            let value = min_product_ramsey(profile, *clique, *colors, *cap, &budget, opts);
            let below = match &value {
                Ok(size) if size > clique => {
                    let sys = product_ramsey_system(profile, *clique, size - 1)?;
                    edge_arrows(&sys, *colors, &Budget::unlimited(), opts)?.witness.map(|w| {
                        let h = sys.host();
                        (0..h.m()).map(|e| json!({ "edge": edge_names(h, e), "colour": w[e] })).collect::<Vec<_>>()
                    })
                }
                _ => None,
            };
            let detail = json!({
                "profile": profile,
                "clique": clique,
                "colors": colors,
                "size": value.as_ref().ok(),
                "colouring_below": below,
            });
            found("ramsey", value, detail)
        }
    }
}
