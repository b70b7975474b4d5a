//! JSON documents and DOT export.
//!
//! A document is `{"format": FORMAT, "kind": ..., "data": ...}`. Vertices are
//! referred to by name, edges by their vertex names, and relations on edges by
//! edge positions in the host's edge list.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::construct::{Flavor, FlavoredSystem, Handle, PcStep, Picture, Placement, Structure};
use crate::copy_system::{Connector, CopyRef, CopySystem, CycleOfCopies};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, RawHypergraph, Sub, Vertex};
use crate::partition::Partition;
use crate::pretrain::{BigConnector, BigCycle, PretrainCopySystem};
use crate::train::QuasitrainCopySystem;

pub const FORMAT: &str = "girthkit/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Unknown fields are errors.
    Strict,
    /// Unknown fields are ignored.
    Lenient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub format: String,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Body {
    Hypergraph(RawHypergraph),
    Pretrain(RawStructure),
    Quasitrain(RawStructure),
    Train(RawStructure),
    CopySystem(RawSystem),
    Picture(RawPicture),
    Cycle(RawCycle),
    Certificate(Certificate),
    Trace(Trace),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Hypergraph(_) => "hypergraph",
            Body::Pretrain(_) => "pretrain",
            Body::Quasitrain(_) => "quasitrain",
            Body::Train(_) => "train",
            Body::CopySystem(_) => "copy-system",
            Body::Picture(_) => "picture",
            Body::Cycle(_) => "cycle",
            Body::Certificate(_) => "certificate",
            Body::Trace(_) => "trace",
        }
    }
}

/// A host with edge relations; each relation lists blocks of edge positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawStructure {
    pub flavor: Flavor,
    pub host: RawHypergraph,
    pub relations: Vec<Vec<Vec<usize>>>,
    pub parameter: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCopy {
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<String>>,
    /// Image of every pattern vertex, in pattern order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSystem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<RawStructure>,
    pub target: RawStructure,
    pub copies: Vec<RawCopy>,
    #[serde(default)]
    pub extended: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPicture {
    pub vertical: RawSystem,
    pub picture: RawSystem,
    /// Vertical copy each picture copy projects onto.
    pub copy_image: Vec<usize>,
    /// Vertical vertex under every picture vertex, in picture vertex order.
    pub projection: Vec<String>,
}

/// Members and connectors of a cycle, alternating, starting with a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleItem {
    #[serde(rename = "copy")]
    Copy(usize),
    #[serde(rename = "edge-copy")]
    EdgeCopy(Vec<String>),
    #[serde(rename = "v")]
    Vertex(String),
    #[serde(rename = "e")]
    Edge(Vec<String>),
    #[serde(rename = "w")]
    Wagon(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCycle {
    pub items: Vec<CycleItem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    Fails,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub outcome: Outcome,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub recipe: Handle,
    pub colors: usize,
    pub steps: Vec<PcStep>,
    pub error: Option<String>,
}

impl Document {
    pub fn new(body: Body) -> Self {
        Document { format: FORMAT.to_string(), body }
    }

    pub fn hypergraph(h: &Hypergraph) -> Self {
        Document::new(Body::Hypergraph(RawHypergraph::from_hypergraph(h)))
    }

    /// Plain structures become hypergraph documents.
    pub fn structure(s: &Structure) -> Self {
        let raw = RawStructure::from_structure(s);
        Document::new(match s.flavor {
            Flavor::Plain => Body::Hypergraph(raw.host),
            Flavor::Pretrain => Body::Pretrain(raw),
            Flavor::Quasitrain => Body::Quasitrain(raw),
            Flavor::Train => Body::Train(raw),
        })
    }

    pub fn system(sys: &FlavoredSystem) -> Self {
        Document::new(Body::CopySystem(RawSystem::from_flavored(sys)))
    }

    pub fn copy_system(cs: &CopySystem) -> Self {
        let target = RawStructure::from_structure(&Structure::plain(cs.host().clone()));
        let copies = cs.copies().iter().map(|c| raw_copy(cs.host(), c, None)).collect();
        Document::new(Body::CopySystem(RawSystem { pattern: None, target, copies, extended: cs.is_extended() }))
    }

    pub fn picture(pic: &Picture) -> Self {
        let g = &pic.vertical.target.host;
        Document::new(Body::Picture(RawPicture {
            vertical: RawSystem::from_flavored(&pic.vertical),
            picture: RawSystem::from_flavored(&pic.system()),
            copy_image: pic.copy_image.clone(),
            projection: pic.psi.iter().map(|&x| g.name(x).to_string()).collect(),
        }))
    }

    pub fn cycle(h: &Hypergraph, c: &CycleOfCopies) -> Self {
        Document::new(Body::Cycle(RawCycle::from_cycle(h, c)))
    }

    pub fn big_cycle(h: &Hypergraph, c: &BigCycle) -> Self {
        Document::new(Body::Cycle(RawCycle::from_big_cycle(h, c)))
    }

    /// The vertex ordered host of a hypergraph or structure document.
    pub fn to_structure(&self) -> Result<Structure> {
        match &self.body {
            Body::Hypergraph(raw) => Ok(Structure::plain(build_host(raw, "data")?)),
            Body::Pretrain(raw) | Body::Quasitrain(raw) | Body::Train(raw) => {
                let kind = self.body.kind();
                let s = raw.build("data")?;
                if flavor_kind(s.flavor) != kind {
                    return parse_error("data.flavor", format!("flavour {:?} in a {kind} document", s.flavor));
                }
                Ok(s)
            }
            _ => parse_error("kind", format!("expected a hypergraph or structure, found {}", self.body.kind())),
        }
    }

    pub fn to_system(&self) -> Result<System> {
        match &self.body {
            Body::CopySystem(raw) => raw.build("data"),
            _ => parse_error("kind", format!("expected a copy-system, found {}", self.body.kind())),
        }
    }

    pub fn to_picture(&self) -> Result<Picture> {
        match &self.body {
            Body::Picture(raw) => raw.build("data"),
            _ => parse_error("kind", format!("expected a picture, found {}", self.body.kind())),
        }
    }

    /// Rebuilds the payload from its checked form; idempotent.
    pub fn canonical(&self) -> Result<Document> {
        Ok(match &self.body {
            Body::Hypergraph(_) | Body::Pretrain(_) | Body::Quasitrain(_) | Body::Train(_) => {
                Document::structure(&self.to_structure()?)
            }
            Body::CopySystem(raw) => Document::new(Body::CopySystem(raw.build("data")?.to_raw())),
            Body::Picture(_) => Document::picture(&self.to_picture()?),
            _ => self.clone(),
        })
    }
}

fn flavor_kind(f: Flavor) -> &'static str {
    match f {
        Flavor::Plain => "hypergraph",
        Flavor::Pretrain => "pretrain",
        Flavor::Quasitrain => "quasitrain",
        Flavor::Train => "train",
    }
}

fn parse_error<T>(location: impl Into<String>, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { location: location.into(), message: message.into() })
}

fn relocate(at: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse { location: at.to_string(), message: other.to_string() },
    }
}

fn build_host(raw: &RawHypergraph, at: &str) -> Result<Hypergraph> {
    let host = format!("{at}.host");
    let at = if at == "data" { at } else { host.as_str() };
    raw.build().map_err(relocate(at))
}

pub fn edge_names(h: &Hypergraph, e: EdgeId) -> Vec<String> {
    h.edge(e).iter().map(|&v| h.name(v).to_string()).collect()
}

fn member_item(h: &Hypergraph, f: CopyRef) -> CycleItem {
    match f {
        CopyRef::Real(i) => CycleItem::Copy(i),
        CopyRef::Edge(e) => CycleItem::EdgeCopy(edge_names(h, e)),
    }
}

fn raw_copy(h: &Hypergraph, s: &Sub, map: Option<&[Vertex]>) -> RawCopy {
    RawCopy {
        vertices: s.vertices.iter().map(|&v| h.name(v).to_string()).collect(),
        edges: s.edges.iter().map(|&e| edge_names(h, e)).collect(),
        map: map.map(|m| m.iter().map(|&v| h.name(v).to_string()).collect()),
    }
}

/// Name lookup for a built host.
struct Names<'a> {
    host: &'a Hypergraph,
    pos: HashMap<&'a str, Vertex>,
}

impl<'a> Names<'a> {
    fn new(host: &'a Hypergraph) -> Self {
        Names { host, pos: host.names().iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect() }
    }

    fn vertex(&self, name: &str, at: &str) -> Result<Vertex> {
        match self.pos.get(name) {
            Some(&v) => Ok(v),
            None => parse_error(at, format!("unknown vertex {name}")),
        }
    }

    fn edge(&self, names: &[String], at: &str) -> Result<EdgeId> {
        let mut vs = names.iter().map(|n| self.vertex(n, at)).collect::<Result<Vec<_>>>()?;
        vs.sort_unstable();
        match self.host.edge_id(&vs) {
            Some(e) => Ok(e),
            None => parse_error(at, format!("{names:?} is not an edge")),
        }
    }

    fn sub(&self, c: &RawCopy, at: &str) -> Result<Sub> {
        let vertices = c.vertices.iter().map(|n| self.vertex(n, &format!("{at}.vertices"))).collect::<Result<_>>()?;
        let edges = c.edges.iter().map(|e| self.edge(e, &format!("{at}.edges"))).collect::<Result<_>>()?;
        let s = Sub::new(vertices, edges);
        self.host.check_sub(&s).map_err(relocate(at))?;
        Ok(s)
    }
}

impl RawStructure {
    pub fn from_structure(s: &Structure) -> Self {
        RawStructure {
            flavor: s.flavor,
            host: RawHypergraph::from_hypergraph(&s.host),
            relations: s.relations.iter().map(|p| p.blocks()).collect(),
            parameter: s.parameter.clone(),
        }
    }

    pub fn build(&self, at: &str) -> Result<Structure> {
        let host = build_host(&self.host, at)?;
        // raw edge position -> edge id
        let names = Names::new(&host);
        let ids = self
            .host
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| names.edge(e, &format!("{at}.host.edges[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut relations = Vec::with_capacity(self.relations.len());
        for (l, blocks) in self.relations.iter().enumerate() {
            let here = format!("{at}.relations[{l}]");
            let mut mapped = Vec::with_capacity(blocks.len());
            for b in blocks {
                let mut block = Vec::with_capacity(b.len());
                for &i in b {
                    match ids.get(i) {
                        Some(&e) => block.push(e),
                        None => return parse_error(here, format!("edge position {i} out of range")),
                    }
                }
                mapped.push(block);
            }
            match Partition::from_blocks(host.m(), &mapped) {
                Some(p) => relations.push(p),
                None => return parse_error(here, "blocks do not partition the edges"),
            }
        }
        let s = Structure { host, flavor: self.flavor, relations, parameter: self.parameter.clone() };
        s.validate().map_err(relocate(at))?;
        Ok(s)
    }
}

/// A checked copy system; `pattern` and `maps` are present together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub pattern: Option<Structure>,
    pub target: Structure,
    pub copies: Vec<Sub>,
    pub maps: Option<Vec<Vec<Vertex>>>,
    pub extended: bool,
}

impl System {
    pub fn from_flavored(sys: &FlavoredSystem) -> Self {
        System {
            pattern: Some(sys.pattern.clone()),
            target: sys.target.clone(),
            copies: sys.copies.iter().map(|c| c.image.clone()).collect(),
            maps: Some(sys.copies.iter().map(|c| c.map.clone()).collect()),
            extended: false,
        }
    }

    pub fn flavored(&self) -> Result<FlavoredSystem> {
        match (&self.pattern, &self.maps) {
            (Some(pattern), Some(maps)) => Ok(FlavoredSystem {
                pattern: pattern.clone(),
                target: self.target.clone(),
                copies: self.copies.iter().zip(maps).map(|(s, m)| Placement { map: m.clone(), image: s.clone() }).collect(),
            }),
            _ => parse_error("data.pattern", "the system carries no pattern and vertex maps"),
        }
    }

    pub fn copy_system(&self) -> Result<CopySystem> {
        CopySystem::new(self.target.host.clone(), self.copies.clone(), self.extended)
    }

    /// The pretrain at relation `level` of the target.
    pub fn pretrain_system(&self, level: usize) -> Result<PretrainCopySystem> {
        let rel = match self.target.relations.get(level) {
            Some(r) => r.clone(),
            None => return Err(Error::InvalidArgument(format!("the target has no relation at level {level}"))),
        };
        let p = crate::pretrain::Pretrain::new(self.target.host.clone(), rel)?;
        PretrainCopySystem::new(p, self.copies.clone(), self.extended)
    }

    pub fn quasitrain_system(&self) -> Result<QuasitrainCopySystem> {
        QuasitrainCopySystem::new(self.target.quasitrain()?, self.copies.clone(), self.extended)
    }

    pub fn to_raw(&self) -> RawSystem {
        let h = &self.target.host;
        RawSystem {
            pattern: self.pattern.as_ref().map(RawStructure::from_structure),
            target: RawStructure::from_structure(&self.target),
            copies: self
                .copies
                .iter()
                .enumerate()
                .map(|(i, c)| raw_copy(h, c, self.maps.as_ref().map(|m| m[i].as_slice())))
                .collect(),
            extended: self.extended,
        }
    }
}

impl RawSystem {
    pub fn from_flavored(sys: &FlavoredSystem) -> Self {
        System::from_flavored(sys).to_raw()
    }

    pub fn build(&self, at: &str) -> Result<System> {
        let target = self.target.build(&format!("{at}.target"))?;
        let pattern = match &self.pattern {
            Some(p) => Some(p.build(&format!("{at}.pattern"))?),
            None => None,
        };
        let names = Names::new(&target.host);
        let mut copies = Vec::with_capacity(self.copies.len());
        let mut maps = Vec::with_capacity(self.copies.len());
        for (i, c) in self.copies.iter().enumerate() {
            let here = format!("{at}.copies[{i}]");
            copies.push(names.sub(c, &here)?);
            match (&pattern, &c.map) {
                (Some(p), Some(m)) => {
                    if m.len() != p.host.n() {
                        return parse_error(format!("{here}.map"), format!("{} images for {} pattern vertices", m.len(), p.host.n()));
                    }
                    let map = m.iter().map(|n| names.vertex(n, &format!("{here}.map"))).collect::<Result<Vec<_>>>()?;
                    let placed = Placement::along(&p.host, &target.host, map).map_err(relocate(&here))?;
                    if placed.image != copies[i] {
                        return parse_error(here, "the map does not carry the pattern onto the copy");
                    }
                    maps.push(placed.map);
                }
                (None, None) => {}
                (Some(_), None) => return parse_error(format!("{here}.map"), "copies of a patterned system need a map"),
                (None, Some(_)) => return parse_error(format!("{here}.map"), "a map needs a pattern"),
            }
        }
        let maps = pattern.as_ref().map(|_| maps);
        Ok(System { pattern, target, copies, maps, extended: self.extended })
    }
}

impl RawPicture {
    pub fn build(&self, at: &str) -> Result<Picture> {
        let vertical = self.vertical.build(&format!("{at}.vertical"))?.flavored()?;
        let pic = self.picture.build(&format!("{at}.picture"))?;
        let copies = pic.flavored()?.copies;
        let g = Names::new(&vertical.target.host);
        let here = format!("{at}.projection");
        if self.projection.len() != pic.target.host.n() {
            return parse_error(here, "one projected vertex per picture vertex expected");
        }
        let psi = self.projection.iter().map(|n| g.vertex(n, &here)).collect::<Result<Vec<_>>>()?;
        if self.copy_image.len() != copies.len() || self.copy_image.iter().any(|&j| j >= vertical.copies.len()) {
            return parse_error(format!("{at}.copy_image"), "copy images do not match the copies");
        }
        Ok(Picture { vertical, structure: pic.target, copies, copy_image: self.copy_image.clone(), psi })
    }
}

impl RawCycle {
    pub fn from_cycle(h: &Hypergraph, c: &CycleOfCopies) -> Self {
        let mut items = Vec::with_capacity(2 * c.len());
        for &(f, q) in &c.entries {
            items.push(member_item(h, f));
            items.push(match q {
                Connector::Vertex(v) => CycleItem::Vertex(h.name(v).to_string()),
                Connector::Edge(e) => CycleItem::Edge(edge_names(h, e)),
            });
        }
        RawCycle { items }
    }

    pub fn from_big_cycle(h: &Hypergraph, c: &BigCycle) -> Self {
        let mut items = Vec::with_capacity(2 * c.len());
        for &(f, q) in &c.entries {
            items.push(member_item(h, f));
            items.push(match q {
                BigConnector::Vertex(v) => CycleItem::Vertex(h.name(v).to_string()),
                BigConnector::Wagon(w) => CycleItem::Wagon(w),
            });
        }
        RawCycle { items }
    }

    fn members(&self, h: &Hypergraph) -> Result<Vec<(CopyRef, &CycleItem)>> {
        if self.items.len() % 2 != 0 || self.items.is_empty() {
            return parse_error("data.items", "a cycle alternates members and connectors");
        }
        let names = Names::new(h);
        self.items
            .chunks(2)
            .enumerate()
            .map(|(i, pair)| {
                let at = format!("data.items[{}]", 2 * i);
                let member = match &pair[0] {
                    CycleItem::Copy(c) => CopyRef::Real(*c),
                    CycleItem::EdgeCopy(e) => CopyRef::Edge(names.edge(e, &at)?),
                    _ => return parse_error(at, "expected a copy or edge copy"),
                };
                Ok((member, &pair[1]))
            })
            .collect()
    }

    pub fn to_cycle(&self, h: &Hypergraph) -> Result<CycleOfCopies> {
        let names = Names::new(h);
        let mut entries = Vec::new();
        for (i, (f, q)) in self.members(h)?.into_iter().enumerate() {
            let at = format!("data.items[{}]", 2 * i + 1);
            let q = match q {
                CycleItem::Vertex(v) => Connector::Vertex(names.vertex(v, &at)?),
                CycleItem::Edge(e) => Connector::Edge(names.edge(e, &at)?),
                _ => return parse_error(at, "expected a vertex or edge connector"),
            };
            entries.push((f, q));
        }
        Ok(CycleOfCopies::new(entries))
    }

    pub fn to_big_cycle(&self, h: &Hypergraph) -> Result<BigCycle> {
        let names = Names::new(h);
        let mut entries = Vec::new();
        for (i, (f, q)) in self.members(h)?.into_iter().enumerate() {
            let at = format!("data.items[{}]", 2 * i + 1);
            let q = match q {
                CycleItem::Vertex(v) => BigConnector::Vertex(names.vertex(v, &at)?),
                CycleItem::Wagon(w) => BigConnector::Wagon(*w),
                _ => return parse_error(at, "expected a vertex or wagon connector"),
            };
            entries.push((f, q));
        }
        Ok(BigCycle::new(entries))
    }
}

// ---------------------------------------------------------------------------
// text

pub fn emit(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse(text: &str, mode: Mode) -> Result<Document> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse { location: format!("line {} column {}", e.line(), e.column()), message: e.to_string() })?;
    match value.get("format") {
        Some(Value::String(f)) if f == FORMAT => {}
        Some(Value::String(f)) => return parse_error("format", format!("unsupported format {f}, expected {FORMAT}")),
        Some(_) => return parse_error("format", "the format must be a string"),
        None => return parse_error("format", "missing format"),
    }
    let doc: Document = serde_path_to_error::deserialize(value.clone()).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse { location: if path == "." { "document".into() } else { path }, message: e.into_inner().to_string() }
    })?;
    if mode == Mode::Strict {
        let known = serde_json::to_value(&doc).expect("documents serialize");
        if let Some(path) = unknown_field(&value, &known, String::new()) {
            return parse_error(path, "unknown field");
        }
    }
    Ok(doc)
}

/// First object key present in `given` but absent from `known`.
fn unknown_field(given: &Value, known: &Value, path: String) -> Option<String> {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match (given, known) {
        (Value::Object(g), Value::Object(k)) => g.iter().find_map(|(key, v)| match k.get(key) {
            None => Some(join(key)),
            Some(kv) => unknown_field(v, kv, join(key)),
        }),
        (Value::Array(g), Value::Array(k)) => {
            g.iter().zip(k).enumerate().find_map(|(i, (a, b))| unknown_field(a, b, format!("{path}[{i}]")))
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// DOT

const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Incidence graph: a node per vertex, a box per edge. `wagons` colours the
/// edge boxes; `ranks` puts vertices with equal rank on one row.
pub fn dot_incidence(name: &str, h: &Hypergraph, wagons: Option<&Partition>, ranks: Option<(&Hypergraph, &[Vertex])>) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    if h.n() == 0 && h.m() == 0 {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  node [fontsize=10];\n");
    for v in 0..h.n() {
        let _ = writeln!(out, "  v{v} [label={}, shape=circle];", quote(h.name(v)));
    }
    for e in 0..h.m() {
        match wagons {
            Some(p) => {
                let w = p.class_of(e);
                let _ = writeln!(
                    out,
                    "  e{e} [label=\"\", shape=box, width=0.15, height=0.15, style=filled, fillcolor={}, tooltip=\"wagon {w}\"];",
                    quote(PALETTE[w % PALETTE.len()])
                );
            }
            None => {
                let _ = writeln!(out, "  e{e} [label=\"\", shape=box, width=0.15, height=0.15];");
            }
        }
    }
    for e in 0..h.m() {
        for &v in h.edge(e) {
            let _ = writeln!(out, "  v{v} -- e{e};");
        }
    }
    if let Some((g, psi)) = ranks {
        for x in 0..g.n() {
            let line: Vec<String> = (0..psi.len()).filter(|&v| psi[v] == x).map(|v| format!("v{v};")).collect();
            if !line.is_empty() {
                let _ = writeln!(out, "  subgraph {} {{ rank=same; {} }}", quote(&format!("line {}", g.name(x))), line.join(" "));
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(doc: &Document) -> Result<String> {
    let kind = doc.body.kind();
    Ok(match &doc.body {
        Body::Hypergraph(_) | Body::Pretrain(_) | Body::Quasitrain(_) | Body::Train(_) => {
            let s = doc.to_structure()?;
            dot_incidence(kind, &s.host, wagon_level(&s), None)
        }
        Body::CopySystem(_) => {
            let s = doc.to_system()?;
            dot_incidence(kind, &s.target.host, wagon_level(&s.target), None)
        }
        Body::Picture(_) => {
            let pic = doc.to_picture()?;
            dot_incidence(kind, pic.host(), wagon_level(&pic.structure), Some((&pic.vertical.target.host, &pic.psi)))
        }
        Body::Cycle(_) | Body::Certificate(_) | Body::Trace(_) => format!("graph {} {{\n}}\n", quote(kind)),
    })
}

/// The partition coloured in drawings: the wagons, or level 1 of a chain.
fn wagon_level(s: &Structure) -> Option<&Partition> {
    match s.flavor {
        Flavor::Plain => None,
        Flavor::Pretrain => s.relations.first(),
        Flavor::Quasitrain | Flavor::Train => s.relations.get(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Hypergraph {
        Hypergraph::from_names(2, &["a", "b", "c"], &[&["a", "b"], &["a", "c"], &["b", "c"]]).unwrap()
    }

    #[test]
    fn roundtrip_of_a_hypergraph() {
        let doc = Document::hypergraph(&k3());
        let text = emit(&doc);
        let back = parse(&text, Mode::Strict).unwrap();
        assert_eq!(back, doc);
        assert_eq!(emit(&back), text);
        assert_eq!(back.to_structure().unwrap().host, k3());
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let text = emit(&Document::hypergraph(&k3())).replace("\"hypergraph\"", "\"hypergroup\"");
        assert!(matches!(parse(&text, Mode::Lenient), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_fields_depend_on_mode() {
        let text = emit(&Document::hypergraph(&k3())).replace("\"ordered\"", "\"colour\": 1, \"ordered\"");
        match parse(&text, Mode::Strict) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "data.colour"),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse(&text, Mode::Lenient).unwrap(), Document::hypergraph(&k3()));
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        match parse("{\n  \"format\": ", Mode::Strict) {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn other_versions_are_rejected() {
        let text = emit(&Document::hypergraph(&k3())).replace(FORMAT, "girthkit/0");
        assert!(matches!(parse(&text, Mode::Lenient), Err(Error::Parse { location, .. }) if location == "format"));
    }

    #[test]
    fn edge_order_is_canonicalised() {
        let mut raw = RawHypergraph::from_hypergraph(&k3());
        raw.edges.reverse();
        raw.edges[0].reverse();
        let doc = Document::new(Body::Hypergraph(raw));
        assert_eq!(doc.canonical().unwrap(), Document::hypergraph(&k3()));
    }

    #[test]
    fn relations_follow_listed_edge_positions() {
        let p = crate::pretrain::Pretrain::from_labels(k3(), &[0, 0, 1]).unwrap();
        let mut raw = RawStructure::from_structure(&Structure::from_pretrain(&p));
        // list the edges backwards and relabel the wagon blocks accordingly
        raw.host.edges.reverse();
        raw.relations = vec![vec![vec![1, 2], vec![0]]];
        let doc = Document::new(Body::Pretrain(raw));
        assert_eq!(doc.to_structure().unwrap(), Structure::from_pretrain(&p));
    }

    #[test]
    fn cycles_roundtrip() {
        let h = k3();
        let c = CycleOfCopies::new(vec![
            (CopyRef::Edge(0), Connector::Vertex(1)),
            (CopyRef::Edge(2), Connector::Vertex(2)),
            (CopyRef::Real(0), Connector::Edge(1)),
        ]);
        let doc = parse(&emit(&Document::cycle(&h, &c)), Mode::Strict).unwrap();
        match &doc.body {
            Body::Cycle(raw) => assert_eq!(raw.to_cycle(&h).unwrap(), c),
            _ => unreachable!(),
        }
        assert!(emit(&doc).contains("\"v\": \"b\""));
    }

    #[test]
    fn empty_graph_dot() {
        let h = Hypergraph::numbered(0, vec![], 2).unwrap();
        assert_eq!(export_dot(&Document::hypergraph(&h)).unwrap(), "graph \"hypergraph\" {\n}\n");
    }
}
