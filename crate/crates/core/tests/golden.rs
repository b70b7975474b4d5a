use std::path::PathBuf;

use girthkit::construct::{picture_zero, FlavoredSystem, Placement, Structure};
use girthkit::io::{emit, export_dot, parse, Document, Mode};
use girthkit::{enumerate_copies, CopyMode, Hypergraph};

fn clique(n: usize) -> Hypergraph {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
    Hypergraph::numbered(n, edges, 2).unwrap()
}

/// Compares with the frozen file; `GIRTHKIT_BLESS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("GIRTHKIT_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "{name} drifted");
}

fn triangles_in_k5() -> FlavoredSystem {
    let (f, g) = (clique(3), clique(5));
    let copies = enumerate_copies(&g, &f, CopyMode::Induced, false)
        .unwrap()
        .into_iter()
        .map(|e| Placement { map: e.map, image: e.image })
        .collect();
    FlavoredSystem { pattern: Structure::plain(f), target: Structure::plain(g), copies }
}

#[test]
fn triangle_document() {
    let text = emit(&Document::hypergraph(&clique(3)));
    golden("k3.json", &text);
    assert_eq!(emit(&parse(&text, Mode::Strict).unwrap()), text);
}

#[test]
fn triangle_dot() {
    golden("k3.dot", &export_dot(&Document::hypergraph(&clique(3))).unwrap());
}

#[test]
fn system_and_picture_documents_roundtrip() {
    let sys = triangles_in_k5();
    for doc in [Document::system(&sys), Document::picture(&picture_zero(&sys).unwrap())] {
        let text = emit(&doc);
        let back = parse(&text, Mode::Strict).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.canonical().unwrap(), doc);
    }
    let back = parse(&emit(&Document::system(&sys)), Mode::Strict).unwrap().to_system().unwrap();
    assert_eq!(back.flavored().unwrap(), sys);
}

#[test]
fn picture_zero_has_one_rank_per_music_line() {
    let pic = picture_zero(&triangles_in_k5()).unwrap();
    let dot = export_dot(&Document::picture(&pic)).unwrap();
    assert_eq!(dot.matches("rank=same").count(), 5);
    // six vertices on every line: one per triangle through the vertex
    for line in dot.lines().filter(|l| l.contains("rank=same")) {
        assert_eq!(line.matches(';').count(), 7);
    }
    golden("picture_zero_k5_k3.dot", &dot);
}
