mod common;

use std::collections::BTreeSet;

use graphviz_rust::dot_structures::{Attribute, EdgeTy, Graph, Id, NodeId, Stmt, Vertex};
use vartrack::prelude::*;
use vartrack::solver::{solve, SolverOptions};

fn id_text(id: &Id) -> String {
    match id {
        Id::Html(s) | Id::Plain(s) | Id::Anonymous(s) => s.clone(),
        Id::Escaped(s) => s[1..s.len() - 1].replace("\\\"", "\"").replace("\\\\", "\\"),
    }
}

fn vertex(v: &Vertex) -> String {
    match v {
        Vertex::N(NodeId(id, _)) => id_text(id),
        Vertex::S(_) => panic!("unexpected subgraph"),
    }
}

type Nodes = Vec<(String, String)>;
type Edges = BTreeSet<(String, String)>;

/// (node id, label) pairs and edge set, as parsed by an independent DOT parser.
fn parse(dot: &str) -> (Nodes, Edges) {
    let Graph::DiGraph { stmts, .. } = graphviz_rust::parse(dot).expect("valid DOT") else {
        panic!("expected digraph");
    };
    let mut nodes = Vec::new();
    let mut edges = BTreeSet::new();
    for s in &stmts {
        match s {
            Stmt::Node(n) => {
                let label = n
                    .attributes
                    .iter()
                    .find(|Attribute(k, _)| id_text(k) == "label")
                    .map(|Attribute(_, v)| id_text(v))
                    .expect("label");
                nodes.push((id_text(&n.id.0), label));
            }
            Stmt::Edge(e) => match &e.ty {
                EdgeTy::Pair(a, b) => {
                    edges.insert((vertex(a), vertex(b)));
                }
                EdgeTy::Chain(_) => panic!("unexpected chain"),
            },
            _ => {}
        }
    }
    (nodes, edges)
}

#[test]
fn empty_graph_parses() {
    let f = vartrack::solver::CnfFormula::new(1, vec![vec![1]]);
    let r = solve(&f, &SolverOptions::default()).unwrap();
    assert!(r.last_conflict.is_none());
    let (nodes, edges) = parse("digraph { }\n");
    assert!(nodes.is_empty() && edges.is_empty());
}

#[test]
fn exported_graphs_round_trip() {
    let mut checked = 0;
    for f in common::corpus(23, 80) {
        let r = solve(&f, &SolverOptions::default()).unwrap();
        let Some(g) = r.last_conflict else { continue };
        let dot = export_dot(&g, &pointer_name);
        let (nodes, edges) = parse(&dot);

        let want_nodes: Nodes = g
            .nodes()
            .iter()
            .map(|n| {
                (
                    format!("e{}", n.event.0),
                    format!("{} = {} @{}", pointer_name(n.cell), n.value.render(&pointer_name), n.level),
                )
            })
            .collect();
        assert_eq!(nodes, want_nodes);
        let want_edges: Edges = g
            .edges()
            .map(|(p, c)| (format!("e{}", g.nodes()[p].event.0), format!("e{}", g.nodes()[c].event.0)))
            .collect();
        assert_eq!(edges, want_edges);
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn labels_with_quotes_survive() {
    let mut s = CLSession::new();
    let a = s.alloc(Flat::Known(String::from("say \"hi\"")));
    s.reset_assignments();
    s.read(a).unwrap();
    merge_write(&mut s, a, Flat::Known(String::from("z"))).unwrap();
    let g = build_graph(&mut s, a).unwrap();
    let (nodes, _) = parse(&export_dot(&g, &pointer_name));
    assert_eq!(nodes.len(), g.len());
    assert!(nodes.iter().any(|(_, l)| l == "p0 = say \"hi\" @L0"), "{nodes:?}");
    assert!(nodes.iter().any(|(_, l)| l == "p0 = conflict @L0"), "{nodes:?}");
}
