//! Dependency graphs over assignment events, and conflict analysis.
//!
//! Nodes are assignment events from a [`CLSession`] trail. The parents of a
//! non-decision event are the events that produced the values its reason
//! observed: for each `(cell, observed)` entry, the latest live event on
//! `cell` that precedes it. Edges therefore always point forward in time.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::reason::{CLSession, EventId};
use crate::store::{CellId, VarStore};
use crate::value::{Naming, StoredValue};

/// Number of decisions in effect when an assignment happened. Level 0 holds
/// everything forced before the first decision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecisionLevel(pub usize);

impl fmt::Display for DecisionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Asserted,
    Forbidden,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub cell: CellId,
    pub value: StoredValue,
    pub polarity: Polarity,
    pub level: DecisionLevel,
}

/// "Not all of these assignments at once": a disjunction of forbidden
/// `(cell, value)` literals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LearnedClause {
    pub literals: Vec<Literal>,
}

impl LearnedClause {
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct GraphNode {
    pub event: EventId,
    pub cell: CellId,
    pub value: StoredValue,
    pub level: DecisionLevel,
    pub decision: bool,
    /// Indices into [`DepGraph::nodes`].
    pub parents: Vec<usize>,
}

/// The reason closure of one assignment event. Nodes are ordered by event.
#[derive(Clone, Debug, Default)]
pub struct DepGraph {
    nodes: Vec<GraphNode>,
    root: Option<usize>,
}

impl DepGraph {
    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn root(&self) -> Option<&GraphNode> {
        self.root.map(|i| &self.nodes[i])
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(parent, child)` pairs of node indices.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(|(child, n)| n.parents.iter().map(move |&p| (p, child)))
    }

    pub fn decisions(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.iter().filter(|n| n.decision)
    }
}

/// Builds the reason closure of the latest assignment event on
/// `conflict_cell`.
pub fn build_graph<S: VarStore>(session: &mut CLSession<S>, conflict_cell: CellId) -> Result<DepGraph> {
    let trail = session.trail().to_vec();
    let Some(root_pos) = trail.iter().rposition(|e| e.cell == conflict_cell) else {
        return Err(Error::MalformedSession {
            cell: conflict_cell,
            detail: "no live assignment event".into(),
        });
    };

    let mut by_cell: HashMap<CellId, Vec<usize>> = HashMap::new();
    for (pos, e) in trail.iter().enumerate().take(root_pos + 1) {
        by_cell.entry(e.cell).or_default().push(pos);
    }

    // trail position -> parent positions
    let mut parents: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut pending = vec![root_pos];
    while let Some(pos) = pending.pop() {
        if parents.contains_key(&pos) {
            continue;
        }
        let event = &trail[pos];
        let mut found = Vec::new();
        if !event.is_decision() {
            let reason = session.reason_of(event)?;
            for entry in &reason {
                let positions = by_cell.get(&entry.cell).map(Vec::as_slice).unwrap_or(&[]);
                let before = positions.partition_point(|&q| q < pos);
                let Some(&q) = before.checked_sub(1).map(|i| &positions[i]) else {
                    return Err(Error::MalformedSession {
                        cell: event.cell,
                        detail: format!("reason reads {} which has no earlier assignment", entry.cell),
                    });
                };
                if trail[q].value != entry.observed {
                    return Err(Error::MalformedSession {
                        cell: event.cell,
                        detail: format!("reason saw {:?} at {}, trail has {:?}", entry.observed, entry.cell, trail[q].value),
                    });
                }
                if !found.contains(&q) {
                    found.push(q);
                    pending.push(q);
                }
            }
        }
        parents.insert(pos, found);
    }

    let mut positions: Vec<usize> = parents.keys().copied().collect();
    positions.sort_unstable();
    let index_of: HashMap<usize, usize> = positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let nodes = positions
        .iter()
        .map(|p| {
            let e = &trail[*p];
            let mut ps: Vec<usize> = parents[p].iter().map(|q| index_of[q]).collect();
            ps.sort_unstable();
            GraphNode {
                event: e.id,
                cell: e.cell,
                value: e.value.clone(),
                level: e.level,
                decision: e.is_decision(),
                parents: ps,
            }
        })
        .collect();
    Ok(DepGraph {
        nodes,
        root: Some(index_of[&root_pos]),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CutStrategy {
    /// Negate the decisions the conflict depends on.
    #[default]
    Decision,
    /// Cut at the first unique implication point of the conflict level.
    FirstUip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub clause: LearnedClause,
    pub backjump: DecisionLevel,
}

fn forbid(node: &GraphNode) -> Literal {
    Literal {
        cell: node.cell,
        value: node.value.clone(),
        polarity: Polarity::Forbidden,
        level: node.level,
    }
}

/// Second-highest level among the literals; 0 for fewer than two.
fn backjump_level(literals: &[Literal]) -> DecisionLevel {
    let mut levels: Vec<DecisionLevel> = literals.iter().map(|l| l.level).collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.get(1).copied().unwrap_or_default()
}

/// Derives a learned clause and backjump level from a conflict graph.
/// Fails with [`Error::Unsatisfiable`] when the conflict depends on no
/// decision.
pub fn analyze_conflict(graph: &DepGraph, strategy: CutStrategy) -> Result<Analysis> {
    let Some(root_index) = graph.root else {
        return Err(Error::Unsatisfiable);
    };
    let root = &graph.nodes[root_index];
    let nodes: Vec<usize> = match strategy {
        _ if root.decision => vec![root_index],
        CutStrategy::Decision => (0..graph.nodes.len()).filter(|&i| graph.nodes[i].decision).collect(),
        CutStrategy::FirstUip => first_uip_cut(graph, root_index),
    };
    if nodes.is_empty() {
        return Err(Error::Unsatisfiable);
    }
    let literals: Vec<Literal> = nodes.iter().map(|&i| forbid(&graph.nodes[i])).collect();
    let backjump = backjump_level(&literals);
    Ok(Analysis {
        clause: LearnedClause { literals },
        backjump,
    })
}

fn first_uip_cut(graph: &DepGraph, root_index: usize) -> Vec<usize> {
    let level = graph.nodes[root_index].level;
    if level == DecisionLevel(0) {
        return Vec::new();
    }
    let keep = |i: &usize| graph.nodes[*i].level > DecisionLevel(0);
    let mut frontier: BTreeSet<usize> = graph.nodes[root_index].parents.iter().copied().filter(keep).collect();
    loop {
        let at_level: Vec<usize> = frontier.iter().copied().filter(|&i| graph.nodes[i].level == level).collect();
        if at_level.len() <= 1 {
            break;
        }
        // Nodes are ordered by event, so the last one is the most recent
        // implication at this level; it cannot be the level's decision.
        let latest = *at_level.last().expect("non-empty");
        debug_assert!(!graph.nodes[latest].decision);
        frontier.remove(&latest);
        frontier.extend(graph.nodes[latest].parents.iter().copied().filter(keep));
    }
    frontier.into_iter().collect()
}

/// Lowest decision level among the decisions the conflict depends on.
pub fn earliest_decision(graph: &DepGraph) -> DecisionLevel {
    graph.decisions().map(|n| n.level).min().unwrap_or_default()
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph; nodes labelled `p<i> = <value> @L<level>`.
pub fn export_dot(graph: &DepGraph, names: Naming<'_>) -> String {
    if graph.nodes.is_empty() {
        return "digraph { }\n".to_string();
    }
    let mut out = String::from("digraph {\n");
    for (i, n) in graph.nodes.iter().enumerate() {
        let label = format!("{} = {} @{}", names(n.cell), n.value.render(names), n.level);
        let shape = if n.decision {
            ", shape=box"
        } else if Some(i) == graph.root {
            ", shape=doubleoctagon"
        } else {
            ""
        };
        out.push_str(&format!("  e{} [label=\"{}\"{}];\n", n.event.0, escape(&label), shape));
    }
    for (p, c) in graph.edges() {
        out.push_str(&format!("  e{} -> e{};\n", graph.nodes[p].event.0, graph.nodes[c].event.0));
    }
    out.push_str("}\n");
    out
}
