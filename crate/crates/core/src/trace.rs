//! From a labeled (or link-annotated) tree to its trace graph, and from a
//! cycle of the trace graph back to a text.
//!
//! The trace graph has the tree's nodes; every tree edge `e` that some
//! suffix of the text walks over appears with multiplicity `σ(e)`, and every
//! suffix link appears once. A text is read off an Eulerian cycle by taking
//! the labels of the tree-edge occurrences in order.

use thiserror::Error;

use crate::ecp::{ArcId, EulerCycle, Multigraph, PrioritySet};
use crate::heap::{NodeId, SuffixLinkMap};
use crate::sketch::HeapSketch;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("the tree is not fully labeled")]
    Unlabeled,
    #[error("node {0:?} has two children with the same label")]
    DuplicateSiblingLabel(String),
    #[error("suffix link of {node:?} needs a {letter:?}-child that does not exist")]
    NoSuchChild { node: String, letter: char },
    #[error("edge into {node:?} would be walked {value} times")]
    NegativeSigma { node: String, value: i64 },
    #[error("the sketch carries no link map")]
    MissingLinks,
    #[error("suffix links are inconsistent at {node:?}: {reason}")]
    LinkInconsistent { node: String, reason: &'static str },
    #[error("root needs {needed} letters, assignment has {given}")]
    AssignmentSize { needed: usize, given: usize },
    #[error("root letter assignment repeats {0:?}")]
    AssignmentNotInjective(char),
}

/// Sorted `(label, child)` lists for every node, rejecting repeated labels.
fn labeled_kids(s: &HeapSketch) -> Result<Vec<Vec<(u8, NodeId)>>, TraceError> {
    (0..s.node_count())
        .map(|v| {
            let kids = s.labeled_children(v).ok_or(TraceError::Unlabeled)?;
            if kids.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(TraceError::DuplicateSiblingLabel(s.id(v).to_string()));
            }
            Ok(kids)
        })
        .collect()
}

fn find(kids: &[(u8, NodeId)], c: u8) -> Option<NodeId> {
    kids.binary_search_by_key(&c, |&(l, _)| l).ok().map(|i| kids[i].1)
}

/// Rebuilds the suffix links of a labeled tree: depth-one nodes link to the
/// root, and the `c`-child of `u` links to the `c`-child of `S(u)`.
pub fn reconstruct_suffix_links(s: &HeapSketch) -> Result<SuffixLinkMap, TraceError> {
    let kids = labeled_kids(s)?;
    let mut links = vec![None; s.node_count()];
    for v in s.by_depth().into_iter().skip(1) {
        let u = s.parent(v).unwrap();
        let c = s.label(v).unwrap();
        links[v] = if u == 0 {
            Some(0)
        } else {
            let su = links[u].unwrap();
            Some(find(&kids[su], c).ok_or_else(|| TraceError::NoSuchChild {
                node: s.id(v).to_string(),
                letter: c as char,
            })?)
        };
    }
    Ok(SuffixLinkMap::new(links))
}

/// `σ(e)` for every tree edge, indexed by the edge's child node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaMap {
    sigma: Vec<i64>,
}

impl SigmaMap {
    /// Multiplicity of the edge into `v` (zero for the root).
    pub fn get(&self, v: NodeId) -> i64 {
        self.sigma[v]
    }

    pub fn total(&self) -> i64 {
        self.sigma.iter().sum()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.sigma
    }
}

/// Number of inbound links per node.
fn in_links(m: usize, links: &SuffixLinkMap) -> Vec<i64> {
    let mut inbound = vec![0i64; m];
    for (_, t) in links.iter() {
        inbound[t] += 1;
    }
    inbound
}

/// Solves `σ(e) = 1 - |S⁻¹(v)| + Σ σ(out(v))` for the edge `e` into `v`,
/// deepest edges first.
pub fn compute_sigma(s: &HeapSketch, links: &SuffixLinkMap) -> Result<SigmaMap, TraceError> {
    let m = s.node_count();
    let inbound = in_links(m, links);
    let mut sigma = vec![0i64; m];
    for v in s.by_depth().into_iter().skip(1).rev() {
        let below: i64 = s.children(v).iter().map(|&c| sigma[c]).sum();
        let value = 1 - inbound[v] + below;
        if value < 0 {
            return Err(TraceError::NegativeSigma { node: s.id(v).to_string(), value });
        }
        sigma[v] = value;
    }
    Ok(SigmaMap { sigma })
}

/// What a trace-graph arc stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    /// The tree edge into `child`, labeled `label`.
    Edge { label: u8, child: NodeId },
    /// The suffix link leaving `from`.
    Link { from: NodeId },
}

#[derive(Clone, Debug)]
pub struct TraceGraph {
    pub graph: Multigraph,
    pub priority: PrioritySet,
    pub root: NodeId,
    kinds: Vec<ArcKind>,
    edge_arc: Vec<Option<ArcId>>,
    link_arc: Vec<Option<ArcId>>,
}

impl TraceGraph {
    pub fn kind(&self, a: ArcId) -> ArcKind {
        self.kinds[a]
    }

    /// Arc of the tree edge into `v`, absent when `σ = 0`.
    pub fn edge_arc(&self, v: NodeId) -> Option<ArcId> {
        self.edge_arc[v]
    }

    pub fn link_arc(&self, v: NodeId) -> Option<ArcId> {
        self.link_arc[v]
    }

    /// Length of every text the graph spells.
    pub fn text_len(&self) -> usize {
        self.link_arc.iter().flatten().count()
    }
}

/// Assembles the trace graph. Per node the tree arcs come first in label
/// order, then the link. A link is a priority arc iff its tail has some
/// tree arc to leave by as well.
pub fn build_trace_graph(
    s: &HeapSketch,
    links: &SuffixLinkMap,
    sigma: &SigmaMap,
) -> Result<TraceGraph, TraceError> {
    let kids = labeled_kids(s)?;
    let m = s.node_count();
    let mut graph = Multigraph::new(m);
    let mut kinds = Vec::new();
    let mut edge_arc = vec![None; m];
    let mut link_arc = vec![None; m];
    let mut priority = Vec::new();
    for v in 0..m {
        let mut has_edge = false;
        for &(label, c) in &kids[v] {
            let mult = sigma.get(c);
            if mult > 0 {
                let a = graph.add_arc(v, c, mult as u32).expect("tree arcs are distinct");
                kinds.push(ArcKind::Edge { label, child: c });
                edge_arc[c] = Some(a);
                has_edge = true;
            }
        }
        if let Some(t) = links.get(v) {
            let a = graph.add_arc(v, t, 1).map_err(|_| TraceError::LinkInconsistent {
                node: s.id(v).to_string(),
                reason: "link is a loop or doubles a tree edge",
            })?;
            kinds.push(ArcKind::Link { from: v });
            link_arc[v] = Some(a);
            if has_edge {
                priority.push(a);
            }
        }
    }
    let priority = PrioritySet::new(&graph, priority).expect("links have multiplicity one");
    Ok(TraceGraph {
        graph,
        priority,
        root: 0,
        kinds,
        edge_arc,
        link_arc,
    })
}

/// Reads the text off a cycle: the `i`-th tree-edge occurrence spells
/// `T[i]`, and the tail of the `i`-th link occurrence is numbered `i`.
pub fn read_text_from_cycle(g: &TraceGraph, cycle: &EulerCycle) -> (Vec<u8>, Vec<usize>) {
    let mut text = Vec::with_capacity(g.text_len());
    let mut numbering = vec![0; g.graph.node_count()];
    let mut i = 0;
    for &a in &cycle.arcs {
        match g.kinds[a] {
            ArcKind::Edge { label, .. } => text.push(label),
            ArcKind::Link { from } => {
                i += 1;
                numbering[from] = i;
            }
        }
    }
    (text, numbering)
}

/// Labels every edge of a link-annotated tree from the letters of the root
/// edges (`assignment`, in the root's child order): the edge `(u, v)` gets
/// the label of the edge `(S(u), S(v))`.
pub fn propagate_labels(s: &HeapSketch, assignment: &[u8]) -> Result<HeapSketch, TraceError> {
    if !s.flags().links {
        return Err(TraceError::MissingLinks);
    }
    let m = s.node_count();
    let bad = |v: NodeId, reason| TraceError::LinkInconsistent { node: s.id(v).to_string(), reason };
    if s.link(0).is_some() {
        return Err(bad(0, "the root has a link"));
    }
    for v in 1..m {
        let t = s.link(v).ok_or_else(|| bad(v, "no link"))?;
        if s.depth(t) + 1 != s.depth(v) {
            return Err(bad(v, "link does not go up exactly one level"));
        }
    }
    let top = s.children(0);
    if assignment.len() != top.len() {
        return Err(TraceError::AssignmentSize { needed: top.len(), given: assignment.len() });
    }
    let mut sorted = assignment.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(TraceError::AssignmentNotInjective(w[0] as char));
    }

    let mut labels = vec![0u8; m];
    for (&c, &l) in top.iter().zip(assignment) {
        labels[c] = l;
    }
    for v in s.by_depth() {
        let Some(u) = s.parent(v) else { continue };
        if u == 0 {
            continue;
        }
        let (su, sv) = (s.link(u).unwrap(), s.link(v).unwrap());
        if s.parent(sv) != Some(su) {
            return Err(bad(v, "links of an edge's ends are not an edge"));
        }
        labels[v] = labels[sv];
    }
    Ok(s.with_labels(&labels))
}
