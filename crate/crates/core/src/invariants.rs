//! Checkable statements about heaps, trace graphs, and ECP solvers. Each
//! returns the first violation found; the test suites drive them with
//! random instances.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ecp::{count_ecp, enumerate_ecp, solve_ecp, validate_cycle, EulerCycle, Multigraph, Node, PrioritySet};
use crate::heap::{PositionHeap, SuffixLinkMap};
use crate::oracle::{ecp_cycles, naive_heap_labels};
use crate::sketch::{Flags, HeapSketch};
use crate::trace::{build_trace_graph, compute_sigma, read_text_from_cycle, reconstruct_suffix_links, SigmaMap, TraceGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct Violation(pub String);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(Violation(format!($($fmt)+)));
        }
    };
}

/// Path labels follow the definition of `h_i`, and numbers grow downwards.
pub fn heap_definition(text: &[u8]) -> Result<(), Violation> {
    let (h, _) = PositionHeap::from_text(text).map_err(|e| Violation(e.to_string()))?;
    let want = naive_heap_labels(text).ok_or_else(|| Violation("no h_i for a valid text".into()))?;
    ensure!(h.node_count() == want.len(), "node count {} vs {}", h.node_count(), want.len());
    for (i, w) in want.iter().enumerate() {
        ensure!(&h.path_label(i) == w, "h_{i} is {:?}, expected {:?}", h.path_label(i), w);
        if let Some(p) = h.parent(i) {
            ensure!(p < i, "edge ({p}, {i}) goes to a smaller number");
        }
    }
    Ok(())
}

/// `S(n) = 0`; for `0 < i < n`, `S(i)` is one level up and node `i + 1`
/// lies below it.
pub fn suffix_link_descent(h: &PositionHeap, links: &SuffixLinkMap) -> Result<(), Violation> {
    let n = h.node_count() - 1;
    ensure!(links.get(0).is_none(), "the root has a link");
    if n == 0 {
        return Ok(());
    }
    ensure!(links.get(n) == Some(0), "S(n) = {:?}", links.get(n));
    for i in 1..=n {
        let s = links.get(i).ok_or_else(|| Violation(format!("S({i}) missing")))?;
        ensure!(h.depth(s) + 1 == h.depth(i), "S({i}) = {s} is not one level up");
        if i < n {
            ensure!(h.is_ancestor(s, i + 1), "{} is not below S({i}) = {s}", i + 1);
        }
    }
    Ok(())
}

/// Plugging `σ` back into `σ(e) = 1 − in-links + Σ σ(children)` leaves no residual.
pub fn sigma_residual(s: &HeapSketch, links: &SuffixLinkMap, sigma: &SigmaMap) -> Result<(), Violation> {
    let mut inbound = vec![0i64; s.node_count()];
    for (_, t) in links.iter() {
        inbound[t] += 1;
    }
    for v in 1..s.node_count() {
        let below: i64 = s.children(v).iter().map(|&c| sigma.get(c)).sum();
        let residual = sigma.get(v) - 1 + inbound[v] - below;
        ensure!(residual == 0, "residual {residual} on the edge into {}", s.id(v));
    }
    Ok(())
}

/// In- and out-multiplicities agree everywhere, and the tree arcs carry as
/// much multiplicity as there are links.
pub fn flow_balance(g: &TraceGraph) -> Result<(), Violation> {
    let m = &g.graph;
    for v in 0..m.node_count() {
        ensure!(m.in_degree(v) == m.out_degree(v), "node {v}: in {} out {}", m.in_degree(v), m.out_degree(v));
    }
    let n = g.text_len() as u64;
    ensure!(m.total_multiplicity() == 2 * n, "total multiplicity {} for {} links", m.total_multiplicity(), n);
    Ok(())
}

/// The cycle that reads `text` off its own trace graph: from the root down
/// to node 1, then for each `i` the link out of `i` followed by the path
/// from `S(i)` down to `i + 1`. Node ids of `g` must be heap numbers.
pub fn t_trace_cycle(h: &PositionHeap, links: &SuffixLinkMap, g: &TraceGraph) -> Option<EulerCycle> {
    let n = h.node_count() - 1;
    let mut arcs = Vec::new();
    let descend = |from: usize, to: usize, arcs: &mut Vec<usize>| -> Option<()> {
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            path.push(g.edge_arc(v)?);
            v = h.parent(v)?;
        }
        arcs.extend(path.into_iter().rev());
        Some(())
    };
    if n > 0 {
        descend(0, 1, &mut arcs)?;
    }
    for i in 1..=n {
        arcs.push(g.link_arc(i)?);
        if i < n {
            descend(links.get(i)?, i + 1, &mut arcs)?;
        }
    }
    Some(EulerCycle { start: 0, arcs })
}

/// The trace cycle of a real text is an Eulerian cycle respecting the
/// priority links, and spells the text and its numbering.
pub fn trace_cycle_spells_text(text: &[u8]) -> Result<(), Violation> {
    let (h, links) = PositionHeap::from_text(text).map_err(|e| Violation(e.to_string()))?;
    let s = HeapSketch::from_heap(&h, &links, Flags { numbered: true, labeled: true, links: false });
    let rebuilt = reconstruct_suffix_links(&s).map_err(|e| Violation(e.to_string()))?;
    ensure!(rebuilt == links, "reconstructed links differ");
    let sigma = compute_sigma(&s, &rebuilt).map_err(|e| Violation(e.to_string()))?;
    sigma_residual(&s, &rebuilt, &sigma)?;
    let g = build_trace_graph(&s, &rebuilt, &sigma).map_err(|e| Violation(e.to_string()))?;
    flow_balance(&g)?;
    let cycle = t_trace_cycle(&h, &links, &g).ok_or_else(|| Violation("trace cycle uses a missing arc".into()))?;
    validate_cycle(&g.graph, &g.priority, 0, &cycle).map_err(|e| Violation(e.to_string()))?;
    let (spelled, numbering) = read_text_from_cycle(&g, &cycle);
    ensure!(spelled == text, "cycle spells {:?}", String::from_utf8_lossy(&spelled));
    ensure!(numbering.iter().enumerate().all(|(v, &i)| v == i), "numbering is not the identity");
    Ok(())
}

/// Marks every node whose only out-arc is light as having it as priority.
fn promoted(g: &Multigraph, f: &PrioritySet) -> PrioritySet {
    let lone = (0..g.node_count()).filter_map(|v| match g.out_arcs(v) {
        &[a] if g.arc(a).mult == 1 && f.at(v).is_none() => Some(a),
        _ => None,
    });
    PrioritySet::new(g, f.iter().chain(lone)).expect("one light arc per node")
}

/// Lone priority arcs make no difference: the solver, counter, enumerator
/// and the backtracking oracle agree with and without them.
pub fn demotion_invariance(g: &Multigraph, f: &PrioritySet, r: Node, limit: usize) -> Result<(), Violation> {
    let variants = [f.clone(), f.demoted(g), promoted(g, f)];
    let counts: Vec<_> = variants.iter().map(|p| count_ecp(g, p, r)).collect();
    ensure!(counts.windows(2).all(|w| w[0] == w[1]), "counts differ: {counts:?}");
    let solvable: Vec<bool> = variants.iter().map(|p| solve_ecp(g, p, r).is_ok()).collect();
    ensure!(solvable.windows(2).all(|w| w[0] == w[1]), "solvability differs: {solvable:?}");
    let sets: Vec<BTreeSet<EulerCycle>> = variants.iter().map(|p| enumerate_ecp(g, p, r).take(limit).collect()).collect();
    ensure!(sets.windows(2).all(|w| w[0] == w[1]), "enumerations differ");
    let brute: Vec<Option<BTreeSet<EulerCycle>>> = variants
        .iter()
        .map(|p| ecp_cycles(g, p, r, limit).ok().map(|v| v.into_iter().collect()))
        .collect();
    ensure!(brute.windows(2).all(|w| w[0] == w[1]), "oracle sets differ");
    Ok(())
}

/// Renaming the letters of a text renames the labels of its heap and
/// changes nothing else.
pub fn alphabet_equivariance(text: &[u8], rename: &[u8; 256]) -> Result<(), Violation> {
    let (h, l) = PositionHeap::from_text(text).map_err(|e| Violation(e.to_string()))?;
    let renamed: Vec<u8> = text.iter().map(|&c| rename[c as usize]).collect();
    let (h2, l2) = PositionHeap::from_text(&renamed).map_err(|e| Violation(e.to_string()))?;
    ensure!(h.node_count() == h2.node_count(), "node counts differ");
    ensure!(l == l2, "links differ");
    for v in 1..h.node_count() {
        ensure!(h.parent(v) == h2.parent(v), "parent of {v} differs");
        ensure!(h.label(v).map(|c| rename[c as usize]) == h2.label(v), "label into {v} differs");
    }
    Ok(())
}
