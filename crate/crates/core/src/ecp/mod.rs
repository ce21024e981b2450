//! Eulerian cycles with priority edges (ECP) on directed multigraphs.
//!
//! An `r`-Eulerian cycle *respects* a priority set `F` when, for every node
//! `u` with a priority out-edge `f`, the first departure from `u` in the cycle
//! is `f`. Parallel copies of an edge are indistinguishable: a cycle is a
//! sequence of distinct arcs, each arc occurring `mult` times.

mod arborescence;
mod count;
mod enumerate;

use std::collections::VecDeque;

use thiserror::Error;

pub use arborescence::Arborescences;
pub use count::{count_ecp, determinant, BigCount};
pub use enumerate::{enumerate_ecp, EcpEnumerator};

pub type Node = usize;
pub type ArcId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(Node),
    #[error("arc ({0}, {1}) has zero multiplicity")]
    ZeroMultiplicity(Node, Node),
    #[error("arc ({0}, {1}) is already present")]
    DuplicateArc(Node, Node),
    #[error("node {0} is out of range")]
    NodeOutOfRange(Node),
    #[error("arc {0} is out of range")]
    ArcOutOfRange(ArcId),
    #[error("priority arc {0} has multiplicity greater than one")]
    HeavyPriority(ArcId),
    #[error("node {0} has two priority arcs")]
    TwoPriorities(Node),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcpError {
    #[error("graph is not Eulerian from the start node")]
    NotEulerian,
    #[error("no oriented spanning tree avoids the priority arcs")]
    NoSpanningTree,
    #[error("walk stopped after {used} of {total} arc occurrences")]
    Stuck { used: u64, total: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: Node,
    pub head: Node,
    pub mult: u32,
}

/// Directed multigraph without self-loops; each ordered pair appears at most
/// once and carries a positive multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    arcs: Vec<Arc>,
    out: Vec<Vec<ArcId>>,
    inc: Vec<Vec<ArcId>>,
}

impl Multigraph {
    pub fn new(node_count: usize) -> Self {
        Multigraph {
            arcs: Vec::new(),
            out: vec![Vec::new(); node_count],
            inc: vec![Vec::new(); node_count],
        }
    }

    pub fn add_arc(&mut self, tail: Node, head: Node, mult: u32) -> Result<ArcId, GraphError> {
        let n = self.node_count();
        for v in [tail, head] {
            if v >= n {
                return Err(GraphError::NodeOutOfRange(v));
            }
        }
        if tail == head {
            return Err(GraphError::SelfLoop(tail));
        }
        if mult == 0 {
            return Err(GraphError::ZeroMultiplicity(tail, head));
        }
        if self.out[tail].iter().any(|&a| self.arcs[a].head == head) {
            return Err(GraphError::DuplicateArc(tail, head));
        }
        let id = self.arcs.len();
        self.arcs.push(Arc { tail, head, mult });
        self.out[tail].push(id);
        self.inc[head].push(id);
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, a: ArcId) -> Arc {
        self.arcs[a]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Out-arcs of `v` in insertion order.
    pub fn out_arcs(&self, v: Node) -> &[ArcId] {
        &self.out[v]
    }

    pub fn in_arcs(&self, v: Node) -> &[ArcId] {
        &self.inc[v]
    }

    /// Sum of multiplicities of all arcs.
    pub fn total_multiplicity(&self) -> u64 {
        self.arcs.iter().map(|a| a.mult as u64).sum()
    }

    pub fn out_degree(&self, v: Node) -> u64 {
        self.out[v].iter().map(|&a| self.arcs[a].mult as u64).sum()
    }

    pub fn in_degree(&self, v: Node) -> u64 {
        self.inc[v].iter().map(|&a| self.arcs[a].mult as u64).sum()
    }

    /// Nodes touching at least one arc, plus `r`.
    pub fn active_nodes(&self, r: Node) -> Vec<bool> {
        (0..self.node_count())
            .map(|v| v == r || !self.out[v].is_empty() || !self.inc[v].is_empty())
            .collect()
    }
}

/// At most one priority out-arc per node, each of multiplicity one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrioritySet {
    by_node: Vec<Option<ArcId>>,
}

impl PrioritySet {
    pub fn empty(g: &Multigraph) -> Self {
        PrioritySet {
            by_node: vec![None; g.node_count()],
        }
    }

    pub fn new(g: &Multigraph, arcs: impl IntoIterator<Item = ArcId>) -> Result<Self, GraphError> {
        let mut set = PrioritySet::empty(g);
        for a in arcs {
            if a >= g.arc_count() {
                return Err(GraphError::ArcOutOfRange(a));
            }
            let arc = g.arc(a);
            if arc.mult != 1 {
                return Err(GraphError::HeavyPriority(a));
            }
            match set.by_node[arc.tail] {
                Some(b) if b != a => return Err(GraphError::TwoPriorities(arc.tail)),
                _ => set.by_node[arc.tail] = Some(a),
            }
        }
        Ok(set)
    }

    pub fn at(&self, v: Node) -> Option<ArcId> {
        self.by_node.get(v).copied().flatten()
    }

    pub fn contains(&self, a: ArcId, g: &Multigraph) -> bool {
        self.at(g.arc(a).tail) == Some(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.by_node.iter().filter_map(|&a| a)
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops the priority mark of every node whose priority arc is its only
    /// out-arc. Solutions are unchanged by this.
    pub fn demoted(&self, g: &Multigraph) -> PrioritySet {
        let by_node = self
            .by_node
            .iter()
            .enumerate()
            .map(|(v, &a)| a.filter(|_| g.out_arcs(v).len() > 1))
            .collect();
        PrioritySet { by_node }
    }
}

/// A cycle as a sequence of arc occurrences starting and ending at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EulerCycle {
    pub start: Node,
    pub arcs: Vec<ArcId>,
}

/// For every non-sink node that can reach the sink, the chosen out-arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedTree {
    pub sink: Node,
    pub out: Vec<Option<ArcId>>,
}

/// True iff the arcs together with `r` form a connected graph in which every
/// node's in- and out-multiplicity agree.
pub fn check_eulerian(g: &Multigraph, r: Node) -> bool {
    if r >= g.node_count() {
        return false;
    }
    if (0..g.node_count()).any(|v| g.in_degree(v) != g.out_degree(v)) {
        return false;
    }
    // weak connectivity suffices once the graph is balanced
    let active = g.active_nodes(r);
    let mut seen = vec![false; g.node_count()];
    seen[r] = true;
    let mut stack = vec![r];
    while let Some(u) = stack.pop() {
        let next = g.out_arcs(u).iter().map(|&a| g.arc(a).head);
        let prev = g.in_arcs(u).iter().map(|&a| g.arc(a).tail);
        for v in next.chain(prev) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    (0..g.node_count()).all(|v| !active[v] || seen[v])
}

/// An oriented spanning tree towards `sink` over the active nodes.
pub fn oriented_spanning_tree(g: &Multigraph, sink: Node) -> Option<OrientedTree> {
    spanning_tree_avoiding(g, sink, |_| false)
}

/// Breadth-first search from the sink along reversed arcs, skipping arcs for
/// which `excluded` holds. In-arcs are scanned in insertion order.
pub(crate) fn spanning_tree_avoiding(
    g: &Multigraph,
    sink: Node,
    excluded: impl Fn(ArcId) -> bool,
) -> Option<OrientedTree> {
    if sink >= g.node_count() {
        return None;
    }
    let active = g.active_nodes(sink);
    let mut out = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    seen[sink] = true;
    let mut queue = VecDeque::from([sink]);
    while let Some(u) = queue.pop_front() {
        for &a in g.in_arcs(u) {
            if excluded(a) {
                continue;
            }
            let v = g.arc(a).tail;
            if !seen[v] {
                seen[v] = true;
                out[v] = Some(a);
                queue.push_back(v);
            }
        }
    }
    (0..g.node_count())
        .all(|v| !active[v] || seen[v])
        .then_some(OrientedTree { sink, out })
}

/// Finds one `r`-Eulerian cycle respecting `f`.
///
/// Demotes lone priority arcs, takes an `r`-oriented spanning tree `H` of the
/// non-priority arcs, then walks from `r`: an unused priority arc first, then
/// unused arcs outside `H` in insertion order, and the `H` arc last.
pub fn solve_ecp(g: &Multigraph, f: &PrioritySet, r: Node) -> Result<EulerCycle, EcpError> {
    if !check_eulerian(g, r) {
        return Err(EcpError::NotEulerian);
    }
    let total = g.total_multiplicity();
    if total == 0 {
        return Ok(EulerCycle { start: r, arcs: Vec::new() });
    }
    let f = f.demoted(g);
    let tree = spanning_tree_avoiding(g, r, |a| f.contains(a, g)).ok_or(EcpError::NoSpanningTree)?;

    let schedule: Vec<Vec<ArcId>> = (0..g.node_count())
        .map(|v| departure_order(g, &f, &tree, v))
        .collect();
    let mut remaining: Vec<u32> = g.arcs().iter().map(|a| a.mult).collect();
    let mut cursor = vec![0usize; g.node_count()];
    let mut arcs = Vec::with_capacity(total as usize);
    let mut cur = r;
    while let Some(&a) = schedule[cur].get(cursor[cur]) {
        remaining[a] -= 1;
        if remaining[a] == 0 {
            cursor[cur] += 1;
        }
        arcs.push(a);
        cur = g.arc(a).head;
    }
    if arcs.len() as u64 != total || cur != r {
        return Err(EcpError::Stuck { used: arcs.len() as u64, total });
    }
    Ok(EulerCycle { start: r, arcs })
}

fn departure_order(g: &Multigraph, f: &PrioritySet, tree: &OrientedTree, v: Node) -> Vec<ArcId> {
    let prio = f.at(v);
    let last = tree.out[v];
    let mut order: Vec<ArcId> = prio.into_iter().collect();
    order.extend(
        g.out_arcs(v)
            .iter()
            .copied()
            .filter(|&a| Some(a) != prio && Some(a) != last),
    );
    order.extend(last);
    order
}

/// Why a sequence fails to be an `r`-Eulerian cycle respecting `F`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleDefect {
    #[error("arc {0} does not exist")]
    UnknownArc(ArcId),
    #[error("arc at position {0} does not continue from the previous head")]
    Broken(usize),
    #[error("cycle does not return to its start")]
    Open,
    #[error("arc {arc} occurs {seen} times, expected {mult}")]
    WrongCount { arc: ArcId, seen: u64, mult: u32 },
    #[error("node {0} leaves by another arc before its priority arc")]
    PriorityViolated(Node),
    #[error("cycle starts at {0}, expected {1}")]
    WrongStart(Node, Node),
}

/// Independent check that `cycle` is an `r`-Eulerian cycle of `g`
/// respecting `f` (no demotion assumed).
pub fn validate_cycle(
    g: &Multigraph,
    f: &PrioritySet,
    r: Node,
    cycle: &EulerCycle,
) -> Result<(), CycleDefect> {
    if cycle.start != r {
        return Err(CycleDefect::WrongStart(cycle.start, r));
    }
    let mut seen = vec![0u64; g.arc_count()];
    let mut departed = vec![false; g.node_count()];
    let mut cur = r;
    for (i, &a) in cycle.arcs.iter().enumerate() {
        if a >= g.arc_count() {
            return Err(CycleDefect::UnknownArc(a));
        }
        let arc = g.arc(a);
        if arc.tail != cur {
            return Err(CycleDefect::Broken(i));
        }
        if !departed[cur] {
            if let Some(p) = f.at(cur) {
                if p != a {
                    return Err(CycleDefect::PriorityViolated(cur));
                }
            }
            departed[cur] = true;
        }
        seen[a] += 1;
        cur = arc.head;
    }
    if cur != r {
        return Err(CycleDefect::Open);
    }
    for (a, arc) in g.arcs().iter().enumerate() {
        if seen[a] != arc.mult as u64 {
            return Err(CycleDefect::WrongCount { arc: a, seen: seen[a], mult: arc.mult });
        }
    }
    Ok(())
}
