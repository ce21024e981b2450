//! Enumeration of oriented spanning trees (in-arborescences) by the
//! Gabow–Myers backtracking scheme.
//!
//! Work happens on the reversed graph, where an in-tree towards `r` is an
//! out-tree grown from `r`: arc `a = (u, v)` reads as the edge `v -> u`. The
//! frontier `F` is a stack of edges leaving the partial tree, kept in a
//! doubly linked list so entries can be unlinked and relinked in LIFO order.
//! After all trees containing the partial tree plus edge `e = (v, w)` have
//! been produced, `e` is deleted; further trees without it exist iff some
//! remaining edge `(u, w)` has `u` outside the subtree of `w` in the last
//! tree produced. Each tree costs `O(|E|)` amortized.

use super::{ArcId, Multigraph, Node};

#[derive(Debug)]
struct Frame {
    edge: ArcId,
    pushed: usize,
    unlinked: Vec<ArcId>,
    deleted: Vec<ArcId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Enter,
    Pick,
    Resume,
    Done,
}

/// Iterator over the oriented spanning trees of the active nodes towards
/// `root`, using only arcs accepted by the filter given at construction.
/// Each item maps every node to its chosen out-arc (`None` for the root and
/// inactive nodes).
#[derive(Debug)]
pub struct Arborescences {
    graph: Multigraph,
    allowed: Vec<bool>,
    root: Node,
    target: usize,
    size: usize,
    in_tree: Vec<bool>,
    chosen: Vec<Option<ArcId>>,
    deleted: Vec<bool>,
    // frontier list; index `arc_count` is the sentinel
    next: Vec<usize>,
    prev: Vec<usize>,
    linked: Vec<bool>,
    frames: Vec<Frame>,
    mode: Mode,
    // preorder interval of the last tree, for descendant tests
    pre: Vec<usize>,
    last: Vec<usize>,
}

impl Arborescences {
    pub fn new(graph: &Multigraph, root: Node, allowed: impl Fn(ArcId) -> bool) -> Self {
        let graph = graph.clone();
        let m = graph.arc_count();
        let n = graph.node_count();
        let allowed: Vec<bool> = (0..m).map(allowed).collect();
        let active = graph.active_nodes(root);
        let target = active.iter().filter(|&&a| a).count() - 1;
        let mut it = Arborescences {
            graph,
            allowed,
            root,
            target,
            size: 0,
            in_tree: vec![false; n],
            chosen: vec![None; n],
            deleted: vec![false; m],
            next: vec![m; m + 1],
            prev: vec![m; m + 1],
            linked: vec![false; m],
            frames: Vec::new(),
            mode: Mode::Enter,
            pre: vec![0; n],
            last: vec![0; n],
        };
        it.in_tree[root] = true;
        if !it.spans(&active) {
            it.mode = Mode::Done;
            return it;
        }
        for i in 0..it.graph.in_arcs(root).len() {
            let a = it.graph.in_arcs(root)[i];
            if it.allowed[a] {
                it.push(a);
            }
        }
        it
    }

    fn spans(&self, active: &[bool]) -> bool {
        let mut seen = vec![false; self.graph.node_count()];
        seen[self.root] = true;
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            for &a in self.graph.in_arcs(u) {
                let v = self.graph.arc(a).tail;
                if self.allowed[a] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        (0..seen.len()).all(|v| !active[v] || seen[v])
    }

    fn sentinel(&self) -> usize {
        self.graph.arc_count()
    }

    fn push(&mut self, a: ArcId) {
        let s = self.sentinel();
        let first = self.next[s];
        self.next[a] = first;
        self.prev[a] = s;
        self.prev[first] = a;
        self.next[s] = a;
        self.linked[a] = true;
    }

    fn pop(&mut self) -> Option<ArcId> {
        let s = self.sentinel();
        let a = self.next[s];
        if a == s {
            return None;
        }
        self.unlink(a);
        Some(a)
    }

    fn unlink(&mut self, a: ArcId) {
        let (p, n) = (self.prev[a], self.next[a]);
        self.next[p] = n;
        self.prev[n] = p;
        self.linked[a] = false;
    }

    // `a` keeps its own prev/next, so relinking in reverse order restores the list
    fn relink(&mut self, a: ArcId) {
        let (p, n) = (self.prev[a], self.next[a]);
        self.next[p] = a;
        self.prev[n] = a;
        self.linked[a] = true;
    }

    fn record_last_tree(&mut self) {
        let n = self.graph.node_count();
        let mut kids: Vec<Vec<Node>> = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(a) = self.chosen[v] {
                kids[self.graph.arc(a).head].push(v);
            }
        }
        let mut clock = 0;
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                self.last[v] = clock - 1;
                continue;
            }
            self.pre[v] = clock;
            clock += 1;
            stack.push((v, true));
            for &c in kids[v].iter().rev() {
                stack.push((c, false));
            }
        }
    }

    // every active node is in the last tree
    fn is_descendant(&self, u: Node, w: Node) -> bool {
        self.pre[w] <= self.pre[u] && self.pre[u] <= self.last[w]
    }

    fn finish_frame(&mut self) {
        let frame = self.frames.pop().expect("finishing a live frame");
        for &a in frame.deleted.iter().rev() {
            self.deleted[a] = false;
            self.push(a);
        }
        self.mode = if self.frames.is_empty() { Mode::Done } else { Mode::Resume };
    }
}

impl Iterator for Arborescences {
    type Item = Vec<Option<ArcId>>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            match self.mode {
                Mode::Done => return None,
                Mode::Enter => {
                    if self.size == self.target {
                        self.record_last_tree();
                        self.mode = if self.frames.is_empty() { Mode::Done } else { Mode::Resume };
                        return Some(self.chosen.clone());
                    }
                    self.frames.push(Frame {
                        edge: usize::MAX,
                        pushed: 0,
                        unlinked: Vec::new(),
                        deleted: Vec::new(),
                    });
                    self.mode = Mode::Pick;
                }
                Mode::Pick => {
                    let Some(e) = self.pop() else {
                        // cannot happen while a spanning tree exists
                        self.finish_frame();
                        continue;
                    };
                    let w = self.graph.arc(e).tail;
                    self.in_tree[w] = true;
                    self.chosen[w] = Some(e);
                    self.size += 1;
                    let mut pushed = 0;
                    for i in 0..self.graph.in_arcs(w).len() {
                        let a = self.graph.in_arcs(w)[i];
                        let x = self.graph.arc(a).tail;
                        if self.allowed[a] && !self.deleted[a] && !self.in_tree[x] {
                            self.push(a);
                            pushed += 1;
                        }
                    }
                    let mut unlinked = Vec::new();
                    for i in 0..self.graph.out_arcs(w).len() {
                        let a = self.graph.out_arcs(w)[i];
                        if self.linked[a] {
                            self.unlink(a);
                            unlinked.push(a);
                        }
                    }
                    let frame = self.frames.last_mut().unwrap();
                    frame.edge = e;
                    frame.pushed = pushed;
                    frame.unlinked = unlinked;
                    self.mode = Mode::Enter;
                }
                Mode::Resume => {
                    let frame = self.frames.last_mut().unwrap();
                    let e = frame.edge;
                    let pushed = frame.pushed;
                    let unlinked = std::mem::take(&mut frame.unlinked);
                    for &a in unlinked.iter().rev() {
                        self.relink(a);
                    }
                    for _ in 0..pushed {
                        self.pop();
                    }
                    let w = self.graph.arc(e).tail;
                    self.in_tree[w] = false;
                    self.chosen[w] = None;
                    self.size -= 1;
                    self.deleted[e] = true;
                    self.frames.last_mut().unwrap().deleted.push(e);

                    let bridge = !self.graph.out_arcs(w).iter().any(|&a| {
                        let u = self.graph.arc(a).head;
                        self.allowed[a] && !self.deleted[a] && !self.is_descendant(u, w)
                    });
                    if bridge {
                        self.finish_frame();
                    } else {
                        self.mode = Mode::Pick;
                    }
                }
            }
        }
    }
}
