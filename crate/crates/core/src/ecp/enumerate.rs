use super::{check_eulerian, Arborescences, ArcId, EulerCycle, Multigraph, Node, PrioritySet};

/// Streams every `r`-Eulerian cycle respecting the priority set exactly once.
///
/// Cycles are in bijection with pairs (last-exit tree, departure orders):
/// for each `r`-oriented spanning tree of the non-priority arcs, every node
/// leaves by its priority arc first, then by any multiset ordering of its
/// other departures, and finally by the last copy of its tree arc (the start
/// node has no tree arc). Trees come in Gabow–Myers order; within a tree
/// the per-node orderings advance like an odometer in lexicographic order.
#[derive(Debug)]
pub struct EcpEnumerator {
    graph: Multigraph,
    root: Node,
    priority: PrioritySet,
    state: State,
}

#[derive(Debug)]
enum State {
    Single,
    Trees {
        trees: Box<Arborescences>,
        current: Option<Orderings>,
    },
    Done,
}

#[derive(Debug)]
struct Orderings {
    tree: Vec<Option<ArcId>>,
    middle: Vec<Vec<ArcId>>,
    fresh: bool,
}

pub fn enumerate_ecp(g: &Multigraph, f: &PrioritySet, r: Node) -> EcpEnumerator {
    let priority = f.demoted(g);
    let state = if !check_eulerian(g, r) {
        State::Done
    } else if g.arc_count() == 0 {
        State::Single
    } else {
        let p = priority.clone();
        let graph = g.clone();
        State::Trees {
            trees: Box::new(Arborescences::new(g, r, move |a| !p.contains(a, &graph))),
            current: None,
        }
    };
    EcpEnumerator {
        graph: g.clone(),
        root: r,
        priority,
        state,
    }
}

impl EcpEnumerator {
    fn orderings_for(&self, tree: Vec<Option<ArcId>>) -> Orderings {
        let g = &self.graph;
        let middle = (0..g.node_count())
            .map(|v| {
                let mut seq = Vec::new();
                for &a in g.out_arcs(v) {
                    if self.priority.at(v) == Some(a) {
                        continue;
                    }
                    let copies = g.arc(a).mult as usize - usize::from(tree[v] == Some(a));
                    seq.extend(std::iter::repeat_n(a, copies));
                }
                seq.sort_unstable();
                seq
            })
            .collect();
        Orderings {
            tree,
            middle,
            fresh: true,
        }
    }

    fn walk(&self, ord: &Orderings) -> EulerCycle {
        let g = &self.graph;
        let total = g.total_multiplicity() as usize;
        let mut cursor = vec![0usize; g.node_count()];
        let mut arcs = Vec::with_capacity(total);
        let mut cur = self.root;
        for _ in 0..total {
            let k = cursor[cur];
            cursor[cur] += 1;
            let prio = self.priority.at(cur);
            let offset = usize::from(prio.is_some());
            let a = if let (0, Some(p)) = (k, prio) {
                p
            } else if k - offset < ord.middle[cur].len() {
                ord.middle[cur][k - offset]
            } else {
                ord.tree[cur].expect("a node runs out of departures only at its tree arc")
            };
            arcs.push(a);
            cur = g.arc(a).head;
        }
        debug_assert_eq!(cur, self.root);
        EulerCycle {
            start: self.root,
            arcs,
        }
    }
}

impl Iterator for EcpEnumerator {
    type Item = EulerCycle;

    fn next(&mut self) -> Option<EulerCycle> {
        loop {
            match &mut self.state {
                State::Done => return None,
                State::Single => {
                    self.state = State::Done;
                    return Some(EulerCycle {
                        start: self.root,
                        arcs: Vec::new(),
                    });
                }
                State::Trees { trees, current } => {
                    if let Some(ord) = current {
                        if ord.fresh || advance(&mut ord.middle) {
                            ord.fresh = false;
                            let ord = current.take().unwrap();
                            let cycle = self.walk(&ord);
                            if let State::Trees { current, .. } = &mut self.state {
                                *current = Some(ord);
                            }
                            return Some(cycle);
                        }
                    }
                    match trees.next() {
                        Some(tree) => {
                            let ord = self.orderings_for(tree);
                            if let State::Trees { current, .. } = &mut self.state {
                                *current = Some(ord);
                            }
                        }
                        None => self.state = State::Done,
                    }
                }
            }
        }
    }
}

/// Steps the odometer of per-node orderings; false once every ordering has
/// wrapped back to sorted order.
fn advance(seqs: &mut [Vec<ArcId>]) -> bool {
    seqs.iter_mut().any(|s| next_permutation(s))
}

/// Lexicographic successor of a multiset permutation; on the last one,
/// resets to sorted order and returns false.
pub(crate) fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        a.reverse();
        return false;
    };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::super::tests::{chord_triangle, two_cycle};
    use super::super::validate_cycle;
    use super::*;

    #[test]
    fn multiset_permutations() {
        let mut v = vec![1, 1, 2];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(v, vec![1, 1, 2]);
    }

    #[test]
    fn small_streams() {
        let g = two_cycle();
        let all: Vec<_> = enumerate_ecp(&g, &PrioritySet::empty(&g), 0).collect();
        assert_eq!(all, vec![EulerCycle { start: 0, arcs: vec![0, 1] }]);

        let (g, f) = chord_triangle();
        let all: Vec<_> = enumerate_ecp(&g, &f, 0).collect();
        assert_eq!(all.len(), 1);
        validate_cycle(&g, &f, 0, &all[0]).unwrap();
        let free: Vec<_> = enumerate_ecp(&g, &PrioritySet::empty(&g), 0).collect();
        assert_eq!(free.len(), 2);
    }

    #[test]
    fn empty_graph_has_the_empty_cycle() {
        let g = Multigraph::new(1);
        let all: Vec<_> = enumerate_ecp(&g, &PrioritySet::empty(&g), 0).collect();
        assert_eq!(all, vec![EulerCycle { start: 0, arcs: vec![] }]);
    }
}
