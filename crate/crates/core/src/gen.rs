//! Random instances for tests and the command line.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ecp::{Multigraph, Node, PrioritySet};
use crate::heap::Alphabet;
use crate::sketch::{Flags, HeapSketch, SketchBuilder};

/// A uniformly random valid text of length `len`: the last letter is drawn
/// from the whole alphabet and the others avoid it. `None` if the alphabet
/// is too small for the length.
pub fn random_text<R: Rng + ?Sized>(rng: &mut R, len: usize, a: &Alphabet) -> Option<Vec<u8>> {
    if len == 0 {
        return Some(Vec::new());
    }
    let last = *a.letters().choose(rng)?;
    let rest: Vec<u8> = a.letters().iter().copied().filter(|&c| c != last).collect();
    if len > 1 && rest.is_empty() {
        return None;
    }
    let mut text: Vec<u8> = (0..len - 1).map(|_| *rest.choose(rng).unwrap()).collect();
    text.push(last);
    Some(text)
}

/// A random ECP instance on at most `max_nodes` nodes with total
/// multiplicity at most `max_total`, rooted at node 0.
///
/// Arcs come from random closed walks through already reached nodes, so
/// the graph is Eulerian unless `unbalance` asks for one extra stray arc.
/// Each node gets a random priority arc of multiplicity one with
/// probability one half.
pub fn random_ecp_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_nodes: usize,
    max_total: u32,
    unbalance: bool,
) -> (Multigraph, PrioritySet, Node) {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let mut mult = vec![vec![0u32; n]; n];
    let mut total = 0;
    let mut reached = vec![0];
    while n > 1 && total + 2 <= max_total && (total == 0 || rng.gen_bool(0.9)) {
        let budget = (max_total - total).min(4) as usize;
        let len = rng.gen_range(2..=budget.max(2));
        let start = *reached.choose(rng).unwrap();
        let mut walk = vec![start];
        for _ in 1..len {
            let prev = *walk.last().unwrap();
            let mut next = rng.gen_range(0..n - 1);
            if next >= prev {
                next += 1;
            }
            walk.push(next);
        }
        if *walk.last().unwrap() == start {
            walk.pop();
        }
        if walk.len() < 2 {
            continue;
        }
        for i in 0..walk.len() {
            let (u, v) = (walk[i], walk[(i + 1) % walk.len()]);
            mult[u][v] += 1;
            total += 1;
            if !reached.contains(&v) {
                reached.push(v);
            }
        }
    }
    if unbalance && n > 1 {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        mult[u][v] += 1;
    }
    let mut g = Multigraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if mult[u][v] > 0 {
                g.add_arc(u, v, mult[u][v]).unwrap();
            }
        }
    }
    let mut priority = Vec::new();
    for v in 0..n {
        let light: Vec<_> = g.out_arcs(v).iter().copied().filter(|&a| g.arc(a).mult == 1).collect();
        if !light.is_empty() && rng.gen_bool(0.5) {
            priority.push(*light.choose(rng).unwrap());
        }
    }
    let f = PrioritySet::new(&g, priority).unwrap();
    (g, f, 0)
}

/// A random labeled tree with `nodes` nodes and distinct sibling labels,
/// each node attached under a random earlier node that still has a free
/// letter.
pub fn random_labeled_tree<R: Rng + ?Sized>(rng: &mut R, nodes: usize, a: &Alphabet) -> HeapSketch {
    let mut b = SketchBuilder::new("n0");
    let mut free: Vec<Vec<u8>> = vec![a.letters().to_vec()];
    let mut open = vec![0usize];
    for v in 1..nodes.max(1) {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        let i = rng.gen_range(0..free[p].len());
        let c = free[p].swap_remove(i);
        if free[p].is_empty() {
            open.swap_remove(slot);
        }
        b.edge(&format!("n{p}"), format!("n{v}"), Some(c)).unwrap();
        free.push(a.letters().to_vec());
        open.push(v);
    }
    b.build(Flags { labeled: true, ..Flags::default() }).unwrap()
}
