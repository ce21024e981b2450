use std::collections::BTreeSet;

use posheap_core::ecp::{
    check_eulerian, count_ecp, enumerate_ecp, solve_ecp, validate_cycle, Arborescences, EulerCycle, Multigraph,
    PrioritySet,
};
use posheap_core::gen::random_ecp_instance;
use posheap_core::oracle::ecp_cycles;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every choice of one out-arc per non-root active node whose pointers all
/// lead to the root, by exhaustive product.
fn brute_arborescences(g: &Multigraph, r: usize, allowed: impl Fn(usize) -> bool) -> BTreeSet<Vec<Option<usize>>> {
    let active = g.active_nodes(r);
    let nodes: Vec<usize> = (0..g.node_count()).filter(|&v| active[v] && v != r).collect();
    let choices: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&v| g.out_arcs(v).iter().copied().filter(|&a| allowed(a)).collect())
        .collect();
    let mut out = BTreeSet::new();
    if choices.iter().any(Vec::is_empty) {
        return out;
    }
    let mut idx = vec![0; nodes.len()];
    loop {
        let mut pick = vec![None; g.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            pick[v] = Some(choices[i][idx[i]]);
        }
        let reaches = nodes.iter().all(|&v| {
            let mut cur = v;
            for _ in 0..=nodes.len() {
                if cur == r {
                    return true;
                }
                cur = g.arc(pick[cur].unwrap()).head;
            }
            cur == r
        });
        if reaches {
            out.insert(pick);
        }
        let mut i = 0;
        loop {
            if i == nodes.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn arborescences_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa5b0);
    for case in 0..400 {
        let (g, f, r) = random_ecp_instance(&mut rng, 6, 12, case % 7 == 0);
        let allowed = |a: usize| !f.contains(a, &g);
        let fast: Vec<_> = Arborescences::new(&g, r, allowed).collect();
        let distinct: BTreeSet<_> = fast.iter().cloned().collect();
        assert_eq!(distinct.len(), fast.len(), "case {case}: repeated tree");
        assert_eq!(distinct, brute_arborescences(&g, r, allowed), "case {case}: {g:?}");
    }
}

#[test]
fn counts_and_streams_match_backtracking() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xec9);
    for case in 0..600 {
        let (g, f, r) = random_ecp_instance(&mut rng, 5, 8, case % 9 == 0);
        let brute: BTreeSet<EulerCycle> = ecp_cycles(&g, &f, r, 100_000).unwrap().into_iter().collect();
        let count = count_ecp(&g, &f, r).to_u64().unwrap() as usize;
        assert_eq!(count, brute.len(), "case {case}: {g:?} {f:?}");

        let stream: Vec<EulerCycle> = enumerate_ecp(&g, &f, r).collect();
        for c in &stream {
            validate_cycle(&g, &f, r, c).unwrap();
        }
        let set: BTreeSet<_> = stream.iter().cloned().collect();
        assert_eq!(set.len(), stream.len(), "case {case}: duplicate cycle");
        assert_eq!(set, brute, "case {case}");

        match solve_ecp(&g, &f, r) {
            Ok(c) => {
                validate_cycle(&g, &f, r, &c).unwrap();
                assert!(count > 0);
            }
            Err(_) => assert_eq!(count, 0, "case {case}: solver gave up on a solvable instance"),
        }
    }
}

#[test]
fn best_count_without_priorities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe57);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(2..=5);
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.45) {
                    g.add_arc(u, v, 1).unwrap();
                }
            }
        }
        if !check_eulerian(&g, 0) {
            continue;
        }
        checked += 1;
        let none = PrioritySet::empty(&g);
        let brute = ecp_cycles(&g, &none, 0, 1_000_000).unwrap().len();
        assert_eq!(count_ecp(&g, &none, 0).to_u64(), Some(brute as u64), "{g:?}");
    }
}

#[test]
fn heavy_multiplicities() {
    // two nodes joined by k parallel copies each way: one cycle, copies are
    // indistinguishable
    for k in 1..6 {
        let mut g = Multigraph::new(2);
        g.add_arc(0, 1, k).unwrap();
        g.add_arc(1, 0, k).unwrap();
        let none = PrioritySet::empty(&g);
        assert_eq!(count_ecp(&g, &none, 0).to_u64(), Some(1));
        assert_eq!(enumerate_ecp(&g, &none, 0).count(), 1);
    }
    // a hub with three petals of multiplicity 2: 6!/(2!^3) / ... by brute force
    let mut g = Multigraph::new(4);
    for p in 1..4 {
        g.add_arc(0, p, 2).unwrap();
        g.add_arc(p, 0, 2).unwrap();
    }
    let none = PrioritySet::empty(&g);
    let brute = ecp_cycles(&g, &none, 0, 10_000).unwrap().len() as u64;
    assert_eq!(count_ecp(&g, &none, 0).to_u64(), Some(brute));
    assert_eq!(enumerate_ecp(&g, &none, 0).count() as u64, brute);
}
