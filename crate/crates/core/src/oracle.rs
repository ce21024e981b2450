//! Exhaustive reference answers, used to cross-check the fast paths.
//!
//! Nothing here shares code with the solvers beyond forward heap
//! construction: texts are enumerated outright and compared structurally,
//! and Eulerian cycles are found by plain backtracking.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::ecp::{EulerCycle, Multigraph, Node, PrioritySet};
use crate::heap::{Alphabet, PositionHeap, SuffixLinkMap};
use crate::inference::ProblemKind;
use crate::sketch::HeapSketch;

/// Default cap on the implied text length.
pub const DEFAULT_MAX_LEN: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("implied text length {len} exceeds the cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("more than {0} solutions")]
    TooMany(usize),
    #[error("sketch lacks what problem {0} needs")]
    WrongKind(ProblemKind),
}

/// Every text of length `node_count - 1` over `alphabet` whose heap matches
/// `s` under the equivalence of `kind`.
pub fn brute_force_oracle(
    s: &HeapSketch,
    kind: ProblemKind,
    alphabet: &Alphabet,
    max_len: usize,
) -> Result<BTreeSet<Vec<u8>>, OracleError> {
    let n = s.node_count() - 1;
    if n > max_len {
        return Err(OracleError::CapExceeded { len: n, cap: max_len });
    }
    let flags = s.flags();
    let ok = match kind {
        ProblemKind::P1 => flags.numbered && flags.labeled,
        ProblemKind::P2 => flags.numbered,
        ProblemKind::P3 => flags.labeled,
        ProblemKind::P4 => flags.links,
    };
    if !ok {
        return Err(OracleError::WrongKind(kind));
    }
    let target_form = matches!(kind, ProblemKind::P3).then(|| labeled_form(s));
    let mut found = BTreeSet::new();
    for_each_valid_text(alphabet.letters(), n, |t| {
        let (h, links) = PositionHeap::from_text(t).expect("enumerated texts are valid");
        let hit = match kind {
            ProblemKind::P1 => same_numbered(s, &h, true),
            ProblemKind::P2 => same_numbered(s, &h, false),
            ProblemKind::P3 => target_form.as_deref() == Some(&heap_form(&h, 0)[..]),
            ProblemKind::P4 => same_shape_with_links(s, &h, &links),
        };
        if hit {
            found.insert(t.to_vec());
        }
    });
    Ok(found)
}

/// Calls `f` on every text of length `n` over `letters` ending in a letter
/// that occurs nowhere else.
pub fn for_each_valid_text(letters: &[u8], n: usize, mut f: impl FnMut(&[u8])) {
    if n == 0 {
        f(&[]);
        return;
    }
    for &last in letters {
        let rest: Vec<u8> = letters.iter().copied().filter(|&c| c != last).collect();
        if rest.is_empty() && n > 1 {
            continue;
        }
        let mut digits = vec![0usize; n - 1];
        let mut text = vec![0u8; n];
        text[n - 1] = last;
        loop {
            for (i, &d) in digits.iter().enumerate() {
                text[i] = rest[d];
            }
            f(&text);
            // odometer, last position fastest
            let mut i = n - 1;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < rest.len() {
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX || n == 1 {
                break;
            }
        }
    }
}

fn same_numbered(s: &HeapSketch, h: &PositionHeap, labels: bool) -> bool {
    let Some(by_number) = s.node_by_number() else {
        return false;
    };
    if by_number.len() != h.node_count() {
        return false;
    }
    (1..h.node_count()).all(|i| {
        let v = by_number[i];
        let parent_number = s.parent(v).and_then(|p| s.number(p));
        parent_number == h.parent(i) && (!labels || s.label(v) == h.label(i))
    })
}

fn labeled_form(s: &HeapSketch) -> Vec<u8> {
    fn go(s: &HeapSketch, v: usize, out: &mut Vec<u8>) {
        let mut kids: Vec<(u8, usize)> = s.children(v).iter().map(|&c| (s.label(c).unwrap(), c)).collect();
        kids.sort();
        out.push(b'(');
        for (l, c) in kids {
            out.push(l);
            go(s, c, out);
        }
        out.push(b')');
    }
    let mut out = Vec::new();
    go(s, 0, &mut out);
    out
}

fn heap_form(h: &PositionHeap, v: usize) -> Vec<u8> {
    let mut out = vec![b'('];
    for &(l, c) in h.children(v) {
        out.push(l);
        out.extend(heap_form(h, c));
    }
    out.push(b')');
    out
}

/// Unlabeled rooted-tree isomorphism that also carries the link map, by
/// backtracking over children with matching subtree shapes.
pub fn same_shape_with_links(s: &HeapSketch, h: &PositionHeap, links: &SuffixLinkMap) -> bool {
    let m = s.node_count();
    if m != h.node_count() || s.link(0).is_some() {
        return false;
    }
    let s_kids: Vec<Vec<usize>> = (0..m).map(|v| s.children(v).to_vec()).collect();
    let h_kids: Vec<Vec<usize>> = (0..m).map(|v| h.children(v).iter().map(|&(_, c)| c).collect()).collect();
    let mut interner = HashMap::new();
    let s_shape = shapes(&s_kids, &mut interner);
    let h_shape = shapes(&h_kids, &mut interner);
    if s_shape[0] != h_shape[0] {
        return false;
    }
    // parents before children and link targets (one level up) before sources
    let order = s.by_depth();
    let mut map = vec![usize::MAX; m];
    let mut used = vec![false; m];
    map[0] = 0;
    used[0] = true;
    let mut next = vec![0usize; m];
    let mut k = 1;
    while k < m {
        let v = order[k];
        if map[v] != usize::MAX {
            used[map[v]] = false;
            map[v] = usize::MAX;
        }
        let cands = &h_kids[map[s.parent(v).unwrap()]];
        let mut placed = false;
        while next[k] < cands.len() {
            let c = cands[next[k]];
            next[k] += 1;
            let linked = match s.link(v) {
                Some(t) => map[t] != usize::MAX && links.get(c) == Some(map[t]),
                None => false,
            };
            if !used[c] && s_shape[v] == h_shape[c] && linked {
                map[v] = c;
                used[c] = true;
                placed = true;
                break;
            }
        }
        if placed {
            k += 1;
            if k < m {
                next[k] = 0;
            }
        } else {
            next[k] = 0;
            if k == 1 {
                return false;
            }
            k -= 1;
        }
    }
    true
}

/// Subtree shapes as small integers, equal iff the unlabeled subtrees are
/// isomorphic (given a shared interner).
fn shapes(kids: &[Vec<usize>], interner: &mut HashMap<Vec<usize>, usize>) -> Vec<usize> {
    let m = kids.len();
    let mut order = Vec::with_capacity(m);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(kids[v].iter().copied());
    }
    let mut shape = vec![0; m];
    for &v in order.iter().rev() {
        let mut key: Vec<usize> = kids[v].iter().map(|&c| shape[c]).collect();
        key.sort_unstable();
        let fresh = interner.len();
        shape[v] = *interner.entry(key).or_insert(fresh);
    }
    shape
}

/// `h_0, ..., h_n` straight from the definition: `h_i` is the shortest
/// prefix of `T[i..]` that is not among the earlier ones. `None` when some
/// suffix has no such prefix, which happens only for invalid texts.
pub fn naive_heap_labels(text: &[u8]) -> Option<Vec<Vec<u8>>> {
    let mut seen: HashSet<Vec<u8>> = HashSet::from([Vec::new()]);
    let mut out = vec![Vec::new()];
    for i in 0..text.len() {
        let h = (1..=text.len() - i)
            .map(|l| text[i..i + l].to_vec())
            .find(|p| !seen.contains(p))?;
        seen.insert(h.clone());
        out.push(h);
    }
    Some(out)
}

/// All `r`-Eulerian cycles of `g` respecting `f`, by backtracking over arc
/// choices with copies of an arc treated as identical.
pub fn ecp_cycles(
    g: &Multigraph,
    f: &PrioritySet,
    r: Node,
    limit: usize,
) -> Result<Vec<EulerCycle>, OracleError> {
    struct Search<'a> {
        g: &'a Multigraph,
        f: &'a PrioritySet,
        r: Node,
        limit: usize,
        total: usize,
        remaining: Vec<u32>,
        departed: Vec<bool>,
        path: Vec<usize>,
        out: Vec<EulerCycle>,
    }
    impl Search<'_> {
        fn go(&mut self, cur: Node) -> Result<(), OracleError> {
            if self.path.len() == self.total {
                if cur == self.r {
                    if self.out.len() == self.limit {
                        return Err(OracleError::TooMany(self.limit));
                    }
                    self.out.push(EulerCycle { start: self.r, arcs: self.path.clone() });
                }
                return Ok(());
            }
            let first = !self.departed[cur];
            for &a in self.g.out_arcs(cur) {
                if self.remaining[a] == 0 {
                    continue;
                }
                if first {
                    if let Some(p) = self.f.at(cur) {
                        if p != a {
                            continue;
                        }
                    }
                }
                self.remaining[a] -= 1;
                self.departed[cur] = true;
                self.path.push(a);
                let res = self.go(self.g.arc(a).head);
                self.path.pop();
                self.departed[cur] = !first;
                self.remaining[a] += 1;
                res?;
            }
            Ok(())
        }
    }
    let mut search = Search {
        g,
        f,
        r,
        limit,
        total: g.total_multiplicity() as usize,
        remaining: g.arcs().iter().map(|a| a.mult).collect(),
        departed: vec![false; g.node_count()],
        path: Vec::new(),
        out: Vec::new(),
    };
    search.go(r)?;
    Ok(search.out)
}
