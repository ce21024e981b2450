use crate::ecp::{enumerate_ecp, EcpEnumerator};
use crate::sketch::HeapSketch;
use crate::trace::{read_text_from_cycle, TraceGraph};

use super::symmetry::LetterSymmetry;
use super::verify_labeled;

/// Injective sequences of length `k` over `0..n`, in lexicographic order.
#[derive(Clone, Debug)]
pub struct KPermutations {
    n: usize,
    k: usize,
    cur: Option<Vec<usize>>,
    started: bool,
}

impl KPermutations {
    pub fn new(n: usize, k: usize) -> Self {
        KPermutations { n, k, cur: None, started: false }
    }
}

impl Iterator for KPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            if self.k <= self.n {
                self.cur = Some((0..self.k).collect());
            }
            return self.cur.clone();
        }
        let f = self.cur.as_mut()?;
        let mut used = vec![false; self.n];
        for i in (0..self.k).rev() {
            used.iter_mut().for_each(|u| *u = false);
            for &x in &f[..i] {
                used[x] = true;
            }
            let Some(bigger) = (f[i] + 1..self.n).find(|&x| !used[x]) else {
                continue;
            };
            f[i] = bigger;
            used[bigger] = true;
            let mut free = (0..self.n).filter(|&x| !used[x]);
            for slot in &mut f[i + 1..] {
                *slot = free.next().unwrap();
            }
            return Some(f.clone());
        }
        self.cur = None;
        None
    }
}

/// Letter renaming sending `letters[i]` to `letters[f[i]]`.
fn renaming(letters: &[u8], f: &[usize]) -> [u8; 256] {
    let mut map = [0u8; 256];
    for (i, &c) in letters.iter().enumerate() {
        map[c as usize] = c;
        if let Some(&j) = f.get(i) {
            map[c as usize] = letters[j];
        }
    }
    map
}

fn apply(map: &[u8; 256], text: &[u8]) -> Vec<u8> {
    text.iter().map(|&c| map[c as usize]).collect()
}

/// A stream of recovered texts; each is produced once, in a fixed order.
pub struct TextStream {
    inner: Inner,
}

enum Inner {
    Empty,
    Single(Option<Vec<u8>>),
    /// The base text under every root labeling.
    Relabeled {
        base: Vec<u8>,
        letters: Vec<u8>,
        perms: KPermutations,
    },
    /// Texts of the cycles of one trace graph; the first is re-verified.
    Cycles {
        graph: Box<TraceGraph>,
        cycles: EcpEnumerator,
        check: Option<HeapSketch>,
    },
    /// Root labelings up to symmetry, each crossed with all cycles.
    Linked {
        graph: Box<TraceGraph>,
        letters: Vec<u8>,
        perms: KPermutations,
        symmetry: LetterSymmetry,
        current: Option<([u8; 256], EcpEnumerator)>,
    },
}

impl TextStream {
    pub(crate) fn empty() -> Self {
        TextStream { inner: Inner::Empty }
    }

    pub(crate) fn single(text: Vec<u8>) -> Self {
        TextStream { inner: Inner::Single(Some(text)) }
    }

    pub(crate) fn relabeled(base: Vec<u8>, letters: Vec<u8>, k: usize) -> Self {
        let perms = KPermutations::new(letters.len(), k);
        TextStream { inner: Inner::Relabeled { base, letters, perms } }
    }

    pub(crate) fn cycles(graph: TraceGraph, check: HeapSketch) -> Self {
        let cycles = enumerate_ecp(&graph.graph, &graph.priority, graph.root);
        TextStream {
            inner: Inner::Cycles { graph: Box::new(graph), cycles, check: Some(check) },
        }
    }

    pub(crate) fn linked(graph: TraceGraph, letters: Vec<u8>, k: usize, symmetry: LetterSymmetry) -> Self {
        let perms = KPermutations::new(letters.len(), k);
        TextStream {
            inner: Inner::Linked { graph: Box::new(graph), letters, perms, symmetry, current: None },
        }
    }
}

impl Iterator for TextStream {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        match &mut self.inner {
            Inner::Empty => None,
            Inner::Single(t) => t.take(),
            Inner::Relabeled { base, letters, perms } => {
                let f = perms.next()?;
                Some(apply(&renaming(letters, &f), base))
            }
            Inner::Cycles { graph, cycles, check } => {
                let cycle = cycles.next()?;
                let (text, _) = read_text_from_cycle(graph, &cycle);
                if let Some(s) = check.take() {
                    if verify_labeled(&s, &text, false).is_err() {
                        self.inner = Inner::Empty;
                        return None;
                    }
                }
                Some(text)
            }
            Inner::Linked { graph, letters, perms, symmetry, current } => loop {
                if let Some((map, cycles)) = current {
                    if let Some(cycle) = cycles.next() {
                        let (text, _) = read_text_from_cycle(graph, &cycle);
                        return Some(apply(map, &text));
                    }
                }
                let f = loop {
                    let f = perms.next()?;
                    if symmetry.is_class_minimum(&f) {
                        break f;
                    }
                };
                let cycles = enumerate_ecp(&graph.graph, &graph.priority, graph.root);
                *current = Some((renaming(letters, &f), cycles));
            },
        }
    }
}

impl std::fmt::Debug for TextStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.inner {
            Inner::Empty => "empty",
            Inner::Single(_) => "single",
            Inner::Relabeled { .. } => "relabeled",
            Inner::Cycles { .. } => "cycles",
            Inner::Linked { .. } => "linked",
        };
        f.debug_struct("TextStream").field("kind", &kind).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_permutations() {
        let all: Vec<_> = KPermutations::new(3, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 2], vec![2, 0], vec![2, 1]]
        );
        assert_eq!(KPermutations::new(4, 4).count(), 24);
        assert_eq!(KPermutations::new(5, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(KPermutations::new(2, 3).count(), 0);
    }

    #[test]
    fn renaming_moves_used_letters_only() {
        let map = renaming(b"abc", &[2, 0]);
        assert_eq!(apply(&map, b"abab"), b"caca".to_vec());
    }
}
