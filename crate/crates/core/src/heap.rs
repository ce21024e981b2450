//! Position heaps with suffix links.
//!
//! Node `i` of `PH(T)` is spelled by `h_i`, the shortest prefix of `T[i..]`
//! that differs from every earlier `h_j` (`h_0` is the empty string). The
//! heap is built left to right, starting each descent at the suffix link of
//! the previous node, so the total descent length telescopes to `O(n)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Dense node index. Heap nodes are numbered `0..=n` with the root at 0.
pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("letter {0:?} occurs twice in the alphabet")]
    Duplicate(char),
    #[error("byte 0x{0:02x} is not a printable letter")]
    NotPrintable(u8),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeapError {
    #[error("last letter of the text is not unique")]
    InvalidText,
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),
}

/// An ordered set of distinct printable single-byte letters.
///
/// The order is the tie-breaking order used by every deterministic choice
/// downstream (root-edge assignment, permutation order).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<u8>,
}

impl Alphabet {
    pub fn new(letters: &[u8]) -> Result<Self, AlphabetError> {
        if letters.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut seen = [false; 256];
        for &c in letters {
            if !is_letter(c) {
                return Err(AlphabetError::NotPrintable(c));
            }
            if seen[c as usize] {
                return Err(AlphabetError::Duplicate(c as char));
            }
            seen[c as usize] = true;
        }
        Ok(Alphabet {
            letters: letters.to_vec(),
        })
    }

    /// The distinct letters of `text` in byte order, or `None` for an empty text.
    pub fn of_text(text: &[u8]) -> Option<Result<Self, AlphabetError>> {
        let mut seen = [false; 256];
        for &c in text {
            seen[c as usize] = true;
        }
        let letters: Vec<u8> = (0..=255u8).filter(|&c| seen[c as usize]).collect();
        if letters.is_empty() {
            None
        } else {
            Some(Alphabet::new(&letters))
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, c: u8) -> bool {
        self.letters.contains(&c)
    }

    pub fn rank(&self, c: u8) -> Option<usize> {
        self.letters.iter().position(|&x| x == c)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", String::from_utf8_lossy(&self.letters))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.letters))
    }
}

impl FromStr for Alphabet {
    type Err = AlphabetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Alphabet::new(s.as_bytes())
    }
}

/// Printable, non-space ASCII.
pub fn is_letter(c: u8) -> bool {
    c.is_ascii_graphic()
}

/// True iff `text` is empty or its final letter occurs nowhere else.
pub fn is_valid_text(text: &[u8]) -> bool {
    match text.split_last() {
        None => true,
        Some((last, rest)) => !rest.contains(last),
    }
}

/// Suffix links `S : V \ {root} -> V`, stored densely and undefined at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixLinkMap {
    links: Vec<Option<NodeId>>,
}

impl SuffixLinkMap {
    pub fn new(links: Vec<Option<NodeId>>) -> Self {
        SuffixLinkMap { links }
    }

    pub fn get(&self, v: NodeId) -> Option<NodeId> {
        self.links.get(v).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// `(from, to)` pairs in node order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter_map(|(v, s)| s.map(|s| (v, s)))
    }

    pub fn as_slice(&self) -> &[Option<NodeId>] {
        &self.links
    }
}

/// `PH(T)`: a numbered, edge-labeled tree over nodes `0..=n`.
#[derive(Clone, Debug)]
pub struct PositionHeap {
    text: Vec<u8>,
    parent: Vec<NodeId>,
    label: Vec<u8>,
    depth: Vec<u32>,
    // sorted by label
    children: Vec<Vec<(u8, NodeId)>>,
}

impl PositionHeap {
    /// Builds `PHS(T)`, checking every letter against `alphabet`.
    pub fn build(
        text: &[u8],
        alphabet: &Alphabet,
    ) -> Result<(PositionHeap, SuffixLinkMap), HeapError> {
        if let Some(&c) = text.iter().find(|&&c| !alphabet.contains(c)) {
            return Err(HeapError::UnknownLetter(c as char));
        }
        Self::from_text(text)
    }

    /// Builds `PHS(T)` over whatever letters `text` uses.
    pub fn from_text(text: &[u8]) -> Result<(PositionHeap, SuffixLinkMap), HeapError> {
        if !is_valid_text(text) {
            return Err(HeapError::InvalidText);
        }
        let n = text.len();
        let mut heap = PositionHeap {
            text: text.to_vec(),
            parent: Vec::with_capacity(n + 1),
            label: Vec::with_capacity(n + 1),
            depth: Vec::with_capacity(n + 1),
            children: Vec::with_capacity(n + 1),
        };
        heap.parent.push(0);
        heap.label.push(0);
        heap.depth.push(0);
        heap.children.push(Vec::new());
        let mut links: Vec<Option<NodeId>> = vec![None; n + 1];

        // `cur` spells a prefix of T[i..] (1-based i) of length depth(cur).
        let mut cur: NodeId = 0;
        // node whose link is the node about to be inserted
        let mut pending: Option<NodeId> = None;
        for i in 1..=n {
            loop {
                let pos = i - 1 + heap.depth[cur] as usize;
                match heap.child(cur, text[pos]) {
                    Some(next) => cur = next,
                    None => break,
                }
            }
            let c = text[i - 1 + heap.depth[cur] as usize];
            heap.attach(cur, c, i);
            if let Some(p) = pending.take() {
                links[p] = Some(i);
            }
            if cur == 0 {
                links[i] = Some(0);
                cur = 0;
            } else {
                let s = links[cur].expect("parent link is set before its children");
                match heap.child(s, c) {
                    Some(t) => {
                        links[i] = Some(t);
                        cur = t;
                    }
                    None => {
                        // h_i[1..] is not in the heap yet, so it is h_{i+1}.
                        pending = Some(i);
                        cur = s;
                    }
                }
            }
        }
        debug_assert!(pending.is_none());
        Ok((heap, SuffixLinkMap::new(links)))
    }

    fn attach(&mut self, parent: NodeId, c: u8, node: NodeId) {
        debug_assert_eq!(node, self.parent.len());
        self.parent.push(parent);
        self.label.push(c);
        self.depth.push(self.depth[parent] + 1);
        self.children.push(Vec::new());
        let kids = &mut self.children[parent];
        let at = kids.partition_point(|&(l, _)| l < c);
        kids.insert(at, (c, node));
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// Number of nodes, `n + 1`.
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        (v != 0).then(|| self.parent[v])
    }

    /// Label of the edge entering `v`.
    pub fn label(&self, v: NodeId) -> Option<u8> {
        (v != 0).then(|| self.label[v])
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v] as usize
    }

    pub fn child(&self, v: NodeId, c: u8) -> Option<NodeId> {
        let kids = &self.children[v];
        kids.binary_search_by_key(&c, |&(l, _)| l)
            .ok()
            .map(|k| kids[k].1)
    }

    /// Children of `v` with their edge labels, in label order.
    pub fn children(&self, v: NodeId) -> &[(u8, NodeId)] {
        &self.children[v]
    }

    /// `(parent, child, label)` for every edge, ordered by child.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u8)> + '_ {
        (1..self.node_count()).map(|v| (self.parent[v], v, self.label[v]))
    }

    /// `h_v`, the root-to-`v` path label.
    pub fn path_label(&self, v: NodeId) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.depth(v));
        let mut u = v;
        while u != 0 {
            out.push(self.label[u]);
            u = self.parent[u];
        }
        out.reverse();
        out
    }

    /// True iff `u` is an ancestor of `v` (or equal to it).
    pub fn is_ancestor(&self, u: NodeId, v: NodeId) -> bool {
        let mut w = v;
        while self.depth[w] > self.depth[u] {
            w = self.parent[w];
        }
        w == u
    }
}
