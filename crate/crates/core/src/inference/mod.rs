//! The four inverse problems: given a tree that claims to be a position
//! heap, find, count, or list the texts it could have come from.
//!
//! | problem | the tree carries        |
//! |---------|-------------------------|
//! | P1      | node numbers and labels |
//! | P2      | node numbers            |
//! | P3      | edge labels             |
//! | P4      | suffix links            |
//!
//! Each problem accepts any sketch carrying at least the annotations it
//! needs and ignores the rest. Every answer is checked by building the heap
//! of the recovered text and comparing it with the input.

mod stream;
mod symmetry;

use std::fmt;

use thiserror::Error;

use crate::ecp::{count_ecp, solve_ecp, BigCount, EcpError};
use crate::heap::{Alphabet, HeapError, NodeId, PositionHeap, SuffixLinkMap};
use crate::oracle::same_shape_with_links;
use crate::sketch::{Flags, HeapSketch};
use crate::trace::{
    build_trace_graph, compute_sigma, propagate_labels, read_text_from_cycle,
    reconstruct_suffix_links, TraceError, TraceGraph,
};

pub use stream::{KPermutations, TextStream};
pub use symmetry::LetterSymmetry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    P1,
    P2,
    P3,
    P4,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [ProblemKind::P1, ProblemKind::P2, ProblemKind::P3, ProblemKind::P4];

    /// The most informed problem a sketch's annotations allow: numbers
    /// outrank labels, which outrank links.
    pub fn of(flags: Flags) -> Option<ProblemKind> {
        match (flags.numbered, flags.labeled, flags.links) {
            (true, true, _) => Some(ProblemKind::P1),
            (true, false, _) => Some(ProblemKind::P2),
            (false, true, _) => Some(ProblemKind::P3),
            (false, false, true) => Some(ProblemKind::P4),
            (false, false, false) => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            ProblemKind::P1 => 1,
            ProblemKind::P2 => 2,
            ProblemKind::P3 => 3,
            ProblemKind::P4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<ProblemKind> {
        ProblemKind::ALL.get((n as usize).wrapping_sub(1)).copied()
    }

    /// P2 and P4 choose root letters, so the answer depends on the alphabet.
    pub fn needs_alphabet(self) -> bool {
        matches!(self, ProblemKind::P2 | ProblemKind::P4)
    }

    pub fn supported_by(self, flags: Flags) -> bool {
        match self {
            ProblemKind::P1 => flags.numbered && flags.labeled,
            ProblemKind::P2 => flags.numbered,
            ProblemKind::P3 => flags.labeled,
            ProblemKind::P4 => flags.links,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

/// Misuse of the API, as opposed to a tree that no text produces.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InferError {
    #[error("{kind} needs a sketch with {what}")]
    MissingAnnotation { kind: ProblemKind, what: &'static str },
    #[error("{0} needs an alphabet")]
    MissingAlphabet(ProblemKind),
    #[error("the root has {needed} children but the alphabet has {have} letters")]
    AlphabetTooSmall { needed: usize, have: usize },
}

/// Why no text produces the given tree.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Invalid {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Ecp(#[from] EcpError),
    #[error("recovered text {0:?} does not end in a unique letter")]
    BadText(String),
    #[error("the heap of the recovered text differs from the input")]
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub text: Vec<u8>,
    /// Heap node number of every sketch node.
    pub numbering: Vec<usize>,
    /// Label of the edge into every sketch node (`None` at the root).
    pub labels: Vec<Option<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved(Solution),
    Invalid(Invalid),
}

impl Outcome {
    pub fn text(&self) -> Option<&[u8]> {
        match self {
            Outcome::Solved(s) => Some(&s.text),
            Outcome::Invalid(_) => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Solved(_))
    }
}

impl From<Result<Solution, Invalid>> for Outcome {
    fn from(r: Result<Solution, Invalid>) -> Self {
        match r {
            Ok(s) => Outcome::Solved(s),
            Err(e) => Outcome::Invalid(e),
        }
    }
}

fn require(s: &HeapSketch, kind: ProblemKind) -> Result<(), InferError> {
    if kind.supported_by(s.flags()) {
        return Ok(());
    }
    let what = match kind {
        ProblemKind::P1 => "node numbers and edge labels",
        ProblemKind::P2 => "node numbers",
        ProblemKind::P3 => "edge labels",
        ProblemKind::P4 => "suffix links",
    };
    Err(InferError::MissingAnnotation { kind, what })
}

fn build(text: &[u8]) -> Result<(PositionHeap, SuffixLinkMap), Invalid> {
    PositionHeap::from_text(text).map_err(|e| match e {
        HeapError::InvalidText | HeapError::UnknownLetter(_) => {
            Invalid::BadText(String::from_utf8_lossy(text).into_owned())
        }
    })
}

/// Node-by-node comparison through the sketch's numbering.
fn numbered_matches(s: &HeapSketch, heap: &PositionHeap, labels: bool) -> bool {
    let numbers = s.numbers().expect("numbered sketch");
    heap.node_count() == s.node_count()
        && (1..s.node_count()).all(|v| {
            let i = numbers[v];
            let p = s.parent(v).unwrap();
            heap.parent(i) == Some(numbers[p]) && (!labels || heap.label(i) == s.label(v))
        })
}

/// Matches the labeled sketch against the heap of `text`, optionally also
/// requiring the links to agree. Returns the heap node of every sketch node.
pub(crate) fn verify_labeled(s: &HeapSketch, text: &[u8], with_links: bool) -> Result<Vec<NodeId>, Invalid> {
    let (heap, links) = build(text)?;
    let m = s.node_count();
    if heap.node_count() != m {
        return Err(Invalid::Mismatch);
    }
    let mut map = vec![usize::MAX; m];
    map[0] = 0;
    for v in s.by_depth() {
        let kids = s.labeled_children(v).ok_or(Invalid::Mismatch)?;
        let theirs = heap.children(map[v]);
        if kids.len() != theirs.len() {
            return Err(Invalid::Mismatch);
        }
        for (&(l, c), &(hl, hc)) in kids.iter().zip(theirs) {
            if l != hl {
                return Err(Invalid::Mismatch);
            }
            map[c] = hc;
        }
    }
    if with_links && (1..m).any(|v| links.get(map[v]) != s.link(v).map(|t| map[t])) {
        return Err(Invalid::Mismatch);
    }
    Ok(map)
}

fn alphabet_room(s: &HeapSketch, a: &Alphabet) -> Result<usize, InferError> {
    let k = s.children(0).len();
    if k > a.len() {
        return Err(InferError::AlphabetTooSmall { needed: k, have: a.len() });
    }
    Ok(k)
}

// ---------------------------------------------------------------- P1

fn solve_p1(s: &HeapSketch) -> Result<Solution, Invalid> {
    let numbers = s.numbers().expect("numbered sketch");
    let m = s.node_count();
    // T[i] is the first letter on the path to node i
    let mut first = vec![0u8; m];
    let mut text = vec![0u8; m - 1];
    for v in s.by_depth().into_iter().skip(1) {
        let p = s.parent(v).unwrap();
        first[v] = if p == 0 { s.label(v).unwrap() } else { first[p] };
        text[numbers[v] - 1] = first[v];
    }
    let (heap, _) = build(&text)?;
    if !numbered_matches(s, &heap, true) {
        return Err(Invalid::Mismatch);
    }
    Ok(Solution {
        text,
        numbering: numbers.to_vec(),
        labels: (0..m).map(|v| s.label(v)).collect(),
    })
}

pub fn infer_p1(s: &HeapSketch) -> Result<Outcome, InferError> {
    require(s, ProblemKind::P1)?;
    Ok(solve_p1(s).into())
}

// ---------------------------------------------------------------- P2

/// Canonical answer: the root's children, by number, get the alphabet's
/// first letters; every other letter of the text follows.
fn solve_p2(s: &HeapSketch, a: &Alphabet) -> Result<Result<Solution, Invalid>, InferError> {
    let k = alphabet_room(s, a)?;
    let numbers = s.numbers().expect("numbered sketch");
    let m = s.node_count();
    let mut top: Vec<NodeId> = s.children(0).to_vec();
    top.sort_by_key(|&c| numbers[c]);
    let mut first = vec![0u8; m];
    for (i, &c) in top.iter().enumerate() {
        first[c] = a.letters()[i];
    }
    debug_assert!(top.len() == k);
    let mut text = vec![0u8; m - 1];
    for v in s.by_depth().into_iter().skip(1) {
        let p = s.parent(v).unwrap();
        if p != 0 {
            first[v] = first[p];
        }
        text[numbers[v] - 1] = first[v];
    }
    let heap = match build(&text) {
        Ok((h, _)) => h,
        Err(e) => return Ok(Err(e)),
    };
    if !numbered_matches(s, &heap, false) {
        return Ok(Err(Invalid::Mismatch));
    }
    Ok(Ok(Solution {
        labels: (0..m).map(|v| heap.label(numbers[v])).collect(),
        numbering: numbers.to_vec(),
        text,
    }))
}

pub fn infer_p2(s: &HeapSketch, a: &Alphabet) -> Result<Outcome, InferError> {
    require(s, ProblemKind::P2)?;
    Ok(solve_p2(s, a)?.into())
}

/// `|Σ|! / (|Σ| - k)!` for `k` root children when the tree is valid.
pub fn count_p2(s: &HeapSketch, a: &Alphabet) -> Result<BigCount, InferError> {
    require(s, ProblemKind::P2)?;
    Ok(match solve_p2(s, a)? {
        Ok(_) => BigCount::falling_factorial(a.len(), s.children(0).len()),
        Err(_) => BigCount::zero(),
    })
}

/// One text per ordered choice of root letters, lexicographically.
pub fn enum_p2(s: &HeapSketch, a: &Alphabet) -> Result<TextStream, InferError> {
    require(s, ProblemKind::P2)?;
    Ok(match solve_p2(s, a)? {
        Ok(sol) => TextStream::relabeled(sol.text, a.letters().to_vec(), s.children(0).len()),
        Err(_) => TextStream::empty(),
    })
}

// ---------------------------------------------------------------- P3

struct Solved {
    graph: TraceGraph,
    solution: Solution,
}

/// Links, multiplicities, trace graph, one cycle, its text, and the check.
fn solve_labeled(s: &HeapSketch, with_links: bool) -> Result<Solved, Invalid> {
    let links = reconstruct_suffix_links(s)?;
    let sigma = compute_sigma(s, &links)?;
    let graph = build_trace_graph(s, &links, &sigma)?;
    let cycle = solve_ecp(&graph.graph, &graph.priority, graph.root)?;
    let (text, _) = read_text_from_cycle(&graph, &cycle);
    let numbering = verify_labeled(s, &text, with_links)?;
    let labels = (0..s.node_count()).map(|v| s.label(v)).collect();
    Ok(Solved { graph, solution: Solution { text, numbering, labels } })
}

fn labeled_only(s: &HeapSketch) -> HeapSketch {
    s.without_numbers().without_links()
}

pub fn infer_p3(s: &HeapSketch) -> Result<Outcome, InferError> {
    require(s, ProblemKind::P3)?;
    Ok(solve_labeled(&labeled_only(s), false).map(|x| x.solution).into())
}

/// Number of respecting cycles of the trace graph, once a text verifies.
pub fn count_p3(s: &HeapSketch) -> Result<BigCount, InferError> {
    require(s, ProblemKind::P3)?;
    Ok(match solve_labeled(&labeled_only(s), false) {
        Ok(x) => count_ecp(&x.graph.graph, &x.graph.priority, x.graph.root),
        Err(_) => BigCount::zero(),
    })
}

/// The texts of all respecting cycles; distinct cycles spell distinct texts.
pub fn enum_p3(s: &HeapSketch) -> Result<TextStream, InferError> {
    require(s, ProblemKind::P3)?;
    let s = labeled_only(s);
    Ok(match solve_labeled(&s, false) {
        Ok(x) => TextStream::cycles(x.graph, s),
        Err(_) => TextStream::empty(),
    })
}

// ---------------------------------------------------------------- P4

struct Linked {
    solved: Solved,
    labeled: HeapSketch,
    k: usize,
}

/// Canonical answer: the root's children, in declaration order, get the
/// alphabet's first letters; links push them down the tree.
fn solve_p4(s: &HeapSketch, a: &Alphabet) -> Result<Result<Linked, Invalid>, InferError> {
    let k = alphabet_room(s, a)?;
    let bare = s.without_numbers().without_labels();
    let labeled = match propagate_labels(&bare, &a.letters()[..k]) {
        Ok(l) => l,
        Err(e) => return Ok(Err(e.into())),
    };
    Ok(solve_labeled(&labeled, true).map(|solved| Linked { solved, labeled, k }))
}

pub fn infer_p4(s: &HeapSketch, a: &Alphabet) -> Result<Outcome, InferError> {
    require(s, ProblemKind::P4)?;
    Ok(solve_p4(s, a)?.map(|x| x.solved.solution).into())
}

/// Cycles per labeling times the number of root labelings that give
/// different labeled trees: `|Σ|!/(|Σ|-k)!` divided by the number of letter
/// symmetries of the tree.
pub fn count_p4(s: &HeapSketch, a: &Alphabet) -> Result<BigCount, InferError> {
    require(s, ProblemKind::P4)?;
    Ok(match solve_p4(s, a)? {
        Ok(x) => {
            let g = &x.solved.graph;
            let cycles = count_ecp(&g.graph, &g.priority, g.root);
            let symmetry = LetterSymmetry::of(&x.labeled, &a.letters()[..x.k]);
            cycles * BigCount::falling_factorial(a.len(), x.k) / symmetry.order()
        }
        Err(_) => BigCount::zero(),
    })
}

/// Root labelings in lexicographic order (one per class of symmetric
/// labelings), each followed by all cycle texts under that labeling.
pub fn enum_p4(s: &HeapSketch, a: &Alphabet) -> Result<TextStream, InferError> {
    require(s, ProblemKind::P4)?;
    Ok(match solve_p4(s, a)? {
        Ok(x) => {
            let symmetry = LetterSymmetry::of(&x.labeled, &a.letters()[..x.k]);
            TextStream::linked(x.solved.graph, a.letters().to_vec(), x.k, symmetry)
        }
        Err(_) => TextStream::empty(),
    })
}

// ---------------------------------------------------------------- dispatch

fn pick_alphabet<'a>(
    kind: ProblemKind,
    s: &'a HeapSketch,
    a: Option<&'a Alphabet>,
) -> Result<&'a Alphabet, InferError> {
    a.or(s.alphabet()).ok_or(InferError::MissingAlphabet(kind))
}

/// Solves problem `kind`. The alphabet defaults to the sketch's own.
pub fn infer(kind: ProblemKind, s: &HeapSketch, a: Option<&Alphabet>) -> Result<Outcome, InferError> {
    match kind {
        ProblemKind::P1 => infer_p1(s),
        ProblemKind::P2 => infer_p2(s, pick_alphabet(kind, s, a)?),
        ProblemKind::P3 => infer_p3(s),
        ProblemKind::P4 => infer_p4(s, pick_alphabet(kind, s, a)?),
    }
}

pub fn count(kind: ProblemKind, s: &HeapSketch, a: Option<&Alphabet>) -> Result<BigCount, InferError> {
    match kind {
        ProblemKind::P1 => Ok(if infer_p1(s)?.is_solved() { BigCount::one() } else { BigCount::zero() }),
        ProblemKind::P2 => count_p2(s, pick_alphabet(kind, s, a)?),
        ProblemKind::P3 => count_p3(s),
        ProblemKind::P4 => count_p4(s, pick_alphabet(kind, s, a)?),
    }
}

pub fn enumerate(kind: ProblemKind, s: &HeapSketch, a: Option<&Alphabet>) -> Result<TextStream, InferError> {
    match kind {
        ProblemKind::P1 => Ok(match infer_p1(s)? {
            Outcome::Solved(sol) => TextStream::single(sol.text),
            Outcome::Invalid(_) => TextStream::empty(),
        }),
        ProblemKind::P2 => enum_p2(s, pick_alphabet(kind, s, a)?),
        ProblemKind::P3 => enum_p3(s),
        ProblemKind::P4 => enum_p4(s, pick_alphabet(kind, s, a)?),
    }
}

/// Whether the heap of `text` matches `s` as problem `kind` requires:
/// exactly (P1), up to labels (P2), up to numbering (P3), or as an
/// unlabeled tree with links (P4).
pub fn verify_text(kind: ProblemKind, s: &HeapSketch, text: &[u8]) -> Result<bool, InferError> {
    require(s, kind)?;
    let Ok((heap, links)) = build(text) else {
        return Ok(false);
    };
    if heap.node_count() != s.node_count() {
        return Ok(false);
    }
    Ok(match kind {
        ProblemKind::P1 => numbered_matches(s, &heap, true),
        ProblemKind::P2 => numbered_matches(s, &heap, false),
        ProblemKind::P3 => {
            !s.has_duplicate_sibling_labels() && verify_labeled(&labeled_only(s), text, false).is_ok()
        }
        ProblemKind::P4 => same_shape_with_links(s, &heap, &links),
    })
}
