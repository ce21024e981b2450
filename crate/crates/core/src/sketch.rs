//! Input trees for the inverse problems.
//!
//! A [`HeapSketch`] is a rooted tree whose nodes carry opaque string ids and
//! which may or may not carry edge labels, a node numbering, and a (partial)
//! link map. Internally nodes are dense indices in declaration order, so the
//! root is always index 0 and every parent precedes its children.

use std::collections::HashMap;

use thiserror::Error;

use crate::heap::{is_letter, Alphabet, NodeId, PositionHeap, SuffixLinkMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SketchError {
    #[error("node {0:?} is declared twice")]
    DuplicateNode(String),
    #[error("parent {0:?} has not been declared")]
    UnknownParent(String),
    #[error("node {0:?} is not part of the tree")]
    UnknownNode(String),
    #[error("edge into {0:?} has no label but the sketch is labeled")]
    MissingLabel(String),
    #[error("edge into {0:?} has a label but the sketch is unlabeled")]
    UnexpectedLabel(String),
    #[error("byte 0x{0:02x} is not a printable letter")]
    BadLetter(u8),
    #[error("numbering is not a bijection onto 0..={max} with the root at 0: {detail}")]
    BadNumbering { max: usize, detail: String },
    #[error("node {0:?} has two outgoing links")]
    DuplicateLink(String),
    #[error("numbers given but the sketch is not numbered")]
    UnexpectedNumbers,
    #[error("links given but the sketch has no links")]
    UnexpectedLinks,
    #[error("tree comparison needs edge labels on both sides")]
    UnlabeledInput,
    #[error("exact comparison needs node numbers on both sides")]
    UnnumberedInput,
}

/// Which optional annotations a sketch carries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub numbered: bool,
    pub labeled: bool,
    pub links: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeapSketch {
    ids: Vec<String>,
    parent: Vec<Option<NodeId>>,
    label: Vec<Option<u8>>,
    depth: Vec<usize>,
    children: Vec<Vec<NodeId>>,
    numbers: Option<Vec<usize>>,
    links: Option<Vec<Option<NodeId>>>,
    flags: Flags,
    alphabet: Option<Alphabet>,
}

/// Incremental construction of a [`HeapSketch`]; parents must be declared
/// before their children.
#[derive(Debug)]
pub struct SketchBuilder {
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
    parent: Vec<Option<NodeId>>,
    label: Vec<Option<u8>>,
    numbers: Vec<(String, usize)>,
    links: Vec<(String, String)>,
    alphabet: Option<Alphabet>,
}

impl SketchBuilder {
    pub fn new(root: impl Into<String>) -> Self {
        let root = root.into();
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        SketchBuilder {
            ids: vec![root],
            index,
            parent: vec![None],
            label: vec![None],
            numbers: Vec::new(),
            links: Vec::new(),
            alphabet: None,
        }
    }

    pub fn edge(
        &mut self,
        parent: &str,
        child: impl Into<String>,
        label: Option<u8>,
    ) -> Result<&mut Self, SketchError> {
        let child = child.into();
        let &p = self
            .index
            .get(parent)
            .ok_or_else(|| SketchError::UnknownParent(parent.to_string()))?;
        if self.index.contains_key(&child) {
            return Err(SketchError::DuplicateNode(child));
        }
        if let Some(c) = label {
            if !is_letter(c) {
                return Err(SketchError::BadLetter(c));
            }
        }
        let id = self.ids.len();
        self.index.insert(child.clone(), id);
        self.ids.push(child);
        self.parent.push(Some(p));
        self.label.push(label);
        Ok(self)
    }

    pub fn number(&mut self, id: impl Into<String>, n: usize) -> &mut Self {
        self.numbers.push((id.into(), n));
        self
    }

    pub fn link(&mut self, from: impl Into<String>, to: impl Into<String>) -> &mut Self {
        self.links.push((from.into(), to.into()));
        self
    }

    pub fn alphabet(&mut self, a: Alphabet) -> &mut Self {
        self.alphabet = Some(a);
        self
    }

    fn lookup(&self, id: &str) -> Result<NodeId, SketchError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| SketchError::UnknownNode(id.to_string()))
    }

    pub fn build(&self, flags: Flags) -> Result<HeapSketch, SketchError> {
        let m = self.ids.len();
        for v in 1..m {
            match (flags.labeled, self.label[v]) {
                (true, None) => return Err(SketchError::MissingLabel(self.ids[v].clone())),
                (false, Some(_)) => {
                    return Err(SketchError::UnexpectedLabel(self.ids[v].clone()))
                }
                _ => {}
            }
        }

        let numbers = if flags.numbered {
            let bad = |detail: String| SketchError::BadNumbering { max: m - 1, detail };
            let mut numbers = vec![usize::MAX; m];
            let mut used = vec![false; m];
            for (id, n) in &self.numbers {
                let v = self.lookup(id)?;
                if *n >= m {
                    return Err(bad(format!("{id} has number {n}")));
                }
                if numbers[v] != usize::MAX {
                    return Err(bad(format!("{id} is numbered twice")));
                }
                if used[*n] {
                    return Err(bad(format!("number {n} is used twice")));
                }
                numbers[v] = *n;
                used[*n] = true;
            }
            if let Some(v) = numbers.iter().position(|&n| n == usize::MAX) {
                return Err(bad(format!("{} has no number", self.ids[v])));
            }
            if numbers[0] != 0 {
                return Err(bad("root is not numbered 0".into()));
            }
            Some(numbers)
        } else if !self.numbers.is_empty() {
            return Err(SketchError::UnexpectedNumbers);
        } else {
            None
        };

        let links = if flags.links {
            let mut links = vec![None; m];
            for (from, to) in &self.links {
                let u = self.lookup(from)?;
                let v = self.lookup(to)?;
                if links[u].is_some() {
                    return Err(SketchError::DuplicateLink(from.clone()));
                }
                links[u] = Some(v);
            }
            Some(links)
        } else if !self.links.is_empty() {
            return Err(SketchError::UnexpectedLinks);
        } else {
            None
        };

        Ok(HeapSketch::assemble(
            self.ids.clone(),
            self.parent.clone(),
            self.label.clone(),
            numbers,
            links,
            flags,
            self.alphabet.clone(),
        ))
    }
}

impl HeapSketch {
    /// A sketch of `PHS(T)` keeping only the annotations named in `keep`.
    ///
    /// When numbers are kept the ids are the decimal node numbers; otherwise
    /// nodes are declared breadth-first in label order with ids `v0, v1, ...`
    /// so that nothing about the numbering leaks through.
    pub fn from_heap(heap: &PositionHeap, links: &SuffixLinkMap, keep: Flags) -> HeapSketch {
        let order: Vec<NodeId> = if keep.numbered {
            (0..heap.node_count()).collect()
        } else {
            let mut order = Vec::with_capacity(heap.node_count());
            order.push(0);
            let mut head = 0;
            while head < order.len() {
                let u = order[head];
                head += 1;
                order.extend(heap.children(u).iter().map(|&(_, v)| v));
            }
            order
        };
        let m = heap.node_count();
        let mut pos_of = vec![0; m];
        for (pos, &v) in order.iter().enumerate() {
            pos_of[v] = pos;
        }
        let ids = order
            .iter()
            .enumerate()
            .map(|(pos, &v)| if keep.numbered { v.to_string() } else { format!("v{pos}") })
            .collect();
        let parent = order.iter().map(|&v| heap.parent(v).map(|p| pos_of[p])).collect();
        let label = order.iter().map(|&v| if keep.labeled { heap.label(v) } else { None }).collect();
        let numbers = keep.numbered.then(|| order.clone());
        let links = keep.links.then(|| order.iter().map(|&v| links.get(v).map(|s| pos_of[s])).collect());
        let alphabet = Alphabet::of_text(heap.text()).and_then(Result::ok);
        HeapSketch::assemble(ids, parent, label, numbers, links, keep, alphabet)
    }

    /// Fills in depths and child lists; parents must precede children.
    fn assemble(
        ids: Vec<String>,
        parent: Vec<Option<NodeId>>,
        label: Vec<Option<u8>>,
        numbers: Option<Vec<usize>>,
        links: Option<Vec<Option<NodeId>>>,
        flags: Flags,
        alphabet: Option<Alphabet>,
    ) -> HeapSketch {
        let m = ids.len();
        let mut depth = vec![0; m];
        let mut children = vec![Vec::new(); m];
        for v in 1..m {
            let p = parent[v].expect("only the root lacks a parent");
            depth[v] = depth[p] + 1;
            children[p].push(v);
        }
        HeapSketch { ids, parent, label, depth, children, numbers, links, flags, alphabet }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn id(&self, v: NodeId) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn node(&self, id: &str) -> Option<NodeId> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn alphabet(&self) -> Option<&Alphabet> {
        self.alphabet.as_ref()
    }

    pub fn set_alphabet(&mut self, a: Option<Alphabet>) {
        self.alphabet = a;
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v]
    }

    /// Children in declaration order.
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    /// Label of the edge entering `v`.
    pub fn label(&self, v: NodeId) -> Option<u8> {
        self.label[v]
    }

    pub fn number(&self, v: NodeId) -> Option<usize> {
        self.numbers.as_ref().map(|n| n[v])
    }

    pub fn numbers(&self) -> Option<&[usize]> {
        self.numbers.as_deref()
    }

    pub fn link(&self, v: NodeId) -> Option<NodeId> {
        self.links.as_ref().and_then(|l| l[v])
    }

    pub fn links(&self) -> Option<SuffixLinkMap> {
        self.links.clone().map(SuffixLinkMap::new)
    }

    /// Nodes ordered by depth (breadth-first, stable in declaration order).
    pub fn by_depth(&self) -> Vec<NodeId> {
        let max = self.depth.iter().copied().max().unwrap_or(0);
        let mut buckets = vec![0usize; max + 2];
        for &d in &self.depth {
            buckets[d + 1] += 1;
        }
        for d in 1..buckets.len() {
            buckets[d] += buckets[d - 1];
        }
        let mut order = vec![0; self.node_count()];
        for v in 0..self.node_count() {
            let d = self.depth[v];
            order[buckets[d]] = v;
            buckets[d] += 1;
        }
        order
    }

    /// Children of `v` paired with their labels, sorted by label.
    ///
    /// Returns `None` when some child edge is unlabeled.
    pub fn labeled_children(&self, v: NodeId) -> Option<Vec<(u8, NodeId)>> {
        let mut kids: Vec<(u8, NodeId)> = self.children[v]
            .iter()
            .map(|&c| self.label[c].map(|l| (l, c)))
            .collect::<Option<_>>()?;
        kids.sort_unstable();
        Some(kids)
    }

    /// True iff some node has two children under the same label.
    pub fn has_duplicate_sibling_labels(&self) -> bool {
        (0..self.node_count()).any(|v| match self.labeled_children(v) {
            Some(kids) => kids.windows(2).any(|w| w[0].0 == w[1].0),
            None => false,
        })
    }

    /// Same tree with the given labels on every edge (indexed by child).
    pub fn with_labels(&self, labels: &[u8]) -> HeapSketch {
        let mut out = self.clone();
        for v in 1..self.node_count() {
            out.label[v] = Some(labels[v]);
        }
        out.flags.labeled = true;
        out
    }

    /// Same tree with the given numbering attached.
    pub fn with_numbers(&self, numbers: Vec<usize>) -> HeapSketch {
        let mut out = self.clone();
        out.numbers = Some(numbers);
        out.flags.numbered = true;
        out
    }

    pub fn without_numbers(&self) -> HeapSketch {
        let mut out = self.clone();
        out.numbers = None;
        out.flags.numbered = false;
        out
    }

    pub fn without_labels(&self) -> HeapSketch {
        let mut out = self.clone();
        out.label.iter_mut().for_each(|l| *l = None);
        out.flags.labeled = false;
        out
    }

    pub fn without_links(&self) -> HeapSketch {
        let mut out = self.clone();
        out.links = None;
        out.flags.links = false;
        out
    }

    /// Dense index of the node numbered `i`, per node number.
    pub fn node_by_number(&self) -> Option<Vec<NodeId>> {
        let numbers = self.numbers.as_ref()?;
        let mut inv = vec![0; numbers.len()];
        for (v, &n) in numbers.iter().enumerate() {
            inv[n] = v;
        }
        Some(inv)
    }
}

/// Label-respecting isomorphism from `x` onto `y`, as a dense node map.
///
/// Both trees must be fully labeled with distinct sibling labels; the map is
/// then unique if it exists and is found by one simultaneous traversal.
pub fn match_labeled(x: &HeapSketch, y: &HeapSketch) -> Option<Vec<NodeId>> {
    if x.node_count() != y.node_count() {
        return None;
    }
    let mut map = vec![usize::MAX; x.node_count()];
    map[0] = 0;
    let mut stack = vec![(0, 0)];
    while let Some((u, w)) = stack.pop() {
        let xs = x.labeled_children(u)?;
        let ys = y.labeled_children(w)?;
        if xs.len() != ys.len() {
            return None;
        }
        for (&(lx, cx), &(ly, cy)) in xs.iter().zip(&ys) {
            if lx != ly {
                return None;
            }
            map[cx] = cy;
            stack.push((cx, cy));
        }
    }
    Some(map)
}

/// Equality of labeled trees.
///
/// With `respect_numbers` the numbered trees must coincide exactly; without
/// it the trees are compared up to a label-preserving isomorphism. Trees
/// with repeated sibling labels fall back to canonical-form comparison.
pub fn tree_equal(
    x: &HeapSketch,
    y: &HeapSketch,
    respect_numbers: bool,
) -> Result<bool, SketchError> {
    if !x.flags.labeled || !y.flags.labeled {
        return Err(SketchError::UnlabeledInput);
    }
    if respect_numbers {
        return numbered_equal(x, y, true);
    }
    if x.node_count() != y.node_count() {
        return Ok(false);
    }
    if x.has_duplicate_sibling_labels() || y.has_duplicate_sibling_labels() {
        return Ok(canonical_form(x) == canonical_form(y));
    }
    Ok(match_labeled(x, y).is_some())
}

/// Compares numbered trees node by node; labels are compared when `labels`.
pub fn numbered_equal(x: &HeapSketch, y: &HeapSketch, labels: bool) -> Result<bool, SketchError> {
    let (Some(xn), Some(yn)) = (x.node_by_number(), y.node_by_number()) else {
        return Err(SketchError::UnnumberedInput);
    };
    if xn.len() != yn.len() {
        return Ok(false);
    }
    for i in 1..xn.len() {
        let (u, w) = (xn[i], yn[i]);
        let pu = x.parent(u).and_then(|p| x.number(p));
        let pw = y.parent(w).and_then(|p| y.number(p));
        if pu != pw || (labels && x.label(u) != y.label(w)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parenthesised encoding with children sorted by (label, encoding).
/// Equal encodings iff the labeled trees are isomorphic.
pub fn canonical_form(s: &HeapSketch) -> Vec<u8> {
    let m = s.node_count();
    let mut enc: Vec<Vec<u8>> = vec![Vec::new(); m];
    for v in (0..m).rev() {
        let mut parts: Vec<Vec<u8>> = s.children(v).iter().map(|&c| std::mem::take(&mut enc[c])).collect();
        parts.sort();
        let mut out = Vec::new();
        out.push(s.label(v).unwrap_or(b'-'));
        out.push(b'(');
        for p in parts {
            out.extend(p);
        }
        out.push(b')');
        enc[v] = out;
    }
    std::mem::take(&mut enc[0])
}
