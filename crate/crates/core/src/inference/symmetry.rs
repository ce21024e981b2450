//! Letter permutations that map a labeled tree onto itself.
//!
//! In a tree with distinct sibling labels a renaming `τ` of the letters is
//! a symmetry iff it maps the set of root-path labels onto itself. Two root
//! labelings of a link-annotated tree that differ by such a `τ` describe the
//! same labeled tree, so they must be counted and enumerated once.
//!
//! The group is handled through its stabilizer chain: `orbits[i]` is the
//! orbit of letter `i` under the symmetries fixing letters `0..i`. The group
//! order is the product of the orbit sizes, and a labeling `f` is the
//! smallest of its class iff `f[y] >= f[i]` for every `y` in `orbits[i]`.

use crate::ecp::BigCount;
use crate::heap::NodeId;
use crate::sketch::HeapSketch;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterSymmetry {
    orbits: Vec<Vec<usize>>,
}

struct Search {
    kids: Vec<Vec<(usize, NodeId)>>,
    size: Vec<usize>,
    freq: Vec<usize>,
}

impl Search {
    fn child(&self, w: NodeId, j: usize) -> Option<NodeId> {
        let kids = &self.kids[w];
        kids.binary_search_by_key(&j, |&(i, _)| i).ok().map(|p| kids[p].1)
    }

    /// Every path over mapped letters has a mapped counterpart.
    fn consistent(&self, tau: &[Option<usize>]) -> bool {
        let mut stack = vec![(0, 0)];
        while let Some((v, w)) = stack.pop() {
            for &(i, c) in &self.kids[v] {
                let Some(j) = tau[i] else { continue };
                match self.child(w, j) {
                    Some(d) if self.size[c] == self.size[d] => stack.push((c, d)),
                    _ => return false,
                }
            }
        }
        true
    }

    fn extend(&self, tau: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> bool {
        let Some(i) = tau.iter().position(Option::is_none) else {
            return true;
        };
        for j in 0..tau.len() {
            if used[j] || self.freq[i] != self.freq[j] {
                continue;
            }
            tau[i] = Some(j);
            used[j] = true;
            if self.consistent(tau) && self.extend(tau, used) {
                return true;
            }
            tau[i] = None;
            used[j] = false;
        }
        false
    }
}

impl LetterSymmetry {
    /// Symmetries of the labeled tree `s` over `letters`, which must contain
    /// every label used in `s`; letter `i` of the result is `letters[i]`.
    pub fn of(s: &HeapSketch, letters: &[u8]) -> LetterSymmetry {
        let k = letters.len();
        let mut index = [usize::MAX; 256];
        for (i, &c) in letters.iter().enumerate() {
            index[c as usize] = i;
        }
        let m = s.node_count();
        let mut kids = vec![Vec::new(); m];
        let mut freq = vec![0; k];
        for v in 1..m {
            let i = index[s.label(v).expect("labeled tree") as usize];
            kids[s.parent(v).unwrap()].push((i, v));
            freq[i] += 1;
        }
        kids.iter_mut().for_each(|k| k.sort_unstable());
        let mut size = vec![1; m];
        for v in s.by_depth().into_iter().skip(1).rev() {
            size[s.parent(v).unwrap()] += size[v];
        }
        let search = Search { kids, size, freq };

        let orbits = (0..k)
            .map(|i| {
                (i..k)
                    .filter(|&j| {
                        let mut tau: Vec<Option<usize>> = (0..k).map(|x| (x < i).then_some(x)).collect();
                        let mut used: Vec<bool> = (0..k).map(|x| x < i).collect();
                        if used[j] || search.freq[i] != search.freq[j] {
                            return false;
                        }
                        tau[i] = Some(j);
                        used[j] = true;
                        search.consistent(&tau) && search.extend(&mut tau, &mut used)
                    })
                    .collect()
            })
            .collect();
        LetterSymmetry { orbits }
    }

    pub fn order(&self) -> BigCount {
        self.orbits
            .iter()
            .fold(BigCount::one(), |acc, o| acc * BigCount::from(o.len() as u64))
    }

    pub fn is_trivial(&self) -> bool {
        self.orbits.iter().all(|o| o.len() == 1)
    }

    /// Whether the injective labeling `f` (letter `i` ↦ `f[i]`) is the
    /// lexicographically smallest among those equivalent to it.
    pub fn is_class_minimum(&self, f: &[usize]) -> bool {
        self.orbits
            .iter()
            .enumerate()
            .all(|(i, orbit)| orbit.iter().all(|&y| f[y] >= f[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::{Flags, SketchBuilder};

    fn tree(edges: &[(&str, &str, u8)]) -> HeapSketch {
        let mut b = SketchBuilder::new("r");
        for &(p, c, l) in edges {
            b.edge(p, c, Some(l)).unwrap();
        }
        b.build(Flags { labeled: true, ..Flags::default() }).unwrap()
    }

    #[test]
    fn star_is_fully_symmetric() {
        let s = tree(&[("r", "x", b'a'), ("r", "y", b'b'), ("r", "z", b'c')]);
        let sym = LetterSymmetry::of(&s, b"abc");
        assert_eq!(sym.order().to_u64(), Some(6));
        assert!(sym.is_class_minimum(&[0, 1, 2]));
        assert!(!sym.is_class_minimum(&[1, 0, 2]));
        // exactly one of the 4·3·2 labelings over four letters per 3-subset
        let mut kept = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if a != b && b != c && a != c && sym.is_class_minimum(&[a, b, c]) {
                        kept += 1;
                    }
                }
            }
        }
        assert_eq!(kept, 4);
    }

    #[test]
    fn asymmetric_and_partial() {
        let s = tree(&[("r", "x", b'a'), ("x", "xa", b'a'), ("r", "y", b'b')]);
        assert!(LetterSymmetry::of(&s, b"ab").is_trivial());

        // a and b swap, c is fixed
        let s = tree(&[
            ("r", "x", b'a'),
            ("r", "y", b'b'),
            ("r", "z", b'c'),
            ("z", "za", b'a'),
            ("z", "zb", b'b'),
        ]);
        let sym = LetterSymmetry::of(&s, b"abc");
        assert_eq!(sym.order().to_u64(), Some(2));
    }

    #[test]
    fn no_letters() {
        let s = tree(&[]);
        let sym = LetterSymmetry::of(&s, b"");
        assert!(sym.is_trivial());
        assert_eq!(sym.order(), BigCount::one());
    }
}
