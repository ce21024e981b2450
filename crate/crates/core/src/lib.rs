//! Position heaps and the inverse problems of position heap construction.

pub mod dot;
pub mod ecp;
pub mod gen;
pub mod heap;
pub mod inference;
pub mod invariants;
pub mod oracle;
pub mod pht;
pub mod sketch;
pub mod trace;

pub use heap::{is_valid_text, Alphabet, NodeId, PositionHeap, SuffixLinkMap};
pub use inference::{Outcome, ProblemKind};
pub use sketch::{tree_equal, Flags, HeapSketch, SketchBuilder};
