//! Graphviz renderings: tree edges solid and labeled, suffix links dashed.

use std::fmt::Write;

use crate::heap::{PositionHeap, SuffixLinkMap};
use crate::sketch::{Flags, HeapSketch};
use crate::trace::{ArcKind, TraceGraph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn caption(s: &HeapSketch, v: usize) -> String {
    match s.number(v) {
        Some(n) => n.to_string(),
        None => s.id(v).to_string(),
    }
}

fn letter(c: u8) -> String {
    quote(&(c as char).to_string())
}

pub fn sketch_to_dot(s: &HeapSketch) -> String {
    let mut out = String::from("digraph heap {\n  node [shape=circle];\n");
    for v in 0..s.node_count() {
        writeln!(out, "  n{v} [label={}];", quote(&caption(s, v))).unwrap();
    }
    for v in 1..s.node_count() {
        let p = s.parent(v).unwrap();
        match s.label(v) {
            Some(c) => writeln!(out, "  n{p} -> n{v} [label={}];", letter(c)).unwrap(),
            None => writeln!(out, "  n{p} -> n{v};").unwrap(),
        }
    }
    for v in 0..s.node_count() {
        if let Some(t) = s.link(v) {
            writeln!(out, "  n{v} -> n{t} [style=dashed, constraint=false];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn heap_to_dot(heap: &PositionHeap, links: &SuffixLinkMap) -> String {
    let all = Flags { numbered: true, labeled: true, links: true };
    sketch_to_dot(&HeapSketch::from_heap(heap, links, all))
}

/// Tree arcs carry their multiplicity as `xN` when it exceeds one; priority
/// links are drawn bold.
pub fn trace_to_dot(g: &TraceGraph, s: &HeapSketch) -> String {
    let mut out = String::from("digraph trace {\n  node [shape=circle];\n");
    for v in 0..s.node_count() {
        writeln!(out, "  n{v} [label={}];", quote(&caption(s, v))).unwrap();
    }
    for (a, arc) in g.graph.arcs().iter().enumerate() {
        let (t, h) = (arc.tail, arc.head);
        match g.kind(a) {
            ArcKind::Edge { label, .. } => {
                let text = if arc.mult > 1 {
                    format!("{} x{}", label as char, arc.mult)
                } else {
                    (label as char).to_string()
                };
                writeln!(out, "  n{t} -> n{h} [label={}];", quote(&text)).unwrap();
            }
            ArcKind::Link { .. } => {
                let style = if g.priority.contains(a, &g.graph) { "dashed,bold" } else { "dashed" };
                writeln!(out, "  n{t} -> n{h} [style=\"{style}\", constraint=false];").unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
