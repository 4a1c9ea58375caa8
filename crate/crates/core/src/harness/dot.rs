// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use crate::circuit::{Circuit, Node};

/// Graphviz rendering. Inputs share the leftmost rank; each gate is
/// labelled with its kind and arrival time and the output is drawn with a
/// double border.
pub fn emit_dot(c: &Circuit) -> String {
    let arrivals = c.arrival_times().ok();
    let mut s = String::from("digraph circuit {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n");
    let inputs: Vec<(usize, usize, f64)> = c
        .nodes()
        .iter()
        .enumerate()
        .filter_map(|(id, n)| match n {
            Node::Input { input, arrival } => Some((id, *input, *arrival)),
            Node::Gate { .. } => None,
        })
        .collect();
    s.push_str("  { rank=source;");
    for (id, _, _) in &inputs {
        let _ = write!(s, " n{id};");
    }
    s.push_str(" }\n");
    for (id, node) in c.nodes().iter().enumerate() {
        let peripheries = if id == c.output().0 { ", peripheries=2" } else { "" };
        let _ = match node {
            Node::Input { input, arrival } => writeln!(
                s,
                "  n{id} [shape=box, label=\"t{input}\\n@{arrival}\"{peripheries}];"
            ),
            Node::Gate { kind, .. } => {
                let at = arrivals.as_ref().map_or(String::new(), |a| format!("\\n@{}", a[id]));
                writeln!(s, "  n{id} [shape=ellipse, label=\"{kind}{at}\"{peripheries}];")
            }
        };
    }
    for (id, node) in c.nodes().iter().enumerate() {
        for p in node.preds() {
            let _ = writeln!(s, "  n{} -> n{id};", p.0);
        }
    }
    s.push_str("}\n");
    s
}
