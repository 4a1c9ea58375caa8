// SPDX-License-Identifier: Apache-2.0

//! Fan-in-2 AND/OR circuits over the path inputs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    And,
    Or,
}

impl GateKind {
    pub fn dual(self) -> Self {
        match self {
            GateKind::And => GateKind::Or,
            GateKind::Or => GateKind::And,
        }
    }

    /// Swaps the kind when `flip` is set.
    pub fn flipped_if(self, flip: bool) -> Self {
        if flip {
            self.dual()
        } else {
            self
        }
    }

    pub fn apply(self, a: u64, b: u64) -> u64 {
        match self {
            GateKind::And => a & b,
            GateKind::Or => a | b,
        }
    }

    pub fn apply_bool(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::And => a && b,
            GateKind::Or => a || b,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Input { input: usize, arrival: f64 },
    Gate { kind: GateKind, preds: Vec<NodeId> },
}

impl Node {
    pub fn preds(&self) -> &[NodeId] {
        match self {
            Node::Input { .. } => &[],
            Node::Gate { preds, .. } => preds,
        }
    }

    pub fn is_gate(&self) -> bool {
        matches!(self, Node::Gate { .. })
    }
}

/// A single-output circuit stored as a node arena.
///
/// Circuits built by this crate are always well formed; circuits read from
/// files may not be, see [`crate::verify::check_structure`].
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    nodes: Vec<Node>,
    output: NodeId,
}

impl Circuit {
    pub fn from_parts(nodes: Vec<Node>, output: NodeId) -> Result<Self> {
        if output.0 >= nodes.len() {
            return Err(Error::MalformedCircuit(format!(
                "output {output} out of range ({} nodes)",
                nodes.len()
            )));
        }
        for (idx, node) in nodes.iter().enumerate() {
            if let Some(p) = node.preds().iter().find(|p| p.0 >= nodes.len()) {
                return Err(Error::MalformedCircuit(format!(
                    "node n{idx} references missing node {p}"
                )));
            }
        }
        Ok(Self { nodes, output })
    }

    /// A circuit consisting of one input and no gates.
    pub fn single_input(input: usize, arrival: f64) -> Self {
        Self {
            nodes: vec![Node::Input { input, arrival }],
            output: NodeId(0),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of gate nodes.
    pub fn size(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_gate()).count()
    }

    /// Number of input nodes.
    pub fn input_nodes(&self) -> usize {
        self.nodes.len() - self.size()
    }

    /// Largest input index referenced plus one.
    pub fn input_span(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Input { input, .. } => Some(input + 1),
                Node::Gate { .. } => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Node ids in an order where every node follows its predecessors.
    pub fn topological_order(&self) -> Result<Vec<NodeId>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (idx, node) in self.nodes.iter().enumerate() {
            for p in node.preds() {
                indegree[idx] += 1;
                succs[p.0].push(idx);
            }
        }
        let mut stack: Vec<usize> = (0..n).rev().filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(NodeId(v));
            for &s in succs[v].iter().rev() {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    stack.push(s);
                }
            }
        }
        if order.len() != n {
            return Err(Error::MalformedCircuit("cycle detected".into()));
        }
        Ok(order)
    }

    /// Arrival time of every node under `gate = 1 + max(preds)`.
    pub fn arrival_times(&self) -> Result<Vec<f64>> {
        let mut arrival = vec![f64::NEG_INFINITY; self.nodes.len()];
        for id in self.topological_order()? {
            arrival[id.0] = match &self.nodes[id.0] {
                Node::Input { arrival, .. } => *arrival,
                Node::Gate { preds, .. } => {
                    if preds.is_empty() {
                        return Err(Error::MalformedCircuit(format!("gate {id} has no inputs")));
                    }
                    1.0 + preds.iter().map(|p| arrival[p.0]).fold(f64::NEG_INFINITY, f64::max)
                }
            };
        }
        Ok(arrival)
    }

    pub fn delay(&self) -> Result<f64> {
        Ok(self.arrival_times()?[self.output.0])
    }

    /// Longest gate count on any input-output path.
    pub fn depth(&self) -> Result<usize> {
        let mut depth = vec![0usize; self.nodes.len()];
        for id in self.topological_order()? {
            depth[id.0] = match &self.nodes[id.0] {
                Node::Input { .. } => 0,
                Node::Gate { preds, .. } => 1 + preds.iter().map(|p| depth[p.0]).max().unwrap_or(0),
            };
        }
        Ok(depth[self.output.0])
    }

    /// Same DAG with every AND swapped for OR and vice versa.
    pub fn dualize(&self) -> Circuit {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Gate { kind, preds } => Node::Gate {
                    kind: kind.dual(),
                    preds: preds.clone(),
                },
                input => input.clone(),
            })
            .collect();
        Circuit {
            nodes,
            output: self.output,
        }
    }

    /// Evaluates on one assignment; input `t_i` is `assignment[i]`.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        let words: Vec<u64> = assignment.iter().map(|&b| if b { !0 } else { 0 }).collect();
        let inputs: Vec<&[u64]> = words.iter().map(std::slice::from_ref).collect();
        Ok(self.eval_words(&inputs, &self.topological_order()?)[0] & 1 == 1)
    }

    /// Word-parallel evaluation. `inputs[i]` holds the bit patterns of `t_i`;
    /// `order` must be a topological order of this circuit.
    pub fn eval_words(&self, inputs: &[&[u64]], order: &[NodeId]) -> Vec<u64> {
        let words = inputs.first().map_or(1, |w| w.len());
        let mut values: Vec<Vec<u64>> = vec![Vec::new(); self.nodes.len()];
        for id in order {
            let v = match &self.nodes[id.0] {
                Node::Input { input, .. } => inputs[*input].to_vec(),
                Node::Gate { kind, preds } => {
                    let mut acc = values[preds[0].0].clone();
                    for p in &preds[1..] {
                        for (a, b) in acc.iter_mut().zip(&values[p.0]) {
                            *a = kind.apply(*a, *b);
                        }
                    }
                    acc
                }
            };
            debug_assert_eq!(v.len(), words);
            values[id.0] = v;
        }
        std::mem::take(&mut values[self.output.0])
    }

    /// Successor lists for every node.
    pub fn successors(&self) -> Vec<Vec<NodeId>> {
        let mut succs = vec![Vec::new(); self.nodes.len()];
        for (idx, node) in self.nodes.iter().enumerate() {
            for p in node.preds() {
                succs[p.0].push(NodeId(idx));
            }
        }
        succs
    }
}

pub fn circuit_delay(c: &Circuit) -> Result<f64> {
    c.delay()
}

pub fn circuit_size(c: &Circuit) -> usize {
    c.size()
}

pub fn dualize(c: &Circuit) -> Circuit {
    c.dualize()
}

/// Incremental construction of well-formed circuits. Input nodes are shared
/// per input index.
#[derive(Debug, Clone, Default)]
pub struct CircuitBuilder {
    nodes: Vec<Node>,
    inputs: HashMap<usize, NodeId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self, input: usize, arrival: f64) -> NodeId {
        if let Some(&id) = self.inputs.get(&input) {
            return id;
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node::Input { input, arrival });
        self.inputs.insert(input, id);
        id
    }

    pub fn gate(&mut self, kind: GateKind, a: NodeId, b: NodeId) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node::Gate {
            kind,
            preds: vec![a, b],
        });
        id
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Copies every node of `other` into `self`, swapping gate kinds when
    /// `flip` is set. Returns the id of each copied node.
    pub fn import(&mut self, other: &CircuitBuilder, flip: bool) -> Vec<NodeId> {
        let mut remap = Vec::with_capacity(other.nodes.len());
        for node in &other.nodes {
            let id = match node {
                Node::Input { input, arrival } => self.input(*input, *arrival),
                Node::Gate { kind, preds } => self.gate(
                    kind.flipped_if(flip),
                    remap[preds[0].0],
                    remap[preds[1].0],
                ),
            };
            remap.push(id);
        }
        remap
    }

    /// Finishes the circuit, dropping nodes that do not reach `output`.
    pub fn finish(self, output: NodeId) -> Circuit {
        let mut live = vec![false; self.nodes.len()];
        live[output.0] = true;
        for idx in (0..self.nodes.len()).rev() {
            if live[idx] {
                for p in self.nodes[idx].preds() {
                    live[p.0] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (idx, node) in self.nodes.into_iter().enumerate() {
            if !live[idx] {
                continue;
            }
            remap[idx] = nodes.len();
            nodes.push(match node {
                Node::Gate { kind, preds } => Node::Gate {
                    kind,
                    preds: preds.iter().map(|p| NodeId(remap[p.0])).collect(),
                },
                input => input,
            });
        }
        Circuit {
            nodes,
            output: NodeId(remap[output.0]),
        }
    }
}
