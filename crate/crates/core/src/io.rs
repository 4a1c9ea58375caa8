// SPDX-License-Identifier: Apache-2.0

//! Instance files (TOML) and circuit files (JSON).
//!
//! Instance file:
//!
//! ```toml
//! m = 3
//! arrivals = [0.0, 20.0, 0.0]
//! variant = "g"        # or "g_star"; defaults to "g"
//! ```
//!
//! Circuit file: a node list and the output node id. Input nodes carry the
//! input index and arrival time, gates carry their predecessors.
//!
//! ```json
//! {
//!   "output": 4,
//!   "nodes": [
//!     { "id": 0, "kind": "input", "input": 0, "arrival": 0.0 },
//!     { "id": 3, "kind": "or", "preds": [1, 2] },
//!     ...
//!   ]
//! }
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind, Node, NodeId};
use crate::error::{Error, Result};
use crate::instance::{AopInstance, Variant};

#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    m: usize,
    arrivals: Vec<f64>,
    #[serde(default = "primal")]
    variant: Variant,
}

fn primal() -> Variant {
    Variant::Primal
}

pub fn parse_instance(text: &str) -> Result<AopInstance> {
    let file: InstanceFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.m != file.arrivals.len() {
        return Err(Error::LengthMismatch { declared: file.m, actual: file.arrivals.len() });
    }
    AopInstance::new(file.arrivals, file.variant)
}

pub fn instance_to_string(inst: &AopInstance) -> String {
    let file = InstanceFile { m: inst.m(), arrivals: inst.arrivals().to_vec(), variant: inst.variant() };
    toml::to_string(&file).expect("instance files always serialize")
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<AopInstance> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &AopInstance) -> Result<()> {
    Ok(fs::write(path, instance_to_string(inst))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NodeKind {
    Input,
    And,
    Or,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeRecord {
    id: u64,
    kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    preds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arrival: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CircuitFile {
    output: u64,
    nodes: Vec<NodeRecord>,
}

/// Parses a circuit file. Node ids may be arbitrary distinct integers;
/// structural checks beyond reference resolution are left to
/// [`crate::verify::check_structure`].
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let file: CircuitFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut index = HashMap::with_capacity(file.nodes.len());
    for (pos, rec) in file.nodes.iter().enumerate() {
        if index.insert(rec.id, NodeId(pos)).is_some() {
            return Err(Error::MalformedCircuit(format!("duplicate node id {}", rec.id)));
        }
    }
    let resolve = |id: u64| {
        index
            .get(&id)
            .copied()
            .ok_or_else(|| Error::MalformedCircuit(format!("unknown node id {id}")))
    };
    let mut nodes = Vec::with_capacity(file.nodes.len());
    for rec in &file.nodes {
        nodes.push(match rec.kind {
            NodeKind::Input => {
                let input = rec
                    .input
                    .ok_or_else(|| Error::MalformedCircuit(format!("input node {} lacks `input`", rec.id)))?;
                let arrival = rec.arrival.unwrap_or(0.0);
                if !arrival.is_finite() {
                    return Err(Error::NonFinite { index: input, value: arrival });
                }
                if !rec.preds.is_empty() {
                    return Err(Error::MalformedCircuit(format!("input node {} has predecessors", rec.id)));
                }
                Node::Input { input, arrival }
            }
            NodeKind::And | NodeKind::Or => Node::Gate {
                kind: if rec.kind == NodeKind::And { GateKind::And } else { GateKind::Or },
                preds: rec.preds.iter().map(|&p| resolve(p)).collect::<Result<_>>()?,
            },
        });
    }
    Circuit::from_parts(nodes, resolve(file.output)?)
}

pub fn circuit_to_string(c: &Circuit) -> String {
    let nodes = c
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| match node {
            Node::Input { input, arrival } => NodeRecord {
                id: id as u64,
                kind: NodeKind::Input,
                input: Some(*input),
                preds: Vec::new(),
                arrival: Some(*arrival),
            },
            Node::Gate { kind, preds } => NodeRecord {
                id: id as u64,
                kind: match kind {
                    GateKind::And => NodeKind::And,
                    GateKind::Or => NodeKind::Or,
                },
                input: None,
                preds: preds.iter().map(|p| p.0 as u64).collect(),
                arrival: None,
            },
        })
        .collect();
    let file = CircuitFile { output: c.output().0 as u64, nodes };
    serde_json::to_string_pretty(&file).expect("circuit files always serialize")
}

pub fn read_circuit(path: impl AsRef<Path>) -> Result<Circuit> {
    parse_circuit(&fs::read_to_string(path)?)
}

pub fn write_circuit(path: impl AsRef<Path>, c: &Circuit) -> Result<()> {
    Ok(fs::write(path, circuit_to_string(c) + "\n")?)
}
