// SPDX-License-Identifier: Apache-2.0

//! Circuits whose output gate may still have arbitrary fan-in.
//!
//! Every gate except the output is fan-in 2. The output gate's predecessor
//! signals are kept as a list; their Huffman combination is deferred until
//! [`UndeterminedCircuit::realize`] or until the circuit is absorbed by a
//! larger one. The weight of an undetermined circuit is `Σ 2^{d_i}` over the
//! arrivals `d_i` of the output's predecessors.

use crate::circuit::{Circuit, CircuitBuilder, GateKind, NodeId};
use crate::error::{Error, Result};
use crate::huffman::{huffman_combine, huffman_delay, Signal};
use crate::instance::{log2_add, log2_sum_exp2};

#[derive(Debug, Clone)]
pub struct UndeterminedCircuit {
    arena: CircuitBuilder,
    /// Output kind as stored in `arena`, before the `dualized` toggle.
    out_kind: Option<GateKind>,
    preds: Vec<Signal>,
    log2_weight: f64,
    internal_gates: usize,
    dualized: bool,
}

/// How an operand enters a merged circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contribution {
    /// Its predecessor signals join the merged output gate directly.
    Flatten,
    /// It is realized first and joins as one signal.
    Realize,
}

impl UndeterminedCircuit {
    /// Output gate `kind` over plain input signals `(input index, arrival)`.
    /// `kind` is ignored for a single input.
    pub fn from_inputs(kind: GateKind, inputs: &[(usize, f64)]) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::EmptySignals);
        }
        let mut arena = CircuitBuilder::new();
        let preds: Vec<Signal> = inputs
            .iter()
            .map(|&(input, arrival)| Signal {
                node: arena.input(input, arrival),
                arrival,
            })
            .collect();
        Ok(Self::assemble(arena, kind, preds, 0))
    }

    fn assemble(arena: CircuitBuilder, kind: GateKind, preds: Vec<Signal>, internal_gates: usize) -> Self {
        let out_kind = (preds.len() > 1).then_some(kind);
        let log2_weight = log2_sum_exp2(preds.iter().map(|s| s.arrival));
        Self {
            arena,
            out_kind,
            preds,
            log2_weight,
            internal_gates,
            dualized: false,
        }
    }

    /// `None` iff the circuit is a single signal.
    pub fn out_kind(&self) -> Option<GateKind> {
        self.out_kind.map(|k| k.flipped_if(self.dualized))
    }

    pub fn pred_arrivals(&self) -> Vec<f64> {
        self.preds.iter().map(|s| s.arrival).collect()
    }

    pub fn pred_count(&self) -> usize {
        self.preds.len()
    }

    pub fn log2_weight(&self) -> f64 {
        self.log2_weight
    }

    pub fn internal_gates(&self) -> usize {
        self.internal_gates
    }

    pub fn is_dualized(&self) -> bool {
        self.dualized
    }

    /// Gate count after realization.
    pub fn realized_size(&self) -> usize {
        self.internal_gates + self.preds.len() - 1
    }

    /// Delay after realization.
    pub fn realized_delay(&self) -> f64 {
        huffman_delay(&self.pred_arrivals()).expect("undetermined circuits have predecessors")
    }

    /// The dual circuit: every gate kind swapped. Weight, delay and size are
    /// unchanged.
    pub fn dualized(mut self) -> Self {
        self.dualized = !self.dualized;
        self
    }

    /// Weight contributed when absorbed in the given way.
    pub fn contribution_log2_weight(&self, how: Contribution) -> f64 {
        match how {
            Contribution::Flatten => self.log2_weight,
            Contribution::Realize => self.realized_delay(),
        }
    }

    /// `true` if the predecessors may join an output gate of `kind`.
    pub fn can_flatten_into(&self, kind: GateKind) -> bool {
        self.out_kind().is_none_or(|k| k == kind)
    }

    /// Fan-in-2 circuit computing the same function; the output predecessors
    /// are combined by a Huffman tree.
    pub fn realize(&self) -> Circuit {
        let mut builder = CircuitBuilder::new();
        let remap = builder.import(&self.arena, self.dualized);
        let signals = self.mapped_preds(&remap);
        let kind = self.out_kind().unwrap_or(GateKind::And);
        let out = huffman_combine(&mut builder, &signals, kind).expect("non-empty predecessors");
        builder.finish(out.node)
    }

    fn mapped_preds(&self, remap: &[NodeId]) -> Vec<Signal> {
        self.preds
            .iter()
            .map(|s| Signal {
                node: remap[s.node.0],
                arrival: s.arrival,
            })
            .collect()
    }

    /// Merges operands under a new output gate of `kind`, each absorbed as
    /// dictated by its [`Contribution`]. Predecessors are concatenated in
    /// operand order.
    pub fn combine(kind: GateKind, parts: &[(&UndeterminedCircuit, Contribution)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptySignals);
        }
        let mut arena = CircuitBuilder::new();
        let mut preds = Vec::new();
        let mut internal_gates = 0;
        for (op, how) in parts {
            let remap = arena.import(&op.arena, op.dualized);
            let signals = op.mapped_preds(&remap);
            match how {
                Contribution::Flatten => {
                    if !op.can_flatten_into(kind) {
                        return Err(Error::Invariant(format!(
                            "cannot flatten a {:?}-rooted operand into {kind}",
                            op.out_kind()
                        )));
                    }
                    internal_gates += op.internal_gates;
                    preds.extend(signals);
                }
                Contribution::Realize => {
                    let op_kind = op.out_kind().unwrap_or(kind);
                    let s = huffman_combine(&mut arena, &signals, op_kind)?;
                    internal_gates += op.realized_size();
                    preds.push(s);
                }
            }
        }
        Ok(Self::assemble(arena, kind, preds, internal_gates))
    }
}

/// Two undetermined log-weights summed, `log2(2^a + 2^b)`.
pub(crate) fn add_weights(a: f64, b: f64) -> f64 {
    log2_add(a, b)
}
