// SPDX-License-Identifier: Apache-2.0

//! Dynamic program over extended And-Or paths.
//!
//! For every primal `φ_{i,j,k}` the table keeps the best undetermined circuit
//! with an AND output and the best with an OR output (or, in
//! [`Mode::DelaySize`], every non-dominated one). Larger cells are obtained
//! from the splits in [`splits`]; when two undetermined circuits are merged
//! each operand is either flattened into the new output gate (same output
//! kind) or realized by Huffman coding first, whichever contributes less
//! weight. Dual operands reuse the primal cell with gate kinds swapped.

mod splits;
mod table;

use std::time::Instant;

use serde::Serialize;

pub use splits::{enumerate_splits, SplitDescriptor};
pub use table::{
    cells_by_input_count, table_cell_count, Candidate, Cell, DpTable, Mode, Origin, Pick, Slot,
    TableStats, PARETO_CAP, WEIGHT_TOLERANCE,
};

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::instance::{AopInstance, ExtAopRef};
use crate::undetermined::{Contribution, UndeterminedCircuit};

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationResult {
    #[serde(skip)]
    pub circuit: Circuit,
    pub delay: f64,
    pub size: usize,
    pub mode: Mode,
    pub stats: TableStats,
    /// Wall time of the whole call including reconstruction.
    pub elapsed_us: u64,
}

/// Base case `k ≤ j + 1`: a plain conjunction of
/// `t_i, t_{i+2}, …, t_j` (and `t_{j+1}` when `k = j + 1`).
pub fn base_candidate(i: usize, j: usize, k: usize, inst: &AopInstance) -> Result<UndeterminedCircuit> {
    let r = ExtAopRef::new(i, j, k, false)?;
    r.check(inst.m())?;
    if !r.is_conjunction() {
        return Err(Error::InvalidRef { i, j, k, m: inst.m() });
    }
    let inputs: Vec<(usize, f64)> = r.inputs().map(|t| (t, inst.arrival(t))).collect();
    UndeterminedCircuit::from_inputs(GateKind::And, &inputs)
}

/// Merges operands under an output gate of `kind`.
///
/// `operands[n]` lists the stored alternatives for operand `n`, already in
/// the orientation the merge needs. For each operand the alternative and
/// absorption (flatten if its output kind allows it, otherwise realize)
/// with the smallest weight contribution is chosen; ties go to the smaller
/// realized size, then to flattening.
pub fn merge(kind: GateKind, operands: &[Vec<UndeterminedCircuit>]) -> Result<UndeterminedCircuit> {
    if operands.len() < 2 {
        return Err(Error::Invariant("merge needs at least two operands".into()));
    }
    let mut parts = Vec::with_capacity(operands.len());
    for alternatives in operands {
        let mut best: Option<(&UndeterminedCircuit, Contribution, f64, usize)> = None;
        for u in alternatives {
            let mut options = Vec::with_capacity(2);
            if u.can_flatten_into(kind) {
                options.push(Contribution::Flatten);
            }
            if u.out_kind().is_some() {
                options.push(Contribution::Realize);
            }
            for how in options {
                let w = u.contribution_log2_weight(how);
                let s = u.realized_size();
                let better = match best {
                    None => true,
                    Some((_, _, bw, bs)) => {
                        w < bw - WEIGHT_TOLERANCE || (w <= bw + WEIGHT_TOLERANCE && s < bs)
                    }
                };
                if better {
                    best = Some((u, how, w, s));
                }
            }
        }
        let (u, how, _, _) = best.ok_or(Error::Invariant("operand without candidates".into()))?;
        parts.push((u, how));
    }
    UndeterminedCircuit::combine(kind, &parts)
}

/// Fan-in-2 realization of an undetermined circuit by Huffman coding over
/// the output gate's predecessors.
pub fn realize(u: &UndeterminedCircuit) -> Circuit {
    u.realize()
}

pub fn build_table(inst: &AopInstance, mode: Mode) -> DpTable {
    DpTable::build(inst, mode)
}

/// Computes a small-delay circuit for `g` (or `g*` for dual instances).
pub fn optimize(inst: &AopInstance, mode: Mode) -> Result<OptimizationResult> {
    let start = Instant::now();
    let table = DpTable::build(inst, mode);
    let root = ExtAopRef::primal(0, 0, inst.m() - 1);
    let (slot, index, cand) = choose_final(table.cell(root)?, mode)?;
    let u = table.undetermined(inst, root, slot, index)?;
    let mut circuit = u.realize();
    let delay = circuit.delay()?;
    if delay != cand.delay {
        return Err(Error::Invariant(format!(
            "realized delay {delay} differs from table delay {}",
            cand.delay
        )));
    }
    if inst.variant().is_dual() {
        circuit = circuit.dualize();
    }
    Ok(OptimizationResult {
        size: circuit.size(),
        circuit,
        delay,
        mode,
        stats: table.stats(),
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}

/// Picks the final root entry: smallest realized delay, then the smaller
/// weight (delay mode) or size (size mode).
fn choose_final(cell: &Cell, mode: Mode) -> Result<(Slot, usize, &Candidate)> {
    let mut best: Option<(Slot, usize, &Candidate)> = None;
    for (slot, index, c) in cell.candidates() {
        let better = match best {
            None => true,
            Some((_, _, b)) => {
                if c.delay != b.delay {
                    c.delay < b.delay
                } else {
                    let weight = c.log2_weight.total_cmp(&b.log2_weight);
                    let lighter = c.log2_weight < b.log2_weight - WEIGHT_TOLERANCE;
                    let same_weight = c.log2_weight <= b.log2_weight + WEIGHT_TOLERANCE;
                    match mode {
                        Mode::Delay => lighter || (same_weight && c.size() < b.size()),
                        Mode::DelaySize => {
                            c.size() < b.size() || (c.size() == b.size() && weight.is_lt())
                        }
                    }
                }
            }
        };
        if better {
            best = Some((slot, index, c));
        }
    }
    best.ok_or(Error::MissingCandidate { i: 0, j: 0, k: cell.len() })
}
