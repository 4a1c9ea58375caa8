// SPDX-License-Identifier: Apache-2.0

//! Turns a placed critical path of library cells into an And-Or path
//! instance.
//!
//! The pipeline is [`decompose_to_and_inv`], [`extract_path`],
//! [`demorgan_normalize`], [`modified_arrivals`] and [`chain_compress`];
//! [`normalize`] runs all of them. Arrival times of side signals come from
//! a static timing pass over the AND2/INV form in which an AND2 costs
//! `d_gate`, an inverter is free and a wire costs `d_dist` per µm of L1
//! distance.

mod netlist;
mod random;

use std::collections::HashMap;

use serde::Serialize;

pub use netlist::{
    l1, netlist_to_string, parse_netlist, read_netlist, CellType, Driver, Location, NetCell,
    NetInput, Netlist, MAX_NETLIST_INPUTS,
};
pub use random::random_path_netlist;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::huffman::huffman_circuit;
use crate::instance::{AopInstance, Variant};
use crate::truth::word_mask;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayModel {
    /// ps per gate stage.
    pub d_gate: f64,
    /// ps per µm of L1 distance.
    pub d_dist: f64,
}

impl DelayModel {
    /// `d_gate` must be positive; `d_dist = 0` ignores placement.
    pub fn new(d_gate: f64, d_dist: f64) -> Result<Self> {
        if !(d_gate.is_finite() && d_gate > 0.0) {
            return Err(Error::InvalidDelayModel(format!("d_gate = {d_gate} must be positive")));
        }
        if !(d_dist.is_finite() && d_dist >= 0.0) {
            return Err(Error::InvalidDelayModel(format!("d_dist = {d_dist} must be non-negative")));
        }
        Ok(Self { d_gate, d_dist })
    }
}

fn node_name(cell: &str, n: usize) -> String {
    format!("{cell}.{n}")
}

/// Rewrites every cell into AND2 and INV cells.
///
/// The last cell of each template keeps the original cell id, so every
/// original signal survives; intermediate cells are named `<id>.<n>`. BUF
/// cells become wires.
///
/// | cell            | template                                   |
/// |-----------------|--------------------------------------------|
/// | `AND2(a,b)`     | `AND(a,b)`                                 |
/// | `OR2(a,b)`      | `INV(AND(INV a, INV b))`                   |
/// | `NAND2(a,b)`    | `INV(AND(a,b))`                            |
/// | `NOR2(a,b)`     | `AND(INV a, INV b)`                        |
/// | `AOI21(a,b,c)`  | `AND(INV(AND(a,b)), INV c)`                |
/// | `OAI21(a,b,c)`  | `INV(AND(INV(AND(INV a, INV b)), c))`      |
///
/// No AND2/INV form of OAI21 with two ANDs uses fewer than four inverters.
pub fn decompose_to_and_inv(n: &Netlist) -> Result<Netlist> {
    let mut alias: HashMap<String, String> = HashMap::new();
    let mut cells = Vec::new();
    for cell in n.cells() {
        let pin = |q: usize| {
            let p = &cell.pins[q];
            alias.get(p).cloned().unwrap_or_else(|| p.clone())
        };
        let mut fresh = 0;
        let mut emit = |kind: CellType, pins: Vec<String>, last: bool| -> String {
            let id = if last {
                cell.id.clone()
            } else {
                fresh += 1;
                node_name(&cell.id, fresh)
            };
            cells.push(NetCell { id: id.clone(), kind, pins, location: cell.location });
            id
        };
        use CellType::*;
        match cell.kind {
            Buf => {
                alias.insert(cell.id.clone(), pin(0));
            }
            And2 | Inv => {
                let pins = (0..cell.kind.pin_count()).map(pin).collect();
                emit(cell.kind, pins, true);
            }
            Or2 => {
                let a = emit(Inv, vec![pin(0)], false);
                let b = emit(Inv, vec![pin(1)], false);
                let g = emit(And2, vec![a, b], false);
                emit(Inv, vec![g], true);
            }
            Nand2 => {
                let g = emit(And2, vec![pin(0), pin(1)], false);
                emit(Inv, vec![g], true);
            }
            Nor2 => {
                let a = emit(Inv, vec![pin(0)], false);
                let b = emit(Inv, vec![pin(1)], false);
                emit(And2, vec![a, b], true);
            }
            Aoi21 => {
                let g = emit(And2, vec![pin(0), pin(1)], false);
                let ng = emit(Inv, vec![g], false);
                let nc = emit(Inv, vec![pin(2)], false);
                emit(And2, vec![ng, nc], true);
            }
            Oai21 => {
                let a = emit(Inv, vec![pin(0)], false);
                let b = emit(Inv, vec![pin(1)], false);
                let g = emit(And2, vec![a, b], false);
                let or = emit(Inv, vec![g], false);
                let h = emit(And2, vec![or, pin(2)], false);
                emit(Inv, vec![h], true);
            }
        }
    }
    let output = alias.get(n.output()).cloned().unwrap_or_else(|| n.output().to_string());
    Netlist::new(n.inputs().to_vec(), cells, output)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StageKind {
    /// AND2 whose other pin is `side`.
    And { side: String },
    Inv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathStage {
    pub cell: String,
    pub kind: StageKind,
}

/// Cells from the critical input to the output, in signal-flow order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPath {
    pub input: String,
    pub stages: Vec<PathStage>,
    /// Set when the input reaches the output along more than one path;
    /// the path through the earliest cells is taken.
    pub multiple_paths: bool,
}

/// Follows the signal flow of `x` to the output of an AND2/INV netlist.
pub fn extract_path(n: &Netlist, x: &str) -> Result<CriticalPath> {
    let start = n
        .driver(x)
        .ok_or_else(|| Error::Unreachable(format!("`{x}` is not a signal")))?;
    let cells = n.cells();
    let pos = |d: Driver| match d {
        Driver::Input(_) => None,
        Driver::Cell(q) => Some(q),
    };
    // paths to the output from each cell, saturating
    let out = n.driver(n.output()).expect("validated");
    let mut paths = vec![0u64; cells.len()];
    let mut readers: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    let mut input_readers: Vec<usize> = Vec::new();
    for (q, cell) in cells.iter().enumerate() {
        if cell.kind != CellType::And2 && cell.kind != CellType::Inv {
            return Err(Error::UnsupportedCell(format!("{} in AND2/INV form", cell.kind)));
        }
        for p in &cell.pins {
            match n.driver(p).expect("validated") {
                Driver::Cell(d) => readers[d].push(q),
                d if d == start => input_readers.push(q),
                _ => {}
            }
        }
    }
    for q in (0..cells.len()).rev() {
        paths[q] = if Some(q) == pos(out) {
            1
        } else {
            readers[q].iter().fold(0u64, |acc, &r| acc.saturating_add(paths[r]))
        };
    }
    let first_readers = match start {
        Driver::Cell(q) => readers[q].clone(),
        Driver::Input(_) => input_readers,
    };
    let total = if start == out {
        1
    } else {
        first_readers.iter().fold(0u64, |acc, &r| acc.saturating_add(paths[r]))
    };
    if total == 0 {
        return Err(Error::Unreachable(format!("`{x}` does not reach `{}`", n.output())));
    }

    let mut stages = Vec::new();
    let mut prev = x.to_string();
    let mut next = first_readers;
    while prev != n.output() {
        let q = *next
            .iter()
            .filter(|&&r| paths[r] > 0)
            .min()
            .expect("a path continues");
        let cell = &cells[q];
        let kind = match cell.kind {
            CellType::Inv => StageKind::Inv,
            _ => {
                let side = if cell.pins[0] == prev { &cell.pins[1] } else { &cell.pins[0] };
                StageKind::And { side: side.clone() }
            }
        };
        stages.push(PathStage { cell: cell.id.clone(), kind });
        prev = cell.id.clone();
        next = readers[q].clone();
    }
    Ok(CriticalPath { input: x.to_string(), stages, multiple_paths: total > 1 })
}

/// A path input or side signal, possibly complemented.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Literal {
    pub signal: String,
    pub inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpineGate {
    pub cell: String,
    pub kind: GateKind,
    pub side: Literal,
}

/// An inverter-free spine: `out = gates[r-1](side, … gates[0](side, x) …)`,
/// complemented when `output_inverted`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedPath {
    pub input: Literal,
    pub gates: Vec<SpineGate>,
    pub output_inverted: bool,
}

/// Strips inverters from `signal`, returning the underlying literal.
fn strip_inverters(n: &Netlist, signal: &str, mut inverted: bool) -> Literal {
    let mut s = signal.to_string();
    while let Some(c) = n.cell(&s).filter(|c| c.kind == CellType::Inv) {
        inverted = !inverted;
        s = c.pins[0].clone();
    }
    Literal { signal: s, inverted }
}

/// Pushes spine inverters towards the inputs. Inverters at the very end
/// of the path become the output polarity; every other inverter flips the
/// kind of the gates before it and the polarity of their side inputs.
pub fn demorgan_normalize(n: &Netlist, path: &CriticalPath) -> NormalizedPath {
    let tail = path.stages.iter().rev().take_while(|s| s.kind == StageKind::Inv).count();
    let output_inverted = tail % 2 == 1;
    let body = &path.stages[..path.stages.len() - tail];
    let mut p = false;
    let mut gates = Vec::with_capacity(body.len());
    for stage in body.iter().rev() {
        match &stage.kind {
            StageKind::Inv => p = !p,
            StageKind::And { side } => gates.push(SpineGate {
                cell: stage.cell.clone(),
                kind: if p { GateKind::Or } else { GateKind::And },
                side: strip_inverters(n, side, p),
            }),
        }
    }
    gates.reverse();
    NormalizedPath {
        input: Literal { signal: path.input.clone(), inverted: p },
        gates,
        output_inverted,
    }
}

/// Arrival times in ps of every signal of an AND2/INV netlist.
pub fn static_timing(n: &Netlist, model: DelayModel) -> HashMap<String, f64> {
    let mut at: HashMap<String, f64> = n.inputs().iter().map(|i| (i.id.clone(), i.arrival)).collect();
    for cell in n.cells() {
        let a = cell
            .pins
            .iter()
            .map(|p| at[p] + model.d_dist * l1(n.location(p).expect("validated"), cell.location))
            .fold(f64::NEG_INFINITY, f64::max);
        let stage = if cell.kind == CellType::Inv { 0.0 } else { model.d_gate };
        at.insert(cell.id.clone(), a + stage);
    }
    at
}

/// `a'(t) = (a(t) + d_dist · ‖l(t) − l_out‖₁) / d_gate` for each
/// `(arrival, location)` pair.
pub fn modified_arrivals(inputs: &[(f64, Location)], l_out: Location, model: DelayModel) -> Vec<f64> {
    inputs
        .iter()
        .map(|&(a, l)| (a + model.d_dist * l1(l, l_out)) / model.d_gate)
        .collect()
}

/// One stage of an alternating spine. Its side input is a Huffman tree of
/// `kind` gates over `literals`; `combiner` has one input per literal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressedStage {
    pub kind: GateKind,
    pub literals: Vec<Literal>,
    pub literal_arrivals: Vec<f64>,
    pub arrival: f64,
    #[serde(skip)]
    pub combiner: Circuit,
}

/// Collapses maximal runs of equal gate kinds; `side_arrivals[q]` is the
/// modified arrival of `gates[q].side`.
pub fn chain_compress(gates: &[SpineGate], side_arrivals: &[f64]) -> Result<Vec<CompressedStage>> {
    if gates.len() != side_arrivals.len() {
        return Err(Error::LengthMismatch { declared: gates.len(), actual: side_arrivals.len() });
    }
    let mut out = Vec::new();
    let mut q = 0;
    while q < gates.len() {
        let kind = gates[q].kind;
        let end = (q..gates.len()).find(|&e| gates[e].kind != kind).unwrap_or(gates.len());
        let arrivals = side_arrivals[q..end].to_vec();
        let (combiner, arrival) = huffman_circuit(&arrivals, kind)?;
        out.push(CompressedStage {
            kind,
            literals: gates[q..end].iter().map(|g| g.side.clone()).collect(),
            literal_arrivals: arrivals,
            arrival,
            combiner,
        });
        q = end;
    }
    Ok(out)
}

/// How instance input `t_i` is obtained from the netlist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSource {
    /// Combining gate for more than one literal.
    pub kind: Option<GateKind>,
    pub literals: Vec<Literal>,
    pub literal_arrivals: Vec<f64>,
    #[serde(skip)]
    pub combiner: Circuit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationResult {
    #[serde(skip)]
    pub instance: AopInstance,
    pub arrivals: Vec<f64>,
    pub variant: Variant,
    pub inputs: Vec<InputSource>,
    pub output_location: Location,
    pub output_inverted: bool,
    pub multiple_paths: bool,
    /// Cells of the AND2/INV form on the extracted path.
    pub path_cells: Vec<String>,
}

/// Full pipeline for critical input `x`.
pub fn normalize(n: &Netlist, x: &str, model: DelayModel) -> Result<NormalizationResult> {
    let dec = decompose_to_and_inv(n)?;
    let path = extract_path(&dec, x)?;
    let norm = demorgan_normalize(&dec, &path);
    let at = static_timing(&dec, model);
    let l_out = n.location(n.output()).expect("validated");
    let modified = |lit: &Literal| {
        let l = dec.location(&lit.signal).expect("literals name signals");
        modified_arrivals(&[(at[&lit.signal], l)], l_out, model)[0]
    };
    let side_arrivals: Vec<f64> = norm.gates.iter().map(|g| modified(&g.side)).collect();
    let stages = chain_compress(&norm.gates, &side_arrivals)?;

    // outermost stage first; the critical input is the last path input
    let mut inputs: Vec<InputSource> = stages
        .iter()
        .rev()
        .map(|s| InputSource {
            kind: (s.literals.len() > 1).then_some(s.kind),
            literals: s.literals.clone(),
            literal_arrivals: s.literal_arrivals.clone(),
            combiner: s.combiner.clone(),
        })
        .collect();
    let mut arrivals: Vec<f64> = stages.iter().rev().map(|s| s.arrival).collect();
    let ax = modified(&norm.input);
    inputs.push(InputSource {
        kind: None,
        literals: vec![norm.input.clone()],
        literal_arrivals: vec![ax],
        combiner: Circuit::single_input(0, ax),
    });
    arrivals.push(ax);
    let variant = match stages.last() {
        Some(s) if s.kind == GateKind::Or => Variant::Dual,
        _ => Variant::Primal,
    };
    let instance = AopInstance::new(arrivals.clone(), variant)?;
    Ok(NormalizationResult {
        instance,
        arrivals,
        variant,
        inputs,
        output_location: l_out,
        output_inverted: norm.output_inverted,
        multiple_paths: path.multiple_paths,
        path_cells: path.stages.iter().map(|s| s.cell.clone()).collect(),
    })
}

/// Evaluates `g` (or `g*`) on word vectors of its inputs.
pub fn eval_aop_words(variant: Variant, inputs: &[Vec<u64>]) -> Vec<u64> {
    let m = inputs.len();
    let mut acc = inputs[m - 1].clone();
    for q in (0..m - 1).rev() {
        let kind = if q % 2 == 0 { GateKind::And } else { GateKind::Or };
        let kind = kind.flipped_if(variant.is_dual());
        for (a, t) in acc.iter_mut().zip(&inputs[q]) {
            *a = kind.apply(*t, *a);
        }
    }
    acc
}

/// Whether the instance, fed with the recorded input sources and output
/// polarity, computes the netlist output on every primary-input assignment.
pub fn round_trip_equivalent(n: &Netlist, res: &NormalizationResult) -> Result<bool> {
    let dec = decompose_to_and_inv(n)?;
    let values = dec.eval_words()?;
    let original = n.eval_words()?;
    let mask = word_mask(n.inputs().len());
    let mut t = Vec::with_capacity(res.inputs.len());
    for src in &res.inputs {
        let lits: Vec<Vec<u64>> = src
            .literals
            .iter()
            .map(|l| {
                let v = values.get(&l.signal).ok_or_else(|| Error::Unreachable(l.signal.clone()))?;
                Ok(v.iter().map(|w| if l.inverted { !w & mask } else { *w }).collect())
            })
            .collect::<Result<_>>()?;
        let refs: Vec<&[u64]> = lits.iter().map(|v| v.as_slice()).collect();
        let order = src.combiner.topological_order()?;
        t.push(src.combiner.eval_words(&refs, &order));
    }
    let mut got = eval_aop_words(res.variant, &t);
    if res.output_inverted {
        got.iter_mut().for_each(|w| *w = !*w & mask);
    }
    Ok(got == original[n.output()])
}

#[cfg(test)]
mod tests;
