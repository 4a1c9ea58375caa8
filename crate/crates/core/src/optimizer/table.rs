// SPDX-License-Identifier: Apache-2.0

//! The cubic table of undetermined circuits, one cell per primal `φ_{i,j,k}`.
//!
//! Cells hold weights, sizes and pred arrival lists only; circuits are
//! rebuilt from the recorded [`Origin`]s once the final entry is chosen.

use std::time::Instant;

use serde::Serialize;

use super::splits::{enumerate_splits, SplitDescriptor};
use crate::circuit::GateKind;
use crate::error::{Error, Result};
use crate::huffman::huffman_delay;
use crate::instance::{log2_sum_exp2, AopInstance, ExtAopRef};
use crate::undetermined::{add_weights, Contribution, UndeterminedCircuit};

/// Absolute margin under which two log2-weights count as equal.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Maximum candidates kept per cell and output kind in size mode.
pub const PARETO_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Best weight per output kind.
    Delay,
    /// Non-dominated `(weight, size)` candidates per output kind.
    DelaySize,
}

/// Which list of a cell a candidate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    And,
    Or,
    Single,
}

impl Slot {
    fn of(kind: Option<GateKind>) -> Self {
        match kind {
            Some(GateKind::And) => Slot::And,
            Some(GateKind::Or) => Slot::Or,
            None => Slot::Single,
        }
    }
}

/// One operand choice of a split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pick {
    pub slot: Slot,
    pub index: usize,
    pub how: Contribution,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    /// Plain conjunction of the cell's inputs.
    Base,
    Split {
        split: SplitDescriptor,
        picks: [Pick; 2],
    },
}

/// An undetermined circuit for a cell, primal orientation.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub out_kind: Option<GateKind>,
    pub log2_weight: f64,
    pub internal_gates: usize,
    /// Arrivals of the output gate's predecessors, in merge order.
    pub arrivals: Vec<f64>,
    /// Delay after Huffman realization.
    pub delay: f64,
    pub origin: Origin,
}

impl Candidate {
    pub fn size(&self) -> usize {
        self.internal_gates + self.arrivals.len() - 1
    }
}

#[derive(Debug, Clone, Default)]
pub struct Cell {
    pub and: Vec<Candidate>,
    pub or: Vec<Candidate>,
    pub single: Option<Candidate>,
}

impl Cell {
    pub fn slot(&self, slot: Slot) -> &[Candidate] {
        match slot {
            Slot::And => &self.and,
            Slot::Or => &self.or,
            Slot::Single => self.single.as_slice(),
        }
    }

    /// Every candidate with its slot and index.
    pub fn candidates(&self) -> impl Iterator<Item = (Slot, usize, &Candidate)> {
        [Slot::Single, Slot::And, Slot::Or]
            .into_iter()
            .flat_map(move |s| self.slot(s).iter().enumerate().map(move |(i, c)| (s, i, c)))
    }

    pub fn len(&self) -> usize {
        self.and.len() + self.or.len() + usize::from(self.single.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest stored log2-weight for an output kind.
    pub fn min_log2_weight(&self, slot: Slot) -> Option<f64> {
        self.slot(slot).iter().map(|c| c.log2_weight).reduce(f64::min)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TableStats {
    pub cells: usize,
    pub candidates: usize,
    pub merges: usize,
    pub max_front: usize,
    /// Times the size-mode cap discarded a candidate.
    pub cap_hits: usize,
    pub elapsed_us: u64,
}

/// A DP table over all primal extended And-Or paths of an instance.
#[derive(Debug, Clone)]
pub struct DpTable {
    m: usize,
    mode: Mode,
    cells: Vec<Option<Cell>>,
    stats: TableStats,
}

/// Number of triples `0 ≤ i ≤ j ≤ k < m` with `j - i` even.
pub fn table_cell_count(m: usize) -> usize {
    (0..m).map(|j| (j / 2 + 1) * (m - j)).sum()
}

/// All cell references ordered by increasing input count.
pub fn cells_by_input_count(m: usize) -> Vec<ExtAopRef> {
    let mut refs = Vec::with_capacity(table_cell_count(m));
    for i in 0..m {
        for j in (i..m).step_by(2) {
            for k in j..m {
                refs.push(ExtAopRef::primal(i, j, k));
            }
        }
    }
    refs.sort_by_key(|r| r.input_count());
    refs
}

#[derive(Debug, Clone, Copy)]
struct Opt {
    log2_weight: f64,
    size: usize,
    pick: Pick,
}

#[derive(Debug, Clone)]
struct Pending {
    log2_weight: f64,
    size: usize,
    split: SplitDescriptor,
    picks: [Pick; 2],
}

/// `a` strictly better than `b` in (weight, size) lexicographic order.
fn lex_better(aw: f64, asz: usize, bw: f64, bsz: usize) -> bool {
    if aw < bw - WEIGHT_TOLERANCE {
        true
    } else if aw > bw + WEIGHT_TOLERANCE {
        false
    } else {
        asz < bsz
    }
}

fn dominates(aw: f64, asz: usize, bw: f64, bsz: usize) -> bool {
    aw <= bw + WEIGHT_TOLERANCE && asz <= bsz
}

/// Inserts into a non-dominated set; earlier entries win exact ties.
fn pareto_insert<T>(front: &mut Vec<T>, item: T, key: impl Fn(&T) -> (f64, usize)) {
    let (w, s) = key(&item);
    if front.iter().any(|f| {
        let (fw, fs) = key(f);
        dominates(fw, fs, w, s)
    }) {
        return;
    }
    front.retain(|f| {
        let (fw, fs) = key(f);
        !dominates(w, s, fw, fs)
    });
    front.push(item);
}

impl DpTable {
    pub fn build(inst: &AopInstance, mode: Mode) -> Self {
        Self::build_filtered(inst, mode, |_, _| true)
    }

    /// Like [`DpTable::build`] but only splits accepted by `allow` are tried.
    pub fn build_filtered(
        inst: &AopInstance,
        mode: Mode,
        allow: impl Fn(ExtAopRef, &SplitDescriptor) -> bool,
    ) -> Self {
        let start = Instant::now();
        let m = inst.m();
        let mut table = DpTable {
            m,
            mode,
            cells: vec![None; m * m * m],
            stats: TableStats::default(),
        };
        for r in cells_by_input_count(m) {
            let cell = if r.is_conjunction() {
                base_cell(inst, r)
            } else {
                table.split_cell(r, &allow)
            };
            table.stats.cells += 1;
            table.stats.candidates += cell.len();
            table.stats.max_front = table.stats.max_front.max(cell.and.len()).max(cell.or.len());
            let idx = table.index(r);
            table.cells[idx] = Some(cell);
        }
        table.stats.elapsed_us = start.elapsed().as_micros() as u64;
        table
    }

    fn index(&self, r: ExtAopRef) -> usize {
        (r.i * self.m + r.j) * self.m + r.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn stats(&self) -> TableStats {
        self.stats
    }

    /// The cell of a primal reference (the `dual` flag is ignored).
    pub fn cell(&self, r: ExtAopRef) -> Result<&Cell> {
        r.check(self.m)?;
        self.cells[self.index(r)]
            .as_ref()
            .ok_or(Error::MissingCandidate { i: r.i, j: r.j, k: r.k })
    }

    pub fn cells(&self) -> impl Iterator<Item = (ExtAopRef, &Cell)> {
        let m = self.m;
        self.cells.iter().enumerate().filter_map(move |(idx, c)| {
            c.as_ref()
                .map(|c| (ExtAopRef::primal(idx / (m * m), idx / m % m, idx % m), c))
        })
    }

    fn operand_options(&self, operand: ExtAopRef, kind: GateKind) -> Vec<Opt> {
        let cell = self.cells[self.index(operand)]
            .as_ref()
            .expect("operands are computed before the cells that use them");
        let mut opts = Vec::new();
        for (slot, index, c) in cell.candidates() {
            let eff = c.out_kind.map(|k| k.flipped_if(operand.dual));
            if eff.is_none_or(|k| k == kind) {
                opts.push(Opt {
                    log2_weight: c.log2_weight,
                    size: c.size(),
                    pick: Pick { slot, index, how: Contribution::Flatten },
                });
            }
            if eff.is_some() {
                opts.push(Opt {
                    log2_weight: c.delay,
                    size: c.size(),
                    pick: Pick { slot, index, how: Contribution::Realize },
                });
            }
        }
        match self.mode {
            Mode::Delay => {
                // flatten options precede realize options of the same candidate
                let mut best = opts[0];
                for o in &opts[1..] {
                    if lex_better(o.log2_weight, o.size, best.log2_weight, best.size) {
                        best = *o;
                    }
                }
                vec![best]
            }
            Mode::DelaySize => {
                let mut front = Vec::new();
                for o in opts {
                    pareto_insert(&mut front, o, |o| (o.log2_weight, o.size));
                }
                front
            }
        }
    }

    fn split_cell(&mut self, r: ExtAopRef, allow: &impl Fn(ExtAopRef, &SplitDescriptor) -> bool) -> Cell {
        let mut fronts: [Vec<Pending>; 2] = [Vec::new(), Vec::new()];
        for split in enumerate_splits(r.i, r.j, r.k) {
            if !allow(r, &split) {
                continue;
            }
            let left = self.operand_options(split.operands[0], split.kind);
            let right = self.operand_options(split.operands[1], split.kind);
            let front = &mut fronts[usize::from(split.kind == GateKind::Or)];
            for a in &left {
                for b in &right {
                    self.stats.merges += 1;
                    let p = Pending {
                        log2_weight: add_weights(a.log2_weight, b.log2_weight),
                        size: a.size + b.size + 1,
                        split,
                        picks: [a.pick, b.pick],
                    };
                    match self.mode {
                        Mode::Delay => match front.first() {
                            Some(best) if !lex_better(p.log2_weight, p.size, best.log2_weight, best.size) => {}
                            _ => *front = vec![p],
                        },
                        Mode::DelaySize => pareto_insert(front, p, |p| (p.log2_weight, p.size)),
                    }
                }
            }
        }
        let [and, or] = fronts;
        let mut cell = Cell {
            and: and.into_iter().map(|p| self.materialize(p)).collect(),
            or: or.into_iter().map(|p| self.materialize(p)).collect(),
            single: None,
        };
        for list in [&mut cell.and, &mut cell.or] {
            list.sort_by(|a, b| a.log2_weight.total_cmp(&b.log2_weight).then(a.size().cmp(&b.size())));
            if list.len() > PARETO_CAP {
                self.stats.cap_hits += list.len() - PARETO_CAP;
                list.truncate(PARETO_CAP);
            }
        }
        cell
    }

    fn materialize(&self, p: Pending) -> Candidate {
        let mut arrivals = Vec::new();
        let mut internal_gates = 0;
        for (operand, pick) in p.split.operands.iter().zip(p.picks) {
            let c = &self.cells[self.index(*operand)].as_ref().unwrap().slot(pick.slot)[pick.index];
            match pick.how {
                Contribution::Flatten => {
                    arrivals.extend_from_slice(&c.arrivals);
                    internal_gates += c.internal_gates;
                }
                Contribution::Realize => {
                    arrivals.push(c.delay);
                    internal_gates += c.size();
                }
            }
        }
        let delay = huffman_delay(&arrivals).expect("merged candidates have predecessors");
        Candidate {
            out_kind: Some(p.split.kind),
            log2_weight: log2_sum_exp2(arrivals.iter().copied()),
            internal_gates,
            arrivals,
            delay,
            origin: Origin::Split {
                split: p.split,
                picks: p.picks,
            },
        }
    }

    /// Rebuilds the undetermined circuit of a stored candidate, in the
    /// orientation requested by `r.dual`.
    pub fn undetermined(
        &self,
        inst: &AopInstance,
        r: ExtAopRef,
        slot: Slot,
        index: usize,
    ) -> Result<UndeterminedCircuit> {
        let cand = self
            .cell(r)?
            .slot(slot)
            .get(index)
            .ok_or(Error::MissingCandidate { i: r.i, j: r.j, k: r.k })?;
        let u = match &cand.origin {
            Origin::Base => super::base_candidate(r.i, r.j, r.k, inst)?,
            Origin::Split { split, picks } => {
                let [a, b] = [0, 1].map(|t| {
                    let op = split.operands[t];
                    self.undetermined(inst, op, picks[t].slot, picks[t].index)
                });
                let (a, b) = (a?, b?);
                UndeterminedCircuit::combine(split.kind, &[(&a, picks[0].how), (&b, picks[1].how)])?
            }
        };
        Ok(if r.dual { u.dualized() } else { u })
    }
}

fn base_cell(inst: &AopInstance, r: ExtAopRef) -> Cell {
    let arrivals: Vec<f64> = r.inputs().map(|t| inst.arrival(t)).collect();
    let out_kind = (arrivals.len() > 1).then_some(GateKind::And);
    let cand = Candidate {
        out_kind,
        log2_weight: log2_sum_exp2(arrivals.iter().copied()),
        internal_gates: 0,
        delay: huffman_delay(&arrivals).expect("cells have inputs"),
        arrivals,
        origin: Origin::Base,
    };
    let mut cell = Cell::default();
    match Slot::of(out_kind) {
        Slot::Single => cell.single = Some(cand),
        _ => cell.and.push(cand),
    }
    cell
}
