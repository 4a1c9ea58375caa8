// SPDX-License-Identifier: Apache-2.0

//! Reference recursions for head-to-head comparison with the optimizer.
//!
//! [`BaselineFamily::R2006`] and [`BaselineFamily::Hs2017`] run a dynamic
//! program over contiguous ranges `g(t_a, …, t_b)` using a single classic
//! split, picking the best split parameter per range.
//! [`BaselineFamily::ImmediateExt`] uses the extended-path table of the
//! optimizer but realizes both operands of every merge with one 2-input
//! gate, so no output gate is ever left open.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitBuilder, GateKind};
use crate::error::{Error, Result};
use crate::huffman::{huffman_combine, huffman_delay, Signal};
use crate::instance::{AopInstance, ExtAopRef};
use crate::optimizer::{cells_by_input_count, enumerate_splits, Mode, OptimizationResult, TableStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineFamily {
    /// `g = g(t_0..t_{2λ-1}) ∨ (t_0 ∧ t_2 ∧ … ∧ t_{2λ-2} ∧ g(t_{2λ}..))`
    R2006,
    /// `g = g(t_0..t_{2λ}) ∧ (t_1 ∨ t_3 ∨ … ∨ t_{2λ-1} ∨ g*(t_{2λ+1}..))`
    Hs2017,
    /// Extended-path splits with immediate realization.
    #[serde(rename = "immediate")]
    ImmediateExt,
}

impl BaselineFamily {
    pub const ALL: [BaselineFamily; 3] = [Self::R2006, Self::Hs2017, Self::ImmediateExt];

    pub fn name(self) -> &'static str {
        match self {
            Self::R2006 => "r2006",
            Self::Hs2017 => "hs2017",
            Self::ImmediateExt => "immediate",
        }
    }
}

impl fmt::Display for BaselineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r2006" => Ok(Self::R2006),
            "hs2017" => Ok(Self::Hs2017),
            "immediate" | "immediate-ext" | "immediateext" => Ok(Self::ImmediateExt),
            other => Err(Error::InvalidConfig(format!("unknown baseline family `{other}`"))),
        }
    }
}

/// Parses a comma-separated family list; the empty string yields no families.
pub fn parse_families(list: &str) -> Result<Vec<BaselineFamily>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let f: BaselineFamily = part.parse()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    delay: f64,
    size: usize,
    /// Split parameter, `None` for base cases.
    lambda: Option<usize>,
}

fn better(a: &Entry, b: &Entry) -> bool {
    a.delay < b.delay || (a.delay == b.delay && a.size < b.size)
}

/// Best realized circuit for every range `[a, b]` under one classic split.
struct RangeTable<'a> {
    inst: &'a AopInstance,
    family: BaselineFamily,
    entries: Vec<Vec<Option<Entry>>>,
    merges: usize,
}

impl<'a> RangeTable<'a> {
    fn build(inst: &'a AopInstance, family: BaselineFamily) -> Result<Self> {
        let m = inst.m();
        let mut t = RangeTable { inst, family, entries: vec![vec![None; m]; m], merges: 0 };
        for n in 1..=m {
            for a in 0..=m - n {
                let b = a + n - 1;
                let e = t.solve(a, b)?;
                t.entries[a][b] = Some(e);
            }
        }
        Ok(t)
    }

    fn get(&self, a: usize, b: usize) -> Entry {
        self.entries[a][b].expect("ranges are filled by length")
    }

    fn lambdas(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        match self.family {
            BaselineFamily::R2006 => 1..=(n - 1) / 2,
            _ => 0..=(n - 2) / 2,
        }
    }

    fn solve(&mut self, a: usize, b: usize) -> Result<Entry> {
        let n = b - a + 1;
        let arr = |t: usize| self.inst.arrival(t);
        if n == 1 {
            return Ok(Entry { delay: arr(a), size: 0, lambda: None });
        }
        if n == 2 {
            return Ok(Entry { delay: arr(a).max(arr(b)) + 1.0, size: 1, lambda: None });
        }
        let mut best: Option<Entry> = None;
        for lambda in self.lambdas(n) {
            let (head, tail, sides) = self.parts(a, b, lambda);
            let (h, tl) = (self.get(head.0, head.1), self.get(tail.0, tail.1));
            let mut leaves: Vec<f64> = sides.iter().map(|&t| arr(t)).collect();
            leaves.push(tl.delay);
            let inner = huffman_delay(&leaves)?;
            let cand = Entry {
                delay: h.delay.max(inner) + 1.0,
                size: h.size + tl.size + sides.len() + 1,
                lambda: Some(lambda),
            };
            self.merges += 1;
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
        best.ok_or_else(|| Error::Invariant(format!("no split for range [{a}, {b}]")))
    }

    /// Head range, tail range and side inputs of the split with `lambda`.
    fn parts(&self, a: usize, b: usize, lambda: usize) -> ((usize, usize), (usize, usize), Vec<usize>) {
        match self.family {
            BaselineFamily::R2006 => (
                (a, a + 2 * lambda - 1),
                (a + 2 * lambda, b),
                (0..lambda).map(|q| a + 2 * q).collect(),
            ),
            _ => (
                (a, a + 2 * lambda),
                (a + 2 * lambda + 1, b),
                (0..lambda).map(|q| a + 2 * q + 1).collect(),
            ),
        }
    }

    /// Emits `g(t_a..t_b)` (its dual when `flip`) into `builder`.
    fn emit(&self, builder: &mut CircuitBuilder, a: usize, b: usize, flip: bool) -> Result<Signal> {
        let e = self.get(a, b);
        let arr = |t: usize| self.inst.arrival(t);
        let input = |builder: &mut CircuitBuilder, t: usize| Signal { node: builder.input(t, arr(t)), arrival: arr(t) };
        let Some(lambda) = e.lambda else {
            if a == b {
                return Ok(input(builder, a));
            }
            let (x, y) = (input(builder, a), input(builder, b));
            let node = builder.gate(GateKind::And.flipped_if(flip), x.node, y.node);
            return Ok(Signal { node, arrival: e.delay });
        };
        let (head, tail, sides) = self.parts(a, b, lambda);
        // R2006: OR over (head, AND(sides, tail)); HS2017: AND over (head, OR(sides, dual tail))
        let (outer, inner, tail_flip) = match self.family {
            BaselineFamily::R2006 => (GateKind::Or, GateKind::And, flip),
            _ => (GateKind::And, GateKind::Or, !flip),
        };
        let h = self.emit(builder, head.0, head.1, flip)?;
        let tl = self.emit(builder, tail.0, tail.1, tail_flip)?;
        let mut leaves: Vec<Signal> = sides.iter().map(|&t| input(builder, t)).collect();
        leaves.push(tl);
        let s = huffman_combine(builder, &leaves, inner.flipped_if(flip))?;
        let node = builder.gate(outer.flipped_if(flip), h.node, s.node);
        Ok(Signal { node, arrival: h.arrival.max(s.arrival) + 1.0 })
    }
}

/// Best immediately realized circuit per extended path `φ_{i,j,k}`.
struct ImmediateTable<'a> {
    inst: &'a AopInstance,
    /// `(delay, size, chosen split index)` keyed by `(i, j, k)`.
    entries: Vec<Option<(Entry, usize)>>,
    merges: usize,
}

impl<'a> ImmediateTable<'a> {
    fn key(&self, r: ExtAopRef) -> usize {
        let m = self.inst.m();
        (r.i * m + r.j) * m + r.k
    }

    fn build(inst: &'a AopInstance) -> Result<Self> {
        let m = inst.m();
        let mut t = ImmediateTable { inst, entries: vec![None; m * m * m], merges: 0 };
        for r in cells_by_input_count(m) {
            let e = if r.is_conjunction() {
                let arrivals: Vec<f64> = r.inputs().map(|x| inst.arrival(x)).collect();
                let delay = huffman_delay(&arrivals)?;
                (Entry { delay, size: arrivals.len() - 1, lambda: None }, usize::MAX)
            } else {
                let mut best: Option<(Entry, usize)> = None;
                for (idx, s) in enumerate_splits(r.i, r.j, r.k).into_iter().enumerate() {
                    let (x, y) = (t.get(s.operands[0])?, t.get(s.operands[1])?);
                    let cand = Entry {
                        delay: x.delay.max(y.delay) + 1.0,
                        size: x.size + y.size + 1,
                        lambda: Some(s.lambda),
                    };
                    t.merges += 1;
                    if best.as_ref().is_none_or(|(b, _)| better(&cand, b)) {
                        best = Some((cand, idx));
                    }
                }
                best.ok_or(Error::MissingCandidate { i: r.i, j: r.j, k: r.k })?
            };
            let key = t.key(r);
            t.entries[key] = Some(e);
        }
        Ok(t)
    }

    fn get(&self, r: ExtAopRef) -> Result<Entry> {
        self.entries[self.key(r.with_dual(false))]
            .map(|(e, _)| e)
            .ok_or(Error::MissingCandidate { i: r.i, j: r.j, k: r.k })
    }

    fn emit(&self, builder: &mut CircuitBuilder, r: ExtAopRef, flip: bool) -> Result<Signal> {
        let flip = flip ^ r.dual;
        let (e, idx) = self.entries[self.key(r.with_dual(false))]
            .ok_or(Error::MissingCandidate { i: r.i, j: r.j, k: r.k })?;
        if e.lambda.is_none() {
            let leaves: Vec<Signal> = r
                .inputs()
                .map(|x| {
                    let arrival = self.inst.arrival(x);
                    Signal { node: builder.input(x, arrival), arrival }
                })
                .collect();
            return huffman_combine(builder, &leaves, GateKind::And.flipped_if(flip));
        }
        let s = enumerate_splits(r.i, r.j, r.k)
            .into_iter()
            .nth(idx)
            .ok_or_else(|| Error::Invariant(format!("split {idx} of {r} vanished")))?;
        let x = self.emit(builder, s.operands[0], flip)?;
        let y = self.emit(builder, s.operands[1], flip)?;
        let node = builder.gate(s.kind.flipped_if(flip), x.node, y.node);
        Ok(Signal { node, arrival: x.arrival.max(y.arrival) + 1.0 })
    }
}

/// Runs one baseline family on `inst`.
pub fn optimize_baseline(inst: &AopInstance, family: BaselineFamily) -> Result<OptimizationResult> {
    let start = Instant::now();
    let m = inst.m();
    let flip = inst.variant().is_dual();
    let mut builder = CircuitBuilder::new();
    let (out, cells, merges, expected) = match family {
        BaselineFamily::R2006 | BaselineFamily::Hs2017 => {
            let t = RangeTable::build(inst, family)?;
            let out = t.emit(&mut builder, 0, m - 1, flip)?;
            (out, m * (m + 1) / 2, t.merges, t.get(0, m - 1).delay)
        }
        BaselineFamily::ImmediateExt => {
            let t = ImmediateTable::build(inst)?;
            let root = ExtAopRef::primal(0, 0, m - 1);
            let out = t.emit(&mut builder, root, flip)?;
            let cells = t.entries.iter().filter(|e| e.is_some()).count();
            (out, cells, t.merges, t.get(root)?.delay)
        }
    };
    let circuit = builder.finish(out.node);
    let delay = circuit.delay()?;
    if delay != expected {
        return Err(Error::Invariant(format!(
            "{family}: realized delay {delay} differs from table delay {expected}"
        )));
    }
    Ok(OptimizationResult {
        size: circuit.size(),
        circuit,
        delay,
        mode: Mode::Delay,
        stats: TableStats { cells, candidates: cells, merges, max_front: 1, ..TableStats::default() },
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}
