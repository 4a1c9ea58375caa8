// SPDX-License-Identifier: Apache-2.0

//! Delay lower bounds and an exact optimum for tiny instances.

use std::collections::HashMap;

use serde::Serialize;

use crate::circuit::GateKind;
use crate::error::{Error, Result};
use crate::instance::{exact_ceil_log2_weight, AopInstance};
use crate::truth::phi_eval;

/// Largest `m` accepted by [`exact_optimum`].
pub const ORACLE_MAX_INPUTS: usize = 5;
/// Largest arrival spread accepted by [`exact_optimum`].
pub const ORACLE_MAX_SPREAD: f64 = 16.0;
/// The oracle gives up once this many functions are reachable.
pub const ORACLE_MAX_FUNCTIONS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputBound {
    pub input: usize,
    pub arrival: f64,
    /// Gates every path from this input to the output must traverse.
    pub min_gates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub kraft: f64,
    pub input_depth: f64,
    pub combined: f64,
    pub details: Vec<InputBound>,
}

/// Kraft bound: `⌈log2 W⌉` for integral arrivals, `log2 W` otherwise.
pub fn kraft_lb(inst: &AopInstance) -> f64 {
    if inst.is_integral() {
        match exact_ceil_log2_weight(inst.arrivals()) {
            Some(c) => c as f64,
            // tiny terms may be lost in floating point, which only lowers the bound
            None => inst.weight_log2().ceil(),
        }
    } else {
        inst.weight_log2()
    }
}

/// Minimum number of gates between input `t_i` and the output of any
/// circuit for an And-Or path on `m` inputs.
///
/// `t_0` needs one gate (none if it is the only input). For `m ≥ 3` every
/// other input needs two: the path is neither `t_i ∧ h` nor `t_i ∨ h`.
pub fn min_gates_to_output(input: usize, m: usize) -> usize {
    match (m, input) {
        (1, _) => 0,
        (_, 0) | (2, _) => 1,
        _ => 2,
    }
}

/// `max_i a(t_i) + ℓ_i` with `ℓ_i` from [`min_gates_to_output`].
pub fn input_depth_lb(inst: &AopInstance) -> f64 {
    input_bounds(inst)
        .iter()
        .map(|b| b.arrival + b.min_gates as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn input_bounds(inst: &AopInstance) -> Vec<InputBound> {
    let m = inst.m();
    inst.arrivals()
        .iter()
        .enumerate()
        .map(|(input, &arrival)| InputBound {
            input,
            arrival,
            min_gates: min_gates_to_output(input, m),
        })
        .collect()
}

pub fn lower_bound(inst: &AopInstance) -> LowerBoundReport {
    let kraft = kraft_lb(inst);
    let input_depth = input_depth_lb(inst);
    LowerBoundReport {
        kraft,
        input_depth,
        combined: kraft.max(input_depth),
        details: input_bounds(inst),
    }
}

/// Whether [`exact_optimum`] accepts the instance.
pub fn oracle_eligible(inst: &AopInstance) -> bool {
    oracle_check(inst).is_ok()
}

fn oracle_check(inst: &AopInstance) -> Result<()> {
    if inst.m() > ORACLE_MAX_INPUTS {
        return Err(Error::InstanceTooLarge(format!("m = {} > {ORACLE_MAX_INPUTS}", inst.m())));
    }
    if !inst.is_integral() {
        return Err(Error::InstanceTooLarge("arrival times are not integral".into()));
    }
    let a = inst.arrivals();
    let spread = a.iter().copied().fold(f64::NEG_INFINITY, f64::max) - a.iter().copied().fold(f64::INFINITY, f64::min);
    if spread > ORACLE_MAX_SPREAD {
        return Err(Error::InstanceTooLarge(format!("arrival spread {spread} > {ORACLE_MAX_SPREAD}")));
    }
    Ok(())
}

/// Minimum delay of any AND2/OR2 circuit (fan-out allowed) for the
/// instance's path, by forward closure over truth tables.
///
/// Each reachable function keeps its earliest arrival. At time `T` the new
/// functions are AND/OR of two functions available by `T - 1`, at least one
/// of which became available exactly at `T - 1`.
pub fn exact_optimum(inst: &AopInstance) -> Result<f64> {
    oracle_check(inst)?;
    let m = inst.m();
    let mask: u32 = if m == 5 { !0 } else { (1u32 << (1 << m)) - 1 };
    let table = |f: &dyn Fn(u64) -> bool| -> u32 {
        (0..1u64 << m).filter(|&x| f(x)).fold(0u32, |acc, x| acc | 1 << x)
    };
    let root = inst.root_ref();
    let target = table(&|x| phi_eval(root, x));

    let start = inst.arrivals().iter().copied().fold(f64::INFINITY, f64::min) as i64;
    let mut earliest: HashMap<u32, i64> = HashMap::new();
    // functions whose earliest arrival is exactly a given time
    let mut by_time: Vec<Vec<u32>> = Vec::new();
    let slot = |by_time: &mut Vec<Vec<u32>>, t: i64| -> usize {
        let idx = (t - start) as usize;
        if by_time.len() <= idx {
            by_time.resize(idx + 1, Vec::new());
        }
        idx
    };
    for (i, &a) in inst.arrivals().iter().enumerate() {
        let f = table(&|x| x >> i & 1 == 1) & mask;
        let t = a as i64;
        let e = earliest.entry(f).or_insert(t);
        if *e >= t {
            *e = t;
            let idx = slot(&mut by_time, t);
            by_time[idx].push(f);
        }
    }
    if let Some(&t) = earliest.get(&target) {
        return Ok(t as f64);
    }
    let mut available: Vec<u32> = Vec::new();
    let mut t = start;
    loop {
        // everything with earliest arrival ≤ t is in `available` after this
        let fresh: Vec<u32> = by_time
            .get((t - start) as usize)
            .map(|v| v.iter().copied().filter(|f| earliest[f] == t).collect())
            .unwrap_or_default();
        available.extend(&fresh);
        let mut next = Vec::new();
        for &f in &fresh {
            for &h in &available {
                for kind in [GateKind::And, GateKind::Or] {
                    let g = kind.apply(f as u64, h as u64) as u32;
                    if let std::collections::hash_map::Entry::Vacant(e) = earliest.entry(g) {
                        e.insert(t + 1);
                        next.push(g);
                    }
                }
            }
        }
        if earliest.len() > ORACLE_MAX_FUNCTIONS {
            return Err(Error::InstanceTooLarge("reachable function set exceeds cap".into()));
        }
        if earliest.get(&target) == Some(&(t + 1)) {
            return Ok((t + 1) as f64);
        }
        let idx = slot(&mut by_time, t + 1);
        by_time[idx].extend(next);
        t += 1;
    }
}
