// SPDX-License-Identifier: Apache-2.0

//! Structural and functional checks for produced circuits.

use serde::Serialize;

use crate::circuit::{Circuit, Node};
use crate::error::{Error, Result};
use crate::instance::ExtAopRef;
use crate::truth::{check_tabulation, input_words, phi_block, table_words, word_mask};

/// Words evaluated per block by [`equivalent`].
pub const DEFAULT_BLOCK_WORDS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub structural_ok: bool,
    pub equivalent: bool,
    pub delay: f64,
    pub size: usize,
    pub violations: Vec<String>,
}

/// Acyclicity, fan-in 2, a single sink that is the output, and every node
/// reaching the output.
pub fn check_structure(c: &Circuit) -> VerificationReport {
    let mut violations = Vec::new();
    for (idx, node) in c.nodes().iter().enumerate() {
        if let Node::Gate { preds, .. } = node {
            if preds.len() != 2 {
                violations.push(format!("fan-in: gate n{idx} has {} inputs", preds.len()));
            }
        }
    }
    let acyclic = c.topological_order().is_ok();
    if !acyclic {
        violations.push("cycle: circuit is not acyclic".to_string());
    }
    let succs = c.successors();
    let sinks: Vec<usize> = (0..c.len()).filter(|&i| succs[i].is_empty()).collect();
    if sinks != [c.output().0] {
        violations.push(format!(
            "single output: sinks {:?}, declared output n{}",
            sinks,
            c.output().0
        ));
    }
    let mut reaches = vec![false; c.len()];
    let mut stack = vec![c.output().0];
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut reaches[v], true) {
            continue;
        }
        stack.extend(c.nodes()[v].preds().iter().map(|p| p.0));
    }
    if let Some(dead) = reaches.iter().position(|r| !r) {
        violations.push(format!("reachability: node n{dead} does not reach the output"));
    }
    let structural_ok = violations.is_empty();
    VerificationReport {
        structural_ok,
        equivalent: false,
        delay: if acyclic { c.delay().unwrap_or(f64::NAN) } else { f64::NAN },
        size: c.size(),
        violations,
    }
}

/// Exhaustive comparison of `c` against `φ` over all `2^m` assignments.
pub fn equivalent(c: &Circuit, r: ExtAopRef, m: usize) -> Result<bool> {
    equivalent_blocked(c, r, m, DEFAULT_BLOCK_WORDS)
}

/// [`equivalent`] with an explicit evaluation block size in 64-bit words.
pub fn equivalent_blocked(c: &Circuit, r: ExtAopRef, m: usize, block_words: usize) -> Result<bool> {
    check_tabulation(r, m)?;
    if c.input_span() > m {
        return Ok(false);
    }
    let order = c
        .topological_order()
        .map_err(|_| Error::MalformedCircuit("cannot evaluate a cyclic circuit".into()))?;
    if c.nodes().iter().any(|n| n.preds().len() == 1 && n.is_gate() || n.is_gate() && n.preds().is_empty()) {
        return Err(Error::MalformedCircuit("gate without two inputs".into()));
    }
    let total = table_words(m);
    let block = block_words.max(1);
    let mask = word_mask(m);
    let mut start = 0;
    while start < total {
        let len = block.min(total - start);
        let patterns: Vec<Vec<u64>> = (0..m).map(|v| input_words(v, start, len)).collect();
        let inputs: Vec<&[u64]> = patterns.iter().map(Vec::as_slice).collect();
        let got = c.eval_words(&inputs, &order);
        let want = phi_block(r, start, len);
        if got.iter().zip(&want).any(|(g, w)| (g ^ w) & mask != 0) {
            return Ok(false);
        }
        start += len;
    }
    Ok(true)
}

/// Structure plus equivalence in one report.
pub fn verify(c: &Circuit, r: ExtAopRef, m: usize) -> Result<VerificationReport> {
    let mut report = check_structure(c);
    if report.structural_ok {
        report.equivalent = equivalent(c, r, m)?;
        if !report.equivalent {
            report.violations.push(format!("function differs from {r}"));
        }
    }
    Ok(report)
}
