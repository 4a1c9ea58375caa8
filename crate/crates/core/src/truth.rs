// SPDX-License-Identifier: Apache-2.0

//! Truth tables and the reference semantics of extended And-Or paths.
//!
//! Bit order: assignment index `x` sets input `t_i` to bit `i` of `x`
//! (LSB = `t_0`). Bit `x` of a table lives in word `x / 64`, bit `x % 64`.

use crate::circuit::GateKind;
use crate::error::{Error, Result};
use crate::instance::ExtAopRef;

/// Largest input count that is ever tabulated.
pub const MAX_TABULATED_INPUTS: usize = 24;

const LOW_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Number of 64-bit words in a table over `vars` inputs.
pub fn table_words(vars: usize) -> usize {
    if vars <= 6 {
        1
    } else {
        1 << (vars - 6)
    }
}

/// Mask of the meaningful bits in each word.
pub fn word_mask(vars: usize) -> u64 {
    if vars >= 6 {
        !0
    } else {
        (1u64 << (1u32 << vars)) - 1
    }
}

/// Bit pattern of input `var` over words `start..start + len`.
pub fn input_words(var: usize, start: usize, len: usize) -> Vec<u64> {
    if var < 6 {
        vec![LOW_MASKS[var]; len]
    } else {
        (start..start + len)
            .map(|w| if (w >> (var - 6)) & 1 == 1 { !0 } else { 0 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    vars: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn from_words(vars: usize, mut words: Vec<u64>) -> Self {
        let mask = word_mask(vars);
        for w in &mut words {
            *w &= mask;
        }
        Self { vars, words }
    }

    /// Tabulates an arbitrary predicate on assignments.
    pub fn from_fn(vars: usize, f: impl Fn(u64) -> bool) -> Self {
        let mut words = vec![0u64; table_words(vars)];
        for x in 0..(1u64 << vars) {
            if f(x) {
                words[(x / 64) as usize] |= 1 << (x % 64);
            }
        }
        Self { vars, words }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, assignment: u64) -> bool {
        self.words[(assignment / 64) as usize] >> (assignment % 64) & 1 == 1
    }

    /// Bits in assignment order, `2^vars` entries.
    pub fn bits(&self) -> Vec<bool> {
        (0..1u64 << self.vars).map(|x| self.get(x)).collect()
    }
}

/// Reference table of `φ_{i,j,k}` (or `φ*`) over `m` inputs.
pub fn phi_truth_table(r: ExtAopRef, m: usize) -> Result<TruthTable> {
    check_tabulation(r, m)?;
    let words = phi_block(r, 0, table_words(m));
    Ok(TruthTable::from_words(m, words))
}

pub(crate) fn check_tabulation(r: ExtAopRef, m: usize) -> Result<()> {
    if m > MAX_TABULATED_INPUTS {
        return Err(Error::TooManyInputs {
            m,
            limit: MAX_TABULATED_INPUTS,
        });
    }
    r.check(m)
}

/// `φ` restricted to words `start..start + len`, evaluated straight from the
/// formula: prefix conjunction, then the alternating tail folded from `t_k`.
pub fn phi_block(r: ExtAopRef, start: usize, len: usize) -> Vec<u64> {
    let and = GateKind::And.flipped_if(r.dual);
    let or = GateKind::Or.flipped_if(r.dual);
    let mut acc = input_words(r.k, start, len);
    for idx in (r.j..r.k).rev() {
        let kind = if (idx - r.j) % 2 == 0 { and } else { or };
        let t = input_words(idx, start, len);
        for (a, b) in acc.iter_mut().zip(t) {
            *a = kind.apply(b, *a);
        }
    }
    for idx in (r.i..r.j).step_by(2) {
        let t = input_words(idx, start, len);
        for (a, b) in acc.iter_mut().zip(t) {
            *a = and.apply(*a, b);
        }
    }
    acc
}

/// Scalar evaluation of `φ` on one assignment.
pub fn phi_eval(r: ExtAopRef, assignment: u64) -> bool {
    let bit = |i: usize| assignment >> i & 1 == 1;
    let and = GateKind::And.flipped_if(r.dual);
    let or = GateKind::Or.flipped_if(r.dual);
    let mut acc = bit(r.k);
    for idx in (r.j..r.k).rev() {
        let kind = if (idx - r.j) % 2 == 0 { and } else { or };
        acc = kind.apply_bool(bit(idx), acc);
    }
    (r.i..r.j).step_by(2).fold(acc, |acc, idx| and.apply_bool(acc, bit(idx)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_aop_table() {
        // g(t0,t1,t2) = t0 ∧ (t1 ∨ t2); assignments x = 0..8 with t0 = bit 0
        let t = phi_truth_table(ExtAopRef::primal(0, 0, 2), 3).unwrap();
        assert_eq!(
            t.bits(),
            vec![false, false, false, true, false, true, false, true]
        );
        assert_eq!(t.words(), &[0b1010_1000]);
    }

    #[test]
    fn prefix_only_and_dual_base() {
        let t = phi_truth_table(ExtAopRef::primal(0, 2, 2), 3).unwrap();
        assert_eq!(t, TruthTable::from_fn(3, |x| x & 1 == 1 && x & 4 == 4));
        let d = phi_truth_table(ExtAopRef::new(0, 0, 1, true).unwrap(), 2).unwrap();
        assert_eq!(d, TruthTable::from_fn(2, |x| x != 0));
    }

    #[test]
    fn word_parallel_matches_scalar() {
        for m in 1..=9 {
            for i in 0..m {
                for j in (i..m).step_by(2) {
                    for k in j..m {
                        for dual in [false, true] {
                            let r = ExtAopRef::new(i, j, k, dual).unwrap();
                            let t = phi_truth_table(r, m).unwrap();
                            assert_eq!(t, TruthTable::from_fn(m, |x| phi_eval(r, x)), "{r} m={m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_large_or_invalid() {
        assert!(phi_truth_table(ExtAopRef::primal(0, 0, 24), 25).is_err());
        assert!(phi_truth_table(ExtAopRef::primal(0, 0, 3), 3).is_err());
    }
}
