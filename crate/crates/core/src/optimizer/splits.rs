// SPDX-License-Identifier: Apache-2.0

//! Decompositions of an extended And-Or path into two smaller ones.
//!
//! For `k > j + 1`:
//!
//! * OR split, `1 ≤ λ ≤ (k-j)/2`:
//!   `φ_{i,j,k} = φ_{i,j,j+2λ-1} ∨ φ_{i,j+2λ,k}`
//! * AND split, `0 ≤ λ ≤ (k-j-1)/2`:
//!   `φ_{i,j,k} = φ_{i,j,j+2λ} ∧ φ*_{j+1,j+2λ+1,k}`

use crate::circuit::GateKind;
use crate::instance::ExtAopRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitDescriptor {
    /// Gate joining the two operands.
    pub kind: GateKind,
    pub lambda: usize,
    pub operands: [ExtAopRef; 2],
}

/// All admissible splits of the primal `φ_{i,j,k}`, OR splits first, each
/// family in increasing `λ`. Empty when `k ≤ j + 1`.
pub fn enumerate_splits(i: usize, j: usize, k: usize) -> Vec<SplitDescriptor> {
    debug_assert!(i <= j && j <= k && (j - i) % 2 == 0);
    let mut out = Vec::new();
    if k <= j + 1 {
        return out;
    }
    for lambda in 1..=(k - j) / 2 {
        out.push(SplitDescriptor {
            kind: GateKind::Or,
            lambda,
            operands: [
                ExtAopRef::primal(i, j, j + 2 * lambda - 1),
                ExtAopRef::primal(i, j + 2 * lambda, k),
            ],
        });
    }
    for lambda in 0..=(k - j - 1) / 2 {
        out.push(SplitDescriptor {
            kind: GateKind::And,
            lambda,
            operands: [
                ExtAopRef::primal(i, j, j + 2 * lambda),
                ExtAopRef::primal(j + 1, j + 2 * lambda + 1, k).with_dual(true),
            ],
        });
    }
    out
}
