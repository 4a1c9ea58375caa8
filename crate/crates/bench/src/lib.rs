// SPDX-License-Identifier: Apache-2.0

//! Fixed inputs shared by the benchmarks.

use aop_core::harness::generate_instance;
use aop_core::AopInstance;

/// Seed used by every benchmark input.
pub const BENCH_SEED: u64 = 0x5EED;

/// The `idx`-th random benchmark instance with `m` inputs.
pub fn instance(m: usize, idx: usize) -> AopInstance {
    generate_instance(BENCH_SEED, m, idx).instance
}

/// Integral arrivals `0, 1, …, n-1` taken modulo 7.
pub fn signal_arrivals(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i % 7) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_stable() {
        assert_eq!(instance(14, 0), instance(14, 0));
        assert_eq!(instance(28, 3).m(), 28);
        assert_eq!(signal_arrivals(9)[8], 1.0);
    }
}
