// SPDX-License-Identifier: Apache-2.0

//! Delay-optimum fan-in-2 trees for multi-input AND / OR.
//!
//! The greedy rule repeatedly joins the two earliest signals with one gate
//! whose arrival is `max + 1`. For integral arrivals the resulting delay is
//! exactly `⌈log2 Σ 2^{a_i}⌉`. Ties go to the lowest original index, merged
//! signals are indexed after all originals in creation order.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::circuit::{Circuit, CircuitBuilder, GateKind, NodeId};
use crate::error::{Error, Result};

/// A signal available at some arrival time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signal {
    pub node: NodeId,
    pub arrival: f64,
}

#[derive(Debug, Clone, Copy)]
struct Key {
    arrival: f64,
    seq: usize,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrival
            .total_cmp(&other.arrival)
            .then(self.seq.cmp(&other.seq))
    }
}

/// Delay of the Huffman tree over `arrivals` without building it.
pub fn huffman_delay(arrivals: &[f64]) -> Result<f64> {
    match arrivals {
        [] => Err(Error::EmptySignals),
        [a] => Ok(*a),
        [a, b] => Ok(a.max(*b) + 1.0),
        _ => {
            let mut heap: BinaryHeap<Reverse<Key>> = arrivals
                .iter()
                .enumerate()
                .map(|(seq, &arrival)| Reverse(Key { arrival, seq }))
                .collect();
            let mut seq = arrivals.len();
            while heap.len() > 1 {
                let Reverse(a) = heap.pop().unwrap();
                let Reverse(b) = heap.pop().unwrap();
                heap.push(Reverse(Key {
                    arrival: a.arrival.max(b.arrival) + 1.0,
                    seq,
                }));
                seq += 1;
            }
            Ok(heap.pop().unwrap().0.arrival)
        }
    }
}

/// Combines `signals` into one with a Huffman tree of `kind` gates added to
/// `builder`. A single signal is returned unchanged.
pub fn huffman_combine(
    builder: &mut CircuitBuilder,
    signals: &[Signal],
    kind: GateKind,
) -> Result<Signal> {
    if signals.is_empty() {
        return Err(Error::EmptySignals);
    }
    let mut heap: BinaryHeap<Reverse<Key>> = signals
        .iter()
        .enumerate()
        .map(|(seq, s)| Reverse(Key { arrival: s.arrival, seq }))
        .collect();
    let mut nodes: Vec<NodeId> = signals.iter().map(|s| s.node).collect();
    while heap.len() > 1 {
        let Reverse(a) = heap.pop().unwrap();
        let Reverse(b) = heap.pop().unwrap();
        let node = builder.gate(kind, nodes[a.seq], nodes[b.seq]);
        heap.push(Reverse(Key {
            arrival: a.arrival.max(b.arrival) + 1.0,
            seq: nodes.len(),
        }));
        nodes.push(node);
    }
    let Reverse(last) = heap.pop().unwrap();
    Ok(Signal {
        node: nodes[last.seq],
        arrival: last.arrival,
    })
}

/// Huffman tree of `kind` over inputs `t_0..t_{n-1}` with the given arrivals.
pub fn huffman_circuit(arrivals: &[f64], kind: GateKind) -> Result<(Circuit, f64)> {
    let mut builder = CircuitBuilder::new();
    let signals: Vec<Signal> = arrivals
        .iter()
        .enumerate()
        .map(|(i, &arrival)| Signal {
            node: builder.input(i, arrival),
            arrival,
        })
        .collect();
    let out = huffman_combine(&mut builder, &signals, kind)?;
    Ok((builder.finish(out.node), out.arrival))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::exact_ceil_log2_weight;

    /// Minimum delay over every binary combining tree, by exhaustive search
    /// over all ways to pick the next pair.
    fn exhaustive_min_delay(arrivals: &[f64]) -> f64 {
        if arrivals.len() == 1 {
            return arrivals[0];
        }
        let mut best = f64::INFINITY;
        for a in 0..arrivals.len() {
            for b in a + 1..arrivals.len() {
                let mut rest: Vec<f64> = arrivals
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != a && i != b)
                    .map(|(_, &x)| x)
                    .collect();
                rest.push(arrivals[a].max(arrivals[b]) + 1.0);
                best = best.min(exhaustive_min_delay(&rest));
            }
        }
        best
    }

    #[test]
    fn examples() {
        let (c, d) = huffman_circuit(&[0.0; 4], GateKind::And).unwrap();
        assert_eq!(d, 2.0);
        assert_eq!(c.size(), 3);
        let (c, d) = huffman_circuit(&[0.0, 1.0, 2.0], GateKind::And).unwrap();
        assert_eq!(d, 3.0);
        assert_eq!(c.delay().unwrap(), 3.0);
        let (c, d) = huffman_circuit(&[3.0], GateKind::Or).unwrap();
        assert_eq!((d, c.size()), (3.0, 0));
        assert!(huffman_delay(&[]).is_err());
        assert!(huffman_circuit(&[], GateKind::And).is_err());
    }

    #[test]
    fn deterministic_tie_breaking() {
        // equal arrivals: t0 and t1 are joined first
        let (c, _) = huffman_circuit(&[0.0; 3], GateKind::And).unwrap();
        let first_gate = c.nodes().iter().find(|n| n.is_gate()).unwrap();
        let inputs: Vec<_> = first_gate
            .preds()
            .iter()
            .map(|p| match c.node(*p) {
                crate::circuit::Node::Input { input, .. } => *input,
                _ => usize::MAX,
            })
            .collect();
        assert_eq!(inputs, vec![0, 1]);
        assert_eq!(huffman_circuit(&[0.0; 3], GateKind::And).unwrap().0, c);
    }

    #[test]
    fn matches_exhaustive_on_real_arrivals() {
        let sets: [&[f64]; 5] = [
            &[0.3, 0.1, 2.5, 1.7],
            &[0.0, 0.5, 0.5, 0.5, 4.0],
            &[1.25, 1.0, 0.75, 0.5, 0.25, 0.0],
            &[2.0, 2.0, 2.0],
            &[-1.5, 3.0],
        ];
        for s in sets {
            assert_eq!(huffman_delay(s).unwrap(), exhaustive_min_delay(s), "{s:?}");
        }
    }

    proptest::proptest! {
        #[test]
        fn integral_delay_is_kraft_ceiling(a in proptest::collection::vec(0i32..=20, 1..=64)) {
            let xs: Vec<f64> = a.iter().map(|&x| x as f64).collect();
            let (c, d) = huffman_circuit(&xs, GateKind::Or).unwrap();
            proptest::prop_assert_eq!(d as i64, exact_ceil_log2_weight(&xs).unwrap());
            proptest::prop_assert_eq!(c.size(), xs.len() - 1);
            proptest::prop_assert_eq!(c.delay().unwrap(), d);
            proptest::prop_assert_eq!(huffman_delay(&xs).unwrap(), d);
        }

        #[test]
        fn greedy_is_optimal_for_small_sets(a in proptest::collection::vec(0u8..=12, 1..=6)) {
            let xs: Vec<f64> = a.iter().map(|&x| x as f64 * 0.5).collect();
            proptest::prop_assert_eq!(huffman_delay(&xs).unwrap(), exhaustive_min_delay(&xs));
        }
    }
}
