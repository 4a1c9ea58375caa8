// SPDX-License-Identifier: Apache-2.0

//! Seeded toy critical paths for exercising the normalization pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::netlist::{CellType, Location, NetCell, NetInput, Netlist};

/// A random placed path starting at primary input `"x"` with at most
/// `max_inputs` primary inputs (at least 2). Every cell type appears with
/// equal probability along the spine; side pins are fresh inputs or small
/// NAND2/NOR2/INV subtrees.
pub fn random_path_netlist(seed: u64, max_inputs: usize) -> Netlist {
    let max_inputs = max_inputs.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs: Vec<NetInput> = Vec::new();
    let mut cells: Vec<NetCell> = Vec::new();
    let loc = |rng: &mut ChaCha8Rng| -> Location {
        (rng.random_range(0..=100) as f64, rng.random_range(0..=100) as f64)
    };
    let fresh_input = |rng: &mut ChaCha8Rng, inputs: &mut Vec<NetInput>| -> String {
        let id = if inputs.is_empty() { "x".to_string() } else { format!("i{}", inputs.len()) };
        inputs.push(NetInput {
            id: id.clone(),
            arrival: rng.random_range(0..=400) as f64,
            location: loc(rng),
        });
        id
    };
    let mut spine = fresh_input(&mut rng, &mut inputs);
    let stages = rng.random_range(1..=2 * max_inputs);
    for _ in 0..stages {
        let kind = CellType::ALL[rng.random_range(0..CellType::ALL.len())];
        let pins = kind.pin_count();
        if inputs.len() + pins - 1 > max_inputs {
            break;
        }
        let spine_pin = rng.random_range(0..pins);
        let mut wires = Vec::with_capacity(pins);
        let mut sides_left = pins - 1;
        for q in 0..pins {
            if q == spine_pin {
                wires.push(spine.clone());
                continue;
            }
            // inputs to spare beyond one per remaining side pin
            let spare = max_inputs - inputs.len() - sides_left;
            sides_left -= 1;
            let side = if spare >= 1 && rng.random_bool(0.25) {
                let a = fresh_input(&mut rng, &mut inputs);
                let (kind, pins) = match rng.random_range(0..3) {
                    0 => (CellType::Nand2, vec![a.clone(), fresh_input(&mut rng, &mut inputs)]),
                    1 => (CellType::Nor2, vec![a.clone(), fresh_input(&mut rng, &mut inputs)]),
                    _ => (CellType::Inv, vec![a.clone()]),
                };
                let id = format!("s{}", cells.len());
                cells.push(NetCell { id: id.clone(), kind, pins, location: loc(&mut rng) });
                id
            } else {
                fresh_input(&mut rng, &mut inputs)
            };
            wires.push(side);
        }
        let id = format!("g{}", cells.len());
        cells.push(NetCell { id: id.clone(), kind, pins: wires, location: loc(&mut rng) });
        spine = id;
    }
    if cells.is_empty() {
        let b = fresh_input(&mut rng, &mut inputs);
        cells.push(NetCell {
            id: "g0".into(),
            kind: CellType::And2,
            pins: vec![spine, b],
            location: loc(&mut rng),
        });
        spine = "g0".into();
    }
    Netlist::new(inputs, cells, spine).expect("generated netlists are valid")
}
