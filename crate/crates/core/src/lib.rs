// SPDX-License-Identifier: Apache-2.0

//! Delay optimization of And-Or paths.
//!
//! An And-Or path `g(t) = t0 ∧ (t1 ∨ (t2 ∧ …))` with prescribed input
//! arrival times is realized by fan-in-2 AND/OR gates so that the arrival
//! time at the output is small. The main entry point is
//! [`optimizer::optimize`]; [`bounds`] provides lower bounds and an exact
//! oracle for tiny instances, [`baselines`] restricted recursions for
//! comparison, [`normalize`] turns a placed gate-level path into an
//! instance, and [`harness`] runs benchmarks.

pub mod baselines;
pub mod bounds;
pub mod circuit;
pub mod error;
pub mod harness;
pub mod huffman;
pub mod instance;
pub mod io;
pub mod normalize;
pub mod optimizer;
pub mod truth;
pub mod undetermined;
pub mod verify;

pub use circuit::{circuit_delay, circuit_size, dualize, Circuit, CircuitBuilder, GateKind, Node, NodeId};
pub use error::{Error, Result};
pub use huffman::{huffman_combine, huffman_delay, Signal};
pub use instance::{validate_instance, weight_log2, AopInstance, ExtAopRef, Variant};
pub use optimizer::{optimize, Mode, OptimizationResult};
pub use truth::{phi_truth_table, TruthTable};
pub use undetermined::{Contribution, UndeterminedCircuit};
pub use verify::{check_structure, equivalent, verify, VerificationReport};
pub use baselines::{optimize_baseline, BaselineFamily};
pub use bounds::{exact_optimum, input_depth_lb, kraft_lb, lower_bound, LowerBoundReport};
pub use harness::{emit_dot, gen_instances, run_bench, BenchConfig, BenchRecord, BenchReport};
pub use normalize::{normalize, DelayModel, Netlist, NormalizationResult};
