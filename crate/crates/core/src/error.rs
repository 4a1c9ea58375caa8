// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance has no inputs")]
    EmptyInstance,
    #[error("arrival time of input {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("instance declares m = {declared} but lists {actual} arrival times")]
    LengthMismatch { declared: usize, actual: usize },
    #[error("invalid extended And-Or path reference ({i}, {j}, {k}) for m = {m}")]
    InvalidRef { i: usize, j: usize, k: usize, m: usize },
    #[error("empty signal set")]
    EmptySignals,
    #[error("{m} inputs exceed the tabulation limit of {limit}")]
    TooManyInputs { m: usize, limit: usize },
    #[error("instance not eligible for the exact oracle: {0}")]
    InstanceTooLarge(String),
    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),
    #[error("malformed netlist: {0}")]
    MalformedNetlist(String),
    #[error("unsupported cell type `{0}`")]
    UnsupportedCell(String),
    #[error("critical input `{0}` does not reach the path output")]
    Unreachable(String),
    #[error("invalid delay model: {0}")]
    InvalidDelayModel(String),
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
    #[error("missing table entry for ({i}, {j}, {k})")]
    MissingCandidate { i: usize, j: usize, k: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// `true` for errors caused by bad user input rather than broken invariants.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Invariant(_) | Error::MissingCandidate { .. })
    }
}
