// SPDX-License-Identifier: Apache-2.0

//! Placed single-output netlists and their file format.
//!
//! ```toml
//! output = "g2"
//!
//! [[inputs]]
//! id = "x"
//! arrival = 120.0          # ps
//! location = [0.0, 0.0]    # µm
//!
//! [[cells]]
//! id = "g1"
//! type = "NOR2"            # AND2 OR2 NAND2 NOR2 INV BUF AOI21 OAI21
//! pins = ["x", "b"]        # drivers, in pin order (A, B, C)
//! location = [10.0, 5.0]
//! ```
//!
//! `AOI21(a, b, c) = ¬((a ∧ b) ∨ c)` and `OAI21(a, b, c) = ¬((a ∨ b) ∧ c)`.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::truth::{input_words, table_words, word_mask};

/// Largest number of primary inputs [`Netlist::eval_words`] tabulates.
pub const MAX_NETLIST_INPUTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellType {
    And2,
    Or2,
    Nand2,
    Nor2,
    Inv,
    Buf,
    Aoi21,
    Oai21,
}

impl CellType {
    pub const ALL: [CellType; 8] = [
        Self::And2,
        Self::Or2,
        Self::Nand2,
        Self::Nor2,
        Self::Inv,
        Self::Buf,
        Self::Aoi21,
        Self::Oai21,
    ];

    pub fn pin_count(self) -> usize {
        match self {
            Self::Inv | Self::Buf => 1,
            Self::Aoi21 | Self::Oai21 => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::And2 => "AND2",
            Self::Or2 => "OR2",
            Self::Nand2 => "NAND2",
            Self::Nor2 => "NOR2",
            Self::Inv => "INV",
            Self::Buf => "BUF",
            Self::Aoi21 => "AOI21",
            Self::Oai21 => "OAI21",
        }
    }

    /// Word-parallel cell function.
    pub fn apply(self, p: &[u64]) -> u64 {
        match self {
            Self::And2 => p[0] & p[1],
            Self::Or2 => p[0] | p[1],
            Self::Nand2 => !(p[0] & p[1]),
            Self::Nor2 => !(p[0] | p[1]),
            Self::Inv => !p[0],
            Self::Buf => p[0],
            Self::Aoi21 => !((p[0] & p[1]) | p[2]),
            Self::Oai21 => !((p[0] | p[1]) & p[2]),
        }
    }
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CellType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnsupportedCell(s.to_string()))
    }
}

impl Serialize for CellType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

pub type Location = (f64, f64);

pub fn l1(a: Location, b: Location) -> f64 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetInput {
    pub id: String,
    /// Arrival time in ps.
    pub arrival: f64,
    pub location: Location,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetCell {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: CellType,
    pub pins: Vec<String>,
    pub location: Location,
}

#[derive(Debug, Deserialize)]
struct RawCell {
    id: String,
    #[serde(rename = "type")]
    kind: String,
    pins: Vec<String>,
    location: Location,
}

#[derive(Debug, Deserialize)]
struct RawNetlist {
    output: String,
    #[serde(default)]
    inputs: Vec<NetInput>,
    #[serde(default)]
    cells: Vec<RawCell>,
}

/// A validated netlist. Cells are kept in topological order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Netlist {
    output: String,
    inputs: Vec<NetInput>,
    cells: Vec<NetCell>,
    #[serde(skip)]
    index: HashMap<String, Driver>,
}

/// What drives a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    Input(usize),
    Cell(usize),
}

impl Netlist {
    /// Validates and topologically sorts the cells.
    pub fn new(inputs: Vec<NetInput>, cells: Vec<NetCell>, output: impl Into<String>) -> Result<Self> {
        let output = output.into();
        let bad = |msg: String| Error::MalformedNetlist(msg);
        let mut index = HashMap::new();
        for (q, input) in inputs.iter().enumerate() {
            if !input.arrival.is_finite() {
                return Err(Error::NonFinite { index: q, value: input.arrival });
            }
            if index.insert(input.id.clone(), Driver::Input(q)).is_some() {
                return Err(bad(format!("duplicate signal `{}`", input.id)));
            }
        }
        for (q, cell) in cells.iter().enumerate() {
            if cell.pins.len() != cell.kind.pin_count() {
                return Err(bad(format!(
                    "cell `{}` of type {} has {} pins",
                    cell.id,
                    cell.kind,
                    cell.pins.len()
                )));
            }
            if index.insert(cell.id.clone(), Driver::Cell(q)).is_some() {
                return Err(bad(format!("duplicate signal `{}`", cell.id)));
            }
        }
        for cell in &cells {
            if let Some(p) = cell.pins.iter().find(|p| !index.contains_key(*p)) {
                return Err(bad(format!("cell `{}` reads undriven signal `{p}`", cell.id)));
            }
        }
        if !index.contains_key(&output) {
            return Err(bad(format!("output `{output}` is not a signal")));
        }

        // Kahn over cells
        let mut indeg = vec![0usize; cells.len()];
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
        for (q, cell) in cells.iter().enumerate() {
            for p in &cell.pins {
                if let Driver::Cell(d) = index[p] {
                    indeg[q] += 1;
                    readers[d].push(q);
                }
            }
        }
        let mut ready: Vec<usize> = (0..cells.len()).rev().filter(|&q| indeg[q] == 0).collect();
        let mut order = Vec::with_capacity(cells.len());
        while let Some(q) = ready.pop() {
            order.push(q);
            for &r in readers[q].iter().rev() {
                indeg[r] -= 1;
                if indeg[r] == 0 {
                    ready.push(r);
                }
            }
        }
        if order.len() != cells.len() {
            return Err(bad("netlist contains a cycle".into()));
        }
        let mut slots: Vec<Option<NetCell>> = cells.into_iter().map(Some).collect();
        let cells: Vec<NetCell> = order.iter().map(|&q| slots[q].take().unwrap()).collect();
        for (q, cell) in cells.iter().enumerate() {
            index.insert(cell.id.clone(), Driver::Cell(q));
        }
        Ok(Self { output, inputs, cells, index })
    }

    pub fn output(&self) -> &str {
        &self.output
    }

    pub fn inputs(&self) -> &[NetInput] {
        &self.inputs
    }

    pub fn cells(&self) -> &[NetCell] {
        &self.cells
    }

    pub fn driver(&self, signal: &str) -> Option<Driver> {
        self.index.get(signal).copied()
    }

    pub fn cell(&self, signal: &str) -> Option<&NetCell> {
        match self.driver(signal)? {
            Driver::Cell(q) => Some(&self.cells[q]),
            Driver::Input(_) => None,
        }
    }

    pub fn location(&self, signal: &str) -> Option<Location> {
        Some(match self.driver(signal)? {
            Driver::Input(q) => self.inputs[q].location,
            Driver::Cell(q) => self.cells[q].location,
        })
    }

    /// Truth tables of every signal over the primary inputs; input `q` is
    /// bit `q` of the assignment index.
    pub fn eval_words(&self) -> Result<HashMap<String, Vec<u64>>> {
        let n = self.inputs.len();
        if n > MAX_NETLIST_INPUTS {
            return Err(Error::TooManyInputs { m: n, limit: MAX_NETLIST_INPUTS });
        }
        let words = table_words(n);
        let mask = word_mask(n);
        let mut values: HashMap<String, Vec<u64>> = HashMap::with_capacity(n + self.cells.len());
        for (q, input) in self.inputs.iter().enumerate() {
            let mut w = input_words(q, 0, words);
            w.iter_mut().for_each(|x| *x &= mask);
            values.insert(input.id.clone(), w);
        }
        let mut pins = Vec::with_capacity(3);
        for cell in &self.cells {
            let out: Vec<u64> = (0..words)
                .map(|w| {
                    pins.clear();
                    pins.extend(cell.pins.iter().map(|p| values[p][w]));
                    cell.kind.apply(&pins) & mask
                })
                .collect();
            values.insert(cell.id.clone(), out);
        }
        Ok(values)
    }
}

pub fn parse_netlist(text: &str) -> Result<Netlist> {
    let raw: RawNetlist = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let cells = raw
        .cells
        .into_iter()
        .map(|c| {
            Ok(NetCell {
                kind: c.kind.parse()?,
                id: c.id,
                pins: c.pins,
                location: c.location,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Netlist::new(raw.inputs, cells, raw.output)
}

pub fn netlist_to_string(n: &Netlist) -> String {
    toml::to_string(n).expect("netlists always serialize")
}

pub fn read_netlist(path: impl AsRef<Path>) -> Result<Netlist> {
    parse_netlist(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(id: &str, kind: CellType, pins: &[&str]) -> NetCell {
        NetCell {
            id: id.into(),
            kind,
            pins: pins.iter().map(|p| p.to_string()).collect(),
            location: (0.0, 0.0),
        }
    }

    fn input(id: &str) -> NetInput {
        NetInput { id: id.into(), arrival: 0.0, location: (0.0, 0.0) }
    }

    #[test]
    fn cell_functions() {
        let t = |k: CellType, bits: &[u64]| k.apply(bits) & 1;
        assert_eq!(t(CellType::Aoi21, &[1, 1, 0]), 0);
        assert_eq!(t(CellType::Aoi21, &[1, 0, 0]), 1);
        assert_eq!(t(CellType::Oai21, &[0, 1, 1]), 0);
        assert_eq!(t(CellType::Oai21, &[0, 0, 1]), 1);
        assert_eq!(t(CellType::Nor2, &[0, 0]), 1);
        assert_eq!(t(CellType::Nand2, &[1, 1]), 0);
    }

    #[test]
    fn cells_are_sorted_topologically() {
        let n = Netlist::new(
            vec![input("a"), input("b")],
            vec![cell("g2", CellType::Inv, &["g1"]), cell("g1", CellType::And2, &["a", "b"])],
            "g2",
        )
        .unwrap();
        assert_eq!(n.cells()[0].id, "g1");
        let v = n.eval_words().unwrap();
        assert_eq!(v["g2"], vec![0b0111]);
    }

    #[test]
    fn validation_errors() {
        let e = Netlist::new(vec![input("a")], vec![cell("g", CellType::And2, &["a"])], "g");
        assert!(matches!(e, Err(Error::MalformedNetlist(_))));
        let e = Netlist::new(vec![input("a")], vec![cell("g", CellType::Inv, &["z"])], "g");
        assert!(matches!(e, Err(Error::MalformedNetlist(_))));
        let e = Netlist::new(
            vec![input("a")],
            vec![cell("g", CellType::And2, &["a", "h"]), cell("h", CellType::Inv, &["g"])],
            "g",
        );
        assert!(matches!(e, Err(Error::MalformedNetlist(m)) if m.contains("cycle")));
        assert!(matches!(
            parse_netlist("output = \"g\"\n[[cells]]\nid = \"g\"\ntype = \"XOR2\"\npins = []\nlocation = [0, 0]\n"),
            Err(Error::UnsupportedCell(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        let n = Netlist::new(
            vec![input("a"), input("b")],
            vec![cell("g1", CellType::Oai21, &["a", "b", "a"])],
            "g1",
        )
        .unwrap();
        assert_eq!(parse_netlist(&netlist_to_string(&n)).unwrap(), n);
    }
}
