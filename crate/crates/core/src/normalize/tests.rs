// SPDX-License-Identifier: Apache-2.0

use super::*;

fn input(id: &str, arrival: f64, location: Location) -> NetInput {
    NetInput { id: id.into(), arrival, location }
}

fn cell(id: &str, kind: CellType, pins: &[&str]) -> NetCell {
    NetCell {
        id: id.into(),
        kind,
        pins: pins.iter().map(|p| p.to_string()).collect(),
        location: (0.0, 0.0),
    }
}

fn inputs(ids: &[&str]) -> Vec<NetInput> {
    ids.iter().map(|id| input(id, 0.0, (0.0, 0.0))).collect()
}

fn unit() -> DelayModel {
    DelayModel::new(1.0, 0.0).unwrap()
}

#[test]
fn templates_preserve_every_cell_function() {
    for kind in CellType::ALL {
        let names = ["a", "b", "c"];
        let pins = &names[..kind.pin_count()];
        let n = Netlist::new(inputs(pins), vec![cell("g", kind, pins)], "g").unwrap();
        let d = decompose_to_and_inv(&n).unwrap();
        assert!(d.cells().iter().all(|c| matches!(c.kind, CellType::And2 | CellType::Inv)));
        assert_eq!(d.eval_words().unwrap()[d.output()], n.eval_words().unwrap()["g"], "{kind}");
    }
}

#[test]
fn oai21_template_shape() {
    let n = Netlist::new(inputs(&["a", "b", "c"]), vec![cell("g", CellType::Oai21, &["a", "b", "c"])], "g").unwrap();
    let d = decompose_to_and_inv(&n).unwrap();
    let count = |k| d.cells().iter().filter(|c| c.kind == k).count();
    assert_eq!((count(CellType::And2), count(CellType::Inv)), (2, 4));
    // independent check over all 8 assignments
    let v = &d.eval_words().unwrap()["g"];
    for x in 0..8u64 {
        let (a, b, c) = (x & 1 == 1, x >> 1 & 1 == 1, x >> 2 & 1 == 1);
        assert_eq!(v[0] >> x & 1 == 1, !((a || b) && c));
    }
}

#[test]
fn nor_and_buf_templates() {
    let n = Netlist::new(inputs(&["a", "b"]), vec![cell("g", CellType::Nor2, &["a", "b"])], "g").unwrap();
    let d = decompose_to_and_inv(&n).unwrap();
    assert_eq!(d.cells().last().unwrap().kind, CellType::And2);
    assert_eq!(d.cells().len(), 3);
    let n = Netlist::new(
        inputs(&["a", "b"]),
        vec![cell("u", CellType::Buf, &["a"]), cell("g", CellType::And2, &["u", "b"]), cell("o", CellType::Buf, &["g"])],
        "o",
    )
    .unwrap();
    let d = decompose_to_and_inv(&n).unwrap();
    assert_eq!(d.cells().len(), 1);
    assert_eq!(d.output(), "g");
    assert_eq!(d.cells()[0].pins, vec!["a", "b"]);
}

#[test]
fn path_extraction() {
    let n = Netlist::new(inputs(&["x", "b"]), vec![cell("g", CellType::And2, &["x", "b"])], "g").unwrap();
    let p = extract_path(&n, "x").unwrap();
    assert_eq!(p.stages.len(), 1);
    assert!(!p.multiple_paths);

    let n = Netlist::new(
        inputs(&["x", "b", "c"]),
        vec![
            cell("g1", CellType::And2, &["b", "x"]),
            cell("g2", CellType::Inv, &["g1"]),
            cell("g3", CellType::And2, &["c", "g2"]),
        ],
        "g3",
    )
    .unwrap();
    let p = extract_path(&n, "x").unwrap();
    let cells: Vec<&str> = p.stages.iter().map(|s| s.cell.as_str()).collect();
    assert_eq!(cells, ["g1", "g2", "g3"]);
    assert_eq!(p.stages[0].kind, StageKind::And { side: "b".into() });
    assert!(matches!(extract_path(&n, "nope"), Err(Error::Unreachable(_))));

    let n = Netlist::new(
        inputs(&["x", "b", "y"]),
        vec![cell("g1", CellType::And2, &["x", "b"]), cell("g2", CellType::And2, &["b", "y"])],
        "g2",
    )
    .unwrap();
    assert!(matches!(extract_path(&n, "x"), Err(Error::Unreachable(_))));
}

#[test]
fn diamond_takes_first_path_and_flags_it() {
    let n = Netlist::new(
        inputs(&["x", "b", "c"]),
        vec![
            cell("g1", CellType::And2, &["x", "b"]),
            cell("g2", CellType::And2, &["x", "c"]),
            cell("g3", CellType::And2, &["g1", "g2"]),
        ],
        "g3",
    )
    .unwrap();
    let p = extract_path(&n, "x").unwrap();
    assert!(p.multiple_paths);
    assert_eq!(p.stages[0].cell, "g1");
    let r = normalize(&n, "x", unit()).unwrap();
    assert!(r.multiple_paths);
    assert!(round_trip_equivalent(&n, &r).unwrap());
}

#[test]
fn demorgan_single_inversion() {
    // AND2 → INV → AND2 on the spine
    let n = Netlist::new(
        inputs(&["x", "b", "c"]),
        vec![
            cell("g1", CellType::And2, &["x", "b"]),
            cell("g2", CellType::Inv, &["g1"]),
            cell("g3", CellType::And2, &["g2", "c"]),
        ],
        "g3",
    )
    .unwrap();
    let p = demorgan_normalize(&n, &extract_path(&n, "x").unwrap());
    let kinds: Vec<GateKind> = p.gates.iter().map(|g| g.kind).collect();
    assert_eq!(kinds, [GateKind::Or, GateKind::And]);
    assert!(p.gates[0].side.inverted && !p.gates[1].side.inverted);
    assert!(p.input.inverted);
    assert!(!p.output_inverted);
    // out = c ∧ ¬(x ∧ b) = c ∧ (¬x ∨ ¬b)
    let r = normalize(&n, "x", unit()).unwrap();
    assert!(round_trip_equivalent(&n, &r).unwrap());
}

#[test]
fn demorgan_identity_and_output_polarity() {
    let n = Netlist::new(
        inputs(&["x", "b", "c"]),
        vec![cell("g1", CellType::And2, &["x", "b"]), cell("g2", CellType::And2, &["c", "g1"])],
        "g2",
    )
    .unwrap();
    let p = demorgan_normalize(&n, &extract_path(&n, "x").unwrap());
    assert!(p.gates.iter().all(|g| g.kind == GateKind::And && !g.side.inverted));
    assert!(!p.input.inverted && !p.output_inverted);

    let n = Netlist::new(
        inputs(&["x", "b"]),
        vec![cell("g1", CellType::And2, &["x", "b"]), cell("g2", CellType::Inv, &["g1"])],
        "g2",
    )
    .unwrap();
    let p = demorgan_normalize(&n, &extract_path(&n, "x").unwrap());
    assert!(p.output_inverted);
    assert_eq!(p.gates[0].kind, GateKind::And);
}

#[test]
fn modified_arrival_examples() {
    let m = DelayModel::new(10.0, 0.5).unwrap();
    assert_eq!(modified_arrivals(&[(100.0, (0.0, 0.0))], (30.0, 40.0), m), vec![13.5]);
    assert_eq!(modified_arrivals(&[(100.0, (3.0, 4.0))], (3.0, 4.0), m), vec![10.0]);
    let a = modified_arrivals(&[(50.0, (0.0, 10.0)), (50.0, (10.0, 0.0))], (0.0, 0.0), m);
    assert_eq!(a[0], a[1]);
    let scaled = DelayModel::new(20.0, 1.0).unwrap();
    assert_eq!(modified_arrivals(&[(200.0, (0.0, 0.0))], (30.0, 40.0), scaled), vec![13.5]);
    assert!(DelayModel::new(0.0, 1.0).is_err());
    assert!(DelayModel::new(1.0, -1.0).is_err());
}

fn gate(kind: GateKind, side: &str) -> SpineGate {
    SpineGate { cell: side.into(), kind, side: Literal { signal: side.into(), inverted: false } }
}

#[test]
fn chain_compression() {
    let s = chain_compress(&[gate(GateKind::And, "a"), gate(GateKind::And, "b")], &[0.0, 0.0]).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].arrival, 1.0);

    let g = [gate(GateKind::And, "a"), gate(GateKind::Or, "b"), gate(GateKind::And, "c")];
    let s = chain_compress(&g, &[3.0, 1.0, 2.0]).unwrap();
    assert_eq!(s.iter().map(|s| s.arrival).collect::<Vec<_>>(), vec![3.0, 1.0, 2.0]);

    let g = [gate(GateKind::And, "a"), gate(GateKind::And, "b"), gate(GateKind::Or, "c")];
    let s = chain_compress(&g, &[0.0, 4.0, 1.0]).unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!((s[0].kind, s[0].arrival), (GateKind::And, 5.0));
    assert_eq!((s[1].kind, s[1].arrival), (GateKind::Or, 1.0));
}

#[test]
fn already_aop_with_no_wire_delay() {
    // t0 ∧ (t1 ∨ (t2 ∧ x)) as AND2/OR2 cells
    let mut ins = inputs(&["x", "t2", "t1", "t0"]);
    for (q, a) in [40.0, 10.0, 20.0, 30.0].into_iter().enumerate() {
        ins[q].arrival = a;
    }
    let n = Netlist::new(
        ins,
        vec![
            cell("g1", CellType::And2, &["t2", "x"]),
            cell("g2", CellType::Or2, &["t1", "g1"]),
            cell("g3", CellType::And2, &["t0", "g2"]),
        ],
        "g3",
    )
    .unwrap();
    let r = normalize(&n, "x", DelayModel::new(10.0, 0.0).unwrap()).unwrap();
    assert_eq!(r.instance.arrivals(), &[3.0, 2.0, 1.0, 4.0]);
    assert_eq!(r.variant, Variant::Primal);
    assert!(r.inputs.iter().all(|s| s.literals.len() == 1 && !s.literals[0].inverted));
    assert!(round_trip_equivalent(&n, &r).unwrap());
}

#[test]
fn single_and_gives_two_inputs() {
    let n = Netlist::new(inputs(&["x", "b"]), vec![cell("g", CellType::And2, &["x", "b"])], "g").unwrap();
    let r = normalize(&n, "x", unit()).unwrap();
    assert_eq!(r.instance.m(), 2);
}

#[test]
fn golden_netlists() {
    for (file, x) in [
        (include_str!("../../testdata/netlist_nor_oai.toml"), "x"),
        (include_str!("../../testdata/netlist_aop.toml"), "x"),
    ] {
        let n = parse_netlist(file).unwrap();
        let r = normalize(&n, x, DelayModel::new(10.0, 0.5).unwrap()).unwrap();
        assert!(round_trip_equivalent(&n, &r).unwrap());
        assert!(r.instance.m() >= 3);
    }
}

/// Independent evaluator: cell semantics on booleans, literals looked up
/// in the AND2/INV form.
fn brute_force_round_trip(n: &Netlist, r: &NormalizationResult) -> bool {
    let d = decompose_to_and_inv(n).unwrap();
    let p = n.inputs().len();
    for x in 0..1u64 << p {
        let mut val: HashMap<&str, bool> = HashMap::new();
        for (q, i) in n.inputs().iter().enumerate() {
            val.insert(&i.id, x >> q & 1 == 1);
        }
        let orig = {
            let mut v = val.clone();
            for c in n.cells() {
                let b: Vec<bool> = c.pins.iter().map(|p| v[p.as_str()]).collect();
                let out = match c.kind {
                    CellType::And2 => b[0] && b[1],
                    CellType::Or2 => b[0] || b[1],
                    CellType::Nand2 => !(b[0] && b[1]),
                    CellType::Nor2 => !(b[0] || b[1]),
                    CellType::Inv => !b[0],
                    CellType::Buf => b[0],
                    CellType::Aoi21 => !((b[0] && b[1]) || b[2]),
                    CellType::Oai21 => !((b[0] || b[1]) && b[2]),
                };
                v.insert(&c.id, out);
            }
            v[n.output()]
        };
        let mut dv = val.clone();
        for c in d.cells() {
            let b: Vec<bool> = c.pins.iter().map(|p| dv[p.as_str()]).collect();
            dv.insert(&c.id, if c.kind == CellType::Inv { !b[0] } else { b[0] && b[1] });
        }
        let t: Vec<bool> = r
            .inputs
            .iter()
            .map(|s| {
                let lits = s.literals.iter().map(|l| dv[l.signal.as_str()] ^ l.inverted);
                match s.kind {
                    Some(GateKind::Or) => lits.fold(false, |a, b| a || b),
                    _ => lits.fold(true, |a, b| a && b),
                }
            })
            .collect();
        let mut g = t[t.len() - 1];
        for q in (0..t.len() - 1).rev() {
            let and = (q % 2 == 0) != r.variant.is_dual();
            g = if and { t[q] && g } else { t[q] || g };
        }
        if (g ^ r.output_inverted) != orig {
            return false;
        }
    }
    true
}

#[test]
fn random_netlists_round_trip() {
    for seed in 0..200 {
        let n = random_path_netlist(seed, 12);
        assert!(n.inputs().len() <= 12);
        let r = normalize(&n, "x", DelayModel::new(10.0, 0.5).unwrap()).unwrap();
        assert!(round_trip_equivalent(&n, &r).unwrap(), "seed {seed}");
        assert!(brute_force_round_trip(&n, &r), "seed {seed}");
        assert!(r.instance.m() <= 12);
    }
}
