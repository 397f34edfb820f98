use std::collections::HashMap;

use once_cell::sync::Lazy;
use smiles_core::{BondOrder, MolGraph};

use crate::DescriptorWarning;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EnvKey {
    symbol: u8,
    aromatic: bool,
    charge: i8,
    h: u8,
    singles: u8,
    doubles: u8,
    triples: u8,
    aromatics: u8,
    ring3: bool,
}

static TABLE: Lazy<HashMap<EnvKey, f64>> = Lazy::new(|| {
    let mut table = HashMap::new();
    for line in include_str!("../data/tpsa.tsv").lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        assert_eq!(f.len(), 10, "tpsa row: {line}");
        let key = EnvKey {
            symbol: f[0].as_bytes()[0],
            aromatic: f[1] == "1",
            charge: f[2].parse().expect("charge"),
            h: f[3].parse().expect("h"),
            singles: f[4].parse().expect("singles"),
            doubles: f[5].parse().expect("doubles"),
            triples: f[6].parse().expect("triples"),
            aromatics: f[7].parse().expect("aromatics"),
            ring3: f[8] == "1",
        };
        let value: f64 = f[9].parse().expect("value");
        let previous = table.insert(key, value);
        assert!(previous.is_none(), "duplicate tpsa row: {line}");
    }
    table
});

/// Topological polar surface area. Nitrogen and oxygen fragments always
/// count; sulfur and phosphorus only when `sulfur_phosphorus` is set.
/// Environments without a published fragment contribute zero and produce a
/// warning record.
pub fn tpsa(g: &MolGraph, sulfur_phosphorus: bool) -> (f64, Vec<DescriptorWarning>) {
    let mut total = 0.0;
    let mut warnings = Vec::new();
    for i in 0..g.atom_count() {
        let a = g.atom(i);
        let polar = match a.element.symbol() {
            "N" | "O" => true,
            "S" | "P" => sulfur_phosphorus,
            _ => false,
        };
        if !polar {
            continue;
        }
        let mut key = EnvKey {
            symbol: a.element.symbol().as_bytes()[0],
            aromatic: a.aromatic,
            charge: a.charge,
            h: g.hydrogens_on(i),
            singles: 0,
            doubles: 0,
            triples: 0,
            aromatics: 0,
            ring3: g.in_ring_of_size(i, 3),
        };
        for &(j, bi) in g.neighbors(i) {
            if g.atom(j).element.is_hydrogen() {
                continue; // folded into the h column
            }
            match g.bond(bi).order {
                BondOrder::Single => key.singles += 1,
                BondOrder::Double => key.doubles += 1,
                BondOrder::Triple => key.triples += 1,
                BondOrder::Aromatic => key.aromatics += 1,
            }
        }
        let value = TABLE.get(&key).or_else(|| {
            TABLE.get(&EnvKey {
                ring3: false,
                ..key
            })
        });
        match value {
            Some(v) => total += v,
            None => warnings.push(DescriptorWarning {
                code: "unknown-polar-environment".into(),
                atom: Some(i),
                detail: format!(
                    "{}{}{:+} h{} s{} d{} t{} a{}: no surface fragment, contributes 0",
                    a.element.symbol(),
                    if a.aromatic { " aromatic" } else { "" },
                    a.charge,
                    key.h,
                    key.singles,
                    key.doubles,
                    key.triples,
                    key.aromatics,
                ),
            }),
        }
    }
    (round2(total), warnings)
}

/// Published fragments carry two decimals; summing then rounding keeps the
/// result stable across float association orders.
fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
