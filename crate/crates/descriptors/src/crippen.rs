//! Atomic logP and molar refractivity typing. Classes follow the published
//! priority order; wildcard classes CS, NS, OS and HS catch everything the
//! specific predicates miss. Contribution values live in data/crippen.tsv.

use std::collections::HashMap;

use once_cell::sync::Lazy;
use smiles_core::{BondOrder, MolGraph};

static CONTRIB: Lazy<HashMap<&'static str, (f64, f64)>> = Lazy::new(|| {
    let mut table = HashMap::new();
    for line in include_str!("../data/crippen.tsv").lines() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        assert!(f.len() == 2 || f.len() == 3, "crippen row: {line}");
        let logp: f64 = f[1].parse().expect("logp");
        let mr: f64 = match f.get(2) {
            Some(&"") | None => 0.0,
            Some(v) => v.parse().expect("mr"),
        };
        let previous = table.insert(leak(f[0]), (logp, mr));
        assert!(previous.is_none(), "duplicate crippen row: {line}");
    }
    table
});

fn leak(s: &str) -> &'static str {
    Box::leak(s.to_owned().into_boxed_str())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomType {
    pub atom: usize,
    pub class: &'static str,
    pub hydrogens: u8,
    pub h_class: &'static str,
}

/// Sum of atomic contributions: (logp, mr).
pub fn crippen(g: &MolGraph) -> (f64, f64) {
    let mut logp = 0.0;
    let mut mr = 0.0;
    for t in atom_types(g) {
        let (l, m) = CONTRIB[t.class];
        logp += l;
        mr += m;
        if t.hydrogens > 0 {
            let (l, m) = CONTRIB[t.h_class];
            logp += f64::from(t.hydrogens) * l;
            mr += f64::from(t.hydrogens) * m;
        }
    }
    (logp, mr)
}

/// Per-atom class assignments, exposed for contribution-level checks.
pub fn atom_types(g: &MolGraph) -> Vec<AtomType> {
    let mut out = Vec::new();
    for i in 0..g.atom_count() {
        if g.atom(i).element.is_hydrogen() {
            // Hydrogens on a heavy atom are folded into that atom's count.
            // A hydrogen bonded only to hydrogen, or to nothing, stands
            // alone.
            let has_heavy = g
                .neighbors(i)
                .iter()
                .any(|&(j, _)| !g.atom(j).element.is_hydrogen());
            if !has_heavy {
                let class = if g.degree(i) > 0 { "H1" } else { "HS" };
                out.push(AtomType {
                    atom: i,
                    class,
                    hydrogens: 0,
                    h_class: "HS",
                });
            }
            continue;
        }
        out.push(AtomType {
            atom: i,
            class: heavy_class(g, i),
            hydrogens: g.hydrogens_on(i),
            h_class: h_class(g, i),
        });
    }
    out
}

const HETERO: [&str; 8] = ["N", "O", "P", "S", "F", "Cl", "Br", "I"];

fn heavy_class(g: &MolGraph, i: usize) -> &'static str {
    match g.atom(i).element.symbol() {
        "C" => carbon(g, i),
        "N" => nitrogen(g, i),
        "O" => oxygen(g, i),
        "S" => {
            if g.atom(i).charge != 0 {
                "S2"
            } else if g.atom(i).aromatic {
                "S3"
            } else {
                "S1"
            }
        }
        "P" => "P",
        "F" if g.atom(i).charge == 0 => "F",
        "Cl" if g.atom(i).charge == 0 => "Cl",
        "Br" if g.atom(i).charge == 0 => "Br",
        "I" if g.atom(i).charge == 0 => "I",
        "F" | "Cl" | "Br" | "I" => "Hal",
        _ => metal(g, i),
    }
}

const ME2_NUMBERS: [u8; 16] = [5, 13, 14, 31, 32, 33, 34, 49, 50, 51, 52, 81, 82, 83, 84, 85];

fn metal(g: &MolGraph, i: usize) -> &'static str {
    if ME2_NUMBERS.contains(&g.atom(i).element.atomic_number()) {
        "Me2"
    } else {
        "Me1"
    }
}

struct Nbrs {
    singles: Vec<usize>,
    doubles: Vec<usize>,
    triples: Vec<usize>,
    aromatics: Vec<usize>,
}

fn heavy_nbrs(g: &MolGraph, i: usize) -> Nbrs {
    let mut n = Nbrs {
        singles: Vec::new(),
        doubles: Vec::new(),
        triples: Vec::new(),
        aromatics: Vec::new(),
    };
    for &(j, bi) in g.neighbors(i) {
        if g.atom(j).element.is_hydrogen() {
            continue;
        }
        match g.bond(bi).order {
            BondOrder::Single => n.singles.push(j),
            BondOrder::Double => n.doubles.push(j),
            BondOrder::Triple => n.triples.push(j),
            BondOrder::Aromatic => n.aromatics.push(j),
        }
    }
    n
}

fn sym(g: &MolGraph, j: usize) -> &str {
    g.atom(j).element.symbol()
}

fn is_hetero(g: &MolGraph, j: usize) -> bool {
    !g.atom(j).aromatic && HETERO.contains(&sym(g, j))
}

fn carbon(g: &MolGraph, i: usize) -> &'static str {
    let h = g.hydrogens_on(i);
    let n = heavy_nbrs(g, i);
    if g.atom(i).aromatic {
        // Substituent checks in published order: the odd aliphatic
        // attachment first, then halogens, hydrogen, fusion, and the
        // element-specific single bonds.
        let weird = n.singles.iter().any(|&j| {
            !g.atom(j).aromatic && !HETERO.contains(&sym(g, j)) && sym(g, j) != "C"
        });
        if weird {
            return "C13";
        }
        for (el, class) in [("F", "C14"), ("Cl", "C15"), ("Br", "C16"), ("I", "C17")] {
            if n.singles.iter().any(|&j| sym(g, j) == el && !g.atom(j).aromatic) {
                return class;
            }
        }
        if h >= 1 {
            return "C18";
        }
        if n.aromatics.len() >= 3 {
            return "C19";
        }
        if n.singles.iter().any(|&j| g.atom(j).aromatic) {
            return "C20";
        }
        for (el, class) in [("C", "C21"), ("N", "C22"), ("O", "C23"), ("S", "C24")] {
            if n.singles.iter().any(|&j| sym(g, j) == el) {
                return class;
            }
        }
        if n
            .doubles
            .iter()
            .any(|&j| matches!(sym(g, j), "C" | "N" | "O"))
        {
            return "C25";
        }
        return "CS";
    }

    if !n.triples.is_empty() {
        return "C7";
    }
    if !n.doubles.is_empty() {
        if n.doubles.iter().any(|&j| !g.atom(j).aromatic && sym(g, j) != "C") {
            return "C5";
        }
        if n.doubles.iter().any(|&j| g.atom(j).aromatic) {
            return "C26";
        }
        // Double bond to aliphatic carbon; aromatic single neighbors push
        // the atom out of the plain vinyl class.
        if n.singles.iter().any(|&j| g.atom(j).aromatic) {
            return "C26";
        }
        return "C6";
    }

    // sp3 carbon.
    if n.singles.iter().any(|&j| is_hetero(g, j)) {
        return if h >= 2 { "C3" } else { "C4" };
    }
    if n.singles.iter().any(|&j| g.atom(j).aromatic) {
        return match h {
            3 => {
                if n.singles.iter().any(|&j| g.atom(j).aromatic && sym(g, j) == "C") {
                    "C8"
                } else {
                    "C9"
                }
            }
            2 => "C10",
            1 => "C11",
            _ => "C12",
        };
    }
    if n.singles.iter().all(|&j| sym(g, j) == "C") {
        return if h >= 2 { "C1" } else { "C2" };
    }
    "C27"
}

fn nitrogen(g: &MolGraph, i: usize) -> &'static str {
    let a = g.atom(i);
    if a.aromatic {
        return match a.charge {
            0 => "N11",
            c if c > 0 => "N12",
            _ => "N14",
        };
    }
    let h = g.hydrogens_on(i);
    let n = heavy_nbrs(g, i);
    if a.charge > 0 {
        if h >= 1 {
            return "N10";
        }
        if !n.triples.is_empty() {
            return "N14";
        }
        return "N13";
    }
    if a.charge < 0 {
        return "N14";
    }
    if !n.triples.is_empty() {
        return "N9";
    }
    if !n.doubles.is_empty() {
        return if h >= 1 { "N5" } else { "N6" };
    }
    let aromatic_nbr = n.singles.iter().any(|&j| g.atom(j).aromatic);
    match (h, n.singles.len()) {
        (2, 1) => {
            if aromatic_nbr {
                "N3"
            } else {
                "N1"
            }
        }
        (1, 2) => {
            if aromatic_nbr {
                "N4"
            } else {
                "N2"
            }
        }
        (0, 3) => {
            if aromatic_nbr {
                "N8"
            } else {
                "N7"
            }
        }
        _ => "NS",
    }
}

fn oxygen(g: &MolGraph, i: usize) -> &'static str {
    let a = g.atom(i);
    if a.aromatic {
        return "O1";
    }
    let h = g.hydrogens_on(i);
    if h >= 1 {
        return "O2";
    }
    let n = heavy_nbrs(g, i);
    if a.charge < 0 {
        let heavy = n.singles.len() + n.doubles.len() + n.triples.len();
        if heavy != 1 {
            return "OS";
        }
        let j = *n
            .singles
            .first()
            .or_else(|| n.doubles.first())
            .or_else(|| n.triples.first())
            .expect("one heavy neighbor");
        return match sym(g, j) {
            "N" => "O5",
            "S" => "O6",
            "C" if carboxylate_carbon(g, j, i) => "O12",
            _ => "O7",
        };
    }
    if a.charge > 0 {
        return "OS";
    }
    if let Some(&j) = n.doubles.first() {
        return match sym(g, j) {
            "N" | "O" => "O5",
            "S" => "O6",
            "C" if g.atom(j).aromatic => "O8",
            "C" => carbonyl_oxygen(g, j, i),
            _ => "OS",
        };
    }
    if n.singles.len() == 2 {
        return if n.singles.iter().any(|&j| g.atom(j).aromatic) {
            "O4"
        } else {
            "O3"
        };
    }
    "OS"
}

/// The carbon of `[O-]C(=O)`, seen from the charged oxygen `o`.
fn carboxylate_carbon(g: &MolGraph, c: usize, o: usize) -> bool {
    g.neighbors(c).iter().any(|&(k, bi)| {
        k != o && sym(g, k) == "O" && g.bond(bi).order == BondOrder::Double
    })
}

/// Neutral carbonyl oxygen double-bonded to aliphatic carbon `c`.
fn carbonyl_oxygen(g: &MolGraph, c: usize, o: usize) -> &'static str {
    let n = heavy_nbrs(g, c);
    let others: Vec<usize> = n
        .singles
        .iter()
        .chain(n.doubles.iter())
        .copied()
        .filter(|&k| k != o)
        .collect();
    let second_double_o = n.doubles.iter().any(|&k| k != o && sym(g, k) == "O");
    if second_double_o && others.len() == 1 {
        return "O11"; // O=C=O
    }
    if others
        .iter()
        .any(|&k| !g.atom(k).aromatic && sym(g, k) == "C")
    {
        return "O9";
    }
    if g.hydrogens_on(c) >= 1 {
        if others.is_empty() || others.iter().any(|&k| matches!(sym(g, k), "N" | "O")) {
            return "O11";
        }
        return "O10";
    }
    "O10"
}

fn h_class(g: &MolGraph, i: usize) -> &'static str {
    match g.atom(i).element.symbol() {
        "C" | "H" => "H1",
        "N" => "H3",
        "O" => {
            let other = g
                .neighbors(i)
                .iter()
                .map(|&(j, _)| j)
                .find(|&j| !g.atom(j).element.is_hydrogen());
            match other {
                None => "H2",
                Some(k) => match sym(g, k) {
                    "N" => "H3",
                    "O" | "S" => "H4",
                    "C" if !g.atom(k).aromatic && double_to_cnos(g, k) => "H4",
                    _ => "H2",
                },
            }
        }
        _ => "H2",
    }
}

fn double_to_cnos(g: &MolGraph, c: usize) -> bool {
    g.neighbors(c).iter().any(|&(k, bi)| {
        g.bond(bi).order == BondOrder::Double && matches!(sym(g, k), "C" | "N" | "O" | "S")
    })
}
