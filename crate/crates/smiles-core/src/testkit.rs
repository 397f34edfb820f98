//! Test-only helpers, compiled behind the `testkit` feature.

use crate::graph::{BondOrder, MolGraph};

type AtomLabel = (u8, i8, Option<u16>, bool, u8);

fn label(g: &MolGraph, i: usize) -> AtomLabel {
    let a = g.atom(i);
    (
        a.element.atomic_number(),
        a.charge,
        a.isotope,
        a.aromatic,
        a.own_h(),
    )
}

/// Labelled graph isomorphism on (element, charge, isotope, aromatic flag,
/// hydrogen count) and bond orders. Stereo is ignored. Backtracking search,
/// fine for molecule-sized graphs.
pub fn isomorphic(a: &MolGraph, b: &MolGraph) -> bool {
    if a.atom_count() != b.atom_count() || a.bonds().len() != b.bonds().len() {
        return false;
    }
    let mut la: Vec<AtomLabel> = (0..a.atom_count()).map(|i| label(a, i)).collect();
    let mut lb: Vec<AtomLabel> = (0..b.atom_count()).map(|i| label(b, i)).collect();
    la.sort_unstable();
    lb.sort_unstable();
    if la != lb {
        return false;
    }

    let n = a.atom_count();
    // Map connectivity-first: order a's atoms so each one after the first in
    // its component touches an already-ordered atom.
    let mut order = Vec::with_capacity(n);
    let mut queued = vec![false; n];
    for s in 0..n {
        if queued[s] {
            continue;
        }
        queued[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, _) in a.neighbors(u) {
                if !queued[v] {
                    queued[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    try_map(a, b, &order, 0, &mut mapping, &mut used)
}

fn try_map(
    a: &MolGraph,
    b: &MolGraph,
    order: &[usize],
    k: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if k == order.len() {
        return true;
    }
    let u = order[k];
    let lu = label(a, u);
    for cand in 0..b.atom_count() {
        if used[cand] || label(b, cand) != lu || a.degree(u) != b.degree(cand) {
            continue;
        }
        if !edges_consistent(a, b, u, cand, mapping) {
            continue;
        }
        mapping[u] = cand;
        used[cand] = true;
        if try_map(a, b, order, k + 1, mapping, used) {
            return true;
        }
        mapping[u] = usize::MAX;
        used[cand] = false;
    }
    false
}

fn edges_consistent(a: &MolGraph, b: &MolGraph, u: usize, cand: usize, mapping: &[usize]) -> bool {
    for &(v, bi) in a.neighbors(u) {
        if mapping[v] == usize::MAX {
            continue;
        }
        match b.bond_between(cand, mapping[v]) {
            Some(bj) if bond_key(b.bond(bj).order) == bond_key(a.bond(bi).order) => {}
            _ => return false,
        }
    }
    // Mapped neighbors of the candidate must be images of mapped neighbors
    // of u; anything else would add an edge a does not have.
    for &(w, _) in b.neighbors(cand) {
        if let Some(v) = mapping.iter().position(|&m| m == w) {
            if a.bond_between(u, v).is_none() {
                return false;
            }
        }
    }
    true
}

fn bond_key(order: BondOrder) -> u8 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}
