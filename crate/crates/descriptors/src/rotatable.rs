use smiles_core::{BondOrder, MolGraph};

/// Single acyclic bonds between two heavy atoms that each carry at least one
/// further heavy neighbor. Amide C-N bonds are skipped unless asked for.
pub fn rotatable_bonds(g: &MolGraph, exclude_amide: bool) -> u32 {
    g.bonds()
        .iter()
        .filter(|b| {
            b.order == BondOrder::Single
                && !b.in_ring
                && g.heavy_degree(b.a) >= 2
                && g.heavy_degree(b.b) >= 2
                && !g.atom(b.a).element.is_hydrogen()
                && !g.atom(b.b).element.is_hydrogen()
                && !(exclude_amide && is_amide(g, b.a, b.b))
        })
        .count() as u32
}

fn is_amide(g: &MolGraph, a: usize, b: usize) -> bool {
    carbonyl_to_n(g, a, b) || carbonyl_to_n(g, b, a)
}

fn carbonyl_to_n(g: &MolGraph, c: usize, n: usize) -> bool {
    g.atom(c).element.symbol() == "C"
        && g.atom(n).element.symbol() == "N"
        && g.neighbors(c).iter().any(|&(o, bi)| {
            g.atom(o).element.symbol() == "O" && g.bond(bi).order == BondOrder::Double
        })
}
