use smiles_core::MolGraph;

/// Donor count: every hydrogen sitting on a nitrogen or oxygen.
pub fn donors(g: &MolGraph) -> u32 {
    (0..g.atom_count())
        .filter(|&i| matches!(g.atom(i).element.symbol(), "N" | "O"))
        .map(|i| u32::from(g.hydrogens_on(i)))
        .sum()
}

/// Acceptor count: every nitrogen and oxygen atom.
pub fn acceptors(g: &MolGraph) -> u32 {
    (0..g.atom_count())
        .filter(|&i| matches!(g.atom(i).element.symbol(), "N" | "O"))
        .count() as u32
}
