use once_cell::sync::Lazy;
use smiles_core::{Element, MolGraph};

static HYDROGEN: Lazy<Element> =
    Lazy::new(|| Element::from_symbol("H").expect("hydrogen in element table"));

/// Average molecular weight. Isotope-labelled atoms use the nuclide mass,
/// everything else the standard atomic weight. Implicit and bracket-counted
/// hydrogens weigh in at the standard hydrogen weight.
pub fn molecular_weight(g: &MolGraph) -> f64 {
    let h_weight = HYDROGEN.standard_weight();
    (0..g.atom_count())
        .map(|i| {
            let a = g.atom(i);
            let own = match a.isotope {
                Some(n) => a.element.nuclide_mass(n),
                None => a.element.standard_weight(),
            };
            own + f64::from(a.own_h()) * h_weight
        })
        .sum()
}
