//! The molecular graph produced by parsing. Immutable once built: every
//! derived annotation (implicit hydrogens, ring membership, components) is
//! computed during construction and never changes afterwards.

use crate::element::Element;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to an atom's bond order sum. Aromatic bonds count one
    /// unit here; the delocalization increment is applied per atom.
    pub fn units(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

}

/// Cis/trans marker written as `/` or `\`. Retained but not interpreted.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BondGeom {
    Up,
    Down,
}

/// Tetrahedral marker written as `@` or `@@`. Retained but not interpreted.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Chirality {
    Anticlockwise,
    Clockwise,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Atom {
    pub element: Element,
    pub aromatic: bool,
    pub charge: i8,
    pub isotope: Option<u16>,
    /// Hydrogen count written inside brackets. `None` for bare atoms.
    pub explicit_h: Option<u8>,
    /// Derived hydrogen count for bare atoms. 0 whenever `explicit_h` is set.
    pub implicit_h: u8,
    pub chirality: Option<Chirality>,
}

impl Atom {
    /// Hydrogens carried by this atom itself (bracket count or derived).
    /// Neighboring explicit `[H]` atoms are separate graph atoms.
    pub fn own_h(&self) -> u8 {
        self.explicit_h.unwrap_or(self.implicit_h)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    /// True when the bond lies on a cycle (it is not a bridge).
    pub in_ring: bool,
    pub geom: Option<BondGeom>,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Debug)]
pub struct MolGraph {
    pub(crate) atoms: Vec<Atom>,
    pub(crate) bonds: Vec<Bond>,
    /// Per atom: (neighbor atom index, bond index).
    pub(crate) adj: Vec<Vec<(usize, usize)>>,
    /// Smallest set of smallest rings, each ring an ordered atom cycle.
    pub(crate) rings: Vec<Vec<usize>>,
    pub(crate) components: Vec<Vec<usize>>,
}

impl MolGraph {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    /// Neighbors of atom `i` as (atom index, bond index) pairs, in input order.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adj[i]
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|&&(n, _)| n == b).map(|&(_, bi)| bi)
    }

    /// SSSR: `bonds - atoms + components` rings, each smallest under the
    /// minimum cycle basis criterion.
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    pub fn ring_count(&self) -> usize {
        self.rings.len()
    }

    /// Connected components as atom index lists.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn cyclomatic_number(&self) -> usize {
        self.bonds.len() + self.components.len() - self.atoms.len()
    }

    /// Graph degree: number of bonded neighbors including explicit H atoms.
    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Number of non-hydrogen neighbors.
    pub fn heavy_degree(&self, i: usize) -> usize {
        self.adj[i]
            .iter()
            .filter(|&&(n, _)| !self.atoms[n].element.is_hydrogen())
            .count()
    }

    /// Total hydrogens on atom `i`: implicit or bracket count plus bonded
    /// explicit `[H]` atoms.
    pub fn hydrogens_on(&self, i: usize) -> u8 {
        let neighbors = self.adj[i]
            .iter()
            .filter(|&&(n, _)| self.atoms[n].element.is_hydrogen())
            .count() as u8;
        self.atoms[i].own_h() + neighbors
    }

    /// Sum of bond order units at atom `i` (aromatic bonds count 1).
    pub fn bond_order_sum(&self, i: usize) -> u8 {
        self.adj[i]
            .iter()
            .map(|&(_, bi)| self.bonds[bi].order.units())
            .sum()
    }

    pub fn atom_in_ring(&self, i: usize) -> bool {
        self.adj[i].iter().any(|&(_, bi)| self.bonds[bi].in_ring)
    }

    /// True when atom `i` is a member of an SSSR ring with `size` atoms.
    pub fn in_ring_of_size(&self, i: usize, size: usize) -> bool {
        self.rings
            .iter()
            .any(|r| r.len() == size && r.contains(&i))
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms
            .iter()
            .filter(|a| !a.element.is_hydrogen())
            .count()
    }
}
