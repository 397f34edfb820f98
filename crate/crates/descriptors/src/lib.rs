//! Physicochemical descriptors computed from a parsed molecular graph:
//! molecular weight, hydrogen bonding counts, rotatable bonds, topological
//! polar surface area, Wildman-Crippen logP and molar refractivity, ring
//! and atom counts.

mod crippen;
mod hbond;
mod mw;
mod rotatable;
mod tpsa;

use serde::{Deserialize, Serialize};
use smiles_core::MolGraph;

pub use crippen::{atom_types, crippen, AtomType};
pub use rotatable::rotatable_bonds;
pub use tpsa::tpsa;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorSet {
    pub mw: f64,
    pub logp: f64,
    pub mr: f64,
    pub tpsa: f64,
    pub hbd: u32,
    pub hba: u32,
    pub rotb: u32,
    pub aromatic_rings: u32,
    pub heavy_atoms: u32,
    pub atom_count_total: u32,
}

/// Every key `DescriptorSet::get` understands, in export order.
pub const DESCRIPTOR_KEYS: [&str; 10] = [
    "mw",
    "logp",
    "mr",
    "tpsa",
    "hbd",
    "hba",
    "rotb",
    "aromatic_rings",
    "heavy_atoms",
    "atom_count_total",
];

impl DescriptorSet {
    /// Value lookup by criterion key, shared with the rule engine.
    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "mw" => self.mw,
            "logp" => self.logp,
            "mr" => self.mr,
            "tpsa" => self.tpsa,
            "hbd" => f64::from(self.hbd),
            "hba" => f64::from(self.hba),
            "rotb" => f64::from(self.rotb),
            "aromatic_rings" => f64::from(self.aromatic_rings),
            "heavy_atoms" => f64::from(self.heavy_atoms),
            "atom_count_total" => f64::from(self.atom_count_total),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorWarning {
    pub code: String,
    pub atom: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Count sulfur and phosphorus polar fragments in the surface area.
    pub tpsa_sulfur_phosphorus: bool,
    /// Skip amide C-N bonds when counting rotatable bonds.
    pub exclude_amide_rotors: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tpsa_sulfur_phosphorus: false,
            exclude_amide_rotors: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Computed {
    pub descriptors: DescriptorSet,
    pub warnings: Vec<DescriptorWarning>,
}

pub fn compute_all(g: &MolGraph) -> Computed {
    compute_with(g, &Options::default())
}

pub fn compute_with(g: &MolGraph, opts: &Options) -> Computed {
    let mut warnings = Vec::new();
    let (tpsa, tpsa_warnings) = tpsa::tpsa(g, opts.tpsa_sulfur_phosphorus);
    warnings.extend(tpsa_warnings);
    let (logp, mr) = crippen::crippen(g);
    let descriptors = DescriptorSet {
        mw: mw::molecular_weight(g),
        logp,
        mr,
        tpsa,
        hbd: hbond::donors(g),
        hba: hbond::acceptors(g),
        rotb: rotatable::rotatable_bonds(g, opts.exclude_amide_rotors),
        aromatic_rings: aromatic_ring_count(g),
        heavy_atoms: g.heavy_atom_count() as u32,
        atom_count_total: atom_count_total(g),
    };
    Computed {
        descriptors,
        warnings,
    }
}

/// Rings from the perceived basis whose every atom is aromatic.
pub fn aromatic_ring_count(g: &MolGraph) -> u32 {
    g.rings()
        .iter()
        .filter(|ring| ring.iter().all(|&i| g.atom(i).aromatic))
        .count() as u32
}

/// Every atom in the graph plus every implicit or bracket-counted hydrogen.
pub fn atom_count_total(g: &MolGraph) -> u32 {
    let implicit: u32 = (0..g.atom_count())
        .map(|i| u32::from(g.atom(i).own_h()))
        .sum();
    g.atom_count() as u32 + implicit
}
