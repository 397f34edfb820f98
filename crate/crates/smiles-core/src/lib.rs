//! Molecular graphs from SMILES strings: parsing, ring perception and a
//! deterministic canonical writer suitable for deduplication.

mod canon;
mod element;
mod error;
mod graph;
mod parse;
mod rings;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use canon::{canonical_ranks, write_canonical};
pub use element::Element;
pub use error::SmilesError;
pub use graph::{Atom, Bond, BondGeom, BondOrder, Chirality, MolGraph};
pub use parse::parse;

/// Parse and re-serialize in one step.
pub fn canonical(smiles: &str) -> Result<String, SmilesError> {
    Ok(write_canonical(&parse(smiles)?))
}
