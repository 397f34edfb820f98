use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("syntax error at position {pos}: {reason}")]
    Syntax { pos: usize, reason: String },
    #[error("atom {atom} ({element}) exceeds every permitted valence with bond order sum {bond_order_sum}")]
    Valence {
        atom: usize,
        element: String,
        bond_order_sum: u8,
    },
    #[error("ring bond {label} opened at position {pos} was never closed")]
    UnclosedRing { label: u16, pos: usize },
    #[error("aromaticity error at atom {atom}: {reason}")]
    Aromaticity {
        atom: usize,
        reason: String,
        pos: usize,
    },
}

impl SmilesError {
    /// Stable machine-readable code, used by quarantine records.
    pub fn code(&self) -> &'static str {
        match self {
            SmilesError::Syntax { .. } => "syntax",
            SmilesError::Valence { .. } => "valence",
            SmilesError::UnclosedRing { .. } => "unclosed_ring",
            SmilesError::Aromaticity { .. } => "aromaticity",
        }
    }
}
