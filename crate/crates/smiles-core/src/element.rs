//! Element identities, atomic weights and nuclide masses, loaded from the
//! tables under `data/`.

use std::collections::HashMap;

use once_cell::sync::Lazy;

const ELEMENTS_TSV: &str = include_str!("../data/elements.tsv");
const VALENCES_TSV: &str = include_str!("../data/valences.tsv");
const NUCLIDES_TSV: &str = include_str!("../data/nuclides.tsv");

struct ElementRow {
    symbol: &'static str,
    number: u8,
    weight: f64,
}

fn data_rows(tsv: &'static str) -> impl Iterator<Item = Vec<&'static str>> {
    tsv.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').collect())
}

static ELEMENTS: Lazy<Vec<ElementRow>> = Lazy::new(|| {
    data_rows(ELEMENTS_TSV)
        .map(|f| ElementRow {
            symbol: f[0],
            number: f[1].parse().expect("atomic number"),
            weight: f[2].parse().expect("atomic weight"),
        })
        .collect()
});

static BY_SYMBOL: Lazy<HashMap<&'static str, u16>> = Lazy::new(|| {
    ELEMENTS
        .iter()
        .enumerate()
        .map(|(i, row)| (row.symbol, i as u16))
        .collect()
});

static VALENCES: Lazy<HashMap<&'static str, Vec<u8>>> = Lazy::new(|| {
    data_rows(VALENCES_TSV)
        .map(|f| {
            let vs = f[1]
                .split(',')
                .map(|v| v.parse().expect("valence"))
                .collect();
            (f[0], vs)
        })
        .collect()
});

static NUCLIDES: Lazy<HashMap<(&'static str, u16), f64>> = Lazy::new(|| {
    data_rows(NUCLIDES_TSV)
        .map(|f| {
            (
                (f[0], f[1].parse().expect("mass number")),
                f[2].parse().expect("nuclide mass"),
            )
        })
        .collect()
});

/// A chemical element, interned against the built-in periodic table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u16);

impl Element {
    pub fn from_symbol(symbol: &str) -> Option<Element> {
        BY_SYMBOL.get(symbol).map(|&i| Element(i))
    }

    pub fn symbol(self) -> &'static str {
        ELEMENTS[self.0 as usize].symbol
    }

    pub fn atomic_number(self) -> u8 {
        ELEMENTS[self.0 as usize].number
    }

    /// Standard atomic weight in Da.
    pub fn standard_weight(self) -> f64 {
        ELEMENTS[self.0 as usize].weight
    }

    /// Exact mass of one nuclide. Unlisted nuclides fall back to the mass
    /// number itself.
    pub fn nuclide_mass(self, mass_number: u16) -> f64 {
        NUCLIDES
            .get(&(self.symbol(), mass_number))
            .copied()
            .unwrap_or(f64::from(mass_number))
    }

    /// Permitted valences for bare organic-subset atoms, ascending.
    /// Empty for every other element.
    pub fn permitted_valences(self) -> &'static [u8] {
        VALENCES.get(self.symbol()).map_or(&[], Vec::as_slice)
    }

    /// True for B, C, N, O, P, S, F, Cl, Br, I: the atoms that may be
    /// written without brackets.
    pub fn in_organic_subset(self) -> bool {
        matches!(
            self.symbol(),
            "B" | "C" | "N" | "O" | "P" | "S" | "F" | "Cl" | "Br" | "I"
        )
    }

    /// True for the elements with a lowercase aromatic form (b c n o p s).
    pub fn aromatic_capable(self) -> bool {
        matches!(self.symbol(), "B" | "C" | "N" | "O" | "P" | "S")
    }

    pub fn is_hydrogen(self) -> bool {
        self.atomic_number() == 1
    }

    /// Lowest permitted valence, used for the aromatic implicit-H rule.
    pub(crate) fn lowest_valence(self) -> u8 {
        self.permitted_valences().first().copied().unwrap_or(0)
    }
}

impl std::fmt::Debug for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}
