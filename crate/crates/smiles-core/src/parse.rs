//! Hand-rolled SMILES scanner for the organic subset plus bracket atoms,
//! ring closures (including %nn), branches and dot-separated components.
//! Stereo markers are accepted and retained on the graph without being
//! interpreted.

use std::collections::HashMap;

use crate::element::Element;
use crate::error::SmilesError;
use crate::graph::{Atom, Bond, BondGeom, BondOrder, Chirality, MolGraph};
use crate::rings;

pub fn parse(input: &str) -> Result<MolGraph, SmilesError> {
    Scanner::new(input.trim())?.run()
}

struct PendingBond {
    order: Option<BondOrder>,
    geom: Option<BondGeom>,
    pos: usize,
}

struct RingOpen {
    atom: usize,
    order: Option<BondOrder>,
    geom: Option<BondGeom>,
    pos: usize,
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adj: Vec<Vec<(usize, usize)>>,
    prev: Option<usize>,
    pending: Option<PendingBond>,
    branch_stack: Vec<usize>,
    ring_opens: HashMap<u16, RingOpen>,
}

impl<'a> Scanner<'a> {
    fn new(input: &'a str) -> Result<Self, SmilesError> {
        if input.is_empty() {
            return Err(SmilesError::Syntax {
                pos: 0,
                reason: "empty input".into(),
            });
        }
        Ok(Scanner {
            src: input.as_bytes(),
            pos: 0,
            atoms: Vec::new(),
            bonds: Vec::new(),
            adj: Vec::new(),
            prev: None,
            pending: None,
            branch_stack: Vec::new(),
            ring_opens: HashMap::new(),
        })
    }

    fn run(mut self) -> Result<MolGraph, SmilesError> {
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            match c {
                b'[' => {
                    let atom = self.scan_bracket_atom()?;
                    self.push_atom(atom)?;
                }
                b'A'..=b'Z' => {
                    let atom = self.scan_bare_atom()?;
                    self.push_atom(atom)?;
                }
                b'b' | b'c' | b'n' | b'o' | b'p' | b's' => {
                    let atom = self.scan_bare_aromatic()?;
                    self.push_atom(atom)?;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if self.pending.is_some() {
                        return self.syntax("two bond symbols in a row");
                    }
                    let (order, geom) = match c {
                        b'-' => (BondOrder::Single, None),
                        b'=' => (BondOrder::Double, None),
                        b'#' => (BondOrder::Triple, None),
                        b':' => (BondOrder::Aromatic, None),
                        b'/' => (BondOrder::Single, Some(BondGeom::Up)),
                        _ => (BondOrder::Single, Some(BondGeom::Down)),
                    };
                    self.pending = Some(PendingBond {
                        order: Some(order),
                        geom,
                        pos: self.pos,
                    });
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let label = u16::from(c - b'0');
                    self.pos += 1;
                    self.ring_closure(label)?;
                }
                b'%' => {
                    let label = self.scan_percent_label()?;
                    self.ring_closure(label)?;
                }
                b'(' => {
                    let Some(prev) = self.prev else {
                        return self.syntax("branch before any atom");
                    };
                    if self.pending.is_some() {
                        return self.syntax("bond symbol before branch open");
                    }
                    self.branch_stack.push(prev);
                    self.pos += 1;
                }
                b')' => {
                    if self.pending.is_some() {
                        return self.syntax("dangling bond at branch close");
                    }
                    let Some(restored) = self.branch_stack.pop() else {
                        return self.syntax("unmatched branch close");
                    };
                    self.prev = Some(restored);
                    self.pos += 1;
                }
                b'.' => {
                    if self.pending.is_some() {
                        return self.syntax("bond symbol before component separator");
                    }
                    if !self.branch_stack.is_empty() {
                        return self.syntax("component separator inside branch");
                    }
                    if self.prev.is_none() {
                        return self.syntax("component separator before any atom");
                    }
                    if self.pos + 1 == self.src.len() {
                        return self.syntax("component separator at end of input");
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                _ => return self.syntax("unexpected character"),
            }
        }

        if self.pending.is_some() {
            return self.syntax("dangling bond at end of input");
        }
        if !self.branch_stack.is_empty() {
            return self.syntax("unclosed branch");
        }
        if let Some(&label) = self.ring_opens.keys().min() {
            let open = &self.ring_opens[&label];
            return Err(SmilesError::UnclosedRing {
                label,
                pos: open.pos,
            });
        }

        self.finish()
    }

    fn syntax<T>(&self, reason: &str) -> Result<T, SmilesError> {
        Err(SmilesError::Syntax {
            pos: self.pos,
            reason: reason.into(),
        })
    }

    fn push_atom(&mut self, atom: Atom) -> Result<(), SmilesError> {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        self.adj.push(Vec::new());
        if let Some(prev) = self.prev {
            let pending = self.pending.take();
            self.add_bond(prev, idx, pending)?;
        } else if let Some(p) = &self.pending {
            return Err(SmilesError::Syntax {
                pos: p.pos,
                reason: "bond symbol before first atom of a component".into(),
            });
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn add_bond(&mut self, a: usize, b: usize, pending: Option<PendingBond>) -> Result<(), SmilesError> {
        if a == b {
            return self.syntax("atom bonded to itself");
        }
        if self.adj[a].iter().any(|&(n, _)| n == b) {
            return self.syntax("duplicate bond between the same atoms");
        }
        let (order, geom, pos) = match pending {
            Some(p) => (p.order, p.geom, p.pos),
            None => (None, None, self.pos),
        };
        let order = order.unwrap_or_else(|| {
            if self.atoms[a].aromatic && self.atoms[b].aromatic {
                BondOrder::Aromatic
            } else {
                BondOrder::Single
            }
        });
        if order == BondOrder::Aromatic && !(self.atoms[a].aromatic && self.atoms[b].aromatic) {
            return Err(SmilesError::Aromaticity {
                atom: if self.atoms[a].aromatic { b } else { a },
                reason: "aromatic bond on a non-aromatic atom".into(),
                pos,
            });
        }
        let bi = self.bonds.len();
        self.bonds.push(Bond {
            a,
            b,
            order,
            in_ring: false,
            geom,
        });
        self.adj[a].push((b, bi));
        self.adj[b].push((a, bi));
        Ok(())
    }

    fn ring_closure(&mut self, label: u16) -> Result<(), SmilesError> {
        let Some(current) = self.prev else {
            return self.syntax("ring closure digit before any atom");
        };
        let pending = self.pending.take();
        match self.ring_opens.remove(&label) {
            None => {
                let (order, geom, pos) = match pending {
                    Some(p) => (p.order, p.geom, p.pos),
                    None => (None, None, self.pos),
                };
                self.ring_opens.insert(
                    label,
                    RingOpen {
                        atom: current,
                        order,
                        geom,
                        pos,
                    },
                );
            }
            Some(open) => {
                let close_order = pending.as_ref().and_then(|p| p.order);
                let order = match (open.order, close_order) {
                    (Some(a), Some(b)) if a != b => {
                        return self.syntax("ring closure bond symbols disagree")
                    }
                    (a, b) => a.or(b),
                };
                let geom = open.geom.or(pending.as_ref().and_then(|p| p.geom));
                self.add_bond(
                    open.atom,
                    current,
                    Some(PendingBond {
                        order,
                        geom,
                        pos: open.pos,
                    }),
                )?;
            }
        }
        Ok(())
    }

    fn scan_percent_label(&mut self) -> Result<u16, SmilesError> {
        // %nn: exactly two digits
        let d = |b: u8| (b as char).to_digit(10);
        match (self.src.get(self.pos + 1), self.src.get(self.pos + 2)) {
            (Some(&a), Some(&b)) if d(a).is_some() && d(b).is_some() => {
                self.pos += 3;
                Ok((d(a).expect("digit") * 10 + d(b).expect("digit")) as u16)
            }
            _ => self.syntax("%% ring label needs two digits"),
        }
    }

    fn scan_bare_atom(&mut self) -> Result<Atom, SmilesError> {
        // Two-letter organic-subset symbols first.
        let rest = &self.src[self.pos..];
        let symbol = if rest.starts_with(b"Cl") {
            self.pos += 2;
            "Cl"
        } else if rest.starts_with(b"Br") {
            self.pos += 2;
            "Br"
        } else {
            let sym = match rest[0] {
                b'B' => "B",
                b'C' => "C",
                b'N' => "N",
                b'O' => "O",
                b'P' => "P",
                b'S' => "S",
                b'F' => "F",
                b'I' => "I",
                _ => return self.syntax("element not in the organic subset"),
            };
            self.pos += 1;
            sym
        };
        let element = Element::from_symbol(symbol).expect("organic subset symbol");
        Ok(Atom {
            element,
            aromatic: false,
            charge: 0,
            isotope: None,
            explicit_h: None,
            implicit_h: 0,
            chirality: None,
        })
    }

    fn scan_bare_aromatic(&mut self) -> Result<Atom, SmilesError> {
        let symbol = match self.src[self.pos] {
            b'b' => "B",
            b'c' => "C",
            b'n' => "N",
            b'o' => "O",
            b'p' => "P",
            _ => "S",
        };
        self.pos += 1;
        Ok(Atom {
            element: Element::from_symbol(symbol).expect("aromatic subset symbol"),
            aromatic: true,
            charge: 0,
            isotope: None,
            explicit_h: None,
            implicit_h: 0,
            chirality: None,
        })
    }

    fn scan_bracket_atom(&mut self) -> Result<Atom, SmilesError> {
        self.pos += 1; // '['
        let isotope = self.scan_number();
        let isotope = match isotope {
            Some(n) if n == 0 || n > 999 => return self.syntax("isotope out of range"),
            other => other.map(|n| n as u16),
        };

        let (element, aromatic) = self.scan_bracket_symbol()?;
        let chirality = self.scan_chirality();

        let explicit_h = if self.peek() == Some(b'H') {
            self.pos += 1;
            let count = self.scan_number().unwrap_or(1);
            if count > 9 {
                return self.syntax("hydrogen count out of range");
            }
            count as u8
        } else {
            0
        };

        let charge = self.scan_charge()?;

        if self.peek() == Some(b':') {
            return self.syntax("atom class labels are not supported");
        }
        if self.peek() != Some(b']') {
            return self.syntax("expected ] to close bracket atom");
        }
        self.pos += 1;

        Ok(Atom {
            element,
            aromatic,
            charge,
            isotope,
            explicit_h: Some(explicit_h),
            implicit_h: 0,
            chirality,
        })
    }

    fn scan_bracket_symbol(&mut self) -> Result<(Element, bool), SmilesError> {
        let c = match self.peek() {
            Some(c) => c,
            None => return self.syntax("unterminated bracket atom"),
        };
        if c.is_ascii_lowercase() {
            // Aromatic form, limited to b c n o p s.
            let sym = match c {
                b'b' => "B",
                b'c' => "C",
                b'n' => "N",
                b'o' => "O",
                b'p' => "P",
                b's' => "S",
                _ => return self.syntax("unknown aromatic symbol in bracket"),
            };
            self.pos += 1;
            return Ok((Element::from_symbol(sym).expect("aromatic symbol"), true));
        }
        if !c.is_ascii_uppercase() {
            return self.syntax("expected element symbol in bracket");
        }
        // Prefer the two-letter symbol when the table knows it.
        if let Some(&next) = self.src.get(self.pos + 1) {
            if next.is_ascii_lowercase() {
                let two = std::str::from_utf8(&self.src[self.pos..self.pos + 2]).expect("ascii");
                if let Some(el) = Element::from_symbol(two) {
                    self.pos += 2;
                    return Ok((el, false));
                }
            }
        }
        let one = std::str::from_utf8(&self.src[self.pos..=self.pos]).expect("ascii");
        match Element::from_symbol(one) {
            Some(el) => {
                self.pos += 1;
                Ok((el, false))
            }
            None => self.syntax("unknown element symbol"),
        }
    }

    fn scan_chirality(&mut self) -> Option<Chirality> {
        if self.peek() == Some(b'@') {
            self.pos += 1;
            if self.peek() == Some(b'@') {
                self.pos += 1;
                Some(Chirality::Clockwise)
            } else {
                Some(Chirality::Anticlockwise)
            }
        } else {
            None
        }
    }

    fn scan_charge(&mut self) -> Result<i8, SmilesError> {
        let sign: i16 = match self.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Ok(0),
        };
        self.pos += 1;
        // Either digits (+2) or repeated signs (++); plain sign means 1.
        let magnitude: i16 = if let Some(n) = self.scan_number() {
            n as i16
        } else {
            let mut m = 1;
            let repeat = if sign > 0 { b'+' } else { b'-' };
            while self.peek() == Some(repeat) {
                m += 1;
                self.pos += 1;
            }
            m
        };
        if magnitude > 15 {
            return self.syntax("charge out of range");
        }
        Ok((sign * magnitude) as i8)
    }

    fn scan_number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_digit())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Derives implicit hydrogens, checks valences, perceives rings and
    /// assembles the final graph.
    fn finish(mut self) -> Result<MolGraph, SmilesError> {
        for i in 0..self.atoms.len() {
            let sum: u8 = self.adj[i]
                .iter()
                .map(|&(_, bi)| self.bonds[bi].order.units())
                .sum();
            let atom = &self.atoms[i];
            if atom.explicit_h.is_some() {
                continue; // bracket atoms carry exactly the written hydrogens
            }
            if atom.aromatic {
                // Bond sum plus one delocalization unit, filled up to the
                // lowest standard valence and clamped at zero.
                let lowest = atom.element.lowest_valence();
                self.atoms[i].implicit_h = lowest.saturating_sub(sum + 1);
                continue;
            }
            let valences = atom.element.permitted_valences();
            match valences.iter().find(|&&v| v >= sum) {
                Some(&v) => self.atoms[i].implicit_h = v - sum,
                None => {
                    return Err(SmilesError::Valence {
                        atom: i,
                        element: atom.element.symbol().into(),
                        bond_order_sum: sum,
                    })
                }
            }
        }

        let ring_info = rings::perceive(self.atoms.len(), &self.bonds, &self.adj);
        for (bond, on_ring) in self.bonds.iter_mut().zip(&ring_info.ring_bond) {
            bond.in_ring = *on_ring;
        }

        for (i, atom) in self.atoms.iter().enumerate() {
            if atom.aromatic && !self.adj[i].iter().any(|&(_, bi)| self.bonds[bi].in_ring) {
                return Err(SmilesError::Aromaticity {
                    atom: i,
                    reason: "aromatic atom outside any ring".into(),
                    pos: 0,
                });
            }
        }

        let components = component_lists(self.atoms.len(), &self.adj);
        Ok(MolGraph {
            atoms: self.atoms,
            bonds: self.bonds,
            adj: self.adj,
            rings: ring_info.rings,
            components,
        })
    }
}

fn component_lists(n_atoms: usize, adj: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; n_atoms];
    let mut lists: Vec<Vec<usize>> = Vec::new();
    for s in 0..n_atoms {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = lists.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        lists.push(members);
    }
    lists
}
