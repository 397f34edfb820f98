//! Canonical ranking and serialization. Dedup-grade: refinement with a
//! deterministic tie-break, not a registry-grade automorphism search.
//! Stereo markers are dropped on output.

use std::collections::HashMap;

use crate::graph::{BondOrder, MolGraph};

/// Dense ranks, one per atom, all distinct after tie-breaking.
pub fn canonical_ranks(g: &MolGraph) -> Vec<u32> {
    let n = g.atom_count();
    if n == 0 {
        return Vec::new();
    }
    let initial: Vec<_> = (0..n)
        .map(|i| {
            let a = g.atom(i);
            (
                a.element.atomic_number(),
                a.aromatic as u8,
                i16::from(a.charge) + 128,
                g.degree(i),
                a.own_h(),
                a.isotope.unwrap_or(0),
                g.atom_in_ring(i) as u8,
            )
        })
        .collect();
    let mut ranks = dense_ranks(&initial);

    loop {
        ranks = refine(g, ranks);
        let distinct = count_distinct(&ranks);
        if distinct == n {
            return ranks;
        }
        // Bump the lowest-ranked tied class: its smallest-index member gets
        // a rank of its own, then refinement runs again.
        let mut class_of: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, &r) in ranks.iter().enumerate() {
            class_of.entry(r).or_default().push(i);
        }
        let tied_rank = class_of
            .iter()
            .filter(|(_, members)| members.len() > 1)
            .map(|(&r, _)| r)
            .min()
            .expect("distinct < n implies a tied class");
        let chosen = class_of[&tied_rank][0];
        let keys: Vec<(u32, u8)> = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, (i != chosen || r != tied_rank) as u8))
            .collect();
        ranks = dense_ranks(&keys);
    }
}

fn refine(g: &MolGraph, mut ranks: Vec<u32>) -> Vec<u32> {
    loop {
        let keys: Vec<(u32, Vec<(u8, u32)>)> = (0..g.atom_count())
            .map(|i| {
                let mut nb: Vec<(u8, u32)> = g
                    .neighbors(i)
                    .iter()
                    .map(|&(j, bi)| (bond_code(g.bond(bi).order), ranks[j]))
                    .collect();
                nb.sort_unstable();
                (ranks[i], nb)
            })
            .collect();
        let new = dense_ranks(&keys);
        if new == ranks {
            return ranks;
        }
        ranks = new;
    }
}

fn bond_code(order: BondOrder) -> u8 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

fn dense_ranks<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0u32; keys.len()];
    let mut rank = 0u32;
    for w in 0..order.len() {
        if w > 0 && keys[order[w]] != keys[order[w - 1]] {
            rank += 1;
        }
        ranks[order[w]] = rank;
    }
    ranks
}

fn count_distinct(ranks: &[u32]) -> usize {
    let mut seen = ranks.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Canonical SMILES. Components are serialized independently, sorted and
/// joined with '.'.
pub fn write_canonical(g: &MolGraph) -> String {
    let ranks = canonical_ranks(g);
    let mut parts: Vec<String> = g
        .components()
        .iter()
        .map(|comp| write_component(g, &ranks, comp))
        .collect();
    parts.sort();
    parts.join(".")
}

struct Emitter<'a> {
    g: &'a MolGraph,
    ranks: &'a [u32],
    visit_idx: HashMap<usize, usize>,
    tree_children: HashMap<usize, Vec<(usize, usize)>>,
    ring_bonds_at: HashMap<usize, Vec<usize>>,
    counter: usize,
    open_digits: HashMap<usize, u16>,
    digit_used: [bool; 100],
    out: String,
}

fn write_component(g: &MolGraph, ranks: &[u32], comp: &[usize]) -> String {
    let start = comp
        .iter()
        .copied()
        .min_by_key(|&i| ranks[i])
        .expect("component is non-empty");
    let mut em = Emitter {
        g,
        ranks,
        visit_idx: HashMap::new(),
        tree_children: HashMap::new(),
        ring_bonds_at: HashMap::new(),
        counter: 0,
        open_digits: HashMap::new(),
        digit_used: [false; 100],
        out: String::new(),
    };
    em.classify(start, None);
    for list in em.ring_bonds_at.values_mut() {
        list.sort_by_key(|&bi| {
            let b = g.bond(bi);
            (em.visit_idx[&b.a]).min(em.visit_idx[&b.b])
        });
    }
    em.emit(start);
    em.out
}

impl Emitter<'_> {
    fn classify(&mut self, u: usize, parent_bond: Option<usize>) {
        self.visit_idx.insert(u, self.counter);
        self.counter += 1;
        let mut nbrs: Vec<(usize, usize)> = self.g.neighbors(u).to_vec();
        nbrs.sort_by_key(|&(v, _)| self.ranks[v]);
        for (v, bi) in nbrs {
            if Some(bi) == parent_bond {
                continue;
            }
            if !self.visit_idx.contains_key(&v) {
                self.tree_children.entry(u).or_default().push((v, bi));
                self.classify(v, Some(bi));
            } else if self.visit_idx[&v] < self.visit_idx[&u]
                && !self.ring_bonds_at.get(&u).is_some_and(|l| l.contains(&bi))
            {
                self.ring_bonds_at.entry(u).or_default().push(bi);
                self.ring_bonds_at.entry(v).or_default().push(bi);
            }
        }
    }

    fn emit(&mut self, u: usize) {
        self.push_atom_token(u);
        if let Some(list) = self.ring_bonds_at.get(&u).cloned() {
            for bi in list {
                match self.open_digits.remove(&bi) {
                    Some(d) => {
                        self.digit_used[d as usize] = false;
                        self.push_digit(d);
                    }
                    None => {
                        let d = (1..100)
                            .find(|&d| !self.digit_used[d as usize])
                            .expect("fewer than 100 simultaneously open ring bonds");
                        self.digit_used[d as usize] = true;
                        self.open_digits.insert(bi, d);
                        self.out.push_str(self.bond_symbol(bi));
                        self.push_digit(d);
                    }
                }
            }
        }
        let children = self.tree_children.get(&u).cloned().unwrap_or_default();
        let last = children.len().saturating_sub(1);
        for (k, (v, bi)) in children.into_iter().enumerate() {
            if k != last {
                self.out.push('(');
            }
            self.out.push_str(self.bond_symbol(bi));
            self.emit(v);
            if k != last {
                self.out.push(')');
            }
        }
    }

    fn bond_symbol(&self, bi: usize) -> &'static str {
        let b = self.g.bond(bi);
        match b.order {
            BondOrder::Double => "=",
            BondOrder::Triple => "#",
            BondOrder::Aromatic => "",
            BondOrder::Single => {
                if self.g.atom(b.a).aromatic && self.g.atom(b.b).aromatic {
                    "-"
                } else {
                    ""
                }
            }
        }
    }

    fn push_digit(&mut self, d: u16) {
        if d < 10 {
            self.out.push((b'0' + d as u8) as char);
        } else {
            self.out.push_str(&format!("%{d:02}"));
        }
    }

    fn push_atom_token(&mut self, u: usize) {
        let a = self.g.atom(u);
        let symbol = a.element.symbol();
        let needs_bracket = a.charge != 0
            || a.isotope.is_some()
            || !a.element.in_organic_subset()
            || bare_rederived_h(self.g, u) != Some(a.own_h());
        if !needs_bracket {
            if a.aromatic {
                self.out.push_str(&symbol.to_ascii_lowercase());
            } else {
                self.out.push_str(symbol);
            }
            return;
        }
        self.out.push('[');
        if let Some(iso) = a.isotope {
            self.out.push_str(&iso.to_string());
        }
        if a.aromatic {
            self.out.push_str(&symbol.to_ascii_lowercase());
        } else {
            self.out.push_str(symbol);
        }
        match a.own_h() {
            0 => {}
            1 => self.out.push('H'),
            h => self.out.push_str(&format!("H{h}")),
        }
        match a.charge {
            0 => {}
            1 => self.out.push('+'),
            -1 => self.out.push('-'),
            c if c > 0 => self.out.push_str(&format!("+{c}")),
            c => self.out.push_str(&c.to_string()),
        }
        self.out.push(']');
    }
}

/// Hydrogen count the scanner would rederive for this atom written bare.
/// None when no permitted valence covers the bond order sum.
fn bare_rederived_h(g: &MolGraph, u: usize) -> Option<u8> {
    let a = g.atom(u);
    let sum = g.bond_order_sum(u);
    if a.aromatic {
        return Some(a.element.lowest_valence().saturating_sub(sum + 1));
    }
    a.element
        .permitted_valences()
        .iter()
        .find(|&&v| v >= sum)
        .map(|&v| v - sum)
}
