//! Ring perception. Bridges are found with a lowlink DFS; the SSSR is a
//! minimum cycle basis chosen from Horton candidate cycles by Gaussian
//! elimination over GF(2) bond-incidence vectors.
//!
//! Tie-breaking is deterministic: candidates are ordered by length, then by
//! their bond bitset, so repeated runs always pick the same basis.

use crate::graph::Bond;

pub(crate) struct RingInfo {
    pub rings: Vec<Vec<usize>>,
    pub ring_bond: Vec<bool>,
}

pub(crate) fn perceive(n_atoms: usize, bonds: &[Bond], adj: &[Vec<(usize, usize)>]) -> RingInfo {
    let ring_bond = non_bridge_bonds(n_atoms, bonds, adj);
    let n_components = count_components(n_atoms, adj);
    let cyclomatic = bonds.len() + n_components - n_atoms;
    if cyclomatic == 0 {
        return RingInfo {
            rings: Vec::new(),
            ring_bond,
        };
    }

    let mut candidates = horton_candidates(n_atoms, bonds, adj);
    candidates.sort_by(|a, b| {
        a.atoms
            .len()
            .cmp(&b.atoms.len())
            .then_with(|| a.bits.cmp(&b.bits))
    });
    candidates.dedup_by(|a, b| a.bits == b.bits);

    // GF(2) elimination: a candidate joins the basis only while independent
    // of the cycles already chosen.
    let words = bonds.len().div_ceil(64);
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot bit, reduced row)
    let mut rings = Vec::new();
    for cand in candidates {
        if rings.len() == cyclomatic {
            break;
        }
        let mut row = to_words(&cand.bits, words);
        for (pivot, brow) in &basis {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (r, b) in row.iter_mut().zip(brow) {
                    *r ^= b;
                }
            }
        }
        if let Some(pivot) = first_set_bit(&row) {
            basis.push((pivot, row));
            rings.push(cand.atoms);
        }
    }
    debug_assert_eq!(rings.len(), cyclomatic);
    RingInfo { rings, ring_bond }
}

struct Candidate {
    /// Bond indices on the cycle, sorted.
    bits: Vec<usize>,
    /// Atoms in cycle order.
    atoms: Vec<usize>,
}

/// Horton's candidate set: for every vertex v and edge (x, y), the cycle
/// formed by shortest paths v..x and v..y plus the edge, kept when the two
/// paths share only v.
fn horton_candidates(n_atoms: usize, bonds: &[Bond], adj: &[Vec<(usize, usize)>]) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut dist = vec![usize::MAX; n_atoms];
    let mut parent: Vec<Option<usize>> = vec![None; n_atoms];
    for v in 0..n_atoms {
        bfs(v, adj, &mut dist, &mut parent);
        for bond in bonds {
            let (x, y) = (bond.a, bond.b);
            if dist[x] == usize::MAX || dist[y] == usize::MAX {
                continue;
            }
            let px = path_to_root(x, &parent); // x .. v
            let py = path_to_root(y, &parent); // y .. v
            if !share_only_root(&px, &py, v) {
                continue;
            }
            // Cycle order: v..x, then y..(atom before v). The x-y edge and
            // the final step back to v are both picked up by the bond walk.
            let mut atoms: Vec<usize> = px.iter().rev().copied().collect();
            atoms.extend(py.iter().copied().take_while(|&a| a != v));
            if atoms.len() < 3 {
                continue;
            }
            if let Some(bits) = cycle_bonds(&atoms, adj) {
                out.push(Candidate { bits, atoms });
            }
        }
    }
    out
}

fn bfs(start: usize, adj: &[Vec<(usize, usize)>], dist: &mut [usize], parent: &mut [Option<usize>]) {
    dist.fill(usize::MAX);
    parent.fill(None);
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
}

/// Atom path from `x` back to the BFS root, inclusive of both.
fn path_to_root(x: usize, parent: &[Option<usize>]) -> Vec<usize> {
    let mut path = vec![x];
    let mut cur = x;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path
}

fn share_only_root(px: &[usize], py: &[usize], root: usize) -> bool {
    let set: std::collections::HashSet<usize> = px.iter().copied().collect();
    py.iter().all(|&a| a == root || !set.contains(&a))
}

/// Bond indices for consecutive atoms plus the closing bond, or None when
/// some pair is not actually bonded.
fn cycle_bonds(atoms: &[usize], adj: &[Vec<(usize, usize)>]) -> Option<Vec<usize>> {
    let mut bits = Vec::with_capacity(atoms.len());
    for i in 0..atoms.len() {
        let a = atoms[i];
        let b = atoms[(i + 1) % atoms.len()];
        let bi = adj[a].iter().find(|&&(n, _)| n == b).map(|&(_, bi)| bi)?;
        bits.push(bi);
    }
    bits.sort_unstable();
    Some(bits)
}

fn count_components(n_atoms: usize, adj: &[Vec<(usize, usize)>]) -> usize {
    let mut seen = vec![false; n_atoms];
    let mut count = 0;
    for s in 0..n_atoms {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Marks every bond that lies on some cycle, i.e. is not a bridge.
fn non_bridge_bonds(n_atoms: usize, bonds: &[Bond], adj: &[Vec<(usize, usize)>]) -> Vec<bool> {
    let mut ring = vec![false; bonds.len()];
    let mut disc = vec![usize::MAX; n_atoms];
    let mut low = vec![0usize; n_atoms];
    let mut timer = 0;
    // Iterative DFS so long chains cannot overflow the call stack.
    // Frame: (atom, bond used to enter it, next adjacency slot).
    for start in 0..n_atoms {
        if disc[start] != usize::MAX {
            continue;
        }
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(start, None, 0)];
        while let Some(top) = stack.last_mut() {
            let (u, via) = (top.0, top.1);
            if top.2 < adj[u].len() {
                let (w, bi) = adj[u][top.2];
                top.2 += 1;
                if Some(bi) == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, Some(bi), 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                    ring[bi] = true; // back edge always lies on a cycle
                }
            } else {
                let (u, via_u, _) = stack.pop().expect("frame");
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if let Some(bi) = via_u {
                        if low[u] <= disc[p] {
                            ring[bi] = true;
                        }
                    }
                }
            }
        }
    }
    ring
}

fn to_words(bits: &[usize], words: usize) -> Vec<u64> {
    let mut row = vec![0u64; words];
    for &b in bits {
        row[b / 64] |= 1 << (b % 64);
    }
    row
}

fn first_set_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
