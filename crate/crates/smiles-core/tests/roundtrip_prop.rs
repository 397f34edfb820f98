//! Random valence-safe molecules, written out in two unrelated traversal
//! orders, must agree on their canonical form and parse back isomorphic.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smiles_core::{parse, testkit, write_canonical};

struct Build {
    symbols: Vec<&'static str>,
    max_val: Vec<u8>,
    used: Vec<u8>,
    edges: Vec<(usize, usize, u8)>,
}

const PICKS: &[(&str, u8, u32)] = &[
    ("C", 4, 60),
    ("N", 3, 12),
    ("O", 2, 12),
    ("S", 2, 4),
    ("P", 3, 2),
    ("F", 1, 4),
    ("Cl", 1, 4),
    ("Br", 1, 1),
    ("I", 1, 1),
];

fn pick_element(rng: &mut ChaCha8Rng) -> (&'static str, u8) {
    let total: u32 = PICKS.iter().map(|p| p.2).sum();
    let mut roll = rng.gen_range(0..total);
    for &(sym, val, w) in PICKS {
        if roll < w {
            return (sym, val);
        }
        roll -= w;
    }
    unreachable!()
}

fn random_molecule(seed: u64, size: usize) -> Build {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Build {
        symbols: Vec::new(),
        max_val: Vec::new(),
        used: Vec::new(),
        edges: Vec::new(),
    };
    let (sym, val) = pick_element(&mut rng);
    b.symbols.push(sym);
    b.max_val.push(val);
    b.used.push(0);

    for _ in 1..size {
        let open: Vec<usize> = (0..b.symbols.len())
            .filter(|&i| b.used[i] < b.max_val[i])
            .collect();
        let Some(&parent) = open.as_slice().choose(&mut rng) else {
            break;
        };
        let (sym, val) = pick_element(&mut rng);
        let spare = b.max_val[parent] - b.used[parent];
        let max_order = spare.min(val).min(3);
        let order = if max_order >= 2 && rng.gen_bool(0.2) {
            rng.gen_range(2..=max_order)
        } else {
            1
        };
        let child = b.symbols.len();
        b.symbols.push(sym);
        b.max_val.push(val);
        b.used.push(order);
        b.used[parent] += order;
        b.edges.push((parent, child, order));
    }

    for _ in 0..rng.gen_range(0..3usize) {
        let open: Vec<usize> = (0..b.symbols.len())
            .filter(|&i| b.used[i] < b.max_val[i])
            .collect();
        if open.len() < 2 {
            break;
        }
        let x = *open.choose(&mut rng).expect("non-empty");
        let y = *open.choose(&mut rng).expect("non-empty");
        if x == y
            || b.edges
                .iter()
                .any(|&(a, c, _)| (a, c) == (x, y) || (a, c) == (y, x))
        {
            continue;
        }
        b.used[x] += 1;
        b.used[y] += 1;
        b.edges.push((x, y, 1));
    }
    b
}

/// Writes the molecule starting from a random root with shuffled child
/// order. Non-tree edges become ring closures with sequential labels.
fn scribble(b: &Build, rng: &mut ChaCha8Rng) -> String {
    let n = b.symbols.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ei, &(x, y, _)) in b.edges.iter().enumerate() {
        adj[x].push((y, ei));
        adj[y].push((x, ei));
    }
    let root = rng.gen_range(0..n);
    let mut visited = vec![false; n];
    let mut ring_digit: Vec<Option<u16>> = vec![None; b.edges.len()];
    let mut next_digit = 1u16;
    let mut out = String::new();
    // Pre-pass marks non-tree edges so digits can open at first touch.
    let mut tree_edge = vec![false; b.edges.len()];
    {
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(u) = stack.pop() {
            for &(v, ei) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    tree_edge[ei] = true;
                    stack.push(v);
                }
            }
        }
        assert!(seen.iter().all(|&s| s), "generator made one component");
    }

    fn emit(
        u: usize,
        parent_edge: Option<usize>,
        b: &Build,
        adj: &[Vec<(usize, usize)>],
        tree_edge: &[bool],
        visited: &mut [bool],
        ring_digit: &mut [Option<u16>],
        next_digit: &mut u16,
        rng: &mut ChaCha8Rng,
        out: &mut String,
    ) {
        visited[u] = true;
        out.push_str(b.symbols[u]);
        let mut nbrs = adj[u].to_vec();
        nbrs.shuffle(rng);
        for &(_, ei) in &nbrs {
            if tree_edge[ei] || Some(ei) == parent_edge {
                continue;
            }
            let digit = match ring_digit[ei] {
                Some(d) => d,
                None => {
                    let d = *next_digit;
                    *next_digit += 1;
                    ring_digit[ei] = Some(d);
                    out.push_str(bond_sym(b.edges[ei].2));
                    d
                }
            };
            if digit < 10 {
                out.push((b'0' + digit as u8) as char);
            } else {
                out.push_str(&format!("%{digit:02}"));
            }
        }
        let children: Vec<(usize, usize)> = nbrs
            .iter()
            .copied()
            .filter(|&(v, ei)| tree_edge[ei] && !visited[v])
            .collect();
        let last = children.len().saturating_sub(1);
        for (k, (v, ei)) in children.into_iter().enumerate() {
            if k != last {
                out.push('(');
            }
            out.push_str(bond_sym(b.edges[ei].2));
            emit(
                v,
                Some(ei),
                b,
                adj,
                tree_edge,
                visited,
                ring_digit,
                next_digit,
                rng,
                out,
            );
            if k != last {
                out.push(')');
            }
        }
    }

    emit(
        root,
        None,
        b,
        &adj,
        &tree_edge,
        &mut visited,
        &mut ring_digit,
        &mut next_digit,
        rng,
        &mut out,
    );
    out
}

fn bond_sym(order: u8) -> &'static str {
    match order {
        2 => "=",
        3 => "#",
        _ => "",
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn canonical_form_is_traversal_invariant(seed in any::<u64>(), size in 2usize..28) {
        let b = random_molecule(seed, size);
        let mut rng1 = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed.rotate_left(17) ^ 0x6a09e667f3bcc908);
        let s1 = scribble(&b, &mut rng1);
        let s2 = scribble(&b, &mut rng2);

        let g1 = parse(&s1).unwrap_or_else(|e| panic!("{s1}: {e}"));
        let g2 = parse(&s2).unwrap_or_else(|e| panic!("{s2}: {e}"));

        prop_assert!(testkit::isomorphic(&g1, &g2), "{s1} vs {s2}");

        let c1 = write_canonical(&g1);
        let c2 = write_canonical(&g2);
        prop_assert_eq!(&c1, &c2, "{} vs {}", s1, s2);

        let g3 = parse(&c1).unwrap_or_else(|e| panic!("{c1}: {e}"));
        prop_assert!(testkit::isomorphic(&g1, &g3), "{} -> {}", s1, c1);
        prop_assert_eq!(write_canonical(&g3), c1.clone());

        let expected_rings = g1.bonds().len() + g1.components().len() - g1.atom_count();
        prop_assert_eq!(g1.ring_count(), expected_rings);
        prop_assert_eq!(g1.cyclomatic_number(), expected_rings);

        let h1: u32 = (0..g1.atom_count()).map(|i| u32::from(g1.atom(i).own_h())).sum();
        let h3: u32 = (0..g3.atom_count()).map(|i| u32::from(g3.atom(i).own_h())).sum();
        prop_assert_eq!(h1, h3, "hydrogen totals differ: {} vs {}", s1, c1);
    }
}
