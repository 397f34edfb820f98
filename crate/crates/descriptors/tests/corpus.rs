//! Agreement with a frozen table of hand-derived expected values.

use descriptors::compute_all;
use smiles_core::parse;

struct Row {
    smiles: String,
    mw: f64,
    logp: f64,
    mr: f64,
    tpsa: f64,
    hbd: u32,
    hba: u32,
    rotb: u32,
    aromatic_rings: u32,
    heavy_atoms: u32,
    atom_count_total: u32,
}

fn corpus() -> Vec<Row> {
    include_str!("data/descriptor_corpus.tsv")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            assert_eq!(f.len(), 11, "{l}");
            Row {
                smiles: f[0].into(),
                mw: f[1].parse().unwrap(),
                logp: f[2].parse().unwrap(),
                mr: f[3].parse().unwrap(),
                tpsa: f[4].parse().unwrap(),
                hbd: f[5].parse().unwrap(),
                hba: f[6].parse().unwrap(),
                rotb: f[7].parse().unwrap(),
                aromatic_rings: f[8].parse().unwrap(),
                heavy_atoms: f[9].parse().unwrap(),
                atom_count_total: f[10].parse().unwrap(),
            }
        })
        .collect()
}

#[test]
fn corpus_agreement() {
    let rows = corpus();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let g = parse(&row.smiles).unwrap();
        let computed = compute_all(&g);
        let d = &computed.descriptors;
        let s = &row.smiles;
        assert!((d.mw - row.mw).abs() <= 0.01, "{s} mw {} vs {}", d.mw, row.mw);
        assert!(
            (d.logp - row.logp).abs() <= 0.5,
            "{s} logp {} vs {}",
            d.logp,
            row.logp
        );
        assert!((d.mr - row.mr).abs() <= 1.0, "{s} mr {} vs {}", d.mr, row.mr);
        assert!(
            (d.tpsa - row.tpsa).abs() <= 0.01,
            "{s} tpsa {} vs {}",
            d.tpsa,
            row.tpsa
        );
        assert_eq!(d.hbd, row.hbd, "{s} hbd");
        assert_eq!(d.hba, row.hba, "{s} hba");
        assert_eq!(d.rotb, row.rotb, "{s} rotb");
        assert_eq!(d.aromatic_rings, row.aromatic_rings, "{s} aromatic rings");
        assert_eq!(d.heavy_atoms, row.heavy_atoms, "{s} heavy atoms");
        assert_eq!(d.atom_count_total, row.atom_count_total, "{s} total atoms");
        assert!(computed.warnings.is_empty(), "{s}: {:?}", computed.warnings);
    }
}

#[test]
fn corpus_contribution_sums_are_tight() {
    // The hand derivation and the implementation share the contribution
    // table, so agreement should be far inside the published tolerances.
    for row in corpus() {
        let g = parse(&row.smiles).unwrap();
        let d = compute_all(&g).descriptors;
        assert!(
            (d.logp - row.logp).abs() <= 1e-9,
            "{} logp {} vs {}",
            row.smiles,
            d.logp,
            row.logp
        );
        assert!(
            (d.mr - row.mr).abs() <= 1e-9,
            "{} mr {} vs {}",
            row.smiles,
            d.mr,
            row.mr
        );
    }
}
