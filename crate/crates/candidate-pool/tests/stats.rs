use std::collections::BTreeMap;

use candidate_pool::{ledger_stats, stats_tsv, Pool, Source, DEFAULT_EPSILON};
use pharmacokinetics::{AdmetProfile, AdmetSchema, AdmetValue, Category, WeaknessFlag};
use qed::QedScore;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rulegate::evaluate_rules;

fn fake_qed(value: f64) -> QedScore {
    QedScore {
        value,
        desirabilities: [0.5; 8],
        notes: Vec::new(),
    }
}

fn seed_round(pool: &mut Pool, round: u32, count: usize, stem: &str) -> Vec<String> {
    let seeds: Vec<String> = (1..=count).map(|n| format!("{stem}{}", "C".repeat(n))).collect();
    pool.ingest(&seeds, Source::DeNovo, round).unwrap().added
}

#[test]
fn qed_threshold_counts() {
    let mut pool = Pool::new();
    let rounds = [(0u32, 100usize, 34usize), (1, 99, 49), (2, 95, 55)];
    for &(round, size, above) in &rounds {
        let stem = ["", "O", "N"][round as usize];
        let ids = seed_round(&mut pool, round, size, stem);
        assert_eq!(ids.len(), size);
        for (i, id) in ids.iter().enumerate() {
            // Strictly-over, exactly-at, and under the 0.6 bar.
            let value = if i < above {
                0.7
            } else if i == above {
                0.6
            } else {
                0.5
            };
            pool.get_mut(id).unwrap().qed = Some(fake_qed(value));
        }
    }
    let stats = ledger_stats(
        &pool,
        &[0.6],
        &BTreeMap::new(),
        AdmetSchema::builtin(),
    );
    assert_eq!(stats.rounds.len(), 3);
    let counts: Vec<usize> = stats
        .rounds
        .iter()
        .map(|r| r.qed_above[0].count)
        .collect();
    assert_eq!(counts, vec![34, 49, 55]);
    assert_eq!(stats.total_records, 294);
    assert_eq!(stats.total_valid, 294);

    let tsv = stats_tsv(&stats);
    assert!(tsv.contains("0\t0.6\t34\n"), "{tsv}");
    assert!(tsv.contains("1\t0.6\t49\n"), "{tsv}");
    assert!(tsv.contains("2\t0.6\t55\n"), "{tsv}");
}

#[test]
fn refinement_fractions() {
    let schema = AdmetSchema::builtin();
    let mut pool = Pool::new();
    let parents = seed_round(&mut pool, 0, 100, "");
    for id in parents.iter().take(57) {
        pool.get_mut(id).unwrap().weakness = Some(WeaknessFlag {
            property: "caco2_permeability".to_string(),
            severity: 0.5,
            rationale: String::new(),
        });
    }
    for (i, pid) in parents.iter().take(57).enumerate() {
        let before: AdmetProfile = [(
            "caco2_permeability".to_string(),
            AdmetValue::Number(-5.65),
        )]
        .into();
        let shift = if i < 25 {
            0.4
        } else if i < 40 {
            -0.4
        } else {
            0.0
        };
        let after: AdmetProfile = [(
            "caco2_permeability".to_string(),
            AdmetValue::Number(-5.65 + shift),
        )]
        .into();
        pool.record_refinement(pid, "CCSC", &before, &after, DEFAULT_EPSILON, schema)
            .unwrap();
    }

    let stats = ledger_stats(&pool, &[], &BTreeMap::new(), schema);
    assert_eq!(stats.rounds[0].flagged, 57);
    assert!(stats.rounds[0].families.is_empty());

    let fam = &stats.rounds[1].families;
    assert_eq!(fam.len(), 1);
    assert_eq!(fam[0].family, Category::Absorption);
    assert_eq!(
        (fam[0].improved, fam[0].declined, fam[0].unchanged),
        (25, 15, 17)
    );
    assert_eq!(fam[0].improved_frac, 0.439);
    assert_eq!(fam[0].declined_frac, 0.263);
    assert_eq!(fam[0].unchanged_frac, 0.298);
    let sum = fam[0].improved_frac + fam[0].declined_frac + fam[0].unchanged_frac;
    assert!((sum - 1.0).abs() <= 0.001 + 1e-12);

    let tsv = stats_tsv(&stats);
    assert!(
        tsv.contains("1\tAbsorption\t25\t15\t17\t0.439\t0.263\t0.298\n"),
        "{tsv}"
    );
}

#[test]
fn fraction_closure_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let schema = AdmetSchema::builtin();
    for _ in 0..200 {
        let mut pool = Pool::new();
        let parents = seed_round(&mut pool, 0, 1, "");
        let n_imp = rng.gen_range(0..40);
        let n_dec = rng.gen_range(0..40);
        let n_unc = rng.gen_range(0..40);
        if n_imp + n_dec + n_unc == 0 {
            continue;
        }
        for i in 0..(n_imp + n_dec + n_unc) {
            let shift = if i < n_imp {
                0.3
            } else if i < n_imp + n_dec {
                -0.3
            } else {
                0.0
            };
            let before: AdmetProfile =
                [("hia".to_string(), AdmetValue::Number(0.2))].into();
            let after: AdmetProfile =
                [("hia".to_string(), AdmetValue::Number(0.2 + shift))].into();
            pool.record_refinement(&parents[0], "CCN", &before, &after, DEFAULT_EPSILON, schema)
                .unwrap();
        }
        let stats = ledger_stats(&pool, &[], &BTreeMap::new(), schema);
        for fam in &stats.rounds[1].families {
            let sum = fam.improved_frac + fam.declined_frac + fam.unchanged_frac;
            assert!(
                (sum - 1.0).abs() <= 0.001 + 1e-12,
                "fractions {} {} {} sum {}",
                fam.improved_frac,
                fam.declined_frac,
                fam.unchanged_frac,
                sum
            );
        }
    }
}

#[test]
fn rules_passed_histogram() {
    let mut pool = Pool::new();
    let ids = seed_round(&mut pool, 0, 3, "");
    let mut reports = BTreeMap::new();

    let all_fail = descriptors::DescriptorSet {
        mw: 600.0,
        logp: 6.0,
        mr: 135.0,
        tpsa: 150.0,
        hbd: 6,
        hba: 11,
        rotb: 11,
        aromatic_rings: 5,
        heavy_atoms: 70,
        atom_count_total: 75,
    };
    let mid = descriptors::DescriptorSet {
        mw: 300.0,
        logp: 2.0,
        mr: 80.0,
        tpsa: 80.0,
        hbd: 2,
        hba: 4,
        rotb: 4,
        aromatic_rings: 2,
        heavy_atoms: 30,
        atom_count_total: 40,
    };
    let tiny = descriptors::DescriptorSet {
        mw: 250.0,
        logp: 1.0,
        mr: 80.0,
        tpsa: 80.0,
        hbd: 1,
        hba: 4,
        rotb: 4,
        aromatic_rings: 2,
        heavy_atoms: 30,
        atom_count_total: 40,
    };
    reports.insert(ids[0].clone(), evaluate_rules(&all_fail));
    reports.insert(ids[1].clone(), evaluate_rules(&mid));
    reports.insert(ids[2].clone(), evaluate_rules(&tiny));

    let stats = ledger_stats(&pool, &[], &reports, AdmetSchema::builtin());
    let hist = &stats.rounds[0].rules_passed;
    assert_eq!(hist.len(), 6);
    assert_eq!(hist[0], 1);
    assert_eq!(hist[4], 1);
    assert_eq!(hist[5], 1);
    assert_eq!(hist.iter().sum::<usize>(), 3);
}

#[test]
fn empty_pool_all_zero() {
    let pool = Pool::new();
    let stats = ledger_stats(&pool, &[0.6], &BTreeMap::new(), AdmetSchema::builtin());
    assert_eq!(stats.total_records, 0);
    assert_eq!(stats.total_valid, 0);
    assert_eq!(stats.total_invalid, 0);
    assert!(stats.rounds.is_empty());
    let tsv = stats_tsv(&stats);
    assert!(tsv.contains("# totals\nrecords\tvalid\tinvalid\n0\t0\t0\n"), "{tsv}");
}

#[test]
fn quarantined_counted_in_both_views() {
    let mut pool = Pool::new();
    seed_round(&mut pool, 0, 5, "");
    pool.ingest(["C1CC", "C("], Source::DeNovo, 0).unwrap();
    let stats = ledger_stats(&pool, &[], &BTreeMap::new(), AdmetSchema::builtin());
    assert_eq!(stats.rounds[0].total, 7);
    assert_eq!(stats.rounds[0].valid, 5);
    assert_eq!(stats.rounds[0].invalid, 2);
    assert_eq!(stats.total_records, 7);
    assert_eq!(stats.total_valid, 5);
    assert_eq!(stats.total_invalid, 2);
}
