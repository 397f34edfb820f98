use std::collections::HashMap;

use descriptors::DescriptorSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rulegate::{evaluate_rules, RULE_NAMES};

// Brute-force evaluator with its own parse of the shared threshold file. A
// transcription slip in either route shows up as a verdict mismatch.
const SHARED: &str = include_str!("../data/rule_thresholds.tsv");

struct OracleRule {
    name: String,
    required: usize,
    rows: Vec<(String, Option<f64>, Option<f64>, bool)>,
}

fn oracle_rules() -> Vec<OracleRule> {
    let mut rules: Vec<OracleRule> = Vec::new();
    for line in SHARED.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("!rule") {
            let mut it = rest.split_whitespace();
            rules.push(OracleRule {
                name: it.next().unwrap().to_string(),
                required: it.next().unwrap().parse().unwrap(),
                rows: Vec::new(),
            });
        } else {
            let f: Vec<&str> = line.split('\t').collect();
            let num = |s: &str| (s != "-").then(|| s.parse::<f64>().unwrap());
            let rule = rules.iter_mut().find(|r| r.name == f[0]).unwrap();
            rule.rows
                .push((f[1].to_string(), num(f[2]), num(f[3]), f[4] == "inclusive"));
        }
    }
    assert_eq!(rules.len(), 5);
    rules
}

fn oracle_verdict(desc: &DescriptorSet, rule: &OracleRule) -> bool {
    let mut hits = 0;
    for (key, min, max, inclusive) in &rule.rows {
        let v = desc.get(key).unwrap();
        let lo = min.map_or(true, |m| if *inclusive { v >= m } else { v > m });
        let hi = max.map_or(true, |m| if *inclusive { v <= m } else { v < m });
        if lo && hi {
            hits += 1;
        }
    }
    hits >= rule.required
}

fn boundary_pool(rules: &[OracleRule]) -> HashMap<String, Vec<f64>> {
    let mut pool: HashMap<String, Vec<f64>> = HashMap::new();
    for rule in rules {
        for (key, min, max, _) in &rule.rows {
            let entry = pool.entry(key.clone()).or_default();
            entry.extend(min.iter().chain(max.iter()));
        }
    }
    pool
}

fn random_desc(rng: &mut ChaCha8Rng, pool: &HashMap<String, Vec<f64>>) -> DescriptorSet {
    let mut float = |key: &str, lo: f64, hi: f64| -> f64 {
        let bounds = &pool[key];
        if rng.gen_bool(0.35) {
            bounds[rng.gen_range(0..bounds.len())]
        } else {
            rng.gen_range(lo..hi)
        }
    };
    let mw = float("mw", 100.0, 700.0);
    let logp = float("logp", -3.0, 7.0);
    let tpsa = float("tpsa", 10.0, 220.0);
    let mr = float("mr", 20.0, 160.0);
    let mut int = |key: &str, lo: u32, hi: u32| -> u32 {
        let bounds = &pool[key];
        if rng.gen_bool(0.35) {
            bounds[rng.gen_range(0..bounds.len())] as u32
        } else {
            rng.gen_range(lo..=hi)
        }
    };
    let hbd = int("hbd", 0, 8);
    let hba = int("hba", 0, 14);
    let rotb = int("rotb", 0, 14);
    let rings = int("aromatic_rings", 0, 6);
    let atoms = int("atom_count_total", 10, 90);
    DescriptorSet {
        mw,
        logp,
        mr,
        tpsa,
        hbd,
        hba,
        rotb,
        aromatic_rings: rings,
        heavy_atoms: atoms / 2,
        atom_count_total: atoms,
    }
}

#[test]
fn verdicts_match_brute_force_on_randomized_sets() {
    let rules = oracle_rules();
    let pool = boundary_pool(&rules);
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut checked = 0;
    for _ in 0..1000 {
        let desc = random_desc(&mut rng, &pool);
        let report = evaluate_rules(&desc);
        let mut expected_passed = 0;
        for rule in &rules {
            let expect = oracle_verdict(&desc, rule);
            expected_passed += u32::from(expect);
            assert_eq!(
                report.verdict(&rule.name),
                Some(expect),
                "{} on {desc:?}",
                rule.name
            );
        }
        assert_eq!(report.rules_passed, expected_passed, "{desc:?}");
        checked += 1;
    }
    assert_eq!(checked, 1000);
}

// A point inside every rule's window for its key.
const COMPLIANT: [(&str, f64); 9] = [
    ("mw", 250.0),
    ("logp", 1.0),
    ("hbd", 1.0),
    ("hba", 4.0),
    ("rotb", 4.0),
    ("tpsa", 80.0),
    ("mr", 80.0),
    ("aromatic_rings", 2.0),
    ("atom_count_total", 40.0),
];

fn nudge(desc: &DescriptorSet, key: &str, lambda: f64) -> DescriptorSet {
    let target = COMPLIANT.iter().find(|(k, _)| *k == key).unwrap().1;
    let mut d = desc.clone();
    let lerp = |old: f64| old + lambda * (target - old);
    match key {
        "mw" => d.mw = lerp(d.mw),
        "logp" => d.logp = lerp(d.logp),
        "tpsa" => d.tpsa = lerp(d.tpsa),
        "mr" => d.mr = lerp(d.mr),
        "hbd" => d.hbd = lerp(f64::from(d.hbd)).round() as u32,
        "hba" => d.hba = lerp(f64::from(d.hba)).round() as u32,
        "rotb" => d.rotb = lerp(f64::from(d.rotb)).round() as u32,
        "aromatic_rings" => d.aromatic_rings = lerp(f64::from(d.aromatic_rings)).round() as u32,
        "atom_count_total" => {
            d.atom_count_total = lerp(f64::from(d.atom_count_total)).round() as u32
        }
        _ => unreachable!(),
    }
    d
}

#[test]
fn moving_toward_compliance_never_flips_a_pass_to_fail() {
    let rules = oracle_rules();
    let pool = boundary_pool(&rules);
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for _ in 0..1000 {
        let desc = random_desc(&mut rng, &pool);
        let before = evaluate_rules(&desc);
        let key = COMPLIANT[rng.gen_range(0..COMPLIANT.len())].0;
        let lambda = rng.gen_range(0.0..=1.0);
        let after = evaluate_rules(&nudge(&desc, key, lambda));
        for name in RULE_NAMES {
            let b = before.verdict(name).unwrap();
            let a = after.verdict(name).unwrap();
            assert!(
                !(b && !a),
                "{name} flipped pass->fail nudging {key} by {lambda} on {desc:?}"
            );
        }
        assert!(after.rules_passed >= before.rules_passed);
    }
}
