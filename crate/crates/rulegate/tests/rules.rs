use descriptors::DescriptorSet;
use rulegate::{
    evaluate_rules, radar_tsv, report_tsv, select, RuleReport, RuleSet, SelectionCriteria,
    Strictness, RULE_NAMES, THRESHOLDS_TSV,
};

fn desc(
    mw: f64,
    logp: f64,
    hbd: u32,
    hba: u32,
    rotb: u32,
    tpsa: f64,
    mr: f64,
    atoms: u32,
    rings: u32,
) -> DescriptorSet {
    DescriptorSet {
        mw,
        logp,
        mr,
        tpsa,
        hbd,
        hba,
        rotb,
        aromatic_rings: rings,
        heavy_atoms: atoms.saturating_sub(atoms / 2),
        atom_count_total: atoms,
    }
}

fn bare_report(rules_passed: u32) -> RuleReport {
    RuleReport {
        checks: Vec::new(),
        lipinski: rules_passed > 0,
        veber: rules_passed > 1,
        ghose: rules_passed > 2,
        ro3: rules_passed > 3,
        oprea: rules_passed > 4,
        rules_passed,
    }
}

#[test]
fn builtin_thresholds_load() {
    let set = RuleSet::builtin();
    let names: Vec<&str> = set.rules.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, RULE_NAMES);
    let counts: Vec<usize> = set.rules.iter().map(|r| r.criteria.len()).collect();
    assert_eq!(counts, [5, 2, 4, 3, 6]);
    let required: Vec<u32> = set.rules.iter().map(|r| r.required).collect();
    assert_eq!(required, [4, 2, 4, 3, 5]);
}

#[test]
fn everything_violated_fails_all_five() {
    let r = evaluate_rules(&desc(600.0, 6.0, 6, 11, 11, 150.0, 135.0, 75, 5));
    assert!(!r.lipinski && !r.veber && !r.ghose && !r.ro3 && !r.oprea);
    assert_eq!(r.rules_passed, 0);
    assert!(r.checks.iter().all(|c| !c.pass));
}

#[test]
fn mid_range_molecule_fails_only_ro3() {
    let r = evaluate_rules(&desc(300.0, 2.0, 2, 4, 4, 80.0, 80.0, 40, 2));
    assert!(r.lipinski && r.veber && r.ghose && r.oprea);
    assert!(!r.ro3);
    assert_eq!(r.rules_passed, 4);
    let ro3_mw = r
        .checks
        .iter()
        .find(|c| c.rule == "ro3" && c.criterion == "mw")
        .unwrap();
    assert!(!ro3_mw.pass);
    assert!(r
        .checks
        .iter()
        .filter(|c| c.rule == "ro3" && c.criterion != "mw")
        .all(|c| c.pass));
}

#[test]
fn lipinski_tolerates_one_violation() {
    let r = evaluate_rules(&desc(510.0, 2.0, 2, 4, 4, 80.0, 80.0, 40, 2));
    assert!(r.lipinski);
    let mw = r
        .checks
        .iter()
        .find(|c| c.rule == "lipinski" && c.criterion == "mw")
        .unwrap();
    assert!(!mw.pass);

    // A second violation sinks it.
    let r = evaluate_rules(&desc(510.0, 5.5, 2, 4, 4, 80.0, 80.0, 40, 2));
    assert!(!r.lipinski);
}

#[test]
fn boundary_semantics() {
    // Inclusive upper bounds pass at the written value.
    let r = evaluate_rules(&desc(500.0, 5.0, 5, 10, 10, 140.0, 80.0, 40, 2));
    assert!(r.lipinski && r.veber);

    // Ro3 molecular weight is strict.
    let at = evaluate_rules(&desc(300.0, 2.0, 2, 4, 4, 80.0, 80.0, 40, 2));
    assert!(!at.ro3);
    let under = evaluate_rules(&desc(299.999, 2.0, 2, 4, 4, 80.0, 80.0, 40, 2));
    assert!(under.ro3);

    // Ghose range ends are inclusive both sides.
    assert!(evaluate_rules(&desc(160.0, -0.4, 1, 2, 2, 60.0, 40.0, 20, 1)).ghose);
    assert!(evaluate_rules(&desc(480.0, 5.6, 1, 2, 2, 60.0, 130.0, 70, 1)).ghose);
    assert!(!evaluate_rules(&desc(159.9, 2.0, 1, 2, 2, 60.0, 80.0, 40, 1)).ghose);
}

#[test]
fn selection_profiles() {
    let main = SelectionCriteria::profile("main").unwrap();
    let si = SelectionCriteria::profile("si").unwrap();
    assert!(SelectionCriteria::profile("other").is_none());
    assert!(matches!(main.strictness, Strictness::AtLeast));
    assert!(matches!(si.strictness, Strictness::MoreThan));

    assert!(select(&bare_report(4), 0.68, 6.18, &main));
    assert!(select(&bare_report(3), 0.68, 6.18, &main));
    assert!(!select(&bare_report(3), 0.55, 7.0, &main));
    assert!(!select(&bare_report(4), 0.68, 6.0, &main));
    assert!(!select(&bare_report(2), 0.9, 9.0, &main));

    assert!(select(&bare_report(4), 0.7, 5.6, &si));
    assert!(!select(&bare_report(3), 0.7, 5.6, &si));
    assert!(!select(&bare_report(4), 0.6, 5.6, &si));
    assert!(!select(&bare_report(4), 0.7, 5.5, &si));
}

#[test]
fn exports_are_tabular() {
    let r = evaluate_rules(&desc(300.0, 2.0, 2, 4, 4, 80.0, 80.0, 40, 2));
    let report = report_tsv(&r);
    assert!(report.starts_with("rule\tcriterion\tobserved\tmin\tmax\tinclusivity\tpass\n"));
    assert!(report.contains("!verdict\tlipinski\ttrue"));
    assert!(report.contains("!verdict\tro3\tfalse"));
    assert!(report.ends_with("!rules_passed\t4\n"));
    assert!(report.contains("ro3\tmw\t300\t-\t300\texclusive\tfalse"));

    let radar = radar_tsv(&r);
    assert!(radar.starts_with("axis\tvalue\trule\tmin\tmax\n"));
    assert!(radar.contains("mw\t300\tghose\t160\t480"));
    assert_eq!(radar.lines().count(), r.checks.len() + 1);
    // Axes grouped: every mw row precedes every logp row.
    let mw_last = radar
        .lines()
        .enumerate()
        .filter(|(_, l)| l.starts_with("mw\t"))
        .map(|(i, _)| i)
        .max()
        .unwrap();
    let logp_first = radar
        .lines()
        .enumerate()
        .filter(|(_, l)| l.starts_with("logp\t"))
        .map(|(i, _)| i)
        .min()
        .unwrap();
    assert!(mw_last < logp_first);
}

#[test]
fn threshold_parser_rejects_malformed_files() {
    assert!(RuleSet::parse("").is_err());

    let err = RuleSet::parse("!rule lipinski\n").unwrap_err();
    assert!(err.to_string().contains("line 1"), "{err}");

    let err = RuleSet::parse("lipinski\tmw\t-\t500\tinclusive\n").unwrap_err();
    assert!(err.to_string().contains("undeclared"), "{err}");

    let err = RuleSet::parse("!rule lipinski 1\nlipinski\tbogus\t-\t500\tinclusive\n").unwrap_err();
    assert!(err.to_string().contains("bogus"), "{err}");

    // Required above the criterion count.
    let err = RuleSet::parse(
        "!rule lipinski 2\nlipinski\tmw\t-\t500\tinclusive\n\
         !rule veber 1\nveber\ttpsa\t-\t140\tinclusive\n\
         !rule ghose 1\nghose\tmw\t160\t480\tinclusive\n\
         !rule ro3 1\nro3\tmw\t-\t300\texclusive\n\
         !rule oprea 1\noprea\tmw\t200\t450\tinclusive\n",
    )
    .unwrap_err();
    assert!(err.to_string().contains("lipinski"), "{err}");

    assert!(RuleSet::parse(THRESHOLDS_TSV).is_ok());
}
