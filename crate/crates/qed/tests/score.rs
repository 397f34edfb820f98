use descriptors::DescriptorSet;
use qed::{
    qed, score, weighted_geometric_mean, AlertEngine, DesirabilityParams, NoAlertEngine,
    ParameterError, Property, PROPERTIES,
};
use smiles_core::parse;

fn desc(mw: f64, logp: f64, hba: u32, hbd: u32, tpsa: f64, rotb: u32, arom: u32) -> DescriptorSet {
    DescriptorSet {
        mw,
        logp,
        mr: 0.0,
        tpsa,
        hbd,
        hba,
        rotb,
        aromatic_rings: arom,
        heavy_atoms: 0,
        atom_count_total: 0,
    }
}

#[test]
fn builtin_parameter_set() {
    let p = DesirabilityParams::builtin();
    assert_eq!(p.set, "QEDw,mo");
    assert_eq!(p.version, 1);
    assert_eq!(p.weights[Property::Mw.index()], 0.66);
    assert_eq!(p.weights[Property::Alerts.index()], 0.95);
    assert_eq!(p.ads[Property::Hbd.index()].b, 1010.051101);
}

#[test]
fn geometric_mean_identities() {
    let v = weighted_geometric_mean(&[1.0; 5], &[0.3, 1.0, 2.0, 0.1, 7.0]).unwrap();
    assert_eq!(v, 1.0);

    let d = 0.37;
    let v = weighted_geometric_mean(&[d; 4], &[0.66, 0.05, 0.95, 0.48]).unwrap();
    assert!((v - d).abs() < 1e-12);

    let v = weighted_geometric_mean(&[0.25, 1.0], &[1.0, 1.0]).unwrap();
    assert!((v - 0.5).abs() < 1e-12);
}

#[test]
fn geometric_mean_rejects_bad_input() {
    assert!(matches!(
        weighted_geometric_mean(&[0.5], &[1.0, 1.0]),
        Err(ParameterError::Input(_))
    ));
    assert!(matches!(
        weighted_geometric_mean(&[0.0, 0.5], &[1.0, 1.0]),
        Err(ParameterError::Input(_))
    ));
    assert!(matches!(
        weighted_geometric_mean(&[0.5, 0.5], &[0.0, 0.0]),
        Err(ParameterError::ZeroWeights)
    ));
}

#[test]
fn drug_like_scores_beat_extreme_ones() {
    let p = DesirabilityParams::builtin();
    // Roughly sunitinib-shaped values against an 800 Da greaseball.
    let good = qed(&desc(398.0, 2.9, 4, 2, 77.0, 5, 2), 0, p).unwrap();
    let bad = qed(&desc(800.0, 8.5, 14, 8, 250.0, 22, 6), 0, p).unwrap();
    assert!(good.value > 0.5, "got {}", good.value);
    assert!(bad.value < 0.2, "got {}", bad.value);
    assert!(good.value > bad.value);
    for d in good.desirabilities {
        assert!(d > 0.0 && d <= 1.0);
    }
}

#[test]
fn alerts_lower_the_score() {
    let p = DesirabilityParams::builtin();
    let d = desc(398.0, 2.9, 4, 2, 77.0, 5, 2);
    let none = qed(&d, 0, p).unwrap();
    let three = qed(&d, 3, p).unwrap();
    assert!(three.value < none.value);
}

struct StubEngine(i64);

impl AlertEngine for StubEngine {
    fn alert_count(&self, _mol: &smiles_core::MolGraph) -> i64 {
        self.0
    }
}

#[test]
fn engine_plumbing() {
    let p = DesirabilityParams::builtin();
    let g = parse("CCO").unwrap();
    let d = descriptors::compute_all(&g).descriptors;

    let s = score(&g, &d, &NoAlertEngine, p).unwrap();
    assert_eq!(s.notes, vec!["no-alert-engine".to_string()]);
    assert_eq!(s.value, qed(&d, 0, p).unwrap().value);

    let s3 = score(&g, &d, &StubEngine(3), p).unwrap();
    assert!(s3.notes.is_empty());
    assert_eq!(s3.value, qed(&d, 3, p).unwrap().value);
    assert!(s3.value < s.value);

    assert!(matches!(
        score(&g, &d, &StubEngine(-1), p),
        Err(ParameterError::NegativeAlerts { count: -1 })
    ));
}

#[test]
fn malformed_parameters_are_rejected() {
    let base = DesirabilityParams::builtin();

    let mut p = base.clone();
    p.weights[2] = -0.1;
    assert!(matches!(
        qed(&desc(300.0, 2.0, 3, 1, 60.0, 4, 1), 0, &p),
        Err(ParameterError::NegativeWeight { property: Property::Hba })
    ));

    let mut p = base.clone();
    p.weights = [0.0; 8];
    assert!(matches!(p.validate(), Err(ParameterError::ZeroWeights)));

    let mut p = base.clone();
    p.ads[0].dmax = 0.0;
    assert!(matches!(
        p.validate(),
        Err(ParameterError::BadShape { property: Property::Mw, .. })
    ));

    let mut p = base.clone();
    p.ads[5].e = 0.0;
    assert!(p.validate().is_err());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = DesirabilityParams::parse("!set X 1\nMW\t1\t2\n").unwrap_err();
    assert!(matches!(err, ParameterError::Parse { line: 2, .. }));

    let err = DesirabilityParams::parse("MW\t1\t2\t3\t4\t5\t6\t7\t8\n").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("!set"), "{msg}");

    let mut text = String::from("!set partial 1\n");
    text.push_str("MW\t2.8\t392.6\t290.7\t2.4\t49.2\t65.4\t105.0\t0.66\n");
    let err = DesirabilityParams::parse(&text).unwrap_err();
    assert!(err.to_string().contains("missing row"), "{err}");
}

#[test]
fn score_serialization_round_trips() {
    let p = DesirabilityParams::builtin();
    let s = qed(&desc(398.0, 2.9, 4, 2, 77.0, 5, 2), 1, p).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let back: qed::QedScore = serde_json::from_str(&json).unwrap();
    assert_eq!(back.value, s.value);
    assert_eq!(back.desirabilities, s.desirabilities);
}

#[test]
fn property_order_is_stable() {
    let keys: Vec<&str> = PROPERTIES.iter().map(|p| p.key()).collect();
    assert_eq!(
        keys,
        ["MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS"]
    );
    for (i, p) in PROPERTIES.into_iter().enumerate() {
        assert_eq!(p.index(), i);
    }
}
