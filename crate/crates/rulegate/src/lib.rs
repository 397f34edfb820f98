//! Rule-based drug-likeness filters and the downstream selection gate.
//! Thresholds live in data/rule_thresholds.tsv; the engine and the test
//! oracle both read that file, neither embeds the numbers.

use descriptors::{DescriptorSet, DESCRIPTOR_KEYS};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const THRESHOLDS_TSV: &str = include_str!("../data/rule_thresholds.tsv");

pub const RULE_NAMES: [&str; 5] = ["lipinski", "veber", "ghose", "ro3", "oprea"];

#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error("threshold file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("rule {0} missing from threshold file")]
    MissingRule(&'static str),
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub key: String,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub inclusive: bool,
}

impl Criterion {
    pub fn passes(&self, v: f64) -> bool {
        let lo = match self.min {
            Some(m) => {
                if self.inclusive {
                    v >= m
                } else {
                    v > m
                }
            }
            None => true,
        };
        let hi = match self.max {
            Some(m) => {
                if self.inclusive {
                    v <= m
                } else {
                    v < m
                }
            }
            None => true,
        };
        lo && hi
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Rule {
    pub name: String,
    /// Criterion passes needed for the rule verdict.
    pub required: u32,
    pub criteria: Vec<Criterion>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
}

static BUILTIN: Lazy<RuleSet> =
    Lazy::new(|| RuleSet::parse(THRESHOLDS_TSV).expect("builtin threshold file"));

impl RuleSet {
    pub fn builtin() -> &'static RuleSet {
        &BUILTIN
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn parse(text: &str) -> Result<RuleSet, ThresholdError> {
        let mut declared: Vec<(String, u32)> = Vec::new();
        let mut criteria: Vec<(String, Criterion)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let err = |reason: String| ThresholdError::Parse {
                line: lineno,
                reason,
            };
            if let Some(rest) = line.strip_prefix("!rule") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(err("expected !rule <name> <required>".to_string()));
                }
                if declared.iter().any(|(n, _)| n == parts[0]) {
                    return Err(err(format!("duplicate rule {}", parts[0])));
                }
                let required: u32 = parts[1]
                    .parse()
                    .map_err(|_| err(format!("bad required count {:?}", parts[1])))?;
                declared.push((parts[0].to_string(), required));
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(err("expected 5 tab-separated fields".to_string()));
            }
            if !declared.iter().any(|(n, _)| n == fields[0]) {
                return Err(err(format!("criterion for undeclared rule {}", fields[0])));
            }
            if !DESCRIPTOR_KEYS.contains(&fields[1]) {
                return Err(err(format!("unknown criterion key {}", fields[1])));
            }
            let bound = |raw: &str| -> Result<Option<f64>, ThresholdError> {
                if raw == "-" {
                    Ok(None)
                } else {
                    raw.parse()
                        .map(Some)
                        .map_err(|_| err(format!("bad bound {raw:?}")))
                }
            };
            let min = bound(fields[2])?;
            let max = bound(fields[3])?;
            if min.is_none() && max.is_none() {
                return Err(err("criterion with no bounds".to_string()));
            }
            if let (Some(lo), Some(hi)) = (min, max) {
                if lo > hi {
                    return Err(err(format!("min {lo} above max {hi}")));
                }
            }
            let inclusive = match fields[4] {
                "inclusive" => true,
                "exclusive" => false,
                other => return Err(err(format!("bad inclusivity {other:?}"))),
            };
            criteria.push((
                fields[0].to_string(),
                Criterion {
                    key: fields[1].to_string(),
                    min,
                    max,
                    inclusive,
                },
            ));
        }
        let mut rules = Vec::new();
        for name in RULE_NAMES {
            let (_, required) = declared
                .iter()
                .find(|(n, _)| n == name)
                .ok_or(ThresholdError::MissingRule(name))?;
            let list: Vec<Criterion> = criteria
                .iter()
                .filter(|(n, _)| n == name)
                .map(|(_, c)| c.clone())
                .collect();
            if list.is_empty() || *required == 0 || *required as usize > list.len() {
                return Err(ThresholdError::Parse {
                    line: 0,
                    reason: format!("rule {name} needs 1..=len criteria required"),
                });
            }
            rules.push(Rule {
                name: name.to_string(),
                required: *required,
                criteria: list,
            });
        }
        if declared.len() != RULE_NAMES.len() {
            return Err(ThresholdError::Parse {
                line: 0,
                reason: "unexpected extra rules".to_string(),
            });
        }
        Ok(RuleSet { rules })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionCheck {
    pub rule: String,
    pub criterion: String,
    pub observed: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub inclusive: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleReport {
    pub checks: Vec<CriterionCheck>,
    pub lipinski: bool,
    pub veber: bool,
    pub ghose: bool,
    pub ro3: bool,
    pub oprea: bool,
    pub rules_passed: u32,
}

impl RuleReport {
    pub fn verdict(&self, rule: &str) -> Option<bool> {
        match rule {
            "lipinski" => Some(self.lipinski),
            "veber" => Some(self.veber),
            "ghose" => Some(self.ghose),
            "ro3" => Some(self.ro3),
            "oprea" => Some(self.oprea),
            _ => None,
        }
    }
}

pub fn evaluate_rules(desc: &DescriptorSet) -> RuleReport {
    evaluate_with(desc, RuleSet::builtin())
}

pub fn evaluate_with(desc: &DescriptorSet, set: &RuleSet) -> RuleReport {
    let mut checks = Vec::new();
    let mut verdicts = [false; 5];
    for (i, rule) in set.rules.iter().enumerate() {
        let mut passed = 0u32;
        for c in &rule.criteria {
            let observed = desc.get(&c.key).expect("criterion key validated at parse");
            let pass = c.passes(observed);
            passed += u32::from(pass);
            checks.push(CriterionCheck {
                rule: rule.name.clone(),
                criterion: c.key.clone(),
                observed,
                min: c.min,
                max: c.max,
                inclusive: c.inclusive,
                pass,
            });
        }
        verdicts[i] = passed >= rule.required;
    }
    RuleReport {
        checks,
        lipinski: verdicts[0],
        veber: verdicts[1],
        ghose: verdicts[2],
        ro3: verdicts[3],
        oprea: verdicts[4],
        rules_passed: verdicts.iter().map(|&v| u32::from(v)).sum(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strictness {
    AtLeast,
    MoreThan,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SelectionCriteria {
    pub min_rules: u32,
    pub min_qed: f64,
    pub min_pkd: f64,
    pub strictness: Strictness,
}

impl SelectionCriteria {
    pub fn profile(name: &str) -> Option<SelectionCriteria> {
        match name {
            "main" => Some(SelectionCriteria {
                min_rules: 3,
                min_qed: 0.55,
                min_pkd: 6.0,
                strictness: Strictness::AtLeast,
            }),
            "si" => Some(SelectionCriteria {
                min_rules: 3,
                min_qed: 0.6,
                min_pkd: 5.5,
                strictness: Strictness::MoreThan,
            }),
            _ => None,
        }
    }
}

/// qed and pkd gates are strict; the rule-count gate follows `strictness`.
pub fn select(report: &RuleReport, qed: f64, pkd: f64, criteria: &SelectionCriteria) -> bool {
    let rules_ok = match criteria.strictness {
        Strictness::AtLeast => report.rules_passed >= criteria.min_rules,
        Strictness::MoreThan => report.rules_passed > criteria.min_rules,
    };
    rules_ok && qed > criteria.min_qed && pkd > criteria.min_pkd
}

fn fmt_bound(b: Option<f64>) -> String {
    match b {
        Some(v) => format!("{v}"),
        None => "-".to_string(),
    }
}

pub fn report_tsv(report: &RuleReport) -> String {
    let mut out = String::from("rule\tcriterion\tobserved\tmin\tmax\tinclusivity\tpass\n");
    for c in &report.checks {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            c.rule,
            c.criterion,
            c.observed,
            fmt_bound(c.min),
            fmt_bound(c.max),
            if c.inclusive { "inclusive" } else { "exclusive" },
            c.pass
        ));
    }
    for name in RULE_NAMES {
        out.push_str(&format!("!verdict\t{}\t{}\n", name, report.verdict(name).unwrap()));
    }
    out.push_str(&format!("!rules_passed\t{}\n", report.rules_passed));
    out
}

/// Radar-chart data: one row per (axis, rule) bound pair, axes in descriptor
/// key order, molecule value repeated per row.
pub fn radar_tsv(report: &RuleReport) -> String {
    let mut out = String::from("axis\tvalue\trule\tmin\tmax\n");
    for key in DESCRIPTOR_KEYS {
        for c in report.checks.iter().filter(|c| c.criterion == key) {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                key,
                c.observed,
                c.rule,
                fmt_bound(c.min),
                fmt_bound(c.max),
            ));
        }
    }
    out
}
