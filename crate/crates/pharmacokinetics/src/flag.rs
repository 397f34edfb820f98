use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::schema::{AdmetSchema, Category, Direction, PropertyDef, ValueKind, CATEGORIES};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AdmetValue {
    Number(f64),
    Label(String),
}

/// Keyed by schema property id. BTreeMap keeps serialization stable; flagging
/// itself walks the schema, so map order never matters.
pub type AdmetProfile = BTreeMap<String, AdmetValue>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeaknessFlag {
    pub property: String,
    pub severity: f64,
    pub rationale: String,
}

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("property {0} not in schema")]
    UnknownProperty(String),
    #[error("property {id} expects a {expected}")]
    WrongKind { id: String, expected: &'static str },
    #[error("property {id} probability {value} outside [0,1]")]
    OutOfRange { id: String, value: f64 },
    #[error("no property breaches its risk threshold")]
    NoWeakness,
    #[error("no flags to aggregate")]
    EmptyInput,
}

/// Severity and rationale when the value breaches the property's risk gate,
/// None when compliant.
pub fn severity(def: &PropertyDef, value: &AdmetValue) -> Result<Option<(f64, String)>, FlagError> {
    match def.kind {
        ValueKind::Categorical => {
            let label = match value {
                AdmetValue::Label(l) => l,
                AdmetValue::Number(_) => {
                    return Err(FlagError::WrongKind {
                        id: def.id.clone(),
                        expected: "label",
                    })
                }
            };
            let risky = def.risky_label.as_deref().unwrap();
            if label == risky {
                Ok(Some((1.0, format!("{} is {}", def.id, label))))
            } else {
                Ok(None)
            }
        }
        ValueKind::Numeric | ValueKind::Probability => {
            let v = match value {
                AdmetValue::Number(v) => *v,
                AdmetValue::Label(_) => {
                    return Err(FlagError::WrongKind {
                        id: def.id.clone(),
                        expected: "number",
                    })
                }
            };
            if def.kind == ValueKind::Probability && !(0.0..=1.0).contains(&v) {
                return Err(FlagError::OutOfRange {
                    id: def.id.clone(),
                    value: v,
                });
            }
            let t = def.risk_threshold.unwrap();
            let noun = if def.kind == ValueKind::Probability {
                "probability "
            } else {
                ""
            };
            let (overshoot, side) = match def.direction {
                Direction::HigherBetter => (t - v, "below"),
                Direction::LowerBetter => (v - t, "above"),
                Direction::Categorical => unreachable!(),
            };
            if overshoot > 0.0 {
                let sev = overshoot / def.scale;
                Ok(Some((
                    sev,
                    format!("{} {noun}{v} {side} risk threshold {t}", def.id),
                )))
            } else {
                Ok(None)
            }
        }
    }
}

/// Picks the worst property. Walks the schema in canonical row order and
/// keeps the first strict maximum, so ties go to the earlier property id and
/// profile map ordering cannot influence the result.
pub fn flag_weakness(
    profile: &AdmetProfile,
    schema: &AdmetSchema,
) -> Result<WeaknessFlag, FlagError> {
    for id in profile.keys() {
        if schema.get(id).is_none() {
            return Err(FlagError::UnknownProperty(id.clone()));
        }
    }
    let mut best: Option<WeaknessFlag> = None;
    for def in schema.iter() {
        let Some(value) = profile.get(&def.id) else {
            continue;
        };
        if let Some((sev, rationale)) = severity(def, value)? {
            let better = best.as_ref().map_or(true, |b| sev > b.severity);
            if better {
                best = Some(WeaknessFlag {
                    property: def.id.clone(),
                    severity: sev,
                    rationale,
                });
            }
        }
    }
    best.ok_or(FlagError::NoWeakness)
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyShare {
    pub id: String,
    pub category: Category,
    pub count: usize,
    pub percent: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CategoryShare {
    pub category: Category,
    pub count: usize,
    pub percent: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Distribution {
    pub total: usize,
    pub properties: Vec<PropertyShare>,
    pub categories: Vec<CategoryShare>,
}

pub fn weakness_distribution(
    flags: &[WeaknessFlag],
    schema: &AdmetSchema,
) -> Result<Distribution, FlagError> {
    if flags.is_empty() {
        return Err(FlagError::EmptyInput);
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for flag in flags {
        let idx = schema
            .index_of(&flag.property)
            .ok_or_else(|| FlagError::UnknownProperty(flag.property.clone()))?;
        *counts.entry(idx).or_default() += 1;
    }
    let total = flags.len();
    let pct = |n: usize| 100.0 * n as f64 / total as f64;
    let defs: Vec<&PropertyDef> = schema.iter().collect();
    let properties: Vec<PropertyShare> = counts
        .iter()
        .map(|(&idx, &count)| PropertyShare {
            id: defs[idx].id.clone(),
            category: defs[idx].category,
            count,
            percent: pct(count),
        })
        .collect();
    let categories: Vec<CategoryShare> = CATEGORIES
        .iter()
        .filter_map(|&category| {
            let count: usize = properties
                .iter()
                .filter(|p| p.category == category)
                .map(|p| p.count)
                .sum();
            (count > 0).then(|| CategoryShare {
                category,
                count,
                percent: pct(count),
            })
        })
        .collect();
    Ok(Distribution {
        total,
        properties,
        categories,
    })
}

/// Side-by-side rounds, one percentage column per label, properties in
/// canonical order, "--" where a round never flagged the property.
pub fn distribution_tsv(rounds: &[(&str, &Distribution)], schema: &AdmetSchema) -> String {
    let mut out = String::from("category\tproperty");
    for (label, _) in rounds {
        out.push('\t');
        out.push_str(label);
    }
    out.push('\n');
    let mut ids: Vec<&str> = Vec::new();
    for (_, dist) in rounds {
        for p in &dist.properties {
            if !ids.contains(&p.id.as_str()) {
                ids.push(&p.id);
            }
        }
    }
    ids.sort_by_key(|id| schema.index_of(id).unwrap_or(usize::MAX));
    for id in ids {
        let category = schema.get(id).map_or("?", |d| d.category.name());
        out.push_str(&format!("{category}\t{id}"));
        for (_, dist) in rounds {
            match dist.properties.iter().find(|p| p.id == id) {
                Some(p) => out.push_str(&format!("\t{:.1}", p.percent)),
                None => out.push_str("\t--"),
            }
        }
        out.push('\n');
    }
    out.push_str("total\t-");
    for (_, dist) in rounds {
        out.push_str(&format!("\t{}", dist.total));
    }
    out.push('\n');
    out
}
