use std::collections::HashMap;
use std::fmt;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Absorption,
    Distribution,
    Metabolism,
    Excretion,
    Toxicity,
    General,
}

pub const CATEGORIES: [Category; 6] = [
    Category::Absorption,
    Category::Distribution,
    Category::Metabolism,
    Category::Excretion,
    Category::Toxicity,
    Category::General,
];

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Absorption => "Absorption",
            Category::Distribution => "Distribution",
            Category::Metabolism => "Metabolism",
            Category::Excretion => "Excretion",
            Category::Toxicity => "Toxicity",
            Category::General => "General",
        }
    }

    fn from_name(name: &str) -> Option<Category> {
        CATEGORIES.iter().copied().find(|c| c.name() == name)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueKind {
    Numeric,
    Probability,
    Categorical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    HigherBetter,
    LowerBetter,
    Categorical,
}

#[derive(Clone, Debug)]
pub struct PropertyDef {
    pub id: String,
    pub category: Category,
    pub name: String,
    pub kind: ValueKind,
    pub direction: Direction,
    pub risk_threshold: Option<f64>,
    /// Severity denominator: overshoot equal to scale gives severity 1.
    pub scale: f64,
    pub risky_label: Option<String>,
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("schema line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub struct AdmetSchema {
    props: Vec<PropertyDef>,
    by_id: HashMap<String, usize>,
}

static BUILTIN: Lazy<AdmetSchema> = Lazy::new(|| {
    let s = AdmetSchema::parse(include_str!("../data/admet_schema.tsv")).expect("builtin schema");
    assert_eq!(s.len(), 74);
    s
});

impl AdmetSchema {
    pub fn builtin() -> &'static AdmetSchema {
        &BUILTIN
    }

    pub fn parse(text: &str) -> Result<AdmetSchema, SchemaError> {
        let mut props = Vec::new();
        let mut by_id = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let err = |reason: String| SchemaError::Parse {
                line: lineno,
                reason,
            };
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 8 {
                return Err(err(format!("expected 8 fields, got {}", f.len())));
            }
            let category = Category::from_name(f[1])
                .ok_or_else(|| err(format!("unknown category {:?}", f[1])))?;
            let kind = match f[3] {
                "numeric" => ValueKind::Numeric,
                "probability" => ValueKind::Probability,
                "categorical" => ValueKind::Categorical,
                other => return Err(err(format!("unknown kind {other:?}"))),
            };
            let direction = match f[4] {
                "higher_better" => Direction::HigherBetter,
                "lower_better" => Direction::LowerBetter,
                "categorical" => Direction::Categorical,
                other => return Err(err(format!("unknown direction {other:?}"))),
            };
            if (kind == ValueKind::Categorical) != (direction == Direction::Categorical) {
                return Err(err("categorical kind and direction must pair".to_string()));
            }
            let risk_threshold = if f[5] == "-" {
                None
            } else {
                Some(
                    f[5].parse::<f64>()
                        .map_err(|_| err(format!("bad threshold {:?}", f[5])))?,
                )
            };
            let scale: f64 = f[6]
                .parse()
                .map_err(|_| err(format!("bad scale {:?}", f[6])))?;
            if scale <= 0.0 {
                return Err(err("scale must be positive".to_string()));
            }
            let risky_label = (f[7] != "-").then(|| f[7].to_string());
            match kind {
                ValueKind::Categorical => {
                    if risk_threshold.is_some() || risky_label.is_none() {
                        return Err(err("categorical rows take a label, not a threshold".to_string()));
                    }
                }
                ValueKind::Numeric | ValueKind::Probability => {
                    if risk_threshold.is_none() || risky_label.is_some() {
                        return Err(err("numeric rows take a threshold, not a label".to_string()));
                    }
                    if kind == ValueKind::Probability {
                        let t = risk_threshold.unwrap();
                        if !(0.0..=1.0).contains(&t) {
                            return Err(err(format!("probability threshold {t} outside [0,1]")));
                        }
                    }
                }
            }
            if by_id.insert(f[0].to_string(), props.len()).is_some() {
                return Err(err(format!("duplicate property id {}", f[0])));
            }
            props.push(PropertyDef {
                id: f[0].to_string(),
                category,
                name: f[2].to_string(),
                kind,
                direction,
                risk_threshold,
                scale,
                risky_label,
            });
        }
        Ok(AdmetSchema { props, by_id })
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&PropertyDef> {
        self.by_id.get(id).map(|&i| &self.props[i])
    }

    /// Position in the canonical (tie-break) order.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PropertyDef> {
        self.props.iter()
    }
}
