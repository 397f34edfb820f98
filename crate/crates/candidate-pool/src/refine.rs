use pharmacokinetics::{AdmetValue, Direction, PropertyDef, ValueKind};
use serde::{Deserialize, Serialize};

use crate::PoolError;

/// "Unchanged" means literally identical up to this tolerance; the upstream
/// predictors return bit-equal values for untouched properties.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Improved,
    Declined,
    Unchanged,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementOutcome {
    /// Child record id.
    pub candidate: String,
    pub property: String,
    pub before: AdmetValue,
    pub after: AdmetValue,
    pub classification: Classification,
}

/// Direction-aware comparison: unchanged iff |after - before| <= eps,
/// improved iff the move beyond eps points the desired way.
pub fn classify(direction: Direction, before: f64, after: f64, eps: f64) -> Classification {
    if (after - before).abs() <= eps {
        return Classification::Unchanged;
    }
    let improved = match direction {
        Direction::HigherBetter => after > before,
        Direction::LowerBetter => after < before,
        Direction::Categorical => unreachable!("categorical handled in classify_value"),
    };
    if improved {
        Classification::Improved
    } else {
        Classification::Declined
    }
}

pub fn classify_value(
    def: &PropertyDef,
    before: &AdmetValue,
    after: &AdmetValue,
    eps: f64,
) -> Result<Classification, PoolError> {
    match def.kind {
        ValueKind::Categorical => {
            let (AdmetValue::Label(b), AdmetValue::Label(a)) = (before, after) else {
                return Err(PoolError::WrongKind {
                    id: def.id.clone(),
                    expected: "label",
                });
            };
            let risky = def.risky_label.as_deref().unwrap();
            Ok(if b == a {
                Classification::Unchanged
            } else if a == risky {
                Classification::Declined
            } else if b == risky {
                Classification::Improved
            } else {
                Classification::Unchanged
            })
        }
        ValueKind::Numeric | ValueKind::Probability => {
            let (AdmetValue::Number(b), AdmetValue::Number(a)) = (before, after) else {
                return Err(PoolError::WrongKind {
                    id: def.id.clone(),
                    expected: "number",
                });
            };
            Ok(classify(def.direction, *b, *a, eps))
        }
    }
}
