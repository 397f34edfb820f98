use std::collections::BTreeMap;

use descriptors::DescriptorSet;
use pharmacokinetics::{AdmetProfile, WeaknessFlag};
use qed::QedScore;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Extracted,
    DeNovo,
    Conditional,
    Refined,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Extracted => "extracted",
            Source::DeNovo => "de_novo",
            Source::Conditional => "conditional",
            Source::Refined => "refined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Valid,
    Invalid,
}

/// One pooled molecule. Enrichment fields stay None until a pipeline stage
/// fills them; unrecognized fields from newer writers ride along in extras.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub id: String,
    /// Raw spelling as first ingested.
    pub smiles: String,
    pub round: u32,
    pub source: Source,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    /// Canonical serialization; None for quarantined records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    /// Parse error code for quarantined records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Other raw spellings collapsed into this record by dedup.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptors: Option<DescriptorSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admet: Option<AdmetProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pkd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weakness: Option<WeaknessFlag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qed: Option<QedScore>,
    #[serde(flatten)]
    pub extras: BTreeMap<String, serde_json::Value>,
}
