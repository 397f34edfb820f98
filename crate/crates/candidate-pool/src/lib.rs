//! Persistent candidate pool with refinement lineage.
//!
//! Records live in a line-delimited file (version header, one JSON object per
//! line) so pipeline runs can append and fixtures diff cleanly. Every ingested
//! SMILES is accounted for: valid ones dedup by canonical serialization,
//! unparseable ones are quarantined with their error code, nothing is dropped.

mod io;
mod record;
mod refine;
mod stats;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use pharmacokinetics::{AdmetProfile, AdmetSchema};
use thiserror::Error;

pub use crate::io::{FORMAT, VERSION};
pub use crate::record::{CandidateRecord, Source, Status};
pub use crate::refine::{
    classify, classify_value, Classification, RefinementOutcome, DEFAULT_EPSILON,
};
pub use crate::stats::{
    ledger_stats, stats_tsv, FamilyStats, LedgerStats, RoundStats, ThresholdCount,
};

#[derive(Debug, Error)]
pub enum PoolError {
    #[error("no record with id {0}")]
    UnknownParent(String),
    #[error("refined records enter through record_refinement, not ingest")]
    RefinedWithoutParent,
    #[error("property {0} not in schema")]
    UnknownProperty(String),
    #[error("property {id} expects a {expected}")]
    WrongKind { id: String, expected: &'static str },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: bad header: {reason}")]
    Header { line: usize, reason: String },
    #[error("unsupported pool format {format:?} version {version}")]
    FormatVersion { format: String, version: u32 },
    #[error("line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
    #[error("record {id}: {reason}")]
    Lineage { id: String, reason: String },
    #[error("duplicate record id {0}")]
    DuplicateId(String),
    #[error("outcome references unknown candidate {0}")]
    UnknownCandidate(String),
}

/// Per-input disposition from an ingest call. added + merged + quarantined
/// covers every input exactly once.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IngestReport {
    pub added: Vec<String>,
    /// (raw spelling, id of the record it collapsed into)
    pub merged: Vec<(String, String)>,
    pub quarantined: Vec<String>,
}

impl IngestReport {
    pub fn accounted(&self) -> usize {
        self.added.len() + self.merged.len() + self.quarantined.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefinementRecord {
    pub child_id: String,
    pub outcomes: Vec<RefinementOutcome>,
}

#[derive(Clone, Debug, Default)]
pub struct Pool {
    pub records: Vec<CandidateRecord>,
    pub outcomes: Vec<RefinementOutcome>,
    next_id: u64,
}

impl PartialEq for Pool {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records && self.outcomes == other.outcomes
    }
}

impl Pool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: &str) -> Option<&CandidateRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn get_mut(&mut self, id: &str) -> Option<&mut CandidateRecord> {
        self.records.iter_mut().find(|r| r.id == id)
    }

    pub fn in_round(&self, round: u32) -> impl Iterator<Item = &CandidateRecord> {
        self.records.iter().filter(move |r| r.round == round)
    }

    fn next_token(&mut self) -> String {
        self.next_id += 1;
        format!("c{:04}", self.next_id)
    }

    fn blank(&mut self, smiles: &str, round: u32, source: Source) -> CandidateRecord {
        CandidateRecord {
            id: self.next_token(),
            smiles: smiles.to_string(),
            round,
            source,
            status: Status::Valid,
            parent_id: None,
            canonical: None,
            error: None,
            aliases: Vec::new(),
            descriptors: None,
            admet: None,
            pkd: None,
            weakness: None,
            qed: None,
            extras: BTreeMap::new(),
        }
    }

    pub fn ingest<I, S>(
        &mut self,
        inputs: I,
        source: Source,
        round: u32,
    ) -> Result<IngestReport, PoolError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        if source == Source::Refined {
            return Err(PoolError::RefinedWithoutParent);
        }
        let mut report = IngestReport::default();
        for raw in inputs {
            let raw = raw.as_ref();
            match smiles_core::canonical(raw) {
                Ok(canon) => {
                    let existing = self
                        .records
                        .iter()
                        .position(|r| r.canonical.as_deref() == Some(canon.as_str()));
                    if let Some(i) = existing {
                        let rec = &mut self.records[i];
                        if rec.smiles != raw && !rec.aliases.iter().any(|a| a == raw) {
                            rec.aliases.push(raw.to_string());
                        }
                        report.merged.push((raw.to_string(), rec.id.clone()));
                    } else {
                        let mut rec = self.blank(raw, round, source);
                        rec.canonical = Some(canon);
                        report.added.push(rec.id.clone());
                        self.records.push(rec);
                    }
                }
                Err(e) => {
                    let mut rec = self.blank(raw, round, source);
                    rec.status = Status::Invalid;
                    rec.error = Some(e.code().to_string());
                    report.quarantined.push(rec.id.clone());
                    self.records.push(rec);
                }
            }
        }
        Ok(report)
    }

    /// Creates the refined child (quarantined if it fails to parse) and one
    /// outcome per property present in both profiles, in schema order.
    pub fn record_refinement(
        &mut self,
        parent_id: &str,
        child_smiles: &str,
        before: &AdmetProfile,
        after: &AdmetProfile,
        eps: f64,
        schema: &AdmetSchema,
    ) -> Result<RefinementRecord, PoolError> {
        let parent = self
            .records
            .iter()
            .find(|r| r.id == parent_id)
            .ok_or_else(|| PoolError::UnknownParent(parent_id.to_string()))?;
        let round = parent.round + 1;

        for id in before.keys().chain(after.keys()) {
            if schema.get(id).is_none() {
                return Err(PoolError::UnknownProperty(id.clone()));
            }
        }
        let mut classified = Vec::new();
        for def in schema.iter() {
            let (Some(b), Some(a)) = (before.get(&def.id), after.get(&def.id)) else {
                continue;
            };
            classified.push((def.id.clone(), b.clone(), a.clone(), classify_value(def, b, a, eps)?));
        }

        let mut child = match smiles_core::canonical(child_smiles) {
            Ok(canon) => {
                let mut rec = self.blank(child_smiles, round, Source::Refined);
                rec.canonical = Some(canon);
                rec
            }
            Err(e) => {
                let mut rec = self.blank(child_smiles, round, Source::Refined);
                rec.status = Status::Invalid;
                rec.error = Some(e.code().to_string());
                rec
            }
        };
        child.parent_id = Some(parent_id.to_string());
        let child_id = child.id.clone();
        self.records.push(child);

        let outcomes: Vec<RefinementOutcome> = classified
            .into_iter()
            .map(|(property, before, after, classification)| RefinementOutcome {
                candidate: child_id.clone(),
                property,
                before,
                after,
                classification,
            })
            .collect();
        self.outcomes.extend(outcomes.iter().cloned());
        Ok(RefinementRecord { child_id, outcomes })
    }

    pub fn save(&self, path: &Path) -> Result<(), PoolError> {
        io::save(self, path)
    }

    pub fn load(path: &Path) -> Result<Pool, PoolError> {
        io::load(path)
    }

    pub(crate) fn rebuild_counter(&mut self) {
        self.next_id = self
            .records
            .iter()
            .filter_map(|r| r.id.strip_prefix('c').and_then(|n| n.parse::<u64>().ok()))
            .max()
            .unwrap_or(0);
    }

    /// Structural checks run after load: unique ids, lineage acyclicity
    /// (parent exists in a strictly earlier round), outcomes point at records.
    pub fn validate(&self) -> Result<(), PoolError> {
        let mut seen = HashSet::new();
        for rec in &self.records {
            if !seen.insert(rec.id.as_str()) {
                return Err(PoolError::DuplicateId(rec.id.clone()));
            }
        }
        for rec in &self.records {
            match (&rec.parent_id, rec.source) {
                (None, Source::Refined) => {
                    return Err(PoolError::Lineage {
                        id: rec.id.clone(),
                        reason: "refined record without parent".to_string(),
                    })
                }
                (Some(pid), _) => {
                    let parent = self.get(pid).ok_or_else(|| PoolError::Lineage {
                        id: rec.id.clone(),
                        reason: format!("parent {pid} not in pool"),
                    })?;
                    if parent.round >= rec.round {
                        return Err(PoolError::Lineage {
                            id: rec.id.clone(),
                            reason: format!(
                                "parent round {} not earlier than {}",
                                parent.round, rec.round
                            ),
                        });
                    }
                }
                (None, _) => {}
            }
        }
        for outcome in &self.outcomes {
            if self.get(&outcome.candidate).is_none() {
                return Err(PoolError::UnknownCandidate(outcome.candidate.clone()));
            }
        }
        Ok(())
    }
}
