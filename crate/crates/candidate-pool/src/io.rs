use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::record::CandidateRecord;
use crate::refine::RefinementOutcome;
use crate::{Pool, PoolError};

pub const FORMAT: &str = "candidate-pool";
pub const VERSION: u32 = 1;

fn tagged_line<T: Serialize>(item: &T, kind: &str) -> String {
    let mut value = serde_json::to_value(item).expect("pool rows serialize");
    value
        .as_object_mut()
        .expect("pool rows are objects")
        .insert("kind".to_string(), Value::String(kind.to_string()));
    // serde_json maps are sorted, so dumps are byte-stable across runs.
    serde_json::to_string(&value).expect("pool rows serialize")
}

pub fn save(pool: &Pool, path: &Path) -> Result<(), PoolError> {
    let mut out = format!("{{\"format\":\"{FORMAT}\",\"version\":{VERSION}}}\n");
    for record in &pool.records {
        out.push_str(&tagged_line(record, "candidate"));
        out.push('\n');
    }
    for outcome in &pool.outcomes {
        out.push_str(&tagged_line(outcome, "outcome"));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Pool, PoolError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or_else(|| PoolError::Header {
        line: 1,
        reason: "empty file".to_string(),
    })?;
    let header: Value = serde_json::from_str(header).map_err(|e| PoolError::Header {
        line: 1,
        reason: e.to_string(),
    })?;
    let format = header.get("format").and_then(Value::as_str).unwrap_or("");
    let version = header.get("version").and_then(Value::as_u64).unwrap_or(0) as u32;
    if format != FORMAT || version != VERSION {
        return Err(PoolError::FormatVersion {
            format: format.to_string(),
            version,
        });
    }

    let mut pool = Pool::default();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let corrupt = |reason: String| PoolError::Corrupt { line, reason };
        let mut value: Value =
            serde_json::from_str(raw).map_err(|e| corrupt(e.to_string()))?;
        let object = value
            .as_object_mut()
            .ok_or_else(|| corrupt("not an object".to_string()))?;
        let kind = match object.remove("kind") {
            Some(Value::String(k)) => k,
            _ => return Err(corrupt("missing kind tag".to_string())),
        };
        match kind.as_str() {
            "candidate" => {
                let record: CandidateRecord =
                    serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;
                pool.records.push(record);
            }
            "outcome" => {
                let outcome: RefinementOutcome =
                    serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;
                pool.outcomes.push(outcome);
            }
            other => return Err(corrupt(format!("unknown kind {other:?}"))),
        }
    }

    pool.rebuild_counter();
    pool.validate()?;
    Ok(pool)
}
