use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use candidate_pool::{ledger_stats, stats_tsv, Pool, Status};
use pharmacokinetics::{
    distribution_tsv, weakness_distribution, AdmetSchema, Distribution, WeaknessFlag,
};
use rulegate::{radar_tsv, RuleReport};

use crate::error::PipelineError;
use crate::stages::RunContext;

const QED_BIN_WIDTH: f64 = 0.05;
const QED_BINS: usize = 20;

/// Fixed-bin histogram over [0, 1). A score of exactly 1.0 lands in the last
/// bin so nothing falls off the top edge.
fn qed_hist_tsv(pool: &Pool, rounds: &[u32]) -> String {
    let mut out = String::from("round\tbin_lo\tbin_hi\tcount\n");
    for &round in rounds {
        let mut bins = [0usize; QED_BINS];
        for rec in &pool.records {
            if rec.round != round || rec.status != Status::Valid {
                continue;
            }
            if let Some(score) = &rec.qed {
                let idx = ((score.value / QED_BIN_WIDTH).floor() as usize).min(QED_BINS - 1);
                bins[idx] += 1;
            }
        }
        for (i, count) in bins.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{:.2}\t{:.2}\t{}",
                round,
                i as f64 * QED_BIN_WIDTH,
                (i + 1) as f64 * QED_BIN_WIDTH,
                count
            );
        }
    }
    out
}

fn weakness_tsv(
    pool: &Pool,
    rounds: &[u32],
    schema: &AdmetSchema,
) -> Result<String, PipelineError> {
    let mut per_round: Vec<(String, Distribution)> = Vec::new();
    for &round in rounds {
        let flags: Vec<WeaknessFlag> = pool
            .records
            .iter()
            .filter(|r| r.round == round && r.status == Status::Valid)
            .filter_map(|r| r.weakness.clone())
            .collect();
        // A round with no flags still gets its column: absence of weakness is
        // a result, not missing data.
        let dist = if flags.is_empty() {
            Distribution {
                total: 0,
                properties: Vec::new(),
                categories: Vec::new(),
            }
        } else {
            weakness_distribution(&flags, schema)?
        };
        per_round.push((format!("round{round}"), dist));
    }
    let borrowed: Vec<(&str, &Distribution)> = per_round
        .iter()
        .map(|(label, dist)| (label.as_str(), dist))
        .collect();
    Ok(distribution_tsv(&borrowed, schema))
}

fn radar_sheet(
    selected: &[String],
    rules: &BTreeMap<String, RuleReport>,
) -> Result<String, PipelineError> {
    let mut out = String::new();
    for id in selected {
        let report = rules.get(id).ok_or_else(|| PipelineError::MissingInput {
            stage: "report",
            artifact: format!("rule report for {id} (rerun filter)"),
        })?;
        let _ = writeln!(out, "# {id}");
        out.push_str(&radar_tsv(report));
    }
    Ok(out)
}

pub fn write_report(
    ctx: &RunContext,
    pool: &Pool,
    rules: &BTreeMap<String, RuleReport>,
    selected: &[String],
) -> Result<Vec<String>, PipelineError> {
    let schema = AdmetSchema::builtin();
    let dir = ctx.run_dir.join("report");
    fs::create_dir_all(&dir)?;

    let mut rounds: Vec<u32> = pool.records.iter().map(|r| r.round).collect();
    rounds.sort_unstable();
    rounds.dedup();

    let stats = ledger_stats(pool, &ctx.config.qed_thresholds, rules, schema);
    fs::write(dir.join("stats.tsv"), stats_tsv(&stats))?;
    fs::write(dir.join("qed_hist.tsv"), qed_hist_tsv(pool, &rounds))?;
    fs::write(dir.join("weakness.tsv"), weakness_tsv(pool, &rounds, schema)?)?;
    fs::write(dir.join("radar.tsv"), radar_sheet(selected, rules)?)?;

    Ok(vec![format!(
        "4 sheets over {} rounds, {} selected, written to {}",
        rounds.len(),
        selected.len(),
        ctx.rel(&dir)
    )])
}
