use std::collections::BTreeMap;
use std::fmt::Write;

use pharmacokinetics::{AdmetSchema, Category, CATEGORIES};
use rulegate::{RuleReport, RULE_NAMES};
use serde::Serialize;

use crate::record::Status;
use crate::refine::Classification;
use crate::Pool;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdCount {
    pub threshold: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyStats {
    pub family: Category,
    pub improved: usize,
    pub declined: usize,
    pub unchanged: usize,
    pub improved_frac: f64,
    pub declined_frac: f64,
    pub unchanged_frac: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundStats {
    pub round: u32,
    pub total: usize,
    pub valid: usize,
    pub invalid: usize,
    pub flagged: usize,
    /// Strict > per threshold, aligned with the thresholds passed in.
    pub qed_above: Vec<ThresholdCount>,
    /// Index = number of rule gates passed, 0..=5.
    pub rules_passed: Vec<usize>,
    /// Refinement outcomes for children landing in this round, by category.
    pub families: Vec<FamilyStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerStats {
    /// Both totals on purpose: quarantined records stay countable.
    pub total_records: usize,
    pub total_valid: usize,
    pub total_invalid: usize,
    pub rounds: Vec<RoundStats>,
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

pub fn ledger_stats(
    pool: &Pool,
    qed_thresholds: &[f64],
    rule_reports: &BTreeMap<String, RuleReport>,
    schema: &AdmetSchema,
) -> LedgerStats {
    let mut round_ids: Vec<u32> = pool.records.iter().map(|r| r.round).collect();
    round_ids.sort_unstable();
    round_ids.dedup();

    let mut rounds = Vec::with_capacity(round_ids.len());
    for round in round_ids {
        let in_round: Vec<_> = pool.records.iter().filter(|r| r.round == round).collect();
        let valid = in_round
            .iter()
            .filter(|r| r.status == Status::Valid)
            .count();
        let flagged = in_round.iter().filter(|r| r.weakness.is_some()).count();
        let qed_above = qed_thresholds
            .iter()
            .map(|&threshold| ThresholdCount {
                threshold,
                count: in_round
                    .iter()
                    .filter(|r| r.qed.as_ref().map_or(false, |q| q.value > threshold))
                    .count(),
            })
            .collect();
        let mut rules_passed = vec![0usize; RULE_NAMES.len() + 1];
        for rec in &in_round {
            if let Some(report) = rule_reports.get(&rec.id) {
                rules_passed[report.rules_passed as usize] += 1;
            }
        }
        let mut tallies = [(0usize, 0usize, 0usize); CATEGORIES.len()];
        for outcome in &pool.outcomes {
            let Some(rec) = pool.get(&outcome.candidate) else {
                continue;
            };
            if rec.round != round {
                continue;
            }
            let Some(def) = schema.get(&outcome.property) else {
                continue;
            };
            let slot = CATEGORIES.iter().position(|&c| c == def.category).unwrap();
            match outcome.classification {
                Classification::Improved => tallies[slot].0 += 1,
                Classification::Declined => tallies[slot].1 += 1,
                Classification::Unchanged => tallies[slot].2 += 1,
            }
        }
        let families = CATEGORIES
            .iter()
            .zip(tallies)
            .filter(|&(_, (i, d, u))| i + d + u > 0)
            .map(|(&family, (improved, declined, unchanged))| {
                let n = (improved + declined + unchanged) as f64;
                FamilyStats {
                    family,
                    improved,
                    declined,
                    unchanged,
                    improved_frac: round3(improved as f64 / n),
                    declined_frac: round3(declined as f64 / n),
                    unchanged_frac: round3(unchanged as f64 / n),
                }
            })
            .collect();
        rounds.push(RoundStats {
            round,
            total: in_round.len(),
            valid,
            invalid: in_round.len() - valid,
            flagged,
            qed_above,
            rules_passed,
            families,
        });
    }

    let total_valid = pool
        .records
        .iter()
        .filter(|r| r.status == Status::Valid)
        .count();
    LedgerStats {
        total_records: pool.records.len(),
        total_valid,
        total_invalid: pool.records.len() - total_valid,
        rounds,
    }
}

/// Flat sectioned dump of the same numbers, stable across runs.
pub fn stats_tsv(stats: &LedgerStats) -> String {
    let mut out = String::from("# totals\nrecords\tvalid\tinvalid\n");
    let _ = writeln!(
        out,
        "{}\t{}\t{}",
        stats.total_records, stats.total_valid, stats.total_invalid
    );
    out.push_str("# rounds\nround\ttotal\tvalid\tinvalid\tflagged\n");
    for r in &stats.rounds {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            r.round, r.total, r.valid, r.invalid, r.flagged
        );
    }
    out.push_str("# qed_above\nround\tthreshold\tcount\n");
    for r in &stats.rounds {
        for t in &r.qed_above {
            let _ = writeln!(out, "{}\t{}\t{}", r.round, t.threshold, t.count);
        }
    }
    out.push_str("# rules_passed\nround\tpassed\tcount\n");
    for r in &stats.rounds {
        for (passed, count) in r.rules_passed.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{}", r.round, passed, count);
        }
    }
    out.push_str(
        "# refinement\nround\tfamily\timproved\tdeclined\tunchanged\timproved_frac\tdeclined_frac\tunchanged_frac\n",
    );
    for r in &stats.rounds {
        for f in &r.families {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}",
                r.round,
                f.family.name(),
                f.improved,
                f.declined,
                f.unchanged,
                f.improved_frac,
                f.declined_frac,
                f.unchanged_frac
            );
        }
    }
    out
}
