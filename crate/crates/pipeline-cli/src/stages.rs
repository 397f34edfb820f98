use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use bio_clients::{
    validate_fasta, AffinityClient, ChemblClient, PredictionClient, ProteinRecord,
    ReplayTransport, Transport, UniProtClient,
};
use candidate_pool::{Classification, Pool, PoolError, Source, Status};
use pharmacokinetics::{flag_weakness, AdmetProfile, AdmetSchema, FlagError};
use rulegate::{evaluate_rules, select, RuleReport, SelectionCriteria};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{PipelineConfig, StageToggles};
use crate::error::PipelineError;
use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Extract,
    Ingest,
    Predict,
    Flag,
    RefineApply,
    Filter,
    Select,
    Report,
    StructureManifest,
    StructureIngest,
}

impl Stage {
    pub const ALL: [Stage; 10] = [
        Stage::Extract,
        Stage::Ingest,
        Stage::Predict,
        Stage::Flag,
        Stage::RefineApply,
        Stage::Filter,
        Stage::Select,
        Stage::Report,
        Stage::StructureManifest,
        Stage::StructureIngest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Extract => "extract",
            Stage::Ingest => "ingest",
            Stage::Predict => "predict",
            Stage::Flag => "flag",
            Stage::RefineApply => "refine-apply",
            Stage::Filter => "filter",
            Stage::Select => "select",
            Stage::Report => "report",
            Stage::StructureManifest => "structure-manifest",
            Stage::StructureIngest => "structure-ingest",
        }
    }

    pub fn enabled(self, toggles: &StageToggles) -> bool {
        match self {
            Stage::Extract => toggles.extract,
            Stage::Ingest => toggles.ingest,
            Stage::Predict => toggles.predict,
            Stage::Flag => toggles.flag,
            Stage::RefineApply => toggles.refine_apply,
            Stage::Filter => toggles.filter,
            Stage::Select => toggles.select,
            Stage::Report => toggles.report,
            Stage::StructureManifest => toggles.structure_manifest,
            Stage::StructureIngest => toggles.structure_ingest,
        }
    }
}

/// Job card handed to the external structure tool, one per selected
/// candidate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureJobManifest {
    pub candidate: String,
    pub smiles: String,
    pub fasta: String,
    pub requested_outputs: RequestedOutputs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RequestedOutputs {
    pub complex_structure: bool,
    pub ic50: bool,
    pub inhibitor_probability: bool,
}

pub struct RunContext {
    pub config: PipelineConfig,
    pub run_dir: PathBuf,
    pub pool_path: PathBuf,
    pub fixtures: PathBuf,
    transport: Box<dyn Transport>,
    require_fixture_dir: bool,
}

impl RunContext {
    /// Replay-only context: the standard CLI path. Never opens a socket.
    pub fn new(
        config: PipelineConfig,
        run_dir: PathBuf,
        pool_path: PathBuf,
        fixtures: PathBuf,
        offline: bool,
    ) -> Result<RunContext, PipelineError> {
        if offline && !fixtures.is_dir() {
            return Err(PipelineError::Precondition(format!(
                "offline run requires the fixtures directory {} to exist",
                fixtures.display()
            )));
        }
        let transport = Box::new(ReplayTransport::new(fixtures.clone()));
        Self::with_transport(config, run_dir, pool_path, fixtures, transport, true)
    }

    /// Custom transport, used by the fixture generator to record instead of
    /// replay.
    pub fn with_transport(
        config: PipelineConfig,
        run_dir: PathBuf,
        pool_path: PathBuf,
        fixtures: PathBuf,
        transport: Box<dyn Transport>,
        require_fixture_dir: bool,
    ) -> Result<RunContext, PipelineError> {
        if SelectionCriteria::profile(&config.profile).is_none() {
            return Err(PipelineError::Config(format!(
                "unknown profile {:?}",
                config.profile
            )));
        }
        if !(config.epsilon.is_finite() && config.epsilon >= 0.0) {
            return Err(PipelineError::Config(format!(
                "epsilon {} must be finite and non-negative",
                config.epsilon
            )));
        }
        fs::create_dir_all(&run_dir)?;
        Ok(RunContext {
            config,
            run_dir,
            pool_path,
            fixtures,
            transport,
            require_fixture_dir,
        })
    }

    fn transport(&self, stage: &'static str) -> Result<&dyn Transport, PipelineError> {
        if self.require_fixture_dir && !self.fixtures.is_dir() {
            return Err(PipelineError::MissingInput {
                stage,
                artifact: format!("fixtures directory {}", self.fixtures.display()),
            });
        }
        Ok(self.transport.as_ref())
    }

    fn load_pool(&self, stage: &'static str) -> Result<Pool, PipelineError> {
        if !self.pool_path.is_file() {
            return Err(PipelineError::MissingInput {
                stage,
                artifact: format!("pool {} (run ingest)", self.pool_path.display()),
            });
        }
        Ok(Pool::load(&self.pool_path)?)
    }

    fn protein(&self, stage: &'static str) -> Result<ProteinRecord, PipelineError> {
        let path = self.run_dir.join("protein.json");
        if !path.is_file() {
            return Err(PipelineError::MissingInput {
                stage,
                artifact: "protein.json (run extract)".to_string(),
            });
        }
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text).map_err(|e| {
            PipelineError::Precondition(format!("{} is not a protein record: {e}", path.display()))
        })
    }

    /// Run-relative rendering for notices, so a rerun into a different
    /// directory produces the same bytes.
    pub fn rel(&self, path: &Path) -> String {
        path.strip_prefix(&self.run_dir)
            .unwrap_or(path)
            .display()
            .to_string()
    }

    /// Relative input paths resolve against the fixtures directory.
    pub fn resolve_input(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.fixtures.join(p)
        }
    }
}

pub fn run_stage(ctx: &RunContext, stage: Stage) -> Result<Vec<String>, PipelineError> {
    let notices = match stage {
        Stage::Extract => extract(ctx)?,
        Stage::Ingest => ingest(ctx)?,
        Stage::Predict => predict(ctx)?,
        Stage::Flag => flag(ctx)?,
        Stage::RefineApply => refine_apply(ctx)?,
        Stage::Filter => filter(ctx)?,
        Stage::Select => select_stage(ctx)?,
        Stage::Report => report_stage(ctx)?,
        Stage::StructureManifest => structure_manifest(ctx)?,
        Stage::StructureIngest => structure_ingest(ctx)?,
    };
    write_notices(ctx, stage.name(), &notices)?;
    Ok(notices)
}

/// Runs every enabled stage in order; disabled stages leave a notice.
pub fn run_all(ctx: &RunContext) -> Result<Vec<(Stage, Vec<String>)>, PipelineError> {
    let mut out = Vec::new();
    for stage in Stage::ALL {
        if stage.enabled(&ctx.config.stages) {
            out.push((stage, run_stage(ctx, stage)?));
        } else {
            let notices = vec!["disabled in config; skipped".to_string()];
            write_notices(ctx, stage.name(), &notices)?;
            out.push((stage, notices));
        }
    }
    Ok(out)
}

fn write_notices(ctx: &RunContext, stage: &str, notices: &[String]) -> Result<(), PipelineError> {
    let dir = ctx.run_dir.join("notices");
    fs::create_dir_all(&dir)?;
    let mut text = String::new();
    for n in notices {
        text.push_str(n);
        text.push('\n');
    }
    fs::write(dir.join(format!("{stage}.txt")), text)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| PipelineError::Precondition(format!("serialize {}: {e}", path.display())))?;
    fs::write(path, format!("{text}\n"))?;
    Ok(())
}

fn run_adapter(command: &str, input: &Path, output: &Path) -> Result<(), PipelineError> {
    let result = Command::new(command)
        .arg(input)
        .arg(output)
        .output()
        .map_err(|e| PipelineError::Adapter {
            command: command.to_string(),
            status: -1,
            detail: e.to_string(),
        })?;
    if !result.status.success() {
        return Err(PipelineError::Adapter {
            command: command.to_string(),
            status: result.status.code().unwrap_or(-1),
            detail: String::from_utf8_lossy(&result.stderr).trim().to_string(),
        });
    }
    if !output.is_file() {
        return Err(PipelineError::Adapter {
            command: command.to_string(),
            status: 0,
            detail: format!("exited cleanly but wrote no output file {}", output.display()),
        });
    }
    Ok(())
}

pub fn extract(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let gene = ctx.config.target_gene.trim();
    if gene.is_empty() {
        return Err(PipelineError::Precondition("target_gene is empty".to_string()));
    }
    let transport = ctx.transport("extract")?;

    let protein = UniProtClient::new(transport, &ctx.config.endpoints).fetch_protein(gene)?;
    write_json(&ctx.run_dir.join("protein.json"), &protein)?;
    notices.push(format!("protein {} ({})", protein.accession, protein.gene));

    let drug = ctx.config.reference_drug.trim();
    if drug.is_empty() {
        notices.push("no reference drug configured; skipping drug lookup".to_string());
    } else {
        let record = ChemblClient::new(transport, &ctx.config.endpoints).fetch_drug_smiles(drug)?;
        write_json(&ctx.run_dir.join("drug.json"), &record)?;
        notices.push(format!("drug {} ({})", record.name, record.source_db_id));
    }
    Ok(notices)
}

pub fn ingest(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let list_path = if let Some(cmd) = &ctx.config.adapters.generator {
        let request = ctx.run_dir.join("generator_request.json");
        write_json(
            &request,
            &serde_json::json!({
                "gene": ctx.config.target_gene,
                "disease": ctx.config.disease,
            }),
        )?;
        let out = ctx.run_dir.join("generated.smi");
        run_adapter(cmd, &request, &out)?;
        notices.push(format!("generator adapter {cmd} wrote {}", ctx.rel(&out)));
        out
    } else {
        let p = ctx.resolve_input(&ctx.config.inputs.molecules);
        if !p.is_file() {
            return Err(PipelineError::MissingInput {
                stage: "ingest",
                artifact: format!("molecule list {}", p.display()),
            });
        }
        notices.push(format!(
            "generator adapter not configured; reading {}",
            p.display()
        ));
        p
    };

    let text = fs::read_to_string(&list_path)?;
    let molecules: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if molecules.is_empty() {
        return Err(PipelineError::Precondition(format!(
            "molecule list {} is empty",
            list_path.display()
        )));
    }

    let mut pool = if ctx.pool_path.is_file() {
        Pool::load(&ctx.pool_path)?
    } else {
        Pool::new()
    };
    let ingested = pool.ingest(molecules, Source::DeNovo, 0)?;
    notices.push(format!(
        "{} added, {} merged, {} quarantined",
        ingested.added.len(),
        ingested.merged.len(),
        ingested.quarantined.len()
    ));
    pool.save(&ctx.pool_path)?;
    Ok(notices)
}

pub fn predict(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let mut pool = ctx.load_pool("predict")?;
    let protein = ctx.protein("predict")?;
    let schema = AdmetSchema::builtin();

    let targets: Vec<usize> = pool
        .records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.status == Status::Valid && r.admet.is_none())
        .map(|(i, _)| i)
        .collect();
    if targets.is_empty() {
        notices.push("every valid record already has a profile".to_string());
        pool.save(&ctx.pool_path)?;
        return Ok(notices);
    }

    let smiles: Vec<String> = targets
        .iter()
        .map(|&i| {
            let r = &pool.records[i];
            r.canonical.as_deref().unwrap_or(&r.smiles).to_string()
        })
        .collect();

    let transport = ctx.transport("predict")?;
    let predictions = PredictionClient::new(
        transport,
        &ctx.config.endpoints.predict_url,
        &ctx.config.endpoints.retry,
    )
    .predict_properties(&smiles, schema)?;
    let affinity = AffinityClient::new(
        transport,
        &ctx.config.endpoints.affinity_url,
        &ctx.config.endpoints.retry,
    );

    for (&i, prediction) in targets.iter().zip(predictions) {
        let pkd = affinity.predict_affinity(&prediction.smiles, &protein.fasta)?;
        let rec = &mut pool.records[i];
        rec.admet = Some(prediction.profile);
        rec.pkd = Some(pkd);
        for (k, v) in prediction.extras {
            rec.extras.insert(k, v);
        }
    }
    notices.push(format!("{} profiles attached", targets.len()));
    pool.save(&ctx.pool_path)?;
    Ok(notices)
}

pub fn flag(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let mut pool = ctx.load_pool("flag")?;
    let schema = AdmetSchema::builtin();

    if !pool.records.iter().any(|r| r.admet.is_some()) {
        return Err(PipelineError::MissingInput {
            stage: "flag",
            artifact: "admet profiles (run predict)".to_string(),
        });
    }

    let mut flagged = 0usize;
    let mut clean = 0usize;
    for rec in &mut pool.records {
        let Some(profile) = &rec.admet else { continue };
        if rec.weakness.is_some() {
            flagged += 1;
            continue;
        }
        match flag_weakness(profile, schema) {
            Ok(w) => {
                rec.weakness = Some(w);
                flagged += 1;
            }
            Err(FlagError::NoWeakness) => clean += 1,
            Err(e) => return Err(e.into()),
        }
    }
    notices.push(format!("{flagged} flagged, {clean} clean"));
    pool.save(&ctx.pool_path)?;
    Ok(notices)
}

struct Proposal {
    parent: String,
    smiles: String,
    rationale: String,
}

const PROPOSALS_HEADER: &str = "parent_id\tsmiles\trationale";

fn parse_proposals(text: &str, path: &Path) -> Result<Vec<Proposal>, PipelineError> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != PROPOSALS_HEADER {
                return Err(PipelineError::Precondition(format!(
                    "{} line {}: expected header {:?}",
                    path.display(),
                    idx + 1,
                    PROPOSALS_HEADER
                )));
            }
            saw_header = true;
            continue;
        }
        let mut parts = line.splitn(3, '\t');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(parent), Some(smiles), Some(rationale)) => rows.push(Proposal {
                parent: parent.to_string(),
                smiles: smiles.to_string(),
                rationale: rationale.to_string(),
            }),
            _ => {
                return Err(PipelineError::Precondition(format!(
                    "{} line {}: expected parent_id<TAB>smiles<TAB>rationale",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    if !saw_header {
        return Err(PipelineError::Precondition(format!(
            "{} has no header line",
            path.display()
        )));
    }
    Ok(rows)
}

pub fn refine_apply(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let mut pool = ctx.load_pool("refine-apply")?;
    let protein = ctx.protein("refine-apply")?;
    let schema = AdmetSchema::builtin();

    let proposals_path = if let Some(cmd) = &ctx.config.adapters.refiner {
        let out = ctx.run_dir.join("proposals.tsv");
        run_adapter(cmd, &ctx.pool_path, &out)?;
        notices.push(format!("refiner adapter {cmd} wrote {}", ctx.rel(&out)));
        out
    } else {
        let p = ctx.resolve_input(&ctx.config.inputs.proposals);
        if !p.is_file() {
            return Err(PipelineError::MissingInput {
                stage: "refine-apply",
                artifact: format!("proposals file {}", p.display()),
            });
        }
        notices.push(format!(
            "refiner adapter not configured; reading {}",
            p.display()
        ));
        p
    };
    let rows = parse_proposals(&fs::read_to_string(&proposals_path)?, &proposals_path)?;

    // Everything is validated before the pool is touched or a request is
    // built, so a bad proposals file leaves no partial state.
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut pending: Vec<(&Proposal, AdmetProfile)> = Vec::new();
    for row in &rows {
        let parent = pool
            .get(&row.parent)
            .ok_or_else(|| PoolError::UnknownParent(row.parent.clone()))?;
        if parent.status != Status::Valid {
            return Err(PipelineError::Precondition(format!(
                "parent {} is quarantined",
                row.parent
            )));
        }
        let Some(before) = parent.admet.clone() else {
            return Err(PipelineError::MissingInput {
                stage: "refine-apply",
                artifact: format!("admet profile for parent {} (run predict)", row.parent),
            });
        };
        if !seen.insert(row.parent.as_str()) {
            return Err(PipelineError::Precondition(format!(
                "two proposals for parent {} in one round; one per parent per round",
                row.parent
            )));
        }
        let child_round = parent.round + 1;
        if let Some(existing) = pool
            .records
            .iter()
            .find(|r| r.parent_id.as_deref() == Some(row.parent.as_str()) && r.round == child_round)
        {
            let same = match smiles_core::canonical(&row.smiles) {
                Ok(c) => existing.canonical.as_deref() == Some(c.as_str()),
                Err(_) => existing.status == Status::Invalid && existing.smiles == row.smiles,
            };
            if same {
                notices.push(format!(
                    "proposal for {} already applied as {}; skipped",
                    row.parent, existing.id
                ));
                continue;
            }
            return Err(PipelineError::Precondition(format!(
                "parent {} already has a round {} child {}; one proposal per parent per round",
                row.parent, child_round, existing.id
            )));
        }
        pending.push((row, before));
    }

    let mut wire: Vec<String> = Vec::new();
    for (row, _) in &pending {
        if let Ok(c) = smiles_core::canonical(&row.smiles) {
            if !wire.contains(&c) {
                wire.push(c);
            }
        }
    }
    let mut enriched: BTreeMap<String, (AdmetProfile, f64)> = BTreeMap::new();
    if !wire.is_empty() {
        let transport = ctx.transport("refine-apply")?;
        let predictions = PredictionClient::new(
            transport,
            &ctx.config.endpoints.predict_url,
            &ctx.config.endpoints.retry,
        )
        .predict_properties(&wire, schema)?;
        let affinity = AffinityClient::new(
            transport,
            &ctx.config.endpoints.affinity_url,
            &ctx.config.endpoints.retry,
        );
        for p in predictions {
            let pkd = affinity.predict_affinity(&p.smiles, &protein.fasta)?;
            enriched.insert(p.smiles.clone(), (p.profile, pkd));
        }
    }

    for (row, before) in &pending {
        let canon = smiles_core::canonical(&row.smiles).ok();
        let after: AdmetProfile = canon
            .as_ref()
            .and_then(|c| enriched.get(c))
            .map(|(profile, _)| profile.clone())
            .unwrap_or_default();
        let applied =
            pool.record_refinement(&row.parent, &row.smiles, before, &after, ctx.config.epsilon, schema)?;

        let mut quarantine_code = None;
        {
            let child = pool.get_mut(&applied.child_id).expect("child just recorded");
            child
                .extras
                .insert("refine_rationale".to_string(), Value::String(row.rationale.clone()));
            if child.status == Status::Valid {
                if let Some((profile, pkd)) = canon.as_ref().and_then(|c| enriched.get(c)) {
                    child.admet = Some(profile.clone());
                    child.pkd = Some(*pkd);
                    match flag_weakness(profile, schema) {
                        Ok(w) => child.weakness = Some(w),
                        Err(FlagError::NoWeakness) => {}
                        Err(e) => return Err(e.into()),
                    }
                }
            } else {
                quarantine_code = Some(child.error.clone().unwrap_or_default());
            }
        }

        if let Some(code) = quarantine_code {
            notices.push(format!(
                "proposal for {} does not parse ({code}); child {} quarantined",
                row.parent, applied.child_id
            ));
        } else {
            let mut improved = 0;
            let mut declined = 0;
            let mut unchanged = 0;
            for outcome in &applied.outcomes {
                match outcome.classification {
                    Classification::Improved => improved += 1,
                    Classification::Declined => declined += 1,
                    Classification::Unchanged => unchanged += 1,
                }
            }
            notices.push(format!(
                "{} -> {}: improved {improved}, declined {declined}, unchanged {unchanged}",
                row.parent, applied.child_id
            ));
        }
    }
    pool.save(&ctx.pool_path)?;
    Ok(notices)
}

/// Alerts are fixed at zero: the descriptor engine does not perceive
/// structural alerts, and the desirability curve for the alert count is
/// monotone, so scores are comparable across the pool.
pub fn filter(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let mut pool = ctx.load_pool("filter")?;
    let params = qed::DesirabilityParams::builtin();

    let mut rules: BTreeMap<String, RuleReport> = BTreeMap::new();
    let mut scored = 0usize;
    for rec in &mut pool.records {
        if rec.status != Status::Valid {
            continue;
        }
        if rec.descriptors.is_none() {
            let source = rec.canonical.as_deref().unwrap_or(&rec.smiles);
            let graph = smiles_core::parse(source)
                .map_err(|e| PipelineError::Precondition(format!("{}: {e}", rec.id)))?;
            let computed = descriptors::compute_all(&graph);
            for warning in &computed.warnings {
                notices.push(format!("{}: {} ({})", rec.id, warning.code, warning.detail));
            }
            rec.descriptors = Some(computed.descriptors);
        }
        let desc = rec.descriptors.as_ref().expect("just attached");
        if rec.qed.is_none() {
            let score = qed::qed(desc, 0, params)
                .map_err(|e| PipelineError::Precondition(format!("{}: {e}", rec.id)))?;
            rec.qed = Some(score);
        }
        rules.insert(rec.id.clone(), evaluate_rules(desc));
        scored += 1;
    }

    write_json(&ctx.run_dir.join("rules.json"), &rules)?;
    notices.push(format!("{scored} candidates scored"));
    pool.save(&ctx.pool_path)?;
    Ok(notices)
}

fn load_rules(ctx: &RunContext, stage: &'static str) -> Result<BTreeMap<String, RuleReport>, PipelineError> {
    let path = ctx.run_dir.join("rules.json");
    if !path.is_file() {
        return Err(PipelineError::MissingInput {
            stage,
            artifact: "rules.json (run filter)".to_string(),
        });
    }
    let text = fs::read_to_string(&path)?;
    serde_json::from_str(&text).map_err(|e| {
        PipelineError::Precondition(format!("{} is not a rule report map: {e}", path.display()))
    })
}

fn load_selected(ctx: &RunContext, stage: &'static str) -> Result<Vec<String>, PipelineError> {
    let path = ctx.run_dir.join("selected.json");
    if !path.is_file() {
        return Err(PipelineError::MissingInput {
            stage,
            artifact: "selected.json (run select)".to_string(),
        });
    }
    let text = fs::read_to_string(&path)?;
    serde_json::from_str(&text).map_err(|e| {
        PipelineError::Precondition(format!("{} is not a selection list: {e}", path.display()))
    })
}

pub fn select_stage(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let pool = ctx.load_pool("select")?;
    let rules = load_rules(ctx, "select")?;
    let criteria = SelectionCriteria::profile(&ctx.config.profile)
        .ok_or_else(|| PipelineError::Config(format!("unknown profile {:?}", ctx.config.profile)))?;

    let mut tsv = String::from("id\tround\trules_passed\tqed\tpkd\tselected\n");
    let mut selected: Vec<String> = Vec::new();
    let mut considered = 0usize;
    for rec in &pool.records {
        if rec.status != Status::Valid {
            continue;
        }
        let report = rules.get(&rec.id).ok_or_else(|| PipelineError::MissingInput {
            stage: "select",
            artifact: format!("rule report for {} (rerun filter)", rec.id),
        })?;
        let Some(score) = &rec.qed else {
            return Err(PipelineError::MissingInput {
                stage: "select",
                artifact: format!("qed score for {} (rerun filter)", rec.id),
            });
        };
        considered += 1;
        let keep = match rec.pkd {
            Some(pkd) => select(report, score.value, pkd, &criteria),
            None => false,
        };
        let pkd_cell = match rec.pkd {
            Some(p) => format!("{p:.2}"),
            None => "--".to_string(),
        };
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{:.3}\t{}\t{}\n",
            rec.id,
            rec.round,
            report.rules_passed,
            score.value,
            pkd_cell,
            if keep { "yes" } else { "no" }
        ));
        if keep {
            selected.push(rec.id.clone());
        }
    }

    fs::write(ctx.run_dir.join("selection.tsv"), tsv)?;
    write_json(&ctx.run_dir.join("selected.json"), &selected)?;
    notices.push(format!(
        "{} of {considered} selected under profile {}",
        selected.len(),
        ctx.config.profile
    ));
    Ok(notices)
}

pub fn report_stage(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let pool = ctx.load_pool("report")?;
    let rules = load_rules(ctx, "report")?;
    let selected = load_selected(ctx, "report")?;
    report::write_report(ctx, &pool, &rules, &selected)
}

pub fn structure_manifest(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let pool = ctx.load_pool("structure-manifest")?;
    let protein = ctx.protein("structure-manifest")?;
    let selected = load_selected(ctx, "structure-manifest")?;

    validate_fasta(&protein.fasta)
        .map_err(|e| PipelineError::Precondition(format!("protein fasta: {e}")))?;

    let jobs_dir = ctx.run_dir.join("structure").join("jobs");
    fs::create_dir_all(&jobs_dir)?;
    for id in &selected {
        let rec = pool.get(id).ok_or_else(|| PoolError::UnknownCandidate(id.clone()))?;
        let smiles = rec.canonical.as_deref().unwrap_or(&rec.smiles).to_string();
        smiles_core::parse(&smiles)
            .map_err(|e| PipelineError::Precondition(format!("{id}: {e}")))?;
        let manifest = StructureJobManifest {
            candidate: id.clone(),
            smiles,
            fasta: protein.fasta.clone(),
            requested_outputs: RequestedOutputs {
                complex_structure: true,
                ic50: true,
                inhibitor_probability: true,
            },
        };
        write_json(&jobs_dir.join(format!("{id}.json")), &manifest)?;
    }
    notices.push(format!("{} manifests written", selected.len()));

    if let Some(cmd) = &ctx.config.adapters.structure {
        let out = ctx.run_dir.join("structure").join("results.tsv");
        run_adapter(cmd, &jobs_dir, &out)?;
        notices.push(format!("structure adapter {cmd} wrote {}", ctx.rel(&out)));
    } else {
        notices.push("structure adapter not configured; manifests await external processing".to_string());
    }
    Ok(notices)
}

const RESULTS_HEADER: &str = "candidate_id\tic50_molar\tinhibitor_probability";

pub fn structure_ingest(ctx: &RunContext) -> Result<Vec<String>, PipelineError> {
    let mut notices = Vec::new();
    let mut pool = ctx.load_pool("structure-ingest")?;

    let adapter_out = ctx.run_dir.join("structure").join("results.tsv");
    let path = if adapter_out.is_file() {
        adapter_out
    } else {
        let p = ctx.resolve_input(&ctx.config.inputs.structure_results);
        if !p.is_file() {
            return Err(PipelineError::MissingInput {
                stage: "structure-ingest",
                artifact: format!("structure results file {}", p.display()),
            });
        }
        p
    };
    notices.push(format!("reading {}", ctx.rel(&path)));

    let text = fs::read_to_string(&path)?;
    let mut saw_header = false;
    let mut attached = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != RESULTS_HEADER {
                return Err(PipelineError::Precondition(format!(
                    "{} line {}: expected header {:?}",
                    path.display(),
                    idx + 1,
                    RESULTS_HEADER
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, ic50_text, prob_text] = fields.as_slice() else {
            return Err(PipelineError::Precondition(format!(
                "{} line {}: expected candidate_id<TAB>ic50_molar<TAB>inhibitor_probability",
                path.display(),
                idx + 1
            )));
        };
        let ic50: f64 = ic50_text.parse().map_err(|_| {
            PipelineError::Schema(format!("ic50_molar {ic50_text:?} for {id} is not a number"))
        })?;
        if !(ic50.is_finite() && ic50 > 0.0) {
            return Err(PipelineError::Schema(format!(
                "ic50_molar {ic50} for {id} must be a positive molar concentration"
            )));
        }
        let prob: f64 = prob_text.parse().map_err(|_| {
            PipelineError::Schema(format!(
                "inhibitor_probability {prob_text:?} for {id} is not a number"
            ))
        })?;
        if !(0.0..=1.0).contains(&prob) {
            return Err(PipelineError::Schema(format!(
                "inhibitor_probability {prob} for {id} outside [0, 1]"
            )));
        }
        let rec = pool
            .get_mut(id)
            .ok_or_else(|| PoolError::UnknownCandidate(id.to_string()))?;
        rec.extras.insert("ic50_molar".to_string(), serde_json::json!(ic50));
        rec.extras
            .insert("inhibitor_probability".to_string(), serde_json::json!(prob));
        attached += 1;
    }
    if !saw_header {
        return Err(PipelineError::Precondition(format!(
            "{} has no header line",
            path.display()
        )));
    }
    notices.push(format!("{attached} results attached"));
    pool.save(&ctx.pool_path)?;
    Ok(notices)
}
