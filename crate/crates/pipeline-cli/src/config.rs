use std::path::Path;

use bio_clients::EndpointConfig;
use serde::{Deserialize, Serialize};

use crate::error::PipelineError;

/// Whole-run configuration. Loaded from a TOML file; every field has a
/// default and the CLI flags override file values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub target_gene: String,
    /// Free-text context carried into artifacts; nothing branches on it.
    pub disease: String,
    /// Looked up in ChEMBL during extract; empty skips the lookup.
    pub reference_drug: String,
    pub profile: String,
    pub run_dir: String,
    pub fixtures_dir: String,
    /// Empty means `<run_dir>/pool.jsonl`.
    pub pool_file: String,
    pub qed_thresholds: Vec<f64>,
    pub epsilon: f64,
    pub stages: StageToggles,
    pub adapters: Adapters,
    pub inputs: Inputs,
    pub endpoints: EndpointConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            target_gene: "BCL2".to_string(),
            disease: String::new(),
            reference_drug: String::new(),
            profile: "main".to_string(),
            run_dir: "run".to_string(),
            fixtures_dir: "fixtures".to_string(),
            pool_file: String::new(),
            qed_thresholds: vec![0.5, 0.6, 0.7],
            epsilon: candidate_pool::DEFAULT_EPSILON,
            stages: StageToggles::default(),
            adapters: Adapters::default(),
            inputs: Inputs::default(),
            endpoints: EndpointConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageToggles {
    pub extract: bool,
    pub ingest: bool,
    pub predict: bool,
    pub flag: bool,
    pub refine_apply: bool,
    pub filter: bool,
    pub select: bool,
    pub report: bool,
    pub structure_manifest: bool,
    pub structure_ingest: bool,
}

impl Default for StageToggles {
    fn default() -> Self {
        StageToggles {
            extract: true,
            ingest: true,
            predict: true,
            flag: true,
            refine_apply: true,
            filter: true,
            select: true,
            report: true,
            structure_manifest: true,
            structure_ingest: true,
        }
    }
}

/// External tool commands, each invoked as `<command> <input> <output>`.
/// Unset adapters make the owning stage fall back to a bundled input file,
/// with a recorded notice.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Adapters {
    pub generator: Option<String>,
    pub refiner: Option<String>,
    pub structure: Option<String>,
}

/// Input files consumed when the corresponding adapter is unset. Relative
/// paths resolve against the fixtures directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Inputs {
    pub molecules: String,
    pub proposals: String,
    pub structure_results: String,
}

impl Default for Inputs {
    fn default() -> Self {
        Inputs {
            molecules: "demo_molecules.smi".to_string(),
            proposals: "proposals.tsv".to_string(),
            structure_results: "structure_results.tsv".to_string(),
        }
    }
}
