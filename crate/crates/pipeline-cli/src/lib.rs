//! Stage runner for the screening pipeline: pulls target and reference data
//! through recorded HTTP fixtures, pools generated molecules, enriches them
//! with predicted properties, applies refinement proposals, filters and
//! selects, then emits report sheets and structure job manifests.

pub mod config;
pub mod error;
pub mod report;
pub mod stages;

pub use config::PipelineConfig;
pub use error::PipelineError;
pub use stages::{run_all, run_stage, RequestedOutputs, RunContext, Stage, StructureJobManifest};
