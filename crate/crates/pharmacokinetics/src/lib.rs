//! Binding-affinity conversions and ADMET weakness flagging.
//!
//! The property schema (74 absorption/distribution/metabolism/excretion/
//! toxicity/general endpoints with risk gates) drives both the per-molecule
//! weakness flag and the aggregate weakness distribution tables.

mod affinity;
mod flag;
mod schema;

pub use affinity::{cheng_prusoff, kd_from_pkd, pkd_from_kd, AffinityRecord, DomainError};
pub use flag::{
    distribution_tsv, flag_weakness, severity, weakness_distribution, AdmetProfile, AdmetValue,
    CategoryShare, Distribution, FlagError, PropertyShare, WeaknessFlag,
};
pub use schema::{
    AdmetSchema, Category, Direction, PropertyDef, SchemaError, ValueKind, CATEGORIES,
};
