use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("{quantity} must be positive, got {value}")]
    NonPositive { quantity: &'static str, value: f64 },
    #[error("substrate concentration must be nonnegative, got {0}")]
    NegativeSubstrate(f64),
}

fn positive(quantity: &'static str, value: f64) -> Result<f64, DomainError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(DomainError::NonPositive { quantity, value })
    }
}

/// Ki from a competition assay: ic50 / (1 + s/km).
pub fn cheng_prusoff(ic50: f64, s: f64, km: f64) -> Result<f64, DomainError> {
    positive("ic50", ic50)?;
    positive("km", km)?;
    if !(s >= 0.0) {
        return Err(DomainError::NegativeSubstrate(s));
    }
    Ok(ic50 / (1.0 + s / km))
}

pub fn pkd_from_kd(kd: f64) -> Result<f64, DomainError> {
    positive("kd", kd)?;
    Ok(-kd.log10())
}

pub fn kd_from_pkd(pkd: f64) -> f64 {
    10f64.powf(-pkd)
}

/// Binding-affinity bundle around a dissociation constant in molar units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffinityRecord {
    pub kd: f64,
    pub pkd: f64,
    pub ic50: Option<f64>,
    pub ki: Option<f64>,
    pub substrate_conc: Option<f64>,
    pub km: Option<f64>,
}

impl AffinityRecord {
    pub fn from_kd(kd: f64) -> Result<AffinityRecord, DomainError> {
        Ok(AffinityRecord {
            kd,
            pkd: pkd_from_kd(kd)?,
            ic50: None,
            ki: None,
            substrate_conc: None,
            km: None,
        })
    }

    pub fn from_pkd(pkd: f64) -> AffinityRecord {
        AffinityRecord {
            kd: kd_from_pkd(pkd),
            pkd,
            ic50: None,
            ki: None,
            substrate_conc: None,
            km: None,
        }
    }

    /// Attach assay inputs and the derived Ki.
    pub fn with_inhibition(mut self, ic50: f64, s: f64, km: f64) -> Result<AffinityRecord, DomainError> {
        self.ki = Some(cheng_prusoff(ic50, s, km)?);
        self.ic50 = Some(ic50);
        self.substrate_conc = Some(s);
        self.km = Some(km);
        Ok(self)
    }
}
