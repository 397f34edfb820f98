//! Quantitative estimate of drug-likeness: a weighted geometric mean of
//! asymmetric double sigmoid desirabilities over eight descriptor values.

use std::fmt;

use descriptors::DescriptorSet;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use smiles_core::MolGraph;
use thiserror::Error;

/// Floor applied to each desirability before the logarithm.
pub const DESIRABILITY_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    Mw,
    Alogp,
    Hba,
    Hbd,
    Psa,
    Rotb,
    Arom,
    Alerts,
}

pub const PROPERTIES: [Property; 8] = [
    Property::Mw,
    Property::Alogp,
    Property::Hba,
    Property::Hbd,
    Property::Psa,
    Property::Rotb,
    Property::Arom,
    Property::Alerts,
];

impl Property {
    pub fn key(self) -> &'static str {
        match self {
            Property::Mw => "MW",
            Property::Alogp => "ALOGP",
            Property::Hba => "HBA",
            Property::Hbd => "HBD",
            Property::Psa => "PSA",
            Property::Rotb => "ROTB",
            Property::Arom => "AROM",
            Property::Alerts => "ALERTS",
        }
    }

    fn from_key(key: &str) -> Option<Property> {
        PROPERTIES.iter().copied().find(|p| p.key() == key)
    }

    pub fn index(self) -> usize {
        PROPERTIES.iter().position(|&p| p == self).unwrap()
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Error)]
pub enum ParameterError {
    #[error("parameter file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{property}: {reason}")]
    BadShape { property: Property, reason: String },
    #[error("{property}: negative weight")]
    NegativeWeight { property: Property },
    #[error("all weights are zero")]
    ZeroWeights,
    #[error("alert count {count} is negative")]
    NegativeAlerts { count: i64 },
    #[error("geometric mean input: {0}")]
    Input(String),
}

/// One asymmetric double sigmoid: a + b/(1+exp(-(x-c+d/2)/e)) * (1 - 1/(1+exp(-(x-c-d/2)/f))).
#[derive(Clone, Copy, Debug)]
pub struct Ads {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub dmax: f64,
}

impl Ads {
    pub fn eval(&self, x: f64) -> f64 {
        let s1 = 1.0 + (-(x - self.c + self.d / 2.0) / self.e).exp();
        let s2 = 1.0 + (-(x - self.c - self.d / 2.0) / self.f).exp();
        self.a + self.b / s1 * (1.0 - 1.0 / s2)
    }
}

#[derive(Clone, Debug)]
pub struct DesirabilityParams {
    pub set: String,
    pub version: u32,
    pub ads: [Ads; 8],
    pub weights: [f64; 8],
}

static BUILTIN: Lazy<DesirabilityParams> = Lazy::new(|| {
    let p = DesirabilityParams::parse(include_str!("../data/qed_params.tsv"))
        .expect("builtin parameter file");
    assert_eq!(p.set, "QEDw,mo");
    p
});

impl DesirabilityParams {
    /// The mean-optimised weight set shipped with the crate.
    pub fn builtin() -> &'static DesirabilityParams {
        &BUILTIN
    }

    pub fn parse(text: &str) -> Result<DesirabilityParams, ParameterError> {
        let mut set = None;
        let mut rows: [Option<Ads>; 8] = [None; 8];
        let mut weights = [0.0; 8];
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let err = |reason: &str| ParameterError::Parse {
                line: lineno,
                reason: reason.to_string(),
            };
            if let Some(rest) = line.strip_prefix("!set") {
                let mut it = rest.split_whitespace();
                let name = it.next().ok_or_else(|| err("missing set name"))?;
                let version = it
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| err("missing or bad set version"))?;
                set = Some((name.to_string(), version));
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 9 {
                return Err(err("expected 9 tab-separated fields"));
            }
            let prop = Property::from_key(fields[0])
                .ok_or_else(|| err(&format!("unknown property {:?}", fields[0])))?;
            if rows[prop.index()].is_some() {
                return Err(err(&format!("duplicate row for {prop}")));
            }
            let mut num = [0.0f64; 8];
            for (slot, raw) in num.iter_mut().zip(&fields[1..]) {
                *slot = raw
                    .parse()
                    .map_err(|_| err(&format!("bad number {raw:?}")))?;
            }
            rows[prop.index()] = Some(Ads {
                a: num[0],
                b: num[1],
                c: num[2],
                d: num[3],
                e: num[4],
                f: num[5],
                dmax: num[6],
            });
            weights[prop.index()] = num[7];
        }
        let (set, version) = set.ok_or(ParameterError::Parse {
            line: 0,
            reason: "missing !set row".to_string(),
        })?;
        let mut ads = [Ads {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            e: 1.0,
            f: 1.0,
            dmax: 1.0,
        }; 8];
        for p in PROPERTIES {
            ads[p.index()] = rows[p.index()].ok_or(ParameterError::Parse {
                line: 0,
                reason: format!("missing row for {p}"),
            })?;
        }
        let params = DesirabilityParams {
            set,
            version,
            ads,
            weights,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ParameterError> {
        for p in PROPERTIES {
            let ads = &self.ads[p.index()];
            let shape = |reason: &str| ParameterError::BadShape {
                property: p,
                reason: reason.to_string(),
            };
            for v in [ads.a, ads.b, ads.c, ads.d, ads.e, ads.f, ads.dmax] {
                if !v.is_finite() {
                    return Err(shape("non-finite coefficient"));
                }
            }
            if ads.e <= 0.0 || ads.f <= 0.0 {
                return Err(shape("sigmoid slopes must be positive"));
            }
            if ads.dmax <= 0.0 {
                return Err(shape("dmax must be positive"));
            }
            let w = self.weights[p.index()];
            if !w.is_finite() || w < 0.0 {
                return Err(ParameterError::NegativeWeight { property: p });
            }
        }
        if self.weights.iter().sum::<f64>() == 0.0 {
            return Err(ParameterError::ZeroWeights);
        }
        Ok(())
    }

    /// Normalised desirability for one property, clamped into [1e-6, 1].
    pub fn desirability(&self, p: Property, x: f64) -> f64 {
        let ads = &self.ads[p.index()];
        (ads.eval(x) / ads.dmax).clamp(DESIRABILITY_FLOOR, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QedScore {
    pub value: f64,
    /// Clamped desirabilities in MW, ALOGP, HBA, HBD, PSA, ROTB, AROM, ALERTS order.
    pub desirabilities: [f64; 8],
    /// Provenance notes attached by the scoring path, e.g. "no-alert-engine".
    pub notes: Vec<String>,
}

impl QedScore {
    pub fn desirability(&self, p: Property) -> f64 {
        self.desirabilities[p.index()]
    }
}

/// exp( sum w ln d / sum w ). Inputs must be positive; weights nonnegative.
pub fn weighted_geometric_mean(d: &[f64], w: &[f64]) -> Result<f64, ParameterError> {
    if d.len() != w.len() || d.is_empty() {
        return Err(ParameterError::Input(format!(
            "{} values against {} weights",
            d.len(),
            w.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (&di, &wi) in d.iter().zip(w) {
        if !(di > 0.0) {
            return Err(ParameterError::Input(format!("nonpositive value {di}")));
        }
        if wi < 0.0 {
            return Err(ParameterError::Input(format!("negative weight {wi}")));
        }
        num += wi * di.ln();
        den += wi;
    }
    if den == 0.0 {
        return Err(ParameterError::ZeroWeights);
    }
    Ok((num / den).exp())
}

pub fn qed(
    desc: &DescriptorSet,
    alerts: u32,
    params: &DesirabilityParams,
) -> Result<QedScore, ParameterError> {
    params.validate()?;
    let xs = [
        desc.mw,
        desc.logp,
        desc.hba as f64,
        desc.hbd as f64,
        desc.tpsa,
        desc.rotb as f64,
        desc.aromatic_rings as f64,
        alerts as f64,
    ];
    let mut ds = [0.0; 8];
    for (i, p) in PROPERTIES.into_iter().enumerate() {
        ds[i] = params.desirability(p, xs[i]);
    }
    let value = weighted_geometric_mean(&ds, &params.weights)?;
    Ok(QedScore {
        value,
        desirabilities: ds,
        notes: Vec::new(),
    })
}

/// Counts structural alerts. The default engine has no pattern library and
/// reports zero alerts, disclosing itself through a provenance note.
pub trait AlertEngine {
    fn alert_count(&self, mol: &MolGraph) -> i64;
    fn provenance_note(&self) -> Option<String> {
        None
    }
}

pub struct NoAlertEngine;

impl AlertEngine for NoAlertEngine {
    fn alert_count(&self, _mol: &MolGraph) -> i64 {
        0
    }
    fn provenance_note(&self) -> Option<String> {
        Some("no-alert-engine".to_string())
    }
}

pub fn score(
    mol: &MolGraph,
    desc: &DescriptorSet,
    engine: &dyn AlertEngine,
    params: &DesirabilityParams,
) -> Result<QedScore, ParameterError> {
    let count = engine.alert_count(mol);
    if count < 0 {
        return Err(ParameterError::NegativeAlerts { count });
    }
    let mut s = qed(desc, count as u32, params)?;
    if let Some(note) = engine.provenance_note() {
        s.notes.push(note);
    }
    Ok(s)
}
