use std::collections::BTreeMap;

use pharmacokinetics::{AdmetProfile, AdmetSchema, AdmetValue};
use serde::Deserialize;
use serde_json::Value;

use crate::{execute_with_policy, validate_fasta, ClientError, Request, RetryPolicy, Transport};

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub smiles: String,
    /// Exactly the schema's property ids.
    pub profile: AdmetProfile,
    /// Response keys outside the schema, preserved verbatim.
    pub extras: BTreeMap<String, Value>,
}

pub fn properties_request(url: &str, smiles: &[String]) -> Request {
    let body = serde_json::json!({ "smiles": smiles });
    Request::post_json(url, body.to_string())
}

pub fn affinity_request(url: &str, smiles: &str, fasta: &str) -> Request {
    let body = serde_json::json!({ "fasta": fasta, "smiles": smiles });
    Request::post_json(url, body.to_string())
}

#[derive(Deserialize)]
struct PredictResponse {
    predictions: Vec<BTreeMap<String, Value>>,
}

fn to_admet_value(id: &str, value: &Value) -> Result<AdmetValue, ClientError> {
    match value {
        Value::Number(n) => n.as_f64().map(AdmetValue::Number).ok_or_else(|| {
            ClientError::MalformedResponse(format!("{id}: number out of f64 range"))
        }),
        Value::String(s) => Ok(AdmetValue::Label(s.clone())),
        other => Err(ClientError::MalformedResponse(format!(
            "{id}: expected number or string, got {other}"
        ))),
    }
}

pub struct PredictionClient<'t> {
    transport: &'t dyn Transport,
    url: &'t str,
    retry: &'t RetryPolicy,
}

impl<'t> PredictionClient<'t> {
    pub fn new(transport: &'t dyn Transport, url: &'t str, retry: &'t RetryPolicy) -> Self {
        PredictionClient {
            transport,
            url,
            retry,
        }
    }

    pub fn predict_properties(
        &self,
        smiles: &[String],
        schema: &AdmetSchema,
    ) -> Result<Vec<Prediction>, ClientError> {
        for s in smiles {
            smiles_core::parse(s).map_err(|e| {
                ClientError::Precondition(format!("SMILES {s:?} does not parse ({})", e.code()))
            })?;
        }
        let req = properties_request(self.url, smiles);
        let resp = execute_with_policy(self.transport, &req, self.retry)?;
        let parsed: PredictResponse = serde_json::from_str(&resp.body)
            .map_err(|e| ClientError::MalformedResponse(e.to_string()))?;
        if parsed.predictions.len() != smiles.len() {
            return Err(ClientError::MalformedResponse(format!(
                "asked for {} predictions, got {}",
                smiles.len(),
                parsed.predictions.len()
            )));
        }
        let mut out = Vec::with_capacity(smiles.len());
        for (s, raw) in smiles.iter().zip(&parsed.predictions) {
            let mut profile = AdmetProfile::new();
            let mut extras = BTreeMap::new();
            for (key, value) in raw {
                if schema.get(key).is_some() {
                    profile.insert(key.clone(), to_admet_value(key, value)?);
                } else {
                    extras.insert(key.clone(), value.clone());
                }
            }
            for def in schema.iter() {
                if !profile.contains_key(&def.id) {
                    return Err(ClientError::SchemaError {
                        property: def.id.clone(),
                    });
                }
            }
            out.push(Prediction {
                smiles: s.clone(),
                profile,
                extras,
            });
        }
        Ok(out)
    }
}

pub struct AffinityClient<'t> {
    transport: &'t dyn Transport,
    url: &'t str,
    retry: &'t RetryPolicy,
}

impl<'t> AffinityClient<'t> {
    pub fn new(transport: &'t dyn Transport, url: &'t str, retry: &'t RetryPolicy) -> Self {
        AffinityClient {
            transport,
            url,
            retry,
        }
    }

    pub fn predict_affinity(&self, smiles: &str, fasta: &str) -> Result<f64, ClientError> {
        smiles_core::parse(smiles).map_err(|e| {
            ClientError::Precondition(format!("SMILES does not parse ({})", e.code()))
        })?;
        validate_fasta(fasta)
            .map_err(|e| ClientError::Precondition(format!("invalid FASTA: {e}")))?;
        let req = affinity_request(self.url, smiles, fasta);
        let resp = execute_with_policy(self.transport, &req, self.retry)?;
        let parsed: Value = serde_json::from_str(&resp.body)
            .map_err(|e| ClientError::MalformedResponse(e.to_string()))?;
        let pkd = parsed.get("pkd").ok_or(ClientError::SchemaError {
            property: "pkd".to_string(),
        })?;
        // Accept both a JSON number and its quoted form.
        let value = match pkd {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => s.trim().parse::<f64>().ok(),
            _ => None,
        }
        .ok_or_else(|| ClientError::MalformedResponse(format!("pkd not numeric: {pkd}")))?;
        if !value.is_finite() {
            return Err(ClientError::MalformedResponse(format!(
                "pkd not finite: {value}"
            )));
        }
        Ok(value)
    }
}
