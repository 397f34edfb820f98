use percent_encoding::{utf8_percent_encode, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use crate::{execute_with_policy, ClientError, EndpointConfig, Request, Transport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrugRecord {
    pub name: String,
    pub smiles: String,
    pub source_db_id: String,
}

pub fn drug_request(config: &EndpointConfig, name: &str) -> Request {
    let mut req = Request::get(format!(
        "{}/chembl/api/data/molecule.json?pref_name__iexact={}",
        config.chembl_base,
        utf8_percent_encode(name, NON_ALPHANUMERIC)
    ));
    req.headers = config.auth_headers();
    req
}

#[derive(Deserialize)]
struct MoleculePage {
    molecules: Vec<Molecule>,
}

#[derive(Deserialize)]
struct Molecule {
    #[serde(default)]
    molecule_chembl_id: Option<String>,
    #[serde(default)]
    pref_name: Option<String>,
    #[serde(default)]
    molecule_structures: Option<Structures>,
}

#[derive(Deserialize)]
struct Structures {
    #[serde(default)]
    canonical_smiles: Option<String>,
}

pub struct ChemblClient<'t> {
    transport: &'t dyn Transport,
    config: &'t EndpointConfig,
}

impl<'t> ChemblClient<'t> {
    pub fn new(transport: &'t dyn Transport, config: &'t EndpointConfig) -> Self {
        ChemblClient { transport, config }
    }

    pub fn fetch_drug_smiles(&self, name: &str) -> Result<DrugRecord, ClientError> {
        if name.trim().is_empty() {
            return Err(ClientError::Precondition("empty drug name".to_string()));
        }
        let req = drug_request(self.config, name);
        let resp = execute_with_policy(self.transport, &req, &self.config.retry)?;
        let page: MoleculePage = serde_json::from_str(&resp.body)
            .map_err(|e| ClientError::MalformedResponse(e.to_string()))?;
        match page.molecules.len() {
            0 => Err(ClientError::NotFound {
                what: format!("drug {name}"),
            }),
            1 => {
                let m = &page.molecules[0];
                let smiles = m
                    .molecule_structures
                    .as_ref()
                    .and_then(|s| s.canonical_smiles.clone())
                    .ok_or_else(|| {
                        ClientError::MalformedResponse("record lacks canonical_smiles".to_string())
                    })?;
                smiles_core::parse(&smiles).map_err(|e| {
                    ClientError::MalformedResponse(format!(
                        "fetched SMILES does not parse ({})",
                        e.code()
                    ))
                })?;
                Ok(DrugRecord {
                    name: m.pref_name.clone().unwrap_or_else(|| name.to_string()),
                    smiles,
                    source_db_id: m.molecule_chembl_id.clone().unwrap_or_default(),
                })
            }
            _ => Err(ClientError::AmbiguousName {
                name: name.to_string(),
                candidates: page
                    .molecules
                    .iter()
                    .map(|m| {
                        let id = m.molecule_chembl_id.as_deref().unwrap_or("?");
                        let pref = m.pref_name.as_deref().unwrap_or("?");
                        format!("{id} {pref}")
                    })
                    .collect(),
            }),
        }
    }
}
