use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use crate::{execute_with_policy, ClientError, EndpointConfig, Request, Transport};

/// Keep unreserved marks and ':' readable; everything else gets encoded.
const QUERY: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'_')
    .remove(b'.')
    .remove(b'~')
    .remove(b':');

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProteinRecord {
    pub accession: String,
    pub gene: String,
    pub organism_id: u32,
    /// Header line plus sequence lines, as served.
    pub fasta: String,
}

pub fn protein_request(config: &EndpointConfig, gene: &str) -> Request {
    let query = format!("gene_exact:{gene} AND organism_id:9606");
    let mut req = Request::get(format!(
        "{}/uniprotkb/search?format=fasta&size=1&query={}",
        config.uniprot_base,
        utf8_percent_encode(&query, QUERY)
    ));
    req.headers = config.auth_headers();
    req
}

/// A '>' header then amino-acid letters only. Uppercase A-Z covers the
/// standard residues plus the IUPAC ambiguity and rare-residue codes.
pub fn validate_fasta(text: &str) -> Result<(), String> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if !header.starts_with('>') {
        return Err("missing '>' header".to_string());
    }
    let mut residues = 0usize;
    for line in lines {
        if line.starts_with('>') {
            break;
        }
        for ch in line.chars() {
            if !ch.is_ascii_uppercase() {
                return Err(format!("invalid sequence character {ch:?}"));
            }
            residues += 1;
        }
    }
    if residues == 0 {
        return Err("empty sequence".to_string());
    }
    Ok(())
}

fn accession_of(header: &str) -> String {
    let bare = header.trim_start_matches('>');
    // UniProt style ">sp|P10415|BCL2_HUMAN ..." carries it between pipes.
    if let Some(acc) = bare.split('|').nth(1) {
        if !acc.is_empty() && bare.contains('|') {
            return acc.to_string();
        }
    }
    bare.split_whitespace().next().unwrap_or("").to_string()
}

pub struct UniProtClient<'t> {
    transport: &'t dyn Transport,
    config: &'t EndpointConfig,
}

impl<'t> UniProtClient<'t> {
    pub fn new(transport: &'t dyn Transport, config: &'t EndpointConfig) -> Self {
        UniProtClient { transport, config }
    }

    pub fn fetch_protein(&self, gene: &str) -> Result<ProteinRecord, ClientError> {
        if gene.trim().is_empty() {
            return Err(ClientError::Precondition("empty gene symbol".to_string()));
        }
        let req = protein_request(self.config, gene);
        let resp = execute_with_policy(self.transport, &req, &self.config.retry)?;
        if resp.body.trim().is_empty() {
            return Err(ClientError::NotFound {
                what: format!("protein for gene {gene}"),
            });
        }
        // First record only; the query already pins size=1.
        let mut record_lines = Vec::new();
        for (i, line) in resp.body.lines().enumerate() {
            if i > 0 && line.starts_with('>') {
                break;
            }
            record_lines.push(line);
        }
        let fasta = record_lines.join("\n");
        validate_fasta(&fasta).map_err(ClientError::MalformedResponse)?;
        Ok(ProteinRecord {
            accession: accession_of(record_lines[0]),
            gene: gene.to_string(),
            organism_id: 9606,
            fasta,
        })
    }
}
