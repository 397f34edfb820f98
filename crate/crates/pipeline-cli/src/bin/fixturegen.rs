//! Regenerates the bundled demo: molecule list, refinement proposals,
//! recorded HTTP fixtures, structure results, and the demo config file.
//! Responses are synthesized here once and recorded through the same
//! request builders the pipeline uses, so replayed keys always agree.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use bio_clients::{ClientError, EndpointConfig, RecordTransport, Request, Response, Transport};
use pharmacokinetics::{AdmetSchema, Direction, PropertyDef, ValueKind};
use pipeline_cli::stages::{run_stage, RunContext, Stage};
use pipeline_cli::PipelineConfig;
use serde_json::{json, Map, Value};

const GENE: &str = "BCL2";
const DISEASE: &str = "follicular lymphoma";
const REFERENCE_DRUG: &str = "venetoclax";

const VENETOCLAX: &str = "CC1(C)CCC(CN2CCN(c3ccc(C(=O)NS(=O)(=O)c4ccc(NCC5CCOCC5)c([N+](=O)[O-])c4)c(Oc4cnc5[nH]ccc5c4)c3)CC2)=C(c2ccc(Cl)cc2)C1";

const BCL2_FASTA: &str = "\
>sp|P10415|BCL2_HUMAN Apoptosis regulator Bcl-2 OS=Homo sapiens OX=9606 GN=BCL2 PE=1 SV=2
MAHAGRTGYDNREIVMKYIHYKLSQRGYEWDAGDVGAAPPGAAPAPGIFSSQPGHTPHPA
ASRDPVARTSPLQTPAAPGAAAGPALSPVPPVVHLTLRQAGDDFSRRYRRDFAEMSSQLH
LTPFTARGRFATVVEELFRDGVNWGRIVAFFEFGGVMCVESVNREMSPLVDNIALWMTEY
LNRHLHTWIQDNGGWDAFVELYGPSMRPLFDFSWLSLKTLLSLALVGACITLGAYLGHK
";

/// (raw smiles, breached properties with severity, worsened-but-safe
/// properties with fraction of scale, pkd)
struct DemoMol {
    smiles: &'static str,
    breaches: &'static [(&'static str, f64)],
    worsen: &'static [(&'static str, f64)],
    pkd: f64,
}

const fn demo(
    smiles: &'static str,
    breaches: &'static [(&'static str, f64)],
    worsen: &'static [(&'static str, f64)],
    pkd: f64,
) -> DemoMol {
    DemoMol {
        smiles,
        breaches,
        worsen,
        pkd,
    }
}

const ROUND0: &[DemoMol] = &[
    demo("CC(=O)Oc1ccccc1C(=O)O", &[("dili", 0.6)], &[], 6.6),
    demo("CC(=O)Nc1ccc(O)cc1", &[("herg_inhibition", 0.8)], &[], 5.8),
    demo("CC(C)Cc1ccc(cc1)C(C)C(=O)O", &[], &[], 6.5),
    demo("c1ccc2cc3ccccc3nc2c1", &[("ames_mutagenicity", 0.7)], &[], 6.1),
    demo("CN1CCN(CC1)c1ccccc1", &[], &[], 6.4),
    demo("COc1ccc(CCN)cc1", &[("caco2_permeability", 0.65)], &[], 5.9),
    demo("Cc1ccc(cc1)S(=O)(=O)N", &[], &[], 5.6),
    demo("OCC(O)CO", &[], &[], 5.2),
    demo("Clc1ccc(cc1)C(=O)NCCO", &[("eye_corrosion", 1.0)], &[], 6.2),
    demo("CCOC(=O)c1ccccc1N", &[], &[], 6.3),
    demo("CCCCCCCCCCCCCCCC(=O)O", &[("logp", 0.55)], &[], 4.8),
    demo("c1ccc(-c2ccccc2)cc1", &[], &[], 5.95),
];

/// (parent index into ROUND0, proposal, rationale); the palmitic acid
/// proposal is deliberately malformed to exercise quarantine conservation.
struct DemoProposal {
    parent: usize,
    child: Option<DemoMol>,
    raw: &'static str,
    rationale: &'static str,
}

const PROPOSALS: &[DemoProposal] = &[
    DemoProposal {
        parent: 0,
        child: Some(demo("CC(=O)Oc1ccccc1C(=O)N", &[], &[], 6.7)),
        raw: "CC(=O)Oc1ccccc1C(=O)N",
        rationale: "amide swap to pull hepatotoxicity risk below threshold",
    },
    DemoProposal {
        parent: 1,
        child: Some(demo("CC(=O)Nc1ccc(OC)cc1", &[], &[("logs", 0.25)], 6.05)),
        raw: "CC(=O)Nc1ccc(OC)cc1",
        rationale: "O-methylation to blunt hERG channel affinity",
    },
    DemoProposal {
        parent: 3,
        child: Some(demo("Nc1ccc2cc3ccccc3nc2c1", &[], &[], 6.2)),
        raw: "Nc1ccc2cc3ccccc3nc2c1",
        rationale: "exocyclic amine to disrupt intercalation geometry",
    },
    DemoProposal {
        parent: 5,
        child: Some(demo("COc1ccc(CCNC)cc1", &[], &[], 6.45)),
        raw: "COc1ccc(CCNC)cc1",
        rationale: "N-methylation to raise membrane permeability",
    },
    DemoProposal {
        parent: 10,
        child: None,
        raw: "C1CC(",
        rationale: "head-group replacement to cut lipophilicity",
    },
];

const STRUCTURE_PROBS: &[&str] = &[
    "0.91", "0.87", "0.83", "0.79", "0.88", "0.84", "0.92", "0.81", "0.86", "0.78",
];
const STRUCTURE_IC50S: &[&str] = &[
    "1.2e-8", "2.5e-8", "3.1e-8", "4.4e-9", "8.2e-9", "1.9e-8", "6.5e-9", "2.2e-8", "3.8e-9",
    "1.4e-8",
];

/// Safe side of the risk gate: half a scale unit away from the threshold.
/// Breaches overshoot by severity * scale so the flag severity comes out to
/// the number written in the table.
fn value_for(def: &PropertyDef, breach: Option<f64>, worsen: Option<f64>) -> Value {
    if def.kind == ValueKind::Categorical {
        let risky = def.risky_label.as_deref().expect("categorical has risky label");
        return if breach.is_some() {
            Value::String(risky.to_string())
        } else {
            Value::String(format!("non-{risky}"))
        };
    }
    let t = def.risk_threshold.expect("numeric property has threshold");
    let s = def.scale;
    let toward_threshold = match def.direction {
        Direction::HigherBetter => -1.0,
        Direction::LowerBetter => 1.0,
        Direction::Categorical => unreachable!(),
    };
    let mut v = match (breach, worsen) {
        (Some(sev), _) => t + toward_threshold * sev * s,
        (None, Some(frac)) => t - toward_threshold * (0.5 - frac) * s,
        (None, None) => t - toward_threshold * 0.5 * s,
    };
    if def.kind == ValueKind::Probability {
        v = v.clamp(0.0, 1.0);
    }
    Value::from(v)
}

fn profile_json(schema: &AdmetSchema, mol: &DemoMol) -> Value {
    let find = |list: &[(&str, f64)], id: &str| {
        list.iter().find(|(p, _)| *p == id).map(|&(_, x)| x)
    };
    let mut object = Map::new();
    for def in schema.iter() {
        let breach = find(mol.breaches, &def.id);
        let worsen = find(mol.worsen, &def.id);
        object.insert(def.id.clone(), value_for(def, breach, worsen));
    }
    Value::Object(object)
}

struct StubServer {
    endpoints: EndpointConfig,
    chembl_body: String,
    profiles: BTreeMap<String, Value>,
    pkds: BTreeMap<String, f64>,
}

impl Transport for StubServer {
    fn execute(&self, req: &Request) -> Result<Response, ClientError> {
        let ok = |body: String| {
            Ok(Response {
                status: 200,
                body,
                retry_after: None,
            })
        };
        if req.url.starts_with(&self.endpoints.uniprot_base) {
            return ok(BCL2_FASTA.to_string());
        }
        if req.url.starts_with(&self.endpoints.chembl_base) {
            return ok(self.chembl_body.clone());
        }
        let body: Value = req
            .body
            .as_deref()
            .map(|b| serde_json::from_str(b).expect("request body is JSON"))
            .unwrap_or(Value::Null);
        if req.url == self.endpoints.predict_url {
            let list = body["smiles"].as_array().expect("smiles array");
            let predictions: Vec<&Value> = list
                .iter()
                .map(|s| {
                    let s = s.as_str().expect("smiles entry is a string");
                    self.profiles
                        .get(s)
                        .unwrap_or_else(|| panic!("no stub profile for {s}"))
                })
                .collect();
            return ok(json!({ "predictions": predictions }).to_string());
        }
        if req.url == self.endpoints.affinity_url {
            let s = body["smiles"].as_str().expect("smiles is a string");
            let pkd = self
                .pkds
                .get(s)
                .unwrap_or_else(|| panic!("no stub pkd for {s}"));
            return ok(json!({ "pkd": pkd }).to_string());
        }
        panic!("unexpected request url {}", req.url);
    }
}

fn canon(smiles: &str) -> String {
    smiles_core::canonical(smiles).expect("demo molecule parses")
}

fn write_inputs(fixtures: &Path) {
    let mut smi = String::from("# round-0 candidates, one SMILES per line\n");
    for mol in ROUND0 {
        smi.push_str(mol.smiles);
        smi.push('\n');
    }
    fs::write(fixtures.join("demo_molecules.smi"), smi).expect("write molecule list");

    let mut tsv = String::from("parent_id\tsmiles\trationale\n");
    for p in PROPOSALS {
        let parent_id = format!("c{:04}", p.parent + 1);
        tsv.push_str(&format!("{parent_id}\t{}\t{}\n", p.raw, p.rationale));
    }
    fs::write(fixtures.join("proposals.tsv"), tsv).expect("write proposals");
}

fn demo_config_toml() -> String {
    format!(
        "# Demo screening run against recorded fixtures. Paths are relative to\n\
         # the working directory, so run from this directory or override with\n\
         # --fixtures / --run-dir.\n\
         target_gene = \"{GENE}\"\n\
         disease = \"{DISEASE}\"\n\
         reference_drug = \"{REFERENCE_DRUG}\"\n\
         profile = \"main\"\n\
         run_dir = \"run\"\n\
         fixtures_dir = \"fixtures\"\n"
    )
}

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let demo_dir = root.join("demo");
    let fixtures = demo_dir.join("fixtures");
    if fixtures.exists() {
        fs::remove_dir_all(&fixtures).expect("clear stale fixtures");
    }
    fs::create_dir_all(&fixtures).expect("create fixtures dir");
    write_inputs(&fixtures);

    let schema = AdmetSchema::builtin();
    let mut profiles = BTreeMap::new();
    let mut pkds = BTreeMap::new();
    let mut add = |mol: &DemoMol| {
        let key = canon(mol.smiles);
        if profiles.insert(key.clone(), profile_json(schema, mol)).is_some() {
            panic!("duplicate canonical form {key}");
        }
        pkds.insert(key, mol.pkd);
    };
    for mol in ROUND0 {
        add(mol);
    }
    for p in PROPOSALS {
        if let Some(child) = &p.child {
            add(child);
        }
    }

    let endpoints = EndpointConfig::default();
    let chembl_body = json!({
        "molecules": [{
            "molecule_chembl_id": "CHEMBL3137309",
            "pref_name": "VENETOCLAX",
            "molecule_structures": { "canonical_smiles": VENETOCLAX },
        }]
    })
    .to_string();
    let stub = StubServer {
        endpoints: endpoints.clone(),
        chembl_body,
        profiles,
        pkds,
    };

    let run_dir: PathBuf = std::env::temp_dir().join(format!("fixturegen-{}", std::process::id()));
    if run_dir.exists() {
        fs::remove_dir_all(&run_dir).expect("clear stale run dir");
    }
    let config = PipelineConfig {
        target_gene: GENE.to_string(),
        disease: DISEASE.to_string(),
        reference_drug: REFERENCE_DRUG.to_string(),
        endpoints,
        ..PipelineConfig::default()
    };
    let ctx = RunContext::with_transport(
        config,
        run_dir.clone(),
        run_dir.join("pool.jsonl"),
        fixtures.clone(),
        Box::new(RecordTransport::new(fixtures.clone(), stub)),
        true,
    )
    .expect("context");

    for stage in [
        Stage::Extract,
        Stage::Ingest,
        Stage::Predict,
        Stage::Flag,
        Stage::RefineApply,
        Stage::Filter,
        Stage::Select,
    ] {
        for notice in run_stage(&ctx, stage).unwrap_or_else(|e| panic!("{}: {e}", stage.name())) {
            println!("[{}] {notice}", stage.name());
        }
    }

    let selected: Vec<String> = serde_json::from_str(
        &fs::read_to_string(run_dir.join("selected.json")).expect("selected.json"),
    )
    .expect("selection list");
    assert!(
        !selected.is_empty(),
        "demo selects nothing; retune pkd or molecule set"
    );
    let mut results = String::from("candidate_id\tic50_molar\tinhibitor_probability\n");
    for (i, id) in selected.iter().enumerate() {
        results.push_str(&format!(
            "{id}\t{}\t{}\n",
            STRUCTURE_IC50S[i % STRUCTURE_IC50S.len()],
            STRUCTURE_PROBS[i % STRUCTURE_PROBS.len()],
        ));
    }
    fs::write(fixtures.join("structure_results.tsv"), results).expect("write structure results");

    for stage in [Stage::Report, Stage::StructureManifest, Stage::StructureIngest] {
        for notice in run_stage(&ctx, stage).unwrap_or_else(|e| panic!("{}: {e}", stage.name())) {
            println!("[{}] {notice}", stage.name());
        }
    }

    fs::write(demo_dir.join("molscreen.toml"), demo_config_toml()).expect("write demo config");
    let fixture_count = fs::read_dir(&fixtures)
        .expect("fixtures dir")
        .filter(|e| {
            e.as_ref()
                .map(|e| e.path().extension().is_some_and(|x| x == "json"))
                .unwrap_or(false)
        })
        .count();
    println!(
        "demo ready: {} molecules, {} proposals, {} selected, {fixture_count} fixtures",
        ROUND0.len(),
        PROPOSALS.len(),
        selected.len()
    );
    let _ = fs::remove_dir_all(&run_dir);
}
