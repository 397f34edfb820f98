use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn molscreen() -> Command {
    Command::new(env!("CARGO_BIN_EXE_molscreen"))
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn demo_config() -> PathBuf {
    workspace_root().join("demo/molscreen.toml")
}

fn demo_fixtures() -> PathBuf {
    workspace_root().join("demo/fixtures")
}

fn run_demo_all(run_dir: &Path) -> Output {
    molscreen()
        .args(["--config"])
        .arg(demo_config())
        .arg("--fixtures")
        .arg(demo_fixtures())
        .arg("--run-dir")
        .arg(run_dir)
        .arg("all")
        .output()
        .expect("spawn molscreen")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

/// Candidate lines from the pool ledger; outcome and header lines carry
/// other kinds.
fn pool_records(pool_path: &Path) -> Vec<Value> {
    fs::read_to_string(pool_path)
        .expect("read pool")
        .lines()
        .map(|l| serde_json::from_str(l).expect("pool line is JSON"))
        .filter(|v: &Value| v["kind"] == "candidate")
        .collect()
}

fn tree_snapshot(dir: &Path, skip: &str) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).expect("read dir") {
            let path = entry.expect("dir entry").path();
            let rel = path.strip_prefix(dir).unwrap().to_string_lossy().to_string();
            if rel == skip || rel.starts_with(&format!("{skip}/")) {
                continue;
            }
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(rel, fs::read(&path).expect("read file"));
            }
        }
    }
    out
}

#[test]
fn unknown_profile_rejected_before_any_work() {
    let tmp = tempfile::tempdir().unwrap();
    let run_dir = tmp.path().join("run");
    let out = molscreen()
        .args(["--profile", "exotic"])
        .arg("--run-dir")
        .arg(&run_dir)
        .arg("ingest")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("unknown profile"));
    assert!(!run_dir.exists(), "rejected run must not create artifacts");
}

#[test]
fn missing_pool_names_stage_and_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let out = molscreen()
        .arg("--run-dir")
        .arg(tmp.path().join("run"))
        .arg("predict")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("stage predict is missing input"), "{err}");
    assert!(err.contains("run ingest"), "{err}");
}

#[test]
fn extract_without_fixtures_is_a_network_class_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let fixtures = tmp.path().join("fixtures");
    fs::create_dir_all(&fixtures).unwrap();
    let out = molscreen()
        .arg("--run-dir")
        .arg(tmp.path().join("run"))
        .arg("--fixtures")
        .arg(&fixtures)
        .arg("extract")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("fixture"));
}

#[test]
fn failing_generator_adapter_surfaces_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("molscreen.toml");
    fs::write(&config, "[adapters]\ngenerator = \"/bin/false\"\n").unwrap();
    let out = molscreen()
        .arg("--config")
        .arg(&config)
        .arg("--run-dir")
        .arg(tmp.path().join("run"))
        .arg("ingest")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("adapter"));
}

#[test]
fn all_on_demo_produces_full_artifact_tree() {
    let tmp = tempfile::tempdir().unwrap();
    let run_dir = tmp.path().join("run");
    let out = run_demo_all(&run_dir);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    for artifact in [
        "protein.json",
        "drug.json",
        "pool.jsonl",
        "rules.json",
        "selection.tsv",
        "selected.json",
        "report/stats.tsv",
        "report/qed_hist.tsv",
        "report/weakness.tsv",
        "report/radar.tsv",
    ] {
        assert!(run_dir.join(artifact).is_file(), "missing {artifact}");
    }
    let selection = fs::read_to_string(run_dir.join("selection.tsv")).unwrap();
    assert!(selection.starts_with("id\tround\trules_passed\tqed\tpkd\tselected\n"));
    let selected: Vec<String> =
        serde_json::from_str(&fs::read_to_string(run_dir.join("selected.json")).unwrap()).unwrap();
    assert!(!selected.is_empty());
    for id in &selected {
        assert!(
            run_dir.join(format!("structure/jobs/{id}.json")).is_file(),
            "no job manifest for {id}"
        );
    }
}

#[test]
fn rerun_all_leaves_artifacts_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let run_dir = tmp.path().join("run");
    assert_eq!(run_demo_all(&run_dir).status.code(), Some(0));
    // Notices describe what the rerun did (merge instead of add), so they are
    // compared separately from the data artifacts.
    let first = tree_snapshot(&run_dir, "notices");
    let out = run_demo_all(&run_dir);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let second = tree_snapshot(&run_dir, "notices");
    assert_eq!(
        first.keys().collect::<Vec<_>>(),
        second.keys().collect::<Vec<_>>()
    );
    for (path, bytes) in &first {
        assert_eq!(bytes, &second[path], "{path} changed on rerun");
    }
}

#[test]
fn pool_conserves_molecules_through_malformed_proposal() {
    let tmp = tempfile::tempdir().unwrap();
    let run_dir = tmp.path().join("run");
    assert_eq!(run_demo_all(&run_dir).status.code(), Some(0));

    let records = pool_records(&run_dir.join("pool.jsonl"));
    assert_eq!(records.len(), 17, "12 ingested + 5 proposals");
    let invalid: Vec<&Value> = records
        .iter()
        .filter(|r| r["status"] == "invalid")
        .collect();
    assert_eq!(invalid.len(), 1);
    assert_eq!(invalid[0]["parent_id"], "c0011");
    assert_eq!(invalid[0]["round"], 1);
    assert!(invalid[0]["error"].is_string());
    let valid = records.iter().filter(|r| r["status"] == "valid").count();
    assert_eq!(valid + invalid.len(), records.len(), "no third state");
}

#[test]
fn duplicate_proposals_rejected_before_mutation() {
    let tmp = tempfile::tempdir().unwrap();
    let fixtures = tmp.path().join("fixtures");
    fs::create_dir_all(&fixtures).unwrap();
    for entry in fs::read_dir(demo_fixtures()).unwrap() {
        let path = entry.unwrap().path();
        fs::copy(&path, fixtures.join(path.file_name().unwrap())).unwrap();
    }
    fs::write(
        fixtures.join("proposals.tsv"),
        "parent_id\tsmiles\trationale\n\
         c0001\tCC(=O)Oc1ccccc1C(=O)N\tamide swap\n\
         c0001\tCC(=O)Oc1ccccc1C=O\taldehyde probe\n",
    )
    .unwrap();

    let run_dir = tmp.path().join("run");
    let stage = |name: &str| {
        molscreen()
            .arg("--config")
            .arg(demo_config())
            .arg("--fixtures")
            .arg(&fixtures)
            .arg("--run-dir")
            .arg(&run_dir)
            .arg(name)
            .output()
            .unwrap()
    };
    for name in ["extract", "ingest", "predict", "flag"] {
        let out = stage(name);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr_of(&out));
    }
    let before = fs::read(run_dir.join("pool.jsonl")).unwrap();
    let out = stage("refine-apply");
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("per parent per round"));
    let after = fs::read(run_dir.join("pool.jsonl")).unwrap();
    assert_eq!(before, after, "rejected stage must not touch the pool");
}

#[test]
fn out_of_range_inhibitor_probability_is_a_schema_error() {
    let tmp = tempfile::tempdir().unwrap();
    let run_dir = tmp.path().join("run");
    assert_eq!(run_demo_all(&run_dir).status.code(), Some(0));

    let doctored = tmp.path().join("doctored");
    fs::create_dir_all(&doctored).unwrap();
    fs::write(
        doctored.join("structure_results.tsv"),
        "candidate_id\tic50_molar\tinhibitor_probability\nc0001\t1.2e-8\t1.2\n",
    )
    .unwrap();
    let out = molscreen()
        .arg("--config")
        .arg(demo_config())
        .arg("--fixtures")
        .arg(&doctored)
        .arg("--run-dir")
        .arg(&run_dir)
        .arg("structure-ingest")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    let err = stderr_of(&out);
    assert!(err.contains("inhibitor_probability"), "{err}");
    assert!(err.contains("outside [0, 1]"), "{err}");
}

#[test]
fn generator_adapter_contract_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("molscreen.toml");
    let generator = workspace_root().join("adapters/stub_generator.sh");
    fs::write(
        &config,
        format!(
            "[adapters]\ngenerator = \"{}\"\n",
            generator.canonicalize().unwrap().display()
        ),
    )
    .unwrap();
    let run_dir = tmp.path().join("run");
    let out = molscreen()
        .arg("--config")
        .arg(&config)
        .arg("--run-dir")
        .arg(&run_dir)
        .arg("ingest")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(run_dir.join("generated.smi").is_file());
    assert_eq!(pool_records(&run_dir.join("pool.jsonl")).len(), 12);
}

#[test]
fn disabled_stage_is_skipped_with_notice() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("molscreen.toml");
    fs::write(
        &config,
        "target_gene = \"BCL2\"\nreference_drug = \"venetoclax\"\n\
         [stages]\nstructure_ingest = false\n",
    )
    .unwrap();
    let run_dir = tmp.path().join("run");
    let out = molscreen()
        .arg("--config")
        .arg(&config)
        .arg("--fixtures")
        .arg(demo_fixtures())
        .arg("--run-dir")
        .arg(&run_dir)
        .arg("all")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let notice = fs::read_to_string(run_dir.join("notices/structure-ingest.txt")).unwrap();
    assert!(notice.contains("disabled in config; skipped"));
    let records = pool_records(&run_dir.join("pool.jsonl"));
    assert!(records.iter().all(|r| r.get("ic50_molar").is_none()));
}
