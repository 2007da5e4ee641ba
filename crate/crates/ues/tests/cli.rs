use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ues(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ues"))
        .arg("--store")
        .arg(store)
        .args(args)
        .env_remove("UES_STORE")
        .output()
        .expect("binary runs")
}

fn fixture_store() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    copy_dir(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/store"), &store);
    (dir, store)
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            std::fs::copy(entry.path(), target).unwrap();
        }
    }
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_map_accepts_bundled_map() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/assets/study_map.json");
    let out = stdout(&ues(dir.path(), &["validate-map", bundle.to_str().unwrap()]));
    assert!(out.contains("25 waypoints"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, br#"{"map": {"width": 0}}"#).unwrap();
    let o = ues(dir.path(), &["validate-map", broken.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn gen_truth_is_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("c.json"));
    for (path, seed) in [(&a, "9"), (&b, "9"), (&c, "10")] {
        stdout(&ues(dir.path(), &["gen-truth", "study", "--n", "3", "--seed", seed, "--out", path.to_str().unwrap()]));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
    let truth = ues_core::GroundTruth::from_json(&std::fs::read(&a).unwrap()).unwrap();
    truth.validate(&ues_core::study_map()).unwrap();
    assert!(truth.objects.values().all(|e| e.len() == 3));

    let o = ues(dir.path(), &["gen-truth", "study", "--n", "3", "--candidates", "hw_c,kt_w"]);
    assert!(!o.status.success());
}

#[test]
fn score_all_matches_golden_csv() {
    let (dir, store) = fixture_store();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("agg.json");
    stdout(&ues(
        &store,
        &["score", "--all", "--seed", "7", "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap()],
    ));
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/score_all.csv")).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), golden);

    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 4);
    let aggregates = report["aggregates"].as_array().unwrap();
    assert_eq!(aggregates.len(), 3);
    let precision = aggregates.iter().find(|a| a["interface"] == "precision").unwrap();
    assert_eq!(precision["sessions"], 2);
    assert_eq!(precision["duration_s"]["mean"], 165.75);
}

#[test]
fn simulate_prints_row_and_writes_trace() {
    let (dir, store) = fixture_store();
    let trace = dir.path().join("trace.jsonl");
    let out = stdout(&ues(
        &store,
        &["simulate", "p01", "t1", "--sims", "50", "--seed", "7", "--trace-out", trace.to_str().unwrap()],
    ));
    let row: ues_core::evaluation::ScoreRow = serde_json::from_str(&out).unwrap();
    assert_eq!(row.mean_trace_length, 18.5);
    assert_eq!(row.n_sims, 50);

    let replayed = stdout(&ues(&store, &["replay", trace.to_str().unwrap(), "--scene", "study"]));
    assert!(replayed.lines().last().unwrap().starts_with("length "));
    assert!(replayed.contains("pick umbrella"));

    // file inputs work without the store holding them
    let session = store.join("sessions/p03.json");
    let truth = store.join("truths/t1.json");
    stdout(&ues(&store, &["simulate", session.to_str().unwrap(), truth.to_str().unwrap(), "--sims", "3"]));

    let open = ues(&store, &["simulate", "p04", "t1"]);
    assert!(!open.status.success());
    let zero = ues(&store, &["simulate", "p01", "t1", "--sims", "0"]);
    assert!(!zero.status.success());
}

#[test]
fn replay_rejects_broken_traces() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(
        &bad,
        "{\"t\":0,\"action\":\"observe\",\"args\":[\"ws_ne\"]}\n{\"t\":1,\"action\":\"move\",\"args\":[\"ws_ne\",\"of_sw\"]}\n",
    )
    .unwrap();
    assert!(ues(dir.path(), &["replay", bad.to_str().unwrap()]).status.success());
    let o = ues(dir.path(), &["replay", bad.to_str().unwrap(), "--scene", "study"]);
    assert!(!o.status.success());
    std::fs::write(&bad, "not json\n").unwrap();
    assert!(!ues(dir.path(), &["replay", bad.to_str().unwrap()]).status.success());
}
