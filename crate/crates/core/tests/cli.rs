use std::path::Path;
use std::process::{Command, Output};

use ufam::catalog::a_family;
use ufam::cli::ResultCache;
use ufam::Family;

fn ufam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ufam")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(o: &Output) -> Vec<csv::StringRecord> {
    let text = stdout(o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap()).collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_table_header_and_rows() {
    let o = ufam(&["bounds", "--n", "8..14", "--k", "3", "--s", "3", "--q", "7", "--no-cache"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with(
        "n,k,s,q,p,r,value,kind,provenance,status,nodes,elapsed_ms,citation,note"
    ));
    let rows = csv_rows(&o);
    let ns: std::collections::BTreeSet<&str> = rows.iter().map(|r| r.get(0).unwrap()).collect();
    assert_eq!(ns.len(), 7);
    for (n, v) in [("8", "35"), ("10", "40"), ("11", "46"), ("12", "55"), ("14", "78")] {
        assert!(
            rows.iter().any(|r| r.get(0) == Some(n) && r.get(6) == Some(v) && r.get(7) == Some("exact")),
            "n={n}"
        );
    }
}

#[test]
fn bounds_reports_bad_q_per_row() {
    let o = ufam(&["bounds", "--n", "20", "--k", "3", "--s", "3", "--q", "8..9", "--no-cache"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert!(rows.iter().any(|r| r.get(3) == Some("8") && r.get(9) == Some("bound")));
    let bad: Vec<_> = rows.iter().filter(|r| r.get(3) == Some("9")).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].get(9), Some("error"));
    assert!(bad[0].get(13).unwrap().contains("no decomposition"));
}

#[test]
fn exact_uses_cache_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let args = ["exact", "--n", "10", "--k", "3", "--s", "3", "--q", "7", "--cache", path_str(&cache)];
    let first = ufam(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let row = &csv_rows(&first)[0];
    assert_eq!((row.get(6), row.get(9)), (Some("40"), Some("proved-optimal")));
    let saved = std::fs::read_to_string(&cache).unwrap();

    let second = ufam(&args);
    let row = &csv_rows(&second)[0];
    assert_eq!((row.get(6), row.get(10), row.get(13)), (Some("40"), Some("0"), Some("cached")));
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), saved);
}

#[test]
fn rerunning_bounds_leaves_cache_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let args = ["bounds", "--n", "8..12", "--k", "2..3", "--s", "2..3", "--q", "2..8", "--skip-invalid", "--cache", path_str(&cache)];
    assert!(ufam(&args).status.success());
    let once = std::fs::read_to_string(&cache).unwrap();
    assert!(ufam(&args).status.success());
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), once);
}

#[test]
fn target_stops_early() {
    let o = ufam(&["exact", "--n", "8", "--k", "3", "--s", "3", "--q", "7", "--target", "35", "--no-cache"]);
    let row = &csv_rows(&o)[0];
    assert_eq!((row.get(6), row.get(9)), (Some("35"), Some("target-reached")));
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let base = ["exact", "--n", "8..11", "--k", "3", "--s", "3", "--q", "7", "--no-cache"];
    let csv_out = ufam(&base);
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let json_out = ufam(&json_args);
    let json: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let rows = csv_rows(&csv_out);
    let arr = json.as_array().unwrap();
    assert_eq!(rows.len(), arr.len());
    for (c, j) in rows.iter().zip(arr) {
        assert_eq!(c.get(0).unwrap(), j["n"].to_string());
        assert_eq!(c.get(6).unwrap(), j["value"].to_string());
        assert_eq!(c.get(9).unwrap(), j["status"].as_str().unwrap());
        assert_eq!(c.get(10).unwrap(), j["nodes"].to_string());
    }
}

#[test]
fn verify_confirms_desk_scale_suites() {
    let o = ufam(&["verify", "--n", "8..11", "--k", "3", "--s", "3", "--q", "7", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.get(13).unwrap().starts_with("CONFIRMED")));

    let o = ufam(&["verify", "--n", "3..10", "--k", "2", "--s", "2..4", "--q", "2..7", "--skip-invalid", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let rows = csv_rows(&o);
    assert!(rows.len() > 50);
    assert!(rows.iter().all(|r| r.get(13).unwrap().starts_with("CONFIRMED")));
}

#[test]
fn oracle_mode_agrees() {
    let o = ufam(&["oracle", "--n", "4..6", "--k", "2", "--s", "2..3", "--q", "2..5", "--skip-invalid", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(csv_rows(&o).iter().all(|r| r.get(13).unwrap().starts_with("agrees")));
}

#[test]
fn ties_and_witness_files() {
    let dir = tempfile::tempdir().unwrap();
    let wd = dir.path().join("w");
    let o = ufam(&["ties", "--n", "7", "--k", "2", "--s", "3", "--q", "4", "--no-cache", "--witness-dir", path_str(&wd)]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert!(rows.len() >= 2);
    let files: Vec<_> = std::fs::read_dir(&wd).unwrap().collect();
    assert_eq!(files.len(), rows.len());
    for f in files {
        let fam = Family::parse_text(&std::fs::read_to_string(f.unwrap().path()).unwrap()).unwrap();
        assert_eq!(fam.len(), 6);
    }
}

#[test]
fn check_family_reports_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("f2.txt");
    std::fs::write(&good, a_family(4, 2, 10, 3).unwrap().to_text()).unwrap();
    let o = ufam(&["check-family", path_str(&good), "--s", "3", "--q", "7", "--format", "json"]);
    assert!(o.status.success());
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["size"], 40);
    assert_eq!(rep["has_u"], true);
    assert_eq!(rep["shifted"], true);

    let full = dir.path().join("full.txt");
    std::fs::write(&full, Family::complete(8, 3).unwrap().to_text()).unwrap();
    let o = ufam(&["check-family", path_str(&full), "--s", "3", "--q", "7"]);
    assert!(stdout(&o).contains("fails"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "ground=6 k=3\n1,2,3\n1,2,2\n").unwrap();
    let o = ufam(&["check-family", path_str(&bad), "--s", "3", "--q", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn cache_lock_is_exclusive() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let _held = ResultCache::open(&cache).unwrap();
    let o = ufam(&["bounds", "--n", "8", "--k", "3", "--s", "3", "--q", "7", "--cache", path_str(&cache)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("locked"));
}

#[test]
fn stale_cache_version_warns_and_recomputes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let stale = serde_json::json!({
        "version": "0.0.0-old",
        "entries": {
            "8,3,3,7": {
                "lower": null,
                "upper": null,
                "search": {
                    "value": 35, "status": "proved-optimal", "nodes": 7, "elapsed_ms": 1,
                    "witness": [], "version": "0.0.0-old"
                }
            }
        }
    });
    std::fs::write(&cache, stale.to_string()).unwrap();
    let o = ufam(&["exact", "--n", "8", "--k", "3", "--s", "3", "--q", "7", "--cache", path_str(&cache)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    let row = &csv_rows(&o)[0];
    assert_ne!(row.get(10), Some("0"));
    assert_eq!(row.get(13), Some(""));
}

#[test]
fn checkpoint_resume_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck");
    let common = ["exact", "--n", "11", "--k", "3", "--s", "3", "--q", "7", "--no-cache", "--checkpoint-dir", path_str(&ck)];
    let mut first = common.to_vec();
    first.extend(["--budget-nodes", "5"]);
    let o = ufam(&first);
    assert_eq!(csv_rows(&o)[0].get(9), Some("budget-exhausted"));
    assert_eq!(std::fs::read_dir(&ck).unwrap().count(), 1);
    let o = ufam(&common);
    let row = &csv_rows(&o)[0];
    assert_eq!((row.get(6), row.get(9)), (Some("46"), Some("proved-optimal")));
    assert_eq!(std::fs::read_dir(&ck).unwrap().count(), 0);
}
