mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::{data_dir, schema_path};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sociogram"))
}

fn analyze(edges: &Path, out: &Path, extra: &[&str]) -> Output {
    let d = data_dir();
    bin()
        .arg("analyze")
        .arg("--edges")
        .arg(edges)
        .arg("--lexicons")
        .arg(d.join("lexicons"))
        .arg("--risk")
        .arg(d.join("risk_factors.toml"))
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn sample() -> PathBuf {
    data_dir().join("sample/edges.csv")
}

fn read_report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn validate(report: &Value) {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path()).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(report)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn files_in(dir: &Path) -> BTreeSet<String> {
    std::fs::read_dir(dir)
        .map(|rd| {
            rd.map(|e| e.unwrap().file_name().into_string().unwrap())
                .collect()
        })
        .unwrap_or_default()
}

fn undefined(v: &Value) -> Option<&str> {
    v.get("reason")
        .and_then(Value::as_str)
        .filter(|_| v.get("value") == Some(&Value::Null))
}

/// Vertex and pair counts of the fixture, recounted from the raw rows.
fn recount(path: &Path) -> (usize, usize, usize) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let mut vertices = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let (s, t) = (rec[0].trim().to_lowercase(), rec[1].trim().to_lowercase());
        vertices.insert(s.clone());
        vertices.insert(t.clone());
        pairs.insert((s, t));
        rows += 1;
    }
    (vertices.len(), rows, pairs.len())
}

#[test]
fn sample_corpus_report() {
    let out = TempDir::new().unwrap();
    let run = analyze(&sample(), out.path(), &["--deterministic"]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(
        files_in(out.path()),
        [
            "graph.dot",
            "graph.graphml",
            "layout.csv",
            "report.json",
            "vertices.csv"
        ]
        .map(String::from)
        .into()
    );
    let r = read_report(out.path());
    validate(&r);

    let (v, e, unique) = recount(&sample());
    assert_eq!((v, e, unique), (37, 200, 148));
    let g = &r["graph"];
    assert_eq!(g["vertices"], v);
    assert_eq!(g["edges_total"], e);
    assert_eq!(g["edges_unique"], unique);
    assert_eq!(g["duplicates"], e - unique);

    for (key, section) in r.as_object().unwrap() {
        assert!(undefined(section).is_none(), "section {key} is undefined");
    }
    let groups = r["grouping"]["groups"].as_array().unwrap();
    assert_eq!(r["grouping"]["group_count"], groups.len());
    let freq: u64 = r["archetype_frequency"]
        .as_object()
        .unwrap()
        .values()
        .map(|x| x.as_u64().unwrap())
        .sum();
    assert_eq!(freq as usize, groups.len());
    let members: usize = groups
        .iter()
        .map(|g| g["members"].as_array().unwrap().len())
        .sum();
    assert_eq!(members, v);
    for grp in groups {
        assert!(undefined(&grp["label"]).is_none());
    }
    assert!(r["provenance"]["timestamp"].is_null());

    let vertices = std::fs::read_to_string(out.path().join("vertices.csv")).unwrap();
    assert_eq!(vertices.lines().count(), v + 1);
    assert!(vertices.starts_with("vertex,in,out,c_j,C_B,pagerank,eigenvector,group,self_loops\n"));
    let layout = std::fs::read_to_string(out.path().join("layout.csv")).unwrap();
    assert_eq!(layout.lines().count(), v + 1);
}

#[test]
fn same_input_gives_identical_files() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert!(analyze(&sample(), a.path(), &["--deterministic"])
        .status
        .success());
    assert!(
        analyze(&sample(), b.path(), &["--deterministic", "--threads", "3"])
            .status
            .success()
    );
    for f in files_in(a.path()) {
        assert_eq!(
            std::fs::read(a.path().join(&f)).unwrap(),
            std::fs::read(b.path().join(&f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn timestamp_present_without_deterministic_flag() {
    let out = TempDir::new().unwrap();
    assert!(analyze(&sample(), out.path(), &["--emit", "report"])
        .status
        .success());
    assert_eq!(files_in(out.path()), ["report.json".to_string()].into());
    let ts = read_report(out.path())["provenance"]["timestamp"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(chrono::DateTime::parse_from_rfc3339(&ts).is_ok(), "{ts}");
}

#[test]
fn header_only_input_yields_sentinels() {
    let dir = TempDir::new().unwrap();
    let edges = dir.path().join("edges.csv");
    std::fs::write(&edges, "source,target,kind,text,timestamp\n").unwrap();
    let out = dir.path().join("out");
    let run = analyze(&edges, &out, &["--deterministic"]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let r = read_report(&out);
    validate(&r);
    assert_eq!(r["graph"]["vertices"], 0);
    assert_eq!(undefined(&r["grouping"]), Some("empty_graph"));
    assert_eq!(undefined(&r["centrality_summary"]), Some("empty_graph"));
    assert_eq!(
        undefined(&r["metrics"]["graph_stats"]["c_global"]),
        Some("empty_graph")
    );
    assert_eq!(undefined(&r["sentiment"]), Some("empty_corpus"));
}

#[test]
fn missing_lexicons_exit_two_and_name_the_path() {
    let out = TempDir::new().unwrap();
    let missing = out.path().join("no-such-lexicons");
    let run = bin()
        .arg("analyze")
        .arg("--edges")
        .arg(sample())
        .arg("--lexicons")
        .arg(&missing)
        .arg("--risk")
        .arg(data_dir().join("risk_factors.toml"))
        .arg("--out")
        .arg(out.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains(missing.to_str().unwrap()));
    assert!(!out.path().join("o").exists());
}

#[test]
fn stage_flag_stops_early() {
    let out = TempDir::new().unwrap();
    let run = analyze(
        &sample(),
        out.path(),
        &["--deterministic", "--stage", "community"],
    );
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(
        files_in(out.path()),
        ["graph.dot", "graph.graphml", "report.json", "vertices.csv"]
            .map(String::from)
            .into()
    );
    let r = read_report(out.path());
    validate(&r);
    assert_eq!(
        r["stages"],
        serde_json::json!(["ingest", "metrics", "centrality", "community"])
    );
    assert!(undefined(&r["grouping"]).is_none());
    for skipped in [
        "graph_archetype",
        "sentiment",
        "risk",
        "text",
        "fits",
        "layout",
    ] {
        assert_eq!(undefined(&r[skipped]), Some("stage_skipped"), "{skipped}");
    }
}

#[test]
fn artifact_beyond_stage_is_rejected() {
    let out = TempDir::new().unwrap();
    let target = out.path().join("o");
    let run = analyze(
        &sample(),
        &target,
        &["--stage", "metrics", "--emit", "layout_csv"],
    );
    assert_eq!(run.status.code(), Some(2));
    assert!(files_in(&target).is_empty());
}

#[test]
fn unwritable_output_fails_without_leftovers() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let run = analyze(&sample(), &blocker.join("out"), &[]);
    assert_ne!(run.status.code(), Some(0));
    assert_eq!(files_in(dir.path()), ["file".to_string()].into());
}

#[test]
fn undefined_anger_ratio_is_a_sentinel() {
    let dir = TempDir::new().unwrap();
    let edges = dir.path().join("edges.csv");
    std::fs::write(
        &edges,
        "source,target,text\na,b,breathe and stay calm\nb,c,a quiet evening\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    assert!(
        analyze(&edges, &out, &["--deterministic", "--emit", "report"])
            .status
            .success()
    );
    let raw = std::fs::read_to_string(out.join("report.json")).unwrap();
    let r: Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(
        r["sentiment"]["r_angr"],
        serde_json::json!({"value": null, "reason": "zero_denominator"})
    );
    assert!(r["sentiment"]["s_calm"].as_f64().unwrap() > 0.0);
    validate(&r);
}

#[test]
fn generate_writes_a_classifiable_graph() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("hub.csv");
    let run = bin()
        .args([
            "generate",
            "--kind",
            "in-hub",
            "--size",
            "60",
            "--seed",
            "4",
            "--classify",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(run.status.success());
    let info: Value = serde_json::from_slice(&run.stderr).unwrap();
    assert_eq!(info["label"]["kind"], "in_hub");
    assert_eq!(info["features"]["n_vertices"], 60);
    let (v, _, _) = recount(&path);
    assert_eq!(v, 60);

    let bad = bin()
        .args(["generate", "--kind", "spiral"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn fit_subcommand_recovers_parameters() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("xy.csv");
    let mut body = String::from("x,y\n");
    for i in 1..=100 {
        let x = f64::from(i);
        body.push_str(&format!("{x},{}\n", 57.1 * x.powf(-0.59)));
    }
    std::fs::write(&path, body).unwrap();
    let run = bin()
        .args(["fit", "--model", "power_law", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let r: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert!((r["scale"].as_f64().unwrap() - 57.1).abs() < 1e-6);
    assert!((r["exponent"].as_f64().unwrap() - 0.59).abs() < 1e-9);
    assert_eq!(r["n_points"], 100);

    let run = bin()
        .args(["fit", "--model", "cubic", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn layout_subcommand_places_every_vertex() {
    let run = bin()
        .arg("layout")
        .arg("--edges")
        .arg(sample())
        .args(["--seed", "9"])
        .output()
        .unwrap();
    assert!(run.status.success());
    let text = String::from_utf8(run.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vertex,x,y"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 37);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let (x, y): (f64, f64) = (f[1].parse().unwrap(), f[2].parse().unwrap());
        assert!((0.0..=1000.0).contains(&x) && (0.0..=1000.0).contains(&y));
    }
}
