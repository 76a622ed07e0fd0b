use std::io::Write;
use std::process::{Command, Output, Stdio};

use cpa_cli::report::{Sweep, SWEEP_HEADER};
use cpa_cli::Report;

fn cpa(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cpa"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn cpa");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SPLITTER: &str = r#"{"geometry":"beamsplitter","T":[0.7],"model":"simple"}"#;

#[test]
fn simulate_reads_stdin_and_writes_json() {
    let out = cpa(&["simulate"], SPLITTER);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((report.probabilities["A"] - 0.7).abs() < 1e-12);
    assert!(report.oracle_residual.unwrap() < 1e-12);
    assert_eq!(report.schema_version, 1);
}

#[test]
fn json_round_trips() {
    let config = r#"{"geometry":"interferometer","T":[0.7],"model":"averages","I_Z":0.3,"outcome":"A"}"#;
    let out = cpa(&["simulate"], config);
    let text = stdout(&out);
    let report: Report = serde_json::from_str(&text).unwrap();
    let mut again = Vec::new();
    cpa_cli::emit(&report, cpa_cli::Format::Json, &mut again).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), text);
    assert!((report.averages[0].avg_x - 0.904_356).abs() < 1e-6);
}

#[test]
fn config_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let out_path = dir.path().join("report.csv");
    std::fs::write(&config, r#"{"geometry":"cascade","T":[0.5,0.5],"model":"improved"}"#).unwrap();
    let out = cpa(
        &[
            "simulate",
            "--config",
            config.to_str().unwrap(),
            "--format",
            "csv",
            "--out",
            out_path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("detector,probability,oracle_probability"));
    let rows: Vec<(String, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_owned(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    let want = [("D1", 0.5), ("D2", 0.25), ("D3", 0.25)];
    assert_eq!(rows.len(), 3);
    for ((label, p, oracle), (l, w)) in rows.iter().zip(want) {
        assert_eq!(label, l);
        assert_eq!(*p, w);
        assert!((oracle - w).abs() < 1e-12);
    }
}

#[test]
fn monte_carlo_is_byte_identical() {
    let config = r#"{"geometry":"beamsplitter","T":[0.7],"model":"improved"}"#;
    let args = ["simulate", "--samples", "20000", "--seed", "11"];
    let first = stdout(&cpa(&args, config));
    assert_eq!(first, stdout(&cpa(&args, config)));
    let report: Report = serde_json::from_str(&first).unwrap();
    assert_eq!(report.provenance.method, "monte-carlo");
    assert_eq!(report.samples.unwrap().n, 20000);
    let other = stdout(&cpa(&["simulate", "--samples", "20000", "--seed", "12"], config));
    assert_ne!(first, other);
}

#[test]
fn sweep_csv() {
    let config = r#"{"geometry":"interferometer","model":"improved"}"#;
    let out = cpa(&["sweep", "--sweep", "T=0.05:0.95:0.05", "--format", "csv"], config);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), SWEEP_HEADER.join(","));
    assert!(SWEEP_HEADER.join(",").starts_with("T,P_A,P_B,weak_IX_A,weak_IY_A,"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 19);
    // T = 0.5: B never fires, so its weak values are blank
    assert!(rows[9].starts_with("0.5,1.0,0.0,"), "{}", rows[9]);
    assert!(rows[9].contains(",,,"));
}

#[test]
fn empty_sweep_is_header_only() {
    let config = r#"{"geometry":"beamsplitter","model":"oracle"}"#;
    let out = cpa(&["sweep", "--sweep", "T=0.9:0.1:0.1", "--format", "csv"], config);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), format!("{}\n", SWEEP_HEADER.join(",")));
}

#[test]
fn sweep_json() {
    let config = r#"{"geometry":"beamsplitter","model":"improved"}"#;
    let out = cpa(&["sweep", "--sweep", "T=0.1:0.3:0.1"], config);
    let sweep: Sweep = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(sweep.rows.len(), 3);
    for row in &sweep.rows {
        assert!((row.p_a - row.t).abs() < 1e-12);
    }
}

#[test]
fn weak_values_subcommand() {
    let out = cpa(
        &["weak-values"],
        r#"{"geometry":"interferometer","T":[0.6],"model":"improved"}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.provenance.model, "oracle");
    let b = report.weak_values.unwrap()["B"];
    assert!((b.y + 0.4f64.sqrt() / (0.6f64.sqrt() - 0.4f64.sqrt())).abs() < 1e-12);

    let out = cpa(&["weak-values"], SPLITTER);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let bad_t = cpa(
        &["simulate"],
        r#"{"geometry":"beamsplitter","T":[1.3],"model":"simple"}"#,
    );
    assert_eq!(bad_t.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_t.stderr).contains("T[0]"));

    let divergent = cpa(
        &["simulate"],
        r#"{"geometry":"interferometer","T":[0.5],"model":"averages","outcome":"B"}"#,
    );
    assert_eq!(divergent.status.code(), Some(3));

    let missing = cpa(&["simulate", "--config", "/nonexistent/run.json"], "");
    assert_eq!(missing.status.code(), Some(4));

    let format = cpa(&["simulate", "--format", "xml"], SPLITTER);
    assert_eq!(format.status.code(), Some(2));
}

#[test]
fn entangled_pair_report() {
    let out = cpa(
        &["simulate"],
        r#"{"geometry":"entangled-pair","model":"simple","a":0.0,"b":0.5}"#,
    );
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.oracle_residual.unwrap() < 1e-12);
    assert!((report.correlation_e.unwrap() - 1.0f64.cos()).abs() < 1e-12);
}
