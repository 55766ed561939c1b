//! CLI acceptance: deterministic outputs (criterion 11) and the exit-code
//! contract (0 success, 2 config errors, 3 failed convergence audits).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_carnot"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("carnot-cli-test-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn read_all_outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn criterion_11_determinism_byte_identical_outputs() {
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "blowup", "--group", "heisenberg:1", "--chart", "transversal-curve", "--radii",
            "1e-1:1e-3:6", "--grid", "401", "--set-grid", "201", "--seed", "12345",
        ],
        vec![
            "degree", "--group", "heisenberg:1", "--chart", "saddle", "--grid", "15",
        ],
        vec![
            "measure", "--group", "heisenberg:1", "--chart", "vertical-axis", "--grid", "32",
            "--mc-samples", "20000", "--seed", "9",
        ],
        vec![
            "dimension", "--group", "heisenberg:1", "--chart", "transversal-curve", "--scales",
            "5", "--samples", "20000", "--seed", "3",
        ],
        vec![
            "charset", "--group", "heisenberg:1", "--chart", "saddle", "--eps", "0.5", "--r",
            "1e-1:1e-2:3",
        ],
    ];
    for args in cases {
        let d1 = tmpdir(&format!("{}-a", args[0]));
        let d2 = tmpdir(&format!("{}-b", args[0]));
        for d in [&d1, &d2] {
            let status = bin()
                .args(&args)
                .arg("--out")
                .arg(d)
                .status()
                .expect("binary runs");
            assert!(status.success(), "{} failed in {}", args[0], d.display());
        }
        let out1 = read_all_outputs(&d1);
        let out2 = read_all_outputs(&d2);
        assert!(!out1.is_empty(), "{} wrote no artifacts", args[0]);
        assert_eq!(out1.len(), out2.len());
        for ((name1, bytes1), (name2, bytes2)) in out1.iter().zip(&out2) {
            assert_eq!(name1, name2);
            assert_eq!(bytes1, bytes2, "{name1} differs between identical runs");
        }
        let _ = fs::remove_dir_all(&d1);
        let _ = fs::remove_dir_all(&d2);
    }
    println!("[acceptance] criterion 11 (byte-identical reruns): PASS");
}

#[test]
fn thread_cap_does_not_change_results() {
    let d1 = tmpdir("threads-1");
    let d2 = tmpdir("threads-4");
    for (d, threads) in [(&d1, "1"), (&d2, "4")] {
        let status = bin()
            .args([
                "measure", "--group", "heisenberg:1", "--chart", "saddle", "--grid", "64",
                "--mc-samples", "50000", "--seed", "11", "--threads", threads, "--out",
            ])
            .arg(d)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read_all_outputs(&d1), read_all_outputs(&d2));
    let _ = fs::remove_dir_all(&d1);
    let _ = fs::remove_dir_all(&d2);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tmpdir("exit");
    // 0: success
    let ok = bin()
        .args(["group", "--builtin", "heisenberg:1", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));

    // 2: malformed group file
    let bad = dir.join("bad.json");
    fs::write(&bad, "this is not json").unwrap();
    let status = bin()
        .args(["group", "--group"])
        .arg(&bad)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(!status.stderr.is_empty(), "config errors carry a message");

    // 2: chart/group dimension mismatch
    let chart = dir.join("chart.json");
    fs::write(
        &chart,
        r#"{"group":"heisenberg:1","type":"polynomial","p":1,
           "coords":[[{"c":1.0,"e":[1]}],[{"c":1.0,"e":[1]}]],
           "domain":[[-1.0,1.0]]}"#,
    )
    .unwrap();
    let status = bin()
        .args(["degree", "--chart"])
        .arg(&chart)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // 2: blow-up precondition violation (non-transversal base point)
    let status = bin()
        .args([
            "blowup", "--group", "heisenberg:1", "--chart", "horizontal-line", "--radii",
            "1e-1:1e-2:3", "--grid", "101", "--set-grid", "51", "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // 3: audit failure (tolerance far beyond reach)
    let status = bin()
        .args([
            "blowup", "--group", "heisenberg:1", "--chart", "transversal-curve", "--radii",
            "1e-1:5e-2:3", "--grid", "201", "--set-grid", "101", "--tol", "1e-9", "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    // 2: unknown builtin
    let status = bin()
        .args(["group", "--builtin", "nosuchgroup", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn dimension_accepts_point_cloud_files() {
    let dir = tmpdir("points");
    // segment along e1 in abelian R^2
    let mut csv = String::from("x1,x2\n");
    for i in 0..20000 {
        csv.push_str(&format!("{},0.0\n", i as f64 / 19999.0));
    }
    let path = dir.join("segment.csv");
    fs::write(&path, csv).unwrap();
    let output = bin()
        .args(["dimension", "--group", "abelian:2", "--points"])
        .arg(&path)
        .args(["--scales", "5", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("dimension.json")).unwrap()).unwrap();
    let slope = json["result"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.1, "segment slope {slope}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn config_echo_reruns_to_the_same_result() {
    // the provenance header carries the config; re-running with the same
    // flags reproduces the artifact byte for byte
    let d1 = tmpdir("echo-1");
    let status = bin()
        .args([
            "blowup", "--group", "heisenberg:1", "--chart", "vertical-axis", "--radii",
            "1e-1:1e-3:4", "--grid", "301", "--set-grid", "101", "--seed", "21", "--out",
        ])
        .arg(&d1)
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d1.join("blowup.json")).unwrap()).unwrap();
    let cfg = &json["config"];
    let d2 = tmpdir("echo-2");
    let status = bin()
        .args([
            "blowup",
            "--group",
            cfg["group"].as_str().unwrap(),
            "--chart",
            cfg["chart"].as_str().unwrap(),
            "--radii",
            cfg["radii"].as_str().unwrap(),
            "--grid",
            &cfg["grid"].to_string(),
            "--set-grid",
            &cfg["set_grid"].to_string(),
            "--seed",
            &cfg["seed"].to_string(),
            "--out",
        ])
        .arg(&d2)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        fs::read(d1.join("blowup.json")).unwrap(),
        fs::read(d2.join("blowup.json")).unwrap()
    );
    let _ = fs::remove_dir_all(&d1);
    let _ = fs::remove_dir_all(&d2);
}
