//! End-to-end checks of the command-line front end: exit codes, file
//! formats, reproducibility, and the headline numbers in the emitted
//! metadata.

use std::path::Path;
use std::process::Command;

fn sqcat(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sqcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (serde_json::Value, Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).expect("output file exists");
    let mut lines = text.lines();
    let header = lines.next().expect("header line");
    assert!(header.starts_with("# "), "missing '#' metadata header");
    let meta: serde_json::Value = serde_json::from_str(&header[2..]).expect("valid header json");
    let columns: Vec<String> = lines
        .next()
        .expect("column line")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (meta, columns, rows)
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for out in [&out1, &out2] {
        let st = sqcat(&[
            "--experiment", "herald-surface",
            "--r-min", "0.4", "--r-max", "0.5", "--r-step", "0.05",
            "--q-min", "0.3", "--q-max", "0.3", "--q-step", "0.1",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    }
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
}

#[test]
fn invalid_range_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let st = sqcat(&[
        "--experiment", "herald-surface",
        "--r-min", "0.6", "--r-max", "0.4",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(2));
    assert!(!out.exists(), "no partial file may be left behind");

    let st = sqcat(&[
        "--experiment", "herald-surface",
        "--r-min", "0.95", "--r-max", "0.99",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unknown_state_descriptor_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let st = sqcat(&[
        "--experiment", "wigner",
        "--state", "schroedinger-dog",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn herald_point_and_scaling_stability() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scale.csv");
    let st = sqcat(&[
        "--experiment", "herald-surface",
        "--r-min", "0.5", "--r-max", "0.5", "--r-step", "0.02",
        "--q-min", "0.01", "--q-max", "0.02", "--q-step", "0.01",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (_, cols, rows) = read_csv(&out);
    assert_eq!(cols, vec!["r", "q", "p", "fidelity", "leakage"]);
    assert_eq!(rows.len(), 2);
    // P / q^8 stable to 5% across q = 0.01, 0.02
    let ratio0 = rows[0][2] / rows[0][1].powi(8);
    let ratio1 = rows[1][2] / rows[1][1].powi(8);
    assert!(ratio0.is_finite() && ratio1.is_finite());
    assert!(
        (ratio0 / ratio1 - 1.0).abs() < 0.05,
        "scaling ratios {ratio0} vs {ratio1}"
    );
}

#[test]
#[allow(clippy::approx_constant)] // -0.6366 is the pinned tolerance anchor
fn wigner_cat_metadata_origin_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cat.json");
    let st = sqcat(&[
        "--experiment", "wigner",
        "--state", "coherent-cat-minus",
        "--a", "1.0",
        "--cutoff", "40",
        "--grid-step", "0.5",
        "--alpha-max", "2",
        "--format", "json",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let w0 = doc["metadata"]["w_origin"].as_f64().unwrap();
    assert!((w0 - (-0.6366)).abs() < 1e-3, "W(0) = {w0}");
    assert_eq!(doc["config"]["state"], "coherent-cat-minus");
}

#[test]
fn wigner_vacuum_peak_and_plus_cat_origin() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let st = sqcat(&[
        "--experiment", "wigner",
        "--state", "vacuum",
        "--grid-step", "0.5",
        "--alpha-max", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (meta, _, _) = read_csv(&out);
    let wmax = meta["metadata"]["w_max"].as_f64().unwrap();
    assert!((wmax - 2.0 / std::f64::consts::PI).abs() < 1e-9);

    let out2 = dir.path().join("p.csv");
    let st = sqcat(&[
        "--experiment", "wigner",
        "--state", "squeezed-cat-plus",
        "--r", "1.0",
        "--grid-step", "0.5",
        "--alpha-max", "2",
        "--out", out2.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (meta, _, _) = read_csv(&out2);
    assert!(meta["metadata"]["w_origin"].as_f64().unwrap() > 0.0);
}

#[test]
fn entropy_crossover_metadata_and_low_r_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ent.csv");
    let st = sqcat(&[
        "--experiment", "entropy",
        "--r-min", "0.70", "--r-max", "0.88", "--r-step", "0.01",
        "--cutoff", "40",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    let (meta, cols, rows) = read_csv(&out);
    assert_eq!(cols, vec!["r", "s_minus", "s_plus", "s_tmsv"]);
    let crossover = meta["metadata"]["crossover"].as_f64().unwrap();
    assert!(
        (0.777..=0.797).contains(&crossover),
        "crossover {crossover}"
    );
    assert!(!rows.is_empty());

    let out2 = dir.path().join("low.csv");
    let st = sqcat(&[
        "--experiment", "entropy",
        "--r-min", "0.01", "--r-max", "0.01", "--r-step", "0.01",
        "--out", out2.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (_, _, rows) = read_csv(&out2);
    assert!((rows[0][1] - 1.5).abs() < 0.01, "S_minus(0.01) = {}", rows[0][1]);
}

#[test]
fn entropy_leakage_gate_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let st = sqcat(&[
        "--experiment", "entropy",
        "--r-min", "1.2", "--r-max", "1.2", "--r-step", "0.01",
        "--cutoff", "24",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn kerr_demo_branches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kerr.csv");
    let st = sqcat(&[
        "--experiment", "kerr-demo",
        "--r-min", "0.5", "--r-max", "0.5", "--r-step", "0.1",
        "--alpha", "3",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (_, cols, rows) = read_csv(&out);
    assert_eq!(
        cols,
        vec!["r", "alpha", "p_plus", "p_minus", "p_sum", "f_plus", "f_minus"]
    );
    let row = &rows[0];
    assert!((row[4] - 1.0).abs() < 1e-6, "p_sum = {}", row[4]);
    assert!(row[5] >= 1.0 - 1e-6, "f_plus = {}", row[5]);
    assert!(row[6] >= 1.0 - 1e-6, "f_minus = {}", row[6]);
}

#[test]
fn minus_convert_optimal_transmittance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mc.json");
    let st = sqcat(&[
        "--experiment", "minus-convert",
        "--r", "0.5",
        "--t-step", "0.001",
        "--format", "json",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let t_scan = doc["metadata"]["t_optimal_scan"].as_f64().unwrap();
    let t_analytic = doc["metadata"]["t_optimal_analytic"].as_f64().unwrap();
    assert!((t_scan - t_analytic).abs() <= 1e-3, "{t_scan} vs {t_analytic}");
}

#[test]
fn threads_flag_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("t1.csv");
    let out2 = dir.path().join("t4.csv");
    for (out, threads) in [(&out1, "1"), (&out2, "4")] {
        let st = sqcat(&[
            "--experiment", "wigner",
            "--state", "squeezed-cat-minus",
            "--r", "0.6",
            "--cutoff", "60",
            "--grid-step", "0.25",
            "--alpha-max", "2",
            "--threads", threads,
            "--out", out.to_str().unwrap(),
        ]);
        assert!(st.status.success());
    }
    let a = std::fs::read_to_string(&out1).unwrap();
    let b = std::fs::read_to_string(&out2).unwrap();
    // payload rows must agree bit for bit regardless of worker count
    assert_eq!(
        a.lines().skip(1).collect::<Vec<_>>(),
        b.lines().skip(1).collect::<Vec<_>>()
    );
}
