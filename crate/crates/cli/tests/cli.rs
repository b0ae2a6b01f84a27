use std::process::{Command, Output};

use serde_json::Value;

fn semiflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiflow")).args(args).output().expect("binary runs")
}

fn semiflow_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiflow")).args(args).env(key, value).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn csv_rows(o: &Output) -> (String, Vec<Vec<f64>>) {
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

const CUBIC: &str = "0,-1,0.57735026918962576,-0.57735026918962576";

#[test]
fn check_contraction_generates() {
    let o = semiflow(&["check", "-G", "0,-1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"], "generates");
    for key in ["condition_a", "condition_b", "condition_c"] {
        assert_eq!(v[key]["pass"], true, "{key}");
    }
    assert_eq!(v["root_obstruction"]["obstructed"], false);
}

#[test]
fn check_cubic_example() {
    let o = semiflow(&["check", "-G", CUBIC]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["condition_a"]["pass"], false);
    assert_eq!(v["condition_b"]["pass"], true);
    assert_eq!(v["condition_c"]["pass"], true);
    let a = v["condition_a"]["value"].as_f64().unwrap();
    assert!((a - (-1.0 + 2.0 / 3f64.sqrt())).abs() < 1e-12);
}

#[test]
fn check_constant_does_not_generate() {
    let o = semiflow(&["check", "-G", "1"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "does_not_generate");
    assert_eq!(v["root_obstruction"]["obstructed"], true);

    let o = semiflow(&["check", "-G", "-2,1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["root_obstruction"]["obstructed"], true);
}

#[test]
fn check_marginal() {
    let o = semiflow(&["check", "-G", "0"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["verdict"], "marginal");
    assert!(v["root_obstruction"].is_null());
    // rotations: Re(z̄ G) ≡ 0 on the circle
    assert_eq!(code(&semiflow(&["check", "-G", "0,1i"])), 2);
}

#[test]
fn check_sampled_method() {
    let o = semiflow(&["check", "-G", CUBIC, "--method", "sampled"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["condition_c"]["method"], "sampled");
}

#[test]
fn flow_examples() {
    let o = semiflow(&["flow", "-G", "0,-1", "-z0", "0.5", "-t", "1"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, "t,re,im,speed");
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 0.5 * (-1f64).exp()).abs() < 1e-11);
    assert!((last[1] - 0.18394).abs() < 1e-5);
    assert_eq!(rows[0][1], 0.5);

    let o = semiflow(&["flow", "-G", "-1,0,1", "-z0", "0", "-t", "0.5493"]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv_rows(&o);
    let last = rows.last().unwrap();
    assert!((last[1] + 0.5493f64.tanh()).abs() < 1e-11);
    assert!((last[1] + 0.5).abs() < 1e-4);
}

#[test]
fn flow_numeric_matches_closed_form() {
    let closed = csv_rows(&semiflow(&["flow", "-G", "0.2,-1", "-z0", "0.3+0.4i", "-t", "2"])).1;
    let numeric = csv_rows(&semiflow(&["flow", "-G", "0.2,-1", "-z0", "0.3+0.4i", "-t", "2", "--numeric"])).1;
    let (a, b) = (closed.last().unwrap(), numeric.last().unwrap());
    assert_eq!(a[0], b[0]);
    assert!((a[1] - b[1]).abs() < 1e-8 && (a[2] - b[2]).abs() < 1e-8);
    // a cubic has no closed form and is always integrated
    let o = semiflow(&["flow", "-G", CUBIC, "--z0", "0.9", "-t", "5"]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv_rows(&o);
    assert!(rows.windows(2).all(|w| w[1][3] <= w[0][3] * (1.0 + 1e-9) + 1e-9));
}

#[test]
fn flow_boundary_exit() {
    let o = semiflow(&["flow", "-G", "1", "-z0", "0", "-t", "2"]);
    assert_eq!(code(&o), 3);
    let (_, rows) = csv_rows(&o);
    let last = rows.last().unwrap();
    assert!((last[0] - 1.0).abs() < 1e-6, "{}", last[0]);
    assert!(rows.len() > 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("boundary"));
}

#[test]
fn flow_rejects_bad_input() {
    assert_eq!(code(&semiflow(&["flow", "-G", "0,-1", "-z0", "2", "-t", "1"])), 64);
    assert_eq!(code(&semiflow(&["flow", "-G", "0,-1", "-z0", "0.5", "-t", "-1"])), 64);
    assert_eq!(code(&semiflow(&["flow", "-G", "0,-1", "-t", "1"])), 64);
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        &["check", "-G", "1,x"][..],
        &["check", "-G", ""],
        &["check"],
        &["frobnicate"],
        &[],
        &["norm", "-G", "0,-1", "--space", "sobolev", "-t", "1"],
        &["norm", "-G", "0,-1"],
        &["nrange", "-G", "0,1", "--probe", "kernel", "--radii", "0.5,abc"],
        &["toeplitz", "-f", "nan"],
    ] {
        let o = semiflow(args);
        assert_eq!(code(&o), 64, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(code(&semiflow(&["--help"])), 0);
    assert_eq!(code(&semiflow(&["--version"])), 0);
}

#[test]
fn computation_errors_exit_70() {
    // G = z is not a generator, so there is no Denjoy–Wolff point to report
    assert_eq!(code(&semiflow(&["dw", "-G", "0,1"])), 70);
}

#[test]
fn dw_and_factor() {
    let v = json(&semiflow(&["dw", "-G", "0.5,-1"]));
    assert_eq!(pair(&v["point"]), (0.5, 0.0));
    assert_eq!(v["boundary"], false);

    let v = json(&semiflow(&["dw", "-G", "-1,0,1"]));
    assert_eq!(v["boundary"], true);
    let (re, im) = pair(&v["point"]);
    assert!((re + 1.0).abs() < 1e-12 && im.abs() < 1e-12);

    let o = semiflow(&["factor", "-G", CUBIC]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let s = 3f64.sqrt();
    let f = v["f"].as_array().unwrap();
    for (k, e) in [1.0, -1.0 / s, 1.0 / s].iter().enumerate() {
        let (re, im) = pair(&f[k]);
        assert!((re - e).abs() < 1e-12 && im == 0.0);
    }
    let min = v["re_f_min"].as_f64().unwrap();
    assert!((min - (1.0 - 9.0 / (8.0 * s))).abs() < 1e-9);
    assert!(!String::from_utf8_lossy(&o.stdout).contains("-0.000000000000e0"));

    assert_eq!(code(&semiflow(&["factor", "-G", CUBIC, "--alpha", "0.5"])), 64);
}

#[test]
fn norm_examples() {
    let v = json(&semiflow(&["norm", "-G", "0,-1", "--space", "dirichlet", "-t", "0.5"]));
    let s = &v["section"];
    assert!((s["section_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(s["bound"].as_f64().unwrap(), 1.0);
    assert_eq!(s["within_bound"], true);

    let v = json(&semiflow(&["norm", "-G", "0.1,-1", "-t", "0.5", "--grid", "0.001,0.01,0.1,1"]));
    let s = &v["section"];
    assert!(s["section_norm"].as_f64().unwrap() <= s["bound"].as_f64().unwrap());
    let g = &v["growth"];
    let w_hat = g["w_hat"].as_f64().unwrap();
    for (t, n) in g["times"].as_array().unwrap().iter().zip(g["norms"].as_array().unwrap()) {
        assert!(n.as_f64().unwrap() <= (w_hat * t.as_f64().unwrap()).exp() * (1.0 + 1e-6));
    }

    let v = json(&semiflow(&["norm", "-G", "0.1,-1", "-t", "0.5", "--space", "bergman", "-N", "16"]));
    assert!(v["section"]["bound"].is_null());
    assert_eq!(code(&semiflow(&["norm", "-G", "0.1,-1", "-t", "0.5", "--space", "power:0.5", "-N", "16"])), 0);
}

#[test]
fn section_export() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("section.csv");
    let o = semiflow(&["norm", "-G", "0,-1", "-t", "1", "-N", "4", "--section-out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<f64>> = text.lines().map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.len() == 10));
    // C_φ z^n = e^{−n} z^n: diagonal, real parts interleaved with imaginary parts
    for (n, row) in rows.iter().enumerate() {
        assert!((row[2 * n] - (-(n as f64)).exp()).abs() < 1e-12);
        assert_eq!(row[2 * n + 1], 0.0);
    }

    let js = dir.path().join("section.json");
    let o = semiflow(&[
        "norm", "-G", "0,-1", "-t", "1", "-N", "4", "--section-out", js.to_str().unwrap(), "--section-format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    assert_eq!(v["dim"], 5);
    assert_eq!(v["reliable"], true);
}

#[test]
fn series_cap_from_environment() {
    let args = ["norm", "-G", "0,-1", "-t", "1", "-N", "40"];
    assert_eq!(code(&semiflow_env(&args, "SEMIFLOW_MAX_TRUNC", "64")), 64);
    assert_eq!(code(&semiflow_env(&args, "SEMIFLOW_MAX_TRUNC", "128")), 0);
    assert_eq!(code(&semiflow_env(&["check", "-G", "0,-1,0.5"], "SEMIFLOW_MAX_TRUNC", "2")), 64);
    assert_eq!(code(&semiflow_env(&["check", "-G", "0,-1"], "SEMIFLOW_MAX_TRUNC", "lots")), 64);
}

#[test]
fn nrange_kernel_probe() {
    let o = semiflow(&["nrange", "-G", "0,1", "--probe", "kernel", "-N", "40000"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, "parameter,re_part");
    let expected = [(0.9, 4.26316), (0.99, 49.2513), (0.999, 499.250)];
    assert_eq!(rows.len(), 3);
    for (row, (r, printed)) in rows.iter().zip(expected) {
        assert_eq!(row[0], r);
        assert!((row[1] - r * r / (1.0 - r * r)).abs() < 1e-6);
        assert!((row[1] - printed).abs() < 1e-3);
    }
    let (_, rows) = csv_rows(&semiflow(&["nrange", "-G", "0,-1", "--probe", "kernel", "--radii", "0.5", "--theta", "0"]));
    assert!((rows[0][1] + 1.0 / 3.0).abs() < 1e-10);
}

#[test]
fn nrange_fn_and_shift_probes() {
    let (_, rows) = csv_rows(&semiflow(&["nrange", "-G", "0,1", "--probe", "fn"]));
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [8.0, 16.0, 32.0, 64.0]);
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));

    let o = semiflow(&["nrange", "-G", "0.3,1,-0.5", "--probe", "shift", "-f", "0,1,0.5", "--k-values", "4,64"]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv_rows(&o);
    assert!(rows[1][1] >= 5.0 * rows[0][1] && rows[0][1] > 0.0);

    assert_eq!(code(&semiflow(&["nrange", "-G", "0,1", "--probe", "shift"])), 64);
    assert_eq!(code(&semiflow(&["nrange", "-G", "0,1", "--probe", "shift", "-f", "0,1", "--space", "hardy"])), 64);
}

#[test]
fn toeplitz_examples() {
    let o = semiflow(&["toeplitz", "-f", "1", "-k", "4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["right_half_plane"], true);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    assert!(results.iter().all(|r| r["verdict"] == "pd"));
    assert!(results[0].get("matrix").is_none());

    let v = json(&semiflow(&["toeplitz", "-f", "0,1", "-k", "2", "--matrices"]));
    assert_eq!(v["right_half_plane"], false);
    assert_eq!(v["results"][1]["verdict"], "indefinite");
    assert!(v["results"][1].get("matrix").is_some());
}

#[test]
fn output_is_byte_identical() {
    let cases: [&[&str]; 5] = [
        &["check", "-G", CUBIC],
        &["flow", "-G", CUBIC, "-z0", "0.3-0.2i", "-t", "3"],
        &["norm", "-G", "0.1+0.1i,-1,0.2", "-t", "0.5", "--grid", "0.01,0.1,1", "-N", "32"],
        &["toeplitz", "-f", "2,0.5-0.5i,0.25", "-k", "6", "--matrices"],
        &["demo", "--seed", "7", "--count", "4"],
    ];
    for args in cases {
        let a = semiflow(args);
        let b = semiflow(args);
        assert_eq!(a.status, b.status);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    assert_ne!(semiflow(&["demo", "--seed", "1"]).stdout, semiflow(&["demo", "--seed", "2"]).stdout);
}

#[test]
fn demo_samples_match_check() {
    let v = json(&semiflow(&["demo", "--seed", "3", "--count", "6"]));
    for sample in v.as_array().unwrap() {
        let g = sample["generator"].as_str().unwrap();
        let expected = match sample["verdict"].as_str().unwrap() {
            "generates" => 0,
            "does_not_generate" => 1,
            _ => 2,
        };
        assert_eq!(code(&semiflow(&["check", "-G", g])), expected, "{g}");
    }
}

#[test]
fn job_file_replays_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(
        &path,
        r#"{"command": "flow", "generator": [0, -1], "options": {"z0": "0.5", "t": 1, "samples": 20}}"#,
    )
    .unwrap();
    let from_job = semiflow(&["--job", path.to_str().unwrap()]);
    let direct = semiflow(&["flow", "-G", "0,-1", "-z0", "0.5", "-t", "1", "--samples", "20"]);
    assert_eq!(code(&from_job), 0);
    assert_eq!(from_job.stdout, direct.stdout);

    std::fs::write(&path, r#"{"command": "check", "generator": "1"}"#).unwrap();
    assert_eq!(code(&semiflow(&["--job", path.to_str().unwrap()])), 1);

    std::fs::write(&path, r#"{"command": "norm", "generator": "0,-1", "space": "dirichlet", "options": {"t": 0.5}}"#)
        .unwrap();
    let v = json(&semiflow(&["--job", path.to_str().unwrap()]));
    assert_eq!(v["section"]["bound"].as_f64(), Some(1.0));

    std::fs::write(&path, r#"{"command": "check", "generator": "0,-1", "extra": 1}"#).unwrap();
    assert_eq!(code(&semiflow(&["--job", path.to_str().unwrap()])), 64);
    assert_eq!(code(&semiflow(&["--job", dir.path().join("missing.json").to_str().unwrap()])), 64);
    assert_eq!(code(&semiflow(&["--job", path.to_str().unwrap(), "check", "-G", "1"])), 64);
}
