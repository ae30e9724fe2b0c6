use std::collections::HashMap;
use std::process::{Command, Output};

fn zitterkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zitterkit"))
        .args(args)
        .env_remove("ZITTERKIT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    header: HashMap<String, String>,
}

impl Table {
    fn parse(text: &str) -> Table {
        let mut header = HashMap::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# ") {
                if let Some((k, v)) = rest.split_once(" = ") {
                    header.insert(k.to_string(), v.to_string());
                }
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let columns = reader.headers().unwrap().iter().map(String::from).collect();
        let rows = reader
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect();
        Table { columns, rows, header }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let k = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].parse().unwrap()).collect()
    }

    fn summary(&self, key: &str) -> f64 {
        self.header[&format!("summary.{key}")].parse().unwrap()
    }
}

fn run_table(args: &[&str]) -> Table {
    let out = zitterkit(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    Table::parse(&stdout(&out))
}

#[test]
fn default_algebra_suite_passes() {
    let t = run_table(&["check-algebra"]);
    assert!(t.col("residual").iter().all(|r| *r <= 1e-12));
    assert_eq!(t.summary("failed"), 0.0);
}

#[test]
fn corrupted_spin_exits_one_and_names_identity() {
    let out = zitterkit(&["check-algebra", "--corrupt-spin"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("spin1.commutation"));
    assert!(stdout(&out).contains("spin1.commutation,1.0000000000000000e-3"));
}

#[test]
fn zero_gfv_parameter_is_a_config_error() {
    let out = zitterkit(&["check-algebra", "--rep", "gfv", "--gfv-n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("N must be nonzero"));
}

#[test]
fn bad_configs_exit_two() {
    for args in [
        vec!["spectrum", "--rep", "fv", "--mass", "0"],
        vec!["spectrum", "--rep", "dirac", "--gfv-n", "2"],
        vec!["spectrum", "--p", "1,2"],
        vec!["spectrum", "--axis", "4"],
        vec!["spectrum", "--spin", "1/3", "--rep", "gfv"],
        vec!["spectrum", "--config", "/nonexistent/run.toml"],
        vec!["transform", "--rep", "dirac", "--mass", "1"],
        vec!["evolve-packet", "--rep", "dirac", "--mass", "0", "--p", "0,0,0.3"],
        vec!["spectrum", "--bogus"],
    ] {
        let out = zitterkit(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "rep = \"dirac\"\nmomentum = 3\n").unwrap();
    let out = zitterkit(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("momentum"));
}

#[test]
fn dirac_spectrum_at_rest_is_doubled() {
    let t = run_table(&["spectrum", "--steps", "11"]);
    assert_eq!(t.col("p_abs")[0], 0.0);
    let row: Vec<f64> = (1..=4).map(|k| t.col(&format!("lambda_{k}"))[0]).collect();
    assert_eq!(row, vec![1.0, 1.0, -1.0, -1.0]);
}

#[test]
fn photon_spectrum_and_fw_match_on_transverse_part() {
    let photon = run_table(&["spectrum", "--rep", "photon", "--p", "0,1.2,1.6", "--steps", "9"]);
    let fw = run_table(&["spectrum", "--rep", "fw", "--mass", "0", "--spin", "1", "--p", "0,1.2,1.6", "--steps", "9"]);
    let p = photon.col("p_abs");
    for (k, &pk) in p.iter().enumerate() {
        let ph: Vec<f64> = (1..=6).map(|j| photon.col(&format!("lambda_{j}"))[k]).collect();
        let f: Vec<f64> = (1..=6).map(|j| fw.col(&format!("lambda_{j}"))[k]).collect();
        let expect = [pk, pk, 0.0, 0.0, -pk, -pk];
        for (a, b) in ph.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        // drop FW's third member of each branch: the transverse spectra agree
        for (a, b) in [ph[0], ph[1], ph[4], ph[5]].iter().zip([f[0], f[1], f[4], f[5]]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn operator_residuals_are_small_and_start_at_zero() {
    for args in [
        vec!["evolve-operator", "--steps", "64"],
        vec!["evolve-operator", "--rep", "gfv", "--spin", "1", "--mass", "0", "--gfv-n", "0.4", "--p", "0.3,-1,2", "--axis", "2", "--steps", "64"],
        vec!["evolve-operator", "--rep", "photon", "--p", "1,1,0", "--steps", "64", "--entry", "1,4"],
        vec!["evolve-operator", "--rep", "fv", "--mass", "2", "--p", "1,0,0", "--tmax", "20", "--steps", "64"],
    ] {
        let t = run_table(&args);
        assert!(t.col("v_residual").iter().all(|r| *r <= 1e-10), "{args:?}");
        assert!(t.col("dr_residual").iter().all(|r| *r <= 1e-10), "{args:?}");
        for c in ["dr_closed_re", "dr_closed_im", "dr_numeric_re", "dr_numeric_im"] {
            assert_eq!(t.col(c)[0], 0.0);
        }
    }
}

#[test]
fn fw_operator_velocity_is_constant() {
    let t = run_table(&["evolve-operator", "--rep", "fw", "--p", "0.5,0,1", "--entry", "0,0", "--steps", "32"]);
    let v = t.col("v_closed_re");
    assert!(v.iter().all(|x| *x == v[0]));
    // β p_x / ε with ε = √(1 + 1.25) = 1.5
    assert!((v[0] - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(t.summary("amplitude_max_entry"), 0.0);
}

#[test]
fn singular_hamiltonian_exits_three() {
    let out = zitterkit(&["evolve-operator", "--rep", "photon", "--p", "0,0,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("zero momentum"));
}

#[test]
fn mixed_massless_dirac_packet_frequency() {
    let t = run_table(&["evolve-packet", "--rep", "dirac", "--mass", "0", "--p", "0,0,5", "--sigma", "0.5"]);
    assert!((t.summary("frequency") - 10.0).abs() <= t.summary("frequency_resolution"));
    assert_eq!(t.rows.len(), 512);
    assert_eq!(t.columns, ["t", "v_re", "dr_re", "signed_norm"]);
}

#[test]
fn pure_branch_packet_does_not_tremble() {
    let t = run_table(&["evolve-packet", "--rep", "gfv", "--spin", "1/2", "--p", "1.2,0,1.6", "--mix", "0,1"]);
    assert!(t.summary("amplitude") <= 1e-10);
    assert_eq!(t.summary("signed_norm"), -1.0);
}

#[test]
fn fw_packet_drifts_at_group_velocity() {
    let t = run_table(&["evolve-packet", "--rep", "fw", "--p", "0,0,1.5", "--axis", "3", "--mix", "1,0", "--samples", "9"]);
    assert!(t.summary("amplitude") <= 1e-12);
    let sigma: f64 = 0.1;
    let n = 9;
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..n {
        let x = -4.0 * sigma + 8.0 * sigma * k as f64 / (n - 1) as f64;
        let w = (-x * x / (2.0 * sigma * sigma)).exp();
        let p = 1.5 + x;
        num += w * p / (1.0 + p * p).sqrt();
        den += w;
    }
    assert!((t.summary("drift_velocity") - num / den).abs() < 1e-12);
}

#[test]
fn indefinite_norm_exits_three() {
    let out = zitterkit(&["evolve-packet", "--rep", "gfv", "--mix", "1,1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("signed norm"));
}

#[test]
fn gfv_transform_at_n_equal_energy_is_identity() {
    let t = run_table(&["transform", "--rep", "gfv", "--p", "0,0.75,0", "--gfv-n", "1.25"]);
    let k = t.columns.iter().position(|c| c == "matrix").unwrap();
    let rows: Vec<&Vec<String>> = t.rows.iter().filter(|r| r[k] == "U").collect();
    assert_eq!(rows.len(), 16);
    for r in rows {
        let (i, j): (usize, usize) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let re: f64 = r[3].parse().unwrap();
        assert!((re - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
    }
    assert_eq!(t.header["summary.metric"], "rho3");
}

#[test]
fn photon_gfv_components_are_printed() {
    let t = run_table(&["transform", "--rep", "gfv", "--spin", "1", "--mass", "0", "--p", "0,0,2", "--gfv-n", "3"]);
    let d = 2.0 * 6.0f64.sqrt();
    assert!((t.summary("psi_positive_upper") - 5.0 / d).abs() < 1e-15);
    assert!((t.summary("psi_positive_lower") - 1.0 / d).abs() < 1e-15);
    assert!(t.summary("wavefunction_residual") <= 1e-12);
    assert!(t.summary("off_block_residual") <= 1e-10);
}

#[test]
fn transform_off_block_residual_random_configs() {
    for (rep, extra) in [
        ("photon", vec!["--p", "0.3,-0.4,1.2"]),
        ("dirac", vec!["--mass", "0", "--p", "-1,0.5,0.1"]),
        ("fv", vec!["--mass", "0.7", "--p", "2,1,-1"]),
        ("gfv", vec!["--mass", "0.2", "--spin", "3/2", "--gfv-n", "-0.8", "--p", "0.1,0.2,0.3"]),
    ] {
        let mut args = vec!["transform", "--rep", rep];
        args.extend(extra);
        let t = run_table(&args);
        assert!(t.summary("off_block_residual") <= 1e-10, "{rep}");
        assert!(t.summary("inverse_residual") <= 1e-10, "{rep}");
    }
}

#[test]
fn json_mirrors_csv() {
    let csv_out = run_table(&["spectrum", "--steps", "5"]);
    let out = zitterkit(&["spectrum", "--steps", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["tool"], "zitterkit");
    assert_eq!(v["meta"]["command"], "spectrum");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), csv_out.rows.len());
    for (k, row) in rows.iter().enumerate() {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.len(), csv_out.columns.len());
        for c in &csv_out.columns {
            assert_eq!(obj[c].as_f64().unwrap(), csv_out.col(c)[k]);
        }
    }
}

#[test]
fn header_block_records_resolved_config() {
    let t = run_table(&["evolve-packet", "--steps", "16"]);
    assert_eq!(t.header["config.rep"], "dirac");
    assert_eq!(t.header["config.steps"], "16");
    assert_eq!(t.header["config.tmax"], "auto");
    assert_eq!(t.header["config.sigma"], "1.0000000000000001e-1");
    let text = stdout(&zitterkit(&["evolve-packet", "--steps", "16"]));
    assert!(text.starts_with(&format!("# zitterkit {}\n", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn flags_win_over_file_and_out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "rep = \"photon\"\np = [0.0, 0.0, 2.0]\nsteps = 7\nformat = \"json\"\n").unwrap();
    let out_path = dir.path().join("s.csv");
    let out = zitterkit(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--steps",
        "3",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let t = Table::parse(&std::fs::read_to_string(&out_path).unwrap());
    assert_eq!(t.rows.len(), 3);
    assert_eq!(t.header["config.rep"], "photon");
}

#[test]
fn seed_controls_random_momenta() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_zitterkit"))
            .args(["check-algebra", "--random-momenta", "10"])
            .env("ZITTERKIT_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(run("17"), run("17"));
    assert_ne!(run("17"), run("18"));
    let out = Command::new(env!("CARGO_BIN_EXE_zitterkit"))
        .arg("check-algebra")
        .env("ZITTERKIT_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
