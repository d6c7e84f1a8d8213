use std::process::{Command, Output};

fn sparsechan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsechan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Splits CSV text into (header, rows), checking the schema line.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema_version=1"));
    let mut lines = lines.skip_while(|l| l.starts_with('#'));
    let header = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).expect(name);
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn small_config(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{
            "samples": 20000,
            "grids": {
                "t_grid": [0.01, 1, 100],
                "rate_grid": [0.001, 0.004],
                "mu_grid": [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
            }
        }"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn geometry_example_row() {
    let out = sparsechan(&[
        "geometry", "--tm", "1e-5", "--wd", "10", "--d1", "0.5", "--d2", "0.5", "--t", "1",
        "--w", "1e6", "--p", "1",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["d_t", "d_w", "d", "t_coh", "w_coh", "n_c", "n", "snr"]);
    assert_eq!(rows.len(), 1);
    let n_c = column(&header, &rows, "n_c")[0];
    assert!((n_c - 1e5).abs() / 1e5 < 1e-9, "n_c = {n_c}");
    assert_eq!(column(&header, &rows, "snr")[0], 1e-6);
}

#[test]
fn locus_example() {
    let out = sparsechan(&[
        "locus", "--tm", "1e-5", "--wd", "10", "--d1", "0.5", "--d2", "0.5", "--w", "1e6",
        "--p", "1", "--k", "1", "--mu", "2",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    let t = column(&header, &rows, "t")[0];
    assert!((t - 1e14).abs() / 1e14 < 1e-9, "t = {t}");
}

#[test]
fn mu_eff_matches_locus() {
    let locus = sparsechan(&["locus", "--mu", "1.7"]);
    let (h, r) = parse_csv(&stdout(&locus));
    let t = r[0][h.iter().position(|x| x == "t").unwrap()].clone();
    let out = sparsechan(&["mu-eff", "--t", &t]);
    let (header, rows) = parse_csv(&stdout(&out));
    let mu = column(&header, &rows, "mu_eff")[0];
    assert!((mu - 1.7).abs() < 1e-9, "mu_eff = {mu}");
}

#[test]
fn capacity_methods() {
    for (flag, method) in [("--exact", "exact"), ("--mc", "monte_carlo"), ("--bound", "lower_bound")] {
        let out = sparsechan(&["capacity", "--snr", "1", flag, "--samples", "10000"]);
        assert!(out.status.success(), "{flag}");
        let (header, rows) = parse_csv(&stdout(&out));
        assert_eq!(header, ["value", "std_error", "method"]);
        assert_eq!(rows[0][2], method);
    }
    let out = sparsechan(&["capacity", "--snr", "1"]);
    let (header, rows) = parse_csv(&stdout(&out));
    let v = column(&header, &rows, "value")[0];
    assert!((v - 0.86034).abs() < 1e-4);
}

#[test]
fn bound_outside_regime_warns() {
    let out = sparsechan(&["capacity", "--snr", "2", "--bound"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn exponent_zero_regime_at_huge_rate() {
    let out = sparsechan(&["exponent", "--nc", "1000", "--snr", "0.01", "--rate", "999"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(
        header,
        ["rate_nats", "rate_bits", "exponent", "rho_star", "r_cr", "r_max", "regime"]
    );
    assert_eq!(rows[0][6], "zero");
    assert_eq!(column(&header, &rows, "exponent")[0], 0.0);
}

#[test]
fn exponent_csi_is_annotated_and_dominates() {
    let args = ["exponent", "--nc", "500", "--snr", "0.01", "--rate", "0.001"];
    let tr = sparsechan(&args);
    let mut csi_args = args.to_vec();
    csi_args.push("--csi");
    let csi = sparsechan(&csi_args);
    let csi_text = stdout(&csi);
    assert!(csi_text.contains("derived approximation"));
    let (h1, r1) = parse_csv(&stdout(&tr));
    let (h2, r2) = parse_csv(&csi_text);
    assert!(column(&h2, &r2, "exponent")[0] >= column(&h1, &r1, "exponent")[0]);
    let bits = column(&h1, &r1, "rate_bits")[0];
    assert!((bits / (0.001 * std::f64::consts::LOG2_E) - 1.0).abs() < 1e-11);
}

#[test]
fn validity_region_exit_3() {
    let out = sparsechan(&["exponent", "--nc", "1000", "--snr", "5", "--rate", "0.1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let out = sparsechan(&["exponent", "--nc", "100", "--snr", "0.6", "--rate", "0.1", "--csi"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    let out = sparsechan(&["geometry", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(sparsechan(&["exponent"]).status.code(), Some(2));
    assert_eq!(sparsechan(&["geometry", "--tm", "-1"]).status.code(), Some(2));
    assert_eq!(sparsechan(&["--config", "/nonexistent.json", "geometry"]).status.code(), Some(2));
    assert_eq!(sparsechan(&[]).status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    let out = sparsechan(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("coeff-fit"));
}

#[test]
fn config_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"chanel": {}}"#).unwrap();
    let out = sparsechan(&["--config", path.to_str().unwrap(), "geometry"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"signaling": {"t": 1, "w": 1e6, "p": 1}}"#).unwrap();
    let cfg = path.to_str().unwrap();
    let (h, r) = parse_csv(&stdout(&sparsechan(&["--config", cfg, "geometry"])));
    assert_eq!(column(&h, &r, "snr")[0], 1e-6);
    let (h, r) = parse_csv(&stdout(&sparsechan(&["--config", cfg, "geometry", "--p", "100"])));
    assert_eq!(column(&h, &r, "snr")[0], 1e-4);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = sparsechan(&["--out", path.to_str().unwrap(), "geometry"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&sparsechan(&["geometry"])));
}

#[test]
fn coeff_fit_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(&dir);
    let out = sparsechan(&["--config", &cfg, "coeff-fit"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["t", "mu_eff", "c1", "c2"]);
    assert_eq!(column(&header, &rows, "t"), [0.01, 1.0, 100.0]);
    let mu = column(&header, &rows, "mu_eff");
    assert!(mu.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn exponent_sweep_schema_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(&dir);
    let out = sparsechan(&["--config", &cfg, "exponent-sweep"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["mu", "rate_nats", "exponent", "exponent_csi", "r_max"]);
    assert_eq!(rows.len(), 12);
    let rates = column(&header, &rows, "rate_nats");
    let mus = column(&header, &rows, "mu");
    assert_eq!(rates[..6], [0.001; 6]);
    assert_eq!(mus[..6], [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
    let e = column(&header, &rows, "exponent");
    let csi = column(&header, &rows, "exponent_csi");
    let r_max = column(&header, &rows, "r_max");
    for i in 0..rows.len() {
        assert!(csi[i] >= e[i]);
        if rates[i] > r_max[i] {
            assert_eq!(e[i], 0.0);
        }
    }
}

#[test]
fn mu_opt_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(&dir);
    let out = sparsechan(&["--config", &cfg, "mu-opt"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["rate_nats", "mu_opt", "exponent"]);
    let mu = column(&header, &rows, "mu_opt");
    assert_eq!(rows.len(), 2);
    assert!(mu[0] <= mu[1]);
    assert!(mu.iter().all(|&m| (0.5..=3.0).contains(&m)));
}

#[test]
fn mu_opt_empty_rows_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"grids": {"rate_grid": [0.001, 5.0]}}"#).unwrap();
    let out = sparsechan(&["--config", path.to_str().unwrap(), "mu-opt"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert!(column(&header, &rows, "mu_opt")[1].is_nan());
    assert_eq!(column(&header, &rows, "exponent")[1], 0.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
