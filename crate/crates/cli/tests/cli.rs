use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn susyd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_susyd"));
    for var in ["SUSYD_ALPHA_FM", "SUSYD_BINDING_ENERGY_MEV", "SUSYD_OUT"] {
        cmd.env_remove(var);
    }
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn calibrate_defaults() {
    let out = run(susyd().arg("calibrate"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["V0"].as_f64().unwrap() - 6.7784).abs() < 5e-4);
    assert!((v["k1"].as_f64().unwrap() - 2.8892).abs() < 5e-4);
    assert!((v["k_d"].as_f64().unwrap() - 0.6946).abs() < 5e-4);
    // CODATA constants; the rounded 6.7784 x 4.6113 would give 31.2572
    assert!((v["strength_mev"].as_f64().unwrap() - 31.255_289_469_3).abs() < 1e-6);
    assert!((v["nocore_strength_mev"].as_f64().unwrap() - 11.0173).abs() < 1e-3);
}

#[test]
fn calibrate_csv_has_units() {
    let out = run(susyd().args(["calibrate", "--format", "csv"]));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("quantity,value,unit\n"));
    assert!(text.contains("\nstrength,3.1255"));
    assert!(text.lines().any(|l| l.starts_with("alpha,") && l.ends_with(",fm")));
}

#[test]
fn domain_violation_exits_two() {
    let out = run(susyd().args(["calibrate", "--binding-energy-mev", "-50"]));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(4, 9)"));

    let out = run(susyd().args(["partner", "--strength-v0", "10"]));
    assert_eq!(out.status.code(), Some(2));
    let out = run(susyd().args(["calibrate", "--alpha-fm", "0"]));
    assert_eq!(out.status.code(), Some(2));
    let out = run(susyd().args(["calibrate", "--binding-energy-mev", "1.0"]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_arguments_exit_two() {
    assert_eq!(run(susyd().args(["calibrate", "--grid-points", "many"])).status.code(), Some(2));
    assert_eq!(run(susyd().arg("nonsense")).status.code(), Some(2));
    assert_eq!(run(susyd().args(["calibrate", "--format", "xml"])).status.code(), Some(2));
}

#[test]
fn flags_override_environment() {
    let from_env = json(&run(susyd().env("SUSYD_ALPHA_FM", "2").arg("calibrate")));
    assert_eq!(from_env["alpha_fm"], 2.0);
    let flag = json(&run(susyd().env("SUSYD_ALPHA_FM", "2").args(["calibrate", "--alpha-fm", "3"])));
    assert_eq!(flag["alpha_fm"], 3.0);
    let energy = json(&run(susyd().env("SUSYD_BINDING_ENERGY_MEV", "-2.0").arg("calibrate")));
    assert_eq!(energy["binding_energy_mev"], -2.0);
}

#[test]
fn spectrum_for_given_strength() {
    let v = json(&run(susyd().args(["spectrum", "--strength-v0", "5"])));
    assert_eq!(v["bound_states"], 2);
    assert_eq!(v["oracle_levels"], 2);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels[0]["energy"], -4.0);
    assert_eq!(levels[1]["energy"], -0.0625);
    for l in levels {
        assert!(l["rel_error"].as_f64().unwrap() < 1e-6);
        assert_eq!(l["oracle_nodes"], l["nodes_expected"]);
    }
}

#[test]
fn partner_binds_once_at_deuteron_energy() {
    let out = run(susyd().arg("partner"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["oracle_levels"], 1);
    assert!((v["energy_mev"].as_f64().unwrap() + 2.224_566_14).abs() < 1e-9);
    assert!((v["oracle_energies"][0].as_f64().unwrap() - v["energy"].as_f64().unwrap()).abs() < 1e-5);
    assert_eq!(v["phase"]["phase"], "unbroken");
    assert_eq!(v["phase"]["missing_level"], 1);
}

#[test]
fn verify_defaults_pass() {
    let out = run(susyd().arg("verify"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    assert_eq!(report["schema_version"], "susyd.verify/1");
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["grid_points"], 200_000);
    let partner = check(&report, "partner_level_count");
    assert_eq!(partner["oracle"], 1.0);
    for c in report["checks"].as_array().unwrap() {
        for key in ["name", "analytic", "oracle", "abs_error", "rel_error", "tolerance", "passed"] {
            assert!(c.get(key).is_some(), "check lacks {key}");
        }
        assert_eq!(c["passed"], true, "{c}");
    }
}

#[test]
fn verify_given_strength() {
    let report = json(&run(susyd().args(["verify", "--strength-v0", "5"])));
    assert_eq!(check(&report, "hulthen_level_count")["oracle"], 2.0);
    assert_eq!(check(&report, "hulthen_energy_1")["analytic"], -4.0);
    assert_eq!(check(&report, "hulthen_energy_2")["analytic"], -0.0625);
}

#[test]
fn verify_coarse_grid_reports_order() {
    let out = run(susyd().args(["verify", "--grid-points", "1000"]));
    let report = json(&out);
    let order = check(&report, "oracle_order_1000_vs_2000");
    assert!(order["oracle"].as_f64().unwrap() >= 3.5);
    assert_eq!(order["passed"], true);
    // 1000 points over the default window are too coarse for 1e-6 energies
    assert_eq!(check(&report, "hulthen_energy_1")["passed"], false);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["passed"], false);
}

#[test]
fn verify_is_deterministic() {
    let a = run(susyd().args(["verify", "--strength-v0", "5", "--grid-points", "20000"]));
    let b = run(susyd().args(["verify", "--strength-v0", "5", "--grid-points", "20000"]));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn figures_written_and_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(susyd().arg("figures").arg("--out").arg(dir.path()));
    assert_eq!(out.status.code(), Some(0));
    let names = ["figure1.csv", "figure2.csv", "figure1.gp", "figure2.gp"];
    let first: Vec<Vec<u8>> = names.iter().map(|n| fs::read(dir.path().join(n)).unwrap()).collect();

    let again = run(susyd().env("SUSYD_OUT", dir.path()).arg("figures"));
    assert_eq!(again.status.code(), Some(0));
    for (name, bytes) in names.iter().zip(&first) {
        assert_eq!(&fs::read(dir.path().join(name)).unwrap(), bytes, "{name} changed");
    }

    let gp1 = String::from_utf8(first[2].clone()).unwrap();
    assert!(gp1.contains("'figure1.csv'") && gp1.contains("[fm]") && gp1.contains("[MeV]"));
    let gp2 = String::from_utf8(first[3].clone()).unwrap();
    assert!(gp2.contains("'figure2.csv'") && gp2.contains("x = r / alpha"));

    let (header, rows) = parse_csv(std::str::from_utf8(&first[0]).unwrap());
    assert_eq!(header, ["r_fm", "hulthen_mev", "partner_mev", "nocore_mev", "binding_energy_mev"]);
    assert!(rows.windows(2).any(|w| w[0][2] > 0.0 && w[1][2] < 0.0), "partner changes sign");

    let (header, rows) = parse_csv(std::str::from_utf8(&first[1]).unwrap());
    assert_eq!(header, ["x", "nocore_density", "partner_density"]);
    let argmax = |col: usize| rows.iter().max_by(|a, b| a[col].total_cmp(&b[col])).unwrap()[0];
    assert!(argmax(2) > argmax(1));
    let h = rows[1][0] - rows[0][0];
    for col in [1, 2] {
        // Simpson over an odd number of intervals: 3/8 rule on the last three
        let f: Vec<f64> = rows.iter().map(|r| r[col]).collect();
        let n = f.len() - 1;
        let body_end = if n.is_multiple_of(2) { n } else { n - 3 };
        let mut s = f[0] + f[body_end];
        for (i, v) in f.iter().enumerate().take(body_end).skip(1) {
            s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        let mut norm = s * h / 3.0;
        if body_end != n {
            norm += 3.0 * h / 8.0 * (f[n - 3] + 3.0 * f[n - 2] + 3.0 * f[n - 1] + f[n]);
        }
        assert!((norm - 1.0).abs() < 1e-5, "column {col}: {norm}");
    }
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not_a_dir");
    fs::write(&blocker, "x").unwrap();
    let out = run(susyd().arg("figures").arg("--out").arg(&blocker));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_a_dir"));
    let out = run(susyd().arg("calibrate").arg("--out").arg(blocker.join("sub")));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_directory_for_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(susyd().args(["calibrate", "--format", "csv", "--out"]).arg(dir.path()));
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("calibration.csv")).unwrap();
    assert!(text.starts_with("quantity,value,unit"));
}
