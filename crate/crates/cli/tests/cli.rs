use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wyner-gauge"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("run.json")).unwrap()).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn calibrate_prints_closed_form_values() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["calibrate", "--beta", "4", "--eps", "0"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("alpha_sq_ul = 0.012500"), "{text}");
    assert!(text.contains("alpha_sq_dl = 0.032099"), "{text}");
    let table = rows(&tmp.path().join("calibrate.csv"));
    let exact = table.iter().find(|r| r[5] == "exact_mean_u").unwrap();
    let v: f64 = exact[1].parse().unwrap();
    assert!(v > 0.0125 && v < 0.1, "{v}");
}

#[test]
fn empty_config_gives_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("empty.toml");
    std::fs::write(&cfg, "").unwrap();
    let out = tmp.path().join("out");
    let o = run(&["calibrate", "--config", cfg.to_str().unwrap()], &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = manifest(&out);
    let net = &m["settings"]["network"];
    assert_eq!(net["users_per_cell"], 50);
    assert_eq!(net["n_cells"], 64);
    assert_eq!(net["pathloss_exp"], 4.0);
    assert_eq!(net["exclusion_radius"], 0.01);
    assert_eq!(m["seed"], 1);
    assert!(m["config_file"].as_str().unwrap().ends_with("empty.toml"));
}

#[test]
fn flags_override_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.toml");
    std::fs::write(&cfg, "[network]\nusers_per_cell = 20\nseed = 7\n\n[run]\nbetas = [3.0]\n").unwrap();
    let out = tmp.path().join("out");
    let o = run(&["calibrate", "--config", cfg.to_str().unwrap(), "--users", "30"], &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = manifest(&out);
    assert_eq!(m["settings"]["network"]["users_per_cell"], 30);
    assert_eq!(m["seed"], 7);
    assert_eq!(m["settings"]["betas"], serde_json::json!([3.0]));
}

#[test]
fn malformed_config_reports_position() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "[network]\nusers_per_cell = \"many\"\n").unwrap();
    let o = run(&["calibrate", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.toml:2:"), "{}", stderr(&o));

    std::fs::write(&cfg, "[network]\nusers = 3\n").unwrap();
    let o = run(&["calibrate", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("users"), "{}", stderr(&o));
}

#[test]
fn invalid_parameter_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["calibrate", "--beta", "1.5"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["fig3", "--trials", "0"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fig3_csv_format_and_bound() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["fig3", "--beta", "3,5", "--trials", "20000", "--plot"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    for b in ["3", "5"] {
        let path = tmp.path().join(format!("fig3_beta{b}.csv"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("x,value,ci_low,ci_high,kind,series\n"));
        assert!(!text.contains('\r'));
        let table = rows(&path);
        let mc: Vec<&Vec<String>> = table.iter().filter(|r| r[4] == "mc").collect();
        let lb: Vec<&Vec<String>> = table.iter().filter(|r| r[4] == "lower_bound").collect();
        assert_eq!(mc.len(), lb.len());
        assert!(!mc.is_empty());
        for (m, l) in mc.iter().zip(&lb) {
            assert_eq!(m[0], l[0]);
            assert!(m[1].contains('e'), "scientific notation expected: {}", m[1]);
            let value: f64 = m[1].parse().unwrap();
            let hi: f64 = m[3].parse().unwrap();
            let bound: f64 = l[1].parse().unwrap();
            // bound below MC up to the width of a 95% interval
            assert!(bound <= value + 2.0 * (hi - value) + 1e-12, "{l:?} vs {m:?}");
        }
        let svg = std::fs::read_to_string(tmp.path().join(format!("fig3_beta{b}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        assert!(svg.contains("stroke-dasharray"));
    }
}

#[test]
fn manifest_lists_outputs_with_hashes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["fig5", "--trials", "2000", "--seed", "9"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let m = manifest(tmp.path());
    assert_eq!(m["tool"], "wyner-gauge");
    assert_eq!(m["command"], "fig5");
    assert_eq!(m["seed"], 9);
    assert_eq!(m["trials"], 2000);
    assert_eq!(m["sir_cap"], 1e6);
    let outputs = m["outputs"].as_array().unwrap();
    assert!(outputs.iter().any(|f| f["path"] == "report.txt"));
    for f in outputs {
        let hash = f["sha256"].as_str().unwrap();
        assert_eq!(hash.len(), 64);
        assert!(tmp.path().join(f["path"].as_str().unwrap()).exists());
    }
}

#[test]
fn same_seed_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = run(&["custom", "--trials", "3000", "--users", "10", "--interferers", "3"], dir);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["custom_outage.csv", "custom_throughput.csv"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn eps_flag_is_relative_to_cell_width() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.toml");
    std::fs::write(&cfg, "[network]\ncell_half_width = 500.0\nexclusion_radius = 5.0\n").unwrap();
    let out = tmp.path().join("out");
    let o = run(&["calibrate", "--config", cfg.to_str().unwrap(), "--eps", "0.1"], &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(manifest(&out)["settings"]["network"]["exclusion_radius"], 50.0);
    let o = run(&["calibrate", "--config", cfg.to_str().unwrap()], &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(manifest(&out)["settings"]["network"]["exclusion_radius"], 5.0);
}
