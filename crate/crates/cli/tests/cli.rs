use std::path::Path;
use std::process::{Command, Output};

fn kdvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdvlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_exit_codes() {
    let ok = kdvlab(&["verify", "--family", "kdv-cn2-sndn", "--m", "0.25", "--alpha", "1", "--branch", "+"]);
    assert_eq!(code(&ok), 0);
    let report = json(&ok);
    assert_eq!(report["params"]["c"], -0.5);
    assert_eq!(report["pass"], true);

    let published = kdvlab(&["verify", "--family", "mkdv-sn", "--m", "0.5", "--paper-velocities"]);
    assert_eq!(code(&published), 1);
    assert_eq!(json(&published)["params"]["c"], -22.5);

    let bad_m = kdvlab(&["verify", "--family", "kdv-cn2-sndn", "--m", "2"]);
    assert_eq!(code(&bad_m), 2);
    assert!(String::from_utf8_lossy(&bad_m.stderr).contains("domain"));
}

#[test]
fn verify_rejects_bad_usage() {
    assert_eq!(code(&kdvlab(&["verify"])), 2);
    assert_eq!(code(&kdvlab(&["verify", "--family", "kdv-quintic"])), 2);
    assert_eq!(code(&kdvlab(&["verify", "--family", "kdv-sech2", "--m", "0.5"])), 2);
    assert_eq!(code(&kdvlab(&["verify", "--family", "kdv-cnoidal", "--beta", "0.3"])), 2);
    assert_eq!(code(&kdvlab(&["verify", "--family", "kdv-sech2", "--colour", "red"])), 2);
    assert_eq!(code(&kdvlab(&["transmogrify"])), 2);
    assert_eq!(code(&kdvlab(&["--help"])), 0);
}

#[test]
fn verify_negative_beta_and_wrong_equation() {
    let out = kdvlab(&["verify", "--family", "kdv-cn2-sncn", "--m", "0.5", "--beta", "-0.3", "--branch", "-"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["params"]["offset"], -0.3);
    let focusing = kdvlab(&["verify", "--family", "mkdv-sn-cn", "--m", "0.5", "--equation", "mkdv-focusing"]);
    assert_eq!(code(&focusing), 1);
}

#[test]
fn verify_all_covers_the_catalog() {
    let out = kdvlab(&["verify", "--all"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    let cases = report["cases"].as_array().unwrap();
    for family in [
        "kdv-cnoidal",
        "kdv-sech2",
        "kdv-cn2-sndn",
        "kdv-cn2-sncn",
        "kdv-cosech",
        "mkdv-sn-cn",
        "mkdv-sn-dn",
        "mkdv-sn",
        "mkdv-icn",
        "mkdv-cosech-coth",
    ] {
        assert!(cases.iter().any(|c| c["spec"]["family"] == family), "{family}");
    }
    assert_eq!(report["failed"], 0);
    assert_eq!(code(&kdvlab(&["verify", "--all", "--paper-velocities"])), 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sndn at a quarter\nfamily=kdv-cn2-sndn\nm=0.25\nalpha=2\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = json(&kdvlab(&["verify", "--config", cfg]));
    assert_eq!(from_file["spec"]["m"], 0.25);
    assert_eq!(from_file["spec"]["alpha"], 2.0);

    let overridden = json(&kdvlab(&["verify", "--config", cfg, "--m", "0.75"]));
    assert_eq!(overridden["spec"]["m"], 0.75);
    assert_eq!(overridden["spec"]["alpha"], 2.0);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "family=kdv-sech2\nresolution=high\n").unwrap();
    let out = kdvlab(&["verify", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key 'resolution'"));

    assert_eq!(code(&kdvlab(&["verify", "--config", "/nonexistent/run.cfg"])), 2);
}

#[test]
fn sweep_table() {
    let out = kdvlab(&["sweep", "--family", "kdv-cnoidal"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,c,relative,sup_norm,l2_norm,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    assert!(rows[0].starts_with("5.000000000000e-02,-3.600000000000e+00,"));
    assert!(rows.iter().all(|r| r.ends_with(",true")));

    assert_eq!(code(&kdvlab(&["sweep", "--family", "mkdv-sn", "--paper-velocities"])), 1);
    assert_eq!(code(&kdvlab(&["sweep"])), 2);
}

#[test]
fn evolve_outputs_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let args = |out: &Path| {
        vec![
            "evolve".to_string(),
            "--family".into(),
            "kdv-sech2".into(),
            "--t-end".into(),
            "0.05".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let argv = args(&out_dir);
    let out = kdvlab(&argv.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(out_dir.join("snapshots.csv")).unwrap();
    assert!(csv.starts_with("t,x,re_u,im_u,intensity\n"));
    assert_eq!(csv.lines().count(), 1 + 11 * 1024);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], true);
    assert!(summary["error_l2"].as_f64().unwrap() < 1e-6);

    let coarse = kdvlab(&["evolve", "--family", "kdv-sech2", "--n", "128", "--dt", "1e-3", "--t-end", "0.1"]);
    assert_eq!(code(&coarse), 1);
    assert_eq!(json(&coarse)["pass"], false);

    assert_eq!(code(&kdvlab(&["evolve", "--family", "kdv-cosech"])), 2);
    assert_eq!(code(&kdvlab(&["evolve", "--family", "kdv-sech2", "--n", "100"])), 2);
}

#[test]
fn spectrum_exit_codes() {
    let out = kdvlab(&["spectrum", "--potential", "complex-scarf", "--alpha", "1"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    let levels = report["bound_states"].as_array().unwrap();
    assert_eq!(levels.len(), 1);
    assert!((levels[0]["re"].as_f64().unwrap() + 0.25).abs() < 2e-3);
    assert_eq!(report["converged"], true);

    let lax = json(&kdvlab(&["spectrum", "--family", "kdv-sech2"]));
    assert!((lax["bound_states"][0]["re"].as_f64().unwrap() + 1.0).abs() < 2e-3);

    assert_eq!(code(&kdvlab(&["spectrum", "--potential", "sech2", "--n", "40"])), 1);
    assert_eq!(code(&kdvlab(&["spectrum", "--potential", "harmonic"])), 2);
    assert_eq!(code(&kdvlab(&["spectrum"])), 2);
    assert_eq!(code(&kdvlab(&["spectrum", "--family", "kdv-cnoidal", "--m", "0.5"])), 2);
    assert_eq!(code(&kdvlab(&["spectrum", "--family", "mkdv-sn-dn"])), 2);
}

#[test]
fn figure_is_deterministic() {
    let a = kdvlab(&["figure", "--id", "1"]);
    let b = kdvlab(&["figure", "--id", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with(
        "m,zeta,re,im,intensity_superposed,intensity_fundamental,intensity_subtracted\n"
    ));
    assert_eq!(text.lines().count(), 1 + 2 * 401);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/fig3.csv");
    assert_eq!(code(&kdvlab(&["figure", "--id", "3", "--out", path.to_str().unwrap()])), 0);
    assert!(std::fs::read_to_string(&path).unwrap().lines().count() == 803);

    assert_eq!(code(&kdvlab(&["figure", "--id", "5"])), 2);
    assert_eq!(code(&kdvlab(&["figure"])), 2);
}

#[test]
fn flip_sign_mirrors_only_the_real_part() {
    let rows = |args: &[&str]| -> Vec<Vec<f64>> {
        String::from_utf8(kdvlab(args).stdout)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect()
    };
    let text = rows(&["figure", "--id", "1"]);
    let plotted = rows(&["figure", "--id", "1", "--flip-sign"]);
    for (t, p) in text.iter().zip(&plotted) {
        assert_eq!(t[2], -p[2]);
        assert_eq!(t[3..], p[3..]);
    }
    // At the crest the text convention is negative, the plotted one positive.
    assert_eq!(text[200][2], -1.0);
    assert_eq!(plotted[200][2], 1.0);
}

#[test]
fn errata_report() {
    let out = kdvlab(&["errata"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["sn_velocity"]["published_holds"], false);
    assert_eq!(report["sn_velocity"]["verified_holds"], true);
    assert_eq!(report["figure_sign"]["text_sign_holds"], true);
    assert_eq!(report["figure_sign"]["plotted_sign_holds"], false);
    assert_eq!(report["isospectral_partner"]["scarf_vs_sech2"]["isospectral"], false);
    assert!(report["isospectral_partner"]["partner_plus_deviation"].as_f64().unwrap() < 1e-10);

    assert_eq!(code(&kdvlab(&["errata", "--alpha", "-1"])), 2);
}
