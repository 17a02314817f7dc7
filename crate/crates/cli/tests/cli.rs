use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use levy_smalltime::*;
use levy_smalltime_cli::load_spec;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levy-smalltime"))
}

fn spec_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn loglog(dir: &Path) -> PathBuf {
    spec_file(dir, "loglog.json", r#"{"family": "VProfileLogLog"}"#)
}

fn stable(dir: &Path, alpha: f64) -> PathBuf {
    let s = LevyProcessSpec::new(0.0, 0.0, JumpMeasure::stable_like(1.0, 1.0, alpha).unwrap()).unwrap();
    spec_file(dir, &format!("stable_{alpha}.json"), &s.to_json())
}

fn call(args: &[&str], spec: &Path, out: &Path) -> Output {
    bin()
        .args(args)
        .arg("--spec")
        .arg(spec)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn written(o: &Output) -> Vec<PathBuf> {
    String::from_utf8_lossy(&o.stdout).lines().map(PathBuf::from).collect()
}

fn json_of(o: &Output) -> Value {
    let f = written(o)
        .into_iter()
        .find(|f| f.extension().is_some_and(|e| e == "json"))
        .unwrap();
    serde_json::from_str(&fs::read_to_string(f).unwrap()).unwrap()
}

fn csv_of(o: &Output) -> String {
    let f = written(o)
        .into_iter()
        .find(|f| f.extension().is_some_and(|e| e == "csv"))
        .unwrap();
    fs::read_to_string(f).unwrap()
}

#[test]
fn classify_sqrt_scale() {
    let dir = tempfile::tempdir().unwrap();
    let o = call(&["classify", "--kappa", "0.5"], &loglog(dir.path()), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_of(&o);
    let two = &v["result"]["two_sided_limsup"];
    let value = two["value"]["value"].as_f64().unwrap();
    assert!((value - 2f64.sqrt()).abs() < 0.02, "{value}");
    assert_eq!(two["basis"], "Theorem 2");
    assert!(v["citations"].as_array().unwrap().contains(&Value::from("Theorem 2")));
    assert!(csv_of(&o).starts_with("kappa,quantity,verdict,value,basis\n"));
}

#[test]
fn sweep_flips_at_the_index() {
    let dir = tempfile::tempdir().unwrap();
    let o = call(
        &["sweep", "--kappas", "0.6:1.4:0.1"],
        &stable(dir.path(), 1.0),
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = csv_of(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<(f64, String)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].to_string())
        })
        .collect();
    assert_eq!(rows.len(), 9);
    for (k, verdict) in rows {
        let want = if k < 1.0 { "zero" } else { "infinite" };
        assert_eq!(verdict, want, "kappa {k}");
    }
}

#[test]
fn missing_kappa_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = call(&["test"], &stable(dir.path(), 1.5), dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing parameter: kappa"), "{}", stderr(&o));
}

#[test]
fn bad_values_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let spec = stable(dir.path(), 1.5);
    let o = call(&["simulate", "--kappa", "0.8", "--depth", "deep"], &spec, dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("depth"), "{}", stderr(&o));
    let o = call(&["functional", "--name", "Q"], &spec, dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("name"));
    let o = bin().args(["classify", "--kappa", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1), "clap usage errors map to 1");
    let o = bin()
        .args(["classify", "--kappa", "1", "--spec"])
        .arg(dir.path().join("absent.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.json"));
}

#[test]
fn inconclusive_trend_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = call(
        &[
            "simulate", "--kappa", "0.9", "--depth", "20", "--paths", "50", "--seed", "1",
        ],
        &stable(dir.path(), 1.0),
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(json_of(&o)["result"]["verdict"], "inconclusive");
}

#[test]
fn simulate_reports_carry_the_disclaimer() {
    let dir = tempfile::tempdir().unwrap();
    let o = call(
        &[
            "simulate",
            "--kappa",
            "0.7",
            "--depth",
            "30",
            "--paths",
            "100",
            "--seed",
            "3",
            "--dump-paths",
        ],
        &stable(dir.path(), 1.2),
        dir.path(),
    );
    assert_ne!(o.status.code(), Some(1), "{}", stderr(&o));
    let v = json_of(&o);
    assert!(v["result"]["disclaimer"].as_str().unwrap().starts_with("evidence only"));
    let files = written(&o);
    assert_eq!(files.len(), 3);
    let trend = csv_of(&o);
    assert!(trend.starts_with("depth,t,median_stat,q75_stat\n"));
    assert_eq!(trend.lines().count(), 31);
    let paths = fs::read_to_string(
        files
            .iter()
            .find(|f| f.to_string_lossy().ends_with("_paths.csv"))
            .unwrap(),
    )
    .unwrap();
    assert_eq!(paths.lines().count(), 1 + 100 * 31);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let spec = stable(dir.path(), 1.5);
    let args = [
        "simulate", "--kappa", "0.6", "--depth", "15", "--paths", "64", "--seed", "42",
    ];
    let mut runs: Vec<BTreeMap<String, Vec<u8>>> = Vec::new();
    for (out, threads) in [("a", None), ("b", Some("1")), ("c", Some("3"))] {
        let out = dir.path().join(out);
        let mut cmd = bin();
        cmd.args(args).arg("--spec").arg(&spec).arg("--out").arg(&out);
        if let Some(t) = threads {
            cmd.env("LEVY_SMALLTIME_THREADS", t);
        }
        let o = cmd.output().unwrap();
        assert_ne!(o.status.code(), Some(1), "{}", stderr(&o));
        runs.push(
            written(&o)
                .iter()
                .map(|f| {
                    (
                        f.file_name().unwrap().to_string_lossy().into_owned(),
                        fs::read(f).unwrap(),
                    )
                })
                .collect(),
        );
    }
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn bad_thread_count_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["classify", "--kappa", "0.6", "--spec"])
        .arg(stable(dir.path(), 1.5))
        .arg("--out")
        .arg(dir.path())
        .env("LEVY_SMALLTIME_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("LEVY_SMALLTIME_THREADS"));
}

#[test]
fn specs_round_trip_through_reports() {
    let dir = tempfile::tempdir().unwrap();
    let specs = [
        LevyProcessSpec::with_drift(0.5, JumpMeasure::atoms(vec![(0.5, 1.0), (-0.2, 2.0)]).unwrap()).unwrap(),
        LevyProcessSpec::new(0.3, 1.0, JumpMeasure::two_sided_stable(1.0, 0.7, 2.0, 0.3).unwrap()).unwrap(),
        LevyProcessSpec::new(0.0, 0.0, JumpMeasure::negative_of(JumpMeasure::v_profile_loglog())).unwrap(),
    ];
    for (i, s) in specs.iter().enumerate() {
        let path = spec_file(dir.path(), &format!("s{i}.json"), &s.to_json());
        assert_eq!(&load_spec(&path).unwrap(), s);
        let o = call(&["classify", "--kappa", "2", "--format", "json"], &path, dir.path());
        assert_ne!(o.status.code(), Some(1), "{}", stderr(&o));
        let back: LevyProcessSpec = serde_json::from_value(json_of(&o)["spec"].clone()).unwrap();
        assert_eq!(&back, s);
    }
    // a bare measure is read as a pure-jump spec
    let bare = load_spec(&loglog(dir.path())).unwrap();
    assert_eq!(
        bare,
        LevyProcessSpec::new(0.0, 0.0, JumpMeasure::v_profile_loglog()).unwrap()
    );
}

#[test]
fn critical_and_functional_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = call(&["critical", "--test", "I"], &loglog(dir.path()), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = csv_of(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lo,hi,value,verdict_lo,verdict_hi"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[3..], ["divergent", "convergent"]);
    assert!(lines.next().is_none());

    let o = call(
        &["functional", "--name", "V", "--points", "5"],
        &stable(dir.path(), 1.5),
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = csv_of(&o);
    assert!(text.starts_with("x,V\n"));
    for line in text.lines().skip(1) {
        let xv: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        // V(x) = 4 x^(1/2) for the symmetric alpha = 1.5 density
        assert!((xv[1] / (4.0 * xv[0].sqrt()) - 1.0).abs() < 1e-9, "{line}");
    }
}

#[test]
fn integral_test_command() {
    let dir = tempfile::tempdir().unwrap();
    let spec = loglog(dir.path());
    let o = call(&["test", "--test", "I", "--param", "1.5"], &spec, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json_of(&o)["result"]["outcome"]["kind"], "convergent");
    let o = call(&["test", "--test", "I"], &spec, dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing parameter: param"));
}
