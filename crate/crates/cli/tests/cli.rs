use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracfield_cli::output::read_grid;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fracfield"));
    c.env_remove("FRACFIELD_JOBS");
    c
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(kind: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg(kind).arg("--config").arg(config).arg("--out").arg(out).args(extra).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows of a table, skipping `#` lines and the column row.
fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn footer(path: &Path, key: &str) -> String {
    let text = fs::read_to_string(path).unwrap();
    let prefix = format!("# {key}: ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no {key} in {}", path.display())).to_string()
}

const PAIR_FIELDS: &str = r#"
[fields.pair]
type = "delta-pair"
y = [0.3, 0.1]
z = [-0.4, 0.2]
alpha = 0.6
"#;

#[test]
fn gaussian_gradient_grid_with_header() {
    let tmp = TempDir::new().unwrap();
    let o = run("op", &configs().join("op_gradient.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let hdr = fs::read_to_string(tmp.path().join("op_spectral.hdr")).unwrap();
    assert!(hdr.starts_with(&format!("# fracfield {}\n# config_sha256: ", env!("CARGO_PKG_VERSION"))));
    let body: String = hdr.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let meta: toml::Table = body.parse().unwrap();
    assert_eq!(meta["engine"].as_str(), Some("spectral"));
    assert_eq!(meta["alpha"].as_float(), Some(0.5));
    assert_eq!(meta["counts"].as_array().unwrap().len(), 2);
    let (counts, comps, values) = read_grid(&fs::read(tmp.path().join("op_spectral.bin")).unwrap()).unwrap();
    assert_eq!((counts, comps), (vec![32, 32], 2));
    assert!(values.iter().all(|v| v.is_finite()));
    let (_, one, errs) = read_grid(&fs::read(tmp.path().join("op_spectral.err.bin")).unwrap()).unwrap();
    assert_eq!(one, 1);
    assert!(errs.iter().all(|e| *e < 1e-3));
}

#[test]
fn direct_and_spectral_grids_agree() {
    let tmp = TempDir::new().unwrap();
    let o = run("op", &configs().join("op_gradient.toml"), tmp.path(), &["--engine", "both"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let load = |n: &str| read_grid(&fs::read(tmp.path().join(n)).unwrap()).unwrap().2;
    let (d, s) = (load("op_direct.bin"), load("op_spectral.bin"));
    let scale = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = d.iter().zip(&s).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(gap / scale < 1e-3, "gap {gap}");
}

#[test]
fn delta_pair_rejected_by_spectral_engine() {
    let tmp = TempDir::new().unwrap();
    let o = run("op", &configs().join("op_pair.toml"), tmp.path(), &["--engine", "spectral"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("spectral engine requires smooth field"), "{}", stderr(&o));
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn op_output_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let cfg = configs().join("op_pair.toml");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run("op", &cfg, &a, &["--jobs", "1"]).status.success());
    assert!(run("op", &cfg, &b, &["--jobs", "2"]).status.success());
    for name in ["op_direct.bin", "op_direct.err.bin", "op_direct.hdr"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn default_suite_passes_with_many_records() {
    let tmp = TempDir::new().unwrap();
    let o = run("verify", &configs().join("verify.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&tmp.path().join("verify.csv"));
    assert!(r.len() >= 12, "{} records", r.len());
    assert!(r.iter().all(|row| row[1] == "true"));
}

#[test]
fn impossible_tolerance_fails() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(&tmp, "v.toml", "kind = \"verify\"\n[verify]\nfilter = [\"riesz_semigroup\", \"cantor_scaling\"]\ntighten = 1e-15\n");
    let o = run("verify", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let r = rows(&tmp.path().join("out/verify.csv"));
    assert!(r.iter().any(|row| row[1] == "false"));
}

#[test]
fn filter_keeps_only_named_records() {
    let tmp = TempDir::new().unwrap();
    let o = run("verify", &configs().join("verify.toml"), tmp.path(), &["--filter", "riesz_squares", "--filter", "cantor_scaling"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let names: Vec<String> = rows(&tmp.path().join("verify.csv")).into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(names, vec!["cantor_scaling", "riesz_squares"]);
}

#[test]
fn unknown_identity_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let o = run("verify", &configs().join("verify.toml"), tmp.path(), &["--filter", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("verify.filter[0]"), "{}", stderr(&o));
}

#[test]
fn convergence_orders() {
    let tmp = TempDir::new().unwrap();
    let o = run("convergence", &configs().join("convergence.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let spectral = tmp.path().join("convergence_spectral.csv");
    let direct = tmp.path().join("convergence_direct.csv");
    assert!(rows(&spectral).len() >= 4);
    assert!(footer(&spectral, "observed_order").parse::<f64>().unwrap() >= 4.0);
    assert!(footer(&direct, "observed_order").parse::<f64>().unwrap() >= 1.8);
    let last = rows(&spectral).pop().unwrap();
    assert_eq!(last[3].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn single_level_sweep_rejected() {
    let tmp = TempDir::new().unwrap();
    let text = fs::read_to_string(configs().join("convergence.toml")).unwrap().replace("[32, 64, 128, 256]", "[64]");
    let cfg = write(&tmp, "c.toml", &text);
    let o = run("convergence", &cfg, &tmp.path().join("out"), &["--engine", "spectral"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at least 2 levels"), "{}", stderr(&o));
}

#[test]
fn cantor_decay_slope() {
    let tmp = TempDir::new().unwrap();
    let o = run("decay", &configs().join("decay_cantor.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let slope: f64 = footer(&tmp.path().join("decay.csv"), "fitted_slope").parse().unwrap();
    assert!((slope - 2f64.ln() / 3f64.ln()).abs() <= 0.05, "{slope}");
    let r = rows(&tmp.path().join("decay.csv"));
    assert_eq!(r[0].len(), 5);
    assert!(r[0][4].is_empty());
}

#[test]
fn smooth_decay_beats_floor() {
    let tmp = TempDir::new().unwrap();
    let o = run("decay", &configs().join("decay_smooth.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let path = tmp.path().join("decay.csv");
    let slope: f64 = footer(&path, "fitted_slope").parse().unwrap();
    let floor: f64 = footer(&path, "floor").parse().unwrap();
    assert_eq!(floor, 1.5);
    assert!(slope >= 2.0 - 0.5 - 0.1, "{slope}");
}

#[test]
fn pole_decay_is_informational() {
    let tmp = TempDir::new().unwrap();
    let o = run("decay", &configs().join("decay_pole.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let slope: f64 = footer(&tmp.path().join("decay.csv"), "fitted_slope").parse().unwrap();
    assert!(slope.abs() <= 0.05, "{slope}");
}

#[test]
fn bench_disagreement_and_columns() {
    let tmp = TempDir::new().unwrap();
    let o = run("bench", &configs().join("bench.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let path = tmp.path().join("bench.csv");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("\nengine,points,seconds,max_rel_disagreement\n"));
    let r = rows(&path);
    assert_eq!(r.len(), 2);
    assert_eq!(r[0][1], "100");
    assert!(r[0][3].parse::<f64>().unwrap() <= 1e-3);
}

#[test]
fn empty_bench_point_set_rejected() {
    let tmp = TempDir::new().unwrap();
    let text = fs::read_to_string(configs().join("bench.toml")).unwrap().replace("points = 100", "points = 0");
    let cfg = write(&tmp, "b.toml", &text);
    let o = run("bench", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bench.points"), "{}", stderr(&o));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn json_config_accepted() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        &tmp,
        "d.json",
        r#"{"kind": "decay", "dim": 1, "fields": {"c": {"type": "cantor", "level": 8}},
            "decay": {"subject": "c", "center": [0.0], "radii": [0.001, 0.01, 0.1]}}"#,
    );
    let o = run("decay", &cfg, &tmp.path().join("out"), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(tmp.path().join("out/decay.csv").exists());
}

#[test]
fn config_errors_name_the_offending_path() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        (format!("kind = \"op\"\n{PAIR_FIELDS}[op]\nfield = \"missing\"\noperator = \"frac-divergence\"\nalpha = 0.6\ngrid = {{ side = 2.0, resolution = 8 }}\n"), "op.field"),
        (format!("kind = \"op\"\n{PAIR_FIELDS}[op]\nfield = \"pair\"\noperator = \"frac-divergence\"\nalpha = 1.6\ngrid = {{ side = 2.0, resolution = 8 }}\n"), "op.alpha"),
        (format!("kind = \"op\"\n{PAIR_FIELDS}[op]\nfield = \"pair\"\noperator = \"frac-divergence\"\nalpha = 0.6\ngrid = {{ side = 2.0, resolution = 8, colour = 1 }}\n"), "op.grid.colour"),
        (PAIR_FIELDS.replace("alpha = 0.6", "alpha = 2.0") + "[decay]\nsubject = \"pair\"\nradii = [0.1, 0.2]\n", "fields.pair.alpha"),
        ("kind = \"bench\"\n[verify]\n".to_string(), "kind"),
    ];
    for (i, (text, path)) in cases.iter().enumerate() {
        let cfg = write(&tmp, &format!("c{i}.toml"), text);
        let kind = if i == 3 { "decay" } else { "op" };
        let o = run(kind, &cfg, &tmp.path().join("out"), &[]);
        assert_eq!(o.status.code(), Some(2), "case {i}: {}", stderr(&o));
        assert!(stderr(&o).contains(path), "case {i}: {}", stderr(&o));
    }
}

#[test]
fn jobs_from_environment() {
    let tmp = TempDir::new().unwrap();
    let o = bin()
        .env("FRACFIELD_JOBS", "1")
        .args(["decay", "--config"])
        .arg(configs().join("decay_cantor.toml"))
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let bad = bin().env("FRACFIELD_JOBS", "many").args(["decay", "--config"]).arg(configs().join("decay_cantor.toml")).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
