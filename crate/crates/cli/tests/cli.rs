use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn punctum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_punctum"))
        .args(args)
        .output()
        .expect("running punctum")
}

fn ok(args: &[&str]) -> Output {
    let out = punctum(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Synthetic text under `dir/<id>/` via the `sample` subcommand.
fn synth(dir: &Path, id: &str, p: &str, beta: &str, n: &str, extra: &[&str]) -> PathBuf {
    let sub = dir.join(id);
    let mut args = vec!["sample", "--out", s(&sub), "--p", p, "--beta", beta, "--n", n, "--text-id", id];
    args.extend_from_slice(extra);
    ok(&args);
    PathBuf::from(id).join(format!("{id}.txt"))
}

fn record(path: &Path, id: &str, lang: &str, translation_of: Option<&str>) -> String {
    let mut v = serde_json::json!({
        "path": path,
        "text_id": id,
        "language_code": lang,
        "group": if translation_of.is_some() { "translation" } else { "original" },
    });
    if let Some(t) = translation_of {
        v["translation_of"] = t.into();
    }
    v.to_string()
}

fn write_manifest(dir: &Path, lines: &[String]) -> PathBuf {
    let m = dir.join("manifest.jsonl");
    fs::write(&m, lines.join("\n") + "\n").unwrap();
    m
}

fn rows(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).unwrap();
    r.deserialize().map(|x| x.unwrap()).collect()
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn empty_manifest_gives_header_only_table() {
    let tmp = TempDir::new().unwrap();
    let m = write_manifest(tmp.path(), &[]);
    let out = tmp.path().join("run");
    ok(&["fit", "--manifest", s(&m), "--out", s(&out)]);
    let fits = fs::read_to_string(out.join("fits.csv")).unwrap();
    assert_eq!(fits.lines().count(), 1);
    assert!(fits.starts_with("text_id,language_code,mode,p,beta"));
}

#[test]
fn one_text_three_modes_three_rows() {
    let tmp = TempDir::new().unwrap();
    let path = synth(tmp.path(), "syn", "0.2", "1.3", "3000", &["--seed", "5"]);
    let m = write_manifest(tmp.path(), &[record(&path, "syn", "en", None)]);
    let out = tmp.path().join("run");
    ok(&["fit", "--manifest", s(&m), "--out", s(&out)]);
    let fits = rows(&out.join("fits.csv"));
    assert_eq!(fits.len(), 3);
    let modes: Vec<&str> = fits.iter().map(|r| r["mode"].as_str()).collect();
    assert_eq!(modes, ["stops", "stops_commas", "all"]);
    // Only full stops in a synthetic text: every mode sees the same intervals.
    for r in &fits {
        let p: f64 = r["p"].parse().unwrap();
        let beta: f64 = r["beta"].parse().unwrap();
        assert!((p - 0.2).abs() < 0.03 && (beta - 1.3).abs() < 0.1, "{r:?}");
        assert_eq!(r["n"], "3000");
    }
    assert!(out.join("plots/syn_all.csv").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let a = synth(tmp.path(), "a", "0.15", "1.2", "2500", &["--seed", "1"]);
    let b = synth(tmp.path(), "b", "0.25", "1.4", "2500", &["--seed", "2"]);
    let m = write_manifest(tmp.path(), &[record(&a, "a", "en", None), record(&b, "b", "en", None)]);
    let mut trees = Vec::new();
    for (run, jobs) in [("r1", "1"), ("r2", "3")] {
        let out = tmp.path().join(run);
        for cmd in ["fit", "dfa", "report"] {
            ok(&[cmd, "--manifest", s(&m), "--out", s(&out), "--jobs", jobs]);
        }
        trees.push(tree(&out));
    }
    assert!(trees[0].len() > 5);
    assert_eq!(trees[0], trees[1]);
}

#[test]
fn refuses_to_overwrite_outputs() {
    let tmp = TempDir::new().unwrap();
    let m = write_manifest(tmp.path(), &[]);
    let out = tmp.path().join("run");
    ok(&["fit", "--manifest", s(&m), "--out", s(&out)]);
    let before = fs::read(out.join("fits.csv")).unwrap();
    let again = punctum(&["fit", "--manifest", s(&m), "--out", s(&out)]);
    assert_eq!(again.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&again.stderr).contains("already exists"));
    assert_eq!(fs::read(out.join("fits.csv")).unwrap(), before);
}

#[test]
fn short_text_is_recorded_and_others_proceed() {
    let tmp = TempDir::new().unwrap();
    let long = synth(tmp.path(), "long", "0.2", "1.3", "2000", &["--seed", "3"]);
    fs::write(tmp.path().join("short.txt"), "One two three. Four five, six. Seven!\n").unwrap();
    let m = write_manifest(
        tmp.path(),
        &[record(&long, "long", "en", None), record(Path::new("short.txt"), "short", "en", None)],
    );
    let out = tmp.path().join("run");
    let res = punctum(&["dfa", "--manifest", s(&m), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(2));
    let errors = rows(&out.join("dfa_errors.csv"));
    assert_eq!(errors.len(), 2);
    assert!(errors.iter().all(|e| e["text_id"] == "short" && e["error"].contains("too short")));
    let dfa = rows(&out.join("dfa.csv"));
    let ids: Vec<(&str, &str)> = dfa.iter().map(|r| (r["text_id"].as_str(), r["mode"].as_str())).collect();
    assert_eq!(ids, [("long", "stops"), ("long", "all")]);
}

#[test]
fn unreadable_text_leaves_others_untouched() {
    let tmp = TempDir::new().unwrap();
    let good = synth(tmp.path(), "good", "0.3", "1.1", "1500", &["--seed", "4"]);
    let alone = write_manifest(tmp.path(), &[record(&good, "good", "en", None)]);
    let with_missing = tmp.path().join("with_missing.jsonl");
    fs::write(
        &with_missing,
        [record(&good, "good", "en", None), record(Path::new("nope.txt"), "missing", "en", None)].join("\n"),
    )
    .unwrap();
    let (o1, o2) = (tmp.path().join("alone"), tmp.path().join("mixed"));
    ok(&["fit", "--manifest", s(&alone), "--out", s(&o1)]);
    let res = punctum(&["fit", "--manifest", s(&with_missing), "--out", s(&o2)]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(rows(&o1.join("fits.csv")), rows(&o2.join("fits.csv")));
    let errors = rows(&o2.join("fit_errors.csv"));
    assert_eq!(errors.len(), 3);
    assert!(errors.iter().all(|e| e["text_id"] == "missing"));
}

#[test]
fn every_row_carries_the_fingerprint() {
    let tmp = TempDir::new().unwrap();
    let a = synth(tmp.path(), "a", "0.2", "1.3", "2000", &["--seed", "6"]);
    let m = write_manifest(tmp.path(), &[record(&a, "a", "en", None)]);
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "seed = 9\n[dfa]\npoly_order = 1\n").unwrap();
    let out = tmp.path().join("run");
    ok(&["fit", "--manifest", s(&m), "--out", s(&out), "--config", s(&cfg)]);
    ok(&["dfa", "--manifest", s(&m), "--out", s(&out), "--config", s(&cfg)]);
    let fits = rows(&out.join("fits.csv"));
    let dfa = rows(&out.join("dfa.csv"));
    let fp = &fits[0]["config_fingerprint"];
    assert_eq!(fp.len(), 64);
    assert!(fits.iter().chain(&dfa).all(|r| &r["config_fingerprint"] == fp));
    assert!(dfa.iter().all(|r| r["poly_order"] == "1"));

    let default_out = tmp.path().join("default");
    ok(&["fit", "--manifest", s(&m), "--out", s(&default_out)]);
    assert_ne!(&rows(&default_out.join("fits.csv"))[0]["config_fingerprint"], fp);
}

#[test]
fn long_memory_sample_gives_single_regime() {
    let tmp = TempDir::new().unwrap();
    let path = synth(tmp.path(), "lm", "0.2", "1.3", "10000", &["--hurst", "0.8", "--seed", "21"]);
    let m = write_manifest(tmp.path(), &[record(&path, "lm", "en", None)]);
    let out = tmp.path().join("run");
    ok(&["dfa", "--manifest", s(&m), "--out", s(&out), "--modes", "stops"]);
    let dfa = rows(&out.join("dfa.csv"));
    assert_eq!(dfa.len(), 1);
    assert_eq!(dfa[0]["regime"], "single", "{:?}", dfa[0]);
    let h: f64 = dfa[0]["hurst"].parse().unwrap();
    assert!((h - 0.8).abs() < 0.1, "H = {h}");
    assert!(out.join("curves/lm_stops.csv").exists());
}

#[test]
fn single_language_report_has_one_summary_and_no_shift() {
    let tmp = TempDir::new().unwrap();
    let a = synth(tmp.path(), "a", "0.2", "1.3", "2000", &["--seed", "7"]);
    let b = synth(tmp.path(), "b", "0.25", "1.2", "2000", &["--seed", "8"]);
    let m = write_manifest(tmp.path(), &[record(&a, "a", "en", None), record(&b, "b", "en", None)]);
    let out = tmp.path().join("run");
    ok(&["fit", "--manifest", s(&m), "--out", s(&out)]);
    ok(&["report", "--manifest", s(&m), "--out", s(&out)]);
    let bundle: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report/summaries.json")).unwrap()).unwrap();
    let langs = bundle["languages"].as_array().unwrap();
    assert_eq!(langs.len(), 1);
    assert_eq!(langs[0]["language_code"], "en");
    assert_eq!(langs[0]["n_texts"], 2);
    assert_eq!(bundle["schema_version"], 1);
    assert!(!out.join("report/translation_shift.json").exists());
    assert_eq!(rows(&out.join("report/hazard_parametric.csv")).len(), 15);
    assert!(!rows(&out.join("report/isolines.csv")).is_empty());
}

#[test]
fn translation_pair_gives_one_displacement() {
    let tmp = TempDir::new().unwrap();
    let a = synth(tmp.path(), "orig", "0.1", "1.3", "2000", &["--seed", "9"]);
    let b = synth(tmp.path(), "other", "0.12", "1.25", "2000", &["--seed", "10"]);
    let t = synth(tmp.path(), "trans", "0.15", "1.2", "2000", &["--seed", "11", "--language", "de"]);
    let m = write_manifest(
        tmp.path(),
        &[
            record(&a, "orig", "en", None),
            record(&b, "other", "en", None),
            record(&t, "trans", "de", Some("orig")),
        ],
    );
    let out = tmp.path().join("run");
    ok(&["fit", "--manifest", s(&m), "--out", s(&out)]);
    ok(&["report", "--manifest", s(&m), "--out", s(&out)]);
    let shift: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report/translation_shift.json")).unwrap()).unwrap();
    let entries = shift["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["original_text_id"], "orig");
    assert_eq!(entries[0]["translated_text_id"], "trans");
    let fits = rows(&out.join("fits.csv"));
    let param = |id: &str, col: &str| -> f64 {
        fits.iter().find(|r| r["text_id"] == id && r["mode"] == "all").unwrap()[col].parse().unwrap()
    };
    let dp = entries[0]["delta_p"].as_f64().unwrap();
    assert!((dp - (param("trans", "p") - param("orig", "p"))).abs() < 1e-12);
    assert!(shift["method"].as_str().unwrap().contains("operationalization"));
}

#[test]
fn sample_refuses_bad_parameters() {
    let tmp = TempDir::new().unwrap();
    let out = punctum(&["sample", "--out", s(tmp.path()), "--p", "1.5", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(1));
}
