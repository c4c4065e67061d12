use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dkvec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkvec"))
        .args(args)
        .env_remove("DKVEC_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = dkvec(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// synth → extract → match → align in `dir`; returns the artifacts' contents.
fn full_run(dir: &Path, threads: &str) -> Vec<(String, Vec<u8>)> {
    let d = p(dir);
    ok(&[
        "synth",
        "--length-a",
        "20000",
        "--vocab-size",
        "200",
        "--seed",
        "3",
        "--out",
        d,
    ]);
    let (a, b) = (dir.join("corpus_a.txt"), dir.join("corpus_b.txt"));
    ok(&[
        "--threads",
        threads,
        "extract",
        "--text-a",
        p(&a),
        "--text-b",
        p(&b),
        "--mode-a",
        "lines",
        "--mode-b",
        "lines",
        "--out",
        d,
    ]);
    ok(&["--threads", threads, "match", "--normalized", "--out", d]);
    ok(&["--threads", threads, "align", "--out", d]);
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn pipeline_output_is_deterministic_across_threads() {
    let (x, y) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let one = full_run(x.path(), "1");
    let four = full_run(y.path(), "4");
    let names: Vec<&str> = one.iter().map(|f| f.0.as_str()).collect();
    for want in [
        "signals_a.tsv",
        "lexicon.tsv",
        "lexicon_ab.tsv",
        "lexicon_ba.tsv",
        "dots.tsv",
        "path.tsv",
        "alignment.svg",
    ] {
        assert!(names.contains(&want), "missing {want}");
    }
    assert_eq!(one, four);
}

#[test]
fn identical_texts_match_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let words: Vec<String> = (0..3000).map(|k| format!("w{}", (k * 7919) % 37)).collect();
    let text = dir.path().join("t.txt");
    fs::write(&text, words.join(" ")).unwrap();
    let out = dir.path().join("out");
    ok(&[
        "extract",
        "--text-a",
        p(&text),
        "--text-b",
        p(&text),
        "--out",
        p(&out),
    ]);
    ok(&["match", "--out", p(&out)]);
    let lex = fs::read_to_string(out.join("lexicon.tsv")).unwrap();
    let rows: Vec<&str> = lex.lines().skip(1).collect();
    assert!(!rows.is_empty());
    for row in rows {
        let f: Vec<&str> = row.split('\t').collect();
        assert_eq!(f[0], "0", "{row}");
        assert_eq!(f[1], f[2], "{row}");
    }
    ok(&["align", "--out", p(&out)]);
    let path = fs::read_to_string(out.join("path.tsv")).unwrap();
    let anchors: Vec<&str> = path.lines().skip(2).collect();
    assert!(!anchors.is_empty());
    for row in anchors {
        let f: Vec<&str> = row.split('\t').collect();
        assert_eq!(f[0], f[1], "off-diagonal anchor {row}");
    }
}

#[test]
fn empty_band_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("t.txt");
    fs::write(&text, "a b c a b c").unwrap();
    let out = dkvec(&[
        "extract",
        "--text-a",
        p(&text),
        "--text-b",
        p(&text),
        "--min-freq",
        "5",
        "--max-freq",
        "9",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn invalid_utf8_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, b"ok \xff\xfe bytes").unwrap();
    let out = dkvec(&[
        "extract",
        "--text-a",
        p(&bad),
        "--text-b",
        p(&bad),
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("invalid UTF-8 at byte offset 3"), "{err}");
}

#[test]
fn bad_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("t.txt");
    fs::write(&text, "a b").unwrap();
    let out = dkvec(&[
        "extract",
        "--text-a",
        p(&text),
        "--text-b",
        p(&text),
        "--min-freq",
        "9",
        "--max-freq",
        "5",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        !dkvec(&["synth", "--insertion-rate-a", "-1", "--out", p(dir.path())])
            .status
            .success()
    );
    assert!(!dkvec(&["align", "--out", p(&dir.path().join("nothing"))])
        .status
        .success());
}

#[test]
fn signal_prints_plot_rows() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("t.txt");
    let words: Vec<&str> = "x a b x c x d e f x".split(' ').collect();
    fs::write(&text, words.join(" ")).unwrap();
    ok(&[
        "extract",
        "--text-a",
        p(&text),
        "--text-b",
        p(&text),
        "--min-freq",
        "2",
        "--max-freq",
        "10",
        "--out",
        p(dir.path()),
    ]);
    let svg = dir.path().join("x.svg");
    let out = ok(&[
        "signal",
        "--store",
        p(&dir.path().join("signals_a.tsv")),
        "--word",
        "x",
        "--svg",
        p(&svg),
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "position\tinterval\n3\t3\n5\t2\n9\t4\n"
    );
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn eval_and_kvec_run() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = ok(&[
        "eval",
        "--length-a",
        "20000",
        "--vocab-size",
        "200",
        "--report",
        p(&report),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["precision_mutual_best"].as_f64().unwrap() >= 0.75);
    assert_eq!(
        v,
        serde_json::from_str::<serde_json::Value>(&fs::read_to_string(report).unwrap()).unwrap()
    );

    let d = p(dir.path());
    ok(&[
        "synth",
        "--length-a",
        "20000",
        "--vocab-size",
        "200",
        "--out",
        d,
    ]);
    let (a, b) = (
        dir.path().join("corpus_a.txt"),
        dir.path().join("corpus_b.txt"),
    );
    ok(&[
        "kvec",
        "--text-a",
        p(&a),
        "--text-b",
        p(&b),
        "--mode-a",
        "lines",
        "--mode-b",
        "lines",
        "--out",
        d,
    ]);
    let kv = fs::read_to_string(dir.path().join("kvec_lexicon.tsv")).unwrap();
    assert!(kv.lines().count() > 10);
}
