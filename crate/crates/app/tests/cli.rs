mod common;

use std::fs;
use std::path::Path;

use common::*;
use framealign::cli::run_with;
use framealign::Workspace;
use framealign_core::annotation::{AnnotationSet, Layer, LayerName, SpanLabel};
use serde_json::Value;

fn edit_set(root: &Path, id: u64, change: impl FnOnce(&mut AnnotationSet)) {
    let ws = Workspace::open(root).unwrap();
    let mut sets = ws.load_annotations(DOC).unwrap();
    change(sets.iter_mut().find(|s| s.id == id).unwrap());
    ws.save_annotations(DOC, &sets).unwrap();
}

fn replace_layer(set: &mut AnnotationSet, name: LayerName, labels: Vec<SpanLabel>) {
    let layer = set.layers.iter_mut().find(|l| l.name == name).unwrap();
    *layer = Layer::spans(name, labels);
}

fn validate_codes(root: &Path) -> (i32, Vec<String>) {
    let out = cli(root, &["validate", "--format", "json"]);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    let codes = report["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["code"].as_str().unwrap().to_string())
        .collect();
    (out.code, codes)
}

#[test]
fn pristine_fixtures_validate() {
    let dir = table_workspace();
    let out = cli(dir.path(), &["validate"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(out.stdout, "0 errors, 0 warnings\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn validate_is_side_effect_free_and_repeatable() {
    let dir = table_workspace();
    edit_set(dir.path(), 1002, |s| s.layers.retain(|l| l.name != LayerName::Target));
    let before = snapshot(dir.path());
    let first = cli(dir.path(), &["validate"]);
    let second = cli(dir.path(), &["validate"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.code, 1);
    assert!(first.stdout.contains("ANN004"), "{}", first.stdout);
    assert_eq!(snapshot(dir.path()), before);
}

#[test]
fn inverted_span_fails_validation() {
    let dir = table_workspace();
    edit_set(dir.path(), 1130, |s| {
        let mut fe = s.span_labels(&LayerName::Fe).to_vec();
        fe[0] = SpanLabel::spanning("Theme", 4, 0);
        replace_layer(s, LayerName::Fe, fe);
    });
    assert_eq!(validate_codes(dir.path()), (1, vec!["ANN001".to_string()]));
}

#[test]
fn misaligned_triple_fails_validation() {
    let dir = table_workspace();
    edit_set(dir.path(), 1130, |s| {
        replace_layer(
            s,
            LayerName::Pt,
            vec![SpanLabel::spanning("NP", 0, 4), SpanLabel::spanning("PP", 14, 26)],
        );
    });
    assert_eq!(validate_codes(dir.path()), (1, vec!["ANN009".to_string()]));
}

#[test]
fn goal_with_area_fails_validation() {
    let dir = table_workspace();
    // "Bilbo dropped along the path."
    edit_set(dir.path(), 1130, |s| {
        let mut fe = vec![
            SpanLabel::spanning("Theme", 0, 4),
            SpanLabel::spanning("Area", 14, 18),
            SpanLabel::spanning("Goal", 20, 27),
        ];
        fe.extend(
            s.span_labels(&LayerName::Fe)
                .iter()
                .filter(|l| l.name == "Direction" || l.name == "Source")
                .cloned(),
        );
        replace_layer(s, LayerName::Fe, fe);
        let spans = [(0, 4), (14, 18), (20, 27)];
        replace_layer(
            s,
            LayerName::Gf,
            spans.iter().map(|&(a, b)| SpanLabel::spanning("Dep", a, b)).collect(),
        );
        replace_layer(
            s,
            LayerName::Pt,
            spans.iter().map(|&(a, b)| SpanLabel::spanning("PP", a, b)).collect(),
        );
    });
    assert_eq!(validate_codes(dir.path()), (1, vec!["ANN010".to_string()]));
}

#[test]
fn missing_core_element_fails_validation() {
    let dir = table_workspace();
    edit_set(dir.path(), 1130, |s| {
        let fe = s
            .span_labels(&LayerName::Fe)
            .iter()
            .filter(|l| l.name != "Direction")
            .cloned()
            .collect();
        replace_layer(s, LayerName::Fe, fe);
    });
    assert_eq!(validate_codes(dir.path()), (1, vec!["ANN011".to_string()]));
    let out = cli(dir.path(), &["validate", "--allow-warnings"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with("0 errors, 1 warnings\n"), "{}", out.stdout);
}

#[test]
fn inheritance_cycle_fails_validation() {
    let dir = table_workspace();
    let path = dir.path().join("lexicon.json");
    let mut lexicon: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    lexicon["relations"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!({"kind": "inherits_from", "source": "Motion", "target": "Fleeing"}));
    fs::write(&path, lexicon.to_string()).unwrap();
    assert_eq!(validate_codes(dir.path()), (1, vec!["LEX002".to_string()]));
}

#[test]
fn workspace_level_findings() {
    let dir = table_workspace();
    let root = dir.path();
    edit_set(root, 1003, |s| s.id = 1001);
    edit_set(root, 1004, |s| s.sentence_id = 999);
    fs::write(
        root.join("pairings").join(format!("{DOC}.json")),
        r#"{"pairs": [{"source": 1002, "target": 5}]}"#,
    )
    .unwrap();
    fs::write(
        root.join("state.json"),
        r#"{"next_sentence_id": 3, "next_set_id": 1145}"#,
    )
    .unwrap();
    fs::write(root.join("documents").join("broken.xml"), "<corpus").unwrap();
    let (code, mut codes) = validate_codes(root);
    codes.sort();
    assert_eq!(code, 1);
    assert_eq!(codes, ["WS001", "WS002", "WS003", "WS004", "WS005"]);
}

#[test]
fn analyze_prints_the_table() {
    let dir = table_workspace();
    let started = std::time::Instant::now();
    let out = cli(dir.path(), &["analyze", "--src", "EN", "--tgt", "AR"]);
    assert!(started.elapsed().as_secs_f64() < 1.0);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(
        lines[2],
        "| Self_motion | Self_motion | 56 | مَشَى, تَسَلَّقَ, زَحَفَ, رَكَضَ, سَارَ |"
    );
    assert_eq!(lines[13], "| Total |  | 72 |  |");
    assert!(out.stdout.contains("Parallelism: 61/72 (85%)\n"));

    let csv = cli(
        dir.path(),
        &["analyze", "--src", "EN", "--tgt", "AR", "--format", "csv"],
    );
    assert_eq!(csv.stdout.lines().count(), 13);
    assert!(csv
        .stdout
        .starts_with("\"source_frame\",\"target_frame\",\"count\",\"example_lemmas\"\n"));

    let json = cli(
        dir.path(),
        &["analyze", "--src", "EN", "--tgt", "AR", "--format", "json"],
    );
    let v: Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!((v["total"].as_u64(), v["same_frame"].as_u64()), (Some(72), Some(61)));
    assert_eq!(v["unrelated_shift"], 1);

    // a strict threshold turns every shift unrelated
    let strict = cli(
        dir.path(),
        &["analyze", "--src", "EN", "--tgt", "AR", "--threshold", "0"],
    );
    assert!(strict.stdout.contains("Unrelated shifts: 11\n"), "{}", strict.stdout);

    assert_eq!(
        out.stdout,
        cli(dir.path(), &["analyze", "--src", "EN", "--tgt", "AR"]).stdout
    );
}

#[test]
fn init_then_ingest_then_propose() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("ws");
    assert_eq!(cli(&root, &["init"]).code, 0);
    for f in [
        "framealign.toml",
        "lexicon.json",
        "state.json",
        "documents",
        "annotations",
        "pairings",
        "tokens",
    ] {
        assert!(root.join(f).exists(), "{f}");
    }
    assert_eq!(cli(&root, &["validate"]).stdout, "0 errors, 0 warnings\n");
    let again = cli(&root, &["init"]);
    assert_eq!(again.code, 2);
    assert!(again.stderr.contains("\"UsageError\""));

    fs::copy(fixtures().join("motion_lexicon.json"), root.join("lexicon.json")).unwrap();
    let en = dir.path().join("en.txt");
    let ar = dir.path().join("ar.txt");
    fs::write(&en, "The pebbles rolled away.\n\nBilbo climbed the tree.\n").unwrap();
    fs::write(&ar, "تدحرجت الحصى\n\nتسلق بلبو الشجرة\n").unwrap();
    let args = ["ingest", "--novel", "The Hobbit", "--chapter", "6"];
    let text_en = format!("EN={}", en.display());
    let text_ar = format!("AR={}", ar.display());
    let out = cli(&root, &[&args[..], &["--text", &text_en, "--text", &text_ar]].concat());
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "ingested the-hobbit-6: 2 paragraphs, 4 sentences\n");
    let (doc, _) = Workspace::open(&root).unwrap().load_document("the-hobbit-6").unwrap();
    let ids: Vec<u64> = doc.sentences().map(|(_, v)| v.id).collect();
    assert_eq!(ids, [1, 2, 3, 4]);

    let dup = cli(&root, &[&args[..], &["--text", &text_en]].concat());
    assert_eq!(dup.code, 2);

    let out = cli(
        &root,
        &["propose", "--document", "the-hobbit-6", "--date", "14/10/2026"],
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(
        out.stdout.starts_with("proposed 3 sets in the-hobbit-6\n"),
        "{}",
        out.stdout
    );
    assert!(out.stdout.contains("\tMotion\troll.v\n"));
    assert!(out.stdout.contains("\tSelf_motion\tclimb.v\n"));
    assert!(
        out.stdout.contains("sentence 3\tSelf_motion\tتَسَلَّقَ.v\n"),
        "undiacritized Arabic still matches"
    );
    // proposing again adds nothing
    assert!(cli(&root, &["propose", "--document", "the-hobbit-6"])
        .stdout
        .starts_with("proposed 0 sets"));

    // AUTO sets have no FE labels yet, so only missing-core warnings remain
    let report: Value = serde_json::from_str(&cli(&root, &["validate", "--format", "json"]).stdout).unwrap();
    assert_eq!(report["errors"], 0);
    assert!(report["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["code"] == "ANN011"));

    let state = Workspace::open(&root).unwrap().state().unwrap();
    assert_eq!((state.next_sentence_id, state.next_set_id), (5, 4));
}

#[test]
fn ingest_with_mismatched_paragraphs() {
    let dir = table_workspace();
    let en = dir.path().join("en.txt");
    let ar = dir.path().join("ar.txt");
    fs::write(&en, "One.\n\nTwo.\n").unwrap();
    fs::write(&ar, "واحد\n").unwrap();
    let out = cli(
        dir.path(),
        &[
            "ingest",
            "--novel",
            "x",
            "--chapter",
            "1",
            "--text",
            &format!("EN={}", en.display()),
            "--text",
            &format!("AR={}", ar.display()),
        ],
    );
    assert_eq!(out.code, 1);
    let err: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(err["error"], "AlignmentError");
    assert_eq!(err["paragraph_counts"], serde_json::json!({"AR": 1, "EN": 2}));
    assert!(!dir.path().join("documents/x-1.xml").exists());
}

#[test]
fn error_exit_codes() {
    let dir = table_workspace();
    let missing = cli(
        dir.path(),
        &["ingest", "--novel", "x", "--chapter", "1", "--text", "EN=/no/such/file"],
    );
    assert_eq!(missing.code, 3);
    assert_eq!(
        serde_json::from_str::<Value>(missing.stderr.trim()).unwrap()["error"],
        "IoError"
    );

    let usage = cli(dir.path(), &["analyze", "--src", "EN"]);
    assert_eq!(usage.code, 2);
    assert_eq!(
        serde_json::from_str::<Value>(usage.stderr.trim()).unwrap()["error"],
        "UsageError"
    );
    assert_eq!(cli(dir.path(), &["frobnicate"]).code, 2);
    assert_eq!(
        cli(
            dir.path(),
            &["analyze", "--src", "EN", "--tgt", "AR", "--format", "pdf"]
        )
        .code,
        2
    );

    let help = cli(dir.path(), &["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("analyze"));

    let nowhere = tempfile::tempdir().unwrap();
    assert_eq!(cli(nowhere.path(), &["validate"]).code, 2);

    fs::write(dir.path().join("framealign.toml"), "languages = 3\n").unwrap();
    assert_eq!(cli(dir.path(), &["validate"]).code, 3);

    let other = table_workspace();
    let nodoc = cli(other.path(), &["propose", "--document", "nope"]);
    assert_eq!(nodoc.code, 1);
    assert_eq!(
        serde_json::from_str::<Value>(nodoc.stderr.trim()).unwrap()["error"],
        "NotFound"
    );
}

#[test]
fn environment_overrides_the_flag() {
    let dir = table_workspace();
    let nowhere = tempfile::tempdir().unwrap();
    let argv = ["framealign", "-w", &nowhere.path().display().to_string(), "validate"].map(String::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, Some(dir.path().to_path_buf()), &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    assert_eq!(String::from_utf8(out).unwrap(), "0 errors, 0 warnings\n");
}

#[test]
fn binary_runs() {
    let dir = table_workspace();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_framealign"))
        .args(["analyze", "--src", "EN", "--tgt", "AR", "--format", "csv"])
        .env("FRAMEALIGN_WORKSPACE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .ends_with("\"Total\",\"\",72,\"\"\n"));

    let bad = std::process::Command::new(env!("CARGO_BIN_EXE_framealign"))
        .args(["validate"])
        .env("FRAMEALIGN_WORKSPACE", dir.path().join("absent"))
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
