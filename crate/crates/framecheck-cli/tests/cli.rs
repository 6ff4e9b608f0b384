//! Exit-code and side-effect tests for the command-line interface.

use std::fs;
use std::path::Path;

use framecheck::scene::parse_scene;
use framecheck_cli::dispatch;

fn run(args: &[&str]) -> i32 {
    dispatch(std::iter::once("framecheck").chain(args.iter().copied()))
}

fn write_span_table(dir: &Path) -> String {
    let path = dir.join("table.json");
    fs::write(&path, framecheck::SpanTable::fixture().to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

fn gen_fixture(dir: &Path, name: &str, mutate: Option<&str>) -> String {
    let out = dir.join(name).to_string_lossy().into_owned();
    let mut args = vec![
        "gen-fixture", "--width", "6.0", "--depth", "4.5", "--stories", "1", "-o", &out,
    ];
    if let Some(m) = mutate {
        args.extend(["--mutate", m]);
    }
    assert_eq!(run(&args), 0);
    out
}

#[test]
fn validate_pass_fail_and_usage_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_span_table(dir.path());
    let valid = gen_fixture(dir.path(), "valid.json", None);
    let mutant = gen_fixture(dir.path(), "mutant.json", Some("remove_ridge:"));

    assert_eq!(run(&["validate", &valid, "--span-table", &table]), 0);
    assert_eq!(run(&["validate", &mutant, "--span-table", &table]), 1);
    assert_eq!(run(&["validate", &mutant, "--span-table", &table, "--json"]), 1);
    // Missing span table (no flag, no env) is a usage error.
    assert_eq!(run(&["validate", &valid, "--span-table", "/nonexistent.json"]), 2);
    assert_eq!(run(&["no-such-subcommand"]), 2);
}

#[test]
fn gen_fixture_output_parses_and_mutations_apply() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_fixture(dir.path(), "scene.json", None);
    let scene = parse_scene(&fs::read(&path).unwrap()).unwrap();
    assert!(scene.members.len() > 50);

    let floated = gen_fixture(dir.path(), "floated.json", Some("float_member:Collar_001:1.0"));
    let mutated = parse_scene(&fs::read(&floated).unwrap()).unwrap();
    let (orig, moved) = (
        scene.members.iter().find(|m| m.name == "Collar_001").unwrap(),
        mutated.members.iter().find(|m| m.name == "Collar_001").unwrap(),
    );
    assert!((moved.box3.min()[2] - orig.box3.min()[2] - 1.0).abs() < 1e-12);

    // Unknown mutation kind is a usage error.
    let out = dir.path().join("x.json").to_string_lossy().into_owned();
    assert_eq!(
        run(&["gen-fixture", "--width", "6", "--depth", "4.5", "--mutate", "teleport:Stud", "-o", &out]),
        2
    );
}

#[test]
fn score_self_comparison_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_span_table(dir.path());
    let scene = gen_fixture(dir.path(), "scene.json", None);
    assert_eq!(
        run(&["score", "--reference", &scene, "--generated", &scene, "--span-table", &table, "--json"]),
        0
    );
}

#[test]
fn corpus_exit_tracks_pass_rate() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_span_table(dir.path());
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    let all_pass = corpus.to_string_lossy().into_owned();
    fs::copy(gen_fixture(dir.path(), "a.json", None), corpus.join("a.json")).unwrap();
    assert_eq!(run(&["corpus", &all_pass, "--span-table", &table, "--workers", "1"]), 0);

    fs::copy(
        gen_fixture(dir.path(), "b.json", Some("remove_ridge:")),
        corpus.join("b.json"),
    )
    .unwrap();
    assert_eq!(run(&["corpus", &all_pass, "--span-table", &table, "--json"]), 1);
    // Empty directory is an operator error.
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_eq!(run(&["corpus", empty.to_str().unwrap(), "--span-table", &table]), 2);
}

#[test]
fn plan_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(
        &good,
        serde_json::json!({
            "analysis": {
                "description": "one section",
                "stories": 1,
                "sections": ["main"],
                "roof_type": "gable",
                "complexity": "simple",
                "lot_size": {"width": 7.0, "depth": 5.0, "area": 35.0}
            },
            "sections": [{
                "name": "main",
                "bounds": {"x_min": 0.0, "x_max": 7.0, "y_min": -5.0, "y_max": 0.0, "z_base": 0.0},
                "stories": 1,
                "systems": ["foundation", "floor", "walls", "roof"],
                "dependencies": []
            }],
            "construction_order": [
                {"step": 1, "section": "main", "phase": "foundation", "step_type": "critical",
                 "members": [{"type": "Sill", "count": 4}], "depends_on": []},
                {"step": 2, "section": "main", "phase": "floor", "step_type": "safe",
                 "members": [{"type": "Joist", "count": 12}], "depends_on": [1]}
            ],
            "expected_member_counts": {"Sill": 4, "Joist": 12}
        })
        .to_string(),
    )
    .unwrap();
    let args = |path: &str| {
        vec![
            "plan-check".to_string(),
            path.to_string(),
            "--lot-width".into(), "7.0".into(),
            "--lot-depth".into(), "5.0".into(),
            "--stories".into(), "1".into(),
            "--roof".into(), "gable".into(),
        ]
    };
    let to_refs = |v: &[String]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let good_args = args(good.to_str().unwrap());
    assert_eq!(dispatch(std::iter::once("framecheck".to_string()).chain(to_refs(&good_args))), 0);

    let bad = dir.path().join("bad.json");
    let mut doc: serde_json::Value = serde_json::from_slice(&fs::read(&good).unwrap()).unwrap();
    doc["construction_order"][0]["members"][0]["type"] = "vertical_member".into();
    fs::write(&bad, doc.to_string()).unwrap();
    let bad_args = args(bad.to_str().unwrap());
    assert_eq!(dispatch(std::iter::once("framecheck".to_string()).chain(to_refs(&bad_args))), 1);
}

#[test]
fn set_overrides_change_validation_behavior() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_span_table(dir.path());
    let mutant = gen_fixture(dir.path(), "floaty.json", Some("float_member:Collar_001:1.0"));
    assert_eq!(run(&["validate", &mutant, "--span-table", &table]), 1);
    // Raising the ground threshold far enough grounds everything, so the
    // floated collar passes the load-path and stability tests again.
    assert_eq!(
        run(&[
            "validate", &mutant, "--span-table", &table,
            "--set", "contact.ground_height=50.0",
        ]),
        0
    );
}
