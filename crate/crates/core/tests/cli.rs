use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pitchgraph(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pitchgraph"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn count_files(dir: &Path, ext: &str) -> usize {
    fs::read_dir(dir)
        .map(|it| {
            it.filter_map(|e| e.ok())
                .filter(|e| e.path().extension().is_some_and(|x| x == ext))
                .count()
        })
        .unwrap_or(0)
}

#[test]
fn generate_is_deterministic_and_writes_truth() {
    let tmp = tempfile::tempdir().unwrap();
    let a = pitchgraph(
        &["generate", "--scenario", "bridge", "--seed", "4", "--output", "a.csv"],
        tmp.path(),
    );
    let b = pitchgraph(
        &["generate", "--scenario", "bridge", "--seed", "4", "--output", "b.csv"],
        tmp.path(),
    );
    assert!(a.status.success() && b.status.success());
    let (a_csv, b_csv) = (
        fs::read(tmp.path().join("a.csv")).unwrap(),
        fs::read(tmp.path().join("b.csv")).unwrap(),
    );
    assert_eq!(a_csv, b_csv);
    assert_eq!(
        fs::read(tmp.path().join("a_truth.json")).unwrap(),
        fs::read(tmp.path().join("b_truth.json")).unwrap()
    );
    let truth: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("a_truth.json")).unwrap()).unwrap();
    assert_eq!(truth["scenario"], "bridge");
    assert!(truth["bridge_cell"]["lat"].is_number());
}

#[test]
fn invalid_generator_arguments_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        pitchgraph(&["generate", "--players", "0"], tmp.path()).status.code(),
        Some(1)
    );
    assert_eq!(
        pitchgraph(&["generate", "--scenario", "pentagon"], tmp.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pitchgraph(&["generate", "--pitch-length", "20"], tmp.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pitchgraph(&["frobnicate"], tmp.path()).status.code(), Some(1));
}

#[test]
fn invalid_pipeline_configuration_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        pitchgraph(&["run", "--input", "x.csv", "--resolution", "0"], tmp.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pitchgraph(
            &["run", "--input", "x.csv", "--betweenness-mode", "sideways"],
            tmp.path()
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(pitchgraph(&["run"], tmp.path()).status.code(), Some(1));
}

#[test]
fn unreadable_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = pitchgraph(&["run", "--input", "missing.csv"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.csv"));

    fs::write(tmp.path().join("bad.csv"), "player_id,start_time\n1,0\n").unwrap();
    assert_eq!(
        pitchgraph(&["stats", "--input", "bad.csv"], tmp.path()).status.code(),
        Some(2)
    );
}

#[test]
fn run_then_render() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert!(pitchgraph(
        &[
            "generate",
            "--scenario",
            "two_zones",
            "--seed",
            "2",
            "--output",
            "m.csv"
        ],
        dir
    )
    .status
    .success());

    let out = pitchgraph(&["run", "--input", "m.csv", "--output", "out", "--no-render"], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out_dir = dir.join("out");
    assert_eq!(count_files(&out_dir.join("reports"), "json"), 74);
    assert_eq!(count_files(&out_dir.join("svg"), "svg"), 0);
    let stats = fs::read_to_string(out_dir.join("stats.csv")).unwrap();
    assert_eq!(stats.lines().count(), 75);
    for name in ["meta.json", "grid.csv", "twg.json", "rejections.json", "rejections.log"] {
        assert!(out_dir.join(name).is_file(), "{name}");
    }

    let out = pitchgraph(&["render", "--output", "out", "--normalize", "false"], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(count_files(&out_dir.join("svg"), "svg"), 2 * 74);
}

#[test]
fn stats_writes_only_statistics() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert!(pitchgraph(
        &["generate", "--seed", "1", "--duration", "12", "--output", "m.csv"],
        dir
    )
    .status
    .success());
    fs::write(
        dir.join("run.conf"),
        "# short match\ninput = m.csv\noutput = s\nwindow_width = 4\nwindow_step = 2\n",
    )
    .unwrap();
    let out = pitchgraph(&["stats", "--config", "run.conf"], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stats = fs::read_to_string(dir.join("s/stats.csv")).unwrap();
    // 12-minute match, width 4, step 2: starts 0, 2, 4, 6, 8
    assert_eq!(stats.lines().count(), 1 + 5);
    assert!(!dir.join("s/reports").exists());
}

#[test]
fn render_without_a_run_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        pitchgraph(&["render", "--output", "nowhere"], tmp.path()).status.code(),
        Some(2)
    );
}
