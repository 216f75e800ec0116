use std::path::Path;
use std::process::{Command, Output};

const FRAGMENT: &str = include_str!("../../core/tests/fixtures/romeo-fragment.xml");
const FIG6: &str = include_str!("../../core/tests/fixtures/fig6.toy");

fn stagegraph(root: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stagegraph"))
        .arg("--root")
        .arg(root)
        .args(args)
        .env_remove("STAGEGRAPH_ROOT")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn corpus() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("rawdata");
    std::fs::create_dir_all(&raw).unwrap();
    std::fs::write(raw.join("romeo-and-juliet_TEIsimple_FolgerShakespeare.xml"), FRAGMENT).unwrap();
    dir
}

#[test]
fn toy_script_reports_figure_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = stagegraph(dir.path(), &["toy", "--script", FIG6.trim(), "--name", "fig6"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("hypergraph n=5 m=7; clique expansion n=5 m=10; star expansion n=12 m=16"));
    assert_eq!(std::fs::read_dir(dir.path().join("graphdata")).unwrap().count(), 19);
}

#[test]
fn toy_file_is_named_after_its_stem() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("duo.toy");
    std::fs::write(&file, "|->A,B; A*; B*|").unwrap();
    let out = stagegraph(&dir.path().join("root"), &["toy", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.path().join("root/graphdata/duo_hg.nodes.csv").exists());
}

#[test]
fn fragment_agg_file_matches_golden_rows() {
    let dir = corpus();
    assert_eq!(stagegraph(dir.path(), &["extract"]).status.code(), Some(0));
    assert_eq!(stagegraph(dir.path(), &["aggregate"]).status.code(), Some(0));
    let agg = std::fs::read_to_string(dir.path().join("data/romeo-and-juliet.agg.csv")).unwrap();
    let golden = "\
act,scene,stagegroup,stagegroup_raw,setting,onstage,speaker,n_lines,n_tokens
0,0,1,1,1,#Chorus_Rom,#Chorus_Rom,14,106
1,1,2,3,2,#SERVANTS.CAPULET.Gregory_Rom #SERVANTS.CAPULET.Sampson_Rom,#SERVANTS.CAPULET.Sampson_Rom,1,8
1,1,2,3,3,#SERVANTS.CAPULET.Gregory_Rom #SERVANTS.CAPULET.Sampson_Rom,#SERVANTS.CAPULET.Gregory_Rom,1,7
1,1,2,3,4,#SERVANTS.CAPULET.Gregory_Rom #SERVANTS.CAPULET.Sampson_Rom,#SERVANTS.CAPULET.Sampson_Rom,1,9
1,1,2,3,5,#SERVANTS.CAPULET.Gregory_Rom #SERVANTS.CAPULET.Sampson_Rom,#SERVANTS.CAPULET.Gregory_Rom,2,10
";
    assert_eq!(agg, golden);
}

#[test]
fn full_run_is_byte_identical_on_rerun() {
    let dir = corpus();
    let out = stagegraph(dir.path(), &["all", "--offline"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let snapshot = |root: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files = Vec::new();
        for sub in [
            "data",
            "graphdata",
            "rankings",
            "correlations",
            "timeseries",
            "metadata",
        ] {
            let mut names: Vec<_> = std::fs::read_dir(root.join(sub))
                .unwrap()
                .map(|e| e.unwrap().path())
                .collect();
            names.sort();
            for p in names.into_iter().filter(|p| p.is_file()) {
                files.push((p.display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
        files.push(("summary".into(), std::fs::read(root.join("summary.csv")).unwrap()));
        files
    };
    let first = snapshot(dir.path());
    assert_eq!(
        stagegraph(dir.path(), &["all", "--offline", "-j", "1"]).status.code(),
        Some(0)
    );
    assert_eq!(first, snapshot(dir.path()));
}

#[test]
fn missing_play_is_a_partial_failure() {
    let dir = corpus();
    let out = stagegraph(dir.path(), &["extract", "--plays", "romeo-and-juliet,hamlet"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("1 plays ok"));
    assert!(dir.path().join("data/romeo-and-juliet.raw.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(stagegraph(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        stagegraph(dir.path(), &["--window", "0", "build"]).status.code(),
        Some(2)
    );
    assert_eq!(
        stagegraph(dir.path(), &["--weight", "minutes", "rank"]).status.code(),
        Some(2)
    );
    assert_eq!(stagegraph(dir.path(), &["build"]).status.code(), Some(1));
    assert_eq!(stagegraph(dir.path(), &["fetch", "--offline"]).status.code(), Some(1));
    assert_eq!(
        stagegraph(dir.path(), &["toy", "--script", "|->A; B*|"]).status.code(),
        Some(1)
    );
}

#[test]
fn root_comes_from_the_environment() {
    let dir = corpus();
    let out = Command::new(env!("CARGO_BIN_EXE_stagegraph"))
        .arg("extract")
        .env("STAGEGRAPH_ROOT", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.path().join("data/romeo-and-juliet.cast.csv").exists());
}
