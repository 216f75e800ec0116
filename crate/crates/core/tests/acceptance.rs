//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria 3 to 6 need the Folger corpus. Point `STAGEGRAPH_RAWDATA` at a
//! directory of TEI Simple files or `STAGEGRAPH_ZIP` at the archive; without
//! either they fail and say why. Criterion 2 uses the real Romeo and Juliet
//! when available and the bundled fragment otherwise.

mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::*;
use stagegraph::aggregate::agg_table;
use stagegraph::analysis::{corpus_residuals, degree_ranking, spearman};
use stagegraph::metadata::{folger_play_types, play_name_from_file};
use stagegraph::pipeline::{discover_plays, run_pipeline};
use stagegraph::repr::ce::simple_edges;
use stagegraph::repr::files::{graph_tables, GRAPH_FILE_KINDS};
use stagegraph::repr::{ReprDescriptor, RANKED_REPRESENTATIONS};
use stagegraph::tei::parse_body;
use stagegraph::{
    CharacterId, CorpusLayout, CorrMatrix, DegreeWeight, FlushPolicy, PipelineConfig, PlayGraphs, PlayType, RankTable,
    Setting,
};

const TOY_BUDGET: Duration = Duration::from_secs(1);
const CORPUS_BUDGET: Duration = Duration::from_secs(600);
const PROPERTY_CASES: u32 = 200;
/// Residual magnitude accepted as zero (mean of equal floats).
const RESIDUAL_TOL: f64 = 1e-12;
const ROMEO: &str = "romeo-and-juliet";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The corpus rawdata directory, if one was provided.
struct Corpus {
    _tmp: Option<tempfile::TempDir>,
    rawdata: PathBuf,
}

fn corpus() -> Result<Corpus, String> {
    if let Ok(dir) = std::env::var("STAGEGRAPH_RAWDATA") {
        return Ok(Corpus {
            _tmp: None,
            rawdata: PathBuf::from(dir),
        });
    }
    if let Ok(zip) = std::env::var("STAGEGRAPH_ZIP") {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let bytes = std::fs::read(&zip).map_err(|e| format!("{zip}: {e}"))?;
        let rawdata = tmp.path().join("rawdata");
        stagegraph::fetch::extract_xml(&bytes, &rawdata).map_err(|e| e.to_string())?;
        return Ok(Corpus {
            _tmp: Some(tmp),
            rawdata,
        });
    }
    Err("corpus unavailable (set STAGEGRAPH_RAWDATA or STAGEGRAPH_ZIP)".into())
}

fn romeo_file(rawdata: &Path) -> Result<PathBuf, String> {
    let entries = std::fs::read_dir(rawdata).map_err(|e| format!("{}: {e}", rawdata.display()))?;
    entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .find(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            name.ends_with(".xml") && (play_name_from_file(name) == ROMEO || name.starts_with("Rom_"))
        })
        .ok_or_else(|| format!("no Romeo and Juliet file in {}", rawdata.display()))
}

fn settings_of(xml: &[u8]) -> Result<Vec<Setting>, String> {
    let body = parse_body(xml, FlushPolicy::TEI).map_err(|e| e.to_string())?;
    Ok(stagegraph::aggregate_settings(&body.events))
}

fn romeo_graphs() -> Result<PlayGraphs, String> {
    let corpus = corpus()?;
    let path = romeo_file(&corpus.rawdata)?;
    let xml = std::fs::read(&path).map_err(|e| e.to_string())?;
    Ok(PlayGraphs::build(&settings_of(&xml)?))
}

fn graph_table(graphs: &PlayGraphs, kind: &str) -> stagegraph::Table {
    graph_tables(graphs)
        .into_iter()
        .find(|(k, _)| *k == kind)
        .expect("known kind")
        .1
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let graphs = PlayGraphs::build(&toy_settings(FIG6));
    let hg = (graphs.hg_group.nodes.len(), graphs.hg_group.edges.len());
    let ce = (graphs.ce_group.nodes.len(), simple_edges(&graphs.ce_group.edges).len());
    let se = (graphs.se_group.nodes.len(), graphs.se_group.edges.len());
    let elapsed = start.elapsed();
    ensure(hg == (5, 7), || format!("hypergraph (n, m) = {hg:?}"))?;
    ensure(ce == (5, 10), || format!("clique expansion (n, m) = {ce:?}"))?;
    ensure(se == (12, 16), || format!("star expansion (n, m) = {se:?}"))?;
    ensure(elapsed < TOY_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("hg {hg:?}, ce {ce:?}, se {se:?} in {elapsed:.1?}"))
}

fn criterion_2() -> Outcome {
    let sampson = "#SERVANTS.CAPULET.Sampson_Rom";
    let gregory = "#SERVANTS.CAPULET.Gregory_Rom";
    let both = format!("{gregory} {sampson}");
    let expected: Vec<Vec<String>> = [
        ["0", "0", "1", "1", "1", "#Chorus_Rom", "#Chorus_Rom", "14", "106"],
        ["1", "1", "2", "3", "2", &both, sampson, "1", "8"],
        ["1", "1", "2", "3", "3", &both, gregory, "1", "7"],
        ["1", "1", "2", "3", "4", &both, sampson, "1", "9"],
        ["1", "1", "2", "3", "5", &both, gregory, "2", "10"],
    ]
    .iter()
    .map(|r| r.iter().map(|s| s.to_string()).collect())
    .collect();
    let (source, xml) = match corpus().and_then(|c| romeo_file(&c.rawdata)) {
        Ok(path) => (
            path.display().to_string(),
            std::fs::read(&path).map_err(|e| e.to_string())?,
        ),
        Err(_) => ("bundled fragment".to_string(), ROMEO_FRAGMENT.as_bytes().to_vec()),
    };
    let table = agg_table(&settings_of(&xml)?);
    let head: Vec<Vec<String>> = table.rows.iter().take(5).cloned().collect();
    ensure(head == expected, || format!("{source}: first rows {head:?}"))?;
    Ok(format!("{source}: first five agg rows match"))
}

fn criterion_3() -> Outcome {
    let graphs = romeo_graphs()?;
    let t = graph_table(&graphs, "ce-group-mw.edges");
    let col = |name: &str| t.column_index(name).unwrap();
    let head: Vec<(String, String, u64, u64, u64)> = t
        .rows
        .iter()
        .take(2)
        .map(|r| {
            let n = |c: &str| r[col(c)].parse::<u64>().unwrap();
            (
                r[col("node1")].clone(),
                r[col("node2")].clone(),
                n("n_tokens"),
                n("n_lines"),
                n("edge_index"),
            )
        })
        .collect();
    let pair = |t, l, i| {
        (
            "#SERVANTS.CAPULET.Gregory_Rom".to_string(),
            "#SERVANTS.CAPULET.Sampson_Rom".to_string(),
            t,
            l,
            i,
        )
    };
    let expected = vec![pair(254, 33, 2), pair(149, 25, 3)];
    ensure(head == expected, || format!("first rows {head:?}"))?;
    Ok("Gregory-Sampson rows (254, 33, 2) and (149, 25, 3)".into())
}

fn criterion_4() -> Outcome {
    let graphs = romeo_graphs()?;
    let t = graph_table(&graphs, "hg.nodes");
    let row = t
        .rows
        .iter()
        .find(|r| r[0] == "#Apothecary_Rom")
        .ok_or("Apothecary_Rom missing from hg.nodes")?;
    ensure(row[1..] == ["224", "53", "29", "7"], || {
        format!("Apothecary_Rom weights {:?}", &row[1..])
    })?;
    Ok("Apothecary_Rom (224, 53, 29, 7)".into())
}

fn criterion_5() -> Outcome {
    let corpus = corpus()?;
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let layout = CorpusLayout::new(tmp.path());
    std::fs::create_dir_all(layout.rawdata()).map_err(|e| e.to_string())?;
    for entry in std::fs::read_dir(&corpus.rawdata).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|x| x == "xml") {
            std::fs::copy(&path, layout.rawdata().join(path.file_name().unwrap())).map_err(|e| e.to_string())?;
        }
    }
    let start = Instant::now();
    let report = run_pipeline(&layout, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let done = report.succeeded();
    ensure(report.is_success(), || {
        format!(
            "failures: {:?} {:?}",
            report.errors,
            report.failed_plays().collect::<Vec<_>>()
        )
    })?;
    ensure(done.len() == 37, || format!("{} plays processed", done.len()))?;
    let types = folger_play_types();
    let mut counts: BTreeMap<PlayType, usize> = BTreeMap::new();
    for play in &done {
        *counts
            .entry(*types.get(play).ok_or_else(|| format!("{play} has no play type"))?)
            .or_default() += 1;
    }
    let counts = (
        counts[&PlayType::Comedy],
        counts[&PlayType::History],
        counts[&PlayType::Tragedy],
    );
    ensure(counts == (17, 10, 10), || format!("play types {counts:?}"))?;
    for play in discover_plays(&layout).map_err(|e| e.to_string())? {
        let missing: Vec<_> = GRAPH_FILE_KINDS
            .iter()
            .filter(|k| !layout.graph_path(&play.name, k).exists())
            .collect();
        ensure(missing.is_empty(), || format!("{}: missing {missing:?}", play.name))?;
    }
    ensure(elapsed < CORPUS_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("37 plays, 17/10/10, 19 graph files each, {elapsed:.1?}"))
}

fn criterion_6() -> Outcome {
    let graphs = romeo_graphs()?;
    let romeo = CharacterId::new("Romeo_Rom").unwrap();
    for d in RANKED_REPRESENTATIONS {
        let r = degree_ranking(&graphs, d, DegreeWeight::Lines).map_err(|e| e.to_string())?;
        let rank = r.get(&romeo).map(|e| e.rank);
        ensure(rank == Some(1), || format!("{d}: Romeo at rank {rank:?}"))?;
    }
    let rank = |s: &str| degree_ranking(&graphs, s.parse::<ReprDescriptor>().unwrap(), DegreeWeight::Lines);
    let (mwd, wd) = (
        rank("se-speech-mwd").map_err(|e| e.to_string())?,
        rank("se-speech-wd").map_err(|e| e.to_string())?,
    );
    ensure(mwd.entries == wd.entries, || {
        "se-speech-mwd and se-speech-wd rankings differ".into()
    })?;
    Ok("Romeo first in all 11; mwd ranking equals wd".into())
}

fn run_property(name: &str, check: impl Fn(&str) -> Result<(), String>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&script_strategy(), |script| check(&script).map_err(TestCaseError::fail))
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_7() -> Outcome {
    run_property("expansion consistency", |s| {
        check_expansion_counts(&PlayGraphs::build(&toy_settings(s)))
    })?;
    run_property("speaker on stage", |s| check_speakers_onstage(&toy_settings(s)))?;
    run_property("conservation", |s| {
        let events = stagegraph::toy::toy_to_events(&stagegraph::parse_toy(s).unwrap());
        let settings = stagegraph::aggregate_settings(&events);
        check_conservation(&events, &settings, &PlayGraphs::build(&settings))
    })?;
    run_property("filter partition", |s| {
        check_filter_partition(&PlayGraphs::build(&toy_settings(s)))
    })?;
    run_property("spearman laws", |s| {
        let graphs = PlayGraphs::build(&toy_settings(s));
        let ranks: Vec<RankTable> = RANKED_REPRESENTATIONS
            .iter()
            .map(|d| degree_ranking(&graphs, *d, DegreeWeight::Lines).unwrap())
            .collect();
        for a in &ranks {
            for b in &ranks {
                check_spearman_laws(a, b)?;
            }
        }
        Ok(())
    })?;

    let labels: Vec<ReprDescriptor> = RANKED_REPRESENTATIONS[..3].to_vec();
    let m = CorrMatrix {
        labels,
        values: vec![vec![1.0, 0.3, -0.2], vec![0.3, 1.0, 0.9], vec![-0.2, 0.9, 1.0]],
    };
    let residuals = corpus_residuals(&[m.clone(), m.clone(), m]).map_err(|e| e.to_string())?;
    ensure(
        residuals
            .iter()
            .all(|r| r.values.iter().flatten().all(|v| v.abs() <= RESIDUAL_TOL)),
        || format!("nonzero residuals {:?}", residuals[0].values),
    )?;

    let digests: Vec<_> = (0..2)
        .map(|_| {
            let (_dir, layout) = fixture_corpus();
            run_pipeline(&layout, &PipelineConfig::default()).map(|_| tree_digest(&layout.root))
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(digests[0] == digests[1], || "two runs produced different files".into())?;
    Ok(format!(
        "{PROPERTY_CASES} cases per property; residuals zero; {} files hash equal",
        digests[0].len()
    ))
}

fn criterion_8() -> Outcome {
    let table = |ranks: [u32; 5]| {
        let d = RANKED_REPRESENTATIONS[0];
        RankTable::from_scores(
            d,
            ranks
                .iter()
                .enumerate()
                .map(|(i, r)| (CharacterId::new(format!("C{i}")).unwrap(), -f64::from(*r)))
                .collect(),
        )
    };
    let id = table([1, 2, 3, 4, 5]);
    let swapped = spearman(&id, &table([2, 1, 4, 3, 5])).map_err(|e| e.to_string())?;
    let reversed = spearman(&id, &table([5, 4, 3, 2, 1])).map_err(|e| e.to_string())?;
    ensure(swapped == 0.8, || format!("swapped pairs gave {swapped}"))?;
    ensure(reversed == -1.0, || format!("reversal gave {reversed}"))?;
    Ok("0.8 and -1.0 exactly".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("toy expansion counts", criterion_1),
        ("agg rows of Romeo and Juliet", criterion_2),
        ("ce-group-mw rows of Romeo and Juliet", criterion_3),
        ("hg node weights of Apothecary", criterion_4),
        ("full corpus run", criterion_5),
        ("Romeo ranked first everywhere", criterion_6),
        ("property suite", criterion_7),
        ("Spearman oracle", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
