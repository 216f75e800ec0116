//! Corpus layout and the end-to-end pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregate::{agg_table, aggregate_settings, settings_from_table};
use crate::analysis::{
    corpus_residuals, corpus_summary, correlation_matrix, degree_ranking, filtered_hg_ranking, prominence_timeseries,
    summary_table, timeseries_table, CardinalityFilter, CorrMatrix, DegreeWeight, FilterMode, RankTable,
    DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::metadata::{folger_play_types, play_name_from_file, playtypes_from_table, playtypes_table, PlayType};
use crate::model::{CharacterId, Setting};
use crate::repr::files::{graph_file_name, graph_tables};
use crate::repr::{PlayGraphs, ReprDescriptor, RANKED_REPRESENTATIONS};
use crate::table::{read_table, write_table};
use crate::tei::{cast_table, parse_body, parse_cast, raw_table, FlushPolicy};
use crate::toy::{parse_toy, toy_cast, toy_to_events};

pub const CONFIG_FILE: &str = "pipeline-config.json";
pub const SUMMARY_FILE: &str = "summary.csv";

/// Thresholds written for the cardinality-filtered rankings.
pub const FILTER_THRESHOLDS: std::ops::RangeInclusive<usize> = 1..=6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusLayout {
    pub root: PathBuf,
}

impl CorpusLayout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CorpusLayout { root: root.into() }
    }

    pub fn rawdata(&self) -> PathBuf {
        self.root.join("rawdata")
    }

    pub fn data(&self) -> PathBuf {
        self.root.join("data")
    }

    pub fn graphdata(&self) -> PathBuf {
        self.root.join("graphdata")
    }

    pub fn metadata(&self) -> PathBuf {
        self.root.join("metadata")
    }

    pub fn rankings(&self) -> PathBuf {
        self.root.join("rankings")
    }

    pub fn correlations(&self) -> PathBuf {
        self.root.join("correlations")
    }

    pub fn timeseries(&self) -> PathBuf {
        self.root.join("timeseries")
    }

    pub fn cast_path(&self, play: &str) -> PathBuf {
        self.data().join(format!("{play}.cast.csv"))
    }

    pub fn raw_path(&self, play: &str) -> PathBuf {
        self.data().join(format!("{play}.raw.csv"))
    }

    pub fn agg_path(&self, play: &str) -> PathBuf {
        self.data().join(format!("{play}.agg.csv"))
    }

    pub fn graph_path(&self, play: &str, kind: &str) -> PathBuf {
        self.graphdata().join(graph_file_name(play, kind))
    }

    pub fn playtypes_path(&self) -> PathBuf {
        self.metadata().join("playtypes.csv")
    }

    pub fn ranking_path(&self, play: &str, label: &str) -> PathBuf {
        self.rankings().join(format!("{play}_{label}.csv"))
    }

    pub fn correlation_path(&self, play: &str) -> PathBuf {
        self.correlations().join(format!("{play}.csv"))
    }

    pub fn residual_path(&self, play: &str) -> PathBuf {
        self.correlations().join("residuals").join(format!("{play}.csv"))
    }

    pub fn timeseries_path(&self, play: &str) -> PathBuf {
        self.timeseries().join(format!("{play}.csv"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Tei,
    Toy,
}

/// An input file in `rawdata/`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaySource {
    pub name: String,
    pub path: PathBuf,
    pub kind: SourceKind,
}

/// `.xml` and `.toy` files in `rawdata/`, sorted by play name.
pub fn discover_plays(layout: &CorpusLayout) -> Result<Vec<PlaySource>> {
    let dir = layout.rawdata();
    let entries = match std::fs::read_dir(&dir) {
        Ok(entries) => entries,
        Err(_) => return Err(Error::NoRawData(dir)),
    };
    let mut plays = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(&dir, e))?.path();
        let Some(file) = path.file_name().and_then(|f| f.to_str()) else {
            continue;
        };
        let kind = match path.extension().and_then(|e| e.to_str()) {
            Some("xml") => SourceKind::Tei,
            Some("toy") => SourceKind::Toy,
            _ => continue,
        };
        plays.push(PlaySource {
            name: play_name_from_file(file),
            path: path.clone(),
            kind,
        });
    }
    if plays.is_empty() {
        return Err(Error::NoRawData(dir));
    }
    plays.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(plays)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaySelection {
    #[default]
    All,
    Only(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub plays: PlaySelection,
    pub flush_policy: FlushPolicy,
    pub degree_weight: DegreeWeight,
    pub window: usize,
    /// File of character identifiers to keep in rankings and correlations.
    pub allowlist: Option<PathBuf>,
    /// Worker threads; `None` uses all cores.
    pub jobs: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            plays: PlaySelection::All,
            flush_policy: FlushPolicy::TEI,
            degree_weight: DegreeWeight::Lines,
            window: DEFAULT_WINDOW,
            allowlist: None,
            jobs: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.flush_policy.validate()?;
        if self.window < 1 {
            return Err(Error::InvalidWindow);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn select(&self, sources: Vec<PlaySource>) -> (Vec<PlaySource>, Vec<String>) {
        match &self.plays {
            PlaySelection::All => (sources, Vec::new()),
            PlaySelection::Only(names) => {
                let wanted: BTreeSet<&str> = names.iter().map(String::as_str).collect();
                let found: BTreeSet<&str> = sources.iter().map(|s| s.name.as_str()).collect();
                let missing = wanted.difference(&found).map(|s| s.to_string()).collect();
                let kept = sources
                    .into_iter()
                    .filter(|s| wanted.contains(s.name.as_str()))
                    .collect();
                (kept, missing)
            }
        }
    }
}

/// Reads one identifier per line, with or without a leading `#`; blank
/// lines are skipped.
pub fn read_allowlist(path: &Path) -> Result<BTreeSet<CharacterId>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(CharacterId::from_reference)
        .collect()
}

/// Per-play pipeline stages, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Extract,
    Aggregate,
    Build,
    Rank,
    Timeseries,
}

pub const PLAY_STAGES: [Stage; 5] = [
    Stage::Extract,
    Stage::Aggregate,
    Stage::Build,
    Stage::Rank,
    Stage::Timeseries,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayReport {
    pub play: String,
    pub elapsed: Duration,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub plays: Vec<PlayReport>,
    /// Corpus-level failures (correlation, summary, selection).
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn failed_plays(&self) -> impl Iterator<Item = &PlayReport> {
        self.plays.iter().filter(|p| p.error.is_some())
    }

    pub fn is_success(&self) -> bool {
        self.errors.is_empty() && self.failed_plays().next().is_none()
    }

    pub fn succeeded(&self) -> Vec<String> {
        self.plays
            .iter()
            .filter(|p| p.error.is_none())
            .map(|p| p.play.clone())
            .collect()
    }
}

/// Parses one input into `data/{play}.cast.csv` and `data/{play}.raw.csv`.
pub fn extract_play(layout: &CorpusLayout, source: &PlaySource, policy: FlushPolicy) -> Result<Vec<String>> {
    let bytes = std::fs::read(&source.path).map_err(|e| Error::io(&source.path, e))?;
    let (cast, events, warnings) = match source.kind {
        SourceKind::Tei => {
            let cast = parse_cast(&bytes)?;
            let body = parse_body(&bytes, policy)?;
            let warnings = body
                .warnings
                .iter()
                .map(|w| format!("byte {}: {}", w.offset, w.message))
                .collect();
            (cast, body.events, warnings)
        }
        SourceKind::Toy => {
            let text = String::from_utf8_lossy(&bytes);
            let script = parse_toy(&text)?;
            (toy_cast(&script), toy_to_events(&script), Vec::new())
        }
    };
    write_table(&layout.cast_path(&source.name), &cast_table(&cast))?;
    write_table(&layout.raw_path(&source.name), &raw_table(&events))?;
    Ok(warnings)
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

pub fn load_settings(layout: &CorpusLayout, play: &str) -> Result<Vec<Setting>> {
    let path = layout.agg_path(play);
    settings_from_table(&read_table(&path)?, &path_str(&path))
}

/// `data/{play}.raw.csv` to `data/{play}.agg.csv`.
pub fn aggregate_play(layout: &CorpusLayout, play: &str) -> Result<()> {
    let path = layout.raw_path(play);
    let events = crate::tei::events_from_table(&read_table(&path)?, &path_str(&path))?;
    write_table(&layout.agg_path(play), &agg_table(&aggregate_settings(&events)))
}

/// The nineteen graphdata files of a play.
pub fn build_play(layout: &CorpusLayout, play: &str) -> Result<()> {
    let graphs = PlayGraphs::build(&load_settings(layout, play)?);
    for (kind, table) in graph_tables(&graphs) {
        write_table(&layout.graph_path(play, kind), &table)?;
    }
    Ok(())
}

fn ranked_tables(
    graphs: &PlayGraphs,
    weight: DegreeWeight,
    allow: Option<&BTreeSet<CharacterId>>,
) -> Result<Vec<RankTable>> {
    RANKED_REPRESENTATIONS
        .iter()
        .map(|d| {
            let r = degree_ranking(graphs, *d, weight)?;
            Ok(match allow {
                Some(a) => r.restrict(a),
                None => r,
            })
        })
        .collect()
}

fn filter_label(filter: CardinalityFilter) -> String {
    let mode = match filter.mode {
        FilterMode::AtMost => "at-most",
        FilterMode::AtLeast => "at-least",
    };
    format!("hg-group-mw.{mode}-{}", filter.threshold)
}

/// Degree rankings for the compared representations, hg-group-mw, and its
/// cardinality-filtered variants.
pub fn rank_play(
    layout: &CorpusLayout,
    play: &str,
    weight: DegreeWeight,
    allow: Option<&BTreeSet<CharacterId>>,
) -> Result<()> {
    let graphs = PlayGraphs::build(&load_settings(layout, play)?);
    let restrict = |r: RankTable| match allow {
        Some(a) => r.restrict(a),
        None => r,
    };
    for r in ranked_tables(&graphs, weight, allow)? {
        write_table(&layout.ranking_path(play, &r.representation.to_string()), &r.to_table())?;
    }
    let hg: ReprDescriptor = "hg-group-mw".parse()?;
    let r = restrict(degree_ranking(&graphs, hg, weight)?);
    write_table(&layout.ranking_path(play, &hg.to_string()), &r.to_table())?;
    for threshold in FILTER_THRESHOLDS {
        for mode in [FilterMode::AtMost, FilterMode::AtLeast] {
            let filter = CardinalityFilter::new(threshold, mode)?;
            let r = restrict(filtered_hg_ranking(&graphs.hg_group, filter, weight));
            write_table(&layout.ranking_path(play, &filter_label(filter)), &r.to_table())?;
        }
    }
    Ok(())
}

pub fn timeseries_play(layout: &CorpusLayout, play: &str, window: usize) -> Result<()> {
    let series = prominence_timeseries(&load_settings(layout, play)?, window)?;
    write_table(&layout.timeseries_path(play), &timeseries_table(&series))
}

/// Per-play correlation matrices and their residuals against the corpus
/// mean. Plays whose matrix cannot be computed are reported and left out
/// of the mean.
pub fn correlate(
    layout: &CorpusLayout,
    plays: &[String],
    weight: DegreeWeight,
    allow: Option<&BTreeSet<CharacterId>>,
) -> Result<Vec<(String, String)>> {
    let results: Vec<(String, Result<CorrMatrix>)> = plays
        .par_iter()
        .map(|play| {
            let m = load_settings(layout, play)
                .and_then(|s| ranked_tables(&PlayGraphs::build(&s), weight, allow))
                .and_then(|r| correlation_matrix(&r));
            (play.clone(), m)
        })
        .collect();
    let mut failures = Vec::new();
    let mut ok: Vec<(String, CorrMatrix)> = Vec::new();
    for (play, m) in results {
        match m {
            Ok(m) => ok.push((play, m)),
            Err(e) => failures.push((play, e.to_string())),
        }
    }
    for (play, m) in &ok {
        write_table(&layout.correlation_path(play), &m.to_table())?;
    }
    if !ok.is_empty() {
        let matrices: Vec<CorrMatrix> = ok.iter().map(|(_, m)| m.clone()).collect();
        for ((play, _), r) in ok.iter().zip(corpus_residuals(&matrices)?) {
            write_table(&layout.residual_path(play), &r.to_table())?;
        }
    }
    Ok(failures)
}

/// Play types from `metadata/playtypes.csv`, written from the built-in
/// table when absent.
pub fn ensure_metadata(layout: &CorpusLayout) -> Result<BTreeMap<String, PlayType>> {
    let path = layout.playtypes_path();
    if path.exists() {
        return playtypes_from_table(&read_table(&path)?, &path_str(&path));
    }
    let types = folger_play_types();
    write_table(&path, &playtypes_table(&types))?;
    Ok(types)
}

pub fn summarize(layout: &CorpusLayout, plays: &[String]) -> Result<()> {
    let types = ensure_metadata(layout)?;
    let mut settings = BTreeMap::new();
    for play in plays {
        settings.insert(play.clone(), load_settings(layout, play)?);
    }
    let rows = corpus_summary(&settings, &types)?;
    write_table(&layout.root.join(SUMMARY_FILE), &summary_table(&rows))
}

fn run_play(
    layout: &CorpusLayout,
    source: &PlaySource,
    stages: &[Stage],
    config: &PipelineConfig,
    allow: Option<&BTreeSet<CharacterId>>,
) -> PlayReport {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let play = source.name.as_str();
    let mut result = Ok(());
    for stage in stages {
        result = match stage {
            Stage::Extract => extract_play(layout, source, config.flush_policy).map(|w| warnings.extend(w)),
            Stage::Aggregate => aggregate_play(layout, play),
            Stage::Build => build_play(layout, play),
            Stage::Rank => rank_play(layout, play, config.degree_weight, allow),
            Stage::Timeseries => timeseries_play(layout, play, config.window),
        };
        if result.is_err() {
            break;
        }
    }
    let error = result.err().map(|e| e.to_string());
    match &error {
        Some(e) => warn!("{play}: {e}"),
        None => info!("{play}: done in {:.2?}", start.elapsed()),
    }
    PlayReport {
        play: source.name.clone(),
        elapsed: start.elapsed(),
        warnings,
        error,
    }
}

/// What to run besides the per-play stages.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusSteps {
    pub correlate: bool,
    pub summary: bool,
}

impl CorpusSteps {
    pub const ALL: CorpusSteps = CorpusSteps {
        correlate: true,
        summary: true,
    };
}

/// Runs the given stages on every selected play in parallel, then the
/// corpus-level steps over the plays that succeeded.
pub fn run(layout: &CorpusLayout, config: &PipelineConfig, stages: &[Stage], corpus: CorpusSteps) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let mut stages = stages.to_vec();
    stages.sort();
    stages.dedup();

    let (sources, missing) = config.select(discover_plays(layout)?);
    let mut report = RunReport::default();
    report
        .errors
        .extend(missing.iter().map(|m| format!("{m}: no such play in rawdata")));

    let allow = config.allowlist.as_deref().map(read_allowlist).transpose()?;
    std::fs::create_dir_all(&layout.root).map_err(|e| Error::io(&layout.root, e))?;
    let config_path = layout.root.join(CONFIG_FILE);
    std::fs::write(&config_path, config.to_json()?).map_err(|e| Error::io(&config_path, e))?;
    ensure_metadata(layout)?;

    let work = || -> Vec<PlayReport> {
        sources
            .par_iter()
            .map(|s| run_play(layout, s, &stages, config, allow.as_ref()))
            .collect()
    };
    report.plays = match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Archive(e.to_string()))?
            .install(work),
        None => work(),
    };

    let done = report.succeeded();
    if corpus.correlate && !done.is_empty() {
        for (play, e) in correlate(layout, &done, config.degree_weight, allow.as_ref())? {
            report.errors.push(format!("{play}: correlation failed: {e}"));
        }
    }
    if corpus.summary {
        if let Err(e) = summarize(layout, &done) {
            report.errors.push(format!("summary: {e}"));
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Every stage and corpus step.
pub fn run_pipeline(layout: &CorpusLayout, config: &PipelineConfig) -> Result<RunReport> {
    run(layout, config, &PLAY_STAGES, CorpusSteps::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG6: &str = "|->A; A*|->B; A*|->C; B*; A->| C*; B->| C*|->D; D*|->A,B,E; A*; A,B,C,D,E->|";

    fn toy_corpus() -> (tempfile::TempDir, CorpusLayout) {
        let dir = tempfile::tempdir().unwrap();
        let layout = CorpusLayout::new(dir.path());
        std::fs::create_dir_all(layout.rawdata()).unwrap();
        std::fs::write(layout.rawdata().join("fig6.toy"), FIG6).unwrap();
        std::fs::write(layout.rawdata().join("duo.toy"), "|->A,B; A*; B*; A*|").unwrap();
        (dir, layout)
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = PipelineConfig {
            plays: PlaySelection::Only(vec!["hamlet".into()]),
            window: 10,
            ..Default::default()
        };
        assert_eq!(PipelineConfig::from_json(&config.to_json().unwrap()).unwrap(), config);
        assert_eq!(PipelineConfig::from_json("{}").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn toy_corpus_emits_full_inventory() {
        let (_dir, layout) = toy_corpus();
        let report = run(
            &layout,
            &PipelineConfig::default(),
            &PLAY_STAGES,
            CorpusSteps {
                correlate: true,
                summary: false,
            },
        )
        .unwrap();
        assert!(report.is_success(), "{report:?}");
        let graph_files = std::fs::read_dir(layout.graphdata()).unwrap().count();
        assert_eq!(graph_files, 2 * 19);
        for play in ["fig6", "duo"] {
            assert!(layout.cast_path(play).exists());
            assert!(layout.raw_path(play).exists());
            assert!(layout.agg_path(play).exists());
            assert!(layout.correlation_path(play).exists());
            assert!(layout.residual_path(play).exists());
            assert!(layout.timeseries_path(play).exists());
        }
        assert!(layout.playtypes_path().exists());
    }

    #[test]
    fn summary_needs_play_types() {
        let (_dir, layout) = toy_corpus();
        let report = run_pipeline(&layout, &PipelineConfig::default()).unwrap();
        assert_eq!(report.errors.len(), 1);
        assert!(report.errors[0].contains("duo"));
        let mut types = folger_play_types();
        types.insert("duo".into(), PlayType::Comedy);
        types.insert("fig6".into(), PlayType::Tragedy);
        write_table(&layout.playtypes_path(), &playtypes_table(&types)).unwrap();
        assert!(run_pipeline(&layout, &PipelineConfig::default()).unwrap().is_success());
        let summary = read_table(&layout.root.join(SUMMARY_FILE)).unwrap();
        assert_eq!(summary.rows[1], vec!["fig6", "tragedy", "7", "4"]);
    }

    #[test]
    fn failures_are_isolated() {
        let (_dir, layout) = toy_corpus();
        std::fs::write(layout.rawdata().join("broken.toy"), "|A*|").unwrap();
        let config = PipelineConfig {
            plays: PlaySelection::Only(vec!["broken".into(), "fig6".into(), "nowhere".into()]),
            ..Default::default()
        };
        let report = run(&layout, &config, &PLAY_STAGES, CorpusSteps::default()).unwrap();
        assert_eq!(report.failed_plays().count(), 1);
        assert_eq!(report.succeeded(), vec!["fig6"]);
        assert!(report.errors[0].contains("nowhere"));
        assert!(!report.is_success());
    }

    #[test]
    fn empty_rawdata_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            run_pipeline(&CorpusLayout::new(dir.path()), &PipelineConfig::default()),
            Err(Error::NoRawData(_))
        ));
    }
}
