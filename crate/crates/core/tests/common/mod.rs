//! Helpers shared by the property suite and the acceptance target.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use sha2::{Digest, Sha256};

use stagegraph::analysis::{degree_ranking, filtered_hg_ranking, spearman};
use stagegraph::repr::Granularity;
use stagegraph::{
    aggregate_settings, CardinalityFilter, DegreeWeight, FilterMode, PlayGraphs, RankTable, ReprDescriptor, Setting,
};

pub const FIG6: &str = include_str!("../fixtures/fig6.toy");
pub const ROMEO_FRAGMENT: &str = include_str!("../fixtures/romeo-fragment.xml");

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

const CAST: [char; 6] = ['A', 'B', 'C', 'D', 'E', 'F'];

/// Opcodes: 0 entry, 1 exit, 2 speech, 3 scene break. The mask picks
/// characters; invalid picks are repaired so every script is well formed.
pub fn render_script(ops: &[(u8, u8)]) -> String {
    let mut scenes: Vec<Vec<String>> = vec![Vec::new()];
    let mut onstage: BTreeSet<char> = BTreeSet::new();
    let pick = |mask: u8| -> BTreeSet<char> {
        CAST.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, c)| *c)
            .collect()
    };
    let list = |s: &BTreeSet<char>| s.iter().map(char::to_string).collect::<Vec<_>>().join(",");
    for &(op, mask) in ops {
        let chosen = pick(mask);
        match op % 4 {
            0 => {
                let new: BTreeSet<char> = chosen.difference(&onstage).copied().collect();
                if !new.is_empty() {
                    scenes.last_mut().unwrap().push(format!("->{}", list(&new)));
                    onstage.extend(new);
                }
            }
            1 => {
                let gone: BTreeSet<char> = chosen.intersection(&onstage).copied().collect();
                if !gone.is_empty() {
                    scenes.last_mut().unwrap().push(format!("{}->", list(&gone)));
                    onstage.retain(|c| !gone.contains(c));
                }
            }
            2 => {
                let mut speakers: BTreeSet<char> = chosen.intersection(&onstage).copied().collect();
                if speakers.is_empty() {
                    match onstage.iter().next() {
                        Some(c) => {
                            speakers.insert(*c);
                        }
                        None => {
                            let c = CAST[usize::from(mask) % CAST.len()];
                            scenes.last_mut().unwrap().push(format!("->{c}"));
                            onstage.insert(c);
                            speakers.insert(c);
                        }
                    }
                }
                scenes.last_mut().unwrap().push(format!("{}*", list(&speakers)));
            }
            _ => {
                if !scenes.last().unwrap().is_empty() {
                    scenes.push(Vec::new());
                }
            }
        }
    }
    scenes.retain(|s| !s.is_empty());
    let body: Vec<String> = scenes.iter().map(|s| s.join("; ")).collect();
    format!("|{}|", body.join("|"))
}

pub fn script_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec((0u8..4, 1u8..64), 1..60).prop_map(|ops| render_script(&ops))
}

pub fn toy_settings(script: &str) -> Vec<Setting> {
    let parsed = stagegraph::parse_toy(script).unwrap_or_else(|e| panic!("{script}: {e}"));
    let events = stagegraph::toy::toy_to_events(&parsed);
    aggregate_settings(&events)
}

fn pairs(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

pub fn check_expansion_counts(graphs: &PlayGraphs) -> Result<(), String> {
    for g in [Granularity::Scene, Granularity::Group] {
        let hg = graphs.hypergraph(g);
        let expected: usize = hg.edges.iter().map(|e| pairs(e.members.len())).sum();
        let ce = graphs.clique(g).edges.len();
        if ce != expected {
            return Err(format!("{g:?}: {ce} clique multi-edges, expected {expected}"));
        }
        let incidences: usize = hg.edges.iter().map(|e| e.members.len()).sum();
        let se = graphs.star(g).edges.len();
        if se != incidences {
            return Err(format!("{g:?}: {se} star edges, expected {incidences}"));
        }
    }
    Ok(())
}

pub fn check_speakers_onstage(settings: &[Setting]) -> Result<(), String> {
    match settings.iter().find(|s| !s.speaker.is_subset(&s.onstage)) {
        Some(s) => Err(format!("setting {} has a speaker off stage", s.setting)),
        None => Ok(()),
    }
}

/// Lines and tokens survive aggregation and every hypergraph level.
pub fn check_conservation(
    events: &[stagegraph::RawEvent],
    settings: &[Setting],
    graphs: &PlayGraphs,
) -> Result<(), String> {
    let (tokens, lines) = stagegraph::tei::count_tokens_and_lines(events);
    let agg = (
        settings.iter().map(|s| s.n_tokens).sum::<u64>(),
        settings.iter().map(|s| s.n_lines).sum::<u64>(),
    );
    if agg != (tokens, lines) {
        return Err(format!(
            "raw (tokens, lines) = {:?}, aggregated = {agg:?}",
            (tokens, lines)
        ));
    }
    for g in [Granularity::Scene, Granularity::Group] {
        let hg = graphs.hypergraph(g);
        let sums = (
            hg.edges.iter().map(|e| e.n_tokens).sum::<u64>(),
            hg.edges.iter().map(|e| e.n_lines).sum::<u64>(),
        );
        if sums != agg {
            return Err(format!("{g:?} hyperedges carry {sums:?}, settings {agg:?}"));
        }
    }
    Ok(())
}

/// Degrees over edges of size at most s plus those of size at least s+1
/// equal the unfiltered weighted degree.
pub fn check_filter_partition(graphs: &PlayGraphs) -> Result<(), String> {
    let full = degree_ranking(
        graphs,
        "hg-group-mw".parse::<ReprDescriptor>().unwrap(),
        DegreeWeight::Lines,
    )
    .map_err(|e| e.to_string())?;
    let max = graphs.hg_group.edges.iter().map(|e| e.members.len()).max().unwrap_or(0);
    for s in 1..=max + 1 {
        let low = filtered_hg_ranking(
            &graphs.hg_group,
            CardinalityFilter::new(s, FilterMode::AtMost).unwrap(),
            DegreeWeight::Lines,
        );
        let high = filtered_hg_ranking(
            &graphs.hg_group,
            CardinalityFilter::new(s + 1, FilterMode::AtLeast).unwrap(),
            DegreeWeight::Lines,
        );
        let (low, high) = (low.scores(), high.scores());
        for (c, total) in full.scores() {
            let parts = low.get(c).copied().unwrap_or(0.0) + high.get(c).copied().unwrap_or(0.0);
            if parts != total {
                return Err(format!("s={s}, {}: {parts} != {total}", c.reference()));
            }
        }
    }
    Ok(())
}

/// Symmetric, within [-1, 1], and unchanged by a strictly increasing
/// transform of either score vector.
pub fn check_spearman_laws(a: &RankTable, b: &RankTable) -> Result<(), String> {
    let (ab, ba) = match (spearman(a, b), spearman(b, a)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(_), Err(_)) => return Ok(()),
        (x, y) => return Err(format!("asymmetric definedness: {x:?} vs {y:?}")),
    };
    if ab != ba {
        return Err(format!("asymmetric: {ab} vs {ba}"));
    }
    if !(-1.0..=1.0).contains(&ab) {
        return Err(format!("out of range: {ab}"));
    }
    let squashed = RankTable::from_scores(
        a.representation,
        a.entries
            .iter()
            .map(|e| (e.character.clone(), (e.score + 1.0).ln() * 3.0 + 7.0))
            .collect(),
    );
    let again = spearman(&squashed, b).map_err(|e| e.to_string())?;
    if (again - ab).abs() > 1e-12 {
        return Err(format!("monotone transform changed rho from {ab} to {again}"));
    }
    Ok(())
}

/// SHA-256 of every file under `root`, keyed by relative path.
pub fn tree_digest(root: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let hash = Sha256::digest(std::fs::read(&path).unwrap());
                let rel = path.strip_prefix(root).unwrap().display().to_string();
                out.insert(rel, hash.iter().map(|b| format!("{b:02x}")).collect());
            }
        }
    }
    out
}

/// A corpus root whose rawdata holds the figure script and the fragment.
pub fn fixture_corpus() -> (tempfile::TempDir, stagegraph::CorpusLayout) {
    let dir = tempfile::tempdir().unwrap();
    let layout = stagegraph::CorpusLayout::new(dir.path());
    std::fs::create_dir_all(layout.rawdata()).unwrap();
    std::fs::write(layout.rawdata().join("fig6.toy"), FIG6).unwrap();
    std::fs::write(
        layout
            .rawdata()
            .join("romeo-and-juliet_TEIsimple_FolgerShakespeare.xml"),
        ROMEO_FRAGMENT,
    )
    .unwrap();
    (dir, layout)
}
