//! Degree rankings of characters under each representation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CharacterId;
use crate::repr::descriptor::{Aggregation, Expressivity, Model, ReprDescriptor};
use crate::repr::hg::Hypergraph;
use crate::repr::se::DirectedEdge;
use crate::repr::units::Granularity;
use crate::repr::{collapse_multigraph, PlayGraphs};
use crate::table::Table;

pub const RANKING_COLUMNS: [&str; 4] = ["character", "score", "rank", "fractional_rank"];

/// Which edge weight enters weighted degrees.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeWeight {
    #[default]
    Lines,
    Tokens,
}

impl DegreeWeight {
    fn pick(self, n_lines: u64, n_tokens: u64) -> f64 {
        match self {
            DegreeWeight::Lines => n_lines as f64,
            DegreeWeight::Tokens => n_tokens as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub character: CharacterId,
    pub score: f64,
    /// Ordinal rank, ties broken by identifier.
    pub rank: usize,
    /// Average rank over the tied block.
    pub fractional_rank: f64,
}

/// Characters in display order (ordinal rank ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub representation: ReprDescriptor,
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    /// Ranks by score, highest first.
    pub fn from_scores(representation: ReprDescriptor, scores: Vec<(CharacterId, f64)>) -> Self {
        let mut scores = scores;
        scores.sort_by(|(a, x), (b, y)| y.partial_cmp(x).unwrap_or(Ordering::Equal).then_with(|| a.cmp(b)));
        let mut entries = Vec::with_capacity(scores.len());
        let mut start = 0;
        while start < scores.len() {
            let mut end = start + 1;
            while end < scores.len() && scores[end].1 == scores[start].1 {
                end += 1;
            }
            // positions start+1 ..= end share their mean
            let fractional = (start + 1 + end) as f64 / 2.0;
            for (i, (character, score)) in scores[start..end].iter().enumerate() {
                entries.push(RankEntry {
                    character: character.clone(),
                    score: *score,
                    rank: start + i + 1,
                    fractional_rank: fractional,
                });
            }
            start = end;
        }
        RankTable {
            representation,
            entries,
        }
    }

    /// Ranking restricted to an allowlist, with ranks recomputed.
    pub fn restrict(&self, allow: &BTreeSet<CharacterId>) -> RankTable {
        let scores = self
            .entries
            .iter()
            .filter(|e| allow.contains(&e.character))
            .map(|e| (e.character.clone(), e.score))
            .collect();
        RankTable::from_scores(self.representation, scores)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, character: &CharacterId) -> Option<&RankEntry> {
        self.entries.iter().find(|e| &e.character == character)
    }

    pub fn scores(&self) -> BTreeMap<&CharacterId, f64> {
        self.entries.iter().map(|e| (&e.character, e.score)).collect()
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&RANKING_COLUMNS);
        for e in &self.entries {
            t.push(vec![
                e.character.reference(),
                e.score.to_string(),
                e.rank.to_string(),
                e.fractional_rank.to_string(),
            ]);
        }
        t
    }
}

fn zero_scores<'a>(ids: impl Iterator<Item = &'a CharacterId>) -> BTreeMap<CharacterId, f64> {
    ids.map(|c| (c.clone(), 0.0)).collect()
}

fn hg_degree(
    hg: &Hypergraph,
    weighted: bool,
    weight: DegreeWeight,
    keep: impl Fn(usize) -> bool,
) -> BTreeMap<CharacterId, f64> {
    let mut scores = zero_scores(hg.node_ids());
    for e in hg.edges.iter().filter(|e| keep(e.members.len())) {
        let w = if weighted {
            weight.pick(e.n_lines, e.n_tokens)
        } else {
            1.0
        };
        for m in e.members.iter() {
            *scores.get_mut(m).expect("member is a node") += w;
        }
    }
    scores
}

fn directed_degree(graphs: &PlayGraphs, edges: &[DirectedEdge], weight: DegreeWeight) -> BTreeMap<CharacterId, f64> {
    let mut scores = zero_scores(graphs.hg_group.node_ids());
    for e in edges {
        *scores.entry(e.character.clone()).or_default() += weight.pick(e.n_lines, e.n_tokens);
    }
    scores
}

/// Degree of every character under `descriptor`.
///
/// Clique expansions: distinct neighbours (b), incident edges (mb), summed
/// edge weights (mw), summed co-occurrence counts (w). Star expansions:
/// incident text units (b) and the character's own spoken volume (w); for
/// the speech-level star, weights over in- and out-edges. Hypergraphs:
/// incident hyperedges (mb) and their summed weights (mw).
pub fn degree_scores(
    graphs: &PlayGraphs,
    descriptor: ReprDescriptor,
    weight: DegreeWeight,
) -> Result<BTreeMap<CharacterId, f64>> {
    use Expressivity::*;
    if !descriptor.is_valid() {
        return Err(Error::UnknownDescriptor(descriptor.to_string()));
    }
    let granularity = match descriptor.aggregation {
        Aggregation::Scene => Some(Granularity::Scene),
        Aggregation::Group => Some(Granularity::Group),
        Aggregation::Speech => None,
    };
    let scores = match (descriptor.model, granularity, descriptor.expressivity) {
        (Model::Ce, Some(g), x) => {
            let ce = graphs.clique(g);
            let mut scores = zero_scores(ce.nodes.iter());
            match x {
                B | W => {
                    for e in collapse_multigraph(&ce.edges) {
                        let w = if x == B { 1.0 } else { e.count as f64 };
                        *scores.get_mut(&e.node1).unwrap() += w;
                        *scores.get_mut(&e.node2).unwrap() += w;
                    }
                }
                _ => {
                    for e in &ce.edges {
                        let w = if x == Mb {
                            1.0
                        } else {
                            weight.pick(e.n_lines, e.n_tokens)
                        };
                        *scores.get_mut(&e.node1).unwrap() += w;
                        *scores.get_mut(&e.node2).unwrap() += w;
                    }
                }
            }
            scores
        }
        (Model::Se, Some(g), x) => {
            let se = graphs.star(g);
            let mut scores = zero_scores(graphs.hypergraph(g).node_ids());
            for e in &se.edges {
                let w = if x == B {
                    1.0
                } else {
                    weight.pick(e.n_lines, e.n_tokens)
                };
                *scores.get_mut(&e.character).unwrap() += w;
            }
            scores
        }
        (Model::Se, None, Wd) => directed_degree(graphs, &graphs.se_speech_wd, weight),
        (Model::Se, None, _) => directed_degree(graphs, &graphs.se_speech_mwd.edges, weight),
        (Model::Hg, Some(g), x) => hg_degree(graphs.hypergraph(g), x == Mw, weight, |_| true),
        (Model::Hg, None, _) => return Err(Error::NoDegreeMode(descriptor.to_string())),
        (Model::Ce, None, _) => return Err(Error::UnknownDescriptor(descriptor.to_string())),
    };
    Ok(scores)
}

pub fn degree_ranking(graphs: &PlayGraphs, descriptor: ReprDescriptor, weight: DegreeWeight) -> Result<RankTable> {
    let scores = degree_scores(graphs, descriptor, weight)?;
    Ok(RankTable::from_scores(descriptor, scores.into_iter().collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMode {
    AtMost,
    AtLeast,
}

/// Keeps hyperedges by cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityFilter {
    pub threshold: usize,
    pub mode: FilterMode,
}

impl CardinalityFilter {
    pub fn new(threshold: usize, mode: FilterMode) -> Result<Self> {
        if threshold < 1 {
            return Err(Error::InvalidThreshold);
        }
        Ok(CardinalityFilter { threshold, mode })
    }

    pub fn admits(&self, cardinality: usize) -> bool {
        match self.mode {
            FilterMode::AtMost => cardinality <= self.threshold,
            FilterMode::AtLeast => cardinality >= self.threshold,
        }
    }
}

/// Weighted hypergraph degree counting only admitted hyperedges.
pub fn filtered_hg_ranking(hg: &Hypergraph, filter: CardinalityFilter, weight: DegreeWeight) -> RankTable {
    let scores = hg_degree(hg, true, weight, |c| filter.admits(c));
    let descriptor = ReprDescriptor {
        model: Model::Hg,
        aggregation: match hg.granularity {
            Granularity::Scene => Aggregation::Scene,
            Granularity::Group => Aggregation::Group,
        },
        expressivity: Expressivity::Mw,
    };
    RankTable::from_scores(descriptor, scores.into_iter().collect())
}
