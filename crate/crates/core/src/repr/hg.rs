//! Hypergraphs with edge-specific node weights, and directed speech-act
//! hyperedges.

use std::collections::BTreeMap;

use crate::model::{CharacterId, CharacterSet, Setting};
use crate::repr::units::{units, Granularity, TextUnitId};

/// Spoken and heard volume, as lines and tokens.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Weights {
    pub n_tokens_onstage: u64,
    pub n_tokens_speaker: u64,
    pub n_lines_onstage: u64,
    pub n_lines_speaker: u64,
}

impl Weights {
    fn add_setting(&mut self, s: &Setting, speaking: bool) {
        self.n_tokens_onstage += s.n_tokens;
        self.n_lines_onstage += s.n_lines;
        if speaking {
            self.n_tokens_speaker += s.n_tokens;
            self.n_lines_speaker += s.n_lines;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeWeights {
    pub id: CharacterId,
    pub weights: Weights,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperEdge {
    pub unit: TextUnitId,
    /// 1-based position of the edge in play order.
    pub index: u32,
    pub members: CharacterSet,
    pub n_tokens: u64,
    pub n_lines: u64,
    /// Per-member weights within this edge, sorted by member.
    pub member_weights: Vec<NodeWeights>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub granularity: Granularity,
    /// Sorted by identifier, with weights over the whole play.
    pub nodes: Vec<NodeWeights>,
    pub edges: Vec<HyperEdge>,
}

impl Hypergraph {
    pub fn node_ids(&self) -> impl Iterator<Item = &CharacterId> + '_ {
        self.nodes.iter().map(|n| &n.id)
    }
}

fn accumulate<'a>(settings: impl IntoIterator<Item = &'a Setting>) -> BTreeMap<CharacterId, Weights> {
    let mut acc: BTreeMap<CharacterId, Weights> = BTreeMap::new();
    for s in settings {
        for c in &s.onstage {
            acc.entry(c.clone()).or_default().add_setting(s, s.speaker.contains(c));
        }
        // speakers are on stage in well-formed input; keep them regardless
        for c in s.speaker.difference(&s.onstage) {
            let w = acc.entry(c.clone()).or_default();
            w.n_tokens_speaker += s.n_tokens;
            w.n_lines_speaker += s.n_lines;
        }
    }
    acc
}

fn to_nodes(acc: BTreeMap<CharacterId, Weights>) -> Vec<NodeWeights> {
    acc.into_iter()
        .map(|(id, weights)| NodeWeights { id, weights })
        .collect()
}

/// Global node weights over all settings.
pub fn node_weights(settings: &[Setting]) -> Vec<NodeWeights> {
    to_nodes(accumulate(settings))
}

/// One hyperedge per speech-bearing scene or stage group.
pub fn build_hg(settings: &[Setting], granularity: Granularity) -> Hypergraph {
    let edges = units(settings, granularity)
        .into_iter()
        .map(|unit| {
            let mut members = CharacterSet::new();
            for s in unit.settings {
                members.union_with(&s.onstage);
                members.union_with(&s.speaker);
            }
            HyperEdge {
                unit: unit.id,
                index: unit.index,
                members,
                n_tokens: unit.n_tokens(),
                n_lines: unit.n_lines(),
                member_weights: to_nodes(accumulate(unit.settings)),
            }
        })
        .collect();
    Hypergraph {
        granularity,
        nodes: node_weights(settings),
        edges,
    }
}

/// A directed hyperedge from the speakers to everyone on stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeechHyperEdge {
    pub act: u32,
    pub scene: u32,
    pub stagegroup: u32,
    pub setting: u32,
    pub speaker: CharacterSet,
    pub onstage: CharacterSet,
    pub n_tokens: u64,
    pub n_lines: u64,
}

impl SpeechHyperEdge {
    /// Characters who hear but do not speak.
    pub fn listeners(&self) -> impl Iterator<Item = &CharacterId> + '_ {
        self.onstage.difference(&self.speaker)
    }
}

/// One directed hyperedge per setting.
pub fn build_hg_speech_multi(settings: &[Setting]) -> Vec<SpeechHyperEdge> {
    settings
        .iter()
        .map(|s| SpeechHyperEdge {
            act: s.act,
            scene: s.scene,
            stagegroup: s.stagegroup,
            setting: s.setting,
            speaker: s.speaker.clone(),
            onstage: s.onstage.clone(),
            n_tokens: s.n_tokens,
            n_lines: s.n_lines,
        })
        .collect()
}

/// Merges consecutive hyperedges with equal speakers and audience within a
/// scene, summing their weights. Identifiers are those of the first edge.
pub fn aggregate_hg_speech(edges: &[SpeechHyperEdge]) -> Vec<SpeechHyperEdge> {
    let mut out: Vec<SpeechHyperEdge> = Vec::new();
    for e in edges {
        match out.last_mut() {
            Some(last)
                if last.act == e.act
                    && last.scene == e.scene
                    && last.speaker == e.speaker
                    && last.onstage == e.onstage =>
            {
                last.n_tokens += e.n_tokens;
                last.n_lines += e.n_lines;
            }
            _ => out.push(e.clone()),
        }
    }
    out
}
