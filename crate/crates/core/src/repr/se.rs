//! Star expansions: bipartite graphs between characters and text units.

use std::collections::HashMap;
use std::fmt;

use crate::model::{CharacterId, Setting};
use crate::repr::hg::Hypergraph;
use crate::repr::units::{units, Granularity, TextUnitId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeNode {
    Character(CharacterId),
    TextUnit(TextUnitId),
}

impl SeNode {
    pub fn node_type(&self) -> &'static str {
        match self {
            SeNode::Character(_) => "character",
            SeNode::TextUnit(_) => "text_unit",
        }
    }
}

impl fmt::Display for SeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeNode::Character(c) => write!(f, "{c}"),
            SeNode::TextUnit(u) => write!(f, "{u}"),
        }
    }
}

/// Occurrence of a character in a text unit, weighted by what the character
/// said there (possibly nothing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeEdge {
    pub character: CharacterId,
    pub unit: TextUnitId,
    pub n_lines: u64,
    pub n_tokens: u64,
    pub edge_index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarExpansion {
    /// Characters (sorted) followed by text units (play order).
    pub nodes: Vec<SeNode>,
    pub edges: Vec<SeEdge>,
}

impl StarExpansion {
    pub fn character_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, SeNode::Character(_))).count()
    }
}

fn star_nodes(hg: &Hypergraph, unit_ids: impl Iterator<Item = TextUnitId>) -> Vec<SeNode> {
    hg.node_ids()
        .cloned()
        .map(SeNode::Character)
        .chain(unit_ids.map(SeNode::TextUnit))
        .collect()
}

/// Star expansion of a scene- or group-level hypergraph.
pub fn star_expansion(hg: &Hypergraph) -> StarExpansion {
    let mut edges = Vec::new();
    for he in &hg.edges {
        for m in &he.member_weights {
            edges.push(SeEdge {
                character: m.id.clone(),
                unit: he.unit,
                n_lines: m.weights.n_lines_speaker,
                n_tokens: m.weights.n_tokens_speaker,
                edge_index: he.index,
            });
        }
    }
    StarExpansion {
        nodes: star_nodes(hg, hg.edges.iter().map(|e| e.unit)),
        edges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeType {
    /// Speaker to text unit.
    Active,
    /// Text unit to listener.
    Passive,
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeType::Active => "active",
            EdgeType::Passive => "passive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedEdge {
    pub character: CharacterId,
    pub unit: TextUnitId,
    pub edge_type: EdgeType,
    /// Number of earlier edges with the same source and target.
    pub key: u32,
    pub n_lines: u64,
    pub n_tokens: u64,
    /// The setting this edge stems from.
    pub edge_index: u32,
}

impl DirectedEdge {
    pub fn source(&self) -> SeNode {
        match self.edge_type {
            EdgeType::Active => SeNode::Character(self.character.clone()),
            EdgeType::Passive => SeNode::TextUnit(self.unit),
        }
    }

    pub fn target(&self) -> SeNode {
        match self.edge_type {
            EdgeType::Active => SeNode::TextUnit(self.unit),
            EdgeType::Passive => SeNode::Character(self.character.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeechStar {
    pub nodes: Vec<SeNode>,
    pub edges: Vec<DirectedEdge>,
}

/// Speech-act star expansion with group-level unit nodes: per setting, an
/// active edge for each speaker and a passive edge for each listener.
pub fn build_se_speech(settings: &[Setting], group_hg: &Hypergraph) -> SpeechStar {
    let mut keys: HashMap<(CharacterId, TextUnitId, EdgeType), u32> = HashMap::new();
    let mut edges = Vec::new();
    let group_units = units(settings, Granularity::Group);
    for unit in &group_units {
        for s in unit.settings {
            let active = s.speaker.iter().map(|c| (c, EdgeType::Active));
            let passive = s.listeners().map(|c| (c, EdgeType::Passive));
            // interleave: each speaker then the audience
            for (c, edge_type) in active.chain(passive) {
                let key = keys.entry((c.clone(), unit.id, edge_type)).or_insert(0);
                edges.push(DirectedEdge {
                    character: c.clone(),
                    unit: unit.id,
                    edge_type,
                    key: *key,
                    n_lines: s.n_lines,
                    n_tokens: s.n_tokens,
                    edge_index: s.setting,
                });
                *key += 1;
            }
        }
    }
    SpeechStar {
        nodes: star_nodes(group_hg, group_units.iter().map(|u| u.id)),
        edges,
    }
}

/// Sums multi-edges with equal (source, target, type); keeps first-seen order.
pub fn aggregate_se_speech(edges: &[DirectedEdge]) -> Vec<DirectedEdge> {
    let mut index: HashMap<(CharacterId, TextUnitId, EdgeType), usize> = HashMap::new();
    let mut out: Vec<DirectedEdge> = Vec::new();
    for e in edges {
        match index.get(&(e.character.clone(), e.unit, e.edge_type)) {
            Some(&i) => {
                out[i].n_lines += e.n_lines;
                out[i].n_tokens += e.n_tokens;
            }
            None => {
                index.insert((e.character.clone(), e.unit, e.edge_type), out.len());
                out.push(DirectedEdge { key: 0, ..e.clone() });
            }
        }
    }
    out
}
