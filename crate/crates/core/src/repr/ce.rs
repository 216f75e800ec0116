//! Clique expansions: character co-occurrence multigraphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::model::CharacterId;
use crate::repr::hg::Hypergraph;
use crate::repr::units::TextUnitId;

/// One co-occurrence of a character pair in one text unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeEdge {
    /// `node1 < node2`.
    pub node1: CharacterId,
    pub node2: CharacterId,
    /// Number of earlier edges between the same pair.
    pub key: u32,
    pub unit: TextUnitId,
    pub n_tokens: u64,
    pub n_lines: u64,
    pub edge_index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountEdge {
    pub node1: CharacterId,
    pub node2: CharacterId,
    pub count: u32,
    pub n_tokens: u64,
    pub n_lines: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueExpansion {
    pub nodes: Vec<CharacterId>,
    pub edges: Vec<CeEdge>,
}

/// Expands every hyperedge into the pairs of its members, in unit order and
/// then pair order.
pub fn clique_expansion(hg: &Hypergraph) -> CliqueExpansion {
    let mut seen: HashMap<(CharacterId, CharacterId), u32> = HashMap::new();
    let mut edges = Vec::new();
    for he in &hg.edges {
        let members: Vec<&CharacterId> = he.members.iter().collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let pair = ((*a).clone(), (*b).clone());
                let key = seen.entry(pair).or_insert(0);
                edges.push(CeEdge {
                    node1: (*a).clone(),
                    node2: (*b).clone(),
                    key: *key,
                    unit: he.unit,
                    n_tokens: he.n_tokens,
                    n_lines: he.n_lines,
                    edge_index: he.index,
                });
                *key += 1;
            }
        }
    }
    CliqueExpansion {
        nodes: hg.node_ids().cloned().collect(),
        edges,
    }
}

/// Collapses multi-edges into one count-weighted edge per pair, sorted by pair.
pub fn collapse_multigraph(edges: &[CeEdge]) -> Vec<CountEdge> {
    let mut acc: BTreeMap<(&CharacterId, &CharacterId), CountEdge> = BTreeMap::new();
    for e in edges {
        let entry = acc.entry((&e.node1, &e.node2)).or_insert_with(|| CountEdge {
            node1: e.node1.clone(),
            node2: e.node2.clone(),
            count: 0,
            n_tokens: 0,
            n_lines: 0,
        });
        entry.count += 1;
        entry.n_tokens += e.n_tokens;
        entry.n_lines += e.n_lines;
    }
    acc.into_values().collect()
}

/// Binary view: the set of adjacent pairs.
pub fn simple_edges(edges: &[CeEdge]) -> BTreeSet<(CharacterId, CharacterId)> {
    edges.iter().map(|e| (e.node1.clone(), e.node2.clone())).collect()
}
