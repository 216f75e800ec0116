//! The per-play graphdata files: nineteen node and edge lists.

use crate::model::CharacterId;
use crate::repr::ce::{collapse_multigraph, CliqueExpansion};
use crate::repr::hg::{Hypergraph, NodeWeights, SpeechHyperEdge};
use crate::repr::se::{DirectedEdge, SeNode, StarExpansion};
use crate::repr::units::Granularity;
use crate::repr::PlayGraphs;
use crate::table::Table;

/// File name suffixes, in the order they are emitted.
pub const GRAPH_FILE_KINDS: [&str; 19] = [
    "ce-group-mw.edges",
    "ce-group-w.edges",
    "ce-scene-mw.edges",
    "ce-scene-w.edges",
    "ce.nodes",
    "se-group-w.edges",
    "se-group.nodes",
    "se-scene-w.edges",
    "se-scene.nodes",
    "se-speech-mwd.edges",
    "se-speech-wd.edges",
    "se-speech.nodes",
    "hg-group-mw.edges",
    "hg-group-mw.node-weights",
    "hg-scene-mw.edges",
    "hg-scene-mw.node-weights",
    "hg-speech-mwd.edges",
    "hg-speech-wd.edges",
    "hg.nodes",
];

pub fn graph_file_name(play: &str, kind: &str) -> String {
    format!("{play}_{kind}.csv")
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

fn ce_nodes(ce: &CliqueExpansion) -> Table {
    let mut t = Table::new(&["node"]);
    for n in &ce.nodes {
        t.push(vec![n.reference()]);
    }
    t
}

fn ce_multi_edges(ce: &CliqueExpansion, granularity: Granularity) -> Table {
    let mut t = match granularity {
        Granularity::Group => Table::new(&[
            "node1",
            "node2",
            "key",
            "act",
            "scene",
            "stagegroup",
            "n_tokens",
            "n_lines",
            "edge_index",
        ]),
        Granularity::Scene => Table::new(&[
            "node1",
            "node2",
            "key",
            "act",
            "scene",
            "n_tokens",
            "n_lines",
            "edge_index",
        ]),
    };
    for e in &ce.edges {
        let mut row = vec![
            e.node1.reference(),
            e.node2.reference(),
            s(e.key),
            s(e.unit.act),
            s(e.unit.scene),
        ];
        if granularity == Granularity::Group {
            row.push(s(e.unit.stagegroup.unwrap_or_default()));
        }
        row.extend([s(e.n_tokens), s(e.n_lines), s(e.edge_index)]);
        t.push(row);
    }
    t
}

fn ce_count_edges(ce: &CliqueExpansion) -> Table {
    let mut t = Table::new(&["node1", "node2", "count", "n_tokens", "n_lines"]);
    for e in collapse_multigraph(&ce.edges) {
        t.push(vec![
            e.node1.reference(),
            e.node2.reference(),
            s(e.count),
            s(e.n_tokens),
            s(e.n_lines),
        ]);
    }
    t
}

fn se_nodes(nodes: &[SeNode]) -> Table {
    let mut t = Table::new(&["node", "node_type"]);
    for n in nodes {
        t.push(vec![n.to_string(), n.node_type().to_string()]);
    }
    t
}

fn se_edges(se: &StarExpansion) -> Table {
    let mut t = Table::new(&["node1", "node2", "n_lines", "n_tokens", "edge_index"]);
    for e in &se.edges {
        t.push(vec![
            e.character.reference(),
            e.unit.to_string(),
            s(e.n_lines),
            s(e.n_tokens),
            s(e.edge_index),
        ]);
    }
    t
}

fn se_speech_multi(edges: &[DirectedEdge]) -> Table {
    let mut t = Table::new(&[
        "source",
        "target",
        "key",
        "n_lines",
        "n_tokens",
        "edge_index",
        "edge_type",
    ]);
    for e in edges {
        t.push(vec![
            e.source().to_string(),
            e.target().to_string(),
            s(e.key),
            s(e.n_lines),
            s(e.n_tokens),
            s(e.edge_index),
            s(e.edge_type),
        ]);
    }
    t
}

fn se_speech_weighted(edges: &[DirectedEdge]) -> Table {
    let mut t = Table::new(&["source", "target", "n_lines", "n_tokens", "edge_type"]);
    for e in edges {
        t.push(vec![
            e.source().to_string(),
            e.target().to_string(),
            s(e.n_lines),
            s(e.n_tokens),
            s(e.edge_type),
        ]);
    }
    t
}

fn hg_edges(hg: &Hypergraph) -> Table {
    let group = hg.granularity == Granularity::Group;
    let mut t = if group {
        Table::new(&["act", "scene", "stagegroup", "onstage", "n_tokens", "n_lines"])
    } else {
        Table::new(&["act", "scene", "onstage", "n_tokens", "n_lines"])
    };
    for e in &hg.edges {
        let mut row = vec![s(e.unit.act), s(e.unit.scene)];
        if group {
            row.push(s(e.unit.stagegroup.unwrap_or_default()));
        }
        row.extend([e.members.to_field(), s(e.n_tokens), s(e.n_lines)]);
        t.push(row);
    }
    t
}

fn hg_node_weights(hg: &Hypergraph) -> Table {
    let group = hg.granularity == Granularity::Group;
    let tail = [
        "node",
        "n_tokens_speaker",
        "n_lines_speaker",
        "n_tokens_onstage",
        "n_lines_onstage",
    ];
    let mut columns = vec!["act", "scene"];
    if group {
        columns.push("stagegroup");
    }
    columns.extend(tail);
    let mut t = Table::new(&columns);
    for e in &hg.edges {
        for m in &e.member_weights {
            let mut row = vec![s(e.unit.act), s(e.unit.scene)];
            if group {
                row.push(s(e.unit.stagegroup.unwrap_or_default()));
            }
            let w = m.weights;
            row.extend([
                m.id.reference(),
                s(w.n_tokens_speaker),
                s(w.n_lines_speaker),
                s(w.n_tokens_onstage),
                s(w.n_lines_onstage),
            ]);
            t.push(row);
        }
    }
    t
}

fn hg_speech(edges: &[SpeechHyperEdge]) -> Table {
    let mut t = Table::new(&[
        "act",
        "scene",
        "stagegroup",
        "setting",
        "speaker",
        "onstage",
        "n_tokens",
        "n_lines",
    ]);
    for e in edges {
        t.push(vec![
            s(e.act),
            s(e.scene),
            s(e.stagegroup),
            s(e.setting),
            e.speaker.to_field(),
            e.onstage.to_field(),
            s(e.n_tokens),
            s(e.n_lines),
        ]);
    }
    t
}

fn hg_nodes(nodes: &[NodeWeights]) -> Table {
    let mut t = Table::new(&[
        "node",
        "n_tokens_onstage",
        "n_tokens_speaker",
        "n_lines_onstage",
        "n_lines_speaker",
    ]);
    for n in nodes {
        let w = n.weights;
        t.push(vec![
            CharacterId::reference(&n.id),
            s(w.n_tokens_onstage),
            s(w.n_tokens_speaker),
            s(w.n_lines_onstage),
            s(w.n_lines_speaker),
        ]);
    }
    t
}

/// All graphdata tables of a play, keyed by file kind, in
/// [`GRAPH_FILE_KINDS`] order.
pub fn graph_tables(graphs: &PlayGraphs) -> Vec<(&'static str, Table)> {
    let tables = [
        ce_multi_edges(&graphs.ce_group, Granularity::Group),
        ce_count_edges(&graphs.ce_group),
        ce_multi_edges(&graphs.ce_scene, Granularity::Scene),
        ce_count_edges(&graphs.ce_scene),
        ce_nodes(&graphs.ce_group),
        se_edges(&graphs.se_group),
        se_nodes(&graphs.se_group.nodes),
        se_edges(&graphs.se_scene),
        se_nodes(&graphs.se_scene.nodes),
        se_speech_multi(&graphs.se_speech_mwd.edges),
        se_speech_weighted(&graphs.se_speech_wd),
        se_nodes(&graphs.se_speech_mwd.nodes),
        hg_edges(&graphs.hg_group),
        hg_node_weights(&graphs.hg_group),
        hg_edges(&graphs.hg_scene),
        hg_node_weights(&graphs.hg_scene),
        hg_speech(&graphs.hg_speech_mwd),
        hg_speech(&graphs.hg_speech_wd),
        hg_nodes(&graphs.hg_group.nodes),
    ];
    GRAPH_FILE_KINDS.into_iter().zip(tables).collect()
}
