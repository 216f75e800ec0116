//! Graphviz export for drawing clique and star expansions.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::repr::ce::collapse_multigraph;
use crate::repr::descriptor::{Aggregation, Model, ReprDescriptor};
use crate::repr::se::SeNode;
use crate::repr::units::Granularity;
use crate::repr::PlayGraphs;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT for ce and se representations at scene or group level.
/// Multi-edge representations draw one line per edge; weighted ones label
/// edges with spoken lines.
pub fn to_dot(graphs: &PlayGraphs, descriptor: ReprDescriptor) -> Result<String> {
    let granularity = match descriptor.aggregation {
        Aggregation::Scene => Granularity::Scene,
        Aggregation::Group => Granularity::Group,
        Aggregation::Speech => return Err(Error::UnknownDescriptor(descriptor.to_string())),
    };
    let props = descriptor.properties();
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(&descriptor.to_string())).unwrap();
    match descriptor.model {
        Model::Ce => {
            let ce = graphs.clique(granularity);
            for n in &ce.nodes {
                writeln!(out, "  {};", quote(&n.reference())).unwrap();
            }
            if props.starts_with('m') {
                for e in &ce.edges {
                    let label = if props == "mw" {
                        format!(" [label={}]", e.n_lines)
                    } else {
                        String::new()
                    };
                    writeln!(
                        out,
                        "  {} -- {}{};",
                        quote(&e.node1.reference()),
                        quote(&e.node2.reference()),
                        label
                    )
                    .unwrap();
                }
            } else {
                for e in collapse_multigraph(&ce.edges) {
                    let label = if props == "w" {
                        format!(" [label={}]", e.count)
                    } else {
                        String::new()
                    };
                    writeln!(
                        out,
                        "  {} -- {}{};",
                        quote(&e.node1.reference()),
                        quote(&e.node2.reference()),
                        label
                    )
                    .unwrap();
                }
            }
        }
        Model::Se => {
            let se = graphs.star(granularity);
            for n in &se.nodes {
                let shape = match n {
                    SeNode::Character(_) => "ellipse",
                    SeNode::TextUnit(_) => "box",
                };
                writeln!(out, "  {} [shape={shape}];", quote(&n.to_string())).unwrap();
            }
            for e in &se.edges {
                let label = if props == "w" {
                    format!(" [label={}]", e.n_lines)
                } else {
                    String::new()
                };
                writeln!(
                    out,
                    "  {} -- {}{};",
                    quote(&e.character.reference()),
                    quote(&e.unit.to_string()),
                    label
                )
                .unwrap();
            }
        }
        Model::Hg => return Err(Error::UnknownDescriptor(descriptor.to_string())),
    }
    out.push_str("}\n");
    Ok(out)
}
