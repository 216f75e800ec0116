//! Graph and hypergraph representations built from a play's settings.

pub mod ce;
pub mod descriptor;
pub mod dot;
pub mod files;
pub mod hg;
pub mod se;
pub mod units;

pub use ce::{clique_expansion, collapse_multigraph, CeEdge, CliqueExpansion, CountEdge};
pub use descriptor::{
    Aggregation, Expressivity, Model, ReprDescriptor, ALL_REPRESENTATIONS, CONVENIENCE_REPRESENTATIONS,
    RANKED_REPRESENTATIONS,
};
pub use hg::{build_hg, HyperEdge, Hypergraph, NodeWeights, SpeechHyperEdge, Weights};
pub use se::{build_se_speech, star_expansion, DirectedEdge, EdgeType, SeEdge, SeNode, StarExpansion};
pub use units::{Granularity, TextUnitId};

use crate::model::{CharacterId, Setting};

/// Every representation of one play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayGraphs {
    pub hg_scene: Hypergraph,
    pub hg_group: Hypergraph,
    pub hg_speech_mwd: Vec<SpeechHyperEdge>,
    pub hg_speech_wd: Vec<SpeechHyperEdge>,
    pub ce_scene: CliqueExpansion,
    pub ce_group: CliqueExpansion,
    pub se_scene: StarExpansion,
    pub se_group: StarExpansion,
    pub se_speech_mwd: se::SpeechStar,
    pub se_speech_wd: Vec<DirectedEdge>,
}

impl PlayGraphs {
    pub fn build(settings: &[Setting]) -> Self {
        let hg_scene = build_hg(settings, Granularity::Scene);
        let hg_group = build_hg(settings, Granularity::Group);
        let hg_speech_mwd = hg::build_hg_speech_multi(settings);
        let hg_speech_wd = hg::aggregate_hg_speech(&hg_speech_mwd);
        let se_speech_mwd = build_se_speech(settings, &hg_group);
        let se_speech_wd = se::aggregate_se_speech(&se_speech_mwd.edges);
        PlayGraphs {
            ce_scene: clique_expansion(&hg_scene),
            ce_group: clique_expansion(&hg_group),
            se_scene: star_expansion(&hg_scene),
            se_group: star_expansion(&hg_group),
            hg_scene,
            hg_group,
            hg_speech_mwd,
            hg_speech_wd,
            se_speech_mwd,
            se_speech_wd,
        }
    }

    /// Character node set shared by all representations.
    pub fn characters(&self) -> Vec<CharacterId> {
        self.hg_group.node_ids().cloned().collect()
    }

    pub fn hypergraph(&self, granularity: Granularity) -> &Hypergraph {
        match granularity {
            Granularity::Scene => &self.hg_scene,
            Granularity::Group => &self.hg_group,
        }
    }

    pub fn clique(&self, granularity: Granularity) -> &CliqueExpansion {
        match granularity {
            Granularity::Scene => &self.ce_scene,
            Granularity::Group => &self.ce_group,
        }
    }

    pub fn star(&self, granularity: Granularity) -> &StarExpansion {
        match granularity {
            Granularity::Scene => &self.se_scene,
            Granularity::Group => &self.se_group,
        }
    }
}
