//! Character interaction graphs and hypergraphs from dramatic texts.
//!
//! The pipeline turns TEI Simple play encodings into speech-act tables,
//! builds clique expansions, star expansions and hypergraphs at several
//! granularities, and compares character rankings across them.

pub mod aggregate;
pub mod analysis;
pub mod error;
pub mod fetch;
pub mod metadata;
pub mod model;
pub mod pipeline;
pub mod repr;
pub mod table;
pub mod tei;
pub mod toy;

pub use aggregate::aggregate_settings;
pub use analysis::{CardinalityFilter, CorrMatrix, DegreeWeight, FilterMode, ProminenceSeries, RankTable};
pub use error::{Error, Result};
pub use metadata::PlayType;
pub use model::{CharacterId, CharacterSet, Setting};
pub use pipeline::{CorpusLayout, PipelineConfig, PlaySelection, RunReport};
pub use repr::{Hypergraph, PlayGraphs, ReprDescriptor};
pub use table::Table;
pub use tei::{CastEntry, FlushPolicy, RawEvent};
pub use toy::{parse_toy, toy_to_settings, ToyScript};
