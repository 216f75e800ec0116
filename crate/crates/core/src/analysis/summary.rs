use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::metadata::PlayType;
use crate::model::Setting;
use crate::table::Table;

pub const SUMMARY_COLUMNS: [&str; 4] = ["play", "play_type", "n_lines", "n_speakers"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaySummary {
    pub play: String,
    pub play_type: PlayType,
    pub n_lines: u64,
    /// Characters occurring in any speaker set.
    pub n_speakers: usize,
}

/// Spoken lines and speaking characters per play, sorted by play name.
pub fn corpus_summary(
    plays: &BTreeMap<String, Vec<Setting>>,
    types: &BTreeMap<String, PlayType>,
) -> Result<Vec<PlaySummary>> {
    plays
        .iter()
        .map(|(play, settings)| {
            let play_type = *types.get(play).ok_or_else(|| Error::MissingPlayType(play.clone()))?;
            let speakers: BTreeSet<_> = settings.iter().flat_map(|s| s.speaker.iter()).collect();
            Ok(PlaySummary {
                play: play.clone(),
                play_type,
                n_lines: settings.iter().map(|s| s.n_lines).sum(),
                n_speakers: speakers.len(),
            })
        })
        .collect()
}

pub fn summary_table(rows: &[PlaySummary]) -> Table {
    let mut t = Table::new(&SUMMARY_COLUMNS);
    for r in rows {
        t.push(vec![
            r.play.clone(),
            r.play_type.to_string(),
            r.n_lines.to_string(),
            r.n_speakers.to_string(),
        ]);
    }
    t
}
