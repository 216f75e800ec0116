//! Play identifiers and play types.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::Table;

pub const PLAYTYPE_COLUMNS: [&str; 2] = ["play_name", "play_type"];

/// Suffix of the file names in the Folger TEI Simple archive.
pub const TEI_FILE_SUFFIX: &str = "_TEIsimple_FolgerShakespeare.xml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlayType {
    Comedy,
    History,
    Tragedy,
}

impl fmt::Display for PlayType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayType::Comedy => "comedy",
            PlayType::History => "history",
            PlayType::Tragedy => "tragedy",
        })
    }
}

impl FromStr for PlayType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "comedy" => Ok(PlayType::Comedy),
            "history" => Ok(PlayType::History),
            "tragedy" => Ok(PlayType::Tragedy),
            other => Err(Error::UnknownPlayType(other.to_string())),
        }
    }
}

use PlayType::*;

/// The First Folio classification of the 37 plays in the Folger corpus.
pub const FOLGER_PLAY_TYPES: [(&str, PlayType); 37] = [
    ("a-midsummer-nights-dream", Comedy),
    ("alls-well-that-ends-well", Comedy),
    ("antony-and-cleopatra", Tragedy),
    ("as-you-like-it", Comedy),
    ("coriolanus", Tragedy),
    ("cymbeline", Comedy),
    ("hamlet", Tragedy),
    ("henry-iv-part-1", History),
    ("henry-iv-part-2", History),
    ("henry-v", History),
    ("henry-vi-part-1", History),
    ("henry-vi-part-2", History),
    ("henry-vi-part-3", History),
    ("henry-viii", History),
    ("julius-caesar", Tragedy),
    ("king-john", History),
    ("king-lear", Tragedy),
    ("loves-labors-lost", Comedy),
    ("macbeth", Tragedy),
    ("measure-for-measure", Comedy),
    ("much-ado-about-nothing", Comedy),
    ("othello", Tragedy),
    ("pericles", Comedy),
    ("richard-ii", History),
    ("richard-iii", History),
    ("romeo-and-juliet", Tragedy),
    ("the-comedy-of-errors", Comedy),
    ("the-merchant-of-venice", Comedy),
    ("the-merry-wives-of-windsor", Comedy),
    ("the-taming-of-the-shrew", Comedy),
    ("the-tempest", Comedy),
    ("the-two-gentlemen-of-verona", Comedy),
    ("the-winters-tale", Comedy),
    ("timon-of-athens", Tragedy),
    ("titus-andronicus", Tragedy),
    ("troilus-and-cressida", Comedy),
    ("twelfth-night", Comedy),
];

pub const PLAYTYPE_PROVENANCE: &str =
    "play types follow the First Folio grouping into comedies, histories and tragedies";

pub fn folger_play_types() -> BTreeMap<String, PlayType> {
    FOLGER_PLAY_TYPES
        .iter()
        .map(|(name, t)| (name.to_string(), *t))
        .collect()
}

/// Play name for a raw file name: the Folger suffix is stripped, otherwise
/// the file stem is used.
pub fn play_name_from_file(file_name: &str) -> String {
    if let Some(stem) = file_name.strip_suffix(TEI_FILE_SUFFIX) {
        return stem.to_string();
    }
    match file_name.rsplit_once('.') {
        Some((stem, _)) if !stem.is_empty() => stem.to_string(),
        _ => file_name.to_string(),
    }
}

pub fn playtypes_table(types: &BTreeMap<String, PlayType>) -> Table {
    let mut t = Table::new(&PLAYTYPE_COLUMNS);
    t.comments.push(PLAYTYPE_PROVENANCE.to_string());
    for (name, ty) in types {
        t.push(vec![name.clone(), ty.to_string()]);
    }
    t
}

pub fn playtypes_from_table(table: &Table, path: &str) -> Result<BTreeMap<String, PlayType>> {
    table.expect_columns(&PLAYTYPE_COLUMNS, path)?;
    table.rows.iter().map(|r| Ok((r[0].clone(), r[1].parse()?))).collect()
}
