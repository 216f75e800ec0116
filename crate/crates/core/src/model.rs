//! Shared domain types: character identifiers, character sets and settings.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

/// Corpus-wide character identifier, stored without the leading `#`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterId(String);

impl CharacterId {
    pub fn new(id: impl Into<String>) -> Result<Self, Error> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) || id.starts_with('#') {
            return Err(Error::InvalidCharacterId(id));
        }
        Ok(CharacterId(id))
    }

    /// Parses a reference of the form `#Romeo_Rom`. A missing `#` is tolerated.
    pub fn from_reference(reference: &str) -> Result<Self, Error> {
        Self::new(reference.strip_prefix('#').unwrap_or(reference))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The `#`-prefixed reference form used in every table except the cast list.
    pub fn reference(&self) -> String {
        format!("#{}", self.0)
    }
}

impl fmt::Display for CharacterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Sorted set of characters (byte order of identifiers).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterSet(BTreeSet<CharacterId>);

impl CharacterSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: CharacterId) -> bool {
        self.0.insert(id)
    }

    pub fn remove(&mut self, id: &CharacterId) -> bool {
        self.0.remove(id)
    }

    pub fn contains(&self, id: &CharacterId) -> bool {
        self.0.contains(id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn clear(&mut self) {
        self.0.clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CharacterId> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &CharacterSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union_with(&mut self, other: &CharacterSet) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn difference<'a>(&'a self, other: &'a CharacterSet) -> impl Iterator<Item = &'a CharacterId> + 'a {
        self.0.difference(&other.0)
    }

    /// Whitespace-separated `#`-prefixed references, empty for the empty set.
    pub fn to_field(&self) -> String {
        self.0.iter().map(CharacterId::reference).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_field(field: &str) -> Result<Self, Error> {
        field.split_whitespace().map(CharacterId::from_reference).collect()
    }
}

impl FromIterator<CharacterId> for CharacterSet {
    fn from_iter<I: IntoIterator<Item = CharacterId>>(iter: I) -> Self {
        CharacterSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CharacterSet {
    type Item = &'a CharacterId;
    type IntoIter = std::collections::btree_set::Iter<'a, CharacterId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A maximal stretch of speech with constant on-stage set and speaker set.
///
/// This is the row unit of `{play}.agg.csv` and the input to every graph
/// builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Setting {
    pub act: u32,
    pub scene: u32,
    /// Consecutive stage group number, starting at 1.
    pub stagegroup: u32,
    pub stagegroup_raw: u32,
    /// Consecutive setting number, starting at 1.
    pub setting: u32,
    pub onstage: CharacterSet,
    pub speaker: CharacterSet,
    pub n_lines: u64,
    pub n_tokens: u64,
}

impl Setting {
    /// Characters on stage who are not speaking.
    pub fn listeners(&self) -> impl Iterator<Item = &CharacterId> + '_ {
        self.onstage.difference(&self.speaker)
    }
}
