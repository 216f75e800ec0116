//! TEI Simple ingestion: the cast list and the annotated raw event table.
//!
//! The body is walked in document order. Stage directions typed `entrance`
//! (or `entry`) and `exit` update the on-stage set from their `who`
//! attributes; every change of that set opens a new raw stage group.

use std::collections::{BTreeSet, HashSet};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::model::{CharacterId, CharacterSet};
use crate::table::{non_empty, opt, parse_num, Table};

pub const CAST_COLUMNS: &[&str] = &["xml:id", "corresp"];

pub const RAW_COLUMNS: &[&str] = &[
    "tag",
    "type",
    "n",
    "text",
    "xml:id",
    "who",
    "lemma",
    "ana",
    "part",
    "rendition",
    "prev",
    "act",
    "scene",
    "onstage",
    "stagegroup_raw",
    "speaker",
];

/// Tags that become rows of the raw table.
pub const DEFAULT_TAGS: &[&str] = &["sp", "p", "lb", "w", "pc", "c", "stage", "div", "milestone"];

/// How missing stage directions are compensated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FlushPolicy {
    /// Clear the stage at the start of every act or scene division.
    pub flush_on_scene_start: bool,
    /// Put a speaker on stage when they speak while absent.
    pub restore_speaker: bool,
}

impl FlushPolicy {
    /// Policy for TEI corpora.
    pub const TEI: FlushPolicy = FlushPolicy {
        flush_on_scene_start: true,
        restore_speaker: true,
    };

    /// Policy for inputs whose exits are explicit.
    pub const EXPLICIT: FlushPolicy = FlushPolicy {
        flush_on_scene_start: false,
        restore_speaker: false,
    };

    pub fn validate(self) -> Result<Self> {
        if self.flush_on_scene_start && !self.restore_speaker {
            return Err(Error::InvalidFlushPolicy);
        }
        Ok(self)
    }
}

impl Default for FlushPolicy {
    fn default() -> Self {
        FlushPolicy::TEI
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CastEntry {
    pub xml_id: CharacterId,
    /// Groups this cast item belongs to, usually zero or one.
    pub corresp: Vec<CharacterId>,
}

/// One retained descendant of `<body>`, with positional annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEvent {
    pub tag: String,
    pub type_attr: Option<String>,
    pub n: Option<String>,
    pub text: Option<String>,
    pub xml_id: Option<String>,
    /// `who` attribute in document order of first appearance.
    pub who: Option<Vec<CharacterId>>,
    pub lemma: Option<String>,
    pub ana: Option<String>,
    pub part: Option<String>,
    pub rendition: Option<String>,
    pub prev: Option<String>,
    pub act: u32,
    pub scene: u32,
    pub onstage: CharacterSet,
    pub stagegroup_raw: u32,
    pub speaker: CharacterSet,
}

impl RawEvent {
    /// A word spoken inside a speech.
    pub fn is_spoken_token(&self) -> bool {
        self.tag == "w" && !self.speaker.is_empty()
    }

    /// A line-begin milestone inside a speech.
    pub fn is_spoken_line(&self) -> bool {
        self.tag == "lb" && !self.speaker.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WarningKind {
    ExitOfAbsentCharacter,
    UnknownCharacter,
    MalformedReference,
    SpeechWithoutSpeaker,
}

/// A non-fatal irregularity in the stage directions or references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub kind: WarningKind,
    pub offset: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct ParsedBody {
    pub events: Vec<RawEvent>,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Debug, Clone)]
pub struct BodyOptions {
    pub policy: FlushPolicy,
    pub tags: BTreeSet<String>,
}

impl Default for BodyOptions {
    fn default() -> Self {
        BodyOptions {
            policy: FlushPolicy::TEI,
            tags: DEFAULT_TAGS.iter().map(|t| t.to_string()).collect(),
        }
    }
}

fn xml_error(reader: &Reader<&[u8]>, err: impl std::fmt::Display) -> Error {
    Error::Xml {
        offset: reader.error_position(),
        message: err.to_string(),
    }
}

struct Attrs {
    pairs: Vec<(String, String)>,
}

impl Attrs {
    fn read(start: &BytesStart<'_>, reader: &Reader<&[u8]>) -> Result<Attrs> {
        let mut pairs = Vec::new();
        for attr in start.attributes() {
            let attr = attr.map_err(|e| xml_error(reader, e))?;
            let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
            let value = attr.unescape_value().map_err(|e| xml_error(reader, e))?.into_owned();
            pairs.push((key, value));
        }
        Ok(Attrs { pairs })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn owned(&self, key: &str) -> Option<String> {
        self.get(key).map(str::to_string)
    }
}

fn tag_name(start: &BytesStart<'_>) -> String {
    String::from_utf8_lossy(start.local_name().as_ref()).into_owned()
}

/// Extracts every `<castItem>`, sorted by `xml:id`.
pub fn parse_cast(xml: &[u8]) -> Result<Vec<CastEntry>> {
    let mut reader = Reader::from_reader(xml);
    let mut entries = Vec::new();
    let mut depth = 0usize;
    loop {
        let event = reader.read_event().map_err(|e| xml_error(&reader, e))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                if matches!(event, Event::Start(_)) {
                    depth += 1;
                }
                if tag_name(e) != "castItem" {
                    continue;
                }
                let attrs = Attrs::read(e, &reader)?;
                let Some(id) = attrs.get("xml:id") else {
                    continue;
                };
                let xml_id = CharacterId::new(id)?;
                let corresp = attrs
                    .get("corresp")
                    .unwrap_or("")
                    .split_whitespace()
                    .map(CharacterId::from_reference)
                    .collect::<Result<Vec<_>>>()?;
                entries.push(CastEntry { xml_id, corresp });
            }
            Event::End(_) => depth = depth.saturating_sub(1),
            Event::Eof => break,
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Xml {
            offset: reader.buffer_position(),
            message: "unexpected end of document inside an element".into(),
        });
    }
    validate_cast(&mut entries)?;
    Ok(entries)
}

fn validate_cast(entries: &mut [CastEntry]) -> Result<()> {
    entries.sort_by(|a, b| a.xml_id.cmp(&b.xml_id));
    for pair in entries.windows(2) {
        if pair[0].xml_id == pair[1].xml_id {
            return Err(Error::DuplicateCastId(pair[0].xml_id.as_str().to_string()));
        }
    }
    let ids: HashSet<&CharacterId> = entries.iter().map(|e| &e.xml_id).collect();
    for entry in entries.iter() {
        for group in &entry.corresp {
            if !ids.contains(group) {
                return Err(Error::UnknownCastGroup {
                    item: entry.xml_id.as_str().to_string(),
                    group: group.as_str().to_string(),
                });
            }
        }
    }
    Ok(())
}

pub fn cast_table(cast: &[CastEntry]) -> Table {
    let mut table = Table::new(CAST_COLUMNS);
    for entry in cast {
        let corresp = entry
            .corresp
            .iter()
            .map(CharacterId::as_str)
            .collect::<Vec<_>>()
            .join(" ");
        table.push(vec![entry.xml_id.as_str().to_string(), corresp]);
    }
    table
}

#[derive(Debug)]
struct Frame {
    tag: String,
    row: Option<usize>,
    has_children: bool,
    text: String,
    div: Option<(Option<String>, Option<String>)>,
    opens_act: bool,
    opens_scene: bool,
    opens_speech: bool,
    suppressed: bool,
}

struct BodyWalker<'o> {
    options: &'o BodyOptions,
    cast: HashSet<CharacterId>,
    out: ParsedBody,
    stack: Vec<Frame>,
    body_depth: Option<usize>,
    act: Option<u32>,
    acts_seen: u32,
    scene: Option<u32>,
    scenes_in_act: u32,
    onstage: CharacterSet,
    stagegroup_raw: u32,
    speaker: Option<CharacterSet>,
    stage_depth: usize,
    suppress_depth: usize,
}

impl<'o> BodyWalker<'o> {
    fn new(options: &'o BodyOptions) -> Self {
        BodyWalker {
            options,
            cast: HashSet::new(),
            out: ParsedBody::default(),
            stack: Vec::new(),
            body_depth: None,
            act: None,
            acts_seen: 0,
            scene: None,
            scenes_in_act: 0,
            onstage: CharacterSet::new(),
            stagegroup_raw: 0,
            speaker: None,
            stage_depth: 0,
            suppress_depth: 0,
        }
    }

    fn warn(&mut self, kind: WarningKind, offset: u64, message: String) {
        log::debug!("offset {offset}: {message}");
        self.out.warnings.push(ParseWarning { kind, offset, message });
    }

    fn current_act(&self) -> u32 {
        match self.act {
            Some(a) => a,
            None if self.acts_seen == 0 => 0,
            None => 6,
        }
    }

    fn set_onstage(&mut self, next: CharacterSet) {
        if next != self.onstage {
            self.onstage = next;
            self.stagegroup_raw += 1;
        }
    }

    fn flush(&mut self) {
        if self.options.policy.flush_on_scene_start {
            self.set_onstage(CharacterSet::new());
        }
    }

    fn restore_speaker(&mut self) {
        if !self.options.policy.restore_speaker {
            return;
        }
        if let Some(speaker) = &self.speaker {
            if !speaker.is_subset(&self.onstage) {
                let mut next = self.onstage.clone();
                next.union_with(speaker);
                self.set_onstage(next);
            }
        }
    }

    fn parse_who(&mut self, raw: &str, offset: u64) -> Vec<CharacterId> {
        let mut out: Vec<CharacterId> = Vec::new();
        for token in raw.split_whitespace() {
            match CharacterId::from_reference(token) {
                Ok(id) => {
                    if !self.cast.is_empty() && !self.cast.contains(&id) {
                        self.warn(
                            WarningKind::UnknownCharacter,
                            offset,
                            format!("reference {id} is not in the cast list"),
                        );
                    }
                    if !out.contains(&id) {
                        out.push(id);
                    }
                }
                Err(_) => self.warn(
                    WarningKind::MalformedReference,
                    offset,
                    format!("malformed reference `{token}`"),
                ),
            }
        }
        out
    }

    fn apply_stage(&mut self, type_attr: Option<&str>, who: &[CharacterId], offset: u64) {
        let Some(kind) = type_attr else { return };
        let mut next = self.onstage.clone();
        for word in kind.split_whitespace() {
            match word {
                "entrance" | "entry" => {
                    for id in who {
                        next.insert(id.clone());
                    }
                }
                "exit" => {
                    for id in who {
                        if !next.remove(id) {
                            self.warn(
                                WarningKind::ExitOfAbsentCharacter,
                                offset,
                                format!("exit of {id}, who is not on stage"),
                            );
                        }
                    }
                }
                _ => {}
            }
        }
        self.set_onstage(next);
    }

    fn start(&mut self, e: &BytesStart<'_>, reader: &Reader<&[u8]>, empty: bool) -> Result<()> {
        let offset = reader.buffer_position();
        let tag = tag_name(e);
        if let Some(parent) = self.stack.last_mut() {
            parent.has_children = true;
        }
        let attrs = Attrs::read(e, reader)?;

        if tag == "castItem" {
            if let Some(id) = attrs.get("xml:id").and_then(|i| CharacterId::new(i).ok()) {
                self.cast.insert(id);
            }
        }

        let mut frame = Frame {
            tag: tag.clone(),
            row: None,
            has_children: false,
            text: String::new(),
            div: None,
            opens_act: false,
            opens_scene: false,
            opens_speech: false,
            suppressed: false,
        };

        if self.body_depth.is_none() {
            if tag == "body" && !empty {
                self.body_depth = Some(self.stack.len() + 1);
            }
            if !empty {
                self.stack.push(frame);
            }
            return Ok(());
        }

        let type_attr = attrs.owned("type");
        let n_attr = attrs.owned("n");
        let mut redundant = false;
        let mut who = None;

        match tag.as_str() {
            "div" => {
                let parent_div = self.stack.iter().rev().find_map(|f| f.div.clone());
                redundant = (type_attr.is_none() && n_attr.is_none())
                    || parent_div.as_ref() == Some(&(type_attr.clone(), n_attr.clone()));
                match type_attr.as_deref() {
                    Some("act") if !redundant => {
                        self.acts_seen += 1;
                        let number = n_attr.as_deref().and_then(|n| n.parse().ok()).unwrap_or(self.acts_seen);
                        self.act = Some(number);
                        self.scene = None;
                        self.scenes_in_act = 0;
                        frame.opens_act = true;
                        self.flush();
                    }
                    Some("scene") if !redundant => {
                        self.scenes_in_act += 1;
                        let number = n_attr
                            .as_deref()
                            .and_then(|n| n.parse().ok())
                            .unwrap_or(self.scenes_in_act);
                        self.scene = Some(number);
                        frame.opens_scene = true;
                        self.flush();
                    }
                    Some("prologue" | "epilogue" | "induction") if !redundant => self.flush(),
                    _ => {}
                }
                frame.div = Some((type_attr.clone(), n_attr.clone()));
            }
            "sp" => {
                let ids = attrs.get("who").map(|w| self.parse_who(w, offset)).unwrap_or_default();
                if ids.is_empty() {
                    self.warn(
                        WarningKind::SpeechWithoutSpeaker,
                        offset,
                        "speech without a `who` attribute".into(),
                    );
                }
                self.speaker = Some(ids.iter().cloned().collect());
                frame.opens_speech = true;
                self.restore_speaker();
                who = Some(ids);
            }
            "stage" => {
                let ids = attrs.get("who").map(|w| self.parse_who(w, offset)).unwrap_or_default();
                self.apply_stage(type_attr.as_deref(), &ids, offset);
                if attrs.get("who").is_some() {
                    who = Some(ids);
                }
                self.stage_depth += 1;
            }
            "speaker" if !self.options.tags.contains("speaker") => {
                frame.suppressed = true;
                self.suppress_depth += 1;
            }
            _ => {
                if let Some(w) = attrs.get("who") {
                    who = Some(self.parse_who(w, offset));
                }
            }
        }

        let in_speech_content =
            self.speaker.is_some() && self.stage_depth == 0 && self.suppress_depth == 0 && !(tag == "speaker");
        if in_speech_content && matches!(tag.as_str(), "w" | "lb" | "pc") {
            self.restore_speaker();
        }

        let keep = self.suppress_depth == 0 && !redundant && self.options.tags.contains(tag.as_str());
        if keep {
            let speaker = match tag.as_str() {
                "sp" | "w" | "lb" | "pc" if in_speech_content || tag == "sp" => {
                    self.speaker.clone().unwrap_or_default()
                }
                _ => CharacterSet::new(),
            };
            frame.row = Some(self.out.events.len());
            self.out.events.push(RawEvent {
                tag: tag.clone(),
                type_attr,
                n: n_attr,
                text: None,
                xml_id: attrs.owned("xml:id"),
                who,
                lemma: attrs.owned("lemma"),
                ana: attrs.owned("ana"),
                part: attrs.owned("part"),
                rendition: attrs.owned("rendition"),
                prev: attrs.owned("prev"),
                act: self.current_act(),
                scene: self.scene.unwrap_or(0),
                onstage: self.onstage.clone(),
                stagegroup_raw: self.stagegroup_raw,
                speaker,
            });
        }

        if empty {
            self.end_frame(frame);
        } else {
            self.stack.push(frame);
        }
        Ok(())
    }

    fn end_frame(&mut self, frame: Frame) {
        if let Some(row) = frame.row {
            if !frame.has_children && !frame.text.is_empty() {
                self.out.events[row].text = Some(frame.text);
            }
        }
        if frame.opens_act {
            self.act = None;
            self.scene = None;
        }
        if frame.opens_scene {
            self.scene = None;
        }
        if frame.opens_speech {
            self.speaker = None;
        }
        if frame.tag == "stage" {
            self.stage_depth -= 1;
        }
        if frame.suppressed {
            self.suppress_depth -= 1;
        }
        if self.body_depth == Some(self.stack.len() + 1) && frame.tag == "body" {
            self.body_depth = None;
        }
    }
}

/// Parses the `<body>` with the TEI flushing policy and the default tag set.
pub fn parse_body(xml: &[u8], policy: FlushPolicy) -> Result<ParsedBody> {
    parse_body_with(
        xml,
        &BodyOptions {
            policy,
            ..BodyOptions::default()
        },
    )
}

pub fn parse_body_with(xml: &[u8], options: &BodyOptions) -> Result<ParsedBody> {
    options.policy.validate()?;
    let mut reader = Reader::from_reader(xml);
    let mut walker = BodyWalker::new(options);
    loop {
        let event = reader.read_event().map_err(|e| xml_error(&reader, e))?;
        match event {
            Event::Start(ref e) => walker.start(e, &reader, false)?,
            Event::Empty(ref e) => walker.start(e, &reader, true)?,
            Event::End(_) => {
                let frame = walker.stack.pop().ok_or_else(|| Error::Xml {
                    offset: reader.buffer_position(),
                    message: "unbalanced end tag".into(),
                })?;
                walker.end_frame(frame);
            }
            Event::Text(ref t) => {
                let text = t.unescape().map_err(|e| xml_error(&reader, e))?;
                if let Some(frame) = walker.stack.last_mut() {
                    frame.text.push_str(&text);
                }
            }
            Event::CData(ref t) => {
                if let Some(frame) = walker.stack.last_mut() {
                    frame.text.push_str(&String::from_utf8_lossy(t));
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !walker.stack.is_empty() {
        return Err(Error::Xml {
            offset: reader.buffer_position(),
            message: format!("unclosed element <{}>", walker.stack.last().unwrap().tag),
        });
    }
    Ok(walker.out)
}

/// Counts spoken tokens (`<w>` only) and line milestones (`<lb>`) in a range.
pub fn count_tokens_and_lines(events: &[RawEvent]) -> (u64, u64) {
    events.iter().fold((0, 0), |(tokens, lines), e| {
        (
            tokens + u64::from(e.is_spoken_token()),
            lines + u64::from(e.is_spoken_line()),
        )
    })
}

fn who_field(who: &Option<Vec<CharacterId>>) -> String {
    who.as_ref()
        .map(|ids| ids.iter().map(CharacterId::reference).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

pub fn raw_table(events: &[RawEvent]) -> Table {
    let mut table = Table::new(RAW_COLUMNS);
    for e in events {
        table.push(vec![
            e.tag.clone(),
            opt(&e.type_attr),
            opt(&e.n),
            opt(&e.text),
            opt(&e.xml_id),
            who_field(&e.who),
            opt(&e.lemma),
            opt(&e.ana),
            opt(&e.part),
            opt(&e.rendition),
            opt(&e.prev),
            e.act.to_string(),
            e.scene.to_string(),
            e.onstage.to_field(),
            e.stagegroup_raw.to_string(),
            e.speaker.to_field(),
        ]);
    }
    table
}

pub fn events_from_table(table: &Table, path: &str) -> Result<Vec<RawEvent>> {
    table.expect_columns(RAW_COLUMNS, path)?;
    let field_err = |row: usize, e: Error| Error::Field {
        path: path.to_string(),
        row,
        message: e.to_string(),
    };
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let row = i + 2;
            let who = if r[5].is_empty() {
                None
            } else {
                Some(
                    r[5].split_whitespace()
                        .map(CharacterId::from_reference)
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| field_err(row, e))?,
                )
            };
            Ok(RawEvent {
                tag: r[0].clone(),
                type_attr: non_empty(&r[1]),
                n: non_empty(&r[2]),
                text: non_empty(&r[3]),
                xml_id: non_empty(&r[4]),
                who,
                lemma: non_empty(&r[6]),
                ana: non_empty(&r[7]),
                part: non_empty(&r[8]),
                rendition: non_empty(&r[9]),
                prev: non_empty(&r[10]),
                act: parse_num(&r[11], "act", path, row)?,
                scene: parse_num(&r[12], "scene", path, row)?,
                onstage: CharacterSet::parse_field(&r[13]).map_err(|e| field_err(row, e))?,
                stagegroup_raw: parse_num(&r[14], "stagegroup_raw", path, row)?,
                speaker: CharacterSet::parse_field(&r[15]).map_err(|e| field_err(row, e))?,
            })
        })
        .collect()
}

pub fn cast_from_table(table: &Table, path: &str) -> Result<Vec<CastEntry>> {
    table.expect_columns(CAST_COLUMNS, path)?;
    table
        .rows
        .iter()
        .map(|r| {
            Ok(CastEntry {
                xml_id: CharacterId::new(r[0].as_str())?,
                corresp: r[1].split_whitespace().map(CharacterId::new).collect::<Result<_>>()?,
            })
        })
        .collect()
}
