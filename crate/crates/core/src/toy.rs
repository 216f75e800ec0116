//! A micro-notation for toy dramas.
//!
//! ```text
//! |->A; A*|->B; A*|->C; B*; A->| C*; B->| C*|->D; D*|->A,B,E; A*; A,B,C,D,E->|
//! ```
//!
//! `->X` is an entry, `X->` an exit, `X*` speech; `,` lists characters acting
//! together, `;` separates activities and `|` separates scenes. Whitespace is
//! ignored and `→` may be written for `->`. Characters are single capital
//! letters and stay on stage across scene boundaries until they exit.

use std::fmt;

use thiserror::Error;

use crate::aggregate::renumber;
use crate::model::{CharacterId, CharacterSet, Setting};
use crate::tei::{CastEntry, RawEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyEventKind {
    Entry,
    Exit,
    Speech,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyEvent {
    pub kind: ToyEventKind,
    /// Non-empty, without duplicates, in textual order.
    pub characters: Vec<CharacterId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ToyScript {
    pub scenes: Vec<Vec<ToyEvent>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyIssue {
    /// Character offset into the script.
    pub position: usize,
    /// 1-based scene number.
    pub scene: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToyError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{} invalid event(s); first: scene {}, position {}: {}",
        .0.len(), .0[0].scene, .0[0].position, .0[0].message)]
    Invalid(Vec<ToyIssue>),
}

struct Lexer {
    chars: Vec<(usize, char)>,
    at: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        let chars = text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        Lexer { chars, at: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars
            .get(self.at)
            .map(|&(p, _)| p)
            .unwrap_or_else(|| self.chars.last().map(|&(p, _)| p + 1).unwrap_or(0))
    }

    fn error(&self, message: impl Into<String>) -> ToyError {
        ToyError::Syntax {
            position: self.position(),
            message: message.into(),
        }
    }

    /// Consumes `->` or `→`.
    fn arrow(&mut self) -> bool {
        match self.peek() {
            Some('→') => {
                self.at += 1;
                true
            }
            Some('-') if self.chars.get(self.at + 1).map(|&(_, c)| c) == Some('>') => {
                self.at += 2;
                true
            }
            _ => false,
        }
    }

    fn list(&mut self) -> Result<Vec<CharacterId>, ToyError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_uppercase() => {
                    self.at += 1;
                    let id = CharacterId::new(c.to_string()).expect("letter is a valid id");
                    if !out.contains(&id) {
                        out.push(id);
                    }
                }
                Some(c) => return Err(self.error(format!("expected a capital letter, found `{c}`"))),
                None => return Err(self.error("expected a capital letter, found end of script")),
            }
            if self.peek() == Some(',') {
                self.at += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn event(&mut self) -> Result<ToyEvent, ToyError> {
        if self.arrow() {
            let characters = self.list()?;
            return Ok(ToyEvent {
                kind: ToyEventKind::Entry,
                characters,
            });
        }
        let characters = self.list()?;
        if self.arrow() {
            return Ok(ToyEvent {
                kind: ToyEventKind::Exit,
                characters,
            });
        }
        if self.peek() == Some('*') {
            self.at += 1;
            return Ok(ToyEvent {
                kind: ToyEventKind::Speech,
                characters,
            });
        }
        Err(self.error("expected `->` or `*` after character list"))
    }
}

fn is_boundary(c: Option<char>) -> bool {
    matches!(c, None | Some('|'))
}

/// Parses and validates a toy script.
pub fn parse_toy(script_text: &str) -> Result<ToyScript, ToyError> {
    let mut lx = Lexer::new(script_text);
    // (scene events, position of each event)
    let mut scenes: Vec<Vec<(usize, ToyEvent)>> = Vec::new();
    if lx.peek() == Some('|') {
        lx.at += 1;
    }
    while lx.peek().is_some() {
        let mut scene = Vec::new();
        if !is_boundary(lx.peek()) {
            loop {
                let pos = lx.position();
                scene.push((pos, lx.event()?));
                match lx.peek() {
                    Some(';') => lx.at += 1,
                    None | Some('|') => break,
                    Some(c) => return Err(lx.error(format!("expected `;` or `|`, found `{c}`"))),
                }
            }
        }
        scenes.push(scene);
        if lx.peek() == Some('|') {
            lx.at += 1;
        }
    }

    let mut issues = Vec::new();
    let mut onstage = CharacterSet::new();
    for (i, scene) in scenes.iter().enumerate() {
        for (pos, event) in scene {
            match event.kind {
                ToyEventKind::Entry => event.characters.iter().for_each(|c| {
                    onstage.insert(c.clone());
                }),
                ToyEventKind::Exit | ToyEventKind::Speech => {
                    for c in &event.characters {
                        if !onstage.contains(c) {
                            let verb = if event.kind == ToyEventKind::Exit {
                                "exits"
                            } else {
                                "speaks"
                            };
                            issues.push(ToyIssue {
                                position: *pos,
                                scene: i + 1,
                                message: format!("{} {verb} but is not on stage", c.as_str()),
                            });
                        }
                        if event.kind == ToyEventKind::Exit {
                            onstage.remove(c);
                        }
                    }
                }
            }
        }
    }
    if !issues.is_empty() {
        return Err(ToyError::Invalid(issues));
    }
    Ok(ToyScript {
        scenes: scenes
            .into_iter()
            .map(|s| s.into_iter().map(|(_, e)| e).collect())
            .collect(),
    })
}

impl fmt::Display for ToyEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = self
            .characters
            .iter()
            .map(CharacterId::as_str)
            .collect::<Vec<_>>()
            .join(",");
        match self.kind {
            ToyEventKind::Entry => write!(f, "->{list}"),
            ToyEventKind::Exit => write!(f, "{list}->"),
            ToyEventKind::Speech => write!(f, "{list}*"),
        }
    }
}

/// Canonical ASCII rendering; parsing it yields the same script.
impl fmt::Display for ToyScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scenes.is_empty() {
            return Ok(());
        }
        f.write_str("|")?;
        for scene in &self.scenes {
            let events = scene.iter().map(ToString::to_string).collect::<Vec<_>>();
            write!(f, "{}|", events.join("; "))?;
        }
        Ok(())
    }
}

/// Turns a validated script into settings with unit weights.
///
/// The stage is never flushed; each speech contributes one line and one
/// token, and consecutive speeches by the same speakers in the same stage
/// group and scene merge into one setting.
pub fn toy_to_settings(script: &ToyScript) -> Vec<Setting> {
    let mut settings: Vec<Setting> = Vec::new();
    let mut onstage = CharacterSet::new();
    let mut stagegroup_raw = 0;
    for (i, scene) in script.scenes.iter().enumerate() {
        let scene_no = i as u32 + 1;
        for event in scene {
            let mut next = onstage.clone();
            match event.kind {
                ToyEventKind::Entry => event.characters.iter().for_each(|c| {
                    next.insert(c.clone());
                }),
                ToyEventKind::Exit => event.characters.iter().for_each(|c| {
                    next.remove(c);
                }),
                ToyEventKind::Speech => {
                    let speaker: CharacterSet = event.characters.iter().cloned().collect();
                    match settings.last_mut() {
                        Some(last)
                            if last.scene == scene_no
                                && last.stagegroup_raw == stagegroup_raw
                                && last.speaker == speaker =>
                        {
                            last.n_lines += 1;
                            last.n_tokens += 1;
                        }
                        _ => settings.push(Setting {
                            act: 1,
                            scene: scene_no,
                            stagegroup: 0,
                            stagegroup_raw,
                            setting: 0,
                            onstage: onstage.clone(),
                            speaker,
                            n_lines: 1,
                            n_tokens: 1,
                        }),
                    }
                }
            }
            if next != onstage {
                onstage = next;
                stagegroup_raw += 1;
            }
        }
    }
    renumber(&mut settings);
    settings
}

/// Raw events equivalent to the script: a scene `div` per scene, a `stage`
/// per entry or exit, and per speech an `sp` with one `lb` and one `w`.
/// Aggregating them yields [`toy_to_settings`].
pub fn toy_to_events(script: &ToyScript) -> Vec<RawEvent> {
    let mut events = Vec::new();
    let mut onstage = CharacterSet::new();
    let mut stagegroup_raw = 0;
    let blank = |tag: &str, scene: u32, onstage: &CharacterSet, group: u32| RawEvent {
        tag: tag.to_string(),
        type_attr: None,
        n: None,
        text: None,
        xml_id: None,
        who: None,
        lemma: None,
        ana: None,
        part: None,
        rendition: None,
        prev: None,
        act: 1,
        scene,
        onstage: onstage.clone(),
        stagegroup_raw: group,
        speaker: CharacterSet::new(),
    };
    for (i, scene) in script.scenes.iter().enumerate() {
        let scene_no = i as u32 + 1;
        events.push(RawEvent {
            type_attr: Some("scene".into()),
            n: Some(scene_no.to_string()),
            ..blank("div", scene_no, &onstage, stagegroup_raw)
        });
        for event in scene {
            match event.kind {
                ToyEventKind::Entry | ToyEventKind::Exit => {
                    let entry = event.kind == ToyEventKind::Entry;
                    for c in &event.characters {
                        if entry {
                            onstage.insert(c.clone());
                        } else {
                            onstage.remove(c);
                        }
                    }
                    stagegroup_raw += 1;
                    events.push(RawEvent {
                        type_attr: Some(if entry { "entrance" } else { "exit" }.into()),
                        text: Some(event.to_string()),
                        who: Some(event.characters.clone()),
                        ..blank("stage", scene_no, &onstage, stagegroup_raw)
                    });
                }
                ToyEventKind::Speech => {
                    let speaker: CharacterSet = event.characters.iter().cloned().collect();
                    events.push(RawEvent {
                        who: Some(event.characters.clone()),
                        speaker: speaker.clone(),
                        ..blank("sp", scene_no, &onstage, stagegroup_raw)
                    });
                    events.push(RawEvent {
                        speaker: speaker.clone(),
                        ..blank("lb", scene_no, &onstage, stagegroup_raw)
                    });
                    events.push(RawEvent {
                        text: Some("word".into()),
                        speaker,
                        ..blank("w", scene_no, &onstage, stagegroup_raw)
                    });
                }
            }
        }
    }
    events
}

/// Cast of a script: every character mentioned, without groups.
pub fn toy_cast(script: &ToyScript) -> Vec<CastEntry> {
    let all: CharacterSet = script
        .scenes
        .iter()
        .flatten()
        .flat_map(|e| e.characters.iter().cloned())
        .collect();
    all.iter()
        .map(|c| CastEntry {
            xml_id: c.clone(),
            corresp: Vec::new(),
        })
        .collect()
}
