//! Collapses the raw event table into settings (`{play}.agg.csv`).

use crate::error::{Error, Result};
use crate::model::{CharacterSet, Setting};
use crate::table::{parse_num, Table};
use crate::tei::RawEvent;

pub const AGG_COLUMNS: &[&str] = &[
    "act",
    "scene",
    "stagegroup",
    "stagegroup_raw",
    "setting",
    "onstage",
    "speaker",
    "n_lines",
    "n_tokens",
];

#[derive(PartialEq)]
struct Key<'a> {
    act: u32,
    scene: u32,
    stagegroup_raw: u32,
    onstage: &'a CharacterSet,
    speaker: &'a CharacterSet,
}

impl<'a> Key<'a> {
    fn of(e: &'a RawEvent) -> Self {
        Key {
            act: e.act,
            scene: e.scene,
            stagegroup_raw: e.stagegroup_raw,
            onstage: &e.onstage,
            speaker: &e.speaker,
        }
    }
}

/// Groups spoken words and line milestones into maximal settings.
///
/// A line is counted where its `<lb>` occurs. Lines whose stretch holds no
/// word (an `<lb>` directly followed by a stage change) are carried to the
/// next setting with words, so line totals are conserved.
pub fn aggregate_settings(events: &[RawEvent]) -> Vec<Setting> {
    let mut settings: Vec<Setting> = Vec::new();
    let mut current: Option<(Key<'_>, Setting)> = None;
    let mut pending_lines = 0u64;

    let close = |run: Option<(Key<'_>, Setting)>, settings: &mut Vec<Setting>, pending: &mut u64| {
        if let Some((_, mut s)) = run {
            if s.n_tokens > 0 {
                s.n_lines += *pending;
                *pending = 0;
                settings.push(s);
            } else {
                *pending += s.n_lines;
            }
        }
    };

    for e in events {
        let token = e.is_spoken_token();
        let line = e.is_spoken_line();
        if !token && !line {
            continue;
        }
        let key = Key::of(e);
        if current.as_ref().map(|(k, _)| k != &key).unwrap_or(true) {
            close(current.take(), &mut settings, &mut pending_lines);
            current = Some((
                key,
                Setting {
                    act: e.act,
                    scene: e.scene,
                    stagegroup: 0,
                    stagegroup_raw: e.stagegroup_raw,
                    setting: 0,
                    onstage: e.onstage.clone(),
                    speaker: e.speaker.clone(),
                    n_lines: 0,
                    n_tokens: 0,
                },
            ));
        }
        let (_, s) = current.as_mut().expect("run is open");
        s.n_tokens += u64::from(token);
        s.n_lines += u64::from(line);
    }
    close(current.take(), &mut settings, &mut pending_lines);
    if pending_lines > 0 {
        if let Some(last) = settings.last_mut() {
            last.n_lines += pending_lines;
        }
    }
    renumber(&mut settings);
    settings
}

/// Assigns consecutive `setting` numbers and consecutive `stagegroup`
/// numbers (over the raw stage groups that survive) starting at 1.
pub fn renumber(settings: &mut [Setting]) {
    let mut group = 0;
    let mut last_raw = None;
    for (i, s) in settings.iter_mut().enumerate() {
        if last_raw != Some(s.stagegroup_raw) {
            group += 1;
            last_raw = Some(s.stagegroup_raw);
        }
        s.stagegroup = group;
        s.setting = i as u32 + 1;
    }
}

pub fn agg_table(settings: &[Setting]) -> Table {
    let mut table = Table::new(AGG_COLUMNS);
    for s in settings {
        table.push(vec![
            s.act.to_string(),
            s.scene.to_string(),
            s.stagegroup.to_string(),
            s.stagegroup_raw.to_string(),
            s.setting.to_string(),
            s.onstage.to_field(),
            s.speaker.to_field(),
            s.n_lines.to_string(),
            s.n_tokens.to_string(),
        ]);
    }
    table
}

pub fn settings_from_table(table: &Table, path: &str) -> Result<Vec<Setting>> {
    table.expect_columns(AGG_COLUMNS, path)?;
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let row = i + 2;
            let set = |field: &str| {
                CharacterSet::parse_field(field).map_err(|e| Error::Field {
                    path: path.to_string(),
                    row,
                    message: e.to_string(),
                })
            };
            Ok(Setting {
                act: parse_num(&r[0], "act", path, row)?,
                scene: parse_num(&r[1], "scene", path, row)?,
                stagegroup: parse_num(&r[2], "stagegroup", path, row)?,
                stagegroup_raw: parse_num(&r[3], "stagegroup_raw", path, row)?,
                setting: parse_num(&r[4], "setting", path, row)?,
                onstage: set(&r[5])?,
                speaker: set(&r[6])?,
                n_lines: parse_num(&r[7], "n_lines", path, row)?,
                n_tokens: parse_num(&r[8], "n_tokens", path, row)?,
            })
        })
        .collect()
}
