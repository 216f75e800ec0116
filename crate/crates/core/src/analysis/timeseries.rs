//! Share of spoken lines per character over a rolling window of settings.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{CharacterId, Setting};
use crate::table::Table;

pub const TIMESERIES_COLUMNS: [&str; 5] = ["setting", "act", "act_start", "character", "fraction"];

pub const DEFAULT_WINDOW: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProminenceSample {
    /// Setting number of the window's last setting.
    pub position: u32,
    pub act: u32,
    /// Whether this setting opens a new act.
    pub act_start: bool,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProminenceSeries {
    pub character: CharacterId,
    pub samples: Vec<ProminenceSample>,
}

/// One series per speaking character, sampled after every setting.
///
/// Lines of a setting with several speakers are split evenly among them.
/// Positions whose window holds no spoken lines are skipped.
pub fn prominence_timeseries(settings: &[Setting], window: usize) -> Result<Vec<ProminenceSeries>> {
    if window < 1 {
        return Err(Error::InvalidWindow);
    }
    let speakers: Vec<CharacterId> = {
        let mut all: Vec<_> = settings.iter().flat_map(|s| s.speaker.iter().cloned()).collect();
        all.sort();
        all.dedup();
        all
    };
    let column: BTreeMap<&CharacterId, usize> = speakers.iter().enumerate().map(|(i, c)| (c, i)).collect();

    // per setting: the lines credited to each speaker
    let credit: Vec<Vec<(usize, f64)>> = settings
        .iter()
        .map(|s| {
            let share = s.n_lines as f64 / s.speaker.len().max(1) as f64;
            s.speaker.iter().map(|c| (column[c], share)).collect()
        })
        .collect();

    let mut series: Vec<ProminenceSeries> = speakers
        .iter()
        .map(|c| ProminenceSeries {
            character: c.clone(),
            samples: Vec::new(),
        })
        .collect();
    let mut total = 0u64;
    for (i, s) in settings.iter().enumerate() {
        total += s.n_lines;
        if i >= window {
            total -= settings[i - window].n_lines;
        }
        if total == 0 {
            continue;
        }
        let act_start = i == 0 || settings[i - 1].act != s.act;
        let mut sums = vec![0.0; speakers.len()];
        for cr in &credit[i.saturating_sub(window - 1)..=i] {
            for &(c, v) in cr {
                sums[c] += v;
            }
        }
        for (c, sum) in sums.iter().enumerate() {
            series[c].samples.push(ProminenceSample {
                position: s.setting,
                act: s.act,
                act_start,
                fraction: sum / total as f64,
            });
        }
    }
    Ok(series)
}

/// Long format sorted by position, then character.
pub fn timeseries_table(series: &[ProminenceSeries]) -> Table {
    let mut rows: Vec<(u32, &CharacterId, &ProminenceSample)> = series
        .iter()
        .flat_map(|s| s.samples.iter().map(move |p| (p.position, &s.character, p)))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let mut t = Table::new(&TIMESERIES_COLUMNS);
    for (_, c, p) in rows {
        t.push(vec![
            p.position.to_string(),
            p.act.to_string(),
            p.act_start.to_string(),
            c.reference(),
            p.fraction.to_string(),
        ]);
    }
    t
}
