use std::fmt;

use crate::model::Setting;

/// Resolution at which text units (and hence edges or unit nodes) are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    Scene,
    Group,
}

/// Identifier of a scene (`A.SS`) or stage group (`A.SS.GGGG`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TextUnitId {
    pub act: u32,
    pub scene: u32,
    pub stagegroup: Option<u32>,
}

impl fmt::Display for TextUnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.act, self.scene)?;
        if let Some(g) = self.stagegroup {
            write!(f, ".{g:04}")?;
        }
        Ok(())
    }
}

/// A run of settings forming one text unit.
#[derive(Debug, Clone, Copy)]
pub struct Unit<'a> {
    pub id: TextUnitId,
    /// 1-based position among the play's text units.
    pub index: u32,
    pub settings: &'a [Setting],
}

impl Unit<'_> {
    pub fn n_tokens(&self) -> u64 {
        self.settings.iter().map(|s| s.n_tokens).sum()
    }

    pub fn n_lines(&self) -> u64 {
        self.settings.iter().map(|s| s.n_lines).sum()
    }
}

/// Splits play-ordered settings into consecutive text units.
///
/// A stage group is identified by its number alone; its act and scene are
/// those of its first setting.
pub fn units(settings: &[Setting], granularity: Granularity) -> Vec<Unit<'_>> {
    let key = |s: &Setting| match granularity {
        Granularity::Scene => (s.act, s.scene, 0),
        Granularity::Group => (0, 0, s.stagegroup),
    };
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=settings.len() {
        if i == settings.len() || key(&settings[i]) != key(&settings[start]) {
            let first = &settings[start];
            out.push(Unit {
                id: TextUnitId {
                    act: first.act,
                    scene: first.scene,
                    stagegroup: match granularity {
                        Granularity::Scene => None,
                        Granularity::Group => Some(first.stagegroup),
                    },
                },
                index: out.len() as u32 + 1,
                settings: &settings[start..i],
            });
            start = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_id_formats() {
        let g = TextUnitId {
            act: 1,
            scene: 1,
            stagegroup: Some(2),
        };
        assert_eq!(g.to_string(), "1.01.0002");
        let s = TextUnitId {
            act: 0,
            scene: 0,
            stagegroup: None,
        };
        assert_eq!(s.to_string(), "0.00");
    }

    #[test]
    fn no_settings_no_units() {
        assert!(units(&[], Granularity::Scene).is_empty());
    }
}
