use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Clique expansion: characters linked per shared text unit.
    Ce,
    /// Star expansion: characters linked to text-unit nodes.
    Se,
    Hg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aggregation {
    Scene,
    Group,
    Speech,
}

/// Expressivity codes: `b` binary, `m` multi-edges, `w` weighted, `d` directed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expressivity {
    B,
    Mb,
    Mw,
    W,
    Wd,
    Mwd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReprDescriptor {
    pub model: Model,
    pub aggregation: Aggregation,
    pub expressivity: Expressivity,
}

use Aggregation::*;
use Expressivity::*;
use Model::*;

const fn d(model: Model, aggregation: Aggregation, expressivity: Expressivity) -> ReprDescriptor {
    ReprDescriptor {
        model,
        aggregation,
        expressivity,
    }
}

/// The eighteen representations, in table order.
pub const ALL_REPRESENTATIONS: [ReprDescriptor; 18] = [
    d(Ce, Scene, B),
    d(Ce, Scene, Mb),
    d(Ce, Scene, Mw),
    d(Ce, Group, B),
    d(Ce, Group, Mb),
    d(Ce, Group, Mw),
    d(Se, Scene, B),
    d(Se, Scene, W),
    d(Se, Group, B),
    d(Se, Group, W),
    d(Se, Speech, Wd),
    d(Se, Speech, Mwd),
    d(Hg, Scene, Mb),
    d(Hg, Scene, Mw),
    d(Hg, Group, Mb),
    d(Hg, Group, Mw),
    d(Hg, Speech, Wd),
    d(Hg, Speech, Mwd),
];

/// Count-weighted clique expansions, shipped for convenience.
pub const CONVENIENCE_REPRESENTATIONS: [ReprDescriptor; 2] = [d(Ce, Scene, W), d(Ce, Group, W)];

/// Clique and star expansions whose degree rankings are compared.
pub const RANKED_REPRESENTATIONS: [ReprDescriptor; 11] = [
    d(Ce, Scene, B),
    d(Ce, Scene, Mb),
    d(Ce, Scene, Mw),
    d(Ce, Group, B),
    d(Ce, Group, Mb),
    d(Ce, Group, Mw),
    d(Se, Scene, B),
    d(Se, Scene, W),
    d(Se, Group, B),
    d(Se, Group, W),
    d(Se, Speech, Wd),
];

impl ReprDescriptor {
    pub fn is_valid(&self) -> bool {
        ALL_REPRESENTATIONS.contains(self) || CONVENIENCE_REPRESENTATIONS.contains(self)
    }

    /// The property letters, a subset of `{b, d, m, w}`.
    pub fn properties(&self) -> &'static str {
        match self.expressivity {
            B => "b",
            Mb => "mb",
            Mw => "mw",
            W => "w",
            Wd => "wd",
            Mwd => "mwd",
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self.expressivity, Wd | Mwd)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ce => "ce",
            Se => "se",
            Hg => "hg",
        })
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scene => "scene",
            Group => "group",
            Speech => "speech",
        })
    }
}

impl fmt::Display for ReprDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.model, self.aggregation, self.properties())
    }
}

impl FromStr for ReprDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let unknown = || Error::UnknownDescriptor(s.to_string());
        let mut parts = s.split('-');
        let (Some(m), Some(a), Some(p), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(unknown());
        };
        let model = match m {
            "ce" => Ce,
            "se" => Se,
            "hg" => Hg,
            _ => return Err(unknown()),
        };
        let aggregation = match a {
            "scene" => Scene,
            "group" => Group,
            "speech" => Speech,
            _ => return Err(unknown()),
        };
        let expressivity = match p {
            "b" => B,
            "mb" => Mb,
            "mw" => Mw,
            "w" => W,
            "wd" => Wd,
            "mwd" => Mwd,
            _ => return Err(unknown()),
        };
        let descriptor = d(model, aggregation, expressivity);
        if descriptor.is_valid() {
            Ok(descriptor)
        } else {
            Err(unknown())
        }
    }
}
