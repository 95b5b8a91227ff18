//! The nine country-level English dialects handled by the pipeline.

use serde::{Deserialize, Serialize};

/// Country-level English variety. `US` is the designated source dialect;
/// every transformation starts from Standard American English.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dialect {
    US,
    AU,
    GB,
    CA,
    IN,
    IE,
    NG,
    PH,
    SC,
}

impl Dialect {
    pub const ALL: [Dialect; 9] = [
        Dialect::US,
        Dialect::AU,
        Dialect::GB,
        Dialect::CA,
        Dialect::IN,
        Dialect::IE,
        Dialect::NG,
        Dialect::PH,
        Dialect::SC,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Dialect::US => "US",
            Dialect::AU => "AU",
            Dialect::GB => "GB",
            Dialect::CA => "CA",
            Dialect::IN => "IN",
            Dialect::IE => "IE",
            Dialect::NG => "NG",
            Dialect::PH => "PH",
            Dialect::SC => "SC",
        }
    }

    /// Option string used verbatim by the identification prompt.
    pub fn display_name(self) -> &'static str {
        match self {
            Dialect::US => "Standard American English (USA)",
            Dialect::AU => "Australian English (Australia)",
            Dialect::GB => "Standard British English (England)",
            Dialect::CA => "Canadian English (Canada)",
            Dialect::IN => "Indian English (India)",
            Dialect::IE => "Irish English (Ireland)",
            Dialect::NG => "Nigerian English (Nigeria)",
            Dialect::PH => "Philippine English (Philippine)",
            Dialect::SC => "Scottish English (Scotland)",
        }
    }

    /// Adjective form bound into prompt templates ("{x} English dialect").
    pub fn adjective(self) -> &'static str {
        match self {
            Dialect::US => "American",
            Dialect::AU => "Australian",
            Dialect::GB => "British",
            Dialect::CA => "Canadian",
            Dialect::IN => "Indian",
            Dialect::IE => "Irish",
            Dialect::NG => "Nigerian",
            Dialect::PH => "Philippine",
            Dialect::SC => "Scottish",
        }
    }

    pub fn from_code(code: &str) -> Option<Dialect> {
        Dialect::ALL.iter().copied().find(|d| d.code() == code)
    }

    pub fn from_adjective(adj: &str) -> Option<Dialect> {
        Dialect::ALL.iter().copied().find(|d| d.adjective() == adj)
    }

    /// Resolves an identification answer given as a full option string.
    pub fn from_display_name(name: &str) -> Option<Dialect> {
        let name = name.trim().trim_end_matches('.');
        Dialect::ALL
            .iter()
            .copied()
            .find(|d| d.display_name().eq_ignore_ascii_case(name))
    }

    /// All dialects except US use metric units in generated data.
    pub fn uses_metric(self) -> bool {
        self != Dialect::US
    }

    /// Metric unit words follow British spelling ("kilometres") except for
    /// PH, which keeps American orthography.
    pub fn metric_british_spelling(self) -> bool {
        !matches!(self, Dialect::US | Dialect::PH)
    }
}

impl std::fmt::Display for Dialect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for Dialect {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dialect::from_code(s)
            .ok_or_else(|| crate::Error::Validation(format!("unknown dialect code `{s}`")))
    }
}
