use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Recommended level of pre-trial supervision, ordered from least to most
/// restrictive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
#[repr(u8)]
pub enum SupervisionLevel {
    /// Release on own recognizance, court reminders only.
    OrNas = 1,
    /// Own recognizance with twice-weekly phone reporting.
    OrMinimum = 2,
    /// Assertive case management.
    SfpdpAcm = 3,
    ReleaseNotRecommended = 4,
}

impl SupervisionLevel {
    pub const ALL: [SupervisionLevel; 4] = [
        SupervisionLevel::OrNas,
        SupervisionLevel::OrMinimum,
        SupervisionLevel::SfpdpAcm,
        SupervisionLevel::ReleaseNotRecommended,
    ];

    pub const MAX: SupervisionLevel = SupervisionLevel::ReleaseNotRecommended;

    pub fn rank(self) -> u8 {
        self as u8
    }

    pub fn from_rank(rank: u8) -> Option<SupervisionLevel> {
        match rank {
            1 => Some(SupervisionLevel::OrNas),
            2 => Some(SupervisionLevel::OrMinimum),
            3 => Some(SupervisionLevel::SfpdpAcm),
            4 => Some(SupervisionLevel::ReleaseNotRecommended),
            _ => None,
        }
    }

    /// One level up, saturating at the top.
    pub fn bumped(self) -> SupervisionLevel {
        SupervisionLevel::from_rank(self.rank() + 1).unwrap_or(SupervisionLevel::MAX)
    }

    pub fn label(self) -> &'static str {
        match self {
            SupervisionLevel::OrNas => "OR-NAS",
            SupervisionLevel::OrMinimum => "OR-Minimum",
            SupervisionLevel::SfpdpAcm => "SFPDP-ACM",
            SupervisionLevel::ReleaseNotRecommended => "Release Not Recommended",
        }
    }
}

impl fmt::Display for SupervisionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SupervisionLevel {
    type Err = String;

    /// Accepts the label (any case, `-`/`_`/space interchangeable) or the rank.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(rank) = t.parse::<u8>() {
            return SupervisionLevel::from_rank(rank)
                .ok_or_else(|| format!("supervision rank {rank} is outside 1..=4"));
        }
        let key: String = t
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "ornas" => Ok(SupervisionLevel::OrNas),
            "orminimum" | "ormin" => Ok(SupervisionLevel::OrMinimum),
            "sfpdpacm" => Ok(SupervisionLevel::SfpdpAcm),
            "releasenotrecommended" | "rnr" => Ok(SupervisionLevel::ReleaseNotRecommended),
            _ => Err(format!("unknown supervision level {s:?}")),
        }
    }
}

impl TryFrom<String> for SupervisionLevel {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<SupervisionLevel> for String {
    fn from(level: SupervisionLevel) -> String {
        level.label().to_string()
    }
}
