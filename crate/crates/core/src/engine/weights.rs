//! Sub-score computation from risk factors.
//!
//! Each prediction is an integer-weighted sum of factor values. FTA and NCA
//! raw sums are then mapped onto the 1–6 scale through a breakpoint table; the
//! NVCA sum is compared against a threshold to give the violence flag.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Error};

const PLACEHOLDER_WEIGHTS: &str = include_str!("../../../../data/weights.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RiskFactors {
    pub age_at_arrest: u32,
    pub pending_charge: bool,
    pub prior_misdemeanor_conviction: bool,
    pub prior_felony_conviction: bool,
    pub prior_conviction: bool,
    pub prior_violent_convictions: u32,
    pub ftas_past_two_years: u32,
    pub fta_older_than_two_years: bool,
    pub prior_incarceration: bool,
    pub current_offense_violent: bool,
}

impl RiskFactors {
    /// `prior_conviction` must be set whenever either specific prior
    /// conviction flag is.
    pub fn is_consistent(&self) -> bool {
        self.prior_conviction
            || !(self.prior_misdemeanor_conviction || self.prior_felony_conviction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubScores {
    pub fta: u8,
    pub nca: u8,
    pub nvca_flag: bool,
}

impl SubScores {
    pub fn new(fta: u8, nca: u8, nvca_flag: bool) -> Result<SubScores, ConfigError> {
        for (name, value) in [("fta", fta), ("nca", nca)] {
            if !(1..=6).contains(&value) {
                return Err(ConfigError::SubScoreOutOfRange { name, value });
            }
        }
        Ok(SubScores {
            fta,
            nca,
            nvca_flag,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    /// Age at arrest at or below the prediction's `young_age_max`.
    YoungAtArrest,
    PendingCharge,
    PriorMisdemeanorConviction,
    PriorFelonyConviction,
    PriorConviction,
    PriorViolentConvictions,
    FtasPastTwoYears,
    FtaOlderThanTwoYears,
    PriorIncarceration,
    CurrentOffenseViolent,
    /// Interaction of a violent current offense with young age.
    CurrentViolentAndYoung,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub factor: Factor,
    pub weight: i64,
    /// Counts above `cap` contribute as `cap`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
}

impl Term {
    fn value(&self, f: &RiskFactors, young_age_max: u32) -> i64 {
        let young = f.age_at_arrest <= young_age_max;
        let v: u32 = match self.factor {
            Factor::YoungAtArrest => young.into(),
            Factor::PendingCharge => f.pending_charge.into(),
            Factor::PriorMisdemeanorConviction => f.prior_misdemeanor_conviction.into(),
            Factor::PriorFelonyConviction => f.prior_felony_conviction.into(),
            Factor::PriorConviction => f.prior_conviction.into(),
            Factor::PriorViolentConvictions => f.prior_violent_convictions,
            Factor::FtasPastTwoYears => f.ftas_past_two_years,
            Factor::FtaOlderThanTwoYears => f.fta_older_than_two_years.into(),
            Factor::PriorIncarceration => f.prior_incarceration.into(),
            Factor::CurrentOffenseViolent => f.current_offense_violent.into(),
            Factor::CurrentViolentAndYoung => (f.current_offense_violent && young).into(),
        };
        let v = self.cap.map_or(v, |cap| v.min(cap));
        i64::from(v)
    }

    /// Largest value the factor can take, `None` for an uncapped count.
    fn max_value(&self) -> Option<i64> {
        let unbounded = matches!(
            self.factor,
            Factor::PriorViolentConvictions | Factor::FtasPastTwoYears
        );
        match (unbounded, self.cap) {
            (_, Some(cap)) if unbounded => Some(i64::from(cap)),
            (_, Some(cap)) => Some(i64::from(cap.min(1))),
            (true, None) => None,
            (false, None) => Some(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Breakpoint {
    pub min_raw: i64,
    pub scaled: u8,
}

/// A weighted sum mapped onto the six-point scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledPrediction {
    #[serde(default = "default_young_age")]
    pub young_age_max: u32,
    pub terms: Vec<Term>,
    pub breakpoints: Vec<Breakpoint>,
    /// Largest raw score the table covers.
    pub max_raw: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagPrediction {
    #[serde(default = "default_young_age")]
    pub young_age_max: u32,
    pub terms: Vec<Term>,
    /// The flag is raised when the raw score reaches this value.
    pub threshold: i64,
}

fn default_young_age() -> u32 {
    22
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub fta: ScaledPrediction,
    pub nca: ScaledPrediction,
    pub nvca: FlagPrediction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawScores {
    pub fta: i64,
    pub nca: i64,
    pub nvca: i64,
}

fn weighted_sum(terms: &[Term], factors: &RiskFactors, young_age_max: u32) -> i64 {
    terms
        .iter()
        .map(|t| t.weight * t.value(factors, young_age_max))
        .sum()
}

fn min_reachable(terms: &[Term]) -> Option<i64> {
    terms.iter().try_fold(0i64, |acc, t| {
        if t.weight >= 0 {
            Some(acc)
        } else {
            t.max_value().map(|m| acc + t.weight * m)
        }
    })
}

impl ScaledPrediction {
    pub fn raw(&self, factors: &RiskFactors) -> i64 {
        weighted_sum(&self.terms, factors, self.young_age_max)
    }

    pub fn scale(&self, raw: i64, prediction: &'static str) -> Result<u8, ConfigError> {
        let min = self.breakpoints.first().map_or(i64::MAX, |b| b.min_raw);
        if raw < min || raw > self.max_raw {
            return Err(ConfigError::RawScoreOutOfRange {
                prediction,
                raw,
                min,
                max: self.max_raw,
            });
        }
        Ok(self
            .breakpoints
            .iter()
            .rev()
            .find(|b| b.min_raw <= raw)
            .map(|b| b.scaled)
            .expect("raw is at or above the first breakpoint"))
    }

    fn validate(&self, file: &str, prediction: &str) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::invalid(file, format!("{prediction}: {msg}")));
        let Some(first) = self.breakpoints.first() else {
            return bad("empty breakpoint table".into());
        };
        for w in self.breakpoints.windows(2) {
            if w[1].min_raw <= w[0].min_raw {
                return bad("breakpoint min_raw values must strictly increase".into());
            }
            if w[1].scaled < w[0].scaled {
                return bad("scaled values must be non-decreasing".into());
            }
        }
        if let Some(b) = self.breakpoints.iter().find(|b| !(1..=6).contains(&b.scaled)) {
            return bad(format!("scaled value {} is outside 1..=6", b.scaled));
        }
        if self.max_raw < self.breakpoints.last().map_or(0, |b| b.min_raw) {
            return bad("max_raw is below the last breakpoint".into());
        }
        match min_reachable(&self.terms) {
            Some(lo) if lo < first.min_raw => bad(format!(
                "lowest reachable raw score {lo} is below the first breakpoint {}",
                first.min_raw
            )),
            None => bad("negative weight on an uncapped count".into()),
            _ => Ok(()),
        }
    }
}

impl FlagPrediction {
    pub fn raw(&self, factors: &RiskFactors) -> i64 {
        weighted_sum(&self.terms, factors, self.young_age_max)
    }

    pub fn flag(&self, factors: &RiskFactors) -> bool {
        self.raw(factors) >= self.threshold
    }
}

impl WeightConfig {
    /// Clearly-labelled stand-in weights for exercising the computation.
    /// They are not the published tool's weights.
    pub fn placeholder() -> WeightConfig {
        Self::from_toml_str(PLACEHOLDER_WEIGHTS, "data/weights.toml")
            .expect("bundled weights are valid")
    }

    pub fn load(path: &Path) -> Result<WeightConfig, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_toml_str(&text, &path.display().to_string())?)
    }

    pub fn from_toml_str(text: &str, name: &str) -> Result<WeightConfig, ConfigError> {
        let cfg: WeightConfig =
            toml::from_str(text).map_err(|e| ConfigError::invalid(name, e.to_string()))?;
        cfg.validate(name)?;
        Ok(cfg)
    }

    pub fn validate(&self, name: &str) -> Result<(), ConfigError> {
        self.fta.validate(name, "fta")?;
        self.nca.validate(name, "nca")
    }

    pub fn raw_scores(&self, factors: &RiskFactors) -> RawScores {
        RawScores {
            fta: self.fta.raw(factors),
            nca: self.nca.raw(factors),
            nvca: self.nvca.raw(factors),
        }
    }
}

/// Computes the FTA and NCA scale scores and the NVCA flag.
pub fn compute_subscores(
    factors: &RiskFactors,
    weights: &WeightConfig,
) -> Result<SubScores, ConfigError> {
    let raw = weights.raw_scores(factors);
    Ok(SubScores {
        fta: weights.fta.scale(raw.fta, "fta")?,
        nca: weights.nca.scale(raw.nca, "nca")?,
        nvca_flag: raw.nvca >= weights.nvca.threshold,
    })
}
