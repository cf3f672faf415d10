//! The four-step assessment.
//!
//! 1. FTA/NCA scale scores and the NVCA flag (see [`weights`]).
//! 2. Charge-based exclusion: extradition, an exclusion-list charge, or a
//!    violent charge together with the NVCA flag forces Release Not
//!    Recommended.
//! 3. Matrix lookup of the initial recommendation.
//! 4. Charge-based bump-up: a bump-up-list charge, or the NVCA flag without a
//!    violent charge, raises the initial recommendation one level.
//!
//! Every function here is pure; results for many records can be computed in
//! parallel.

mod dmf;
mod level;
mod weights;

use std::fmt;
use std::path::Path;

pub use dmf::{Cell, DmfConfig};
pub use level::SupervisionLevel;
pub use weights::{
    compute_subscores, Breakpoint, Factor, FlagPrediction, RawScores, RiskFactors,
    ScaledPrediction, SubScores, Term, WeightConfig,
};

use crate::charge::{ChargeCatalog, ChargeClass, ChargeCode};
use crate::error::{ConfigError, Error};

/// Catalog, matrix and weights: everything the engine reads.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub catalog: ChargeCatalog,
    pub dmf: DmfConfig,
    pub weights: WeightConfig,
}

impl EngineConfig {
    /// Shipped catalog, matrix and placeholder weights.
    pub fn shipped() -> EngineConfig {
        EngineConfig {
            catalog: ChargeCatalog::shipped(),
            dmf: DmfConfig::shipped(),
            weights: WeightConfig::placeholder(),
        }
    }

    /// Loads `catalog.toml`, `dmf.toml` and `weights.toml` from `dir`, using
    /// the shipped file for any that is absent.
    pub fn from_dir(dir: &Path) -> Result<EngineConfig, Error> {
        let mut cfg = EngineConfig::shipped();
        let p = dir.join("catalog.toml");
        if p.exists() {
            cfg.catalog = ChargeCatalog::load(&p)?;
        }
        let p = dir.join("dmf.toml");
        if p.exists() {
            cfg.dmf = DmfConfig::load(&p)?;
        }
        let p = dir.join("weights.toml");
        if p.exists() {
            cfg.weights = WeightConfig::load(&p)?;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExclusionReason {
    Extradited,
    /// Normalized text of the triggering charge.
    ExclusionList(String),
    ViolentWithNvca(String),
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::Extradited => f.write_str("extradited"),
            ExclusionReason::ExclusionList(c) => write!(f, "exclusion-list:{c}"),
            ExclusionReason::ViolentWithNvca(c) => write!(f, "violent+nvca:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BumpupReason {
    BumpupList(String),
    NvcaWithoutViolentCharge,
}

impl fmt::Display for BumpupReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BumpupReason::BumpupList(c) => write!(f, "bumpup-list:{c}"),
            BumpupReason::NvcaWithoutViolentCharge => f.write_str("nvca-nonviolent"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PsaResult {
    pub subscores: SubScores,
    pub exclusion: Option<ExclusionReason>,
    /// Evaluated even under an exclusion so both charge sources can be
    /// compared component by component.
    pub bumpup: Option<BumpupReason>,
    /// Matrix recommendation before charge-based amendments.
    pub initial: SupervisionLevel,
    pub final_level: SupervisionLevel,
}

impl PsaResult {
    pub fn is_excluded(&self) -> bool {
        self.exclusion.is_some()
    }

    pub fn is_bumped(&self) -> bool {
        self.bumpup.is_some()
    }

    pub fn nvca_flag(&self) -> bool {
        self.subscores.nvca_flag
    }
}

/// Charges in the order used for reason reporting: lexicographic on the
/// normalized text.
pub fn ordered_charges(charges: &[ChargeCode]) -> Vec<&ChargeCode> {
    let mut keyed: Vec<(String, &ChargeCode)> =
        charges.iter().map(|c| (c.normalized(), c)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, c)| c).collect()
}

pub fn any_violent(charges: &[ChargeCode], catalog: &ChargeCatalog) -> bool {
    charges.iter().any(|c| catalog.violent_match(c).is_some())
}

/// Step 2.
pub fn check_exclusion(
    charges: &[ChargeCode],
    extradited: bool,
    nvca_flag: bool,
    catalog: &ChargeCatalog,
) -> Option<ExclusionReason> {
    if extradited {
        return Some(ExclusionReason::Extradited);
    }
    let ordered = ordered_charges(charges);
    if let Some(c) = ordered.iter().find(|c| catalog.exclusion_match(c).is_some()) {
        return Some(ExclusionReason::ExclusionList(c.normalized()));
    }
    if nvca_flag {
        if let Some(c) = ordered.iter().find(|c| catalog.violent_match(c).is_some()) {
            return Some(ExclusionReason::ViolentWithNvca(c.normalized()));
        }
    }
    None
}

/// Step 3. At the split cell the charge list decides between Release Not
/// Recommended (any felony, or a violent charge that is not a felony) and
/// SFPDP-ACM.
pub fn initial_recommendation(
    subscores: &SubScores,
    charges: &[ChargeCode],
    dmf: &DmfConfig,
    catalog: &ChargeCatalog,
) -> Result<SupervisionLevel, ConfigError> {
    match dmf.cell(subscores.fta, subscores.nca)? {
        Cell::Level(l) => Ok(l),
        Cell::Split => {
            let serious = charges.iter().any(|c| match c.charge_class {
                ChargeClass::Felony => true,
                ChargeClass::Misdemeanor | ChargeClass::Unspecified => {
                    catalog.violent_match(c).is_some()
                }
            });
            Ok(if serious {
                SupervisionLevel::ReleaseNotRecommended
            } else {
                SupervisionLevel::SfpdpAcm
            })
        }
        Cell::Missing => unreachable!("DmfConfig::cell reports missing cells as errors"),
    }
}

/// Step 4.
pub fn check_bumpup(
    charges: &[ChargeCode],
    nvca_flag: bool,
    catalog: &ChargeCatalog,
) -> Option<BumpupReason> {
    let ordered = ordered_charges(charges);
    if let Some(c) = ordered.iter().find(|c| catalog.bumpup_match(c).is_some()) {
        return Some(BumpupReason::BumpupList(c.normalized()));
    }
    if nvca_flag && !any_violent(charges, catalog) {
        return Some(BumpupReason::NvcaWithoutViolentCharge);
    }
    None
}

/// Steps 2–4 over given sub-scores.
pub fn assess(
    subscores: SubScores,
    charges: &[ChargeCode],
    extradited: bool,
    dmf: &DmfConfig,
    catalog: &ChargeCatalog,
) -> Result<PsaResult, ConfigError> {
    let exclusion = check_exclusion(charges, extradited, subscores.nvca_flag, catalog);
    let initial = initial_recommendation(&subscores, charges, dmf, catalog)?;
    let bumpup = check_bumpup(charges, subscores.nvca_flag, catalog);
    let final_level = if exclusion.is_some() {
        SupervisionLevel::ReleaseNotRecommended
    } else if bumpup.is_some() {
        initial.bumped()
    } else {
        initial
    };
    Ok(PsaResult {
        subscores,
        exclusion,
        bumpup,
        initial,
        final_level,
    })
}

/// NVCA flag with the current-offense-violence factor derived from `charges`
/// and every other factor taken from `history`.
pub fn nvca_flag_for(
    history: &RiskFactors,
    charges: &[ChargeCode],
    cfg: &EngineConfig,
) -> bool {
    let factors = RiskFactors {
        current_offense_violent: any_violent(charges, &cfg.catalog),
        ..*history
    };
    cfg.weights.nvca.flag(&factors)
}

/// All four steps from risk factors. `factors.current_offense_violent` is
/// re-derived from the charges.
pub fn assess_from_factors(
    factors: &RiskFactors,
    charges: &[ChargeCode],
    extradited: bool,
    cfg: &EngineConfig,
) -> Result<PsaResult, ConfigError> {
    let factors = RiskFactors {
        current_offense_violent: any_violent(charges, &cfg.catalog),
        ..*factors
    };
    let subscores = compute_subscores(&factors, &cfg.weights)?;
    assess(subscores, charges, extradited, &cfg.dmf, &cfg.catalog)
}
