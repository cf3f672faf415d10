//! Straight-line re-implementation of the assessment, used to cross-check the
//! engine. Shares only the catalog membership queries and the matrix cell
//! table with it.

use crate::charge::{ChargeCatalog, ChargeClass, ChargeCode};
use crate::engine::{
    BumpupReason, Cell, DmfConfig, ExclusionReason, Factor, PsaResult, RiskFactors, SubScores,
    SupervisionLevel, WeightConfig,
};
use crate::error::ConfigError;

struct Facts {
    text: String,
    violent: bool,
    exclusion: bool,
    bumpup: bool,
    felony: bool,
}

fn smallest(facts: &[Facts], pick: impl Fn(&Facts) -> bool) -> Option<String> {
    facts.iter().filter(|f| pick(f)).map(|f| f.text.clone()).min()
}

pub fn oracle_assess(
    subscores: SubScores,
    charges: &[ChargeCode],
    extradited: bool,
    dmf: &DmfConfig,
    catalog: &ChargeCatalog,
) -> Result<PsaResult, ConfigError> {
    let facts: Vec<Facts> = charges
        .iter()
        .map(|c| Facts {
            text: c.normalized(),
            violent: catalog.violent_match(c).is_some(),
            exclusion: catalog.exclusion_match(c).is_some(),
            bumpup: catalog.bumpup_match(c).is_some(),
            felony: c.charge_class == ChargeClass::Felony,
        })
        .collect();

    let mut exclusion = None;
    if extradited {
        exclusion = Some(ExclusionReason::Extradited);
    }
    if exclusion.is_none() {
        exclusion = smallest(&facts, |f| f.exclusion).map(ExclusionReason::ExclusionList);
    }
    if exclusion.is_none() && subscores.nvca_flag {
        exclusion = smallest(&facts, |f| f.violent).map(ExclusionReason::ViolentWithNvca);
    }

    let initial_rank: u8 = if (subscores.fta, subscores.nca) == dmf.split_cell() {
        if facts.iter().any(|f| f.felony || f.violent) {
            4
        } else {
            3
        }
    } else {
        match dmf.cell(subscores.fta, subscores.nca)? {
            Cell::Level(l) => l as u8,
            _ => {
                return Err(ConfigError::MissingCell {
                    fta: subscores.fta,
                    nca: subscores.nca,
                })
            }
        }
    };

    let mut bumpup = smallest(&facts, |f| f.bumpup).map(BumpupReason::BumpupList);
    if bumpup.is_none() && subscores.nvca_flag && !facts.iter().any(|f| f.violent) {
        bumpup = Some(BumpupReason::NvcaWithoutViolentCharge);
    }

    let final_rank = if exclusion.is_some() {
        4
    } else if bumpup.is_some() {
        (initial_rank + 1).min(4)
    } else {
        initial_rank
    };
    let level = |r: u8| match r {
        1 => SupervisionLevel::OrNas,
        2 => SupervisionLevel::OrMinimum,
        3 => SupervisionLevel::SfpdpAcm,
        _ => SupervisionLevel::ReleaseNotRecommended,
    };
    Ok(PsaResult {
        subscores,
        exclusion,
        bumpup,
        initial: level(initial_rank),
        final_level: level(final_rank),
    })
}

/// NVCA flag from the weight table, with the current offense's violence read
/// off `charges`.
pub fn oracle_nvca(
    history: &RiskFactors,
    charges: &[ChargeCode],
    weights: &WeightConfig,
    catalog: &ChargeCatalog,
) -> bool {
    let violent = charges.iter().any(|c| catalog.violent_match(c).is_some());
    let p = &weights.nvca;
    let young = history.age_at_arrest <= p.young_age_max;
    let mut total: i64 = 0;
    for t in &p.terms {
        let count: u32 = match t.factor {
            Factor::YoungAtArrest => young as u32,
            Factor::PendingCharge => history.pending_charge as u32,
            Factor::PriorMisdemeanorConviction => history.prior_misdemeanor_conviction as u32,
            Factor::PriorFelonyConviction => history.prior_felony_conviction as u32,
            Factor::PriorConviction => history.prior_conviction as u32,
            Factor::PriorViolentConvictions => history.prior_violent_convictions,
            Factor::FtasPastTwoYears => history.ftas_past_two_years,
            Factor::FtaOlderThanTwoYears => history.fta_older_than_two_years as u32,
            Factor::PriorIncarceration => history.prior_incarceration as u32,
            Factor::CurrentOffenseViolent => violent as u32,
            Factor::CurrentViolentAndYoung => (violent && young) as u32,
        };
        let count = match t.cap {
            Some(cap) if count > cap => cap,
            _ => count,
        };
        total += t.weight * i64::from(count);
    }
    total >= p.threshold
}
