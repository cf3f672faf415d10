//! Conviction charges from dispositions, and re-scoring under them.

use std::collections::HashSet;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use crate::charge::ChargeCode;
use crate::engine::{assess, nvca_flag_for, EngineConfig, PsaResult, SubScores};
use crate::error::{ConfigError, Error, NotDisposed};
use crate::linkage::{CourtCase, MatchResult, PsaRecord, Race};

/// How disposition codes are read.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispositionPolicy {
    /// Codes strictly above this are convictions.
    pub conviction_threshold: i32,
    /// Pleaded guilty to other charges.
    pub plea_to_other_code: i32,
    /// In a resolved case holding a plea-to-other code, charges coded 0 are
    /// the ones pleaded to.
    pub companion_zero_rule: bool,
    /// Codes that do not close a charge.
    pub pending_codes: Vec<i32>,
}

impl Default for DispositionPolicy {
    fn default() -> Self {
        DispositionPolicy {
            conviction_threshold: 159,
            plea_to_other_code: 72,
            companion_zero_rule: true,
            pending_codes: Vec::new(),
        }
    }
}

impl DispositionPolicy {
    pub fn load(path: &Path) -> Result<DispositionPolicy, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_toml_str(&text, &path.display().to_string())?)
    }

    pub fn from_toml_str(text: &str, name: &str) -> Result<DispositionPolicy, ConfigError> {
        let p: DispositionPolicy =
            toml::from_str(text).map_err(|e| ConfigError::invalid(name, e.to_string()))?;
        if p.conviction_threshold <= 0 {
            return Err(ConfigError::invalid(name, "conviction_threshold must be positive"));
        }
        Ok(p)
    }

    fn is_terminal(&self, code: Option<i32>) -> bool {
        code.is_some_and(|c| !self.pending_codes.contains(&c))
    }
}

/// Every filed charge carries a terminal disposition. A case with no filed
/// charges is disposed.
pub fn fully_disposed(case: &CourtCase, policy: &DispositionPolicy) -> bool {
    case.filed_charges
        .iter()
        .all(|f| policy.is_terminal(f.disposition))
}

fn has_plea_to_other(case: &CourtCase, policy: &DispositionPolicy) -> bool {
    case.filed_charges
        .iter()
        .any(|f| f.disposition == Some(policy.plea_to_other_code))
}

/// Whether a charge coded `code` in `case` is a conviction.
pub fn is_conviction(code: i32, case: &CourtCase, policy: &DispositionPolicy) -> bool {
    if code > policy.conviction_threshold {
        return true;
    }
    policy.companion_zero_rule
        && code == 0
        && fully_disposed(case, policy)
        && has_plea_to_other(case, policy)
}

/// Convictions in one case, in filing order.
pub fn case_convictions<'a>(
    case: &'a CourtCase,
    policy: &DispositionPolicy,
) -> Result<Vec<&'a ChargeCode>, NotDisposed> {
    if !fully_disposed(case, policy) {
        return Err(NotDisposed {
            court_number: case.court_number.clone(),
        });
    }
    Ok(case
        .filed_charges
        .iter()
        .filter(|f| f.disposition.is_some_and(|d| is_conviction(d, case, policy)))
        .map(|f| &f.charge)
        .collect())
}

fn union_by_text<'a>(charges: impl Iterator<Item = &'a ChargeCode>) -> Vec<ChargeCode> {
    let mut seen = HashSet::new();
    charges
        .filter(|c| seen.insert(c.normalized()))
        .cloned()
        .collect()
}

/// Union of conviction charges over the matched cases, de-duplicated by
/// normalized text.
pub fn conviction_charges(
    m: &MatchResult,
    policy: &DispositionPolicy,
) -> Result<Vec<ChargeCode>, NotDisposed> {
    let mut all = Vec::new();
    for case in &m.matched_cases {
        all.extend(case_convictions(case, policy)?);
    }
    Ok(union_by_text(all.into_iter()))
}

/// Booking charges for the booking-side assessment: those listed in the
/// matched court cases, or the form's own list when the cases list none.
pub fn booking_charges(m: &MatchResult) -> Vec<ChargeCode> {
    let court = union_by_text(m.matched_cases.iter().flat_map(|c| c.booking_charges.iter()));
    if court.is_empty() {
        m.psa.booking_charges.clone()
    } else {
        court
    }
}

/// A plea to charges on another case, with nothing on this one.
pub fn plea_elsewhere_only(m: &MatchResult, policy: &DispositionPolicy) -> bool {
    m.matched_cases.iter().any(|c| has_plea_to_other(c, policy))
        && matches!(conviction_charges(m, policy), Ok(v) if v.is_empty())
}

fn assess_with(
    psa: &PsaRecord,
    charges: &[ChargeCode],
    extradited: bool,
    cfg: &EngineConfig,
) -> Result<PsaResult, ConfigError> {
    let nvca = nvca_flag_for(&psa.factors, charges, cfg);
    let subscores = SubScores::new(psa.subscores.fta, psa.subscores.nca, nvca)?;
    assess(subscores, charges, extradited, &cfg.dmf, &cfg.catalog)
}

/// The record re-scored on `charges` as booked, keeping FTA and NCA from the
/// form and recomputing the NVCA flag.
pub fn booking_assess(
    psa: &PsaRecord,
    charges: &[ChargeCode],
    cfg: &EngineConfig,
) -> Result<PsaResult, ConfigError> {
    assess_with(psa, charges, psa.extradited, cfg)
}

/// The record re-scored on conviction charges. Extradition is not carried
/// over.
pub fn counterfactual_assess(
    psa: &PsaRecord,
    conv_charges: &[ChargeCode],
    cfg: &EngineConfig,
) -> Result<PsaResult, ConfigError> {
    assess_with(psa, conv_charges, false, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Deltas {
    pub exclusion_lost: bool,
    pub bumpup_lost: bool,
    pub nvca_lost: bool,
    /// Booking final rank minus conviction final rank.
    pub recommendation_delta: i8,
}

impl Deltas {
    pub fn between(booking: &PsaResult, conviction: &PsaResult) -> Deltas {
        Deltas {
            exclusion_lost: booking.is_excluded() && !conviction.is_excluded(),
            bumpup_lost: booking.is_bumped() && !conviction.is_bumped(),
            nvca_lost: booking.nvca_flag() && !conviction.nvca_flag(),
            recommendation_delta: booking.final_level.rank() as i8
                - conviction.final_level.rank() as i8,
        }
    }

    pub fn any_lost(&self) -> bool {
        self.exclusion_lost || self.bumpup_lost || self.nvca_lost
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditPair {
    pub record_id: String,
    pub sfid: String,
    pub court_numbers: Vec<String>,
    /// Race labels on the matched cases.
    pub races: Vec<Race>,
    pub booking_charges: Vec<ChargeCode>,
    pub conviction_charges: Vec<ChargeCode>,
    pub booking: PsaResult,
    pub conviction: PsaResult,
    pub deltas: Deltas,
    /// Pleaded to charges on another case and none on this one; such records
    /// are left out of the sensitivity tables.
    pub plea_elsewhere: bool,
}

/// Why a matched record produced no pair.
#[derive(Debug, Clone, PartialEq)]
pub enum Skipped {
    NotDisposed(NotDisposed),
    Engine { record_id: String, error: ConfigError },
}

#[derive(Debug, Default)]
pub struct AuditOutcome {
    pub pairs: Vec<AuditPair>,
    pub not_disposed: Vec<String>,
    pub engine_errors: Vec<(String, ConfigError)>,
}

pub fn audit_pair(
    m: &MatchResult,
    policy: &DispositionPolicy,
    cfg: &EngineConfig,
) -> Result<AuditPair, Skipped> {
    let conv = conviction_charges(m, policy).map_err(Skipped::NotDisposed)?;
    let booked = booking_charges(m);
    let engine_err = |error| Skipped::Engine {
        record_id: m.psa.record_id.clone(),
        error,
    };
    let booking = booking_assess(&m.psa, &booked, cfg).map_err(engine_err)?;
    let conviction = counterfactual_assess(&m.psa, &conv, cfg).map_err(engine_err)?;
    Ok(AuditPair {
        record_id: m.psa.record_id.clone(),
        sfid: m.psa.sfid.clone(),
        court_numbers: m.matched_cases.iter().map(|c| c.court_number.clone()).collect(),
        races: m.matched_cases.iter().map(|c| c.race).collect(),
        deltas: Deltas::between(&booking, &conviction),
        plea_elsewhere: m.matched_cases.iter().any(|c| has_plea_to_other(c, policy))
            && conv.is_empty(),
        booking_charges: booked,
        conviction_charges: conv,
        booking,
        conviction,
    })
}

/// One pair per matched, fully disposed record, in input order.
pub fn build_audit_pairs(
    matches: &[MatchResult],
    policy: &DispositionPolicy,
    cfg: &EngineConfig,
) -> AuditOutcome {
    let results: Vec<Result<AuditPair, Skipped>> = matches
        .par_iter()
        .map(|m| audit_pair(m, policy, cfg))
        .collect();
    let mut out = AuditOutcome::default();
    for (m, r) in matches.iter().zip(results) {
        match r {
            Ok(p) => out.pairs.push(p),
            Err(Skipped::NotDisposed(_)) => out.not_disposed.push(m.psa.record_id.clone()),
            Err(Skipped::Engine { record_id, error }) => out.engine_errors.push((record_id, error)),
        }
    }
    out
}

/// Pairs kept under the sensitivity rule.
pub fn sensitivity_subset(pairs: &[AuditPair]) -> Vec<AuditPair> {
    pairs.iter().filter(|p| !p.plea_elsewhere).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{RiskFactors, SupervisionLevel};
    use crate::linkage::{FiledCharge, MatchStatus, RecordedComponents};
    use chrono::NaiveDate;

    fn code(s: &str) -> ChargeCode {
        ChargeCode::parse(s).unwrap()
    }

    fn case(filed: &[(&str, Option<i32>)]) -> CourtCase {
        CourtCase {
            court_number: "C1".into(),
            sfid: "S1".into(),
            name: String::new(),
            dob: None,
            arrest_date: NaiveDate::from_ymd_opt(2016, 7, 1).unwrap(),
            race: Race::B,
            booking_charges: filed.iter().map(|(c, _)| code(c)).collect(),
            filed_charges: filed
                .iter()
                .map(|(c, d)| FiledCharge {
                    charge: code(c),
                    disposition: *d,
                })
                .collect(),
        }
    }

    fn matched(cases: Vec<CourtCase>, fta: u8, nca: u8) -> MatchResult {
        MatchResult {
            psa: PsaRecord {
                record_id: "1".into(),
                sfid: "S1".into(),
                name: String::new(),
                dob: None,
                arrest_date: NaiveDate::from_ymd_opt(2016, 7, 1).unwrap(),
                psa_date: NaiveDate::from_ymd_opt(2016, 7, 1).unwrap(),
                subscores: SubScores::new(fta, nca, false).unwrap(),
                booking_charges: Vec::new(),
                recorded: RecordedComponents::default(),
                factors: RiskFactors {
                    age_at_arrest: 40,
                    ..Default::default()
                },
                extradited: false,
            },
            matched_cases: cases,
            status: MatchStatus::Matched,
            candidate_count: 1,
        }
    }

    #[test]
    fn threshold_and_companion_zero() {
        let p = DispositionPolicy::default();
        let c = case(&[("240 PC M", Some(160))]);
        assert!(is_conviction(160, &c, &p));
        assert!(!is_conviction(159, &c, &p));
        let c = case(&[("187(A) PC F", Some(72)), ("240 PC M", Some(0))]);
        assert!(!is_conviction(72, &c, &p));
        assert!(is_conviction(0, &c, &p));
        let off = DispositionPolicy {
            companion_zero_rule: false,
            ..p.clone()
        };
        assert!(!is_conviction(0, &c, &off));
        let c = case(&[("240 PC M", Some(0))]);
        assert!(!is_conviction(0, &c, &p));
    }

    #[test]
    fn conviction_sets() {
        let p = DispositionPolicy::default();
        let m = matched(vec![case(&[("187(A) PC F", Some(10)), ("240 PC M", Some(160))])], 2, 3);
        assert_eq!(conviction_charges(&m, &p).unwrap(), vec![code("240 PC M")]);

        let m = matched(vec![case(&[("187(A) PC F", Some(10)), ("240 PC M", Some(10))])], 2, 3);
        assert!(conviction_charges(&m, &p).unwrap().is_empty());

        let m = matched(vec![case(&[("187(A) PC F", Some(72)), ("240 PC M", Some(10))])], 2, 3);
        assert!(conviction_charges(&m, &p).unwrap().is_empty());
        assert!(plea_elsewhere_only(&m, &p));

        let m = matched(vec![case(&[("187(A) PC F", Some(72)), ("240 PC M", Some(0))])], 2, 3);
        assert_eq!(conviction_charges(&m, &p).unwrap(), vec![code("240 PC M")]);
        assert!(!plea_elsewhere_only(&m, &p));
    }

    #[test]
    fn pending_blocks_conviction_set() {
        let p = DispositionPolicy::default();
        let m = matched(vec![case(&[("187(A) PC F", None), ("240 PC M", Some(160))])], 2, 3);
        assert!(!fully_disposed(&m.matched_cases[0], &p));
        assert_eq!(
            conviction_charges(&m, &p),
            Err(NotDisposed {
                court_number: "C1".into()
            })
        );
        let with_pending = DispositionPolicy {
            pending_codes: vec![5],
            ..p
        };
        assert!(!fully_disposed(&case(&[("240 PC M", Some(5))]), &with_pending));
    }

    #[test]
    fn identity_when_everything_convicted() {
        let cfg = EngineConfig::shipped();
        let p = DispositionPolicy::default();
        let m = matched(vec![case(&[("245(A)(1) PC F", Some(200)), ("459 PC F", Some(170))])], 3, 3);
        let pair = audit_pair(&m, &p, &cfg).unwrap();
        assert_eq!(pair.booking, pair.conviction);
        assert_eq!(pair.deltas, Deltas::default());
    }

    #[test]
    fn exclusion_reduced_to_bumpup_keeps_top_level() {
        let cfg = EngineConfig::shipped();
        let p = DispositionPolicy::default();
        let m = matched(
            vec![case(&[("273.5(A) PC F", Some(10)), ("273.5(A) PC M", Some(170))])],
            4,
            4,
        );
        let pair = audit_pair(&m, &p, &cfg).unwrap();
        assert_eq!(pair.booking.initial, SupervisionLevel::SfpdpAcm);
        assert_eq!(pair.booking.final_level, SupervisionLevel::ReleaseNotRecommended);
        assert_eq!(pair.conviction.final_level, SupervisionLevel::ReleaseNotRecommended);
        assert!(pair.deltas.exclusion_lost);
        assert_eq!(pair.deltas.recommendation_delta, 0);
    }

    #[test]
    fn empty_conviction_set_at_or_nas() {
        let cfg = EngineConfig::shipped();
        let m = matched(Vec::new(), 2, 3);
        let r = counterfactual_assess(&m.psa, &[], &cfg).unwrap();
        assert_eq!(r.final_level, SupervisionLevel::OrNas);
        assert!(build_audit_pairs(&[], &DispositionPolicy::default(), &cfg).pairs.is_empty());
    }

    #[test]
    fn policy_file() {
        let p = DispositionPolicy::from_toml_str("conviction_threshold = 100\n", "t").unwrap();
        assert_eq!(p.conviction_threshold, 100);
        assert_eq!(p.plea_to_other_code, 72);
        assert!(DispositionPolicy::from_toml_str("conviction_threshold = 0\n", "t").is_err());
        assert!(DispositionPolicy::from_toml_str("bogus = 1\n", "t").is_err());
    }
}
