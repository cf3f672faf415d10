//! De-duplication of assessment records and linkage to court cases.

mod records;

use std::collections::{BTreeMap, HashSet};

use chrono::{Duration, NaiveDate};
use rayon::prelude::*;

use crate::charge::{ChargeCode, SectionKey};

pub use records::{
    age_on, compare_ids, read_court, read_court_file, read_psa, read_psa_file, write_court, write_psa,
    CourtCase, FiledCharge, Parsed, PsaRecord, PsaRow, Race, RecordedComponents, COURT_COLUMNS,
    PSA_COLUMNS,
};

/// Days before the assessment's arrest date a court arrest date may fall.
pub const WINDOW_BEFORE_DAYS: i64 = 1;
/// Days after.
pub const WINDOW_AFTER_DAYS: i64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchStatus {
    Matched,
    Unresolved,
    DroppedIncomplete,
    DroppedDuplicate,
}

impl MatchStatus {
    pub fn label(self) -> &'static str {
        match self {
            MatchStatus::Matched => "matched",
            MatchStatus::Unresolved => "unresolved",
            MatchStatus::DroppedIncomplete => "dropped-incomplete",
            MatchStatus::DroppedDuplicate => "dropped-duplicate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub psa: PsaRecord,
    /// Sorted by court number.
    pub matched_cases: Vec<CourtCase>,
    pub status: MatchStatus,
    /// Candidates inside the date window before tie-breaking; kept for the
    /// review file.
    pub candidate_count: usize,
}

/// Splits rows into complete records and the rows missing a component.
pub fn filter_complete(rows: Vec<PsaRow>) -> (Vec<PsaRecord>, Vec<PsaRow>) {
    let mut kept = Vec::with_capacity(rows.len());
    let mut dropped = Vec::new();
    for row in rows {
        match row.clone().into_record() {
            Some(r) => kept.push(r),
            None => dropped.push(row),
        }
    }
    (kept, dropped)
}

/// Duplicate key: person, administration date and the multiset of normalized
/// booking charge strings.
pub type DedupKey = (String, NaiveDate, Vec<String>);

pub fn dedup_key(r: &PsaRecord) -> DedupKey {
    let mut charges: Vec<String> = r.booking_charges.iter().map(ChargeCode::normalized).collect();
    charges.sort();
    (r.sfid.clone(), r.psa_date, charges)
}

/// Keeps one record per [`DedupKey`]: the one with the smallest record id.
/// Output is ordered by (sfid, psa_date, record id) whatever the input order.
/// Returns the kept records and the dropped duplicates.
pub fn deduplicate(records: Vec<PsaRecord>) -> (Vec<PsaRecord>, Vec<PsaRecord>) {
    let mut keyed: Vec<(DedupKey, PsaRecord)> =
        records.into_iter().map(|r| (dedup_key(&r), r)).collect();
    keyed.sort_by(|(ka, a), (kb, b)| {
        ka.cmp(kb)
            .then_with(|| compare_ids(&a.record_id, &b.record_id))
            .then_with(|| a.arrest_date.cmp(&b.arrest_date))
    });
    let mut kept: Vec<PsaRecord> = Vec::new();
    let mut dups = Vec::new();
    let mut last: Option<DedupKey> = None;
    for (k, r) in keyed {
        if last.as_ref() == Some(&k) {
            dups.push(r);
        } else {
            last = Some(k);
            kept.push(r);
        }
    }
    kept.sort_by(|a, b| {
        a.sfid
            .cmp(&b.sfid)
            .then(a.psa_date.cmp(&b.psa_date))
            .then_with(|| compare_ids(&a.record_id, &b.record_id))
    });
    (kept, dups)
}

/// Court cases grouped by sfid, each group sorted by court number.
#[derive(Debug, Default)]
pub struct CaseIndex<'a> {
    by_sfid: BTreeMap<&'a str, Vec<&'a CourtCase>>,
}

impl<'a> CaseIndex<'a> {
    pub fn new(cases: &'a [CourtCase]) -> CaseIndex<'a> {
        let mut by_sfid: BTreeMap<&str, Vec<&CourtCase>> = BTreeMap::new();
        for c in cases {
            by_sfid.entry(c.sfid.as_str()).or_default().push(c);
        }
        for v in by_sfid.values_mut() {
            v.sort_by(|a, b| compare_ids(&a.court_number, &b.court_number));
        }
        CaseIndex { by_sfid }
    }

    /// Cases for the same person whose arrest date falls in the window.
    pub fn candidates(&self, psa: &PsaRecord) -> Vec<&'a CourtCase> {
        self.by_sfid
            .get(psa.sfid.as_str())
            .map(|cases| {
                cases
                    .iter()
                    .copied()
                    .filter(|c| in_window(psa.arrest_date, c.arrest_date))
                    .collect()
            })
            .unwrap_or_default()
    }
}

pub fn in_window(psa_arrest: NaiveDate, court_arrest: NaiveDate) -> bool {
    let lo = psa_arrest - Duration::days(WINDOW_BEFORE_DAYS);
    let hi = psa_arrest + Duration::days(WINDOW_AFTER_DAYS);
    (lo..=hi).contains(&court_arrest)
}

pub fn find_candidates<'a>(psa: &PsaRecord, cases: &'a [CourtCase]) -> Vec<&'a CourtCase> {
    CaseIndex::new(cases).candidates(psa)
}

fn contains_charge(case: &CourtCase, key: &SectionKey) -> bool {
    case.all_charges().any(|c| &c.section_key() == key)
}

/// Applies the tie-break rules to the window candidates.
///
/// One candidate is the match. With several, those containing the
/// assessment's top charge survive; none surviving leaves the record
/// unresolved. Several survivors are narrowed by the second charge, and if
/// that leaves none, or more than one, every remaining case is a match.
pub fn resolve_match(psa: &PsaRecord, candidates: &[&CourtCase]) -> MatchResult {
    let mut sorted: Vec<&CourtCase> = candidates.to_vec();
    sorted.sort_by(|a, b| compare_ids(&a.court_number, &b.court_number));
    sorted.dedup_by(|a, b| a.court_number == b.court_number);
    let candidate_count = sorted.len();
    let chosen: Vec<&CourtCase> = match sorted.len() {
        0 => Vec::new(),
        1 => sorted,
        _ => match psa.booking_charges.first() {
            None => Vec::new(),
            Some(top) => {
                let key = top.section_key();
                let survivors: Vec<&CourtCase> =
                    sorted.into_iter().filter(|c| contains_charge(c, &key)).collect();
                match (survivors.len(), psa.booking_charges.get(1)) {
                    (0 | 1, _) | (_, None) => survivors,
                    (_, Some(second)) => {
                        let key = second.section_key();
                        let narrowed: Vec<&CourtCase> = survivors
                            .iter()
                            .copied()
                            .filter(|c| contains_charge(c, &key))
                            .collect();
                        if narrowed.is_empty() {
                            survivors
                        } else {
                            narrowed
                        }
                    }
                }
            }
        },
    };
    let status = if chosen.is_empty() {
        MatchStatus::Unresolved
    } else {
        MatchStatus::Matched
    };
    MatchResult {
        psa: psa.clone(),
        matched_cases: chosen.into_iter().cloned().collect(),
        status,
        candidate_count,
    }
}

/// Everything the linkage stage produced, with every input row accounted for.
#[derive(Debug, Default)]
pub struct LinkageOutcome {
    pub input_count: usize,
    pub incomplete: Vec<PsaRow>,
    pub duplicates: Vec<PsaRecord>,
    pub matched: Vec<MatchResult>,
    pub unresolved: Vec<MatchResult>,
}

impl LinkageOutcome {
    /// input = matched + unresolved + incomplete + duplicates
    pub fn is_conserved(&self) -> bool {
        self.input_count
            == self.matched.len()
                + self.unresolved.len()
                + self.incomplete.len()
                + self.duplicates.len()
    }

    /// Case numbers claimed by more than one matched record.
    pub fn shared_cases(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut shared = std::collections::BTreeSet::new();
        for m in &self.matched {
            for c in &m.matched_cases {
                if !seen.insert(c.court_number.clone()) {
                    shared.insert(c.court_number.clone());
                }
            }
        }
        shared.into_iter().collect()
    }
}

/// Filter, de-duplicate and link. Records are linked in parallel; output
/// order follows [`deduplicate`].
pub fn link(rows: Vec<PsaRow>, cases: &[CourtCase]) -> LinkageOutcome {
    let input_count = rows.len();
    let (complete, incomplete) = filter_complete(rows);
    let (unique, duplicates) = deduplicate(complete);
    let index = CaseIndex::new(cases);
    let results: Vec<MatchResult> = unique
        .par_iter()
        .map(|r| resolve_match(r, &index.candidates(r)))
        .collect();
    let (matched, unresolved) = results
        .into_iter()
        .partition(|m| m.status == MatchStatus::Matched);
    LinkageOutcome {
        input_count,
        incomplete,
        duplicates,
        matched,
        unresolved,
    }
}
