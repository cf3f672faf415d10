use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::hypothesis::{bonferroni, two_proportion_test, wilcoxon_rank_sum};
use crate::counterfactual::AuditPair;
use crate::engine::{PsaResult, SupervisionLevel};
use crate::error::StatsError;
use crate::linkage::{CourtCase, Race};

/// Significance level for the rate-table markers, before the Bonferroni
/// split across the four components.
pub const DEFAULT_ALPHA: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Exclusion,
    Bumpup,
    Nvca,
    Recommendation,
}

impl Component {
    pub const ALL: [Component; 4] = [
        Component::Exclusion,
        Component::Bumpup,
        Component::Nvca,
        Component::Recommendation,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Component::Exclusion => "exclusion",
            Component::Bumpup => "bumpup",
            Component::Nvca => "nvca",
            Component::Recommendation => "recommendation",
        }
    }

    fn indicator(self, r: &PsaResult) -> bool {
        match self {
            Component::Exclusion => r.is_excluded(),
            Component::Bumpup => r.is_bumped(),
            Component::Nvca => r.nvca_flag(),
            Component::Recommendation => unreachable!("ordinal component"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentRow {
    pub component: Component,
    /// Rate, or mean rank for the recommendation.
    pub booking: f64,
    pub conviction: f64,
    /// booking − conviction
    pub difference: f64,
    /// z for the proportion tests, continuity-corrected rank-sum z for the
    /// recommendation. `None` when the test is undefined on this data.
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub significant: bool,
    /// Why the test is missing, when it is.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub n: usize,
    pub alpha: f64,
    pub rows: Vec<ComponentRow>,
}

impl RateTable {
    pub fn row(&self, c: Component) -> &ComponentRow {
        self.rows.iter().find(|r| r.component == c).expect("all components present")
    }
}

fn ranks(pairs: &[&AuditPair], booking: bool) -> Vec<f64> {
    pairs
        .iter()
        .map(|p| {
            let r = if booking { &p.booking } else { &p.conviction };
            r.final_level.rank() as f64
        })
        .collect()
}

/// Component rates under each charge source with booking-vs-conviction tests.
/// Significance is Bonferroni-adjusted over the four components.
pub fn rate_table(pairs: &[&AuditPair], alpha: f64) -> Result<RateTable, StatsError> {
    if pairs.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let n = pairs.len() as u64;
    let nf = n as f64;
    let mut rows = Vec::with_capacity(4);
    for c in Component::ALL {
        let (booking, conviction, test) = if c == Component::Recommendation {
            let (b, v) = (ranks(pairs, true), ranks(pairs, false));
            let mb = b.iter().sum::<f64>() / nf;
            let mv = v.iter().sum::<f64>() / nf;
            (mb, mv, wilcoxon_rank_sum(&b, &v).map(|r| (r.z, r.p_value)))
        } else {
            let xb = pairs.iter().filter(|p| c.indicator(&p.booking)).count() as u64;
            let xv = pairs.iter().filter(|p| c.indicator(&p.conviction)).count() as u64;
            (
                xb as f64 / nf,
                xv as f64 / nf,
                two_proportion_test(xb, n, xv, n).map(|r| (r.statistic, r.p_value)),
            )
        };
        let (statistic, p_value, note) = match test {
            Ok((s, p)) => (Some(s), Some(p), None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        rows.push(ComponentRow {
            component: c,
            booking,
            conviction,
            difference: booking - conviction,
            statistic,
            p_value,
            significant: false,
            note,
        });
    }
    // An untested component still counts toward m.
    let ps: Vec<f64> = rows.iter().map(|r| r.p_value.unwrap_or(1.0)).collect();
    for (row, flag) in rows.iter_mut().zip(bonferroni(&ps, alpha)?) {
        row.significant = flag;
    }
    Ok(RateTable {
        n: pairs.len(),
        alpha,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffectedTable {
    pub n: usize,
    pub exclusion: f64,
    pub bumpup: f64,
    pub nvca: f64,
    /// Final recommendation strictly higher under booking charges.
    pub recommendation: f64,
    pub counts: [usize; 4],
}

impl AffectedTable {
    pub fn fraction(&self, c: Component) -> f64 {
        match c {
            Component::Exclusion => self.exclusion,
            Component::Bumpup => self.bumpup,
            Component::Nvca => self.nvca,
            Component::Recommendation => self.recommendation,
        }
    }
}

/// Fractions of records with a component under booking charges but not under
/// conviction charges.
pub fn proportion_affected(pairs: &[&AuditPair]) -> Result<AffectedTable, StatsError> {
    if pairs.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut counts = [0usize; 4];
    for p in pairs {
        let d = &p.deltas;
        counts[0] += d.exclusion_lost as usize;
        counts[1] += d.bumpup_lost as usize;
        counts[2] += d.nvca_lost as usize;
        counts[3] += (d.recommendation_delta > 0) as usize;
    }
    let n = pairs.len() as f64;
    Ok(AffectedTable {
        n: pairs.len(),
        exclusion: counts[0] as f64 / n,
        bumpup: counts[1] as f64 / n,
        nvca: counts[2] as f64 / n,
        recommendation: counts[3] as f64 / n,
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Black,
    NonBlack,
}

impl Group {
    pub const ALL: [Group; 2] = [Group::Black, Group::NonBlack];

    pub fn label(self) -> &'static str {
        match self {
            Group::Black => "B",
            Group::NonBlack => "non-B",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How a record's group is decided when race labels disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupRule {
    /// B if any of the person's cases in the court file says B.
    #[default]
    AnyB,
    /// B if any of the record's matched cases says B.
    LinkedCases,
}

impl FromStr for GroupRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "any-b" | "anyb" => Ok(GroupRule::AnyB),
            "linked" | "linked-cases" => Ok(GroupRule::LinkedCases),
            _ => Err(format!("unknown group rule {s:?} (any-b | linked)")),
        }
    }
}

impl fmt::Display for GroupRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupRule::AnyB => "any-b",
            GroupRule::LinkedCases => "linked",
        })
    }
}

pub fn group_labels(pairs: &[AuditPair], rule: GroupRule, cases: &[CourtCase]) -> Vec<Group> {
    let black_people: BTreeSet<&str> = cases
        .iter()
        .filter(|c| c.race == Race::B)
        .map(|c| c.sfid.as_str())
        .collect();
    pairs
        .iter()
        .map(|p| {
            let black = match rule {
                GroupRule::AnyB => black_people.contains(p.sfid.as_str()),
                GroupRule::LinkedCases => p.races.contains(&Race::B),
            };
            if black {
                Group::Black
            } else {
                Group::NonBlack
            }
        })
        .collect()
}

/// Pairs split by group; both groups are always present.
pub fn partition<'a>(pairs: &'a [AuditPair], groups: &[Group]) -> BTreeMap<Group, Vec<&'a AuditPair>> {
    let mut out: BTreeMap<Group, Vec<&AuditPair>> =
        Group::ALL.iter().map(|g| (*g, Vec::new())).collect();
    for (p, g) in pairs.iter().zip(groups) {
        out.entry(*g).or_default().push(p);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub group: String,
    pub n: usize,
    pub counts: [usize; 4],
    /// All zero for an empty group.
    pub fractions: [f64; 4],
    pub empty: bool,
}

pub fn histogram(group: &str, levels: impl Iterator<Item = SupervisionLevel>) -> Histogram {
    let mut counts = [0usize; 4];
    for l in levels {
        counts[l.rank() as usize - 1] += 1;
    }
    let n: usize = counts.iter().sum();
    let fractions = if n == 0 {
        [0.0; 4]
    } else {
        counts.map(|c| c as f64 / n as f64)
    };
    Histogram {
        group: group.to_string(),
        n,
        counts,
        fractions,
        empty: n == 0,
    }
}

/// Booking-side initial recommendation counts per group.
pub fn initial_distribution(pairs: &[AuditPair], groups: &[Group]) -> Vec<Histogram> {
    partition(pairs, groups)
        .into_iter()
        .map(|(g, ps)| histogram(g.label(), ps.iter().map(|p| p.booking.initial)))
        .collect()
}
