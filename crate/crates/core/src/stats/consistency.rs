use std::collections::BTreeMap;

use crate::linkage::{CourtCase, Race};

/// Row i, column j: mean over people with more than one case and at least
/// one labelled i, of the percent of their cases labelled j.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyMatrix {
    /// Indexed by [`Race::index`]; `None` for rows nobody qualifies for.
    pub rows: [Option<[f64; 10]>; 10],
    /// People contributing to each row.
    pub row_counts: [usize; 10],
    /// People with more than one case.
    pub individuals: usize,
}

impl ConsistencyMatrix {
    pub fn get(&self, row: Race, col: Race) -> Option<f64> {
        self.rows[row.index()].map(|r| r[col.index()])
    }
}

pub fn race_consistency(cases: &[CourtCase]) -> ConsistencyMatrix {
    let mut people: BTreeMap<&str, [usize; 10]> = BTreeMap::new();
    for c in cases {
        people.entry(c.sfid.as_str()).or_insert([0; 10])[c.race.index()] += 1;
    }
    let mut sums = [[0.0f64; 10]; 10];
    let mut row_counts = [0usize; 10];
    let mut individuals = 0;
    for counts in people.values() {
        let total: usize = counts.iter().sum();
        if total <= 1 {
            continue;
        }
        individuals += 1;
        let pct = counts.map(|c| 100.0 * c as f64 / total as f64);
        for i in (0..10).filter(|&i| counts[i] > 0) {
            row_counts[i] += 1;
            for j in 0..10 {
                sums[i][j] += pct[j];
            }
        }
    }
    let mut rows = [None; 10];
    for i in 0..10 {
        if row_counts[i] > 0 {
            rows[i] = Some(sums[i].map(|s| s / row_counts[i] as f64));
        }
    }
    ConsistencyMatrix {
        rows,
        row_counts,
        individuals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    pub(crate) fn case(n: usize, sfid: &str, race: Race) -> CourtCase {
        CourtCase {
            court_number: format!("C{n}"),
            sfid: sfid.into(),
            name: String::new(),
            dob: None,
            arrest_date: NaiveDate::from_ymd_opt(2016, 1, 1).unwrap(),
            race,
            booking_charges: vec![],
            filed_charges: vec![],
        }
    }

    #[test]
    fn stable_labels_give_identity() {
        let cases = vec![
            case(1, "a", Race::B),
            case(2, "a", Race::B),
            case(3, "b", Race::W),
            case(4, "b", Race::W),
        ];
        let m = race_consistency(&cases);
        assert_eq!(m.get(Race::B, Race::B), Some(100.0));
        assert_eq!(m.get(Race::W, Race::W), Some(100.0));
        assert_eq!(m.get(Race::W, Race::B), Some(0.0));
        assert_eq!(m.get(Race::H, Race::H), None);
    }
}
