//! Seeded synthetic assessment and court datasets with planted ground truth,
//! plus the independent oracle used by the property tests.
//!
//! Planted quantities are exact counts (`round(rate × base)`), placed at
//! random positions; the affected and overbooked classes of each event are
//! confirmed with the oracle before the event is accepted.

mod oracle;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use chrono::{Duration, NaiveDate};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charge::{ChargeCatalog, ChargeCode};
use crate::counterfactual::Deltas;
use crate::engine::{EngineConfig, PsaResult, RiskFactors, SubScores};
use crate::error::{ConfigError, Error};
use crate::linkage::{age_on, CourtCase, FiledCharge, PsaRow, Race, RecordedComponents};

pub use oracle::{oracle_assess, oracle_nvca};

pub const EXCLUSION_POOL: &[&str] = &[
    "187(A) PC F",
    "211 PC F",
    "215(A) PC F",
    "273.5(A) PC F",
    "261(A)(1) PC F",
    "4530(A) PC F",
    "664/187(A) PC F",
    "206 PC F",
];

pub const BUMPUP_POOL: &[&str] = &[
    "273.5(A) PC M",
    "646.9 PC M",
    "243.4(A) PC M",
    "245(A)(1) PC F",
    "166(A)(4) PC M",
];

pub const VIOLENT_POOL: &[&str] = &[
    "240 PC M",
    "243(B) PC M",
    "236 PC M",
    "422.6(A) PC M",
    "207(A) PC F",
];

pub const NEUTRAL_POOL: &[&str] = &[
    "459 PC F",
    "484(A) PC M",
    "11350(A) HS F",
    "23152(A) VC M",
    "647(F) PC M",
    "496(A) PC M",
];

/// Lesser charge a dismissed booking charge may be replaced by.
pub const REDUCTIONS: &[(&str, &str)] = &[
    ("273.5(A) PC F", "273.5(A) PC M"),
    ("245(A)(1) PC F", "240 PC M"),
    ("211 PC F", "484(A) PC M"),
    ("459 PC F", "496(A) PC M"),
    ("207(A) PC F", "236 PC M"),
];

/// Further codes used only for random engine inputs: derivative forms, the
/// ambiguous weapon entries and class-dependent list members.
pub const EXTRA_CHARGES: &[&str] = &[
    "664/211 PC F",
    "664/245(A)(1) PC F",
    "664/240 PC M",
    "417.4 PC M",
    "25850(A) PC F",
    "12022.7 PC",
    "243(E)(1) PC M",
    "243(E)(1) PC F",
    "646.9 PC F",
    "166(C)(1) PC M",
    "653F(B) PC F",
    "148.10(A) PC F",
    "192(A) PC F",
    "288(A) PC F",
    "4532(B)(1) PC F",
    "18740 PC F",
    "451(B) PC F",
    "244 PC F",
    "422 PC M",
    "10851(A) VC F",
    "594(B)(1) PC M",
    "12500(A) VC M",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    /// Assessment rows written, duplicates and incomplete rows included.
    pub n_records: usize,
    pub seed: u64,
    /// Share of rows that copy an earlier complete row.
    pub duplicate_rate: f64,
    /// Share of rows missing a required component.
    pub incomplete_rate: f64,
    /// Share of complete events with no court case in the date window.
    pub unmatched_rate: f64,
    /// Share of linked events whose case is fully disposed.
    pub disposed_rate: f64,
    /// Share of linked events where a booking charge that drives an
    /// exclusion, bump-up or NVCA flag is dropped or reduced. Includes the
    /// affected events.
    pub overbooking_rate: f64,
    /// Share of linked events whose final recommendation is higher under
    /// booking charges. At most `overbooking_rate`.
    pub affected_rate: f64,
    /// Share of linked events with a second same-person case in the window.
    pub decoy_rate: f64,
    /// Share of events belonging to someone already seen.
    pub repeat_person_rate: f64,
    /// Share of people in group B.
    pub group_mix: f64,
    /// Chance that a B-group sub-score is raised by one.
    pub group_shift: f64,
    /// Chance a case carries a race label other than the person's.
    pub race_noise: f64,
    /// Chance an event's charges are all disposed by a plea on another case.
    pub plea_elsewhere_rate: f64,
    /// Chance convictions are coded 0 beside a plea-to-other code.
    pub companion_zero_rate: f64,
    /// Relative weights of FTA scale scores 1..=6.
    pub fta_weights: [f64; 6],
    pub nca_weights: [f64; 6],
    pub start_date: NaiveDate,
    pub span_days: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_records: 2450,
            seed: 1,
            duplicate_rate: 0.171,
            incomplete_rate: 0.026,
            unmatched_rate: 0.016,
            disposed_rate: 0.883,
            overbooking_rate: 0.40,
            affected_rate: 0.27,
            decoy_rate: 0.02,
            repeat_person_rate: 0.15,
            group_mix: 0.5,
            group_shift: 0.15,
            race_noise: 0.02,
            plea_elsewhere_rate: 0.02,
            companion_zero_rate: 0.1,
            fta_weights: [0.22, 0.24, 0.2, 0.14, 0.12, 0.08],
            nca_weights: [0.2, 0.2, 0.2, 0.18, 0.12, 0.1],
            start_date: NaiveDate::from_ymd_opt(2016, 5, 1).expect("valid date"),
            span_days: 365,
        }
    }
}

impl GeneratorConfig {
    pub fn load(path: &Path) -> Result<GeneratorConfig, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_toml_str(&text, &path.display().to_string())?)
    }

    pub fn from_toml_str(text: &str, name: &str) -> Result<GeneratorConfig, ConfigError> {
        let cfg: GeneratorConfig =
            toml::from_str(text).map_err(|e| ConfigError::invalid(name, e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let probs = [
            ("duplicate_rate", self.duplicate_rate),
            ("incomplete_rate", self.incomplete_rate),
            ("unmatched_rate", self.unmatched_rate),
            ("disposed_rate", self.disposed_rate),
            ("overbooking_rate", self.overbooking_rate),
            ("affected_rate", self.affected_rate),
            ("decoy_rate", self.decoy_rate),
            ("repeat_person_rate", self.repeat_person_rate),
            ("group_mix", self.group_mix),
            ("group_shift", self.group_shift),
            ("race_noise", self.race_noise),
            ("plea_elsewhere_rate", self.plea_elsewhere_rate),
            ("companion_zero_rate", self.companion_zero_rate),
        ];
        for (name, value) in probs {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::Probability { name, value });
            }
        }
        let invalid = |m: &str| Err(ConfigError::invalid("generator config", m));
        if self.affected_rate > self.overbooking_rate {
            return invalid("affected_rate exceeds overbooking_rate");
        }
        if self.duplicate_rate + self.incomplete_rate > 1.0 {
            return invalid("duplicate_rate + incomplete_rate exceeds 1");
        }
        for w in [&self.fta_weights, &self.nca_weights] {
            if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
                return invalid("sub-score weights must be non-negative with a positive sum");
            }
        }
        if self.span_days == 0 {
            return invalid("span_days must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    Unique,
    Duplicate,
    Incomplete,
}

/// What was planted for an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventClass {
    /// No charge-driven component differs between the sources.
    Clean,
    /// A component is lost under conviction charges, the final level is not.
    Overbooked,
    /// The final level is higher under booking charges.
    Affected,
}

/// One ground-truth row per assessment row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub record_id: String,
    pub kind: RowKind,
    /// Record id of the row this one copies.
    pub duplicate_of: String,
    pub sfid: String,
    pub black: bool,
    /// ';'-separated court numbers of the true match; empty when unmatched.
    pub court_numbers: String,
    pub unmatched: bool,
    pub disposed: bool,
    pub plea_elsewhere: bool,
    /// ';'-separated conviction charges as planted.
    pub conviction_charges: String,
    pub class: EventClass,
    pub affected: bool,
    pub overbooked: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SynthData {
    pub psa: Vec<PsaRow>,
    /// Sorted by court number.
    pub cases: Vec<CourtCase>,
    pub truth: Vec<TruthRow>,
}

impl SynthData {
    pub fn write_truth<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for t in &self.truth {
            wtr.serialize(t)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub const TRUTH_COLUMNS: &[(&str, &str)] = &[
    ("record_id", "assessment row"),
    ("kind", "unique | duplicate | incomplete"),
    ("duplicate_of", "record_id of the copied row, duplicates only"),
    ("sfid", "person identifier"),
    ("black", "person's group"),
    ("court_numbers", "';'-separated true match; empty when unmatched"),
    ("unmatched", "no court case was placed in the date window"),
    ("disposed", "every filed charge of the true case has a disposition"),
    ("plea_elsewhere", "the case was closed by a plea on another case"),
    ("conviction_charges", "';'-separated planted conviction charges"),
    ("class", "clean | overbooked | affected"),
    ("affected", "final level higher under booking charges"),
    ("overbooked", "a charge-driven component lost under conviction charges"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Disp {
    Convicted,
    Dismissed,
}

struct Person {
    sfid: String,
    name: String,
    dob: NaiveDate,
    black: bool,
    label: Race,
    last_arrest: NaiveDate,
}

/// An accepted event before it is written out.
struct Event {
    person: usize,
    arrest: NaiveDate,
    psa_date: NaiveDate,
    subscores: SubScores,
    factors: RiskFactors,
    booking: Vec<ChargeCode>,
    filed: Vec<(ChargeCode, Disp)>,
    plea_elsewhere: bool,
    booking_result: PsaResult,
    class: EventClass,
    deltas: Deltas,
    convictions: Vec<ChargeCode>,
}

const NON_B: &[Race] = &[Race::W, Race::H, Race::C, Race::O, Race::F, Race::I, Race::J, Race::U];

fn categorical(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

fn count(rate: f64, base: usize) -> usize {
    ((rate * base as f64).round() as usize).min(base)
}

/// `k` of `n` positions, chosen uniformly.
fn chosen(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<bool> {
    let mut v: Vec<bool> = (0..n).map(|i| i < k).collect();
    v.shuffle(rng);
    v
}

struct Generator<'a> {
    cfg: &'a GeneratorConfig,
    engine: &'a EngineConfig,
    rng: ChaCha8Rng,
    parse_cache: std::collections::HashMap<&'static str, ChargeCode>,
}

impl<'a> Generator<'a> {
    fn code(&mut self, text: &'static str) -> ChargeCode {
        let catalog: &ChargeCatalog = &self.engine.catalog;
        self.parse_cache
            .entry(text)
            .or_insert_with(|| catalog.parse(text).expect("pool charges parse"))
            .clone()
    }

    fn subscore(&mut self, weights: &[f64; 6], black: bool) -> u8 {
        let mut s = categorical(&mut self.rng, weights) as u8 + 1;
        if black && s < 6 && self.rng.random_bool(self.cfg.group_shift) {
            s += 1;
        }
        s
    }

    fn history(&mut self, age: u32) -> RiskFactors {
        let r = &mut self.rng;
        let prior_conviction = r.random_bool(0.5);
        RiskFactors {
            age_at_arrest: age,
            pending_charge: r.random_bool(0.3),
            prior_conviction,
            prior_violent_convictions: if prior_conviction {
                categorical(r, &[0.6, 0.25, 0.1, 0.05]) as u32
            } else {
                0
            },
            ..Default::default()
        }
    }

    fn pick(&mut self, pool: &'static [&'static str], taken: &BTreeSet<&'static str>) -> Option<&'static str> {
        let free: Vec<&'static str> = pool.iter().copied().filter(|c| !taken.contains(c)).collect();
        free.choose(&mut self.rng).copied()
    }

    /// Booking charges with their planned outcome, for the given class.
    fn charges(&mut self, class: EventClass) -> Vec<(&'static str, Disp)> {
        let mut taken = BTreeSet::new();
        let mut out = Vec::new();
        if class == EventClass::Clean {
            let k = self.rng.random_range(1..=3);
            for _ in 0..k {
                let pool = [NEUTRAL_POOL, VIOLENT_POOL, BUMPUP_POOL, EXCLUSION_POOL]
                    [categorical(&mut self.rng, &[0.6, 0.15, 0.15, 0.1])];
                if let Some(c) = self.pick(pool, &taken) {
                    taken.insert(c);
                    let dismissed = NEUTRAL_POOL.contains(&c) && self.rng.random_bool(0.3);
                    out.push((c, if dismissed { Disp::Dismissed } else { Disp::Convicted }));
                }
            }
        } else {
            let pool = [EXCLUSION_POOL, BUMPUP_POOL, VIOLENT_POOL]
                [categorical(&mut self.rng, &[0.4, 0.4, 0.2])];
            let top = self.pick(pool, &taken).expect("pool is non-empty");
            taken.insert(top);
            out.push((top, Disp::Dismissed));
            let k = self.rng.random_range(0..=2);
            for _ in 0..k {
                let pool = [NEUTRAL_POOL, VIOLENT_POOL, BUMPUP_POOL]
                    [categorical(&mut self.rng, &[0.7, 0.15, 0.15])];
                if let Some(c) = self.pick(pool, &taken) {
                    taken.insert(c);
                    let d = if self.rng.random_bool(0.7) { Disp::Convicted } else { Disp::Dismissed };
                    out.push((c, d));
                }
            }
        }
        out
    }

    fn classify(deltas: &Deltas) -> EventClass {
        if deltas.recommendation_delta > 0 {
            EventClass::Affected
        } else if deltas.recommendation_delta == 0 && deltas.any_lost() {
            EventClass::Overbooked
        } else {
            EventClass::Clean
        }
    }

    fn assess(&self, ss: (u8, u8), factors: &RiskFactors, charges: &[ChargeCode]) -> PsaResult {
        let e = self.engine;
        let nvca = oracle_nvca(factors, charges, &e.weights, &e.catalog);
        let subscores = SubScores::new(ss.0, ss.1, nvca).expect("sub-scores drawn in range");
        oracle_assess(subscores, charges, false, &e.dmf, &e.catalog).expect("complete matrix")
    }

    fn event(
        &mut self,
        person: &Person,
        arrest: NaiveDate,
        class: EventClass,
    ) -> Result<Event, ConfigError> {
        const ATTEMPTS: usize = 20_000;
        let age = age_on(person.dob, arrest).unwrap_or(30);
        for _ in 0..ATTEMPTS {
            let fta = self.subscore(&self.cfg.fta_weights.clone(), person.black);
            let nca = self.subscore(&self.cfg.nca_weights.clone(), person.black);
            let factors = self.history(age);
            let planned = self.charges(class);
            let plea_elsewhere = self.rng.random_bool(self.cfg.plea_elsewhere_rate);
            let mut booking = Vec::new();
            let mut filed = Vec::new();
            for (text, d) in &planned {
                let code = self.code(text);
                booking.push(code.clone());
                let d = if plea_elsewhere { Disp::Dismissed } else { *d };
                filed.push((code, d));
                if d == Disp::Dismissed && !plea_elsewhere && self.rng.random_bool(0.4) {
                    if let Some((_, lesser)) = REDUCTIONS.iter().find(|(from, _)| from == text) {
                        let lesser = self.code(lesser);
                        if !filed.iter().any(|(c, _)| c.normalized() == lesser.normalized()) {
                            filed.push((lesser, Disp::Convicted));
                        }
                    }
                }
            }
            let mut convictions: Vec<ChargeCode> = Vec::new();
            for (c, d) in &filed {
                if *d == Disp::Convicted && !convictions.iter().any(|x| x.normalized() == c.normalized()) {
                    convictions.push(c.clone());
                }
            }
            let booking_result = self.assess((fta, nca), &factors, &booking);
            let conviction_result = self.assess((fta, nca), &factors, &convictions);
            let deltas = Deltas::between(&booking_result, &conviction_result);
            if Self::classify(&deltas) != class || deltas.recommendation_delta < 0 {
                continue;
            }
            let psa_date = arrest + Duration::days(self.rng.random_range(0..=1));
            return Ok(Event {
                person: 0,
                arrest,
                psa_date,
                subscores: booking_result.subscores,
                factors,
                booking,
                filed,
                plea_elsewhere,
                booking_result,
                class,
                deltas,
                convictions,
            });
        }
        Err(ConfigError::invalid(
            "generator config",
            format!("could not plant a {class:?} event in {ATTEMPTS} attempts"),
        ))
    }

    fn dispositions(&mut self, event: &Event, disposed: bool) -> Vec<FiledCharge> {
        let companion = !event.plea_elsewhere
            && event.filed.iter().any(|(_, d)| *d == Disp::Dismissed)
            && event.filed.iter().any(|(_, d)| *d == Disp::Convicted)
            && self.rng.random_bool(self.cfg.companion_zero_rate);
        let mut plea_code_used = false;
        let mut out: Vec<FiledCharge> = event
            .filed
            .iter()
            .map(|(c, d)| {
                let code = match d {
                    Disp::Convicted if companion => 0,
                    Disp::Convicted => 160 + 10 * self.rng.random_range(0..9),
                    Disp::Dismissed if (event.plea_elsewhere || companion) && !plea_code_used => {
                        plea_code_used = true;
                        72
                    }
                    Disp::Dismissed => 10 * self.rng.random_range(1..=5),
                };
                FiledCharge {
                    charge: c.clone(),
                    disposition: Some(code),
                }
            })
            .collect();
        if !disposed {
            let i = self.rng.random_range(0..out.len());
            out[i].disposition = None;
        }
        out
    }

    fn race_label(&mut self, p: &Person) -> Race {
        if self.rng.random_bool(self.cfg.race_noise) {
            let mut others: Vec<Race> = NON_B.iter().copied().filter(|r| *r != p.label).collect();
            others.push(Race::Missing);
            *others.choose(&mut self.rng).expect("non-empty")
        } else {
            p.label
        }
    }
}

fn join(codes: &[ChargeCode]) -> String {
    codes.iter().map(|c| c.raw.trim()).collect::<Vec<_>>().join("; ")
}

/// Generates a dataset. The same config and engine configuration always give
/// the same output.
pub fn generate(cfg: &GeneratorConfig, engine: &EngineConfig) -> Result<SynthData, ConfigError> {
    cfg.validate()?;
    let mut g = Generator {
        cfg,
        engine,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        parse_cache: Default::default(),
    };
    let n = cfg.n_records;
    let n_dup = count(cfg.duplicate_rate, n);
    let n_events = n - n_dup;
    let n_inc = count(cfg.incomplete_rate, n).min(n_events);
    let n_complete = n_events - n_inc;
    if n_dup > 0 && n_complete == 0 {
        return Err(ConfigError::invalid("generator config", "duplicates need complete rows to copy"));
    }
    let incomplete = chosen(&mut g.rng, n_events, n_inc);
    let n_unmatched = count(cfg.unmatched_rate, n_complete);
    let unmatched = chosen(&mut g.rng, n_complete, n_unmatched);
    let n_linked = n_complete - n_unmatched;
    let n_affected = count(cfg.affected_rate, n_linked);
    let n_over = count(cfg.overbooking_rate, n_linked).max(n_affected) - n_affected;
    let mut classes: Vec<EventClass> = (0..n_linked)
        .map(|i| {
            if i < n_affected {
                EventClass::Affected
            } else if i < n_affected + n_over {
                EventClass::Overbooked
            } else {
                EventClass::Clean
            }
        })
        .collect();
    classes.shuffle(&mut g.rng);
    let disposed = chosen(&mut g.rng, n_linked, count(cfg.disposed_rate, n_linked));
    let decoy = chosen(&mut g.rng, n_linked, count(cfg.decoy_rate, n_linked));

    let mut people: Vec<Person> = Vec::new();
    let mut rows: Vec<(f64, PsaRow, TruthRow)> = Vec::with_capacity(n);
    let mut cases: Vec<CourtCase> = Vec::new();
    let mut next_case = 1usize;
    let (mut complete_i, mut linked_i) = (0usize, 0usize);

    for (ev, &is_incomplete) in incomplete.iter().enumerate() {
        let repeat = !people.is_empty() && g.rng.random_bool(cfg.repeat_person_rate);
        let (pi, arrest) = if repeat {
            let pi = g.rng.random_range(0..people.len());
            (pi, people[pi].last_arrest + Duration::days(g.rng.random_range(10..=120)))
        } else {
            let arrest = cfg.start_date + Duration::days(g.rng.random_range(0..cfg.span_days) as i64);
            let black = g.rng.random_bool(cfg.group_mix);
            let label = if black { Race::B } else { *NON_B.choose(&mut g.rng).expect("non-empty") };
            let dob = arrest
                - Duration::days(g.rng.random_range(18 * 365 + 5..=65 * 365));
            let sfid = format!("SF{:06}", people.len() + 1);
            people.push(Person {
                name: format!("Person {sfid}"),
                sfid,
                dob,
                black,
                label,
                last_arrest: arrest,
            });
            (people.len() - 1, arrest)
        };
        people[pi].last_arrest = arrest;

        let (is_unmatched, class, is_disposed, has_decoy) = if is_incomplete {
            (false, EventClass::Clean, true, false)
        } else {
            let u = unmatched[complete_i];
            complete_i += 1;
            if u {
                (true, EventClass::Clean, true, false)
            } else {
                let i = linked_i;
                linked_i += 1;
                (false, classes[i], disposed[i], decoy[i])
            }
        };
        let person = &people[pi];
        let mut event = g.event(person, arrest, class)?;
        event.person = pi;
        let person = &people[pi];

        let mut court_numbers = Vec::new();
        let filed = g.dispositions(&event, is_disposed);
        let offset = if is_unmatched {
            [-3i64, -2, 3, 4][g.rng.random_range(0..4)]
        } else {
            g.rng.random_range(-1..=2)
        };
        let place_case = !is_unmatched || g.rng.random_bool(0.5);
        if place_case {
            let number = format!("CN{next_case:07}");
            next_case += 1;
            if !is_unmatched {
                court_numbers.push(number.clone());
            }
            let race = g.race_label(person);
            cases.push(CourtCase {
                court_number: number,
                sfid: person.sfid.clone(),
                name: person.name.clone(),
                dob: Some(person.dob),
                arrest_date: event.arrest + Duration::days(offset),
                race,
                booking_charges: event.booking.clone(),
                filed_charges: filed,
            });
        }
        if has_decoy {
            let top = event.booking[0].section_key();
            let options: Vec<&'static str> = NEUTRAL_POOL
                .iter()
                .copied()
                .filter(|t| g.code(t).section_key() != top)
                .collect();
            let text = *options.choose(&mut g.rng).expect("neutral pool is non-empty");
            let code = g.code(text);
            let race = g.race_label(person);
            cases.push(CourtCase {
                court_number: format!("CN{next_case:07}"),
                sfid: person.sfid.clone(),
                name: person.name.clone(),
                dob: Some(person.dob),
                arrest_date: event.arrest + Duration::days(g.rng.random_range(-1..=2)),
                race,
                booking_charges: vec![code.clone()],
                filed_charges: vec![FiledCharge {
                    charge: code,
                    disposition: Some(20),
                }],
            });
            next_case += 1;
        }

        let b = &event.booking_result;
        let mut row = PsaRow {
            record_id: String::new(),
            sfid: person.sfid.clone(),
            name: person.name.clone(),
            dob: Some(person.dob),
            arrest_date: Some(event.arrest),
            psa_date: Some(event.psa_date),
            fta: Some(event.subscores.fta),
            nca: Some(event.subscores.nca),
            nvca: Some(b.nvca_flag()),
            booking_charges: event.booking.clone(),
            recorded: RecordedComponents {
                nvca: Some(b.nvca_flag()),
                exclusion: Some(b.is_excluded()),
                bumpup: Some(b.is_bumped()),
                recommendation: Some(b.final_level),
            },
            age_at_arrest: Some(event.factors.age_at_arrest),
            pending_charge: event.factors.pending_charge,
            prior_conviction: event.factors.prior_conviction,
            prior_violent_convictions: event.factors.prior_violent_convictions,
            extradited: false,
        };
        if is_incomplete {
            match g.rng.random_range(0..4) {
                0 => row.arrest_date = None,
                1 => row.fta = None,
                2 => row.nca = None,
                _ => {
                    row.nvca = None;
                    row.recorded.nvca = None;
                }
            }
        }
        let truth = TruthRow {
            record_id: String::new(),
            kind: if is_incomplete { RowKind::Incomplete } else { RowKind::Unique },
            duplicate_of: String::new(),
            sfid: person.sfid.clone(),
            black: person.black,
            court_numbers: court_numbers.join(";"),
            unmatched: is_unmatched,
            disposed: is_disposed,
            plea_elsewhere: event.plea_elsewhere,
            conviction_charges: join(&event.convictions),
            class: event.class,
            affected: event.deltas.recommendation_delta > 0,
            overbooked: event.deltas.any_lost(),
        };
        rows.push((ev as f64, row, truth));
    }

    // Each duplicate lands after the row it copies.
    let sources: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].2.kind == RowKind::Unique).collect();
    for _ in 0..n_dup {
        let s = *sources.choose(&mut g.rng).expect("checked above");
        let key = s as f64 + g.rng.random::<f64>().max(f64::MIN_POSITIVE) * (n_events - s) as f64;
        let (_, mut row, mut truth) = rows[s].clone();
        if g.rng.random_bool(0.5) {
            for c in &mut row.booking_charges {
                c.raw = c.raw.to_lowercase();
            }
        }
        truth.kind = RowKind::Duplicate;
        truth.duplicate_of = format!("#{s}");
        rows.push((key, row, truth));
    }
    let originals: Vec<usize> = (0..rows.len()).collect();
    let mut order = originals;
    order.sort_by(|&a, &b| rows[a].0.total_cmp(&rows[b].0).then(a.cmp(&b)));
    let mut id_of_event = vec![String::new(); n_events];
    for (pos, &i) in order.iter().enumerate() {
        if i < n_events {
            id_of_event[i] = (pos + 1).to_string();
        }
    }
    let mut out = SynthData {
        cases,
        ..Default::default()
    };
    for (pos, &i) in order.iter().enumerate() {
        let (_, mut row, mut truth) = rows[i].clone();
        let id = (pos + 1).to_string();
        row.record_id = id.clone();
        truth.record_id = id;
        if let Some(src) = truth.duplicate_of.strip_prefix('#') {
            truth.duplicate_of = id_of_event[src.parse::<usize>().expect("index")].clone();
        }
        out.psa.push(row);
        out.truth.push(truth);
    }
    Ok(out)
}

/// A random assessment input drawn over the full charge universe, for
/// cross-checking the engine against the oracle.
#[derive(Debug, Clone)]
pub struct EngineInput {
    pub subscores: SubScores,
    pub charges: Vec<ChargeCode>,
    pub extradited: bool,
}

pub fn charge_universe() -> Vec<&'static str> {
    [EXCLUSION_POOL, BUMPUP_POOL, VIOLENT_POOL, NEUTRAL_POOL, EXTRA_CHARGES]
        .concat()
        .into_iter()
        .chain(REDUCTIONS.iter().map(|r| r.1))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn random_engine_inputs(seed: u64, n: usize, catalog: &ChargeCatalog) -> Vec<EngineInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe: Vec<ChargeCode> = charge_universe()
        .into_iter()
        .map(|t| catalog.parse(t).expect("universe charges parse"))
        .collect();
    (0..n)
        .map(|_| {
            let k = rng.random_range(0..=4);
            let charges = (0..k)
                .map(|_| universe.choose(&mut rng).expect("non-empty").clone())
                .collect();
            EngineInput {
                subscores: SubScores::new(
                    rng.random_range(1..=6),
                    rng.random_range(1..=6),
                    rng.random_bool(0.3),
                )
                .expect("in range"),
                charges,
                extradited: rng.random_bool(0.05),
            }
        })
        .collect()
}
