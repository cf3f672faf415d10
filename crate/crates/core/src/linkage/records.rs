//! Assessment and court records, and their tabular file formats.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::charge::{split_charge_list, ChargeCatalog, ChargeCode};
use crate::engine::{RiskFactors, SubScores, SupervisionLevel};
use crate::error::{Error, RowError};

/// Components as recorded on the administered form, used for validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RecordedComponents {
    pub nvca: Option<bool>,
    pub exclusion: Option<bool>,
    pub bumpup: Option<bool>,
    pub recommendation: Option<SupervisionLevel>,
}

/// One assessment row as read, before the completeness check.
#[derive(Debug, Clone, PartialEq)]
pub struct PsaRow {
    pub record_id: String,
    pub sfid: String,
    pub name: String,
    pub dob: Option<NaiveDate>,
    pub arrest_date: Option<NaiveDate>,
    pub psa_date: Option<NaiveDate>,
    pub fta: Option<u8>,
    pub nca: Option<u8>,
    pub nvca: Option<bool>,
    pub booking_charges: Vec<ChargeCode>,
    pub recorded: RecordedComponents,
    pub age_at_arrest: Option<u32>,
    pub pending_charge: bool,
    pub prior_conviction: bool,
    pub prior_violent_convictions: u32,
    pub extradited: bool,
}

/// A complete assessment record.
#[derive(Debug, Clone, PartialEq)]
pub struct PsaRecord {
    pub record_id: String,
    pub sfid: String,
    pub name: String,
    pub dob: Option<NaiveDate>,
    pub arrest_date: NaiveDate,
    pub psa_date: NaiveDate,
    pub subscores: SubScores,
    pub booking_charges: Vec<ChargeCode>,
    pub recorded: RecordedComponents,
    /// History-based risk factors. `current_offense_violent` is always false
    /// here; it is derived from whichever charge list is being assessed.
    pub factors: RiskFactors,
    pub extradited: bool,
}

impl PsaRow {
    /// The first missing required component, if any.
    pub fn missing_component(&self) -> Option<&'static str> {
        if self.sfid.trim().is_empty() {
            return Some("sfid");
        }
        if self.arrest_date.is_none() {
            return Some("arrest_date");
        }
        if self.psa_date.is_none() {
            return Some("psa_date");
        }
        if self.fta.is_none() {
            return Some("fta");
        }
        if self.nca.is_none() {
            return Some("nca");
        }
        if self.nvca.is_none() {
            return Some("nvca");
        }
        if self.age().is_none() {
            return Some("age_at_arrest");
        }
        None
    }

    fn age(&self) -> Option<u32> {
        self.age_at_arrest.or_else(|| {
            let (dob, arrest) = (self.dob?, self.arrest_date?);
            age_on(dob, arrest)
        })
    }

    /// Converts a complete row. `None` when a required component is missing
    /// or a sub-score is out of range.
    pub fn into_record(self) -> Option<PsaRecord> {
        if self.missing_component().is_some() {
            return None;
        }
        let age = self.age()?;
        let subscores = SubScores::new(self.fta?, self.nca?, self.nvca?).ok()?;
        Some(PsaRecord {
            record_id: self.record_id,
            sfid: self.sfid,
            name: self.name,
            dob: self.dob,
            arrest_date: self.arrest_date?,
            psa_date: self.psa_date?,
            subscores,
            booking_charges: self.booking_charges,
            recorded: self.recorded,
            factors: RiskFactors {
                age_at_arrest: age,
                pending_charge: self.pending_charge,
                prior_conviction: self.prior_conviction,
                prior_violent_convictions: self.prior_violent_convictions,
                ..Default::default()
            },
            extradited: self.extradited,
        })
    }
}

pub fn age_on(dob: NaiveDate, day: NaiveDate) -> Option<u32> {
    let mut years = day.year() - dob.year();
    if (day.month(), day.day()) < (dob.month(), dob.day()) {
        years -= 1;
    }
    u32::try_from(years).ok()
}

/// Race designation as recorded in the court data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Race {
    B,
    C,
    F,
    H,
    I,
    J,
    O,
    U,
    W,
    Missing,
}

impl Race {
    pub const ALL: [Race; 10] = [
        Race::B,
        Race::C,
        Race::F,
        Race::H,
        Race::I,
        Race::J,
        Race::O,
        Race::U,
        Race::W,
        Race::Missing,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Race::B => "B",
            Race::C => "C",
            Race::F => "F",
            Race::H => "H",
            Race::I => "I",
            Race::J => "J",
            Race::O => "O",
            Race::U => "U",
            Race::W => "W",
            Race::Missing => "",
        }
    }

    pub fn index(self) -> usize {
        Race::ALL.iter().position(|r| *r == self).expect("listed")
    }
}

impl fmt::Display for Race {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Race::Missing => f.write_str("missing"),
            r => f.write_str(r.code()),
        }
    }
}

impl FromStr for Race {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "" | "NA" | "MISSING" => Ok(Race::Missing),
            "B" => Ok(Race::B),
            "C" => Ok(Race::C),
            "F" => Ok(Race::F),
            "H" => Ok(Race::H),
            "I" => Ok(Race::I),
            "J" => Ok(Race::J),
            "O" => Ok(Race::O),
            "U" => Ok(Race::U),
            "W" => Ok(Race::W),
            other => Err(format!("unknown race designation {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiledCharge {
    pub charge: ChargeCode,
    /// `None` while the charge is pending.
    pub disposition: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CourtCase {
    pub court_number: String,
    pub sfid: String,
    pub name: String,
    pub dob: Option<NaiveDate>,
    pub arrest_date: NaiveDate,
    pub race: Race,
    pub booking_charges: Vec<ChargeCode>,
    pub filed_charges: Vec<FiledCharge>,
}

impl CourtCase {
    /// Booking and filed charges.
    pub fn all_charges(&self) -> impl Iterator<Item = &ChargeCode> {
        self.booking_charges
            .iter()
            .chain(self.filed_charges.iter().map(|f| &f.charge))
    }
}

/// Orders record identifiers numerically when both are integers.
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

pub const PSA_COLUMNS: &[(&str, bool, &str)] = &[
    ("record_id", false, "row identifier; defaults to the 1-based row number"),
    ("sfid", true, "person identifier"),
    ("name", false, "text"),
    ("dob", false, "date of birth, YYYY-MM-DD"),
    ("arrest_date", true, "YYYY-MM-DD; blank marks the record incomplete"),
    ("psa_date", true, "date the assessment was administered, YYYY-MM-DD"),
    ("fta", true, "FTA scale score 1-6; blank marks the record incomplete"),
    ("nca", true, "NCA scale score 1-6; blank marks the record incomplete"),
    ("nvca", true, "NVCA flag (true/false/1/0); blank marks the record incomplete"),
    ("booking_charges", true, "';'-separated charge codes, top charge first"),
    ("recorded_exclusion", false, "exclusion as recorded on the form"),
    ("recorded_bumpup", false, "bump-up as recorded on the form"),
    ("recorded_recommendation", false, "final recommendation as recorded (label or rank 1-4)"),
    ("age_at_arrest", false, "years; derived from dob and arrest_date when blank"),
    ("pending_charge", false, "boolean, default false"),
    ("prior_conviction", false, "boolean, default false"),
    ("prior_violent_convictions", false, "count, default 0"),
    ("extradited", false, "boolean, default false"),
];

pub const COURT_COLUMNS: &[(&str, bool, &str)] = &[
    ("court_number", true, "case identifier; one row per charge, rows grouped by this column"),
    ("sfid", true, "person identifier"),
    ("name", false, "text"),
    ("dob", false, "YYYY-MM-DD"),
    ("arrest_date", true, "YYYY-MM-DD"),
    ("race", false, "B, C, F, H, I, J, O, U, W or blank"),
    ("stage", false, "booking | filed (blank row = case with no charges)"),
    ("charge", false, "charge code"),
    ("disposition", false, "integer disposition code on filed charges; blank = pending"),
];

struct Header {
    index: BTreeMap<String, usize>,
}

impl Header {
    fn new(
        record: &csv::StringRecord,
        columns: &[(&str, bool, &str)],
        file: &str,
    ) -> Result<Header, Error> {
        let index: BTreeMap<String, usize> = record
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().to_ascii_lowercase(), i))
            .collect();
        let missing: Vec<&str> = columns
            .iter()
            .filter(|(name, required, _)| *required && !index.contains_key(*name))
            .map(|(name, _, _)| *name)
            .collect();
        if !missing.is_empty() {
            return Err(Error::Schema {
                file: file.to_string(),
                message: format!("missing required column(s): {}", missing.join(", ")),
            });
        }
        Ok(Header { index })
    }

    fn get<'r>(&self, rec: &'r csv::StringRecord, name: &str) -> &'r str {
        self.index
            .get(name)
            .and_then(|&i| rec.get(i))
            .map(str::trim)
            .unwrap_or("")
    }
}

struct RowCtx<'a> {
    file: &'a str,
    row: usize,
}

impl RowCtx<'_> {
    fn err(&self, message: impl Into<String>) -> RowError {
        RowError {
            file: self.file.to_string(),
            row: self.row,
            message: message.into(),
        }
    }

    fn date(&self, column: &str, v: &str) -> Result<Option<NaiveDate>, RowError> {
        if v.is_empty() {
            return Ok(None);
        }
        NaiveDate::parse_from_str(v, "%Y-%m-%d")
            .map(Some)
            .map_err(|e| self.err(format!("{column}: {v:?} is not an ISO date ({e})")))
    }

    fn num<T: FromStr>(&self, column: &str, v: &str) -> Result<Option<T>, RowError> {
        if v.is_empty() {
            return Ok(None);
        }
        v.parse()
            .map(Some)
            .map_err(|_| self.err(format!("{column}: {v:?} is not a number")))
    }

    fn flag(&self, column: &str, v: &str) -> Result<Option<bool>, RowError> {
        match v.to_ascii_lowercase().as_str() {
            "" => Ok(None),
            "1" | "true" | "t" | "yes" | "y" => Ok(Some(true)),
            "0" | "false" | "f" | "no" | "n" => Ok(Some(false)),
            _ => Err(self.err(format!("{column}: {v:?} is not a boolean"))),
        }
    }

    fn charges(&self, v: &str, catalog: &ChargeCatalog) -> Result<Vec<ChargeCode>, RowError> {
        split_charge_list(v)
            .map(|c| catalog.parse(c).map_err(|e| self.err(format!("charge: {e}"))))
            .collect()
    }
}

/// Rows that parsed, plus row-addressed problems for the ones that did not.
#[derive(Debug)]
pub struct Parsed<T> {
    pub rows: Vec<T>,
    pub errors: Vec<RowError>,
}

impl<T> Default for Parsed<T> {
    fn default() -> Self {
        Parsed {
            rows: Vec::new(),
            errors: Vec::new(),
        }
    }
}

fn open(path: &Path) -> Result<std::fs::File, Error> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}

pub fn read_psa_file(path: &Path, catalog: &ChargeCatalog) -> Result<Parsed<PsaRow>, Error> {
    let name = path.display().to_string();
    read_psa(open(path)?, &name, catalog)
}

pub fn read_psa<R: Read>(
    reader: R,
    file: &str,
    catalog: &ChargeCatalog,
) -> Result<Parsed<PsaRow>, Error> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let header = Header::new(
        rdr.headers().map_err(|e| Error::csv(file, e))?,
        PSA_COLUMNS,
        file,
    )?;
    let mut out = Parsed::default();
    for (i, rec) in rdr.records().enumerate() {
        let ctx = RowCtx { file, row: i + 1 };
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                out.errors.push(ctx.err(e.to_string()));
                continue;
            }
        };
        match parse_psa_row(&header, &rec, &ctx, catalog) {
            Ok(row) => out.rows.push(row),
            Err(e) => out.errors.push(e),
        }
    }
    Ok(out)
}

fn parse_psa_row(
    h: &Header,
    rec: &csv::StringRecord,
    ctx: &RowCtx<'_>,
    catalog: &ChargeCatalog,
) -> Result<PsaRow, RowError> {
    let g = |c: &str| h.get(rec, c);
    let record_id = match g("record_id") {
        "" => ctx.row.to_string(),
        id => id.to_string(),
    };
    let recommendation = match g("recorded_recommendation") {
        "" => None,
        v => Some(
            v.parse::<SupervisionLevel>()
                .map_err(|e| ctx.err(format!("recorded_recommendation: {e}")))?,
        ),
    };
    Ok(PsaRow {
        record_id,
        sfid: g("sfid").to_string(),
        name: g("name").to_string(),
        dob: ctx.date("dob", g("dob"))?,
        arrest_date: ctx.date("arrest_date", g("arrest_date"))?,
        psa_date: ctx.date("psa_date", g("psa_date"))?,
        fta: ctx.num("fta", g("fta"))?,
        nca: ctx.num("nca", g("nca"))?,
        nvca: ctx.flag("nvca", g("nvca"))?,
        booking_charges: ctx.charges(g("booking_charges"), catalog)?,
        recorded: RecordedComponents {
            nvca: ctx.flag("nvca", g("nvca"))?,
            exclusion: ctx.flag("recorded_exclusion", g("recorded_exclusion"))?,
            bumpup: ctx.flag("recorded_bumpup", g("recorded_bumpup"))?,
            recommendation,
        },
        age_at_arrest: ctx.num("age_at_arrest", g("age_at_arrest"))?,
        pending_charge: ctx.flag("pending_charge", g("pending_charge"))?.unwrap_or(false),
        prior_conviction: ctx.flag("prior_conviction", g("prior_conviction"))?.unwrap_or(false),
        prior_violent_convictions: ctx
            .num("prior_violent_convictions", g("prior_violent_convictions"))?
            .unwrap_or(0),
        extradited: ctx.flag("extradited", g("extradited"))?.unwrap_or(false),
    })
}

pub fn read_court_file(path: &Path, catalog: &ChargeCatalog) -> Result<Parsed<CourtCase>, Error> {
    let name = path.display().to_string();
    read_court(open(path)?, &name, catalog)
}

/// Reads the long-format court file and groups rows into cases. A case whose
/// rows disagree on person or date fields is reported as an error on the
/// first conflicting row and dropped.
/// Stage, charge and disposition of one court-file row.
type ChargeRow = (String, ChargeCode, Option<i32>);

pub fn read_court<R: Read>(
    reader: R,
    file: &str,
    catalog: &ChargeCatalog,
) -> Result<Parsed<CourtCase>, Error> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let header = Header::new(
        rdr.headers().map_err(|e| Error::csv(file, e))?,
        COURT_COLUMNS,
        file,
    )?;
    let mut cases: BTreeMap<String, CourtCase> = BTreeMap::new();
    let mut rejected: BTreeMap<String, ()> = BTreeMap::new();
    let mut out = Parsed::default();
    for (i, rec) in rdr.records().enumerate() {
        let ctx = RowCtx { file, row: i + 1 };
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                out.errors.push(ctx.err(e.to_string()));
                continue;
            }
        };
        let g = |c: &str| header.get(&rec, c);
        let number = g("court_number").to_string();
        if rejected.contains_key(&number) {
            continue;
        }
        let parsed = (|| -> Result<(CourtCase, Option<ChargeRow>), RowError> {
            if number.is_empty() {
                return Err(ctx.err("court_number is blank"));
            }
            let arrest_date = ctx
                .date("arrest_date", g("arrest_date"))?
                .ok_or_else(|| ctx.err("arrest_date is blank"))?;
            let race = g("race")
                .parse::<Race>()
                .map_err(|e| ctx.err(format!("race: {e}")))?;
            let case = CourtCase {
                court_number: number.clone(),
                sfid: g("sfid").to_string(),
                name: g("name").to_string(),
                dob: ctx.date("dob", g("dob"))?,
                arrest_date,
                race,
                booking_charges: Vec::new(),
                filed_charges: Vec::new(),
            };
            let charge = match g("charge") {
                "" => None,
                text => {
                    let code = catalog
                        .parse(text)
                        .map_err(|e| ctx.err(format!("charge: {e}")))?;
                    let stage = g("stage").to_ascii_lowercase();
                    let disposition = ctx.num::<i32>("disposition", g("disposition"))?;
                    match stage.as_str() {
                        "booking" | "filed" => Some((stage, code, disposition)),
                        other => return Err(ctx.err(format!("stage: {other:?} is not booking|filed"))),
                    }
                }
            };
            Ok((case, charge))
        })();
        let (case, charge) = match parsed {
            Ok(v) => v,
            Err(e) => {
                out.errors.push(e);
                cases.remove(&number);
                rejected.insert(number, ());
                continue;
            }
        };
        let entry = cases.entry(number.clone()).or_insert_with(|| case.clone());
        if entry.sfid != case.sfid
            || entry.arrest_date != case.arrest_date
            || entry.race != case.race
            || entry.dob != case.dob
        {
            out.errors.push(ctx.err(format!(
                "case {number}: person, date or race fields differ from earlier rows"
            )));
            cases.remove(&number);
            rejected.insert(number, ());
            continue;
        }
        if let Some((stage, code, disposition)) = charge {
            if stage == "booking" {
                entry.booking_charges.push(code);
            } else {
                entry.filed_charges.push(FiledCharge {
                    charge: code,
                    disposition,
                });
            }
        }
    }
    out.rows = cases.into_values().collect();
    Ok(out)
}

fn fmt_flag(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn fmt_date(d: Option<NaiveDate>) -> String {
    d.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default()
}

fn join_charges(charges: &[ChargeCode]) -> String {
    charges
        .iter()
        .map(|c| c.raw.trim())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Writes rows in the same schema [`read_psa`] accepts.
pub fn write_psa<W: std::io::Write>(w: W, rows: &[PsaRow]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(PSA_COLUMNS.iter().map(|c| c.0))?;
    for r in rows {
        wtr.write_record([
            r.record_id.clone(),
            r.sfid.clone(),
            r.name.clone(),
            fmt_date(r.dob),
            fmt_date(r.arrest_date),
            fmt_date(r.psa_date),
            r.fta.map(|v| v.to_string()).unwrap_or_default(),
            r.nca.map(|v| v.to_string()).unwrap_or_default(),
            fmt_flag(r.nvca),
            join_charges(&r.booking_charges),
            fmt_flag(r.recorded.exclusion),
            fmt_flag(r.recorded.bumpup),
            r.recorded
                .recommendation
                .map(|l| l.label().to_string())
                .unwrap_or_default(),
            r.age_at_arrest.map(|v| v.to_string()).unwrap_or_default(),
            r.pending_charge.to_string(),
            r.prior_conviction.to_string(),
            r.prior_violent_convictions.to_string(),
            r.extradited.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

impl From<&PsaRecord> for PsaRow {
    fn from(r: &PsaRecord) -> PsaRow {
        PsaRow {
            record_id: r.record_id.clone(),
            sfid: r.sfid.clone(),
            name: r.name.clone(),
            dob: r.dob,
            arrest_date: Some(r.arrest_date),
            psa_date: Some(r.psa_date),
            fta: Some(r.subscores.fta),
            nca: Some(r.subscores.nca),
            nvca: Some(r.subscores.nvca_flag),
            booking_charges: r.booking_charges.clone(),
            recorded: r.recorded,
            age_at_arrest: Some(r.factors.age_at_arrest),
            pending_charge: r.factors.pending_charge,
            prior_conviction: r.factors.prior_conviction,
            prior_violent_convictions: r.factors.prior_violent_convictions,
            extradited: r.extradited,
        }
    }
}

/// Writes cases in the long format [`read_court`] accepts.
pub fn write_court<W: std::io::Write>(w: W, cases: &[CourtCase]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(COURT_COLUMNS.iter().map(|c| c.0))?;
    for c in cases {
        let base = |stage: &str, charge: &str, disp: String| {
            [
                c.court_number.clone(),
                c.sfid.clone(),
                c.name.clone(),
                fmt_date(c.dob),
                fmt_date(Some(c.arrest_date)),
                c.race.code().to_string(),
                stage.to_string(),
                charge.to_string(),
                disp,
            ]
        };
        if c.booking_charges.is_empty() && c.filed_charges.is_empty() {
            wtr.write_record(base("", "", String::new()))?;
        }
        for b in &c.booking_charges {
            wtr.write_record(base("booking", b.raw.trim(), String::new()))?;
        }
        for f in &c.filed_charges {
            let d = f.disposition.map(|d| d.to_string()).unwrap_or_default();
            wtr.write_record(base("filed", f.charge.raw.trim(), d))?;
        }
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const PSA: &str = "\
record_id,sfid,name,dob,arrest_date,psa_date,fta,nca,nvca,booking_charges,recorded_exclusion,recorded_bumpup,recorded_recommendation,age_at_arrest
1,S1,Ann,1990-05-01,2016-07-01,2016-07-02,2,3,false,187(A) PC F; 240 PC M,true,false,Release Not Recommended,
2,S2,Bob,,2016-07-03,2016-07-03,2,,false,,false,false,OR-NAS,30
";

    #[test]
    fn psa_rows_and_completeness() {
        let cat = ChargeCatalog::shipped();
        let parsed = read_psa(PSA.as_bytes(), "psa.csv", &cat).unwrap();
        assert!(parsed.errors.is_empty(), "{:?}", parsed.errors);
        assert_eq!(parsed.rows.len(), 2);
        let r0 = &parsed.rows[0];
        assert_eq!(r0.booking_charges.len(), 2);
        assert_eq!(r0.booking_charges[0].statute, "187");
        assert_eq!(r0.missing_component(), None);
        let rec = r0.clone().into_record().unwrap();
        assert_eq!(rec.factors.age_at_arrest, 26);
        assert_eq!(parsed.rows[1].missing_component(), Some("nca"));
        assert!(parsed.rows[1].clone().into_record().is_none());
    }

    #[test]
    fn schema_errors_name_columns() {
        let cat = ChargeCatalog::shipped();
        let err = read_psa("sfid,fta\nS1,2\n".as_bytes(), "psa.csv", &cat).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("arrest_date") && msg.contains("nca"), "{msg}");
    }

    #[test]
    fn bad_values_are_row_errors() {
        let cat = ChargeCatalog::shipped();
        let text = PSA.replace("2016-07-03,2016-07-03", "07/03/2016,2016-07-03");
        let parsed = read_psa(text.as_bytes(), "psa.csv", &cat).unwrap();
        assert_eq!(parsed.rows.len(), 1);
        assert_eq!(parsed.errors.len(), 1);
        assert_eq!(parsed.errors[0].row, 2);
    }

    const COURT: &str = "\
court_number,sfid,name,dob,arrest_date,race,stage,charge,disposition
C1,S1,Ann,1990-05-01,2016-07-01,B,booking,187(A) PC F,
C1,S1,Ann,1990-05-01,2016-07-01,B,filed,187(A) PC F,10
C1,S1,Ann,1990-05-01,2016-07-01,B,filed,240 PC M,160
C2,S2,Bob,,2016-07-03,,,,
";

    #[test]
    fn court_rows_group_into_cases() {
        let cat = ChargeCatalog::shipped();
        let parsed = read_court(COURT.as_bytes(), "court.csv", &cat).unwrap();
        assert!(parsed.errors.is_empty(), "{:?}", parsed.errors);
        assert_eq!(parsed.rows.len(), 2);
        let c1 = &parsed.rows[0];
        assert_eq!(c1.booking_charges.len(), 1);
        assert_eq!(c1.filed_charges.len(), 2);
        assert_eq!(c1.filed_charges[1].disposition, Some(160));
        assert_eq!(c1.race, Race::B);
        assert_eq!(parsed.rows[1].race, Race::Missing);
        assert!(parsed.rows[1].filed_charges.is_empty());
    }

    #[test]
    fn conflicting_case_rows_are_rejected() {
        let cat = ChargeCatalog::shipped();
        let text = format!("{COURT}C2,S9,Bob,,2016-07-03,,filed,484 PC M,20\n");
        let parsed = read_court(text.as_bytes(), "court.csv", &cat).unwrap();
        assert_eq!(parsed.rows.len(), 1);
        assert_eq!(parsed.errors.len(), 1);
    }

    #[test]
    fn writers_round_trip() {
        let cat = ChargeCatalog::shipped();
        let psa = read_psa(PSA.as_bytes(), "psa.csv", &cat).unwrap().rows;
        let mut buf = Vec::new();
        write_psa(&mut buf, &psa).unwrap();
        let again = read_psa(buf.as_slice(), "psa.csv", &cat).unwrap().rows;
        assert_eq!(psa, again);

        let court = read_court(COURT.as_bytes(), "court.csv", &cat).unwrap().rows;
        let mut buf = Vec::new();
        write_court(&mut buf, &court).unwrap();
        let again = read_court(buf.as_slice(), "court.csv", &cat).unwrap().rows;
        assert_eq!(court, again);
    }

    #[test]
    fn id_ordering_is_numeric_when_possible() {
        assert_eq!(compare_ids("9", "10"), Ordering::Less);
        assert_eq!(compare_ids("a", "b"), Ordering::Less);
    }
}
