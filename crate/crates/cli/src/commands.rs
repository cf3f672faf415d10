use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use psa_audit::charge::ChargeCode;
use psa_audit::counterfactual::{
    booking_assess, booking_charges, build_audit_pairs, sensitivity_subset, AuditPair,
};
use psa_audit::engine::{assess, PsaResult, SubScores, SupervisionLevel};
use psa_audit::error::RowError;
use psa_audit::linkage::{
    deduplicate, filter_complete, link, read_court_file, read_psa_file, write_court, write_psa,
    CourtCase, MatchResult, Parsed, PsaRecord, PsaRow, Race, COURT_COLUMNS, PSA_COLUMNS,
};
use psa_audit::stats::{
    agreement_rate, group_labels, histogram, proportion_affected, race_consistency, rate_table,
    Component, Group, GroupRule,
};
use psa_audit::synth::{generate, GeneratorConfig, TRUTH_COLUMNS};

use crate::output::{fixed, opt, sci, Outputs};
use crate::{CliError, Command, Settings, Status};

type Executed = (Status, String, Option<u64>);

pub fn execute(command: &Command, s: &Settings, out: &mut Outputs) -> Result<Executed, CliError> {
    match command {
        Command::Score { psa, .. } => score(psa, s, out),
        Command::Dedupe { psa, .. } => dedupe(psa, s, out),
        Command::Link { psa, court, .. } => link_cmd(psa, court, s, out),
        Command::Audit {
            psa,
            court,
            sensitivity,
            group_by,
            alpha,
            ..
        } => audit(psa, court, *sensitivity, *group_by, *alpha, s, out),
        Command::Validate { psa, court, .. } => validate(psa, court.as_deref(), s, out),
        Command::Consistency { court, .. } => consistency(court, s, out),
        Command::Simulate { config, seed, n, .. } => simulate(config.as_deref(), *seed, *n, s, out),
        Command::Replay { .. } => Err(CliError::Usage("replay cannot be nested".into())),
    }
}

pub fn schema_text() -> String {
    let mut s = String::new();
    let mut section = |title: &str, cols: Vec<(&str, String)>| {
        let _ = writeln!(s, "{title}");
        for (name, desc) in cols {
            let _ = writeln!(s, "  {name:<28} {desc}");
        }
        s.push('\n');
    };
    let req = |cols: &[(&'static str, bool, &'static str)]| -> Vec<(&'static str, String)> {
        cols.iter()
            .map(|(n, r, d)| (*n, format!("{}{d}", if *r { "[required] " } else { "" })))
            .collect()
    };
    section("assessment file (CSV, header row)", req(PSA_COLUMNS));
    section("court file (CSV, header row, one row per charge)", req(COURT_COLUMNS));
    section(
        "ground-truth file written by simulate",
        TRUTH_COLUMNS.iter().map(|(n, d)| (*n, d.to_string())).collect(),
    );
    let outs: &[(&str, &str)] = &[
        ("score", "results.csv, errors.csv"),
        ("dedupe", "psa_deduped.csv, duplicates.csv, incomplete.csv, counts.csv, errors.csv"),
        ("link", "matches.csv, review.csv, counts.csv, errors.csv"),
        (
            "audit",
            "counts.csv, audit_pairs.csv, rates.csv, affected.csv, initial_distribution.csv, review.csv, errors.csv, summary.txt",
        ),
        ("validate", "agreement.csv, discrepancies.csv, errors.csv"),
        ("consistency", "consistency.csv, errors.csv"),
        ("simulate", "psa.csv, court.csv, truth.csv"),
    ];
    section(
        "outputs per subcommand (plus manifest.json)",
        outs.iter().map(|(n, d)| (*n, d.to_string())).collect(),
    );
    s
}

fn join(charges: &[ChargeCode]) -> String {
    charges.iter().map(|c| c.normalized()).collect::<Vec<_>>().join("; ")
}

fn flag(b: bool) -> String {
    (b as u8).to_string()
}

fn level(l: SupervisionLevel) -> String {
    l.label().to_string()
}

const ERROR_HEADER: [&str; 4] = ["source", "row", "record_id", "message"];

fn parse_error_rows(errors: &[RowError]) -> Vec<Vec<String>> {
    errors
        .iter()
        .map(|e| vec![e.file.clone(), e.row.to_string(), String::new(), e.message.clone()])
        .collect()
}

fn read_psa(path: &Path, s: &Settings) -> Result<Parsed<PsaRow>, CliError> {
    Ok(read_psa_file(path, &s.engine.catalog)?)
}

fn read_court(path: &Path, s: &Settings) -> Result<Parsed<CourtCase>, CliError> {
    Ok(read_court_file(path, &s.engine.catalog)?)
}

fn score(psa: &Path, s: &Settings, out: &mut Outputs) -> Result<Executed, CliError> {
    let parsed = read_psa(psa, s)?;
    let mut errors = parse_error_rows(&parsed.errors);
    let mut rows = Vec::new();
    for row in &parsed.rows {
        let result = match row.missing_component() {
            Some(c) => Err(format!("missing {c}")),
            None => SubScores::new(row.fta.unwrap_or(0), row.nca.unwrap_or(0), row.nvca.unwrap_or(false))
                .and_then(|sub| {
                    assess(sub, &row.booking_charges, row.extradited, &s.engine.dmf, &s.engine.catalog)
                })
                .map_err(|e| e.to_string()),
        };
        match result {
            Ok(r) => rows.push(result_row(&row.record_id, &row.sfid, &r)),
            Err(m) => errors.push(vec!["engine".into(), String::new(), row.record_id.clone(), m]),
        }
    }
    out.table("results.csv", &RESULT_HEADER, &rows)?;
    out.table("errors.csv", &ERROR_HEADER, &errors)?;
    let status = status_of(!errors.is_empty(), rows.is_empty());
    Ok((status, format!("scored {} records, {} errors", rows.len(), errors.len()), None))
}

const RESULT_HEADER: [&str; 11] = [
    "record_id",
    "sfid",
    "fta",
    "nca",
    "nvca",
    "exclusion",
    "exclusion_reason",
    "bumpup",
    "bumpup_reason",
    "initial",
    "final",
];

fn result_row(id: &str, sfid: &str, r: &PsaResult) -> Vec<String> {
    vec![
        id.to_string(),
        sfid.to_string(),
        r.subscores.fta.to_string(),
        r.subscores.nca.to_string(),
        flag(r.nvca_flag()),
        flag(r.is_excluded()),
        opt(r.exclusion.as_ref()),
        flag(r.is_bumped()),
        opt(r.bumpup.as_ref()),
        level(r.initial),
        level(r.final_level),
    ]
}

fn dedupe(psa: &Path, s: &Settings, out: &mut Outputs) -> Result<Executed, CliError> {
    let parsed = read_psa(psa, s)?;
    let input = parsed.rows.len();
    let (complete, incomplete) = filter_complete(parsed.rows);
    let (kept, dups) = deduplicate(complete);
    let to_rows = |v: &[PsaRecord]| v.iter().map(PsaRow::from).collect::<Vec<_>>();
    let kept_rows = to_rows(&kept);
    let dup_rows = to_rows(&dups);
    out.with_writer("psa_deduped.csv", |w| write_psa(w, &kept_rows))?;
    out.with_writer("duplicates.csv", |w| write_psa(w, &dup_rows))?;
    let inc: Vec<Vec<String>> = incomplete
        .iter()
        .map(|r| vec![r.record_id.clone(), r.sfid.clone(), opt(r.missing_component())])
        .collect();
    out.table("incomplete.csv", &["record_id", "sfid", "missing"], &inc)?;
    let counts = vec![
        count_row("input", input),
        count_row("incomplete", incomplete.len()),
        count_row("duplicates", dups.len()),
        count_row("kept", kept.len()),
    ];
    out.table("counts.csv", &["stage", "count"], &counts)?;
    out.table("errors.csv", &ERROR_HEADER, &parse_error_rows(&parsed.errors))?;
    let status = status_of(!parsed.errors.is_empty(), kept.is_empty());
    Ok((
        status,
        format!("kept {} of {input} rows ({} incomplete, {} duplicates)", kept.len(), incomplete.len(), dups.len()),
        None,
    ))
}

fn status_of(partial: bool, empty: bool) -> Status {
    if empty {
        Status::Empty
    } else if partial {
        Status::Partial
    } else {
        Status::Ok
    }
}

fn count_row(stage: &str, n: usize) -> Vec<String> {
    vec![stage.to_string(), n.to_string()]
}

fn match_row(m: &MatchResult) -> Vec<String> {
    vec![
        m.psa.record_id.clone(),
        m.psa.sfid.clone(),
        m.status.label().to_string(),
        m.candidate_count.to_string(),
        m.matched_cases.iter().map(|c| c.court_number.as_str()).collect::<Vec<_>>().join(";"),
    ]
}

const REVIEW_HEADER: [&str; 3] = ["record_id", "reason", "detail"];

fn review_row(id: &str, reason: &str, detail: String) -> Vec<String> {
    vec![id.to_string(), reason.to_string(), detail]
}

/// Linkage cases a person should look at: no match, several cases merged,
/// and cases claimed by more than one record.
fn linkage_review(outcome: &psa_audit::linkage::LinkageOutcome) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for m in &outcome.unresolved {
        rows.push(review_row(&m.psa.record_id, "unresolved", format!("{} candidates", m.candidate_count)));
    }
    for m in &outcome.matched {
        if m.matched_cases.len() > 1 {
            let cases: Vec<&str> = m.matched_cases.iter().map(|c| c.court_number.as_str()).collect();
            rows.push(review_row(&m.psa.record_id, "multiple-cases", cases.join(";")));
        }
    }
    for c in outcome.shared_cases() {
        rows.push(review_row("", "shared-case", c));
    }
    rows
}

fn link_cmd(psa: &Path, court: &Path, s: &Settings, out: &mut Outputs) -> Result<Executed, CliError> {
    let parsed = read_psa(psa, s)?;
    let cases = read_court(court, s)?;
    let outcome = link(parsed.rows, &cases.rows);
    let matches: Vec<Vec<String>> = outcome.matched.iter().chain(&outcome.unresolved).map(match_row).collect();
    out.table(
        "matches.csv",
        &["record_id", "sfid", "status", "candidates", "court_numbers"],
        &matches,
    )?;
    out.table("review.csv", &REVIEW_HEADER, &linkage_review(&outcome))?;
    out.table("counts.csv", &["stage", "count"], &linkage_counts(&outcome))?;
    let mut errors = parse_error_rows(&parsed.errors);
    errors.extend(parse_error_rows(&cases.errors));
    out.table("errors.csv", &ERROR_HEADER, &errors)?;
    let status = status_of(!errors.is_empty(), outcome.matched.is_empty());
    Ok((
        status,
        format!("matched {} of {} rows", outcome.matched.len(), outcome.input_count),
        None,
    ))
}

fn linkage_counts(o: &psa_audit::linkage::LinkageOutcome) -> Vec<Vec<String>> {
    vec![
        count_row("input", o.input_count),
        count_row("incomplete", o.incomplete.len()),
        count_row("duplicates", o.duplicates.len()),
        count_row("unresolved", o.unresolved.len()),
        count_row("matched", o.matched.len()),
    ]
}

/// One labelled subset of pairs for the tables.
struct Slice<'a> {
    set: &'static str,
    group: &'static str,
    pairs: Vec<&'a AuditPair>,
}

fn slices<'a>(set: &'static str, pairs: &'a [AuditPair], groups: &[Group]) -> Vec<Slice<'a>> {
    let mut v = vec![Slice {
        set,
        group: "all",
        pairs: pairs.iter().collect(),
    }];
    for g in Group::ALL {
        v.push(Slice {
            set,
            group: g.label(),
            pairs: pairs.iter().zip(groups).filter(|(_, pg)| **pg == g).map(|(p, _)| p).collect(),
        });
    }
    v
}

const RATE_HEADER: [&str; 11] = [
    "set",
    "group",
    "component",
    "n",
    "booking",
    "conviction",
    "difference",
    "statistic",
    "p_value",
    "significant",
    "note",
];

#[allow(clippy::too_many_arguments)]
fn audit(
    psa: &Path,
    court: &Path,
    sensitivity: bool,
    rule: GroupRule,
    alpha: f64,
    s: &Settings,
    out: &mut Outputs,
) -> Result<Executed, CliError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha {alpha} must lie in (0, 1)")));
    }
    let parsed = read_psa(psa, s)?;
    let cases = read_court(court, s)?;
    let mut errors = parse_error_rows(&parsed.errors);
    errors.extend(parse_error_rows(&cases.errors));
    let linkage = link(parsed.rows, &cases.rows);
    let audit = build_audit_pairs(&linkage.matched, &s.policy, &s.engine);
    for (id, e) in &audit.engine_errors {
        errors.push(vec!["engine".into(), String::new(), id.clone(), e.to_string()]);
    }

    let pairs = audit.pairs;
    let groups = group_labels(&pairs, rule, &cases.rows);
    let group_of: BTreeMap<&str, Group> =
        pairs.iter().zip(&groups).map(|(p, g)| (p.record_id.as_str(), *g)).collect();
    let mut sets = slices("all", &pairs, &groups);
    let sens = sensitivity_subset(&pairs);
    let sens_groups: Vec<Group> = sens.iter().map(|p| group_of[p.record_id.as_str()]).collect();
    if sensitivity {
        sets.extend(slices("sensitivity", &sens, &sens_groups));
    }

    let mut counts = linkage_counts(&linkage);
    counts.push(count_row("not_disposed", audit.not_disposed.len()));
    counts.push(count_row("engine_errors", audit.engine_errors.len()));
    counts.push(count_row("audited", pairs.len()));
    if sensitivity {
        counts.push(count_row("sensitivity_excluded", pairs.len() - sens.len()));
        counts.push(count_row("sensitivity_audited", sens.len()));
    }
    out.table("counts.csv", &["stage", "count"], &counts)?;

    let pair_rows: Vec<Vec<String>> = pairs.iter().zip(&groups).map(|(p, g)| pair_row(p, *g)).collect();
    out.table("audit_pairs.csv", &PAIR_HEADER, &pair_rows)?;

    let mut rates = Vec::new();
    let mut affected = Vec::new();
    let mut dist = Vec::new();
    let mut summary = String::new();
    for c in &counts {
        let _ = writeln!(summary, "{:<22} {}", c[0], c[1]);
    }
    for sl in &sets {
        let _ = writeln!(summary, "\n[{} / {}] n = {}", sl.set, sl.group, sl.pairs.len());
        match rate_table(&sl.pairs, alpha) {
            Ok(t) => {
                for r in &t.rows {
                    rates.push(vec![
                        sl.set.into(),
                        sl.group.into(),
                        r.component.label().into(),
                        t.n.to_string(),
                        fixed(r.booking),
                        fixed(r.conviction),
                        fixed(r.difference),
                        r.statistic.map(fixed).unwrap_or_default(),
                        r.p_value.map(sci).unwrap_or_default(),
                        flag(r.significant),
                        r.note.clone().unwrap_or_default(),
                    ]);
                    let _ = writeln!(
                        summary,
                        "  {:<15} booking {:.4}  conviction {:.4}  p {}{}",
                        r.component.label(),
                        r.booking,
                        r.conviction,
                        r.p_value.map(sci).unwrap_or_else(|| "n/a".into()),
                        if r.significant { "  *" } else { "" }
                    );
                }
            }
            Err(e) => {
                for c in Component::ALL {
                    let mut row = vec![sl.set.into(), sl.group.into(), c.label().into(), "0".into()];
                    row.extend(std::iter::repeat_n(String::new(), 6));
                    row.push(e.to_string());
                    rates.push(row);
                }
                let _ = writeln!(summary, "  no tests: {e}");
            }
        }
        if let Ok(a) = proportion_affected(&sl.pairs) {
            for (i, c) in Component::ALL.iter().enumerate() {
                affected.push(vec![
                    sl.set.into(),
                    sl.group.into(),
                    c.label().into(),
                    a.n.to_string(),
                    a.counts[i].to_string(),
                    fixed(a.fraction(*c)),
                ]);
            }
            let _ = writeln!(
                summary,
                "  affected: exclusion {:.4}  bumpup {:.4}  nvca {:.4}  recommendation {:.4}",
                a.exclusion, a.bumpup, a.nvca, a.recommendation
            );
        }
        let h = histogram(sl.group, sl.pairs.iter().map(|p| p.booking.initial));
        for l in SupervisionLevel::ALL {
            let i = l.rank() as usize - 1;
            dist.push(vec![
                sl.set.into(),
                sl.group.into(),
                level(l),
                h.counts[i].to_string(),
                fixed(h.fractions[i]),
            ]);
        }
    }
    out.table("rates.csv", &RATE_HEADER, &rates)?;
    out.table(
        "affected.csv",
        &["set", "group", "component", "n", "count", "fraction"],
        &affected,
    )?;
    out.table(
        "initial_distribution.csv",
        &["set", "group", "level", "count", "fraction"],
        &dist,
    )?;

    let mut review = linkage_review(&linkage);
    for id in &audit.not_disposed {
        review.push(review_row(id, "not-disposed", String::new()));
    }
    for (id, e) in &audit.engine_errors {
        review.push(review_row(id, "engine-error", e.to_string()));
    }
    for p in pairs.iter().filter(|p| p.plea_elsewhere) {
        review.push(review_row(&p.record_id, "plea-elsewhere", p.court_numbers.join(";")));
    }
    out.table("review.csv", &REVIEW_HEADER, &review)?;
    out.table("errors.csv", &ERROR_HEADER, &errors)?;
    out.write("summary.txt", summary.as_bytes())?;

    let status = status_of(!errors.is_empty(), pairs.is_empty());
    let message = match proportion_affected(&pairs.iter().collect::<Vec<_>>()) {
        Ok(a) => format!(
            "audited {} records; recommendation higher under booking charges for {:.4}",
            pairs.len(),
            a.recommendation
        ),
        Err(_) => "no records reached the audit".to_string(),
    };
    Ok((status, message, None))
}

const PAIR_HEADER: [&str; 20] = [
    "record_id",
    "sfid",
    "group",
    "court_numbers",
    "booking_charges",
    "conviction_charges",
    "booking_nvca",
    "booking_exclusion",
    "booking_bumpup",
    "booking_initial",
    "booking_final",
    "conviction_nvca",
    "conviction_exclusion",
    "conviction_bumpup",
    "conviction_initial",
    "conviction_final",
    "exclusion_lost",
    "bumpup_lost",
    "nvca_lost",
    "recommendation_delta",
];

fn pair_row(p: &AuditPair, g: Group) -> Vec<String> {
    let mut row = vec![
        p.record_id.clone(),
        p.sfid.clone(),
        g.label().to_string(),
        p.court_numbers.join(";"),
        join(&p.booking_charges),
        join(&p.conviction_charges),
    ];
    for r in [&p.booking, &p.conviction] {
        row.extend([
            flag(r.nvca_flag()),
            flag(r.is_excluded()),
            flag(r.is_bumped()),
            level(r.initial),
            level(r.final_level),
        ]);
    }
    let d = &p.deltas;
    row.extend([
        flag(d.exclusion_lost),
        flag(d.bumpup_lost),
        flag(d.nvca_lost),
        d.recommendation_delta.to_string(),
    ]);
    row
}

fn validate(psa: &Path, court: Option<&Path>, s: &Settings, out: &mut Outputs) -> Result<Executed, CliError> {
    let parsed = read_psa(psa, s)?;
    let mut errors = parse_error_rows(&parsed.errors);
    // (record, charges used for the reproduction)
    let subjects: Vec<(PsaRecord, Vec<ChargeCode>)> = match court {
        Some(c) => {
            let cases = read_court(c, s)?;
            errors.extend(parse_error_rows(&cases.errors));
            link(parsed.rows, &cases.rows)
                .matched
                .into_iter()
                .map(|m| {
                    let charges = booking_charges(&m);
                    (m.psa, charges)
                })
                .collect()
        }
        None => filter_complete(parsed.rows)
            .0
            .into_iter()
            .map(|r| {
                let charges = r.booking_charges.clone();
                (r, charges)
            })
            .collect(),
    };

    let mut reproduced = Vec::new();
    let mut records = Vec::new();
    for (r, charges) in &subjects {
        match booking_assess(r, charges, &s.engine) {
            Ok(res) => {
                reproduced.push(res);
                records.push(r);
            }
            Err(e) => errors.push(vec!["engine".into(), String::new(), r.record_id.clone(), e.to_string()]),
        }
    }

    let mut agreement = Vec::new();
    let mut discrepancies = Vec::new();
    let mut any_compared = false;
    for c in Component::ALL {
        let pairs: Vec<(Option<String>, String)> = records
            .iter()
            .zip(&reproduced)
            .map(|(r, res)| {
                let rec = &r.recorded;
                match c {
                    Component::Exclusion => (rec.exclusion.map(flag), flag(res.is_excluded())),
                    Component::Bumpup => (rec.bumpup.map(flag), flag(res.is_bumped())),
                    Component::Nvca => (rec.nvca.map(flag), flag(res.nvca_flag())),
                    Component::Recommendation => (rec.recommendation.map(level), level(res.final_level)),
                }
            })
            .collect();
        let mask: Vec<bool> = records
            .iter()
            .zip(&reproduced)
            .zip(&pairs)
            .map(|((r, res), (recorded, _))| {
                recorded.is_some()
                    && (c != Component::Bumpup || !r.recorded.exclusion.unwrap_or(res.is_excluded()))
            })
            .collect();
        let recorded: Vec<String> = pairs.iter().map(|p| p.0.clone().unwrap_or_default()).collect();
        let ours: Vec<String> = pairs.iter().map(|p| p.1.clone()).collect();
        let compared = mask.iter().filter(|m| **m).count();
        let (agreed, rate) = match agreement_rate(&ours, &recorded, Some(&mask)) {
            Ok(rate) => {
                any_compared = true;
                let agreed = (0..ours.len()).filter(|&i| mask[i] && ours[i] == recorded[i]).count();
                (agreed.to_string(), fixed(rate))
            }
            Err(_) => (String::new(), String::new()),
        };
        agreement.push(vec![c.label().into(), compared.to_string(), agreed, rate]);
        for i in (0..ours.len()).filter(|&i| mask[i] && ours[i] != recorded[i]) {
            discrepancies.push(vec![
                records[i].record_id.clone(),
                c.label().into(),
                ours[i].clone(),
                recorded[i].clone(),
            ]);
        }
    }
    out.table("agreement.csv", &["component", "compared", "agreed", "rate"], &agreement)?;
    out.table(
        "discrepancies.csv",
        &["record_id", "component", "reproduced", "recorded"],
        &discrepancies,
    )?;
    out.table("errors.csv", &ERROR_HEADER, &errors)?;
    let status = status_of(!errors.is_empty(), !any_compared);
    Ok((
        status,
        format!("validated {} records, {} discrepancies", records.len(), discrepancies.len()),
        None,
    ))
}

fn consistency(court: &Path, s: &Settings, out: &mut Outputs) -> Result<Executed, CliError> {
    let cases = read_court(court, s)?;
    let m = race_consistency(&cases.rows);
    let mut header = vec!["label", "people"];
    header.extend(Race::ALL.iter().map(|r| r.code()));
    let mut rows = Vec::new();
    for r in Race::ALL {
        let Some(values) = m.rows[r.index()] else {
            continue;
        };
        let mut row = vec![r.code().to_string(), m.row_counts[r.index()].to_string()];
        row.extend(Race::ALL.iter().map(|c| fixed(values[c.index()])));
        rows.push(row);
    }
    out.table("consistency.csv", &header, &rows)?;
    out.table("errors.csv", &ERROR_HEADER, &parse_error_rows(&cases.errors))?;
    let status = status_of(!cases.errors.is_empty(), m.individuals == 0);
    Ok((status, format!("{} people with more than one case", m.individuals), None))
}

fn simulate(
    config: Option<&Path>,
    seed: Option<u64>,
    n: Option<usize>,
    s: &Settings,
    out: &mut Outputs,
) -> Result<Executed, CliError> {
    let mut cfg = match config {
        Some(p) => GeneratorConfig::load(p)?,
        None => GeneratorConfig::default(),
    };
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(n) = n {
        cfg.n_records = n;
    }
    let data = generate(&cfg, &s.engine).map_err(psa_audit::Error::from)?;
    out.with_writer("psa.csv", |w| write_psa(w, &data.psa))?;
    out.with_writer("court.csv", |w| write_court(w, &data.cases))?;
    out.with_writer("truth.csv", |w| data.write_truth(w))?;
    Ok((
        Status::Ok,
        format!("wrote {} assessment rows and {} court cases", data.psa.len(), data.cases.len()),
        Some(cfg.seed),
    ))
}
