//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::{Duration, NaiveDate};
use psa_audit::charge::ChargeCode;
use psa_audit::counterfactual::{
    case_convictions, conviction_charges, is_conviction, plea_elsewhere_only,
    DispositionPolicy,
};
use psa_audit::engine::{assess, EngineConfig, RiskFactors, SubScores, SupervisionLevel};
use psa_audit::linkage::{
    deduplicate, filter_complete, in_window, link, CourtCase, FiledCharge, MatchResult, MatchStatus,
    PsaRecord, Race, RecordedComponents,
};
use psa_audit::stats::{bonferroni, race_consistency, two_proportion_test, wilcoxon_rank_sum};
use psa_audit::synth::{generate, oracle_assess, random_engine_inputs, GeneratorConfig};
use psa_audit_cli::{main_with_args, RunManifest, MANIFEST_FILE};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn code(s: &str) -> ChargeCode {
    ChargeCode::parse(s).unwrap()
}

fn date(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
}

fn cli(args: &[&str]) -> u8 {
    let mut v = vec!["psa-audit"];
    v.extend_from_slice(args);
    let r = main_with_args(v);
    if r.code != 0 && r.code != 4 {
        eprintln!("  psa-audit {}: exit {} {}", args.join(" "), r.code, r.message.trim_end());
    }
    r.code
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_table(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().clone();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            header.iter().map(String::from).zip(r.iter().map(String::from)).collect()
        })
        .collect()
}

fn dmf_anchors() -> Verdict {
    let cfg = EngineConfig::shipped();
    let run = |f, n, charges: &[&str]| {
        let cs: Vec<ChargeCode> = charges.iter().map(|c| code(c)).collect();
        assess(SubScores::new(f, n, false).unwrap(), &cs, false, &cfg.dmf, &cfg.catalog).unwrap()
    };
    let anchor = run(2, 3, &[]);
    let felony = run(5, 4, &["459 PC F"]);
    let misdemeanor = run(5, 4, &["484(A) PC M"]);
    let none = run(5, 4, &[]);
    let ok = anchor.initial == SupervisionLevel::OrNas
        && anchor.final_level == SupervisionLevel::OrNas
        && felony.initial == SupervisionLevel::ReleaseNotRecommended
        && misdemeanor.initial == SupervisionLevel::SfpdpAcm
        && none.initial == SupervisionLevel::SfpdpAcm;
    verdict(
        ok,
        format!(
            "(2,3) -> {}; (5,4) felony -> {}, misdemeanor -> {}, no charges -> {}",
            anchor.final_level, felony.initial, misdemeanor.initial, none.initial
        ),
    )
}

fn oracle_equivalence() -> Verdict {
    let cfg = EngineConfig::shipped();
    let inputs = random_engine_inputs(20_160_501, 10_000, &cfg.catalog);
    let disagree = inputs
        .iter()
        .filter(|i| {
            let engine = assess(i.subscores, &i.charges, i.extradited, &cfg.dmf, &cfg.catalog);
            let oracle = oracle_assess(i.subscores, &i.charges, i.extradited, &cfg.dmf, &cfg.catalog);
            engine != oracle
        })
        .count();
    verdict(disagree == 0, format!("{} inputs, {disagree} disagreements", inputs.len()))
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u32..1 << items.len())
        .map(|mask| {
            items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone()).collect()
        })
        .collect()
}

fn engine_invariants() -> Verdict {
    let cfg = EngineConfig::shipped();
    let inputs = random_engine_inputs(7, 2_000, &cfg.catalog);
    let (mut dominance, mut saturation, mut step, mut monotone) = (0, 0, 0, 0);
    let mut subset_cases = 0;
    for i in &inputs {
        let full = assess(i.subscores, &i.charges, i.extradited, &cfg.dmf, &cfg.catalog).unwrap();
        if full.is_excluded() && full.final_level != SupervisionLevel::ReleaseNotRecommended {
            dominance += 1;
        }
        if full.is_bumped()
            && !full.is_excluded()
            && full.final_level != full.initial.bumped()
        {
            saturation += 1;
        }
        if !full.is_excluded() {
            let d = full.final_level.rank() as i32 - full.initial.rank() as i32;
            if !(d == 0 || d == 1) {
                step += 1;
            }
        }
        for sub in subsets(&i.charges) {
            subset_cases += 1;
            let r = assess(i.subscores, &sub, i.extradited, &cfg.dmf, &cfg.catalog).unwrap();
            if r.final_level > full.final_level {
                monotone += 1;
            }
        }
    }
    // Saturation at the top level, stated directly.
    let top = SupervisionLevel::ReleaseNotRecommended.bumped() == SupervisionLevel::ReleaseNotRecommended;
    let ok = dominance + saturation + step + monotone == 0 && top && inputs.len() >= 1000;
    verdict(
        ok,
        format!(
            "{} cases, {subset_cases} subset checks; violations: dominance {dominance}, bump-up {saturation}, step {step}, monotonicity {monotone}",
            inputs.len()
        ),
    )
}

fn linkage_fixtures() -> Verdict {
    let base = date("2016-07-10");
    let accepted: Vec<i64> = (-2..=3).filter(|o| in_window(base, base + Duration::days(*o))).collect();
    let window_ok = accepted == vec![-1, 0, 1, 2];

    let cfg = EngineConfig::shipped();
    let gen = GeneratorConfig {
        n_records: 1000,
        seed: 11,
        ..GeneratorConfig::default()
    };
    let data = generate(&gen, &cfg).unwrap();
    let (complete, _) = filter_complete(data.psa.clone());
    let (kept, _) = deduplicate(complete);
    let (again, dups_again) = deduplicate(kept.clone());
    let idempotent = again == kept && dups_again.is_empty();

    let outcome = link(data.psa.clone(), &data.cases);
    let n = outcome.input_count as f64;
    let dup_rate = outcome.duplicates.len() as f64 / n;
    let inc_rate = outcome.incomplete.len() as f64 / n;
    let rates_ok = (dup_rate - gen.duplicate_rate).abs() <= 0.02 && (inc_rate - gen.incomplete_rate).abs() <= 0.02;
    verdict(
        window_ok && idempotent && outcome.is_conserved() && rates_ok,
        format!(
            "window {accepted:?}; dedup idempotent {idempotent}; conserved {} ({} = {} + {} + {} + {}); duplicate rate {dup_rate:.3} (planted {}), incomplete rate {inc_rate:.3} (planted {})",
            outcome.is_conserved(),
            outcome.input_count,
            outcome.matched.len(),
            outcome.unresolved.len(),
            outcome.incomplete.len(),
            outcome.duplicates.len(),
            gen.duplicate_rate,
            gen.incomplete_rate
        ),
    )
}

fn court_case(number: &str, filed: &[(&str, Option<i32>)]) -> CourtCase {
    CourtCase {
        court_number: number.into(),
        sfid: "S1".into(),
        name: String::new(),
        dob: None,
        arrest_date: date("2016-07-01"),
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

fn matched(cases: Vec<CourtCase>) -> MatchResult {
    let d = date("2016-07-01");
    MatchResult {
        psa: PsaRecord {
            record_id: "1".into(),
            sfid: "S1".into(),
            name: String::new(),
            dob: None,
            arrest_date: d,
            psa_date: d,
            subscores: SubScores::new(3, 3, false).unwrap(),
            booking_charges: vec![],
            recorded: RecordedComponents::default(),
            factors: RiskFactors {
                age_at_arrest: 30,
                ..Default::default()
            },
            extradited: false,
        },
        candidate_count: cases.len(),
        matched_cases: cases,
        status: MatchStatus::Matched,
    }
}

fn texts(v: &[ChargeCode]) -> Vec<String> {
    v.iter().map(|c| c.normalized()).collect()
}

fn counterfactual_semantics() -> Verdict {
    let p = DispositionPolicy::default();
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    let single = court_case("C1", &[("240 PC M", Some(160))]);
    check("160 is a conviction", is_conviction(160, &single, &p));
    check("159 is not", !is_conviction(159, &single, &p));

    let alone = court_case("C2", &[("240 PC M", Some(72))]);
    check("72 alone is not a conviction", !is_conviction(72, &alone, &p));
    let only72 = matched(vec![alone.clone()]);
    check(
        "only 72 gives no convictions",
        conviction_charges(&only72, &p).is_ok_and(|v| v.is_empty()),
    );
    check("only 72 is a plea elsewhere", plea_elsewhere_only(&only72, &p));

    let companion = court_case("C3", &[("245(A)(1) PC F", Some(72)), ("242 PC M", Some(0))]);
    check(
        "0 beside 72 is a conviction",
        case_convictions(&companion, &p)
            .is_ok_and(|v| v.len() == 1 && v[0].normalized() == code("242 PC M").normalized()),
    );
    let pending = court_case("C4", &[("245(A)(1) PC F", Some(72)), ("242 PC M", None)]);
    check("pending case is not disposed", case_convictions(&pending, &p).is_err());

    let threshold = matched(vec![court_case("C5", &[("187(A) PC F", Some(20)), ("240 PC M", Some(160))])]);
    check(
        "threshold example",
        conviction_charges(&threshold, &p).is_ok_and(|v| texts(&v) == texts(&[code("240 PC M")])),
    );
    let dismissed = matched(vec![court_case("C6", &[("187(A) PC F", Some(20)), ("240 PC M", Some(30))])]);
    check(
        "all dismissed gives none",
        conviction_charges(&dismissed, &p).is_ok_and(|v| v.is_empty()),
    );
    let n = failures.len();
    verdict(
        n == 0,
        if n == 0 {
            "9 disposition fixtures exact".to_string()
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

fn end_to_end(work: &Path) -> Verdict {
    let start = Instant::now();
    let sim = work.join("e2e-sim");
    let out = work.join("e2e-audit");
    let c1 = cli(&["simulate", "--n", "10000", "--seed", "27", "--out", s(&sim)]);
    let c2 = cli(&[
        "audit",
        "--psa",
        s(&sim.join("psa.csv")),
        "--court",
        s(&sim.join("court.csv")),
        "--out",
        s(&out),
    ]);
    let elapsed = start.elapsed().as_secs_f64();
    if c1 != 0 || c2 != 0 {
        return verdict(false, format!("exit codes simulate {c1}, audit {c2}"));
    }
    let affected = read_table(&out.join("affected.csv"))
        .into_iter()
        .find(|r| r["set"] == "all" && r["group"] == "all" && r["component"] == "recommendation")
        .map(|r| r["fraction"].parse::<f64>().unwrap());
    let Some(a) = affected else {
        return verdict(false, "no proportion-affected row");
    };
    let planted = GeneratorConfig::default().affected_rate;
    verdict(
        (a - planted).abs() <= 0.02 && elapsed < 30.0,
        format!("n=10000, planted {planted}, reported {a:.4}, {elapsed:.1} s"),
    )
}

/// Exact two-sided permutation p of every possible split of `values` into
/// samples of size `n1` and the rest, keyed by the split's bitmask.
fn exact_pvalues(values: &[f64], n1: usize) -> Vec<(u32, f64)> {
    let (ranks, _) = psa_audit::stats::midranks(values);
    let n = values.len();
    let mean = n1 as f64 * (n as f64 + 1.0) / 2.0;
    let splits: Vec<(u32, f64)> = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == n1)
        .map(|m| {
            let w: f64 = (0..n).filter(|i| m >> i & 1 == 1).map(|i| ranks[i]).sum();
            (m, (w - mean).abs())
        })
        .collect();
    let total = splits.len() as f64;
    let mut sorted: Vec<f64> = splits.iter().map(|s| s.1).collect();
    sorted.sort_by(f64::total_cmp);
    splits
        .iter()
        .map(|&(m, d)| {
            let below = sorted.partition_point(|e| *e < d - 1e-9);
            (m, (sorted.len() - below) as f64 / total)
        })
        .collect()
}

fn wilcoxon_gap(n1: usize, n2: usize, values: &[f64]) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for (mask, exact) in exact_pvalues(values, n1) {
        let pick = |first: bool| -> Vec<f64> {
            (0..values.len()).filter(|i| (mask >> i & 1 == 1) == first).map(|i| values[i]).collect()
        };
        let (a, b) = (pick(true), pick(false));
        debug_assert_eq!((a.len(), b.len()), (n1, n2));
        if let Ok(r) = wilcoxon_rank_sum(&a, &b) {
            let gap = (r.p_value - exact).abs();
            worst = Some(worst.map_or(gap, |w: f64| w.max(gap)));
        }
    }
    worst
}

fn statistics() -> Verdict {
    let z = two_proportion_test(30, 100, 10, 100).unwrap();
    let z_ok = (z.statistic - 2.5 * std::f64::consts::SQRT_2).abs() < 1e-10
        && (z.p_value - 4.069_520_174_449_59e-4).abs() < 1e-10
        && two_proportion_test(20, 100, 10, 50).is_ok_and(|r| r.statistic == 0.0 && r.p_value == 1.0);

    // alpha / m = 1.667e-4
    let pvals = [0.0001, 0.00016, 0.00017, 0.0002, 0.01, 0.3];
    let alpha = 0.001;
    let direct: Vec<bool> = pvals.iter().map(|p| *p < alpha / pvals.len() as f64).collect();
    let bonf_ok = bonferroni(&pvals, alpha).is_ok_and(|f| f == direct)
        && direct == [true, true, false, false, false, false];

    // Exhaustive over every split of untied data and of tied ordinal data.
    let mut worst: BTreeMap<&str, (f64, usize, usize)> = BTreeMap::new();
    let mut lcg = 12_345u64;
    for n1 in 1..=8 {
        for n2 in 1..=8 {
            let n = n1 + n2;
            let mut sets: Vec<(&str, Vec<f64>)> = vec![("untied", (1..=n).map(|v| v as f64).collect())];
            for _ in 0..4 {
                let tied: Vec<f64> = (0..n)
                    .map(|_| {
                        lcg = lcg.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
                        ((lcg >> 33) % 4 + 1) as f64
                    })
                    .collect();
                sets.push(("tied", tied));
            }
            for (kind, values) in &sets {
                if let Some(g) = wilcoxon_gap(n1, n2, values) {
                    let w = worst.entry(kind).or_insert((0.0, 0, 0));
                    if g > w.0 {
                        *w = (g, n1, n2);
                    }
                }
            }
        }
    }
    let wilcoxon_ok = worst.values().all(|w| w.0 <= 0.01);
    let gaps = worst
        .iter()
        .map(|(k, (g, n1, n2))| format!("{k} {g:.4} at n1={n1}, n2={n2}"))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        z_ok && bonf_ok && wilcoxon_ok,
        format!(
            "z-test {}; Bonferroni {}; Wilcoxon max |normal p - exact p|: {gaps} (tolerance 0.01)",
            if z_ok { "exact" } else { "off" },
            if bonf_ok { "exact" } else { "off" },
        ),
    )
}

fn consistency() -> Verdict {
    let case = |n: usize, sfid: &str, race: Race| CourtCase {
        court_number: format!("C{n}"),
        sfid: sfid.into(),
        name: String::new(),
        dob: None,
        arrest_date: date("2016-01-01"),
        race,
        booking_charges: vec![],
        filed_charges: vec![],
    };
    let cases = vec![
        case(1, "p1", Race::B),
        case(2, "p1", Race::B),
        case(3, "p1", Race::W),
        case(4, "p2", Race::B),
        case(5, "p2", Race::B),
    ];
    let m = race_consistency(&cases);
    let bb = m.get(Race::B, Race::B).unwrap();
    let bw = m.get(Race::B, Race::W).unwrap();
    let hand_ok = (bb - 100.0 * (2.0 / 3.0 + 1.0) / 2.0).abs() < 1e-12
        && (bw - 100.0 * (1.0 / 3.0 + 0.0) / 2.0).abs() < 1e-12
        && m.individuals == 2;
    let mut more = cases.clone();
    more.push(case(6, "p3", Race::W));
    more.push(case(7, "p4", Race::B));
    let unchanged = race_consistency(&more) == m;
    verdict(
        hand_ok && unchanged,
        format!("B row: B {bb:.4}, W {bw:.4}; single-case people change nothing: {unchanged}"),
    )
}

fn self_validation(work: &Path) -> Verdict {
    let sim = work.join("val-sim");
    let out = work.join("val");
    let c1 = cli(&["simulate", "--n", "2000", "--seed", "9", "--out", s(&sim)]);
    let c2 = cli(&[
        "validate",
        "--psa",
        s(&sim.join("psa.csv")),
        "--court",
        s(&sim.join("court.csv")),
        "--out",
        s(&out),
    ]);
    if c1 != 0 || c2 != 0 {
        return verdict(false, format!("exit codes simulate {c1}, validate {c2}"));
    }
    let rows = read_table(&out.join("agreement.csv"));
    let all_full = rows.len() == 4 && rows.iter().all(|r| r["rate"] == "1.000000");
    let get = |c: &str| -> usize { rows.iter().find(|r| r["component"] == c).map_or(0, |r| r["compared"].parse().unwrap()) };
    let pairs = read_table(&sim.join("psa.csv"));
    let excluded = pairs.iter().filter(|r| r["recorded_exclusion"] == "true").count();
    let masked = get("bumpup") < get("exclusion") && excluded > 0;
    let detail = rows
        .iter()
        .map(|r| format!("{} {} of {}", r["component"], r["rate"], r["compared"]))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(all_full && masked, format!("{detail}; bump-up masked to non-exclusion rows: {masked}"))
}

fn files_in(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != MANIFEST_FILE)
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

fn reproducibility(work: &Path) -> Verdict {
    let sim = work.join("rep-sim");
    let psa = sim.join("psa.csv");
    let court = sim.join("court.csv");
    let runs: Vec<(PathBuf, Vec<String>)> = {
        let d = |n: &str| work.join(format!("rep-{n}"));
        let (p, c) = (s(&psa).to_string(), s(&court).to_string());
        vec![
            (sim.clone(), vec!["simulate".into(), "--n".into(), "1500".into(), "--seed".into(), "5".into()]),
            (d("score"), vec!["score".into(), "--psa".into(), p.clone()]),
            (d("dedupe"), vec!["dedupe".into(), "--psa".into(), p.clone()]),
            (d("link"), vec!["link".into(), "--psa".into(), p.clone(), "--court".into(), c.clone()]),
            (
                d("audit"),
                vec![
                    "audit".into(),
                    "--psa".into(),
                    p.clone(),
                    "--court".into(),
                    c.clone(),
                    "--sensitivity".into(),
                    "--group-by".into(),
                    "linked".into(),
                ],
            ),
            (d("validate"), vec!["validate".into(), "--psa".into(), p, "--court".into(), c.clone()]),
            (d("consistency"), vec!["consistency".into(), "--court".into(), c]),
        ]
    };
    let mut problems = Vec::new();
    let mut compared = 0;
    for (dir, args) in &runs {
        let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
        a.extend(["--out", s(dir)]);
        // Synthetic inputs carry incomplete rows, so score reports a partial run.
        let first_code = cli(&a);
        if first_code != 0 && first_code != 4 {
            problems.push(format!("{} failed", args[0]));
            continue;
        }
        let manifest = dir.join(MANIFEST_FILE);
        let recorded = RunManifest::load(&manifest).unwrap();
        let again = work.join(format!("replay-{}", args[0]));
        if cli(&["replay", "--manifest", s(&manifest), "--out", s(&again)]) != first_code {
            problems.push(format!("{} replay failed", args[0]));
            continue;
        }
        let (first, second) = (files_in(dir), files_in(&again));
        if first != second || first.len() != recorded.outputs.len() {
            problems.push(format!("{} outputs differ", args[0]));
        }
        compared += first.len();
    }
    verdict(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{} commands replayed from their manifests, {compared} files byte-identical", runs.len())
        } else {
            problems.join("; ")
        },
    )
}

type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

fn main() {
    let work = tempfile::tempdir().unwrap();
    let w = work.path();
    let criteria: Vec<(&str, Check, Option<f64>)> = vec![
        ("DMF anchors", Box::new(dmf_anchors), Some(1.0)),
        ("oracle equivalence", Box::new(oracle_equivalence), Some(10.0)),
        ("engine invariants", Box::new(engine_invariants), None),
        ("linkage fixtures", Box::new(linkage_fixtures), None),
        ("counterfactual semantics", Box::new(counterfactual_semantics), None),
        ("end-to-end synthetic recovery", Box::new(|| end_to_end(w)), None),
        ("statistics", Box::new(statistics), None),
        ("consistency matrix", Box::new(consistency), None),
        ("self-validation closure", Box::new(|| self_validation(w)), None),
        ("reproducibility", Box::new(|| reproducibility(w)), None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut v = check();
        let secs = start.elapsed().as_secs_f64();
        if let Some(limit) = limit {
            if secs >= *limit {
                v.pass = false;
                v.detail.push_str(&format!("; over the {limit} s limit"));
            }
        }
        failed += !v.pass as usize;
        println!(
            "{} criterion {:>2} {name}: {} [{secs:.2} s]",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
