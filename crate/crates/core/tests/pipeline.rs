use std::collections::BTreeMap;

use psa_audit::counterfactual::{build_audit_pairs, DispositionPolicy};
use psa_audit::engine::EngineConfig;
use psa_audit::linkage::{link, read_court, read_psa, write_court, write_psa, MatchStatus};
use psa_audit::stats::proportion_affected;
use psa_audit::synth::{generate, GeneratorConfig, RowKind, SynthData};
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn corpus(n: usize, seed: u64) -> (EngineConfig, GeneratorConfig, SynthData) {
    let engine = EngineConfig::shipped();
    let cfg = GeneratorConfig {
        n_records: n,
        seed,
        ..Default::default()
    };
    let data = generate(&cfg, &engine).unwrap();
    (engine, cfg, data)
}

#[test]
fn files_round_trip() {
    let (engine, _, data) = corpus(400, 3);
    let mut psa = Vec::new();
    write_psa(&mut psa, &data.psa).unwrap();
    let mut court = Vec::new();
    write_court(&mut court, &data.cases).unwrap();
    let psa_back = read_psa(psa.as_slice(), "psa", &engine.catalog).unwrap();
    let court_back = read_court(court.as_slice(), "court", &engine.catalog).unwrap();
    assert!(psa_back.errors.is_empty() && court_back.errors.is_empty());
    assert_eq!(psa_back.rows, data.psa);
    assert_eq!(court_back.rows, data.cases);
}

#[test]
fn linkage_recovers_planted_structure() {
    let (_, cfg, data) = corpus(1000, 11);
    let out = link(data.psa.clone(), &data.cases);
    assert!(out.is_conserved());
    let n = data.psa.len() as f64;
    let dup_rate = out.duplicates.len() as f64 / n;
    let inc_rate = out.incomplete.len() as f64 / n;
    assert!((dup_rate - cfg.duplicate_rate).abs() <= 0.02, "{dup_rate}");
    assert!((inc_rate - cfg.incomplete_rate).abs() <= 0.02, "{inc_rate}");

    let truth: BTreeMap<&str, _> = data.truth.iter().map(|t| (t.record_id.as_str(), t)).collect();
    for r in &out.duplicates {
        assert_eq!(truth[r.record_id.as_str()].kind, RowKind::Duplicate);
    }
    for r in &out.incomplete {
        assert_eq!(truth[r.record_id.as_str()].kind, RowKind::Incomplete);
    }
    for m in &out.matched {
        let t = truth[m.psa.record_id.as_str()];
        let got: Vec<&str> = m.matched_cases.iter().map(|c| c.court_number.as_str()).collect();
        assert_eq!(got.join(";"), t.court_numbers, "record {}", m.psa.record_id);
    }
    for m in &out.unresolved {
        assert!(truth[m.psa.record_id.as_str()].unmatched);
        assert_eq!(m.status, MatchStatus::Unresolved);
    }
}

#[test]
fn linkage_ignores_input_order() {
    let (_, _, data) = corpus(500, 5);
    let a = link(data.psa.clone(), &data.cases);
    let mut rows = data.psa.clone();
    let mut cases = data.cases.clone();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    rows.shuffle(&mut rng);
    cases.shuffle(&mut rng);
    let b = link(rows, &cases);
    assert_eq!(a.matched, b.matched);
    assert_eq!(a.unresolved, b.unresolved);
    assert_eq!(a.duplicates.len(), b.duplicates.len());
}

#[test]
fn audit_matches_ground_truth() {
    let (engine, cfg, data) = corpus(2000, 21);
    let out = link(data.psa.clone(), &data.cases);
    let audit = build_audit_pairs(&out.matched, &DispositionPolicy::default(), &engine);
    assert!(audit.engine_errors.is_empty());
    let truth: BTreeMap<&str, _> = data.truth.iter().map(|t| (t.record_id.as_str(), t)).collect();
    for p in &audit.pairs {
        let t = truth[p.record_id.as_str()];
        assert!(t.disposed);
        assert_eq!(t.affected, p.deltas.recommendation_delta > 0, "record {}", p.record_id);
        assert_eq!(t.overbooked, p.deltas.any_lost(), "record {}", p.record_id);
        assert_eq!(t.plea_elsewhere, p.plea_elsewhere);
        let conv: Vec<&str> = p.conviction_charges.iter().map(|c| c.raw.trim()).collect();
        assert_eq!(conv.join("; "), t.conviction_charges);
    }
    for id in &audit.not_disposed {
        assert!(!truth[id.as_str()].disposed);
    }
    let disposed = audit.pairs.len() as f64 / out.matched.len() as f64;
    assert!((disposed - cfg.disposed_rate).abs() <= 0.005, "{disposed}");
    let refs: Vec<_> = audit.pairs.iter().collect();
    let affected = proportion_affected(&refs).unwrap().recommendation;
    assert!((affected - cfg.affected_rate).abs() <= 0.02, "{affected}");
}

#[test]
fn no_overbooking_means_no_deltas() {
    let engine = EngineConfig::shipped();
    let cfg = GeneratorConfig {
        n_records: 500,
        overbooking_rate: 0.0,
        affected_rate: 0.0,
        ..Default::default()
    };
    let data = generate(&cfg, &engine).unwrap();
    let out = link(data.psa, &data.cases);
    let audit = build_audit_pairs(&out.matched, &DispositionPolicy::default(), &engine);
    assert!(!audit.pairs.is_empty());
    for p in &audit.pairs {
        assert!(!p.deltas.any_lost() && p.deltas.recommendation_delta == 0);
    }
}
