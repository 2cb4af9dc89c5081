//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them on success).

use std::collections::BTreeSet;

use compo_mbt::acceptance::{check_mutual, AcceptanceVerdict};
use compo_mbt::compose::{compose, compose_pairs};
use compo_mbt::diagnosis::{diagnose, ComponentId, ComponentVerdict, Method};
use compo_mbt::format::{parse, serialize};
use compo_mbt::generate::{
    brute_utraces, gen_input_completion, gen_lts, sub_seed, GenConfig, MAX_BRUTE_DEPTH,
};
use compo_mbt::lts::{Lts, Trace};
use compo_mbt::models;
use compo_mbt::properties::run_property;
use compo_mbt::suspension::{check_uioco, UiocoVerdict};

fn verdict_line(criterion: &str, ok: bool, detail: &str) -> bool {
    println!(
        "criterion {criterion}: {} {detail}",
        if ok { "pass" } else { "FAIL" }
    );
    ok
}

fn labels(parts: &[&str]) -> Trace {
    Trace::from_labels(parts)
}

#[test]
fn criterion_1_regression_manifest() {
    let started = std::time::Instant::now();
    let mut results: Vec<(&str, bool, String)> = Vec::new();
    let mut record = |tag: &'static str, ok: bool, detail: String| {
        println!("  1{tag}: {} — {detail}", if ok { "pass" } else { "FAIL" });
        results.push((tag, ok, detail));
    };

    // 1a: both component implementations conform to their specifications.
    {
        let sensor = check_uioco(&models::sensor_impl(), &models::sensor_spec());
        let autopark = check_uioco(&models::autopark_impl(), &models::autopark_spec());
        let ok =
            matches!(&sensor, Ok(v) if v.is_pass()) && matches!(&autopark, Ok(v) if v.is_pass());
        record("a", ok, format!("sensor {sensor:?}, autopark {autopark:?}"));
    }

    // 1b: the composed implementations fail against the composed original
    // specifications, with a length-2 witness and offending label `beep`.
    {
        let impls = compose(&models::sensor_impl(), &models::autopark_impl()).unwrap();
        let specs = compose(&models::sensor_spec(), &models::autopark_spec()).unwrap();
        let verdict = check_uioco(&impls, &specs).unwrap();
        let (ok, detail) = match &verdict {
            UiocoVerdict::Fail {
                trace, offending, ..
            } => (
                trace.len() == 2 && offending == "beep",
                format!(
                    "fail with witness `{trace}` (len {}), offending `{offending}`",
                    trace.len()
                ),
            ),
            UiocoVerdict::Pass => (false, "unexpected pass".to_string()),
        };
        record("b", ok, detail);
    }

    // 1c: the original specifications are not mutually accepting; the
    // expected witness is trace safe.obs at pair (3, B) refusing `beep`.
    {
        let (fwd, bwd) = check_mutual(&models::sensor_spec(), &models::autopark_spec()).unwrap();
        let violated = [&fwd, &bwd].into_iter().find(|v| !v.holds());
        let (ok, detail) = match violated {
            Some(AcceptanceVerdict::Violated {
                trace, pair, label, ..
            }) => (
                *trace == labels(&["safe", "obs"])
                    && *pair == ("3".to_string(), "B".to_string())
                    && label == "beep",
                format!(
                    "violated at `{trace}`, pair ({}, {}), label `{label}`",
                    pair.0, pair.1
                ),
            ),
            _ => (false, "expected a violation".to_string()),
        };
        record("c", ok, detail);
    }

    // 1d: the adapted specifications are mutually accepting.
    {
        let (fwd, bwd) = check_mutual(
            &models::adapted_sensor_spec(),
            &models::adapted_autopark_spec(),
        )
        .unwrap();
        record(
            "d",
            fwd.holds() && bwd.holds(),
            format!("{fwd:?} / {bwd:?}"),
        );
    }

    // 1e: the original composed implementations fail the adapted composed
    // specifications; the witness is safe.obs.beep with offending `park`.
    let mut witness_1e: Option<(Trace, String)> = None;
    {
        let impls = compose(&models::sensor_impl(), &models::autopark_impl()).unwrap();
        let specs = compose(
            &models::adapted_sensor_spec(),
            &models::adapted_autopark_spec(),
        )
        .unwrap();
        let verdict = check_uioco(&impls, &specs).unwrap();
        let (ok, detail) = match &verdict {
            UiocoVerdict::Fail {
                trace, offending, ..
            } => {
                witness_1e = Some((trace.clone(), offending.clone()));
                (
                    *trace == labels(&["safe", "obs", "beep"]) && offending == "park",
                    format!("fail with witness `{trace}`, offending `{offending}`"),
                )
            }
            UiocoVerdict::Pass => (false, "unexpected pass".to_string()),
        };
        record("e", ok, detail);
    }

    // 1f: the adapted composed implementations pass the adapted composed
    // specifications.
    {
        let impls = compose(
            &models::adapted_sensor_impl(),
            &models::adapted_autopark_impl(),
        )
        .unwrap();
        let specs = compose(
            &models::adapted_sensor_spec(),
            &models::adapted_autopark_spec(),
        )
        .unwrap();
        let verdict = check_uioco(&impls, &specs).unwrap();
        record("f", verdict.is_pass(), format!("{verdict:?}"));
    }

    // 1g: the composed original specification has exactly the nine
    // expected reachable state pairs and the expected alphabet.
    {
        let composition = compose_pairs(&models::sensor_spec(), &models::autopark_spec()).unwrap();
        let pairs: BTreeSet<(String, String)> = composition.pairs.values().cloned().collect();
        let expected: BTreeSet<(String, String)> = [
            ("1", "A"),
            ("1", "B"),
            ("1", "C"),
            ("1", "D"),
            ("2", "E"),
            ("3", "A"),
            ("3", "B"),
            ("3", "C"),
            ("3", "D"),
        ]
        .into_iter()
        .map(|(p, q)| (p.to_string(), q.to_string()))
        .collect();
        let inputs: BTreeSet<String> = ["obs".to_string()].into();
        let outputs: BTreeSet<String> = ["safe", "beep", "park", "stop", "off"]
            .into_iter()
            .map(str::to_string)
            .collect();
        let m = &composition.lts;
        let ok = m.states().len() == 9
            && pairs == expected
            && *m.inputs() == inputs
            && *m.outputs() == outputs;
        record(
            "g",
            ok,
            format!(
                "{} states, inputs {:?}, outputs {:?}",
                m.states().len(),
                m.inputs(),
                m.outputs()
            ),
        );
    }

    // 1h: diagnosing 1e's witness attributes the autopark component with
    // the confirmed projected trace safe.beep.
    {
        let (trace, offending) =
            witness_1e.unwrap_or_else(|| (labels(&["safe", "obs", "beep"]), "park".to_string()));
        let report = diagnose(
            &models::adapted_sensor_spec(),
            &models::adapted_autopark_spec(),
            &trace,
            &offending,
            Some(&models::sensor_impl()),
            Some(&models::autopark_impl()),
        );
        let (ok, detail) = match &report {
            Ok(report) => {
                let hit = report.attributed.iter().any(|a| {
                    a.component == ComponentId::Right
                        && a.projected == labels(&["safe", "beep"])
                        && a.verdict == ComponentVerdict::ConfirmedCounterexample
                });
                (
                    hit && report.method == Method::UniqueOutputOwner,
                    format!("{report:?}"),
                )
            }
            Err(e) => (false, format!("error: {e}")),
        };
        record("h", ok, detail);
    }

    let elapsed = started.elapsed();
    let timely = elapsed < std::time::Duration::from_secs(1);
    let all = results.iter().all(|(_, ok, _)| *ok) && timely;
    let failing: Vec<String> = results
        .iter()
        .filter(|(_, ok, _)| !ok)
        .map(|(tag, _, detail)| format!("1{tag}: {detail}"))
        .collect();
    assert!(
        verdict_line(
            "1 (regression manifest)",
            all,
            &format!(
                "({} of {} sub-checks, {elapsed:?})",
                results.iter().filter(|(_, ok, _)| *ok).count(),
                results.len()
            )
        ),
        "failing sub-checks:\n{}{}",
        failing.join("\n"),
        if timely {
            ""
        } else {
            "\n(runtime exceeded 1 s)"
        }
    );
}

fn assert_property(criterion: &str, property: &str, seed: u64, count: usize, depth: usize) {
    let cfg = GenConfig {
        seed,
        ..GenConfig::default()
    };
    let report = run_property(property, &cfg, count, depth).unwrap();
    for note in &report.notes {
        println!("  note: {note}");
    }
    let ok = report.all_passed() && report.evaluated == count;
    assert!(
        verdict_line(
            criterion,
            ok,
            &format!(
                "({}/{} passed, {} discarded)",
                report.passed, report.evaluated, report.discarded
            )
        ),
        "{report}"
    );
}

#[test]
fn criterion_2_oracle_equivalence() {
    assert_property("2 (oracle equivalence)", "det-vs-brute", 1002, 200, 5);
}

#[test]
fn criterion_3_composition_lemmas() {
    let cfg = GenConfig {
        seed: 1003,
        ..GenConfig::default()
    };
    let comm = run_property("commutativity", &cfg, 100, 5).unwrap();
    let assoc = run_property("associativity", &cfg, 50, 5).unwrap();
    let ok =
        comm.all_passed() && comm.evaluated == 100 && assoc.all_passed() && assoc.evaluated == 50;
    assert!(
        verdict_line(
            "3 (composition lemmas)",
            ok,
            &format!(
                "(commutativity {}/{}, associativity {}/{})",
                comm.passed, comm.evaluated, assoc.passed, assoc.evaluated
            )
        ),
        "{comm}\n{assoc}"
    );
}

#[test]
fn criterion_4_projection_lemmas() {
    let cfg = GenConfig {
        seed: 1004,
        ..GenConfig::default()
    };
    let utr = run_property("utraces-projection", &cfg, 100, 5).unwrap();
    let tr = run_property("trace-projection", &cfg, 100, 5).unwrap();
    let ok = utr.all_passed() && utr.evaluated == 100 && tr.all_passed() && tr.evaluated == 100;
    assert!(
        verdict_line(
            "4 (projection lemmas)",
            ok,
            &format!(
                "(utraces {}/{}, traces {}/{})",
                utr.passed, utr.evaluated, tr.passed, tr.evaluated
            )
        ),
        "{utr}\n{tr}"
    );
}

#[test]
fn criterion_5_compositionality() {
    assert_property("5 (compositionality)", "compositionality", 1005, 100, 5);
}

#[test]
fn criterion_6_diagnosis_soundness() {
    assert_property(
        "6 (diagnosis soundness)",
        "diagnosis-soundness",
        1006,
        50,
        5,
    );
}

#[test]
fn criterion_7_format_round_trip() {
    let mut ok = true;
    for text in [models::bundle_text(), models::adapted_bundle_text()] {
        let canonical = serialize(&parse(text).unwrap());
        ok &= canonical == text;
        ok &= serialize(&parse(&canonical).unwrap()) == canonical;
    }
    let base = GenConfig::default();
    for index in 0..500u64 {
        let m = gen_lts(&base.with_seed(sub_seed(1007, index)));
        let bundle = vec![(format!("G{index}"), m)];
        let once = serialize(&bundle);
        let reparsed = parse(&once).unwrap();
        ok &= serialize(&reparsed) == once;
        ok &= reparsed.len() == 1 && reparsed[0].1.raw() == bundle[0].1.raw();
    }
    assert!(verdict_line(
        "7 (format round-trip)",
        ok,
        "(2 bundled files + 500 generated models)"
    ));
}

/// Minimum witness length over exhaustive enumeration: the shortest
/// specification utrace after which the implementation can produce an
/// output (δ included) the specification does not allow.
fn brute_min_witness_len(imp: &Lts, spec: &Lts, depth: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for sigma in brute_utraces(spec, depth).unwrap() {
        let spec_after = spec.after_initial(&sigma).unwrap();
        let imp_after = imp.after_initial(&sigma).unwrap();
        if imp_after.is_empty() {
            continue;
        }
        if !imp.outs(&imp_after).is_subset(&spec.outs(&spec_after)) {
            best = Some(best.map_or(sigma.len(), |b| b.min(sigma.len())));
        }
    }
    best
}

#[test]
fn criterion_8_witness_minimality() {
    let base = GenConfig {
        max_states: 5,
        ..GenConfig::default()
    };
    let mut checked = 0usize;
    let mut mismatches: Vec<String> = Vec::new();
    let mut attempt = 0u64;
    while checked < 100 && attempt < 100_000 {
        attempt += 1;
        let spec = gen_lts(&base.with_seed(sub_seed(1008, attempt * 2)));
        let imp = gen_input_completion(
            &gen_lts(&base.with_seed(sub_seed(1008, attempt * 2 + 1))),
            &base.with_seed(sub_seed(1008, attempt * 3 + 7)),
        );
        let Ok(UiocoVerdict::Fail { trace, .. }) = check_uioco(&imp, &spec) else {
            continue;
        };
        // Only instances whose reported witness fits the enumeration
        // depth can be cross-checked exhaustively.
        if trace.len() > MAX_BRUTE_DEPTH {
            continue;
        }
        checked += 1;
        match brute_min_witness_len(&imp, &spec, MAX_BRUTE_DEPTH) {
            Some(min) if min == trace.len() => {}
            other => mismatches.push(format!(
                "attempt {attempt}: reported length {}, brute minimum {other:?}",
                trace.len()
            )),
        }
    }
    let ok = checked == 100 && mismatches.is_empty();
    assert!(
        verdict_line(
            "8 (witness minimality)",
            ok,
            &format!("({checked} failing instances cross-checked)")
        ),
        "mismatches: {mismatches:?}"
    );
}
