//! Executable properties over random models: composition lemmas,
//! projection lemmas, compositional conformance, diagnosis soundness, and
//! the oracle-equivalence check, with greedy shrinking of failures.

use serde::Serialize;
use thiserror::Error;

use crate::acceptance::check_mutual;
use crate::compose::{compose, compose_pairs, try_isomorphic, Composition};
use crate::diagnosis::{delta_alphabet, diagnose, ComponentVerdict};
use crate::format::serialize;
use crate::generate::{
    brute_utraces, gen_composable_pair, gen_composable_triple, gen_faulty_impl,
    gen_input_completion, gen_lts, sub_seed, GenConfig,
};
use crate::lts::{Lts, StateSet, Trace, DELTA};
use crate::suspension::{check_uioco, det_suspension, UiocoVerdict};

/// Default trace-enumeration depth for the projection and oracle
/// properties.
pub const DEFAULT_PROPERTY_DEPTH: usize = 5;

/// State-count limit used for isomorphism checks on composed models.
const ISO_LIMIT: usize = 512;

/// Attempt budget per requested sample for generate-and-filter
/// properties.
const ATTEMPTS_PER_SAMPLE: usize = 400;

/// Budget of candidate evaluations during shrinking.
const SHRINK_BUDGET: usize = 300;

pub const PROPERTY_NAMES: [&str; 7] = [
    "commutativity",
    "associativity",
    "utraces-projection",
    "trace-projection",
    "compositionality",
    "diagnosis-soundness",
    "det-vs-brute",
];

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown property `{0}` (expected one of commutativity, associativity, utraces-projection, trace-projection, compositionality, diagnosis-soundness, det-vs-brute)")]
pub struct UnknownProperty(pub String);

#[derive(Clone, Debug, Serialize)]
pub struct PropertyFailure {
    /// Seed of the failing sample (reproducible via the same config).
    pub seed: u64,
    pub description: String,
    /// The (shrunk) witness models, in the bundled text format.
    pub models: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub seed: u64,
    /// Samples requested (hypothesis-satisfying ones for filtered
    /// properties).
    pub requested: usize,
    /// Samples that satisfied the hypothesis and were evaluated.
    pub evaluated: usize,
    pub passed: usize,
    /// Generated samples that failed the hypothesis filter.
    pub discarded: usize,
    pub failures: Vec<PropertyFailure>,
    /// Non-assertive observations (e.g. converse-direction exhibits).
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.requested
    }
}

impl std::fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "property {}: {}/{} passed ({} discarded, {} failures)",
            self.property,
            self.passed,
            self.requested,
            self.discarded,
            self.failures.len()
        )?;
        for failure in &self.failures {
            writeln!(
                f,
                "  failure @seed {}: {}",
                failure.seed, failure.description
            )?;
            for line in failure.models.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

enum Outcome {
    Pass,
    Discard,
    Fail {
        description: String,
        models: Vec<(String, Lts)>,
    },
}

/// Runs one named property for `count` (hypothesis-satisfying) samples.
/// Reports are deterministic for a given config, and failures carry
/// witnesses shrunk by greedy state/edge deletion.
pub fn run_property(
    name: &str,
    cfg: &GenConfig,
    count: usize,
    depth: usize,
) -> Result<PropertyReport, UnknownProperty> {
    if !PROPERTY_NAMES.contains(&name) {
        return Err(UnknownProperty(name.to_string()));
    }
    let mut report = PropertyReport {
        property: name.to_string(),
        seed: cfg.seed,
        requested: count,
        evaluated: 0,
        passed: 0,
        discarded: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    let budget = count.saturating_mul(ATTEMPTS_PER_SAMPLE).max(count);
    for attempt in 0..budget as u64 {
        if report.evaluated == count {
            break;
        }
        let sample = cfg.with_seed(sub_seed(cfg.seed, attempt));
        let outcome = match name {
            "commutativity" => commutativity(&sample),
            "associativity" => associativity(&sample),
            "utraces-projection" => utraces_projection(&sample, depth),
            "trace-projection" => trace_projection(&sample, depth),
            "compositionality" => compositionality(&sample, &mut report.notes),
            "diagnosis-soundness" => diagnosis_soundness(&sample),
            "det-vs-brute" => det_vs_brute(&sample, depth),
            _ => unreachable!("name was checked above"),
        };
        match outcome {
            Outcome::Pass => {
                report.evaluated += 1;
                report.passed += 1;
            }
            Outcome::Discard => report.discarded += 1,
            Outcome::Fail {
                description,
                models,
            } => {
                report.evaluated += 1;
                report.failures.push(PropertyFailure {
                    seed: sample.seed,
                    description,
                    models: serialize(&models),
                });
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// individual properties
// ---------------------------------------------------------------------

fn commutativity(cfg: &GenConfig) -> Outcome {
    let (a, b) = gen_composable_pair(cfg);
    let holds = |a: &Lts, b: &Lts| -> Option<bool> {
        let ab = compose(a, b).ok()?;
        let ba = compose(b, a).ok()?;
        try_isomorphic(&ab, &ba, ISO_LIMIT).ok()
    };
    match holds(&a, &b) {
        None => Outcome::Discard,
        Some(true) => Outcome::Pass,
        Some(false) => {
            let shrunk = shrink(vec![a, b], &|ms| holds(&ms[0], &ms[1]) == Some(false));
            Outcome::Fail {
                description: "compose(a,b) is not isomorphic to compose(b,a)".to_string(),
                models: name_models(&["A", "B"], &shrunk),
            }
        }
    }
}

fn associativity(cfg: &GenConfig) -> Outcome {
    // Triple compositions multiply state counts; keep the factors small.
    let cfg = GenConfig {
        max_states: cfg.max_states.min(4),
        ..cfg.clone()
    };
    let (a, b, c) = gen_composable_triple(&cfg);
    enum Assoc {
        Pass,
        Fail(String),
        Discard,
    }
    let verdict = |a: &Lts, b: &Lts, c: &Lts| -> Assoc {
        let left = compose(a, b).and_then(|ab| compose(&ab, c));
        let right = compose(b, c).and_then(|bc| compose(a, &bc));
        match (left, right) {
            (Ok(left), Ok(right)) => match try_isomorphic(&left, &right, ISO_LIMIT) {
                Ok(true) => Assoc::Pass,
                Ok(false) => Assoc::Fail(
                    "compose(compose(a,b),c) is not isomorphic to compose(a,compose(b,c))"
                        .to_string(),
                ),
                Err(_) => Assoc::Discard,
            },
            (Err(_), Err(_)) => Assoc::Pass, // symmetrically undefined
            _ => Assoc::Fail("definedness of the two association orders disagrees".to_string()),
        }
    };
    match verdict(&a, &b, &c) {
        Assoc::Discard => Outcome::Discard,
        Assoc::Pass => Outcome::Pass,
        Assoc::Fail(description) => {
            let shrunk = shrink(vec![a, b, c], &|ms| {
                matches!(verdict(&ms[0], &ms[1], &ms[2]), Assoc::Fail(_))
            });
            Outcome::Fail {
                description,
                models: name_models(&["A", "B", "C"], &shrunk),
            }
        }
    }
}

/// One gated step of the utraces language, or `None` when the extended
/// trace leaves the language.
fn utrace_step(m: &Lts, set: &StateSet, label: &str) -> Option<StateSet> {
    if m.inputs().contains(label) && !set.iter().all(|q| m.weakly_enables(q, label)) {
        return None;
    }
    let next = m.step(set, label);
    if next.is_empty() {
        None
    } else {
        Some(next)
    }
}

fn utraces_projection(cfg: &GenConfig, depth: usize) -> Outcome {
    let (s, e) = gen_composable_pair(cfg);
    match check_mutual(&s, &e) {
        Ok((forward, backward)) if forward.holds() && backward.holds() => {}
        _ => return Outcome::Discard,
    }
    match utraces_projection_violation(&s, &e, depth) {
        None => Outcome::Pass,
        Some(trace) => {
            let description = format!(
                "utraces membership of `{trace}` in the composition disagrees with \
                 membership of its projections in the components"
            );
            let shrunk = shrink(vec![s, e], &|ms| {
                mutually_accepting(&ms[0], &ms[1])
                    && utraces_projection_violation(&ms[0], &ms[1], depth).is_some()
            });
            Outcome::Fail {
                description,
                models: name_models(&["S", "E"], &shrunk),
            }
        }
    }
}

fn mutually_accepting(s: &Lts, e: &Lts) -> bool {
    matches!(check_mutual(s, e), Ok((f, b)) if f.holds() && b.holds())
}

/// Searches for a composed trace (up to `depth`) falsifying: σ is a
/// composed utrace ⟺ both projections are component utraces. Only the
/// composed utrace tree plus its frontier needs visiting: once both sides
/// of the equivalence are false they stay false on every extension
/// (prefix closure).
fn utraces_projection_violation(s: &Lts, e: &Lts, depth: usize) -> Option<Trace> {
    let c = match compose(s, e) {
        Ok(c) => c,
        Err(_) => return None,
    };
    let mut labels: Vec<String> = c.alphabet().into_iter().collect();
    labels.push(DELTA.to_string());
    labels.sort();
    let s_alpha = delta_alphabet(s);
    let e_alpha = delta_alphabet(e);

    struct Node {
        trace: Trace,
        c_set: Option<StateSet>,
        s_set: Option<StateSet>,
        e_set: Option<StateSet>,
    }
    let mut stack = vec![Node {
        trace: Trace::empty(),
        c_set: Some(c.initial_set()),
        s_set: Some(s.initial_set()),
        e_set: Some(e.initial_set()),
    }];
    while let Some(node) = stack.pop() {
        if node.trace.len() == depth {
            continue;
        }
        for label in &labels {
            let c_next = node
                .c_set
                .as_ref()
                .and_then(|set| utrace_step(&c, set, label));
            let s_next = if s_alpha.contains(label) {
                node.s_set
                    .as_ref()
                    .and_then(|set| utrace_step(s, set, label))
            } else {
                node.s_set.clone()
            };
            let e_next = if e_alpha.contains(label) {
                node.e_set
                    .as_ref()
                    .and_then(|set| utrace_step(e, set, label))
            } else {
                node.e_set.clone()
            };
            let in_composed = c_next.is_some();
            let in_projections = s_next.is_some() && e_next.is_some();
            if in_composed != in_projections {
                return Some(node.trace.extended(label.clone()));
            }
            if in_composed {
                stack.push(Node {
                    trace: node.trace.extended(label.clone()),
                    c_set: c_next,
                    s_set: s_next,
                    e_set: e_next,
                });
            }
        }
    }
    None
}

fn trace_projection(cfg: &GenConfig, depth: usize) -> Outcome {
    let (s, e) = gen_composable_pair(cfg);
    let i_s = gen_input_completion(&s, &cfg.with_seed(sub_seed(cfg.seed, 101)));
    let i_e = gen_input_completion(&e, &cfg.with_seed(sub_seed(cfg.seed, 202)));
    if !mutually_accepting(&i_s, &i_e) {
        return Outcome::Discard;
    }
    match trace_projection_violation(&i_s, &i_e, depth) {
        None => Outcome::Pass,
        Some(trace) => {
            let description = format!(
                "states reached by `{trace}` in the composition differ from the product \
                 of the states its projections reach in the components"
            );
            let shrunk = shrink(vec![i_s, i_e], &|ms| {
                crate::suspension::input_enabled(&ms[0])
                    && crate::suspension::input_enabled(&ms[1])
                    && trace_projection_violation(&ms[0], &ms[1], depth).is_some()
            });
            Outcome::Fail {
                description,
                models: name_models(&["ImplS", "ImplE"], &shrunk),
            }
        }
    }
}

/// Searches for a trace (up to `depth`) falsifying: the pair
/// decomposition of the composed after-set equals the Cartesian product
/// of the component after-sets, for input-enabled components.
fn trace_projection_violation(s: &Lts, e: &Lts, depth: usize) -> Option<Trace> {
    let composition = match compose_pairs(s, e) {
        Ok(c) => c,
        Err(_) => return None,
    };
    let c = &composition.lts;
    let mut labels: Vec<String> = c.alphabet().into_iter().collect();
    labels.push(DELTA.to_string());
    labels.sort();
    let s_alpha = delta_alphabet(s);
    let e_alpha = delta_alphabet(e);

    let matches_product =
        |composition: &Composition, c_set: &StateSet, s_set: &StateSet, e_set: &StateSet| {
            if c_set.len() != s_set.len() * e_set.len() {
                return false;
            }
            c_set.iter().all(|state| {
                let (p, q) = composition.decompose(state).expect("composed state");
                s_set.contains(p) && e_set.contains(q)
            })
        };

    struct Node {
        trace: Trace,
        c_set: StateSet,
        s_set: StateSet,
        e_set: StateSet,
    }
    let root = Node {
        trace: Trace::empty(),
        c_set: c.initial_set(),
        s_set: s.initial_set(),
        e_set: e.initial_set(),
    };
    if !matches_product(&composition, &root.c_set, &root.s_set, &root.e_set) {
        return Some(root.trace);
    }
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.trace.len() == depth {
            continue;
        }
        for label in &labels {
            let c_next = c.step(&node.c_set, label);
            let s_next = if s_alpha.contains(label) {
                s.step(&node.s_set, label)
            } else {
                node.s_set.clone()
            };
            let e_next = if e_alpha.contains(label) {
                e.step(&node.e_set, label)
            } else {
                node.e_set.clone()
            };
            if !matches_product(&composition, &c_next, &s_next, &e_next) {
                return Some(node.trace.extended(label.clone()));
            }
            if !c_next.is_empty() {
                stack.push(Node {
                    trace: node.trace.extended(label.clone()),
                    c_set: c_next,
                    s_set: s_next,
                    e_set: e_next,
                });
            }
        }
    }
    None
}

fn compositionality(cfg: &GenConfig, notes: &mut Vec<String>) -> Outcome {
    let (s, e) = gen_composable_pair(cfg);
    if !mutually_accepting(&s, &e) {
        return Outcome::Discard;
    }
    let i_s = gen_faulty_impl(&s, &cfg.with_seed(sub_seed(cfg.seed, 101)));
    let i_e = gen_faulty_impl(&e, &cfg.with_seed(sub_seed(cfg.seed, 202)));
    let left_ok = matches!(check_uioco(&i_s, &s), Ok(v) if v.is_pass());
    let right_ok = matches!(check_uioco(&i_e, &e), Ok(v) if v.is_pass());
    let composed_verdict = || -> Option<UiocoVerdict> {
        let impls = compose(&i_s, &i_e).ok()?;
        let specs = compose(&s, &e).ok()?;
        check_uioco(&impls, &specs).ok()
    };
    if !(left_ok && right_ok) {
        // Hypothesis fails; before discarding, look for a converse-
        // direction exhibit: composed conformance despite a failing
        // component (quiescence masking makes this possible).
        if notes.len() < 5 && matches!(composed_verdict(), Some(v) if v.is_pass()) {
            notes.push(format!(
                "converse exhibit @seed {}: composed check passes while a component check fails",
                cfg.seed
            ));
        }
        return Outcome::Discard;
    }
    match composed_verdict() {
        Some(UiocoVerdict::Pass) => Outcome::Pass,
        Some(UiocoVerdict::Fail {
            trace, offending, ..
        }) => {
            let reproduce = |ms: &[Lts]| -> bool {
                mutually_accepting(&ms[0], &ms[1])
                    && matches!(check_uioco(&ms[2], &ms[0]), Ok(v) if v.is_pass())
                    && matches!(check_uioco(&ms[3], &ms[1]), Ok(v) if v.is_pass())
                    && {
                        match (compose(&ms[2], &ms[3]), compose(&ms[0], &ms[1])) {
                            (Ok(impls), Ok(specs)) => {
                                matches!(check_uioco(&impls, &specs), Ok(v) if !v.is_pass())
                            }
                            _ => false,
                        }
                    }
            };
            let shrunk = shrink(vec![s, e, i_s, i_e], &reproduce);
            Outcome::Fail {
                description: format!(
                    "composed check fails on `{trace}` (offending `{offending}`) although \
                     both components conform and the pair is mutually accepting"
                ),
                models: name_models(&["S", "E", "ImplS", "ImplE"], &shrunk),
            }
        }
        None => Outcome::Discard,
    }
}

fn diagnosis_soundness(cfg: &GenConfig) -> Outcome {
    let (s, e) = gen_composable_pair(cfg);
    if !mutually_accepting(&s, &e) {
        return Outcome::Discard;
    }
    let i_s = gen_faulty_impl(&s, &cfg.with_seed(sub_seed(cfg.seed, 101)));
    let i_e = gen_faulty_impl(&e, &cfg.with_seed(sub_seed(cfg.seed, 202)));
    let (impls, specs) = match (compose(&i_s, &i_e), compose(&s, &e)) {
        (Ok(impls), Ok(specs)) => (impls, specs),
        _ => return Outcome::Discard,
    };
    let (trace, offending) = match check_uioco(&impls, &specs) {
        Ok(UiocoVerdict::Fail {
            trace, offending, ..
        }) => (trace, offending),
        _ => return Outcome::Discard, // conforming samples carry no fault
    };
    let sound = |s: &Lts, e: &Lts, i_s: &Lts, i_e: &Lts, trace: &Trace, offending: &str| -> bool {
        match diagnose(s, e, trace, offending, Some(i_s), Some(i_e)) {
            Ok(report) => {
                !report.attributed.is_empty()
                    && report
                        .attributed
                        .iter()
                        .any(|a| a.verdict == ComponentVerdict::ConfirmedCounterexample)
            }
            Err(_) => false,
        }
    };
    if sound(&s, &e, &i_s, &i_e, &trace, &offending) {
        Outcome::Pass
    } else {
        let offending_clone = offending.clone();
        let trace_clone = trace.clone();
        let reproduce = move |ms: &[Lts]| -> bool {
            mutually_accepting(&ms[0], &ms[1])
                && match (compose(&ms[2], &ms[3]), compose(&ms[0], &ms[1])) {
                    (Ok(impls), Ok(specs)) => match check_uioco(&impls, &specs) {
                        Ok(UiocoVerdict::Fail {
                            trace, offending, ..
                        }) => !sound(&ms[0], &ms[1], &ms[2], &ms[3], &trace, &offending),
                        _ => false,
                    },
                    _ => false,
                }
        };
        let shrunk = shrink(vec![s, e, i_s, i_e], &reproduce);
        Outcome::Fail {
            description: format!(
                "diagnosis of the counterexample `{trace_clone}` / `{offending_clone}` \
                 confirmed no component"
            ),
            models: name_models(&["S", "E", "ImplS", "ImplE"], &shrunk),
        }
    }
}

fn det_vs_brute(cfg: &GenConfig, depth: usize) -> Outcome {
    let m = gen_lts(cfg);
    let depth = depth.min(crate::generate::MAX_BRUTE_DEPTH);
    let disagreement = |m: &Lts| -> Option<Trace> {
        let brute = brute_utraces(m, depth).ok()?;
        let language = det_suspension(m).language_to_depth(depth);
        brute.symmetric_difference(&language).next().cloned()
    };
    match disagreement(&m) {
        None => Outcome::Pass,
        Some(trace) => {
            let shrunk = shrink(vec![m], &|ms| disagreement(&ms[0]).is_some());
            Outcome::Fail {
                description: format!(
                    "subset-construction language and brute-force enumeration disagree \
                     on `{trace}`"
                ),
                models: name_models(&["M"], &shrunk),
            }
        }
    }
}

// ---------------------------------------------------------------------
// shrinking
// ---------------------------------------------------------------------

fn name_models(names: &[&str], models: &[Lts]) -> Vec<(String, Lts)> {
    names
        .iter()
        .zip(models.iter())
        .map(|(n, m)| (n.to_string(), m.clone()))
        .collect()
}

/// Structurally smaller valid variants of one model: each with a single
/// transition removed, or a single non-initial state (and its incident
/// transitions) removed.
fn reductions(m: &Lts) -> Vec<Lts> {
    let mut variants = Vec::new();
    for t in m.transitions() {
        let mut raw = m.raw().clone();
        raw.transitions.remove(t);
        if let Ok(v) = raw.build() {
            variants.push(v);
        }
    }
    for state in m.states() {
        if state == m.initial() {
            continue;
        }
        let mut raw = m.raw().clone();
        raw.states.remove(state);
        raw.transitions
            .retain(|(src, _, dst)| src != state && dst != state);
        if let Ok(v) = raw.build() {
            variants.push(v);
        }
    }
    variants
}

/// Greedy shrinking: repeatedly applies the first single-model reduction
/// that preserves the failure (and, via the predicate, the hypothesis),
/// within a fixed evaluation budget.
fn shrink(models: Vec<Lts>, still_fails: &dyn Fn(&[Lts]) -> bool) -> Vec<Lts> {
    let mut current = models;
    let mut budget = SHRINK_BUDGET;
    let mut progress = true;
    while progress && budget > 0 {
        progress = false;
        'search: for index in 0..current.len() {
            for candidate in reductions(&current[index]) {
                if budget == 0 {
                    break 'search;
                }
                budget -= 1;
                let mut trial = current.clone();
                trial[index] = candidate;
                if still_fails(&trial) {
                    current = trial;
                    progress = true;
                    break 'search;
                }
            }
        }
    }
    current
}
