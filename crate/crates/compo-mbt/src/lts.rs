//! Core representation and semantics of labelled transition systems:
//! validation, weak transitions, quiescence, and the `after`/`outs`/`ins`
//! state-set operators everything else is built from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reserved token for the internal (unobservable) action.
pub const TAU: &str = "tau";
/// Reserved token for the quiescence observation.
pub const DELTA: &str = "delta";

/// A set of state ids of one [`Lts`].
pub type StateSet = BTreeSet<String>;

/// A transition `source --label--> target`; `label` is a plain alphabet
/// name or the reserved token [`TAU`].
pub type Transition = (String, String, String);

/// A finite observable trace: a sequence of label names possibly including
/// [`DELTA`]. The internal action never appears in a trace.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Trace(pub Vec<String>);

impl Trace {
    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Self {
        Trace(labels.iter().map(|l| l.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, label: impl Into<String>) {
        self.0.push(label.into());
    }

    /// The trace extended by one label, leaving `self` untouched.
    pub fn extended(&self, label: impl Into<String>) -> Trace {
        let mut next = self.clone();
        next.push(label);
        next
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for Trace {
    /// Dot-separated rendering, e.g. `safe.obs.delta`; the empty trace
    /// renders as `ε`, which parse accepts alongside the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.0.join("."))
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceParseError {
    #[error("empty label at position {0} (consecutive or trailing '.')")]
    EmptyLabel(usize),
    #[error("label `{0}` contains whitespace")]
    Whitespace(String),
}

impl FromStr for Trace {
    type Err = TraceParseError;

    /// Parses a dot-separated trace; the empty string and `ε` (the
    /// display form) are the empty trace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Trace::empty());
        }
        let mut labels = Vec::new();
        for (i, part) in s.split('.').enumerate() {
            if part.is_empty() {
                return Err(TraceParseError::EmptyLabel(i));
            }
            if part.chars().any(char::is_whitespace) {
                return Err(TraceParseError::Whitespace(part.to_string()));
            }
            labels.push(part.to_string());
        }
        Ok(Trace(labels))
    }
}

/// An unvalidated candidate transition system, as produced by a parser or
/// assembled by hand. [`RawLts::validate`] reports every broken invariant;
/// [`RawLts::build`] promotes a clean candidate to an [`Lts`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLts {
    pub states: BTreeSet<String>,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
    pub transitions: BTreeSet<Transition>,
    pub initial: String,
}

/// One violated structural invariant, with the offending element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A name occurs in both the input and the output alphabet.
    AlphabetOverlap { labels: BTreeSet<String> },
    /// `tau`/`delta` (or an empty token) used as an alphabet label or state id.
    ReservedToken { token: String, place: String },
    /// The initial state is not a member of the state set.
    UnknownInitial { state: String },
    /// A transition endpoint is not a member of the state set.
    UnknownState {
        state: String,
        transition: Transition,
    },
    /// A transition label is neither `tau` nor in the alphabet.
    UnknownLabel {
        label: String,
        transition: Transition,
    },
    /// A cycle of internal transitions (strong convergence is violated).
    TauCycle { states: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphabetOverlap { labels } => {
                let joined: Vec<&str> = labels.iter().map(String::as_str).collect();
                write!(f, "alphabets overlap on {{{}}}", joined.join(", "))
            }
            Violation::ReservedToken { token, place } => {
                write!(f, "reserved or empty token `{token}` used as {place}")
            }
            Violation::UnknownInitial { state } => {
                write!(f, "initial state `{state}` is not in the state set")
            }
            Violation::UnknownState { state, transition } => write!(
                f,
                "transition {} -> {} : {} mentions unknown state `{}`",
                transition.0, transition.2, transition.1, state
            ),
            Violation::UnknownLabel { label, transition } => write!(
                f,
                "transition {} -> {} : {} uses label `{}` outside the alphabet",
                transition.0, transition.2, transition.1, label
            ),
            Violation::TauCycle { states } => {
                write!(f, "τ-cycle {{{}}}", states.join(", "))
            }
        }
    }
}

/// The outcome of validating a candidate structure; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Errors raised by the state-set operators.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("label `{0}` is outside the model's alphabet")]
    UnknownLabel(String),
    #[error("the enabled-input intersection over the empty set is undefined")]
    EmptySet,
}

impl RawLts {
    /// Checks every structural invariant and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        let overlap: BTreeSet<String> = self.inputs.intersection(&self.outputs).cloned().collect();
        if !overlap.is_empty() {
            violations.push(Violation::AlphabetOverlap { labels: overlap });
        }
        for label in self.inputs.iter().chain(self.outputs.iter()) {
            if label.is_empty() || label == TAU || label == DELTA {
                violations.push(Violation::ReservedToken {
                    token: label.clone(),
                    place: "alphabet label".to_string(),
                });
            }
        }
        for state in &self.states {
            if state.is_empty() {
                violations.push(Violation::ReservedToken {
                    token: state.clone(),
                    place: "state id".to_string(),
                });
            }
        }
        if !self.states.contains(&self.initial) {
            violations.push(Violation::UnknownInitial {
                state: self.initial.clone(),
            });
        }
        for t in &self.transitions {
            let (src, label, dst) = t;
            for endpoint in [src, dst] {
                if !self.states.contains(endpoint) {
                    violations.push(Violation::UnknownState {
                        state: endpoint.clone(),
                        transition: t.clone(),
                    });
                }
            }
            if label != TAU && !self.inputs.contains(label) && !self.outputs.contains(label) {
                violations.push(Violation::UnknownLabel {
                    label: label.clone(),
                    transition: t.clone(),
                });
            }
        }
        if let Some(cycle) = self.tau_cycle() {
            violations.push(Violation::TauCycle { states: cycle });
        }

        ValidationReport { violations }
    }

    /// Finds one cycle in the τ-edge graph, if any, via iterative DFS with
    /// the usual white/grey/black coloring.
    fn tau_cycle(&self) -> Option<Vec<String>> {
        let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (src, label, dst) in &self.transitions {
            if label == TAU {
                succ.entry(src).or_default().push(dst);
            }
        }
        // 0 = unvisited, 1 = on the current path, 2 = done
        let mut color: BTreeMap<&str, u8> = BTreeMap::new();
        let mut path: Vec<&str> = Vec::new();
        for start in succ.keys().copied().collect::<Vec<_>>() {
            if color.get(start).copied().unwrap_or(0) != 0 {
                continue;
            }
            // Stack of (node, next successor index) frames.
            let mut stack: Vec<(&str, usize)> = vec![(start, 0)];
            color.insert(start, 1);
            path.push(start);
            while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
                let next = succ.get(node).and_then(|s| s.get(*idx)).copied();
                *idx += 1;
                match next {
                    Some(n) => match color.get(n).copied().unwrap_or(0) {
                        0 => {
                            color.insert(n, 1);
                            path.push(n);
                            stack.push((n, 0));
                        }
                        1 => {
                            let at = path.iter().position(|p| *p == n).unwrap_or(0);
                            return Some(path[at..].iter().map(|s| s.to_string()).collect());
                        }
                        _ => {}
                    },
                    None => {
                        color.insert(node, 2);
                        path.pop();
                        stack.pop();
                    }
                }
            }
        }
        None
    }

    /// Validates and, on success, promotes the candidate to an [`Lts`].
    pub fn build(self) -> Result<Lts, ValidationReport> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(report);
        }
        let mut adjacency: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        for state in &self.states {
            adjacency.insert(state.clone(), Vec::new());
        }
        for (src, label, dst) in &self.transitions {
            adjacency
                .get_mut(src)
                .expect("validated endpoint")
                .push((label.clone(), dst.clone()));
        }
        Ok(Lts {
            raw: self,
            adjacency,
        })
    }
}

/// A validated labelled transition system. Immutable after construction;
/// all operations are pure functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    raw: RawLts,
    adjacency: BTreeMap<String, Vec<(String, String)>>,
}

impl Lts {
    /// Convenience constructor: states are the transition endpoints plus
    /// the initial state; transition labels are plain names (or `tau`).
    pub fn assemble(
        inputs: &[&str],
        outputs: &[&str],
        initial: &str,
        transitions: &[(&str, &str, &str)],
    ) -> Result<Lts, ValidationReport> {
        let mut states: BTreeSet<String> = BTreeSet::new();
        states.insert(initial.to_string());
        for (src, _, dst) in transitions {
            states.insert(src.to_string());
            states.insert(dst.to_string());
        }
        RawLts {
            states,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            transitions: transitions
                .iter()
                .map(|(s, l, d)| (s.to_string(), l.to_string(), d.to_string()))
                .collect(),
            initial: initial.to_string(),
        }
        .build()
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.raw.states
    }

    pub fn inputs(&self) -> &BTreeSet<String> {
        &self.raw.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<String> {
        &self.raw.outputs
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.raw.transitions
    }

    pub fn initial(&self) -> &str {
        &self.raw.initial
    }

    pub fn raw(&self) -> &RawLts {
        &self.raw
    }

    pub fn into_raw(self) -> RawLts {
        self.raw
    }

    /// Inputs and outputs together (without `delta`).
    pub fn alphabet(&self) -> BTreeSet<String> {
        self.raw.inputs.union(&self.raw.outputs).cloned().collect()
    }

    /// True if `label` names an input, an output, or `delta`.
    pub fn knows_label(&self, label: &str) -> bool {
        label == DELTA || self.raw.inputs.contains(label) || self.raw.outputs.contains(label)
    }

    /// Outgoing edges of one state as `(label-or-tau, target)` pairs.
    pub fn edges_from(&self, state: &str) -> &[(String, String)] {
        self.adjacency.get(state).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The ε-closure of a state set: everything reachable via τ-edges only.
    pub fn eps_closure(&self, from: &StateSet) -> StateSet {
        let mut closure = from.clone();
        let mut todo: Vec<String> = from.iter().cloned().collect();
        while let Some(state) = todo.pop() {
            for (label, target) in self.edges_from(&state) {
                if label == TAU && closure.insert(target.clone()) {
                    todo.push(target.clone());
                }
            }
        }
        closure
    }

    /// True iff `state` enables no output and no τ transition (strong
    /// enabling), i.e. an observer would see quiescence there.
    pub fn quiescent(&self, state: &str) -> bool {
        !self
            .edges_from(state)
            .iter()
            .any(|(label, _)| label == TAU || self.raw.outputs.contains(label))
    }

    /// One observable step from an ε-closed set: the ε-closed set of states
    /// reachable via `label`, or the quiescent members for `delta`.
    /// Returns the empty set when the step is not executable.
    pub fn step(&self, from: &StateSet, label: &str) -> StateSet {
        if label == DELTA {
            return from.iter().filter(|q| self.quiescent(q)).cloned().collect();
        }
        let mut next = StateSet::new();
        for state in from {
            for (edge_label, target) in self.edges_from(state) {
                if edge_label == label {
                    next.insert(target.clone());
                }
            }
        }
        self.eps_closure(&next)
    }

    /// `from after sigma`: every state some member of ε-closure(`from`)
    /// weakly reaches via `sigma`. Empty means the trace is not executable.
    pub fn after(&self, from: &StateSet, sigma: &Trace) -> Result<StateSet, CoreError> {
        for label in sigma.labels() {
            if !self.knows_label(label) {
                return Err(CoreError::UnknownLabel(label.clone()));
            }
        }
        let mut current = self.eps_closure(from);
        for label in sigma.labels() {
            current = self.step(&current, label);
            if current.is_empty() {
                break;
            }
        }
        Ok(current)
    }

    /// `after` from the initial state.
    pub fn after_initial(&self, sigma: &Trace) -> Result<StateSet, CoreError> {
        let mut start = StateSet::new();
        start.insert(self.raw.initial.clone());
        self.after(&start, sigma)
    }

    /// The out-set of a state set: every strongly enabled output of any
    /// member, plus `delta` iff some member is quiescent. `outs(∅) = ∅`.
    pub fn outs(&self, set: &StateSet) -> BTreeSet<String> {
        let mut result = BTreeSet::new();
        for state in set {
            for (label, _) in self.edges_from(state) {
                if self.raw.outputs.contains(label) {
                    result.insert(label.clone());
                }
            }
            if self.quiescent(state) {
                result.insert(DELTA.to_string());
            }
        }
        result
    }

    /// True iff `state` weakly enables `label` (τ* then the label; for
    /// `delta`, some τ-reachable state is quiescent).
    pub fn weakly_enables(&self, state: &str, label: &str) -> bool {
        let mut single = StateSet::new();
        single.insert(state.to_string());
        !self.step(&self.eps_closure(&single), label).is_empty()
    }

    /// The in-set of a nonempty state set: the inputs weakly enabled by
    /// every member.
    pub fn ins(&self, set: &StateSet) -> Result<BTreeSet<String>, CoreError> {
        if set.is_empty() {
            return Err(CoreError::EmptySet);
        }
        Ok(self
            .raw
            .inputs
            .iter()
            .filter(|input| set.iter().all(|q| self.weakly_enables(q, input)))
            .cloned()
            .collect())
    }

    /// The ε-closed singleton set of the initial state.
    pub fn initial_set(&self) -> StateSet {
        let mut start = StateSet::new();
        start.insert(self.raw.initial.clone());
        self.eps_closure(&start)
    }

    /// The model restricted to states reachable from the initial state via
    /// any transitions.
    pub fn reachable_part(&self) -> Lts {
        let mut keep: BTreeSet<String> = BTreeSet::new();
        let mut todo = vec![self.raw.initial.clone()];
        keep.insert(self.raw.initial.clone());
        while let Some(state) = todo.pop() {
            for (_, target) in self.edges_from(&state) {
                if keep.insert(target.clone()) {
                    todo.push(target.clone());
                }
            }
        }
        RawLts {
            states: keep.clone(),
            inputs: self.raw.inputs.clone(),
            outputs: self.raw.outputs.clone(),
            transitions: self
                .raw
                .transitions
                .iter()
                .filter(|(src, _, _)| keep.contains(src))
                .cloned()
                .collect(),
            initial: self.raw.initial.clone(),
        }
        .build()
        .expect("a reachable restriction of a valid model stays valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{autopark_impl, autopark_spec, sensor_impl, sensor_spec};

    fn set(items: &[&str]) -> StateSet {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sensor_spec_is_valid() {
        assert!(sensor_spec().raw().validate().is_valid());
    }

    #[test]
    fn overlapping_alphabets_are_reported() {
        let report = RawLts {
            states: set(&["q"]),
            inputs: set(&["x"]),
            outputs: set(&["x"]),
            transitions: BTreeSet::new(),
            initial: "q".to_string(),
        }
        .validate();
        assert_eq!(
            report.violations,
            vec![Violation::AlphabetOverlap {
                labels: set(&["x"])
            }]
        );
    }

    #[test]
    fn tau_two_cycle_is_reported() {
        let report = RawLts {
            states: set(&["q1", "q2"]),
            inputs: BTreeSet::new(),
            outputs: BTreeSet::new(),
            transitions: [
                ("q1".to_string(), TAU.to_string(), "q2".to_string()),
                ("q2".to_string(), TAU.to_string(), "q1".to_string()),
            ]
            .into_iter()
            .collect(),
            initial: "q1".to_string(),
        }
        .validate();
        assert!(matches!(
            report.violations.as_slice(),
            [Violation::TauCycle { states }] if states.len() == 2
        ));
    }

    #[test]
    fn reserved_tokens_rejected_in_alphabets() {
        let report = RawLts {
            states: set(&["q"]),
            inputs: set(&["delta"]),
            outputs: set(&["tau"]),
            transitions: BTreeSet::new(),
            initial: "q".to_string(),
        }
        .validate();
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn dangling_endpoints_and_labels_reported() {
        let report = RawLts {
            states: set(&["q"]),
            inputs: set(&["a"]),
            outputs: BTreeSet::new(),
            transitions: [("q".to_string(), "b".to_string(), "r".to_string())]
                .into_iter()
                .collect(),
            initial: "q".to_string(),
        }
        .validate();
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn after_single_input_step() {
        let m = sensor_spec();
        let result = m
            .after(&set(&["1"]), &Trace::from_labels(&["off"]))
            .unwrap();
        assert_eq!(result, set(&["2"]));
    }

    #[test]
    fn after_empty_trace_is_eps_closure() {
        let m = Lts::assemble(&[], &["a"], "p", &[("p", "tau", "q"), ("q", "a", "r")]).unwrap();
        let result = m.after(&set(&["p"]), &Trace::empty()).unwrap();
        assert_eq!(result, set(&["p", "q"]));
    }

    #[test]
    fn after_unknown_label_errors() {
        let m = sensor_spec();
        assert_eq!(
            m.after(&set(&["1"]), &Trace::from_labels(&["nope"])),
            Err(CoreError::UnknownLabel("nope".to_string()))
        );
    }

    #[test]
    fn after_non_executable_trace_is_empty() {
        let m = sensor_spec();
        let result = m
            .after(&set(&["1"]), &Trace::from_labels(&["off", "obs"]))
            .unwrap();
        assert!(result.is_empty());
    }

    #[test]
    fn after_composes_over_concatenation() {
        let m = sensor_impl();
        let combined = m
            .after(&set(&["1"]), &Trace::from_labels(&["obs", "beep", "off"]))
            .unwrap();
        let first = m
            .after(&set(&["1"]), &Trace::from_labels(&["obs"]))
            .unwrap();
        let rest = m
            .after(&first, &Trace::from_labels(&["beep", "off"]))
            .unwrap();
        assert_eq!(combined, rest);
    }

    #[test]
    fn outs_includes_delta_exactly_for_quiescent_members() {
        let m = sensor_spec();
        assert_eq!(m.outs(&set(&["1"])), set(&["safe"]));
        assert_eq!(m.outs(&set(&["2"])), set(&["delta"]));
        assert_eq!(m.outs(&set(&["1", "2"])), set(&["safe", "delta"]));
        assert!(m.outs(&StateSet::new()).is_empty());
    }

    #[test]
    fn no_output_model_is_everywhere_quiescent() {
        let m = Lts::assemble(&["a"], &[], "p", &[("p", "a", "q")]).unwrap();
        assert_eq!(m.outs(&set(&["p", "q"])), set(&["delta"]));
    }

    #[test]
    fn quiescence_examples() {
        let m = sensor_spec();
        assert!(m.quiescent("2"));
        assert!(!m.quiescent("1")); // !safe loop
        let tau_only = Lts::assemble(&[], &[], "p", &[("p", "tau", "q")]).unwrap();
        assert!(!tau_only.quiescent("p"));
        assert!(tau_only.quiescent("q"));
    }

    #[test]
    fn ins_is_intersection_of_weakly_enabled_inputs() {
        let spec = autopark_spec();
        assert!(spec.ins(&set(&["B"])).unwrap().is_empty());
        let imp = autopark_impl();
        assert_eq!(imp.ins(&set(&["B"])).unwrap(), set(&["beep", "safe"]));
        // One state enabling nothing drags the intersection to ∅.
        let all: StateSet = spec.states().clone();
        assert!(spec.ins(&all).unwrap().is_empty());
    }

    #[test]
    fn ins_on_empty_set_errors() {
        assert_eq!(
            sensor_spec().ins(&StateSet::new()),
            Err(CoreError::EmptySet)
        );
    }

    #[test]
    fn ins_sees_inputs_behind_tau() {
        let m = Lts::assemble(&["a"], &[], "p", &[("p", "tau", "q"), ("q", "a", "q")]).unwrap();
        assert_eq!(m.ins(&set(&["p"])).unwrap(), set(&["a"]));
    }

    #[test]
    fn singleton_ins_contains_set_ins() {
        let m = sensor_impl();
        let all: StateSet = m.states().clone();
        let joint = m.ins(&all).unwrap();
        for q in m.states() {
            let single = m.ins(&set(&[q])).unwrap();
            assert!(joint.is_subset(&single));
        }
    }

    #[test]
    fn after_result_is_eps_closed() {
        let m = Lts::assemble(
            &["a"],
            &[],
            "p",
            &[("p", "a", "q"), ("q", "tau", "r"), ("r", "tau", "s")],
        )
        .unwrap();
        let result = m.after(&set(&["p"]), &Trace::from_labels(&["a"])).unwrap();
        assert_eq!(result, m.eps_closure(&result));
        assert_eq!(result, set(&["q", "r", "s"]));
    }

    #[test]
    fn delta_step_keeps_only_quiescent_states() {
        let m = sensor_spec();
        let result = m
            .after(&set(&["1"]), &Trace::from_labels(&["obs", "delta"]))
            .unwrap();
        // State 3 enables !beep, so it is not quiescent.
        assert!(result.is_empty());
        let off = m
            .after(
                &set(&["1"]),
                &Trace::from_labels(&["off", "delta", "delta"]),
            )
            .unwrap();
        assert_eq!(off, set(&["2"]));
    }

    #[test]
    fn trace_parse_and_display_round_trip() {
        let t: Trace = "safe.obs.delta".parse().unwrap();
        assert_eq!(t, Trace::from_labels(&["safe", "obs", "delta"]));
        assert_eq!(t.to_string(), "safe.obs.delta");
        assert_eq!("".parse::<Trace>().unwrap(), Trace::empty());
        assert!("a..b".parse::<Trace>().is_err());
    }

    #[test]
    fn reachable_part_drops_unreachable_states() {
        let m = RawLts {
            states: set(&["p", "q", "zombie"]),
            inputs: set(&["a"]),
            outputs: BTreeSet::new(),
            transitions: [
                ("p".to_string(), "a".to_string(), "q".to_string()),
                ("zombie".to_string(), "a".to_string(), "p".to_string()),
            ]
            .into_iter()
            .collect(),
            initial: "p".to_string(),
        }
        .build()
        .unwrap();
        let r = m.reachable_part();
        assert_eq!(r.states(), &set(&["p", "q"]));
        assert_eq!(r.transitions().len(), 1);
    }
}
