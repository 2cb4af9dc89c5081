//! Suspension-automaton construction, utraces membership,
//! input-enabledness, and the uioco conformance check with shortest
//! counterexamples.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::lts::{CoreError, Lts, StateSet, Trace, DELTA};

/// One macro-state of the determinized suspension automaton: an ε-closed,
/// nonempty set of plain states with its gating and out-set annotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroState {
    pub states: StateSet,
    /// Inputs weakly enabled in EVERY member (the utraces gate).
    pub enabled_inputs: BTreeSet<String>,
    /// Strongly enabled outputs of any member, plus `delta` if any member
    /// is quiescent.
    pub out_set: BTreeSet<String>,
}

/// Determinized suspension automaton; its language is the utraces set of
/// the underlying model.
#[derive(Clone, Debug)]
pub struct DetSuspension {
    pub macro_states: Vec<MacroState>,
    pub initial: usize,
    pub edges: BTreeMap<(usize, String), usize>,
}

impl DetSuspension {
    pub fn successor(&self, from: usize, label: &str) -> Option<usize> {
        self.edges.get(&(from, label.to_string())).copied()
    }

    /// True iff the trace is in the automaton's language.
    pub fn accepts(&self, sigma: &Trace) -> bool {
        let mut at = self.initial;
        for label in sigma.labels() {
            match self.successor(at, label) {
                Some(next) => at = next,
                None => return false,
            }
        }
        true
    }

    /// Every trace in the language up to the given length, by tree walk.
    pub fn language_to_depth(&self, depth: usize) -> BTreeSet<Trace> {
        let mut result = BTreeSet::new();
        let mut stack: Vec<(usize, Trace)> = vec![(self.initial, Trace::empty())];
        while let Some((at, trace)) = stack.pop() {
            result.insert(trace.clone());
            if trace.len() == depth {
                continue;
            }
            for ((from, label), to) in &self.edges {
                if *from == at {
                    stack.push((*to, trace.extended(label.clone())));
                }
            }
        }
        result
    }
}

fn annotate(m: &Lts, states: &StateSet) -> MacroState {
    MacroState {
        enabled_inputs: m
            .inputs()
            .iter()
            .filter(|input| states.iter().all(|q| m.weakly_enables(q, input)))
            .cloned()
            .collect(),
        out_set: m.outs(states),
        states: states.clone(),
    }
}

/// Subset construction over weak transitions, with δ-edges to the
/// quiescent members and input edges gated by universal weak enabling.
pub fn det_suspension(m: &Lts) -> DetSuspension {
    let mut macro_states: Vec<MacroState> = Vec::new();
    let mut index: BTreeMap<StateSet, usize> = BTreeMap::new();
    let mut edges: BTreeMap<(usize, String), usize> = BTreeMap::new();

    let initial_set = m.initial_set();
    macro_states.push(annotate(m, &initial_set));
    index.insert(initial_set, 0);
    let mut todo: VecDeque<usize> = VecDeque::from([0]);

    while let Some(at) = todo.pop_front() {
        let annotation = macro_states[at].clone();
        let mut labels: Vec<String> = annotation.enabled_inputs.iter().cloned().collect();
        for out in &annotation.out_set {
            labels.push(out.clone()); // includes DELTA when present
        }
        for label in labels {
            let next = m.step(&annotation.states, &label);
            debug_assert!(!next.is_empty(), "annotated labels are executable");
            let target = match index.get(&next) {
                Some(&idx) => idx,
                None => {
                    let idx = macro_states.len();
                    macro_states.push(annotate(m, &next));
                    index.insert(next, idx);
                    todo.push_back(idx);
                    idx
                }
            };
            edges.insert((at, label), target);
        }
    }

    DetSuspension {
        macro_states,
        initial: 0,
        edges,
    }
}

/// True iff every state weakly enables every input of the model.
pub fn input_enabled(m: &Lts) -> bool {
    m.states()
        .iter()
        .all(|q| m.inputs().iter().all(|input| m.weakly_enables(q, input)))
}

/// Membership in the utraces set: the trace is executable via weak
/// transitions and no prefix takes an input that some reachable state
/// weakly refuses.
pub fn utraces_contains(m: &Lts, sigma: &Trace) -> Result<bool, CoreError> {
    for label in sigma.labels() {
        if !m.knows_label(label) {
            return Err(CoreError::UnknownLabel(label.clone()));
        }
    }
    let mut current = m.initial_set();
    for label in sigma.labels() {
        if m.inputs().contains(label) && !current.iter().all(|q| m.weakly_enables(q, label)) {
            return Ok(false);
        }
        current = m.step(&current, label);
        if current.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The verdict of a uioco conformance check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum UiocoVerdict {
    Pass,
    Fail {
        /// A shortest witness; a utrace of the specification.
        trace: Trace,
        /// The implementation output (or `delta`) the spec does not allow.
        offending: String,
        impl_outs: BTreeSet<String>,
        spec_outs: BTreeSet<String>,
    },
}

impl UiocoVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, UiocoVerdict::Pass)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UiocoError {
    #[error("implementation is not input-enabled")]
    NotInputEnabled,
    #[error("alphabet mismatch: implementation and specification must share inputs and outputs")]
    AlphabetMismatch,
}

/// Checks `i uioco s`: on every utrace of the specification, the
/// implementation's out-set (δ included) is contained in the
/// specification's. Fail verdicts carry a shortest witness, found by
/// breadth-first search over the product of the two determinized
/// suspension automata restricted to specification utraces, exploring
/// labels in lexicographic order.
pub fn check_uioco(i: &Lts, s: &Lts) -> Result<UiocoVerdict, UiocoError> {
    if i.inputs() != s.inputs() || i.outputs() != s.outputs() {
        return Err(UiocoError::AlphabetMismatch);
    }
    if !input_enabled(i) {
        return Err(UiocoError::NotInputEnabled);
    }

    let mut labels: Vec<String> = s.alphabet().into_iter().collect();
    labels.push(DELTA.to_string());
    labels.sort();

    let start = (s.initial_set(), i.initial_set());
    let mut seen: HashSet<(StateSet, StateSet)> = HashSet::new();
    seen.insert(start.clone());
    let mut queue: VecDeque<(StateSet, StateSet, Trace)> =
        VecDeque::from([(start.0, start.1, Trace::empty())]);

    while let Some((spec_set, impl_set, trace)) = queue.pop_front() {
        let impl_outs = i.outs(&impl_set);
        let spec_outs = s.outs(&spec_set);
        if let Some(offending) = impl_outs.difference(&spec_outs).next() {
            return Ok(UiocoVerdict::Fail {
                trace,
                offending: offending.clone(),
                impl_outs,
                spec_outs,
            });
        }
        for label in &labels {
            // The utraces gate applies to the specification side only.
            if s.inputs().contains(label) && !spec_set.iter().all(|q| s.weakly_enables(q, label)) {
                continue;
            }
            let spec_next = s.step(&spec_set, label);
            if spec_next.is_empty() {
                continue;
            }
            let impl_next = i.step(&impl_set, label);
            if impl_next.is_empty() {
                // The implementation cannot follow; its out-sets stay
                // empty forever on this branch, so nothing to falsify.
                continue;
            }
            let node = (spec_next, impl_next);
            if seen.insert(node.clone()) {
                queue.push_back((node.0, node.1, trace.extended(label.clone())));
            }
        }
    }
    Ok(UiocoVerdict::Pass)
}
