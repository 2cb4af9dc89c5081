//! Composability checking, parallel composition, output renaming, and
//! isomorphism checking.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lts::{Lts, RawLts, StateSet, Transition, TAU};

/// Default cap on state counts accepted by [`isomorphic`]; the bijection
/// search is exponential in the worst case.
pub const DEFAULT_ISO_STATE_LIMIT: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("models are not composable: outputs overlap on {{{}}}", overlap_list(.0))]
    NotComposable(BTreeSet<String>),
}

fn overlap_list(labels: &BTreeSet<String>) -> String {
    labels
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenameError {
    #[error("label `{0}` is not an output of the model")]
    UnknownLabel(String),
    #[error("new label `{0}` clashes with the model's alphabet or a reserved token")]
    LabelClash(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("isomorphism check limited to {limit} states, got {actual}")]
pub struct StateLimitExceeded {
    pub limit: usize,
    pub actual: usize,
}

/// True iff the two models may be composed: their output alphabets are
/// disjoint. Overlapping inputs are explicitly allowed.
pub fn composable(s: &Lts, e: &Lts) -> bool {
    s.outputs().intersection(e.outputs()).next().is_none()
}

/// A composed model together with the decomposition of every composed
/// state back into its operand states.
#[derive(Clone, Debug)]
pub struct Composition {
    pub lts: Lts,
    /// composed state id -> (left operand state, right operand state)
    pub pairs: BTreeMap<String, (String, String)>,
}

/// Parallel composition restricted to the reachable part, keeping the
/// pair decomposition of every composed state. Shared labels synchronize,
/// unshared labels and τ interleave; no label is hidden.
pub fn compose_pairs(s: &Lts, e: &Lts) -> Result<Composition, ComposeError> {
    let overlap: BTreeSet<String> = s.outputs().intersection(e.outputs()).cloned().collect();
    if !overlap.is_empty() {
        return Err(ComposeError::NotComposable(overlap));
    }

    let shared: BTreeSet<String> = s.alphabet().intersection(&e.alphabet()).cloned().collect();
    let inputs: BTreeSet<String> = s
        .inputs()
        .difference(e.outputs())
        .chain(e.inputs().difference(s.outputs()))
        .cloned()
        .collect();
    let outputs: BTreeSet<String> = s.outputs().union(e.outputs()).cloned().collect();

    // Names follow the canonical "p|q" form; in the unlikely event two
    // distinct pairs collide on that string, a counter suffix untangles
    // them (the `pairs` map, not the name, is authoritative).
    let mut names: BTreeMap<(String, String), String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut name_of = |pair: &(String, String), used: &mut BTreeSet<String>| -> String {
        if let Some(n) = names.get(pair) {
            return n.clone();
        }
        let mut candidate = format!("{}|{}", pair.0, pair.1);
        let mut salt = 2;
        while !used.insert(candidate.clone()) {
            candidate = format!("{}|{}~{}", pair.0, pair.1, salt);
            salt += 1;
        }
        names.insert(pair.clone(), candidate.clone());
        candidate
    };

    let start = (s.initial().to_string(), e.initial().to_string());
    let mut transitions: BTreeSet<Transition> = BTreeSet::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut todo: Vec<(String, String)> = vec![start.clone()];
    seen.insert(start.clone());
    while let Some(pair) = todo.pop() {
        let (p, q) = &pair;
        let src = name_of(&pair, &mut used);
        let mut push = |label: &str,
                        target: (String, String),
                        transitions: &mut BTreeSet<Transition>,
                        seen: &mut BTreeSet<(String, String)>,
                        todo: &mut Vec<(String, String)>,
                        used: &mut BTreeSet<String>| {
            let dst = name_of(&target, used);
            transitions.insert((src.clone(), label.to_string(), dst));
            if seen.insert(target.clone()) {
                todo.push(target);
            }
        };
        for (label, target) in s.edges_from(p) {
            if label == TAU || !shared.contains(label) {
                push(
                    label,
                    (target.clone(), q.clone()),
                    &mut transitions,
                    &mut seen,
                    &mut todo,
                    &mut used,
                );
            } else {
                for (other_label, other_target) in e.edges_from(q) {
                    if other_label == label {
                        push(
                            label,
                            (target.clone(), other_target.clone()),
                            &mut transitions,
                            &mut seen,
                            &mut todo,
                            &mut used,
                        );
                    }
                }
            }
        }
        for (label, target) in e.edges_from(q) {
            if label == TAU || !shared.contains(label) {
                push(
                    label,
                    (p.clone(), target.clone()),
                    &mut transitions,
                    &mut seen,
                    &mut todo,
                    &mut used,
                );
            }
        }
    }

    let pairs: BTreeMap<String, (String, String)> =
        names.into_iter().map(|(pair, name)| (name, pair)).collect();
    let lts = RawLts {
        states: pairs.keys().cloned().collect(),
        inputs,
        outputs,
        transitions,
        initial: pairs
            .iter()
            .find(|(_, p)| **p == start)
            .map(|(n, _)| n.clone())
            .expect("initial pair was visited"),
    }
    .build()
    .expect("composition of valid models is valid");
    Ok(Composition { lts, pairs })
}

/// Parallel composition restricted to the reachable part.
pub fn compose(s: &Lts, e: &Lts) -> Result<Lts, ComposeError> {
    compose_pairs(s, e).map(|c| c.lts)
}

/// The same model with one output relabeled everywhere.
pub fn rename_output(m: &Lts, old: &str, new: &str) -> Result<Lts, RenameError> {
    if !m.outputs().contains(old) {
        return Err(RenameError::UnknownLabel(old.to_string()));
    }
    if m.knows_label(new) || new == TAU || new.is_empty() {
        return Err(RenameError::LabelClash(new.to_string()));
    }
    let mut raw = m.raw().clone();
    raw.outputs.remove(old);
    raw.outputs.insert(new.to_string());
    raw.transitions = raw
        .transitions
        .into_iter()
        .map(|(src, label, dst)| {
            let label = if label == old { new.to_string() } else { label };
            (src, label, dst)
        })
        .collect();
    raw.build()
        .map_err(|_| RenameError::LabelClash(new.to_string()))
}

/// Isomorphism on reachable parts with the default state limit.
/// Panics if either reachable part exceeds [`DEFAULT_ISO_STATE_LIMIT`].
pub fn isomorphic(a: &Lts, b: &Lts) -> bool {
    try_isomorphic(a, b, DEFAULT_ISO_STATE_LIMIT)
        .expect("model too large for the default isomorphism limit")
}

/// True iff the alphabets are equal and a label-preserving,
/// initial-preserving bijection exists between the reachable parts.
/// Decided by partition refinement followed by a backtracking bijection
/// search over refinement classes.
pub fn try_isomorphic(a: &Lts, b: &Lts, limit: usize) -> Result<bool, StateLimitExceeded> {
    if a.inputs() != b.inputs() || a.outputs() != b.outputs() {
        return Ok(false);
    }
    let a = a.reachable_part();
    let b = b.reachable_part();
    for m in [&a, &b] {
        if m.states().len() > limit {
            return Err(StateLimitExceeded {
                limit,
                actual: m.states().len(),
            });
        }
    }
    if a.states().len() != b.states().len() || a.transitions().len() != b.transitions().len() {
        return Ok(false);
    }

    let a_states: Vec<&String> = a.states().iter().collect();
    let b_states: Vec<&String> = b.states().iter().collect();
    let index = |states: &[&String], q: &str| states.iter().position(|s| *s == q).unwrap();

    // Out- and in-edge lists as (label, peer index), per state.
    let edge_views = |m: &Lts, states: &[&String]| {
        let mut outs = vec![Vec::new(); states.len()];
        let mut ins = vec![Vec::new(); states.len()];
        for (src, label, dst) in m.transitions() {
            let s = index(states, src);
            let d = index(states, dst);
            outs[s].push((label.clone(), d));
            ins[d].push((label.clone(), s));
        }
        (outs, ins)
    };
    let (a_out, a_in) = edge_views(&a, &a_states);
    let (b_out, b_in) = edge_views(&b, &b_states);

    // Joint partition refinement: colors are comparable across both models.
    let mut a_color = vec![0u32; a_states.len()];
    let mut b_color = vec![0u32; b_states.len()];
    a_color[index(&a_states, a.initial())] = 1;
    b_color[index(&b_states, b.initial())] = 1;
    loop {
        type Sig = (u32, Vec<(String, u32)>, Vec<(String, u32)>);
        let signature = |i: usize,
                         color: &[u32],
                         out: &[Vec<(String, usize)>],
                         inn: &[Vec<(String, usize)>]|
         -> Sig {
            let mut o: Vec<(String, u32)> =
                out[i].iter().map(|(l, d)| (l.clone(), color[*d])).collect();
            let mut n: Vec<(String, u32)> =
                inn[i].iter().map(|(l, s)| (l.clone(), color[*s])).collect();
            o.sort();
            n.sort();
            (color[i], o, n)
        };
        let mut table: BTreeMap<Sig, u32> = BTreeMap::new();
        let next_of = |sig: Sig, table: &mut BTreeMap<Sig, u32>| -> u32 {
            let next = table.len() as u32;
            *table.entry(sig).or_insert(next)
        };
        let new_a: Vec<u32> = (0..a_states.len())
            .map(|i| next_of(signature(i, &a_color, &a_out, &a_in), &mut table))
            .collect();
        let new_b: Vec<u32> = (0..b_states.len())
            .map(|i| next_of(signature(i, &b_color, &b_out, &b_in), &mut table))
            .collect();
        let stable = {
            let classes = |c: &[u32]| c.iter().collect::<BTreeSet<_>>().len();
            classes(&new_a) == classes(&a_color) && classes(&new_b) == classes(&b_color)
        };
        a_color = new_a;
        b_color = new_b;
        if stable {
            break;
        }
    }
    {
        let mut a_hist: BTreeMap<u32, usize> = BTreeMap::new();
        let mut b_hist: BTreeMap<u32, usize> = BTreeMap::new();
        for c in &a_color {
            *a_hist.entry(*c).or_default() += 1;
        }
        for c in &b_color {
            *b_hist.entry(*c).or_default() += 1;
        }
        if a_hist != b_hist {
            return Ok(false);
        }
    }

    // Backtracking search for the bijection, constrained to equal colors
    // and verified edge-by-edge against already-mapped states.
    let n = a_states.len();
    let mut mapping: Vec<Option<usize>> = vec![None; n];
    let mut taken = vec![false; n];
    fn consistent(
        i: usize,
        j: usize,
        mapping: &[Option<usize>],
        a_out: &[Vec<(String, usize)>],
        b_out: &[Vec<(String, usize)>],
    ) -> bool {
        // Every a-edge i -l-> d with d already mapped must be matched, with
        // equal multiplicity, by a b-edge j -l-> map(d); comparing the two
        // multisets in b-space checks both directions at once.
        let mut a_side: Vec<(String, usize)> = a_out[i]
            .iter()
            .filter_map(|(l, d)| mapping[*d].map(|m| (l.clone(), m)))
            .collect();
        let mut b_side: Vec<(String, usize)> = b_out[j]
            .iter()
            .filter(|(_, d)| mapping.iter().any(|m| *m == Some(*d)))
            .map(|(l, d)| (l.clone(), *d))
            .collect();
        a_side.sort();
        b_side.sort();
        a_side == b_side
    }
    fn search(
        order: &[usize],
        pos: usize,
        mapping: &mut Vec<Option<usize>>,
        taken: &mut Vec<bool>,
        a_color: &[u32],
        b_color: &[u32],
        a_out: &[Vec<(String, usize)>],
        b_out: &[Vec<(String, usize)>],
        a_in: &[Vec<(String, usize)>],
        b_in: &[Vec<(String, usize)>],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        for j in 0..taken.len() {
            if taken[j] || b_color[j] != a_color[i] {
                continue;
            }
            mapping[i] = Some(j);
            taken[j] = true;
            // Check consistency of both out- and (via the reverse views)
            // in-edges among the mapped region; the in-edge check catches
            // mismatched predecessors early.
            let ok = consistent(i, j, mapping, a_out, b_out)
                && consistent(i, j, mapping, a_in, b_in)
                && search(
                    order,
                    pos + 1,
                    mapping,
                    taken,
                    a_color,
                    b_color,
                    a_out,
                    b_out,
                    a_in,
                    b_in,
                );
            if ok {
                return true;
            }
            mapping[i] = None;
            taken[j] = false;
        }
        false
    }
    // Map rarest colors first to keep the branching factor small.
    let mut order: Vec<usize> = (0..n).collect();
    let mut freq: BTreeMap<u32, usize> = BTreeMap::new();
    for c in &a_color {
        *freq.entry(*c).or_default() += 1;
    }
    order.sort_by_key(|i| (freq[&a_color[*i]], *i));
    Ok(search(
        &order,
        0,
        &mut mapping,
        &mut taken,
        &a_color,
        &b_color,
        &a_out,
        &b_out,
        &a_in,
        &b_in,
    ))
}

/// The per-state pair decomposition exposed for diagnosis and acceptance:
/// looks up a composed state id.
impl Composition {
    pub fn decompose(&self, composed_state: &str) -> Option<&(String, String)> {
        self.pairs.get(composed_state)
    }

    /// Decomposes a whole composed state set into the left/right parts.
    pub fn split(&self, set: &StateSet) -> (StateSet, StateSet) {
        let mut left = StateSet::new();
        let mut right = StateSet::new();
        for state in set {
            if let Some((p, q)) = self.pairs.get(state) {
                left.insert(p.clone());
                right.insert(q.clone());
            }
        }
        (left, right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::Lts;
    use crate::models::{autopark_spec, sensor_spec};

    #[test]
    fn parking_components_are_composable() {
        assert!(composable(&sensor_spec(), &autopark_spec()));
    }

    #[test]
    fn self_composition_with_outputs_is_not() {
        let m = sensor_spec();
        assert!(!composable(&m, &m));
        assert!(matches!(
            compose(&m, &m),
            Err(ComposeError::NotComposable(labels)) if labels.len() == 2
        ));
    }

    #[test]
    fn shared_inputs_without_outputs_are_composable() {
        let m = Lts::assemble(&["a"], &[], "p", &[("p", "a", "p")]).unwrap();
        let n = Lts::assemble(&["a"], &[], "q", &[("q", "a", "q")]).unwrap();
        assert!(composable(&m, &n));
        let c = compose(&m, &n).unwrap();
        assert_eq!(c.states().len(), 1);
        assert_eq!(c.inputs().len(), 1);
    }

    #[test]
    fn composed_parking_shape() {
        let c = compose(&sensor_spec(), &autopark_spec()).unwrap();
        assert_eq!(c.states().len(), 9);
        let expected: std::collections::BTreeSet<String> = [
            "1|A", "1|B", "3|A", "3|B", "1|C", "3|C", "1|D", "3|D", "2|E",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(c.states(), &expected);
        assert_eq!(
            c.inputs().iter().cloned().collect::<Vec<_>>(),
            vec!["obs".to_string()]
        );
        assert_eq!(c.outputs().len(), 5);
        assert_eq!(c.initial(), "1|A");
    }

    #[test]
    fn disjoint_alphabets_interleave() {
        let m = Lts::assemble(&["a"], &[], "p", &[("p", "a", "p2")]).unwrap();
        let n = Lts::assemble(&["b"], &[], "q", &[("q", "b", "q2")]).unwrap();
        let c = compose(&m, &n).unwrap();
        assert_eq!(c.states().len(), 4);
        assert_eq!(c.transitions().len(), 4);
    }

    #[test]
    fn rename_output_round_trip_is_isomorphic() {
        let m = autopark_spec();
        let renamed = rename_output(&m, "off", "off2").unwrap();
        assert!(renamed.outputs().contains("off2"));
        assert!(!renamed.outputs().contains("off"));
        let back = rename_output(&renamed, "off2", "off").unwrap();
        assert!(isomorphic(&m, &back));
        assert_eq!(m.raw(), back.raw());
    }

    #[test]
    fn rename_rejects_clash_and_unknown() {
        let m = autopark_spec();
        assert_eq!(
            rename_output(&m, "off", "beep"),
            Err(RenameError::LabelClash("beep".to_string()))
        );
        assert_eq!(
            rename_output(&m, "nope", "x"),
            Err(RenameError::UnknownLabel("nope".to_string()))
        );
        assert_eq!(
            rename_output(&m, "off", "delta"),
            Err(RenameError::LabelClash("delta".to_string()))
        );
    }

    #[test]
    fn parking_composition_commutes_up_to_isomorphism() {
        let a = compose(&sensor_spec(), &autopark_spec()).unwrap();
        let b = compose(&autopark_spec(), &sensor_spec()).unwrap();
        assert!(isomorphic(&a, &b));
    }

    #[test]
    fn isomorphic_is_reflexive_and_alphabet_sensitive() {
        let m = sensor_spec();
        assert!(isomorphic(&m, &m));
        let one = Lts::assemble(&[], &["x"], "p", &[("p", "x", "p")]).unwrap();
        let other = Lts::assemble(&[], &["y"], "p", &[("p", "y", "p")]).unwrap();
        assert!(!isomorphic(&one, &other));
    }

    #[test]
    fn isomorphism_ignores_state_names_but_not_structure() {
        let m = Lts::assemble(&["a"], &["x"], "p", &[("p", "a", "q"), ("q", "x", "p")]).unwrap();
        let n = Lts::assemble(&["a"], &["x"], "u", &[("u", "a", "v"), ("v", "x", "u")]).unwrap();
        assert!(isomorphic(&m, &n));
        let extra =
            Lts::assemble(&["a"], &["x"], "u", &[("u", "a", "v"), ("v", "x", "v")]).unwrap();
        assert!(!isomorphic(&m, &extra));
    }

    #[test]
    fn isomorphism_compares_reachable_parts_only() {
        let mut raw = sensor_spec().raw().clone();
        raw.states.insert("unreachable".to_string());
        let padded = raw.build().unwrap();
        assert!(isomorphic(&sensor_spec(), &padded));
    }

    #[test]
    fn state_limit_is_enforced() {
        let m = sensor_spec();
        assert!(try_isomorphic(&m, &m, 2).is_err());
        assert_eq!(try_isomorphic(&m, &m, 3), Ok(true));
    }

    #[test]
    fn decompose_round_trips_pairs() {
        let c = compose_pairs(&sensor_spec(), &autopark_spec()).unwrap();
        assert_eq!(
            c.decompose("3|B"),
            Some(&("3".to_string(), "B".to_string()))
        );
        for state in c.lts.states() {
            let (p, q) = c.decompose(state).unwrap();
            assert!(sensor_spec().states().contains(p));
            assert!(autopark_spec().states().contains(q));
        }
    }
}
