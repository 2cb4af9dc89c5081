//! The `accepts` / `mutually accepts` relations between composable
//! components, with full witnesses on violation.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::compose::{compose_pairs, ComposeError};
use crate::lts::{Lts, StateSet, Trace};

/// Which operand failed to accept the other's output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RefusedBy {
    Left,
    Right,
}

/// Verdict of an acceptance check. On violation the witness names a
/// utraces-reachable state pair and a synchronized output one side can
/// emit that the other does not weakly enable as an input there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum AcceptanceVerdict {
    Holds,
    Violated {
        /// A shortest composed utrace reaching the offending pair.
        trace: Trace,
        /// (left operand state, right operand state).
        pair: (String, String),
        /// The refused output label.
        label: String,
        refused_by: RefusedBy,
    },
}

impl AcceptanceVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, AcceptanceVerdict::Holds)
    }

    /// Same verdict with the pair swapped and the refusing side flipped;
    /// used to normalize the second direction of a mutual check to the
    /// caller's operand order.
    fn flipped(self) -> AcceptanceVerdict {
        match self {
            AcceptanceVerdict::Holds => AcceptanceVerdict::Holds,
            AcceptanceVerdict::Violated {
                trace,
                pair: (p, q),
                label,
                refused_by,
            } => AcceptanceVerdict::Violated {
                trace,
                pair: (q, p),
                label,
                refused_by: match refused_by {
                    RefusedBy::Left => RefusedBy::Right,
                    RefusedBy::Right => RefusedBy::Left,
                },
            },
        }
    }
}

/// Checks "s accepts e": at every state pair (s', e') reachable by a
/// composed utrace, every output of e' that is an input of s is weakly
/// enabled by s' — literally, out(e') ∩ I_s ⊆ in(s') ∩ U_e. Decided by
/// breadth-first search over the composed determinized suspension, whose
/// macro-states are sets of pairs; the condition is evaluated for each
/// individual pair. Violations carry a shortest witness (BFS by length,
/// lexicographic label and pair tie-break).
pub fn check_accepts(s: &Lts, e: &Lts) -> Result<AcceptanceVerdict, ComposeError> {
    let composition = compose_pairs(s, e)?;
    let c = &composition.lts;

    let mut labels: Vec<String> = c.alphabet().into_iter().collect();
    labels.push(crate::lts::DELTA.to_string());
    labels.sort();

    let start = c.initial_set();
    let mut seen: HashSet<StateSet> = HashSet::new();
    seen.insert(start.clone());
    let mut queue: VecDeque<(StateSet, Trace)> = VecDeque::from([(start, Trace::empty())]);

    while let Some((set, trace)) = queue.pop_front() {
        // Evaluate the pair condition for every composed state in the
        // macro-state; pick the lexicographically least (label, pair)
        // violation for a deterministic witness.
        let mut best: Option<(String, (String, String))> = None;
        for state in &set {
            let (p, q) = composition
                .decompose(state)
                .expect("composed states decompose")
                .clone();
            let mut e_singleton = StateSet::new();
            e_singleton.insert(q.clone());
            let emitted: BTreeSet<String> = e
                .outs(&e_singleton)
                .intersection(s.inputs())
                .cloned()
                .collect();
            let accepted: BTreeSet<String> = s
                .inputs()
                .iter()
                .filter(|input| s.weakly_enables(&p, input))
                .cloned()
                .collect::<BTreeSet<String>>()
                .intersection(e.outputs())
                .cloned()
                .collect();
            for label in emitted.difference(&accepted) {
                let candidate = (label.clone(), (p.clone(), q.clone()));
                if best.as_ref().map_or(true, |b| candidate < *b) {
                    best = Some(candidate);
                }
            }
        }
        if let Some((label, pair)) = best {
            return Ok(AcceptanceVerdict::Violated {
                trace,
                pair,
                label,
                refused_by: RefusedBy::Left,
            });
        }

        for label in &labels {
            if c.inputs().contains(label) && !set.iter().all(|q| c.weakly_enables(q, label)) {
                continue;
            }
            let next = c.step(&set, label);
            if next.is_empty() {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push_back((next, trace.extended(label.clone())));
            }
        }
    }
    Ok(AcceptanceVerdict::Holds)
}

/// Both directions: ("s accepts e", "e accepts s"), each witness pair
/// normalized to (state of s, state of e). Mutual acceptance holds iff
/// both verdicts hold.
pub fn check_mutual(
    s: &Lts,
    e: &Lts,
) -> Result<(AcceptanceVerdict, AcceptanceVerdict), ComposeError> {
    let forward = check_accepts(s, e)?;
    let backward = check_accepts(e, s)?.flipped();
    Ok((forward, backward))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::Lts;
    use crate::models::*;
    use crate::suspension::utraces_contains;

    #[test]
    fn sensor_accepts_autopark() {
        assert!(check_accepts(&sensor_spec(), &autopark_spec())
            .unwrap()
            .holds());
    }

    #[test]
    fn autopark_does_not_accept_sensor() {
        match check_accepts(&autopark_spec(), &sensor_spec()).unwrap() {
            AcceptanceVerdict::Violated {
                trace,
                pair,
                label,
                refused_by,
            } => {
                assert_eq!(refused_by, RefusedBy::Left);
                // Witness validity against core primitives only: the pair
                // is reached by the trace, the label is an output the
                // sensor can emit there, and the autopark state does not
                // weakly enable it.
                let composition =
                    crate::compose::compose_pairs(&autopark_spec(), &sensor_spec()).unwrap();
                assert!(utraces_contains(&composition.lts, &trace).unwrap());
                let reached = composition.lts.after_initial(&trace).unwrap();
                let (ap, sn) = pair.clone();
                assert!(reached
                    .iter()
                    .any(|st| composition.decompose(st) == Some(&(ap.clone(), sn.clone()))));
                let mut sensor_state = crate::lts::StateSet::new();
                sensor_state.insert(sn.clone());
                assert!(sensor_spec().outs(&sensor_state).contains(&label));
                assert!(autopark_spec().inputs().contains(&label));
                assert!(!autopark_spec().weakly_enables(&ap, &label));
                // Shortest witness: already at B|1 (after the composed
                // utrace `safe`) the sensor can emit safe again, which
                // autopark's spec state B does not weakly enable.
                assert_eq!(trace, "safe".parse().unwrap());
                assert_eq!(pair, ("B".to_string(), "1".to_string()));
                assert_eq!(label, "safe");
            }
            AcceptanceVerdict::Holds => panic!("expected a violation"),
        }
    }

    #[test]
    fn original_parking_pair_is_not_mutually_accepting() {
        let (forward, backward) = check_mutual(&sensor_spec(), &autopark_spec()).unwrap();
        assert!(forward.holds());
        match backward {
            AcceptanceVerdict::Violated {
                refused_by, pair, ..
            } => {
                assert_eq!(refused_by, RefusedBy::Right);
                // Normalized operand order: (sensor state, autopark state).
                assert!(sensor_spec().states().contains(&pair.0));
                assert!(autopark_spec().states().contains(&pair.1));
            }
            AcceptanceVerdict::Holds => panic!("expected a violation"),
        }
    }

    #[test]
    fn adapted_parking_pair_is_mutually_accepting() {
        let (forward, backward) =
            check_mutual(&adapted_sensor_spec(), &adapted_autopark_spec()).unwrap();
        assert!(forward.holds());
        assert!(backward.holds());
    }

    #[test]
    fn mutual_is_symmetric_in_content() {
        let (f1, b1) = check_mutual(&sensor_spec(), &autopark_spec()).unwrap();
        let (f2, b2) = check_mutual(&autopark_spec(), &sensor_spec()).unwrap();
        // Swapping operands swaps the directions and the pair orientation.
        assert_eq!(f1.holds(), b2.holds());
        assert_eq!(b1.holds(), f2.holds());
        match (b1, f2) {
            (
                AcceptanceVerdict::Violated {
                    trace: t1,
                    pair: (p1, q1),
                    label: l1,
                    ..
                },
                AcceptanceVerdict::Violated {
                    trace: t2,
                    pair: (p2, q2),
                    label: l2,
                    ..
                },
            ) => {
                assert_eq!(t1, t2);
                assert_eq!(l1, l2);
                assert_eq!((p1, q1), (q2, p2));
            }
            _ => panic!("expected matching violations"),
        }
    }

    #[test]
    fn no_shared_labels_means_holds() {
        let m = Lts::assemble(&["a"], &["x"], "p", &[("p", "x", "p")]).unwrap();
        let n = Lts::assemble(&["b"], &["y"], "q", &[("q", "y", "q")]).unwrap();
        let (forward, backward) = check_mutual(&m, &n).unwrap();
        assert!(forward.holds() && backward.holds());
    }

    #[test]
    fn output_free_components_mutually_accept() {
        let m = Lts::assemble(&["a"], &[], "p", &[("p", "a", "p")]).unwrap();
        let n = Lts::assemble(&["a"], &[], "q", &[]).unwrap();
        let (forward, backward) = check_mutual(&m, &n).unwrap();
        assert!(forward.holds() && backward.holds());
    }

    #[test]
    fn mutual_with_self_is_not_composable() {
        let m = sensor_spec();
        assert!(check_mutual(&m, &m).is_err());
    }

    #[test]
    fn input_enabled_receiver_accepts_when_covered() {
        // The receiving side weakly enables every input everywhere, so the
        // accepts condition cannot fail in its direction.
        let receiver = sensor_impl();
        let emitter = autopark_spec();
        assert!(check_accepts(&receiver, &emitter).unwrap().holds());
    }
}
