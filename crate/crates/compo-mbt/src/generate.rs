//! Random model generation and the brute-force utraces oracle used by the
//! property harness.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lts::{Lts, RawLts, Trace, DELTA, TAU};

/// Upper bound accepted by [`brute_utraces`]; the enumeration is
/// exponential in the depth.
pub const MAX_BRUTE_DEPTH: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("enumeration depth {0} exceeds the supported maximum of {MAX_BRUTE_DEPTH}")]
pub struct DepthTooLarge(pub usize);

/// Configuration for random model generation. Identical config and seed
/// always yield identical models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_states: usize,
    pub input_count: usize,
    pub output_count: usize,
    pub edge_density: f64,
    pub tau_density: f64,
    /// For pair generation: the chance that one side's output also occurs
    /// among the other side's inputs (a synchronized label).
    pub shared_label_fraction: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_states: 6,
            input_count: 3,
            output_count: 3,
            edge_density: 0.3,
            tau_density: 0.1,
            shared_label_fraction: 0.5,
        }
    }
}

impl GenConfig {
    pub fn with_seed(&self, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..self.clone()
        }
    }
}

/// Deterministic per-sample sub-seed derivation (splitmix64 over the base
/// seed and the sample index), so samples are independent of evaluation
/// order.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15_u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gen_lts_over(
    rng: &mut ChaCha8Rng,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
    cfg: &GenConfig,
) -> Lts {
    let state_count = rng.gen_range(1..=cfg.max_states.max(1));
    let states: Vec<String> = (0..state_count).map(|i| format!("s{i}")).collect();
    let mut raw = RawLts {
        states: states.iter().cloned().collect(),
        inputs: inputs.clone(),
        outputs: outputs.clone(),
        initial: states[0].clone(),
        ..RawLts::default()
    };
    let labels: Vec<&String> = inputs.iter().chain(outputs.iter()).collect();
    for (src_index, src) in states.iter().enumerate() {
        for label in &labels {
            if rng.gen_bool(cfg.edge_density) {
                let dst = &states[rng.gen_range(0..state_count)];
                raw.transitions
                    .insert((src.clone(), (*label).clone(), dst.clone()));
            }
        }
        // τ-edges only from lower to higher index: strong convergence by
        // construction.
        if src_index + 1 < state_count && rng.gen_bool(cfg.tau_density) {
            let dst = &states[rng.gen_range(src_index + 1..state_count)];
            raw.transitions
                .insert((src.clone(), TAU.to_string(), dst.clone()));
        }
    }
    raw.build()
        .expect("generated structure satisfies the invariants")
        .reachable_part()
}

/// A random valid model: strongly convergent by construction, with
/// unreachable states pruned.
pub fn gen_lts(cfg: &GenConfig) -> Lts {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let inputs: BTreeSet<String> = (0..cfg.input_count).map(|i| format!("in{i}")).collect();
    let outputs: BTreeSet<String> = (0..cfg.output_count).map(|i| format!("out{i}")).collect();
    gen_lts_over(&mut rng, &inputs, &outputs, cfg)
}

/// An input alphabet drawn partly from the peer's outputs (shared,
/// synchronizing labels) and padded with fresh private names.
fn pair_inputs(
    rng: &mut ChaCha8Rng,
    fresh_prefix: &str,
    peer_outputs: &BTreeSet<String>,
    cfg: &GenConfig,
) -> BTreeSet<String> {
    let mut inputs: BTreeSet<String> = BTreeSet::new();
    for label in peer_outputs {
        if inputs.len() < cfg.input_count && rng.gen_bool(cfg.shared_label_fraction) {
            inputs.insert(label.clone());
        }
    }
    let mut fresh = 0;
    while inputs.len() < cfg.input_count {
        inputs.insert(format!("{fresh_prefix}{fresh}"));
        fresh += 1;
    }
    inputs
}

/// A random composable pair: disjoint outputs, with a configured fraction
/// of each side's inputs drawn from the other side's outputs.
pub fn gen_composable_pair(cfg: &GenConfig) -> (Lts, Lts) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let left_outputs: BTreeSet<String> = (0..cfg.output_count).map(|i| format!("x{i}")).collect();
    let right_outputs: BTreeSet<String> = (0..cfg.output_count).map(|i| format!("y{i}")).collect();
    let left_inputs = pair_inputs(&mut rng, "a", &right_outputs, cfg);
    let right_inputs = pair_inputs(&mut rng, "b", &left_outputs, cfg);
    let left = gen_lts_over(&mut rng, &left_inputs, &left_outputs, cfg);
    let right = gen_lts_over(&mut rng, &right_inputs, &right_outputs, cfg);
    (left, right)
}

/// A random pairwise-composable triple (pairwise disjoint outputs; inputs
/// may be shared with either peer's outputs).
pub fn gen_composable_triple(cfg: &GenConfig) -> (Lts, Lts, Lts) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let prefixes = ["x", "y", "z"];
    let outputs: Vec<BTreeSet<String>> = prefixes
        .iter()
        .map(|p| (0..cfg.output_count).map(|i| format!("{p}{i}")).collect())
        .collect();
    let mut models = Vec::new();
    for me in 0..3 {
        let mut peer_outputs: BTreeSet<String> = BTreeSet::new();
        for (other, outs) in outputs.iter().enumerate() {
            if other != me {
                peer_outputs.extend(outs.iter().cloned());
            }
        }
        let inputs = pair_inputs(&mut rng, &format!("f{me}_"), &peer_outputs, cfg);
        models.push(gen_lts_over(&mut rng, &inputs, &outputs[me], cfg));
    }
    let mut it = models.into_iter();
    (it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
}

/// An input-enabled extension of `m`: per state and missing (weakly
/// refused) input, either a self-loop or a jump to a random state,
/// seed-determined.
pub fn gen_input_completion(m: &Lts, cfg: &GenConfig) -> Lts {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let states: Vec<String> = m.states().iter().cloned().collect();
    complete(m, |_state, _input| {
        if rng.gen_bool(0.7) {
            None // self-loop
        } else {
            Some(states[rng.gen_range(0..states.len())].clone())
        }
    })
}

/// An input-enabled implementation of `m` seeded with a few extra
/// randomly placed output transitions before input completion, so that
/// conformance failures against `m` actually occur in generated samples.
pub fn gen_faulty_impl(m: &Lts, cfg: &GenConfig) -> Lts {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let states: Vec<String> = m.states().iter().cloned().collect();
    let outputs: Vec<String> = m.outputs().iter().cloned().collect();
    let mut raw = m.raw().clone();
    if !outputs.is_empty() {
        for _ in 0..rng.gen_range(0..=2) {
            let src = states[rng.gen_range(0..states.len())].clone();
            let label = outputs[rng.gen_range(0..outputs.len())].clone();
            let dst = states[rng.gen_range(0..states.len())].clone();
            raw.transitions.insert((src, label, dst));
        }
    }
    let mutated = raw
        .build()
        .expect("adding output transitions between known states keeps the model valid");
    gen_input_completion(&mutated, &cfg.with_seed(sub_seed(cfg.seed, 0x0fau64)))
}

/// The deterministic self-loops-only completion policy.
pub fn complete_with_self_loops(m: &Lts) -> Lts {
    complete(m, |_, _| None)
}

fn complete(m: &Lts, mut target: impl FnMut(&str, &str) -> Option<String>) -> Lts {
    let mut raw = m.raw().clone();
    for state in m.states() {
        for input in m.inputs() {
            if !m.weakly_enables(state, input) {
                let to = target(state, input).unwrap_or_else(|| state.clone());
                raw.transitions.insert((state.clone(), input.clone(), to));
            }
        }
    }
    raw.build()
        .expect("completion only adds input transitions between known states")
}

/// Exhaustive enumeration of the utraces set to the given depth by path
/// exploration over all nondeterministic branches — the independent
/// oracle for the subset construction.
pub fn brute_utraces(m: &Lts, depth: usize) -> Result<BTreeSet<Trace>, DepthTooLarge> {
    if depth > MAX_BRUTE_DEPTH {
        return Err(DepthTooLarge(depth));
    }
    let labels: Vec<String> = {
        let mut l: Vec<String> = m.alphabet().into_iter().collect();
        l.push(DELTA.to_string());
        l.sort();
        l
    };
    let mut result = BTreeSet::new();
    let start = brute_tau_reach(m, m.initial());
    brute_extend(m, &labels, Trace::empty(), &start, depth, &mut result);
    Ok(result)
}

fn brute_extend(
    m: &Lts,
    labels: &[String],
    prefix: Trace,
    reached: &BTreeSet<String>,
    budget: usize,
    result: &mut BTreeSet<Trace>,
) {
    result.insert(prefix.clone());
    if budget == 0 {
        return;
    }
    for label in labels {
        // The input gate of the utraces definition: no reachable state may
        // weakly refuse the input about to be taken.
        if m.inputs().contains(label)
            && reached
                .iter()
                .any(|p| brute_weak_step(m, p, label).is_empty())
        {
            continue;
        }
        let mut next: BTreeSet<String> = BTreeSet::new();
        for p in reached {
            next.extend(brute_weak_step(m, p, label));
        }
        if next.is_empty() {
            continue;
        }
        brute_extend(
            m,
            labels,
            prefix.extended(label.clone()),
            &next,
            budget - 1,
            result,
        );
    }
}

/// States weakly reachable from `state` via τ-edges, by plain recursion
/// (deliberately separate from the ε-closure used elsewhere).
fn brute_tau_reach(m: &Lts, state: &str) -> BTreeSet<String> {
    fn walk(m: &Lts, state: &str, acc: &mut BTreeSet<String>) {
        if !acc.insert(state.to_string()) {
            return;
        }
        for (src, label, dst) in m.transitions() {
            if src == state && label == TAU {
                walk(m, dst, acc);
            }
        }
    }
    let mut acc = BTreeSet::new();
    walk(m, state, &mut acc);
    acc
}

/// One weak observable step from a single state: τ*, the label (or a
/// quiescence observation), τ*.
fn brute_weak_step(m: &Lts, state: &str, label: &str) -> BTreeSet<String> {
    let mut result = BTreeSet::new();
    for p in brute_tau_reach(m, state) {
        if label == DELTA {
            let quiet = !m
                .transitions()
                .iter()
                .any(|(src, l, _)| *src == p && (l == TAU || m.outputs().contains(l)));
            if quiet {
                result.insert(p.clone());
            }
        } else {
            for (src, l, dst) in m.transitions() {
                if *src == p && l == label {
                    result.extend(brute_tau_reach(m, dst));
                }
            }
        }
    }
    result
}
