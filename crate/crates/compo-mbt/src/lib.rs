//! A library and command-line workbench for compositional model-based
//! testing over finite labelled transition systems: parallel composition
//! of component models, uioco conformance with shortest counterexamples,
//! the mutual-acceptance compatibility relation, and diagnosis of
//! system-level failures by trace projection.

pub mod acceptance;
pub mod compose;
pub mod diagnosis;
pub mod format;
pub mod generate;
pub mod lts;
pub mod models;
pub mod properties;
pub mod suspension;

pub use acceptance::{check_accepts, check_mutual, AcceptanceVerdict};
pub use compose::{composable, compose, compose_pairs, isomorphic, rename_output, Composition};
pub use diagnosis::{diagnose, project, DiagnosisReport};
pub use format::{export_dot, parse, serialize};
pub use generate::{brute_utraces, gen_composable_pair, gen_input_completion, gen_lts, GenConfig};
pub use lts::{Lts, RawLts, StateSet, Trace, ValidationReport, DELTA, TAU};
pub use properties::{run_property, PropertyReport};
pub use suspension::{check_uioco, det_suspension, input_enabled, utraces_contains, UiocoVerdict};
