//! Projection of system-level counterexamples onto components and fault
//! attribution.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::compose::{compose_pairs, ComposeError};
use crate::lts::{Lts, Trace, DELTA};
use crate::suspension::utraces_contains;

/// Which operand of the composition an attribution points at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentId {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentVerdict {
    /// The projected trace demonstrates a component-level conformance
    /// failure of the provided implementation against its specification.
    ConfirmedCounterexample,
    /// No implementation was provided (or it does not exhibit the fault);
    /// the projected trace is a candidate, not a proof.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// A non-δ offending output belongs to exactly one component.
    UniqueOutputOwner,
    /// Offending quiescence is replayed through both projections.
    QuiescenceReplay,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attribution {
    pub component: ComponentId,
    pub projected: Trace,
    pub verdict: ComponentVerdict,
}

/// Attribution of a system-level counterexample to component(s), each
/// with its projected component-level trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosisReport {
    pub system_trace: Trace,
    pub offending: String,
    pub method: Method,
    pub attributed: Vec<Attribution>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagnoseError {
    #[error(transparent)]
    NotComposable(#[from] ComposeError),
    #[error("trace is not a utrace of the composed specification")]
    NotAUtrace,
    #[error("`{0}` is not an output (or delta) of the composed system")]
    UnknownLabel(String),
    #[error("an implementation's alphabet differs from its specification's")]
    AlphabetMismatch,
    #[error("not a counterexample: {0}")]
    NotACounterexample(String),
}

/// Restriction of a trace to a sub-alphabet, preserving order. Pass an
/// alphabet that includes `delta` (see [`delta_alphabet`]) to keep
/// quiescence observations.
pub fn project(sigma: &Trace, alphabet: &BTreeSet<String>) -> Trace {
    Trace(
        sigma
            .labels()
            .iter()
            .filter(|l| alphabet.contains(*l))
            .cloned()
            .collect(),
    )
}

/// A component's projection alphabet: its labels plus `delta`.
pub fn delta_alphabet(m: &Lts) -> BTreeSet<String> {
    let mut alphabet = m.alphabet();
    alphabet.insert(DELTA.to_string());
    alphabet
}

/// Attributes a counterexample against `compose(s, e)` to the component
/// level. `sigma` must be a utrace of the composed specification and
/// `offending` an output (or `delta`) the composed specification forbids
/// after it. For a non-δ offending label the unique owner is attributed;
/// for δ both projections are replayed and every component whose
/// specification forbids quiescence is a candidate. Implementations,
/// when provided, confirm (or narrow) the attribution by replaying the
/// projected traces.
pub fn diagnose(
    s: &Lts,
    e: &Lts,
    sigma: &Trace,
    offending: &str,
    impl_s: Option<&Lts>,
    impl_e: Option<&Lts>,
) -> Result<DiagnosisReport, DiagnoseError> {
    let composition = compose_pairs(s, e)?;
    let c = &composition.lts;

    for (spec, imp) in [(s, impl_s), (e, impl_e)] {
        if let Some(imp) = imp {
            if imp.inputs() != spec.inputs() || imp.outputs() != spec.outputs() {
                return Err(DiagnoseError::AlphabetMismatch);
            }
        }
    }
    match utraces_contains(c, sigma) {
        Ok(true) => {}
        Ok(false) => return Err(DiagnoseError::NotAUtrace),
        Err(crate::lts::CoreError::UnknownLabel(l)) => return Err(DiagnoseError::UnknownLabel(l)),
        Err(crate::lts::CoreError::EmptySet) => unreachable!("membership never sees empty sets"),
    }
    if offending != DELTA && !c.outputs().contains(offending) {
        return Err(DiagnoseError::UnknownLabel(offending.to_string()));
    }
    let spec_after = c.after_initial(sigma).expect("labels checked above");
    if c.outs(&spec_after).contains(offending) {
        return Err(DiagnoseError::NotACounterexample(format!(
            "the composed specification allows `{offending}` after the trace"
        )));
    }
    if let (Some(is), Some(ie)) = (impl_s, impl_e) {
        // With both implementations at hand the premise is checked fully:
        // the composed implementation must actually exhibit the output.
        let composed_impl = crate::compose::compose(is, ie)?;
        let impl_after = composed_impl
            .after_initial(sigma)
            .map_err(|_| DiagnoseError::NotACounterexample("trace not in impl alphabet".into()))?;
        if !composed_impl.outs(&impl_after).contains(offending) {
            return Err(DiagnoseError::NotACounterexample(format!(
                "the composed implementation cannot produce `{offending}` after the trace"
            )));
        }
    }

    let sides: [(ComponentId, &Lts, Option<&Lts>); 2] = [
        (ComponentId::Left, s, impl_s),
        (ComponentId::Right, e, impl_e),
    ];

    if offending != DELTA {
        let (component, spec, imp) = sides
            .iter()
            .find(|(_, spec, _)| spec.outputs().contains(offending))
            .map(|(id, spec, imp)| (*id, *spec, *imp))
            .expect("composed outputs are the union of component outputs");
        let projected = project(sigma, &delta_alphabet(spec));
        let verdict = match imp {
            Some(imp) => {
                let impl_outs = imp.outs(&imp.after_initial(&projected).map_err(|_| {
                    DiagnoseError::NotACounterexample("projection not in impl alphabet".into())
                })?);
                let spec_outs = spec.outs(&spec.after_initial(&projected).expect("same alphabet"));
                if impl_outs.is_subset(&spec_outs) {
                    ComponentVerdict::Inconclusive
                } else {
                    ComponentVerdict::ConfirmedCounterexample
                }
            }
            None => ComponentVerdict::Inconclusive,
        };
        return Ok(DiagnosisReport {
            system_trace: sigma.clone(),
            offending: offending.to_string(),
            method: Method::UniqueOutputOwner,
            attributed: vec![Attribution {
                component,
                projected,
                verdict,
            }],
        });
    }

    // Offending quiescence: replay both projections. A component is a
    // candidate when its specification forbids δ after its projection;
    // provided implementations narrow the candidates to those actually
    // quiescent after the projection.
    let mut attributed = Vec::new();
    for (component, spec, imp) in sides.iter().map(|(id, spec, imp)| (*id, *spec, *imp)) {
        let projected = project(sigma, &delta_alphabet(spec));
        let reached = spec.after_initial(&projected).expect("component alphabet");
        if reached.is_empty() || spec.outs(&reached).contains(DELTA) {
            continue; // spec allows (or never reaches) quiescence here
        }
        let verdict = match imp {
            Some(imp) => {
                let impl_reached = imp.after_initial(&projected).map_err(|_| {
                    DiagnoseError::NotACounterexample("projection not in impl alphabet".into())
                })?;
                if imp.outs(&impl_reached).contains(DELTA) {
                    ComponentVerdict::ConfirmedCounterexample
                } else {
                    continue; // impl not quiescent here: narrowed away
                }
            }
            None => ComponentVerdict::Inconclusive,
        };
        attributed.push(Attribution {
            component,
            projected,
            verdict,
        });
    }
    Ok(DiagnosisReport {
        system_trace: sigma.clone(),
        offending: DELTA.to_string(),
        method: Method::QuiescenceReplay,
        attributed,
    })
}
