//! Fuzzes the dot-separated trace parser: arbitrary text must never
//! panic, and accepted traces must round-trip through display.

#![no_main]

use libfuzzer_sys::fuzz_target;

use compo_mbt::lts::Trace;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(trace) = text.parse::<Trace>() else {
        return;
    };
    if !trace.is_empty() {
        let shown = trace.to_string();
        let back: Trace = shown.parse().expect("displayed traces must parse");
        assert_eq!(back, trace, "display/parse must round-trip");
    }
});
