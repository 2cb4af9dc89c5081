//! Fuzzes the model-file parser: arbitrary text must never panic, and
//! anything that parses into valid models must survive a canonical
//! serialize/parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

use compo_mbt::format::{parse, serialize};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(models) = parse(text) else {
        return;
    };
    let canonical = serialize(&models);
    let reparsed = parse(&canonical).expect("canonical output must parse");
    assert_eq!(
        serialize(&reparsed),
        canonical,
        "round trip must be a fixpoint"
    );
});
