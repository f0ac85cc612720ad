#![no_main]

use libfuzzer_sys::fuzz_target;
use rqc_core::text::{emit, parse};

// Anything that parses must survive emit and re-parse unchanged, and the
// emitted text is a fixed point.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(c) = parse(text) else { return };
    let canonical = emit(&c);
    let back = parse(&canonical).expect("emitted text parses");
    assert_eq!(back.num_qubits, c.num_qubits);
    assert_eq!(back.gates, c.gates);
    assert_eq!(emit(&back), canonical);
});
