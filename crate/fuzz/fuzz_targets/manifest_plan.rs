#![no_main]

use entnet::runner::ReplayPlan;
use libfuzzer_sys::fuzz_target;

// Replay starts by reconstructing a run plan from the untrusted manifest
// block of a CSV; arbitrary input must parse or error, never panic.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = ReplayPlan::parse(text);
    }
});
