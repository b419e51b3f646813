#![no_main]

use libfuzzer_sys::fuzz_target;

// The replay check re-reads emitted CSV bodies.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = entnet::runner::parse_csv(text);
    }
});
