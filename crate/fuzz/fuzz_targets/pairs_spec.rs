#![no_main]

use libfuzzer_sys::fuzz_target;

// --pairs takes "i-j[,i-j...]" from the command line.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = entnet::runner::parse_pairs(text);
    }
});
