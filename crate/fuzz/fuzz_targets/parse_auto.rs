#![no_main]

use egsimp::eg::compute_stats;
use egsimp::parse::parse_auto;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(f) = parse_auto(text) {
            compute_stats(&f);
        }
    }
});
