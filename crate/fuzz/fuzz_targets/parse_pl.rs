#![no_main]

use egsimp::parse::parse_pl;
use egsimp::render::render_pl;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_pl(text) {
        let again = parse_pl(&render_pl(&f)).expect("rendered text parses");
        let mut names = f.names().clone();
        assert!(again.remap_into(&mut names).equal_canonical(&f));
    }
});
