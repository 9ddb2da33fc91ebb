#![no_main]

use egsimp::parse::{parse_dimacs, read_dimacs_clauses};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let clauses = read_dimacs_clauses(text);
    let formula = parse_dimacs(text);
    assert_eq!(clauses.is_ok(), formula.is_ok());
});
