#![no_main]

use egsimp::eg::compute_stats;
use egsimp::engine::{simplify, EngineConfig};
use egsimp::oracle::equiv_check;
use egsimp::parse::parse_pl;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // each <-> doubles the tree; large expansions only measure the parser
    if text.matches("<->").count() > 4 {
        return;
    }
    let Ok(f) = parse_pl(text) else {
        return;
    };
    let st = compute_stats(&f);
    if st.variables > 10 || st.literals > 60 {
        return;
    }
    let cfg = EngineConfig {
        oracle_check_every_step: true,
        ..EngineConfig::default()
    };
    let r = simplify(&f, &cfg).expect("simplify");
    assert!(equiv_check(&f, &r.formula, &r.classes).unwrap());
    let again = simplify(&r.formula, &cfg).expect("simplify");
    assert!(
        again.formula.equal_canonical(&r.formula),
        "not a fixpoint: {text}"
    );
});
