#![no_main]

use egsimp::eg::Names;
use egsimp::rules::EquivClasses;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    let mut names = Names::new();
    if let Some(classes) = EquivClasses::from_json(&value, &mut names) {
        let back =
            EquivClasses::from_json(&classes.to_json(&names), &mut names).expect("round trip");
        assert_eq!(back, classes);
    }
});
