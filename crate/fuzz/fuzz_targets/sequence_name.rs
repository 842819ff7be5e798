#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(name) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(strategy) = shellgap::resolve(name) {
        let _ = strategy.warnings();
        if let Ok(gaps) = strategy.gaps_for(n as usize * 16) {
            assert_eq!(gaps.gaps().first(), Some(&1));
            assert!(gaps.gaps().windows(2).all(|w| w[0] < w[1]));
        }
    }
});
