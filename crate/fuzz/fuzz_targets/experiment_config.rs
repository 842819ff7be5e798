#![no_main]

use libfuzzer_sys::fuzz_target;
use shellgap::bench::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ExperimentConfig::from_json(text) {
        assert!(cfg.validate().is_ok());
        let again = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&again).unwrap(), cfg);
    }
});
