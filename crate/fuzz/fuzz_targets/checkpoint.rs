#![no_main]

use libfuzzer_sys::fuzz_target;
use shellgap::optimizer::Checkpoint;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ck) = Checkpoint::from_json(text) {
        if let Ok(json) = ck.to_json() {
            let _ = Checkpoint::from_json(&json);
        }
    }
});
