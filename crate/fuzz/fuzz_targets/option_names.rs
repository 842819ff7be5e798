#![no_main]

use libfuzzer_sys::fuzz_target;
use shellgap::bench::{OutputFormat, TableId};
use shellgap::optimizer::Family;
use shellgap::CostKind;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = text.parse::<CostKind>();
    let _ = text.parse::<OutputFormat>();
    let _ = text.parse::<TableId>();
    let _ = text.parse::<Family>();
});
