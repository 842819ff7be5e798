#![no_main]

use libfuzzer_sys::fuzz_target;
use shellgap::optimizer::{Family, GridSpec, TemplateParams};

fuzz_target!(|data: &[u8]| {
    let Some((&flag, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let family = if flag & 1 == 0 { Family::A } else { Family::B };
    if let Ok(spec) = GridSpec::parse(family, text) {
        assert!(spec.validate().is_ok());
        let count = spec.cardinality();
        if count > 0 {
            let t = spec.tuple(count - 1);
            let _ = TemplateParams::from_tuple(family, &t).generate(1000);
        }
    }
});
