#![no_main]

use libfuzzer_sys::fuzz_target;
use solvcrypt::SemidirectSpec;

fuzz_target!(|data: &str| {
    if let Ok(spec) = SemidirectSpec::from_text(data) {
        assert_eq!(SemidirectSpec::from_text(&spec.to_text()).unwrap(), spec);
    }
});
