#![no_main]

use libfuzzer_sys::fuzz_target;
use solvcrypt::groups::{self, TableGroup};

fuzz_target!(|data: &str| {
    if let Ok(g) = TableGroup::from_text(data) {
        let _ = groups::derived_series(&g);
    }
});
