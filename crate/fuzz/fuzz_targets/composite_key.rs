#![no_main]

use libfuzzer_sys::fuzz_target;
use solvcrypt::{CompositeKeyPair, CompositePublicKey};

fuzz_target!(|data: &str| {
    if let Ok(pk) = CompositePublicKey::from_text(data) {
        assert_eq!(CompositePublicKey::from_text(&pk.to_text()).unwrap(), pk);
    }
    let _ = CompositeKeyPair::from_text(data);
});
