#![no_main]

use libfuzzer_sys::fuzz_target;
use solvcrypt::{CyclicKeyPair, CyclicPublicKey};

fuzz_target!(|data: &str| {
    if let Ok(kp) = CyclicKeyPair::from_text(data) {
        assert!(CyclicKeyPair::from_text(&kp.to_text()).is_ok());
    }
    let _ = CyclicPublicKey::from_text(data);
});
