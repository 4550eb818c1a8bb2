#![no_main]

use libfuzzer_sys::fuzz_target;
use solvcrypt::{fixtures, Ciphertext};
use std::sync::OnceLock;

static KEY: OnceLock<solvcrypt::CompositeKeyPair> = OnceLock::new();

fuzz_target!(|data: &str| {
    let kp = KEY.get_or_init(fixtures::s3_keypair);
    if let Ok(c) = Ciphertext::from_text(data, &kp.public) {
        let _ = kp.decrypt(&c);
    }
});
