#![no_main]

use libfuzzer_sys::fuzz_target;
use solvcrypt::fixtures;
use std::sync::OnceLock;

static KEY: OnceLock<solvcrypt::CompositeKeyPair> = OnceLock::new();

fuzz_target!(|data: &str| {
    let kp = KEY.get_or_init(fixtures::s3_keypair);
    let g = kp.public.ciphertext_group();
    if let Ok(w) = g.parse_word(data) {
        assert_eq!(g.parse_word(&g.format_word(&w)).unwrap(), w);
        let _ = kp.lift(&w);
    }
    let _ = g.parse_raw(data);
});
