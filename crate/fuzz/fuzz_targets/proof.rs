#![no_main]

use libfuzzer_sys::fuzz_target;
use solvcrypt::{fixtures, proof};
use std::sync::OnceLock;

static KEY: OnceLock<solvcrypt::CompositeKeyPair> = OnceLock::new();

fuzz_target!(|data: &str| {
    let g = KEY.get_or_init(fixtures::s3_keypair).public.ciphertext_group();
    if let Ok(pf) = proof::Proof::from_text(g, data) {
        let _ = proof::eval_proof(g, &pf);
    }
});
