//! Desk-scale keys with hand-checkable numbers: `n = 77 = 7 · 11` for
//! `m = 3` and `n = 21 = 3 · 7` for `m = 2`.

use num_bigint::BigUint;

use crate::composite::{CompositeKeyPair, DEFAULT_BLINDING};
use crate::cyclic::CyclicKeyPair;
use crate::groups::builtin;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `m = 3`, `n = 77`, `s = 45`, representatives `1, 45, 23`.
pub fn cyclic_77() -> CyclicKeyPair {
    CyclicKeyPair::from_parts(3, big(7), big(11), big(45), vec![big(1), big(45), big(23)]).expect("valid fixture")
}

/// `m = 2`, `n = 21`, `g0 = 20`, representatives `1, 20`.
pub fn cyclic_21() -> CyclicKeyPair {
    CyclicKeyPair::from_parts(2, big(3), big(7), big(20), vec![big(1), big(20)]).expect("valid fixture")
}

/// The composite system over `S3 = Π(Z3, Z2)` built from the two keys
/// above, with the default blinding length.
pub fn s3_keypair() -> CompositeKeyPair {
    CompositeKeyPair::from_parts(builtin::s3_spec(), vec![cyclic_77(), cyclic_21()], DEFAULT_BLINDING)
        .expect("valid fixture")
}
