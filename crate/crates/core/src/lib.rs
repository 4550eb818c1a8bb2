//! Homomorphic public-key encryption over finite solvable groups.
//!
//! Plaintexts are elements of a small finite group `H`; ciphertexts are
//! canonical words in a free product `G = G_1 * ... * G_m` of residue groups
//! `Z_{n_i}^*`. Multiplying ciphertexts in `G` decrypts to multiplication in
//! `H`.
//!
//! The crate is layered bottom-up:
//!
//! * [`numtheory`]: modulus search, CRT, residue tests, m-th roots and the
//!   factoring reduction from a root oracle.
//! * [`cyclic`]: the cryptosystem over `Z_m^+` for a prime `m`.
//! * [`free_product`]: canonical words, the lifted epimorphism and the
//!   representative transversal.
//! * [`proof`]: elementary transformations and kernel-membership proofs.
//! * [`groups`]: finite groups by multiplication table, layered semidirect
//!   products, series, wreath embeddings and the solvable-group pipeline.
//! * [`composite`]: the full cryptosystem over a layered semidirect product and
//!   its restriction to subgroups.
//! * [`fixtures`]: small keys with hand-checkable numbers.

pub mod composite;
pub mod cyclic;
pub mod fixtures;
pub mod free_product;
pub mod groups;
pub mod numtheory;
pub mod proof;
pub mod text;

pub use composite::{Ciphertext, CompositeKeyPair, CompositePublicKey};
pub use cyclic::{CyclicKeyPair, CyclicPublicKey, CyclicSecretKey};
pub use free_product::{FactorGroup, FreeProduct, Letter, Word};
pub use groups::{GroupEmbedding, SemidirectGroup, SemidirectSpec, TableGroup};
pub use numtheory::ModulusParams;
pub use text::FormatError;
