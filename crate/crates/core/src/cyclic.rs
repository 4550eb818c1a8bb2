//! The homomorphic cryptosystem over `Z_m^+` for a prime `m`.
//!
//! The ciphertext group is `Z_n^*` with `n = pq`. The secret epimorphism
//! `f: Z_n^* -> Z_m^+` sends `g` to the index `i` with
//! `g_p^{(p-1)/m} = (s_p^{(p-1)/m})^i (mod p)`, so the m-th powers form its
//! kernel. The public key lists one representative per coset, and a
//! plaintext `h` is encrypted as `a^m * reps[h]` for a random unit `a`.
//!
//! For `m = 2` the construction is the quadratic-residue system: plaintext
//! and ciphertexts live in the Jacobi-one subgroup `J_n` and `reps = [1, g0]`
//! for a non-square `g0` with Jacobi symbol one.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::numtheory::{self, ModulusParams, NumError};
use crate::text::{self, FormatError, Lines};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("plaintext {h} out of range for Z_{m}")]
    PlaintextRange { h: u32, m: u32 },
    #[error("no coset representative matches the ciphertext (corrupted ciphertext or wrong key)")]
    NoIndex,
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Public half: modulus, plaintext order and one coset representative per
/// plaintext, position `i` encoding plaintext `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPublicKey {
    pub m: u32,
    pub n: BigUint,
    pub reps: Vec<BigUint>,
}

/// Secret half: the factorization and the seed `s` fixing `f(s) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSecretKey {
    pub p: BigUint,
    pub q: BigUint,
    pub s: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicKeyPair {
    pub public: CyclicPublicKey,
    pub secret: CyclicSecretKey,
    params: ModulusParams,
    /// `s_p^{(p-1)/m} mod p`, a primitive m-th root of unity.
    zeta: BigUint,
}

/// How the representative multipliers `t_i` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepMode {
    /// Fresh random units.
    #[default]
    Random,
    /// `t_i = 1`, so `reps[i] = s^i`.
    Unit,
}

impl CyclicPublicKey {
    /// Structural checks that need no secret: prime `m`, odd composite
    /// modulus, `m` units as representatives.
    pub fn validate(&self) -> Result<(), CyclicError> {
        if !numtheory::is_small_prime(self.m) {
            return Err(CyclicError::InvalidKey(format!("m = {} is not prime", self.m)));
        }
        if self.n < BigUint::from(15u32) || self.n.is_even() {
            return Err(CyclicError::InvalidKey("modulus must be an odd composite".into()));
        }
        if self.reps.len() != self.m as usize {
            return Err(CyclicError::InvalidKey(format!(
                "expected {} representatives, got {}",
                self.m,
                self.reps.len()
            )));
        }
        if let Some(r) = self.reps.iter().find(|r| !numtheory::is_unit(r, &self.n)) {
            return Err(CyclicError::InvalidKey(format!("representative {r} is not a unit")));
        }
        Ok(())
    }

    /// `a^m * reps[h] mod n` for a fresh random unit `a`.
    pub fn encrypt<R: Rng + ?Sized>(&self, h: u32, rng: &mut R) -> Result<BigUint, CyclicError> {
        let a = numtheory::random_unit(&self.n, rng);
        self.encrypt_with(h, &a)
    }

    /// Encryption with an explicit blinding unit `a`.
    pub fn encrypt_with(&self, h: u32, a: &BigUint) -> Result<BigUint, CyclicError> {
        if h >= self.m {
            return Err(CyclicError::PlaintextRange { h, m: self.m });
        }
        let a = a % &self.n;
        if !numtheory::is_unit(&a, &self.n) {
            return Err(NumError::NotUnit(a).into());
        }
        Ok(self.power(&a) * &self.reps[h as usize] % &self.n)
    }

    /// The public map `P(a) = a^m mod n`.
    pub fn power(&self, a: &BigUint) -> BigUint {
        a.modpow(&BigUint::from(self.m), &self.n)
    }

    /// The group operation on ciphertexts.
    pub fn multiply(&self, c1: &BigUint, c2: &BigUint) -> BigUint {
        c1 * c2 % &self.n
    }

    /// Inverse in `Z_n^*`, if `c` is a unit.
    pub fn invert(&self, c: &BigUint) -> Option<BigUint> {
        numtheory::mod_inverse(c, &self.n)
    }

    /// Whether `g` belongs to the ciphertext group: a unit, and for `m = 2`
    /// also of Jacobi symbol one.
    pub fn contains(&self, g: &BigUint) -> bool {
        if !numtheory::is_unit(g, &self.n) {
            return false;
        }
        self.m != 2 || numtheory::jacobi_u(g, &self.n) == Ok(1)
    }

    pub fn to_text(&self) -> String {
        let reps: Vec<String> = self.reps.iter().map(text::to_hex).collect();
        format!("CYCKEY v1\nm={}\nn={}\nreps={}\n", self.m, text::to_hex(&self.n), reps.join(","))
    }

    pub fn from_text(s: &str) -> Result<Self, CyclicError> {
        let mut lines = Lines::new(s);
        let (pk, sk) = parse_block(&mut lines)?;
        if sk.is_some() {
            return Err(FormatError::Invalid("secret fields in a public key".into()).into());
        }
        finish(&lines)?;
        Ok(pk)
    }
}

impl CyclicKeyPair {
    /// Assembles and fully validates a key pair from known parts.
    pub fn from_parts(m: u32, p: BigUint, q: BigUint, s: BigUint, reps: Vec<BigUint>) -> Result<Self, CyclicError> {
        let params = ModulusParams::from_primes(m, p.clone(), q.clone())?;
        let public = CyclicPublicKey { m, n: params.n.clone(), reps };
        public.validate()?;
        let s = s % &params.n;
        let e = (&params.p - 1u32) / BigUint::from(m);
        let zeta = (&s % &params.p).modpow(&e, &params.p);
        if zeta.is_one() || !numtheory::is_unit(&s, &params.n) {
            return Err(CyclicError::InvalidKey("s is an m-th power mod p".into()));
        }
        let kp = CyclicKeyPair { public, secret: CyclicSecretKey { p, q, s }, params, zeta };
        kp.check_reps()?;
        Ok(kp)
    }

    fn check_reps(&self) -> Result<(), CyclicError> {
        let m = self.public.m;
        if m == 2 {
            let g0 = &self.secret.s;
            if numtheory::jacobi_u(g0, &self.params.n)? != 1 || numtheory::residue_test(g0, &self.params)? {
                return Err(CyclicError::InvalidKey("g0 must be a non-square of Jacobi symbol 1".into()));
            }
        }
        for (i, r) in self.public.reps.iter().enumerate() {
            if !self.public.contains(r) {
                return Err(CyclicError::InvalidKey(format!("representative {i} outside the ciphertext group")));
            }
            if self.coset_index(r)? != i as u32 {
                return Err(CyclicError::InvalidKey(format!("representative {i} lies in the wrong coset")));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &ModulusParams {
        &self.params
    }

    pub fn m(&self) -> u32 {
        self.public.m
    }

    /// The secret epimorphism `f: Z_n^* -> Z_m^+`.
    ///
    /// Only the `p` component is inspected, which makes `f` a homomorphism
    /// on all of `Z_n^*`; for `m = 2` it is the Legendre symbol modulo `p`.
    pub fn coset_index(&self, g: &BigUint) -> Result<u32, CyclicError> {
        let p = &self.params.p;
        let g = g % &self.params.n;
        if !numtheory::is_unit(&g, &self.params.n) {
            return Err(NumError::NotUnit(g).into());
        }
        let e = (p - 1u32) / BigUint::from(self.public.m);
        let x = (&g % p).modpow(&e, p);
        let mut acc = BigUint::one();
        for i in 0..self.public.m {
            if acc == x {
                return Ok(i);
            }
            acc = acc * &self.zeta % p;
        }
        Err(CyclicError::NoIndex)
    }

    /// The unique `i` such that `c * reps[i]^{-1}` is an m-th power.
    pub fn decrypt(&self, c: &BigUint) -> Result<u32, CyclicError> {
        let c = c % &self.params.n;
        if !numtheory::is_unit(&c, &self.params.n) {
            return Err(NumError::NotUnit(c).into());
        }
        for (i, r) in self.public.reps.iter().enumerate() {
            let r_inv = numtheory::mod_inverse(r, &self.params.n).ok_or(CyclicError::NoIndex)?;
            if numtheory::residue_test(&(&c * r_inv % &self.params.n), &self.params)? {
                return Ok(i as u32);
            }
        }
        Err(CyclicError::NoIndex)
    }

    /// Some `a` with `P(a) = g`, when `g` lies in the kernel.
    pub fn kernel_witness<R: Rng + ?Sized>(&self, g: &BigUint, rng: &mut R) -> Result<Option<BigUint>, CyclicError> {
        if !self.public.contains(g) {
            return Ok(None);
        }
        Ok(numtheory::mth_root_mod_n(g, &self.params, rng)?)
    }

    /// Public block followed by `p=`, `q=`, `s=`.
    pub fn to_text(&self) -> String {
        let mut out = self.public.to_text();
        out.push_str(&format!(
            "p={}\nq={}\ns={}\n",
            text::to_hex(&self.secret.p),
            text::to_hex(&self.secret.q),
            text::to_hex(&self.secret.s)
        ));
        out
    }

    pub fn from_text(s: &str) -> Result<Self, CyclicError> {
        let mut lines = Lines::new(s);
        let (_, sk) = parse_block(&mut lines)?;
        finish(&lines)?;
        sk.ok_or_else(|| FormatError::Truncated("secret fields p=, q=, s=".into()).into())
    }
}

fn finish(lines: &Lines<'_>) -> Result<(), CyclicError> {
    if lines.is_done() {
        Ok(())
    } else {
        Err(FormatError::syntax(lines.line_no(), "trailing data").into())
    }
}

/// Parses one `CYCKEY v1` block; secret fields are read when present.
pub(crate) fn parse_block(lines: &mut Lines<'_>) -> Result<(CyclicPublicKey, Option<CyclicKeyPair>), CyclicError> {
    lines.expect_exact("CYCKEY v1")?;
    let (no, m) = lines.expect_kv("m")?;
    let m: u32 = text::parse_dec(m).map_err(|_| FormatError::syntax(no, "bad m"))?;
    let (_, n) = lines.expect_kv("n")?;
    let n = text::parse_hex(n)?;
    let (no, reps) = lines.expect_kv("reps")?;
    let reps = text::split_list(reps)
        .map_err(|e| FormatError::syntax(no, e.to_string()))?
        .into_iter()
        .map(text::parse_hex)
        .collect::<Result<Vec<_>, _>>()?;
    let pk = CyclicPublicKey { m, n, reps };
    pk.validate()?;
    if !lines.peek().is_some_and(|l| l.starts_with("p=")) {
        return Ok((pk, None));
    }
    let p = text::parse_hex(lines.expect_kv("p")?.1)?;
    let q = text::parse_hex(lines.expect_kv("q")?.1)?;
    let s = text::parse_hex(lines.expect_kv("s")?.1)?;
    let kp = CyclicKeyPair::from_parts(m, p, q, s, pk.reps.clone())?;
    if kp.public.n != pk.n {
        return Err(CyclicError::InvalidKey("n != p * q".into()));
    }
    Ok((pk, Some(kp)))
}

/// Generates a key pair with random `t_i`.
pub fn keygen_cyclic<R: Rng + ?Sized>(m: u32, bits: u32, rng: &mut R) -> Result<CyclicKeyPair, CyclicError> {
    keygen_cyclic_with(m, bits, RepMode::Random, rng)
}

/// Generates a key pair, choosing the representative multipliers per `mode`.
pub fn keygen_cyclic_with<R: Rng + ?Sized>(
    m: u32,
    bits: u32,
    mode: RepMode,
    rng: &mut R,
) -> Result<CyclicKeyPair, CyclicError> {
    let params = numtheory::find_modulus(bits, m, rng)?;
    keygen_from_params(params, mode, rng)
}

/// Key generation over already chosen parameters.
pub fn keygen_from_params<R: Rng + ?Sized>(
    params: ModulusParams,
    mode: RepMode,
    rng: &mut R,
) -> Result<CyclicKeyPair, CyclicError> {
    let m = params.m;
    let n = &params.n;
    let s = if m == 2 {
        loop {
            let g = numtheory::random_unit(n, rng);
            if numtheory::jacobi_u(&g, n)? == 1 && !numtheory::residue_test(&g, &params)? {
                break g;
            }
        }
    } else {
        let e = (&params.p - 1u32) / BigUint::from(m);
        let s_p = loop {
            let x = numtheory::random_unit(&params.p, rng);
            if !x.modpow(&e, &params.p).is_one() {
                break x;
            }
        };
        let s_q = numtheory::random_unit(&params.q, rng);
        numtheory::crt_combine(&s_p, &params.p, &s_q, &params.q)?
    };
    let mb = BigUint::from(m);
    let mut reps = Vec::with_capacity(m as usize);
    let mut s_pow = BigUint::one();
    for _ in 0..m {
        let t = match mode {
            RepMode::Random => numtheory::random_unit(n, rng),
            RepMode::Unit => BigUint::one(),
        };
        reps.push(&s_pow * t.modpow(&mb, n) % n);
        s_pow = s_pow * &s % n;
    }
    debug_assert!(!reps.iter().any(Zero::is_zero));
    CyclicKeyPair::from_parts(m, params.p, params.q, s, reps)
}
