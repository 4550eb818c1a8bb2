//! Arbitrary-precision number theory: modulus search, CRT, residue tests,
//! m-th roots modulo primes and composites, and the reduction of factoring
//! to an m-th root oracle.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Below this many bits the desk-scale relaxation of the modulus invariants
/// applies, so that brute-forceable fixtures such as `77 = 7 * 11` exist.
pub const DESK_SCALE_BITS: u32 = 16;

/// Miller-Rabin rounds for random bases; `4^-40 = 2^-80`.
const MR_ROUNDS: usize = 40;

/// Non-residue draws before root finding gives up (each draw fails with
/// probability at most `1/m <= 1/2`).
pub const DEFAULT_NONRESIDUE_DRAWS: usize = 128;

const SMALL_PRIMES: [u32; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("no modulus found after {attempts} candidates (bits={bits}, m={m}); bit length too small for m?")]
    SearchExhausted { bits: u32, m: u32, attempts: usize },
    #[error("moduli are not coprime")]
    NotCoprime,
    #[error("{0} is not a unit modulo the key modulus")]
    NotUnit(BigUint),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("root oracle returned a value that is not an m-th root")]
    OracleFailure,
    #[error("factoring gave up after {0} iterations")]
    BudgetExceeded(usize),
    #[error("Jacobi symbol needs an odd modulus >= 3")]
    BadJacobiModulus,
    #[error("no m-th power non-residue found after {0} draws")]
    NonResidueSearch(usize),
}

/// Public and secret modulus material for one cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusParams {
    /// Requested prime bit length.
    pub bits: u32,
    /// Plaintext order (a small prime).
    pub m: u32,
    pub p: BigUint,
    pub q: BigUint,
    pub n: BigUint,
}

impl ModulusParams {
    /// Builds parameters from known primes, checking the congruence
    /// conditions (`m | p-1`, `gcd(m, q-1) = 1` for odd `m`; distinct odd
    /// primes for `m = 2`) and `p < q`. Primality itself is not re-tested.
    pub fn from_primes(m: u32, p: BigUint, q: BigUint) -> Result<Self, NumError> {
        if !is_small_prime(m) {
            return Err(NumError::InvalidParameter(format!("m = {m} is not prime")));
        }
        let three = BigUint::from(3u32);
        if p < three || q < three || p.is_even() || q.is_even() {
            return Err(NumError::InvalidParameter("p and q must be odd primes".into()));
        }
        if p >= q {
            return Err(NumError::InvalidParameter("p < q required".into()));
        }
        if m != 2 {
            let mb = BigUint::from(m);
            let one = BigUint::one();
            if !((&p - &one) % &mb).is_zero() {
                return Err(NumError::InvalidParameter("m must divide p - 1".into()));
            }
            if !(&q - &one).gcd(&mb).is_one() {
                return Err(NumError::InvalidParameter("gcd(m, q - 1) must be 1".into()));
            }
        }
        let n = &p * &q;
        let bits = q.bits() as u32;
        Ok(ModulusParams { bits, m, p, q, n })
    }

    /// Checks every invariant including probabilistic primality and the bit
    /// length rule for `self.bits`.
    pub fn check<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(), NumError> {
        let rebuilt = ModulusParams::from_primes(self.m, self.p.clone(), self.q.clone())?;
        if rebuilt.n != self.n {
            return Err(NumError::InvalidParameter("n != p * q".into()));
        }
        if !is_probable_prime(&self.p, rng) || !is_probable_prime(&self.q, rng) {
            return Err(NumError::InvalidParameter("p or q is composite".into()));
        }
        let (lo, hi) = bit_window(self.bits);
        for x in [&self.p, &self.q] {
            let b = x.bits();
            if b < lo || b > hi {
                return Err(NumError::InvalidParameter(format!("prime of {b} bits outside [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// Allowed bit lengths for primes when `bits` is requested.
fn bit_window(bits: u32) -> (u64, u64) {
    if bits < DESK_SCALE_BITS {
        (2, u64::from(bits) + 1)
    } else {
        (u64::from(bits), u64::from(bits))
    }
}

pub(crate) fn is_small_prime(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Probabilistic primality test with error at most `2^-80`.
///
/// Inputs below `2^64` use a deterministic base set, larger inputs use 40
/// random Miller-Rabin bases.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &sp in SMALL_PRIMES.iter() {
        let sp = BigUint::from(sp);
        if n == &sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    if n.bits() <= 64 {
        return SMALL_PRIMES[..12].iter().all(|&a| !witness(&BigUint::from(a)));
    }
    let two = BigUint::from(2u32);
    (0..MR_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        !witness(&a)
    })
}

/// Searches for parameters with the default budget of `64 * bits` candidates.
pub fn find_modulus<R: Rng + ?Sized>(bits: u32, m: u32, rng: &mut R) -> Result<ModulusParams, NumError> {
    find_modulus_with_budget(bits, m, 64 * bits as usize, rng)
}

/// Rejection sampling over random candidates; congruence constraints are
/// applied before any primality test. `budget` bounds the total number of
/// candidates examined.
pub fn find_modulus_with_budget<R: Rng + ?Sized>(
    bits: u32,
    m: u32,
    budget: usize,
    rng: &mut R,
) -> Result<ModulusParams, NumError> {
    if !is_small_prime(m) {
        return Err(NumError::InvalidParameter(format!("m = {m} is not prime")));
    }
    if bits < 3 {
        return Err(NumError::InvalidParameter("bit length must be at least 3".into()));
    }
    let (lo_bits, hi_bits) = bit_window(bits);
    let lo = if bits < DESK_SCALE_BITS { BigUint::from(3u32) } else { BigUint::one() << (lo_bits - 1) };
    let hi = BigUint::one() << hi_bits; // exclusive
    let mb = BigUint::from(m);
    let step = BigUint::from(2 * m);
    let one = BigUint::one();
    let mut attempts = 0usize;

    let mut draw_prime = |want_p: bool, attempts: &mut usize| -> Option<BigUint> {
        while *attempts < budget {
            *attempts += 1;
            let c = rng.gen_biguint_range(&lo, &hi);
            let cand = if m != 2 && want_p {
                // largest x <= c with x = 1 mod 2m
                let r = (&c - &one) % &step;
                &c - r
            } else {
                if c.is_even() {
                    continue;
                }
                if m != 2 && (&c % &mb).is_one() {
                    continue;
                }
                c
            };
            if cand < lo {
                continue;
            }
            if is_probable_prime(&cand, rng) {
                return Some(cand);
            }
        }
        None
    };

    loop {
        let p = draw_prime(true, &mut attempts);
        let q = p.as_ref().and_then(|_| draw_prime(false, &mut attempts));
        let (Some(p), Some(q)) = (p, q) else {
            return Err(NumError::SearchExhausted { bits, m, attempts });
        };
        let (p, q) = match p.cmp(&q) {
            std::cmp::Ordering::Less => (p, q),
            std::cmp::Ordering::Greater if m == 2 => (q, p),
            _ => continue,
        };
        let mut params = ModulusParams::from_primes(m, p, q)?;
        params.bits = bits;
        return Ok(params);
    }
}

/// Modular inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: &BigUint, n: &BigUint) -> Option<BigUint> {
    if n.is_one() {
        return None;
    }
    (a % n).modinv(n)
}

/// The unique `x` in `[0, pq)` with `x = s_p (mod p)` and `x = s_q (mod q)`.
pub fn crt_combine(s_p: &BigUint, p: &BigUint, s_q: &BigUint, q: &BigUint) -> Result<BigUint, NumError> {
    if p.is_zero() || q.is_zero() || !p.gcd(q).is_one() {
        return Err(NumError::NotCoprime);
    }
    let sp = s_p % p;
    let sq = s_q % q;
    if q.is_one() {
        return Ok(sp);
    }
    let p_inv = mod_inverse(p, q).ok_or(NumError::NotCoprime)?;
    let diff = ((&sq + q) - (&sp % q)) % q;
    let t = (diff * p_inv) % q;
    Ok(sp + p * t)
}

pub(crate) fn is_unit(g: &BigUint, n: &BigUint) -> bool {
    !g.is_zero() && g < n && g.gcd(n).is_one()
}

/// True iff `g` is an m-th power in `Z_n^*`, using the secret factors.
///
/// For odd `m` only the `p` component matters (every element of `Z_q^*` is
/// an m-th power since `gcd(m, q-1) = 1`); for `m = 2` both components must
/// be quadratic residues.
pub fn residue_test(g: &BigUint, params: &ModulusParams) -> Result<bool, NumError> {
    let g = g % &params.n;
    if !is_unit(&g, &params.n) {
        return Err(NumError::NotUnit(g));
    }
    let p_ok = component_is_power(&g, &params.p, params.m);
    if params.m == 2 {
        Ok(p_ok && component_is_power(&g, &params.q, 2))
    } else {
        Ok(p_ok)
    }
}

/// The residue criterion on the `p` component only: `g_p^{(p-1)/m} = 1`.
///
/// This is a homomorphism test on all of `Z_n^*` for every prime `m`; for
/// odd `m` it coincides with [`residue_test`].
pub fn p_component_test(g: &BigUint, params: &ModulusParams) -> Result<bool, NumError> {
    let g = g % &params.n;
    if !is_unit(&g, &params.n) {
        return Err(NumError::NotUnit(g));
    }
    Ok(component_is_power(&g, &params.p, params.m))
}

fn component_is_power(g: &BigUint, prime: &BigUint, m: u32) -> bool {
    let one = BigUint::one();
    let e = (prime - &one) / BigUint::from(m);
    (g % prime).modpow(&e, prime).is_one()
}

/// Some `h` with `h^m = g (mod p)`, or `None` when `g` is not an m-th power.
pub fn mth_root_mod_prime<R: Rng + ?Sized>(
    g: &BigUint,
    p: &BigUint,
    m: u32,
    rng: &mut R,
) -> Result<Option<BigUint>, NumError> {
    mth_root_mod_prime_with_budget(g, p, m, DEFAULT_NONRESIDUE_DRAWS, rng)
}

/// As [`mth_root_mod_prime`] with an explicit bound on the non-residue draws
/// used by the Adleman-Manders-Miller step.
pub fn mth_root_mod_prime_with_budget<R: Rng + ?Sized>(
    g: &BigUint,
    p: &BigUint,
    m: u32,
    draws: usize,
    rng: &mut R,
) -> Result<Option<BigUint>, NumError> {
    if m < 2 || !is_small_prime(m) {
        return Err(NumError::InvalidParameter(format!("m = {m} is not prime")));
    }
    let g = g % p;
    if g.is_zero() {
        return Ok(Some(BigUint::zero()));
    }
    let one = BigUint::one();
    let p_minus_1 = p - &one;
    let mb = BigUint::from(m);
    if !(&p_minus_1 % &mb).is_zero() {
        // x -> x^m is a bijection; invert the exponent.
        let e = mod_inverse(&mb, &p_minus_1)
            .ok_or_else(|| NumError::InvalidParameter("m not invertible mod p-1".into()))?;
        return Ok(Some(g.modpow(&e, p)));
    }
    if !g.modpow(&(&p_minus_1 / &mb), p).is_one() {
        return Ok(None);
    }
    if let Some(small) = p.to_u64().filter(|&v| v < 1 << 16) {
        let gv = g.to_u64().unwrap_or(0);
        let root = (1..small).find(|&h| pow_mod_u64(h, u64::from(m), small) == gv);
        return Ok(root.map(BigUint::from));
    }
    amm_root(&g, p, m, draws, rng).map(Some)
}

fn pow_mod_u64(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let md = u128::from(modulus);
    let mut acc = 1u128 % md;
    let mut b = u128::from(base % modulus);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % md;
        }
        b = b * b % md;
        exp >>= 1;
    }
    acc as u64
}

/// Adleman-Manders-Miller for prime `m | p - 1`, `g` a known m-th power.
fn amm_root<R: Rng + ?Sized>(g: &BigUint, p: &BigUint, m: u32, draws: usize, rng: &mut R) -> Result<BigUint, NumError> {
    let one = BigUint::one();
    let p_minus_1 = p - &one;
    let mb = BigUint::from(m);
    // p - 1 = m^t * s with m not dividing s
    let mut s = p_minus_1.clone();
    let mut t = 0u32;
    while (&s % &mb).is_zero() {
        s /= &mb;
        t += 1;
    }
    let cofactor = &p_minus_1 / &mb;
    let two = BigUint::from(2u32);
    let rho = (0..draws)
        .map(|_| rng.gen_biguint_range(&two, &p_minus_1))
        .find(|r| !r.modpow(&cofactor, p).is_one())
        .ok_or(NumError::NonResidueSearch(draws))?;
    // z generates the Sylow m-subgroup (order m^t).
    let z = rho.modpow(&s, p);
    let u = if s.is_one() { BigUint::zero() } else { mod_inverse(&mb, &s).expect("gcd(m, s) = 1") };
    let x = g.modpow(&u, p);
    let g_inv = mod_inverse(g, p).expect("g is a unit mod p");
    let err = x.modpow(&mb, p) * g_inv % p;

    // Discrete log of err to base z, one base-m digit at a time.
    let zeta = z.modpow(&mb.pow(t - 1), p);
    let z_inv = mod_inverse(&z, p).expect("z is a unit");
    let mut e = BigUint::zero();
    let mut m_pow = BigUint::one();
    for i in 0..t {
        let partial = err.clone() * z_inv.modpow(&e, p) % p;
        let gamma = partial.modpow(&mb.pow(t - 1 - i), p);
        let mut acc = BigUint::one();
        let mut digit = None;
        for d in 0..m {
            if acc == gamma {
                digit = Some(d);
                break;
            }
            acc = acc * &zeta % p;
        }
        let digit = digit.ok_or_else(|| NumError::InvalidParameter("p is not prime".into()))?;
        e += &m_pow * BigUint::from(digit);
        m_pow *= &mb;
    }
    if !(&e % &mb).is_zero() {
        return Err(NumError::InvalidParameter("p is not prime".into()));
    }
    let y = z_inv.modpow(&(&e / &mb), p);
    let h = x * y % p;
    if h.modpow(&mb, p) != *g {
        return Err(NumError::InvalidParameter("p is not prime".into()));
    }
    Ok(h)
}

/// Some `h` with `h^m = g (mod n)` using the secret factorization: split by
/// CRT, take roots in both prime fields, recombine.
pub fn mth_root_mod_n<R: Rng + ?Sized>(
    g: &BigUint,
    params: &ModulusParams,
    rng: &mut R,
) -> Result<Option<BigUint>, NumError> {
    let g = g % &params.n;
    if !is_unit(&g, &params.n) {
        return Err(NumError::NotUnit(g));
    }
    let g_p = &g % &params.p;
    let g_q = &g % &params.q;
    let Some(h_p) = mth_root_mod_prime(&g_p, &params.p, params.m, rng)? else {
        return Ok(None);
    };
    let Some(h_q) = mth_root_mod_prime(&g_q, &params.q, params.m, rng)? else {
        return Ok(None);
    };
    crt_combine(&h_p, &params.p, &h_q, &params.q).map(Some)
}

/// Outcome of the factoring reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Smaller prime factor.
    pub p: BigUint,
    /// Larger prime factor.
    pub q: BigUint,
    /// Number of random draws used, counting the successful one.
    pub iterations: usize,
}

/// Factors `n` given an oracle returning m-th roots.
///
/// Each iteration draws `x` uniformly from `[1, n)`. A draw sharing a factor
/// with `n` ends the search immediately; otherwise `y = oracle(x^m)` and a
/// proper divisor is `gcd(x - y, n)` unless `y = x` (or, for `m = 2`,
/// `y = -x`), in which case the draw is repeated.
pub fn factor_from_root_oracle<R, F>(
    n: &BigUint,
    m: u32,
    mut oracle: F,
    budget: usize,
    rng: &mut R,
) -> Result<Factorization, NumError>
where
    R: Rng + ?Sized,
    F: FnMut(&BigUint) -> Option<BigUint>,
{
    let one = BigUint::one();
    if n <= &BigUint::from(3u32) {
        return Err(NumError::InvalidParameter("n too small".into()));
    }
    let mb = BigUint::from(m);
    let finish = |d: BigUint, iterations: usize| {
        let other = n / &d;
        let (p, q) = if d < other { (d, other) } else { (other, d) };
        Factorization { p, q, iterations }
    };
    for iteration in 1..=budget {
        let x = rng.gen_biguint_range(&one, n);
        let d = x.gcd(n);
        if !d.is_one() {
            return Ok(finish(d, iteration));
        }
        let power = x.modpow(&mb, n);
        let y = oracle(&power).ok_or(NumError::OracleFailure)? % n;
        if y.modpow(&mb, n) != power {
            return Err(NumError::OracleFailure);
        }
        if y == x {
            continue;
        }
        let diff = if x > y { &x - &y } else { &y - &x };
        let d = diff.gcd(n);
        if !d.is_one() && &d != n {
            return Ok(finish(d, iteration));
        }
    }
    Err(NumError::BudgetExceeded(budget))
}

/// Jacobi symbol `(a / n)` for odd `n >= 3`, by the binary algorithm.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8, NumError> {
    if n.is_even() || n < &BigUint::from(3u32) {
        return Err(NumError::BadJacobiModulus);
    }
    let nn = BigInt::from(n.clone());
    let mut a = a.mod_floor(&nn).magnitude().clone();
    let mut n = n.clone();
    let mut result = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            // (2/n) = -1 iff n = 3, 5 mod 8
            let n_mod_8 = (&n % 8u32).to_u32().unwrap_or(0);
            if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
                result = -result;
            }
        }
        // quadratic reciprocity for odd a, n
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// Convenience wrapper for unsigned `a`.
pub fn jacobi_u(a: &BigUint, n: &BigUint) -> Result<i8, NumError> {
    jacobi(&BigInt::from(a.clone()), n)
}

/// Uniform unit of `Z_n^*`.
pub fn random_unit<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    let one = BigUint::one();
    loop {
        let x = rng.gen_biguint_range(&one, n);
        if x.gcd(n).is_one() {
            return x;
        }
    }
}
