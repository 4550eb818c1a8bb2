//! Words over a free product of finite groups.
//!
//! A [`Letter`] is a non-identity element tagged with the index of its
//! factor. Raw words are plain `Vec<Letter>`; a [`Word`] is always in
//! canonical form (no identity letters, no two adjacent letters from the
//! same factor), which is the unique normal form of a free-product element.

use std::fmt::Debug;

use num_bigint::BigUint;
use thiserror::Error;

use crate::numtheory;
use crate::text::{self, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("factor index {0} out of range")]
    FactorRange(usize),
    #[error("letter {value} is not an element of factor {factor}")]
    InvalidLetter { factor: usize, value: String },
    #[error("word is not canonical")]
    NotCanonical,
    #[error("letter map failed on factor {factor}: {msg}")]
    MapFailed { factor: usize, msg: String },
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// A finite group usable as a free-product factor.
pub trait FactorGroup: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn contains(&self, a: &Self::Elem) -> bool;
    /// Lowercase hex text of an element.
    fn encode(&self, a: &Self::Elem) -> String;
    fn decode(&self, s: &str) -> Result<Self::Elem, FormatError>;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }
}

/// The ciphertext group of one cyclic factor: `Z_n^*` for odd `exponent`,
/// and the Jacobi-one subgroup `J_n` for the quadratic system
/// (`exponent = 2`). `exponent` is the plaintext order `m`, and
/// `P(a) = a^m` is the kernel parametrization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueGroup {
    pub n: BigUint,
    pub exponent: u32,
}

impl ResidueGroup {
    pub fn new(n: BigUint, exponent: u32) -> Self {
        ResidueGroup { n, exponent }
    }

    /// `P(a) = a^m mod n`.
    pub fn power(&self, a: &BigUint) -> BigUint {
        a.modpow(&BigUint::from(self.exponent), &self.n)
    }

    /// Whether `a` is an admissible witness, i.e. a unit mod `n`.
    pub fn is_witness(&self, a: &BigUint) -> bool {
        numtheory::is_unit(a, &self.n)
    }
}

impl FactorGroup for ResidueGroup {
    type Elem = BigUint;

    fn identity(&self) -> BigUint {
        BigUint::from(1u32)
    }

    fn op(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b % &self.n
    }

    fn inverse(&self, a: &BigUint) -> BigUint {
        numtheory::mod_inverse(a, &self.n).expect("inverse of a non-unit")
    }

    fn contains(&self, a: &BigUint) -> bool {
        numtheory::is_unit(a, &self.n) && (self.exponent != 2 || numtheory::jacobi_u(a, &self.n) == Ok(1))
    }

    fn encode(&self, a: &BigUint) -> String {
        text::to_hex(a)
    }

    fn decode(&self, s: &str) -> Result<BigUint, FormatError> {
        text::parse_hex(s)
    }
}

/// The additive group `Z_order^+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicGroup {
    pub order: u32,
}

impl FactorGroup for CyclicGroup {
    type Elem = u32;

    fn identity(&self) -> u32 {
        0
    }

    fn op(&self, a: &u32, b: &u32) -> u32 {
        ((u64::from(*a) + u64::from(*b)) % u64::from(self.order)) as u32
    }

    fn inverse(&self, a: &u32) -> u32 {
        (self.order - a % self.order) % self.order
    }

    fn contains(&self, a: &u32) -> bool {
        *a < self.order
    }

    fn encode(&self, a: &u32) -> String {
        format!("{a:x}")
    }

    fn decode(&self, s: &str) -> Result<u32, FormatError> {
        let v = text::parse_hex(s)?;
        u32::try_from(v).map_err(|_| FormatError::Hex(s.to_string()))
    }
}

/// A non-identity element of factor `factor` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter<E> {
    pub factor: usize,
    pub value: E,
}

impl<E> Letter<E> {
    pub fn new(factor: usize, value: E) -> Self {
        Letter { factor, value }
    }
}

/// A canonical word. Only [`FreeProduct`] constructs non-empty words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<E> {
    letters: Vec<Letter<E>>,
}

impl<E> Word<E> {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Letter<E>] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn into_letters(self) -> Vec<Letter<E>> {
        self.letters
    }
}

impl<E> Default for Word<E> {
    fn default() -> Self {
        Word::empty()
    }
}

/// The free product `G_1 * ... * G_m` of its factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeProduct<F> {
    factors: Vec<F>,
}

impl<F: FactorGroup> FreeProduct<F> {
    pub fn new(factors: Vec<F>) -> Self {
        FreeProduct { factors }
    }

    pub fn factors(&self) -> &[F] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Result<&F, WordError> {
        self.factors.get(i).ok_or(WordError::FactorRange(i))
    }

    pub fn check_letter(&self, l: &Letter<F::Elem>) -> Result<(), WordError> {
        let g = self.factor(l.factor)?;
        if g.contains(&l.value) {
            Ok(())
        } else {
            Err(WordError::InvalidLetter { factor: l.factor, value: g.encode(&l.value) })
        }
    }

    /// The normal form of a raw word. Letters are pushed onto a stack;
    /// a letter from the same factor as the top is merged into it, and a
    /// merge yielding the identity pops the top.
    pub fn canonicalize(&self, raw: &[Letter<F::Elem>]) -> Result<Word<F::Elem>, WordError> {
        let mut stack: Vec<Letter<F::Elem>> = Vec::with_capacity(raw.len());
        for l in raw {
            self.check_letter(l)?;
            let g = &self.factors[l.factor];
            match stack.last_mut() {
                Some(top) if top.factor == l.factor => {
                    let v = g.op(&top.value, &l.value);
                    if g.is_identity(&v) {
                        stack.pop();
                    } else {
                        top.value = v;
                    }
                }
                _ => {
                    if !g.is_identity(&l.value) {
                        stack.push(l.clone());
                    }
                }
            }
        }
        Ok(Word { letters: stack })
    }

    /// Accepts `raw` only if it is already canonical.
    pub fn word_from_canonical(&self, raw: Vec<Letter<F::Elem>>) -> Result<Word<F::Elem>, WordError> {
        for (i, l) in raw.iter().enumerate() {
            self.check_letter(l)?;
            if self.factors[l.factor].is_identity(&l.value) || (i > 0 && raw[i - 1].factor == l.factor) {
                return Err(WordError::NotCanonical);
            }
        }
        Ok(Word { letters: raw })
    }

    pub fn single(&self, factor: usize, value: F::Elem) -> Result<Word<F::Elem>, WordError> {
        self.canonicalize(&[Letter::new(factor, value)])
    }

    pub fn multiply(&self, a: &Word<F::Elem>, b: &Word<F::Elem>) -> Word<F::Elem> {
        let mut letters = a.letters.clone();
        // Only the junction can reduce, so popping while merging suffices.
        for l in &b.letters {
            let g = &self.factors[l.factor];
            match letters.last_mut() {
                Some(top) if top.factor == l.factor => {
                    let v = g.op(&top.value, &l.value);
                    if g.is_identity(&v) {
                        letters.pop();
                    } else {
                        top.value = v;
                    }
                }
                _ => letters.push(l.clone()),
            }
        }
        Word { letters }
    }

    pub fn invert(&self, w: &Word<F::Elem>) -> Word<F::Elem> {
        let letters =
            w.letters.iter().rev().map(|l| Letter::new(l.factor, self.factors[l.factor].inverse(&l.value))).collect();
        Word { letters }
    }

    /// Applies per-factor homomorphisms letterwise and canonicalizes in
    /// `target`. `map(i, x)` must be a homomorphism from factor `i` of
    /// `self` into factor `i` of `target`.
    pub fn lift_map<T, M, Er>(
        &self,
        w: &Word<F::Elem>,
        target: &FreeProduct<T>,
        mut map: M,
    ) -> Result<Word<T::Elem>, WordError>
    where
        T: FactorGroup,
        M: FnMut(usize, &F::Elem) -> Result<T::Elem, Er>,
        Er: std::fmt::Display,
    {
        let raw = w
            .letters
            .iter()
            .map(|l| {
                map(l.factor, &l.value)
                    .map(|v| Letter::new(l.factor, v))
                    .map_err(|e| WordError::MapFailed { factor: l.factor, msg: e.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        target.canonicalize(&raw)
    }

    /// Space-separated `factor:value` tokens with 1-based factors; `e` for
    /// the empty word.
    pub fn format_word(&self, w: &Word<F::Elem>) -> String {
        self.format_raw(&w.letters)
    }

    pub fn format_raw(&self, raw: &[Letter<F::Elem>]) -> String {
        if raw.is_empty() {
            return "e".to_string();
        }
        raw.iter()
            .map(|l| format!("{}:{}", l.factor + 1, self.factors[l.factor].encode(&l.value)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the word format; letters must be valid elements but need not
    /// be canonical.
    pub fn parse_raw(&self, s: &str) -> Result<Vec<Letter<F::Elem>>, WordError> {
        if s == "e" {
            return Ok(Vec::new());
        }
        if s.is_empty() {
            return Err(FormatError::Invalid("empty word text (use `e`)".into()).into());
        }
        s.split(' ')
            .map(|tok| {
                let (f, v) = tok.split_once(':').ok_or_else(|| FormatError::Invalid(format!("bad letter `{tok}`")))?;
                let f: usize = text::parse_dec(f)?;
                if f == 0 {
                    return Err(WordError::FactorRange(0));
                }
                let g = self.factor(f - 1).map_err(|_| WordError::FactorRange(f))?;
                let value = g.decode(v)?;
                let l = Letter::new(f - 1, value);
                self.check_letter(&l)?;
                Ok(l)
            })
            .collect()
    }

    /// Parses a canonical word; non-canonical text is rejected.
    pub fn parse_word(&self, s: &str) -> Result<Word<F::Elem>, WordError> {
        let raw = self.parse_raw(s)?;
        self.word_from_canonical(raw)
    }
}

impl FreeProduct<ResidueGroup> {
    /// Replaces every letter `(i, k)` of a word over `K` by `reps[i][k]`.
    /// Nonzero indices map to non-identity representatives, so the result is
    /// canonical and is the unique element of the transversal over `k`.
    pub fn representative_word(&self, k: &Word<u32>, reps: &[Vec<BigUint>]) -> Result<Word<BigUint>, WordError> {
        let raw = k
            .letters()
            .iter()
            .map(|l| {
                let r =
                    reps.get(l.factor).and_then(|r| r.get(l.value as usize)).ok_or(WordError::FactorRange(l.factor))?;
                Ok(Letter::new(l.factor, r.clone()))
            })
            .collect::<Result<Vec<_>, WordError>>()?;
        self.word_from_canonical(raw)
    }

    /// Splits `g = g0 * r` with `r` in the transversal and `g0` in the kernel
    /// of the lifted map.
    pub fn transversal_decompose<M, Er>(
        &self,
        g: &Word<BigUint>,
        k: &FreeProduct<CyclicGroup>,
        map: M,
        reps: &[Vec<BigUint>],
    ) -> Result<(Word<BigUint>, Word<BigUint>), WordError>
    where
        M: FnMut(usize, &BigUint) -> Result<u32, Er>,
        Er: std::fmt::Display,
    {
        let lifted = self.lift_map(g, k, map)?;
        let r = self.representative_word(&lifted, reps)?;
        let g0 = self.multiply(g, &self.invert(&r));
        Ok((g0, r))
    }
}
