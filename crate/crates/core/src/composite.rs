//! The homomorphic cryptosystem over a layered semidirect product `H`.
//!
//! The ciphertext group is `G = G_1 * ... * G_m`, the free product of the
//! factor ciphertext groups, and the secret epimorphism is `f = Q ∘ f*`:
//! every letter is mapped by its factor's coset index into `K`, and the
//! resulting word is projected onto `H`. A plaintext `h` is encrypted as
//! `g0 · r_h`, where `r_h` is the transversal word of `h` and `g0` a random
//! element of the kernel of `f`.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cyclic::{self, CyclicError, CyclicKeyPair, CyclicPublicKey, RepMode};
use crate::free_product::{CyclicGroup, FreeProduct, Letter, ResidueGroup, Word, WordError};
use crate::groups::semidirect::parse_spec_block;
use crate::groups::{GroupError, SemidirectSpec};
use crate::proof::{self, Membership, Proof, ProofError};
use crate::text::{self, FormatError, Lines};

/// Representative tables are stored for plaintext spaces up to this size.
pub const MAX_REP_TABLE: usize = 1 << 12;

pub const DEFAULT_BLINDING: usize = 8;

/// Attempts at drawing a modulus distinct from the ones already chosen.
const DISTINCT_MODULUS_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositeError {
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("ciphertext belongs to key {found}, expected {expected}")]
    KeyMismatch { expected: String, found: String },
    #[error("element {0} is not in the plaintext space")]
    Plaintext(usize),
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("invalid subgroup: {0}")]
    Subgroup(String),
}

/// A ciphertext: a canonical word over `G` tagged with its key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub word: Word<BigUint>,
    pub key_id: String,
}

/// Random data of one encryption: a kernel proof over `G` and a word `k`
/// over `K`. The blinding element is `eval(proof) · r(k) · r(Q(k))^{-1}`,
/// where `r(k)` replaces each letter of `k` by its representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blinding {
    pub proof: Proof,
    pub shift: Word<u32>,
}

impl Blinding {
    pub fn none() -> Self {
        Blinding { proof: Proof::empty(), shift: Word::empty() }
    }
}

#[derive(Debug, Clone)]
pub struct CompositePublicKey {
    spec: SemidirectSpec,
    factors: Vec<CyclicPublicKey>,
    /// Plaintext index -> element of `H`.
    plaintexts: Vec<usize>,
    rep_table: Option<Vec<Word<BigUint>>>,
    blinding: usize,
    labels: Option<Vec<String>>,
    g: FreeProduct<ResidueGroup>,
    k: FreeProduct<CyclicGroup>,
    index: HashMap<usize, usize>,
    fingerprint: String,
}

impl PartialEq for CompositePublicKey {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
    }
}

impl Eq for CompositePublicKey {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeKeyPair {
    pub public: CompositePublicKey,
    secrets: Vec<CyclicKeyPair>,
}

fn residue_product(factors: &[CyclicPublicKey]) -> FreeProduct<ResidueGroup> {
    FreeProduct::new(factors.iter().map(|f| ResidueGroup::new(f.n.clone(), f.m)).collect())
}

impl CompositePublicKey {
    fn assemble(
        spec: SemidirectSpec,
        factors: Vec<CyclicPublicKey>,
        plaintexts: Vec<usize>,
        blinding: usize,
        labels: Option<Vec<String>>,
    ) -> Result<Self, CompositeError> {
        if spec.factors().len() != factors.len() {
            return Err(CompositeError::InvalidKey("one cyclic key per factor is required".into()));
        }
        for (i, (&order, f)) in spec.factors().iter().zip(&factors).enumerate() {
            if order != f.m {
                return Err(CompositeError::InvalidKey(format!(
                    "factor {} has order {order} but its key has m={}",
                    i + 1,
                    f.m
                )));
            }
            f.validate()?;
        }
        let mut moduli: Vec<&BigUint> = factors.iter().map(|f| &f.n).collect();
        moduli.sort();
        moduli.dedup();
        if moduli.len() != factors.len() {
            return Err(CompositeError::InvalidKey("factor moduli are not distinct".into()));
        }
        if let Some(l) = &labels {
            if l.len() != plaintexts.len() {
                return Err(CompositeError::InvalidKey("label count does not match the plaintext space".into()));
            }
            if l.iter().any(|s| s.is_empty() || s.contains('\n')) {
                return Err(CompositeError::InvalidKey("labels must be nonempty single lines".into()));
            }
        }
        let mut index = HashMap::with_capacity(plaintexts.len());
        for (i, &h) in plaintexts.iter().enumerate() {
            if h >= spec.order() || index.insert(h, i).is_some() {
                return Err(CompositeError::Subgroup(format!("bad or repeated element {h}")));
            }
        }
        if index.get(&0) != Some(&0) {
            return Err(CompositeError::Subgroup("plaintext 0 must be the identity".into()));
        }
        if plaintexts.len() < 2 {
            return Err(CompositeError::Subgroup("the plaintext group must be nontrivial".into()));
        }
        for &h in &plaintexts {
            if !index.contains_key(&spec.inv(h)) {
                return Err(CompositeError::Subgroup(format!("inverse of {h} missing")));
            }
        }
        // P contains 1 and P·gens ⊆ P forces P = <gens>
        let mut sorted = plaintexts.clone();
        sorted.sort_unstable();
        let gens = crate::groups::series::generating_set_of(&SpecGroup(&spec), &sorted);
        for &a in &plaintexts {
            for &b in &gens {
                if !index.contains_key(&spec.mul(a, b)) {
                    return Err(CompositeError::Subgroup("elements are not closed under multiplication".into()));
                }
            }
        }
        let g = residue_product(&factors);
        let k = spec.k_product();
        let mut pk = CompositePublicKey {
            spec,
            factors,
            plaintexts,
            rep_table: None,
            blinding,
            labels,
            g,
            k,
            index,
            fingerprint: String::new(),
        };
        if pk.plaintexts.len() <= MAX_REP_TABLE {
            let table = pk.plaintexts.iter().map(|&h| pk.rep_word(h)).collect::<Result<Vec<_>, _>>()?;
            pk.rep_table = Some(table);
        }
        pk.fingerprint = fingerprint_of(&pk.to_text());
        Ok(pk)
    }

    pub fn spec(&self) -> &SemidirectSpec {
        &self.spec
    }

    pub fn factors(&self) -> &[CyclicPublicKey] {
        &self.factors
    }

    /// The ciphertext group `G`.
    pub fn ciphertext_group(&self) -> &FreeProduct<ResidueGroup> {
        &self.g
    }

    pub fn blinding(&self) -> usize {
        self.blinding
    }

    /// Elements of `H` forming the plaintext space, in plaintext order.
    pub fn plaintexts(&self) -> &[usize] {
        &self.plaintexts
    }

    pub fn plaintext_index(&self, h: usize) -> Option<usize> {
        self.index.get(&h).copied()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn rep_table(&self) -> Option<&[Word<BigUint>]> {
        self.rep_table.as_deref()
    }

    /// Hex of the first 16 bytes of SHA-256 over the public key text.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn reps(&self) -> Vec<Vec<BigUint>> {
        self.factors.iter().map(|f| f.reps.clone()).collect()
    }

    /// The transversal word `r_1 ... r_m` of `h`, computed from the
    /// factor representatives.
    pub fn rep_word(&self, h: usize) -> Result<Word<BigUint>, CompositeError> {
        if h >= self.spec.order() {
            return Err(CompositeError::Plaintext(h));
        }
        Ok(self.g.representative_word(&self.spec.element_word(h), &self.reps())?)
    }

    /// Transversal word of a plaintext element, from the table if present.
    pub fn representative(&self, h: usize) -> Result<Word<BigUint>, CompositeError> {
        let i = self.plaintext_index(h).ok_or(CompositeError::Plaintext(h))?;
        match &self.rep_table {
            Some(t) => Ok(t[i].clone()),
            None => self.rep_word(h),
        }
    }

    /// Draws `s` kernel transformations and a `K`-word of `s` random letters.
    pub fn sample_blinding<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> Blinding {
        let proof = proof::sample_kernel(&self.g, s, rng);
        let raw: Vec<Letter<u32>> = (0..s)
            .map(|_| {
                let i = rng.gen_range(0..self.factors.len());
                Letter::new(i, rng.gen_range(1..self.spec.factors()[i]))
            })
            .collect();
        let shift = self.k.canonicalize(&raw).expect("letters are in range");
        Blinding { proof, shift }
    }

    /// The kernel element described by a blinding.
    pub fn blinding_element(&self, b: &Blinding) -> Result<Word<BigUint>, CompositeError> {
        let g0 = proof::eval_proof(&self.g, &b.proof)?;
        if b.shift.is_empty() {
            return Ok(g0);
        }
        let r = self.g.representative_word(&b.shift, &self.reps())?;
        let t = self.spec.project_q(&b.shift)?;
        let r_t = self.rep_word(t)?;
        Ok(self.g.multiply(&self.g.multiply(&g0, &r), &self.g.invert(&r_t)))
    }

    pub fn encrypt<R: Rng + ?Sized>(&self, h: usize, rng: &mut R) -> Result<Ciphertext, CompositeError> {
        let b = self.sample_blinding(self.blinding, rng);
        self.encrypt_with_blinding(h, &b)
    }

    pub fn encrypt_with_blinding(&self, h: usize, b: &Blinding) -> Result<Ciphertext, CompositeError> {
        let r = self.representative(h)?;
        let g0 = self.blinding_element(b)?;
        Ok(self.wrap(self.g.multiply(&g0, &r)))
    }

    fn wrap(&self, word: Word<BigUint>) -> Ciphertext {
        Ciphertext { word, key_id: self.fingerprint.clone() }
    }

    pub fn check_key(&self, c: &Ciphertext) -> Result<(), CompositeError> {
        if c.key_id != self.fingerprint {
            return Err(CompositeError::KeyMismatch { expected: self.fingerprint.clone(), found: c.key_id.clone() });
        }
        Ok(())
    }

    pub fn eval_multiply(&self, c1: &Ciphertext, c2: &Ciphertext) -> Result<Ciphertext, CompositeError> {
        self.check_key(c1)?;
        self.check_key(c2)?;
        Ok(self.wrap(self.g.multiply(&c1.word, &c2.word)))
    }

    pub fn eval_invert(&self, c: &Ciphertext) -> Result<Ciphertext, CompositeError> {
        self.check_key(c)?;
        Ok(self.wrap(self.g.invert(&c.word)))
    }

    pub fn rerandomize<R: Rng + ?Sized>(&self, c: &Ciphertext, rng: &mut R) -> Result<Ciphertext, CompositeError> {
        let b = self.sample_blinding(self.blinding, rng);
        self.rerandomize_with(c, &b)
    }

    pub fn rerandomize_with(&self, c: &Ciphertext, b: &Blinding) -> Result<Ciphertext, CompositeError> {
        self.check_key(c)?;
        let g0 = self.blinding_element(b)?;
        Ok(self.wrap(self.g.multiply(&g0, &c.word)))
    }

    fn write_body(&self, out: &mut String, blocks: &[String]) {
        out.push_str("COMPKEY v1\n");
        out.push_str(&self.spec.to_text());
        for b in blocks {
            out.push_str(b);
        }
        let full =
            self.plaintexts.len() == self.spec.order() && self.plaintexts.iter().enumerate().all(|(i, &h)| i == h);
        match &self.rep_table {
            None if full => out.push_str("reps: all\n"),
            None => {
                out.push_str("reps:\n");
                for h in &self.plaintexts {
                    out.push_str(&format!("{h}\n"));
                }
            }
            Some(t) => {
                out.push_str("reps:\n");
                for (h, w) in self.plaintexts.iter().zip(t) {
                    out.push_str(&format!("{h}={}\n", self.g.format_word(w)));
                }
            }
        }
        out.push_str(&format!("s={}\n", self.blinding));
        if let Some(labels) = &self.labels {
            out.push_str("labels:\n");
            for l in labels {
                out.push_str(l);
                out.push('\n');
            }
        }
    }

    /// `COMPKEY v1`, the spec block, one `CYCKEY` block per factor, the
    /// `reps:` block, `s=` and optional `labels:`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let blocks: Vec<String> = self.factors.iter().map(CyclicPublicKey::to_text).collect();
        self.write_body(&mut out, &blocks);
        out
    }

    pub fn from_text(s: &str) -> Result<Self, CompositeError> {
        let (pk, secrets) = parse_key(s)?;
        if secrets.is_some() {
            return Err(FormatError::Invalid("secret fields in a public key".into()).into());
        }
        Ok(pk)
    }
}

/// Adapts a spec to the finite group interface without building tables.
struct SpecGroup<'a>(&'a SemidirectSpec);

impl crate::groups::FiniteGroup for SpecGroup<'_> {
    fn order(&self) -> usize {
        self.0.order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul(a, b)
    }

    fn inv(&self, a: usize) -> usize {
        self.0.inv(a)
    }
}

fn fingerprint_of(public_text: &str) -> String {
    let digest = Sha256::digest(public_text.as_bytes());
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_key(s: &str) -> Result<(CompositePublicKey, Option<Vec<CyclicKeyPair>>), CompositeError> {
    let mut lines = Lines::new(s);
    lines.expect_exact("COMPKEY v1")?;
    let spec = parse_spec_block(&mut lines, |l| l == "CYCKEY v1")?;
    let mut publics = Vec::new();
    let mut secrets = Vec::new();
    while lines.peek() == Some("CYCKEY v1") {
        let (pk, sk) = cyclic::parse_block(&mut lines)?;
        publics.push(pk);
        secrets.push(sk);
    }
    let (no, reps) = lines.next_line("reps: block")?;
    let mut plaintexts = Vec::new();
    let mut words = Vec::new();
    match reps {
        "reps: all" => plaintexts.extend(0..spec.order()),
        "reps:" => {
            while let Some(l) = lines.peek() {
                if l.starts_with("s=") {
                    break;
                }
                let (no, l) = lines.next_line("representative")?;
                let (h, w) = match l.split_once('=') {
                    Some((h, w)) => (h, Some(w)),
                    None => (l, None),
                };
                let h: usize = text::parse_dec(h).map_err(|_| FormatError::syntax(no, "bad element index"))?;
                if h >= spec.order() {
                    return Err(FormatError::syntax(no, "element index out of range").into());
                }
                plaintexts.push(h);
                words.push((no, w));
            }
        }
        _ => return Err(FormatError::syntax(no, "expected `reps:` or `reps: all`").into()),
    }
    let (no, b) = lines.expect_kv("s")?;
    let blinding: usize = text::parse_dec(b).map_err(|_| FormatError::syntax(no, "bad blinding length"))?;
    let labels = if lines.peek() == Some("labels:") {
        lines.next_line("labels:")?;
        let mut labels = Vec::with_capacity(plaintexts.len());
        for _ in 0..plaintexts.len() {
            labels.push(lines.next_line("label")?.1.to_string());
        }
        Some(labels)
    } else {
        None
    };
    if !lines.is_done() {
        return Err(FormatError::syntax(lines.line_no(), "trailing data").into());
    }
    let all_form = reps == "reps: all";
    let pk = CompositePublicKey::assemble(spec, publics, plaintexts, blinding, labels)?;
    let full = pk.plaintexts.len() == pk.spec.order() && words.len() == pk.spec.order();
    let layout_ok = match pk.rep_table {
        Some(_) => !all_form && words.iter().all(|(_, w)| w.is_some()),
        None => words.iter().all(|(_, w)| w.is_none()) && !(full && !all_form),
    };
    if !layout_ok {
        return Err(FormatError::Invalid("representative block does not match the plaintext space".into()).into());
    }
    if let Some(table) = &pk.rep_table {
        for ((no, w), expected) in words.iter().zip(table) {
            let w = pk.g.parse_word(w.expect("checked"))?;
            if &w != expected {
                return Err(FormatError::syntax(*no, "representative word does not match the factor keys").into());
            }
        }
    }
    let secrets = if secrets.iter().all(Option::is_some) {
        Some(secrets.into_iter().map(|s| s.expect("checked")).collect())
    } else if secrets.iter().all(Option::is_none) {
        None
    } else {
        return Err(FormatError::Invalid("secret fields present in only some factor blocks".into()).into());
    };
    Ok((pk, secrets))
}

impl CompositeKeyPair {
    /// Assembles a key pair over all of `H` from factor key pairs.
    pub fn from_parts(
        spec: SemidirectSpec,
        secrets: Vec<CyclicKeyPair>,
        blinding: usize,
    ) -> Result<Self, CompositeError> {
        let publics = secrets.iter().map(|s| s.public.clone()).collect();
        let order = spec.order();
        let public = CompositePublicKey::assemble(spec, publics, (0..order).collect(), blinding, None)?;
        Ok(CompositeKeyPair { public, secrets })
    }

    pub fn secrets(&self) -> &[CyclicKeyPair] {
        &self.secrets
    }

    /// The secret `f*: G -> K`, letter by letter.
    pub fn lift(&self, w: &Word<BigUint>) -> Result<Word<u32>, CompositeError> {
        Ok(self.public.g.lift_map(w, &self.public.k, |i, x| self.secrets[i].coset_index(x))?)
    }

    /// `f(c) = Q(f*(c))`, as a plaintext element of `H`.
    pub fn decrypt(&self, c: &Ciphertext) -> Result<usize, CompositeError> {
        self.public.check_key(c)?;
        let h = self.public.spec.project_q(&self.lift(&c.word)?)?;
        if self.public.plaintext_index(h).is_none() {
            return Err(CompositeError::Plaintext(h));
        }
        Ok(h)
    }

    /// Splits a ciphertext as `g0 · r` with `r` in the transversal and a
    /// proof that `g0` lies in the kernel of `f*`.
    pub fn recover<R: Rng + ?Sized>(
        &self,
        c: &Ciphertext,
        rng: &mut R,
    ) -> Result<(Proof, Word<BigUint>), CompositeError> {
        self.public.check_key(c)?;
        let (g0, r) = self.public.g.transversal_decompose(
            &c.word,
            &self.public.k,
            |i, x| self.secrets[i].coset_index(x),
            &self.public.reps(),
        )?;
        match self.extract(&g0, rng)? {
            Membership::Member { proof, .. } => Ok((proof, r)),
            Membership::NotMember { .. } => Err(CompositeError::InvalidKey("kernel part has no proof".into())),
        }
    }

    /// Runs proof extraction with the factor root oracles.
    pub fn extract<R: Rng + ?Sized>(&self, w: &Word<BigUint>, rng: &mut R) -> Result<Membership, CompositeError> {
        Ok(proof::extract_proof(&self.public.g, w, |i, x| self.secrets[i].kernel_witness(x, rng))?)
    }

    /// Restricts the plaintext space to a subgroup of the current one, given
    /// as elements of `H` in the desired plaintext order (identity first).
    /// The kernel and hence decryption are unchanged.
    pub fn restrict_to_subgroup(
        &self,
        subgroup: &[usize],
        labels: Option<Vec<String>>,
    ) -> Result<Self, CompositeError> {
        if let Some(&h) = subgroup.iter().find(|&&h| self.public.plaintext_index(h).is_none()) {
            return Err(CompositeError::Plaintext(h));
        }
        let public = CompositePublicKey::assemble(
            self.public.spec.clone(),
            self.public.factors.clone(),
            subgroup.to_vec(),
            self.public.blinding,
            labels,
        )?;
        Ok(CompositeKeyPair { public, secrets: self.secrets.clone() })
    }

    pub fn with_blinding(&self, s: usize) -> Self {
        let p = &self.public;
        let public =
            CompositePublicKey::assemble(p.spec.clone(), p.factors.clone(), p.plaintexts.clone(), s, p.labels.clone())
                .expect("only the blinding length changed");
        CompositeKeyPair { public, secrets: self.secrets.clone() }
    }

    /// Public layout with full `CYCKEY` blocks.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let blocks: Vec<String> = self.secrets.iter().map(CyclicKeyPair::to_text).collect();
        self.public.write_body(&mut out, &blocks);
        out
    }

    pub fn from_text(s: &str) -> Result<Self, CompositeError> {
        let (public, secrets) = parse_key(s)?;
        let secrets = secrets.ok_or_else(|| FormatError::Truncated("secret factor fields".into()))?;
        Ok(CompositeKeyPair { public, secrets })
    }
}

/// One cyclic key pair per factor of `spec`, with pairwise distinct moduli.
pub fn keygen_composite<R: Rng + ?Sized>(
    spec: SemidirectSpec,
    bits: u32,
    blinding: usize,
    rng: &mut R,
) -> Result<CompositeKeyPair, CompositeError> {
    let mut secrets: Vec<CyclicKeyPair> = Vec::with_capacity(spec.factors().len());
    for &m in spec.factors() {
        let mut attempts = 0;
        let kp = loop {
            let kp = cyclic::keygen_cyclic_with(m, bits, RepMode::Random, rng)?;
            if secrets.iter().all(|s| s.public.n != kp.public.n) {
                break kp;
            }
            attempts += 1;
            if attempts == DISTINCT_MODULUS_ATTEMPTS {
                return Err(CompositeError::InvalidKey(format!("no fresh {bits}-bit modulus for m={m}")));
            }
        };
        secrets.push(kp);
    }
    CompositeKeyPair::from_parts(spec, secrets, blinding)
}

impl Ciphertext {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `CTEXT v1`, `key=<fingerprint>`, one word line.
    pub fn to_text(&self, pk: &CompositePublicKey) -> String {
        format!("CTEXT v1\nkey={}\n{}\n", self.key_id, pk.g.format_word(&self.word))
    }

    /// Parses a ciphertext for `pk`; a foreign key id is reported before the
    /// word is looked at.
    pub fn from_text(s: &str, pk: &CompositePublicKey) -> Result<Self, CompositeError> {
        let mut lines = Lines::new(s);
        lines.expect_exact("CTEXT v1")?;
        let (no, key_id) = lines.expect_kv("key")?;
        if key_id.len() != 32 || !key_id.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return Err(FormatError::syntax(no, "bad key fingerprint").into());
        }
        let c = Ciphertext { word: Word::empty(), key_id: key_id.to_string() };
        pk.check_key(&c)?;
        let (_, w) = lines.next_line("ciphertext word")?;
        let word = pk.g.parse_word(w)?;
        if !lines.is_done() {
            return Err(FormatError::syntax(lines.line_no(), "trailing data").into());
        }
        Ok(Ciphertext { word, ..c })
    }
}
