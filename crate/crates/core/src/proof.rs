//! Kernel-membership proofs over a free product of residue groups.
//!
//! An elementary transformation takes a raw word `w1 x w2` to
//! `w1 x1 P_j(a) x2 w2` where `x = x1 x2`, or inserts `P_j(a)` between two
//! letters. Starting from the empty word, every sequence of such
//! transformations evaluates to an element of the kernel of the lifted
//! epimorphism, and every kernel element arises this way. A proof is such a
//! sequence; the witnesses `a` are the trapdoor.

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

use crate::free_product::{FactorGroup, FreeProduct, Letter, ResidueGroup, Word, WordError};
use crate::numtheory;
use crate::text::{self, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("position {pos} out of range for a word of length {len}")]
    Position { pos: usize, len: usize },
    #[error("split does not multiply to the letter at position {0}")]
    SplitMismatch(usize),
    #[error("witness {0} is not a unit of its factor")]
    BadWitness(String),
    #[error("replay does not reproduce the claimed word")]
    ReplayMismatch,
    #[error("proof uses factor {found}, expected only factor {expected}")]
    MixedFactor { expected: usize, found: usize },
    #[error("kernel oracle failed: {0}")]
    Oracle(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Split of the letter at the transformation position into `x1 * x2`.
/// An identity half is omitted from the resulting raw word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub x1: BigUint,
    pub x2: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformation {
    /// Index of the split letter, or insertion point in `0..=len` when
    /// `split` is `None`.
    pub position: usize,
    pub split: Option<Split>,
    /// Factor of the inserted kernel letter (0-based).
    pub j: usize,
    /// Witness; the inserted letter is `P_j(a)`, kept even when it is 1.
    pub a: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<Transformation>,
    pub claimed: Word<BigUint>,
}

/// Result of membership extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member { proof: Proof, oracle_calls: usize },
    NotMember { oracle_calls: usize },
}

/// Applies one transformation to a raw word. The result is not
/// canonicalized.
pub fn apply_transformation(
    g: &FreeProduct<ResidueGroup>,
    w: &[Letter<BigUint>],
    t: &Transformation,
) -> Result<Vec<Letter<BigUint>>, ProofError> {
    let gj = g.factor(t.j)?;
    if !gj.is_witness(&t.a) {
        return Err(ProofError::BadWitness(text::to_hex(&t.a)));
    }
    let inserted = Letter::new(t.j, gj.power(&t.a));
    let mut out = Vec::with_capacity(w.len() + 3);
    match &t.split {
        None => {
            if t.position > w.len() {
                return Err(ProofError::Position { pos: t.position, len: w.len() });
            }
            out.extend_from_slice(&w[..t.position]);
            out.push(inserted);
            out.extend_from_slice(&w[t.position..]);
        }
        Some(Split { x1, x2 }) => {
            let x = w.get(t.position).ok_or(ProofError::Position { pos: t.position, len: w.len() })?;
            let gi = g.factor(x.factor)?;
            if !gi.contains(x1) || !gi.contains(x2) || gi.op(x1, x2) != x.value {
                return Err(ProofError::SplitMismatch(t.position));
            }
            out.extend_from_slice(&w[..t.position]);
            if !gi.is_identity(x1) {
                out.push(Letter::new(x.factor, x1.clone()));
            }
            out.push(inserted);
            if !gi.is_identity(x2) {
                out.push(Letter::new(x.factor, x2.clone()));
            }
            out.extend_from_slice(&w[t.position + 1..]);
        }
    }
    Ok(out)
}

/// Replays the steps from the empty word and canonicalizes.
pub fn replay(g: &FreeProduct<ResidueGroup>, steps: &[Transformation]) -> Result<Word<BigUint>, ProofError> {
    let mut raw = Vec::new();
    for t in steps {
        raw = apply_transformation(g, &raw, t)?;
    }
    Ok(g.canonicalize(&raw)?)
}

/// Evaluates a proof, checking it reproduces its claimed word.
pub fn eval_proof(g: &FreeProduct<ResidueGroup>, pf: &Proof) -> Result<Word<BigUint>, ProofError> {
    let w = replay(g, &pf.steps)?;
    if w != pf.claimed {
        return Err(ProofError::ReplayMismatch);
    }
    Ok(w)
}

impl Proof {
    /// Builds a proof from steps, computing the claimed word by replay.
    pub fn from_steps(g: &FreeProduct<ResidueGroup>, steps: Vec<Transformation>) -> Result<Self, ProofError> {
        let claimed = replay(g, &steps)?;
        Ok(Proof { steps, claimed })
    }

    pub fn empty() -> Self {
        Proof { steps: Vec::new(), claimed: Word::empty() }
    }

    /// One step per line:
    /// `pos=<dec> ins j=<f> a=<hex>` or
    /// `pos=<dec> split=<f>:<x1>:<x2> j=<f> a=<hex>` (1-based factors).
    ///
    /// The split factor is not stored in the step itself, so the text form
    /// needs the word the step applies to; this replays the proof.
    pub fn to_text(&self, g: &FreeProduct<ResidueGroup>) -> Result<String, ProofError> {
        let mut raw: Vec<Letter<BigUint>> = Vec::new();
        let mut out = String::new();
        for t in &self.steps {
            out.push_str(&format!("pos={} ", t.position));
            match &t.split {
                None => out.push_str("ins"),
                Some(s) => {
                    let f = raw
                        .get(t.position)
                        .map(|l| l.factor)
                        .ok_or(ProofError::Position { pos: t.position, len: raw.len() })?;
                    out.push_str(&format!("split={}:{}:{}", f + 1, text::to_hex(&s.x1), text::to_hex(&s.x2)));
                }
            }
            out.push_str(&format!(" j={} a={}\n", t.j + 1, text::to_hex(&t.a)));
            raw = apply_transformation(g, &raw, t)?;
        }
        Ok(out)
    }

    /// Parses and replays the text form.
    pub fn from_text(g: &FreeProduct<ResidueGroup>, s: &str) -> Result<Self, ProofError> {
        let mut raw: Vec<Letter<BigUint>> = Vec::new();
        let mut steps = Vec::new();
        let body = s.strip_suffix('\n').unwrap_or(s);
        if !body.is_empty() {
            for (no, line) in body.split('\n').enumerate() {
                let no = no + 1;
                let bad = |msg: &str| FormatError::syntax(no, msg);
                let toks: Vec<&str> = line.split(' ').collect();
                if toks.len() != 4 {
                    return Err(bad("expected 4 fields").into());
                }
                let position: usize =
                    text::parse_dec(toks[0].strip_prefix("pos=").ok_or_else(|| bad("expected `pos=`"))?)?;
                let (split, split_factor) = if toks[1] == "ins" {
                    (None, None)
                } else {
                    let spec = toks[1].strip_prefix("split=").ok_or_else(|| bad("expected `ins` or `split=`"))?;
                    let parts: Vec<&str> = spec.split(':').collect();
                    if parts.len() != 3 {
                        return Err(bad("split needs factor:x1:x2").into());
                    }
                    let f: usize = text::parse_dec(parts[0])?;
                    let x1 = text::parse_hex(parts[1])?;
                    let x2 = text::parse_hex(parts[2])?;
                    (Some(Split { x1, x2 }), Some(f))
                };
                let j: usize = text::parse_dec(toks[2].strip_prefix("j=").ok_or_else(|| bad("expected `j=`"))?)?;
                let a = text::parse_hex(toks[3].strip_prefix("a=").ok_or_else(|| bad("expected `a=`"))?)?;
                if j == 0 {
                    return Err(bad("factors are 1-based").into());
                }
                if let Some(f) = split_factor {
                    let actual = raw.get(position).map(|l| l.factor + 1);
                    if actual != Some(f) {
                        return Err(bad("split factor does not match the word").into());
                    }
                }
                let t = Transformation { position, split, j: j - 1, a };
                raw = apply_transformation(g, &raw, &t)?;
                steps.push(t);
            }
        }
        let claimed = g.canonicalize(&raw)?;
        Ok(Proof { steps, claimed })
    }
}

fn random_member<R: Rng + ?Sized>(g: &ResidueGroup, rng: &mut R) -> BigUint {
    loop {
        let x = numtheory::random_unit(&g.n, rng);
        if g.contains(&x) {
            return x;
        }
    }
}

/// `s` random transformations: each picks a position in the current raw
/// word, splits the letter there at random or inserts between letters, and
/// inserts `P_j(a)` for a random factor `j` and random unit `a`.
pub fn sample_kernel<R: Rng + ?Sized>(g: &FreeProduct<ResidueGroup>, s: usize, rng: &mut R) -> Proof {
    let mut raw: Vec<Letter<BigUint>> = Vec::new();
    let mut steps = Vec::with_capacity(s);
    let k = g.factors().len();
    for _ in 0..s {
        let position = rng.gen_range(0..=raw.len());
        let split = if position < raw.len() && rng.gen_bool(0.5) {
            let x = &raw[position];
            let gi = &g.factors()[x.factor];
            let x1 = random_member(gi, rng);
            let x2 = gi.op(&gi.inverse(&x1), &x.value);
            Some(Split { x1, x2 })
        } else {
            None
        };
        let j = rng.gen_range(0..k);
        let a = numtheory::random_unit(&g.factors()[j].n, rng);
        let t = Transformation { position, split, j, a };
        raw = apply_transformation(g, &raw, &t).expect("sampled transformation is valid");
        steps.push(t);
    }
    let claimed = g.canonicalize(&raw).expect("sampled word is valid");
    Proof { steps, claimed }
}

/// One leftmost-kernel-letter deletion, recorded for proof reconstruction.
struct Deletion {
    /// Length of the untouched prefix in the shorter word.
    junction: usize,
    /// Cancelling neighbour pairs, innermost first.
    pairs: Vec<(Letter<BigUint>, BigUint)>,
    /// Non-cancelling neighbours `(l, r)` merged into one letter.
    merge: Option<(BigUint, BigUint)>,
    j: usize,
    a: BigUint,
}

/// Extracts a proof for `w` using kernel oracles, or reports non-membership.
///
/// `oracle(i, x)` must return `Some(a)` with `P_i(a) = x` exactly when `x`
/// lies in the kernel of factor `i`. Each pass scans the canonical word for
/// the leftmost kernel letter (one oracle call per scanned letter), deletes
/// it and re-canonicalizes; the word empties iff it lies in the kernel. At
/// most `|w|` passes of at most `|w|` calls are made.
pub fn extract_proof<O, E>(
    g: &FreeProduct<ResidueGroup>,
    w: &Word<BigUint>,
    mut oracle: O,
) -> Result<Membership, ProofError>
where
    O: FnMut(usize, &BigUint) -> Result<Option<BigUint>, E>,
    E: std::fmt::Display,
{
    let mut cur: Vec<Letter<BigUint>> = w.letters().to_vec();
    let mut calls = 0usize;
    let mut deletions = Vec::new();
    while !cur.is_empty() {
        let mut found = None;
        for (i, l) in cur.iter().enumerate() {
            calls += 1;
            let gi = g.factor(l.factor)?;
            if let Some(a) = oracle(l.factor, &l.value).map_err(|e| ProofError::Oracle(e.to_string()))? {
                if !gi.is_witness(&a) || gi.power(&a) != l.value {
                    return Err(ProofError::Oracle("returned a non-witness".into()));
                }
                found = Some((i, a));
                break;
            }
        }
        let Some((i, a)) = found else {
            return Ok(Membership::NotMember { oracle_calls: calls });
        };
        let j = cur[i].factor;
        let mut left: Vec<Letter<BigUint>> = cur[..i].to_vec();
        let mut right: std::collections::VecDeque<Letter<BigUint>> = cur[i + 1..].iter().cloned().collect();
        let mut pairs = Vec::new();
        let mut merge = None;
        while let (Some(l), Some(r)) = (left.last(), right.front()) {
            if l.factor != r.factor {
                break;
            }
            let (l, r) = (left.pop().expect("nonempty"), right.pop_front().expect("nonempty"));
            let gf = &g.factors()[l.factor];
            let v = gf.op(&l.value, &r.value);
            if gf.is_identity(&v) {
                pairs.push((l, r.value));
            } else {
                merge = Some((l.value, r.value));
                left.push(Letter::new(l.factor, v));
                break;
            }
        }
        let junction = if merge.is_some() { left.len() - 1 } else { left.len() };
        deletions.push(Deletion { junction, pairs, merge, j, a });
        left.extend(right);
        cur = left;
    }

    let mut steps = Vec::new();
    for d in deletions.iter().rev() {
        // innermost pair receives the real kernel letter
        let kernel_for = |idx: usize| -> (usize, BigUint) {
            if idx == 0 {
                (d.j, d.a.clone())
            } else {
                (d.pairs[idx - 1].0.factor, BigUint::from(1u32))
            }
        };
        let outer = d.pairs.len();
        let (j0, a0) = kernel_for(outer);
        let mut cur_pos = d.junction;
        match &d.merge {
            Some((l, r)) => {
                steps.push(Transformation {
                    position: d.junction,
                    split: Some(Split { x1: l.clone(), x2: r.clone() }),
                    j: j0,
                    a: a0,
                });
                cur_pos += 1;
            }
            None => steps.push(Transformation { position: d.junction, split: None, j: j0, a: a0 }),
        }
        for idx in (0..outer).rev() {
            let (pl, pr) = &d.pairs[idx];
            let (j, a) = kernel_for(idx);
            steps.push(Transformation {
                position: cur_pos,
                split: Some(Split { x1: pl.value.clone(), x2: pr.clone() }),
                j,
                a,
            });
            cur_pos += 1;
        }
    }
    let proof = Proof { steps, claimed: w.clone() };
    debug_assert_eq!(eval_proof(g, &proof).ok().as_ref(), Some(w));
    Ok(Membership::Member { proof, oracle_calls: calls })
}

/// For a proof whose steps all use factor `i`, the product of the witnesses;
/// it satisfies `P_i(a) = g` because `A_i` is abelian and `P_i` a
/// homomorphism.
pub fn reduce_to_factor(g: &FreeProduct<ResidueGroup>, pf: &Proof, i: usize) -> Result<BigUint, ProofError> {
    let gi = g.factor(i)?;
    let mut a = BigUint::from(1u32);
    for t in &pf.steps {
        if t.j != i {
            return Err(ProofError::MixedFactor { expected: i, found: t.j });
        }
        a = a * &t.a % &gi.n;
    }
    if let Some(l) = pf.claimed.letters().iter().find(|l| l.factor != i) {
        return Err(ProofError::MixedFactor { expected: i, found: l.factor });
    }
    Ok(a)
}
