use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use solvcrypt::composite::{self, CompositeKeyPair, CompositePublicKey};
use solvcrypt::cyclic::CyclicKeyPair;
use solvcrypt::groups::{self, builtin, SemidirectSpec, TableGroup};
use solvcrypt::{numtheory, Ciphertext};

use crate::error::CliError;

pub fn make_rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Other(format!("stdout: {e}"))),
    }
}

/// A parsed `--group` argument.
pub enum GroupInput {
    /// Used as the plaintext group directly.
    Spec(SemidirectSpec),
    /// Embedded through the solvable-group pipeline first.
    Table(TableGroup),
}

pub fn parse_group(arg: &str) -> Result<GroupInput, CliError> {
    let (kind, rest) =
        arg.split_once(':').ok_or_else(|| CliError::Malformed(format!("group `{arg}` must look like kind:value")))?;
    match kind {
        "cyclic" => {
            let p: u32 = rest.parse().map_err(|_| CliError::Malformed(format!("bad cyclic order `{rest}`")))?;
            Ok(GroupInput::Spec(SemidirectSpec::direct(vec![p])?))
        }
        "semidirect" => {
            let path = Path::new(rest);
            Ok(GroupInput::Spec(SemidirectSpec::from_text(&read(path)?).map_err(|e| CliError::from(e).in_file(path))?))
        }
        "table" => {
            let path = Path::new(rest);
            Ok(GroupInput::Table(TableGroup::from_text(&read(path)?).map_err(|e| CliError::from(e).in_file(path))?))
        }
        "builtin" => builtin::by_name(rest)
            .map(GroupInput::Table)
            .ok_or_else(|| CliError::Malformed(format!("unknown builtin group `{rest}`"))),
        _ => Err(CliError::Malformed(format!("unknown group kind `{kind}`"))),
    }
}

/// Key pair for a group argument; table groups are embedded and the key is
/// restricted to the image.
pub fn keypair_for<R: Rng>(group: &str, bits: u32, blinding: usize, rng: &mut R) -> Result<CompositeKeyPair, CliError> {
    match parse_group(group)? {
        GroupInput::Spec(spec) => Ok(composite::keygen_composite(spec, bits, blinding, rng)?),
        GroupInput::Table(g) => {
            let pi = groups::solvable_to_pi(&g)?;
            let kp = composite::keygen_composite(pi.spec.clone(), bits, blinding, rng)?;
            let labels = g.labels().map(<[String]>::to_vec);
            Ok(kp.restrict_to_subgroup(pi.embedding.map(), labels)?)
        }
    }
}

pub fn keygen<R: Rng>(
    group: &str,
    bits: u32,
    blinding: usize,
    public: &Path,
    secret: &Path,
    rng: &mut R,
) -> Result<(), CliError> {
    let kp = keypair_for(group, bits, blinding, rng)?;
    write_out(Some(public), &kp.public.to_text())?;
    write_out(Some(secret), &kp.to_text())?;
    Ok(())
}

fn load_public(path: &Path) -> Result<CompositePublicKey, CliError> {
    CompositePublicKey::from_text(&read(path)?).map_err(|e| CliError::from(e).in_file(path))
}

fn load_secret(path: &Path) -> Result<CompositeKeyPair, CliError> {
    CompositeKeyPair::from_text(&read(path)?).map_err(|e| CliError::from(e).in_file(path))
}

fn load_ciphertext(path: &Path, pk: &CompositePublicKey) -> Result<Ciphertext, CliError> {
    Ciphertext::from_text(&read(path)?, pk).map_err(|e| CliError::from(e).in_file(path))
}

/// Plaintext index of a label, or of a decimal index.
pub fn resolve_element(pk: &CompositePublicKey, element: &str) -> Result<usize, CliError> {
    if let Some(i) = pk.labels().and_then(|l| l.iter().position(|x| x == element)) {
        return Ok(i);
    }
    match element.parse::<usize>() {
        Ok(i) if i < pk.plaintexts().len() => Ok(i),
        _ => Err(CliError::Malformed(format!("unknown element `{element}`"))),
    }
}

pub fn label_of(pk: &CompositePublicKey, i: usize) -> String {
    match pk.labels() {
        Some(l) => l[i].clone(),
        None => i.to_string(),
    }
}

pub fn encrypt<R: Rng>(public: &Path, element: &str, out: Option<&Path>, rng: &mut R) -> Result<(), CliError> {
    let pk = load_public(public)?;
    let i = resolve_element(&pk, element)?;
    let c = pk.encrypt(pk.plaintexts()[i], rng)?;
    write_out(out, &c.to_text(&pk))
}

pub fn decrypt(secret: &Path, input: &Path) -> Result<(), CliError> {
    let kp = load_secret(secret)?;
    let c = load_ciphertext(input, &kp.public)?;
    let h = kp.decrypt(&c)?;
    let i = kp.public.plaintext_index(h).expect("decrypt returns plaintext elements");
    println!("{} {i}", label_of(&kp.public, i));
    Ok(())
}

pub fn eval_mul(public: &Path, c1: &Path, c2: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let pk = load_public(public)?;
    let (a, b) = (load_ciphertext(c1, &pk)?, load_ciphertext(c2, &pk)?);
    write_out(out, &pk.eval_multiply(&a, &b)?.to_text(&pk))
}

pub fn eval_inv(public: &Path, c: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let pk = load_public(public)?;
    let a = load_ciphertext(c, &pk)?;
    write_out(out, &pk.eval_invert(&a)?.to_text(&pk))
}

pub fn rerandomize<R: Rng>(public: &Path, input: &Path, out: Option<&Path>, rng: &mut R) -> Result<(), CliError> {
    let pk = load_public(public)?;
    let c = load_ciphertext(input, &pk)?;
    write_out(out, &pk.rerandomize(&c, rng)?.to_text(&pk))
}

fn load_cyclic(path: &Path, factor: usize) -> Result<CyclicKeyPair, CliError> {
    let text = read(path)?;
    if text.starts_with("CYCKEY") {
        return CyclicKeyPair::from_text(&text).map_err(|e| CliError::from(e).in_file(path));
    }
    let kp = CompositeKeyPair::from_text(&text).map_err(|e| CliError::from(e).in_file(path))?;
    factor
        .checked_sub(1)
        .and_then(|i| kp.secrets().get(i))
        .cloned()
        .ok_or_else(|| CliError::Malformed(format!("key has no factor {factor}")))
}

pub fn attack<R: Rng>(
    secret: &Path,
    factor: usize,
    n: Option<&str>,
    m: Option<u32>,
    runs: usize,
    budget: usize,
    rng: &mut R,
) -> Result<(), CliError> {
    let kp = load_cyclic(secret, factor)?;
    let params = kp.params().clone();
    if let Some(n) = n {
        let n: BigUint = n.parse().map_err(|_| CliError::Malformed(format!("bad modulus `{n}`")))?;
        if n != params.n {
            return Err(CliError::KeyMismatch(format!("key modulus is {}, not {n}", params.n)));
        }
    }
    if m.is_some_and(|m| m != params.m) {
        return Err(CliError::KeyMismatch(format!("key has m={}", params.m)));
    }
    if runs == 0 {
        return Err(CliError::Malformed("--runs must be positive".into()));
    }
    let mut total = 0usize;
    let mut found = None;
    for _ in 0..runs {
        let mut oracle_rng = ChaCha20Rng::seed_from_u64(rng.gen());
        let f = numtheory::factor_from_root_oracle(
            &params.n,
            params.m,
            |y| numtheory::mth_root_mod_n(y, &params, &mut oracle_rng).ok().flatten(),
            budget,
            rng,
        )?;
        total += f.iterations;
        found = Some(f);
    }
    let f = found.expect("runs > 0");
    println!("{} {}", f.p, f.q);
    if runs == 1 {
        println!("iterations={}", f.iterations);
    } else {
        println!("runs={runs}");
        println!("mean_iterations={:.4}", total as f64 / runs as f64);
    }
    Ok(())
}
