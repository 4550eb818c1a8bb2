use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl From<Output> for Run {
    fn from(o: Output) -> Self {
        Run {
            code: o.status.code().unwrap_or(-1),
            stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
            stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
        }
    }
}

pub fn solvcrypt(args: &[&str]) -> Run {
    Command::new(env!("CARGO_BIN_EXE_solvcrypt")).args(args).output().expect("binary runs").into()
}

pub fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

pub fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

/// Runs keygen and returns the public and secret key paths.
pub fn keygen(dir: &Path, group: &str, bits: u32, seed: u64, tag: &str) -> (PathBuf, PathBuf) {
    let (public, secret) = (path(dir, &format!("{tag}.pub")), path(dir, &format!("{tag}.sec")));
    let seed = seed.to_string();
    let bits = bits.to_string();
    let r = solvcrypt(&[
        "--seed",
        &seed,
        "keygen",
        "--group",
        group,
        "--bits",
        &bits,
        "--pub",
        s(&public),
        "--sec",
        s(&secret),
    ]);
    assert_eq!(r.code, 0, "keygen {group} failed: {}", r.stderr);
    (public, secret)
}

pub fn encrypt(dir: &Path, public: &Path, element: &str, seed: u64, name: &str) -> PathBuf {
    let out = path(dir, name);
    let seed = seed.to_string();
    let r = solvcrypt(&["--seed", &seed, "encrypt", "--pub", s(public), element, "--out", s(&out)]);
    assert_eq!(r.code, 0, "encrypt {element} failed: {}", r.stderr);
    out
}

/// Decrypts and returns `(label, index)`.
pub fn decrypt(secret: &Path, c: &Path) -> (String, usize) {
    let r = solvcrypt(&["decrypt", "--sec", s(secret), "--in", s(c)]);
    assert_eq!(r.code, 0, "decrypt failed: {}", r.stderr);
    let (label, index) = r.stdout.trim().rsplit_once(' ').expect("label and index");
    (label.to_string(), index.parse().expect("index"))
}
