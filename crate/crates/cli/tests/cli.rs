mod common;

use std::fs;

use common::*;
use solvcrypt::fixtures;

#[test]
fn every_s3_label_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (public, secret) = keygen(dir.path(), "builtin:S3", 24, 1, "s3");
    for (i, label) in solvcrypt::groups::builtin::S3_LABELS.iter().enumerate() {
        let c = encrypt(dir.path(), &public, label, 10 + i as u64, &format!("c{i}"));
        assert_eq!(decrypt(&secret, &c), (label.to_string(), i));
    }
    // plaintext indices work as well as labels
    let c = encrypt(dir.path(), &public, "4", 3, "by_index");
    assert_eq!(decrypt(&secret, &c).0, "(b,a)");
}

#[test]
fn eval_mul_and_inv() {
    let dir = tempfile::tempdir().unwrap();
    let (public, secret) = keygen(dir.path(), "builtin:S3", 24, 2, "s3");
    let b = encrypt(dir.path(), &public, "(b,e)", 1, "b");
    let a = encrypt(dir.path(), &public, "(e,a)", 2, "a");
    let ba = path(dir.path(), "ba");
    let r = solvcrypt(&["eval", "--pub", s(&public), "mul", s(&b), s(&a), "--out", s(&ba)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(decrypt(&secret, &ba).0, "(b,a)");
    let inv = path(dir.path(), "inv");
    let r = solvcrypt(&["eval", "--pub", s(&public), "inv", s(&b), "--out", s(&inv)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(decrypt(&secret, &inv).0, "(b2,e)");
    let re = path(dir.path(), "re");
    let r = solvcrypt(&["--seed", "4", "rerandomize", "--pub", s(&public), "--in", s(&ba), "--out", s(&re)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_ne!(fs::read_to_string(&re).unwrap(), fs::read_to_string(&ba).unwrap());
    assert_eq!(decrypt(&secret, &re).0, "(b,a)");
}

#[test]
fn wrong_key_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let (public, _) = keygen(dir.path(), "builtin:S3", 16, 3, "one");
    let (other_pub, other_sec) = keygen(dir.path(), "builtin:S3", 16, 4, "two");
    let c = encrypt(dir.path(), &public, "(b,e)", 1, "c");
    assert_eq!(solvcrypt(&["decrypt", "--sec", s(&other_sec), "--in", s(&c)]).code, 4);
    let c2 = encrypt(dir.path(), &other_pub, "(b,e)", 1, "c2");
    assert_eq!(solvcrypt(&["eval", "--pub", s(&public), "mul", s(&c), s(&c2)]).code, 4);
}

#[test]
fn malformed_input_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let (public, secret) = keygen(dir.path(), "builtin:S3", 16, 5, "k");
    let c = encrypt(dir.path(), &public, "(b,e)", 1, "c");
    let text = fs::read_to_string(&c).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let bad_word = "1:zz";
    lines[2] = bad_word;
    let bad = path(dir.path(), "bad");
    fs::write(&bad, lines.join("\n") + "\n").unwrap();
    assert_eq!(solvcrypt(&["decrypt", "--sec", s(&secret), "--in", s(&bad)]).code, 5);
    fs::write(&bad, "garbage\n").unwrap();
    assert_eq!(solvcrypt(&["decrypt", "--sec", s(&secret), "--in", s(&bad)]).code, 5);
    assert_eq!(solvcrypt(&["encrypt", "--pub", s(&public), "(c,d)"]).code, 5);
    assert_eq!(solvcrypt(&["keygen", "--group", "builtin:S4", "--pub", "x", "--sec", "y"]).code, 5);
    assert_eq!(solvcrypt(&["keygen", "--group", "cyclic:4", "--pub", "x", "--sec", "y"]).code, 5);
    fs::write(&bad, "order=2\n0 1\n1 1\n").unwrap();
    let group = format!("table:{}", s(&bad));
    assert_eq!(solvcrypt(&["keygen", "--group", &group, "--pub", "x", "--sec", "y"]).code, 5);
}

#[test]
fn size_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // Z2^17 exceeds the 2^16 element budget
    let spec = path(dir.path(), "big.spec");
    fs::write(&spec, format!("factors={}\n", vec!["2"; 17].join(","))).unwrap();
    let group = format!("semidirect:{}", s(&spec));
    let r = solvcrypt(&["keygen", "--group", &group, "--pub", "x", "--sec", "y"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
}

#[test]
fn semidirect_and_cyclic_groups() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(dir.path(), "s3.spec");
    fs::write(&spec, solvcrypt::groups::builtin::s3_spec().to_text()).unwrap();
    let (public, secret) = keygen(dir.path(), &format!("semidirect:{}", s(&spec)), 16, 6, "sd");
    let c = encrypt(dir.path(), &public, "5", 1, "c");
    assert_eq!(decrypt(&secret, &c), ("5".to_string(), 5));
    let (public, secret) = keygen(dir.path(), "cyclic:5", 16, 7, "z5");
    let c = encrypt(dir.path(), &public, "3", 1, "c5");
    assert_eq!(decrypt(&secret, &c).1, 3);
}

#[test]
fn attack_prints_fixture_factors() {
    let dir = tempfile::tempdir().unwrap();
    for (kp, expect) in [(fixtures::cyclic_77(), "7 11"), (fixtures::cyclic_21(), "3 7")] {
        let key = path(dir.path(), "key");
        fs::write(&key, kp.to_text()).unwrap();
        let n = kp.public.n.to_string();
        let m = kp.m().to_string();
        let r = solvcrypt(&["--seed", "1", "attack", "--sec", s(&key), "--n", &n, "--m", &m]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.stdout.lines().next(), Some(expect));
        assert!(r.stdout.contains("iterations="));
        assert_eq!(solvcrypt(&["attack", "--sec", s(&key), "--n", "35"]).code, 4);
    }
    // a composite key works too, factor by factor
    let key = path(dir.path(), "s3.sec");
    fs::write(&key, fixtures::s3_keypair().to_text()).unwrap();
    let r = solvcrypt(&["--seed", "2", "attack", "--sec", s(&key), "--factor", "2"]);
    assert_eq!(r.stdout.lines().next(), Some("3 7"));
}

#[test]
fn bench_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "bench.csv");
    let r = solvcrypt(&[
        "--seed",
        "1",
        "bench",
        "--sizes",
        "32",
        "--groups",
        "Z2,S3,Z2wrZ2",
        "--trials",
        "3",
        "--sweep",
        "0,16",
        "--format",
        "csv",
        "--out",
        s(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("op,group,bits,mean_ms,p95_ms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 6);
    for r in &rows {
        assert_eq!(r.len(), 5);
        assert_eq!(r[2], "32");
        let (mean, p95): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!(mean >= 0.0 && p95 >= 0.0);
    }
    let ops: Vec<&str> = rows.iter().take(6).map(|r| r[0]).collect();
    assert_eq!(ops, ["keygen", "encrypt", "eval", "decrypt", "encrypt_s0", "encrypt_s16"]);
}

#[test]
fn bench_s3_at_512_bits() {
    let r = solvcrypt(&["--seed", "1", "bench", "--sizes", "512", "--groups", "S3", "--trials", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for op in ["keygen", "encrypt", "eval", "decrypt"] {
        assert!(r.stdout.lines().any(|l| l.starts_with(op) && l.contains("S3") && l.contains("512")), "{op} missing");
    }
}

#[test]
fn encrypt_time_grows_with_blinding() {
    let r = solvcrypt(&[
        "--seed",
        "1",
        "bench",
        "--sizes",
        "64",
        "--groups",
        "S3",
        "--trials",
        "30",
        "--sweep",
        "0,32,128,512",
        "--format",
        "csv",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let means: Vec<f64> = r
        .stdout
        .lines()
        .filter(|l| l.starts_with("encrypt_s"))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(means.len(), 4);
    assert!(means.windows(2).all(|w| w[0] < w[1]), "encrypt means {means:?}");
}
