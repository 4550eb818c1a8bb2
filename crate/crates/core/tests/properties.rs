use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use solvcrypt::composite::{self, Blinding, CompositeKeyPair};
use solvcrypt::cyclic::{self, CyclicKeyPair};
use solvcrypt::fixtures;
use solvcrypt::free_product::{CyclicGroup, FactorGroup, FreeProduct, Letter, ResidueGroup, Word};
use solvcrypt::groups::{self, builtin, series, FiniteGroup, SemidirectGroup, SemidirectSpec, TableGroup};
use solvcrypt::numtheory::{self, ModulusParams};
use solvcrypt::proof::{self, Membership};

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|x| x.gcd(&n) == 1).collect()
}

fn params_77() -> ModulusParams {
    ModulusParams::from_primes(3, big(7), big(11)).unwrap()
}

fn params_21() -> ModulusParams {
    ModulusParams::from_primes(2, big(3), big(7)).unwrap()
}

/// Elements of `J_21`, the ciphertext group of the `m = 2` fixture.
fn j21() -> Vec<u64> {
    units(21).into_iter().filter(|&x| numtheory::jacobi_u(&big(x), &big(21)).unwrap() == 1).collect()
}

fn desk_g() -> FreeProduct<ResidueGroup> {
    FreeProduct::new(vec![ResidueGroup::new(big(77), 3), ResidueGroup::new(big(21), 2)])
}

fn desk_k() -> FreeProduct<CyclicGroup> {
    FreeProduct::new(vec![CyclicGroup { order: 3 }, CyclicGroup { order: 2 }])
}

fn desk_keys() -> [CyclicKeyPair; 2] {
    [fixtures::cyclic_77(), fixtures::cyclic_21()]
}

/// Raw words over the desk ciphertext group, identity letters included.
fn raw_word(max: usize) -> impl Strategy<Value = Vec<Letter<BigUint>>> {
    let u77 = units(77);
    let j = j21();
    prop::collection::vec((0usize..2, any::<prop::sample::Index>()), 0..=max).prop_map(move |v| {
        v.into_iter()
            .map(|(f, i)| {
                let value = if f == 0 { *i.get(&u77) } else { *i.get(&j) };
                Letter::new(f, big(value))
            })
            .collect()
    })
}

fn lift(w: &Word<BigUint>) -> Word<u32> {
    let keys = desk_keys();
    desk_g().lift_map(w, &desk_k(), |i, x| keys[i].coset_index(x)).unwrap()
}

// ---------------------------------------------------------------- numtheory

#[test]
fn residue_test_matches_root_extraction_exhaustively() {
    let mut r = rng(1);
    for (n, params) in [(77u64, params_77()), (21, params_21())] {
        let m = params.m;
        for g in units(n) {
            let g = big(g);
            let is_res = numtheory::residue_test(&g, &params).unwrap();
            let root = numtheory::mth_root_mod_n(&g, &params, &mut r).unwrap();
            assert_eq!(is_res, root.is_some(), "n={n} g={g}");
            if let Some(h) = root {
                assert_eq!(h.modpow(&BigUint::from(m), &big(n)), g);
            }
        }
    }
}

#[test]
fn crt_inverts_componentwise_reduction() {
    for x in 0..77u64 {
        let back = numtheory::crt_combine(&big(x % 7), &big(7), &big(x % 11), &big(11)).unwrap();
        assert_eq!(back, big(x));
    }
}

#[test]
fn mth_powers_have_index_m() {
    let cubes: BTreeSet<u64> = units(77).iter().map(|&x| x * x % 77 * x % 77).collect();
    assert_eq!(cubes.len(), 20);
    let j = j21();
    let squares: BTreeSet<u64> = j.iter().map(|&x| x * x % 21).collect();
    assert_eq!(squares.len() * 2, j.len());
}

#[test]
fn factoring_success_rate_is_geometric() {
    // runs needing more than k draws must not exceed (1/m)^k by more than
    // four standard deviations of a binomial over 1000 runs
    for (kp, m) in [(fixtures::cyclic_77(), 3u32), (fixtures::cyclic_21(), 2)] {
        let params = kp.params().clone();
        let mut r = rng(7);
        let mut oracle_rng = rng(8);
        let runs = 1000;
        let mut iterations = Vec::with_capacity(runs);
        for _ in 0..runs {
            let f = numtheory::factor_from_root_oracle(
                &params.n,
                m,
                |y| numtheory::mth_root_mod_n(y, &params, &mut oracle_rng).ok().flatten(),
                64,
                &mut r,
            )
            .unwrap();
            assert_eq!((f.p.clone(), f.q.clone()), (params.p.clone(), params.q.clone()));
            iterations.push(f.iterations);
        }
        for k in 1..=3 {
            let bound = (1.0 / m as f64).powi(k as i32);
            let frac = iterations.iter().filter(|&&i| i > k).count() as f64 / runs as f64;
            let slack = 4.0 * (bound * (1.0 - bound) / runs as f64).sqrt();
            assert!(frac <= bound + slack, "m={m} k={k} frac={frac}");
        }
    }
}

const PRIMES_1_MOD_3: [u64; 6] = [7, 13, 19, 31, 37, 43];

proptest! {
    #[test]
    fn amm_roots_are_roots(pi in 0usize..6, x in 1u64..1000, seed: u64) {
        let p = big(PRIMES_1_MOD_3[pi]);
        let g = big(x) % &p;
        prop_assume!(g != BigUint::from(0u32));
        let cube = g.modpow(&big(3), &p);
        let root = numtheory::mth_root_mod_prime(&cube, &p, 3, &mut rng(seed)).unwrap().unwrap();
        prop_assert_eq!(root.modpow(&big(3), &p), cube);
    }

    #[test]
    fn jacobi_is_multiplicative_and_matches_euler(a in 1u64..10_000, b in 1u64..10_000, n in 1u64..500) {
        let n = 2 * n + 1;
        let j = |x: u64| numtheory::jacobi(&BigInt::from(x), &big(n)).unwrap();
        prop_assert_eq!(j(a) * j(b), j(a * b));
        if numtheory::is_probable_prime(&big(n), &mut rng(0)) && a % n != 0 {
            let e = big(a).modpow(&big((n - 1) / 2), &big(n));
            let expect = if e == BigUint::from(1u32) { 1 } else { -1 };
            prop_assert_eq!(j(a), expect);
        }
    }

    #[test]
    fn factoring_always_returns_the_primes(seed: u64) {
        let kp = fixtures::cyclic_77();
        let params = kp.params().clone();
        let mut oracle_rng = rng(seed ^ 1);
        let f = numtheory::factor_from_root_oracle(
            &params.n,
            3,
            |y| numtheory::mth_root_mod_n(y, &params, &mut oracle_rng).ok().flatten(),
            64,
            &mut rng(seed),
        )
        .unwrap();
        prop_assert_eq!(f.p, big(7));
        prop_assert_eq!(f.q, big(11));
    }
}

// ---------------------------------------------------------------- cyclic

#[test]
fn coset_index_is_a_homomorphism_mod_21() {
    let kp = fixtures::cyclic_21();
    for a in units(21) {
        for b in units(21) {
            let s = kp.coset_index(&big(a * b % 21)).unwrap();
            let t = (kp.coset_index(&big(a)).unwrap() + kp.coset_index(&big(b)).unwrap()) % 2;
            assert_eq!(s, t);
        }
    }
}

#[test]
fn ciphertexts_of_h_are_exactly_a_coset() {
    let kp = fixtures::cyclic_77();
    let cubes: BTreeSet<u64> = units(77).iter().map(|&x| x * x % 77 * x % 77).collect();
    for h in 0..3u32 {
        let rep = &kp.public.reps[h as usize];
        let coset: BTreeSet<BigUint> = cubes.iter().map(|&c| big(c) * rep % big(77)).collect();
        let cts: BTreeSet<BigUint> = units(77).iter().map(|&a| kp.public.encrypt_with(h, &big(a)).unwrap()).collect();
        assert_eq!(cts, coset);
    }
}

#[test]
fn kernel_is_the_mth_powers() {
    for (kp, group) in [(fixtures::cyclic_77(), units(77)), (fixtures::cyclic_21(), j21())] {
        let n = kp.public.n.clone();
        let m = BigUint::from(kp.m());
        let powers: BTreeSet<BigUint> = group.iter().map(|&x| big(x).modpow(&m, &n)).collect();
        let images: BTreeSet<BigUint> = group.iter().map(|&a| kp.public.power(&big(a))).collect();
        let kernel: BTreeSet<BigUint> =
            group.iter().map(|&x| big(x)).filter(|x| kp.coset_index(x).unwrap() == 0).collect();
        assert_eq!(kernel, powers);
        assert_eq!(images, powers);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclic_round_trip(h in 0u32..3, seed: u64) {
        let kp = fixtures::cyclic_77();
        let c = kp.public.encrypt(h, &mut rng(seed)).unwrap();
        prop_assert_eq!(kp.decrypt(&c).unwrap(), h);
        prop_assert_eq!(kp.coset_index(&c).unwrap(), h);
    }

    #[test]
    fn coset_index_homomorphism_mod_77(a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let u = units(77);
        let (a, b) = (*a.get(&u), *b.get(&u));
        let kp = fixtures::cyclic_77();
        let s = kp.coset_index(&big(a * b % 77)).unwrap();
        prop_assert_eq!(s, (kp.coset_index(&big(a)).unwrap() + kp.coset_index(&big(b)).unwrap()) % 3);
    }

    #[test]
    fn generated_keys_round_trip_through_text(seed: u64, m in prop::sample::select(vec![2u32, 3, 5])) {
        let kp = cyclic::keygen_cyclic(m, 24, &mut rng(seed)).unwrap();
        let back = CyclicKeyPair::from_text(&kp.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), kp.to_text());
        let mut r = rng(seed ^ 3);
        for h in 0..m {
            let c = kp.public.encrypt(h, &mut r).unwrap();
            prop_assert_eq!(back.decrypt(&c).unwrap(), h);
        }
    }
}

// ---------------------------------------------------------------- free product

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonicalize_is_idempotent_and_shortening(raw in raw_word(8)) {
        let g = desk_g();
        let w = g.canonicalize(&raw).unwrap();
        prop_assert!(w.len() <= raw.len());
        prop_assert_eq!(g.canonicalize(w.letters()).unwrap(), w.clone());
        let letters = w.letters();
        prop_assert!(letters.windows(2).all(|p| p[0].factor != p[1].factor));
        prop_assert!(letters.iter().all(|l| !g.factors()[l.factor].is_identity(&l.value)));
    }

    #[test]
    fn group_axioms(a in raw_word(8), b in raw_word(8), c in raw_word(8)) {
        let g = desk_g();
        let (a, b, c) = (g.canonicalize(&a).unwrap(), g.canonicalize(&b).unwrap(), g.canonicalize(&c).unwrap());
        prop_assert_eq!(g.multiply(&g.multiply(&a, &b), &c), g.multiply(&a, &g.multiply(&b, &c)));
        prop_assert_eq!(g.multiply(&a, &Word::empty()), a.clone());
        prop_assert_eq!(g.multiply(&Word::empty(), &a), a.clone());
        prop_assert!(g.multiply(&a, &g.invert(&a)).is_empty());
        prop_assert!(g.multiply(&g.invert(&a), &a).is_empty());
        prop_assert!(g.multiply(&a, &b).len() <= a.len() + b.len());
    }

    #[test]
    fn lift_is_a_homomorphism(a in raw_word(8), b in raw_word(8)) {
        let g = desk_g();
        let k = desk_k();
        let (a, b) = (g.canonicalize(&a).unwrap(), g.canonicalize(&b).unwrap());
        prop_assert_eq!(lift(&g.multiply(&a, &b)), k.multiply(&lift(&a), &lift(&b)));
    }

    #[test]
    fn transversal_decomposition_recomposes(raw in raw_word(8)) {
        let g = desk_g();
        let keys = desk_keys();
        let w = g.canonicalize(&raw).unwrap();
        let reps = vec![keys[0].public.reps.clone(), keys[1].public.reps.clone()];
        let (g0, r) = g.transversal_decompose(&w, &desk_k(), |i, x| keys[i].coset_index(x), &reps).unwrap();
        prop_assert_eq!(g.multiply(&g0, &r), w.clone());
        prop_assert!(lift(&g0).is_empty());
        prop_assert_eq!(lift(&r), lift(&w));
    }

    #[test]
    fn word_text_round_trip(raw in raw_word(8)) {
        let g = desk_g();
        let w = g.canonicalize(&raw).unwrap();
        prop_assert_eq!(g.parse_word(&g.format_word(&w)).unwrap(), w);
        let parsed_raw = g.parse_raw(&g.format_raw(&raw)).unwrap();
        prop_assert_eq!(parsed_raw, raw);
    }
}

// ---------------------------------------------------------------- proofs

#[test]
fn short_kernel_words_have_proofs() {
    let g = desk_g();
    let keys = desk_keys();
    let mut r = rng(11);
    let mut letters: Vec<Letter<BigUint>> = units(77).into_iter().skip(1).map(|x| Letter::new(0, big(x))).collect();
    letters.extend(j21().into_iter().skip(1).map(|x| Letter::new(1, big(x))));
    let mut words = vec![Vec::new()];
    for a in &letters {
        words.push(vec![a.clone()]);
        for b in &letters {
            if a.factor != b.factor {
                words.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    let mut members = 0;
    for raw in words {
        let w = g.word_from_canonical(raw).unwrap();
        let in_kernel = lift(&w).is_empty();
        match proof::extract_proof(&g, &w, |i, x| keys[i].kernel_witness(x, &mut r)).unwrap() {
            Membership::Member { proof, oracle_calls } => {
                assert!(in_kernel);
                members += 1;
                assert_eq!(proof::eval_proof(&g, &proof).unwrap(), w);
                assert!(oracle_calls <= w.len() * w.len());
            }
            Membership::NotMember { .. } => assert!(!in_kernel),
        }
    }
    // 19 + 2 single letters, 19 * 2 * 2 two-letter words, and the empty word
    assert_eq!(members, 1 + 19 + 2 + 76);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sampled_proofs_are_sound_and_extractable(seed: u64, s in 0usize..12) {
        let g = desk_g();
        let keys = desk_keys();
        let mut r = rng(seed);
        let pf = proof::sample_kernel(&g, s, &mut r);
        let w = proof::eval_proof(&g, &pf).unwrap();
        prop_assert!(lift(&w).is_empty());
        match proof::extract_proof(&g, &w, |i, x| keys[i].kernel_witness(x, &mut r)).unwrap() {
            Membership::Member { proof, oracle_calls } => {
                prop_assert_eq!(proof::eval_proof(&g, &proof).unwrap(), w.clone());
                prop_assert!(oracle_calls <= w.len() * w.len());
            }
            Membership::NotMember { .. } => prop_assert!(false, "kernel element rejected"),
        }
        let text = pf.to_text(&g).unwrap();
        prop_assert_eq!(proof::Proof::from_text(&g, &text).unwrap(), pf);
    }
}

// ---------------------------------------------------------------- groups

fn specs() -> Vec<SemidirectSpec> {
    let mut v = vec![builtin::s3_spec(), builtin::z2_wr_z2_spec(), SemidirectSpec::direct(vec![2, 3, 5]).unwrap()];
    v.push(groups::solvable_to_pi(&builtin::d4()).unwrap().spec);
    v.push(groups::solvable_to_pi(&builtin::q8()).unwrap().spec);
    v
}

fn k_word(spec: &SemidirectSpec, raw: &[(prop::sample::Index, u32)]) -> Word<u32> {
    let factors = spec.factors();
    let letters: Vec<Letter<u32>> = raw
        .iter()
        .map(|(i, v)| {
            let f = i.index(factors.len());
            Letter::new(f, v % factors[f])
        })
        .collect();
    spec.k_product().canonicalize(&letters).unwrap()
}

#[test]
fn project_q_inverts_decompose_on_every_spec() {
    for spec in specs() {
        for h in 0..spec.order() {
            let w = spec.element_word(h);
            assert!(w.len() <= spec.factors().len());
            assert_eq!(spec.project_q(&w).unwrap(), h);
            assert_eq!(spec.compose_element(&spec.decompose_element(h)), h);
        }
    }
}

#[test]
fn semidirect_order_and_normal_base() {
    for spec in specs() {
        let g = SemidirectGroup::build(spec.clone());
        let product: usize = spec.factors().iter().map(|&p| p as usize).product();
        assert_eq!(g.order(), product);
        let base: Vec<usize> = (0..spec.layer_order(0)).collect();
        assert!(series::is_normal(&g, &base));
        assert_eq!(series::closure(&g, &base), base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn project_q_is_a_homomorphism(
        si in 0usize..5,
        a in prop::collection::vec((any::<prop::sample::Index>(), 1u32..5), 0..10),
        b in prop::collection::vec((any::<prop::sample::Index>(), 1u32..5), 0..10),
    ) {
        let spec = &specs()[si];
        let (a, b) = (k_word(spec, &a), k_word(spec, &b));
        let k = spec.k_product();
        let ab = k.multiply(&a, &b);
        let (qa, qb) = (spec.project_q(&a).unwrap(), spec.project_q(&b).unwrap());
        let (qab, trace) = spec.project_q_traced(&ab).unwrap();
        prop_assert_eq!(qab, spec.mul(qa, qb));
        prop_assert!(trace.iter().all(|&l| l <= ab.len()));
    }

    #[test]
    fn spec_text_round_trip(si in 0usize..5) {
        let spec = &specs()[si];
        let back = SemidirectSpec::from_text(&spec.to_text()).unwrap();
        prop_assert_eq!(&back, spec);
    }

    #[test]
    fn pipeline_on_direct_products(i in 0usize..6, j in 0usize..6) {
        let pool = [builtin::cyclic(2), builtin::cyclic(3), builtin::z4(), builtin::s3(), builtin::cyclic(5), builtin::z6()];
        let (a, b) = (&pool[i], &pool[j]);
        let n = a.order() * b.order();
        let table = (0..n * n)
            .map(|x| {
                let (u, v) = (x / n, x % n);
                let (u1, u2, v1, v2) = (u % a.order(), u / a.order(), v % a.order(), v / a.order());
                (a.mul(u1, v1) + a.order() * b.mul(u2, v2)) as u32
            })
            .collect();
        let g = TableGroup::from_table(n, table).unwrap();
        match groups::solvable_to_pi(&g) {
            Ok(pi) => {
                prop_assert_eq!(pi.embedding.source_order(), n);
                prop_assert!(pi.group.order() <= groups::semidirect::MAX_PI_ORDER);
                prop_assert_eq!(pi.group.order() % n, 0);
            }
            Err(groups::GroupError::SizeBudgetExceeded { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn table_text_round_trip(i in 0usize..6) {
        let g = [builtin::s3(), builtin::z4(), builtin::z6(), builtin::d4(), builtin::q8(), builtin::a5()][i].clone();
        let back = TableGroup::from_text(&g.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), g.to_text());
    }
}

// ---------------------------------------------------------------- composite

fn z4_system() -> CompositeKeyPair {
    let pi = groups::solvable_to_pi(&builtin::z4()).unwrap();
    let kp = composite::keygen_composite(pi.spec.clone(), 16, 4, &mut rng(99)).unwrap();
    kp.restrict_to_subgroup(pi.embedding.map(), None).unwrap()
}

#[test]
fn z4_system_round_trip_and_homomorphism() {
    let kp = z4_system();
    let pk = &kp.public;
    let mut r = rng(5);
    let z4 = builtin::z4();
    for a in 0..4 {
        for b in 0..4 {
            let (ha, hb) = (pk.plaintexts()[a], pk.plaintexts()[b]);
            let c = pk.eval_multiply(&pk.encrypt(ha, &mut r).unwrap(), &pk.encrypt(hb, &mut r).unwrap()).unwrap();
            let h = kp.decrypt(&c).unwrap();
            assert_eq!(pk.plaintext_index(h), Some(z4.mul(a, b)));
        }
    }
}

#[test]
fn shifted_blinding_breaks_the_naive_kernel_test() {
    // a kernel element r(k) r(Q(k))^{-1} with Q(k) = 1 but k nonempty
    let kp = fixtures::s3_keypair();
    let pk = &kp.public;
    let k = pk.spec().k_product();
    let shift = k.canonicalize(&[Letter::new(1, 1), Letter::new(0, 1), Letter::new(1, 1), Letter::new(0, 1)]).unwrap();
    assert_eq!(pk.spec().project_q(&shift).unwrap(), 0);
    let c = pk.encrypt_with_blinding(0, &Blinding { proof: proof::Proof::empty(), shift }).unwrap();
    assert_eq!(kp.decrypt(&c).unwrap(), 0);
    assert!(!lift(&c.word).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composite_round_trip(h in 0usize..6, seed: u64, s in 0usize..10) {
        let kp = fixtures::s3_keypair().with_blinding(s);
        let c = kp.public.encrypt(h, &mut rng(seed)).unwrap();
        prop_assert_eq!(kp.decrypt(&c).unwrap(), h);
    }

    #[test]
    fn composite_homomorphism_and_growth(h1 in 0usize..6, h2 in 0usize..6, seed: u64) {
        let kp = fixtures::s3_keypair();
        let pk = &kp.public;
        let mut r = rng(seed);
        let (c1, c2) = (pk.encrypt(h1, &mut r).unwrap(), pk.encrypt(h2, &mut r).unwrap());
        let c = pk.eval_multiply(&c1, &c2).unwrap();
        prop_assert!(c.len() <= c1.len() + c2.len());
        prop_assert_eq!(kp.decrypt(&c).unwrap(), pk.spec().mul(h1, h2));
        prop_assert_eq!(kp.decrypt(&pk.eval_invert(&c1).unwrap()).unwrap(), pk.spec().inv(h1));
    }

    #[test]
    fn kernel_characterization(h in 0usize..6, seed: u64, proof_only: bool) {
        let kp = fixtures::s3_keypair();
        let pk = &kp.public;
        let mut r = rng(seed);
        let mut b = pk.sample_blinding(6, &mut r);
        if proof_only {
            b.shift = Word::empty();
        }
        let c = pk.encrypt_with_blinding(h, &b).unwrap();
        let reps: Vec<Vec<BigUint>> = pk.factors().iter().map(|f| f.reps.clone()).collect();
        let keys = kp.secrets();
        let (_, rpart) = pk
            .ciphertext_group()
            .transversal_decompose(&c.word, &desk_k(), |i, x| keys[i].coset_index(x), &reps)
            .unwrap();
        // g lies in ker f iff f(r) = 1
        let f_r = pk.spec().project_q(&kp.lift(&rpart).unwrap()).unwrap();
        prop_assert_eq!(kp.decrypt(&c).unwrap() == 0, f_r == 0);
        if proof_only {
            prop_assert_eq!(kp.decrypt(&c).unwrap() == 0, rpart.is_empty());
        }
    }

    #[test]
    fn exact_sequence(seed: u64, s in 0usize..10) {
        let kp = fixtures::s3_keypair();
        let pk = &kp.public;
        let mut r = rng(seed);
        let pf = proof::sample_kernel(pk.ciphertext_group(), s, &mut r);
        let w = proof::eval_proof(pk.ciphertext_group(), &pf).unwrap();
        let c = solvcrypt::Ciphertext { word: w, key_id: pk.fingerprint().to_string() };
        prop_assert_eq!(kp.decrypt(&c).unwrap(), 0);
        let extracted = matches!(kp.extract(&c.word, &mut r).unwrap(), Membership::Member { .. });
        prop_assert!(extracted);
    }

    #[test]
    fn rerandomize_keeps_plaintext(h in 0usize..6, seed: u64) {
        let kp = fixtures::s3_keypair();
        let mut r = rng(seed);
        let c = kp.public.encrypt(h, &mut r).unwrap();
        let c2 = kp.public.rerandomize(&c, &mut r).unwrap();
        prop_assert_eq!(kp.decrypt(&c2).unwrap(), h);
    }

    #[test]
    fn ciphertext_text_round_trip(h in 0usize..6, seed: u64) {
        let kp = fixtures::s3_keypair();
        let pk = &kp.public;
        let c = pk.encrypt(h, &mut rng(seed)).unwrap();
        prop_assert_eq!(solvcrypt::Ciphertext::from_text(&c.to_text(pk), pk).unwrap(), c);
    }
}

// ---------------------------------------------------------------- parsers

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parsers_never_panic(s in "(?s).{0,200}") {
        let g = desk_g();
        let _ = g.parse_raw(&s);
        let _ = g.parse_word(&s);
        let _ = proof::Proof::from_text(&g, &s);
        let _ = CyclicKeyPair::from_text(&s);
        let _ = solvcrypt::CyclicPublicKey::from_text(&s);
        let _ = SemidirectSpec::from_text(&s);
        let _ = TableGroup::from_text(&s);
        let _ = solvcrypt::CompositePublicKey::from_text(&s);
        let _ = CompositeKeyPair::from_text(&s);
        let pk = fixtures::s3_keypair().public;
        let _ = solvcrypt::Ciphertext::from_text(&s, &pk);
    }

    #[test]
    fn mutated_keys_never_panic(pos in any::<prop::sample::Index>(), byte in any::<u8>()) {
        let text = fixtures::s3_keypair().to_text().into_bytes();
        let mut t = text.clone();
        let i = pos.index(t.len());
        t[i] = byte;
        if let Ok(s) = String::from_utf8(t) {
            let _ = CompositeKeyPair::from_text(&s);
            let _ = solvcrypt::CompositePublicKey::from_text(&s);
        }
    }
}
