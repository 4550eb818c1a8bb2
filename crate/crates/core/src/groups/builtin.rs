//! Small named groups used as fixtures and by the command-line tool.

use super::semidirect::{SemidirectGroup, SemidirectSpec};
use super::table::TableGroup;

fn from_fn(order: usize, labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> TableGroup {
    let table = (0..order * order).map(|i| mul(i / order, i % order) as u32).collect();
    TableGroup::from_table(order, table).and_then(|g| g.with_labels(labels)).expect("builtin table is a group")
}

/// `Z_n` with labels `0..n`.
pub fn cyclic(n: usize) -> TableGroup {
    from_fn(n, (0..n).map(|i| i.to_string()).collect(), |a, b| (a + b) % n)
}

pub fn z4() -> TableGroup {
    cyclic(4)
}

pub fn z6() -> TableGroup {
    cyclic(6)
}

/// `Π(Z3, Z2)` with `Z2` acting on `Z3 = <b>` by inversion.
pub fn s3_spec() -> SemidirectSpec {
    SemidirectSpec::tower(vec![3, 2], vec![vec![vec![0, 1, 2], vec![0, 2, 1]]]).expect("valid spec")
}

pub const S3_LABELS: [&str; 6] = ["(e,e)", "(b,e)", "(b2,e)", "(e,a)", "(b,a)", "(b2,a)"];

/// The symmetric group on three points as `Π(Z3, Z2)`; element `k1 + 3 k2`
/// is `(b^k1, a^k2)`.
pub fn s3() -> TableGroup {
    let g = SemidirectGroup::build(s3_spec());
    TableGroup::from_group(&g).with_labels(S3_LABELS.iter().map(|s| s.to_string()).collect()).expect("six labels")
}

/// `Z2 wr Z2` as a two-layer spec; it has order 8 and contains `Z4`.
pub fn z2_wr_z2_spec() -> SemidirectSpec {
    SemidirectSpec::new(vec![2, 2, 2], vec![2, 1], vec![vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]]]).expect("valid spec")
}

/// Dihedral group of order 8: `r^i` is element `i`, `r^i s` is `4 + i`.
pub fn d4() -> TableGroup {
    let labels = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"].map(String::from).to_vec();
    from_fn(8, labels, |x, y| {
        let (i, a) = (x % 4, x / 4);
        let (j, b) = (y % 4, y / 4);
        let k = (if a == 0 { i + j } else { i + 4 - j }) % 4;
        k + 4 * ((a + b) % 2)
    })
}

/// Quaternion group: `1, i, j, k` are `0..4` and their negatives `4..8`.
pub fn q8() -> TableGroup {
    let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].map(String::from).to_vec();
    // unit products (sign, unit) for units 1, i, j, k
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    from_fn(8, labels, |x, y| {
        let (neg, u) = UNIT[x % 4][y % 4];
        let sign = neg ^ (x >= 4) ^ (y >= 4);
        u + if sign { 4 } else { 0 }
    })
}

/// The alternating group on five points: even permutations in
/// lexicographic order of their one-line notation (identity first).
pub fn a5() -> TableGroup {
    let mut perms: Vec<[u8; 5]> = Vec::new();
    let mut p = [0u8, 1, 2, 3, 4];
    loop {
        let inversions = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        if inversions % 2 == 0 {
            perms.push(p);
        }
        // next permutation
        let Some(i) = (0..4).rev().find(|&i| p[i] < p[i + 1]) else { break };
        let j = (i + 1..5).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    let labels = perms.iter().map(|q| q.iter().map(|d| d.to_string()).collect::<String>()).collect();
    from_fn(60, labels, |x, y| {
        // (x y)(i) = x(y(i))
        let c: [u8; 5] = std::array::from_fn(|i| perms[x][perms[y][i] as usize]);
        perms.binary_search(&c).expect("closed")
    })
}

/// Looks up `S3`, `Z4`, `Z6`, `D4`, `Q8` or `A5`.
pub fn by_name(name: &str) -> Option<TableGroup> {
    match name {
        "S3" => Some(s3()),
        "Z4" => Some(z4()),
        "Z6" => Some(z6()),
        "D4" => Some(d4()),
        "Q8" => Some(q8()),
        "A5" => Some(a5()),
        _ => None,
    }
}
