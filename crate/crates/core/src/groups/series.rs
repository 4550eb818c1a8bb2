//! Subgroups, quotients, derived and composition series.

use super::embedding::GroupEmbedding;
use super::table::{FiniteGroup, TableGroup};
use super::GroupError;

/// Sorted element list of the subgroup generated by `gens`.
pub fn closure<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut elems = vec![0usize];
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i];
        for &s in gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                elems.push(y);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    elems
}

/// Greedy generating set: repeatedly adds the lowest element outside the
/// current closure.
pub fn generating_set<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    generating_set_of(g, &(0..g.order()).collect::<Vec<_>>())
}

/// Greedy generating set of the subgroup with sorted elements `h`.
pub fn generating_set_of<G: FiniteGroup + ?Sized>(g: &G, h: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = vec![0usize];
    for &x in h {
        if current.binary_search(&x).is_err() {
            gens.push(x);
            current = closure(g, &gens);
            if current.len() == h.len() {
                break;
            }
        }
    }
    gens
}

/// The subgroup with sorted elements `elems` as a table group, together
/// with its inclusion. Element `i` of the result is `elems[i]`.
pub fn subgroup_table<G: FiniteGroup + ?Sized>(
    g: &G,
    elems: &[usize],
) -> Result<(TableGroup, GroupEmbedding), GroupError> {
    if elems.first() != Some(&0) {
        return Err(GroupError::Invalid("subgroup must contain the identity first".into()));
    }
    let pos = |x: usize| elems.binary_search(&x).map_err(|_| GroupError::Invalid("not closed".into()));
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for &a in elems {
        for &b in elems {
            table.push(pos(g.mul(a, b))? as u32);
        }
    }
    let labels: Vec<String> = elems.iter().map(|&x| g.label(x)).collect();
    let sub = TableGroup::from_table(n, table)?.with_labels(labels)?;
    let inclusion = GroupEmbedding::new(&sub, g, elems.to_vec())?;
    Ok((sub, inclusion))
}

/// Smallest subgroup containing `gens`, with its inclusion map.
pub fn subgroup_of<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Result<(TableGroup, GroupEmbedding), GroupError> {
    if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(GroupError::Invalid(format!("generator {bad} out of range")));
    }
    subgroup_table(g, &closure(g, gens))
}

pub fn is_normal<G: FiniteGroup + ?Sized>(g: &G, n: &[usize]) -> bool {
    let gens = generating_set(g);
    gens.iter().all(|&x| {
        let xi = g.inv(x);
        n.iter().all(|&y| n.binary_search(&g.mul(g.mul(x, y), xi)).is_ok())
    })
}

/// Commutator subgroup of the subgroup `h` (sorted elements).
pub fn commutator_subgroup<G: FiniteGroup + ?Sized>(g: &G, h: &[usize]) -> Vec<usize> {
    let mut comms = Vec::new();
    let mut seen = vec![false; g.order()];
    for &a in h {
        let ai = g.inv(a);
        for &b in h {
            let c = g.mul(g.mul(ai, g.inv(b)), g.mul(a, b));
            if !seen[c] {
                seen[c] = true;
                comms.push(c);
            }
        }
    }
    closure(g, &comms)
}

/// `G = D_0 > D_1 > ...` until the series stabilizes; the last entry is the
/// stable term (the trivial group exactly when `G` is solvable).
pub fn derived_series<G: FiniteGroup + ?Sized>(g: &G) -> Vec<Vec<usize>> {
    let mut series = vec![(0..g.order()).collect::<Vec<_>>()];
    loop {
        let last = series.last().expect("nonempty");
        let next = commutator_subgroup(g, last);
        if next.len() == last.len() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_solvable<G: FiniteGroup + ?Sized>(g: &G) -> bool {
    derived_series(g).last().is_some_and(|d| d.len() == 1)
}

/// Rejects non-solvable groups, naming the stable derived subgroup.
pub fn require_solvable<G: FiniteGroup + ?Sized>(g: &G) -> Result<Vec<Vec<usize>>, GroupError> {
    let series = derived_series(g);
    let last = series.last().expect("nonempty");
    if last.len() == 1 {
        return Ok(series);
    }
    let gens = generating_set_of(g, last);
    let names: Vec<String> = gens.iter().map(|&x| g.label(x)).collect();
    Err(GroupError::NotSolvable { order: last.len(), generators: names.join(",") })
}

/// A subnormal chain `1 = G_0 < G_1 < ... < G_k = G` with prime quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionSeries {
    /// Sorted element lists, from the trivial group up to `G`.
    pub subgroups: Vec<Vec<usize>>,
    /// `|G_{i+1} / G_i|` for each step, bottom-up.
    pub quotient_orders: Vec<usize>,
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n)
}

/// Refines the derived series bottom-up. Between consecutive terms the
/// quotient is abelian, so every intermediate subgroup is normal in the next;
/// each step adjoins a power of the lowest-index element not yet covered.
pub fn composition_series<G: FiniteGroup + ?Sized>(g: &G) -> Result<CompositionSeries, GroupError> {
    let derived = require_solvable(g)?;
    let mut subgroups = vec![vec![0usize]];
    let mut quotient_orders = Vec::new();
    for upper in derived.iter().rev().skip(1) {
        let mut x = subgroups.last().expect("nonempty").clone();
        while x.len() < upper.len() {
            let y = *upper.iter().find(|e| x.binary_search(e).is_err()).expect("proper subgroup");
            let mut n = 1;
            let mut acc = y;
            while x.binary_search(&acc).is_err() {
                acc = g.mul(acc, y);
                n += 1;
            }
            let p = smallest_prime_factor(n);
            let h = g.pow(y, n / p);
            let mut gens = generating_set_of(g, &x);
            gens.push(h);
            let next = closure(g, &gens);
            debug_assert_eq!(next.len(), x.len() * p);
            quotient_orders.push(next.len() / x.len());
            subgroups.push(next.clone());
            x = next;
        }
    }
    Ok(CompositionSeries { subgroups, quotient_orders })
}

/// `G / N` for a normal subgroup `N`. Cosets are numbered by their least
/// element, so the identity coset is `0`; returns the quotient and the
/// projection as an element-indexed list.
pub fn quotient<G: FiniteGroup + ?Sized>(g: &G, n: &[usize]) -> Result<(TableGroup, Vec<usize>), GroupError> {
    if !is_normal(g, n) {
        return Err(GroupError::Invalid("subgroup is not normal".into()));
    }
    let order = g.order();
    let mut proj = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in 0..order {
        if proj[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &y in n {
            proj[g.mul(x, y)] = c;
        }
    }
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(proj[g.mul(a, b)] as u32);
        }
    }
    Ok((TableGroup::from_table(k, table)?, proj))
}

/// Elements `x` of the abelian subgroup `h` with `x^p = 1`.
pub fn omega<G: FiniteGroup + ?Sized>(g: &G, h: &[usize], p: usize) -> Vec<usize> {
    h.iter().copied().filter(|&x| g.pow(x, p) == 0).collect()
}

/// Coordinates over `F_p` for an elementary abelian `p`-subgroup: returns a
/// basis and, for each element of `n` (in order), its coordinate vector.
pub fn elementary_coordinates<G: FiniteGroup + ?Sized>(
    g: &G,
    n: &[usize],
    p: usize,
) -> Result<(Vec<usize>, Vec<Vec<u32>>), GroupError> {
    let basis = generating_set_of(g, n);
    let r = basis.len();
    if p.checked_pow(r as u32) != Some(n.len()) {
        return Err(GroupError::Invalid("subgroup is not elementary abelian".into()));
    }
    let mut coords = vec![Vec::new(); n.len()];
    let mut v = vec![0u32; r];
    for _ in 0..n.len() {
        let mut x = 0;
        for (c, &b) in v.iter().zip(&basis) {
            x = g.mul(x, g.pow(b, *c as usize));
        }
        let i = n.binary_search(&x).map_err(|_| GroupError::Invalid("basis leaves the subgroup".into()))?;
        coords[i] = v.clone();
        for c in v.iter_mut() {
            *c += 1;
            if (*c as usize) < p {
                break;
            }
            *c = 0;
        }
    }
    if coords.iter().any(Vec::is_empty) {
        return Err(GroupError::Invalid("subgroup is not elementary abelian".into()));
    }
    Ok((basis, coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin;

    #[test]
    fn subgroup_examples() {
        let s3 = builtin::s3();
        let (a3, inc) = subgroup_of(&s3, &[1]).unwrap();
        assert_eq!(a3.order(), 3);
        assert_eq!(inc.map(), &[0, 1, 2]);
        assert_eq!(subgroup_of(&s3, &[0]).unwrap().0.order(), 1);
        assert_eq!(subgroup_of(&s3, &[0, 1, 2, 3, 4, 5]).unwrap().0.order(), 6);
        assert!(subgroup_of(&s3, &[6]).is_err());
    }

    #[test]
    fn derived_series_examples() {
        let s3 = builtin::s3();
        let d = derived_series(&s3);
        assert_eq!(d, vec![vec![0, 1, 2, 3, 4, 5], vec![0, 1, 2], vec![0]]);
        assert!(is_solvable(&s3));
        assert_eq!(derived_series(&builtin::z4()).len(), 2);
        let a5 = builtin::a5();
        let d = derived_series(&a5);
        assert_eq!(d.len(), 1);
        assert!(!is_solvable(&a5));
        assert!(matches!(require_solvable(&a5), Err(GroupError::NotSolvable { order: 60, .. })));
        for g in [builtin::d4(), builtin::q8(), builtin::z6()] {
            assert!(is_solvable(&g));
        }
    }

    #[test]
    fn composition_examples() {
        assert_eq!(composition_series(&builtin::z4()).unwrap().quotient_orders, vec![2, 2]);
        let cs = composition_series(&builtin::z4()).unwrap();
        assert_eq!(cs.subgroups[1], vec![0, 2]);
        assert_eq!(composition_series(&builtin::s3()).unwrap().quotient_orders, vec![3, 2]);
        assert_eq!(composition_series(&builtin::cyclic(7)).unwrap().quotient_orders, vec![7]);
        let d4 = composition_series(&builtin::d4()).unwrap();
        assert_eq!(d4.quotient_orders, vec![2, 2, 2]);
        assert!(composition_series(&builtin::a5()).is_err());
    }

    #[test]
    fn composition_chain_is_subnormal_with_prime_steps() {
        for g in [builtin::s3(), builtin::z4(), builtin::z6(), builtin::d4(), builtin::q8()] {
            let cs = composition_series(&g).unwrap();
            assert_eq!(cs.subgroups.last().unwrap().len(), g.order());
            for (w, &q) in cs.subgroups.windows(2).zip(&cs.quotient_orders) {
                let (upper_t, inc) = subgroup_table(&g, &w[1]).unwrap();
                let lower: Vec<usize> = w[0].iter().map(|x| inc.map().iter().position(|y| y == x).unwrap()).collect();
                let mut lower = lower;
                lower.sort();
                assert!(is_normal(&upper_t, &lower));
                assert_eq!(w[1].len(), w[0].len() * q);
                assert_eq!(smallest_prime_factor(q), q);
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let s3 = builtin::s3();
        let (q, proj) = quotient(&s3, &[0, 1, 2]).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 0, 0, 1, 1, 1]);
        assert!(quotient(&s3, &[0, 3]).is_err());
    }

    #[test]
    fn elementary_coordinates_of_klein_group() {
        let d4 = builtin::d4();
        // {e, r2, s, r2s}
        let v4 = closure(&d4, &[2, 4]);
        let (basis, coords) = elementary_coordinates(&d4, &v4, 2).unwrap();
        assert_eq!(basis.len(), 2);
        let mut sorted = coords.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
        assert!(elementary_coordinates(&builtin::z4(), &[0, 1, 2, 3], 2).is_err());
    }
}
