//! Embedding solvable groups into layered semidirect products.
//!
//! The recursion peels off `N = Ω_p(D)`, the elements of order dividing `p`
//! in the last nontrivial derived subgroup `D`, for the smallest prime `p`
//! dividing `|D|`. `N` is elementary abelian and characteristic, hence normal
//! in `G`. The quotient `G / N` is embedded recursively; then `G` is realized
//! either as `N ⋊ Q` directly (when `N` has a complement, the quotient
//! embedding is onto, and the complement permutes some basis of lines of
//! `N`), or through a Krasner-Kaloujnine wreath step.

use super::embedding::GroupEmbedding;
use super::semidirect::{SemidirectGroup, SemidirectSpec};
use super::series;
use super::table::{FiniteGroup, TableGroup};
use super::wreath;
use super::GroupError;

/// Complement search gives up above this many lift combinations.
const COMPLEMENT_SEARCH_LIMIT: usize = 1 << 16;

/// Search-tree nodes allowed when looking for a monomial basis.
const BASIS_SEARCH_LIMIT: usize = 1 << 16;

/// A spec, its group, and an embedding of the source group into it.
#[derive(Debug, Clone)]
pub struct PiEmbedding {
    pub spec: SemidirectSpec,
    pub group: SemidirectGroup,
    pub embedding: GroupEmbedding,
}

/// Embeds a nontrivial solvable group into some `Π(K_1, ..., K_m)`.
pub fn solvable_to_pi(g: &TableGroup) -> Result<PiEmbedding, GroupError> {
    if g.order() == 1 {
        return Err(GroupError::Invalid("the trivial group has no prime factors".into()));
    }
    let derived = series::require_solvable(g)?;
    let d = &derived[derived.len() - 2];
    let p = (2..=d.len()).find(|x| d.len() % x == 0).expect("nontrivial");
    let n = series::omega(g, d, p);
    if n.len() == g.order() {
        return elementary(g, p);
    }
    let (q, proj) = series::quotient(g, &n)?;
    let sub = solvable_to_pi(&q)?;
    if let Some(pi) = split_step(g, &n, p, &q, &proj, &sub)? {
        return Ok(pi);
    }
    wreath::wreath_step(g, &n, p, &q, &proj, &sub)
}

/// Elementary abelian `G = Z_p^r` onto the one-layer direct product.
fn elementary(g: &TableGroup, p: usize) -> Result<PiEmbedding, GroupError> {
    let all: Vec<usize> = (0..g.order()).collect();
    let (_, coords) = series::elementary_coordinates(g, &all, p)?;
    let spec = SemidirectSpec::direct(vec![p as u32; coords[0].len()])?;
    let map = coords.iter().map(|c| spec.compose_element(c)).collect();
    let group = SemidirectGroup::build(spec.clone());
    let embedding = GroupEmbedding::new(g, &group, map)?;
    Ok(PiEmbedding { spec, group, embedding })
}

/// Sorted elements of a complement of `n`, found by trying all lifts of a
/// generating set of the quotient.
fn find_complement(g: &TableGroup, n: &[usize], q: &TableGroup, proj: &[usize]) -> Option<Vec<usize>> {
    let gens = series::generating_set(q);
    let combos = n.len().checked_pow(gens.len() as u32)?;
    if combos > COMPLEMENT_SEARCH_LIMIT {
        return None;
    }
    let cosets: Vec<Vec<usize>> = gens.iter().map(|&b| (0..g.order()).filter(|&x| proj[x] == b).collect()).collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let lifts: Vec<usize> = choice.iter().zip(&cosets).map(|(&i, c)| c[i]).collect();
        let c = series::closure(g, &lifts);
        if c.len() == q.order() {
            return Some(c);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < n.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn rank_mod_p(vectors: &[Vec<u32>], p: u32) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.iter().map(|&x| x as u64).collect()).collect();
    let p = p as u64;
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&x| x * rows[rank][col] % p == 1).expect("p prime");
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_multiple_of(p) {
                let f = row[col] * inv % p;
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Chooses complement-orbits of lines of `N` whose union is a basis.
/// Lines are given by normalized coordinate vectors.
fn monomial_basis(orbits: &[Vec<Vec<u32>>], r: usize, p: u32) -> Option<Vec<Vec<u32>>> {
    fn dfs(
        orbits: &[Vec<Vec<u32>>],
        start: usize,
        chosen: &mut Vec<Vec<u32>>,
        r: usize,
        p: u32,
        budget: &mut usize,
    ) -> bool {
        if chosen.len() == r {
            return true;
        }
        for i in start..orbits.len() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            if chosen.len() + orbits[i].len() > r {
                continue;
            }
            let before = chosen.len();
            chosen.extend(orbits[i].iter().cloned());
            if rank_mod_p(chosen, p) == chosen.len() && dfs(orbits, i + 1, chosen, r, p, budget) {
                return true;
            }
            chosen.truncate(before);
        }
        false
    }
    let mut chosen = Vec::new();
    let mut budget = BASIS_SEARCH_LIMIT;
    dfs(orbits, 0, &mut chosen, r, p, &mut budget).then_some(chosen)
}

fn split_step(
    g: &TableGroup,
    n: &[usize],
    p: usize,
    q: &TableGroup,
    proj: &[usize],
    sub: &PiEmbedding,
) -> Result<Option<PiEmbedding>, GroupError> {
    if !sub.embedding.is_bijective() {
        return Ok(None);
    }
    let Some(comp) = find_complement(g, n, q, proj) else {
        return Ok(None);
    };
    let (_, coords) = series::elementary_coordinates(g, n, p)?;
    let r = coords[0].len();
    let pu = p as u32;
    let elem_of = |v: &[u32]| -> usize { n[coords.iter().position(|c| c == v).expect("coordinates cover N")] };
    let normalize = |v: &[u32]| -> Vec<u32> {
        let lead = *v.iter().find(|&&x| x != 0).expect("nonzero");
        let inv = (1..pu).find(|&x| x * lead % pu == 1).expect("p prime");
        v.iter().map(|&x| x * inv % pu).collect()
    };
    let comp_gens = series::generating_set_of(g, &comp);
    let conj = |c: usize, x: usize| g.mul(g.mul(c, x), g.inv(c));
    let coord_of = |x: usize| coords[n.binary_search(&x).expect("conjugate stays in N")].clone();

    // orbits of lines under conjugation by the complement
    let mut lines: Vec<Vec<u32>> = coords.iter().filter(|c| c.iter().any(|&x| x != 0)).map(|c| normalize(c)).collect();
    lines.sort();
    lines.dedup();
    let mut seen = vec![false; lines.len()];
    let mut orbits = Vec::new();
    for start in 0..lines.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![lines[start].clone()];
        let mut i = 0;
        while i < orbit.len() {
            let x = elem_of(&orbit[i]);
            for &c in &comp_gens {
                let l = normalize(&coord_of(conj(c, x)));
                let k = lines.binary_search(&l).expect("line exists");
                if !seen[k] {
                    seen[k] = true;
                    orbit.push(l);
                }
            }
            i += 1;
        }
        orbits.push(orbit);
    }
    let Some(basis) = monomial_basis(&orbits, r, pu) else {
        return Ok(None);
    };

    // coordinates of N in the new basis
    let basis_elems: Vec<usize> = basis.iter().map(|v| elem_of(v)).collect();
    let mut layer_index = vec![usize::MAX; g.order()];
    let mut layer_elem = vec![0usize; n.len()];
    for (idx, slot) in layer_elem.iter_mut().enumerate() {
        let mut x = 0;
        let mut rest = idx;
        for &b in &basis_elems {
            x = g.mul(x, g.pow(b, rest % p));
            rest /= p;
        }
        layer_index[x] = idx;
        *slot = x;
    }

    let mut section = vec![0usize; q.order()];
    for &c in &comp {
        section[proj[c]] = c;
    }
    let mu_q = sub.embedding.map();
    let mut mu_q_inv = vec![0usize; sub.group.order()];
    for (b, &t) in mu_q.iter().enumerate() {
        mu_q_inv[t] = b;
    }
    let action: Vec<Vec<u32>> = (0..sub.group.order())
        .map(|t| {
            let c = section[mu_q_inv[t]];
            (0..n.len()).map(|x| layer_index[conj(c, layer_elem[x])] as u32).collect()
        })
        .collect();
    let mut factors = vec![pu; r];
    factors.extend_from_slice(sub.spec.factors());
    let mut layers = vec![r];
    layers.extend_from_slice(sub.spec.layers());
    let mut actions = vec![action];
    actions.extend(sub.spec.layer_actions());
    let spec = SemidirectSpec::new(factors, layers, actions)?;
    let group = SemidirectGroup::build(spec.clone());
    let map = (0..g.order())
        .map(|x| {
            let b = proj[x];
            let nx = g.mul(x, g.inv(section[b]));
            layer_index[nx] + n.len() * mu_q[b]
        })
        .collect();
    let embedding = GroupEmbedding::new(g, &group, map)?;
    Ok(Some(PiEmbedding { spec, group, embedding }))
}
