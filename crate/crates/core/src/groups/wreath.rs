//! Krasner-Kaloujnine embeddings of extensions into wreath products.

use super::embedding::GroupEmbedding;
use super::pipeline::{self, PiEmbedding};
use super::semidirect::{SemidirectGroup, SemidirectSpec, MAX_PI_ORDER};
use super::series;
use super::table::{FiniteGroup, TableGroup};
use super::GroupError;

/// Embeds `E` with elementary abelian normal subgroup `A` (sorted elements)
/// into `A wr Π_B`, where `Π_B` is the pipeline image of `B = E / A`.
///
/// When `B` is itself a layered product (for instance a cyclic group of
/// prime order) this is the classical `A wr B`.
pub fn wreath_embed(e: &TableGroup, a: &[usize]) -> Result<PiEmbedding, GroupError> {
    if a.len() < 2 || a.len() == e.order() {
        return Err(GroupError::Invalid("normal subgroup must be proper and nontrivial".into()));
    }
    if !series::is_normal(e, a) {
        return Err(GroupError::Invalid("subgroup is not normal".into()));
    }
    let p = (2..=a.len()).find(|d| a.len().is_multiple_of(*d)).expect("order >= 2");
    let (q, proj) = series::quotient(e, a)?;
    let sub = pipeline::solvable_to_pi(&q)?;
    wreath_step(e, a, p, &q, &proj, &sub)
}

/// One wreath step of the pipeline: `E -> A^{|Π_Q|} ⋊ Π_Q` with
/// `g -> (F_g, μ_Q(π(g)))`.
///
/// For a section `s` of `π` with `s(1) = 1`, the Krasner-Kaloujnine
/// function is `f_g(x) = s(x)^{-1} g s(π(g)^{-1} x)` on `Q`. It is copied to
/// every right coset `μ_Q(Q) t_k` of `Π_Q` by `F_g(μ_Q(b) t_k) = f_g(b)`.
pub(crate) fn wreath_step(
    e: &TableGroup,
    a: &[usize],
    p: usize,
    q: &TableGroup,
    proj: &[usize],
    sub: &PiEmbedding,
) -> Result<PiEmbedding, GroupError> {
    let (_, coords) = series::elementary_coordinates(e, a, p)?;
    let r = coords[0].len();
    let bprime = sub.group.order();
    let blocks = r * bprime;
    let mut layer_order: usize = 1;
    for _ in 0..blocks {
        layer_order = layer_order
            .checked_mul(p)
            .filter(|&x| x.saturating_mul(bprime) <= MAX_PI_ORDER)
            .ok_or(GroupError::SizeBudgetExceeded { limit: MAX_PI_ORDER })?;
    }

    // coordinate vector of layer element x: digit (j * r + c) is coordinate
    // c of block j
    let digits = |mut x: usize| -> Vec<usize> {
        (0..blocks)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    };
    let index = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &v| acc * p + v);

    // σ_y moves block j to block y j
    let mut layer_actions = Vec::with_capacity(bprime);
    for y in 0..bprime {
        let perm: Vec<u32> = (0..layer_order)
            .map(|x| {
                let d = digits(x);
                let mut out = vec![0usize; blocks];
                for j in 0..bprime {
                    let to = sub.group.mul(y, j);
                    out[to * r..(to + 1) * r].copy_from_slice(&d[j * r..(j + 1) * r]);
                }
                index(&out) as u32
            })
            .collect();
        layer_actions.push(perm);
    }
    let mut factors = vec![p as u32; blocks];
    factors.extend_from_slice(sub.spec.factors());
    let mut layers = vec![blocks];
    layers.extend_from_slice(sub.spec.layers());
    let mut actions = vec![layer_actions];
    actions.extend(sub.spec.layer_actions());
    let spec = SemidirectSpec::new(factors, layers, actions)?;
    let group = SemidirectGroup::build(spec.clone());

    // section: least element of each coset
    let mut section = vec![usize::MAX; q.order()];
    for x in (0..e.order()).rev() {
        section[proj[x]] = x;
    }
    // y in Π_Q as μ_Q(b) t_k
    let mu_q = sub.embedding.map();
    let mut coset_of = vec![None; bprime];
    for y in 0..bprime {
        if coset_of[y].is_some() {
            continue;
        }
        for (b, &mb) in mu_q.iter().enumerate() {
            coset_of[sub.group.mul(mb, y)] = Some(b);
        }
    }
    let a_pos =
        |x: usize| a.binary_search(&x).map_err(|_| GroupError::Invariant("f_g left the normal subgroup".into()));
    let mut map = Vec::with_capacity(e.order());
    for g in 0..e.order() {
        let pg_inv = q.inv(proj[g]);
        let f: Vec<usize> = (0..q.order())
            .map(|x| {
                let v = e.mul(e.mul(e.inv(section[x]), g), section[q.mul(pg_inv, x)]);
                a_pos(v)
            })
            .collect::<Result<_, _>>()?;
        let mut d = vec![0usize; blocks];
        for (y, b) in coset_of.iter().enumerate() {
            let b = b.expect("cosets cover Π_Q");
            for (c, &v) in coords[f[b]].iter().enumerate() {
                d[y * r + c] = v as usize;
            }
        }
        map.push(index(&d) + layer_order * mu_q[proj[g]]);
    }
    let embedding = GroupEmbedding::new(e, &group, map)?;
    Ok(PiEmbedding { spec, group, embedding })
}
