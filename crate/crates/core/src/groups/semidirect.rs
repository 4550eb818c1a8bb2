//! Iterated semidirect products `Π(K_1, ..., K_m)` of prime-order cyclic
//! groups.
//!
//! Factors are grouped into consecutive layers. A layer `L` is the direct
//! product of its factors and the remaining layers form the tail group `T`
//! acting on `L` from the left; the whole group is `L ⋊ T` with
//!
//! ```text
//! (n, t) (n', t') = (n + σ_t(n'), t t'),    σ_{t t'} = σ_t ∘ σ_{t'}.
//! ```
//!
//! With one factor per layer this is the classical tower where each
//! `K^(i) = Π(K_{i+1}, ..., K_m)` acts on `K_i`. Multi-factor layers let a
//! tail element permute coordinates (as in a wreath product); their
//! automorphisms must be monomial, i.e. map each coordinate letter to a
//! single coordinate letter.
//!
//! Elements are encoded in little-endian mixed radix over the factors, so
//! element `x` of a layer-1 element `n` and tail element `t` is
//! `n + |L| * t` and the identity is `0`.

use std::sync::OnceLock;

use crate::free_product::{CyclicGroup, FreeProduct, Letter, Word};
use crate::numtheory::is_small_prime;
use crate::text::{self, FormatError, Lines};

use super::table::{FiniteGroup, TableGroup};
use super::GroupError;

/// Largest group order a spec may describe.
pub const MAX_PI_ORDER: usize = 1 << 16;

/// Multiplication tables are precomputed up to this order and filled in row
/// by row on demand above it.
pub const DENSE_TABLE_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectSpec {
    factors: Vec<u32>,
    layers: Vec<usize>,
    /// `actions[i][t]` is the permutation `σ_t` of layer `i`'s elements for
    /// every element `t` of its tail; the last layer has only the identity.
    actions: Vec<Vec<Vec<u32>>>,
    /// First factor index of each layer.
    offsets: Vec<usize>,
    layer_orders: Vec<usize>,
    /// Order of `Π(layers i..)`.
    suffix_orders: Vec<usize>,
}

fn identity_perm(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

impl SemidirectSpec {
    /// Validates a layered spec. `actions[i]` lists `σ_t` for every tail
    /// element `t` of layer `i`, for every layer except the last.
    pub fn new(factors: Vec<u32>, layers: Vec<usize>, mut actions: Vec<Vec<Vec<u32>>>) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::Invalid("at least one factor is required".into()));
        }
        if let Some(p) = factors.iter().find(|&&p| !is_small_prime(p)) {
            return Err(GroupError::Invalid(format!("factor order {p} is not prime")));
        }
        if layers.is_empty() || layers.contains(&0) || layers.iter().sum::<usize>() != factors.len() {
            return Err(GroupError::Invalid("layer sizes must be positive and sum to the factor count".into()));
        }
        let mut total: usize = 1;
        for &p in &factors {
            total = total
                .checked_mul(p as usize)
                .filter(|&t| t <= MAX_PI_ORDER)
                .ok_or(GroupError::SizeBudgetExceeded { limit: MAX_PI_ORDER })?;
        }
        let mut offsets = Vec::with_capacity(layers.len());
        let mut layer_orders = Vec::with_capacity(layers.len());
        let mut off = 0;
        for &len in &layers {
            offsets.push(off);
            layer_orders.push(factors[off..off + len].iter().map(|&p| p as usize).product());
            off += len;
        }
        let mut suffix_orders = vec![1usize; layers.len() + 1];
        for i in (0..layers.len()).rev() {
            suffix_orders[i] = suffix_orders[i + 1] * layer_orders[i];
        }
        if actions.len() != layers.len() - 1 {
            return Err(GroupError::Invalid(format!(
                "expected actions for {} layers, got {}",
                layers.len() - 1,
                actions.len()
            )));
        }
        actions.push(vec![identity_perm(*layer_orders.last().expect("nonempty"))]);
        let spec = SemidirectSpec { factors, layers, actions, offsets, layer_orders, suffix_orders };
        spec.validate_actions()?;
        Ok(spec)
    }

    /// A single-layer-per-factor spec: `actions[i][k]` acts on `K_i`.
    pub fn tower(factors: Vec<u32>, actions: Vec<Vec<Vec<u32>>>) -> Result<Self, GroupError> {
        let layers = vec![1; factors.len()];
        SemidirectSpec::new(factors, layers, actions)
    }

    /// The direct product of the factors as one layer.
    pub fn direct(factors: Vec<u32>) -> Result<Self, GroupError> {
        let n = factors.len();
        SemidirectSpec::new(factors, vec![n], Vec::new())
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn order(&self) -> usize {
        self.suffix_orders[0]
    }

    pub fn layer_order(&self, i: usize) -> usize {
        self.layer_orders[i]
    }

    /// `σ_t` on layer `i`.
    pub fn action(&self, i: usize, t: usize) -> &[u32] {
        &self.actions[i][t]
    }

    /// Action maps of every layer except the last, as accepted by
    /// [`SemidirectSpec::new`].
    pub fn layer_actions(&self) -> Vec<Vec<Vec<u32>>> {
        self.actions[..self.actions.len() - 1].to_vec()
    }

    fn layer_factors(&self, i: usize) -> &[u32] {
        &self.factors[self.offsets[i]..self.offsets[i] + self.layers[i]]
    }

    fn layer_of_factor(&self, c: usize) -> usize {
        self.offsets.partition_point(|&o| o <= c) - 1
    }

    /// Mixed-radix weight of factor `c` inside its layer.
    fn weight_in_layer(&self, c: usize) -> usize {
        let i = self.layer_of_factor(c);
        self.factors[self.offsets[i]..c].iter().map(|&p| p as usize).product()
    }

    fn layer_coords(&self, i: usize, mut x: usize) -> Vec<u32> {
        self.layer_factors(i)
            .iter()
            .map(|&p| {
                let c = (x % p as usize) as u32;
                x /= p as usize;
                c
            })
            .collect()
    }

    fn layer_index(&self, i: usize, coords: &[u32]) -> usize {
        let mut x = 0;
        for (&c, &p) in coords.iter().zip(self.layer_factors(i)).rev() {
            x = x * p as usize + c as usize;
        }
        x
    }

    fn layer_add(&self, i: usize, a: usize, b: usize) -> usize {
        if self.layers[i] == 1 {
            return (a + b) % self.layer_orders[i];
        }
        let (ca, cb) = (self.layer_coords(i, a), self.layer_coords(i, b));
        let sum: Vec<u32> = ca.iter().zip(&cb).zip(self.layer_factors(i)).map(|((x, y), p)| (x + y) % p).collect();
        self.layer_index(i, &sum)
    }

    fn layer_neg(&self, i: usize, a: usize) -> usize {
        let coords: Vec<u32> =
            self.layer_coords(i, a).iter().zip(self.layer_factors(i)).map(|(x, p)| (p - x) % p).collect();
        self.layer_index(i, &coords)
    }

    /// Product in `Π(layers level..)`.
    fn mul_at(&self, level: usize, a: usize, b: usize) -> usize {
        let lo = self.layer_orders[level];
        if level + 1 == self.layers.len() {
            return self.layer_add(level, a, b);
        }
        let (na, ta, nb, tb) = (a % lo, a / lo, b % lo, b / lo);
        let n = self.layer_add(level, na, self.actions[level][ta][nb] as usize);
        n + lo * self.mul_at(level + 1, ta, tb)
    }

    fn inv_at(&self, level: usize, a: usize) -> usize {
        let lo = self.layer_orders[level];
        if level + 1 == self.layers.len() {
            return self.layer_neg(level, a);
        }
        let (n, t) = (a % lo, a / lo);
        let ti = self.inv_at(level + 1, t);
        let n = self.layer_neg(level, self.actions[level][ti][n] as usize);
        n + lo * ti
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_at(0, a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv_at(0, a)
    }

    fn validate_actions(&self) -> Result<(), GroupError> {
        for i in 0..self.layers.len() - 1 {
            let lo = self.layer_orders[i];
            let tail = self.suffix_orders[i + 1];
            if self.actions[i].len() != tail {
                return Err(GroupError::Invalid(format!(
                    "layer {} needs {tail} action maps, got {}",
                    i + 1,
                    self.actions[i].len()
                )));
            }
            for (t, perm) in self.actions[i].iter().enumerate() {
                self.check_automorphism(i, perm)
                    .map_err(|msg| GroupError::Invalid(format!("action {} {t}: {msg}", i + 1)))?;
            }
            if self.actions[i][0] != identity_perm(lo) {
                return Err(GroupError::Invalid(format!("action {} 0 is not the identity", i + 1)));
            }
            // σ_{g t} = σ_g ∘ σ_t for the generators g of the tail.
            let mut gens = Vec::new();
            let mut w = 1;
            for j in i + 1..self.layers.len() {
                for &p in self.layer_factors(j) {
                    gens.push(w);
                    w *= p as usize;
                }
            }
            for &g in &gens {
                for t in 0..tail {
                    let gt = self.mul_at(i + 1, g, t);
                    let (sg, st, sgt) = (&self.actions[i][g], &self.actions[i][t], &self.actions[i][gt]);
                    if (0..lo).any(|x| sgt[x] != sg[st[x] as usize]) {
                        return Err(GroupError::Invalid(format!(
                            "layer {} action is not a homomorphism at ({g}, {t})",
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_automorphism(&self, i: usize, perm: &[u32]) -> Result<(), String> {
        let lo = self.layer_orders[i];
        if perm.len() != lo {
            return Err(format!("expected {lo} entries"));
        }
        let mut seen = vec![false; lo];
        for &x in perm {
            if x as usize >= lo || std::mem::replace(&mut seen[x as usize], true) {
                return Err("not a permutation".into());
            }
        }
        let factors = self.layer_factors(i);
        let mut w = 1usize;
        let mut images = Vec::with_capacity(factors.len());
        for &p in factors {
            let b = perm[w] as usize;
            let coords = self.layer_coords(i, b);
            if coords.iter().zip(factors).any(|(&c, &q)| c != 0 && !(c as u64 * p as u64).is_multiple_of(q as u64)) {
                return Err("generator image has the wrong order".into());
            }
            if factors.len() > 1 && coords.iter().filter(|&&c| c != 0).count() != 1 {
                return Err("not monomial".into());
            }
            images.push(coords);
            w *= p as usize;
        }
        for (x, &px) in perm.iter().enumerate().take(lo) {
            let xc = self.layer_coords(i, x);
            let mut acc = vec![0u64; factors.len()];
            for (k, &c) in xc.iter().enumerate() {
                for (a, &b) in acc.iter_mut().zip(&images[k]) {
                    *a += c as u64 * b as u64;
                }
            }
            let expect: Vec<u32> = acc.iter().zip(factors).map(|(&a, &p)| (a % p as u64) as u32).collect();
            if self.layer_index(i, &expect) != px as usize {
                return Err("not additive".into());
            }
        }
        Ok(())
    }

    /// The unique factor tuple `(k_1, ..., k_m)` of element `h`.
    pub fn decompose_element(&self, mut h: usize) -> Vec<u32> {
        self.factors
            .iter()
            .map(|&p| {
                let c = (h % p as usize) as u32;
                h /= p as usize;
                c
            })
            .collect()
    }

    pub fn compose_element(&self, coords: &[u32]) -> usize {
        let mut x = 0;
        for (&c, &p) in coords.iter().zip(&self.factors).rev() {
            x = x * p as usize + c as usize;
        }
        x
    }

    /// The free product `K = K_1 * ... * K_m` of the factors.
    pub fn k_product(&self) -> FreeProduct<CyclicGroup> {
        FreeProduct::new(self.factors.iter().map(|&order| CyclicGroup { order }).collect())
    }

    /// The canonical word `k_1 k_2 ... k_m` of `h` (identity coordinates
    /// omitted).
    pub fn element_word(&self, h: usize) -> Word<u32> {
        let letters: Vec<Letter<u32>> = self
            .decompose_element(h)
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(i, c)| Letter::new(i, c))
            .collect();
        self.k_product().word_from_canonical(letters).expect("adjacent coordinates differ in factor")
    }

    /// The epimorphism `Q: K -> Π`.
    pub fn project_q(&self, w: &Word<u32>) -> Result<usize, GroupError> {
        Ok(self.project_q_traced(w)?.0)
    }

    /// `Q(w)` together with the length of every intermediate word.
    ///
    /// Letters are consumed left to right while keeping the form
    /// `n · t̃ · rest`, with `n` in the first layer and `t̃` a canonical word
    /// over the tail factors. A tail letter is appended to `t̃`; a first-layer
    /// letter `y` is moved left across `t̃` using `t̃ y = σ_t(y) t̃`, which by
    /// monomiality is again one letter. The procedure then recurses on `t̃`.
    /// Every intermediate length is checked against `|w|`.
    pub fn project_q_traced(&self, w: &Word<u32>) -> Result<(usize, Vec<usize>), GroupError> {
        for l in w.letters() {
            if l.factor >= self.factors.len() || l.value >= self.factors[l.factor] {
                return Err(GroupError::Invalid(format!("letter {}:{} is not in K", l.factor + 1, l.value)));
            }
        }
        let mut trace = Vec::new();
        let h = self.project_at(0, w.letters(), 0, w.len(), &mut trace)?;
        Ok((h, trace))
    }

    fn project_at(
        &self,
        level: usize,
        letters: &[Letter<u32>],
        prefix: usize,
        bound: usize,
        trace: &mut Vec<usize>,
    ) -> Result<usize, GroupError> {
        let lo = self.layer_orders[level];
        let last = level + 1 == self.layers.len();
        let lf = self.layer_factors(level);
        let mut n = vec![0u32; lf.len()];
        let mut tail_word: Vec<Letter<u32>> = Vec::new();
        let mut t_val = 0usize;
        let tail_base = self.offsets[level] + self.layers[level];
        for (idx, l) in letters.iter().enumerate() {
            if l.factor < tail_base {
                let y = l.value as usize * self.weight_in_layer(l.factor);
                let moved = if last { y } else { self.actions[level][t_val][y] as usize };
                let nc = self.layer_index(level, &n);
                n = self.layer_coords(level, self.layer_add(level, nc, moved));
            } else {
                let p = self.factors[l.factor];
                match tail_word.last_mut() {
                    Some(top) if top.factor == l.factor => {
                        top.value = (top.value + l.value) % p;
                        if top.value == 0 {
                            tail_word.pop();
                        }
                    }
                    _ => tail_word.push(l.clone()),
                }
                let weight: usize = self.factors[tail_base..l.factor].iter().map(|&q| q as usize).product();
                t_val = self.mul_at(level + 1, t_val, l.value as usize * weight);
            }
            let len = prefix + n.iter().filter(|&&c| c != 0).count() + tail_word.len() + (letters.len() - idx - 1);
            trace.push(len);
            if len > bound {
                return Err(GroupError::Invariant(format!("intermediate word of length {len} exceeds {bound}")));
            }
        }
        let n_idx = self.layer_index(level, &n);
        if last {
            return Ok(n_idx);
        }
        let nnz = n.iter().filter(|&&c| c != 0).count();
        let t = self.project_at(level + 1, &tail_word, prefix + nnz, bound, trace)?;
        if t != t_val {
            return Err(GroupError::Invariant("tail projection disagrees with the tail product".into()));
        }
        Ok(n_idx + lo * t)
    }

    /// `factors=`, optional `layers=` (omitted when every layer has one
    /// factor), then `action i k -> <one-line permutation>` for every layer
    /// `i` but the last and every tail element `k`.
    pub fn to_text(&self) -> String {
        let list = |v: &[String]| v.join(",");
        let mut out = format!("factors={}\n", list(&self.factors.iter().map(u32::to_string).collect::<Vec<_>>()));
        if self.layers.iter().any(|&l| l != 1) {
            out.push_str(&format!("layers={}\n", list(&self.layers.iter().map(usize::to_string).collect::<Vec<_>>())));
        }
        for i in 0..self.layers.len() - 1 {
            for (k, perm) in self.actions[i].iter().enumerate() {
                let p: Vec<String> = perm.iter().map(u32::to_string).collect();
                out.push_str(&format!("action {} {} -> {}\n", i + 1, k, p.join(" ")));
            }
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self, GroupError> {
        let mut lines = Lines::new(s);
        let spec = parse_spec_block(&mut lines, |_| false)?;
        if !lines.is_done() {
            return Err(FormatError::syntax(lines.line_no(), "trailing data").into());
        }
        Ok(spec)
    }
}

/// Parses a spec block, stopping at end of input or at the first line for
/// which `stop` holds.
pub(crate) fn parse_spec_block(
    lines: &mut Lines<'_>,
    stop: impl Fn(&str) -> bool,
) -> Result<SemidirectSpec, GroupError> {
    let (no, f) = lines.expect_kv("factors")?;
    let factors = text::split_list(f)
        .map_err(|e| FormatError::syntax(no, e.to_string()))?
        .into_iter()
        .map(text::parse_dec::<u32>)
        .collect::<Result<Vec<_>, _>>()?;
    if factors.len() > 16 * 16 {
        return Err(GroupError::SizeBudgetExceeded { limit: MAX_PI_ORDER });
    }
    let layers = if lines.peek().is_some_and(|l| l.starts_with("layers=")) {
        let (no, l) = lines.expect_kv("layers")?;
        text::split_list(l)
            .map_err(|e| FormatError::syntax(no, e.to_string()))?
            .into_iter()
            .map(text::parse_dec::<usize>)
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![1; factors.len()]
    };
    if layers.is_empty() || layers.contains(&0) || layers.iter().sum::<usize>() != factors.len() {
        return Err(GroupError::Invalid("layer sizes must be positive and sum to the factor count".into()));
    }
    let mut total: usize = 1;
    for &p in &factors {
        total = total
            .checked_mul(p as usize)
            .filter(|&t| t <= MAX_PI_ORDER)
            .ok_or(GroupError::SizeBudgetExceeded { limit: MAX_PI_ORDER })?;
    }
    // layer orders and tail sizes, to bound the action lines
    let mut layer_orders = Vec::new();
    let mut off = 0;
    for &len in &layers {
        layer_orders.push(factors[off..off + len].iter().map(|&p| p as usize).product::<usize>());
        off += len;
    }
    let mut tails = vec![1usize; layers.len()];
    for i in (0..layers.len().saturating_sub(1)).rev() {
        tails[i] = tails[i + 1] * layer_orders[i + 1];
    }
    let mut actions: Vec<Vec<Option<Vec<u32>>>> = (0..layers.len() - 1).map(|i| vec![None; tails[i]]).collect();
    while let Some(line) = lines.peek() {
        if stop(line) {
            break;
        }
        let (no, line) = lines.next_line("action")?;
        let bad = |m: &str| FormatError::syntax(no, m);
        let rest = line.strip_prefix("action ").ok_or_else(|| bad("expected `action i k -> ...`"))?;
        let (head, perm) = rest.split_once(" -> ").ok_or_else(|| bad("expected ` -> `"))?;
        let (i, k) = head.split_once(' ').ok_or_else(|| bad("expected `i k`"))?;
        let i: usize = text::parse_dec(i)?;
        let k: usize = text::parse_dec(k)?;
        if i == 0 || i >= layers.len() {
            return Err(bad("layer index out of range").into());
        }
        let slot = actions[i - 1].get_mut(k).ok_or_else(|| bad("tail element out of range"))?;
        if slot.is_some() {
            return Err(bad("duplicate action").into());
        }
        let perm = perm.split(' ').map(text::parse_dec::<u32>).collect::<Result<Vec<_>, _>>()?;
        if perm.len() != layer_orders[i - 1] {
            return Err(bad("permutation has the wrong length").into());
        }
        *slot = Some(perm);
    }
    let actions = actions
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.into_iter()
                .enumerate()
                .map(|(k, p)| p.ok_or_else(|| GroupError::Invalid(format!("missing action {} {k}", i + 1))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SemidirectSpec::new(factors, layers, actions)
}

/// The group described by a [`SemidirectSpec`].
#[derive(Debug)]
pub struct SemidirectGroup {
    spec: SemidirectSpec,
    dense: Option<Vec<u32>>,
    rows: Vec<OnceLock<Box<[u32]>>>,
    labels: Option<Vec<String>>,
}

impl Clone for SemidirectGroup {
    fn clone(&self) -> Self {
        SemidirectGroup {
            spec: self.spec.clone(),
            dense: self.dense.clone(),
            rows: (0..self.rows.len()).map(|_| OnceLock::new()).collect(),
            labels: self.labels.clone(),
        }
    }
}

impl PartialEq for SemidirectGroup {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.labels == other.labels
    }
}

impl Eq for SemidirectGroup {}

impl SemidirectGroup {
    pub fn build(spec: SemidirectSpec) -> Self {
        let order = spec.order();
        if order <= DENSE_TABLE_ORDER {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    table.push(spec.mul(a, b) as u32);
                }
            }
            SemidirectGroup { spec, dense: Some(table), rows: Vec::new(), labels: None }
        } else {
            let rows = (0..order).map(|_| OnceLock::new()).collect();
            SemidirectGroup { spec, dense: None, rows, labels: None }
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GroupError> {
        if labels.len() != self.spec.order() {
            return Err(GroupError::Invalid("label count does not match order".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn spec(&self) -> &SemidirectSpec {
        &self.spec
    }

    /// Row `a` of the multiplication table.
    pub fn row(&self, a: usize) -> &[u32] {
        let order = self.spec.order();
        match &self.dense {
            Some(t) => &t[a * order..(a + 1) * order],
            None => self.rows[a].get_or_init(|| (0..order).map(|b| self.spec.mul(a, b) as u32).collect()),
        }
    }

    pub fn to_table_group(&self) -> TableGroup {
        let t = TableGroup::from_group(self);
        match &self.labels {
            Some(l) => t.with_labels(l.clone()).expect("labels match order"),
            None => t,
        }
    }
}

impl FiniteGroup for SemidirectGroup {
    fn order(&self) -> usize {
        self.spec.order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match &self.dense {
            Some(t) => t[a * self.spec.order() + b] as usize,
            None => self.spec.mul(a, b),
        }
    }

    fn inv(&self, a: usize) -> usize {
        self.spec.inv(a)
    }

    fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin;
    use crate::groups::series;

    fn s3_spec() -> SemidirectSpec {
        builtin::s3_spec()
    }

    #[test]
    fn s3_spec_builds_s3() {
        let g = SemidirectGroup::build(s3_spec());
        assert_eq!(g.order(), 6);
        let mut orders: Vec<usize> = (0..6).map(|x| g.element_order(x)).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        assert!(!g.to_table_group().is_abelian());
    }

    #[test]
    fn trivial_action_gives_z6() {
        let spec = SemidirectSpec::tower(vec![3, 2], vec![vec![vec![0, 1, 2], vec![0, 1, 2]]]).unwrap();
        let g = SemidirectGroup::build(spec);
        assert!((0..6).any(|x| g.element_order(x) == 6));
    }

    #[test]
    fn single_factor() {
        let spec = SemidirectSpec::tower(vec![2], vec![]).unwrap();
        let g = SemidirectGroup::build(spec);
        assert_eq!((g.order(), g.mul(1, 1)), (2, 0));
    }

    #[test]
    fn rejects_bad_actions() {
        // a non-automorphism of Z3
        assert!(SemidirectSpec::tower(vec![3, 2], vec![vec![vec![0, 1, 2], vec![1, 0, 2]]]).is_err());
        // Z3 cannot act nontrivially... on Z2 via a Z3-tail: Aut(Z2) is trivial
        assert!(SemidirectSpec::tower(vec![2, 3], vec![vec![vec![0, 1], vec![1, 0], vec![0, 1]]]).is_err());
        // inversion by the generator of Z4 would be fine, but Z3 has no
        // element of order 2 to send to inversion: σ_1 = σ_2 = inversion
        // breaks σ_2 = σ_1 ∘ σ_1
        assert!(SemidirectSpec::tower(
            vec![5, 3],
            vec![vec![vec![0, 1, 2, 3, 4], vec![0, 4, 3, 2, 1], vec![0, 4, 3, 2, 1]]]
        )
        .is_err());
        // identity must be the first map
        assert!(SemidirectSpec::tower(vec![3, 2], vec![vec![vec![0, 2, 1], vec![0, 1, 2]]]).is_err());
        assert!(SemidirectSpec::tower(vec![4], vec![]).is_err());
        assert!(matches!(SemidirectSpec::direct(vec![2; 17]), Err(GroupError::SizeBudgetExceeded { .. })));
        // non-monomial automorphism of Z2 x Z2: e1 -> e1 + e2
        assert!(SemidirectSpec::new(vec![2, 2, 2], vec![2, 1], vec![vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]]]).is_err());
    }

    #[test]
    fn wreath_like_layers() {
        // Z2 wr Z2: swap the two coordinates
        let spec =
            SemidirectSpec::new(vec![2, 2, 2], vec![2, 1], vec![vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]]]).unwrap();
        let g = SemidirectGroup::build(spec);
        assert_eq!(g.order(), 8);
        let tg = g.to_table_group();
        assert!(!tg.is_abelian());
        assert!((0..8).any(|x| g.element_order(x) == 4));
    }

    #[test]
    fn projection_examples() {
        let spec = s3_spec();
        let k = spec.k_product();
        assert_eq!(spec.project_q(&Word::empty()).unwrap(), 0);
        // b = (0, 1), a = (1, 1)
        let ba = k.canonicalize(&[Letter::new(0, 1), Letter::new(1, 1)]).unwrap();
        assert_eq!(spec.project_q(&ba).unwrap(), spec.compose_element(&[1, 1]));
        let ab = k.canonicalize(&[Letter::new(1, 1), Letter::new(0, 1)]).unwrap();
        let (h, trace) = spec.project_q_traced(&ab).unwrap();
        assert_eq!(spec.decompose_element(h), vec![2, 1]);
        assert!(trace.iter().all(|&l| l <= 2));
    }

    #[test]
    fn decompose_round_trip() {
        let spec = s3_spec();
        assert_eq!(spec.decompose_element(0), vec![0, 0]);
        assert_eq!(spec.decompose_element(5), vec![2, 1]);
        for h in 0..6 {
            assert_eq!(spec.project_q(&spec.element_word(h)).unwrap(), h);
        }
    }

    #[test]
    fn first_layer_is_normal() {
        for spec in [s3_spec(), builtin::z2_wr_z2_spec()] {
            let g = SemidirectGroup::build(spec.clone());
            let layer: Vec<usize> = (0..spec.layer_order(0)).collect();
            assert!(series::is_normal(&g, &layer));
            assert_eq!(g.order(), spec.factors().iter().map(|&p| p as usize).product::<usize>());
        }
    }

    #[test]
    fn inverse_is_two_sided() {
        for spec in [s3_spec(), builtin::z2_wr_z2_spec()] {
            let g = SemidirectGroup::build(spec);
            for a in 0..g.order() {
                assert_eq!(g.mul(a, g.inv(a)), 0);
                assert_eq!(g.mul(g.inv(a), a), 0);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let spec = s3_spec();
        let t = spec.to_text();
        assert_eq!(t, "factors=3,2\naction 1 0 -> 0 1 2\naction 1 1 -> 0 2 1\n");
        assert_eq!(SemidirectSpec::from_text(&t).unwrap(), spec);
        let w = builtin::z2_wr_z2_spec();
        let t = w.to_text();
        assert!(t.contains("layers=2,1\n"));
        assert_eq!(SemidirectSpec::from_text(&t).unwrap(), w);
        for bad in [
            "factors=3,2\naction 1 0 -> 0 1 2\n",
            "factors=3,2\naction 1 0 -> 0 1 2\naction 1 0 -> 0 1 2\n",
            "factors=3,2\naction 1 0 -> 0 1 2\naction 1 1 -> 0 2 1\naction 2 0 -> 0 1\n",
            "factors=3,2\naction 1 0 -> 0 1 2\naction 1 1 -> 0 2  1\n",
            "factors=4\n",
            "factors=\n",
        ] {
            assert!(SemidirectSpec::from_text(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn lazy_rows_match_formula() {
        let g = SemidirectGroup::build(SemidirectSpec::direct(vec![2; 13]).unwrap());
        assert!(g.dense.is_none());
        let row = g.row(77).to_vec();
        for b in (0..g.order()).step_by(97) {
            assert_eq!(row[b] as usize, g.mul(77, b));
            assert_eq!(row[b] as usize, 77 ^ b);
        }
    }
}
