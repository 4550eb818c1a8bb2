use super::table::FiniteGroup;
use super::GroupError;

/// An injective homomorphism given by the images of all source elements.
/// Construction checks injectivity and the homomorphism law on every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupEmbedding {
    map: Vec<usize>,
    target_order: usize,
}

impl GroupEmbedding {
    pub fn new<S, T>(source: &S, target: &T, map: Vec<usize>) -> Result<Self, GroupError>
    where
        S: FiniteGroup + ?Sized,
        T: FiniteGroup + ?Sized,
    {
        let n = source.order();
        if map.len() != n {
            return Err(GroupError::NotEmbedding("image list has the wrong length".into()));
        }
        let mut image: Vec<usize> = map.clone();
        if image.iter().any(|&x| x >= target.order()) {
            return Err(GroupError::NotEmbedding("image out of range".into()));
        }
        image.sort_unstable();
        image.dedup();
        if image.len() != n {
            return Err(GroupError::NotEmbedding("not injective".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotEmbedding(format!("not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(GroupEmbedding { map, target_order: target.order() })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn source_order(&self) -> usize {
        self.map.len()
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn is_bijective(&self) -> bool {
        self.map.len() == self.target_order
    }

    /// Sorted image.
    pub fn image(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupEmbedding) -> GroupEmbedding {
        GroupEmbedding { map: self.map.iter().map(|&x| next.map[x]).collect(), target_order: next.target_order }
    }
}
