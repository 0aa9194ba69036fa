//! Basis labels `e_S ũ_m` shared by every complex in the crate.
//!
//! Print forms are stable: `e{1,3}` for an exterior monomial, `t(1,2,2)` for a
//! tag, `e{1}t(2)` combined. The exterior part is always printed (`e{}` is the
//! unit); an empty tag is omitted.

use std::cmp::Ordering;
use std::fmt;

/// Strictly increasing index tuple `S ⊂ {1..n}` naming `e_{i1} ∧ … ∧ e_{ip}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExteriorGen(Vec<usize>);

impl ExteriorGen {
    /// Panics unless `indices` is strictly increasing and 1-based.
    pub fn new(indices: Vec<usize>) -> Self {
        assert!(indices.windows(2).all(|w| w[0] < w[1]), "exterior indices must increase");
        assert!(indices.first().is_none_or(|&i| i >= 1), "indices are 1-based");
        ExteriorGen(indices)
    }

    pub fn unit() -> Self {
        ExteriorGen(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Homological degree `|S|`.
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Drops the entry at `position`.
    pub fn remove_at(&self, position: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(position);
        ExteriorGen(v)
    }

    /// `e_S ∧ e_T = sign · e_{S∪T}`, or `None` when `S ∩ T ≠ ∅`.
    pub fn wedge(&self, other: &Self) -> Option<(i8, Self)> {
        let mut inversions = 0usize;
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a == b => return None,
                (Some(a), Some(b)) if a < b => {
                    merged.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    // b jumps over every remaining element of self
                    inversions += self.0.len() - i;
                    merged.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    merged.push(*a);
                    i += 1;
                }
                (None, Some(b)) => {
                    merged.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, ExteriorGen(merged)))
    }
}

impl fmt::Display for ExteriorGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Weakly increasing index tuple: the multiset of a monomial `u_m` in the
/// generators, naming a basis element `ũ_m` of `U^(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TagMonomial(Vec<usize>);

impl TagMonomial {
    /// Sorts `indices` into canonical multiset form.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        assert!(indices.first().is_none_or(|&i| i >= 1), "indices are 1-based");
        TagMonomial(indices)
    }

    pub fn empty() -> Self {
        TagMonomial(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Tag length `s`, i.e. the summand index in `K(R;I^s)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Tag of `u_m · u_i`; tags commute, so no sign.
    pub fn with(&self, i: usize) -> Self {
        let pos = self.0.partition_point(|&j| j <= i);
        let mut v = self.0.clone();
        v.insert(pos, i);
        TagMonomial(v)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TagMonomial::new(v)
    }
}

impl Ord for TagMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TagMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TagMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// Basis element `e_S ũ_m` of `Q^(|m|) = K ⊗ U^(|m|)`.
///
/// Ordered summand-first (tag length, then tag, then exterior part), which is
/// the direct-sum order of `K(R;I^s) = Q^(0) ⊕ … ⊕ Q^(s-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QGenerator {
    pub exterior: ExteriorGen,
    pub tag: TagMonomial,
}

impl QGenerator {
    pub fn new(exterior: ExteriorGen, tag: TagMonomial) -> Self {
        QGenerator { exterior, tag }
    }

    /// A Koszul generator `e_S` (empty tag).
    pub fn exterior(indices: Vec<usize>) -> Self {
        QGenerator::new(ExteriorGen::new(indices), TagMonomial::empty())
    }

    pub fn homological_degree(&self) -> usize {
        self.exterior.degree()
    }

    /// Summand index `p` (the tag length).
    pub fn summand(&self) -> usize {
        self.tag.len()
    }

    /// `Σ deg(u_i)` over exterior and tag indices.
    pub fn internal_degree(&self, degrees: &[u32]) -> u32 {
        self.exterior
            .indices()
            .iter()
            .chain(self.tag.indices())
            .map(|&i| degrees[i - 1])
            .sum()
    }

    /// Combined index multiset, sorted.
    pub fn index_multiset(&self) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.exterior.indices().iter().chain(self.tag.indices()).copied().collect();
        v.sort_unstable();
        v
    }
}

impl Ord for QGenerator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag
            .cmp(&other.tag)
            .then_with(|| self.exterior.degree().cmp(&other.exterior.degree()))
            .then_with(|| self.exterior.cmp(&other.exterior))
    }
}

impl PartialOrd for QGenerator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exterior)?;
        if !self.tag.is_empty() {
            write!(f, "{}", self.tag)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_forms() {
        assert_eq!(ExteriorGen::new(vec![1, 3]).to_string(), "e{1,3}");
        assert_eq!(TagMonomial::new(vec![2, 1, 2]).to_string(), "t(1,2,2)");
        let g = QGenerator::new(ExteriorGen::new(vec![1]), TagMonomial::new(vec![2]));
        assert_eq!(g.to_string(), "e{1}t(2)");
        assert_eq!(QGenerator::exterior(vec![]).to_string(), "e{}");
    }

    #[test]
    fn wedge_signs() {
        let e1 = ExteriorGen::new(vec![1]);
        let e2 = ExteriorGen::new(vec![2]);
        assert_eq!(e1.wedge(&e2), Some((1, ExteriorGen::new(vec![1, 2]))));
        assert_eq!(e2.wedge(&e1), Some((-1, ExteriorGen::new(vec![1, 2]))));
        assert_eq!(e1.wedge(&e1), None);
        let e13 = ExteriorGen::new(vec![1, 3]);
        // e2 ∧ e1 ∧ e3 = -e1 ∧ e2 ∧ e3
        assert_eq!(e2.wedge(&e13), Some((-1, ExteriorGen::new(vec![1, 2, 3]))));
        assert_eq!(e13.wedge(&e2), Some((-1, ExteriorGen::new(vec![1, 2, 3]))));
    }

    #[test]
    fn tag_insertion_sorts() {
        let t = TagMonomial::new(vec![1, 3]);
        assert_eq!(t.with(2).indices(), &[1, 2, 3]);
        assert_eq!(t.with(3).indices(), &[1, 3, 3]);
    }
}
