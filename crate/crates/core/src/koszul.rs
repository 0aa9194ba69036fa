//! The Koszul complex `K_* = Λ_R(e_1..e_n)`, the tag modules `U^(s)`, the
//! complexes `Q^(s) = K ⊗ U^(s)` and the tag-transfer maps
//! `del^(s+1) : Q^(s)_p → Q^(s+1)_{p-1}`.
//!
//! Internal degrees: `deg e_i = deg ũ_i = deg u_i`, the only assignment under
//! which every differential and the augmentation preserve degree.

use std::sync::Arc;

use serde::Serialize;

use crate::chain::{format_column, ChainComplex, FreeModule, SparseMap};
use crate::error::Result;
use crate::labels::{ExteriorGen, QGenerator, TagMonomial};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::sequence::RegularSequence;

/// Strictly increasing `p`-subsets of `{1..n}` in lexicographic order.
pub fn exterior_basis(n: usize, p: usize) -> Vec<ExteriorGen> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<ExteriorGen>) {
        if left == 0 {
            out.push(ExteriorGen::new(cur.clone()));
            return;
        }
        for i in start..=n {
            if n - i + 1 < left {
                break;
            }
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(1, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// Basis of `I^s/I^{s+1}` over `R/I`: the weakly increasing `s`-tuples from
/// `{1..n}`, i.e. the distinct degree-`s` monomials in the generators.
/// `s = 0` gives the single empty tag.
pub fn monomial_basis(n: usize, s: usize) -> Vec<TagMonomial> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<TagMonomial>) {
        if left == 0 {
            out.push(TagMonomial::new(cur.clone()));
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, s, &mut Vec::new(), &mut out);
    out
}

/// Labels of `Q^(s)_p`.
pub fn q_labels(n: usize, s: usize, p: usize) -> Vec<QGenerator> {
    let tags = monomial_basis(n, s);
    exterior_basis(n, p)
        .into_iter()
        .flat_map(|e| tags.iter().map(move |t| QGenerator::new(e.clone(), t.clone())))
        .collect()
}

/// `∂(e_S ũ_m) = Σ_k (−1)^{k−1} u_{i_k} e_{S∖i_k} ũ_m`.
pub fn koszul_boundary<C: Scalar>(seq: &RegularSequence<C>, g: &QGenerator) -> Vec<(QGenerator, Polynomial<C>)> {
    let idx = g.exterior.indices();
    idx.iter()
        .enumerate()
        .map(|(k, &i)| {
            let u = seq.generator(i);
            let coeff = if k % 2 == 0 { u.clone() } else { -u };
            (QGenerator::new(g.exterior.remove_at(k), g.tag.clone()), coeff)
        })
        .collect()
}

/// `del(e_S ũ_m) = Σ_k (−1)^{k−1} e_{S∖i_k} ũ_{m ∪ i_k}`.
pub fn del_of<C: Scalar>(n_vars: usize, g: &QGenerator) -> Vec<(QGenerator, Polynomial<C>)> {
    let idx = g.exterior.indices();
    idx.iter()
        .enumerate()
        .map(|(k, &i)| {
            let sign = if k % 2 == 0 { C::one() } else { -C::one() };
            (QGenerator::new(g.exterior.remove_at(k), g.tag.with(i)), Polynomial::constant(n_vars, sign))
        })
        .collect()
}

pub(crate) fn q_module<C: Scalar>(seq: &RegularSequence<C>, s: usize, p: usize) -> Arc<FreeModule> {
    Arc::new(
        FreeModule::from_labels(q_labels(seq.len(), s, p), seq.degrees()).expect("labels are distinct"),
    )
}

/// `K_*` truncated above `n_max` (it vanishes above `n` anyway).
pub fn koszul_complex<C: Scalar>(seq: &RegularSequence<C>, n_max: usize) -> ChainComplex<C> {
    let top = n_max.min(seq.len());
    let mut c = q_complex(seq, 0);
    if top < seq.len() {
        c = ChainComplex::new(
            c.n_vars(),
            c.modules()[..=top].to_vec(),
            c.differentials()[..top].to_vec(),
        )
        .expect("truncation keeps shapes");
    }
    c
}

/// `Q^(s)_* = K_* ⊗ U^(s)` with `∂_Q(x ũ_m) = (∂x) ũ_m`.
pub fn q_complex<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> ChainComplex<C> {
    let n = seq.len();
    let modules: Vec<_> = (0..=n).map(|p| q_module(seq, s, p)).collect();
    let differentials = (1..=n)
        .map(|p| {
            SparseMap::from_rule(modules[p].clone(), modules[p - 1].clone(), seq.n_vars(), |g| {
                koszul_boundary(seq, g)
            })
            .expect("boundary stays in Q^(s)")
        })
        .collect();
    ChainComplex::new(seq.n_vars(), modules, differentials).expect("consistent shapes")
}

/// The family `del^(s+1)_p : Q^(s)_p → Q^(s+1)_{p-1}` for `1 ≤ p ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelMap<C> {
    /// Tag length of the source, i.e. this is `del^(s+1)`.
    pub s: usize,
    /// `maps[p - 1]` has source degree `p`.
    pub maps: Vec<SparseMap<C>>,
}

impl<C: Scalar> DelMap<C> {
    /// Component with source homological degree `p ≥ 1`.
    pub fn component(&self, p: usize) -> Option<&SparseMap<C>> {
        p.checked_sub(1).and_then(|k| self.maps.get(k))
    }
}

/// Builds `del^(s+1)`. Every entry is `±1`.
pub fn del_map<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> DelMap<C> {
    let n = seq.len();
    let maps = (1..=n)
        .map(|p| {
            SparseMap::from_rule(q_module(seq, s, p), q_module(seq, s + 1, p - 1), seq.n_vars(), |g| {
                del_of(seq.n_vars(), g)
            })
            .expect("del stays in Q^(s+1)")
        })
        .collect();
    DelMap { s, maps }
}

/// Which identity a check refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Identity {
    /// `∂_Q^(r+1) del^(r+1) + del^(r+1) ∂_Q^(r) = 0`.
    DelAnticommutesWithBoundary,
    /// `del^(r+1) del^(r) = 0`.
    DelSquaresToZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub r: usize,
    /// Homological degree of the source.
    pub degree: usize,
    pub ok: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.ok)
    }
}

/// Anticommutation of `del` with the Koszul boundaries, degree by degree.
pub fn check_anticommutation<C: Scalar>(
    lower: &ChainComplex<C>,
    upper: &ChainComplex<C>,
    del: &DelMap<C>,
) -> Vec<IdentityCheck> {
    let mut checks = Vec::new();
    for p in 2..lower.len() {
        let (Some(del_p), Some(del_p1)) = (del.component(p), del.component(p - 1)) else { continue };
        let a = upper.differential(p - 1).map(|d| d.compose(del_p).expect("shapes"));
        let b = del_p1.compose(lower.differential(p).unwrap()).expect("shapes");
        let sum = match a {
            Some(a) => a.add(&b).expect("shapes"),
            None => b,
        };
        let witness = sum.first_nonzero_column().map(|j| {
            format!("{} ↦ {}", lower.module(p).generator(j), format_column(sum.column(j), sum.target()))
        });
        checks.push(IdentityCheck {
            identity: Identity::DelAnticommutesWithBoundary,
            r: del.s,
            degree: p,
            ok: witness.is_none(),
            witness,
        });
    }
    checks
}

/// `del^(r+1) ∘ del^(r) = 0`, degree by degree.
pub fn check_del_square<C: Scalar>(first: &DelMap<C>, second: &DelMap<C>) -> Vec<IdentityCheck> {
    let mut checks = Vec::new();
    for p in 2..=first.maps.len() {
        let (Some(a), Some(b)) = (first.component(p), second.component(p - 1)) else { continue };
        let comp = b.compose(a).expect("shapes");
        let witness = comp.first_nonzero_column().map(|j| {
            format!("{} ↦ {}", a.source().generator(j), format_column(comp.column(j), comp.target()))
        });
        checks.push(IdentityCheck {
            identity: Identity::DelSquaresToZero,
            r: second.s,
            degree: p,
            ok: witness.is_none(),
            witness,
        });
    }
    checks
}

/// Checks both identities for every `r < s_max` and every degree.
pub fn verify_identities<C: Scalar>(seq: &RegularSequence<C>, s_max: usize) -> IdentityReport {
    let qs: Vec<_> = (0..=s_max).map(|s| q_complex(seq, s)).collect();
    let dels: Vec<_> = (0..s_max).map(|s| del_map(seq, s)).collect();
    let mut checks = Vec::new();
    for r in 0..s_max {
        checks.extend(check_anticommutation(&qs[r], &qs[r + 1], &dels[r]));
        if r >= 1 {
            checks.extend(check_del_square(&dels[r - 1], &dels[r]));
        }
    }
    IdentityReport { checks }
}

/// Builds a `del` map with a custom sign rule; used to exhibit failures.
pub fn del_map_with_signs<C: Scalar>(
    seq: &RegularSequence<C>,
    s: usize,
    sign: impl Fn(usize) -> i64,
) -> Result<DelMap<C>> {
    let n = seq.len();
    let maps = (1..=n)
        .map(|p| {
            SparseMap::from_rule(q_module(seq, s, p), q_module(seq, s + 1, p - 1), seq.n_vars(), |g| {
                g.exterior
                    .indices()
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| {
                        (
                            QGenerator::new(g.exterior.remove_at(k), g.tag.with(i)),
                            Polynomial::constant(seq.n_vars(), C::from_i64(sign(k))),
                        )
                    })
                    .collect()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DelMap { s, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::binomial;
    use num_bigint::BigInt;

    type Seq = RegularSequence<BigInt>;

    fn label(e: &[usize], t: &[usize]) -> QGenerator {
        QGenerator::new(ExteriorGen::new(e.to_vec()), TagMonomial::new(t.to_vec()))
    }

    #[test]
    fn koszul_one_generator() {
        let k = koszul_complex(&Seq::variables(1).unwrap(), 1);
        assert_eq!(k.ranks(), vec![1, 1]);
        assert_eq!(k.differential(1).unwrap().entry(0, 0).to_string(), "x1");
    }

    #[test]
    fn koszul_two_generators_sign_rule() {
        let k = koszul_complex(&Seq::variables(2).unwrap(), 2);
        let d2 = k.differential(2).unwrap();
        let e12 = label(&[1, 2], &[]);
        assert_eq!(d2.entry_by_label(&label(&[2], &[]), &e12).unwrap().to_string(), "x1");
        assert_eq!(d2.entry_by_label(&label(&[1], &[]), &e12).unwrap().to_string(), "-x2");
    }

    #[test]
    fn koszul_ranks_are_binomial() {
        let k = koszul_complex(&Seq::variables(3).unwrap(), 3);
        assert_eq!(k.ranks(), vec![1, 3, 3, 1]);
        assert!(k.verify().ok);
        assert_eq!(koszul_complex(&Seq::variables(3).unwrap(), 1).ranks(), vec![1, 3]);
    }

    #[test]
    fn tag_bases() {
        let b = monomial_basis(2, 2);
        let printed: Vec<String> = b.iter().map(ToString::to_string).collect();
        assert_eq!(printed, ["t(1,1)", "t(1,2)", "t(2,2)"]);
        assert_eq!(monomial_basis(5, 0), vec![TagMonomial::empty()]);
        assert_eq!(monomial_basis(3, 2).len(), 6);
        for n in 1..=5 {
            for s in 0..=4 {
                assert_eq!(monomial_basis(n, s).len(), binomial(n + s - 1, s));
            }
        }
    }

    #[test]
    fn q_complex_dimensions() {
        let seq = Seq::variables(2).unwrap();
        assert_eq!(q_complex(&seq, 0), koszul_complex(&seq, 2));
        assert_eq!(q_complex(&seq, 1).ranks(), vec![2, 4, 2]);
        for n in 1..=4 {
            let seq = Seq::variables(n).unwrap();
            for s in 0..=4 {
                let q = q_complex(&seq, s);
                assert!(q.verify().ok, "Q^({s}) for n = {n}");
                for p in 0..=n {
                    assert_eq!(q.module(p).rank(), binomial(n, p) * binomial(n + s - 1, s));
                }
            }
        }
    }

    #[test]
    fn del_examples() {
        let seq = Seq::variables(2).unwrap();
        let d1 = del_map(&seq, 0);
        let m = d1.component(1).unwrap().constant_matrix().unwrap();
        assert_eq!(m, crate::linalg::DenseMatrix::identity(2));
        let on_e12 = d1.component(2).unwrap();
        let e12 = label(&[1, 2], &[]);
        assert_eq!(on_e12.entry_by_label(&label(&[2], &[1]), &e12).unwrap().to_string(), "1");
        assert_eq!(on_e12.entry_by_label(&label(&[1], &[2]), &e12).unwrap().to_string(), "-1");
        let d2 = del_map(&seq, 1);
        let c = d2.component(1).unwrap();
        assert_eq!(c.entry_by_label(&label(&[], &[1, 2]), &label(&[2], &[1])).unwrap().to_string(), "1");
        assert_eq!(c.entry_by_label(&label(&[], &[1, 2]), &label(&[1], &[2])).unwrap().to_string(), "1");
        assert!(c.compose(on_e12).unwrap().is_zero());
    }

    #[test]
    fn del_entries_are_signs() {
        let seq = Seq::variables(4).unwrap();
        for s in 0..3 {
            for m in &del_map(&seq, s).maps {
                for (_, _, p) in m.entries() {
                    let c = p.as_constant().unwrap();
                    assert!(c == BigInt::from(1) || c == BigInt::from(-1));
                }
            }
        }
    }

    #[test]
    fn identities_hold() {
        for n in [2, 4] {
            let r = verify_identities(&Seq::variables(n).unwrap(), 3);
            assert!(r.all_ok(), "{:?}", r.first_failure());
            assert!(!r.checks.is_empty());
        }
        let r = verify_identities(&Seq::parse_explicit(2, &["x1 + x2", "x1*x2"]).unwrap(), 3);
        assert!(r.all_ok());
    }

    #[test]
    fn unsigned_del_breaks_anticommutation() {
        let seq = Seq::variables(2).unwrap();
        let bad = del_map_with_signs(&seq, 0, |_| 1).unwrap();
        let checks = check_anticommutation(&q_complex(&seq, 0), &q_complex(&seq, 1), &bad);
        let fail = checks.iter().find(|c| !c.ok).unwrap();
        assert_eq!(fail.degree, 2);
        assert!(fail.witness.as_ref().unwrap().starts_with("e{1,2}"));
    }

    #[test]
    fn differentials_preserve_internal_degree() {
        let seq = Seq::parse_explicit(2, &["x1^2", "x1*x2 + x2^2"]).unwrap();
        for s in 0..3 {
            for d in q_complex(&seq, s).differentials() {
                d.check_homogeneous().unwrap();
            }
            for m in &del_map(&seq, s).maps {
                m.check_homogeneous().unwrap();
            }
        }
    }
}
