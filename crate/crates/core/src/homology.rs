//! Homology of the tensored complex `R/I ⊗ K(R;I^s)`, i.e.
//! `Tor^R_*(R/I, R/I^s)`, with explicit cycle representatives.
//!
//! After reducing modulo `I` every differential has constant entries, so
//! everything here is linear algebra over the coefficient field (or over ℤ
//! for torsion and freeness).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainComplex, ChainMap, FreeModule, SparseMap};
use crate::error::{Error, Result};
use crate::koszul::{del_map, koszul_complex};
use crate::linalg::{rank, rref, solve, DenseMatrix, Span};
use crate::resolution::{build_k_ris, reduction_chain_map, KRIsComplex};
use crate::scalar::{CoefficientDomain, Field, Scalar, F2, F3, F5};
use crate::sequence::RegularSequence;
use crate::smith::smith_normal_form;
use crate::spectral::e2_page;

/// `rank H_n` and the elementary divisors `> 1` of `d_{n+1}` (over ℤ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyRank {
    pub rank: usize,
    pub torsion: Vec<String>,
}

/// Matrix of `d_n` with constant entries, over the fraction field.
fn field_matrix<C: Scalar>(d: &SparseMap<C>) -> Result<DenseMatrix<C::Field>> {
    d.constant_matrix()
        .map(|m| m.to_field())
        .ok_or_else(|| Error::NonConstantEntry(format!("d from {} generators", d.source().rank())))
}

fn integer_matrix<C: Scalar>(d: &SparseMap<C>) -> Result<DenseMatrix<BigInt>> {
    let m = d
        .constant_matrix()
        .ok_or_else(|| Error::NonConstantEntry(format!("d from {} generators", d.source().rank())))?;
    let mut out = DenseMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m.get(i, j);
            out.set(i, j, v.to_integer().ok_or_else(|| Error::NonConstantEntry(format!("non-integer entry {v}")))?);
        }
    }
    Ok(out)
}

/// Homology ranks of a complex with constant entries; torsion is reported
/// from Smith forms when the coefficients are integers.
pub fn homology_ranks<C: Scalar>(c: &ChainComplex<C>) -> Result<Vec<HomologyRank>> {
    let mats: Vec<DenseMatrix<C::Field>> = c.differentials().iter().map(field_matrix).collect::<Result<_>>()?;
    let ranks: Vec<usize> = mats.par_iter().map(rank).collect();
    let integer = C::domain() == CoefficientDomain::Integers;
    (0..c.len())
        .map(|n| {
            let dim = c.module(n).rank();
            let out = if n == 0 { 0 } else { ranks[n - 1] };
            let inc = ranks.get(n).copied().unwrap_or(0);
            let torsion = match c.differential(n + 1) {
                Some(d) if integer => smith_normal_form(&integer_matrix(d)?)
                    .nontrivial()
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                _ => Vec::new(),
            };
            Ok(HomologyRank { rank: dim - out - inc, torsion })
        })
        .collect()
}

/// A basis of `H_n` by explicit cycles.
#[derive(Clone, Debug)]
pub struct HomologyBasis<F> {
    pub degree: usize,
    pub dim: usize,
    pub cycle_dim: usize,
    pub boundaries: Vec<Vec<F>>,
    /// Each generator has a 1 in its leading coordinate and is supported on
    /// that coordinate and later ones.
    pub generators: Vec<Vec<F>>,
}

impl<F: Field> HomologyBasis<F> {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Coordinates of the class of `z` in the generator basis; `None` when
    /// `z` is not in `span(boundaries ∪ generators)`, i.e. not a cycle.
    pub fn coordinates(&self, z: &[F]) -> Option<Vec<F>> {
        if self.generators.is_empty() {
            let mut span = Span::new(self.dim);
            for b in &self.boundaries {
                span.insert(b);
            }
            return span.contains(z).then(Vec::new);
        }
        let cols: Vec<Vec<F>> = self.boundaries.iter().chain(&self.generators).cloned().collect();
        let m = DenseMatrix::from_columns(self.dim, &cols);
        let x = solve(&m, z)?;
        Some(x[self.boundaries.len()..].to_vec())
    }

    pub fn is_boundary(&self, z: &[F]) -> bool {
        self.coordinates(z).is_some_and(|c| c.iter().all(F::is_zero))
    }
}

/// Kernel basis preferring late coordinates: candidates come out in
/// decreasing order of their leading coordinate, each supported on its
/// leading coordinate and later ones.
fn kernel_late_first<F: Field>(d: Option<&DenseMatrix<F>>, dim: usize) -> Vec<(usize, Vec<F>)> {
    let Some(d) = d.filter(|d| d.nrows() > 0) else {
        return (0..dim)
            .rev()
            .map(|j| {
                let mut v = vec![F::zero(); dim];
                v[j] = F::one();
                (j, v)
            })
            .collect();
    };
    let rows: Vec<Vec<F>> = d.rows().iter().map(|r| r.iter().rev().cloned().collect()).collect();
    let reversed = rref(&DenseMatrix::from_rows(dim, rows));
    let mut is_pivot = vec![false; dim];
    for &p in &reversed.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..dim).filter(|&j| !is_pivot[j]).collect();
    free.into_iter()
        .zip(reversed.nullspace())
        .map(|(f, v)| (dim - 1 - f, v.into_iter().rev().collect()))
        .collect()
}

/// Homology bases of a complex given by its matrices: `mats[n-1]` is `d_n`.
pub fn homology_bases<F: Field>(dims: &[usize], mats: &[DenseMatrix<F>]) -> Vec<HomologyBasis<F>> {
    (0..dims.len())
        .into_par_iter()
        .map(|n| {
            let dim = dims[n];
            let out = if n == 0 { None } else { mats.get(n - 1) };
            let candidates = kernel_late_first(out, dim);
            let mut span = Span::new(dim);
            let mut boundaries = Vec::new();
            if let Some(inc) = mats.get(n) {
                for j in 0..inc.ncols() {
                    let b = inc.column(j);
                    if span.insert(&b) {
                        boundaries.push(b);
                    }
                }
            }
            let mut chosen: Vec<(usize, Vec<F>)> =
                candidates.iter().filter(|(_, v)| span.insert(v)).cloned().collect();
            chosen.sort_by_key(|(lead, _)| *lead);
            HomologyBasis {
                degree: n,
                dim,
                cycle_dim: candidates.len(),
                boundaries,
                generators: chosen.into_iter().map(|(_, v)| v).collect(),
            }
        })
        .collect()
}

/// `Σ c_j · label_j`, e.g. `e{1}t(2) - e{2}t(1)`.
pub fn format_combination<F: Field>(module: &FreeModule, v: &[F]) -> String {
    let mut out = String::new();
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let label = module.generator(j);
        let (neg, mag) = if c.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(&label.to_string());
        } else {
            out.push_str(&format!("{mag}*{label}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `R/I ⊗ K(R;I^s)` with homology bases over the coefficient field.
#[derive(Clone, Debug)]
pub struct TorComputation<C: Scalar> {
    pub resolution: KRIsComplex<C>,
    pub reduced: ChainComplex<C>,
    pub matrices: Vec<DenseMatrix<C::Field>>,
    pub bases: Vec<HomologyBasis<C::Field>>,
}

impl<C: Scalar> TorComputation<C> {
    pub fn new(seq: &RegularSequence<C>, s: usize) -> Result<Self> {
        let resolution = build_k_ris(seq, s)?;
        let reduced = resolution.complex.tensor_mod_i(seq)?;
        let matrices: Vec<_> = reduced.differentials().iter().map(field_matrix).collect::<Result<_>>()?;
        let bases = homology_bases(&reduced.ranks(), &matrices);
        Ok(TorComputation { resolution, reduced, matrices, bases })
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(HomologyBasis::rank).collect()
    }

    pub fn generator_strings(&self) -> Vec<Vec<String>> {
        self.bases
            .iter()
            .map(|b| b.generators.iter().map(|g| format_combination(self.reduced.module(b.degree), g)).collect())
            .collect()
    }

    /// Product of two cycle vectors via the truncated DGA pairing.
    pub fn multiply(&self, a: (usize, &[C::Field]), b: (usize, &[C::Field])) -> Option<Vec<C::Field>> {
        let target = a.0 + b.0;
        if target >= self.reduced.len() {
            return None;
        }
        let (ma, mb, mt) = (self.reduced.module(a.0), self.reduced.module(b.0), self.reduced.module(target));
        let mut out = vec![C::Field::zero(); mt.rank()];
        for (i, ca) in a.1.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, cb) in b.1.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                if let Some((sign, g)) = self.resolution.multiply_labels(ma.generator(i), mb.generator(j)) {
                    let k = mt.position(&g).expect("product label in module");
                    let c: C::Field = ca.clone() * cb.clone();
                    let term: C::Field = if sign < 0 { -c } else { c };
                    out[k] = out[k].clone() + term;
                }
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub degree: usize,
    pub zero: bool,
    /// The product cycle when its class is nonzero.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductTable {
    pub entries: Vec<ProductEntry>,
    pub all_zero: bool,
}

/// Name of the `i`-th generator of `Tor_n`.
pub fn generator_name(n: usize, i: usize) -> String {
    format!("T{n}.{i}")
}

/// Products of all unordered pairs of positive-degree Tor generators,
/// reduced modulo boundaries.
pub fn product_table<C: Scalar>(t: &TorComputation<C>) -> ProductTable {
    let gens: Vec<(usize, usize)> = t
        .bases
        .iter()
        .skip(1)
        .flat_map(|b| (0..b.rank()).map(move |i| (b.degree, i)))
        .collect();
    let pairs: Vec<((usize, usize), (usize, usize))> = gens
        .iter()
        .enumerate()
        .flat_map(|(k, a)| gens[k..].iter().map(move |b| (*a, *b)))
        .collect();
    let entries: Vec<ProductEntry> = pairs
        .par_iter()
        .map(|&((na, ia), (nb, ib))| {
            let va = &t.bases[na].generators[ia];
            let vb = &t.bases[nb].generators[ib];
            let degree = na + nb;
            let (zero, witness) = match t.multiply((na, va), (nb, vb)) {
                None => (true, None),
                Some(p) => {
                    let zero = t.bases[degree].is_boundary(&p);
                    (zero, (!zero).then(|| format_combination(t.reduced.module(degree), &p)))
                }
            };
            ProductEntry { left: generator_name(na, ia), right: generator_name(nb, ib), degree, zero, witness }
        })
        .collect();
    let all_zero = entries.iter().all(|e| e.zero);
    ProductTable { entries, all_zero }
}

pub fn tor_products<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<ProductTable> {
    Ok(product_table(&TorComputation::new(seq, s)?))
}

/// The map on Tor induced by a chain map, in the generator bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedTorMap {
    /// `matrices[n][i][j]`: coefficient of target generator `i` in the image
    /// of source generator `j`.
    pub matrices: Vec<Vec<Vec<String>>>,
    pub zero_in_positive_degrees: bool,
    pub identity_in_degree_zero: bool,
}

/// Reduces the chain map modulo `I` and expresses the images of the source
/// generators in the target homology basis.
pub fn induced_tor_map<C: Scalar>(f: &ChainMap<C>, seq: &RegularSequence<C>) -> Result<InducedTorMap> {
    f.verify()?;
    let g = f.tensor_mod_i(seq)?;
    let bases_of = |c: &ChainComplex<C>| -> Result<Vec<HomologyBasis<C::Field>>> {
        let mats: Vec<_> = c.differentials().iter().map(field_matrix).collect::<Result<_>>()?;
        Ok(homology_bases(&c.ranks(), &mats))
    };
    let (src, tgt) = (bases_of(&g.source)?, bases_of(&g.target)?);
    let mut matrices = Vec::new();
    let mut numeric: Vec<Vec<Vec<C::Field>>> = Vec::new();
    for (n, comp) in g.components.iter().enumerate() {
        let m = field_matrix(comp)?;
        let mut cols = Vec::new();
        for (j, z) in src[n].generators.iter().enumerate() {
            let image = m.mul_vec(z);
            let coords = tgt[n].coordinates(&image).ok_or_else(|| Error::ChainMapFailure {
                degree: n,
                witness: generator_name(n, j),
            })?;
            cols.push(coords);
        }
        let rows: Vec<Vec<C::Field>> =
            (0..tgt[n].rank()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        matrices.push(rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect());
        numeric.push(rows);
    }
    let zero_in_positive_degrees = numeric.iter().skip(1).flatten().flatten().all(|c| c.is_zero());
    let identity_in_degree_zero = numeric.first().is_some_and(|m| {
        m.len() == m.first().map_or(0, Vec::len)
            && m.iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() }))
    });
    Ok(InducedTorMap { matrices, zero_in_positive_degrees, identity_in_degree_zero })
}

/// Tor ranks from the cokernel of `del^(s-1)` on the `R/I`-reduced tag
/// complexes: `Tor_n = [n = 0] + dim coker(Q^(s-2)_{n+1} → Q^(s-1)_n)`.
/// For `s = 1`, the exterior ranks `C(n_g, n)`.
pub fn coker_ranks<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<Vec<usize>> {
    let n = seq.len();
    if s == 1 {
        return Ok((0..=n).map(|k| crate::poly::binomial(n, k)).collect());
    }
    let del = del_map(seq, s - 2);
    (0..=n)
        .map(|k| {
            let dim = crate::koszul::q_labels(n, s - 1, k).len();
            let r = match del.component(k + 1) {
                Some(d) => rank(&field_matrix(d)?),
                None => 0,
            };
            Ok(dim - r + usize::from(k == 0))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorReport {
    pub n_generators: usize,
    pub s: usize,
    pub field: String,
    pub ranks: Vec<usize>,
    pub generators: Vec<Vec<String>>,
    pub torsion: Vec<Vec<String>>,
    pub coker_ranks: Vec<usize>,
    pub e2_ranks: Vec<usize>,
    pub routes_agree: bool,
    pub products: ProductTable,
    pub induced_reduction: Option<InducedTorMap>,
}

impl TorReport {
    /// All cross-checks hold: three routes agree, torsion is empty, products
    /// vanish when `s ≥ 2`, and the reduction map is trivial.
    pub fn ok(&self) -> bool {
        self.routes_agree
            && self.torsion.iter().all(Vec::is_empty)
            && self.ranks.first() == Some(&1)
            && (self.s == 1 || self.products.all_zero)
            && self
                .induced_reduction
                .as_ref()
                .is_none_or(|m| m.zero_in_positive_degrees && m.identity_in_degree_zero)
    }
}

pub fn tor<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<TorReport> {
    let t = TorComputation::new(seq, s)?;
    let ranks = t.ranks();
    let torsion = homology_ranks(&t.reduced)?.into_iter().map(|h| h.torsion).collect();
    let coker = coker_ranks(seq, s)?;
    let e2 = e2_page(seq, s)?.total_ranks();
    let induced_reduction = if s >= 2 { Some(induced_tor_map(&reduction_chain_map(seq, s)?, seq)?) } else { None };
    Ok(TorReport {
        n_generators: seq.len(),
        s,
        field: C::domain().to_string(),
        routes_agree: ranks == coker && ranks == e2,
        generators: t.generator_strings(),
        products: product_table(&t),
        ranks,
        torsion,
        coker_ranks: coker,
        e2_ranks: e2,
        induced_reduction,
    })
}

/// Smith-form and cross-field rank data for a complex over ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    /// Elementary divisors `> 1` of each `d_n`, `n ≥ 1`.
    pub divisors: Vec<Vec<String>>,
    pub all_unit: bool,
    /// Homology ranks per field.
    pub ranks: BTreeMap<String, Vec<usize>>,
    pub ranks_agree: bool,
}

impl FreenessReport {
    pub fn ok(&self) -> bool {
        self.all_unit && self.ranks_agree
    }
}

fn ranks_over<F: Field>(dims: &[usize], mats: &[DenseMatrix<BigInt>]) -> Vec<usize> {
    let r: Vec<usize> = mats.iter().map(|m| rank(&m.map(F::from_bigint))).collect();
    (0..dims.len())
        .map(|n| dims[n] - if n == 0 { 0 } else { r[n - 1] } - r.get(n).copied().unwrap_or(0))
        .collect()
}

/// `dims[n]` is the rank of `C_n`; `mats[n-1]` is `d_n`.
pub fn freeness_of_matrices(dims: &[usize], mats: &[DenseMatrix<BigInt>]) -> FreenessReport {
    let divisors: Vec<Vec<String>> = mats
        .par_iter()
        .map(|m| smith_normal_form(m).nontrivial().iter().map(ToString::to_string).collect())
        .collect();
    let mut ranks = BTreeMap::new();
    ranks.insert("Q".to_string(), ranks_over::<crate::BigRational>(dims, mats));
    ranks.insert(F2::domain().to_string(), ranks_over::<F2>(dims, mats));
    ranks.insert(F3::domain().to_string(), ranks_over::<F3>(dims, mats));
    ranks.insert(F5::domain().to_string(), ranks_over::<F5>(dims, mats));
    let first = ranks.values().next().cloned();
    FreenessReport {
        all_unit: divisors.iter().all(Vec::is_empty),
        ranks_agree: ranks.values().all(|r| Some(r) == first.as_ref()),
        divisors,
        ranks,
    }
}

/// Freeness data for `R/I ⊗ K(R;I^s)`. Its entries come from the integer
/// skeleton (the variables case over ℤ); the skeleton is checked to map onto
/// the tensored complex of `seq` before it is used.
pub fn freeness_check<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<FreenessReport> {
    let z_seq = RegularSequence::<BigInt>::variables(seq.len())?;
    let skeleton = build_k_ris(&z_seq, s)?.complex.tensor_mod_i(&z_seq)?;
    let actual = build_k_ris(seq, s)?.complex.tensor_mod_i(seq)?;
    let mats: Vec<DenseMatrix<BigInt>> = skeleton.differentials().iter().map(integer_matrix).collect::<Result<_>>()?;
    for (n, (m, d)) in mats.iter().zip(actual.differentials()).enumerate() {
        let own = d.constant_matrix().expect("tensored entries are constant");
        if m.map(C::from_bigint) != own {
            return Err(Error::ShapeMismatch(format!("integer skeleton differs from d_{}", n + 1)));
        }
    }
    Ok(freeness_of_matrices(&skeleton.ranks(), &mats))
}

/// Slice homology of the Koszul complex; nonzero `H_n`, `n ≥ 1`, certifies
/// that the sequence is not regular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityProbe {
    pub max_internal: u32,
    pub grid: Vec<Vec<usize>>,
    pub passed: bool,
    pub first_failure: Option<(usize, u32)>,
}

pub fn koszul_regularity_probe<C: Scalar>(seq: &RegularSequence<C>, max_d: u32) -> RegularityProbe {
    let k = koszul_complex(seq, seq.len()).to_field();
    let grid = k.homology_grid_in(max_d, |c: &C::Field| c.clone());
    let first_failure = grid
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(n, row)| row.iter().position(|&h| h != 0).map(|d| (n, d as u32)));
    RegularityProbe { max_internal: max_d, grid, passed: first_failure.is_none(), first_failure }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::reduction_chain_map;

    type Seq = RegularSequence<BigInt>;

    #[test]
    fn tensored_koszul_ranks() {
        let seq = Seq::variables(3).unwrap();
        let c = koszul_complex(&seq, 3).tensor_mod_i(&seq).unwrap();
        let h = homology_ranks(&c).unwrap();
        assert_eq!(h.iter().map(|h| h.rank).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        assert!(h.iter().all(|h| h.torsion.is_empty()));
    }

    #[test]
    fn tor_small_cases() {
        let t = tor(&Seq::variables(2).unwrap(), 1).unwrap();
        assert_eq!(t.ranks, vec![1, 2, 1]);
        assert_eq!(t.generators, vec![vec!["e{}"], vec!["e{1}", "e{2}"], vec!["e{1,2}"]]);
        assert!(!t.products.all_zero);
        assert!(t.ok());

        let t = tor(&Seq::variables(2).unwrap(), 2).unwrap();
        assert_eq!(t.ranks, vec![1, 3, 2]);
        assert_eq!(t.coker_ranks, t.ranks);
        assert_eq!(t.e2_ranks, t.ranks);
        assert!(t.products.all_zero);
        assert_eq!(t.products.entries.len(), 15);
        assert!(t.ok(), "{t:?}");
        for g in t.generators.iter().skip(1).flatten() {
            assert!(g.contains("t("), "{g}");
        }

        assert_eq!(tor(&Seq::variables(2).unwrap(), 3).unwrap().ranks, vec![1, 4, 3]);
        assert_eq!(tor(&Seq::variables(1).unwrap(), 2).unwrap().ranks, vec![1, 1]);
    }

    #[test]
    fn reduction_is_trivial_on_tor() {
        let seq = Seq::variables(2).unwrap();
        for s in 2..=3 {
            let m = induced_tor_map(&reduction_chain_map(&seq, s).unwrap(), &seq).unwrap();
            assert!(m.zero_in_positive_degrees);
            assert!(m.identity_in_degree_zero);
            assert_eq!(m.matrices[0], vec![vec!["1"]]);
        }
    }

    #[test]
    fn identity_map_is_identity_on_tor() {
        let seq = Seq::variables(2).unwrap();
        let k = build_k_ris(&seq, 2).unwrap().complex;
        let m = induced_tor_map(&ChainMap::identity(&k), &seq).unwrap();
        assert_eq!(m.matrices[1], vec![vec!["1", "0", "0"], vec!["0", "1", "0"], vec!["0", "0", "1"]]);
    }

    #[test]
    fn freeness() {
        for n in 1..=3 {
            for s in 1..=3 {
                let r = freeness_check(&Seq::variables(n).unwrap(), s).unwrap();
                assert!(r.ok(), "n = {n}, s = {s}: {r:?}");
            }
        }
        let bad = freeness_of_matrices(&[1, 1], &[DenseMatrix::from_rows(1, vec![vec![BigInt::from(2)]])]);
        assert_eq!(bad.divisors, vec![vec!["2".to_string()]]);
        assert!(!bad.all_unit);
        assert!(!bad.ranks_agree);
    }

    #[test]
    fn regularity_probe() {
        let bad = Seq::parse_explicit(2, &["x1", "x1"]).unwrap();
        let p = koszul_regularity_probe(&bad, 4);
        assert!(!p.passed);
        assert_eq!(p.first_failure, Some((1, 1)));
        assert!(koszul_regularity_probe(&Seq::variables(2).unwrap(), 6).passed);
        assert!(koszul_regularity_probe(&Seq::parse_explicit(2, &["x1 + x2", "x1*x2"]).unwrap(), 10).passed);
    }

    #[test]
    fn combination_format() {
        let seq = Seq::variables(2).unwrap();
        let k = build_k_ris(&seq, 1).unwrap().complex;
        let v = vec![crate::BigRational::from_integer(BigInt::from(2)), -crate::BigRational::from_integer(BigInt::from(1))];
        assert_eq!(format_combination(k.module(1), &v), "2*e{1} - e{2}");
    }
}
