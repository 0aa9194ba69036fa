//! The double complex `P_{p,q} = Q^(p)_q` with vertical `∂_Q` and
//! horizontal `del`, and the spectral sequence of its column filtration
//! after reducing modulo `I`.
//!
//! Total degree is `q`: `Tot_n = ⊕_p Q^(p)_n = K(R;I^s)_n`. The horizontal
//! map goes `(p, q) → (p+1, q-1)`, so `d¹` lowers total degree as it should.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainComplex, FreeModule, SparseMap};
use crate::error::{Error, Result};
use crate::koszul::{check_anticommutation, check_del_square, del_map, q_complex, DelMap, IdentityCheck};
use crate::linalg::{nullspace, rank, DenseMatrix, Span};
use crate::resolution::{build_k_ris, k_ris_labels};
use crate::scalar::{Field, Scalar};
use crate::sequence::RegularSequence;
use crate::smith::smith_normal_form;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleComplex<C> {
    pub seq: RegularSequence<C>,
    pub s: usize,
    /// `columns[p] = Q^(p)` for `p < s`.
    pub columns: Vec<ChainComplex<C>>,
    /// `horizontal[p] = del^(p+1)`, column `p` to column `p+1`, for `p + 1 < s`.
    pub horizontal: Vec<DelMap<C>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleComplexCheck {
    pub vertical_ok: bool,
    pub horizontal_ok: bool,
    pub anticommute_ok: bool,
    pub failures: Vec<IdentityCheck>,
}

impl DoubleComplexCheck {
    pub fn ok(&self) -> bool {
        self.vertical_ok && self.horizontal_ok && self.anticommute_ok
    }
}

pub fn build_double_complex<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<DoubleComplex<C>> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    Ok(DoubleComplex {
        seq: seq.clone(),
        s,
        columns: (0..s).map(|p| q_complex(seq, p)).collect(),
        horizontal: (0..s - 1).map(|p| del_map(seq, p)).collect(),
    })
}

impl<C: Scalar> DoubleComplex<C> {
    pub fn verify(&self) -> DoubleComplexCheck {
        let vertical_ok = self.columns.iter().all(|c| c.verify().ok);
        let mut failures = Vec::new();
        let squares: Vec<IdentityCheck> =
            self.horizontal.windows(2).flat_map(|w| check_del_square(&w[0], &w[1])).collect();
        let anti: Vec<IdentityCheck> = self
            .horizontal
            .iter()
            .enumerate()
            .flat_map(|(p, h)| check_anticommutation(&self.columns[p], &self.columns[p + 1], h))
            .collect();
        let horizontal_ok = squares.iter().all(|c| c.ok);
        let anticommute_ok = anti.iter().all(|c| c.ok);
        failures.extend(squares.into_iter().chain(anti).filter(|c| !c.ok));
        DoubleComplexCheck { vertical_ok, horizontal_ok, anticommute_ok, failures }
    }

    /// The total complex `Tot_n = ⊕_p P_{p,n}` with `d = dv + dh`.
    pub fn total(&self) -> Result<ChainComplex<C>> {
        let n = self.seq.len();
        let n_vars = self.seq.n_vars();
        let modules: Vec<Arc<FreeModule>> = (0..=n)
            .map(|k| Ok(Arc::new(FreeModule::from_labels(k_ris_labels(n, self.s, k), self.seq.degrees())?)))
            .collect::<Result<_>>()?;
        let mut differentials: Vec<SparseMap<C>> =
            (1..=n).map(|k| SparseMap::zero(modules[k].clone(), modules[k - 1].clone(), n_vars)).collect();
        let pieces = self
            .columns
            .iter()
            .flat_map(|c| c.differentials().iter().enumerate().map(|(k, d)| (k + 1, d)))
            .chain(self.horizontal.iter().flat_map(|h| h.maps.iter().enumerate().map(|(k, d)| (k + 1, d))));
        for (k, d) in pieces {
            let tot = &mut differentials[k - 1];
            for (i, j, p) in d.entries() {
                let ti = modules[k - 1].position(d.target().generator(i)).expect("label in total");
                let tj = modules[k].position(d.source().generator(j)).expect("label in total");
                tot.add_to_entry(ti, tj, p);
            }
        }
        ChainComplex::new(n_vars, modules, differentials)
    }

    /// The total complex coincides with `K(R;I^s)`, label for label.
    pub fn total_matches_resolution(&self) -> Result<bool> {
        Ok(self.total()? == build_k_ris(&self.seq, self.s)?.complex)
    }
}

/// Ranks of one page, `ranks[q][p]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub page: String,
    pub s: usize,
    pub n_generators: usize,
    pub ranks: Vec<Vec<usize>>,
}

impl SpectralPage {
    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.ranks.get(q).and_then(|r| r.get(p)).copied().unwrap_or(0)
    }

    /// `Σ_p E_{p,n}` for each total degree `n`.
    pub fn total_ranks(&self) -> Vec<usize> {
        self.ranks.iter().map(|r| r.iter().sum()).collect()
    }

    /// Cells `(p, q)` with nonzero rank.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (q, row) in self.ranks.iter().enumerate() {
            for (p, &r) in row.iter().enumerate() {
                if r != 0 {
                    out.push((p, q));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Grid with rows `q` (top row highest) and columns `p`.
    pub fn render(&self) -> String {
        let mut out = format!("E{} (rows q, columns p)\n", self.page);
        for (q, row) in self.ranks.iter().enumerate().rev() {
            let cells: Vec<String> = row.iter().map(|r| format!("{r:>4}")).collect();
            out.push_str(&format!("q={q:<2}|{}\n", cells.join("")));
        }
        out
    }
}

/// The `R/I`-reduced double complex as constant matrices.
struct Reduced<F> {
    s: usize,
    n: usize,
    /// `vertical[p][q-1] : P_{p,q} → P_{p,q-1}`.
    vertical: Vec<Vec<DenseMatrix<F>>>,
    /// `horizontal[p][q-1] : P_{p,q} → P_{p+1,q-1}`.
    horizontal: Vec<Vec<DenseMatrix<F>>>,
    dims: Vec<Vec<usize>>,
}

fn constant<C: Scalar>(d: &SparseMap<C>) -> Result<DenseMatrix<C::Field>> {
    d.constant_matrix()
        .map(|m| m.to_field())
        .ok_or_else(|| Error::NonConstantEntry(format!("map from {} generators", d.source().rank())))
}

fn reduce<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<Reduced<C::Field>> {
    let dc = build_double_complex(seq, s)?;
    let reducer_complex = |c: &ChainComplex<C>| c.tensor_mod_i(seq);
    let vertical = dc
        .columns
        .iter()
        .map(|c| reducer_complex(c)?.differentials().iter().map(constant).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    // del has ±1 entries only, so it needs no reduction.
    let horizontal = dc
        .horizontal
        .iter()
        .map(|h| h.maps.iter().map(constant).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let dims = dc.columns.iter().map(ChainComplex::ranks).collect();
    Ok(Reduced { s, n: seq.len(), vertical, horizontal, dims })
}

impl<F: Field> Reduced<F> {
    fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(p).and_then(|c| c.get(q)).copied().unwrap_or(0)
    }

    fn vertical_vanishes(&self) -> bool {
        self.vertical.iter().flatten().all(DenseMatrix::is_zero)
    }

    /// `d¹ : E¹_{p,q} → E¹_{p+1,q-1}`.
    fn d1(&self, p: usize, q: usize) -> Option<&DenseMatrix<F>> {
        q.checked_sub(1).and_then(|k| self.horizontal.get(p).and_then(|h| h.get(k)))
    }

    fn page(&self, name: &str, f: impl Fn(usize, usize) -> usize + Sync) -> SpectralPage {
        let ranks = (0..=self.n)
            .into_par_iter()
            .map(|q| (0..self.s).map(|p| f(p, q)).collect())
            .collect();
        SpectralPage { page: name.into(), s: self.s, n_generators: self.n, ranks }
    }

    fn e1(&self) -> SpectralPage {
        self.page("1", |p, q| {
            let out = q.checked_sub(1).map_or(0, |k| rank(&self.vertical[p][k]));
            let inc = self.vertical[p].get(q).map_or(0, rank);
            self.dim(p, q) - out - inc
        })
    }

    /// Valid when the vertical differential vanishes, so `E¹ = P̄`.
    fn e2(&self) -> SpectralPage {
        self.page("2", |p, q| {
            let out = self.d1(p, q).map_or(0, rank);
            let inc = if p == 0 { 0 } else { self.d1(p - 1, q + 1).map_or(0, rank) };
            self.dim(p, q) - out - inc
        })
    }
}

fn reduced_checked<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<Reduced<C::Field>> {
    let r = reduce(seq, s)?;
    if !r.vertical_vanishes() {
        return Err(Error::InvalidParameter("vertical differential does not vanish modulo I".into()));
    }
    Ok(r)
}

pub fn e1_page<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<SpectralPage> {
    Ok(reduce(seq, s)?.e1())
}

/// Matrix of `d¹ : E¹_{p,q} → E¹_{p+1,q-1}` with its row and column labels.
pub fn d1_matrix<C: Scalar>(
    seq: &RegularSequence<C>,
    s: usize,
    p: usize,
    q: usize,
) -> Result<Option<(Vec<String>, Vec<String>, DenseMatrix<C::Field>)>> {
    let r = reduced_checked(seq, s)?;
    let Some(m) = r.d1(p, q) else { return Ok(None) };
    let rows = crate::koszul::q_labels(seq.len(), p + 1, q - 1).iter().map(ToString::to_string).collect();
    let cols = crate::koszul::q_labels(seq.len(), p, q).iter().map(ToString::to_string).collect();
    Ok(Some((rows, cols, m.clone())))
}

pub fn e2_page<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<SpectralPage> {
    Ok(reduced_checked(seq, s)?.e2())
}

/// `E^∞` from the column filtration `F_p = ⊕_{p' ≥ p} P_{p',*}` of the
/// reduced total complex: `dim F_p H_n = rank[Z(F_p) | B] − rank B`.
pub fn einf_page<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<SpectralPage> {
    let total = build_k_ris(seq, s)?.complex.tensor_mod_i(seq)?;
    let mats: Vec<DenseMatrix<C::Field>> = total.differentials().iter().map(constant).collect::<Result<_>>()?;
    let n = seq.len();
    let ranks: Vec<Vec<usize>> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let module = total.module(k);
            let dim = module.rank();
            let filtered: Vec<usize> = (0..=s)
                .map(|p| {
                    let cols: Vec<usize> = (0..dim).filter(|&j| module.generator(j).summand() >= p).collect();
                    let mut span = Span::new(dim);
                    if let Some(inc) = mats.get(k) {
                        for j in 0..inc.ncols() {
                            span.insert(&inc.column(j));
                        }
                    }
                    let base = span.dimension();
                    let cycles: Vec<Vec<C::Field>> = match k.checked_sub(1).and_then(|i| mats.get(i)) {
                        Some(d) if d.nrows() > 0 => {
                            let sub = DenseMatrix::from_columns(
                                d.nrows(),
                                &cols.iter().map(|&j| d.column(j)).collect::<Vec<_>>(),
                            );
                            nullspace(&sub)
                                .into_iter()
                                .map(|v| {
                                    let mut full = vec![C::Field::zero(); dim];
                                    for (c, &j) in v.into_iter().zip(&cols) {
                                        full[j] = c;
                                    }
                                    full
                                })
                                .collect()
                        }
                        _ => cols
                            .iter()
                            .map(|&j| {
                                let mut e = vec![C::Field::zero(); dim];
                                e[j] = C::Field::one();
                                e
                            })
                            .collect(),
                    };
                    for z in &cycles {
                        span.insert(z);
                    }
                    span.dimension() - base
                })
                .collect();
            (0..s).map(|p| filtered[p] - filtered[p + 1]).collect()
        })
        .collect();
    Ok(SpectralPage { page: "inf".into(), s, n_generators: n, ranks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub e1: SpectralPage,
    pub e2: SpectralPage,
    pub einf: SpectralPage,
    pub tor_ranks: Vec<usize>,
    /// `E²` vanishes off `(0,0)` and the last column.
    pub support_ok: bool,
    pub e2_equals_einf: bool,
    pub totals_match: bool,
}

impl CollapseReport {
    pub fn ok(&self) -> bool {
        self.support_ok && self.e2_equals_einf && self.totals_match
    }
}

pub fn collapse_check<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<CollapseReport> {
    let r = reduced_checked(seq, s)?;
    let (e1, e2) = (r.e1(), r.e2());
    let einf = einf_page(seq, s)?;
    let total = build_k_ris(seq, s)?.complex.tensor_mod_i(seq)?;
    let tor_ranks: Vec<usize> = crate::homology::homology_ranks(&total)?.into_iter().map(|h| h.rank).collect();
    let support_ok = e2.support().into_iter().all(|(p, q)| (p, q) == (0, 0) || p + 1 == s);
    Ok(CollapseReport {
        support_ok,
        e2_equals_einf: e2.ranks == einf.ranks,
        totals_match: e2.total_ranks() == tor_ranks,
        e1,
        e2,
        einf,
        tor_ranks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportBlock {
    /// Distinct indices appearing in the labels of the block.
    pub support: Vec<usize>,
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub divisors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<SupportBlock>,
    /// Nonzero entries joining labels of different supports.
    pub cross_entries: usize,
    pub reassembles: bool,
    pub blockwise_divisors: Vec<String>,
    pub global_divisors: Vec<String>,
}

impl BlockDecomposition {
    pub fn ok(&self) -> bool {
        self.cross_entries == 0 && self.reassembles && self.blockwise_divisors == self.global_divisors
    }
}

fn support_of(g: &crate::labels::QGenerator) -> Vec<usize> {
    let mut v = g.index_multiset();
    v.dedup();
    v
}

/// Splits an integer matrix between two labelled modules by the support
/// set of the labels and compares blockwise and global Smith forms.
pub fn support_blocks(source: &FreeModule, target: &FreeModule, m: &DenseMatrix<BigInt>) -> BlockDecomposition {
    let mut groups: BTreeMap<Vec<usize>, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for i in 0..target.rank() {
        groups.entry(support_of(target.generator(i))).or_default().0.push(i);
    }
    for j in 0..source.rank() {
        groups.entry(support_of(source.generator(j))).or_default().1.push(j);
    }
    let row_block: Vec<Vec<usize>> = (0..target.rank()).map(|i| support_of(target.generator(i))).collect();
    let col_block: Vec<Vec<usize>> = (0..source.rank()).map(|j| support_of(source.generator(j))).collect();
    let mut cross_entries = 0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !m.get(i, j).is_zero() && row_block[i] != col_block[j] {
                cross_entries += 1;
            }
        }
    }
    let mut rebuilt = DenseMatrix::zeros(m.nrows(), m.ncols());
    let mut merged = Vec::new();
    let blocks = groups
        .into_iter()
        .map(|(support, (rows, cols))| {
            let sub = DenseMatrix::from_rows(
                cols.len(),
                rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect(),
            );
            for (a, &i) in rows.iter().enumerate() {
                for (b, &j) in cols.iter().enumerate() {
                    rebuilt.set(i, j, sub.get(a, b).clone());
                }
            }
            let snf = smith_normal_form(&sub);
            merged.extend(snf.diagonal.iter().cloned());
            SupportBlock {
                support,
                rows: rows.iter().map(|&i| target.generator(i).to_string()).collect(),
                columns: cols.iter().map(|&j| source.generator(j).to_string()).collect(),
                divisors: snf.diagonal.iter().map(ToString::to_string).collect(),
            }
        })
        .collect();
    let mut diag = DenseMatrix::zeros(merged.len(), merged.len());
    for (k, d) in merged.into_iter().enumerate() {
        diag.set(k, k, d);
    }
    let strings = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    BlockDecomposition {
        blocks,
        cross_entries,
        reassembles: &rebuilt == m,
        blockwise_divisors: strings(&smith_normal_form(&diag).diagonal),
        global_divisors: strings(&smith_normal_form(m).diagonal),
    }
}

/// Support decomposition of `d¹ : E¹_{p,q} → E¹_{p+1,q-1}` on the integer
/// skeleton with `n` generators.
pub fn d1_support_blocks(n: usize, p: usize, q: usize) -> Result<Option<BlockDecomposition>> {
    if q == 0 {
        return Ok(None);
    }
    let seq = RegularSequence::<BigInt>::variables(n)?;
    let del = del_map(&seq, p);
    let Some(d) = del.component(q) else { return Ok(None) };
    let m = d.constant_matrix().expect("del entries are constant");
    Ok(Some(support_blocks(d.source(), d.target(), &m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Seq = RegularSequence<BigInt>;

    #[test]
    fn double_complex_totalizes_to_resolution() {
        for n in 1..=3 {
            for s in 1..=3 {
                let dc = build_double_complex(&Seq::variables(n).unwrap(), s).unwrap();
                assert!(dc.verify().ok());
                assert!(dc.total_matches_resolution().unwrap(), "n = {n}, s = {s}");
            }
        }
        let dc = build_double_complex(&Seq::variables(2).unwrap(), 2).unwrap();
        assert_eq!(dc.total().unwrap().ranks(), vec![3, 6, 3]);
    }

    #[test]
    fn e1_ranks() {
        let seq = Seq::variables(2).unwrap();
        let e1 = e1_page(&seq, 2).unwrap();
        assert_eq!(e1.ranks, vec![vec![1, 2], vec![2, 4], vec![1, 2]]);
        let (_, _, m) = d1_matrix(&seq, 2, 0, 1).unwrap().unwrap();
        assert_eq!(m, DenseMatrix::identity(2));
        let e1 = e1_page(&Seq::variables(3).unwrap(), 3).unwrap();
        assert_eq!((0..=3).map(|q| e1.rank(2, q)).collect::<Vec<_>>(), vec![6, 18, 18, 6]);
    }

    #[test]
    fn e2_and_collapse() {
        let seq = Seq::variables(2).unwrap();
        let e2 = e2_page(&seq, 2).unwrap();
        assert_eq!(e2.support(), vec![(0, 0), (1, 1), (1, 2)]);
        assert_eq!((e2.rank(1, 1), e2.rank(1, 2)), (3, 2));
        assert_eq!(e2.total_ranks(), vec![1, 3, 2]);
        for n in 1..=3 {
            for s in 1..=3 {
                let c = collapse_check(&Seq::variables(n).unwrap(), s).unwrap();
                assert!(c.ok(), "n = {n}, s = {s}: {c:?}");
            }
        }
        let s1 = e2_page(&seq, 1).unwrap();
        assert_eq!(s1.ranks, vec![vec![1], vec![2], vec![1]]);
    }

    #[test]
    fn blocks() {
        let b = d1_support_blocks(2, 0, 2).unwrap().unwrap();
        let supports: Vec<Vec<usize>> = b.blocks.iter().map(|b| b.support.clone()).collect();
        assert_eq!(supports, vec![vec![1], vec![1, 2], vec![2]]);
        assert!(b.ok());
        for p in 0..3 {
            for q in 1..=3 {
                assert!(d1_support_blocks(3, p, q).unwrap().unwrap().ok());
            }
        }
    }
}
