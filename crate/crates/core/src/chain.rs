//! Free graded modules over `R = k[x_1..x_N]`, sparse polynomial maps between
//! them, chain complexes and chain maps, and extraction of finite graded
//! slices for rank computations.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::labels::QGenerator;
use crate::linalg::{self, DenseMatrix, SparseMatrix, Span};
use crate::poly::{monomial_count, monomials_of_degree, Homogeneity, Monomial, Polynomial};
use crate::scalar::Scalar;
use crate::sequence::RegularSequence;

/// A free module with an ordered basis of labelled homogeneous generators.
#[derive(Clone, Debug)]
pub struct FreeModule {
    generators: Vec<QGenerator>,
    degrees: Vec<u32>,
    index: HashMap<QGenerator, usize>,
}

impl PartialEq for FreeModule {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.degrees == other.degrees
    }
}

impl Eq for FreeModule {}

impl FreeModule {
    /// Sorts generators by label; duplicate labels are rejected.
    pub fn new(mut generators: Vec<(QGenerator, u32)>) -> Result<Self> {
        generators.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = generators.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateLabel(w[0].0.to_string()));
        }
        let index = generators.iter().enumerate().map(|(i, (g, _))| (g.clone(), i)).collect();
        let (generators, degrees) = generators.into_iter().unzip();
        Ok(FreeModule { generators, degrees, index })
    }

    /// Internal degrees computed from the generator degrees `deg(u_i)`.
    pub fn from_labels(labels: impl IntoIterator<Item = QGenerator>, degrees: &[u32]) -> Result<Self> {
        Self::new(labels.into_iter().map(|g| {
            let d = g.internal_degree(degrees);
            (g, d)
        }).collect())
    }

    pub fn empty() -> Self {
        FreeModule { generators: Vec::new(), degrees: Vec::new(), index: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[QGenerator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &QGenerator {
        &self.generators[i]
    }

    pub fn internal_degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn internal_degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn position(&self, g: &QGenerator) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// `dim_k (F)_d` in a ring with `n_vars` variables.
    pub fn slice_dimension(&self, n_vars: usize, d: u32) -> usize {
        self.degrees
            .iter()
            .filter(|&&g| g <= d)
            .map(|&g| monomial_count(n_vars, d - g))
            .sum()
    }

    /// Direct sum; the two label sets must be disjoint.
    pub fn direct_sum(&self, other: &FreeModule) -> Result<FreeModule> {
        let all = self
            .generators
            .iter()
            .zip(&self.degrees)
            .chain(other.generators.iter().zip(&other.degrees))
            .map(|(g, d)| (g.clone(), *d))
            .collect();
        FreeModule::new(all)
    }
}

fn empty_module() -> &'static Arc<FreeModule> {
    static EMPTY: OnceLock<Arc<FreeModule>> = OnceLock::new();
    EMPTY.get_or_init(|| Arc::new(FreeModule::empty()))
}

/// Column of a sparse map: target index → nonzero coefficient.
pub type Column<C> = BTreeMap<usize, Polynomial<C>>;

/// An `R`-linear map between free modules, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMap<C> {
    source: Arc<FreeModule>,
    target: Arc<FreeModule>,
    n_vars: usize,
    cols: Vec<Column<C>>,
}

impl<C: Scalar> SparseMap<C> {
    pub fn zero(source: Arc<FreeModule>, target: Arc<FreeModule>, n_vars: usize) -> Self {
        let cols = vec![BTreeMap::new(); source.rank()];
        SparseMap { source, target, n_vars, cols }
    }

    /// Builds a map from the image of each source generator, given as
    /// `(target label, coefficient)` pairs. Labels outside the target are
    /// an error; repeated labels are summed.
    pub fn from_rule<F>(source: Arc<FreeModule>, target: Arc<FreeModule>, n_vars: usize, rule: F) -> Result<Self>
    where
        F: Fn(&QGenerator) -> Vec<(QGenerator, Polynomial<C>)>,
    {
        let mut m = Self::zero(source.clone(), target.clone(), n_vars);
        for (j, g) in source.generators().iter().enumerate() {
            for (h, p) in rule(g) {
                let i = target.position(&h).ok_or_else(|| {
                    Error::ShapeMismatch(format!("image of {g} mentions {h}, absent from target"))
                })?;
                m.add_to_entry(i, j, &p);
            }
        }
        Ok(m)
    }

    pub fn identity(module: Arc<FreeModule>, n_vars: usize) -> Self {
        let mut m = Self::zero(module.clone(), module.clone(), n_vars);
        for j in 0..module.rank() {
            m.cols[j].insert(j, Polynomial::one(n_vars));
        }
        m
    }

    pub fn source(&self) -> &Arc<FreeModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FreeModule> {
        &self.target
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn column(&self, j: usize) -> &Column<C> {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial<C> {
        self.cols[j].get(&i).cloned().unwrap_or_else(|| Polynomial::zero(self.n_vars))
    }

    /// Entry addressed by labels.
    pub fn entry_by_label(&self, target: &QGenerator, source: &QGenerator) -> Option<Polynomial<C>> {
        let i = self.target.position(target)?;
        let j = self.source.position(source)?;
        Some(self.entry(i, j))
    }

    pub fn set_entry(&mut self, i: usize, j: usize, p: Polynomial<C>) {
        if p.is_zero() {
            self.cols[j].remove(&i);
        } else {
            self.cols[j].insert(i, p);
        }
    }

    pub fn add_to_entry(&mut self, i: usize, j: usize, p: &Polynomial<C>) {
        if p.is_zero() {
            return;
        }
        let e = self.cols[j].entry(i).or_insert_with(|| Polynomial::zero(self.n_vars));
        e.add_assign_ref(p);
        if e.is_zero() {
            self.cols[j].remove(&i);
        }
    }

    /// Iterates `(target index, source index, entry)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial<C>)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, p)| (*i, j, p)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// First source generator with a nonzero image.
    pub fn first_nonzero_column(&self) -> Option<usize> {
        self.cols.iter().position(|c| !c.is_empty())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &SparseMap<C>) -> Result<SparseMap<C>> {
        if g.target != self.source {
            return Err(Error::ShapeMismatch(format!(
                "compose: inner target rank {} != outer source rank {}",
                g.target.rank(),
                self.source.rank()
            )));
        }
        let mut out = SparseMap::zero(g.source.clone(), self.target.clone(), self.n_vars);
        for (j, col) in g.cols.iter().enumerate() {
            for (k, p) in col {
                for (i, q) in &self.cols[*k] {
                    out.add_to_entry(*i, j, &(p * q));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparseMap<C>) -> Result<SparseMap<C>> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("add: maps between different modules".into()));
        }
        let mut out = self.clone();
        for (i, j, p) in other.entries() {
            out.add_to_entry(i, j, p);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> SparseMap<C> {
        let mut out = SparseMap::zero(self.source.clone(), self.target.clone(), self.n_vars);
        for (i, j, p) in self.entries() {
            out.set_entry(i, j, p.scale(c));
        }
        out
    }

    pub fn neg(&self) -> SparseMap<C> {
        self.scale(&-C::one())
    }

    /// Image of a vector of polynomial coordinates on the source basis.
    pub fn apply(&self, v: &Column<C>) -> Column<C> {
        let mut out: Column<C> = BTreeMap::new();
        for (j, a) in v {
            for (i, p) in &self.cols[*j] {
                let e = out.entry(*i).or_insert_with(|| Polynomial::zero(self.n_vars));
                e.add_assign_ref(&(a * p));
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Checks that entry `(h, g)` is homogeneous of degree `deg g − deg h`.
    pub fn check_homogeneous(&self) -> Result<()> {
        for (i, j, p) in self.entries() {
            let (dg, dh) = (self.source.internal_degree(j), self.target.internal_degree(i));
            let ok = match p.homogeneity() {
                Homogeneity::Zero => true,
                Homogeneity::Homogeneous(e) => dg >= dh && e == dg - dh,
                Homogeneity::Inhomogeneous => false,
            };
            if !ok {
                return Err(Error::ShapeMismatch(format!(
                    "entry {} <- {} = {p} does not preserve internal degree",
                    self.target.generator(i),
                    self.source.generator(j)
                )));
            }
        }
        Ok(())
    }

    /// Coefficientwise image.
    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> SparseMap<D> {
        let mut out = SparseMap::zero(self.source.clone(), self.target.clone(), self.n_vars);
        for (i, j, p) in self.entries() {
            out.set_entry(i, j, p.map_coeffs(f));
        }
        out
    }

    /// Constant matrix (rows = target, columns = source); `None` if some
    /// entry is not a constant.
    pub fn constant_matrix(&self) -> Option<DenseMatrix<C>> {
        let mut m = DenseMatrix::zeros(self.target.rank(), self.source.rank());
        for (i, j, p) in self.entries() {
            m.set(i, j, p.as_constant()?);
        }
        Some(m)
    }

    /// The same map with source and target re-embedded into larger modules
    /// containing their labels.
    pub fn reembed(&self, source: Arc<FreeModule>, target: Arc<FreeModule>) -> Result<SparseMap<C>> {
        let mut out = SparseMap::zero(source.clone(), target.clone(), self.n_vars);
        for (i, j, p) in self.entries() {
            let (h, g) = (self.target.generator(i), self.source.generator(j));
            let ti = target.position(h).ok_or_else(|| Error::ShapeMismatch(format!("{h} missing")))?;
            let sj = source.position(g).ok_or_else(|| Error::ShapeMismatch(format!("{g} missing")))?;
            out.set_entry(ti, sj, p.clone());
        }
        Ok(out)
    }
}

/// Outcome of [`ChainComplex::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexCheck {
    pub ok: bool,
    pub failure: Option<SquareFailure>,
}

/// `d_{n-1} ∘ d_n ≠ 0`, witnessed by a generator of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareFailure {
    pub degree: usize,
    pub witness: String,
    pub image: String,
}

/// A bounded chain complex of free modules, `C_0 ← C_1 ← … ← C_top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex<C> {
    n_vars: usize,
    modules: Vec<Arc<FreeModule>>,
    /// `differentials[n - 1] = d_n : C_n → C_{n-1}`.
    differentials: Vec<SparseMap<C>>,
}

impl<C: Scalar> ChainComplex<C> {
    /// Checks that `differentials[n-1]` runs `modules[n] → modules[n-1]`.
    pub fn new(n_vars: usize, modules: Vec<Arc<FreeModule>>, differentials: Vec<SparseMap<C>>) -> Result<Self> {
        if modules.is_empty() && differentials.is_empty() {
            return Ok(ChainComplex { n_vars, modules, differentials });
        }
        if differentials.len() + 1 != modules.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source != modules[k + 1] || d.target != modules[k] {
                return Err(Error::ShapeMismatch(format!("d_{} has wrong source/target", k + 1)));
            }
        }
        Ok(ChainComplex { n_vars, modules, differentials })
    }

    pub fn zero(n_vars: usize) -> Self {
        ChainComplex { n_vars, modules: Vec::new(), differentials: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Highest degree with a stored module, `None` for the zero complex.
    pub fn top_degree(&self) -> Option<usize> {
        self.modules.len().checked_sub(1)
    }

    /// Number of stored degrees.
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// `C_n`; empty outside the stored range.
    pub fn module(&self, n: usize) -> &Arc<FreeModule> {
        self.modules.get(n).unwrap_or_else(|| empty_module())
    }

    pub fn modules(&self) -> &[Arc<FreeModule>] {
        &self.modules
    }

    /// `d_n : C_n → C_{n-1}` for `1 ≤ n ≤ top`.
    pub fn differential(&self, n: usize) -> Option<&SparseMap<C>> {
        n.checked_sub(1).and_then(|k| self.differentials.get(k))
    }

    pub fn differentials(&self) -> &[SparseMap<C>] {
        &self.differentials
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// Checks `d_{n-1} ∘ d_n = 0` symbolically for every `n`.
    pub fn verify(&self) -> ComplexCheck {
        for n in 2..self.modules.len() {
            let dd = self.differentials[n - 2]
                .compose(&self.differentials[n - 1])
                .expect("consecutive differentials compose");
            if let Some(j) = dd.first_nonzero_column() {
                let witness = self.modules[n].generator(j).to_string();
                let image = format_column(dd.column(j), dd.target());
                return ComplexCheck {
                    ok: false,
                    failure: Some(SquareFailure { degree: n, witness, image }),
                };
            }
        }
        ComplexCheck { ok: true, failure: None }
    }

    /// `C[-k]`: `C[-k]_n = C_{n-k}`, differential negated when `k` is odd.
    pub fn suspend(&self, k: usize) -> ChainComplex<C> {
        if self.modules.is_empty() {
            return self.clone();
        }
        let mut modules: Vec<Arc<FreeModule>> = vec![empty_module().clone(); k];
        modules.extend(self.modules.iter().cloned());
        let mut differentials = Vec::with_capacity(modules.len() - 1);
        for n in 1..modules.len() {
            if n > k {
                let d = &self.differentials[n - k - 1];
                differentials.push(if k % 2 == 1 { d.neg() } else { d.clone() });
            } else {
                differentials.push(SparseMap::zero(modules[n].clone(), modules[n - 1].clone(), self.n_vars));
            }
        }
        ChainComplex { n_vars: self.n_vars, modules, differentials }
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> ChainComplex<D> {
        ChainComplex {
            n_vars: self.n_vars,
            modules: self.modules.clone(),
            differentials: self.differentials.iter().map(|d| d.map_coeffs(f)).collect(),
        }
    }

    pub fn to_field(&self) -> ChainComplex<C::Field> {
        self.map_coeffs(C::to_field)
    }

    /// `R/I ⊗ C`: every entry must be `c + Σ a_i u_i` with constants `c, a_i`;
    /// it is replaced by `c`. The result has constant entries and the same
    /// labels (free `R/I`-modules on the same basis).
    pub fn tensor_mod_i(&self, seq: &RegularSequence<C>) -> Result<ChainComplex<C>> {
        let reducer = ModIReducer::new(seq);
        let mut differentials = Vec::with_capacity(self.differentials.len());
        for d in &self.differentials {
            let mut out = SparseMap::zero(d.source.clone(), d.target.clone(), self.n_vars);
            for (i, j, p) in d.entries() {
                let c = reducer.reduce(p).ok_or_else(|| Error::NotReducibleModI {
                    entry: p.to_string(),
                    target: d.target.generator(i).to_string(),
                    column: d.source.generator(j).to_string(),
                })?;
                out.set_entry(i, j, Polynomial::constant(self.n_vars, c));
            }
            differentials.push(out);
        }
        Ok(ChainComplex { n_vars: self.n_vars, modules: self.modules.clone(), differentials })
    }

    /// Constant differential matrices, `mats[n-1]` for `d_n`.
    pub fn constant_matrices(&self) -> Result<Vec<DenseMatrix<C>>> {
        self.differentials
            .iter()
            .map(|d| {
                d.constant_matrix().ok_or_else(|| {
                    let (_, _, p) = d.entries().find(|(_, _, p)| !p.is_constant()).unwrap();
                    Error::NonConstantEntry(p.to_string())
                })
            })
            .collect()
    }

    /// `dim_k (C_n)_d`.
    pub fn slice_dimension(&self, n: usize, d: u32) -> usize {
        self.module(n).slice_dimension(self.n_vars, d)
    }

    /// Matrix of `d_n : (C_n)_d → (C_{n-1})_d` in the monomial-expanded basis.
    pub fn graded_slice(&self, n: usize, d: u32) -> GradedSlice<C> {
        let source = slice_basis(self.module(n), self.n_vars, d);
        let target = if n == 0 { Vec::new() } else { slice_basis(self.module(n - 1), self.n_vars, d) };
        let row_index: HashMap<(usize, &Monomial), usize> =
            target.iter().enumerate().map(|(r, (g, m))| ((*g, m), r)).collect();
        let mut triplets = Vec::new();
        if let Some(diff) = self.differential(n) {
            for (col, (g, m)) in source.iter().enumerate() {
                for (h, p) in diff.column(*g) {
                    for (mu, c) in p.terms() {
                        let prod = mu * m;
                        let row = row_index[&(*h, &prod)];
                        triplets.push((row, col, c.clone()));
                    }
                }
            }
        }
        let matrix = SparseMatrix::from_triplets(target.len(), source.len(), triplets);
        let label = |basis: &[(usize, Monomial)], module: &FreeModule| -> Vec<SliceBasis> {
            basis
                .iter()
                .map(|(g, m)| SliceBasis { generator: module.generator(*g).clone(), monomial: m.clone() })
                .collect()
        };
        GradedSlice {
            homological_degree: n,
            internal_degree: d,
            rows: label(&target, if n == 0 { empty_module() } else { self.module(n - 1) }),
            cols: label(&source, self.module(n)),
            matrix,
        }
    }

    /// Rank of every `d_n` slice in degree `d` over the fraction field.
    pub fn slice_rank(&self, n: usize, d: u32) -> usize {
        if n == 0 || n >= self.modules.len() {
            return 0;
        }
        self.graded_slice(n, d).matrix.rank()
    }

    /// Slice rank after mapping coefficients into another field.
    pub fn slice_rank_in<F: crate::scalar::Field>(&self, n: usize, d: u32, f: impl Fn(&C) -> F + Copy) -> usize {
        if n == 0 || n >= self.modules.len() {
            return 0;
        }
        linalg::sparse_rank(&self.graded_slice(n, d).matrix.map(f))
    }

    /// `dim H_n` of the degree-`d` slice for `n ≤ top` and `d ≤ max_d`,
    /// computed in parallel; `grid[n][d]`.
    pub fn homology_grid_in<F: crate::scalar::Field>(&self, max_d: u32, f: impl Fn(&C) -> F + Copy + Sync) -> Vec<Vec<usize>> {
        let top = self.modules.len();
        let ranks: Vec<Vec<usize>> = (0..=top)
            .into_par_iter()
            .map(|n| (0..=max_d).map(|d| self.slice_rank_in(n, d, f)).collect())
            .collect();
        (0..top)
            .map(|n| {
                (0..=max_d)
                    .map(|d| {
                        let dim = self.slice_dimension(n, d);
                        dim - ranks[n][d as usize] - ranks[n + 1][d as usize]
                    })
                    .collect()
            })
            .collect()
    }

    /// Structured text: generators per degree with internal degrees, then
    /// every differential entry as `target ← source : polynomial`.
    pub fn serialize_text(&self) -> String {
        let mut out = String::new();
        for (n, m) in self.modules.iter().enumerate() {
            let _ = writeln!(out, "degree {n}: rank {}", m.rank());
            for (g, d) in m.generators().iter().zip(m.internal_degrees()) {
                let _ = writeln!(out, "  {g} [{d}]");
            }
        }
        for (k, d) in self.differentials.iter().enumerate() {
            let _ = writeln!(out, "d_{}:", k + 1);
            for (i, j, p) in d.entries() {
                let _ = writeln!(out, "  {} ← {} : {p}", d.target.generator(i), d.source.generator(j));
            }
        }
        out
    }
}

impl<C: Scalar> fmt::Display for ChainComplex<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize_text())
    }
}

fn slice_basis(module: &FreeModule, n_vars: usize, d: u32) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    for (g, &deg) in module.internal_degrees().iter().enumerate() {
        if deg <= d {
            out.extend(monomials_of_degree(n_vars, d - deg).into_iter().map(|m| (g, m)));
        }
    }
    out
}

/// Prints a column as a label combination.
pub fn format_column<C: Scalar>(col: &Column<C>, module: &FreeModule) -> String {
    if col.is_empty() {
        return "0".to_string();
    }
    col.iter()
        .map(|(i, p)| format!("({p})*{}", module.generator(*i)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Reduces `c + Σ a_i u_i` (constants `c`, `a_i`) to `c`.
struct ModIReducer<'a, C: Scalar> {
    seq: &'a RegularSequence<C>,
}

impl<'a, C: Scalar> ModIReducer<'a, C> {
    fn new(seq: &'a RegularSequence<C>) -> Self {
        ModIReducer { seq }
    }

    fn reduce(&self, p: &Polynomial<C>) -> Option<C> {
        let c = p.constant_term();
        let rest = p.retain_terms(|m| !m.is_one());
        if rest.is_zero() {
            return Some(c);
        }
        // fast path: rest = ±u_i
        for u in self.seq.generators() {
            if &rest == u || rest == -u {
                return Some(c);
            }
        }
        // general case: rest must lie in the k-span of the u_i
        let mut monos: Vec<Monomial> = rest.terms().map(|(m, _)| m.clone()).collect();
        for u in self.seq.generators() {
            monos.extend(u.terms().map(|(m, _)| m.clone()));
        }
        monos.sort();
        monos.dedup();
        let vector = |q: &Polynomial<C>| -> Vec<C::Field> {
            monos.iter().map(|m| q.coefficient(m).to_field()).collect()
        };
        let mut span = Span::new(monos.len());
        for u in self.seq.generators() {
            span.insert(&vector(u));
        }
        span.contains(&vector(&rest)).then_some(c)
    }
}

/// A basis vector of a slice: generator times a complementary monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceBasis {
    pub generator: QGenerator,
    pub monomial: Monomial,
}

impl fmt::Display for SliceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomial.is_one() {
            write!(f, "{}", self.generator)
        } else {
            write!(f, "{}*{}", self.monomial, self.generator)
        }
    }
}

/// The finite matrix of one differential restricted to one internal degree.
#[derive(Clone, Debug)]
pub struct GradedSlice<C> {
    pub homological_degree: usize,
    pub internal_degree: u32,
    pub rows: Vec<SliceBasis>,
    pub cols: Vec<SliceBasis>,
    pub matrix: SparseMatrix<C>,
}

/// A degree-0 chain map `f : C → D`, one component per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap<C> {
    pub source: ChainComplex<C>,
    pub target: ChainComplex<C>,
    /// `components[n] : C_n → D_n`.
    pub components: Vec<SparseMap<C>>,
}

impl<C: Scalar> ChainMap<C> {
    /// Shapes are checked; the chain property is checked by [`Self::verify`].
    pub fn new(source: ChainComplex<C>, target: ChainComplex<C>, components: Vec<SparseMap<C>>) -> Result<Self> {
        if components.len() != source.len() {
            return Err(Error::ShapeMismatch(format!(
                "chain map needs {} components, got {}",
                source.len(),
                components.len()
            )));
        }
        for (n, f) in components.iter().enumerate() {
            if f.source() != source.module(n) || f.target() != target.module(n) {
                return Err(Error::ShapeMismatch(format!("component {n} has wrong source/target")));
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn identity(c: &ChainComplex<C>) -> Self {
        let components = c.modules().iter().map(|m| SparseMap::identity(m.clone(), c.n_vars())).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    /// Checks `d^D_n ∘ f_n = f_{n-1} ∘ d^C_n` for every `n`.
    pub fn verify(&self) -> Result<()> {
        let n_vars = self.source.n_vars();
        for n in 1..self.source.len() {
            let dc = self.source.differential(n).unwrap();
            let left = match self.target.differential(n) {
                Some(dd) if n < self.target.len() => dd.compose(&self.components[n])?,
                _ => SparseMap::zero(self.source.module(n).clone(), self.target.module(n - 1).clone(), n_vars),
            };
            let right = self.components[n - 1].compose(dc)?;
            let diff = left.add(&right.neg())?;
            if let Some(j) = diff.first_nonzero_column() {
                return Err(Error::ChainMapFailure {
                    degree: n,
                    witness: self.source.module(n).generator(j).to_string(),
                });
            }
        }
        Ok(())
    }

    /// Both complexes and the components reduced modulo `I`.
    pub fn tensor_mod_i(&self, seq: &RegularSequence<C>) -> Result<ChainMap<C>> {
        let reducer = ModIReducer::new(seq);
        let components = self
            .components
            .iter()
            .map(|f| {
                let mut out = SparseMap::zero(f.source().clone(), f.target().clone(), f.n_vars());
                for (i, j, p) in f.entries() {
                    let c = reducer.reduce(p).ok_or_else(|| Error::NotReducibleModI {
                        entry: p.to_string(),
                        target: f.target().generator(i).to_string(),
                        column: f.source().generator(j).to_string(),
                    })?;
                    out.set_entry(i, j, Polynomial::constant(f.n_vars(), c));
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainMap {
            source: self.source.tensor_mod_i(seq)?,
            target: self.target.tensor_mod_i(seq)?,
            components,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = Polynomial<BigInt>;

    fn module(labels: &[&[usize]]) -> Arc<FreeModule> {
        Arc::new(
            FreeModule::from_labels(labels.iter().map(|s| QGenerator::exterior(s.to_vec())), &[1, 1, 1])
                .unwrap(),
        )
    }

    #[test]
    fn compose_one_by_one() {
        let a = module(&[&[]]);
        let b = module(&[&[1]]);
        let c = module(&[&[1, 2]]);
        let mut g = SparseMap::<BigInt>::zero(c.clone(), b.clone(), 2);
        g.set_entry(0, 0, P::var(2, 0));
        let mut f = SparseMap::<BigInt>::zero(b.clone(), a.clone(), 2);
        f.set_entry(0, 0, P::var(2, 1));
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.entry(0, 0).to_string(), "x1*x2");
        let id = SparseMap::identity(b.clone(), 2);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert!(matches!(g.compose(&g), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let g = QGenerator::exterior(vec![1]);
        assert!(matches!(FreeModule::new(vec![(g.clone(), 1), (g, 1)]), Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn suspension_shifts_and_negates() {
        let a = module(&[&[]]);
        let b = module(&[&[1]]);
        let mut d = SparseMap::<BigInt>::zero(b.clone(), a.clone(), 1);
        d.set_entry(0, 0, P::var(1, 0));
        let c = ChainComplex::new(1, vec![a, b], vec![d]).unwrap();
        assert_eq!(c.suspend(0), c);
        let s1 = c.suspend(1);
        assert_eq!(s1.ranks(), vec![0, 1, 1]);
        assert_eq!(s1.differential(2).unwrap().entry(0, 0).to_string(), "-x1");
        let s2 = s1.suspend(1);
        assert_eq!(s2, c.suspend(2));
        assert_eq!(s2.differential(3).unwrap().entry(0, 0).to_string(), "x1");
        for d in 0..4 {
            assert_eq!(s2.slice_dimension(3, d), c.slice_dimension(1, d));
        }
    }

    #[test]
    fn zero_complex_tensors_to_zero() {
        let seq = RegularSequence::<BigInt>::variables(2).unwrap();
        let z = ChainComplex::<BigInt>::zero(2);
        assert_eq!(z.tensor_mod_i(&seq).unwrap(), z);
    }

    #[test]
    fn tensor_rejects_non_system_entries() {
        let seq = RegularSequence::<BigInt>::variables(2).unwrap();
        let a = module(&[&[]]);
        let b = module(&[&[1]]);
        let mut d = SparseMap::<BigInt>::zero(b.clone(), a.clone(), 2);
        d.set_entry(0, 0, &P::var(2, 0) * &P::var(2, 1));
        let c = ChainComplex::new(2, vec![a, b], vec![d]).unwrap();
        assert!(matches!(c.tensor_mod_i(&seq), Err(Error::NotReducibleModI { .. })));
    }

    #[test]
    fn combination_of_generators_reduces() {
        let seq = RegularSequence::<BigInt>::parse_explicit(2, &["x1 + x2", "x1 - x2"]).unwrap();
        let r = ModIReducer::new(&seq);
        let p: P = crate::parse_poly("3*x1 + x2 + 5", 2).unwrap();
        assert_eq!(r.reduce(&p), Some(BigInt::from(5)));
    }

    #[test]
    fn empty_slice_below_generator_degree() {
        let a = module(&[&[]]);
        let b = module(&[&[1, 2]]);
        let mut d = SparseMap::<BigInt>::zero(b.clone(), a.clone(), 2);
        d.set_entry(0, 0, &P::var(2, 0) * &P::var(2, 1));
        let c = ChainComplex::new(2, vec![a, b], vec![d]).unwrap();
        let s = c.graded_slice(1, 1);
        assert_eq!(s.matrix.ncols(), 0);
        assert_eq!(s.matrix.nrows(), 2);
    }
}
