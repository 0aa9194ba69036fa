//! Splicing resolutions along a short exact sequence `0 → L → M → N → 0`,
//! and the class of the extension as a cocycle `P_1 → L`.
//!
//! If `P → N` and `Q → L` are resolutions and `del_n : P_n → Q_{n-1}`
//! satisfies `d_Q del_n + del_{n-1} d_P = 0`, then `(P ⊕ Q)_n` with
//! `d(x, y) = (d_P x, del_n x + d_Q y)` resolves `M`. Splicing `Q^(j)` onto
//! `K(R;I^j)` along `0 → I^j/I^{j+1} → R/I^{j+1} → R/I^j → 0` gives
//! `K(R;I^{j+1})`.
//!
//! An extension is also described by `Ext¹_R(N, L)`, equivalently by maps
//! `N → L[1]` in the derived category; here only the first stage of the
//! lifting (`ε_0`, `ε_1`) is computed, which already determines the class.

use std::sync::Arc;

use serde::Serialize;

use crate::chain::{ChainComplex, FreeModule, SparseMap};
use crate::error::{Error, Result};
use crate::koszul::{del_of, q_complex, DelMap};
use crate::linalg::{solve, DenseMatrix, Span};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};
use crate::resolution::build_k_ris;
use crate::scalar::{Field, Scalar};
use crate::sequence::RegularSequence;

/// `del_n : P_n → Q_{n-1}` for `n ≥ 1`; `maps[n-1]` is `del_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectingMap<C> {
    pub maps: Vec<SparseMap<C>>,
}

impl<C: Scalar> ConnectingMap<C> {
    pub fn zero(p: &ChainComplex<C>, q: &ChainComplex<C>) -> Self {
        let maps = (1..p.len())
            .map(|n| SparseMap::zero(p.module(n).clone(), q.module(n - 1).clone(), p.n_vars()))
            .collect();
        ConnectingMap { maps }
    }

    pub fn component(&self, n: usize) -> Option<&SparseMap<C>> {
        n.checked_sub(1).and_then(|k| self.maps.get(k))
    }

    /// Same map with `del_n` multiplied by `c`.
    pub fn scale_degree(&self, n: usize, c: &C) -> Self {
        let mut out = self.clone();
        if let Some(m) = n.checked_sub(1).and_then(|k| out.maps.get_mut(k)) {
            *m = m.scale(c);
        }
        out
    }

    /// A `del^(s+1)` family viewed as a connecting map `Q^(s) → Q^(s+1)`.
    pub fn from_del(del: &DelMap<C>) -> Self {
        ConnectingMap { maps: del.maps.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectingCheck {
    pub ok: bool,
    pub degree: Option<usize>,
    pub witness: Option<String>,
}

fn check_shapes<C: Scalar>(p: &ChainComplex<C>, q: &ChainComplex<C>, del: &ConnectingMap<C>) -> Result<()> {
    for (k, m) in del.maps.iter().enumerate() {
        let n = k + 1;
        if m.source() != p.module(n) || m.target() != q.module(n - 1) {
            return Err(Error::ShapeMismatch(format!("del_{n} does not map P_{n} to Q_{}", n - 1)));
        }
    }
    if del.maps.len() + 1 < p.len() {
        return Err(Error::ShapeMismatch(format!("{} connecting components for {} degrees", del.maps.len(), p.len())));
    }
    Ok(())
}

/// Checks `d_Q del_n + del_{n-1} d_P = 0` on `P_n` for every `n ≥ 2` (for
/// `n = 1` both terms land in `Q_{-1} = 0`).
pub fn verify_connecting<C: Scalar>(
    p: &ChainComplex<C>,
    q: &ChainComplex<C>,
    del: &ConnectingMap<C>,
) -> Result<ConnectingCheck> {
    check_shapes(p, q, del)?;
    for n in 2..p.len() {
        let del_n = del.component(n).unwrap();
        let del_prev = del.component(n - 1).unwrap();
        let left = match q.differential(n - 1) {
            Some(dq) => dq.compose(del_n)?,
            None => SparseMap::zero(p.module(n).clone(), q.module(n - 2).clone(), p.n_vars()),
        };
        let right = del_prev.compose(p.differential(n).unwrap())?;
        let sum = left.add(&right)?;
        if let Some(j) = sum.first_nonzero_column() {
            return Ok(ConnectingCheck {
                ok: false,
                degree: Some(n),
                witness: Some(p.module(n).generator(j).to_string()),
            });
        }
    }
    Ok(ConnectingCheck { ok: true, degree: None, witness: None })
}

/// `(P ⊕ Q)_n` with `d(x, y) = (d_P x, del_n x + d_Q y)`.
pub fn splice<C: Scalar>(p: &ChainComplex<C>, q: &ChainComplex<C>, del: &ConnectingMap<C>) -> Result<ChainComplex<C>> {
    let check = verify_connecting(p, q, del)?;
    if !check.ok {
        return Err(Error::ConnectingMapViolation {
            degree: check.degree.unwrap(),
            witness: check.witness.unwrap(),
        });
    }
    let n_vars = p.n_vars();
    let top = p.len().max(q.len());
    let modules: Vec<Arc<FreeModule>> = (0..top)
        .map(|n| Ok(Arc::new(p.module(n).direct_sum(q.module(n))?)))
        .collect::<Result<_>>()?;
    let mut differentials = Vec::new();
    for n in 1..top {
        let mut d = SparseMap::zero(modules[n].clone(), modules[n - 1].clone(), n_vars);
        let parts = [p.differential(n), q.differential(n), del.component(n)];
        for part in parts.into_iter().flatten() {
            for (i, j, poly) in part.entries() {
                let ti = modules[n - 1].position(part.target().generator(i)).expect("target label");
                let tj = modules[n].position(part.source().generator(j)).expect("source label");
                d.add_to_entry(ti, tj, poly);
            }
        }
        differentials.push(d);
    }
    let out = ChainComplex::new(n_vars, modules, differentials)?;
    let sq = out.verify();
    if let Some(f) = sq.failure {
        return Err(Error::ConnectingMapViolation { degree: f.degree, witness: f.witness });
    }
    Ok(out)
}

/// `del^(j)` restricted to the top summand of `K(R;I^j)`, as a connecting
/// map `K(R;I^j) → Q^(j)`.
pub fn top_summand_connecting<C: Scalar>(
    seq: &RegularSequence<C>,
    j: usize,
    p: &ChainComplex<C>,
    q: &ChainComplex<C>,
) -> Result<ConnectingMap<C>> {
    let maps = (1..p.len())
        .map(|n| {
            SparseMap::from_rule(p.module(n).clone(), q.module(n - 1).clone(), seq.n_vars(), |g| {
                if g.summand() + 1 == j {
                    del_of(seq.n_vars(), g)
                } else {
                    Vec::new()
                }
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConnectingMap { maps })
}

/// Starts from the Koszul complex and splices `Q^(j)` on for `j = 1..s-1`.
pub fn iterated_splice<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<ChainComplex<C>> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    let mut current = q_complex(seq, 0);
    for j in 1..s {
        let q = q_complex(seq, j);
        let del = top_summand_connecting(seq, j, &current, &q)?;
        current = splice(&current, &q, &del)?;
    }
    Ok(current)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpliceComparison {
    pub s: usize,
    pub identical: bool,
    pub ranks: Vec<usize>,
    /// First differing differential, if any.
    pub first_difference: Option<usize>,
}

pub fn compare_splice<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<SpliceComparison> {
    let spliced = iterated_splice(seq, s)?;
    let direct = build_k_ris(seq, s)?.complex;
    let first_difference = if spliced.modules() != direct.modules() {
        Some(0)
    } else {
        spliced
            .differentials()
            .iter()
            .zip(direct.differentials())
            .position(|(a, b)| a != b)
            .map(|k| k + 1)
    };
    Ok(SpliceComparison {
        s,
        identical: spliced == direct,
        ranks: spliced.ranks(),
        first_difference,
    })
}

/// A graded module `F / ⟨relations⟩` with `F` free on generators of the
/// given degrees. Elements are vectors of polynomials, one per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule<F> {
    pub n_vars: usize,
    pub degrees: Vec<u32>,
    pub relations: Vec<Vec<Polynomial<F>>>,
}

impl<F: Field> PresentedModule<F> {
    /// Polynomial vectors each of length `degrees.len()`, homogeneous.
    pub fn new(n_vars: usize, degrees: Vec<u32>, relations: Vec<Vec<Polynomial<F>>>) -> Result<Self> {
        for r in &relations {
            if r.len() != degrees.len() {
                return Err(Error::ShapeMismatch(format!(
                    "relation has {} entries, module has {} generators",
                    r.len(),
                    degrees.len()
                )));
            }
        }
        let m = PresentedModule { n_vars, degrees, relations };
        for r in &m.relations {
            m.vector_degree(r)?;
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn zero(&self) -> Vec<Polynomial<F>> {
        vec![Polynomial::zero(self.n_vars); self.rank()]
    }

    pub fn generator(&self, i: usize) -> Vec<Polynomial<F>> {
        let mut v = self.zero();
        v[i] = Polynomial::one(self.n_vars);
        v
    }

    /// Internal degree of a nonzero homogeneous vector.
    fn vector_degree(&self, v: &[Polynomial<F>]) -> Result<Option<u32>> {
        let mut deg = None;
        for (p, &g) in v.iter().zip(&self.degrees) {
            for (m, _) in p.terms() {
                let d = m.degree() + g;
                if deg.is_some_and(|e| e != d) {
                    return Err(Error::InvalidParameter("inhomogeneous module element".into()));
                }
                deg = Some(d);
            }
        }
        Ok(deg)
    }

    /// Basis of the free part in degree `d`: `(generator, monomial)`.
    pub fn slice_basis(&self, d: u32) -> Vec<(usize, Monomial)> {
        self.degrees
            .iter()
            .enumerate()
            .filter(|(_, &g)| g <= d)
            .flat_map(|(i, &g)| monomials_of_degree(self.n_vars, d - g).into_iter().map(move |m| (i, m)))
            .collect()
    }

    pub fn coordinates(&self, d: u32, v: &[Polynomial<F>]) -> Vec<F> {
        self.slice_basis(d).iter().map(|(i, m)| v[*i].coefficient(m)).collect()
    }

    pub fn from_coordinates(&self, d: u32, c: &[F]) -> Vec<Polynomial<F>> {
        let mut v = self.zero();
        for ((i, m), x) in self.slice_basis(d).into_iter().zip(c) {
            v[i].add_term(m, x.clone());
        }
        v
    }

    /// Echelon span of the degree-`d` part of the relation submodule.
    pub fn relation_span(&self, d: u32) -> Span<F> {
        let mut span = Span::new(self.slice_basis(d).len());
        for r in &self.relations {
            let Ok(Some(e)) = self.vector_degree(r) else { continue };
            if e > d {
                continue;
            }
            for mu in monomials_of_degree(self.n_vars, d - e) {
                let shifted: Vec<Polynomial<F>> = r.iter().map(|p| p.mul_monomial(&mu)).collect();
                span.insert(&self.coordinates(d, &shifted));
            }
        }
        span
    }

    /// `dim_k M_d`.
    pub fn dimension(&self, d: u32) -> usize {
        self.slice_basis(d).len() - self.relation_span(d).dimension()
    }

    /// Canonical representative of a degree-`d` element.
    pub fn normal_form(&self, d: u32, v: &[Polynomial<F>]) -> Vec<Polynomial<F>> {
        let c = self.relation_span(d).reduce(&self.coordinates(d, v));
        self.from_coordinates(d, &c)
    }

    pub fn is_zero_element(&self, d: u32, v: &[Polynomial<F>]) -> bool {
        self.relation_span(d).contains(&self.coordinates(d, v))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let pad = |r: &Vec<Polynomial<F>>, left: bool| -> Vec<Polynomial<F>> {
            let (a, b) = if left { (r.clone(), other.zero()) } else { (self.zero(), r.clone()) };
            a.into_iter().chain(b).collect()
        };
        PresentedModule {
            n_vars: self.n_vars,
            degrees: self.degrees.iter().chain(&other.degrees).copied().collect(),
            relations: self
                .relations
                .iter()
                .map(|r| pad(r, true))
                .chain(other.relations.iter().map(|r| pad(r, false)))
                .collect(),
        }
    }

    /// `[p]` for a cyclic module, `[(p1, p2, …)]` otherwise.
    pub fn render(&self, d: u32, v: &[Polynomial<F>]) -> String {
        let nf = self.normal_form(d, v);
        let parts: Vec<String> = nf.iter().map(ToString::to_string).collect();
        if parts.len() == 1 {
            format!("[{}]", parts[0])
        } else {
            format!("[({})]", parts.join(", "))
        }
    }
}

/// A homomorphism of presented modules, by images of generators (as
/// vectors over the target's generators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom<F> {
    pub images: Vec<Vec<Polynomial<F>>>,
}

impl<F: Field> ModuleHom<F> {
    pub fn apply(&self, target: &PresentedModule<F>, v: &[Polynomial<F>]) -> Vec<Polynomial<F>> {
        let mut out = target.zero();
        for (c, img) in v.iter().zip(&self.images) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(img) {
                o.add_assign_ref(&(c * p));
            }
        }
        out
    }

    /// Matrix on free parts in degree `d`.
    pub fn slice_matrix(&self, source: &PresentedModule<F>, target: &PresentedModule<F>, d: u32) -> DenseMatrix<F> {
        let cols: Vec<Vec<F>> = source
            .slice_basis(d)
            .into_iter()
            .map(|(i, m)| {
                let mut v = source.zero();
                v[i] = Polynomial::monomial(m);
                target.coordinates(d, &self.apply(target, &v))
            })
            .collect();
        DenseMatrix::from_columns(target.slice_basis(d).len(), &cols)
    }
}

/// `0 → L --ι--> M --π--> N → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSES<F> {
    pub l: PresentedModule<F>,
    pub m: PresentedModule<F>,
    pub n: PresentedModule<F>,
    pub iota: ModuleHom<F>,
    pub pi: ModuleHom<F>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesCheck {
    pub max_internal: u32,
    /// `(dim L_d, dim M_d, dim N_d)`.
    pub dimensions: Vec<(usize, usize, usize)>,
    pub exact: bool,
    pub first_failure: Option<u32>,
}

fn rank_mod<F: Field>(cols: &DenseMatrix<F>, rel: &Span<F>) -> usize {
    let mut span = rel.clone();
    let base = span.dimension();
    for j in 0..cols.ncols() {
        span.insert(&cols.column(j));
    }
    span.dimension() - base
}

impl<F: Field> GradedSES<F> {
    /// `0 → I^{s-1}/I^s → R/I^s → R/I^{s-1} → 0` for `s ≥ 2`. `I^{s-1}/I^s`
    /// is presented on generators `t_m` (`|m| = s-1`) with relations
    /// `u_i t_m`, and `ι(t_m) = u_m`.
    pub fn power_filtration(seq: &RegularSequence<F>, s: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidParameter("power filtration needs s ≥ 2".into()));
        }
        let nv = seq.n_vars();
        let tags = crate::koszul::monomial_basis(seq.len(), s - 1);
        let cyclic = |k: usize| -> Result<PresentedModule<F>> {
            let rels = crate::koszul::monomial_basis(seq.len(), k)
                .iter()
                .map(|t| vec![seq.product(t.indices())])
                .collect();
            PresentedModule::new(nv, vec![0], rels)
        };
        let l_degrees: Vec<u32> = tags.iter().map(|t| t.indices().iter().map(|&i| seq.degrees()[i - 1]).sum()).collect();
        let mut l_rels = Vec::new();
        for (a, _) in tags.iter().enumerate() {
            for i in 1..=seq.len() {
                let mut r = vec![Polynomial::zero(nv); tags.len()];
                r[a] = seq.generator(i).clone();
                l_rels.push(r);
            }
        }
        let l = PresentedModule::new(nv, l_degrees, l_rels)?;
        let iota = ModuleHom { images: tags.iter().map(|t| vec![seq.product(t.indices())]).collect() };
        let pi = ModuleHom { images: vec![vec![Polynomial::one(nv)]] };
        Ok(GradedSES { l, m: cyclic(s)?, n: cyclic(s - 1)?, iota, pi })
    }

    /// `0 → L → L ⊕ N → N → 0`.
    pub fn split(l: PresentedModule<F>, n: PresentedModule<F>) -> Self {
        let m = l.direct_sum(&n);
        let nv = l.n_vars;
        let (a, b) = (l.rank(), n.rank());
        let unit = |k: usize, len: usize| -> Vec<Polynomial<F>> {
            (0..len).map(|i| if i == k { Polynomial::one(nv) } else { Polynomial::zero(nv) }).collect()
        };
        let iota = ModuleHom { images: (0..a).map(|i| unit(i, a + b)).collect() };
        let pi = ModuleHom {
            images: (0..a).map(|_| vec![Polynomial::zero(nv); b]).chain((0..b).map(|j| unit(j, b))).collect(),
        };
        GradedSES { l, m, n, iota, pi }
    }

    /// Injectivity of `ι`, surjectivity of `π`, `π ι = 0` and
    /// `dim M_d = dim L_d + dim N_d`, for `d ≤ max_d`.
    pub fn verify(&self, max_d: u32) -> SesCheck {
        let mut dimensions = Vec::new();
        let mut first_failure = None;
        for d in 0..=max_d {
            let (rl, rm, rn) = (self.l.relation_span(d), self.m.relation_span(d), self.n.relation_span(d));
            let (dl, dm, dn) = (
                self.l.slice_basis(d).len() - rl.dimension(),
                self.m.slice_basis(d).len() - rm.dimension(),
                self.n.slice_basis(d).len() - rn.dimension(),
            );
            dimensions.push((dl, dm, dn));
            let iota = self.iota.slice_matrix(&self.l, &self.m, d);
            let pi = self.pi.slice_matrix(&self.m, &self.n, d);
            // ι is well defined and injective: ι(F_L) + rel_M has dimension
            // dim L_d over rel_M, and ι(rel_L) ⊂ rel_M.
            let iota_rel_ok = self.l.relations.iter().all(|r| {
                match self.l.vector_degree(r) {
                    Ok(Some(e)) if e <= d => monomials_of_degree(self.l.n_vars, d - e).iter().all(|mu| {
                        let shifted: Vec<Polynomial<F>> = r.iter().map(|p| p.mul_monomial(mu)).collect();
                        self.m.is_zero_element(d, &self.iota.apply(&self.m, &shifted))
                    }),
                    _ => true,
                }
            });
            let composite_zero = (0..iota.ncols()).all(|j| rn.contains(&pi.mul_vec(&iota.column(j))));
            let ok = iota_rel_ok
                && rank_mod(&iota, &rm) == dl
                && rank_mod(&pi, &rn) == dn
                && composite_zero
                && dm == dl + dn;
            if !ok && first_failure.is_none() {
                first_failure = Some(d);
            }
        }
        SesCheck { max_internal: max_d, dimensions, exact: first_failure.is_none(), first_failure }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaRepresentative {
    /// `g -> ε_0(g)` for generators of `P_0`, classes in `M`.
    pub epsilon0: Vec<String>,
    /// `h -> ι ε_1(h)` for generators of `P_1`, classes in `M`.
    pub epsilon1: Vec<String>,
    pub epsilon1_zero: bool,
    /// `ε_1 ∘ d_P` vanishes on `P_2`.
    pub cocycle: bool,
    /// `ε_1 = φ ∘ d_P` for some `φ : P_0 → L`.
    pub trivial: bool,
    pub phi: Option<Vec<String>>,
}

/// Image of a generator's boundary under a map given on the generators of
/// the target degree: `Σ_i (d h)_i · f(g_i)`.
fn push_through<F: Field>(
    target: &PresentedModule<F>,
    column: &crate::chain::Column<F>,
    values: &[Vec<Polynomial<F>>],
) -> Vec<Polynomial<F>> {
    let mut out = target.zero();
    for (i, p) in column {
        for (o, v) in out.iter_mut().zip(&values[*i]) {
            o.add_assign_ref(&(p * v));
        }
    }
    out
}

/// `x` in the free part of `source` with `f(x) ≡ y` modulo the relations of
/// `target`, in degree `d`.
fn lift<F: Field>(
    f: &ModuleHom<F>,
    source: &PresentedModule<F>,
    target: &PresentedModule<F>,
    d: u32,
    y: &[Polynomial<F>],
) -> Option<Vec<Polynomial<F>>> {
    let m = f.slice_matrix(source, target, d);
    let rel = relation_columns(target, d);
    let cols: Vec<Vec<F>> = (0..m.ncols()).map(|j| m.column(j)).chain(rel).collect();
    let a = DenseMatrix::from_columns(target.slice_basis(d).len(), &cols);
    let x = solve(&a, &target.coordinates(d, y))?;
    Some(source.from_coordinates(d, &x[..m.ncols()]))
}

fn relation_columns<F: Field>(module: &PresentedModule<F>, d: u32) -> Vec<Vec<F>> {
    let mut cols = Vec::new();
    for r in &module.relations {
        let Ok(Some(e)) = module.vector_degree(r) else { continue };
        if e > d {
            continue;
        }
        for mu in monomials_of_degree(module.n_vars, d - e) {
            let shifted: Vec<Polynomial<F>> = r.iter().map(|p| p.mul_monomial(&mu)).collect();
            cols.push(module.coordinates(d, &shifted));
        }
    }
    cols
}

/// Lifts `aug : P_0 → N` to `ε_0 : P_0 → M`, then solves `ι ε_1 = ε_0 d_P`
/// for `ε_1 : P_1 → L`, checks the cocycle condition on `P_2` and searches
/// for `φ : P_0 → L` with `ε_1 = φ d_P`. `aug[g]` is the image of the `g`-th
/// generator of `P_0` in `N`.
pub fn theta_representative<F: Field>(
    p: &ChainComplex<F>,
    aug: &[Vec<Polynomial<F>>],
    ses: &GradedSES<F>,
) -> Result<ThetaRepresentative> {
    let p0 = p.module(0);
    let p1 = p.module(1);
    let mut eps0 = Vec::new();
    for (g, target) in aug.iter().enumerate() {
        let d = p0.internal_degree(g);
        if ses.n.vector_degree(target)?.is_some_and(|e| e != d) {
            return Err(Error::LiftingInfeasible { generator: p0.generator(g).to_string(), degree: d });
        }
        let x = lift(&ses.pi, &ses.m, &ses.n, d, target).ok_or_else(|| Error::LiftingInfeasible {
            generator: p0.generator(g).to_string(),
            degree: d,
        })?;
        eps0.push(x);
    }
    let mut eps1 = Vec::new();
    if let Some(d1) = p.differential(1) {
        for h in 0..p1.rank() {
            let d = p1.internal_degree(h);
            let y = push_through(&ses.m, d1.column(h), &eps0);
            let z = lift(&ses.iota, &ses.l, &ses.m, d, &y).ok_or_else(|| Error::LiftingInfeasible {
                generator: p1.generator(h).to_string(),
                degree: d,
            })?;
            eps1.push(z);
        }
    }
    let cocycle = match p.differential(2) {
        Some(d2) => (0..p.module(2).rank()).all(|k| {
            let v = push_through(&ses.l, d2.column(k), &eps1);
            ses.l.is_zero_element(p.module(2).internal_degree(k), &v)
        }),
        None => true,
    };
    let phi = coboundary_witness(p, ses, &eps1);
    let show = |m: &PresentedModule<F>, d: u32, v: &[Polynomial<F>]| m.render(d, v);
    Ok(ThetaRepresentative {
        epsilon0: eps0
            .iter()
            .enumerate()
            .map(|(g, v)| format!("{} -> {}", p0.generator(g), show(&ses.m, p0.internal_degree(g), v)))
            .collect(),
        epsilon1: eps1
            .iter()
            .enumerate()
            .map(|(h, v)| {
                let image = ses.iota.apply(&ses.m, v);
                format!("{} -> {}", p1.generator(h), show(&ses.m, p1.internal_degree(h), &image))
            })
            .collect(),
        epsilon1_zero: eps1.iter().enumerate().all(|(h, v)| ses.l.is_zero_element(p1.internal_degree(h), v)),
        cocycle,
        trivial: phi.is_some(),
        phi: phi.map(|f| {
            f.iter()
                .enumerate()
                .map(|(g, v)| {
                    let image = ses.iota.apply(&ses.m, v);
                    format!("{} -> {}", p0.generator(g), show(&ses.m, p0.internal_degree(g), &image))
                })
                .collect()
        }),
    })
}

/// Solves for `φ(g) ∈ L_{deg g}` with `φ(d_P h) ≡ ε_1(h)` in `L` for every
/// generator `h` of `P_1`.
fn coboundary_witness<F: Field>(
    p: &ChainComplex<F>,
    ses: &GradedSES<F>,
    eps1: &[Vec<Polynomial<F>>],
) -> Option<Vec<Vec<Polynomial<F>>>> {
    let l = &ses.l;
    let p0 = p.module(0);
    let p1 = p.module(1);
    let Some(d1) = p.differential(1) else { return Some(vec![l.zero(); p0.rank()]) };
    // Unknowns: coordinates of φ(g) for each g, then relation multipliers
    // for each equation block.
    let blocks: Vec<Vec<(usize, Monomial)>> = (0..p0.rank()).map(|g| l.slice_basis(p0.internal_degree(g))).collect();
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let n_phi: usize = blocks.iter().map(Vec::len).sum();
    let rows_per: Vec<usize> = (0..p1.rank()).map(|h| l.slice_basis(p1.internal_degree(h)).len()).collect();
    let n_rows: usize = rows_per.iter().sum();
    let rel_cols: Vec<Vec<Vec<F>>> = (0..p1.rank()).map(|h| relation_columns(l, p1.internal_degree(h))).collect();
    let n_rel: usize = rel_cols.iter().map(Vec::len).sum();
    let mut a: DenseMatrix<F> = DenseMatrix::zeros(n_rows, n_phi + n_rel);
    let mut b = vec![F::zero(); n_rows];
    let (mut row0, mut rel0) = (0, n_phi);
    for h in 0..p1.rank() {
        let d = p1.internal_degree(h);
        for (g, poly) in d1.column(h) {
            for (k, (i, m)) in blocks[*g].iter().enumerate() {
                let mut v = l.zero();
                v[*i] = poly.mul_monomial(m);
                for (r, c) in l.coordinates(d, &v).into_iter().enumerate() {
                    if !c.is_zero() {
                        let cur = a.get(row0 + r, offsets[*g] + k).clone();
                        a.set(row0 + r, offsets[*g] + k, cur + c);
                    }
                }
            }
        }
        for (k, col) in rel_cols[h].iter().enumerate() {
            for (r, c) in col.iter().enumerate() {
                a.set(row0 + r, rel0 + k, c.clone());
            }
        }
        for (r, c) in l.coordinates(d, &eps1[h]).into_iter().enumerate() {
            b[row0 + r] = c;
        }
        row0 += rows_per[h];
        rel0 += rel_cols[h].len();
    }
    let x = if n_rows == 0 { vec![F::zero(); n_phi + n_rel] } else { solve(&a, &b)? };
    Some(
        (0..p0.rank())
            .map(|g| l.from_coordinates(p0.internal_degree(g), &x[offsets[g]..offsets[g] + blocks[g].len()]))
            .collect(),
    )
}
