//! The resolution `K(R;I^s) = Q^(0) ⊕ Q^(1) ⊕ … ⊕ Q^(s-1)` of `R/I^s`.
//!
//! Its differential has two kinds of components: the Koszul boundary inside
//! each summand, and `del^(p)` from summand `p-1` into summand `p`:
//!
//! ```text
//! d(x_0, …, x_{s-1})_k = ∂ x_0                   k = 0
//!                      = del x_{k-1} + ∂ x_k      k ≥ 1
//! ```
//!
//! The augmentation sends `a·ũ_m` in degree 0 to `(-1)^|m| a·u_m mod I^s`.
//! With `d(e_i ũ_m) = u_i ũ_m + ũ_{m+i}` the alternating sign is what makes
//! `ε∘d` vanish.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::chain::{ChainComplex, ChainMap, FreeModule, SparseMap};
use crate::error::{Error, Result};
use crate::koszul::{del_of, koszul_boundary, q_labels};
use crate::labels::QGenerator;
use crate::linalg::Span;
use crate::poly::{monomial_count, monomials_of_degree, Monomial, Polynomial};
use crate::scalar::{Field, Scalar, F2, F3, F5};
use crate::sequence::{RegularSequence, SequenceSource};

/// `K(R;I^s)` together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRIsComplex<C> {
    pub seq: RegularSequence<C>,
    pub s: usize,
    pub complex: ChainComplex<C>,
}

/// Labels of `K(R;I^s)_n`, summand by summand.
pub fn k_ris_labels(n_gens: usize, s: usize, n: usize) -> Vec<QGenerator> {
    (0..s).flat_map(|p| q_labels(n_gens, p, n)).collect()
}

/// Builds `K(R;I^s)` for `s ≥ 1`.
pub fn build_k_ris<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<KRIsComplex<C>> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    let n = seq.len();
    let modules: Vec<Arc<FreeModule>> = (0..=n)
        .map(|deg| Ok(Arc::new(FreeModule::from_labels(k_ris_labels(n, s, deg), seq.degrees())?)))
        .collect::<Result<_>>()?;
    let differentials = (1..=n)
        .map(|deg| {
            SparseMap::from_rule(modules[deg].clone(), modules[deg - 1].clone(), seq.n_vars(), |g| {
                let mut image = koszul_boundary(seq, g);
                if g.summand() + 1 < s {
                    image.extend(del_of(seq.n_vars(), g));
                }
                image
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KRIsComplex {
        seq: seq.clone(),
        s,
        complex: ChainComplex::new(seq.n_vars(), modules, differentials)?,
    })
}

/// `s·max deg + n·max deg + 2`: covers every generator degree with margin.
pub fn default_max_internal<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> u32 {
    let m = seq.max_degree();
    s as u32 * m + seq.len() as u32 * m + 2
}

/// A homogeneous-in-homological-degree element: label → polynomial coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element<C> {
    pub degree: usize,
    pub terms: BTreeMap<QGenerator, Polynomial<C>>,
}

impl<C: Scalar> Element<C> {
    pub fn zero(degree: usize) -> Self {
        Element { degree, terms: BTreeMap::new() }
    }

    pub fn basis(g: QGenerator, coeff: Polynomial<C>) -> Self {
        let mut e = Element::zero(g.homological_degree());
        e.add_term(g, &coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: QGenerator, coeff: &Polynomial<C>) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(p) => {
                p.add_assign_ref(coeff);
                if p.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, coeff.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, p) in &other.terms {
            out.add_term(g.clone(), p);
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Element::zero(self.degree);
        for (g, p) in &self.terms {
            out.add_term(g.clone(), &p.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }
}

impl<C: Scalar> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(g, p)| format!("({p})*{g}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Scalar> KRIsComplex<C> {
    pub fn n_vars(&self) -> usize {
        self.seq.n_vars()
    }

    /// `d^(s)` applied to an element.
    pub fn differential_of(&self, x: &Element<C>) -> Element<C> {
        let mut out = Element::zero(x.degree.saturating_sub(1));
        let Some(d) = self.complex.differential(x.degree) else { return out };
        let module = self.complex.module(x.degree);
        for (g, a) in &x.terms {
            let j = module.position(g).expect("label in module");
            for (i, p) in d.column(j) {
                out.add_term(d.target().generator(*i).clone(), &(a * p));
            }
        }
        out
    }

    /// Product of two basis labels: exterior product with shuffle sign, tags
    /// concatenated. `None` when the product vanishes (repeated exterior
    /// index, or total tag length `≥ s`).
    pub fn multiply_labels(&self, a: &QGenerator, b: &QGenerator) -> Option<(i8, QGenerator)> {
        if a.tag.len() + b.tag.len() >= self.s {
            return None;
        }
        let (sign, ext) = a.exterior.wedge(&b.exterior)?;
        Some((sign, QGenerator::new(ext, a.tag.concat(&b.tag))))
    }

    /// The pairing `(x ũ_m)(y ũ_m') = (xy) ũ_{mm'}`, truncated to zero once the
    /// tag length reaches `s`.
    pub fn dga_multiply(&self, a: &Element<C>, b: &Element<C>) -> Element<C> {
        let mut out = Element::zero(a.degree + b.degree);
        for (ga, pa) in &a.terms {
            for (gb, pb) in &b.terms {
                if let Some((sign, g)) = self.multiply_labels(ga, gb) {
                    let c = pa * pb;
                    out.add_term(g, &if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Image of the degree-0 generator `ũ_m` before reduction: `(-1)^|m| u_m`.
    pub fn tag_value(&self, g: &QGenerator) -> Polynomial<C> {
        let u = self.seq.product(g.tag.indices());
        if g.tag.len() % 2 == 1 {
            -u
        } else {
            u
        }
    }

    /// `ε^(s)` on a degree-0 element, as a canonical residue mod `I^s`.
    pub fn augment(&self, x: &Element<C>) -> Result<Polynomial<C::Field>> {
        if x.degree != 0 {
            return Err(Error::InvalidParameter(format!("augmentation needs degree 0, got {}", x.degree)));
        }
        let mut value = Polynomial::zero(self.n_vars());
        for (g, a) in &x.terms {
            value.add_assign_ref(&(a * &self.tag_value(g)));
        }
        Ok(PowerReducer::new(&self.seq.to_field(), self.s).reduce(&value.to_field()))
    }

    /// Checks `ε^(s) ∘ d^(s) = 0` on every degree-1 generator.
    pub fn augmentation_kills_boundaries(&self) -> Result<bool> {
        let reducer = PowerReducer::new(&self.seq.to_field(), self.s);
        let Some(d) = self.complex.differential(1) else { return Ok(true) };
        for j in 0..self.complex.module(1).rank() {
            let mut value = Polynomial::zero(self.n_vars());
            for (i, p) in d.column(j) {
                let g = d.target().generator(*i);
                value.add_assign_ref(&(p * &self.tag_value(g)));
            }
            if !reducer.reduce(&value.to_field()).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Canonical residues modulo `I^k`.
///
/// For monomial generators a monomial lies in `I^k` iff it is divisible by
/// some product of `k` generators, decided arithmetically. Otherwise each
/// homogeneous part is reduced against an echelon basis of `(I^k)_d` built
/// from the products `μ·u_m`, `|m| = k`; echelon pivots follow graded-lex
/// order, so the normal form is canonical.
pub struct PowerReducer<F: Field> {
    seq: RegularSequence<F>,
    k: usize,
    slices: Mutex<HashMap<u32, Arc<(Vec<Monomial>, Span<F>)>>>,
}

impl<F: Field> PowerReducer<F> {
    pub fn new(seq: &RegularSequence<F>, k: usize) -> Self {
        PowerReducer { seq: seq.clone(), k, slices: Mutex::new(HashMap::new()) }
    }

    /// Whether a monomial lies in `I^k` (monomial generators only).
    fn monomial_in_power(&self, m: &Monomial) -> Option<bool> {
        match self.seq.source() {
            SequenceSource::Variables => Some(m.degree() as usize >= self.k),
            SequenceSource::Powers(a) => {
                let copies: u32 = m.exponents().iter().zip(a).map(|(b, a)| b / a).sum();
                Some(copies as usize >= self.k)
            }
            SequenceSource::Explicit => None,
        }
    }

    fn slice(&self, d: u32) -> Arc<(Vec<Monomial>, Span<F>)> {
        if let Some(s) = self.slices.lock().unwrap().get(&d) {
            return s.clone();
        }
        let basis = monomials_of_degree(self.seq.n_vars(), d);
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = Span::new(basis.len());
        for tag in crate::koszul::monomial_basis(self.seq.len(), self.k) {
            let um = self.seq.product(tag.indices());
            let Some(e) = um.total_degree() else { continue };
            if e > d {
                continue;
            }
            for mu in monomials_of_degree(self.seq.n_vars(), d - e) {
                let p = um.mul_monomial(&mu);
                let mut v = vec![F::zero(); basis.len()];
                for (m, c) in p.terms() {
                    v[index[m]] = c.clone();
                }
                span.insert(&v);
            }
        }
        let entry = Arc::new((basis, span));
        self.slices.lock().unwrap().insert(d, entry.clone());
        entry
    }

    /// `dim (I^k)_d`, from the rank of the multiplication matrix.
    pub fn ideal_dimension(&self, d: u32) -> usize {
        self.slice(d).1.dimension()
    }

    pub fn reduce(&self, p: &Polynomial<F>) -> Polynomial<F> {
        if self.k == 0 {
            return Polynomial::zero(p.n_vars());
        }
        if self.seq.is_monomial() {
            return p.retain_terms(|m| !self.monomial_in_power(m).unwrap());
        }
        let mut out = Polynomial::zero(p.n_vars());
        let mut degrees: Vec<u32> = p.terms().map(|(m, _)| m.degree()).collect();
        degrees.dedup();
        for d in degrees {
            let slice = self.slice(d);
            let (basis, span) = &*slice;
            let v: Vec<F> = basis.iter().map(|m| p.coefficient(m)).collect();
            let r = span.reduce(&v);
            for (m, c) in basis.iter().zip(r) {
                out.add_term(m.clone(), c);
            }
        }
        out
    }
}

/// Hilbert function `d ↦ dim_k (R/I^s)_d` for `d ≤ max_d`, as
/// `dim R_d − rank` of the multiplication matrix with columns `μ·u_m`.
pub fn hilbert_function<F: Field>(seq: &RegularSequence<F>, s: usize, max_d: u32) -> Vec<usize> {
    let r = PowerReducer { seq: seq.clone(), k: s, slices: Mutex::new(HashMap::new()) };
    (0..=max_d).map(|d| monomial_count(seq.n_vars(), d) - r.ideal_dimension(d)).collect()
}

/// Slice homology of `K(R;I^s)` over one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub field: String,
    pub max_internal: u32,
    /// `grid[n][d] = dim H_n(K(R;I^s))_d`.
    pub grid: Vec<Vec<usize>>,
    /// Hilbert function of `R/I^s` from the independent multiplication-matrix count.
    pub hilbert: Vec<usize>,
    pub h0_matches_hilbert: bool,
    pub positive_degrees_vanish: bool,
    /// First `(n, d)` with nonzero homology for `n ≥ 1`.
    pub first_failure: Option<(usize, u32)>,
}

impl ExactnessReport {
    pub fn ok(&self) -> bool {
        self.h0_matches_hilbert && self.positive_degrees_vanish
    }
}

/// Exactness data for one field: the complex and the sequence already live
/// over `F`.
pub fn exactness_over<F: Field>(complex: &ChainComplex<F>, seq: &RegularSequence<F>, s: usize, max_d: u32) -> ExactnessReport {
    let grid = complex.homology_grid_in(max_d, |c: &F| c.clone());
    let hilbert = hilbert_function(seq, s, max_d);
    let h0_matches_hilbert = grid.first().is_some_and(|row| row == &hilbert);
    let first_failure = grid
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(n, row)| row.iter().position(|&h| h != 0).map(|d| (n, d as u32)));
    ExactnessReport {
        field: F::domain().to_string(),
        max_internal: max_d,
        grid,
        hilbert,
        h0_matches_hilbert,
        positive_degrees_vanish: first_failure.is_none(),
        first_failure,
    }
}

/// Degree-by-degree exactness of `K(R;I^s)` up to internal degree `max_d`.
///
/// Over a field, one report. Over ℤ, reports for ℚ and the probe primes 2, 3, 5.
pub fn verify_exactness<C: Scalar>(seq: &RegularSequence<C>, s: usize, max_d: u32) -> Result<Vec<ExactnessReport>> {
    let k = build_k_ris(seq, s)?;
    verify_exactness_of(&k.complex, seq, s, max_d)
}

/// As [`verify_exactness`], for an arbitrary complex claimed to resolve `R/I^s`.
pub fn verify_exactness_of<C: Scalar>(
    complex: &ChainComplex<C>,
    seq: &RegularSequence<C>,
    s: usize,
    max_d: u32,
) -> Result<Vec<ExactnessReport>> {
    let mut reports = vec![exactness_over(&complex.to_field(), &seq.to_field(), s, max_d)];
    if !C::domain().is_field() {
        reports.push(exactness_over_prime::<C, F2>(complex, seq, s, max_d)?);
        reports.push(exactness_over_prime::<C, F3>(complex, seq, s, max_d)?);
        reports.push(exactness_over_prime::<C, F5>(complex, seq, s, max_d)?);
    }
    Ok(reports)
}

fn exactness_over_prime<C: Scalar, F: Field>(
    complex: &ChainComplex<C>,
    seq: &RegularSequence<C>,
    s: usize,
    max_d: u32,
) -> Result<ExactnessReport> {
    let f = |c: &C| F::from_bigint(&c.to_integer().expect("integer coefficient"));
    Ok(exactness_over(&complex.map_coeffs(f), &seq.map_coeffs(f)?, s, max_d))
}

/// The projection `K(R;I^s) → K(R;I^{s-1})` dropping the top summand.
pub fn reduction_chain_map<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<ChainMap<C>> {
    if s < 2 {
        return Err(Error::InvalidParameter("reduction map needs s ≥ 2".into()));
    }
    let source = build_k_ris(seq, s)?.complex;
    let target = build_k_ris(seq, s - 1)?.complex;
    let components = (0..source.len())
        .map(|n| {
            SparseMap::from_rule(source.module(n).clone(), target.module(n).clone(), seq.n_vars(), |g| {
                if g.summand() + 1 < s {
                    vec![(g.clone(), Polynomial::one(seq.n_vars()))]
                } else {
                    Vec::new()
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(source, target, components)
}

/// Checks `ε^(s-1) ∘ proj ≡ ε^(s) mod I^{s-1}` on every degree-0 generator.
pub fn reduction_respects_augmentation<C: Scalar>(seq: &RegularSequence<C>, s: usize) -> Result<bool> {
    let big = build_k_ris(seq, s)?;
    let small = build_k_ris(seq, s - 1)?;
    let map = reduction_chain_map(seq, s)?;
    let coarse = PowerReducer::new(&seq.to_field(), s - 1);
    let one = Polynomial::one(seq.n_vars());
    for (j, g) in big.complex.module(0).generators().iter().enumerate() {
        let lhs = coarse.reduce(&big.augment(&Element::basis(g.clone(), one.clone()))?);
        let mut image = Element::zero(0);
        for (i, p) in map.components[0].column(j) {
            image.add_term(small.complex.module(0).generator(*i).clone(), p);
        }
        let rhs = small.augment(&image)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::koszul_complex;
    use crate::labels::{ExteriorGen, TagMonomial};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type Seq = RegularSequence<BigInt>;

    fn g(e: &[usize], t: &[usize]) -> QGenerator {
        QGenerator::new(ExteriorGen::new(e.to_vec()), TagMonomial::new(t.to_vec()))
    }

    fn x(i: usize) -> Polynomial<BigInt> {
        Polynomial::var(2, i - 1)
    }

    #[test]
    fn s_one_is_koszul() {
        for n in 1..=3 {
            let seq = Seq::variables(n).unwrap();
            assert_eq!(build_k_ris(&seq, 1).unwrap().complex, koszul_complex(&seq, n));
        }
    }

    #[test]
    fn generator_counts() {
        let k = build_k_ris(&Seq::variables(2).unwrap(), 2).unwrap();
        assert_eq!(k.complex.ranks(), vec![3, 6, 3]);
        assert_eq!(k.complex.module(3).rank(), 0);
    }

    #[test]
    fn squares_to_zero() {
        for n in 1..=4 {
            for s in 1..=4 {
                let k = build_k_ris(&Seq::variables(n).unwrap(), s).unwrap();
                assert!(k.complex.verify().ok, "n = {n}, s = {s}");
            }
        }
    }

    #[test]
    fn corrupted_del_sign_is_caught() {
        let k = build_k_ris(&Seq::variables(2).unwrap(), 2).unwrap();
        let mut c = k.complex.clone();
        let mut ds = c.differentials().to_vec();
        let d2 = &mut ds[1];
        let (i, j) = (
            d2.target().position(&g(&[2], &[1])).unwrap(),
            d2.source().position(&g(&[1, 2], &[])).unwrap(),
        );
        let flipped = -&d2.entry(i, j);
        d2.set_entry(i, j, flipped);
        c = ChainComplex::new(2, c.modules().to_vec(), ds).unwrap();
        let report = c.verify();
        assert!(!report.ok);
        let f = report.failure.unwrap();
        assert_eq!(f.degree, 2);
        assert_eq!(f.witness, "e{1,2}");
    }

    #[test]
    fn augmentation_examples() {
        let k = build_k_ris(&Seq::variables(2).unwrap(), 2).unwrap();
        let mut e = Element::zero(0);
        e.add_term(g(&[], &[]), &Polynomial::constant(2, BigInt::from(5)));
        e.add_term(g(&[], &[1]), &Polynomial::constant(2, BigInt::from(2)));
        e.add_term(g(&[], &[2]), &(&x(1) + &Polynomial::constant(2, BigInt::from(3))));
        // 5 - 2 x1 - (x1 + 3) x2 ≡ 5 - 2 x1 - 3 x2 mod (x1, x2)^2
        assert_eq!(k.augment(&e).unwrap().to_string(), "-2*x1 - 3*x2 + 5");
        let sq = Element::basis(g(&[], &[1]), x(1));
        assert!(k.augment(&sq).unwrap().is_zero());
        assert!(k.augmentation_kills_boundaries().unwrap());
        assert!(k.augment(&Element::basis(g(&[1], &[]), x(1))).is_err());
    }

    #[test]
    fn augmentation_general_regime() {
        let seq = Seq::parse_explicit(2, &["x1 + x2", "x1*x2"]).unwrap();
        for s in 1..=3 {
            let k = build_k_ris(&seq, s).unwrap();
            assert!(k.augmentation_kills_boundaries().unwrap());
        }
        let k = build_k_ris(&seq, 1).unwrap();
        // x1 ≡ -x2 mod (x1 + x2): residues of x1 and -x2 agree
        let a = k.augment(&Element::basis(g(&[], &[]), x(1))).unwrap();
        let b = k.augment(&Element::basis(g(&[], &[]), -x(2))).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn hilbert_function_examples() {
        let q = RegularSequence::<BigRational>::variables(2).unwrap();
        assert_eq!(hilbert_function(&q, 2, 4), vec![1, 2, 0, 0, 0]);
        let p = RegularSequence::<BigRational>::powers(&[2, 2]).unwrap();
        // R/(x^2, y^2)^2 = R/(x^4, x^2y^2, y^4)
        assert_eq!(hilbert_function(&p, 2, 6), vec![1, 2, 3, 4, 2, 0, 0]);
    }

    #[test]
    fn exactness_small_case() {
        let reports = verify_exactness(&Seq::variables(2).unwrap(), 2, 8).unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert!(r.ok(), "{r:?}");
            assert_eq!(&r.grid[0][..3], &[1, 2, 0]);
        }
    }

    #[test]
    fn product_truncation_and_signs() {
        let k = build_k_ris(&Seq::variables(2).unwrap(), 2).unwrap();
        let one = Polynomial::one(2);
        let e1 = Element::basis(g(&[1], &[]), one.clone());
        let e2 = Element::basis(g(&[2], &[]), one.clone());
        let e12 = k.dga_multiply(&e1, &e2);
        assert_eq!(e12, Element::basis(g(&[1, 2], &[]), one.clone()));
        assert_eq!(k.dga_multiply(&e2, &e1), e12.neg());
        let a = Element::basis(g(&[1], &[1]), one.clone());
        let b = Element::basis(g(&[2], &[2]), one.clone());
        assert!(k.dga_multiply(&a, &b).is_zero());
    }

    #[test]
    fn leibniz_on_generators() {
        let k = build_k_ris(&Seq::variables(3).unwrap(), 3).unwrap();
        let one = Polynomial::one(3);
        let labels: Vec<QGenerator> =
            (0..=3).flat_map(|n| k.complex.module(n).generators().to_vec()).collect();
        for a in &labels {
            for b in &labels {
                let (ea, eb) = (Element::basis(a.clone(), one.clone()), Element::basis(b.clone(), one.clone()));
                let lhs = k.differential_of(&k.dga_multiply(&ea, &eb));
                let mut rhs = k.dga_multiply(&k.differential_of(&ea), &eb);
                let t = k.dga_multiply(&ea, &k.differential_of(&eb));
                rhs = rhs.add(&if ea.degree % 2 == 0 { t } else { t.neg() });
                assert_eq!(lhs.terms, rhs.terms, "{a} * {b}");
            }
        }
    }

    #[test]
    fn reduction_map() {
        let seq = Seq::variables(2).unwrap();
        for s in 2..=4 {
            let f = reduction_chain_map(&seq, s).unwrap();
            f.verify().unwrap();
            assert!(reduction_respects_augmentation(&seq, s).unwrap());
        }
        let f = reduction_chain_map(&seq, 2).unwrap();
        assert_eq!(f.target, koszul_complex(&seq, 2));
        assert!(reduction_chain_map(&seq, 1).is_err());
    }
}
