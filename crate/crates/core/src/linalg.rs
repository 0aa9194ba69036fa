//! Exact linear algebra over fields: dense reduced echelon forms for the small
//! homology computations, sparse elimination for slice ranks.

use std::collections::HashMap;

use crate::scalar::{Field, Scalar};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix<C> {
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<C>>,
}

impl<C: Scalar> DenseMatrix<C> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix { nrows, ncols, data: vec![vec![C::zero(); ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = C::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<C>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        DenseMatrix { nrows: rows.len(), ncols, data: rows }
    }

    pub fn from_columns(nrows: usize, cols: &[Vec<C>]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length");
            for (i, v) in c.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<C>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(C::is_zero))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions");
        let mut out = Self::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let b = &rhs.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] = out.data[i][j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.ncols, v.len(), "vector length");
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> DenseMatrix<D> {
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn to_field(&self) -> DenseMatrix<C::Field> {
        self.map(C::to_field)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hconcat(&self, rhs: &Self) -> Self {
        assert_eq!(self.nrows, rhs.nrows, "row counts");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        DenseMatrix { nrows: self.nrows, ncols: self.ncols + rhs.ncols, data }
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: DenseMatrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Null space basis, one vector per free column in increasing order. Each
    /// vector has a 1 in its free column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let n = self.matrix.ncols;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..n)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![F::zero(); n];
                v[free] = F::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.matrix.data[r][free].clone();
                }
                v
            })
            .collect()
    }

    /// Reduces `v` (a row vector of length `ncols`) against the row space;
    /// the result has zeros in every pivot column and is zero iff `v` lies
    /// in the row space.
    pub fn reduce_row(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (o, a) in out.iter_mut().zip(&self.matrix.data[r]) {
                if !a.is_zero() {
                    *o = o.clone() - c.clone() * a.clone();
                }
            }
        }
        out
    }
}

pub fn rref<F: Field>(m: &DenseMatrix<F>) -> Rref<F> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.ncols {
        if row == a.nrows {
            break;
        }
        let Some(pr) = (row..a.nrows).find(|&r| !a.data[r][col].is_zero()) else {
            continue;
        };
        a.data.swap(row, pr);
        let inv = a.data[row][col].inverse();
        for v in a.data[row].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = a.data[row].clone();
        for r in 0..a.nrows {
            if r == row || a.data[r][col].is_zero() {
                continue;
            }
            let c = a.data[r][col].clone();
            for (x, p) in a.data[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - c.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank<F: Field>(m: &DenseMatrix<F>) -> usize {
    rref(m).rank()
}

/// Null space basis of `m` (vectors `x` with `m x = 0`).
pub fn nullspace<F: Field>(m: &DenseMatrix<F>) -> Vec<Vec<F>> {
    rref(m).nullspace()
}

/// A solution of `m x = b` with free variables set to zero, if one exists.
pub fn solve<F: Field>(m: &DenseMatrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(m.nrows, b.len(), "right-hand side length");
    let aug = m.hconcat(&DenseMatrix::from_columns(m.nrows, &[b.to_vec()]));
    let r = rref(&aug);
    if r.pivots.last() == Some(&m.ncols) {
        return None;
    }
    let mut x = vec![F::zero(); m.ncols];
    for (row, &p) in r.pivots.iter().enumerate() {
        x[p] = r.matrix.data[row][m.ncols].clone();
    }
    Some(x)
}

/// Column-space bookkeeping: an echelon basis of the span of some columns,
/// with reduction of new vectors against it.
#[derive(Clone, Debug)]
pub struct Span<F> {
    dim: usize,
    /// Basis vectors, each normalised to 1 at its pivot, pairwise reduced.
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Span<F> {
    pub fn new(dim: usize) -> Self {
        Span { dim, rows: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (p, row) in &self.rows {
            if out[*p].is_zero() {
                continue;
            }
            let c = out[*p].clone();
            for (o, a) in out.iter_mut().zip(row) {
                if !a.is_zero() {
                    *o = o.clone() - c.clone() * a.clone();
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inverse();
        let r: Vec<F> = r.into_iter().map(|x| x * inv.clone()).collect();
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (o, a) in row.iter_mut().zip(&r) {
                if !a.is_zero() {
                    *o = o.clone() - c.clone() * a.clone();
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Sparse matrix stored by rows; each row sorted by column with no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<C> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, C)>>,
}

impl<C: Scalar> SparseMatrix<C> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, C)>,
    ) -> Self {
        let mut acc: Vec<HashMap<usize, C>> = vec![HashMap::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet out of range");
            let e = acc[i].entry(j).or_insert_with(C::zero);
            *e = e.clone() + v;
        }
        let rows = acc
            .into_iter()
            .map(|r| {
                let mut v: Vec<(usize, C)> = r.into_iter().filter(|(_, x)| !x.is_zero()).collect();
                v.sort_by_key(|(j, _)| *j);
                v
            })
            .collect();
        SparseMatrix { nrows, ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<(usize, C)>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.rows[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.rows[i][k].1.clone())
            .unwrap_or_else(|_| C::zero())
    }

    pub fn to_dense(&self) -> DenseMatrix<C> {
        let mut m = DenseMatrix::zeros(self.nrows, self.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> SparseMatrix<D> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .filter_map(|(j, v)| {
                            let w = f(v);
                            (!w.is_zero()).then_some((*j, w))
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_field(&self) -> SparseMatrix<C::Field> {
        self.map(C::to_field)
    }

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        sparse_rank(&self.to_field())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Rank by sparse elimination. Rows are first split into the connected
/// components of the row/column incidence graph, which are eliminated
/// independently.
pub fn sparse_rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    let mut uf = UnionFind((0..m.ncols).collect());
    for r in &m.rows {
        if let Some((first, _)) = r.first() {
            for (j, _) in &r[1..] {
                uf.union(*first, *j);
            }
        }
    }
    let mut components: HashMap<usize, Vec<&Vec<(usize, F)>>> = HashMap::new();
    for r in &m.rows {
        if let Some((first, _)) = r.first() {
            components.entry(uf.find(*first)).or_default().push(r);
        }
    }
    components.into_values().map(eliminate_rank).sum()
}

fn eliminate_rank<F: Field>(mut rows: Vec<&Vec<(usize, F)>>) -> usize {
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, Vec<(usize, F)>> = HashMap::new();
    for row in rows {
        let mut r = row.clone();
        while let Some((c, v)) = r.first().cloned() {
            match pivots.get(&c) {
                Some(p) => r = axpy(&r, &-v, p),
                None => {
                    let inv = v.inverse();
                    for e in r.iter_mut() {
                        e.1 = e.1.clone() * inv.clone();
                    }
                    pivots.insert(c, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `x + a·y` for sorted sparse vectors.
fn axpy<F: Field>(x: &[(usize, F)], a: &F, y: &[(usize, F)]) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, a.clone() * y[j].1.clone()));
            j += 1;
        } else {
            let v = x[i].1.clone() + a.clone() * y[j].1.clone();
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
