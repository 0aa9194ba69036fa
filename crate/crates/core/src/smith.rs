//! Smith normal form over ℤ.
//!
//! Pivoting is deterministic: the smallest-magnitude nonzero entry of the
//! remaining block (first in row-major order on ties) is moved to the corner,
//! then its row and column are cleared, rows first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::linalg::DenseMatrix;

/// Elementary divisors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    #[serde(serialize_with = "serialize_bigints")]
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl SmithForm {
    /// True when every nonzero elementary divisor is 1, i.e. the image is a
    /// direct summand of the target lattice.
    pub fn is_unimodular(&self) -> bool {
        self.diagonal.iter().all(One::is_one)
    }

    /// Divisors larger than 1 (torsion of the cokernel).
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &DenseMatrix<BigInt>) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> = m.rows().to_vec();
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut t = 0;
    while t < nr.min(nc) {
        let Some((pi, pj)) = smallest_entry(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                sub_row(&mut a, i, t, &q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                sub_col(&mut a, j, t, &q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                move_smallest_in_cross(&mut a, t);
                continue;
            }
            // corner must divide the remaining block
            let offender = (t + 1..nr)
                .flat_map(|i| (t + 1..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match offender {
                Some((i, _)) => {
                    let src = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(src) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    let mut diagonal: Vec<BigInt> =
        (0..nr.min(nc)).map(|k| a[k][k].abs()).filter(|d| !d.is_zero()).collect();
    // the corner-divides-block step already yields a chain; normalise anyway
    for i in 0..diagonal.len() {
        for j in i + 1..diagonal.len() {
            let g = diagonal[i].gcd(&diagonal[j]);
            let l = diagonal[i].lcm(&diagonal[j]);
            diagonal[i] = g;
            diagonal[j] = l;
        }
    }
    SmithForm { rank: diagonal.len(), diagonal }
}

fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn move_smallest_in_cross(a: &mut [Vec<BigInt>], t: usize) {
    let mut best = (t, t);
    for i in t..a.len() {
        if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
            best = (i, t);
        }
    }
    for j in t..a[t].len() {
        if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
            best = (t, j);
        }
    }
    if best.0 != t {
        a.swap(t, best.0);
    }
    if best.1 != t {
        for row in a.iter_mut() {
            row.swap(t, best.1);
        }
    }
}

fn sub_row(a: &mut [Vec<BigInt>], target: usize, pivot: usize, q: &BigInt) {
    let src = a[pivot].clone();
    for (x, y) in a[target].iter_mut().zip(&src) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn sub_col(a: &mut [Vec<BigInt>], target: usize, pivot: usize, q: &BigInt) {
    for row in a.iter_mut() {
        if !row[pivot].is_zero() {
            let d = q * &row[pivot];
            row[target] -= d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(rows: &[&[i64]]) -> DenseMatrix<BigInt> {
        let ncols = rows.first().map_or(0, |r| r.len());
        DenseMatrix::from_rows(
            ncols,
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
        )
    }

    fn divisors(rows: &[&[i64]]) -> Vec<i64> {
        smith_normal_form(&zm(rows)).diagonal.iter().map(|d| d.try_into().unwrap()).collect()
    }

    #[test]
    fn identity_has_unit_divisors() {
        assert_eq!(divisors(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), vec![1, 1, 1]);
    }

    #[test]
    fn two_by_two() {
        // gcd of entries 2, |det| = 8
        assert_eq!(divisors(&[&[2, 4], &[6, 8]]), vec![2, 4]);
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&zm(&[&[0, 0], &[0, 0]]));
        assert!(s.diagonal.is_empty());
        assert_eq!(s.rank, 0);
        assert_eq!(smith_normal_form(&DenseMatrix::zeros(0, 3)).rank, 0);
    }

    #[test]
    fn divisibility_repair() {
        // diag(2, 3) ~ diag(1, 6)
        assert_eq!(divisors(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(divisors(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]), vec![2, 2, 60]);
    }

    #[test]
    fn rectangular_and_negative() {
        assert_eq!(divisors(&[&[-3, 6, 9]]), vec![3]);
        assert_eq!(divisors(&[&[1, -1], &[1, 1], &[0, 2]]), vec![1, 2]);
    }
}
