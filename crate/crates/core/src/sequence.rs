//! Homogeneous regular sequences `u_1..u_n` in `k[x_1..x_N]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{Homogeneity, Monomial, Polynomial};
use crate::scalar::Scalar;

/// How the sequence was specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceSource {
    /// `u_i = x_i`.
    Variables,
    /// `u_i = x_i^{a_i}`.
    Powers(Vec<u32>),
    /// User-supplied homogeneous polynomials.
    Explicit,
}

/// Whether regularity is known or merely claimed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Certified,
    AssertedByUser,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularSequence<C> {
    source: SequenceSource,
    n_vars: usize,
    generators: Vec<Polynomial<C>>,
    degrees: Vec<u32>,
    regularity: Regularity,
}

impl<C: Scalar> RegularSequence<C> {
    /// `u = (x_1, …, x_n)` in `k[x_1..x_n]`.
    pub fn variables(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(RegularSequence {
            source: SequenceSource::Variables,
            n_vars: n,
            generators: (0..n).map(|i| Polynomial::var(n, i)).collect(),
            degrees: vec![1; n],
            regularity: Regularity::Certified,
        })
    }

    /// `u = (x_1^{a_1}, …, x_n^{a_n})`.
    pub fn powers(exponents: &[u32]) -> Result<Self> {
        let n = exponents.len();
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        if let Some(i) = exponents.iter().position(|&a| a == 0) {
            return Err(Error::ConstantGenerator { index: i + 1 });
        }
        let generators = exponents
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let mut e = vec![0; n];
                e[i] = a;
                Polynomial::monomial(Monomial::new(e))
            })
            .collect();
        Ok(RegularSequence {
            source: SequenceSource::Powers(exponents.to_vec()),
            n_vars: n,
            generators,
            degrees: exponents.to_vec(),
            regularity: Regularity::Certified,
        })
    }

    /// An explicit list; regularity is recorded as asserted, not checked.
    pub fn explicit(n_vars: usize, generators: Vec<Polynomial<C>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptySequence);
        }
        let mut degrees = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.n_vars() != n_vars {
                return Err(Error::VariableCountMismatch { left: n_vars, right: g.n_vars() });
            }
            match g.homogeneity() {
                Homogeneity::Zero => return Err(Error::ZeroGenerator { index: i + 1 }),
                Homogeneity::Inhomogeneous => {
                    return Err(Error::InhomogeneousGenerator { index: i + 1 })
                }
                Homogeneity::Homogeneous(0) => return Err(Error::ConstantGenerator { index: i + 1 }),
                Homogeneity::Homogeneous(d) => degrees.push(d),
            }
        }
        Ok(RegularSequence {
            source: SequenceSource::Explicit,
            n_vars,
            generators,
            degrees,
            regularity: Regularity::AssertedByUser,
        })
    }

    /// Parses each string with the polynomial grammar, then calls [`Self::explicit`].
    pub fn parse_explicit<S: AsRef<str>>(n_vars: usize, texts: &[S]) -> Result<Self> {
        let gens = texts
            .iter()
            .map(|t| parse_poly(t.as_ref(), n_vars))
            .collect::<Result<Vec<_>>>()?;
        Self::explicit(n_vars, gens)
    }

    pub fn source(&self) -> &SequenceSource {
        &self.source
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    /// Number of generators `n`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.generators
    }

    /// `u_i`, 1-based.
    pub fn generator(&self, i: usize) -> &Polynomial<C> {
        &self.generators[i - 1]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Generators are monomials, so `I^s` is a monomial ideal.
    pub fn is_monomial(&self) -> bool {
        !matches!(self.source, SequenceSource::Explicit)
    }

    /// `u_m = Π u_i` over a 1-based index multiset.
    pub fn product(&self, indices: &[usize]) -> Polynomial<C> {
        indices
            .iter()
            .fold(Polynomial::one(self.n_vars), |acc, &i| &acc * self.generator(i))
    }

    /// The same sequence with coefficients in the fraction field.
    pub fn to_field(&self) -> RegularSequence<C::Field> {
        RegularSequence {
            source: self.source.clone(),
            n_vars: self.n_vars,
            generators: self.generators.iter().map(Polynomial::to_field).collect(),
            degrees: self.degrees.clone(),
            regularity: self.regularity,
        }
    }

    /// Coefficientwise image; fails if a generator degenerates (e.g. vanishes
    /// modulo a prime).
    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> Result<RegularSequence<D>> {
        let generators: Vec<Polynomial<D>> = self.generators.iter().map(|g| g.map_coeffs(f)).collect();
        let mut out = match self.source {
            SequenceSource::Explicit => RegularSequence::explicit(self.n_vars, generators)?,
            _ => RegularSequence {
                source: self.source.clone(),
                n_vars: self.n_vars,
                generators,
                degrees: self.degrees.clone(),
                regularity: self.regularity,
            },
        };
        out.regularity = self.regularity;
        Ok(out)
    }

    /// Printable summary `[x1, x2^2]`.
    pub fn describe(&self) -> Vec<String> {
        self.generators.iter().map(ToString::to_string).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Seq = RegularSequence<BigInt>;

    #[test]
    fn variables_and_powers() {
        let v = Seq::variables(2).unwrap();
        assert_eq!(v.describe(), ["x1", "x2"]);
        assert_eq!(v.degrees(), &[1, 1]);
        assert_eq!(v.regularity(), Regularity::Certified);
        let p = Seq::powers(&[2, 2]).unwrap();
        assert_eq!(p.describe(), ["x1^2", "x2^2"]);
        assert_eq!(p.degrees(), &[2, 2]);
    }

    #[test]
    fn explicit_is_asserted() {
        let s = Seq::parse_explicit(2, &["x1 + x2", "x1*x2"]).unwrap();
        assert_eq!(s.regularity(), Regularity::AssertedByUser);
        assert_eq!(s.degrees(), &[1, 2]);
        assert_eq!(s.product(&[1, 2]).to_string(), "x1^2*x2 + x1*x2^2");
    }

    #[test]
    fn rejects_bad_generators() {
        assert_eq!(Seq::variables(0), Err(Error::EmptySequence));
        assert_eq!(Seq::parse_explicit::<&str>(2, &[]), Err(Error::EmptySequence));
        assert_eq!(
            Seq::parse_explicit(2, &["x1 + x2^2"]),
            Err(Error::InhomogeneousGenerator { index: 1 })
        );
        assert_eq!(Seq::parse_explicit(2, &["x1", "x1 - x1"]), Err(Error::ZeroGenerator { index: 2 }));
        assert_eq!(Seq::parse_explicit(2, &["3"]), Err(Error::ConstantGenerator { index: 1 }));
        assert_eq!(Seq::powers(&[1, 0]), Err(Error::ConstantGenerator { index: 2 }));
    }
}
