//! Explicit free resolutions `K(R;I^s) → R/I^s` for powers of an ideal
//! generated by a homogeneous regular sequence in a polynomial ring, together
//! with exact machinery to compute `Tor^R_*(R/I, R/I^s)` and check the
//! structure of the resolution degree by degree.
//!
//! All arithmetic is exact. The library is generic over the coefficient
//! domain through [`Scalar`]; the aliases below fix the common choices.

pub mod chain;
pub mod error;
pub mod extensions;
pub mod homology;
pub mod koszul;
pub mod labels;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod resolution;
pub mod scalar;
pub mod sequence;
pub mod smith;
pub mod spectral;

pub use chain::{ChainComplex, ChainMap, FreeModule, GradedSlice, SparseMap};
pub use error::{Error, Result};
pub use labels::{ExteriorGen, QGenerator, TagMonomial};
pub use parse::parse_poly;
pub use poly::{Monomial, Polynomial};
pub use scalar::{CoefficientDomain, Field, Fp, Scalar, ScalarVisitor, F2, F3, F5};
pub use sequence::{RegularSequence, Regularity, SequenceSource};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub type ZPoly = Polynomial<BigInt>;
pub type QPoly = Polynomial<BigRational>;
pub type F2Poly = Polynomial<F2>;
pub type F3Poly = Polynomial<F3>;
pub type F5Poly = Polynomial<F5>;

pub type ZSequence = RegularSequence<BigInt>;
pub type QSequence = RegularSequence<BigRational>;

pub type ZComplex = ChainComplex<BigInt>;
pub type QComplex = ChainComplex<BigRational>;
