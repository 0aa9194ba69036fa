use thiserror::Error;

/// Errors raised by construction and computation routines.
///
/// Verification failures (a nonzero `d∘d`, a violated identity) are not errors:
/// they come back as reports with a witness. Errors signal bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable x{index} out of range at position {pos} (ring has {n_vars} variables)")]
    VariableOutOfRange { index: usize, n_vars: usize, pos: usize },

    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },

    #[error("generator u{index} is not homogeneous")]
    InhomogeneousGenerator { index: usize },

    #[error("generator u{index} is zero")]
    ZeroGenerator { index: usize },

    #[error("generator u{index} has degree 0; generators must have positive degree")]
    ConstantGenerator { index: usize },

    #[error("a regular sequence needs at least one generator")]
    EmptySequence,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime field F_{0} is not compiled in; supported primes: {1}")]
    UnsupportedPrime(u64, String),

    #[error("unknown coefficient domain `{0}` (expected Q, Z or Fp:<p>)")]
    UnknownDomain(String),

    #[error("expected a constant polynomial, got `{0}`")]
    NotConstant(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("duplicate generator label {0}")]
    DuplicateLabel(String),

    #[error("entry `{entry}` at {target} <- {column} is not an integer modulo I")]
    NotReducibleModI {
        entry: String,
        target: String,
        column: String,
    },

    #[error("differential entry `{0}` is not a constant")]
    NonConstantEntry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a chain map: f∘d != d∘f in degree {degree} (witness {witness})")]
    ChainMapFailure { degree: usize, witness: String },

    #[error("connecting map violates d_Q∘del + del∘d_P = 0 in degree {degree} (witness {witness})")]
    ConnectingMapViolation { degree: usize, witness: String },

    #[error("lifting infeasible for generator {generator} in internal degree {degree}")]
    LiftingInfeasible { generator: String, degree: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
