use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use regquot::{CoefficientDomain, RegularSequence, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config file {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] regquot::Error),
}

/// Where the generators of `I` come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    Variables,
    Powers(Vec<u32>),
    Explicit(Vec<String>),
    File(PathBuf),
}

impl FromStr for SequenceSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let t = s.trim();
        if t == "vars" || t == "variables" {
            return Ok(SequenceSpec::Variables);
        }
        if let Some(rest) = t.strip_prefix("powers:") {
            let exps = rest
                .split(',')
                .map(|a| a.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| ConfigError::Invalid(format!("bad exponent list `{rest}`")))?;
            return Ok(SequenceSpec::Powers(exps));
        }
        if let Some(rest) = t.strip_prefix("explicit:") {
            return Ok(SequenceSpec::Explicit(rest.split(';').map(|p| p.trim().to_string()).collect()));
        }
        if let Some(rest) = t.strip_prefix("file:") {
            return Ok(SequenceSpec::File(PathBuf::from(rest)));
        }
        if t.is_empty() {
            return Err(ConfigError::Invalid("empty sequence spec".into()));
        }
        Ok(SequenceSpec::File(PathBuf::from(t)))
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Variables => write!(f, "vars"),
            SequenceSpec::Powers(a) => {
                let parts: Vec<String> = a.iter().map(ToString::to_string).collect();
                write!(f, "powers:{}", parts.join(","))
            }
            SequenceSpec::Explicit(p) => write!(f, "explicit:{}", p.join(";")),
            SequenceSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Config file contents. Every field is optional; flags take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n_vars: Option<usize>,
    pub field: Option<CoefficientDomain>,
    pub sequence: Option<String>,
    pub polynomials: Option<Vec<String>>,
    pub s: Option<usize>,
    pub max_homological_degree: Option<usize>,
    pub max_internal_degree: Option<u32>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub corrupt: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Json { path: path.into(), source })
    }
}

/// Fully resolved run parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub n_vars: usize,
    pub field: CoefficientDomain,
    #[serde(serialize_with = "as_display")]
    pub sequence: SequenceSpec,
    /// Generators as text, after reading files.
    pub polynomials: Vec<String>,
    pub s: usize,
    pub max_homological_degree: Option<usize>,
    pub max_internal_degree: Option<u32>,
    pub workers: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub corrupt: bool,
}

fn as_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n_vars: Option<usize>,
    pub field: Option<CoefficientDomain>,
    pub sequence: Option<SequenceSpec>,
    pub s: Option<usize>,
    pub max_homological_degree: Option<usize>,
    pub max_internal_degree: Option<u32>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub corrupt: bool,
}

fn read_polynomials(path: &Path) -> Result<Vec<String>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

impl RunConfig {
    pub fn resolve(file: Option<ConfigFile>, flags: Overrides) -> Result<Self, ConfigError> {
        let file = file.unwrap_or_default();
        let mut sequence = match (flags.sequence, &file.sequence, &file.polynomials) {
            (Some(s), _, _) => s,
            (None, Some(s), _) => s.parse()?,
            (None, None, Some(p)) => SequenceSpec::Explicit(p.clone()),
            (None, None, None) => SequenceSpec::Variables,
        };
        if let SequenceSpec::File(path) = &sequence {
            sequence = SequenceSpec::Explicit(read_polynomials(path)?);
        }
        let n_flag = flags.n_vars.or(file.n_vars);
        let (n_vars, polynomials) = match &sequence {
            SequenceSpec::Variables => {
                let n = n_flag.unwrap_or(2);
                (n, (1..=n).map(|i| format!("x{i}")).collect())
            }
            SequenceSpec::Powers(a) => {
                if n_flag.is_some_and(|n| n != a.len()) {
                    return Err(ConfigError::Invalid(format!(
                        "{} exponents given for {} variables",
                        a.len(),
                        n_flag.unwrap()
                    )));
                }
                (a.len(), a.iter().enumerate().map(|(i, e)| format!("x{}^{e}", i + 1)).collect())
            }
            SequenceSpec::Explicit(p) => {
                let n = n_flag.ok_or_else(|| ConfigError::Invalid("explicit sequences need --n".into()))?;
                (n, p.clone())
            }
            SequenceSpec::File(_) => unreachable!("files are read above"),
        };
        let cfg = RunConfig {
            n_vars,
            field: flags.field.or(file.field).unwrap_or(CoefficientDomain::Rationals),
            sequence,
            polynomials,
            s: flags.s.or(file.s).unwrap_or(2),
            max_homological_degree: flags.max_homological_degree.or(file.max_homological_degree),
            max_internal_degree: flags.max_internal_degree.or(file.max_internal_degree),
            workers: flags.workers.or(file.workers).unwrap_or(1),
            out: flags.out.or(file.out),
            corrupt: flags.corrupt || file.corrupt.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.s == 0 {
            return Err(ConfigError::Invalid("s must be at least 1".into()));
        }
        if self.n_vars == 0 {
            return Err(ConfigError::Invalid("n must be at least 1".into()));
        }
        if self.max_internal_degree == Some(0) {
            return Err(ConfigError::Invalid("max internal degree must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(ConfigError::Invalid("workers must be at least 1".into()));
        }
        self.field.validate()?;
        // parse and homogeneity check over ℤ, independent of the run domain
        self.sequence_over::<regquot::BigInt>()?;
        Ok(())
    }

    pub fn sequence_over<C: Scalar>(&self) -> Result<RegularSequence<C>, ConfigError> {
        Ok(match &self.sequence {
            SequenceSpec::Variables => RegularSequence::variables(self.n_vars)?,
            SequenceSpec::Powers(a) => RegularSequence::powers(a)?,
            SequenceSpec::Explicit(_) | SequenceSpec::File(_) => {
                if self.polynomials.is_empty() {
                    return Err(ConfigError::Invalid("no generators given".into()));
                }
                RegularSequence::parse_explicit(self.n_vars, &self.polynomials)?
            }
        })
    }
}
