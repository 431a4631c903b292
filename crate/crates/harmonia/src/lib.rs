//! Bounds for minima of homogeneous polynomials on the unit sphere.
//!
//! The library builds the pieces of a "harmonic hierarchy": explicit product
//! cubature rules on S^{n-1} of any even algebraic degree, harmonic
//! decomposition of forms, averaging kernels expressed in the normalized
//! Gegenbauer basis, and an optimization-free lower bound that brackets the
//! sphere minimum of a form together with the cubature-node upper bound.
//!
//! The modules mirror that pipeline:
//!
//! * [`polynomial`]: sparse homogeneous polynomials, Laplacian, norm-power
//!   multiplication and analytic sphere integrals of monomials.
//! * [`cubature`]: Gauss-Jacobi rules and sign-change-invariant product
//!   cubature rules on S^{n-1} with exactness verification.
//! * [`harmonic`]: harmonic space dimensions, harmonic decomposition,
//!   Gegenbauer polynomials and zonal harmonics.
//! * [`kernel`]: averaging kernels in normalized Gegenbauer coordinates, the
//!   pure-power kernel in closed form, the Fang-Fawzi eigenvalue kernel, and
//!   Frobenius thresholds.
//! * [`hierarchy`]: the averaging operator and its inverse, membership
//!   certification, lower/upper bounds, dual moment generators and level
//!   sweeps.

pub mod cubature;
pub mod harmonic;
pub mod hierarchy;
pub mod kernel;
pub mod polynomial;

pub(crate) mod linalg;
pub(crate) mod special;

pub use cubature::{
    cached_rule, circle_rule, gauss_jacobi, product_cubature, CubatureRule, Quadrature1D,
};
pub use harmonic::{
    gegenbauer, harmonic_decompose, harmonic_dim, normalized_gegenbauer, sphere_area,
    zonal_harmonic, HarmonicExpansion,
};
pub use hierarchy::{
    apply_gamma, apply_gamma_inverse, certify_membership, convolve_on_nodes, lower_bound,
    moment_generators, sphere_sample, sweep, upper_bound, BoundResult, DualGenerator, KernelKind,
    RulePolicy,
};
pub use kernel::{
    fang_fawzi_kernel, frobenius_threshold, gegenbauer_expand, power_kernel, toeplitz_matrix,
    FangFawziSolution, GegenbauerKernel,
};
pub use polynomial::{sphere_monomial_integral, HomogeneousPolynomial};

use std::fmt;

/// Errors produced by this crate.
#[derive(Debug)]
pub enum Error {
    /// A point or polynomial has the wrong number of variables.
    DimensionMismatch {
        expected: usize,
        got: usize,
    },
    /// An exponent vector does not sum to the declared total degree.
    MixedDegree {
        degree: usize,
        exponent_sum: usize,
    },
    /// An operation requires an even total degree.
    OddDegree {
        degree: usize,
    },
    /// A univariate polynomial expected to be even has a nonzero odd coefficient.
    OddCoefficient {
        index: usize,
    },
    /// A vector expected to lie on the unit sphere does not.
    NonUnitVector {
        norm: f64,
    },
    /// A cubature rule's algebraic degree is too small for the requested operation.
    InsufficientRuleDegree {
        required: usize,
        available: usize,
    },
    /// A kernel coefficient needed for inversion vanishes; `index` is the
    /// harmonic degree 2j of the offending coefficient.
    SingularKernel {
        index: usize,
    },
    /// An invalid parameter combination.
    InvalidParameter(String),
    /// A numerical routine failed (non-convergence, singular system, ...).
    Numeric(String),
    /// Malformed input data.
    Parse(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::MixedDegree {
                degree,
                exponent_sum,
            } => write!(
                f,
                "exponent vector sums to {exponent_sum} but the declared degree is {degree}"
            ),
            Error::OddDegree { degree } => {
                write!(f, "operation requires an even degree, got {degree}")
            }
            Error::OddCoefficient { index } => {
                write!(
                    f,
                    "polynomial must be even: nonzero coefficient at odd power {index}"
                )
            }
            Error::NonUnitVector { norm } => {
                write!(f, "point must lie on the unit sphere (norm = {norm})")
            }
            Error::InsufficientRuleDegree {
                required,
                available,
            } => write!(
                f,
                "cubature rule of algebraic degree >= {required} required, got {available}"
            ),
            Error::SingularKernel { index } => {
                write!(f, "kernel is singular: coefficient lambda_{index} vanishes")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Numeric(msg) => write!(f, "numerical failure: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
