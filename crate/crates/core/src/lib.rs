//! Exact arithmetic for Igusa zeta functions with characters and monodromy
//! zeta functions of polynomials that are nondegenerate with respect to their
//! Newton polyhedron at the origin.
//!
//! The library computes, over a prime residue field and for a multiplicative
//! character of conductor one:
//!
//! - the local and global Igusa zeta functions `Z_{f,0}(chi, s)` and
//!   `Z_f(chi, s)` as exact rational functions in `T = q^{-s}`, assembled
//!   face by face from the Newton polyhedron (Hoornaert's formula),
//! - the monodromy zeta function at the origin via Varchenko's product over
//!   V-faces, kept in factored `(1 - t^e)` form,
//! - formula-independent oracles: congruence solution counts, truncated zeta
//!   series from first principles, and mod-p nondegeneracy checks,
//! - facet classification (`B1`, `X2`), cancellation checks for groups of
//!   face contributions, and an end-to-end holomorphy audit that matches every
//!   surviving pole line against an eigenvalue order of the monodromy.
//!
//! Everything is exact: integer, rational and cyclotomic arithmetic
//! throughout, no floating point anywhere.
//!
//! Module map:
//!
//! - [`polyring`]: sparse multivariate integer polynomials, parsing, mod-p
//!   reduction, face restriction, variable shifts
//! - [`newton`]: the Newton polyhedron, its face lattice, facet normals,
//!   dual cones, V-faces, projections, facet triangulation
//! - [`lattice`]: multiplicities, normalized volumes, simplicial subdivision
//!   of cones, fundamental-parallelepiped point enumeration
//! - [`charcyclo`]: cyclotomic field elements, characters of prime fields,
//!   torus character sums, and exhaustive character-sum identity sweeps
//! - [`zeta`]: rational functions in `T`, cone generating functions,
//!   assembly and reduction of the zeta functions, pole analysis
//! - [`oracle`]: brute-force congruence counting and series, nondegeneracy
//! - [`monodromy`]: Varchenko's formula, `F_tau` factors, eigenvalue orders
//! - [`conjecture`]: facet classification, cancellation suites, holomorphy
//!   reports

pub mod charcyclo;
pub mod conjecture;
pub mod lattice;
mod linalg;
pub mod monodromy;
pub mod newton;
pub mod oracle;
pub mod polyring;
pub mod zeta;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("support is empty")]
    EmptySupport,
    #[error("origin lies in the support (f(0) != 0)")]
    OriginInSupport,
    #[error("face {0} is not a face of this polyhedron")]
    NotAFace(usize),
    #[error("the dual cone of the full polyhedron is {{0}}; its S-sum is 1")]
    FullFaceDualCone,
    #[error("projection along variable {axis} hits the origin")]
    DegenerateProjection { axis: usize },
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("cone is not pointed")]
    NonPointedCone,
    #[error("affine span is not a hyperplane of the coordinate subspace")]
    AffineSpanNotHyperplane,
    #[error("face is not compact")]
    NonCompactFace,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("enumeration budget exceeded: need {required} points, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("reduction of f mod {p} is degenerate on face {face} at {witness:?}")]
    Degenerate {
        p: u64,
        face: usize,
        witness: Vec<u64>,
    },
    #[error("configuration does not match pattern {pattern}: {reason}")]
    PatternMismatch { pattern: String, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation requires ambient dimension {required}, polyhedron has {found}")]
    UnsupportedDimension { required: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
