//! Error types shared across the crate.

use crate::quad::TransformKind;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Semi-axis validation failed (ordering or positivity).
    #[error("invalid semi-axes (require a > b > c > 0): {0}")]
    InvalidAxes(String),

    /// A requested quadrature rule would exceed the node ceiling.
    #[error("{transform:?} rule at level {level} needs {nodes} nodes, above the ceiling {ceiling}")]
    RuleTooLarge {
        transform: TransformKind,
        level: u32,
        nodes: usize,
        ceiling: usize,
    },

    /// Integrand returned a non-finite value at an interior node.
    #[error("integrand returned {value} at x = {abscissa:.17e}")]
    NonFiniteIntegrand { abscissa: f64, value: f64 },

    /// Invalid integration interval.
    #[error("invalid interval ({lo}, {hi}): bounds must be finite with lo < hi")]
    BadInterval { lo: f64, hi: f64 },

    /// A cubic root landed outside its bracketing interval.
    #[error("confocal root {root:.17e} escaped bracket ({lo:.6e}, {hi:.6e}); residual {residual:.3e}")]
    RootOutsideBracket {
        root: f64,
        lo: f64,
        hi: f64,
        residual: f64,
    },

    /// Point sits on a focal degeneracy the transform cannot resolve.
    #[error("point ({x}, {y}, {z}) is within tolerance of a focal degeneracy")]
    FocalDegeneracy { x: f64, y: f64, z: f64 },

    /// Ellipsoidal coordinates violate their bracket intervals.
    #[error("ellipsoidal point violates brackets: {0}")]
    BracketViolation(String),

    /// Class/order combination with zero multiplicity.
    #[error("Lamé class {class} is empty at order n = {n}")]
    EmptyClass { class: &'static str, n: usize },

    /// Order outside the supported range.
    #[error("order n = {0} above the supported maximum {1}")]
    OrderTooLarge(usize, usize),

    /// The tridiagonal eigenproblem could not be solved.
    #[error("eigenproblem failed for class {class} at order n = {n}: {reason}")]
    EigenFailure {
        class: &'static str,
        n: usize,
        reason: String,
    },

    /// Derivative requested exactly at a branch point of a class factor.
    #[error("class-factor derivative is unbounded at |s| = {0}")]
    DerivativeAtBranchPoint(f64),

    /// Exterior evaluation requested inside the focal region.
    #[error("exterior evaluation needs |lambda| > k; got |lambda| = {lambda}, k = {k}")]
    NotExterior { lambda: f64, k: f64 },

    /// Quadrature failure while computing a named quantity.
    #[error("quadrature failed for {part}: {source}")]
    QuadraturePart {
        part: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// The 2-D oracle is restricted to low orders.
    #[error("2-D oracle budget exceeded: n = {0} (limit {1})")]
    OracleBudget(usize, usize),

    /// A charge lies outside the cavity.
    #[error("charge at ({x}, {y}, {z}) is not strictly inside the cavity (lambda = {lambda}, a = {a})")]
    ChargeOutsideCavity {
        x: f64,
        y: f64,
        z: f64,
        lambda: f64,
        a: f64,
    },

    /// Denominator degenerated while assembling expansion coefficients.
    #[error("degenerate denominator for (n, p) = ({n}, {p}): {reason}")]
    DegenerateCoefficient {
        n: usize,
        p: usize,
        reason: String,
    },
}
