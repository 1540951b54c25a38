use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid needs at least 3 cells along {axis}, got {cells}")]
    DimensionTooSmall { axis: char, cells: usize },

    #[error("invalid boundary condition: {0}")]
    InvalidEdge(String),

    #[error("all four edges are Neumann: the solution is not unique")]
    NonSolvable,

    #[error("ghost node is not defined for a {0} edge")]
    GhostUndefined(&'static str),

    #[error("relaxation parameter {0} is outside (0, 2)")]
    InvalidOmega(f64),

    #[error("invalid solver setting: {0}")]
    InvalidConfig(String),

    #[error("field shape {found:?} does not match grid {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("singular tridiagonal system: pivot {pivot:e} at row {row}")]
    SingularSystem { row: usize, pivot: f64 },

    #[error("not converged after {iterations} iterations (norm {final_norm:e})")]
    NotConverged { iterations: usize, final_norm: f64 },

    #[error("diverged after {iterations} iterations (norm {final_norm:e})")]
    Diverged { iterations: usize, final_norm: f64 },

    #[error("non-convergent configuration: r = {r} (SOR needs r < 1)")]
    NonConvergent { r: f64 },

    #[error("invalid wavenumber mode: {0}")]
    InvalidMode(String),

    #[error("perturbation formula out of domain: {0}")]
    FormulaDomain(String),

    #[error("inadmissible root-count parameters m = {m}, n = {n} (need 1 + 4mn >= 0)")]
    Inadmissible { m: f64, n: f64 },

    #[error("no root of the characteristic equation found: {0}")]
    NoRoot(String),

    #[error("{count} unknowns exceed the dense oracle limit of {limit}")]
    TooManyUnknowns { count: usize, limit: usize },

    #[error("sweep matrix does not reproduce the solver (relative error {0:e})")]
    SweepMatrixMismatch(f64),

    #[error("eigenvalue iteration failed to converge for eigenvalue {0}")]
    EigenFailure(usize),

    #[error("parse error: {0}")]
    Parse(String),
}
