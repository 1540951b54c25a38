//! Point and line SOR for the 2-D Poisson equation on the unit square, with
//! closed-form optimal relaxation parameters and a dense spectral oracle to
//! check them.
//!
//! ```
//! use poisson_sor::{make_grid, predict, BoundarySet, Scheme, SolverConfig, SorVariant};
//!
//! let grid = make_grid(10, 30).unwrap();
//! let bcs = BoundarySet::dirichlet();
//! let p = predict(&grid, &bcs, Scheme::Central2, SorVariant::PointSor).unwrap();
//! let cfg = SolverConfig::new(Scheme::Central2, SorVariant::PointSor, p.omega_opt).unwrap();
//! let report = poisson_sor::solve(&grid, &bcs, &cfg).unwrap();
//! assert!(report.converged);
//! ```

pub mod error;
pub mod experiment;
pub mod grid;
pub mod omega;
pub mod operator;
pub mod oracle;
pub mod robin;
pub mod solver;
pub mod stencil;

pub use error::{Error, Result};
pub use grid::{initial_guess, l2_norm, make_grid, BoundarySet, EdgeCondition, Field, GridSpec, Side};
pub use omega::{predict, predict_detailed, OmegaPrediction, Prediction, WavenumberMode};
pub use operator::DiscreteOperator;
pub use oracle::{brute_force_omega, build_sweep_matrix, spectral_radius, SweepMatrix};
pub use robin::{classify, select_wavenumber, RobinPair};
pub use solver::{run, solve, SolveReport, SolverConfig, Sor, SorVariant};
pub use stencil::{ghost_value, weights, Scheme};
