//! Trust-region minimization with dynamic accuracy on the objective and the gradient.
//!
//! The solver asks a simulated multi-precision oracle for values of `f` and `∇f`
//! only as accurately as its convergence theory requires, and the oracle charges
//! each evaluation in equivalent double-precision cost units.

pub mod error;
pub mod linalg;
pub mod lsr1;
pub mod oracle;
pub mod problems;
pub mod solver;
pub mod subproblem;

pub use error::{Error, Result};
pub use problems::{catalog, Problem};
pub use solver::{solve, SolveResult, SolverConfig, Status, Variant};
