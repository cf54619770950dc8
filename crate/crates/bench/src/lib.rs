//! Benchmark campaigns for the dynamic-accuracy trust-region solver: run
//! grids of solves, reduce them to result tables, emit tables and plot data,
//! and audit iteration traces against the convergence theory.

pub mod aggregate;
pub mod audit;
pub mod campaign;
pub mod emit;
pub mod error;

pub use aggregate::{aggregate, AggregateRow};
pub use campaign::{run_campaign, CampaignSpec, Format, ProblemFilter, RunRecord};
pub use error::{BenchError, Result};
