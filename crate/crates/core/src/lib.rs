//! Empirical, exact and analytic views of DPLL search on random 2+p-SAT.
//!
//! * [`cnf`] and [`dpll`]: formulas, random instances and an instrumented
//!   backtracking solver with the UC, GUC and SC1 split heuristics.
//! * [`oracle`]: the exact evolution operator over partial states and the
//!   branch function of tiny instances, in rational arithmetic.
//! * [`ode`]: single-branch density trajectories and phase-diagram geometry.
//! * [`annealed`]: the clause-vector Markov chain of expected branch counts.
//! * [`growth`]: the search-tree growth equation solved by characteristics.
//! * [`experiment`]: ensembles, extrapolation and report generation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annealed;
pub mod cnf;
pub mod dpll;
pub mod error;
pub mod experiment;
pub mod growth;
pub mod ode;
pub mod oracle;
pub mod rng;

pub use cnf::{Clause, ClauseStatus, ClauseVector, Instance, Literal, Mark, PartialState};
pub use dpll::{solve, Heuristic, PhasePoint, SolveResult, SolveStats};
pub use error::{Error, Result};
