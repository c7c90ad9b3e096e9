//! Projected gradient methods for strongly convex objectives whose
//! components have Hölder-continuous gradients.
//!
//! The crate provides three solvers — a fixed-stepsize descent method, a
//! universal primal method with a doubling line search, and a universal fast
//! method with strong-convexity momentum (line-search or fixed-stepsize) —
//! together with closed-form stepsize constants and complexity predictors,
//! the benchmark problems they are studied on (a univariate stagnation
//! instance and two discretized elliptic problems), and an oracle suite that
//! verifies problem metadata and the solver-internal inequalities.

pub mod error;
pub mod linalg;
pub mod problem;
pub mod problems;
pub mod set;
pub mod solvers;
pub mod stepsize;
pub mod trace;
pub mod validation;
pub mod vector;

pub use error::{Error, Result};
pub use problem::{ComponentMeta, ProbeRegion, ProblemInstance};
pub use set::{project, FeasibleSet};
pub use solvers::{pgdm, ufgm, upgm, SolverConfig};
pub use stepsize::Algorithm;
pub use trace::{IterationRecord, SolverTrace};
pub use vector::DenseVector;
