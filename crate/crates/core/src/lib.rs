//! Monte Carlo Euler estimation of `E[f(X_T)]` for one-dimensional SDEs
//! whose drift grows superlinearly.
//!
//! The explicit Euler scheme loses numerically weak convergence for such
//! drifts (its moments blow up), yet the Monte Carlo Euler estimator with
//! `M = N^2` samples still converges almost surely with order `1/3-` in the
//! effort `N^3`. This crate provides the scheme, the dominating-process
//! diagnostics that explain the phenomenon, restricted-moment estimators,
//! reference solutions, and order fitting.
//!
//! All randomness is counter-based and keyed by `(seed, replicate)`, and all
//! reductions run in replicate order, so results do not depend on the
//! number of worker threads.

// Comparisons are written so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod brownian;
pub mod dominator;
pub mod error;
pub mod estimator;
pub mod euler;
pub mod models;
pub mod normal;
pub mod parallel;
pub mod reference;
pub mod sum;

pub use brownian::{BrownianPath, Lane, RandomStream};
pub use dominator::{check_domination, dominator_table, DominatorTrace};
pub use error::{Error, Result};
pub use estimator::{coupled_sweep, fit_order, mce, ConvergenceRow, McEstimate, OrderFit, Restriction};
pub use euler::{euler_path, EulerTrajectory};
pub use models::{builtin_models, InitialValue, SdeModel, Which};
pub use parallel::RunConfig;
pub use reference::{ReferenceValue, RiemannRule};
pub use sum::KahanSum;
