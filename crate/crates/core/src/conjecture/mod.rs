//! Exact conjecture fitting: solve for ansatz coefficients over the
//! rationals, confirm on disjoint holdout points, and compare with the
//! tabulated closed forms.

pub mod ansatz;
pub mod linsolve;
pub mod search;

pub use ansatz::{
    fit, fit_with, Ansatz, AnsatzTerm, ClosedFormCandidate, FitError, FitStatus, MIN_HOLDOUT,
};
pub use linsolve::{solve_exact, SolveError};
pub use search::{
    explore_d_even, rediscover_all, search, seeded_shape, DenominatorPattern, RediscoveryEntry,
    RediscoveryReport, SearchConfig,
};
