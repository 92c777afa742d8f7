//! Exact evaluation and cross-verification of binomial moment sums.
//!
//! * [`exact`]: rationals, Pochhammer symbols, binomials and half-integer brackets
//! * [`series`]: truncated power series, polynomials, interpolation
//! * [`sigma`]: the symmetric connection coefficients `sigma_{m,l}(y)`
//! * [`moments`]: the four moment families by brute force, `l`-sums and tabulated closed forms
//! * [`conjecture`]: exact ansatz fitting and closed-form search
//! * [`cli`]: the `moments` command-line front end

pub mod cli;
pub mod conjecture;
pub mod exact;
pub mod moments;
pub mod series;
pub mod sigma;

pub use exact::Rational;
pub use moments::{Family, Method, MomentQuery};
