//! Exact scalar kernel.
//!
//! Everything downstream is computed over [`Rational`]. Pochhammer symbols are
//! extended to negative integer index by `(x)_{-k} = 1 / (x-k)_k`, which keeps
//! the shift rule `(x)_{a+b} = (x)_a (x+a)_b` valid for all integers `a`, `b`
//! and gives the telescoping boundary terms of the half-integer brackets their
//! exact values.

mod rational;

pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative-index Pochhammer pole: {symbol}({x}, {index})")]
    NegativeIndexPole {
        symbol: &'static str,
        x: Rational,
        index: i64,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Rising factorial `(x)_n = x(x+1)...(x+n-1)`; `(x)_{-k} = 1/(x-k)_k`.
pub fn rising(x: &Rational, n: i64) -> Result<Rational, ExactError> {
    if n >= 0 {
        return Ok((0..n).map(|i| x + i).product());
    }
    let k = -n;
    let shifted = x - k;
    rising(&shifted, k)?
        .recip()
        .map_err(|_| ExactError::NegativeIndexPole {
            symbol: "rising",
            x: x.clone(),
            index: n,
        })
}

/// Falling factorial `<x>_n = x(x-1)...(x-n+1)`; `<x>_{-k} = 1/<x+k>_k`.
pub fn falling(x: &Rational, n: i64) -> Result<Rational, ExactError> {
    if n >= 0 {
        return Ok((0..n).map(|i| x - i).product());
    }
    let k = -n;
    let shifted = x + k;
    falling(&shifted, k)?
        .recip()
        .map_err(|_| ExactError::NegativeIndexPole {
            symbol: "falling",
            x: x.clone(),
            index: n,
        })
}

pub fn factorial(k: u64) -> Rational {
    (1..=k).map(Rational::from).product()
}

/// Generalized binomial coefficient `<x>_k / k!`, zero for negative `k`.
pub fn binomial(x: &Rational, k: i64) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    // falling with nonnegative index never fails
    falling(x, k).expect("nonnegative index") / factorial(k as u64)
}

/// Binomial coefficient with integer upper argument.
pub fn binomial_int(n: i64, k: i64) -> Rational {
    binomial(&Rational::from(n), k)
}

/// Half-integer bracket `[upper, lower] = (1/2)_upper / ((1/2)_lower (1/2)_{upper-lower})`.
///
/// Total on all integer pairs: `(1/2)_k` has no zeros or poles since `1/2` is
/// not an integer. Only nonnegative `upper` occurs in the moment sums
/// themselves; negative `upper` arises inside theorem sums at small `n`.
pub fn bracket(upper: i64, lower: i64) -> Result<Rational, ExactError> {
    let half = Rational::half();
    let top = rising(&half, upper)?;
    let bottom = rising(&half, lower)? * rising(&half, upper - lower)?;
    top.checked_div(&bottom)
}

/// `binom(2n, n)`.
pub fn central_binomial(n: i64) -> Result<Rational, ExactError> {
    if n < 0 {
        return Err(ExactError::Domain(format!(
            "central_binomial requires n >= 0, got {n}"
        )));
    }
    Ok(binomial_int(2 * n, n))
}
