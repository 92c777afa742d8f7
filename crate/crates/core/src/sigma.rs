//! The complete symmetric functions
//!
//! ```text
//! sigma_{m,l}(y) = [T^{m-l}] prod_{j=0}^{l} 1 / (1 - T (y-j)^2)
//! ```
//!
//! which are the connection coefficients expanding `x^{2m}` over the products
//! `<y+x>_l <y-x>_l`. Three independent evaluators are provided (power-series
//! extraction, monomial enumeration, and the closed alternating sum) together
//! with the interpolated polynomial in `y`.

use thiserror::Error;

use crate::exact::{binomial, falling, ExactError, Rational};
use crate::series::{poly_interpolate, Polynomial, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("sigma_{{{m},{l}}} is undefined: need 0 <= l <= m")]
    InvalidQuery { m: usize, l: usize },
    #[error("explicit form has a pole at y = {y}: <2y>_{{{order}}} = 0")]
    DenominatorPole { y: Rational, order: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaQuery {
    pub m: usize,
    pub l: usize,
    pub y: Rational,
}

impl SigmaQuery {
    pub fn new(m: usize, l: usize, y: Rational) -> Result<Self, SigmaError> {
        if l > m {
            return Err(SigmaError::InvalidQuery { m, l });
        }
        Ok(SigmaQuery { m, l, y })
    }
}

fn shifted_square(y: &Rational, j: usize) -> Rational {
    let d = y - j as i64;
    &d * &d
}

/// Coefficient extraction from the truncated product of geometric series.
pub fn sigma_series(q: &SigmaQuery) -> Result<Rational, SigmaError> {
    let order = q.m - q.l;
    let factors: Vec<TruncatedSeries> = (0..=q.l)
        .map(|j| TruncatedSeries::geometric(&shifted_square(&q.y, j), order))
        .collect();
    let product = TruncatedSeries::product(&factors, order)?;
    Ok(product.coefficient(order)?.clone())
}

/// All of `sigma_{m,0}(y), ..., sigma_{m,m}(y)` from a single running product.
pub fn sigma_row(m: usize, y: &Rational) -> Vec<Rational> {
    let mut running = TruncatedSeries::one(m);
    (0..=m)
        .map(|l| {
            let g = TruncatedSeries::geometric(&shifted_square(y, l), m);
            running = running.mul(&g).expect("equal orders");
            running.coeffs()[m - l].clone()
        })
        .collect()
}

/// Sum over weakly increasing tuples `0 <= k_1 <= ... <= k_{m-l} <= l` of
/// `prod (y - k_i)^2`.
pub fn sigma_monomial(q: &SigmaQuery) -> Rational {
    let squares: Vec<Rational> = (0..=q.l).map(|j| shifted_square(&q.y, j)).collect();
    let mut total = Rational::zero();
    enumerate_tuples(&squares, q.m - q.l, 0, Rational::one(), &mut |v| total += v);
    total
}

/// Visit every multiset of size `remaining` drawn from `squares[start..]`.
fn enumerate_tuples(
    squares: &[Rational],
    remaining: usize,
    start: usize,
    acc: Rational,
    visit: &mut impl FnMut(Rational),
) {
    if remaining == 0 {
        visit(acc);
        return;
    }
    for i in start..squares.len() {
        enumerate_tuples(squares, remaining - 1, i, &acc * &squares[i], visit);
    }
}

/// Number of monomials in [`sigma_monomial`], i.e. `binom(m, l)`.
pub fn monomial_count(m: usize, l: usize) -> usize {
    let mut count = 0usize;
    let ones = vec![Rational::one(); l + 1];
    enumerate_tuples(&ones, m - l, 0, Rational::one(), &mut |_| count += 1);
    count
}

/// `2(-1)^l / <2y>_{1+2l} * sum_i binom(2y, i) binom(2l-2y, l-i) (y-i)^{1+2m}`,
/// defined only where `<2y>_{1+2l} != 0`.
pub fn sigma_explicit(q: &SigmaQuery) -> Result<Rational, SigmaError> {
    let l = q.l as i64;
    let two_y = &q.y * 2;
    let denom = falling(&two_y, 1 + 2 * l)?;
    if denom.is_zero() {
        return Err(SigmaError::DenominatorPole {
            y: q.y.clone(),
            order: 1 + 2 * q.l,
        });
    }
    let upper = Rational::from(2 * l) - &two_y;
    let sum: Rational = (0..=l)
        .map(|i| {
            let base = &q.y - i;
            binomial(&two_y, i) * binomial(&upper, l - i) * base.pow(1 + 2 * q.m as i64).unwrap()
        })
        .sum();
    Ok(Rational::sign_power(l) * 2 * sum / denom)
}

/// `sigma_{m,l}` as a polynomial in `y`, interpolated from [`sigma_series`] at
/// `y = 0, 1, ..., 2(m-l)`.
pub fn sigma_poly(m: usize, l: usize) -> Result<Polynomial, SigmaError> {
    if l > m {
        return Err(SigmaError::InvalidQuery { m, l });
    }
    let degree = 2 * (m - l);
    let points = (0..=degree)
        .map(|y| {
            let y = Rational::from(y);
            let v = sigma_series(&SigmaQuery { m, l, y: y.clone() })?;
            Ok((y, v))
        })
        .collect::<Result<Vec<_>, SigmaError>>()?;
    Ok(poly_interpolate(&points, degree)?)
}
