//! Truncated power series in `T`, dense univariate polynomials and exact
//! interpolation.

mod poly;

pub use poly::{poly_interpolate, Polynomial};

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::exact::{ExactError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("coefficient index {index} exceeds truncation order {order}")]
    IndexOutOfOrder { index: usize, order: usize },
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(Rational),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("point ({x}, {y}) does not lie on the interpolant of degree <= {degree}")]
    Consistency {
        x: Box<Rational>,
        y: Box<Rational>,
        degree: usize,
    },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Formal power series `c_0 + c_1 T + ... + c_M T^M`, truncated at order `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Coefficients beyond `order` are dropped; missing ones are zero.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    /// `1 / (1 - cT) = sum c^k T^k`.
    pub fn geometric(c: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut power = Rational::one();
        for _ in 0..=order {
            coeffs.push(power.clone());
            power *= c;
        }
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `[T^k]` of the series.
    pub fn coefficient(&self, k: usize) -> Result<&Rational, SeriesError> {
        self.coeffs.get(k).ok_or(SeriesError::IndexOutOfOrder {
            index: k,
            order: self.order(),
        })
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        let order = self.order();
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero())
                    .map(|i| &self.coeffs[i] * &other.coeffs[k - i])
                    .sum()
            })
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `T^k`, discarding what falls past the order.
    pub fn shift(&self, k: usize) -> TruncatedSeries {
        let order = self.order();
        let mut coeffs = vec![Rational::zero(); order + 1];
        if k <= order {
            coeffs[k..].clone_from_slice(&self.coeffs[..=order - k]);
        }
        TruncatedSeries { coeffs }
    }

    /// Product of all factors; `one(order)` for an empty iterator.
    pub fn product<'a>(
        factors: impl IntoIterator<Item = &'a TruncatedSeries>,
        order: usize,
    ) -> Result<TruncatedSeries, SeriesError> {
        factors
            .into_iter()
            .try_fold(Self::one(order), |acc, f| acc.mul(f))
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs).expect("series orders differ")
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::add(self, &-rhs).expect("series orders differ")
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs).expect("series orders differ")
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&Rational::from(-1))
    }
}

pub fn series_mul(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
) -> Result<TruncatedSeries, SeriesError> {
    a.mul(b)
}

pub fn geometric(c: &Rational, order: usize) -> TruncatedSeries {
    TruncatedSeries::geometric(c, order)
}

pub fn coefficient(s: &TruncatedSeries, k: usize) -> Result<Rational, SeriesError> {
    s.coefficient(k).cloned()
}
