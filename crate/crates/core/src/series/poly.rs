use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::SeriesError;
use crate::exact::Rational;

/// Dense univariate polynomial over the rationals, lowest degree first.
///
/// Trailing zeros are always stripped, so the representation is canonical and
/// the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// From coefficients listed highest degree first, the way formulas are written.
    pub fn from_ints_desc(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `a*x + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_ints(&[b, a])
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = Rational::one();
        Polynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn content_denominator(&self) -> num_bigint::BigInt {
        Rational::common_denominator(&self.coeffs)
    }

    /// Render in `var`, highest degree first, e.g. `2*y^2 - 2*y + 1`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let body = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&body);
            } else if mag.is_integer() {
                out.push_str(&format!("{mag}*{body}"));
            } else {
                out.push_str(&format!("({mag})*{body}"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]", self.display_in("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Interpolate the unique polynomial of degree `<= degree_bound` through the
/// first `degree_bound + 1` points (Newton divided differences), then check
/// every remaining point lies on it.
pub fn poly_interpolate(
    points: &[(Rational, Rational)],
    degree_bound: usize,
) -> Result<Polynomial, SeriesError> {
    let needed = degree_bound + 1;
    if points.len() < needed {
        return Err(SeriesError::TooFewPoints {
            needed,
            got: points.len(),
        });
    }
    for (i, (xi, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(xj, _)| xj == xi) {
            return Err(SeriesError::DuplicateAbscissa(xi.clone()));
        }
    }

    let (nodes, rest) = points.split_at(needed);
    let xs: Vec<&Rational> = nodes.iter().map(|(x, _)| x).collect();
    let mut table: Vec<Rational> = nodes.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..needed {
        for i in (level..needed).rev() {
            let num = &table[i] - &table[i - 1];
            let den = xs[i] - xs[i - level];
            table[i] = num / den;
        }
    }

    // expand the Newton form by Horner's scheme on polynomials
    let mut result = Polynomial::constant(table[needed - 1].clone());
    for i in (0..needed - 1).rev() {
        let factor = Polynomial::new(vec![-xs[i], Rational::one()]);
        result = &(&result * &factor) + &Polynomial::constant(table[i].clone());
    }

    for (x, y) in rest {
        if &result.eval(x) != y {
            return Err(SeriesError::Consistency {
                x: Box::new(x.clone()),
                y: Box::new(y.clone()),
                degree: degree_bound,
            });
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter().map(|&(x, y)| (x.into(), y.into())).collect()
    }

    #[test]
    fn canonical_form() {
        let p = Polynomial::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial::from_ints(&[0, 0]), Polynomial::zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn interpolates_constant() {
        let p = poly_interpolate(&pts(&[(0, 1), (1, 1), (2, 1)]), 2).unwrap();
        assert_eq!(p, Polynomial::one());
    }

    #[test]
    fn interpolates_square_with_extra_point() {
        let p = poly_interpolate(&pts(&[(0, 0), (1, 1), (2, 4), (3, 9)]), 2).unwrap();
        assert_eq!(p, Polynomial::monomial(2));
    }

    #[test]
    fn detects_inconsistency_and_duplicates() {
        let err = poly_interpolate(&pts(&[(0, 0), (1, 1), (2, 5)]), 1).unwrap_err();
        assert!(matches!(err, SeriesError::Consistency { .. }));
        let err = poly_interpolate(&pts(&[(0, 0), (0, 1)]), 1).unwrap_err();
        assert_eq!(err, SeriesError::DuplicateAbscissa(Rational::zero()));
        let err = poly_interpolate(&pts(&[(0, 0)]), 1).unwrap_err();
        assert_eq!(err, SeriesError::TooFewPoints { needed: 2, got: 1 });
    }

    #[test]
    fn display() {
        assert_eq!(
            Polynomial::from_ints(&[1, -2, 2]).display_in("y"),
            "2*y^2 - 2*y + 1"
        );
        assert_eq!(Polynomial::from_ints(&[0, -1]).display_in("n"), "-n");
        assert_eq!(
            Polynomial::new(vec![Rational::zero(), Rational::frac(-1, 2)]).display_in("n"),
            "-(1/2)*n"
        );
    }

    #[test]
    fn arithmetic() {
        let a = Polynomial::linear(1, -1);
        let b = Polynomial::linear(1, 1);
        assert_eq!(&a * &b, Polynomial::from_ints(&[-1, 0, 1]));
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(a.pow(2).eval(&Rational::from(4)), Rational::from(9));
    }
}
