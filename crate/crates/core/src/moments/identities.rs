//! Standalone identities behind the closed forms: the connection-coefficient
//! expansion of `x^{2m}`, the vanishing sum `Lambda(m, n)` and its telescoping
//! series, bracket structure, and the small-power telescoping evaluations.

use super::{Family, MomentError};
use crate::exact::{
    binomial_int, bracket, central_binomial, falling, rising, ExactError, Rational,
};
use crate::series::TruncatedSeries;
use crate::sigma::sigma_row;

/// `x^{2m} - sum_l (-1)^l <y+x>_l <y-x>_l sigma_{m,l}(y)`; identically zero.
pub fn power_expansion_residual(m: usize, x: &Rational, y: &Rational) -> Rational {
    let sig = sigma_row(m, y);
    let plus = y + x;
    let minus = y - x;
    let expansion: Rational = sig
        .iter()
        .enumerate()
        .map(|(l, s)| {
            let l = l as i64;
            Rational::sign_power(l) * falling(&plus, l).unwrap() * falling(&minus, l).unwrap() * s
        })
        .sum();
    x.pow(2 * m as i64).unwrap() - expansion
}

/// `Lambda(m, n) = sum_l (-1)^l <2n-1/2>_{2l} [2n-2l, n-l] sigma_{m,l}(n-1/2)`.
///
/// Zero for every `m >= 1`; `Lambda(0, n) = [2n, n]`.
pub fn lambda_check(m: usize, n: i64) -> Result<Rational, ExactError> {
    let y = Rational::from(n) - Rational::half();
    let sig = sigma_row(m, &y);
    let top = Rational::from(2 * n) - Rational::half();
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        sum += Rational::sign_power(l) * falling(&top, 2 * l)? * bracket(2 * n - 2 * l, n - l)? * s;
    }
    Ok(sum)
}

/// `(1/2)_{2n} / (1/2)_{n-l}^2`, the scalar in front of the telescoping terms.
fn lambda_scalar(l: i64, n: i64) -> Result<Rational, ExactError> {
    let half = Rational::half();
    let low = rising(&half, n - l)?;
    rising(&half, 2 * n)?.checked_div(&(&low * &low))
}

fn inverse_product(n: i64, count: i64, order: usize) -> TruncatedSeries {
    let y = Rational::from(n) - Rational::half();
    let factors: Vec<TruncatedSeries> = (0..count)
        .map(|j| {
            let d = &y - j;
            TruncatedSeries::geometric(&(&d * &d), order)
        })
        .collect();
    TruncatedSeries::product(&factors, order).expect("equal orders")
}

/// `lambda_l = (1/2)_{2n} T^l / ((1/2)_{n-l}^2 prod_{j<l} (1 - T (n-j-1/2)^2))`.
pub fn lambda_series(l: usize, n: i64, order: usize) -> Result<TruncatedSeries, ExactError> {
    let scalar = lambda_scalar(l as i64, n)?;
    Ok(inverse_product(n, l as i64, order).shift(l).scale(&scalar))
}

/// Closed form of `lambda_l + lambda_{l+1}`: the same shape with the product
/// extended to `j = l`.
pub fn lambda_pair_sum(l: usize, n: i64, order: usize) -> Result<TruncatedSeries, ExactError> {
    let scalar = lambda_scalar(l as i64, n)?;
    Ok(inverse_product(n, l as i64 + 1, order)
        .shift(l)
        .scale(&scalar))
}

/// Which bracket identity a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketIdentity {
    /// `[n, k] = [n, n-k]`
    Symmetry,
    /// `[2n, n-k] = (2n-1/2)/(2n-1) ([2n-1, n-k] + [2n-1, n-k-1])`
    Recurrence,
    /// `[2n-2l, -l] = (-1)^l / [2n-l, l]`
    InverseLower,
    /// `[2n-2l, -l-1] = (-1)^{l+1} / [2n-l+1, l+1]`
    InverseLowerShifted,
}

/// Both sides of one bracket identity instance.
pub fn bracket_identity_sides(
    which: BracketIdentity,
    a: i64,
    b: i64,
) -> Result<(Rational, Rational), ExactError> {
    Ok(match which {
        BracketIdentity::Symmetry => (bracket(a, b)?, bracket(a, a - b)?),
        BracketIdentity::Recurrence => {
            let (n, k) = (a, b);
            let factor = (Rational::from(2 * n) - Rational::half())
                .checked_div(&Rational::from(2 * n - 1))?;
            let rhs = factor * (bracket(2 * n - 1, n - k)? + bracket(2 * n - 1, n - k - 1)?);
            (bracket(2 * n, n - k)?, rhs)
        }
        BracketIdentity::InverseLower => {
            let (n, l) = (a, b);
            let rhs = Rational::sign_power(l).checked_div(&bracket(2 * n - l, l)?)?;
            (bracket(2 * n - 2 * l, -l)?, rhs)
        }
        BracketIdentity::InverseLowerShifted => {
            let (n, l) = (a, b);
            let rhs = Rational::sign_power(l + 1).checked_div(&bracket(2 * n - l + 1, l + 1)?)?;
            (bracket(2 * n - 2 * l, -l - 1)?, rhs)
        }
    })
}

/// A small-power evaluation obtained by telescoping, checked against the
/// brute-force sum.
#[derive(Clone, Copy)]
pub struct WarmUp {
    pub label: &'static str,
    pub family: Family,
    pub m: u32,
    pub min_n: i64,
    pub eval: fn(i64) -> Result<Rational, MomentError>,
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn a0(n: i64) -> Result<Rational, MomentError> {
    if n == 0 {
        return Ok(Rational::zero());
    }
    Ok(Rational::from(2).pow(2 * n - 1)? - central_binomial(n)? * Rational::half())
}

fn b0(n: i64) -> Result<Rational, MomentError> {
    if n == 0 {
        return Ok(Rational::zero());
    }
    Ok(central_binomial(n)? * Rational::half())
}

fn c0(n: i64) -> Result<Rational, MomentError> {
    Ok(bracket(2 * n, n)? * Rational::half() + Rational::sign_power(n) / Rational::from(4 * n - 2))
}

/// The telescoped evaluations of the lowest powers, including the three
/// written as `k^2 = c^2 - (c^2 - k^2)` recurrences.
pub fn warm_ups() -> Vec<WarmUp> {
    vec![
        WarmUp {
            label: "A_0 = 2^(2n-1) - binom(2n,n)/2",
            family: Family::A,
            m: 0,
            min_n: 1,
            eval: a0,
        },
        WarmUp {
            label: "A_1 = n binom(2n-1,n-1)",
            family: Family::A,
            m: 1,
            min_n: 1,
            eval: |n| Ok(q(n) * binomial_int(2 * n - 1, n - 1)),
        },
        WarmUp {
            label: "A_2 = n^2 A_0(n) - <2n>_2 A_0(n-1)",
            family: Family::A,
            m: 2,
            min_n: 1,
            eval: |n| Ok(q(n * n) * a0(n)? - falling(&q(2 * n), 2)? * a0(n - 1)?),
        },
        WarmUp {
            label: "B_0 = binom(2n,n)/2",
            family: Family::B,
            m: 0,
            min_n: 1,
            eval: b0,
        },
        WarmUp {
            label: "B_1 = binom(2n-2,n-1)",
            family: Family::B,
            m: 1,
            min_n: 1,
            eval: |n| Ok(binomial_int(2 * n - 2, n - 1)),
        },
        WarmUp {
            label: "B_2 = n^2 B_0(n) - <2n>_2 B_0(n-1)",
            family: Family::B,
            m: 2,
            min_n: 1,
            eval: |n| Ok(q(n * n) * b0(n)? - falling(&q(2 * n), 2)? * b0(n - 1)?),
        },
        WarmUp {
            label: "C_0 = [2n,n]/2 + (-1)^n/(4n-2)",
            family: Family::C,
            m: 0,
            min_n: 1,
            eval: c0,
        },
        WarmUp {
            label: "C_1 = (2n-1)/(8n-8) [2n,n] + (-1)^n (2n+1)/(8n-8)",
            family: Family::C,
            m: 1,
            min_n: 2,
            eval: |n| {
                let den = q(8 * n - 8);
                let a = (q(2 * n - 1) * bracket(2 * n, n)?).checked_div(&den)?;
                let b = (Rational::sign_power(n) * q(2 * n + 1)).checked_div(&den)?;
                Ok(a + b)
            },
        },
        WarmUp {
            // the shifted sum runs to k = n and so carries the boundary
            // term [2n-2, -1] on top of C_0(n-1)
            label: "C_2 = (n-1/2)^2 C_0(n) - (2n-1/2)(2n-3/2) (C_0(n-1) + (-1)^(n-1) [2n-2,-1])",
            family: Family::C,
            m: 2,
            min_n: 1,
            eval: |n| {
                let shift = q(n) - Rational::half();
                let f = (q(2 * n) - Rational::half()) * (q(2 * n) - Rational::frac(3, 2));
                let shifted = c0(n - 1)? + Rational::sign_power(n - 1) * bracket(2 * n - 2, -1)?;
                Ok(&shift * &shift * c0(n)? - f * shifted)
            },
        },
        WarmUp {
            label: "D_1 = 1/4 + (2n-1)/4 [2n,n]",
            family: Family::D,
            m: 1,
            min_n: 1,
            eval: |n| Ok(Rational::frac(1, 4) + q(2 * n - 1) * bracket(2 * n, n)? / 4),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{oracle, MomentQuery};

    #[test]
    fn power_expansion_examples() {
        assert!(power_expansion_residual(0, &Rational::frac(3, 7), &Rational::from(2)).is_zero());
        assert!(power_expansion_residual(1, &Rational::from(2), &Rational::from(5)).is_zero());
        assert!(
            power_expansion_residual(3, &Rational::frac(7, 2), &Rational::frac(-2, 3)).is_zero()
        );
    }

    #[test]
    fn lambda_examples() {
        assert!(lambda_check(1, 3).unwrap().is_zero());
        assert!(lambda_check(4, 6).unwrap().is_zero());
        for n in 1..6 {
            assert_eq!(lambda_check(0, n).unwrap(), bracket(2 * n, n).unwrap());
        }
    }

    #[test]
    fn lambda_telescoping_pair() {
        for n in 1..=6 {
            for m in 1..=5usize {
                for l in 0..=m {
                    let lhs =
                        &lambda_series(l, n, m).unwrap() + &lambda_series(l + 1, n, m).unwrap();
                    assert_eq!(lhs, lambda_pair_sum(l, n, m).unwrap(), "l={l} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn bracket_inverse_spot() {
        let (lhs, rhs) = bracket_identity_sides(BracketIdentity::InverseLower, 3, 1).unwrap();
        assert_eq!(lhs, Rational::frac(-1, 9));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn warm_ups_match_oracle() {
        for w in warm_ups() {
            for n in w.min_n..=12 {
                let q = MomentQuery::new(w.family, w.m, n).unwrap();
                assert_eq!((w.eval)(n).unwrap(), oracle(&q), "{} at n={n}", w.label);
            }
        }
    }
}
