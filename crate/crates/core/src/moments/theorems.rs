//! Finite `l`-sums for the moment families, one per family and parity of the
//! power. Every sum uses `sigma_{h,l}` at `y = n` (binomial families) or
//! `y = n - 1/2` (bracket families), where `h` is the half power.
//!
//! Three of the sums admit two readings; each reading is
//! a [`TheoremVariants`] switch and [`TheoremVariants::PINNED`] holds the
//! readings that agree with brute-force summation.

use serde::Serialize;

use super::{Family, MomentError, MomentQuery};
use crate::exact::{binomial, binomial_int, bracket, central_binomial, falling, rising, Rational};
use crate::sigma::sigma_row;

/// Sign convention in the even-power bracket alternating sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CEvenSign {
    /// `(-1)^l` inside the sum.
    PerTerm,
    /// A single `(-1)^n` in front of the sum.
    Global,
}

/// Argument of `sigma` in the odd-power bracket alternating sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum COddSigma {
    AtN,
    AtNMinusHalf,
}

/// Where `(-1)^l` applies in the odd-power bracket positive sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DOddSign {
    /// Only on the central-bracket term.
    FirstTermOnly,
    /// On both terms.
    BothTerms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremVariants {
    pub c_even_sign: CEvenSign,
    pub c_odd_sigma: COddSigma,
    pub d_odd_sign: DOddSign,
}

impl TheoremVariants {
    pub const PINNED: TheoremVariants = TheoremVariants {
        c_even_sign: CEvenSign::Global,
        c_odd_sigma: COddSigma::AtNMinusHalf,
        d_odd_sign: DOddSign::FirstTermOnly,
    };

    pub const REJECTED: TheoremVariants = TheoremVariants {
        c_even_sign: CEvenSign::PerTerm,
        c_odd_sigma: COddSigma::AtN,
        d_odd_sign: DOddSign::FirstTermOnly,
    };
}

impl Default for TheoremVariants {
    fn default() -> Self {
        Self::PINNED
    }
}

/// Which of the two printed forms of a two-form sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrintedForm {
    First,
    Second,
}

/// Domain restriction of the `l`-sum for a query, if any.
pub fn validity(q: &MomentQuery) -> Result<Option<String>, MomentError> {
    let h = q.half() as i64;
    let even = q.m.is_multiple_of(2);
    match (q.family, even) {
        (Family::D, true) => Err(MomentError::NoClosedFormKnown {
            family: q.family,
            m: q.m,
        }),
        (_, true) if q.m == 0 => Err(MomentError::PreconditionViolated {
            query: *q,
            condition: "even-power sum needs power >= 2".into(),
        }),
        (_, true) => Ok(Some("even power >= 2".into())),
        (Family::C, false) if q.n <= h + 1 => Err(MomentError::PreconditionViolated {
            query: *q,
            condition: format!("n > {} required", h + 1),
        }),
        (Family::C, false) => Ok(Some(format!("valid for n > {}", h + 1))),
        _ => Ok(None),
    }
}

/// Evaluate the `l`-sum for `q` under the given readings.
pub fn theorem_value(q: &MomentQuery, variants: &TheoremVariants) -> Result<Rational, MomentError> {
    validity(q)?;
    let h = q.half();
    let n = q.n;
    let value = match (q.family, q.m.is_multiple_of(2)) {
        (Family::A, true) => a_even(h, n)?,
        (Family::A, false) => a_odd(h, n)?,
        (Family::B, true) => b_even(h, n)?,
        (Family::B, false) => b_odd(h, n)?,
        (Family::C, true) => c_even(h, n, variants.c_even_sign, PrintedForm::First)?,
        (Family::C, false) => c_odd(h, n, variants.c_odd_sigma, PrintedForm::First)?,
        (Family::D, false) => d_odd(h, n, variants.d_odd_sign)?,
        (Family::D, true) => unreachable!("rejected by validity"),
    };
    Ok(value)
}

fn nq(n: i64) -> Rational {
    Rational::from(n)
}

fn half_shift(n: i64) -> Rational {
    nq(n) - Rational::half()
}

/// `<2n - 1/2>_{2l}`
fn bracket_falling(n: i64, l: i64) -> Rational {
    falling(&(nq(2 * n) - Rational::half()), 2 * l).expect("nonnegative index")
}

pub fn a_even(h: usize, n: i64) -> Result<Rational, MomentError> {
    let sig = sigma_row(h, &nq(n));
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        let pow = Rational::from(2).pow(2 * n - 2 * l - 1)?;
        sum += Rational::sign_power(l) * pow * falling(&nq(2 * n), 2 * l)? * s;
    }
    Ok(sum)
}

pub fn a_odd(h: usize, n: i64) -> Result<Rational, MomentError> {
    let sig = sigma_row(h, &nq(n));
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        sum += Rational::sign_power(l) * falling(&nq(n), l)? * falling(&nq(n), l + 1)? * s;
    }
    Ok(central_binomial(n)? * Rational::half() * sum)
}

pub fn b_even(h: usize, n: i64) -> Result<Rational, MomentError> {
    let sig = sigma_row(h, &nq(n));
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        sum += falling(&nq(2 * n), 2 * l)? * binomial_int(l, 2 * n - l) * s;
    }
    Ok(Rational::sign_power(n - 1) * Rational::half() * sum)
}

pub fn b_odd(h: usize, n: i64) -> Result<Rational, MomentError> {
    let sig = sigma_row(h, &nq(n));
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        let inner = binomial(&nq(2 * n - 2 * l - 2), n - l - 1);
        sum += Rational::sign_power(l) * falling(&nq(2 * n), 2 * l)? * inner * s;
    }
    Ok(sum)
}

pub fn c_even(
    h: usize,
    n: i64,
    sign: CEvenSign,
    form: PrintedForm,
) -> Result<Rational, MomentError> {
    let sig = sigma_row(h, &half_shift(n));
    let half = Rational::half();
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        let body = match form {
            PrintedForm::First => {
                let ratio = Rational::frac(4 * n - 2 * l + 1, 4 * n - 4 * l - 2);
                ratio * bracket_falling(n, l).checked_div(&bracket(2 * n - l + 1, l + 1)?)?
            }
            PrintedForm::Second => {
                rising(&half, l)? * rising(&half, l + 1)? * bracket(2 * n, l)?
                    / Rational::from(2 * n - 2 * l - 1)
            }
        };
        let term = body * s;
        sum += match sign {
            CEvenSign::PerTerm => Rational::sign_power(l) * term,
            CEvenSign::Global => term,
        };
    }
    Ok(match sign {
        CEvenSign::PerTerm => sum,
        CEvenSign::Global => Rational::sign_power(n) * sum,
    })
}

/// Requires `n > h + 1`; callers go through [`validity`].
pub fn c_odd(
    h: usize,
    n: i64,
    sigma_at: COddSigma,
    form: PrintedForm,
) -> Result<Rational, MomentError> {
    let y = match sigma_at {
        COddSigma::AtN => nq(n),
        COddSigma::AtNMinusHalf => half_shift(n),
    };
    let sig = sigma_row(h, &y);
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        let pole = Rational::from(n - l - 1);
        let central =
            Rational::from(2 * n - 2 * l - 1).checked_div(&pole)? * bracket(2 * n - 2 * l, n - l)?;
        let weight = Rational::from((1 + 2 * n) * (1 + 2 * l)).checked_div(&pole)?;
        let boundary = match form {
            PrintedForm::First => Rational::sign_power(n) * weight * bracket(2 * n - 2 * l, -l)?,
            PrintedForm::Second => {
                Rational::sign_power(n + l) * weight.checked_div(&bracket(2 * n - l, l)?)?
            }
        };
        sum += Rational::sign_power(l) * bracket_falling(n, l) * (central + boundary) * s;
    }
    Ok(sum / 8)
}

pub fn d_odd(h: usize, n: i64, sign: DOddSign) -> Result<Rational, MomentError> {
    let sig = sigma_row(h, &half_shift(n));
    let mut sum = Rational::zero();
    for (l, s) in sig.iter().enumerate() {
        let l = l as i64;
        let central = Rational::sign_power(l)
            * Rational::frac(2 * n - 2 * l - 1, 4)
            * bracket(2 * n - 2 * l, n - l)?;
        let mut boundary = Rational::frac(1 + 2 * l, 4).checked_div(&bracket(2 * n - l, l)?)?;
        if sign == DOddSign::BothTerms {
            boundary = Rational::sign_power(l) * boundary;
        }
        sum += bracket_falling(n, l) * (central + boundary) * s;
    }
    Ok(sum)
}
