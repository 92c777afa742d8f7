//! The four moment families
//!
//! ```text
//! A_m(n) = sum_{k=1}^{n}            binom(2n, n-k) k^m
//! B_m(n) = sum_{k=1}^{n} (-1)^{k-1} binom(2n, n-k) k^m
//! C_m(n) = sum_{k=1}^{n} (-1)^{k-1} [2n, n-k]      k^m
//! D_m(n) = sum_{k=1}^{n}            [2n, n-k]      k^m
//! ```
//!
//! evaluated three ways: brute-force summation ([`oracle`]), the finite
//! `l`-sums over `sigma` ([`closed_form`]), and the tabulated polynomial
//! closed forms ([`corollary_value`]).

pub mod corollaries;
pub mod identities;
pub mod terms;
pub mod theorems;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{binomial_int, bracket, ExactError, Rational};

pub use corollaries::{corollary_value, printed_formulas, PrintedFormula};
pub use identities::{lambda_check, power_expansion_residual};
pub use theorems::TheoremVariants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];

    /// `(-1)^{k-1}` weighting.
    pub fn alternating(self) -> bool {
        matches!(self, Family::B | Family::C)
    }

    /// Half-integer bracket weights instead of binomial coefficients.
    pub fn uses_bracket(self) -> bool {
        matches!(self, Family::C | Family::D)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(format!("unknown family {other:?} (expected A, B, C or D)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Theorem,
    Corollary,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Theorem => "theorem",
            Method::Corollary => "corollary",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "oracle" => Ok(Method::Oracle),
            "theorem" => Ok(Method::Theorem),
            "corollary" => Ok(Method::Corollary),
            other => Err(format!(
                "unknown method {other:?} (expected oracle, theorem or corollary)"
            )),
        }
    }
}

/// A single moment `family_m(n)`; `m` is the full power of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MomentQuery {
    pub family: Family,
    pub m: u32,
    pub n: i64,
}

impl MomentQuery {
    pub fn new(family: Family, m: u32, n: i64) -> Result<Self, MomentError> {
        if n < 1 {
            return Err(MomentError::InvalidQuery(format!(
                "n must be >= 1, got {n}"
            )));
        }
        Ok(MomentQuery { family, m, n })
    }

    /// `floor(m / 2)`: the index of `sigma_{h,l}` used by the `l`-sums.
    pub fn half(&self) -> usize {
        (self.m / 2) as usize
    }
}

impl fmt::Display for MomentQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}({})", self.family, self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalResult {
    pub value: Rational,
    pub method: Method,
    pub validity_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("no closed form is known for {family}_{m}(n): even powers of the positive bracket sum are an open problem")]
    NoClosedFormKnown { family: Family, m: u32 },
    #[error("precondition violated for {query}: {condition}")]
    PreconditionViolated {
        query: MomentQuery,
        condition: String,
    },
    #[error("no tabulated closed form for {family}_{m}(n)")]
    NotTabulated { family: Family, m: u32 },
    #[error("{family}_{m}(n) is only tabulated for {condition}, got n = {n}")]
    GuardViolated {
        family: Family,
        m: u32,
        condition: String,
        n: i64,
    },
    #[error("printed forms disagree at {query}: {first} vs {second}")]
    FormsDisagree {
        query: MomentQuery,
        first: Box<Rational>,
        second: Box<Rational>,
    },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Weight of `k^m` in the defining sum.
pub fn weight(family: Family, n: i64, k: i64) -> Rational {
    let w = if family.uses_bracket() {
        bracket(2 * n, n - k).expect("bracket has no poles at integer arguments")
    } else {
        binomial_int(2 * n, n - k)
    };
    if family.alternating() {
        Rational::sign_power(k - 1) * w
    } else {
        w
    }
}

/// Direct summation over `k = 1..=n`.
pub fn oracle(q: &MomentQuery) -> Rational {
    (1..=q.n)
        .map(|k| weight(q.family, q.n, k) * Rational::from(k).pow(i64::from(q.m)).unwrap())
        .sum()
}

/// Closed `l`-sum evaluation with the pinned readings. For sums printed in
/// two forms both are evaluated and must agree.
pub fn closed_form(q: &MomentQuery) -> Result<EvalResult, MomentError> {
    let validity_note = theorems::validity(q)?;
    let pinned = TheoremVariants::PINNED;
    let value = theorems::theorem_value(q, &pinned)?;
    let second = match (q.family, q.m.is_multiple_of(2)) {
        (Family::C, true) => Some(theorems::c_even(
            q.half(),
            q.n,
            pinned.c_even_sign,
            theorems::PrintedForm::Second,
        )?),
        (Family::C, false) => Some(theorems::c_odd(
            q.half(),
            q.n,
            pinned.c_odd_sigma,
            theorems::PrintedForm::Second,
        )?),
        _ => None,
    };
    if let Some(second) = second {
        if second != value {
            return Err(MomentError::FormsDisagree {
                query: *q,
                first: Box::new(value),
                second: Box::new(second),
            });
        }
    }
    Ok(EvalResult {
        value,
        method: Method::Theorem,
        validity_note,
    })
}

/// Dispatch on `method`.
pub fn evaluate(q: &MomentQuery, method: Method) -> Result<EvalResult, MomentError> {
    match method {
        Method::Oracle => Ok(EvalResult {
            value: oracle(q),
            method,
            validity_note: None,
        }),
        Method::Theorem => closed_form(q),
        Method::Corollary => corollary_value(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(f: Family, m: u32, n: i64) -> MomentQuery {
        MomentQuery::new(f, m, n).unwrap()
    }

    #[test]
    fn oracle_examples() {
        // 4*1 + 1*2
        assert_eq!(oracle(&query(Family::A, 1, 2)), Rational::from(6));
        // 7*1 - 1*4
        assert_eq!(oracle(&query(Family::C, 2, 2)), Rational::from(3));
        // 7*1 + 1*2
        assert_eq!(oracle(&query(Family::D, 1, 2)), Rational::from(9));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            closed_form(&query(Family::A, 4, 2)).unwrap().value,
            Rational::from(20)
        );
        assert_eq!(
            closed_form(&query(Family::B, 6, 5)).unwrap().value,
            Rational::zero()
        );
        let c = query(Family::C, 1, 2);
        assert_eq!(closed_form(&c).unwrap().value, oracle(&c));
        let note = closed_form(&query(Family::C, 5, 9)).unwrap().validity_note;
        assert_eq!(note.as_deref(), Some("valid for n > 3"));
    }

    #[test]
    fn rejects_nonpositive_n() {
        assert!(MomentQuery::new(Family::A, 1, 0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("E".parse::<Family>().is_err());
        assert_eq!("corollary".parse::<Method>().unwrap(), Method::Corollary);
    }
}
