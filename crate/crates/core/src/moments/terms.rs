//! Building blocks shared by the printed formula table and the ansatz fitter:
//! a closed form is a sum of `prefactor(n) * P(n) / prod (a n + b)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{bracket, central_binomial, ExactError, Rational};
use crate::series::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prefactor {
    /// `binom(2n, n)`
    CentralBinomial,
    /// `[2n, n]`
    Bracket,
    /// `2^{2n + shift}`
    PowerOfTwo {
        shift: i64,
    },
    /// `(-1)^n`
    Sign,
    Unit,
}

impl Prefactor {
    pub fn eval(&self, n: i64) -> Result<Rational, ExactError> {
        match *self {
            Prefactor::CentralBinomial => central_binomial(n),
            Prefactor::Bracket => bracket(2 * n, n),
            Prefactor::PowerOfTwo { shift } => Rational::from(2).pow(2 * n + shift),
            Prefactor::Sign => Ok(Rational::sign_power(n)),
            Prefactor::Unit => Ok(Rational::one()),
        }
    }

    pub fn latex(&self) -> String {
        match *self {
            Prefactor::CentralBinomial => "\\binom{2n}{n}".into(),
            Prefactor::Bracket => "\\left[{2n \\atop n}\\right]".into(),
            Prefactor::PowerOfTwo { shift } => format!("2^{{{}}}", LinearForm::new(2, shift)),
            Prefactor::Sign => "(-1)^n".into(),
            Prefactor::Unit => String::new(),
        }
    }
}

impl fmt::Display for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Prefactor::CentralBinomial => f.write_str("binom(2n,n)"),
            Prefactor::Bracket => f.write_str("[2n,n]"),
            Prefactor::PowerOfTwo { shift } => write!(f, "2^({})", LinearForm::new(2, shift)),
            Prefactor::Sign => f.write_str("(-1)^n"),
            Prefactor::Unit => f.write_str("1"),
        }
    }
}

/// `coeff * n + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearForm {
    pub coeff: i64,
    pub offset: i64,
}

impl LinearForm {
    pub const fn new(coeff: i64, offset: i64) -> Self {
        LinearForm { coeff, offset }
    }

    pub fn eval(&self, n: i64) -> i64 {
        self.coeff * n + self.offset
    }

    pub fn to_poly(self) -> Polynomial {
        Polynomial::linear(self.coeff, self.offset)
    }

    /// `(2n - first)(2n - first - 2)...`, `count` factors.
    pub fn odd_run(first: i64, count: usize) -> Vec<LinearForm> {
        (0..count as i64)
            .map(|j| LinearForm::new(2, -(first + 2 * j)))
            .collect()
    }

    /// `(n-1)(n-2)...(n-count)`.
    pub fn integer_run(count: usize) -> Vec<LinearForm> {
        (1..=count as i64).map(|j| LinearForm::new(1, -j)).collect()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coeff {
            0 => return write!(f, "{}", self.offset),
            1 => f.write_str("n")?,
            -1 => f.write_str("-n")?,
            c => write!(f, "{c}n")?,
        }
        match self.offset {
            0 => Ok(()),
            b if b < 0 => write!(f, "-{}", -b),
            b => write!(f, "+{b}"),
        }
    }
}

/// `prefactor(n) * numerator(n) / prod denominator(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub prefactor: Prefactor,
    #[serde(with = "poly_serde")]
    pub numerator: Polynomial,
    pub denominator: Vec<LinearForm>,
}

impl Term {
    pub fn new(prefactor: Prefactor, numerator: Polynomial, denominator: Vec<LinearForm>) -> Self {
        Term {
            prefactor,
            numerator,
            denominator,
        }
    }

    pub fn eval(&self, n: i64) -> Result<Rational, ExactError> {
        let den: Rational = self
            .denominator
            .iter()
            .map(|f| Rational::from(f.eval(n)))
            .product();
        let num = self.prefactor.eval(n)? * self.numerator.eval(&Rational::from(n));
        num.checked_div(&den)
    }

    pub fn denominator_poly(&self) -> Polynomial {
        self.denominator
            .iter()
            .fold(Polynomial::one(), |acc, f| &acc * &f.to_poly())
    }

    /// Smallest `n0` such that no denominator factor vanishes for `n >= n0`.
    pub fn first_regular_n(&self) -> i64 {
        self.denominator
            .iter()
            .filter(|f| f.coeff != 0 && f.offset % f.coeff == 0)
            .map(|f| -f.offset / f.coeff + 1)
            .max()
            .unwrap_or(i64::MIN)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if self.prefactor != Prefactor::Unit {
            s.push_str(&format!("{} * ", self.prefactor));
        }
        s.push_str(&format!("({})", self.numerator.display_in("n")));
        if !self.denominator.is_empty() {
            let den: Vec<String> = self.denominator.iter().map(|d| format!("({d})")).collect();
            s.push_str(&format!(" / ({})", den.join("*")));
        }
        f.write_str(&s)
    }
}

pub fn eval_terms(terms: &[Term], n: i64) -> Result<Rational, ExactError> {
    terms.iter().map(|t| t.eval(n)).sum()
}

/// Polynomials serialize as lowest-first coefficient strings.
pub mod poly_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::Rational;
    use crate::series::Polynomial;

    pub fn serialize<S: Serializer>(p: &Polynomial, s: S) -> Result<S::Ok, S::Error> {
        p.coeffs().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Polynomial, D::Error> {
        Ok(Polynomial::new(Vec::<Rational>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactor_values() {
        assert_eq!(
            Prefactor::CentralBinomial.eval(3).unwrap(),
            Rational::from(20)
        );
        assert_eq!(Prefactor::Bracket.eval(2).unwrap(), Rational::frac(35, 3));
        assert_eq!(
            Prefactor::PowerOfTwo { shift: -3 }.eval(1).unwrap(),
            Rational::frac(1, 2)
        );
        assert_eq!(Prefactor::Sign.eval(3).unwrap(), Rational::from(-1));
    }

    #[test]
    fn linear_form_runs() {
        let odd = LinearForm::odd_run(1, 3);
        assert_eq!(
            odd.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            ["2n-1", "2n-3", "2n-5"]
        );
        assert_eq!(LinearForm::integer_run(2)[1].to_string(), "n-2");
    }

    #[test]
    fn term_eval_and_poles() {
        let t = Term::new(
            Prefactor::Sign,
            Polynomial::linear(2, 1),
            LinearForm::integer_run(1),
        );
        assert_eq!(t.eval(3).unwrap(), Rational::frac(-7, 2));
        assert_eq!(t.eval(1), Err(ExactError::DivisionByZero));
        assert_eq!(t.first_regular_n(), 2);
    }
}
