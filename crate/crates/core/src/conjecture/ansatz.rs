//! Ansatz shapes, exact fitting against oracle values, and structural
//! comparison of fitted candidates with tabulated formulas.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::linsolve::{solve_exact, SolveError};
use crate::exact::{ExactError, Rational};
use crate::moments::terms::{LinearForm, Prefactor, Term};
use crate::moments::{oracle, Family, MomentQuery};
use crate::series::Polynomial;

/// Fewest holdout points that can promote a fit to `Verified`.
pub const MIN_HOLDOUT: usize = 10;

/// One summand: `prefactor(n) * (c_0 + c_1 n + ... + c_d n^d) / prod roots(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AnsatzTerm {
    pub prefactor: Prefactor,
    pub numerator_degree: usize,
    pub denominator_roots: Vec<LinearForm>,
}

impl AnsatzTerm {
    pub fn new(
        prefactor: Prefactor,
        numerator_degree: usize,
        denominator_roots: Vec<LinearForm>,
    ) -> Self {
        AnsatzTerm {
            prefactor,
            numerator_degree,
            denominator_roots,
        }
    }

    fn unknowns(&self) -> usize {
        self.numerator_degree + 1
    }

    /// `prefactor(n) / prod roots(n)`, or `None` at a root.
    fn scale_at(&self, n: i64) -> Result<Option<Rational>, ExactError> {
        let mut den = Rational::one();
        for f in &self.denominator_roots {
            let v = f.eval(n);
            if v == 0 {
                return Ok(None);
            }
            den *= Rational::from(v);
        }
        Ok(Some(self.prefactor.eval(n)?.checked_div(&den)?))
    }
}

/// A sum of ansatz terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ansatz {
    pub terms: Vec<AnsatzTerm>,
}

impl Ansatz {
    pub fn new(terms: Vec<AnsatzTerm>) -> Self {
        Ansatz { terms }
    }

    pub fn unknowns(&self) -> usize {
        self.terms.iter().map(AnsatzTerm::unknowns).sum()
    }

    /// Smallest `n0` with no denominator root at any `n >= n0`.
    pub fn first_regular_n(&self) -> i64 {
        self.terms
            .iter()
            .flat_map(|t| &t.denominator_roots)
            .filter(|f| f.coeff != 0 && f.offset % f.coeff == 0)
            .map(|f| -f.offset / f.coeff + 1)
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Basis values at `n`, one per unknown; `None` at a denominator root.
    fn row(&self, n: i64) -> Result<Option<Vec<Rational>>, ExactError> {
        let x = Rational::from(n);
        let mut row = Vec::with_capacity(self.unknowns());
        for t in &self.terms {
            let Some(scale) = t.scale_at(n)? else {
                return Ok(None);
            };
            let mut power = scale;
            for _ in 0..t.unknowns() {
                row.push(power.clone());
                power *= &x;
            }
        }
        Ok(Some(row))
    }

    /// Attach coefficients, lowest degree first within each term.
    fn instantiate(&self, coefficients: &[Rational]) -> Vec<Term> {
        let mut rest = coefficients;
        self.terms
            .iter()
            .map(|t| {
                let (mine, tail) = rest.split_at(t.unknowns());
                rest = tail;
                Term::new(
                    t.prefactor,
                    Polynomial::new(mine.to_vec()),
                    t.denominator_roots.clone(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Ansatz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let den: Vec<String> = t
                    .denominator_roots
                    .iter()
                    .map(|d| format!("({d})"))
                    .collect();
                let den = if den.is_empty() {
                    String::new()
                } else {
                    format!(" / {}", den.join(""))
                };
                format!("{} * P{}(n){den}", t.prefactor, t.numerator_degree)
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitStatus {
    Verified,
    Refuted { first_mismatch: i64 },
    Underdetermined,
}

impl FitStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, FitStatus::Verified)
    }
}

impl fmt::Display for FitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitStatus::Verified => f.write_str("verified"),
            FitStatus::Refuted { first_mismatch } => write!(f, "refuted at n = {first_mismatch}"),
            FitStatus::Underdetermined => f.write_str("underdetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormCandidate {
    pub family: Family,
    pub m: u32,
    pub ansatz: Ansatz,
    pub coefficients: Vec<Rational>,
    pub terms: Vec<Term>,
    pub fitted_on: Vec<i64>,
    pub verified_on: Vec<i64>,
    #[serde(flatten)]
    pub status: FitStatus,
}

impl ClosedFormCandidate {
    pub fn eval(&self, n: i64) -> Result<Rational, ExactError> {
        self.terms.iter().map(|t| t.eval(n)).sum()
    }

    /// Plain-text rendering with zero terms dropped.
    pub fn formula(&self) -> String {
        let shown: Vec<String> = self
            .terms
            .iter()
            .filter(|t| !t.numerator.is_zero())
            .map(|t| t.to_string())
            .collect();
        let rhs = if shown.is_empty() {
            "0".to_string()
        } else {
            shown.join(" + ")
        };
        format!("{}_{}(n) = {rhs}", self.family, self.m)
    }

    /// Same function of `n` as `other`, compared prefactor by prefactor as
    /// rational functions.
    pub fn same_function_as(&self, other: &[Term]) -> bool {
        same_function(&self.terms, other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("ansatz is degenerate on these nodes: {0}")]
    SingularSystem(SolveError),
    #[error("n = {n} is a denominator root of the ansatz")]
    PoleAtNode { n: i64 },
    #[error("{samples} samples cannot fix {unknowns} unknowns")]
    TooFewSamples { samples: usize, unknowns: usize },
    #[error("n = {n} is both a fitting and a holdout node")]
    OverlappingNodes { n: i64 },
    #[error("no seeded shape for {family}_{m}(n)")]
    NoSeedShape { family: Family, m: u32 },
    #[error("n must be >= 1, got {n}")]
    InvalidNode { n: i64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Fit `ansatz` to the brute-force values of `family_m` on `sample_ns` and
/// check it on `holdout_ns`.
pub fn fit(
    family: Family,
    m: u32,
    ansatz: &Ansatz,
    sample_ns: &[i64],
    holdout_ns: &[i64],
) -> Result<ClosedFormCandidate, FitError> {
    let target = |n: i64| oracle(&MomentQuery { family, m, n });
    fit_with(&target, family, m, ansatz, sample_ns, holdout_ns)
}

/// As [`fit`] with caller-supplied target values, so a search can share one
/// table of oracle values across many shapes.
pub fn fit_with(
    target: &dyn Fn(i64) -> Rational,
    family: Family,
    m: u32,
    ansatz: &Ansatz,
    sample_ns: &[i64],
    holdout_ns: &[i64],
) -> Result<ClosedFormCandidate, FitError> {
    for &n in sample_ns.iter().chain(holdout_ns) {
        if n < 1 {
            return Err(FitError::InvalidNode { n });
        }
    }
    if let Some(&n) = holdout_ns.iter().find(|n| sample_ns.contains(n)) {
        return Err(FitError::OverlappingNodes { n });
    }
    let unknowns = ansatz.unknowns();
    if sample_ns.len() < unknowns {
        return Err(FitError::TooFewSamples {
            samples: sample_ns.len(),
            unknowns,
        });
    }

    let mut matrix = Vec::with_capacity(sample_ns.len());
    for &n in sample_ns {
        matrix.push(ansatz.row(n)?.ok_or(FitError::PoleAtNode { n })?);
    }
    for &n in holdout_ns {
        if ansatz.row(n)?.is_none() {
            return Err(FitError::PoleAtNode { n });
        }
    }
    let rhs: Vec<Rational> = sample_ns.iter().map(|&n| target(n)).collect();

    let (coefficients, sample_mismatch) = match solve_exact(&matrix, &rhs) {
        Ok(x) => (x, None),
        Err(SolveError::Inconsistent { .. }) => {
            // fit the leading square block, then report the first sample it misses
            let x = solve_exact(&matrix[..unknowns], &rhs[..unknowns])
                .map_err(FitError::SingularSystem)?;
            let miss = (unknowns..sample_ns.len())
                .find(|&i| dot(&matrix[i], &x) != rhs[i])
                .map(|i| sample_ns[i]);
            (x, miss)
        }
        Err(e) => return Err(FitError::SingularSystem(e)),
    };
    let terms = ansatz.instantiate(&coefficients);

    let mut candidate = ClosedFormCandidate {
        family,
        m,
        ansatz: ansatz.clone(),
        coefficients,
        terms,
        fitted_on: sample_ns.to_vec(),
        verified_on: Vec::new(),
        status: FitStatus::Underdetermined,
    };
    if let Some(n) = sample_mismatch {
        candidate.status = FitStatus::Refuted { first_mismatch: n };
        return Ok(candidate);
    }
    for &n in holdout_ns {
        if candidate.eval(n)? != target(n) {
            candidate.status = FitStatus::Refuted { first_mismatch: n };
            return Ok(candidate);
        }
        candidate.verified_on.push(n);
    }
    if candidate.verified_on.len() >= MIN_HOLDOUT {
        candidate.status = FitStatus::Verified;
    }
    Ok(candidate)
}

fn dot(row: &[Rational], x: &[Rational]) -> Rational {
    row.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// `(numerator, denominator)` of the sum of all terms sharing one prefactor;
/// powers of two are normalised to shift 0.
fn grouped(terms: &[Term]) -> BTreeMap<Prefactor, (Polynomial, Polynomial)> {
    let mut out: BTreeMap<Prefactor, (Polynomial, Polynomial)> = BTreeMap::new();
    for t in terms {
        let (key, num) = match t.prefactor {
            Prefactor::PowerOfTwo { shift } => (
                Prefactor::PowerOfTwo { shift: 0 },
                t.numerator
                    .scale(&Rational::from(2).pow(shift).expect("nonzero base")),
            ),
            other => (other, t.numerator.clone()),
        };
        let den = t.denominator_poly();
        let entry = out
            .entry(key)
            .or_insert_with(|| (Polynomial::zero(), Polynomial::one()));
        let combined = &(&entry.0 * &den) + &(&num * &entry.1);
        *entry = (combined, &entry.1 * &den);
    }
    out
}

/// Whether two term lists describe the same rational function per prefactor.
pub fn same_function(a: &[Term], b: &[Term]) -> bool {
    let ga = grouped(a);
    let gb = grouped(b);
    let zero = (Polynomial::zero(), Polynomial::one());
    ga.keys().chain(gb.keys()).all(|k| {
        let (na, da) = ga.get(k).unwrap_or(&zero);
        let (nb, db) = gb.get(k).unwrap_or(&zero);
        &(na * db) - &(nb * da) == Polynomial::zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(a: i64, b: i64) -> Vec<i64> {
        (a..=b).collect()
    }

    #[test]
    fn power_of_two_fit() {
        let ansatz = Ansatz::new(vec![AnsatzTerm::new(
            Prefactor::PowerOfTwo { shift: -2 },
            1,
            vec![],
        )]);
        let c = fit(Family::A, 2, &ansatz, &range(1, 4), &range(5, 14)).unwrap();
        assert_eq!(c.status, FitStatus::Verified);
        assert_eq!(c.coefficients, vec![Rational::zero(), Rational::one()]);
        assert_eq!(c.formula(), "A_2(n) = 2^(2n-2) * (n)");
    }

    #[test]
    fn short_holdout_is_underdetermined() {
        let ansatz = Ansatz::new(vec![AnsatzTerm::new(
            Prefactor::PowerOfTwo { shift: -2 },
            1,
            vec![],
        )]);
        let c = fit(Family::A, 2, &ansatz, &range(1, 4), &range(5, 10)).unwrap();
        assert_eq!(c.status, FitStatus::Underdetermined);
        assert_eq!(c.verified_on, range(5, 10));
    }

    #[test]
    fn odd_denominator_numerator() {
        let ansatz = Ansatz::new(vec![AnsatzTerm::new(
            Prefactor::CentralBinomial,
            3,
            LinearForm::odd_run(1, 3),
        )]);
        let c = fit(Family::B, 5, &ansatz, &range(2, 5), &range(6, 15)).unwrap();
        assert!(c.status.is_verified());
        // n^2 (4n - 1) / 2
        let expect = Polynomial::from_ints_desc(&[4, -1, 0, 0]).scale(&Rational::half());
        assert_eq!(c.terms[0].numerator, expect);
    }

    #[test]
    fn too_small_ansatz_is_refuted() {
        let ansatz = Ansatz::new(vec![AnsatzTerm::new(Prefactor::CentralBinomial, 1, vec![])]);
        let c = fit(Family::A, 2, &ansatz, &range(1, 3), &range(4, 13)).unwrap();
        assert_eq!(c.status, FitStatus::Refuted { first_mismatch: 3 });
    }

    #[test]
    fn node_errors() {
        let ansatz = Ansatz::new(vec![AnsatzTerm::new(
            Prefactor::Sign,
            0,
            LinearForm::integer_run(1),
        )]);
        assert_eq!(
            fit(Family::C, 1, &ansatz, &[1], &[]),
            Err(FitError::PoleAtNode { n: 1 })
        );
        assert_eq!(
            fit(Family::C, 1, &ansatz, &[2], &[2]),
            Err(FitError::OverlappingNodes { n: 2 })
        );
        assert!(matches!(
            fit(
                Family::C,
                1,
                &Ansatz::new(vec![AnsatzTerm::new(Prefactor::Unit, 3, vec![])]),
                &[2, 3],
                &[]
            ),
            Err(FitError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn comparison_normalises_powers_of_two_and_denominators() {
        let a = vec![Term::new(
            Prefactor::PowerOfTwo { shift: -2 },
            Polynomial::monomial(1),
            vec![],
        )];
        let b = vec![Term::new(
            Prefactor::PowerOfTwo { shift: -1 },
            Polynomial::from_ints_desc(&[1, -1, 0]).scale(&Rational::half()),
            vec![LinearForm::new(1, -1)],
        )];
        assert!(same_function(&a, &b));
        let c = vec![Term::new(
            Prefactor::CentralBinomial,
            Polynomial::monomial(1),
            vec![],
        )];
        assert!(!same_function(&a, &c));
        assert!(same_function(
            &[],
            &[Term::new(Prefactor::Sign, Polynomial::zero(), vec![])]
        ));
    }
}
