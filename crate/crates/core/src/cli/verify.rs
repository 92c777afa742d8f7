//! The invariant suite behind `moments verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::RunConfig;
use crate::conjecture::{rediscover_all, RediscoveryReport, SearchConfig};
use crate::exact::{bracket, Rational};
use crate::moments::corollaries::PrintedFormula;
use crate::moments::identities::{bracket_identity_sides, warm_ups, BracketIdentity};
use crate::moments::theorems::{self, CEvenSign, COddSigma, DOddSign, TheoremVariants};
use crate::moments::{
    closed_form, lambda_check, oracle, power_expansion_residual, Family, MomentQuery,
};
use crate::sigma::{sigma_explicit, sigma_monomial, sigma_series, SigmaError, SigmaQuery};

/// One failing case, enough to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub case: String,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    fn moment(q: &MomentQuery, lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness {
            family: Some(q.family),
            m: Some(q.m),
            n: Some(q.n),
            case: q.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    fn plain(case: String, lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness {
            family: None,
            m: None,
            n: None,
            case,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub witness: Option<Witness>,
}

impl Check {
    /// Fold per-case outcomes, kept in case order, into one check.
    fn from_cases(name: impl Into<String>, outcomes: Vec<Option<Witness>>) -> Self {
        let cases = outcomes.len();
        let witness = outcomes.into_iter().flatten().next();
        Check {
            name: name.into(),
            passed: witness.is_none(),
            cases,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadingWitness {
    pub m: u32,
    pub n: i64,
    pub oracle: String,
    pub chosen: String,
    pub rejected: String,
}

/// Evidence for one ambiguous reading of an `l`-sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadingEvidence {
    pub sum: String,
    pub chosen: String,
    pub rejected: String,
    pub cases: usize,
    pub chosen_matches_all: bool,
    pub rejected_mismatches: usize,
    pub witnesses: Vec<ReadingWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub all_passed: bool,
    pub checks: Vec<Check>,
    pub readings: Vec<ReadingEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rediscovery: Option<RediscoveryReport>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

const WITNESSES_PER_READING: usize = 3;

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::frac(rng.gen_range(-50..=50), rng.gen_range(1..=20))
}

fn selected(config: &RunConfig, f: Family) -> bool {
    config.families.contains(&f)
}

fn theorem_grid(config: &RunConfig, family: Family) -> Check {
    let cases: Vec<MomentQuery> = (0..=config.m_max)
        .flat_map(|m| (1..=config.n_max).map(move |n| MomentQuery { family, m, n }))
        .filter(|q| theorems::validity(q).is_ok())
        .collect();
    let outcomes = cases
        .par_iter()
        .map(|q| {
            let expect = oracle(q);
            match closed_form(q) {
                Ok(r) if r.value == expect => None,
                Ok(r) => Some(Witness::moment(q, r.value, expect)),
                Err(e) => Some(Witness::moment(q, e, expect)),
            }
        })
        .collect();
    Check::from_cases(format!("l-sum = brute force [{family}]"), outcomes)
}

fn vanishing_b(config: &RunConfig) -> Check {
    let cases: Vec<MomentQuery> = (1..=config.m_max / 2)
        .flat_map(|h| {
            (i64::from(h) + 1..=config.n_max).map(move |n| MomentQuery {
                family: Family::B,
                m: 2 * h,
                n,
            })
        })
        .collect();
    let outcomes = cases
        .par_iter()
        .map(|q| match closed_form(q) {
            Ok(r) if r.value.is_zero() && oracle(q).is_zero() => None,
            Ok(r) => Some(Witness::moment(q, r.value, 0)),
            Err(e) => Some(Witness::moment(q, e, 0)),
        })
        .collect();
    Check::from_cases("B_2h(n) = 0 for n > h", outcomes)
}

fn table_row(formula: &PrintedFormula, n_max: i64) -> Check {
    let outcomes = (formula.min_n.max(1)..=n_max)
        .into_par_iter()
        .map(|n| {
            let q = MomentQuery {
                family: formula.family,
                m: formula.m,
                n,
            };
            let expect = oracle(&q);
            match formula.eval(n) {
                Ok(v) if v == expect => None,
                Ok(v) => Some(Witness::moment(&q, v, expect)),
                Err(e) => Some(Witness::moment(&q, e, expect)),
            }
        })
        .collect();
    Check::from_cases(format!("table {}", formula.display()), outcomes)
}

fn warm_up_checks(config: &RunConfig) -> Vec<Check> {
    warm_ups()
        .into_iter()
        .filter(|w| selected(config, w.family))
        .map(|w| {
            let outcomes = (w.min_n..=config.n_max)
                .into_par_iter()
                .map(|n| {
                    let q = MomentQuery {
                        family: w.family,
                        m: w.m,
                        n,
                    };
                    let expect = oracle(&q);
                    match (w.eval)(n) {
                        Ok(v) if v == expect => None,
                        Ok(v) => Some(Witness::moment(&q, v, expect)),
                        Err(e) => Some(Witness::moment(&q, e, expect)),
                    }
                })
                .collect();
            Check::from_cases(format!("warm-up {}", w.label), outcomes)
        })
        .collect()
}

fn sigma_panel(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut ys: Vec<Rational> = (-3..=3).map(Rational::from).collect();
    ys.extend((-3..=2).map(|k| Rational::from(k) + Rational::half()));
    ys.extend((0..20).map(|_| random_rational(rng)));
    ys
}

fn sigma_checks(config: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let ys = sigma_panel(rng);
    let mut cases = Vec::new();
    for m in 0..=config.m_max as usize {
        for l in 0..=m {
            for y in &ys {
                cases.push(SigmaQuery::new(m, l, y.clone()).expect("l <= m"));
            }
        }
    }
    let mono: Vec<Option<Witness>> = cases
        .par_iter()
        .map(|q| {
            let a = sigma_series(q).expect("series extraction is total");
            let b = sigma_monomial(q);
            (a != b).then(|| Witness::plain(format!("sigma_{}_{}({})", q.m, q.l, q.y), a, b))
        })
        .collect();
    let explicit: Vec<Option<Witness>> = cases
        .par_iter()
        .filter_map(|q| match sigma_explicit(q) {
            Err(SigmaError::DenominatorPole { .. }) => None,
            Err(e) => Some(Some(Witness::plain(
                format!("sigma_{}_{}({})", q.m, q.l, q.y),
                e,
                "",
            ))),
            Ok(v) => {
                let s = sigma_series(q).expect("series extraction is total");
                Some(
                    (v != s)
                        .then(|| Witness::plain(format!("sigma_{}_{}({})", q.m, q.l, q.y), v, s)),
                )
            }
        })
        .collect();
    vec![
        Check::from_cases("sigma: series = monomial sum", mono),
        Check::from_cases("sigma: explicit = series off poles", explicit),
    ]
}

fn power_expansion_check(config: &RunConfig, rng: &mut ChaCha8Rng) -> Check {
    let mut cases = Vec::new();
    for m in 0..=config.m_max as usize {
        for _ in 0..50 {
            cases.push((m, random_rational(rng), random_rational(rng)));
        }
    }
    let outcomes = cases
        .par_iter()
        .map(|(m, x, y)| {
            let r = power_expansion_residual(*m, x, y);
            (!r.is_zero()).then(|| Witness::plain(format!("m={m} x={x} y={y}"), r, 0))
        })
        .collect();
    Check::from_cases("power expansion residual = 0", outcomes)
}

fn lambda_checks(config: &RunConfig) -> Vec<Check> {
    let cases: Vec<(usize, i64)> = (0..=config.m_max as usize)
        .flat_map(|m| (1..=config.n_max).map(move |n| (m, n)))
        .collect();
    let (zero, base): (Vec<_>, Vec<_>) = cases.into_iter().partition(|&(m, _)| m > 0);
    let run = |cases: Vec<(usize, i64)>| -> Vec<Option<Witness>> {
        cases
            .par_iter()
            .map(|&(m, n)| {
                let expect = if m == 0 {
                    bracket(2 * n, n).expect("integer bracket")
                } else {
                    Rational::zero()
                };
                match lambda_check(m, n) {
                    Ok(v) if v == expect => None,
                    Ok(v) => Some(Witness::plain(format!("Lambda({m},{n})"), v, expect)),
                    Err(e) => Some(Witness::plain(format!("Lambda({m},{n})"), e, expect)),
                }
            })
            .collect()
    };
    vec![
        Check::from_cases("Lambda(m, n) = 0 for m >= 1", run(zero)),
        Check::from_cases("Lambda(0, n) = [2n, n]", run(base)),
    ]
}

type Grid = Vec<(i64, i64)>;

fn bracket_checks(config: &RunConfig) -> Vec<Check> {
    let n_max = config.n_max;
    let grids: [(BracketIdentity, &str, Grid); 4] = [
        (
            BracketIdentity::Symmetry,
            "bracket symmetry [a, b] = [a, a-b]",
            (0..=2 * n_max)
                .flat_map(|a| (0..=a).map(move |b| (a, b)))
                .collect(),
        ),
        (
            BracketIdentity::Recurrence,
            "bracket recurrence",
            (1..=n_max)
                .flat_map(|n| (0..=n).map(move |k| (n, k)))
                .collect(),
        ),
        (
            BracketIdentity::InverseLower,
            "bracket inverse [2n-2l, -l]",
            (1..=n_max)
                .flat_map(|n| (0..=n).map(move |l| (n, l)))
                .collect(),
        ),
        (
            BracketIdentity::InverseLowerShifted,
            "bracket inverse [2n-2l, -l-1]",
            (1..=n_max)
                .flat_map(|n| (0..=n).map(move |l| (n, l)))
                .collect(),
        ),
    ];
    grids
        .into_iter()
        .map(|(which, name, cases)| {
            let outcomes = cases
                .par_iter()
                .map(|&(a, b)| match bracket_identity_sides(which, a, b) {
                    Ok((l, r)) if l == r => None,
                    Ok((l, r)) => Some(Witness::plain(format!("({a}, {b})"), l, r)),
                    Err(e) => Some(Witness::plain(format!("({a}, {b})"), e, "")),
                })
                .collect();
            Check::from_cases(name, outcomes)
        })
        .collect()
}

/// Query, brute-force value, chosen reading, rejected reading.
type ReadingRow = (
    MomentQuery,
    Rational,
    Option<Rational>,
    Result<Rational, String>,
);

fn reading(
    sum: &str,
    family: Family,
    odd: bool,
    chosen: (&str, TheoremVariants),
    rejected: (&str, TheoremVariants),
    config: &RunConfig,
) -> ReadingEvidence {
    let top = config.m_max.max(5);
    let cases: Vec<MomentQuery> = (1..=top)
        .filter(|m| m.is_multiple_of(2) != odd)
        .flat_map(|m| (1..=config.n_max.max(8)).map(move |n| MomentQuery { family, m, n }))
        .filter(|q| theorems::validity(q).is_ok())
        .collect();
    let rows: Vec<ReadingRow> = cases
        .par_iter()
        .map(|q| {
            let expect = oracle(q);
            let a = theorems::theorem_value(q, &chosen.1).ok();
            let b = theorems::theorem_value(q, &rejected.1).map_err(|e| e.to_string());
            (*q, expect, a, b)
        })
        .collect();
    let chosen_matches_all = rows.iter().all(|(_, o, a, _)| a.as_ref() == Some(o));
    let rejected_mismatches = rows
        .iter()
        .filter(|(_, o, _, b)| b.as_ref() != Ok(o))
        .count();
    let witnesses = rows
        .iter()
        .filter(|(_, o, a, b)| a.as_ref() == Some(o) && b.as_ref() != Ok(o))
        .take(WITNESSES_PER_READING)
        .map(|(q, o, a, b)| ReadingWitness {
            m: q.m,
            n: q.n,
            oracle: o.to_string(),
            chosen: a.as_ref().map(ToString::to_string).unwrap_or_default(),
            rejected: match b {
                Ok(v) => v.to_string(),
                Err(e) => e.clone(),
            },
        })
        .collect();
    ReadingEvidence {
        sum: sum.into(),
        chosen: chosen.0.into(),
        rejected: rejected.0.into(),
        cases: rows.len(),
        chosen_matches_all,
        rejected_mismatches,
        witnesses,
    }
}

fn readings(config: &RunConfig) -> Vec<ReadingEvidence> {
    let pinned = TheoremVariants::PINNED;
    vec![
        reading(
            "C, even power: sign of the l-sum",
            Family::C,
            false,
            ("single (-1)^n in front", pinned),
            (
                "(-1)^l on every term",
                TheoremVariants {
                    c_even_sign: CEvenSign::PerTerm,
                    ..pinned
                },
            ),
            config,
        ),
        reading(
            "C, odd power: argument of sigma",
            Family::C,
            true,
            ("sigma at n - 1/2", pinned),
            (
                "sigma at n",
                TheoremVariants {
                    c_odd_sigma: COddSigma::AtN,
                    ..pinned
                },
            ),
            config,
        ),
        reading(
            "D, odd power: placement of (-1)^l",
            Family::D,
            true,
            ("first term only", pinned),
            (
                "both terms",
                TheoremVariants {
                    d_odd_sign: DOddSign::BothTerms,
                    ..pinned
                },
            ),
            config,
        ),
    ]
}

/// Run every check for `config` against the formulas in `table`.
pub fn run_verify(config: &RunConfig, table: &[PrintedFormula], rediscover: bool) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = Vec::new();
    for family in Family::ALL {
        if selected(config, family) {
            checks.push(theorem_grid(config, family));
        }
    }
    if selected(config, Family::B) {
        checks.push(vanishing_b(config));
    }
    let mut rows: Vec<&PrintedFormula> = table
        .iter()
        .filter(|f| selected(config, f.family))
        .collect();
    rows.sort_by_key(|f| (f.family, f.m, f.min_n));
    checks.extend(rows.into_iter().map(|f| table_row(f, config.n_max)));
    checks.extend(warm_up_checks(config));
    checks.extend(sigma_checks(config, &mut rng));
    checks.push(power_expansion_check(config, &mut rng));
    checks.extend(lambda_checks(config));
    checks.extend(bracket_checks(config));

    let readings = readings(config);
    for r in &readings {
        let passed = r.chosen_matches_all && r.witnesses.len() >= 2;
        checks.push(Check {
            name: format!("reading {}: {}", r.sum, r.chosen),
            passed,
            cases: r.cases,
            witness: None,
        });
    }

    let rediscovery = rediscover.then(|| rediscover_all(&SearchConfig::default()));
    if let Some(report) = &rediscovery {
        let failure = report.failures().next().map(|e| {
            Witness::plain(
                e.label.clone(),
                e.found.clone().unwrap_or_else(|| e.status.clone()),
                &e.printed,
            )
        });
        checks.push(Check {
            name: "rediscovery of tabulated formulas".into(),
            passed: failure.is_none(),
            cases: report.entries.len(),
            witness: failure,
        });
    }

    VerifyReport {
        config: config.clone(),
        all_passed: checks.iter().all(|c| c.passed),
        checks,
        readings,
        rediscovery,
    }
}
