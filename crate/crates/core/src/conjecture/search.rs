//! Shape catalogue, degree trimming, rediscovery of the tabulated formulas and
//! the open search over even powers of the positive bracket sum.

use rayon::prelude::*;
use serde::Serialize;

use super::ansatz::{
    fit_with, Ansatz, AnsatzTerm, ClosedFormCandidate, FitError, FitStatus, MIN_HOLDOUT,
};
use crate::exact::Rational;
use crate::moments::corollaries::FormulaBody;
use crate::moments::terms::{LinearForm, Prefactor};
use crate::moments::{oracle, printed_formulas, Family, MomentQuery};

/// Which denominator a D-even shape uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DenominatorPattern {
    None,
    /// `(2n-1)(2n-3)...`, `h + 1` factors
    OddRun,
    /// `(n-1)(n-2)...`, `h + 1` factors
    IntegerRun,
}

impl DenominatorPattern {
    pub const ALL: [DenominatorPattern; 3] = [
        DenominatorPattern::None,
        DenominatorPattern::OddRun,
        DenominatorPattern::IntegerRun,
    ];

    fn roots(self, h: usize) -> Vec<LinearForm> {
        match self {
            DenominatorPattern::None => vec![],
            DenominatorPattern::OddRun => LinearForm::odd_run(1, h + 1),
            DenominatorPattern::IntegerRun => LinearForm::integer_run(h + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Holdout points per fit; below [`MIN_HOLDOUT`] nothing verifies.
    pub holdout: usize,
    /// Per-term numerator degree cap; `None` picks `3h + 3`.
    pub max_degree: Option<usize>,
    /// Largest `n` any fit may touch.
    pub n_max: i64,
    pub max_terms: usize,
    /// Prefactors combined by the open search.
    pub prefactors: Vec<Prefactor>,
    pub denominators: Vec<DenominatorPattern>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            holdout: MIN_HOLDOUT,
            max_degree: None,
            n_max: 40,
            max_terms: 3,
            prefactors: vec![
                Prefactor::CentralBinomial,
                Prefactor::Bracket,
                Prefactor::PowerOfTwo { shift: 0 },
                Prefactor::Sign,
                Prefactor::Unit,
            ],
            denominators: DenominatorPattern::ALL.to_vec(),
        }
    }
}

impl SearchConfig {
    fn degree_cap(&self, h: usize) -> usize {
        self.max_degree.unwrap_or(3 * h + 3)
    }
}

/// Prefactors and denominators of the shape seeded for `(family, m)`; `None`
/// for even powers of `D`, which have no seed.
pub fn seeded_shape(family: Family, m: u32) -> Option<Vec<(Prefactor, Vec<LinearForm>)>> {
    use Prefactor::*;
    let h = (m / 2) as usize;
    let even = m.is_multiple_of(2);
    Some(match (family, even) {
        (Family::A, true) => vec![
            (
                PowerOfTwo {
                    shift: -(h as i64) - 1,
                },
                vec![],
            ),
            (CentralBinomial, vec![]),
        ],
        (Family::A, false) => vec![(CentralBinomial, vec![])],
        (Family::B, true) => vec![(CentralBinomial, vec![]), (Unit, vec![])],
        (Family::B, false) => vec![(CentralBinomial, LinearForm::odd_run(1, h + 1))],
        (Family::C, true) => {
            let roots = if h == 0 {
                LinearForm::odd_run(1, 1)
            } else {
                LinearForm::odd_run(3, h)
            };
            vec![(Bracket, roots.clone()), (Sign, roots)]
        }
        (Family::C, false) => {
            let roots = LinearForm::integer_run(h + 1);
            vec![(Sign, roots.clone()), (Bracket, roots)]
        }
        (Family::D, false) => vec![(Bracket, vec![]), (Unit, vec![])],
        (Family::D, true) => return None,
    })
}

fn ansatz_from(shape: &[(Prefactor, Vec<LinearForm>)], degrees: &[usize]) -> Ansatz {
    Ansatz::new(
        shape
            .iter()
            .zip(degrees)
            .map(|((p, roots), &d)| AnsatzTerm::new(*p, d, roots.clone()))
            .collect(),
    )
}

/// Oracle values for `n = 1..=n_max`, shared by every fit of one search.
struct Targets(Vec<Rational>);

impl Targets {
    fn new(family: Family, m: u32, n_max: i64) -> Self {
        Targets(
            (1..=n_max)
                .into_par_iter()
                .map(|n| oracle(&MomentQuery { family, m, n }))
                .collect(),
        )
    }

    fn get(&self, n: i64) -> Rational {
        self.0[(n - 1) as usize].clone()
    }
}

fn nodes(start: i64, unknowns: usize, holdout: usize) -> (Vec<i64>, Vec<i64>) {
    let split = start + unknowns as i64;
    (
        (start..split).collect(),
        (split..split + holdout as i64).collect(),
    )
}

/// Fit `ansatz` on consecutive nodes from `start`, trim every numerator to
/// its true degree, and refit the trimmed shape on fresh nodes.
fn fit_and_trim(
    targets: &Targets,
    family: Family,
    m: u32,
    ansatz: &Ansatz,
    start: i64,
    holdout: usize,
) -> Result<ClosedFormCandidate, FitError> {
    let target = |n: i64| targets.get(n);
    let (samples, held) = nodes(start, ansatz.unknowns(), holdout);
    let full = fit_with(&target, family, m, ansatz, &samples, &held)?;
    if !full.status.is_verified() {
        return Ok(full);
    }
    let trimmed = Ansatz::new(
        full.ansatz
            .terms
            .iter()
            .zip(&full.terms)
            .filter_map(|(shape, fitted)| {
                fitted
                    .numerator
                    .degree()
                    .map(|d| AnsatzTerm::new(shape.prefactor, d, shape.denominator_roots.clone()))
            })
            .collect(),
    );
    if trimmed == full.ansatz {
        return Ok(full);
    }
    let (samples, held) = nodes(start, trimmed.unknowns(), holdout);
    fit_with(&target, family, m, &trimmed, &samples, &held)
}

fn first_node(m: u32, ansatz: &Ansatz) -> i64 {
    (i64::from(m / 2) + 2).max(ansatz.first_regular_n())
}

/// Fit the seeded shape of `(family, m)` at the degree caps and trim.
pub fn search(
    family: Family,
    m: u32,
    config: &SearchConfig,
) -> Result<ClosedFormCandidate, FitError> {
    let shape = seeded_shape(family, m).ok_or(FitError::NoSeedShape { family, m })?;
    let cap = config.degree_cap((m / 2) as usize);
    let ansatz = ansatz_from(&shape, &vec![cap; shape.len()]);
    let start = first_node(m, &ansatz);
    let top = start + (ansatz.unknowns() + config.holdout) as i64;
    let targets = Targets::new(family, m, top.max(config.n_max));
    fit_and_trim(&targets, family, m, &ansatz, start, config.holdout)
}

/// Outcome of rediscovering one tabulated formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RediscoveryEntry {
    pub label: String,
    pub family: Family,
    pub m: u32,
    pub printed: String,
    pub found: Option<String>,
    pub status: String,
    /// Holdout count of the final fit.
    pub holdout: usize,
    pub matches_printed: bool,
    pub error: Option<String>,
}

impl RediscoveryEntry {
    pub fn ok(&self) -> bool {
        self.matches_printed && self.holdout >= MIN_HOLDOUT && self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RediscoveryReport {
    pub entries: Vec<RediscoveryEntry>,
}

impl RediscoveryReport {
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(RediscoveryEntry::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RediscoveryEntry> {
        self.entries.iter().filter(|e| !e.ok())
    }
}

/// Re-derive every tabulated formula from brute-force values alone and
/// compare it with the printed coefficients. The `n = 1` indicator for the
/// second alternating binomial moment is not an ansatz shape and is covered
/// by the vanishing formula for `n > 1`.
pub fn rediscover_all(config: &SearchConfig) -> RediscoveryReport {
    let formulas: Vec<_> = printed_formulas()
        .iter()
        .filter(|f| matches!(f.body, FormulaBody::Terms(_)))
        .collect();
    let entries = formulas
        .par_iter()
        .map(|f| {
            let FormulaBody::Terms(printed_terms) = &f.body else {
                unreachable!("filtered above")
            };
            let mut entry = RediscoveryEntry {
                label: f.label(),
                family: f.family,
                m: f.m,
                printed: f.display(),
                found: None,
                status: String::new(),
                holdout: 0,
                matches_printed: false,
                error: None,
            };
            match search(f.family, f.m, config) {
                Ok(c) => {
                    entry.status = c.status.to_string();
                    entry.holdout = c.verified_on.len();
                    entry.matches_printed =
                        c.status.is_verified() && c.same_function_as(printed_terms);
                    entry.found = Some(c.formula());
                }
                Err(e) => {
                    entry.status = "error".into();
                    entry.error = Some(e.to_string());
                }
            }
            entry
        })
        .collect();
    RediscoveryReport { entries }
}

fn subsets<T: Clone>(items: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![vec![]];
    for item in items {
        let grown: Vec<Vec<T>> = out
            .iter()
            .filter(|s| s.len() < max_len)
            .map(|s| {
                let mut s = s.clone();
                s.push(item.clone());
                s
            })
            .collect();
        out.extend(grown);
    }
    out.retain(|s| !s.is_empty());
    out.sort_by_key(Vec::len);
    out
}

/// Search the catalogue for a closed form of `D_{2h}(n)`. Every shape is
/// fitted at the largest degrees the `n` budget allows; the result lists
/// every fitted shape with its honest status, verified ones first.
pub fn explore_d_even(h: u32, config: &SearchConfig) -> Vec<ClosedFormCandidate> {
    let m = 2 * h;
    let hh = h as usize;
    let mut shapes = Vec::new();
    for pattern in &config.denominators {
        for subset in subsets(&config.prefactors, config.max_terms) {
            let shape: Vec<(Prefactor, Vec<LinearForm>)> =
                subset.into_iter().map(|p| (p, pattern.roots(hh))).collect();
            shapes.push(shape);
        }
    }
    if shapes.is_empty() {
        return Vec::new();
    }

    let targets = Targets::new(Family::D, m, config.n_max.max(1));
    let mut found: Vec<ClosedFormCandidate> = shapes
        .par_iter()
        .filter_map(|shape| {
            let probe = ansatz_from(shape, &vec![0; shape.len()]);
            let start = first_node(m, &probe);
            let budget = config.n_max - start + 1 - config.holdout as i64;
            let per_term = budget / shape.len() as i64 - 1;
            if per_term < 0 {
                return None;
            }
            let cap = config.degree_cap(hh).min(per_term as usize);
            let ansatz = ansatz_from(shape, &vec![cap; shape.len()]);
            fit_and_trim(&targets, Family::D, m, &ansatz, start, config.holdout).ok()
        })
        .collect();
    found.sort_by_key(|c| !c.status.is_verified());
    found
}

/// Summary counts for a D-even exploration.
pub fn status_counts(candidates: &[ClosedFormCandidate]) -> (usize, usize, usize) {
    candidates
        .iter()
        .fold((0, 0, 0), |(v, r, u), c| match c.status {
            FitStatus::Verified => (v + 1, r, u),
            FitStatus::Refuted { .. } => (v, r + 1, u),
            FitStatus::Underdetermined => (v, r, u + 1),
        })
}
