//! Hard-coded closed forms for small powers, stored structurally so that the
//! same data drives evaluation, table rendering and coefficient comparison in
//! the ansatz fitter.
//!
//! Each numerator has the printed constant factor folded in, e.g.
//! `n^2 (4n-1) / (2 (2n-1)(2n-3)(2n-5))` is stored as numerator
//! `(4n^3 - n^2) / 2` over the three odd linear factors.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::terms::{eval_terms, LinearForm, Prefactor, Term};
use super::{EvalResult, Family, Method, MomentError, MomentQuery};
use crate::exact::Rational;
use crate::series::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "terms", rename_all = "snake_case")]
pub enum FormulaBody {
    Terms(Vec<Term>),
    /// `1` at `n = 1`, `0` elsewhere.
    IndicatorAtOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedFormula {
    pub family: Family,
    pub m: u32,
    /// Printed guard: the formula is asserted for `n >= min_n`.
    pub min_n: i64,
    pub warm_up: bool,
    pub body: FormulaBody,
}

impl PrintedFormula {
    fn terms(family: Family, m: u32, min_n: i64, terms: Vec<Term>) -> Self {
        PrintedFormula {
            family,
            m,
            min_n,
            warm_up: false,
            body: FormulaBody::Terms(terms),
        }
    }

    fn warm(mut self) -> Self {
        self.warm_up = true;
        self
    }

    pub fn label(&self) -> String {
        format!("{}_{}", self.family, self.m)
    }

    pub fn eval(&self, n: i64) -> Result<Rational, MomentError> {
        if n < self.min_n {
            return Err(MomentError::GuardViolated {
                family: self.family,
                m: self.m,
                condition: format!("n >= {}", self.min_n),
                n,
            });
        }
        match &self.body {
            FormulaBody::Terms(terms) => Ok(eval_terms(terms, n)?),
            FormulaBody::IndicatorAtOne => Ok(Rational::from(i64::from(n == 1))),
        }
    }

    /// Plain-text rendering of the formula.
    pub fn display(&self) -> String {
        let rhs = match &self.body {
            FormulaBody::Terms(t) if t.is_empty() => "0".to_string(),
            FormulaBody::Terms(t) => t
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" + "),
            FormulaBody::IndicatorAtOne => "chi(n = 1)".to_string(),
        };
        let guard = if self.min_n > 1 {
            format!("   [n >= {}]", self.min_n)
        } else {
            String::new()
        };
        format!("{}(n) = {rhs}{guard}", self.label())
    }

    pub fn guard_note(&self) -> Option<String> {
        (self.min_n > 1).then(|| format!("printed for n >= {}", self.min_n))
    }
}

fn p(desc: &[i64]) -> Polynomial {
    Polynomial::from_ints_desc(desc)
}

fn scaled(poly: Polynomial, num: i64, den: i64) -> Polynomial {
    poly.scale(&Rational::frac(num, den))
}

fn times(a: &[Polynomial]) -> Polynomial {
    a.iter().fold(Polynomial::one(), |acc, x| &acc * x)
}

fn n_() -> Polynomial {
    Polynomial::monomial(1)
}

fn n_sq() -> Polynomial {
    Polynomial::monomial(2)
}

fn build_table() -> Vec<PrintedFormula> {
    use Family::*;
    use Prefactor::*;
    let pf = PrintedFormula::terms;
    let mut t = Vec::new();

    // positive binomial sums
    t.push(
        pf(
            A,
            0,
            1,
            vec![
                Term::new(PowerOfTwo { shift: -1 }, Polynomial::one(), vec![]),
                Term::new(CentralBinomial, scaled(Polynomial::one(), -1, 2), vec![]),
            ],
        )
        .warm(),
    );
    let a_even: [(i64, &[i64]); 5] = [
        (-2, &[1]),
        (-3, &[3, -1]),
        (-4, &[15, -15, 4]),
        (-5, &[105, -210, 147, -34]),
        (-6, &[945, -3150, 4095, -2370, 496]),
    ];
    for (h, (shift, poly)) in a_even.iter().enumerate() {
        let num = &n_() * &p(poly);
        t.push(pf(
            A,
            2 * (h as u32 + 1),
            1,
            vec![Term::new(PowerOfTwo { shift: *shift }, num, vec![])],
        ));
    }
    t.push(pf(
        A,
        1,
        1,
        vec![Term::new(CentralBinomial, scaled(n_(), 1, 2), vec![])],
    ));
    let a_odd: [&[i64]; 4] = [&[1], &[2, -1], &[6, -8, 3], &[24, -60, 54, -17]];
    for (h, poly) in a_odd.iter().enumerate() {
        let num = scaled(&n_sq() * &p(poly), 1, 2);
        t.push(pf(
            A,
            2 * (h as u32 + 1) + 1,
            1,
            vec![Term::new(CentralBinomial, num, vec![])],
        ));
    }

    // alternating binomial sums
    t.push(
        pf(
            B,
            0,
            1,
            vec![Term::new(
                CentralBinomial,
                scaled(Polynomial::one(), 1, 2),
                vec![],
            )],
        )
        .warm(),
    );
    t.push(PrintedFormula {
        family: B,
        m: 2,
        min_n: 1,
        warm_up: true,
        body: FormulaBody::IndicatorAtOne,
    });
    for h in 1..=5 {
        t.push(vanishing_b(h));
    }
    t.push(pf(
        B,
        1,
        1,
        vec![Term::new(
            CentralBinomial,
            scaled(n_(), 1, 2),
            LinearForm::odd_run(1, 1),
        )],
    ));
    let b_odd: [(i64, &[i64]); 4] = [
        (-1, &[1]),
        (1, &[4, -1]),
        (-1, &[34, -24, 5]),
        (1, &[496, -672, 344, -63]),
    ];
    for (h, (sign, poly)) in b_odd.iter().enumerate() {
        let h = h + 1;
        let num = scaled(&n_sq() * &p(poly), *sign, 2);
        t.push(pf(
            B,
            2 * h as u32 + 1,
            1,
            vec![Term::new(
                CentralBinomial,
                num,
                LinearForm::odd_run(1, h + 1),
            )],
        ));
    }

    // alternating bracket sums
    t.push(
        pf(
            C,
            0,
            1,
            vec![
                Term::new(Bracket, scaled(Polynomial::one(), 1, 2), vec![]),
                Term::new(
                    Sign,
                    scaled(Polynomial::one(), 1, 2),
                    LinearForm::odd_run(1, 1),
                ),
            ],
        )
        .warm(),
    );
    let c_even: [&[i64]; 5] = [
        &[1],
        &[2, -1, -5, 1],
        &[4, -8, -25, 30, 40, -31, 5],
        &[8, -36, -62, 301, 231, -847, -175, 855, -443, 63],
        &[
            16, -128, -8, 1680, -735, -9348, 4368, 23466, -17070, -19460, 28666, -12077, 1575,
        ],
    ];
    for (h, poly) in c_even.iter().enumerate() {
        let h = h + 1;
        let num = scaled(times(&[n_(), Polynomial::linear(1, 1), p(poly)]), 1, 2);
        t.push(pf(
            C,
            2 * h as u32,
            1,
            vec![Term::new(Sign, num, LinearForm::odd_run(3, h))],
        ));
    }
    // (sign-term polynomial, bracket-term polynomial, common denominator);
    // every bracket-term polynomial past the first carries a (2n-1)^2 factor
    let c_odd: [(&[i64], Polynomial, i64); 5] = [
        (&[1], Polynomial::linear(2, -1), 8),
        (&[4, 0, -6, 1], -&Polynomial::linear(2, -1).pow(2), 32),
        (
            &[8, -8, -40, 20, 40, -22, 3],
            &Polynomial::linear(2, -1).pow(2) * &p(&[4, -3]),
            64,
        ),
        (
            &[32, -96, -272, 616, 840, -1288, -532, 1068, -422, 51],
            -&(&Polynomial::linear(2, -1).pow(2) * &p(&[68, -116, 51])),
            256,
        ),
        (
            &[
                32, -192, -224, 2208, 864, -9744, -840, 18792, -7224, -12532, 12576, -4178, 465,
            ],
            &Polynomial::linear(2, -1).pow(2) * &p(&[496, -1416, 1388, -465]),
            256,
        ),
    ];
    for (h, (sign_poly, bracket_poly, den)) in c_odd.into_iter().enumerate() {
        let sign_num = scaled(&Polynomial::linear(2, 1) * &p(sign_poly), 1, den);
        let bracket_num = scaled(bracket_poly, 1, den);
        let roots = LinearForm::integer_run(h + 1);
        t.push(pf(
            C,
            2 * h as u32 + 1,
            h as i64 + 2,
            vec![
                Term::new(Sign, sign_num, roots.clone()),
                Term::new(Bracket, bracket_num, roots),
            ],
        ));
    }

    // positive bracket sums
    let sq = Polynomial::linear(2, -1).pow(2);
    let d_odd: [(Polynomial, i64, &[i64]); 5] = [
        (scaled(Polynomial::linear(2, -1), 1, 4), 4, &[1]),
        (scaled(sq.clone(), 1, 8), 8, &[2, 4, -1]),
        (
            scaled(&sq * &Polynomial::linear(1, -1), 1, 4),
            4,
            &[1, 4, 3, -5, 1],
        ),
        (
            scaled(&sq * &p(&[12, -28, 17]), 1, 16),
            16,
            &[4, 24, 42, -28, -108, 96, -17],
        ),
        (
            scaled(&sq * &p(&[12, -48, 66, -31]), 1, 4),
            4,
            &[1, 8, 22, 2, -98, -52, 283, -190, 31],
        ),
    ];
    for (h, (bracket_num, den, unit)) in d_odd.into_iter().enumerate() {
        t.push(pf(
            D,
            2 * h as u32 + 1,
            1,
            vec![
                Term::new(Bracket, bracket_num, vec![]),
                Term::new(Unit, scaled(p(unit), 1, den), vec![]),
            ],
        ));
    }
    t
}

/// The vanishing alternating even moment `B_{2h}(n) = 0` for `n > h`.
pub fn vanishing_b(h: u32) -> PrintedFormula {
    PrintedFormula::terms(Family::B, 2 * h, i64::from(h) + 1, vec![])
}

/// Every tabulated formula, in family order.
pub fn printed_formulas() -> &'static [PrintedFormula] {
    static TABLE: OnceLock<Vec<PrintedFormula>> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// The formula used for `(family, m)`. Alternating binomial even powers beyond
/// the table fall back to the general vanishing statement.
pub fn lookup(family: Family, m: u32) -> Option<PrintedFormula> {
    if family == Family::B && m == 2 {
        return printed_formulas()
            .iter()
            .find(|f| f.family == family && f.m == 2 && f.body == FormulaBody::IndicatorAtOne)
            .cloned();
    }
    if let Some(f) = printed_formulas()
        .iter()
        .find(|f| f.family == family && f.m == m)
    {
        return Some(f.clone());
    }
    (family == Family::B && m.is_multiple_of(2) && m > 0).then(|| vanishing_b(m / 2))
}

pub fn corollary_value(q: &MomentQuery) -> Result<EvalResult, MomentError> {
    corollary_value_in(q, lookup)
}

/// As [`corollary_value`] with a caller-supplied formula source.
pub fn corollary_value_in(
    q: &MomentQuery,
    source: impl Fn(Family, u32) -> Option<PrintedFormula>,
) -> Result<EvalResult, MomentError> {
    let formula = source(q.family, q.m).ok_or(MomentError::NotTabulated {
        family: q.family,
        m: q.m,
    })?;
    let value = formula.eval(q.n)?;
    Ok(EvalResult {
        value,
        method: Method::Corollary,
        validity_note: formula.guard_note(),
    })
}
