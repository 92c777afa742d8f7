//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use binomial_moments::cli::{cmd_verify, Format, RunConfig};
use binomial_moments::conjecture::{rediscover_all, search, SearchConfig, MIN_HOLDOUT};
use binomial_moments::exact::Rational;
use binomial_moments::moments::corollaries::{lookup, FormulaBody};
use binomial_moments::moments::identities::{bracket_identity_sides, BracketIdentity};
use binomial_moments::moments::terms::Prefactor;
use binomial_moments::moments::theorems::validity;
use binomial_moments::moments::{
    closed_form, corollary_value, lambda_check, oracle, power_expansion_residual, printed_formulas,
    Family, MomentQuery,
};
use binomial_moments::sigma::{
    sigma_explicit, sigma_monomial, sigma_series, SigmaError, SigmaQuery,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn q(family: Family, m: u32, n: i64) -> MomentQuery {
    MomentQuery { family, m, n }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::frac(rng.gen_range(-50..=50), rng.gen_range(1..=20))
}

/// Closed `l`-sums against brute force for powers `0..=17` (half index up to
/// 8) and `n <= 30`, inside each validity guard.
fn grid_equivalence() -> Outcome {
    let cases: Vec<MomentQuery> = Family::ALL
        .iter()
        .flat_map(|&f| (0..=17u32).flat_map(move |m| (1..=30).map(move |n| q(f, m, n))))
        .filter(|c| validity(c).is_ok())
        .collect();
    let bad = cases
        .par_iter()
        .find_first(|c| closed_form(c).map(|r| r.value) != Ok(oracle(c)));
    match bad {
        None => Ok(format!("{} queries agree exactly", cases.len())),
        Some(c) => Err(format!("{c}: {:?} vs {}", closed_form(c), oracle(c))),
    }
}

fn corollary_reproduction() -> Outcome {
    let mut count = 0;
    for f in printed_formulas() {
        for n in f.min_n.max(1)..=30 {
            let expect = oracle(&q(f.family, f.m, n));
            let got = f.eval(n).map_err(|e| format!("{}: {e}", f.display()))?;
            if got != expect {
                return Err(format!("{} at n = {n}: {got} vs {expect}", f.display()));
            }
            count += 1;
        }
    }
    let anchors = [
        (Family::A, 2, 3, 48),
        (Family::B, 2, 1, 1),
        (Family::B, 2, 2, 0),
        (Family::C, 2, 2, 3),
        (Family::D, 1, 2, 9),
    ];
    for (f, m, n, v) in anchors {
        let query = q(f, m, n);
        let brute = oracle(&query);
        if brute != Rational::from(v) {
            return Err(format!("brute force {query} = {brute}, expected {v}"));
        }
        let tab = corollary_value(&query).map_err(|e| e.to_string())?.value;
        if tab != brute {
            return Err(format!("table {query} = {tab}, brute force {brute}"));
        }
    }
    Ok(format!(
        "{} formulas, {count} values, anchors A_2(3)=48 B_2(1)=1 B_2(2)=0 C_2(2)=3 D_1(2)=9",
        printed_formulas().len()
    ))
}

fn sigma_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ys: Vec<Rational> = (-4..=4).map(Rational::from).collect();
    ys.extend((-4..=3).map(|k| Rational::from(k) + Rational::half()));
    ys.extend((0..20).map(|_| random_rational(&mut rng)));
    let mut compared = 0;
    let mut explicit = 0;
    let mut poles = 0;
    for m in 0..=8 {
        for l in 0..=m {
            for y in &ys {
                let sq = SigmaQuery::new(m, l, y.clone()).unwrap();
                let s = sigma_series(&sq).map_err(|e| e.to_string())?;
                if s != sigma_monomial(&sq) {
                    return Err(format!("series vs monomial at m={m} l={l} y={y}"));
                }
                compared += 1;
                match sigma_explicit(&sq) {
                    Ok(v) if v == s => explicit += 1,
                    Ok(v) => return Err(format!("explicit {v} vs {s} at m={m} l={l} y={y}")),
                    Err(SigmaError::DenominatorPole { .. }) => poles += 1,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    Ok(format!(
        "{compared} series/monomial, {explicit} explicit, {poles} poles skipped"
    ))
}

fn power_expansion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for m in 0..=8 {
        for _ in 0..50 {
            let (x, y) = (random_rational(&mut rng), random_rational(&mut rng));
            let r = power_expansion_residual(m, &x, &y);
            if !r.is_zero() {
                return Err(format!("m={m} x={x} y={y}: residual {r}"));
            }
        }
    }
    Ok("9 x 50 random pairs, residual 0".into())
}

fn lambda_vanishes() -> Outcome {
    for m in 1..=8 {
        for n in 1..=20 {
            let v = lambda_check(m, n).map_err(|e| e.to_string())?;
            if !v.is_zero() {
                return Err(format!("Lambda({m},{n}) = {v}"));
            }
        }
    }
    Ok("Lambda(m, n) = 0 for 1 <= m <= 8, 1 <= n <= 20".into())
}

fn vanishing_theorem() -> Outcome {
    let mut count = 0;
    for h in 1..=8u32 {
        for n in i64::from(h) + 1..=30 {
            let c = q(Family::B, 2 * h, n);
            let v = closed_form(&c).map_err(|e| e.to_string())?.value;
            if !v.is_zero() || !oracle(&c).is_zero() {
                return Err(format!("{c} = {v}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} values B_2h(n) = 0 for n > h"))
}

fn bracket_structure() -> Outcome {
    let mut count = 0;
    let mut check = |which: BracketIdentity, a: i64, b: i64| -> Result<(), String> {
        let (l, r) = bracket_identity_sides(which, a, b).map_err(|e| e.to_string())?;
        count += 1;
        (l == r)
            .then_some(())
            .ok_or_else(|| format!("{which:?} at ({a},{b}): {l} vs {r}"))
    };
    for a in 0..=60 {
        for b in 0..=a {
            check(BracketIdentity::Symmetry, a, b)?;
        }
    }
    for n in 1..=30 {
        for k in 0..=n {
            check(BracketIdentity::Recurrence, n, k)?;
            check(BracketIdentity::InverseLower, n, k)?;
            check(BracketIdentity::InverseLowerShifted, n, k)?;
        }
    }
    Ok(format!("{count} identity instances"))
}

fn rediscovery() -> Outcome {
    let report = rediscover_all(&SearchConfig::default());
    if let Some(e) = report.failures().next() {
        return Err(format!("{}: {} (found {:?})", e.label, e.status, e.found));
    }
    if report.entries.iter().any(|e| e.holdout < MIN_HOLDOUT) {
        return Err("an entry has fewer than 10 holdout points".into());
    }
    // coefficient-for-coefficient on the largest numerators
    let config = SearchConfig::default();
    for (power, prefactor) in [
        (10, Prefactor::Sign),
        (9, Prefactor::Sign),
        (7, Prefactor::Sign),
    ] {
        let found = search(Family::C, power, &config).map_err(|e| e.to_string())?;
        let printed = lookup(Family::C, power).expect("tabulated");
        let FormulaBody::Terms(terms) = &printed.body else {
            unreachable!()
        };
        let a = found
            .terms
            .iter()
            .find(|t| t.prefactor == prefactor)
            .expect("fitted term");
        let b = terms
            .iter()
            .find(|t| t.prefactor == prefactor)
            .expect("printed term");
        if a.numerator != b.numerator || a.denominator != b.denominator {
            return Err(format!("C_{power}: {a} vs {b}"));
        }
    }
    Ok(format!(
        "{} formulas verified on >= {MIN_HOLDOUT} holdout points; C_10, C_9, C_7 numerators identical",
        report.entries.len()
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let config = RunConfig {
        m_max: 8,
        n_max: 30,
        format: Format::Json,
        seed: 7,
        ..RunConfig::default()
    };
    let verify_run = || cmd_verify(&config, printed_formulas(), false);

    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 grid equivalence", grid_equivalence()),
        ("2 corollary reproduction", corollary_reproduction()),
        ("3 sigma three-way agreement", sigma_agreement()),
        ("4 power expansion residual", power_expansion()),
        ("5 Lambda identity", lambda_vanishes()),
        ("6 vanishing alternating even moments", vanishing_theorem()),
        ("7 bracket structure", bracket_structure()),
        ("8 rediscovery", rediscovery()),
    ];

    let first = verify_run();
    let readings: Outcome = match &first {
        Err(e) => Err(e.to_string()),
        Ok((report, _)) => {
            let wanted = [
                "C, odd power: argument of sigma",
                "D, odd power: placement of (-1)^l",
            ];
            wanted
                .iter()
                .map(|name| {
                    let r = report
                        .readings
                        .iter()
                        .find(|r| r.sum == *name)
                        .ok_or_else(|| format!("no evidence for {name}"))?;
                    if !r.chosen_matches_all || r.witnesses.len() < 2 {
                        return Err(format!("{name}: chosen reading not supported"));
                    }
                    let w: Vec<String> = r
                        .witnesses
                        .iter()
                        .map(|w| format!("({},{})", w.m, w.n))
                        .collect();
                    Ok(format!("{} -> {} {}", name, r.chosen, w.join(" ")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(|v| v.join("; "))
                .and_then(|s| {
                    if report.all_passed {
                        Ok(s)
                    } else {
                        Err("verify report has failing checks".into())
                    }
                })
        }
    };
    results.push(("9 reading evidence", readings));

    let determinism = match (&first, &verify_run()) {
        (Ok((_, a)), Ok((_, b))) if a == b => Ok(format!("{} bytes, identical", a.len())),
        (Ok(_), Ok(_)) => Err("reports differ".into()),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    };
    results.push(("10 determinism", determinism));

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1?}",
        results.len() - failed,
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
