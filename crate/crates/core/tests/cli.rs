use std::process::{Command, Output};

use binomial_moments::cli::{cmd_verify, RunConfig};
use binomial_moments::moments::corollaries::{
    corollary_value_in, lookup, FormulaBody, PrintedFormula,
};
use binomial_moments::moments::{Family, MomentError, MomentQuery};
use binomial_moments::series::Polynomial;
use binomial_moments::Rational;
use serde_json::Value;

fn moments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moments"))
        .args(args)
        .env_remove("MOMENTS_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_prints_exact_values() {
    let o = moments(&["eval", "A", "2", "3", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("48"));

    let o = moments(&["eval", "B", "6", "5", "theorem"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("0"));

    let o = moments(&["eval", "C", "0", "3", "corollary", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let brute = binomial_moments::moments::oracle(&MomentQuery::new(Family::C, 0, 3).unwrap());
    assert_eq!(v[0]["value"], brute.to_string().as_str());
    assert_eq!(v[0]["method"], "corollary");
}

#[test]
fn eval_exit_codes() {
    let o = moments(&["eval", "D", "0", "5", "theorem"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("open problem"));

    assert_eq!(moments(&["eval", "E", "1", "1"]).status.code(), Some(2));
    assert_eq!(moments(&["eval", "A", "1", "0"]).status.code(), Some(2));
    assert_eq!(
        moments(&["eval", "C", "3", "2", "theorem"]).status.code(),
        Some(2)
    );
    assert_eq!(moments(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(moments(&["--help"]).status.code(), Some(0));
}

#[test]
fn jobs_env_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_moments"))
        .args(["table", "--families", "A", "--m-max", "1", "--n-max", "2"])
        .env("MOMENTS_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_small_grid_includes_indicator_rows() {
    let o = moments(&["verify", "--families", "B", "--m-max", "3", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_passed"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"table B_2(n) = chi(n = 1)"));
    assert!(names.contains(&"table B_2(n) = 0   [n >= 2]"));
    assert_eq!(v["readings"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_reports_corrupted_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    let o = moments(&[
        "table",
        "--corollaries",
        "--families",
        "A",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));

    // A_2(n) = 2^(2n-2) n becomes 2^(2n-2) (n + 1)
    let mut rows: Vec<Value> =
        serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    let a2 = rows.iter_mut().find(|r| r["label"] == "A_2").unwrap();
    a2["body"]["terms"][0]["numerator"] = serde_json::json!(["1", "1"]);
    std::fs::write(&table, serde_json::to_string(&rows).unwrap()).unwrap();

    let o = moments(&[
        "verify",
        "--families",
        "A",
        "--m-max",
        "2",
        "--n-max",
        "4",
        "--corollary-table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("family=A m=2 n=1 lhs=2 rhs=1"), "{err}");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_passed"], false);
}

#[test]
fn injected_formula_source_fails_visibly() {
    let mut broken = lookup(Family::D, 1).unwrap();
    if let FormulaBody::Terms(terms) = &mut broken.body {
        terms[1].numerator = Polynomial::constant(Rational::frac(1, 2));
    }
    let q = MomentQuery::new(Family::D, 1, 2).unwrap();
    let value = corollary_value_in(&q, |_, _| Some(broken.clone()))
        .unwrap()
        .value;
    assert_ne!(value, Rational::from(9));
    assert_eq!(
        corollary_value_in(&q, |_, _| None),
        Err(MomentError::NotTabulated {
            family: Family::D,
            m: 1
        })
    );

    let config = RunConfig {
        families: vec![Family::D],
        m_max: 1,
        n_max: 3,
        ..RunConfig::default()
    };
    let table: Vec<PrintedFormula> = vec![broken];
    let (report, _) = cmd_verify(&config, &table, false).unwrap();
    let failing = report.first_failure().unwrap();
    let w = failing.witness.as_ref().unwrap();
    assert_eq!((w.family, w.m, w.n), (Some(Family::D), Some(1), Some(1)));
}

#[test]
fn table_formats() {
    let o = moments(&[
        "table",
        "--families",
        "A",
        "--m-max",
        "4",
        "--n-max",
        "6",
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,m,n,value,method,note"));
    assert_eq!(lines.count(), 30);
    assert!(text.contains("A,2,3,48,oracle,"));

    let o = moments(&[
        "table",
        "--families",
        "C",
        "--m-max",
        "2",
        "--n-max",
        "4",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c22 = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["family"] == "C" && r["m"] == 2 && r["n"] == 2)
        .unwrap();
    assert_eq!(c22["value"], "3");

    let o = moments(&["table", "--format", "latex", "--corollaries"]);
    let text = stdout(&o);
    assert_eq!(text.matches("\\begin{tabular}").count(), 4);
    assert_eq!(text.matches("\\end{tabular}").count(), 4);
    assert!(text.contains("$A_{6}(n)$ & $2^{2n-4} \\left(15n^{3} - 15n^{2} + 4n\\right)$"));

    let o = moments(&[
        "table",
        "--families",
        "B",
        "--m-max",
        "3",
        "--n-max",
        "3",
        "--methods",
        "oracle,theorem,corollary",
        "--format",
        "markdown",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("| family | m | n | value | method | note |"));
    assert!(text.contains("| B | 2 | 1 | 1 | corollary |"));
    assert!(!text.contains("| B | 0 | 1 | 1 | theorem |"));
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let o = moments(&[
            "verify",
            "--m-max",
            "3",
            "--n-max",
            "6",
            "--seed",
            "11",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn discover_reports() {
    let o = moments(&["discover", "A", "even", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["power"], 6);
    assert_eq!(v["matches_printed"], true);
    assert_eq!(
        v["candidates"][0]["formula"],
        "A_6(n) = 2^(2n-4) * (15*n^3 - 15*n^2 + 4*n)"
    );
    assert_eq!(v["candidates"][0]["status"], "verified");

    let o = moments(&["discover", "C", "odd", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matches_printed"], true);
    let fitted = v["candidates"][0]["fitted_on"].as_array().unwrap();
    assert!(fitted.iter().all(|n| n.as_i64().unwrap() > 3));

    let o = moments(&["discover", "D", "even", "1", "--n-max", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["search"], "open");
    assert!(v["matches_printed"].is_null());
    for c in v["candidates"].as_array().unwrap() {
        let status = c["status"].as_str().unwrap();
        assert!(["verified", "refuted", "underdetermined"].contains(&status));
    }
}
