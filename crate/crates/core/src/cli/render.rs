//! Text renderings of value grids, formula tables and verify reports.

use std::fmt::Write as _;

use serde::Serialize;

use super::verify::VerifyReport;
use super::Format;
use crate::exact::Rational;
use crate::moments::corollaries::{FormulaBody, PrintedFormula};
use crate::moments::terms::{Prefactor, Term};
use crate::moments::{Family, Method};
use crate::series::Polynomial;

/// One evaluated value, as emitted by `eval` and `table`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub family: Family,
    pub m: u32,
    pub n: i64,
    pub method: Method,
    pub value: Rational,
    pub note: Option<String>,
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn markdown_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = format!("| {} |\n", header.join(" | "));
    s.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
        s.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    s
}

fn latex_text(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}")
        .replace('_', "\\_")
        .replace('^', "\\^{}")
        .replace('&', "\\&")
        .replace('%', "\\%")
        .replace('#', "\\#")
}

/// `p/q` as `\frac{p}{q}` with the sign pulled out.
pub fn latex_rational(q: &Rational) -> String {
    let sign = if q.is_negative() { "-" } else { "" };
    let a = q.abs();
    if a.is_integer() {
        format!("{sign}{}", a.numer())
    } else {
        format!("{sign}\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

/// Polynomial in `n`, highest degree first.
pub fn latex_poly(p: &Polynomial) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let var = match k {
            0 => String::new(),
            1 => "n".to_string(),
            k => format!("n^{{{k}}}"),
        };
        if !(a.is_one() && k > 0) {
            out.push_str(&latex_rational(&a));
        }
        out.push_str(&var);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_term(t: &Term) -> String {
    let num = latex_poly(&t.numerator);
    let body = if t.denominator.is_empty() {
        format!("\\left({num}\\right)")
    } else {
        let den: String = t.denominator.iter().map(|f| format!("({f})")).collect();
        format!("\\frac{{{num}}}{{{den}}}")
    };
    match t.prefactor {
        Prefactor::Unit => body,
        p => format!("{} {body}", p.latex()),
    }
}

pub fn latex_formula(f: &PrintedFormula) -> String {
    match &f.body {
        FormulaBody::Terms(t) if t.is_empty() => "0".into(),
        FormulaBody::Terms(t) => t.iter().map(latex_term).collect::<Vec<_>>().join(" + "),
        FormulaBody::IndicatorAtOne => "\\chi(n = 1)".into(),
    }
}

fn record_row(r: &Record) -> Vec<String> {
    vec![
        r.family.to_string(),
        r.m.to_string(),
        r.n.to_string(),
        r.value.to_string(),
        r.method.to_string(),
        r.note.clone().unwrap_or_default(),
    ]
}

const RECORD_HEADER: [&str; 6] = ["family", "m", "n", "value", "method", "note"];

pub fn records(records: &[Record], format: Format) -> String {
    match format {
        Format::Json => to_json(records),
        Format::Csv => csv_string(&RECORD_HEADER, records.iter().map(record_row)),
        Format::Markdown => markdown_table(&RECORD_HEADER, records.iter().map(record_row)),
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{crrrll}\n\\hline\nfamily & $m$ & $n$ & value & method & note \\\\\n\\hline\n");
            for r in records {
                let _ = writeln!(
                    s,
                    "{} & {} & {} & ${}$ & {} & {} \\\\",
                    r.family,
                    r.m,
                    r.n,
                    latex_rational(&r.value),
                    r.method,
                    latex_text(r.note.as_deref().unwrap_or(""))
                );
            }
            s.push_str("\\hline\n\\end{tabular}\n");
            s
        }
    }
}

#[derive(Serialize)]
struct FormulaEntry<'a> {
    label: String,
    family: Family,
    m: u32,
    min_n: i64,
    warm_up: bool,
    formula: String,
    latex: String,
    body: &'a FormulaBody,
}

pub fn formulas(list: &[PrintedFormula], format: Format) -> String {
    let guard = |f: &PrintedFormula| format!("n >= {}", f.min_n);
    match format {
        Format::Json => {
            let entries: Vec<FormulaEntry> = list
                .iter()
                .map(|f| FormulaEntry {
                    label: f.label(),
                    family: f.family,
                    m: f.m,
                    min_n: f.min_n,
                    warm_up: f.warm_up,
                    formula: f.display(),
                    latex: latex_formula(f),
                    body: &f.body,
                })
                .collect();
            to_json(&entries)
        }
        Format::Csv => csv_string(
            &["family", "m", "min_n", "formula"],
            list.iter().map(|f| {
                vec![
                    f.family.to_string(),
                    f.m.to_string(),
                    f.min_n.to_string(),
                    f.display(),
                ]
            }),
        ),
        Format::Markdown => markdown_table(
            &["formula", "guard"],
            list.iter()
                .map(|f| vec![format!("`{}`", f.display()), guard(f)]),
        ),
        Format::Latex => {
            let mut s = String::new();
            for family in Family::ALL {
                let rows: Vec<&PrintedFormula> =
                    list.iter().filter(|f| f.family == family).collect();
                if rows.is_empty() {
                    continue;
                }
                s.push_str(
                    "\\begin{tabular}{lll}\n\\hline\n & closed form & guard \\\\\n\\hline\n",
                );
                for f in rows {
                    let _ = writeln!(
                        s,
                        "${}_{{{}}}(n)$ & ${}$ & $n \\ge {}$ \\\\",
                        f.family,
                        f.m,
                        latex_formula(f),
                        f.min_n
                    );
                }
                s.push_str("\\hline\n\\end{tabular}\n\n");
            }
            s
        }
    }
}

pub fn verify_report(report: &VerifyReport, format: Format) -> String {
    let row = |c: &super::verify::Check| {
        let witness = c
            .witness
            .as_ref()
            .map(|w| format!("{}: {} vs {}", w.case, w.lhs, w.rhs))
            .unwrap_or_default();
        vec![
            c.name.clone(),
            if c.passed { "pass" } else { "FAIL" }.to_string(),
            c.cases.to_string(),
            witness,
        ]
    };
    let header = ["check", "result", "cases", "witness"];
    match format {
        Format::Json => to_json(report),
        Format::Csv => csv_string(&header, report.checks.iter().map(row)),
        Format::Markdown => {
            let mut s = markdown_table(&header, report.checks.iter().map(row));
            s.push('\n');
            for r in &report.readings {
                let w: Vec<String> = r
                    .witnesses
                    .iter()
                    .map(|w| format!("(m={}, n={})", w.m, w.n))
                    .collect();
                let _ = writeln!(
                    s,
                    "- {}: chosen `{}`, rejected `{}`; witnesses {}",
                    r.sum,
                    r.chosen,
                    r.rejected,
                    w.join(", ")
                );
            }
            s
        }
        Format::Latex => {
            let mut s = String::from(
                "\\begin{tabular}{lrr}\n\\hline\ncheck & result & cases \\\\\n\\hline\n",
            );
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "{} & {} & {} \\\\",
                    latex_text(&c.name),
                    if c.passed { "pass" } else { "FAIL" },
                    c.cases
                );
            }
            s.push_str("\\hline\n\\end{tabular}\n");
            s
        }
    }
}
