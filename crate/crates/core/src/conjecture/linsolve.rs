//! Exact linear solves by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("singular system: column {column} has no pivot")]
    SingularSystem { column: usize },
    #[error("inconsistent system: row {row} cannot be satisfied")]
    Inconsistent { row: usize },
    #[error("shape mismatch: {rows} rows, {rhs} right-hand sides")]
    Shape { rows: usize, rhs: usize },
    #[error("underdetermined: {rows} equations for {cols} unknowns")]
    Underdetermined { rows: usize, cols: usize },
}

/// Solve `matrix * x = rhs` exactly. The matrix may have more rows than
/// columns as long as the extra equations are consistent; it must have full
/// column rank.
pub fn solve_exact(
    matrix: &[Vec<Rational>],
    rhs: &[Rational],
) -> Result<Vec<Rational>, SolveError> {
    let rows = matrix.len();
    if rhs.len() != rows {
        return Err(SolveError::Shape {
            rows,
            rhs: rhs.len(),
        });
    }
    let cols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(SolveError::Shape {
            rows,
            rhs: rhs.len(),
        });
    }
    if cols == 0 {
        return match rhs.iter().position(|r| !r.is_zero()) {
            Some(row) => Err(SolveError::Inconsistent { row }),
            None => Ok(Vec::new()),
        };
    }
    if rows < cols {
        return Err(SolveError::Underdetermined { rows, cols });
    }

    // scale every augmented row to integers
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let scale = Rational::common_denominator(row.iter().chain(std::iter::once(b)));
            row.iter()
                .chain(std::iter::once(b))
                .map(|v| v.numer() * (&scale / v.denom()))
                .collect()
        })
        .collect();
    // remember original row ids so errors point at caller rows
    let mut ids: Vec<usize> = (0..rows).collect();

    let mut prev = BigInt::one();
    for k in 0..cols {
        let pivot = (k..rows)
            .find(|&r| !m[r][k].is_zero())
            .ok_or(SolveError::SingularSystem { column: k })?;
        m.swap(k, pivot);
        ids.swap(k, pivot);
        for i in k + 1..rows {
            for j in k + 1..=cols {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    if let Some(r) = (cols..rows).find(|&r| !m[r][cols].is_zero()) {
        return Err(SolveError::Inconsistent { row: ids[r] });
    }

    let mut x = vec![Rational::zero(); cols];
    for k in (0..cols).rev() {
        let mut acc = Rational::from(m[k][cols].clone());
        for j in k + 1..cols {
            acc -= Rational::from(m[k][j].clone()) * &x[j];
        }
        x[k] = acc / Rational::from(m[k][k].clone());
    }
    Ok(x)
}
