//! Exact Gaussian elimination for small (possibly overdetermined) systems.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// Rows disagree: no exact solution.
    Inconsistent,
    /// Fewer independent rows than unknowns.
    Underdetermined,
    /// Row length differs from the number of unknowns.
    Shape,
}

/// Solve `rows · x = rhs` exactly. Every row must be satisfied; the
/// solution must be unique.
pub fn solve_exact<S: Scalar>(rows: &[Vec<S>], rhs: &[S]) -> Result<Vec<S>, SolveError> {
    let n = rows.first().map_or(0, Vec::len);
    if rows.len() != rhs.len() || rows.iter().any(|r| r.len() != n) {
        return Err(SolveError::Shape);
    }
    let mut aug: Vec<Vec<S>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();

    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let Some(p) = (pivot_row..aug.len()).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(pivot_row, p);
        let inv = S::one() / aug[pivot_row][col].clone();
        for x in aug[pivot_row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot = aug[pivot_row].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot).skip(col) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    if pivots.len() < n {
        return Err(SolveError::Underdetermined);
    }
    Ok((0..n).map(|i| aug[i][n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::ratio(n, 1)
    }

    #[test]
    fn square_system() {
        let rows = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve_exact(&rows, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::ratio(4, 5), Rational::ratio(7, 5)]);
    }

    #[test]
    fn overdetermined_consistent_and_not() {
        let rows = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)], vec![q(0), q(0)]];
        assert_eq!(solve_exact(&rows, &[q(1), q(2), q(3), q(0)]).unwrap(), vec![q(1), q(2)]);
        assert_eq!(solve_exact(&rows, &[q(1), q(2), q(4), q(0)]), Err(SolveError::Inconsistent));
        assert_eq!(solve_exact(&rows, &[q(1), q(2), q(3), q(1)]), Err(SolveError::Inconsistent));
    }

    #[test]
    fn rank_deficient() {
        let rows = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(solve_exact(&rows, &[q(1), q(2)]), Err(SolveError::Underdetermined));
        assert_eq!(solve_exact(&[vec![q(1)]], &[]), Err(SolveError::Shape));
    }
}
