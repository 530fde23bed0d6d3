//! Exact Gaussian elimination.

use num_traits::{One, Zero};

use super::{QVector, Rational};

/// Reduced row echelon form of the given rows (all of length `dim`).
///
/// Returns the non-zero rows of the RREF and the pivot column of each.
pub fn rref(rows: &[QVector], dim: usize) -> (Vec<QVector>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.as_slice().to_vec()).collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..dim {
        let Some(found) = (lead..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(lead, found);
        let inv = Rational::one() / &m[lead][col];
        for x in m[lead].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = m[lead].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == lead || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        lead += 1;
        if lead == m.len() {
            break;
        }
    }
    m.truncate(lead);
    (m.into_iter().map(QVector::new).collect(), pivots)
}

pub fn rank(rows: &[QVector], dim: usize) -> usize {
    rref(rows, dim).1.len()
}

/// Basis of `{x : r . x = 0 for every row r}`.
pub fn nullspace(rows: &[QVector], dim: usize) -> Vec<QVector> {
    let (reduced, pivots) = rref(rows, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = QVector::zeros(dim);
            v[f] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `m x = rhs`; `None` when singular.
pub fn solve(m: &[QVector], rhs: &QVector) -> Option<QVector> {
    let n = rhs.dim();
    if m.len() != n {
        return None;
    }
    let augmented: Vec<QVector> = m
        .iter()
        .zip(rhs.iter())
        .map(|(row, b)| row.concat(std::slice::from_ref(b)))
        .collect();
    let (reduced, pivots) = rref(&augmented, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(reduced.iter().map(|row| row[n].clone()).collect())
}

/// Indices of a maximal linearly independent subset, greedily in order.
pub fn independent_subset(rows: &[QVector], dim: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut basis: Vec<QVector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        basis.push(r.clone());
        if rank(&basis, dim) == basis.len() {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        } else {
            basis.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn nullspace_of_two_rows_in_three_space() {
        // x1 + x2 = 0 (two parallel rows), the lineality example
        let rows = vec![QVector::from_ints(&[1, 1, 0]), QVector::from_ints(&[-1, -1, 0])];
        let basis = nullspace(&rows, 3);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(rows.iter().all(|r| r.dot(b).is_zero()));
        }
        assert_eq!(rank(&basis, 3), 2);
    }

    #[test]
    fn solve_square() {
        let m = vec![QVector::from_ints(&[2, 1]), QVector::from_ints(&[1, 3])];
        let x = solve(&m, &QVector::from_ints(&[3, 5])).unwrap();
        assert_eq!(x, QVector::new(vec![rat(4, 5), rat(7, 5)]));
        let singular = vec![QVector::from_ints(&[1, 2]), QVector::from_ints(&[2, 4])];
        assert!(solve(&singular, &QVector::from_ints(&[1, 1])).is_none());
    }

    #[test]
    fn independent_subset_skips_dependent_rows() {
        let rows = vec![
            QVector::from_ints(&[1, 0]),
            QVector::from_ints(&[2, 0]),
            QVector::from_ints(&[0, 1]),
        ];
        assert_eq!(independent_subset(&rows, 2), vec![0, 2]);
    }
}
