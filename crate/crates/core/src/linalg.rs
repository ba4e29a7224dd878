//! Dense exact linear algebra over the rationals.
//!
//! Everything here is desk-scale: matrices with a few hundred rows at most,
//! reduced by classical Gauss-Jordan elimination with exact pivots. That is
//! all the span and kernel computations in this crate need, and keeping it
//! exact means membership answers are certificates, not approximations.

use crate::scalar::Scalar;
use std::fmt;

/// Row-major dense matrix of [`Scalar`] entries.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Shape errors raised by matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("row length {found} does not match expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows of unequal length: row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinAlgError> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinAlgError::RaggedRows {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(ExactMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer literals, mostly for tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect(),
        )
        .expect("literal rows must be rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduced row echelon form: pivots are 1, pivot columns are otherwise
    /// zero, zero rows sink to the bottom. Exact, so idempotent on the nose.
    pub fn rref(&self) -> ExactMatrix {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let inv = m[(pivot_row, col)].inv();
            m.scale_row(pivot_row, &inv);
            for r in 0..m.rows {
                if r != pivot_row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    m.subtract_scaled(r, pivot_row, &factor);
                }
            }
            pivot_row += 1;
        }
        m
    }

    pub fn rank(&self) -> usize {
        let r = self.rref();
        (0..r.rows)
            .filter(|&i| r.row(i).iter().any(|e| !e.is_zero()))
            .count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, by: &Scalar) {
        for c in 0..self.cols {
            let v = &self[(r, c)] * by;
            self[(r, c)] = v;
        }
    }

    /// row[r] -= factor * row[src]
    fn subtract_scaled(&mut self, r: usize, src: usize, factor: &Scalar) {
        for c in 0..self.cols {
            let delta = factor * &self[(src, c)];
            let v = &self[(r, c)] - &delta;
            self[(r, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Is `v` a rational linear combination of the rows of `basis`?
///
/// Decided exactly: appending `v` to the basis grows the rank iff `v` lies
/// outside the row space.
pub fn in_span(v: &[Scalar], basis: &ExactMatrix) -> Result<bool, LinAlgError> {
    if basis.rows() > 0 && v.len() != basis.cols() {
        return Err(LinAlgError::DimensionMismatch {
            expected: basis.cols(),
            found: v.len(),
        });
    }
    if v.iter().all(|e| e.is_zero()) {
        return Ok(true);
    }
    if basis.rows() == 0 {
        return Ok(false);
    }
    let base_rank = basis.rank();
    let mut rows: Vec<Vec<Scalar>> = (0..basis.rows()).map(|i| basis.row(i).to_vec()).collect();
    rows.push(v.to_vec());
    let extended = ExactMatrix::from_rows(rows)?;
    Ok(extended.rank() == base_rank)
}

/// An incrementally built row space kept in reduced echelon form.
///
/// This is the workhorse behind iterated span closures: insertion is
/// idempotent, order-insensitive for the resulting space, and the stored
/// basis is canonical (fully reduced, pivots sorted), which makes downstream
/// certificates reproducible.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    /// Reduced rows, ordered by pivot column. Invariant: each row's leading
    /// entry is 1 and is the only nonzero entry in its column.
    rows: Vec<Vec<Scalar>>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace { cols, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduce `v` against the current basis, returning the residue.
    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for row in &self.rows {
            let pivot = row.iter().position(|e| !e.is_zero()).expect("stored rows are nonzero");
            if !v[pivot].is_zero() {
                let factor = v[pivot].clone();
                for (ve, re) in v.iter_mut().zip(row.iter()) {
                    *ve = &*ve - &(&factor * re);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        self.reduce(v.to_vec()).iter().all(|e| e.is_zero())
    }

    /// Insert a vector; returns true iff the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        let mut residue = self.reduce(v.to_vec());
        let Some(pivot) = residue.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = residue[pivot].inv();
        for e in residue.iter_mut() {
            *e = &*e * &inv;
        }
        // Back-substitute into existing rows so the basis stays fully reduced.
        for row in &mut self.rows {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                for (re, ne) in row.iter_mut().zip(residue.iter()) {
                    *re = &*re - &(&factor * ne);
                }
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|row| {
                row.iter().position(|e| !e.is_zero()).expect("stored rows are nonzero") > pivot
            })
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, residue);
        true
    }

    pub fn basis_rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_collapses_dependent_rows() {
        let m = ExactMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r, ExactMatrix::from_int_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let id = ExactMatrix::identity(4);
        assert_eq!(id.rref(), id);
        assert_eq!(id.rank(), 4);
    }

    #[test]
    fn rref_sorts_pivots() {
        let m = ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.rref(), ExactMatrix::identity(2));
    }

    #[test]
    fn rref_handles_rational_pivots() {
        let m = ExactMatrix::from_rows(vec![
            vec![Scalar::ratio(1, 2), Scalar::ratio(3, 4)],
            vec![Scalar::ratio(1, 3), Scalar::ratio(2, 5)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rref(), ExactMatrix::identity(2));
    }

    #[test]
    fn rref_is_idempotent() {
        let m = ExactMatrix::from_int_rows(&[&[2, 4, 6], &[1, 3, 5], &[3, 7, 11]]);
        let once = m.rref();
        assert_eq!(once.rref(), once);
    }

    #[test]
    fn in_span_examples() {
        let basis = ExactMatrix::from_int_rows(&[&[1, 0], &[0, 1]]);
        let v = [Scalar::ratio(3, 2), Scalar::from_int(-7)];
        assert!(in_span(&v, &basis).unwrap());

        let line = ExactMatrix::from_int_rows(&[&[1, 1]]);
        let on = [Scalar::from_int(5), Scalar::from_int(5)];
        let off = [Scalar::from_int(5), Scalar::from_int(4)];
        assert!(in_span(&on, &line).unwrap());
        assert!(!in_span(&off, &line).unwrap());
    }

    #[test]
    fn in_span_zero_vector_and_empty_basis() {
        let empty = ExactMatrix::zero(0, 0);
        let zero = [Scalar::zero(), Scalar::zero()];
        assert!(in_span(&zero, &empty).unwrap());
        let v = [Scalar::one(), Scalar::zero()];
        assert!(!in_span(&v, &empty).unwrap());
    }

    #[test]
    fn in_span_dimension_mismatch_is_an_error() {
        let basis = ExactMatrix::from_int_rows(&[&[1, 0, 0]]);
        let v = [Scalar::one(), Scalar::one()];
        assert_eq!(
            in_span(&v, &basis),
            Err(LinAlgError::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    /// Independent 2x2 oracle: the span question answered by the closed-form
    /// determinant / collinearity formulas rather than by elimination.
    fn two_by_two_oracle(v: &[Scalar; 2], b1: &[Scalar; 2], b2: &[Scalar; 2]) -> bool {
        let det = &(&b1[0] * &b2[1]) - &(&b1[1] * &b2[0]);
        if !det.is_zero() {
            return true; // full rank: everything is in the span
        }
        let collinear = |u: &[Scalar; 2], w: &[Scalar; 2]| {
            // u x w == 0 with u != 0 means w is a multiple of u
            (&(&u[0] * &w[1]) - &(&u[1] * &w[0])).is_zero()
        };
        if b1.iter().any(|e| !e.is_zero()) {
            return collinear(b1, v);
        }
        if b2.iter().any(|e| !e.is_zero()) {
            return collinear(b2, v);
        }
        v.iter().all(|e| e.is_zero())
    }

    #[test]
    fn in_span_matches_closed_form_on_small_rational_grid() {
        // Sweep a small grid of rational entries; every case is checked
        // against the determinant-based oracle above.
        let grid: Vec<Scalar> = vec![
            Scalar::from_int(0),
            Scalar::from_int(1),
            Scalar::from_int(-2),
            Scalar::ratio(1, 2),
        ];
        let mut cases = 0;
        for a in &grid {
            for b in &grid {
                for c in &grid {
                    for d in &grid {
                        let b1 = [a.clone(), b.clone()];
                        let b2 = [c.clone(), d.clone()];
                        let basis =
                            ExactMatrix::from_rows(vec![b1.to_vec(), b2.to_vec()]).unwrap();
                        for p in &grid {
                            for q in &grid {
                                let v = [p.clone(), q.clone()];
                                assert_eq!(
                                    in_span(&v, &basis).unwrap(),
                                    two_by_two_oracle(&v, &b1, &b2),
                                    "v={v:?} b1={b1:?} b2={b2:?}"
                                );
                                cases += 1;
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(cases, 4096);
    }

    #[test]
    fn rowspace_insert_tracks_rank_and_membership() {
        let mut space = RowSpace::new(3);
        let r1 = vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(3)];
        let r2 = vec![Scalar::from_int(2), Scalar::from_int(4), Scalar::from_int(6)];
        let r3 = vec![Scalar::from_int(0), Scalar::from_int(1), Scalar::from_int(1)];
        assert!(space.insert(&r1));
        assert!(!space.insert(&r2), "dependent row must not grow the space");
        assert!(space.insert(&r3));
        assert_eq!(space.dim(), 2);
        assert!(space.contains(&r2));
        let outside = vec![Scalar::zero(), Scalar::zero(), Scalar::one()];
        assert!(!space.contains(&outside));
    }

    #[test]
    fn rowspace_basis_is_order_independent() {
        let rows = [
            vec![Scalar::from_int(1), Scalar::from_int(1), Scalar::from_int(0)],
            vec![Scalar::from_int(0), Scalar::from_int(2), Scalar::from_int(2)],
            vec![Scalar::from_int(1), Scalar::from_int(3), Scalar::from_int(2)],
        ];
        let mut forward = RowSpace::new(3);
        let mut backward = RowSpace::new(3);
        for r in rows.iter() {
            forward.insert(r);
        }
        for r in rows.iter().rev() {
            backward.insert(r);
        }
        assert_eq!(forward.dim(), backward.dim());
        assert_eq!(forward.basis_rows(), backward.basis_rows());
    }
}
