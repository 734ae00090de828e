//! Exact rational linear algebra: sparse matrices, rank, null spaces and
//! span membership.
//!
//! Everything here is exact. Elimination works on sparse rows and picks, for
//! each column, the candidate pivot whose entry has the smallest bit length,
//! which keeps coefficients small on the ±1 / binomial matrices produced by
//! differentials and ideal slices.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds the rational `numer / denom`.
///
/// Panics if `denom` is zero.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds the integer rational `value`.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub(crate) fn bit_length(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("vector {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}) is outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// A sparse row vector: `(column, value)` pairs sorted by column, with no
/// stored zeros.
pub(crate) type SparseVec = Vec<(usize, Rational)>;

/// Sparse rational matrix with no stored zero entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = SparseMatrix::zeros(size, size);
        for i in 0..size {
            m.entries.insert((i, i), Rational::one());
        }
        m
    }

    /// Builds a matrix from dense rows. All rows must have length `cols`.
    pub fn from_dense(cols: usize, rows: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = SparseMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::LengthMismatch {
                    index: r,
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((r, c), v.clone());
                }
            }
        }
        Ok(m)
    }

    /// Convenience constructor from small integer rows.
    pub fn from_int_rows(cols: usize, rows: &[&[i64]]) -> Result<Self, LinalgError> {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| int(v)).collect())
            .collect();
        SparseMatrix::from_dense(cols, &dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Sets an entry; writing zero removes it.
    pub fn set(&mut self, row: usize, col: usize, value: Rational) -> Result<(), LinalgError> {
        if row >= self.rows || col >= self.cols {
            return Err(LinalgError::OutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
        Ok(())
    }

    /// Adds `value` to an entry, dropping it if the sum cancels.
    pub(crate) fn add_to(&mut self, row: usize, col: usize, value: Rational) {
        debug_assert!(row < self.rows && col < self.cols);
        let slot = self
            .entries
            .entry((row, col))
            .or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            out[r][c] = v.clone();
        }
        out
    }

    pub(crate) fn sparse_rows(&self) -> Vec<SparseVec> {
        let mut out: Vec<SparseVec> = vec![Vec::new(); self.rows];
        // BTreeMap iteration is row-major, so each row comes out sorted.
        for (&(r, c), v) in &self.entries {
            out[r].push((c, v.clone()));
        }
        out
    }
}

/// `target -= factor * source`, both sorted sparse vectors.
pub(crate) fn sub_scaled(target: &SparseVec, factor: &Rational, source: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let take_target = j >= source.len() || (i < target.len() && target[i].0 < source[j].0);
        let take_source = i >= target.len() || (j < source.len() && source[j].0 < target[i].0);
        if take_target {
            out.push(target[i].clone());
            i += 1;
        } else if take_source {
            out.push((source[j].0, -(factor * &source[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - factor * &source[j].1;
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale(v: &mut SparseVec, factor: &Rational) {
    for (_, x) in v.iter_mut() {
        *x *= factor;
    }
}

fn lookup(v: &SparseVec, col: usize) -> Option<&Rational> {
    v.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &v[i].1)
}

/// Row echelon form with leading entries normalised to one. Rows come back
/// ordered by strictly increasing leading column.
fn echelon_rows(rows: Vec<SparseVec>) -> Vec<SparseVec> {
    // Bucket the active rows by their leading column and sweep columns left
    // to right; each bucket contributes at most one pivot.
    let mut buckets: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
    for row in rows.into_iter().filter(|r| !r.is_empty()) {
        buckets.entry(row[0].0).or_default().push(row);
    }
    let mut pivots = Vec::new();
    while let Some((col, mut candidates)) = buckets.pop_first() {
        let best = candidates
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| (bit_length(&r[0].1), r.len()))
            .map(|(i, _)| i)
            .expect("buckets are never empty");
        let mut pivot = candidates.swap_remove(best);
        let inv = pivot[0].1.recip();
        scale(&mut pivot, &inv);
        for row in candidates {
            let reduced = sub_scaled(&row, &row[0].1, &pivot);
            debug_assert!(reduced.first().is_none_or(|(c, _)| *c > col));
            if let Some(&(lead, _)) = reduced.first() {
                buckets.entry(lead).or_default().push(reduced);
            }
        }
        pivots.push(pivot);
    }
    pivots
}

/// Reduced row echelon form: each pivot row has a one at its pivot column and
/// zeros at every other pivot column.
fn reduced_echelon_rows(rows: Vec<SparseVec>) -> Vec<SparseVec> {
    let mut rows = echelon_rows(rows);
    for k in (0..rows.len()).rev() {
        let col = rows[k][0].0;
        let (above, rest) = rows.split_at_mut(k);
        let pivot = &rest[0];
        for row in above.iter_mut() {
            if let Some(f) = lookup(row, col).cloned() {
                *row = sub_scaled(row, &f, pivot);
            }
        }
    }
    rows
}

/// Rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    echelon_rows(m.sparse_rows()).len()
}

/// Basis of the right null space `{x : m x = 0}`. Its length is always
/// `cols - rank(m)`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let rref = reduced_echelon_rows(m.sparse_rows());
    let pivot_cols: HashMap<usize, usize> =
        rref.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
    let mut basis = Vec::with_capacity(m.cols() - rref.len());
    for free in (0..m.cols()).filter(|c| !pivot_cols.contains_key(c)) {
        let mut v = vec![Rational::zero(); m.cols()];
        v[free] = Rational::one();
        for row in &rref {
            if let Some(x) = lookup(row, free) {
                v[row[0].0] = -x.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Finds coefficients `c` with `Σ c_i vectors[i] = target`, or `None` if the
/// target is outside the span.
pub fn solve_in_span(
    vectors: &[Vec<Rational>],
    target: &[Rational],
) -> Result<Option<Vec<Rational>>, LinalgError> {
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != target.len() {
            return Err(LinalgError::LengthMismatch {
                index: i,
                expected: target.len(),
                found: v.len(),
            });
        }
    }
    let mut ech = Echelon::tracking();
    for v in vectors {
        ech.insert(to_sparse(v));
    }
    Ok(ech
        .express(&to_sparse(target))
        .map(|combo| to_dense(&combo, vectors.len())))
}

pub(crate) fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Incrementally built echelon basis of a subspace.
///
/// When tracking is enabled every pivot row remembers which combination of
/// inserted vectors produced it, so membership queries can return explicit
/// coefficients.
#[derive(Debug, Clone, Default)]
pub(crate) struct Echelon {
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
    track: bool,
    inserted: usize,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon::default()
    }

    pub(crate) fn tracking() -> Self {
        Echelon {
            track: true,
            ..Echelon::default()
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivots. Returns the residual and the
    /// combination of inserted vectors that was subtracted.
    fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut combo: SparseVec = Vec::new();
        let mut i = 0;
        while i < v.len() {
            let col = v[i].0;
            if let Some((row, row_combo)) = self.pivots.get(&col) {
                let f = v[i].1.clone();
                v = sub_scaled(&v, &f, row);
                if self.track {
                    // combo tracks what has been subtracted: combo += f * row_combo
                    combo = sub_scaled(&combo, &-f, row_combo);
                }
            } else {
                i += 1;
            }
        }
        (v, combo)
    }

    /// Inserts a vector; returns true if it enlarged the span.
    pub(crate) fn insert(&mut self, v: SparseVec) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (mut residual, combo) = self.reduce(v);
        if residual.is_empty() {
            return false;
        }
        // residual = v - combo·inserted, so its own combination is e_index - combo.
        let mut own = if self.track {
            sub_scaled(&vec![(index, Rational::one())], &Rational::one(), &combo)
        } else {
            Vec::new()
        };
        let inv = residual[0].1.recip();
        scale(&mut residual, &inv);
        scale(&mut own, &inv);
        self.pivots.insert(residual[0].0, (residual, own));
        true
    }

    pub(crate) fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }

    /// Coefficients over the inserted vectors reproducing `v`, if `v` is in
    /// the span. Only meaningful for tracking instances.
    pub(crate) fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        debug_assert!(self.track);
        let (residual, combo) = self.reduce(v.clone());
        residual.is_empty().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn mat_vec(m: &SparseMatrix, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); m.rows()];
        for (r, c, x) in m.entries() {
            out[r] += x * &v[c];
        }
        out
    }

    #[test]
    fn rank_of_empty_and_identity() {
        assert_eq!(rank(&SparseMatrix::zeros(0, 0)), 0);
        assert_eq!(rank(&SparseMatrix::identity(2)), 2);
    }

    #[test]
    fn rank_of_degree_eight_ideal_slice() {
        let m = SparseMatrix::from_int_rows(
            5,
            &[
                &[1, 1, 1, 0, 0],
                &[0, 1, 1, 1, 0],
                &[0, 0, 1, 1, 1],
                &[0, 1, 1, 0, 0],
                &[0, 0, 1, 1, 0],
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 5);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(2, 3)).len(), 3);
        let row = SparseMatrix::from_int_rows(3, &[&[1, 1, 1]]).unwrap();
        let ker = kernel_basis(&row);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(mat_vec(&row, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve_in_span(&[ints(&[1, 0])], &ints(&[2, 0])).unwrap(),
            Some(ints(&[2]))
        );
        assert_eq!(
            solve_in_span(&[ints(&[1, 0])], &ints(&[0, 1])).unwrap(),
            None
        );
        assert_eq!(
            solve_in_span(
                &[ints(&[1, 1, 1, 0, 0]), ints(&[0, 1, 1, 1, 0])],
                &ints(&[1, 0, 0, -1, 0])
            )
            .unwrap(),
            Some(ints(&[1, -1]))
        );
    }

    #[test]
    fn solve_rejects_length_mismatch() {
        let err = solve_in_span(&[ints(&[1, 0, 0])], &ints(&[1, 0])).unwrap_err();
        assert!(matches!(err, LinalgError::LengthMismatch { index: 0, .. }));
    }

    #[test]
    fn solve_with_dependent_vectors() {
        let vs = vec![ints(&[1, 2]), ints(&[2, 4]), ints(&[0, 1])];
        let c = solve_in_span(&vs, &ints(&[3, 7])).unwrap().unwrap();
        let mut acc = vec![Rational::zero(); 2];
        for (ci, v) in c.iter().zip(&vs) {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += ci * x;
            }
        }
        assert_eq!(acc, ints(&[3, 7]));
    }

    #[test]
    fn pivoting_handles_fractions() {
        let m = SparseMatrix::from_dense(
            2,
            &[
                vec![rational(1, 3), rational(2, 7)],
                vec![rational(2, 3), rational(4, 7)],
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 1);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        assert!(mat_vec(&m, &ker[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn set_zero_removes_entry() {
        let mut m = SparseMatrix::zeros(2, 2);
        m.set(0, 1, int(3)).unwrap();
        assert_eq!(m.nnz(), 1);
        m.set(0, 1, int(0)).unwrap();
        assert_eq!(m.nnz(), 0);
        assert!(m.set(2, 0, int(1)).is_err());
    }
}
