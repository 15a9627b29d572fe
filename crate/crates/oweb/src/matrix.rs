//! Sparse exact matrices over a field, plus elimination routines
//! (rank, kernel, inverse) in the fraction-free Bareiss style.
//!
//! The scalar type is abstracted by [`FieldScalar`] so the same machinery
//! serves both ℚ(q) matrices and their q = 1 specializations over ℚ.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Minimal exact-field interface used by the matrix code.
pub trait FieldScalar: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl FieldScalar for crate::ratfun::RatFun {
    fn zero() -> Self {
        crate::ratfun::RatFun::zero()
    }
    fn one() -> Self {
        crate::ratfun::RatFun::one()
    }
    fn is_zero(&self) -> bool {
        crate::ratfun::RatFun::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl FieldScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// A sparse matrix with rows of sorted `(column, value)` pairs; no zero
/// values are stored, so structural equality is semantic equality.
#[derive(Clone, PartialEq)]
pub struct SpMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, T)>>,
}

impl<T: FieldScalar> SpMat<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SpMat {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, T::one())]).collect();
        SpMat {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn scalar(n: usize, c: &T) -> Self {
        Self::identity(n).scale(c)
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut maps: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet out of bounds");
            if v.is_zero() {
                continue;
            }
            match maps[i].get_mut(&j) {
                Some(old) => {
                    let s = old.add(&v);
                    if s.is_zero() {
                        maps[i].remove(&j);
                    } else {
                        *old = s;
                    }
                }
                None => {
                    maps[i].insert(j, v);
                }
            }
        }
        SpMat {
            rows,
            cols,
            data: maps
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(T::zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.nnz() == 0
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            t[j].push((i, v.clone()));
        }
        SpMat {
            rows: self.cols,
            cols: self.rows,
            data: t,
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return SpMat::zero(self.rows, self.cols);
        }
        SpMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, v.mul(c))).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SpMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, v.neg())).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let mut data = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let (a, b) = (&self.data[i], &other.data[i]);
            let mut out = Vec::with_capacity(a.len() + b.len());
            let (mut x, mut y) = (0, 0);
            while x < a.len() || y < b.len() {
                let pick_a = y >= b.len() || (x < a.len() && a[x].0 < b[y].0);
                let pick_b = x >= a.len() || (y < b.len() && b[y].0 < a[x].0);
                if pick_a {
                    out.push(a[x].clone());
                    x += 1;
                } else if pick_b {
                    out.push(b[y].clone());
                    y += 1;
                } else {
                    let s = a[x].1.add(&b[y].1);
                    if !s.is_zero() {
                        out.push((a[x].0, s));
                    }
                    x += 1;
                    y += 1;
                }
            }
            data.push(out);
        }
        SpMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut data = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            for (k, a) in &self.data[i] {
                for (j, b) in &other.data[*k] {
                    let prod = a.mul(b);
                    if prod.is_zero() {
                        continue;
                    }
                    match acc.get_mut(j) {
                        Some(old) => {
                            let s = old.add(&prod);
                            if s.is_zero() {
                                acc.remove(j);
                            } else {
                                *old = s;
                            }
                        }
                        None => {
                            acc.insert(*j, prod);
                        }
                    }
                }
            }
            data.push(acc.into_iter().collect());
        }
        SpMat {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Kronecker product with the left factor most significant:
    /// `(A ⊗ B)[i1*r2+i2, j1*c2+j2] = A[i1,j1] * B[i2,j2]`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![Vec::new(); rows];
        for (i1, j1, a) in self.entries() {
            for (i2, j2, b) in other.entries() {
                let v = a.mul(b);
                if !v.is_zero() {
                    data[i1 * other.rows + i2].push((j1 * other.cols + j2, v));
                }
            }
        }
        for r in &mut data {
            r.sort_by_key(|(j, _)| *j);
        }
        SpMat { rows, cols, data }
    }

    pub fn map<U: FieldScalar, E>(
        &self,
        mut f: impl FnMut(usize, usize, &T) -> Result<U, E>,
    ) -> Result<SpMat<U>, E> {
        let mut data = Vec::with_capacity(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, v) in row {
                let u = f(i, *j, v)?;
                if !u.is_zero() {
                    out.push((*j, u));
                }
            }
            data.push(out);
        }
        Ok(SpMat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn from_dense(d: &[Vec<T>]) -> Self {
        let rows = d.len();
        let cols = d.first().map_or(0, |r| r.len());
        SpMat::from_triplets(
            rows,
            cols,
            d.iter().enumerate().flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    }
}

impl<T: FieldScalar> fmt::Debug for SpMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SpMat {}x{} ({} nnz)", self.rows, self.cols, self.nnz())?;
        if self.rows <= 16 && self.cols <= 16 {
            for i in 0..self.rows {
                let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Elimination
// ---------------------------------------------------------------------------

/// Row echelon reduction in the fraction-free Bareiss style: the update
/// `a[i][j] := (piv * a[i][j] - a[i][pc] * a[r][j]) / prev_piv` keeps every
/// division exact, so polynomial entries stay polynomial and intermediate
/// expression swell is controlled. Returns the pivot column list; `mat` is
/// left in echelon form (pivot rows first).
fn bareiss_echelon<T: FieldScalar>(mat: &mut Vec<Vec<T>>) -> Vec<usize> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    let mut prev_piv = T::one();
    for c in 0..cols {
        // Find a pivot row.
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let piv = mat[r][c].clone();
        for i in (r + 1)..rows {
            if mat[i].iter().all(|v| v.is_zero()) {
                continue;
            }
            let f = mat[i][c].clone();
            for j in 0..cols {
                let t = piv.mul(&mat[i][j]).sub(&f.mul(&mat[r][j]));
                mat[i][j] = t.div(&prev_piv);
            }
        }
        prev_piv = piv;
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivot_cols
}

/// Rank of a dense matrix.
pub fn rank<T: FieldScalar>(mut mat: Vec<Vec<T>>) -> usize {
    bareiss_echelon(&mut mat).len()
}

/// A basis of the right kernel `{x : mat · x = 0}` of a dense matrix with
/// `cols` columns. Each basis vector is dense of length `cols`.
pub fn kernel_basis<T: FieldScalar>(mut mat: Vec<Vec<T>>, cols: usize) -> Vec<Vec<T>> {
    if mat.is_empty() {
        // No constraints: the standard basis.
        return (0..cols)
            .map(|i| {
                let mut v = vec![T::zero(); cols];
                v[i] = T::one();
                v
            })
            .collect();
    }
    debug_assert!(mat.iter().all(|r| r.len() == cols));
    let pivot_cols = bareiss_echelon(&mut mat);
    let rank = pivot_cols.len();
    // Normalize pivot rows (Jordan step) to solve by back-substitution.
    // Work over the field now; exactness is free.
    for r in (0..rank).rev() {
        let pc = pivot_cols[r];
        let piv = mat[r][pc].clone();
        for j in 0..cols {
            mat[r][j] = mat[r][j].div(&piv);
        }
        for i in 0..r {
            let f = mat[i][pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = mat[i][j].sub(&f.mul(&mat[r][j]));
                mat[i][j] = t;
            }
        }
    }
    let pivot_set: std::collections::HashSet<usize> = pivot_cols.iter().copied().collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![T::zero(); cols];
        v[fc] = T::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = mat[r][fc].neg();
        }
        basis.push(v);
    }
    basis
}

/// Exact inverse of a square sparse matrix, or `None` if singular.
pub fn invert<T: FieldScalar>(mat: &SpMat<T>) -> Option<SpMat<T>> {
    assert_eq!(mat.nrows(), mat.ncols(), "invert requires a square matrix");
    let n = mat.nrows();
    let mut aug: Vec<Vec<T>> = mat
        .to_dense()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            let mut id = vec![T::zero(); n];
            id[i] = T::one();
            row.extend(id);
            row
        })
        .collect();
    // Gauss-Jordan over the field with exact scalars.
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let piv = aug[c][c].clone();
        for j in 0..2 * n {
            aug[c][j] = aug[c][j].div(&piv);
        }
        for i in 0..n {
            if i == c || aug[i][c].is_zero() {
                continue;
            }
            let f = aug[i][c].clone();
            for j in 0..2 * n {
                let t = aug[i][j].sub(&f.mul(&aug[c][j]));
                aug[i][j] = t;
            }
        }
    }
    let inv_rows: Vec<Vec<T>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
    Some(SpMat::from_dense(&inv_rows))
}
