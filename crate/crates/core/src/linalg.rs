//! Dense exact linear algebra over a [`Field`].

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut E {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&E) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<E>], zero: E) -> Self {
        let mut m = Matrix::filled(rows, columns.len(), zero);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn is_zero_matrix<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.data.iter().all(|x| f.is_zero(x))
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if !f.is_zero(bkj) {
                    f.add_mul_assign(out.get_mut(i, j), aik, bkj);
                }
            }
        }
    }
    out
}

pub fn mat_add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    let data = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| f.add(x, y))
        .collect();
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data,
    }
}

pub fn mat_sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    let data = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| f.sub(x, y))
        .collect();
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data,
    }
}

pub fn mat_scale<F: Field>(f: &F, a: &Matrix<F::Elem>, s: &F::Elem) -> Matrix<F::Elem> {
    a.map(|x| f.mul(x, s))
}

/// `y += M x` on slices.
pub fn mat_vec_acc<F: Field>(f: &F, m: &Matrix<F::Elem>, x: &[F::Elem], y: &mut [F::Elem]) {
    debug_assert_eq!(m.cols, x.len());
    debug_assert_eq!(m.rows, y.len());
    for (c, xc) in x.iter().enumerate() {
        if f.is_zero(xc) {
            continue;
        }
        for r in 0..m.rows {
            let mrc = m.get(r, c);
            if !f.is_zero(mrc) {
                f.add_mul_assign(&mut y[r], mrc, xc);
            }
        }
    }
}

pub fn mat_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, x: &[F::Elem]) -> Vec<F::Elem> {
    let mut y = vec![f.zero(); m.rows];
    mat_vec_acc(f, m, x, &mut y);
    y
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
            continue;
        };
        if p != row {
            for c in 0..m.cols {
                m.data.swap(p * m.cols + c, row * m.cols + c);
            }
        }
        let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
        for c in 0..m.cols {
            let v = f.mul(m.get(row, c), &inv);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row || f.is_zero(m.get(r, col)) {
                continue;
            }
            let factor = m.get(r, col).clone();
            for c in 0..m.cols {
                let sub = f.mul(&factor, m.get(row, c));
                let v = f.sub(m.get(r, c), &sub);
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let mut aug = zeros(f, n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, n + r, f.one());
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut inv = zeros(f, n, n);
    for r in 0..n {
        for c in 0..n {
            inv.set(r, c, aug.get(r, n + c).clone());
        }
    }
    Some(inv)
}

/// Basis of the right null space `{x : M x = 0}`, one vector per free column.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(work.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Incrementally maintained echelon basis of a subspace of `F^dim`.
///
/// Rows are stored in insertion order; every stored row vanishes at the pivots
/// of all earlier rows, so a single forward pass reduces any vector.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, dim: usize) -> Self {
        EchelonBasis {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Remainder of `v` after reduction by the stored rows.
    pub fn reduce(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        let f = &self.field;
        for (pivot, row) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            // rows are normalized to 1 at their pivot
            let factor = v[*pivot].clone();
            for (i, r) in row.iter().enumerate().skip(*pivot) {
                if !f.is_zero(r) {
                    let sub = f.mul(&factor, r);
                    v[i] = f.sub(&v[i], &sub);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.contains_prefix(v, self.rows.len())
    }

    /// Membership in the span of the first `k` inserted independent vectors.
    pub fn contains_prefix(&self, v: &[F::Elem], k: usize) -> bool {
        let f = &self.field;
        let mut v = v.to_vec();
        for (pivot, row) in self.rows.iter().take(k) {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let factor = v[*pivot].clone();
            for (i, r) in row.iter().enumerate().skip(*pivot) {
                if !f.is_zero(r) {
                    let sub = f.mul(&factor, r);
                    v[i] = f.sub(&v[i], &sub);
                }
            }
        }
        is_zero_vec(f, &v)
    }

    /// Adds `v` to the span; returns `true` if the rank grew.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.dim, "vector has wrong dimension");
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !self.field.is_zero(x)) else {
            return false;
        };
        let inv = self.field.inv(&r[pivot]).expect("nonzero pivot");
        for x in r.iter_mut().skip(pivot) {
            *x = self.field.mul(x, &inv);
        }
        self.rows.push((pivot, r));
        true
    }

    pub fn basis(&self) -> impl Iterator<Item = &[F::Elem]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }
}

/// Solves `M x = b` for a matrix with independent columns; `None` if `b` is
/// outside the column span.
pub fn solve_columns<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let mut aug = zeros(f, m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    assert_eq!(
        pivots.len(),
        m.cols,
        "solve_columns needs independent columns"
    );
    Some((0..m.cols).map(|r| aug.get(r, m.cols).clone()).collect())
}
