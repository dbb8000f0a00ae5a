use std::fmt;

use serde::Serialize;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};
use crate::par;

/// Coordinate vector with respect to a fixed ordered basis.
pub type Vector = Vec<Scalar>;

pub fn zeros(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = zeros(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `y += a * x`
pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    debug_assert_eq!(y.len(), x.len());
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(a * xi);
        }
    }
}

pub fn scale(a: &Scalar, x: &[Scalar]) -> Vector {
    x.iter().map(|xi| a * xi).collect()
}

pub fn add_vec(x: &[Scalar], y: &[Scalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(x: &[Scalar], y: &[Scalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Dense matrix over a single field, stored row-major. Columns are images of
/// domain basis vectors, so `apply` is ordinary matrix-vector multiplication.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Matrix {
    #[serde(skip)]
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every entry must lie in `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {ncols}",
                    row.len()
                )));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::MixedScalars {
                        expected: field,
                        found: s.to_string(),
                    });
                }
                data.push(s);
            }
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Builds a matrix with the given columns (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Matrix {
        let cols = columns.len();
        let mut m = Matrix::zeros(field, rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, s) in c.iter().enumerate() {
                if !s.is_zero() {
                    m.set(i, j, s.clone());
                }
            }
        }
        m
    }

    /// Builds a matrix column by column from `f(j)`, in parallel when large.
    pub fn build_columns<F>(field: Field, rows: usize, cols: usize, f: F) -> Matrix
    where
        F: Fn(usize) -> Vector + Sync + Send,
    {
        let columns = par::map_range(cols, f);
        Matrix::from_columns(field, rows, &columns)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        let mut out = zeros(self.field, self.rows);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(a * vj);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        let n = other.cols;
        let field = self.field;
        let mut rows: Vec<Vector> = vec![Vec::new(); self.rows];
        par::for_each_mut(&mut rows, |i, row| {
            let mut acc = zeros(field, n);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                axpy(&mut acc, a, other.row(k));
            }
            *row = acc;
        });
        for (i, row) in rows.into_iter().enumerate() {
            out.data[i * n..(i + 1) * n].clone_from_slice(&row);
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, a: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| a * x).collect(),
        }
    }

    /// Kronecker product; row index `(i, k) -> i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(field: Field, cols: usize, blocks: &[Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn hstack(field: Field, rows: usize, blocks: &[Matrix]) -> Matrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    /// Select a subset of columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Columns where `self` and `other` differ, with the difference vectors.
    pub fn column_defects(&self, other: &Matrix) -> Vec<(usize, Vector)> {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in comparison");
        (0..self.cols)
            .filter_map(|j| {
                let d: Vector = (0..self.rows)
                    .map(|i| self.get(i, j) - other.get(i, j))
                    .collect();
                (!is_zero_vec(&d)).then_some((j, d))
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hstack(self.field, n, &[self.clone(), Matrix::identity(self.field, n)]);
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(r.reduced.select_columns(&idx))
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: Matrix,
}

/// Reduced row-echelon form. Pivot choice is deterministic: scan columns left
/// to right and take the topmost remaining row with a nonzero entry.
pub fn rref(m: &Matrix) -> Rref {
    let field = m.field;
    let (nrows, ncols) = m.shape();
    let mut rows: Vec<Vector> = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        let pivot_row: Vector = rows[r].iter().map(|x| x * &inv).collect();
        rows[r] = pivot_row.clone();
        let prow = &pivot_row;
        par::for_each_mut(&mut rows, |i, row| {
            if i == r || row[c].is_zero() {
                return;
            }
            let f = -&row[c];
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                if !y.is_zero() {
                    *x += &(&f * y);
                }
            }
        });
        pivots.push(c);
        r += 1;
    }
    let mut data = Vec::with_capacity(nrows * ncols);
    for row in rows {
        data.extend(row);
    }
    Rref {
        rank: pivots.len(),
        pivots,
        reduced: Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data,
        },
    }
}

/// Basis of the kernel: one vector per free column, with that coordinate 1.
pub fn kernel(m: &Matrix) -> Vec<Vector> {
    let field = m.field;
    let n = m.cols;
    let r = rref(m);
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = zeros(field, n);
            v[f] = field.one();
            for (row, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.reduced.get(row, f);
            }
            v
        })
        .collect()
}

/// One solution of `m x = target` with free variables set to zero.
pub fn solve(m: &Matrix, target: &[Scalar]) -> Option<Vector> {
    assert_eq!(target.len(), m.rows, "target length does not match codomain");
    let field = m.field;
    let n = m.cols;
    let rhs = Matrix::from_columns(field, m.rows, &[target.to_vec()]);
    let aug = Matrix::hstack(field, m.rows, &[m.clone(), rhs]);
    let r = rref(&aug);
    if r.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = zeros(field, n);
    for (row, &p) in r.pivots.iter().enumerate() {
        x[p] = r.reduced.get(row, n).clone();
    }
    Some(x)
}

/// Solve `m X = targets` for several right-hand sides at once.
pub fn solve_many(m: &Matrix, targets: &Matrix) -> Option<Matrix> {
    assert_eq!(targets.rows, m.rows, "target rows do not match codomain");
    let field = m.field;
    let n = m.cols;
    let k = targets.cols;
    let aug = Matrix::hstack(field, m.rows, &[m.clone(), targets.clone()]);
    let r = rref(&aug);
    if r.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = Matrix::zeros(field, n, k);
    for (row, &p) in r.pivots.iter().enumerate() {
        for j in 0..k {
            x.set(p, j, r.reduced.get(row, n + j).clone());
        }
    }
    Some(x)
}

/// Basis of the column space, taken from the original pivot columns.
pub fn image(m: &Matrix) -> Vec<Vector> {
    rref(m).pivots.iter().map(|&p| m.column(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix {
        let f = Field::Rational;
        Matrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_examples() {
        let f2 = Field::prime(2).unwrap();
        let r = rref(&Matrix::identity(f2, 2));
        assert_eq!((r.rank, r.pivots.clone()), (2, vec![0, 1]));
        let r = rref(&Matrix::zeros(Field::Rational, 3, 3));
        assert_eq!((r.rank, r.pivots.len()), (0, 0));
        let r = rref(&q(&[&[1, 2], &[2, 4]]));
        assert_eq!((r.rank, r.pivots.clone()), (1, vec![0]));
        assert_eq!(r.reduced, q(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn mixed_kinds_are_a_type_error() {
        let rows = vec![vec![Field::Rational.one(), Field::Prime(2).one()]];
        assert!(matches!(
            Matrix::from_rows(Field::Rational, rows),
            Err(Error::MixedScalars { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::identity(Field::Rational, 3)).is_empty());
        assert_eq!(kernel(&Matrix::zeros(Field::Rational, 3, 3)).len(), 3);
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_rows(f2, vec![vec![f2.one(), f2.one()]]).unwrap();
        assert_eq!(kernel(&m), vec![vec![f2.one(), f2.one()]]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Field::Rational, 2);
        let v = vec![Field::Rational.from_i64(3), Field::Rational.from_i64(-1)];
        assert_eq!(solve(&id, &v), Some(v.clone()));
        assert_eq!(solve(&Matrix::zeros(Field::Rational, 2, 2), &v), None);
        let m = q(&[&[1, 0], &[0, 0]]);
        let t = vec![Field::Rational.one(), Field::Rational.zero()];
        assert_eq!(solve(&m, &t), Some(t.clone()));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = q(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(Field::Rational, 2));
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert!(Matrix::zeros(Field::Rational, 0, 0).inverse().is_some());
    }

    #[test]
    fn kron_index_convention() {
        let a = q(&[&[1, 2]]);
        let b = q(&[&[0], &[1]]);
        let k = a.kron(&b);
        assert_eq!(k.shape(), (2, 2));
        assert_eq!(k, q(&[&[0, 0], &[1, 2]]));
    }
}
