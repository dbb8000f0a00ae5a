use super::matrix::{kernel, rref, solve, Matrix, Vector};
use super::scalar::{Field, Scalar};

/// A finite-dimensional vector space with a fixed ordered basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    pub field: Field,
    pub dim: usize,
    pub labels: Vec<String>,
}

impl FinSpace {
    pub fn new(field: Field, dim: usize) -> FinSpace {
        FinSpace {
            field,
            dim,
            labels: (0..dim).map(|i| format!("e{i}")).collect(),
        }
    }

    pub fn with_labels(field: Field, labels: Vec<String>) -> FinSpace {
        FinSpace {
            field,
            dim: labels.len(),
            labels,
        }
    }
}

/// A linear map between spaces with fixed bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub domain: FinSpace,
    pub codomain: FinSpace,
    pub matrix: Matrix,
}

impl LinMap {
    pub fn new(domain: FinSpace, codomain: FinSpace, matrix: Matrix) -> LinMap {
        assert_eq!(
            matrix.shape(),
            (codomain.dim, domain.dim),
            "matrix shape does not match the spaces"
        );
        LinMap {
            domain,
            codomain,
            matrix,
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.apply(v)
    }

    pub fn kernel(&self) -> Vec<Vector> {
        kernel(&self.matrix)
    }

    pub fn rank(&self) -> usize {
        rref(&self.matrix).rank
    }

    pub fn solve(&self, target: &[Scalar]) -> Option<Vector> {
        solve(&self.matrix, target)
    }

    pub fn compose(&self, inner: &LinMap) -> LinMap {
        assert_eq!(inner.codomain.dim, self.domain.dim, "maps do not compose");
        LinMap::new(
            inner.domain.clone(),
            self.codomain.clone(),
            self.matrix.mul(&inner.matrix),
        )
    }
}

/// Quotient of `k^ambient_dim` by the span of a list of relations.
///
/// The quotient basis is indexed by the non-pivot columns of the reduced
/// relation matrix; the section sends quotient basis vector `j` to the
/// ambient unit vector at `free_columns[j]`.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub field: Field,
    pub ambient_dim: usize,
    pub dim: usize,
    pub relation_rank: usize,
    pub free_columns: Vec<usize>,
    pub projection: Matrix,
    pub section: Matrix,
}

impl QuotientSpace {
    pub fn new(field: Field, ambient_dim: usize, relations: &[Vector]) -> QuotientSpace {
        let rel = if relations.is_empty() {
            Matrix::zeros(field, 0, ambient_dim)
        } else {
            Matrix::from_rows(field, relations.to_vec()).expect("relation vectors share a field")
        };
        let r = rref(&rel);
        let mut is_pivot = vec![false; ambient_dim];
        for &p in &r.pivots {
            is_pivot[p] = true;
        }
        let free_columns: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
        let dim = free_columns.len();
        let mut projection = Matrix::zeros(field, dim, ambient_dim);
        let mut section = Matrix::zeros(field, ambient_dim, dim);
        for (j, &c) in free_columns.iter().enumerate() {
            projection.set(j, c, field.one());
            section.set(c, j, field.one());
        }
        for (row, &p) in r.pivots.iter().enumerate() {
            for (j, &c) in free_columns.iter().enumerate() {
                let a = r.reduced.get(row, c);
                if !a.is_zero() {
                    projection.set(j, p, -a);
                }
            }
        }
        QuotientSpace {
            field,
            ambient_dim,
            dim,
            relation_rank: r.rank,
            free_columns,
            projection,
            section,
        }
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.projection.apply(v)
    }

    pub fn lift(&self, q: &[Scalar]) -> Vector {
        self.section.apply(q)
    }
}

/// Index bookkeeping for `U ⊗_k V`: `(i, j) <-> i * dim_v + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorIndex {
    pub dim_u: usize,
    pub dim_v: usize,
}

impl TensorIndex {
    pub fn dim(&self) -> usize {
        self.dim_u * self.dim_v
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.dim_u && j < self.dim_v);
        i * self.dim_v + j
    }

    pub fn unflat(&self, k: usize) -> (usize, usize) {
        (k / self.dim_v, k % self.dim_v)
    }
}

pub fn tensor_k(u: &FinSpace, v: &FinSpace) -> (FinSpace, TensorIndex) {
    let idx = TensorIndex {
        dim_u: u.dim,
        dim_v: v.dim,
    };
    let mut labels = Vec::with_capacity(idx.dim());
    for a in &u.labels {
        for b in &v.labels {
            labels.push(format!("{a}⊗{b}"));
        }
    }
    (FinSpace::with_labels(u.field, labels), idx)
}

/// Kronecker product of vectors, row-major.
pub fn kron_vec(x: &[Scalar], y: &[Scalar]) -> Vector {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            out.push(a * b);
        }
    }
    out
}

pub fn kron_all(field: Field, parts: &[&[Scalar]]) -> Vector {
    let mut acc = vec![field.one()];
    for p in parts {
        acc = kron_vec(&acc, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::matrix::unit_vector;

    #[test]
    fn quotient_examples() {
        let q = Field::Rational;
        let a = QuotientSpace::new(q, 2, &[]);
        assert_eq!(a.dim, 2);
        assert_eq!(a.projection, Matrix::identity(q, 2));
        let b = QuotientSpace::new(q, 2, &[unit_vector(q, 2, 0), unit_vector(q, 2, 1)]);
        assert_eq!(b.dim, 0);

        let f2 = Field::prime(2).unwrap();
        let e = |i| unit_vector(f2, 4, i);
        let r1: Vector = e(0).iter().zip(e(3)).map(|(x, y)| x + &y).collect();
        let r2: Vector = e(1).iter().zip(e(2)).map(|(x, y)| x + &y).collect();
        let c = QuotientSpace::new(f2, 4, &[r1.clone(), r2.clone()]);
        assert_eq!(c.dim, 2);
        assert_eq!(c.free_columns, vec![2, 3]);
        assert!(c.project(&r1).iter().all(Scalar::is_zero));
        assert!(c.project(&r2).iter().all(Scalar::is_zero));
        assert_eq!(c.projection.mul(&c.section), Matrix::identity(f2, 2));
    }

    #[test]
    fn tensor_index_examples() {
        let q = Field::Rational;
        let (s, idx) = tensor_k(&FinSpace::new(q, 2), &FinSpace::new(q, 3));
        assert_eq!(s.dim, 6);
        assert_eq!(idx.flat(1, 2), 5);
        assert_eq!(idx.unflat(5), (1, 2));
        let (_, idx) = tensor_k(&FinSpace::new(q, 1), &FinSpace::new(q, 4));
        assert_eq!(idx.flat(0, 3), 3);
        let f2 = Field::prime(2).unwrap();
        let (_, idx) = tensor_k(&FinSpace::new(f2, 2), &FinSpace::new(f2, 2));
        assert_eq!(idx.flat(1, 0), 2);
    }
}
