use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactla::{axpy, sub_vec, unit_vector, zeros, Field, FinSpace, Matrix, Scalar, Vector};
use crate::report::{Check, Report};

/// A finite-dimensional associative unital algebra given by structure
/// constants: `e_i · e_j = Σ_k mult[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub space: FinSpace,
    mult: Vec<Vector>,
    unit: Vector,
}

impl Algebra {
    pub fn new(field: Field, labels: Vec<String>, mult: Vec<Vec<Vector>>, unit: Vector) -> Result<Algebra> {
        let dim = labels.len();
        if mult.len() != dim || unit.len() != dim {
            return Err(Error::Shape(format!(
                "algebra of dimension {dim} needs a {dim}x{dim}x{dim} table and a unit of length {dim}"
            )));
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for (i, row) in mult.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Shape(format!("mult[{i}] has length {}", row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::Shape(format!("mult[{i}][{j}] has length {}", v.len())));
                }
                check_field(field, &v)?;
                flat.push(v);
            }
        }
        check_field(field, &unit)?;
        Ok(Algebra {
            space: FinSpace::with_labels(field, labels),
            mult: flat,
            unit,
        })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Algebra {
        Algebra {
            space: FinSpace::with_labels(field, vec!["1".into()]),
            mult: vec![vec![field.one()]],
            unit: vec![field.one()],
        }
    }

    /// `k[x]/(x^n + c_{n-1} x^{n-1} + … + c_0)` with basis `1, x, …, x^{n-1}`.
    pub fn polynomial_quotient(field: Field, var: &str, low_coeffs: &[Scalar]) -> Algebra {
        let n = low_coeffs.len();
        assert!(n > 0, "polynomial must have positive degree");
        let reduce = |mut v: Vector| -> Vector {
            for d in (n..v.len()).rev() {
                let c = v[d].clone();
                if c.is_zero() {
                    continue;
                }
                v[d] = field.zero();
                for (i, a) in low_coeffs.iter().enumerate() {
                    v[d - n + i] -= &(&c * a);
                }
            }
            v.truncate(n);
            v
        };
        let mut mult = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut v = zeros(field, 2 * n - 1);
                v[i + j] = field.one();
                mult.push(reduce(v));
            }
        }
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        Algebra {
            space: FinSpace::with_labels(field, labels),
            mult,
            unit: unit_vector(field, n, 0),
        }
    }

    /// Upper triangular 2×2 matrices, basis `e11, e12, e22`.
    pub fn upper_triangular(field: Field) -> Algebra {
        let e = |i| unit_vector(field, 3, i);
        let z = zeros(field, 3);
        let mult = vec![
            e(0), e(1), z.clone(),
            z.clone(), z.clone(), e(1),
            z.clone(), z.clone(), e(2),
        ];
        let mut unit = e(0);
        unit[2] = field.one();
        Algebra {
            space: FinSpace::with_labels(field, vec!["e11".into(), "e12".into(), "e22".into()]),
            mult,
            unit,
        }
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.space.labels
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.field(), self.dim(), i)
    }

    /// `e_i · e_j`
    pub fn basis_product(&self, i: usize, j: usize) -> &Vector {
        &self.mult[i * self.dim() + j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zeros(self.field(), self.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xi * yj), self.basis_product(i, j));
            }
        }
        out
    }

    /// Matrix of `y ↦ a·y`.
    pub fn left_mult_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        Matrix::from_columns(self.field(), n, &(0..n).map(|j| self.mul(a, &self.basis(j))).collect::<Vec<_>>())
    }

    /// Matrix of `y ↦ y·a`.
    pub fn right_mult_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        Matrix::from_columns(self.field(), n, &(0..n).map(|j| self.mul(&self.basis(j), a)).collect::<Vec<_>>())
    }

    pub fn opposite(&self) -> Algebra {
        let n = self.dim();
        let mut mult = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                mult.push(self.basis_product(j, i).clone());
            }
        }
        Algebra {
            space: self.space.clone(),
            mult,
            unit: self.unit.clone(),
        }
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Structure constants as a nested table, `table[i][j] = e_i e_j`.
    pub fn table(&self) -> Vec<Vec<Vector>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.basis_product(i, j).clone()).collect()).collect()
    }

    /// Associativity on all basis triples and two-sided unitality on all
    /// basis elements. By multilinearity this is the full verification.
    pub fn check_axioms(&self) -> Report {
        let n = self.dim();
        let mut report = Report::new("algebra axioms");
        let mut assoc = Check::pass("associative");
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let lhs = self.mul(ij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), self.basis_product(j, k));
                    let d = sub_vec(&lhs, &rhs);
                    if !crate::exactla::is_zero_vec(&d) {
                        assoc.record(vec![i, j, k], d);
                    }
                }
            }
        }
        report.push(assoc);
        let unital = Check::from_defects(
            "unital",
            (0..n).flat_map(|i| {
                let e = self.basis(i);
                let l = sub_vec(&self.mul(&self.unit, &e), &e);
                let r = sub_vec(&self.mul(&e, &self.unit), &e);
                [(vec![i, 0], l), (vec![i, 1], r)]
            }),
        );
        report.push(unital);
        report
    }
}

fn check_field(field: Field, v: &[Scalar]) -> Result<()> {
    match v.iter().find(|s| s.field() != field) {
        Some(s) => Err(Error::MixedScalars {
            expected: field,
            found: s.to_string(),
        }),
        None => Ok(()),
    }
}

/// A k-linear map between algebras, meant to be a unital ring map.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    pub matrix: Matrix,
}

impl AlgebraMap {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: Matrix) -> Result<AlgebraMap> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Shape(format!(
                "algebra map needs a {}x{} matrix, got {}x{}",
                target.dim(),
                source.dim(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(AlgebraMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(a: Arc<Algebra>) -> AlgebraMap {
        let m = Matrix::identity(a.field(), a.dim());
        AlgebraMap {
            source: a.clone(),
            target: a,
            matrix: m,
        }
    }

    /// The structure map `k → R`.
    pub fn from_ground(r: Arc<Algebra>) -> AlgebraMap {
        let k = Arc::new(Algebra::ground(r.field()));
        let m = Matrix::from_columns(r.field(), r.dim(), &[r.unit().clone()]);
        AlgebraMap {
            source: k,
            target: r,
            matrix: m,
        }
    }

    pub fn apply(&self, s: &[Scalar]) -> Vector {
        self.matrix.apply(s)
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    /// Unit preservation and multiplicativity on all basis pairs.
    pub fn check(&self) -> Report {
        let mut report = Report::new("algebra map");
        let n = self.source.dim();
        report.push(Check::from_defects(
            "preserves unit",
            [(vec![], sub_vec(&self.apply(self.source.unit()), self.target.unit()))],
        ));
        let mut mult = Check::pass("multiplicative");
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply(self.source.basis_product(i, j));
                let rhs = self.target.mul(&self.matrix.column(i), &self.matrix.column(j));
                let d = sub_vec(&lhs, &rhs);
                if !crate::exactla::is_zero_vec(&d) {
                    mult.record(vec![i, j], d);
                }
            }
        }
        report.push(mult);
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn f4() -> Algebra {
        let f2 = Field::prime(2).unwrap();
        Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()])
    }

    #[test]
    fn f4_is_a_field_algebra() {
        let a = f4();
        assert!(a.check_axioms().passed());
        let t = a.basis(1);
        let f2 = a.field();
        assert_eq!(a.mul(&t, &t), vec![f2.one(), f2.one()]);
        let all: Vec<Vector> = (0..4)
            .map(|n| vec![f2.from_i64(n & 1), f2.from_i64(n >> 1)])
            .collect();
        for x in &all[1..] {
            assert!(all.iter().any(|y| a.mul(x, y) == *a.unit()));
        }
    }

    #[test]
    fn zero_multiplication_is_not_unital() {
        let q = Field::Rational;
        let z = vec![q.zero(), q.zero()];
        let a = Algebra::new(
            q,
            vec!["a".into(), "b".into()],
            vec![vec![z.clone(), z.clone()], vec![z.clone(), z]],
            vec![q.one(), q.zero()],
        )
        .unwrap();
        let r = a.check_axioms();
        assert!(r.get("associative").unwrap().passed);
        assert!(!r.get("unital").unwrap().passed);
    }

    #[test]
    fn dual_numbers_and_triangular() {
        let q = Field::Rational;
        let a = Algebra::polynomial_quotient(q, "x", &[q.zero(), q.zero()]);
        assert!(a.check_axioms().passed());
        let x = a.basis(1);
        assert!(crate::exactla::is_zero_vec(&a.mul(&x, &x)));
        let t = Algebra::upper_triangular(q);
        assert!(t.check_axioms().passed());
        assert!(!t.is_commutative());
    }

    #[test]
    fn algebra_maps() {
        let a = Arc::new(f4());
        let f2 = a.field();
        let incl = AlgebraMap::from_ground(a.clone());
        assert!(incl.check().passed());
        assert!(AlgebraMap::identity(a.clone()).check().passed());
        let collapse = Matrix::from_rows(f2, vec![vec![f2.one(), f2.one()], vec![f2.zero(), f2.zero()]]).unwrap();
        let bad = AlgebraMap::new(a.clone(), a, collapse).unwrap();
        let r = bad.check();
        let w = &r.get("multiplicative").unwrap().witnesses;
        assert!(w.iter().any(|w| w.basis == vec![1, 1]));
    }
}
