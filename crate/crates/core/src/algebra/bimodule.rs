use std::sync::Arc;

use super::algebra::{Algebra, AlgebraMap};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, solve_many, zeros, Field, FinSpace, Matrix, QuotientSpace, Scalar, Vector};
use crate::report::{Check, Report};

/// An `(L, R)`-bimodule given by action matrices: `left[i]` is `m ↦ e_i·m`
/// and `right[i]` is `m ↦ m·e_i`. One-sided modules use the ground field on
/// the other side.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub space: FinSpace,
    pub left_ring: Arc<Algebra>,
    pub right_ring: Arc<Algebra>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

fn same_ring(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Bimodule {
    pub fn new(
        space: FinSpace,
        left_ring: Arc<Algebra>,
        right_ring: Arc<Algebra>,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
    ) -> Result<Bimodule> {
        let n = space.dim;
        if left.len() != left_ring.dim() || right.len() != right_ring.dim() {
            return Err(Error::Shape(format!(
                "need {} left and {} right action matrices, got {} and {}",
                left_ring.dim(),
                right_ring.dim(),
                left.len(),
                right.len()
            )));
        }
        for (side, mats) in [("left", &left), ("right", &right)] {
            for (i, m) in mats.iter().enumerate() {
                if m.shape() != (n, n) {
                    return Err(Error::Shape(format!(
                        "{side}[{i}] must be {n}x{n}, got {}x{}",
                        m.rows(),
                        m.cols()
                    )));
                }
                if m.field() != space.field {
                    return Err(Error::MixedScalars {
                        expected: space.field,
                        found: m.field().to_string(),
                    });
                }
            }
        }
        Ok(Bimodule {
            space,
            left_ring,
            right_ring,
            left,
            right,
        })
    }

    /// A right module over `ring` (left side is the ground field).
    pub fn right_module(space: FinSpace, ring: Arc<Algebra>, right: Vec<Matrix>) -> Result<Bimodule> {
        let k = Arc::new(Algebra::ground(space.field));
        let id = vec![Matrix::identity(space.field, space.dim)];
        Bimodule::new(space, k, ring, id, right)
    }

    pub fn left_module(space: FinSpace, ring: Arc<Algebra>, left: Vec<Matrix>) -> Result<Bimodule> {
        let k = Arc::new(Algebra::ground(space.field));
        let id = vec![Matrix::identity(space.field, space.dim)];
        Bimodule::new(space, ring, k, left, id)
    }

    /// `R` as an `(R, R)`-bimodule.
    pub fn regular(ring: Arc<Algebra>) -> Bimodule {
        let n = ring.dim();
        let left = (0..n).map(|i| ring.left_mult_matrix(&ring.basis(i))).collect();
        let right = (0..n).map(|i| ring.right_mult_matrix(&ring.basis(i))).collect();
        Bimodule {
            space: ring.space.clone(),
            left_ring: ring.clone(),
            right_ring: ring,
            left,
            right,
        }
    }

    pub fn right_regular(ring: Arc<Algebra>) -> Bimodule {
        Bimodule::regular(ring).forget_left()
    }

    pub fn left_regular(ring: Arc<Algebra>) -> Bimodule {
        Bimodule::regular(ring).forget_right()
    }

    /// Free right module `R^n`.
    pub fn free_right(ring: Arc<Algebra>, n: usize) -> Bimodule {
        let r = Bimodule::right_regular(ring.clone());
        Bimodule::direct_sum(&vec![r; n]).unwrap_or_else(|_| Bimodule::zero(Arc::new(Algebra::ground(ring.field())), ring))
    }

    pub fn zero(left_ring: Arc<Algebra>, right_ring: Arc<Algebra>) -> Bimodule {
        let f = left_ring.field();
        Bimodule {
            space: FinSpace::new(f, 0),
            left: vec![Matrix::zeros(f, 0, 0); left_ring.dim()],
            right: vec![Matrix::zeros(f, 0, 0); right_ring.dim()],
            left_ring,
            right_ring,
        }
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn left_basis_action(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn right_basis_action(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_actions(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right_actions(&self) -> &[Matrix] {
        &self.right
    }

    fn combine(&self, mats: &[Matrix], r: &[Scalar]) -> Matrix {
        let mut acc = Matrix::zeros(self.field(), self.dim(), self.dim());
        for (c, m) in r.iter().zip(mats) {
            if !c.is_zero() {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }

    /// Matrix of `m ↦ r·m`.
    pub fn left_matrix(&self, r: &[Scalar]) -> Matrix {
        self.combine(&self.left, r)
    }

    /// Matrix of `m ↦ m·r`.
    pub fn right_matrix(&self, r: &[Scalar]) -> Matrix {
        self.combine(&self.right, r)
    }

    pub fn act_left(&self, r: &[Scalar], m: &[Scalar]) -> Vector {
        let mut out = zeros(self.field(), self.dim());
        for (c, a) in r.iter().zip(&self.left) {
            if !c.is_zero() {
                crate::exactla::axpy(&mut out, c, &a.apply(m));
            }
        }
        out
    }

    pub fn act_right(&self, m: &[Scalar], r: &[Scalar]) -> Vector {
        let mut out = zeros(self.field(), self.dim());
        for (c, a) in r.iter().zip(&self.right) {
            if !c.is_zero() {
                crate::exactla::axpy(&mut out, c, &a.apply(m));
            }
        }
        out
    }

    pub fn forget_left(self) -> Bimodule {
        let k = Arc::new(Algebra::ground(self.field()));
        let id = Matrix::identity(self.field(), self.dim());
        Bimodule {
            left_ring: k,
            left: vec![id],
            ..self
        }
    }

    pub fn forget_right(self) -> Bimodule {
        let k = Arc::new(Algebra::ground(self.field()));
        let id = Matrix::identity(self.field(), self.dim());
        Bimodule {
            right_ring: k,
            right: vec![id],
            ..self
        }
    }

    /// Restrict the left action along `f: S → L`.
    pub fn restrict_left(&self, f: &AlgebraMap) -> Result<Bimodule> {
        if !same_ring(&f.target, &self.left_ring) {
            return Err(Error::RingMismatch("restriction target is not the left ring".into()));
        }
        let left = (0..f.source.dim()).map(|i| self.left_matrix(&f.matrix.column(i))).collect();
        Ok(Bimodule {
            left_ring: f.source.clone(),
            left,
            ..self.clone()
        })
    }

    /// Restrict the right action along `f: S → R`.
    pub fn restrict_right(&self, f: &AlgebraMap) -> Result<Bimodule> {
        if !same_ring(&f.target, &self.right_ring) {
            return Err(Error::RingMismatch("restriction target is not the right ring".into()));
        }
        let right = (0..f.source.dim()).map(|i| self.right_matrix(&f.matrix.column(i))).collect();
        Ok(Bimodule {
            right_ring: f.source.clone(),
            right,
            ..self.clone()
        })
    }

    pub fn direct_sum(parts: &[Bimodule]) -> Result<Bimodule> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("direct sum of no modules".into()))?;
        for p in parts {
            if !same_ring(&p.left_ring, &first.left_ring) || !same_ring(&p.right_ring, &first.right_ring) {
                return Err(Error::RingMismatch("summands over different rings".into()));
            }
        }
        let f = first.field();
        let dim: usize = parts.iter().map(Bimodule::dim).sum();
        let block = |pick: &dyn Fn(&Bimodule) -> &Matrix| {
            let mut m = Matrix::zeros(f, dim, dim);
            let mut off = 0;
            for p in parts {
                let a = pick(p);
                for i in 0..p.dim() {
                    for j in 0..p.dim() {
                        m.set(off + i, off + j, a.get(i, j).clone());
                    }
                }
                off += p.dim();
            }
            m
        };
        let left = (0..first.left.len()).map(|i| block(&|p: &Bimodule| &p.left[i])).collect();
        let right = (0..first.right.len()).map(|i| block(&|p: &Bimodule| &p.right[i])).collect();
        let mut labels = Vec::with_capacity(dim);
        for (k, p) in parts.iter().enumerate() {
            labels.extend(p.space.labels.iter().map(|l| format!("{l}[{k}]")));
        }
        Ok(Bimodule {
            space: FinSpace::with_labels(f, labels),
            left_ring: first.left_ring.clone(),
            right_ring: first.right_ring.clone(),
            left,
            right,
        })
    }

    /// Sub-bimodule spanned by `basis` (assumed independent), with its
    /// inclusion matrix. Fails if the span is not closed under the actions.
    pub fn submodule(&self, basis: &[Vector]) -> Result<(Bimodule, Matrix)> {
        let f = self.field();
        let incl = Matrix::from_columns(f, self.dim(), basis);
        let restrict = |a: &Matrix, side: &str, i: usize| -> Result<Matrix> {
            if basis.is_empty() {
                return Ok(Matrix::zeros(f, 0, 0));
            }
            solve_many(&incl, &a.mul(&incl))
                .ok_or_else(|| Error::NotClosed(format!("{side} action by basis element {i}")))
        };
        let left = self
            .left
            .iter()
            .enumerate()
            .map(|(i, a)| restrict(a, "left", i))
            .collect::<Result<Vec<_>>>()?;
        let right = self
            .right
            .iter()
            .enumerate()
            .map(|(i, a)| restrict(a, "right", i))
            .collect::<Result<Vec<_>>>()?;
        let sub = Bimodule {
            space: FinSpace::new(f, basis.len()),
            left_ring: self.left_ring.clone(),
            right_ring: self.right_ring.clone(),
            left,
            right,
        };
        Ok((sub, incl))
    }

    /// Quotient by the sub-bimodule spanned by `relations`.
    pub fn quotient(&self, relations: &[Vector]) -> Result<(Bimodule, QuotientSpace)> {
        let f = self.field();
        let q = QuotientSpace::new(f, self.dim(), relations);
        let induce = |a: &Matrix| -> Result<Matrix> {
            for r in relations {
                if !is_zero_vec(&q.project(&a.apply(r))) {
                    return Err(Error::NotClosed("relations are not a sub-bimodule".into()));
                }
            }
            Ok(q.projection.mul(a).mul(&q.section))
        };
        let left = self.left.iter().map(induce).collect::<Result<Vec<_>>>()?;
        let right = self.right.iter().map(induce).collect::<Result<Vec<_>>>()?;
        let labels = q.free_columns.iter().map(|&c| format!("[{}]", self.space.labels[c])).collect();
        Ok((
            Bimodule {
                space: FinSpace::with_labels(f, labels),
                left_ring: self.left_ring.clone(),
                right_ring: self.right_ring.clone(),
                left,
                right,
            },
            q,
        ))
    }

    /// Associativity, unitality and commutation of the actions on all
    /// basis triples.
    pub fn check(&self) -> Report {
        let mut report = Report::new("bimodule axioms");
        let n = self.dim();
        let (l, r) = (&self.left_ring, &self.right_ring);
        let mut left_assoc = Check::pass("left associative");
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                let lhs = self.left[i].mul(&self.left[j]);
                let rhs = self.left_matrix(l.basis_product(i, j));
                for (m, d) in rhs.column_defects(&lhs) {
                    left_assoc.record(vec![i, j, m], d);
                }
            }
        }
        report.push(left_assoc);
        let mut right_assoc = Check::pass("right associative");
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let lhs = self.right[j].mul(&self.right[i]);
                let rhs = self.right_matrix(r.basis_product(i, j));
                for (m, d) in rhs.column_defects(&lhs) {
                    right_assoc.record(vec![m, i, j], d);
                }
            }
        }
        report.push(right_assoc);
        let id = Matrix::identity(self.field(), n);
        let mut unital = Check::pass("unital");
        for (side, m) in [(0, self.left_matrix(l.unit())), (1, self.right_matrix(r.unit()))] {
            for (c, d) in m.column_defects(&id) {
                unital.record(vec![side, c], d);
            }
        }
        report.push(unital);
        let mut commute = Check::pass("actions commute");
        for i in 0..l.dim() {
            for j in 0..r.dim() {
                let a = self.left[i].mul(&self.right[j]);
                let b = self.right[j].mul(&self.left[i]);
                for (m, d) in a.column_defects(&b) {
                    commute.record(vec![i, m, j], d);
                }
            }
        }
        report.push(commute);
        report
    }

    /// Whether `f: self → other` commutes with both actions.
    pub fn check_map(&self, other: &Bimodule, f: &Matrix) -> Report {
        let mut report = Report::new("bimodule map");
        let mut left = Check::pass("left linear");
        for i in 0..self.left_ring.dim() {
            for (m, d) in f.mul(&self.left[i]).column_defects(&other.left[i].mul(f)) {
                left.record(vec![i, m], d);
            }
        }
        report.push(left);
        let mut right = Check::pass("right linear");
        for i in 0..self.right_ring.dim() {
            for (m, d) in f.mul(&self.right[i]).column_defects(&other.right[i].mul(f)) {
                right.record(vec![m, i], d);
            }
        }
        report.push(right);
        report
    }
}

pub(crate) fn rings_match(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    same_ring(a, b)
}
