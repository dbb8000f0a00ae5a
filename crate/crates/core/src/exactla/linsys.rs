//! Linear systems whose unknown is a matrix `X`, written as sums of terms
//! `A X B`. Row-major vectorisation gives `vec(A X B) = (A ⊗ Bᵀ) vec(X)`.

use super::matrix::{kernel, solve, Matrix, Vector};
use super::scalar::Field;

/// One term `A X B` (either factor may be `None` for the identity).
pub struct Term {
    pub left: Option<Matrix>,
    pub right: Option<Matrix>,
    pub negate: bool,
}

impl Term {
    pub fn new(left: Option<Matrix>, right: Option<Matrix>) -> Term {
        Term {
            left,
            right,
            negate: false,
        }
    }

    pub fn neg(mut self) -> Term {
        self.negate = !self.negate;
        self
    }
}

/// `Σ terms = rhs`; `rhs = None` means zero.
pub struct Equation {
    pub terms: Vec<Term>,
    pub rhs: Option<Matrix>,
}

pub struct MatrixSystem {
    field: Field,
    rows: usize,
    cols: usize,
    equations: Vec<Equation>,
}

impl MatrixSystem {
    /// Unknown `X` of shape `rows × cols`.
    pub fn new(field: Field, rows: usize, cols: usize) -> MatrixSystem {
        MatrixSystem {
            field,
            rows,
            cols,
            equations: Vec::new(),
        }
    }

    pub fn push(&mut self, eq: Equation) {
        self.equations.push(eq);
    }

    /// `A X B = C`
    pub fn equal(&mut self, a: Option<Matrix>, b: Option<Matrix>, c: Matrix) {
        self.push(Equation {
            terms: vec![Term::new(a, b)],
            rhs: Some(c),
        });
    }

    /// `A X B = C X D`
    pub fn commute(&mut self, a: Option<Matrix>, b: Option<Matrix>, c: Option<Matrix>, d: Option<Matrix>) {
        self.push(Equation {
            terms: vec![Term::new(a, b), Term::new(c, d).neg()],
            rhs: None,
        });
    }

    fn assemble(&self) -> (Matrix, Vector) {
        let n = self.rows * self.cols;
        let f = self.field;
        let mut blocks = Vec::new();
        let mut rhs = Vec::new();
        for eq in &self.equations {
            let mut block: Option<Matrix> = None;
            let mut out_shape = None;
            for t in &eq.terms {
                let a = t.left.clone().unwrap_or_else(|| Matrix::identity(f, self.rows));
                let b = t.right.clone().unwrap_or_else(|| Matrix::identity(f, self.cols));
                assert_eq!(a.cols(), self.rows, "left factor does not fit unknown");
                assert_eq!(b.rows(), self.cols, "right factor does not fit unknown");
                out_shape = Some((a.rows(), b.cols()));
                let mut k = a.kron(&b.transpose());
                if t.negate {
                    k = k.scale(&-f.one());
                }
                block = Some(match block {
                    None => k,
                    Some(acc) => acc.add(&k),
                });
            }
            let Some(block) = block else { continue };
            let (r, s) = out_shape.unwrap();
            match &eq.rhs {
                Some(c) => {
                    assert_eq!(c.shape(), (r, s), "right-hand side shape");
                    rhs.extend(c.to_rows().into_iter().flatten());
                }
                None => rhs.extend(std::iter::repeat_n(f.zero(), r * s)),
            }
            blocks.push(block);
        }
        (Matrix::vstack(f, n, &blocks), rhs)
    }

    fn unvec(&self, v: &[super::scalar::Scalar]) -> Matrix {
        let rows = v.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect::<Vec<_>>();
        if self.cols == 0 || self.rows == 0 {
            return Matrix::zeros(self.field, self.rows, self.cols);
        }
        Matrix::from_rows(self.field, rows).expect("solution entries share a field")
    }

    /// One solution (free variables zero), or `None` if inconsistent.
    pub fn solve(&self) -> Option<Matrix> {
        let (m, rhs) = self.assemble();
        if m.rows() == 0 {
            return Some(Matrix::zeros(self.field, self.rows, self.cols));
        }
        solve(&m, &rhs).map(|v| self.unvec(&v))
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn kernel(&self) -> Vec<Matrix> {
        let (m, _) = self.assemble();
        if m.rows() == 0 {
            let n = self.rows * self.cols;
            let id = Matrix::identity(self.field, n);
            return id.columns().iter().map(|v| self.unvec(v)).collect();
        }
        kernel(&m).iter().map(|v| self.unvec(v)).collect()
    }
}
