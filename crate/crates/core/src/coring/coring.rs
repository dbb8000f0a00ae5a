use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraMap, BalancedTensor, Bimodule, TensorChain};
use crate::error::{Error, Result};
use crate::exactla::{kron_vec, unit_vector, Field, Matrix, Scalar, Vector};
use crate::report::{Check, Report};

/// An `R`-coring: an `(R, R)`-bimodule `C` with a coproduct given by a
/// k-linear lift `C → C ⊗_k C` and a counit `C → R`.
#[derive(Clone, Debug)]
pub struct Coring {
    pub ring: Arc<Algebra>,
    pub bimodule: Bimodule,
    /// `dim C² × dim C`; column `c` is a lift of `Δ(c)` to `C ⊗_k C`.
    pub delta_lift: Matrix,
    /// `dim R × dim C`.
    pub counit: Matrix,
    /// The chain `C ⊗_R C ⊗_R C`; level 1 is `C ⊗_R C`.
    pub chain: TensorChain,
    /// `Δ` in the coordinates of `C ⊗_R C`.
    pub delta: Matrix,
}

impl Coring {
    pub fn new(bimodule: Bimodule, delta_lift: Matrix, counit: Matrix) -> Result<Coring> {
        let ring = bimodule.left_ring.clone();
        if *ring != *bimodule.right_ring {
            return Err(Error::RingMismatch("a coring needs an (R, R)-bimodule".into()));
        }
        let n = bimodule.dim();
        if delta_lift.shape() != (n * n, n) {
            return Err(Error::Shape(format!(
                "coproduct lift must be {}x{n}, got {}x{}",
                n * n,
                delta_lift.rows(),
                delta_lift.cols()
            )));
        }
        if counit.shape() != (ring.dim(), n) {
            return Err(Error::Shape(format!(
                "counit must be {}x{n}, got {}x{}",
                ring.dim(),
                counit.rows(),
                counit.cols()
            )));
        }
        let chain = TensorChain::power(&bimodule, 3)?;
        let delta = Matrix::build_columns(bimodule.field(), chain.dim(1), n, |c| {
            chain.project_flat(1, &delta_lift.column(c))
        });
        Ok(Coring {
            ring,
            bimodule,
            delta_lift,
            counit,
            chain,
            delta,
        })
    }

    /// `R` as an `R`-coring: `Δ(r) = r ⊗ 1`, `ε = id`.
    pub fn trivial(ring: Arc<Algebra>) -> Coring {
        let f = ring.field();
        let n = ring.dim();
        let lift = Matrix::build_columns(f, n * n, n, |r| kron_vec(&ring.basis(r), ring.unit()));
        Coring::new(Bimodule::regular(ring), lift, Matrix::identity(f, n)).expect("trivial coring is well formed")
    }

    /// Sweedler's coring `R ⊗_S R` of an extension `S → R`, with
    /// `Δ(r ⊗ r') = r ⊗ 1 ⊗ r'`, `ε(r ⊗ r') = rr'` and grouplike `1 ⊗ 1`.
    pub fn sweedler(ext: &AlgebraMap) -> Result<(Coring, Vector)> {
        let r = ext.target.clone();
        let reg = Bimodule::regular(r.clone());
        let bt = BalancedTensor::new(&reg.restrict_right(ext)?, &reg.restrict_left(ext)?)?;
        let f = r.field();
        let n = bt.module.dim();
        let dr = r.dim();
        let one = r.unit();
        let lift = Matrix::build_columns(f, n * n, n, |j| {
            let x = bt.quotient.free_columns[j];
            let (a, b) = (x / dr, x % dr);
            kron_vec(&bt.pure(&r.basis(a), one), &bt.pure(one, &r.basis(b)))
        });
        let counit = Matrix::build_columns(f, dr, n, |j| {
            let x = bt.quotient.free_columns[j];
            r.basis_product(x / dr, x % dr).clone()
        });
        let g = bt.pure(one, one);
        let module = Bimodule::new(bt.module.space.clone(), r.clone(), r, bt.module.left_actions().to_vec(), bt.module.right_actions().to_vec())?;
        Ok((Coring::new(module, lift, counit)?, g))
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.bimodule.dim()
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.field(), self.dim(), i)
    }

    pub fn delta_of(&self, c: &[Scalar]) -> Vector {
        self.delta.apply(c)
    }

    pub fn counit_of(&self, c: &[Scalar]) -> Vector {
        self.counit.apply(c)
    }

    /// `x ⊗ y` in `C ⊗_R C`.
    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        self.chain.extend(1, x, y)
    }

    /// `r·c`
    pub fn left(&self, r: &[Scalar], c: &[Scalar]) -> Vector {
        self.bimodule.act_left(r, c)
    }

    /// `c·r`
    pub fn right(&self, c: &[Scalar], r: &[Scalar]) -> Vector {
        self.bimodule.act_right(c, r)
    }

    /// `(Δ ⊗ C)` and `(C ⊗ Δ)` as maps `C ⊗_R C → C ⊗_R C ⊗_R C`.
    pub fn coassociativity_maps(&self) -> (Matrix, Matrix) {
        let d3 = self.chain.dim(2);
        let n = self.dim();
        let f = self.field();
        let left = self.chain.map_from_lifts(1, d3, |t| {
            self.chain
                .project_flat(2, &kron_vec(&self.delta_lift.column(t[0]), &unit_vector(f, n, t[1])))
        });
        let right = self.chain.map_from_lifts(1, d3, |t| {
            self.chain
                .project_flat(2, &kron_vec(&unit_vector(f, n, t[0]), &self.delta_lift.column(t[1])))
        });
        (left, right)
    }

    /// `(ε ⊗ C)` and `(C ⊗ ε)` as maps `C ⊗_R C → C`.
    pub fn counit_maps(&self) -> (Matrix, Matrix) {
        let n = self.dim();
        let left = self
            .chain
            .map_from_lifts(1, n, |t| self.left(&self.counit.column(t[0]), &self.basis(t[1])));
        let right = self
            .chain
            .map_from_lifts(1, n, |t| self.right(&self.basis(t[0]), &self.counit.column(t[1])));
        (left, right)
    }

    /// All coring axioms, checked on every basis element (and every pair of
    /// ring and coring basis elements for linearity).
    pub fn check_axioms(&self) -> Report {
        let mut report = Report::new("coring axioms");
        let cc = self.chain.module(1);
        let dr = self.ring.dim();

        let mut delta_lin = Check::pass("coproduct is a bimodule map");
        for r in 0..dr {
            let l1 = self.delta.mul(self.bimodule.left_basis_action(r));
            let l2 = cc.left_basis_action(r).mul(&self.delta);
            for (c, d) in l1.column_defects(&l2) {
                delta_lin.record(vec![r, c], d);
            }
            let r1 = self.delta.mul(self.bimodule.right_basis_action(r));
            let r2 = cc.right_basis_action(r).mul(&self.delta);
            for (c, d) in r1.column_defects(&r2) {
                delta_lin.record(vec![c, r], d);
            }
        }
        report.push(delta_lin);

        let mut eps_lin = Check::pass("counit is a bimodule map");
        for r in 0..dr {
            let e = self.ring.basis(r);
            let l1 = self.counit.mul(self.bimodule.left_basis_action(r));
            let l2 = self.ring.left_mult_matrix(&e).mul(&self.counit);
            for (c, d) in l1.column_defects(&l2) {
                eps_lin.record(vec![r, c], d);
            }
            let r1 = self.counit.mul(self.bimodule.right_basis_action(r));
            let r2 = self.ring.right_mult_matrix(&e).mul(&self.counit);
            for (c, d) in r1.column_defects(&r2) {
                eps_lin.record(vec![c, r], d);
            }
        }
        report.push(eps_lin);

        let (dl, dr_) = self.coassociativity_maps();
        let mut coassoc = Check::pass("coassociative");
        for (c, d) in dl.mul(&self.delta).column_defects(&dr_.mul(&self.delta)) {
            coassoc.record(vec![c], d);
        }
        report.push(coassoc);

        let (el, er) = self.counit_maps();
        let id = Matrix::identity(self.field(), self.dim());
        let mut left = Check::pass("left counit");
        for (c, d) in el.mul(&self.delta).column_defects(&id) {
            left.record(vec![c], d);
        }
        report.push(left);
        let mut right = Check::pass("right counit");
        for (c, d) in er.mul(&self.delta).column_defects(&id) {
            right.record(vec![c], d);
        }
        report.push(right);
        report
    }

    /// Whether `f: self → other` is a morphism of corings.
    pub fn check_morphism(&self, other: &Coring, f: &Matrix) -> Report {
        let mut report = Report::new("coring morphism");
        report.extend(self.bimodule.check_map(&other.bimodule, f));
        let ff = self.chain.map_from_lifts(1, other.chain.dim(1), |t| {
            other.chain.project_flat(1, &kron_vec(&f.column(t[0]), &f.column(t[1])))
        });
        let mut delta = Check::pass("preserves coproduct");
        for (c, d) in other.delta.mul(f).column_defects(&ff.mul(&self.delta)) {
            delta.record(vec![c], d);
        }
        report.push(delta);
        let mut eps = Check::pass("preserves counit");
        for (c, d) in other.counit.mul(f).column_defects(&self.counit) {
            eps.record(vec![c], d);
        }
        report.push(eps);
        report
    }

    /// Basis of `ker ε` and the sub-bimodule it spans, with its inclusion.
    pub fn counit_kernel(&self) -> Result<(Bimodule, Matrix)> {
        let basis = crate::exactla::kernel(&self.counit);
        self.bimodule.submodule(&basis)
    }
}
