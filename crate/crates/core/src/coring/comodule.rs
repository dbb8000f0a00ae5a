use std::sync::Arc;

use super::coring::Coring;
use crate::algebra::{AlgebraMap, BalancedTensor, Bimodule, TensorChain};
use crate::error::{Error, Result};
use crate::exactla::{kernel, kron_vec, unit_vector, Matrix, MatrixSystem, Scalar, Term, Equation, Vector};
use crate::report::{Check, Report};

/// A right `C`-comodule: a right `R`-module `M` with coaction
/// `ρ: M → M ⊗_R C`, stored in the coordinates of `M ⊗_R C`.
#[derive(Clone, Debug)]
pub struct Comodule {
    pub coring: Arc<Coring>,
    pub module: Bimodule,
    /// The chain `M ⊗_R C ⊗_R C`.
    pub chain: TensorChain,
    pub coaction: Matrix,
}

impl Comodule {
    /// Coaction given in `M ⊗_R C` coordinates.
    pub fn from_coaction(coring: Arc<Coring>, module: Bimodule, coaction: Matrix) -> Result<Comodule> {
        let chain = TensorChain::new(vec![module.clone(), coring.bimodule.clone(), coring.bimodule.clone()])?;
        if coaction.shape() != (chain.dim(1), module.dim()) {
            return Err(Error::Shape(format!(
                "coaction must be {}x{}, got {}x{}",
                chain.dim(1),
                module.dim(),
                coaction.rows(),
                coaction.cols()
            )));
        }
        Ok(Comodule {
            coring,
            module,
            chain,
            coaction,
        })
    }

    /// Coaction given by a k-linear lift `M → M ⊗_k C`.
    pub fn from_lift(coring: Arc<Coring>, module: Bimodule, lift: &Matrix) -> Result<Comodule> {
        let chain = TensorChain::new(vec![module.clone(), coring.bimodule.clone(), coring.bimodule.clone()])?;
        let n = module.dim();
        if lift.shape() != (n * coring.dim(), n) {
            return Err(Error::Shape(format!(
                "coaction lift must be {}x{n}, got {}x{}",
                n * coring.dim(),
                lift.rows(),
                lift.cols()
            )));
        }
        let coaction = Matrix::build_columns(module.field(), chain.dim(1), n, |m| {
            chain.project_flat(1, &lift.column(m))
        });
        Ok(Comodule {
            coring,
            module,
            chain,
            coaction,
        })
    }

    /// `R` with `ρ(r) = g·r`.
    pub fn regular(coring: Arc<Coring>, g: &[Scalar]) -> Result<Comodule> {
        let ring = coring.ring.clone();
        let n = ring.dim();
        let lift = Matrix::build_columns(ring.field(), n * coring.dim(), n, |r| {
            kron_vec(ring.unit(), &coring.right(g, &ring.basis(r)))
        });
        let module = Bimodule::right_regular(ring);
        Comodule::from_lift(coring, module, &lift)
    }

    /// `C` itself with `ρ = Δ`.
    pub fn coring_itself(coring: Arc<Coring>) -> Result<Comodule> {
        let module = coring.bimodule.clone().forget_left();
        let lift = coring.delta_lift.clone();
        Comodule::from_lift(coring, module, &lift)
    }

    /// `M ⊗_S R` with `ρ(m ⊗ r) = m ⊗ g r`, for a right `S`-module `M`.
    pub fn induced(coring: Arc<Coring>, ext: &AlgebraMap, m: &Bimodule, g: &[Scalar]) -> Result<Comodule> {
        let ring = coring.ring.clone();
        let r_left = Bimodule::regular(ring.clone()).restrict_left(ext)?;
        let bt = BalancedTensor::new(m, &r_left)?;
        let dr = ring.dim();
        let module = bt.module.clone();
        let lift = Matrix::build_columns(ring.field(), module.dim() * coring.dim(), module.dim(), |j| {
            let x = bt.quotient.free_columns[j];
            let (a, b) = (x / dr, x % dr);
            let ma = bt.pure(&unit_vector(m.field(), m.dim(), a), ring.unit());
            kron_vec(&ma, &coring.right(g, &ring.basis(b)))
        });
        Comodule::from_lift(coring, module, &lift)
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// `m ⊗ c` in `M ⊗_R C`.
    pub fn pair(&self, m: &[Scalar], c: &[Scalar]) -> Vector {
        self.chain.extend(1, m, c)
    }

    /// Matrix of `m ↦ m ⊗ g`.
    pub fn tensor_with(&self, g: &[Scalar]) -> Matrix {
        let n = self.dim();
        let f = self.module.field();
        Matrix::build_columns(f, self.chain.dim(1), n, |m| self.pair(&unit_vector(f, n, m), g))
    }

    /// `(ρ ⊗ C)` and `(M ⊗ Δ)` as maps `M ⊗_R C → M ⊗_R C ⊗_R C`.
    pub fn coassociativity_maps(&self) -> (Matrix, Matrix) {
        let f = self.module.field();
        let (dm, dc) = (self.dim(), self.coring.dim());
        let d2 = self.chain.dim(2);
        let left = self
            .chain
            .map_from_lifts(1, d2, |t| self.chain.extend(2, &self.coaction.column(t[0]), &unit_vector(f, dc, t[1])));
        let right = self.chain.map_from_lifts(1, d2, |t| {
            self.chain
                .project_flat(2, &kron_vec(&unit_vector(f, dm, t[0]), &self.coring.delta_lift.column(t[1])))
        });
        (left, right)
    }

    /// `(M ⊗ ε)` as a map `M ⊗_R C → M`.
    pub fn counit_map(&self) -> Matrix {
        let f = self.module.field();
        let dm = self.dim();
        self.chain.map_from_lifts(1, dm, |t| {
            self.module.act_right(&unit_vector(f, dm, t[0]), &self.coring.counit.column(t[1]))
        })
    }

    /// Coassociativity defect `(ρ ⊗ C)ρ − (M ⊗ Δ)ρ`.
    pub fn coassociativity_defect(&self) -> Matrix {
        let (l, r) = self.coassociativity_maps();
        l.mul(&self.coaction).sub(&r.mul(&self.coaction))
    }

    pub fn check(&self) -> Report {
        let mut report = Report::new("comodule axioms");
        let mc = self.chain.module(1);
        let mut lin = Check::pass("coaction is right linear");
        for r in 0..self.coring.ring.dim() {
            let a = self.coaction.mul(self.module.right_basis_action(r));
            let b = mc.right_basis_action(r).mul(&self.coaction);
            for (m, d) in a.column_defects(&b) {
                lin.record(vec![m, r], d);
            }
        }
        report.push(lin);
        let defect = self.coassociativity_defect();
        report.push(Check::from_defects(
            "coassociative",
            (0..self.dim()).map(|m| (vec![m], defect.column(m))),
        ));
        let id = Matrix::identity(self.module.field(), self.dim());
        let mut counit = Check::pass("counit");
        for (m, d) in self.counit_map().mul(&self.coaction).column_defects(&id) {
            counit.record(vec![m], d);
        }
        report.push(counit);
        report
    }

    /// Basis of `M^{co C}_g = {m : ρ(m) = m ⊗ g}`.
    pub fn coinvariants(&self, g: &[Scalar]) -> Vec<Vector> {
        kernel(&self.coaction.sub(&self.tensor_with(g)))
    }
}

/// Basis of `Hom^C_R(M, N)`: right `R`-linear maps commuting with the
/// coactions, as `dim N × dim M` matrices.
pub fn comodule_hom_space(m: &Comodule, n: &Comodule) -> Vec<Matrix> {
    let f = m.module.field();
    let (dm, dn) = (m.dim(), n.dim());
    let mut sys = MatrixSystem::new(f, dn, dm);
    for (a, b) in m.module.right_actions().iter().zip(n.module.right_actions()) {
        sys.commute(None, Some(a.clone()), Some(b.clone()), None);
    }
    // ρ_N X e_m = Σ coef · (x ↦ x ⊗ e_c) X e_a over the lift of ρ_M(e_m).
    let dc = m.coring.dim();
    let tensor_c: Vec<Matrix> = (0..dc)
        .map(|c| {
            let e = unit_vector(f, dc, c);
            Matrix::build_columns(f, n.chain.dim(1), dn, |x| n.pair(&unit_vector(f, dn, x), &e))
        })
        .collect();
    for col in 0..dm {
        let sel = |i: usize| Matrix::from_columns(f, dm, &[unit_vector(f, dm, i)]);
        let mut terms = vec![Term::new(Some(n.coaction.clone()), Some(sel(col)))];
        let rho = m.coaction.column(col);
        for (j, s) in rho.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let t = m.chain.lift(1, j);
            terms.push(Term::new(Some(tensor_c[t[1]].scale(s)), Some(sel(t[0]))).neg());
        }
        sys.push(Equation { terms, rhs: None });
    }
    sys.kernel()
}
