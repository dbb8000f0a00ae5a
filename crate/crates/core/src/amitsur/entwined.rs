use std::sync::Arc;

use super::complex::{sign, AmitsurComplex};
use crate::coring::{Coring, EntwiningData, Grouplike};
use crate::error::{Error, Result};
use crate::exactla::{axpy, is_zero_vec, kron_all, kron_vec, sub_vec, unit_vector, Field, Matrix, Scalar, Vector};
use crate::par;
use crate::report::{Check, Report};

/// The Amitsur complex of an entwining coring `A ⊗ C` with the grouplike
/// `g = ρ(1)` of an entwined module structure `ρ` on `A`, compared with its
/// description on `A ⊗ C^{⊗n}` through iterated `ψ`.
#[derive(Clone, Debug)]
pub struct EntwinedForms {
    pub data: EntwiningData,
    pub coring: Arc<Coring>,
    /// `dim A · dim C × dim A`
    pub rho: Matrix,
    pub complex: AmitsurComplex,
    /// `phi[n]: A ⊗ C^{⊗n} → Ω^n`, `a ⊗ c̄ ↦ (a ⊗ c₁) ⊗ (1 ⊗ c₂) ⊗ … ⊗ (1 ⊗ c_n)`.
    pub phi: Vec<Matrix>,
}

impl EntwinedForms {
    pub fn new(data: EntwiningData, coring: Arc<Coring>, rho: Matrix, n_max: usize) -> Result<EntwinedForms> {
        let g = data.grouplike_from_entwined_algebra(&coring, &rho)?;
        let complex = AmitsurComplex::new(coring.clone(), &g, n_max, false)?;
        let mut forms = EntwinedForms {
            data,
            coring,
            rho,
            complex,
            phi: Vec::new(),
        };
        forms.phi = (0..=n_max).map(|n| forms.phi_matrix(n)).collect();
        Ok(forms)
    }

    fn field(&self) -> Field {
        self.coring.field()
    }

    fn dims(&self) -> (usize, usize) {
        (self.data.algebra.dim(), self.data.coalgebra.dim())
    }

    /// `dim A · (dim C)^n`
    pub fn flat_dim(&self, n: usize) -> usize {
        let (da, dc) = self.dims();
        da * dc.pow(n as u32)
    }

    fn split(&self, n: usize, x: usize) -> (usize, Vec<usize>) {
        let (_, dc) = self.dims();
        let mut cs = vec![0; n];
        let mut rest = x;
        for k in (0..n).rev() {
            cs[k] = rest % dc;
            rest /= dc;
        }
        (rest, cs)
    }

    fn phi_matrix(&self, n: usize) -> Matrix {
        let f = self.field();
        let (da, dc) = self.dims();
        if n == 0 {
            return Matrix::identity(f, da);
        }
        let chain = self.complex.chain.as_ref().expect("positive degree has a chain");
        let a = &self.data.algebra;
        Matrix::build_columns(f, chain.dim(n - 1), self.flat_dim(n), |x| {
            let (ai, cs) = self.split(n, x);
            let parts: Vec<Vector> = cs
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    let left = if k == 0 { a.basis(ai) } else { a.unit().clone() };
                    kron_vec(&left, &unit_vector(f, dc, c))
                })
                .collect();
            let refs: Vec<&[Scalar]> = parts.iter().map(Vec::as_slice).collect();
            chain.embed_vectors(&refs)
        })
    }

    /// `ρ(a) ⊗ c̄ + Σ(−1)^i a ⊗ … ⊗ Δ(c_i) ⊗ … + (−1)^{n+1} a ψ^n(c̄ ⊗ 1₍₀₎) ⊗ 1₍₁₎`
    pub fn explicit_d(&self, n: usize) -> Matrix {
        let f = self.field();
        let (da, dc) = self.dims();
        let delta = &self.data.coalgebra.delta;
        let g = self.rho.apply(self.data.algebra.unit());
        Matrix::build_columns(f, self.flat_dim(n + 1), self.flat_dim(n), |x| {
            let (ai, cs) = self.split(n, x);
            let units: Vec<Vector> = cs.iter().map(|&c| unit_vector(f, dc, c)).collect();
            let a = self.data.algebra.basis(ai);
            let mut parts: Vec<&[Scalar]> = vec![];
            let rho_a = self.rho.column(ai);
            parts.push(&rho_a);
            parts.extend(units.iter().map(Vec::as_slice));
            let mut out = kron_all(f, &parts);
            for i in 0..n {
                let dci = delta.column(cs[i]);
                let mut parts: Vec<&[Scalar]> = vec![&a];
                parts.extend((0..n).map(|j| if j == i { dci.as_slice() } else { units[j].as_slice() }));
                axpy(&mut out, &sign(f, i + 1), &kron_all(f, &parts));
            }
            for (y, s) in g.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let (a1, c1) = (y / dc, y % dc);
                let moved = self.data.psi_n(&cs, &unit_vector(f, da, a1));
                let term = kron_vec(&self.data.mul_left(&a, &moved, n), &unit_vector(f, dc, c1));
                axpy(&mut out, &(&sign(f, n + 1) * s), &term);
            }
            out
        })
    }

    /// `(a ⊗ c̄)(a' ⊗ c̄') = a ψ^m(c̄ ⊗ a') ⊗ c̄'` on flat basis indices.
    pub fn explicit_product(&self, m: usize, x: usize, n: usize, y: usize) -> Vector {
        let f = self.field();
        let (da, dc) = self.dims();
        let (ai, cs) = self.split(m, x);
        let (bi, ds) = self.split(n, y);
        let moved = self.data.psi_n(&cs, &unit_vector(f, da, bi));
        let mut out = self.data.mul_left(&self.data.algebra.basis(ai), &moved, m);
        for &d in &ds {
            out = kron_vec(&out, &unit_vector(f, dc, d));
        }
        out
    }

    /// `Φ` bijective, `Φ d_explicit = d Φ` and `Φ` multiplicative.
    pub fn check(&self) -> Report {
        let cx = &self.complex;
        let mut report = Report::new("entwined forms");
        let mut bij = Check::pass("Ω^n = A ⊗ C^{⊗n}");
        for (n, p) in self.phi.iter().enumerate() {
            if p.rows() != p.cols() || p.rank() != p.cols() {
                bij.record(vec![n], Vec::new());
            }
        }
        report.push(bij);

        let mut dcheck = Check::pass("d matches the ψ formula");
        for n in 0..cx.n_max {
            dcheck.compare(&[n], &self.phi[n + 1].mul(&self.explicit_d(n)), &cx.d[n].mul(&self.phi[n]));
        }
        report.push(dcheck);

        let mut prod = Check::pass("product matches the ψ formula");
        for m in 0..=cx.n_max {
            for n in 0..=cx.n_max - m {
                let (dm, dn) = (self.flat_dim(m), self.flat_dim(n));
                let bad = par::map_range(dm * dn, |p| {
                    let (x, y) = (p / dn, p % dn);
                    let lhs = self.phi[m + n].apply(&self.explicit_product(m, x, n, y));
                    let xv = self.phi[m].column(x);
                    let yv = self.phi[n].column(y);
                    let rhs = cx.product(m, &xv, n, &yv).unwrap();
                    let d = sub_vec(&lhs, &rhs);
                    (!is_zero_vec(&d)).then_some((vec![m, n, x, y], d))
                });
                for (b, d) in bad.into_iter().flatten() {
                    prod.record(b, d);
                }
            }
        }
        report.push(prod);
        report
    }
}

/// `ρ(a) = g a` for a grouplike `g` of the entwining coring, as a
/// `dim A · dim C × dim A` matrix.
pub fn coaction_from_grouplike(coring: &Coring, g: &Grouplike) -> Result<Matrix> {
    if g.semi {
        return Err(Error::Precondition("an entwined module structure needs a grouplike".into()));
    }
    let ring = &coring.ring;
    Ok(Matrix::build_columns(ring.field(), coring.dim(), ring.dim(), |a| {
        coring.right(&g.g, &ring.basis(a))
    }))
}
