use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Bimodule, TensorChain};
use crate::coring::{coinvariant_subring, Coring, Grouplike};
use crate::error::{Error, Result};
use crate::exactla::{axpy, kron_all, kron_vec, solve_many, sub_vec, unit_vector, Field, Matrix, Scalar, Vector};
use crate::par;
use crate::report::{Check, Report};

/// `(−1)^k` in `f`.
pub(crate) fn sign(f: Field, k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        f.one()
    } else {
        -f.one()
    }
}

/// The Amitsur complex `Ω(C)` of a coring with a (semi-)grouplike element,
/// or in reduced mode its restriction `Ω(C/S)` with `Ω^n = (ker ε)^{⊗_R n}`.
/// Degrees run from `0` to `n_max`; `d^n` is stored for `n < n_max`.
#[derive(Clone, Debug)]
pub struct AmitsurComplex {
    pub coring: Arc<Coring>,
    pub g: Vector,
    pub semi: bool,
    pub reduced: bool,
    pub n_max: usize,
    /// `C`, or `ker ε` in reduced mode.
    pub factor: Bimodule,
    /// `dim C × dim factor`
    pub inclusion: Matrix,
    /// `n_max` copies of the factor; `Ω^n` is level `n − 1`.
    pub chain: Option<TensorChain>,
    pub d: Vec<Matrix>,
}

impl AmitsurComplex {
    pub fn new(coring: Arc<Coring>, g: &Grouplike, n_max: usize, reduced: bool) -> Result<AmitsurComplex> {
        if reduced && g.semi {
            return Err(Error::Precondition("the reduced complex needs a grouplike element".into()));
        }
        let f = coring.field();
        let (factor, inclusion) = if reduced {
            coring.counit_kernel()?
        } else {
            (coring.bimodule.clone(), Matrix::identity(f, coring.dim()))
        };
        let chain = if n_max > 0 {
            Some(TensorChain::power(&factor, n_max)?)
        } else {
            None
        };
        let mut cx = AmitsurComplex {
            coring,
            g: g.g.clone(),
            semi: g.semi,
            reduced,
            n_max,
            factor,
            inclusion,
            chain,
            d: Vec::new(),
        };
        let coproduct = if reduced { cx.reduced_coproduct()? } else { cx.coring.delta_lift.clone() };
        let g_factor = if reduced { None } else { Some(cx.g.clone()) };
        let mut d = Vec::with_capacity(n_max);
        for n in 0..n_max {
            d.push(cx.differential(n, &coproduct, g_factor.as_deref())?);
        }
        cx.d = d;
        Ok(cx)
    }

    pub fn field(&self) -> Field {
        self.coring.field()
    }

    /// Coordinates in the factor of vectors of `C` lying in it.
    fn factor_coords(&self, m: &Matrix) -> Result<Matrix> {
        let f = self.field();
        if self.factor.dim() == 0 {
            return Ok(Matrix::zeros(f, 0, m.cols()));
        }
        solve_many(&self.inclusion, m).ok_or_else(|| Error::Inconsistent("d leaves ker ε".into()))
    }

    /// `k ↦ (k₍₁₎ − gε(k₍₁₎)) ⊗ (k₍₂₎ − ε(k₍₂₎)g)` lifted to `K ⊗_k K`.
    fn reduced_coproduct(&self) -> Result<Matrix> {
        let c = &self.coring;
        let f = self.field();
        let id = Matrix::identity(f, c.dim());
        let (rg, gr) = crate::coring::grouplike_maps(c, &self.g);
        let pr = self.factor_coords(&id.sub(&gr.mul(&c.counit)))?;
        let pl = self.factor_coords(&id.sub(&rg.mul(&c.counit)))?;
        Ok(pr.kron(&pl).mul(&c.delta_lift).mul(&self.inclusion))
    }

    fn differential(&self, n: usize, coproduct: &Matrix, g: Option<&[Scalar]>) -> Result<Matrix> {
        let c = &self.coring;
        if n == 0 {
            let (rg, gr) = crate::coring::grouplike_maps(c, &self.g);
            return self.factor_coords(&gr.sub(&rg));
        }
        let chain = self.chain.as_ref().expect("positive degree needs a chain");
        Ok(chain.map_from_lifts(n - 1, chain.dim(n), |t| self.d_formula(t, coproduct, g)))
    }

    /// `g⊗c¹⊗…⊗cⁿ + Σ(−1)^i c¹⊗…⊗Δ(c^i)⊗…⊗cⁿ + (−1)^{n+1} c¹⊗…⊗cⁿ⊗g` on a
    /// pure tensor of factor basis vectors.
    fn d_formula(&self, t: &[usize], coproduct: &Matrix, g: Option<&[Scalar]>) -> Vector {
        let f = self.field();
        let n = t.len();
        let k = self.factor.dim();
        let chain = self.chain.as_ref().expect("positive degree needs a chain");
        let units: Vec<Vector> = t.iter().map(|&i| unit_vector(f, k, i)).collect();
        let mut flat = crate::exactla::zeros(f, k.pow(n as u32 + 1));
        if let Some(g) = g {
            let mut parts: Vec<&[Scalar]> = vec![g];
            parts.extend(units.iter().map(Vec::as_slice));
            axpy(&mut flat, &f.one(), &kron_all(f, &parts));
            let mut parts: Vec<&[Scalar]> = units.iter().map(Vec::as_slice).collect();
            parts.push(g);
            axpy(&mut flat, &sign(f, n + 1), &kron_all(f, &parts));
        }
        for i in 0..n {
            let dc = coproduct.column(t[i]);
            let parts: Vec<&[Scalar]> = (0..n)
                .map(|j| if j == i { dc.as_slice() } else { units[j].as_slice() })
                .collect();
            axpy(&mut flat, &sign(f, i + 1), &kron_all(f, &parts));
        }
        chain.project_flat(n, &flat)
    }

    pub fn dim(&self, n: usize) -> usize {
        if n == 0 {
            self.coring.ring.dim()
        } else {
            self.chain.as_ref().map_or(0, |c| c.dim(n - 1))
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.n_max).map(|n| self.dim(n)).collect()
    }

    /// `Ω^n` as an `(R, R)`-bimodule.
    pub fn module(&self, n: usize) -> Bimodule {
        if n == 0 {
            Bimodule::regular(self.coring.ring.clone())
        } else {
            self.chain.as_ref().expect("degree within range").module(n - 1).clone()
        }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::DegreeOverflow { degree: n, max: self.n_max });
        }
        Ok(())
    }

    /// `d(x)` for `x ∈ Ω^n`.
    pub fn apply_d(&self, n: usize, x: &[Scalar]) -> Result<Vector> {
        self.check_degree(n + 1)?;
        Ok(self.d[n].apply(x))
    }

    /// Product `Ω^m × Ω^n → Ω^{m+n}`: concatenation of tensors, with
    /// degree-0 factors acting through the bimodule structure.
    pub fn product(&self, m: usize, x: &[Scalar], n: usize, y: &[Scalar]) -> Result<Vector> {
        self.check_degree(m + n)?;
        if m == 0 {
            return Ok(self.module(n).act_left(x, y));
        }
        if n == 0 {
            return Ok(self.module(m).act_right(x, y));
        }
        let chain = self.chain.as_ref().expect("positive degree needs a chain");
        let flat = kron_vec(&chain.lift_flat(m - 1, x), &chain.lift_flat(n - 1, y));
        Ok(chain.project_flat(m + n - 1, &flat))
    }

    /// Basis vector `i` of `Ω^n`.
    pub fn basis(&self, n: usize, i: usize) -> Vector {
        unit_vector(self.field(), self.dim(n), i)
    }

    /// The map `Ω^n(C/S) → Ω^n(C)` induced by `ker ε ⊂ C`.
    pub fn inclusion_into(&self, full: &AmitsurComplex, n: usize) -> Matrix {
        let f = self.field();
        if n == 0 {
            return Matrix::identity(f, self.dim(0));
        }
        let (own, target) = (self.chain.as_ref().unwrap(), full.chain.as_ref().unwrap());
        let cols: Vec<Vector> = (0..self.factor.dim()).map(|i| self.inclusion.column(i)).collect();
        own.map_from_lifts(n - 1, full.dim(n), |t| {
            let parts: Vec<&[Scalar]> = t.iter().map(|&i| cols[i].as_slice()).collect();
            target.embed_vectors(&parts)
        })
    }

    /// `d ∘ d = 0`, well-definedness of `d`, graded Leibniz, associativity
    /// of the product and, for grouplike `g`, `S`-relativity.
    pub fn check_dg_axioms(&self) -> Result<Report> {
        let f = self.field();
        let mut report = Report::new(if self.reduced { "Ω(C/S)" } else { "Ω(C)" });

        if !self.reduced {
            let mut wd = Check::pass("d well defined");
            if let Some(chain) = &self.chain {
                for n in 1..self.n_max {
                    let c = chain.check_descends("d", n - 1, &self.d[n], |t| {
                        self.d_formula(t, &self.coring.delta_lift, Some(&self.g))
                    });
                    for w in c.witnesses {
                        wd.record(w.basis, w.defect);
                    }
                }
            }
            report.push(wd);
        }

        let mut dd = Check::pass("d ∘ d = 0");
        for n in 0..self.n_max.saturating_sub(1) {
            let z = self.d[n + 1].mul(&self.d[n]);
            dd.compare(&[n], &z, &Matrix::zeros(f, z.rows(), z.cols()));
        }
        report.push(dd);

        let mut leibniz = Check::pass("graded Leibniz rule");
        for m in 0..self.n_max {
            for n in 0..self.n_max - m {
                let pairs = self.dim(m) * self.dim(n);
                let bad = par::map_range(pairs, |p| {
                    let (i, j) = (p / self.dim(n), p % self.dim(n));
                    let (x, y) = (self.basis(m, i), self.basis(n, j));
                    let lhs = self.d[m + n].apply(&self.product(m, &x, n, &y).unwrap());
                    let a = self.product(m + 1, &self.d[m].apply(&x), n, &y).unwrap();
                    let b = self.product(m, &x, n + 1, &self.d[n].apply(&y)).unwrap();
                    let rhs: Vector = a.iter().zip(&b).map(|(u, v)| u + &(&sign(f, m) * v)).collect();
                    let d = sub_vec(&lhs, &rhs);
                    (!crate::exactla::is_zero_vec(&d)).then_some((vec![m, n, i, j], d))
                });
                for (b, d) in bad.into_iter().flatten() {
                    leibniz.record(b, d);
                }
            }
        }
        report.push(leibniz);

        let mut assoc = Check::pass("associative product");
        for a in 1..=self.n_max {
            for b in 1..=self.n_max.saturating_sub(a) {
                for c in 1..=self.n_max.saturating_sub(a + b) {
                    let total = self.dim(a) * self.dim(b) * self.dim(c);
                    let bad = par::map_range(total, |p| {
                        let (i, rest) = (p / (self.dim(b) * self.dim(c)), p % (self.dim(b) * self.dim(c)));
                        let (j, k) = (rest / self.dim(c), rest % self.dim(c));
                        let (x, y, z) = (self.basis(a, i), self.basis(b, j), self.basis(c, k));
                        let l = self.product(a + b, &self.product(a, &x, b, &y).unwrap(), c, &z).unwrap();
                        let r = self.product(a, &x, b + c, &self.product(b, &y, c, &z).unwrap()).unwrap();
                        let d = sub_vec(&l, &r);
                        (!crate::exactla::is_zero_vec(&d)).then_some((vec![a, b, c, i, j, k], d))
                    });
                    for (b, d) in bad.into_iter().flatten() {
                        assoc.record(b, d);
                    }
                }
            }
        }
        report.push(assoc);

        if !self.semi && self.n_max > 0 {
            let s = coinvariant_subring(&self.coring, &Grouplike { g: self.g.clone(), semi: false })?;
            let mut rel = Check::pass("d is S-relative");
            for i in 0..s.source.dim() {
                let sv = s.matrix.column(i);
                let ds = self.d[0].apply(&sv);
                if !crate::exactla::is_zero_vec(&ds) {
                    rel.record(vec![i], ds);
                }
                for n in 0..self.n_max {
                    let (l0, r0) = (self.module(n).left_matrix(&sv), self.module(n).right_matrix(&sv));
                    let (l1, r1) = (self.module(n + 1).left_matrix(&sv), self.module(n + 1).right_matrix(&sv));
                    rel.compare(&[i, n, 0], &self.d[n].mul(&l0), &l1.mul(&self.d[n]));
                    rel.compare(&[i, n, 1], &self.d[n].mul(&r0), &r1.mul(&self.d[n]));
                }
            }
            report.push(rel);
        }
        Ok(report)
    }

    pub fn cohomology(&self) -> CohomologySummary {
        let mut degrees = Vec::with_capacity(self.n_max);
        let mut prev_rank = 0;
        for n in 0..self.n_max {
            let rank = self.d[n].rank();
            let dim = self.dim(n);
            degrees.push(DegreeSummary {
                degree: n,
                dim,
                rank_d: rank,
                h: dim - rank - prev_rank,
            });
            prev_rank = rank;
        }
        CohomologySummary { degrees }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub dim: usize,
    pub rank_d: usize,
    pub h: usize,
}

/// Dimensions, ranks of `d` and cohomology in degrees `0..n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub degrees: Vec<DegreeSummary>,
}

impl CohomologySummary {
    pub fn h(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.h).collect()
    }
}

/// Compares the reduced differential with the full one through the
/// inclusions `Ω^n(C/S) → Ω^n(C)`, and checks `ε ∘ d^0 = 0`.
pub fn check_restriction(reduced: &AmitsurComplex, full: &AmitsurComplex) -> Report {
    let mut report = Report::new("restriction to Ω(C/S)");
    let n_max = reduced.n_max.min(full.n_max);
    let mut agree = Check::pass("d restricts to ker ε");
    let mut injective = Check::pass("Ω^n(C/S) → Ω^n(C) injective");
    for n in 0..n_max {
        let i0 = reduced.inclusion_into(full, n);
        let i1 = reduced.inclusion_into(full, n + 1);
        agree.compare(&[n], &i1.mul(&reduced.d[n]), &full.d[n].mul(&i0));
        if i1.rank() != i1.cols() {
            injective.record(vec![n + 1], Vec::new());
        }
    }
    report.push(agree);
    report.push(injective);
    let c = &full.coring;
    let eps_d = c.counit.mul(&full.d[0]);
    report.push(Check::from_matrices(
        "ε(d(r)) = 0",
        &[],
        &eps_d,
        &Matrix::zeros(c.field(), eps_d.rows(), eps_d.cols()),
    ));
    report
}
