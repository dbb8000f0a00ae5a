use std::sync::Arc;

use super::comodule::Comodule;
use super::coring::Coring;
use super::grouplike::Grouplike;
use crate::algebra::{Algebra, Bimodule};
use crate::error::{Error, Result};
use crate::exactla::{axpy, kron_vec, sub_vec, unit_vector, zeros, Field, FinSpace, Matrix, Scalar, Vector};
use crate::report::{Check, Report};

/// A k-coalgebra given by a coproduct `C → C ⊗ C` and counit `C → k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    pub space: FinSpace,
    /// `dim² × dim`
    pub delta: Matrix,
    pub counit: Vector,
}

impl Coalgebra {
    pub fn new(space: FinSpace, delta: Matrix, counit: Vector) -> Result<Coalgebra> {
        let n = space.dim;
        if delta.shape() != (n * n, n) || counit.len() != n {
            return Err(Error::Shape(format!("coalgebra of dimension {n} has mis-sized structure maps")));
        }
        Ok(Coalgebra { space, delta, counit })
    }

    /// The coalgebra spanned by the given set of grouplike points,
    /// `Δ(x) = x ⊗ x`, `ε(x) = 1`.
    pub fn grouplike_points(field: Field, labels: Vec<String>) -> Coalgebra {
        let n = labels.len();
        let delta = Matrix::build_columns(field, n * n, n, |i| unit_vector(field, n * n, i * n + i));
        Coalgebra {
            space: FinSpace::with_labels(field, labels),
            delta,
            counit: vec![field.one(); n],
        }
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn check(&self) -> Report {
        let f = self.field();
        let n = self.dim();
        let mut report = Report::new("coalgebra axioms");
        let id = Matrix::identity(f, n);
        let delta_left = self.delta.kron(&id);
        let delta_right = id.kron(&self.delta);
        let mut coassoc = Check::pass("coassociative");
        for c in 0..n {
            let d = self.delta.column(c);
            let diff = sub_vec(&delta_left.apply(&d), &delta_right.apply(&d));
            if !crate::exactla::is_zero_vec(&diff) {
                coassoc.record(vec![c], diff);
            }
        }
        report.push(coassoc);
        let eps = Matrix::from_rows(f, vec![self.counit.clone()]).expect("counit row");
        let left = eps.kron(&id).mul(&self.delta);
        let right = id.kron(&eps).mul(&self.delta);
        let mut counit = Check::pass("counit");
        for (c, d) in left.column_defects(&id).into_iter().chain(right.column_defects(&id)) {
            counit.record(vec![c], d);
        }
        report.push(counit);
        report
    }
}

/// An entwining `ψ: C ⊗ A → A ⊗ C` of an algebra and a coalgebra. Flat
/// indices: `C ⊗ A` is `c * dim A + a`, `A ⊗ C` is `a * dim C + c`.
#[derive(Clone, Debug)]
pub struct EntwiningData {
    pub algebra: Arc<Algebra>,
    pub coalgebra: Coalgebra,
    pub psi: Matrix,
}

impl EntwiningData {
    pub fn new(algebra: Arc<Algebra>, coalgebra: Coalgebra, psi: Matrix) -> Result<EntwiningData> {
        let n = algebra.dim() * coalgebra.dim();
        if psi.shape() != (n, n) {
            return Err(Error::Shape(format!("entwining map must be {n}x{n}")));
        }
        Ok(EntwiningData { algebra, coalgebra, psi })
    }

    /// The super-flip: `A = k[y]/(y² − 1)` with `y` odd and `C = kC₂` in
    /// the basis `1 = (u + v)/2`, `σ = (u − v)/2` of its grouplikes `u, v`,
    /// so `Δ(1) = 1⊗1 + σ⊗σ`, `Δ(σ) = 1⊗σ + σ⊗1` with `σ` odd, and
    /// `ψ(c ⊗ a) = (−1)^{|c||a|} a ⊗ c`. Needs characteristic other than 2.
    pub fn superflip(field: Field) -> Result<EntwiningData> {
        if field.characteristic() == 2 {
            return Err(Error::Precondition("the super-flip needs characteristic other than 2".into()));
        }
        let a = Arc::new(Algebra::polynomial_quotient(field, "y", &[-field.one(), field.zero()]));
        let (o, z) = (field.one(), field.zero());
        let delta = Matrix::from_columns(
            field,
            4,
            &[vec![o.clone(), z.clone(), z.clone(), o.clone()], vec![z.clone(), o.clone(), o.clone(), z.clone()]],
        );
        let c = Coalgebra::new(FinSpace::with_labels(field, vec!["1".into(), "σ".into()]), delta, vec![o, z])?;
        let mut psi = Matrix::zeros(field, 4, 4);
        for ci in 0..2 {
            for ai in 0..2 {
                let s = if ci == 1 && ai == 1 { -field.one() } else { field.one() };
                psi.set(ai * 2 + ci, ci * 2 + ai, s);
            }
        }
        EntwiningData::new(a, c, psi)
    }

    /// `ψ(c ⊗ a) = a ⊗ c`.
    pub fn flip(algebra: Arc<Algebra>, coalgebra: Coalgebra) -> EntwiningData {
        let (da, dc) = (algebra.dim(), coalgebra.dim());
        let f = algebra.field();
        let psi = Matrix::build_columns(f, da * dc, dc * da, |x| {
            let (c, a) = (x / da, x % da);
            unit_vector(f, da * dc, a * dc + c)
        });
        EntwiningData { algebra, coalgebra, psi }
    }

    fn field(&self) -> Field {
        self.algebra.field()
    }

    /// `ψ(c ⊗ a)` for a coalgebra basis index and an algebra vector.
    pub fn psi_apply(&self, c: usize, a: &[Scalar]) -> Vector {
        let da = self.algebra.dim();
        let mut out = zeros(self.field(), da * self.coalgebra.dim());
        for (i, s) in a.iter().enumerate() {
            if !s.is_zero() {
                axpy(&mut out, s, &self.psi.column(c * da + i));
            }
        }
        out
    }

    /// `ψ^n(c_1 ⊗ … ⊗ c_n ⊗ a) ∈ A ⊗ C^{⊗n}`, applying `ψ` to the last
    /// coalgebra factor first and moving `a` leftwards.
    pub fn psi_n(&self, cs: &[usize], a: &[Scalar]) -> Vector {
        let f = self.field();
        let (da, dc) = (self.algebra.dim(), self.coalgebra.dim());
        // state: A ⊗ C^{⊗k} for the k rightmost factors already passed
        let mut state = a.to_vec();
        let mut tail = 1usize;
        for &c in cs.iter().rev() {
            let mut next = zeros(f, da * dc * tail);
            for (idx, s) in state.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let (x, rest) = (idx / tail, idx % tail);
                let col = self.psi.column(c * da + x);
                for (y, v) in col.iter().enumerate() {
                    if !v.is_zero() {
                        next[y * tail + rest] += &(s * v);
                    }
                }
            }
            state = next;
            tail *= dc;
        }
        state
    }

    /// `(a ⊗ 1)·v` for `v ∈ A ⊗ C^{⊗n}` in flat coordinates.
    pub fn mul_left(&self, a: &[Scalar], v: &[Scalar], n: usize) -> Vector {
        let (da, dc) = (self.algebra.dim(), self.coalgebra.dim());
        let tail = dc.pow(n as u32);
        let mut out = zeros(self.field(), da * tail);
        for (idx, s) in v.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let (ai, rest) = (idx / tail, idx % tail);
            let p = self.algebra.mul(a, &self.algebra.basis(ai));
            for (z, t) in p.iter().enumerate() {
                if !t.is_zero() {
                    out[z * tail + rest] += &(s * t);
                }
            }
        }
        out
    }

    /// `ψ_n(c ⊗ a^1 ⊗ … ⊗ a^n) ∈ A^{⊗n} ⊗ C`, moving `c` rightwards.
    pub fn psi_sub_n(&self, c: usize, a_s: &[usize]) -> Vector {
        let f = self.field();
        let (da, dc) = (self.algebra.dim(), self.coalgebra.dim());
        // state: A^{⊗k} ⊗ C
        let mut state = unit_vector(f, dc, c);
        let mut head = 1usize;
        for &a in a_s {
            let mut next = zeros(f, head * da * dc);
            for (idx, s) in state.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let (h, cc) = (idx / dc, idx % dc);
                let col = self.psi.column(cc * da + a);
                for (y, v) in col.iter().enumerate() {
                    if !v.is_zero() {
                        next[h * da * dc + y] += &(s * v);
                    }
                }
            }
            state = next;
            head *= da;
        }
        state
    }

    /// The `A`-bimodule `A ⊗ C` with `(a ⊗ c)a' = aψ(c ⊗ a')`.
    pub fn bimodule(&self) -> Bimodule {
        let a = &self.algebra;
        let f = self.field();
        let (da, dc) = (a.dim(), self.coalgebra.dim());
        let n = da * dc;
        let id_c = Matrix::identity(f, dc);
        let left = (0..da).map(|i| a.left_mult_matrix(&a.basis(i)).kron(&id_c)).collect();
        let right = (0..da)
            .map(|i| {
                Matrix::build_columns(f, n, n, |x| {
                    let (ai, ci) = (x / dc, x % dc);
                    let p = self.psi_apply(ci, &a.basis(i));
                    let mut out = zeros(f, n);
                    for (y, s) in p.iter().enumerate() {
                        if s.is_zero() {
                            continue;
                        }
                        let (ay, cy) = (y / dc, y % dc);
                        let prod = a.basis_product(ai, ay);
                        for (z, t) in prod.iter().enumerate() {
                            if !t.is_zero() {
                                out[z * dc + cy] += &(s * t);
                            }
                        }
                    }
                    out
                })
            })
            .collect();
        let mut labels = Vec::with_capacity(n);
        for la in a.labels() {
            for lc in &self.coalgebra.space.labels {
                labels.push(format!("{la}⊗{lc}"));
            }
        }
        Bimodule::new(FinSpace::with_labels(f, labels), a.clone(), a.clone(), left, right)
            .expect("action matrices have matching shapes")
    }

    /// The coring `A ⊗ C` without checking the axioms.
    pub fn coring_unchecked(&self) -> Result<Coring> {
        let a = &self.algebra;
        let f = self.field();
        let (da, dc) = (a.dim(), self.coalgebra.dim());
        let n = da * dc;
        let one_c = |y: usize| kron_vec(a.unit(), &unit_vector(f, dc, y));
        let lift = Matrix::build_columns(f, n * n, n, |x| {
            let (ai, ci) = (x / dc, x % dc);
            let mut out = zeros(f, n * n);
            for (xy, s) in self.coalgebra.delta.column(ci).iter().enumerate() {
                if !s.is_zero() {
                    let (c1, c2) = (xy / dc, xy % dc);
                    let left = unit_vector(f, n, ai * dc + c1);
                    axpy(&mut out, s, &kron_vec(&left, &one_c(c2)));
                }
            }
            out
        });
        let counit = Matrix::build_columns(f, da, n, |x| {
            let (ai, ci) = (x / dc, x % dc);
            crate::exactla::scale(&self.coalgebra.counit[ci], &a.basis(ai))
        });
        Coring::new(self.bimodule(), lift, counit)
    }

    /// The coring `A ⊗ C`; rejected unless every coring axiom holds.
    pub fn coring(&self) -> Result<Coring> {
        let failed = self.bimodule().check().failing().next().map(|c| c.name.clone());
        if let Some(axiom) = failed {
            return Err(Error::NotEntwining(format!("right action: {axiom}")));
        }
        let c = self.coring_unchecked()?;
        let failed = c.check_axioms().failing().next().map(|c| c.name.clone());
        match failed {
            Some(axiom) => Err(Error::NotEntwining(axiom)),
            None => Ok(c),
        }
    }

    /// Given a lift `A → A ⊗ C` of a coaction making `A` an entwined module,
    /// returns `g = ρ(1)` after checking the comodule axioms and that `g` is
    /// grouplike.
    pub fn grouplike_from_entwined_algebra(&self, coring: &Arc<Coring>, rho: &Matrix) -> Result<Grouplike> {
        let a = &self.algebra;
        let f = self.field();
        let n = a.dim();
        let lift = Matrix::build_columns(f, n * coring.dim(), n, |i| kron_vec(a.unit(), &rho.column(i)));
        let module = Bimodule::right_regular(a.clone());
        let m = Comodule::from_lift(coring.clone(), module, &lift)?;
        if let Some(bad) = m.check().failing().next() {
            return Err(Error::InvalidComodule(bad.name.clone()));
        }
        Grouplike::new(coring, rho.apply(a.unit()))
    }
}
