use std::sync::Arc;

use super::complex::AmitsurComplex;
use crate::algebra::{Algebra, Bimodule, TensorChain};
use crate::coring::{decomposition_maps, Coring, Grouplike};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, kron_vec, solve_many, sub_vec, unit_vector, zeros, FinSpace, Matrix, Scalar, Vector};
use crate::report::{Check, Report};

/// First-order data of a differential graded ring with `Ω⁰ = R` and
/// `Ωⁿ = (Ω¹)^{⊗_R n}`: the bimodule `Ω¹`, `d0: R → Ω¹` and
/// `d1: Ω¹ → Ω¹ ⊗_R Ω¹` (in the coordinates of [`TensorChain::power`]).
#[derive(Clone, Debug)]
pub struct DgData {
    pub ring: Arc<Algebra>,
    pub omega1: Bimodule,
    pub d0: Matrix,
    pub d1: Matrix,
}

impl DgData {
    /// `Ω¹ ⊗_R Ω¹ ⊗_R Ω¹`; level 1 is the target of `d1`.
    pub fn chain(&self) -> Result<TensorChain> {
        TensorChain::power(&self.omega1, 3)
    }

    /// The degree 0 and 1 part of `Ω(C/S)` for a coring with grouplike.
    pub fn from_reduced(cx: &AmitsurComplex) -> Result<DgData> {
        if !cx.reduced || cx.n_max < 2 {
            return Err(Error::Precondition("need the reduced complex up to degree 2".into()));
        }
        Ok(DgData {
            ring: cx.coring.ring.clone(),
            omega1: cx.factor.clone(),
            d0: cx.d[0].clone(),
            d1: cx.d[1].clone(),
        })
    }

    /// Shapes, the Leibniz rule for `d0` and `d1`, `d1 d0 = 0` and
    /// `d2 d1 = 0`, where `d2(ω ⊗ ω') = d1(ω) ⊗ ω' − ω ⊗ d1(ω')`.
    pub fn check(&self) -> Result<Report> {
        let ring = &self.ring;
        let f = ring.field();
        let (dr, dw) = (ring.dim(), self.omega1.dim());
        let chain = self.chain()?;
        if self.d0.shape() != (dw, dr) || self.d1.shape() != (chain.dim(1), dw) {
            return Err(Error::Shape(format!(
                "d0 must be {dw}x{dr} and d1 {}x{dw}, got {:?} and {:?}",
                chain.dim(1),
                self.d0.shape(),
                self.d1.shape()
            )));
        }
        let mut report = Report::new("differential graded data");
        report.extend(self.omega1.check());

        let mut l0 = Check::pass("d0 Leibniz");
        for i in 0..dr {
            for j in 0..dr {
                let lhs = self.d0.apply(ring.basis_product(i, j));
                let a = self.omega1.act_right(&self.d0.column(i), &ring.basis(j));
                let b = self.omega1.act_left(&ring.basis(i), &self.d0.column(j));
                let d = sub_vec(&lhs, &crate::exactla::add_vec(&a, &b));
                if !is_zero_vec(&d) {
                    l0.record(vec![i, j], d);
                }
            }
        }
        report.push(l0);

        let z = self.d1.mul(&self.d0);
        report.push(Check::from_matrices("d1 d0 = 0", &[], &z, &Matrix::zeros(f, z.rows(), z.cols())));

        let pair = chain.module(1);
        let mut l1 = Check::pass("d1 Leibniz");
        for r in 0..dr {
            let rv = ring.basis(r);
            let dr_ = self.d0.column(r);
            for w in 0..dw {
                let wv = unit_vector(f, dw, w);
                let lhs = self.d1.apply(&self.omega1.act_left(&rv, &wv));
                let rhs = crate::exactla::add_vec(&chain.extend(1, &dr_, &wv), &pair.act_left(&rv, &self.d1.column(w)));
                let d = sub_vec(&lhs, &rhs);
                if !is_zero_vec(&d) {
                    l1.record(vec![0, r, w], d);
                }
                let lhs = self.d1.apply(&self.omega1.act_right(&wv, &rv));
                let rhs = sub_vec(&pair.act_right(&self.d1.column(w), &rv), &chain.extend(1, &wv, &dr_));
                let d = sub_vec(&lhs, &rhs);
                if !is_zero_vec(&d) {
                    l1.record(vec![1, r, w], d);
                }
            }
        }
        report.push(l1);

        let d2 = self.d2(&chain);
        let z = d2.mul(&self.d1);
        report.push(Check::from_matrices("d2 d1 = 0", &[], &z, &Matrix::zeros(f, z.rows(), z.cols())));
        Ok(report)
    }

    fn d2(&self, chain: &TensorChain) -> Matrix {
        let f = self.ring.field();
        let dw = self.omega1.dim();
        let triple = |u: &[Scalar], v: &[Scalar], left_pair: bool| -> Vector {
            // u ⊗ v with either u or v in Ω¹ ⊗_R Ω¹
            let flat = if left_pair {
                kron_vec(&chain.lift_flat(1, u), v)
            } else {
                kron_vec(u, &chain.lift_flat(1, v))
            };
            chain.project_flat(2, &flat)
        };
        chain.map_from_lifts(1, chain.dim(2), |t| {
            let (a, b) = (unit_vector(f, dw, t[0]), unit_vector(f, dw, t[1]));
            sub_vec(&triple(&self.d1.column(t[0]), &b, true), &triple(&a, &self.d1.column(t[1]), false))
        })
    }
}

/// The coring `C = Rg ⊕ Ω¹` with `(rg + ω)r' = rr'g + r d(r') + ωr'`,
/// `Δ(rg) = rg ⊗ g`, `Δ(ω) = g ⊗ ω + ω ⊗ g − d(ω)` and `ε(rg + ω) = r`.
#[derive(Clone, Debug)]
pub struct DgCoring {
    pub coring: Arc<Coring>,
    pub g: Grouplike,
    /// Preconditions, coring axioms and the round trip through `Ω(C/S)`.
    pub report: Report,
}

pub fn coring_from_dg(data: &DgData) -> Result<DgCoring> {
    let pre = data.check()?;
    if let Some(bad) = pre.failing().next() {
        let at = bad.witnesses.first().map(|w| format!(" at {:?}", w.basis)).unwrap_or_default();
        return Err(Error::Precondition(format!("{} fails{at}", bad.name)));
    }
    let ring = data.ring.clone();
    let f = ring.field();
    let (dr, dw) = (ring.dim(), data.omega1.dim());
    let n = dr + dw;
    let embed_w = |w: &[Scalar]| -> Vector {
        let mut v = zeros(f, n);
        v[dr..].clone_from_slice(w);
        v
    };
    let left: Vec<Matrix> = (0..dr)
        .map(|a| {
            let ra = ring.left_mult_matrix(&ring.basis(a));
            let wa = data.omega1.left_basis_action(a);
            block_diag(f, &ra, wa)
        })
        .collect();
    let right: Vec<Matrix> = (0..dr)
        .map(|b| {
            let rb = ring.basis(b);
            let db = data.d0.column(b);
            Matrix::build_columns(f, n, n, |c| {
                if c < dr {
                    let mut v = ring.mul(&ring.basis(c), &rb);
                    v.extend(data.omega1.act_left(&ring.basis(c), &db));
                    v
                } else {
                    embed_w(&data.omega1.act_right(&unit_vector(f, dw, c - dr), &rb))
                }
            })
        })
        .collect();
    let mut labels: Vec<String> = ring.labels().iter().map(|l| format!("{l}g")).collect();
    labels.extend(data.omega1.space.labels.iter().cloned());
    let bimodule = Bimodule::new(FinSpace::with_labels(f, labels), ring.clone(), ring.clone(), left, right)?;

    let mut g = zeros(f, n);
    g[..dr].clone_from_slice(ring.unit());
    let chain = data.chain()?;
    let delta_lift = Matrix::build_columns(f, n * n, n, |c| {
        if c < dr {
            let mut rg = zeros(f, n);
            rg[..dr].clone_from_slice(&ring.basis(c));
            return kron_vec(&rg, &g);
        }
        let w = embed_w(&unit_vector(f, dw, c - dr));
        let mut v = crate::exactla::add_vec(&kron_vec(&g, &w), &kron_vec(&w, &g));
        let dw_flat = chain.lift_flat(1, &data.d1.column(c - dr));
        for (x, s) in dw_flat.iter().enumerate() {
            if !s.is_zero() {
                let (a, b) = (x / dw, x % dw);
                v[(dr + a) * n + dr + b] -= s;
            }
        }
        v
    });
    let counit = Matrix::hstack(f, dr, &[Matrix::identity(f, dr), Matrix::zeros(f, dr, dw)]);
    let coring = Arc::new(Coring::new(bimodule, delta_lift, counit)?);

    let mut report = Report::new("coring from a differential graded ring");
    report.extend(pre);
    report.extend(coring.bimodule.check());
    report.extend(coring.check_axioms());
    let g = Grouplike::new(&coring, g)?;

    let cx = AmitsurComplex::new(coring.clone(), &g, 2, true)?;
    // ι: Ω¹ → ker ε in the complex's coordinates
    let iota = solve_many(
        &cx.inclusion,
        &Matrix::build_columns(f, n, dw, |w| embed_w(&unit_vector(f, dw, w))),
    );
    match iota {
        Some(iota) if cx.factor.dim() == dw => {
            report.push(Check::from_bool("ker ε = Ω¹", iota.rank() == dw, "ι not bijective"));
            report.push(Check::from_matrices("reduced d⁰ = d0", &[], &cx.d[0], &iota.mul(&data.d0)));
            let kchain = cx.chain.as_ref().expect("degree 2 complex has a chain");
            let cols = iota.columns();
            let iota2 = chain.map_from_lifts(1, kchain.dim(1), |t| kchain.embed_vectors(&[&cols[t[0]], &cols[t[1]]]));
            report.push(Check::from_matrices("reduced d¹ = d1", &[], &cx.d[1].mul(&iota), &iota2.mul(&data.d1)));
        }
        _ => report.push(Check::fail("ker ε = Ω¹", format!("dim ker ε = {}, dim Ω¹ = {dw}", cx.factor.dim()))),
    }
    Ok(DgCoring { coring, g, report })
}

fn block_diag(f: crate::exactla::Field, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.rows() + b.rows();
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    m
}

/// Rebuilds a coring from its degree 0 and 1 forms and checks that
/// `(r, k) ↦ rg + k` is a coring isomorphism onto the original.
pub fn reconstruct(coring: &Arc<Coring>, g: &Grouplike) -> Result<(DgCoring, Report)> {
    let cx = AmitsurComplex::new(coring.clone(), g, 2, true)?;
    let data = DgData::from_reduced(&cx)?;
    let rebuilt = coring_from_dg(&data)?;
    let dec = decomposition_maps(coring, g)?;
    let phi = dec.u_left_inv.clone();
    let mut report = Report::new("reconstruction");
    report.push(Check::from_bool("(r, k) ↦ rg + k bijective", phi.inverse().is_some(), "not invertible"));
    report.extend(rebuilt.coring.bimodule.check_map(&coring.bimodule, &phi));
    report.extend(rebuilt.coring.check_morphism(coring, &phi));
    Ok((rebuilt, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraMap;
    use crate::exactla::Field;

    #[test]
    fn zero_forms_give_the_trivial_coring() {
        let q = Field::Rational;
        let r = Arc::new(Algebra::upper_triangular(q));
        let data = DgData {
            ring: r.clone(),
            omega1: Bimodule::zero(r.clone(), r.clone()),
            d0: Matrix::zeros(q, 0, 3),
            d1: Matrix::zeros(q, 0, 0),
        };
        let c = coring_from_dg(&data).unwrap();
        assert!(c.report.passed(), "{:?}", c.report.failing().collect::<Vec<_>>());
        assert_eq!(c.coring.dim(), 3);
        assert_eq!(c.coring.delta_lift, Coring::trivial(r).delta_lift);
    }

    #[test]
    fn sweedler_round_trip() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Arc::new(Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()]));
        let q = Field::Rational;
        let dual = Arc::new(Algebra::polynomial_quotient(q, "x", &[q.zero(), q.zero()]));
        for ext in [AlgebraMap::from_ground(f4), AlgebraMap::from_ground(dual)] {
            let (c, g) = Coring::sweedler(&ext).unwrap();
            let c = Arc::new(c);
            let g = Grouplike::new(&c, g).unwrap();
            let (rebuilt, iso) = reconstruct(&c, &g).unwrap();
            assert!(rebuilt.report.passed(), "{:?}", rebuilt.report.failing().collect::<Vec<_>>());
            assert!(iso.passed(), "{:?}", iso.failing().collect::<Vec<_>>());
        }
    }

    #[test]
    fn broken_differential_is_rejected() {
        let q = Field::Rational;
        let a = Arc::new(Algebra::polynomial_quotient(q, "x", &[q.zero(), q.zero()]));
        let (c, g) = Coring::sweedler(&AlgebraMap::from_ground(a)).unwrap();
        let c = Arc::new(c);
        let g = Grouplike::new(&c, g).unwrap();
        let cx = AmitsurComplex::new(c, &g, 2, true).unwrap();
        let data = DgData::from_reduced(&cx).unwrap();
        assert!(coring_from_dg(&data).is_ok());
        let mut bad = data.clone();
        bad.d0.set(0, 1, &bad.d0.get(0, 1).clone() + &q.one());
        match coring_from_dg(&bad) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("Leibniz") || msg.contains("d1 d0")),
            other => panic!("expected a precondition failure, got {:?}", other.map(|c| c.report)),
        }
    }
}
