use std::sync::Arc;

use super::comodule::{comodule_hom_space, Comodule};
use super::coring::Coring;
use super::grouplike::coinvariant_subring;
use super::Grouplike;
use crate::algebra::{module_hom_space, Algebra, AlgebraMap, Bimodule, Side};
use crate::error::{Error, Result};
use crate::exactla::{solve, solve_many, sub_vec, Matrix, Vector};
use crate::report::{Check, Report};

/// The splittings `C ≅ R ⊕ ker ε` determined by a grouplike `g`.
/// Coordinates on `R ⊕ ker ε` put `R` first, then the chosen basis of `ker ε`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `dim C × dim ker ε`
    pub kernel: Matrix,
    /// `u_R(c) = (ε(c), gε(c) − c)`
    pub u_right: Matrix,
    /// `(r, k) ↦ gr − k`
    pub u_right_inv: Matrix,
    /// `u_L(c) = (ε(c), c − ε(c)g)`
    pub u_left: Matrix,
    /// `(r, k) ↦ rg + k`
    pub u_left_inv: Matrix,
    pub report: Report,
}

/// `r ↦ rg` and `r ↦ gr` as maps `R → C`.
pub fn grouplike_maps(coring: &Coring, g: &[crate::exactla::Scalar]) -> (Matrix, Matrix) {
    let ring = &coring.ring;
    let f = ring.field();
    let n = ring.dim();
    let left = Matrix::build_columns(f, coring.dim(), n, |r| coring.left(&ring.basis(r), g));
    let right = Matrix::build_columns(f, coring.dim(), n, |r| coring.right(g, &ring.basis(r)));
    (left, right)
}

pub fn decomposition_maps(coring: &Arc<Coring>, g: &Grouplike) -> Result<Decomposition> {
    let f = coring.field();
    let (dr, dc) = (coring.ring.dim(), coring.dim());
    let (kmod, incl) = coring.counit_kernel()?;
    let dk = incl.cols();
    let (rg, gr) = grouplike_maps(coring, &g.g);
    let id = Matrix::identity(f, dc);
    let eps = &coring.counit;
    let coords = |m: &Matrix| -> Result<Matrix> {
        if dk == 0 {
            return Ok(Matrix::zeros(f, 0, m.cols()));
        }
        solve_many(&incl, m).ok_or_else(|| Error::Inconsistent("decomposition leaves ker ε".into()))
    };
    let u_right = Matrix::vstack(f, dc, &[eps.clone(), coords(&gr.mul(eps).sub(&id))?]);
    let u_left = Matrix::vstack(f, dc, &[eps.clone(), coords(&id.sub(&rg.mul(eps)))?]);
    let u_right_inv = Matrix::hstack(f, dc, &[gr.clone(), incl.scale(&f.from_i64(-1))]);
    let u_left_inv = Matrix::hstack(f, dc, &[rg.clone(), incl.clone()]);

    let mut report = Report::new("decomposition");
    let sum_id = Matrix::identity(f, dr + dk);
    report.push(Check::from_matrices("u_R u_R⁻¹ = id", &[], &u_right.mul(&u_right_inv), &sum_id));
    report.push(Check::from_matrices("u_R⁻¹ u_R = id", &[], &u_right_inv.mul(&u_right), &id));
    report.push(Check::from_matrices("u_L u_L⁻¹ = id", &[], &u_left.mul(&u_left_inv), &sum_id));
    report.push(Check::from_matrices("u_L⁻¹ u_L = id", &[], &u_left_inv.mul(&u_left), &id));
    report.push(Check::from_bool(
        "dim C = dim R + dim ker ε",
        dc == dr + dk,
        format!("{dc} ≠ {dr} + {dk}"),
    ));

    let s = coinvariant_subring(coring, g)?;
    let sum = Bimodule::direct_sum(&[Bimodule::regular(coring.ring.clone()), kmod])?;
    let mut right_bilinear = Check::pass("u_R is (S, R)-bilinear");
    let mut left_bilinear = Check::pass("u_L is (R, S)-bilinear");
    for i in 0..s.source.dim() {
        let sv = s.matrix.column(i);
        let (lc, ls) = (coring.bimodule.left_matrix(&sv), sum.left_matrix(&sv));
        right_bilinear.compare(&[0, i], &u_right.mul(&lc), &ls.mul(&u_right));
        let (rc, rs) = (coring.bimodule.right_matrix(&sv), sum.right_matrix(&sv));
        left_bilinear.compare(&[1, i], &u_left.mul(&rc), &rs.mul(&u_left));
    }
    for r in 0..dr {
        let (rc, rs) = (coring.bimodule.right_basis_action(r), sum.right_basis_action(r));
        right_bilinear.compare(&[1, r], &u_right.mul(rc), &rs.mul(&u_right));
        let (lc, ls) = (coring.bimodule.left_basis_action(r), sum.left_basis_action(r));
        left_bilinear.compare(&[0, r], &u_left.mul(lc), &ls.mul(&u_left));
    }
    report.push(right_bilinear);
    report.push(left_bilinear);
    Ok(Decomposition {
        kernel: incl,
        u_right,
        u_right_inv,
        u_left,
        u_left_inv,
        report,
    })
}

/// `C` as a ring with `cc' = ε(c)c' + cε(c') − ε(c)gε(c')` and unit `g`,
/// together with the ring maps `r ↦ rg`, `r ↦ gr` and `ε`.
#[derive(Clone, Debug)]
pub struct GrouplikeRing {
    pub algebra: Arc<Algebra>,
    pub i_left: AlgebraMap,
    pub i_right: AlgebraMap,
    pub counit: AlgebraMap,
    pub report: Report,
}

pub fn grouplike_ring_structure(coring: &Coring, g: &Grouplike) -> Result<GrouplikeRing> {
    let f = coring.field();
    let n = coring.dim();
    let eps: Vec<Vector> = (0..n).map(|c| coring.counit.column(c)).collect();
    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = coring.left(&eps[i], &coring.basis(j));
                    let b = coring.right(&coring.basis(i), &eps[j]);
                    let c = coring.left(&eps[i], &coring.right(&g.g, &eps[j]));
                    sub_vec(&crate::exactla::add_vec(&a, &b), &c)
                })
                .collect()
        })
        .collect();
    let labels = coring.bimodule.space.labels.clone();
    let algebra = Arc::new(Algebra::new(f, labels, mult, g.g.clone())?);
    let (rg, gr) = grouplike_maps(coring, &g.g);
    let i_left = AlgebraMap::new(coring.ring.clone(), algebra.clone(), rg)?;
    let i_right = AlgebraMap::new(coring.ring.clone(), algebra.clone(), gr)?;
    let counit = AlgebraMap::new(algebra.clone(), coring.ring.clone(), coring.counit.clone())?;

    let mut report = Report::new("grouplike ring");
    report.extend(algebra.check_axioms());
    let mut g_unit = Check::pass("g c = c");
    for c in 0..n {
        let d = sub_vec(&algebra.mul(&g.g, &coring.basis(c)), &coring.basis(c));
        if !crate::exactla::is_zero_vec(&d) {
            g_unit.record(vec![c], d);
        }
    }
    report.push(g_unit);
    let tag = |mut r: Report, prefix: &str| {
        for c in &mut r.checks {
            c.name = format!("{prefix} {}", c.name);
        }
        r
    };
    report.extend(tag(counit.check(), "ε"));
    report.extend(tag(i_left.check(), "i_L"));
    report.extend(tag(i_right.check(), "i_R"));
    let id = Matrix::identity(f, coring.ring.dim());
    report.push(Check::from_matrices("ε i_L = id", &[], &coring.counit.mul(&i_left.matrix), &id));
    report.push(Check::from_matrices("ε i_R = id", &[], &coring.counit.mul(&i_right.matrix), &id));
    Ok(GrouplikeRing {
        algebra,
        i_left,
        i_right,
        counit,
        report,
    })
}

/// `φ: R → C^{co C}_g, r ↦ rg` with inverse `ε` restricted to coinvariants.
#[derive(Clone, Debug)]
pub struct CoinvariantIso {
    pub phi: Matrix,
    pub coinvariants: Vec<Vector>,
    pub report: Report,
}

pub fn verify_coinv_c_iso(coring: &Arc<Coring>, g: &Grouplike) -> Result<CoinvariantIso> {
    let f = coring.field();
    let dr = coring.ring.dim();
    let own = Comodule::coring_itself(coring.clone())?;
    let coinvariants = own.coinvariants(&g.g);
    let (phi, _) = grouplike_maps(coring, &g.g);
    let mut report = Report::new("coinvariants of C");
    let mut lands = Check::pass("φ lands in coinvariants");
    lands.compare(&[], &own.coaction.mul(&phi), &own.tensor_with(&g.g).mul(&phi));
    report.push(lands);
    report.push(Check::from_matrices("ε φ = id", &[], &coring.counit.mul(&phi), &Matrix::identity(f, dr)));
    let mut back = Check::pass("c = ε(c) g on coinvariants");
    for (i, c) in coinvariants.iter().enumerate() {
        let d = sub_vec(&phi.apply(&coring.counit_of(c)), c);
        if !crate::exactla::is_zero_vec(&d) {
            back.record(vec![i], d);
        }
    }
    report.push(back);
    report.push(Check::from_bool(
        "dim C^co = dim R",
        coinvariants.len() == dr,
        format!("{} ≠ {dr}", coinvariants.len()),
    ));
    let s = coinvariant_subring(coring, g)?;
    let mut bilinear = Check::pass("φ is (R, S)-bilinear");
    for r in 0..dr {
        bilinear.compare(
            &[0, r],
            &phi.mul(&coring.ring.left_mult_matrix(&coring.ring.basis(r))),
            &coring.bimodule.left_basis_action(r).mul(&phi),
        );
    }
    for i in 0..s.source.dim() {
        let sv = s.matrix.column(i);
        bilinear.compare(
            &[1, i],
            &phi.mul(&coring.ring.right_mult_matrix(&sv)),
            &coring.bimodule.right_matrix(&sv).mul(&phi),
        );
    }
    report.push(bilinear);
    Ok(CoinvariantIso {
        phi,
        coinvariants,
        report,
    })
}

/// The bijection `Hom^C_R(R, M) ≅ M^{co C}_g`, `f ↦ f(1)`, `m ↦ (r ↦ mr)`.
#[derive(Clone, Debug)]
pub struct HomCoinvariants {
    pub homs: Vec<Matrix>,
    pub coinvariants: Vec<Vector>,
    pub report: Report,
}

/// `r ↦ m r` as a `dim M × dim R` matrix.
fn multiplication_by(m: &Comodule, v: &[crate::exactla::Scalar]) -> Matrix {
    let ring = &m.coring.ring;
    Matrix::build_columns(ring.field(), m.dim(), ring.dim(), |r| m.module.act_right(v, &ring.basis(r)))
}

fn flatten(m: &Matrix) -> Vector {
    m.to_rows().into_iter().flatten().collect()
}

pub fn hom_coinv_iso(coring: &Arc<Coring>, g: &Grouplike, m: &Comodule) -> Result<HomCoinvariants> {
    let f = coring.field();
    let ring = &coring.ring;
    let reg = Comodule::regular(coring.clone(), &g.g)?;
    let homs = comodule_hom_space(&reg, m);
    let coinvariants = m.coinvariants(&g.g);
    let mut report = Report::new("colinear maps from R");
    report.push(Check::from_bool(
        "dim Hom^C(R, M) = dim M^co",
        homs.len() == coinvariants.len(),
        format!("{} ≠ {}", homs.len(), coinvariants.len()),
    ));
    let span = Matrix::from_columns(f, m.dim() * ring.dim(), &homs.iter().map(flatten).collect::<Vec<_>>());
    let in_span = |x: &Matrix| homs.is_empty() && x.is_zero() || solve(&span, &flatten(x)).is_some();
    let to_m = m.tensor_with(&g.g);

    let mut eval = Check::pass("f(1) is coinvariant and determines f");
    for (i, h) in homs.iter().enumerate() {
        let v = h.apply(ring.unit());
        let d = sub_vec(&m.coaction.apply(&v), &to_m.apply(&v));
        if !crate::exactla::is_zero_vec(&d) {
            eval.record(vec![i], d);
        }
        eval.compare(&[i], &multiplication_by(m, &v), h);
    }
    report.push(eval);

    let mut extend = Check::pass("r ↦ mr is colinear with value m at 1");
    for (i, v) in coinvariants.iter().enumerate() {
        let fm = multiplication_by(m, v);
        if !in_span(&fm) {
            extend.record(vec![i], fm.column(0));
        }
        let d = sub_vec(&fm.apply(ring.unit()), v);
        if !crate::exactla::is_zero_vec(&d) {
            extend.record(vec![i], d);
        }
    }
    report.push(extend);

    let s = coinvariant_subring(coring, g)?;
    let mut s_action = Check::pass("(f s)(r) = f(s r)");
    for (i, v) in coinvariants.iter().enumerate() {
        for j in 0..s.source.dim() {
            let sv = s.matrix.column(j);
            let vs = m.module.act_right(v, &sv);
            s_action.compare(
                &[i, j],
                &multiplication_by(m, &vs),
                &multiplication_by(m, v).mul(&ring.left_mult_matrix(&sv)),
            );
        }
    }
    report.push(s_action);
    Ok(HomCoinvariants {
        homs,
        coinvariants,
        report,
    })
}

/// `(dim Hom^C(M ⊗_S R, N), dim Hom_S(M, N^{co C}_g))` for a right
/// `S`-module `M` and a comodule `N`.
pub fn adjunction_dims(coring: &Arc<Coring>, g: &Grouplike, m: &Bimodule, n: &Comodule) -> Result<(usize, usize)> {
    let ext = coinvariant_subring(coring, g)?;
    let induced = Comodule::induced(coring.clone(), &ext, m, &g.g)?;
    let lhs = comodule_hom_space(&induced, n).len();
    let co = n.coinvariants(&g.g);
    let (nco, _) = n.module.restrict_right(&ext)?.submodule(&co)?;
    let rhs = module_hom_space(&m.clone().forget_left(), &nco.forget_left(), Side::Right).len();
    Ok((lhs, rhs))
}

/// The free right `S`-module `S^k` for use with [`adjunction_dims`].
pub fn free_coinvariant_module(coring: &Arc<Coring>, g: &Grouplike, k: usize) -> Result<Bimodule> {
    let ext = coinvariant_subring(coring, g)?;
    Ok(Bimodule::free_right(ext.source.clone(), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Field;

    fn f4() -> Arc<Algebra> {
        let f2 = Field::prime(2).unwrap();
        Arc::new(Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()]))
    }

    fn sweedler() -> (Arc<Coring>, Grouplike) {
        let (c, g) = Coring::sweedler(&AlgebraMap::from_ground(f4())).unwrap();
        let g = Grouplike::new(&c, g).unwrap();
        (Arc::new(c), g)
    }

    #[test]
    fn decomposition_of_sweedler() {
        let (c, g) = sweedler();
        let d = decomposition_maps(&c, &g).unwrap();
        assert!(d.report.passed(), "{:?}", d.report.failing().collect::<Vec<_>>());
        assert_eq!(d.kernel.cols(), 2);
        let ug = d.u_right.apply(&g.g);
        assert_eq!(ug[..2], c.ring.unit()[..]);
        assert!(crate::exactla::is_zero_vec(&ug[2..]));
    }

    #[test]
    fn grouplike_rings() {
        let (c, g) = sweedler();
        let gr = grouplike_ring_structure(&c, &g).unwrap();
        assert!(gr.report.passed(), "{:?}", gr.report.failing().collect::<Vec<_>>());
        assert_eq!(gr.algebra.dim(), 4);
        let r = f4();
        let t = Coring::trivial(r.clone());
        let g1 = Grouplike::new(&t, r.unit().clone()).unwrap();
        let tr = grouplike_ring_structure(&t, &g1).unwrap();
        assert!(tr.report.passed());
        assert_eq!(tr.algebra.table(), r.table());
    }

    #[test]
    fn coinvariants_of_c_and_colinear_maps() {
        let (c, g) = sweedler();
        let iso = verify_coinv_c_iso(&c, &g).unwrap();
        assert!(iso.report.passed());
        assert_eq!(iso.coinvariants.len(), 2);
        let reg = Comodule::regular(c.clone(), &g.g).unwrap();
        let h = hom_coinv_iso(&c, &g, &reg).unwrap();
        assert!(h.report.passed());
        assert_eq!(h.homs.len(), 1);
        let own = Comodule::coring_itself(c.clone()).unwrap();
        let h = hom_coinv_iso(&c, &g, &own).unwrap();
        assert!(h.report.passed());
        assert_eq!(h.homs.len(), 2);
    }

    #[test]
    fn adjunction_dimensions() {
        let (c, g) = sweedler();
        let own = Comodule::coring_itself(c.clone()).unwrap();
        for k in 1..3 {
            let m = free_coinvariant_module(&c, &g, k).unwrap();
            let (l, r) = adjunction_dims(&c, &g, &m, &own).unwrap();
            assert_eq!(l, r);
        }
    }
}
