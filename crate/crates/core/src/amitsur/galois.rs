use std::sync::Arc;

use serde::Serialize;

use super::complex::{sign, AmitsurComplex, CohomologySummary};
use crate::algebra::{verify_free_basis, AlgebraMap, Bimodule, TensorChain};
use crate::coring::{coinvariant_subring, Coring, Grouplike};
use crate::error::{Error, Result};
use crate::exactla::{axpy, kron_vec, sub_vec, unit_vector, zeros, Matrix, Vector};
use crate::report::{Check, Report};

/// The canonical map `χ: R ⊗_S R → C, r ⊗ r' ↦ rgr'`.
#[derive(Clone, Debug)]
pub struct GaloisMap {
    pub coring: Arc<Coring>,
    pub g: Vector,
    pub ext: AlgebraMap,
    /// `R ⊗_S R` as the chain `R ⊗_S R`; level 1 carries the basis of `χ`'s domain.
    pub pair: TensorChain,
    /// The Sweedler coring on the same space.
    pub sweedler: Coring,
    pub chi: Matrix,
    pub chi_inv: Option<Matrix>,
    pub report: Report,
}

impl GaloisMap {
    pub fn is_galois(&self) -> bool {
        self.chi_inv.is_some() && self.report.passed()
    }
}

pub fn galois_map(coring: &Arc<Coring>, g: &Grouplike) -> Result<GaloisMap> {
    let ext = coinvariant_subring(coring, g)?;
    let ring = coring.ring.clone();
    let reg = Bimodule::regular(ring.clone());
    let pair = TensorChain::new(vec![reg.restrict_right(&ext)?, reg.restrict_left(&ext)?])?;
    let (sweedler, _) = Coring::sweedler(&ext)?;
    if sweedler.dim() != pair.dim(1) {
        return Err(Error::Inconsistent("two constructions of R ⊗_S R disagree".into()));
    }
    let formula = |t: &[usize]| coring.left(&ring.basis(t[0]), &coring.right(&g.g, &ring.basis(t[1])));
    let chi = pair.map_from_lifts(1, coring.dim(), formula);
    let mut report = Report::new("Galois map");
    report.push(pair.check_descends("χ well defined", 1, &chi, formula));
    let morphism = sweedler.check_morphism(coring, &chi);
    for mut c in morphism.checks {
        c.name = format!("χ {}", c.name);
        report.push(c);
    }
    let one = pair.embed_vectors(&[ring.unit(), ring.unit()]);
    report.push(Check::from_defects("χ(1 ⊗ 1) = g", [(vec![], sub_vec(&chi.apply(&one), &g.g))]));
    let chi_inv = chi.inverse();
    Ok(GaloisMap {
        coring: coring.clone(),
        g: g.g.clone(),
        ext,
        pair,
        sweedler,
        chi,
        chi_inv,
        report,
    })
}

/// `c⁽¹⁾g ⊗_S c⁽²⁾ = c₍₁₎χ⁻¹(c₍₂₎)` in `C ⊗_S R`, on every basis element of `C`.
pub fn verify_star_identity(gm: &GaloisMap) -> Result<Check> {
    let chi_inv = gm.chi_inv.as_ref().ok_or(Error::NotGalois)?;
    let c = &gm.coring;
    let ring = &c.ring;
    let f = c.field();
    let n = c.dim();
    let target = TensorChain::new(vec![
        c.bimodule.restrict_right(&gm.ext)?,
        Bimodule::regular(ring.clone()).restrict_left(&gm.ext)?,
    ])?;
    let dim = target.dim(1);
    let mut check = Check::pass("c⁽¹⁾g ⊗ c⁽²⁾ = c₍₁₎ χ⁻¹(c₍₂₎)");
    for ci in 0..n {
        let mut lhs = zeros(f, dim);
        for (j, s) in chi_inv.column(ci).iter().enumerate() {
            if !s.is_zero() {
                let t = gm.pair.lift(1, j);
                let v = target.embed_vectors(&[&c.left(&ring.basis(t[0]), &gm.g), &ring.basis(t[1])]);
                axpy(&mut lhs, s, &v);
            }
        }
        let mut rhs = zeros(f, dim);
        for (xy, s) in c.delta_lift.column(ci).iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let (x, y) = (xy / n, xy % n);
            for (j, s2) in chi_inv.column(y).iter().enumerate() {
                if !s2.is_zero() {
                    let t = gm.pair.lift(1, j);
                    let v = target.embed_vectors(&[&c.right(&c.basis(x), &ring.basis(t[0])), &ring.basis(t[1])]);
                    axpy(&mut rhs, &(s * s2), &v);
                }
            }
        }
        let d = sub_vec(&lhs, &rhs);
        if !crate::exactla::is_zero_vec(&d) {
            check.record(vec![ci], d);
        }
    }
    Ok(check)
}

/// The complexes `Ω^n(C) ⊗_S R` with `d ⊗ R` and the contracting homotopy
/// `h^n(c¹⊗…⊗cⁿ⊗r) = (−1)ⁿ c¹⊗…⊗c^{n−1}χ⁻¹(cⁿr)`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    /// `spaces[n]` is `Ω^n(C) ⊗_S R` at its top level.
    pub spaces: Vec<TensorChain>,
    /// `d_tensor[n]: Ω^n ⊗_S R → Ω^{n+1} ⊗_S R`
    pub d_tensor: Vec<Matrix>,
    /// `h[n − 1] = h^n: Ω^n ⊗_S R → Ω^{n−1} ⊗_S R`
    pub h: Vec<Matrix>,
    pub report: Report,
}

pub fn contracting_homotopy(cx: &AmitsurComplex, gm: &GaloisMap) -> Result<Homotopy> {
    if cx.reduced {
        return Err(Error::Precondition("the homotopy acts on the full complex".into()));
    }
    let chi_inv = gm.chi_inv.as_ref().ok_or(Error::NotGalois)?;
    let c = &gm.coring;
    let ring = &c.ring;
    let f = c.field();
    let (dc, dr) = (c.dim(), ring.dim());
    let c_rs = c.bimodule.restrict_right(&gm.ext)?;
    let r_sr = Bimodule::regular(ring.clone()).restrict_left(&gm.ext)?;
    let mut spaces = Vec::with_capacity(cx.n_max + 1);
    for n in 0..=cx.n_max {
        let factors = if n == 0 {
            vec![Bimodule::regular(ring.clone()).restrict_right(&gm.ext)?, r_sr.clone()]
        } else {
            let mut v = vec![c.bimodule.clone(); n - 1];
            v.push(c_rs.clone());
            v.push(r_sr.clone());
            v
        };
        spaces.push(TensorChain::new(factors)?);
    }
    let top = |n: usize| spaces[n].top_level();

    let mut d_tensor = Vec::with_capacity(cx.n_max);
    for n in 0..cx.n_max {
        let src = &spaces[n];
        let dst = &spaces[n + 1];
        let m = src.map_from_lifts(top(n), dst.dim(top(n + 1)), |t| {
            let x = if n == 0 {
                ring.basis(t[0])
            } else {
                cx.chain.as_ref().unwrap().embed(&t[..n])
            };
            let dx = cx.d[n].apply(&x);
            let flat = cx.chain.as_ref().unwrap().lift_flat(n, &dx);
            dst.project_flat(top(n + 1), &kron_vec(&flat, &unit_vector(f, dr, *t.last().unwrap())))
        });
        d_tensor.push(m);
    }

    let mut report = Report::new("contracting homotopy");
    let mut h = Vec::with_capacity(cx.n_max);
    let mut well_defined = Check::pass("h well defined");
    for n in 1..=cx.n_max {
        let src = &spaces[n];
        let dst = &spaces[n - 1];
        let formula = |t: &[usize]| {
            let v = c.right(&c.basis(t[n - 1]), &ring.basis(t[n]));
            let w = chi_inv.apply(&v);
            let mut out = zeros(f, dst.dim(top(n - 1)));
            for (j, s) in w.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let p = gm.pair.lift(1, j);
                let term = if n == 1 {
                    dst.embed(&[p[0], p[1]])
                } else {
                    let last = c.right(&c.basis(t[n - 2]), &ring.basis(p[0]));
                    let units: Vec<Vector> = t[..n - 2].iter().map(|&i| unit_vector(f, dc, i)).collect();
                    let mut parts: Vec<&[crate::exactla::Scalar]> = units.iter().map(Vec::as_slice).collect();
                    let rb = ring.basis(p[1]);
                    parts.push(&last);
                    parts.push(&rb);
                    dst.embed_vectors(&parts)
                };
                axpy(&mut out, &(&sign(f, n) * s), &term);
            }
            out
        };
        let m = src.map_from_lifts(top(n), dst.dim(top(n - 1)), formula);
        let descends = src.check_descends("h", top(n), &m, formula);
        for w in descends.witnesses {
            let mut b = vec![n];
            b.extend(w.basis);
            well_defined.record(b, w.defect);
        }
        h.push(m);
    }
    report.push(well_defined);

    let mut identity = Check::pass("h d + d h = id");
    for n in 1..cx.n_max {
        let lhs = h[n].mul(&d_tensor[n]).add(&d_tensor[n - 1].mul(&h[n - 1]));
        identity.compare(&[n], &lhs, &Matrix::identity(f, spaces[n].dim(top(n))));
    }
    report.push(identity);
    Ok(Homotopy {
        spaces,
        d_tensor,
        h,
        report,
    })
}

/// Greedy search for a free basis of `R` as a left `S`-module among `1`
/// and the basis vectors of `R`; returned only once certified by
/// [`verify_free_basis`].
pub fn find_free_basis(ext: &AlgebraMap) -> Option<Vec<Vector>> {
    let r = &ext.target;
    let s = &ext.source;
    let mut chosen: Vec<Vector> = Vec::new();
    let mut cols: Vec<Vector> = Vec::new();
    for e in std::iter::once(r.unit().clone()).chain((0..r.dim()).map(|i| r.basis(i))) {
        let mut trial = cols.clone();
        for b in 0..s.dim() {
            trial.push(r.mul(&ext.matrix.column(b), &e));
        }
        if Matrix::from_columns(r.field(), r.dim(), &trial).rank() == trial.len() {
            cols = trial;
            chosen.push(e);
        }
    }
    verify_free_basis(ext, &chosen).then_some(chosen)
}

/// Everything needed to state acyclicity: the Galois verdict, a free
/// basis certificate, the homotopy identity and the ranks of `d`.
#[derive(Clone, Debug, Serialize)]
pub struct Acyclicity {
    pub galois: bool,
    pub free_basis_certified: Option<bool>,
    pub homotopy_verified: Option<bool>,
    pub star_identity: Option<bool>,
    pub dim_s: usize,
    pub cohomology: CohomologySummary,
    /// `H⁰ = S` and `Hⁿ = 0` for `n ≥ 1`; only asserted when Galois with a
    /// certified free basis.
    pub acyclic: Option<bool>,
}

pub fn acyclicity(cx: &AmitsurComplex, free_basis: Option<&[Vector]>) -> Result<Acyclicity> {
    let gm = galois_map(&cx.coring, &Grouplike { g: cx.g.clone(), semi: false })?;
    let cohomology = cx.cohomology();
    let dim_s = gm.ext.source.dim();
    let galois = gm.is_galois();
    if !galois {
        return Ok(Acyclicity {
            galois,
            free_basis_certified: None,
            homotopy_verified: None,
            star_identity: None,
            dim_s,
            cohomology,
            acyclic: None,
        });
    }
    let certified = match free_basis {
        Some(b) => verify_free_basis(&gm.ext, b),
        None => find_free_basis(&gm.ext).is_some(),
    };
    let hom = contracting_homotopy(cx, &gm)?;
    let star = verify_star_identity(&gm)?;
    let h = cohomology.h();
    let acyclic = certified.then(|| h.first() == Some(&dim_s) && h.iter().skip(1).all(|&x| x == 0));
    Ok(Acyclicity {
        galois,
        free_basis_certified: Some(certified),
        homotopy_verified: Some(hom.report.passed()),
        star_identity: Some(star.passed),
        dim_s,
        cohomology,
        acyclic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::exactla::Field;

    fn f4() -> Arc<Algebra> {
        let f2 = Field::prime(2).unwrap();
        Arc::new(Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()]))
    }

    fn sweedler(r: Arc<Algebra>) -> (Arc<Coring>, Grouplike) {
        let (c, g) = Coring::sweedler(&AlgebraMap::from_ground(r)).unwrap();
        let g = Grouplike::new(&c, g).unwrap();
        (Arc::new(c), g)
    }

    #[test]
    fn sweedler_is_galois_with_homotopy() {
        let (c, g) = sweedler(f4());
        let gm = galois_map(&c, &g).unwrap();
        assert!(gm.is_galois(), "{:?}", gm.report.failing().collect::<Vec<_>>());
        assert!(verify_star_identity(&gm).unwrap().passed);
        let cx = AmitsurComplex::new(c, &g, 4, false).unwrap();
        let hom = contracting_homotopy(&cx, &gm).unwrap();
        assert!(hom.report.passed(), "{:?}", hom.report.failing().collect::<Vec<_>>());
        let a = acyclicity(&cx, None).unwrap();
        assert_eq!(a.acyclic, Some(true));
        assert_eq!(a.cohomology.h(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn dual_numbers_and_trivial() {
        let q = Field::Rational;
        let (c, g) = sweedler(Arc::new(Algebra::polynomial_quotient(q, "x", &[q.zero(), q.zero()])));
        let cx = AmitsurComplex::new(c, &g, 3, false).unwrap();
        let a = acyclicity(&cx, None).unwrap();
        assert_eq!(a.homotopy_verified, Some(true));
        assert_eq!(a.acyclic, Some(true));

        let r = f4();
        let t = Arc::new(Coring::trivial(r.clone()));
        let g = Grouplike::new(&t, r.unit().clone()).unwrap();
        let cx = AmitsurComplex::new(t, &g, 3, false).unwrap();
        let a = acyclicity(&cx, Some(&[r.unit().clone()])).unwrap();
        assert!(a.galois);
        assert_eq!(a.acyclic, Some(true));
        assert_eq!(a.homotopy_verified, Some(true));
    }

    #[test]
    fn free_basis_search() {
        let r = f4();
        let b = find_free_basis(&AlgebraMap::from_ground(r.clone())).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(find_free_basis(&AlgebraMap::identity(r)).unwrap().len(), 1);
        let t = Arc::new(Algebra::upper_triangular(Field::Rational));
        assert_eq!(find_free_basis(&AlgebraMap::identity(t)).unwrap().len(), 1);
    }
}
