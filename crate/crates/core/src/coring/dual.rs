use std::sync::Arc;

use super::comodule::Comodule;
use super::coring::Coring;
use super::grouplike::{coinvariant_subring, Grouplike};
use crate::algebra::{module_hom_space, Algebra, Bimodule, Side};
use crate::error::{Error, Result};
use crate::exactla::{solve, sub_vec, Matrix, Vector};
use crate::report::{Check, Report};

/// The left dual ring `*C` of left `R`-linear maps `C → R`, with product
/// `(ξξ')(c) = ξ(c₍₁₎ ξ'(c₍₂₎))` and unit `ε`.
#[derive(Clone, Debug)]
pub struct DualRing {
    pub algebra: Arc<Algebra>,
    /// `basis[i]` is the `dim R × dim C` matrix of the i-th basis map.
    pub basis: Vec<Matrix>,
    /// Lift-independence of each computed product and the ring axioms.
    pub report: Report,
}

impl DualRing {
    /// Coordinates of a left-linear map in the chosen basis.
    pub fn coordinates(&self, xi: &Matrix) -> Option<Vector> {
        let f = xi.field();
        let cols: Vec<Vector> = self.basis.iter().map(flatten).collect();
        let m = Matrix::from_columns(f, xi.rows() * xi.cols(), &cols);
        solve(&m, &flatten(xi))
    }

    /// The map represented by a coordinate vector.
    pub fn element(&self, coords: &[crate::exactla::Scalar]) -> Matrix {
        let (r, c) = self.basis[0].shape();
        let mut acc = Matrix::zeros(self.algebra.field(), r, c);
        for (s, b) in coords.iter().zip(&self.basis) {
            if !s.is_zero() {
                acc = acc.add(&b.scale(s));
            }
        }
        acc
    }
}

fn flatten(m: &Matrix) -> Vector {
    m.to_rows().into_iter().flatten().collect()
}

/// The product `ξξ'` as a matrix `C → R`, computed through a lift of `Δ`.
pub fn dual_product(coring: &Coring, xi: &Matrix, xi2: &Matrix) -> Matrix {
    pairing_map(coring, xi, xi2).mul(&coring.delta)
}

/// `c ⊗ c' ↦ ξ(c ξ'(c'))` on `C ⊗_R C`.
fn pairing_map(coring: &Coring, xi: &Matrix, xi2: &Matrix) -> Matrix {
    coring.chain.map_from_lifts(1, coring.ring.dim(), |t| {
        let inner = xi2.column(t[1]);
        xi.apply(&coring.right(&coring.basis(t[0]), &inner))
    })
}

pub fn dual_ring(coring: &Coring) -> Result<DualRing> {
    let ring = coring.ring.clone();
    let f = ring.field();
    let c_left = coring.bimodule.clone().forget_right();
    let r_left = Bimodule::left_regular(ring.clone());
    let basis = module_hom_space(&c_left, &r_left, Side::Left);
    let d = basis.len();
    let mut report = Report::new("dual ring");
    let mut lift_free = Check::pass("product independent of lift");
    let mut proto = DualRing {
        algebra: Arc::new(Algebra::ground(f)),
        basis,
        report: Report::default(),
    };
    let mut mult = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let pm = pairing_map(coring, &proto.basis[i], &proto.basis[j]);
            let c = coring.chain.check_descends("pairing", 1, &pm, |t| {
                let inner = proto.basis[j].column(t[1]);
                proto.basis[i].apply(&coring.right(&coring.basis(t[0]), &inner))
            });
            if !c.passed {
                lift_free.record(vec![i, j], c.witnesses[0].defect.clone());
            }
            let prod = dual_product(coring, &proto.basis[i], &proto.basis[j]);
            let coords = proto
                .coordinates(&prod)
                .ok_or_else(|| Error::Inconsistent("product of left-linear maps is not left linear".into()))?;
            row.push(coords);
        }
        mult.push(row);
    }
    report.push(lift_free);
    let unit = proto
        .coordinates(&coring.counit)
        .ok_or_else(|| Error::Inconsistent("counit is not left linear".into()))?;
    let labels = (0..d).map(|i| format!("ξ{i}")).collect();
    let algebra = Algebra::new(f, labels, mult, unit)?;
    report.extend(algebra.check_axioms());
    proto.algebra = Arc::new(algebra);
    proto.report = report;
    Ok(proto)
}

/// Matrices of `m ↦ ξ·m = m₍₀₎ ξ(m₍₁₎)` for each basis element `ξ` of `*C`.
pub fn dual_action(dual: &DualRing, m: &Comodule) -> Vec<Matrix> {
    let f = m.module.field();
    let dm = m.dim();
    dual.basis
        .iter()
        .map(|xi| {
            let on_pairs = m.chain.map_from_lifts(1, dm, |t| {
                m.module
                    .act_right(&crate::exactla::unit_vector(f, dm, t[0]), &xi.column(t[1]))
            });
            on_pairs.mul(&m.coaction)
        })
        .collect()
}

/// Module axioms of the dual action: `ε` acts as the identity and
/// `(ξξ')·m = ξ·(ξ'·m)`.
pub fn check_dual_action(dual: &DualRing, actions: &[Matrix]) -> Report {
    let mut report = Report::new("dual action");
    let n = actions.first().map_or(0, Matrix::rows);
    let f = dual.algebra.field();
    let combine = |v: &Vector| {
        let mut acc = Matrix::zeros(f, n, n);
        for (s, a) in v.iter().zip(actions) {
            if !s.is_zero() {
                acc = acc.add(&a.scale(s));
            }
        }
        acc
    };
    let mut unit = Check::pass("unit acts trivially");
    for (m, d) in combine(dual.algebra.unit()).column_defects(&Matrix::identity(f, n)) {
        unit.record(vec![m], d);
    }
    report.push(unit);
    let mut assoc = Check::pass("associative action");
    let d = actions.len();
    for i in 0..d {
        for j in 0..d {
            let lhs = combine(dual.algebra.basis_product(i, j));
            let rhs = actions[i].mul(&actions[j]);
            for (m, def) in lhs.column_defects(&rhs) {
                assoc.record(vec![i, j, m], def);
            }
        }
    }
    report.push(assoc);
    report
}

/// The augmentation `π: *C → R, ξ ↦ ξ(g)` with the identity
/// `π(ξξ') = ξ·π(ξ')`, where `ξ·r = ξ(gr)`.
pub struct Augmentation {
    /// `dim R × dim *C`
    pub map: Matrix,
    pub surjective: bool,
    pub report: Report,
}

pub fn augmentation(coring: &Arc<Coring>, dual: &DualRing, g: &[crate::exactla::Scalar]) -> Result<Augmentation> {
    let ring = &coring.ring;
    let f = ring.field();
    let d = dual.basis.len();
    let map = Matrix::build_columns(f, ring.dim(), d, |i| dual.basis[i].apply(g));
    let reg = Comodule::regular(coring.clone(), g)?;
    let actions = dual_action(dual, &reg);
    let mut report = check_dual_action(dual, &actions);
    let mut ident = Check::pass("augmentation identity");
    let mut via_formula = Check::pass("dual action on R is ξ(g r)");
    for i in 0..d {
        for j in 0..d {
            let lhs = map.apply(dual.algebra.basis_product(i, j));
            let pj = map.column(j);
            let rhs = actions[i].apply(&pj);
            let def = sub_vec(&lhs, &rhs);
            if !crate::exactla::is_zero_vec(&def) {
                ident.record(vec![i, j], def);
            }
        }
        for r in 0..ring.dim() {
            let direct = dual.basis[i].apply(&coring.right(g, &ring.basis(r)));
            let def = sub_vec(&actions[i].column(r), &direct);
            if !crate::exactla::is_zero_vec(&def) {
                via_formula.record(vec![i, r], def);
            }
        }
    }
    report.push(ident);
    report.push(via_formula);
    let unit_ok = map.apply(dual.algebra.unit()) == *ring.unit();
    report.push(Check::from_bool("π(ε) = 1", unit_ok, "ε(g) ≠ 1"));
    let surjective = map.rank() == ring.dim();
    Ok(Augmentation { map, surjective, report })
}

/// `ξ ↦ (r ↦ ξ(gr))` from `*C` to the left `S`-linear endomorphisms of `R`.
/// For a Sweedler coring `gr = 1 ⊗ r`, and the map is an algebra isomorphism.
pub struct EndomorphismMap {
    /// `images[i]` is the `dim R × dim R` matrix of the image of basis element `i`.
    pub images: Vec<Matrix>,
    pub dim_end: usize,
    pub bijective: bool,
    pub report: Report,
}

pub fn endomorphism_map(coring: &Arc<Coring>, dual: &DualRing, g: &Grouplike) -> Result<EndomorphismMap> {
    let ring = &coring.ring;
    let f = ring.field();
    let n = ring.dim();
    let ext = coinvariant_subring(coring, g)?;
    let gr = Matrix::build_columns(f, coring.dim(), n, |r| coring.right(&g.g, &ring.basis(r)));
    let images: Vec<Matrix> = dual.basis.iter().map(|xi| xi.mul(&gr)).collect();
    let r_s = Bimodule::left_regular(ring.clone()).restrict_left(&ext)?;
    let ends = module_hom_space(&r_s, &r_s, Side::Left);
    let flat_ends: Vec<Vector> = ends.iter().map(flatten).collect();
    let span = Matrix::from_columns(f, n * n, &flat_ends);

    let mut report = Report::new("dual ring and endomorphisms");
    let mut linear = Check::pass("image is left S-linear");
    for (i, m) in images.iter().enumerate() {
        if solve(&span, &flatten(m)).is_none() {
            linear.record(vec![i], flatten(m));
        }
    }
    report.push(linear);
    let rank = Matrix::from_columns(f, n * n, &images.iter().map(flatten).collect::<Vec<_>>()).rank();
    let bijective = rank == images.len() && rank == ends.len();
    report.push(Check::from_bool(
        "bijective onto End_S(R)",
        bijective,
        format!("rank {rank}, dim *C = {}, dim End_S(R) = {}", images.len(), ends.len()),
    ));
    let combine = |v: &[crate::exactla::Scalar]| {
        let mut acc = Matrix::zeros(f, n, n);
        for (s, m) in v.iter().zip(&images) {
            if !s.is_zero() {
                acc = acc.add(&m.scale(s));
            }
        }
        acc
    };
    let mut mult = Check::pass("image of ξξ' is the composite");
    for i in 0..images.len() {
        for j in 0..images.len() {
            mult.compare(&[i, j], &combine(dual.algebra.basis_product(i, j)), &images[i].mul(&images[j]));
        }
    }
    report.push(mult);
    report.push(Check::from_matrices(
        "image of ε is the identity",
        &[],
        &combine(dual.algebra.unit()),
        &Matrix::identity(f, n),
    ));
    Ok(EndomorphismMap {
        images,
        dim_end: ends.len(),
        bijective,
        report,
    })
}
