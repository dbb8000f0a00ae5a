use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use coring_core::algebra::{
    is_projective, module_hom_space, projectivity_with, Algebra, BalancedTensor, Bimodule, Side,
};
use coring_core::amitsur::AmitsurComplex;
use coring_core::connections::{coaction_to_connection, connection_exists, morphism_correspondence};
use coring_core::coring::{decomposition_maps, dual_product, dual_ring, Comodule, Grouplike};
use coring_core::exactla::{Field, Matrix, Scalar, Vector};
use coring_core::instance::{connection_complex, Instance};
use proptest::prelude::*;

const CATALOG: [&str; 9] = [
    "trivial_f2",
    "trivial_q",
    "f2_f4_sweedler",
    "qx2_sweedler",
    "flip_entwining",
    "superflip_entwining",
    "cobar",
    "non_galois",
    "from_dg",
];

fn catalog() -> &'static [Instance] {
    static CELL: OnceLock<Vec<Instance>> = OnceLock::new();
    CELL.get_or_init(|| {
        CATALOG
            .iter()
            .map(|name| {
                let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"));
                Instance::from_file(&path).unwrap()
            })
            .collect()
    })
}

/// Amitsur complexes of every catalog coring: full and reduced for the
/// distinguished grouplike, and the cobar complex of `g = 0`.
fn complexes() -> &'static [AmitsurComplex] {
    static CELL: OnceLock<Vec<AmitsurComplex>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for inst in catalog() {
            let c = &inst.coring;
            if let Some(g) = grouplike(inst) {
                out.push(AmitsurComplex::new(c.clone(), &g, 3, false).unwrap());
                out.push(AmitsurComplex::new(c.clone(), &g, 3, true).unwrap());
            }
            let zero = Grouplike::semi(c, vec![c.field().zero(); c.dim()]).unwrap();
            out.push(AmitsurComplex::new(c.clone(), &zero, 3, false).unwrap());
        }
        out
    })
}

fn grouplike(inst: &Instance) -> Option<Grouplike> {
    let cand = inst.grouplikes.iter().find(|g| !g.semi)?;
    Grouplike::new(&inst.coring, cand.vector.clone()).ok()
}

fn combination(f: Field, coeffs: &[i64], n: usize) -> Vector {
    (0..n).map(|i| f.from_i64(coeffs[i % coeffs.len()])).collect()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..=3, 1..12)
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn algebras_are_associative_and_unital(i in 0..CATALOG.len(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let r = &catalog()[i].coring.ring;
        let f = r.field();
        let (x, y, z) = (combination(f, &a, r.dim()), combination(f, &b, r.dim()), combination(f, &c, r.dim()));
        prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
        prop_assert_eq!(r.mul(r.unit(), &x), x.clone());
        prop_assert_eq!(r.mul(&x, r.unit()), x);
    }

    #[test]
    fn coring_axioms_hold_on_combinations(i in 0..CATALOG.len(), a in coeffs(), b in coeffs()) {
        let c = &catalog()[i].coring;
        let f = c.field();
        let x = combination(f, &a, c.dim());
        let r = combination(f, &b, c.ring.dim());
        let d = c.delta_of(&x);
        let (left, right) = c.counit_maps();
        prop_assert_eq!(left.apply(&d), x.clone());
        prop_assert_eq!(right.apply(&d), x.clone());
        let (l, rr) = c.coassociativity_maps();
        prop_assert_eq!(l.apply(&d), rr.apply(&d));
        let cc = c.chain.module(1);
        prop_assert_eq!(c.delta_of(&c.left(&r, &x)), cc.act_left(&r, &d));
        prop_assert_eq!(c.delta_of(&c.right(&x, &r)), cc.act_right(&d, &r));
        prop_assert_eq!(c.counit_of(&c.left(&r, &x)), c.ring.mul(&r, &c.counit_of(&x)));
    }

    #[test]
    fn differentials_square_to_zero(i in 0..27usize, a in coeffs()) {
        let cx = &complexes()[i % complexes().len()];
        let f = cx.field();
        for n in 0..cx.n_max - 1 {
            let x = combination(f, &a, cx.dim(n));
            let dx = cx.apply_d(n, &x).unwrap();
            prop_assert!(cx.apply_d(n + 1, &dx).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn leibniz_and_associativity(i in 0..27usize, m in 0usize..2, n in 0usize..2, a in coeffs(), b in coeffs(), c in coeffs()) {
        let cx = &complexes()[i % complexes().len()];
        let f = cx.field();
        let x = combination(f, &a, cx.dim(m));
        let y = combination(f, &b, cx.dim(n));
        let xy = cx.product(m, &x, n, &y).unwrap();
        let lhs = cx.apply_d(m + n, &xy).unwrap();
        let mut rhs = cx.product(m + 1, &cx.apply_d(m, &x).unwrap(), n, &y).unwrap();
        let second = cx.product(m, &x, n + 1, &cx.apply_d(n, &y).unwrap()).unwrap();
        let sign = if m % 2 == 0 { f.one() } else { -f.one() };
        for (r, s) in rhs.iter_mut().zip(&second) {
            *r += &(&sign * s);
        }
        prop_assert_eq!(lhs, rhs);
        if m + n + 1 < cx.n_max {
            let z = combination(f, &c, cx.dim(1));
            let left = cx.product(m + n, &xy, 1, &z).unwrap();
            let yz = cx.product(n, &y, 1, &z).unwrap();
            prop_assert_eq!(left, cx.product(m, &x, n + 1, &yz).unwrap());
        }
    }

    #[test]
    fn coinvariants_are_multiples_of_g(i in 0..CATALOG.len()) {
        let inst = &catalog()[i];
        let Some(g) = grouplike(inst) else { return Ok(()) };
        let c = &inst.coring;
        let me = Comodule::coring_itself(c.clone()).unwrap();
        for v in me.coinvariants(&g.g) {
            prop_assert_eq!(c.left(&c.counit_of(&v), &g.g), v);
        }
        let dec = decomposition_maps(c, &g).unwrap();
        let id = Matrix::identity(c.field(), c.dim());
        prop_assert_eq!(dec.u_right_inv.mul(&dec.u_right), id.clone());
        prop_assert_eq!(dec.u_left_inv.mul(&dec.u_left), id);
        prop_assert_eq!(c.dim(), c.ring.dim() + dec.kernel.cols());
    }

    #[test]
    fn dual_ring_is_associative_with_unit_counit(i in 0..CATALOG.len(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let co = &catalog()[i].coring;
        let dual = dual_ring(co).unwrap();
        let f = co.field();
        let n = dual.basis.len();
        let (x, y, z) = (
            dual.element(&combination(f, &a, n)),
            dual.element(&combination(f, &b, n)),
            dual.element(&combination(f, &c, n)),
        );
        let xy_z = dual_product(co, &dual_product(co, &x, &y), &z);
        let x_yz = dual_product(co, &x, &dual_product(co, &y, &z));
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(dual_product(co, &co.counit, &x), x.clone());
        prop_assert_eq!(dual_product(co, &x, &co.counit), x);
    }

    #[test]
    fn morphisms_of_comodules_are_morphisms_of_connections(i in 0..CATALOG.len(), a in coeffs(), use_hom in any::<bool>()) {
        let inst = &catalog()[i];
        let comodules: Vec<&Comodule> = inst.modules.iter().filter_map(|m| m.comodule.as_ref()).collect();
        if comodules.is_empty() {
            return Ok(());
        }
        let cx = connection_complex(inst).unwrap();
        let src = comodules[a[0].unsigned_abs() as usize % comodules.len()];
        let dst = comodules[a.len() % comodules.len()];
        let f = inst.field;
        let map = if use_hom {
            // a right-linear map, often not colinear
            let homs = module_hom_space(&src.module, &dst.module, Side::Right);
            let mut acc = Matrix::zeros(f, dst.dim(), src.dim());
            for (k, h) in homs.iter().enumerate() {
                acc = acc.add(&h.scale(&f.from_i64(a[k % a.len()])));
            }
            acc
        } else {
            let flat = combination(f, &a, dst.dim() * src.dim());
            Matrix::from_rows(f, flat.chunks(src.dim()).map(<[Scalar]>::to_vec).collect()).unwrap()
        };
        let (cm, cn) = (coaction_to_connection(&cx, src).unwrap(), coaction_to_connection(&cx, dst).unwrap());
        let mc = morphism_correspondence(&map, &cm, &cn).unwrap();
        prop_assert!(mc.agree());
        if mc.right_linear {
            prop_assert!(mc.defects_correspond);
        }
    }

    #[test]
    fn projectivity_does_not_depend_on_generators(i in 0..CATALOG.len(), a in coeffs()) {
        let inst = &catalog()[i];
        for m in &inst.modules {
            let module = m.module.clone();
            let base = is_projective(&module).projective;
            let mut gens: Vec<Vector> = (0..module.dim())
                .map(|k| coring_core::exactla::unit_vector(inst.field, module.dim(), k))
                .collect();
            gens.push(combination(inst.field, &a, module.dim()));
            prop_assert_eq!(projectivity_with(&module, &gens).projective, base);
        }
    }
}

/// `m ↦ m ⊗ 1` and `m ⊗ r ↦ mr` are mutually inverse, and likewise on the left.
#[test]
fn tensoring_with_the_ring_is_the_identity() {
    for inst in catalog() {
        let r = inst.coring.ring.clone();
        let f = inst.field;
        let mut cases: Vec<(Bimodule, bool)> = inst.modules.iter().map(|m| (m.module.clone(), true)).collect();
        cases.push((inst.coring.bimodule.clone(), true));
        cases.push((inst.coring.bimodule.clone(), false));
        for (m, on_right) in cases {
            let reg = Bimodule::regular(r.clone());
            let t = if on_right {
                BalancedTensor::new(&m, &reg).unwrap()
            } else {
                BalancedTensor::new(&reg, &m).unwrap()
            };
            let unit_in = Matrix::build_columns(f, t.quotient.dim, m.dim(), |i| {
                let e = coring_core::exactla::unit_vector(f, m.dim(), i);
                if on_right { t.pure(&e, r.unit()) } else { t.pure(r.unit(), &e) }
            });
            let multiply = Matrix::build_columns(f, m.dim(), t.quotient.dim, |j| {
                let flat = t.quotient.section.column(j);
                let mut acc = vec![f.zero(); m.dim()];
                for (x, s) in flat.iter().enumerate() {
                    if s.is_zero() {
                        continue;
                    }
                    let (a, b) = (x / t.dim_right, x % t.dim_right);
                    let v = if on_right {
                        m.act_right(&coring_core::exactla::unit_vector(f, m.dim(), a), &r.basis(b))
                    } else {
                        m.act_left(&r.basis(a), &coring_core::exactla::unit_vector(f, m.dim(), b))
                    };
                    for (acc, v) in acc.iter_mut().zip(&v) {
                        *acc += &(s * v);
                    }
                }
                acc
            });
            assert_eq!(multiply.mul(&unit_in), Matrix::identity(f, m.dim()), "{}", inst.name);
            assert_eq!(unit_in.mul(&multiply), Matrix::identity(f, t.quotient.dim), "{}", inst.name);
        }
    }
}

#[test]
fn connections_exist_exactly_when_the_counit_splits() {
    for inst in catalog() {
        if inst.modules.is_empty() {
            continue;
        }
        let cx = connection_complex(inst).unwrap();
        for m in &inst.modules {
            let exists = connection_exists(&cx, &m.module).unwrap().is_some();
            if m.comodule.is_some() {
                assert!(exists, "{}/{}", inst.name, m.name);
            }
        }
    }
}

/// All right modules of dimension ≤ 2 over `F_2[x]/(x²)`, with Hom spaces
/// counted by enumerating every F_2-linear map.
#[test]
fn hom_dimensions_match_brute_force_over_f2() {
    let f = Field::prime(2).unwrap();
    let a = Arc::new(Algebra::polynomial_quotient(f, "x", &[f.zero(), f.zero()]));
    let mut modules = Vec::new();
    for dim in 1..=2usize {
        for bits in 0u32..(1 << (dim * dim)) {
            let x = Matrix::build_columns(f, dim, dim, |j| {
                (0..dim).map(|i| f.from_i64(((bits >> (i * dim + j)) & 1) as i64)).collect()
            });
            let space = coring_core::exactla::FinSpace::new(f, dim);
            if let Ok(m) = Bimodule::right_module(space, a.clone(), vec![Matrix::identity(f, dim), x]) {
                if m.check().passed() {
                    modules.push(m);
                }
            }
        }
    }
    assert!(modules.len() >= 3);
    for m in &modules {
        for n in &modules {
            let (dm, dn) = (m.dim(), n.dim());
            let mut count = 0usize;
            for bits in 0u32..(1 << (dm * dn)) {
                let h = Matrix::build_columns(f, dn, dm, |j| {
                    (0..dn).map(|i| f.from_i64(((bits >> (i * dm + j)) & 1) as i64)).collect()
                });
                let x = a.basis(1);
                if h.mul(&m.right_matrix(&x)) == n.right_matrix(&x).mul(&h) {
                    count += 1;
                }
            }
            let dim = module_hom_space(m, n, Side::Right).len();
            assert_eq!(count, 1 << dim);
        }
    }
}
