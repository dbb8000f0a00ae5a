//! End-to-end acceptance criteria on the bundled fixtures. Each criterion
//! prints one PASS/FAIL line; the test fails if any criterion fails.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use coring_core::algebra::{Algebra, Bimodule, TensorChain};
use coring_core::amitsur::{
    acyclicity, coaction_from_grouplike, contracting_homotopy, galois_map, theta_iso, AmitsurComplex, EntwinedForms,
};
use coring_core::connections::{
    cuntz_quillen_check, entwining_flat_connection_ac, entwining_flat_connection_ca, flat_round_trip,
    non_flat_perturbation, universal_complex,
};
use coring_core::coring::{
    augmentation, dual_ring, endomorphism_map, grouplike_ring_structure, hom_coinv_iso, verify_coinv_c_iso, Grouplike,
};
use coring_core::exactla::{unit_vector, zeros, Field, Matrix, Scalar, Vector};
use coring_core::instance::{connection_complex, validate, Construction, Instance};
use coring_core::report::Report;
use num::{BigInt, BigRational, One, Zero};

const VALID: [&str; 9] = [
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

type Outcome = Result<(), String>;

fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"));
    Instance::from_file(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passes(r: &Report, what: &str) -> Outcome {
    let bad: Vec<&str> = r.failing().map(|c| c.name.as_str()).collect();
    ensure(bad.is_empty(), || format!("{what}: failing {bad:?}"))
}

fn has_passing(r: &Report, name: &str, what: &str) -> Outcome {
    match r.get(name) {
        Some(c) if c.passed => Ok(()),
        Some(_) => Err(format!("{what}: {name} fails")),
        None => Err(format!("{what}: no check named {name}")),
    }
}

fn err<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

/// The first declared element that is a genuine grouplike.
fn grouplike(inst: &Instance) -> Option<Grouplike> {
    inst.grouplikes
        .iter()
        .find(|g| !g.semi)
        .and_then(|g| Grouplike::new(&inst.coring, g.vector.clone()).ok())
}

/// Exact rank by elimination on the printed entries, independent of the
/// library's row reduction.
mod oracle {
    use super::*;

    fn rank_mod(rows: Vec<Vec<u64>>, p: u64) -> usize {
        let mut m = rows;
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = pow(m[rank][c], p - 2, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c] * inv % p;
                    for k in 0..cols {
                        m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    fn rank_q(rows: Vec<Vec<BigRational>>) -> usize {
        let mut m = rows;
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            let pivot = m[rank][c].clone();
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] / &pivot;
                    for k in 0..cols {
                        let sub = &f * &m[rank][k];
                        m[r][k] -= sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn parse_q(s: &str) -> BigRational {
        match s.split_once('/') {
            Some((n, d)) => BigRational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap()),
            None => BigRational::from_integer(s.parse::<BigInt>().unwrap()),
        }
    }

    pub fn rank(m: &Matrix) -> usize {
        if m.rows() == 0 || m.cols() == 0 {
            return 0;
        }
        let text: Vec<Vec<String>> = m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        match m.field() {
            Field::Prime(p) => rank_mod(
                text.iter()
                    .map(|r| r.iter().map(|s| s.split(" mod ").next().unwrap().parse().unwrap()).collect())
                    .collect(),
                p,
            ),
            Field::Rational => rank_q(text.iter().map(|r| r.iter().map(|s| parse_q(s)).collect()).collect()),
        }
    }

    pub fn cohomology(cx: &AmitsurComplex) -> Vec<usize> {
        let mut prev = 0;
        (0..cx.n_max)
            .map(|n| {
                let r = rank(&cx.d[n]);
                let h = cx.dim(n) - r - prev;
                prev = r;
                h
            })
            .collect()
    }

    #[test]
    fn rank_matches_hand_computation() {
        let q = Field::Rational;
        let m = Matrix::from_rows(
            q,
            vec![
                vec![q.one(), q.from_i64(2)],
                vec![q.from_i64(2), q.from_i64(4)],
                vec![q.zero(), q.from_ratio(1, 2).unwrap()],
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 2);
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_rows(f2, vec![vec![f2.one(), f2.one()], vec![f2.one(), f2.one()]]).unwrap();
        assert_eq!(rank(&m), 1);
        assert!(BigRational::one() == parse_q("2/2"));
    }
}

/// `r₁ ⊗ … ⊗ r_n ↦ r₁⋯r_n` on the level-`level` module of a chain of copies of `R`.
fn multiplication_iso(chain: &TensorChain, level: usize, ring: &Algebra) -> Matrix {
    let f = ring.field();
    Matrix::build_columns(f, ring.dim(), chain.dim(level), |j| {
        let mut acc = ring.unit().clone();
        for &i in chain.lift(level, j) {
            acc = ring.mul(&acc, &ring.basis(i));
        }
        acc
    })
}

fn axiom_suite() -> Outcome {
    for name in VALID {
        let inst = fixture(name);
        passes(&validate(&inst).map_err(err(name))?, name)?;
    }

    // ε = 0 on the trivial coring: (ε ⊗ C)Δ(c) − c = −c for every basis c.
    let inst = fixture("broken_counit");
    let rep = validate(&inst).map_err(err("broken_counit"))?;
    let n = inst.coring.dim();
    let f = inst.field;
    for side in ["coring: left counit", "coring: right counit"] {
        let c = rep.get(side).ok_or(format!("missing {side}"))?;
        ensure(!c.passed && c.failures == n, || format!("{side}: {} failures", c.failures))?;
        for w in &c.witnesses {
            let expected: Vector = unit_vector(f, n, w.basis[0]).iter().map(|s| -s.clone()).collect();
            ensure(w.defect == expected, || format!("{side}: witness {:?}", w))?;
        }
    }
    ensure(rep.get("grouplike one: counit").is_some_and(|c| !c.passed), || {
        "ε(1) = 1 not flagged".into()
    })?;

    // Δ(e) = e ⊗ e: through R ⊗_R R ≅ R the coproduct is Σ x_k e_k², and
    // linearity fails exactly where that differs from r·c² (or c²·r).
    let inst = fixture("broken_balancing");
    let rep = validate(&inst).map_err(err("broken_balancing"))?;
    let c = &inst.coring;
    let ring = &c.ring;
    let mu = multiplication_iso(&c.chain, 1, ring);
    let squared = |x: &[Scalar]| {
        let mut acc = zeros(f, ring.dim());
        for (k, s) in x.iter().enumerate() {
            let e = ring.basis(k);
            for (a, b) in acc.iter_mut().zip(ring.mul(&e, &e)) {
                *a = &*a + &(s * &b);
            }
        }
        acc
    };
    let sub = |x: &[Scalar], y: &[Scalar]| -> Vector { x.iter().zip(y).map(|(a, b)| a - b).collect() };
    let mut expected = Vec::new();
    for r in 0..ring.dim() {
        for ci in 0..c.dim() {
            let (er, ec) = (ring.basis(r), ring.basis(ci));
            let left = sub(&squared(&ring.mul(&er, &ec)), &ring.mul(&er, &squared(&ec)));
            let right = sub(&squared(&ring.mul(&ec, &er)), &ring.mul(&squared(&ec), &er));
            if left.iter().any(|s| !s.is_zero()) {
                expected.push((vec![r, ci], left));
            }
            if right.iter().any(|s| !s.is_zero()) {
                expected.push((vec![ci, r], right));
            }
        }
    }
    let check = rep
        .get("coring: coproduct is a bimodule map")
        .ok_or("missing linearity check")?;
    ensure(!check.passed && check.failures == expected.len(), || {
        format!("linearity: {} failures, oracle {}", check.failures, expected.len())
    })?;
    for w in &check.witnesses {
        let image = mu.apply(&w.defect);
        ensure(expected.iter().any(|(b, d)| *b == w.basis && *d == image), || {
            format!("linearity witness {:?} not predicted", w.basis)
        })?;
    }
    Ok(())
}

fn amitsur_acyclicity() -> Outcome {
    let inst = fixture("f2_f4_sweedler");
    let g = grouplike(&inst).ok_or("no grouplike")?;
    let basis = inst.free_basis.clone().ok_or("no free basis")?;
    let cx = AmitsurComplex::new(inst.coring.clone(), &g, 4, false).map_err(err("complex"))?;
    let a = acyclicity(&cx, Some(&basis)).map_err(err("acyclicity"))?;
    ensure(a.galois, || "not Galois".into())?;
    ensure(a.free_basis_certified == Some(true), || "{1, t} not certified".into())?;
    let by_rank = a.cohomology.h();
    ensure(by_rank == vec![1, 0, 0, 0], || format!("library ranks give {by_rank:?}"))?;
    let by_oracle = oracle::cohomology(&cx);
    ensure(by_oracle == vec![1, 0, 0, 0], || format!("oracle ranks give {by_oracle:?}"))?;

    let gm = galois_map(&inst.coring, &g).map_err(err("χ"))?;
    let hom = contracting_homotopy(&cx, &gm).map_err(err("homotopy"))?;
    has_passing(&hom.report, "h d + d h = id", "homotopy")?;
    passes(&hom.report, "homotopy")?;
    ensure(hom.h.len() >= 3, || format!("homotopy covers {} degrees", hom.h.len()))?;
    let homotopy_says_acyclic = hom.report.passed();
    let ranks_say_acyclic = by_rank.iter().skip(1).all(|&h| h == 0) && by_rank[0] == a.dim_s;
    ensure(homotopy_says_acyclic == ranks_say_acyclic, || "rank and homotopy disagree".into())?;
    ensure(a.acyclic == Some(true), || "acyclicity not asserted".into())
}

fn trivial_oracle() -> Outcome {
    for name in ["trivial_f2", "trivial_q"] {
        let inst = fixture(name);
        let ring = inst.coring.ring.clone();
        let dr = ring.dim();
        let g = grouplike(&inst).ok_or("no grouplike")?;
        ensure(g.g == *ring.unit(), || format!("{name}: g is not 1"))?;
        let cx = AmitsurComplex::new(inst.coring.clone(), &g, 4, false).map_err(err(name))?;
        let chain = cx.chain.as_ref().ok_or("no chain")?;
        let mu = |n: usize| {
            if n == 0 {
                Matrix::identity(inst.field, dr)
            } else {
                multiplication_iso(chain, n - 1, &ring)
            }
        };
        for n in 0..4 {
            let (src, dst) = (mu(n), mu(n + 1));
            ensure(oracle::rank(&src) == dr && src.cols() == dr, || format!("{name}: μ_{n} not bijective"))?;
            let lhs = dst.mul(&cx.d[n]);
            let rhs = if n % 2 == 0 {
                Matrix::zeros(inst.field, dr, dr)
            } else {
                src.clone()
            };
            ensure(lhs == rhs, || format!("{name}: d^{n} is not {}", if n % 2 == 0 { "0" } else { "id" }))?;
        }
        let h = oracle::cohomology(&cx);
        ensure(h == vec![dr, 0, 0, 0], || format!("{name}: H = {h:?}"))?;
        ensure(cx.cohomology().h() == h, || format!("{name}: library H differs"))?;
    }
    Ok(())
}

fn flat_round_trip_criterion() -> Outcome {
    let mut perturbed = 0;
    for name in VALID {
        let inst = fixture(name);
        if inst.modules.iter().all(|m| m.comodule.is_none()) {
            continue;
        }
        let cx = connection_complex(&inst).map_err(err(name))?;
        for m in &inst.modules {
            let Some(cm) = &m.comodule else { continue };
            let what = format!("{name}/{}", m.name);
            let (cn, rep) = flat_round_trip(&cx, cm).map_err(err(&what))?;
            passes(&rep, &what)?;
            ensure(cn.curvature().map_err(err(&what))?.is_zero(), || format!("{what}: F ≠ 0"))?;
            let Some(p) = non_flat_perturbation(&cn).map_err(err(&what))? else {
                continue;
            };
            perturbed += 1;
            let curvature = p.curvature().map_err(err(&what))?;
            ensure(!curvature.is_zero(), || format!("{what}: perturbation is flat"))?;
            let derived = p.to_comodule().map_err(err(&what))?;
            let defect = derived.coassociativity_defect();
            let coassoc = derived.check();
            let c = coassoc.get("coassociative").ok_or("missing coassociativity")?;
            ensure(!c.passed, || format!("{what}: derived coaction is coassociative"))?;
            let nonzero = |m: &Matrix| -> Vec<usize> {
                (0..m.cols()).filter(|&j| m.column(j).iter().any(|s| !s.is_zero())).collect()
            };
            let failing: Vec<usize> = c.witnesses.iter().map(|w| w.basis[0]).collect();
            let expected = nonzero(&curvature);
            ensure(nonzero(&defect) == expected, || format!("{what}: defect and F differ in support"))?;
            ensure(failing.iter().all(|j| expected.contains(j)), || format!("{what}: stray witness"))?;
            ensure(c.failures == expected.len(), || format!("{what}: witness count"))?;
            let w = p.check_curvature_witness().map_err(err(&what))?;
            ensure(w.passed, || format!("{what}: coassociativity defect ≠ F"))?;
        }
    }
    ensure(perturbed > 0, || "no non-flat connection generated".into())
}

fn cuntz_quillen() -> Outcome {
    let inst = fixture("qx2_sweedler");
    let a = inst.coring.ring.clone();
    let cx = universal_complex(&a).map_err(err("universal complex"))?;
    let x = a.basis(1);
    // Over the local ring A, M is projective iff free iff dim M = dim A · dim M/Mx.
    let free_by_count = |m: &Bimodule| {
        let mx = m.right_matrix(&x);
        let top = m.dim() - oracle::rank(&mx);
        m.dim() == a.dim() * top
    };
    for (name, expected) in [("A", true), ("A_mod_x", false), ("A2", true)] {
        let m = &inst.module(name).map_err(err(name))?.module;
        let cq = cuntz_quillen_check(&cx, m).map_err(err(name))?;
        ensure(cq.has_connection() == expected, || format!("{name}: connection exists = {}", cq.has_connection()))?;
        ensure(cq.projective == expected, || format!("{name}: free-cover splitting says {}", cq.projective))?;
        ensure(free_by_count(m) == expected, || format!("{name}: dimension count disagrees"))?;
        ensure(cq.agree() && cq.action.passed, || format!("{name}: verdicts disagree"))?;
        if let Some(cn) = &cq.connection {
            ensure(cn.check().passed, || format!("{name}: connection fails Leibniz"))?;
        }
    }
    Ok(())
}

fn theta() -> Outcome {
    for name in ["f2_f4_sweedler", "qx2_sweedler"] {
        let inst = fixture(name);
        let Construction::Sweedler(ext) = &inst.construction else {
            return Err(format!("{name} is not a Sweedler fixture"));
        };
        let t = theta_iso(ext, 3, 7).map_err(err(name))?;
        ensure(t.bijective() && t.theta.len() == 4, || format!("{name}: θ not bijective in degrees ≤ 3"))?;
        for c in ["θ bijective in each degree", "θ⁻¹ d = d θ⁻¹", "θ⁻¹(xy) = θ⁻¹(x) θ⁻¹(y)"] {
            has_passing(&t.report, c, name)?;
        }
        passes(&t.report, name)?;
        for n in 0..=3 {
            let m = &t.theta_inv[n];
            ensure(m.rows() == m.cols() && oracle::rank(m) == m.cols(), || {
                format!("{name}: θ⁻¹ singular in degree {n}")
            })?;
        }
    }
    Ok(())
}

fn dual_ring_criterion() -> Outcome {
    let inst = fixture("f2_f4_sweedler");
    let c = &inst.coring;
    let g = grouplike(&inst).ok_or("no grouplike")?;
    let dual = dual_ring(c).map_err(err("*C"))?;
    ensure(dual.basis.len() == 4, || format!("dim *C = {}", dual.basis.len()))?;
    passes(&dual.report, "*C")?;
    has_passing(&dual.report, "associative", "*C")?;
    ensure(dual.element(dual.algebra.unit()) == c.counit, || "unit is not ε".into())?;
    let end = endomorphism_map(c, &dual, &g).map_err(err("End"))?;
    let dr = c.ring.dim();
    ensure(end.dim_end == dr * dr, || format!("dim End_F2(F4) = {}", end.dim_end))?;
    ensure(end.bijective, || "*C → End not bijective".into())?;
    passes(&end.report, "*C → End")?;
    let aug = augmentation(c, &dual, &g.g).map_err(err("augmentation"))?;
    has_passing(&aug.report, "augmentation identity", "augmentation")?;
    passes(&aug.report, "augmentation")?;
    ensure(aug.surjective, || "π not surjective".into())
}

fn structural() -> Outcome {
    let mut covered = 0;
    for name in VALID {
        let inst = fixture(name);
        let Some(g) = grouplike(&inst) else { continue };
        covered += 1;
        let c = &inst.coring;
        let iso = verify_coinv_c_iso(c, &g).map_err(err(name))?;
        passes(&iso.report, &format!("{name}: R ≅ C^co"))?;
        ensure(iso.coinvariants.len() == c.ring.dim(), || format!("{name}: dim C^co ≠ dim R"))?;
        for m in &inst.modules {
            let Some(cm) = &m.comodule else { continue };
            let h = hom_coinv_iso(c, &g, cm).map_err(err(name))?;
            passes(&h.report, &format!("{name}: Hom(R, {}) ≅ {}^co", m.name, m.name))?;
            ensure(h.homs.len() == h.coinvariants.len(), || format!("{name}/{}: dimensions differ", m.name))?;
        }
        let gr = grouplike_ring_structure(c, &g).map_err(err(name))?;
        passes(&gr.report, &format!("{name}: grouplike ring"))?;
        ensure(gr.algebra.unit() == &g.g, || format!("{name}: unit is not g"))?;
        for prefix in ["ε", "i_L", "i_R"] {
            has_passing(&gr.report, &format!("{prefix} multiplicative"), name)?;
        }
    }
    ensure(covered == VALID.len(), || format!("only {covered} fixtures have a grouplike"))
}

fn cobar() -> Outcome {
    for name in VALID {
        let inst = fixture(name);
        let zero = zeros(inst.field, inst.coring.dim());
        let g = Grouplike::semi(&inst.coring, zero).map_err(err(name))?;
        let cx = AmitsurComplex::new(inst.coring.clone(), &g, 5, false).map_err(err(name))?;
        for n in 0..4 {
            let dd = cx.d[n + 1].mul(&cx.d[n]);
            ensure(dd.is_zero(), || format!("{name}: d² ≠ 0 on Ω^{n}"))?;
        }
        let h = oracle::cohomology(&cx);
        ensure(cx.cohomology().h() == h, || format!("{name}: cobar H differs from the oracle"))?;
    }
    Ok(())
}

fn entwining() -> Outcome {
    for name in ["superflip_entwining", "flip_entwining"] {
        let inst = fixture(name);
        let Construction::Entwining(data) = &inst.construction else {
            return Err(format!("{name} is not an entwining fixture"));
        };
        let c: &Arc<_> = &inst.coring;
        let g = grouplike(&inst).ok_or("no grouplike")?;
        let rho = coaction_from_grouplike(c, &g).map_err(err(name))?;
        let forms = EntwinedForms::new(data.clone(), c.clone(), rho.clone(), 4).map_err(err(name))?;
        let rep = forms.check();
        has_passing(&rep, "d matches the ψ formula", name)?;
        passes(&rep, name)?;
        for n in 1..=2 {
            let ac = entwining_flat_connection_ac(data, c, &rho, n).map_err(err(name))?;
            has_passing(&ac.report, "∇ = ∇_ρ", &format!("{name} A⊗C^{n}"))?;
            passes(&ac.report, &format!("{name} A⊗C^{n}"))?;
            let ca = entwining_flat_connection_ca(data, c, &rho, n).map_err(err(name))?;
            for check in ["Leibniz rule", "flat"] {
                has_passing(&ca.report, check, &format!("{name} C⊗A^{n}"))?;
            }
            passes(&ca.report, &format!("{name} C⊗A^{n}"))?;
        }
    }
    // the ψ formula is not a tautology: a wrong flip breaks it
    let inst = fixture("superflip_entwining");
    let Construction::Entwining(data) = &inst.construction else { unreachable!() };
    let g = grouplike(&inst).ok_or("no grouplike")?;
    let rho = coaction_from_grouplike(&inst.coring, &g).map_err(err("superflip"))?;
    let mut wrong = data.clone();
    let f = inst.field;
    wrong.psi.set(3, 3, f.one());
    let forms = EntwinedForms::new(wrong, inst.coring.clone(), rho, 2).map_err(err("wrong ψ"))?;
    ensure(!forms.check().passed(), || "formula check accepts a wrong ψ".into())?;
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        ("axiom suite on all fixtures", axiom_suite, Some(Duration::from_secs(5))),
        ("Amitsur acyclicity of F_2 ⊂ F_4", amitsur_acyclicity, Some(Duration::from_secs(10))),
        ("trivial coring oracle", trivial_oracle, None),
        ("flat connections and comodules", flat_round_trip_criterion, None),
        ("connections and projectivity over Q[x]/(x²)", cuntz_quillen, None),
        ("θ: Ω(C/S) ≅ Ω_S R", theta, None),
        ("dual ring of F_2 ⊂ F_4", dual_ring_criterion, None),
        ("structural isomorphisms", structural, None),
        ("cobar differential for g = 0", cobar, None),
        ("entwining formulas", entwining, None),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if took > *limit {
                outcome = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match &outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({took:.2?})", i + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL  {name} ({took:.2?}): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
