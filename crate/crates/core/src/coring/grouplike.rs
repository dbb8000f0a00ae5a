use std::sync::Arc;

use serde::Serialize;

use super::comodule::Comodule;
use super::coring::Coring;
use crate::algebra::{centralizer, Algebra, AlgebraMap};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, solve, solve_many, sub_vec, Field, Matrix, Scalar, Vector};
use crate::par;
use crate::report::{Check, Report};

/// Largest search space `p^dim C` enumerated by [`search_grouplikes`].
pub const SEARCH_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GrouplikeKind {
    Grouplike,
    /// `Δ(g) = g ⊗ g` with `u = ε(g)` idempotent and commuting with `g`.
    SemiGrouplike { u: Vector },
    Neither,
}

/// A distinguished (semi-)grouplike element of a coring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouplike {
    pub g: Vector,
    pub semi: bool,
}

impl Grouplike {
    /// Accepts `g` only if it is a genuine grouplike element.
    pub fn new(coring: &Coring, g: Vector) -> Result<Grouplike> {
        match classify(coring, &g).0 {
            GrouplikeKind::Grouplike => Ok(Grouplike { g, semi: false }),
            _ => Err(Error::NotGrouplike(format_vec(&g))),
        }
    }

    /// Accepts any semi-grouplike element, including `0`.
    pub fn semi(coring: &Coring, g: Vector) -> Result<Grouplike> {
        match classify(coring, &g).0 {
            GrouplikeKind::Neither => Err(Error::NotGrouplike(format_vec(&g))),
            _ => Ok(Grouplike { g, semi: true }),
        }
    }
}

pub fn format_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Classifies `g` and returns the checks that led to the verdict.
pub fn classify(coring: &Coring, g: &[Scalar]) -> (GrouplikeKind, Report) {
    let mut report = Report::new("grouplike");
    let gg = coring.pair(g, g);
    report.push(Check::from_defects(
        "coproduct",
        [(vec![], sub_vec(&coring.delta_of(g), &gg))],
    ));
    let u = coring.counit_of(g);
    let unit_ok = u == *coring.ring.unit();
    report.push(Check::from_defects("counit", [(vec![], sub_vec(&u, coring.ring.unit()))]));
    let nonzero = !is_zero_vec(g);
    report.push(Check::from_bool("nonzero", nonzero, "g = 0"));
    let coproduct_ok = report.checks[0].passed;
    if coproduct_ok && unit_ok && nonzero {
        return (GrouplikeKind::Grouplike, report);
    }
    let ring = &coring.ring;
    let idem = Check::from_defects("counit idempotent", [(vec![], sub_vec(&ring.mul(&u, &u), &u))]);
    let comm = Check::from_defects(
        "counit commutes with g",
        [(vec![], sub_vec(&coring.left(&u, g), &coring.right(g, &u)))],
    );
    let semi = coproduct_ok && idem.passed && comm.passed;
    report.push(idem);
    report.push(comm);
    if semi {
        (GrouplikeKind::SemiGrouplike { u }, report)
    } else {
        (GrouplikeKind::Neither, report)
    }
}

/// All grouplike elements, by exhaustive enumeration over `F_p`.
pub fn search_grouplikes(coring: &Coring) -> Result<Vec<Vector>> {
    let Field::Prime(p) = coring.field() else {
        return Err(Error::SearchTooLarge("exhaustive search needs a prime field".into()));
    };
    let n = coring.dim();
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|t| *t <= SEARCH_LIMIT));
    let Some(total) = total else {
        return Err(Error::SearchTooLarge(format!("{p}^{n} candidates exceed {SEARCH_LIMIT}")));
    };
    let f = coring.field();
    let found = par::map_range(total as usize, |idx| {
        let mut x = idx as u64;
        let g: Vector = (0..n)
            .map(|_| {
                let d = x % p;
                x /= p;
                f.from_i64(d as i64)
            })
            .collect();
        if is_zero_vec(&g) || coring.counit_of(&g) != *coring.ring.unit() {
            return None;
        }
        (coring.delta_of(&g) == coring.pair(&g, &g)).then_some(g)
    });
    Ok(found.into_iter().flatten().collect())
}

/// The coinvariant subring `S = R^{co C}_g` with its inclusion into `R`.
/// Computed from the regular comodule and cross-checked against the
/// centralizer of `g`.
pub fn coinvariant_subring(coring: &Arc<Coring>, g: &Grouplike) -> Result<AlgebraMap> {
    let ring = coring.ring.clone();
    let reg = Comodule::regular(coring.clone(), &g.g)?;
    let mut basis = reg.coinvariants(&g.g);
    let f = ring.field();
    let n = ring.dim();
    let by_g_right = Matrix::build_columns(f, coring.dim(), n, |r| coring.left(&ring.basis(r), &g.g));
    let by_g_left = Matrix::build_columns(f, coring.dim(), n, |r| coring.right(&g.g, &ring.basis(r)));
    let cent = centralizer(&ring, &by_g_right, &by_g_left);
    let span = |b: &[Vector]| Matrix::from_columns(f, n, b);
    if cent.len() != basis.len()
        || (!basis.is_empty() && solve_many(&span(&basis), &span(&cent)).is_none())
    {
        return Err(Error::Inconsistent("coinvariants differ from the centralizer of g".into()));
    }
    // Put the unit first when it is a basis vector candidate.
    if let Some(pos) = basis.iter().position(|b| b == ring.unit()) {
        basis.swap(0, pos);
    } else if !basis.is_empty() && solve(&span(&basis), ring.unit()).is_some() {
        basis.insert(0, ring.unit().clone());
        let m = span(&basis);
        let r = crate::exactla::rref(&m);
        basis = r.pivots.iter().map(|&p| basis[p].clone()).collect();
    }
    let incl = span(&basis);
    let d = basis.len();
    let coords = |v: &Vector| -> Result<Vector> {
        solve(&incl, v).ok_or_else(|| Error::NotClosed("coinvariants are not closed under multiplication".into()))
    };
    let mut mult = Vec::with_capacity(d);
    for a in &basis {
        let mut row = Vec::with_capacity(d);
        for b in &basis {
            row.push(coords(&ring.mul(a, b))?);
        }
        mult.push(row);
    }
    let unit = coords(ring.unit())?;
    let labels = (0..d).map(|i| format!("s{i}")).collect();
    let s = Algebra::new(f, labels, mult, unit)?;
    let map = AlgebraMap::new(Arc::new(s), ring, incl)?;
    if !map.check().passed() {
        return Err(Error::Inconsistent("coinvariant inclusion is not a ring map".into()));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<Algebra> {
        let f2 = Field::prime(2).unwrap();
        Arc::new(Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()]))
    }

    #[test]
    fn classification_examples() {
        let r = f4();
        let triv = Coring::trivial(r.clone());
        assert_eq!(classify(&triv, r.unit()).0, GrouplikeKind::Grouplike);
        let (sw, g) = Coring::sweedler(&AlgebraMap::from_ground(r.clone())).unwrap();
        assert_eq!(classify(&sw, &g).0, GrouplikeKind::Grouplike);
        let zero = vec![r.field().zero(); 4];
        assert_eq!(
            classify(&sw, &zero).0,
            GrouplikeKind::SemiGrouplike { u: vec![r.field().zero(); 2] }
        );
        assert!(Grouplike::new(&sw, zero.clone()).is_err());
        assert!(Grouplike::semi(&sw, zero).is_ok());
    }

    #[test]
    fn exhaustive_search() {
        let r = f4();
        let triv = Coring::trivial(Arc::new(Algebra::ground(r.field())));
        assert_eq!(search_grouplikes(&triv).unwrap(), vec![vec![r.field().one()]]);
        let (sw, g) = Coring::sweedler(&AlgebraMap::from_ground(r.clone())).unwrap();
        let all = search_grouplikes(&sw).unwrap();
        assert!(all.contains(&g));
        let q = Coring::trivial(Arc::new(Algebra::ground(Field::Rational)));
        assert!(search_grouplikes(&q).is_err());
    }

    #[test]
    fn coinvariant_subrings() {
        let r = f4();
        let triv = Arc::new(Coring::trivial(r.clone()));
        let g = Grouplike::new(&triv, r.unit().clone()).unwrap();
        assert_eq!(coinvariant_subring(&triv, &g).unwrap().source.dim(), 2);
        let (sw, g) = Coring::sweedler(&AlgebraMap::from_ground(r.clone())).unwrap();
        let sw = Arc::new(sw);
        let g = Grouplike::new(&sw, g).unwrap();
        let s = coinvariant_subring(&sw, &g).unwrap();
        assert_eq!(s.source.dim(), 1);
        assert_eq!(s.matrix.column(0), *r.unit());
    }
}
