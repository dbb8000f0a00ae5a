use std::sync::Arc;

use super::bimodule::{rings_match, Bimodule};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, kron_vec, unit_vector, zeros, Field, FinSpace, Matrix, QuotientSpace, Scalar, Vector};
use crate::par;
use crate::report::Check;

/// `M ⊗_R N` realised as the quotient of `M ⊗_k N` by the balancing
/// relations `(m·r)⊗n − m⊗(r·n)`, with the induced outer actions.
#[derive(Clone, Debug)]
pub struct BalancedTensor {
    pub quotient: QuotientSpace,
    pub module: Bimodule,
    pub dim_left: usize,
    pub dim_right: usize,
}

impl BalancedTensor {
    pub fn new(m: &Bimodule, n: &Bimodule) -> Result<BalancedTensor> {
        if !rings_match(&m.right_ring, &n.left_ring) {
            return Err(Error::RingMismatch(
                "right ring of the first factor differs from left ring of the second".into(),
            ));
        }
        for (name, b) in [("first", m), ("second", n)] {
            let failed = b.check().failing().next().map(|c| c.name.clone());
            if let Some(axiom) = failed {
                return Err(Error::ActionAxioms(format!("{name} factor: {axiom}")));
            }
        }
        let f = m.field();
        let (dm, dn) = (m.dim(), n.dim());
        let ring = &m.right_ring;
        let triples = dm * ring.dim() * dn;
        let relations: Vec<Vector> = par::map_range(triples, |t| {
            let (a, rest) = (t / (ring.dim() * dn), t % (ring.dim() * dn));
            let (b, c) = (rest / dn, rest % dn);
            let mr = m.right_basis_action(b).column(a);
            let rn = n.left_basis_action(b).column(c);
            let mut v = kron_vec(&mr, &unit_vector(f, dn, c));
            let w = kron_vec(&unit_vector(f, dm, a), &rn);
            for (x, y) in v.iter_mut().zip(&w) {
                *x -= y;
            }
            v
        })
        .into_iter()
        .filter(|v| !is_zero_vec(v))
        .collect();
        let q = QuotientSpace::new(f, dm * dn, &relations);

        let induced = |act: &(dyn Fn(usize) -> Vector + Sync + Send)| -> Matrix {
            Matrix::build_columns(f, q.dim, q.dim, |j| q.project(&act(q.free_columns[j])))
        };
        let mut left = Vec::with_capacity(m.left_ring.dim());
        for i in 0..m.left_ring.dim() {
            let a = m.left_basis_action(i);
            let act = |x: usize| kron_vec(&a.column(x / dn), &unit_vector(f, dn, x % dn));
            left.push(induced(&act));
        }
        let mut right = Vec::with_capacity(n.right_ring.dim());
        for i in 0..n.right_ring.dim() {
            let a = n.right_basis_action(i);
            let act = |x: usize| kron_vec(&unit_vector(f, dm, x / dn), &a.column(x % dn));
            right.push(induced(&act));
        }

        // The outer actions must kill every relation to be well defined.
        let bad = par::map_range(relations.len(), |k| {
            let r = &relations[k];
            let apply_left = |a: &Matrix| {
                let mut out = zeros(f, dm * dn);
                for (x, s) in r.iter().enumerate() {
                    if !s.is_zero() {
                        let v = kron_vec(&a.column(x / dn), &unit_vector(f, dn, x % dn));
                        crate::exactla::axpy(&mut out, s, &v);
                    }
                }
                out
            };
            let apply_right = |a: &Matrix| {
                let mut out = zeros(f, dm * dn);
                for (x, s) in r.iter().enumerate() {
                    if !s.is_zero() {
                        let v = kron_vec(&unit_vector(f, dm, x / dn), &a.column(x % dn));
                        crate::exactla::axpy(&mut out, s, &v);
                    }
                }
                out
            };
            (0..m.left_ring.dim()).any(|i| !is_zero_vec(&q.project(&apply_left(m.left_basis_action(i)))))
                || (0..n.right_ring.dim())
                    .any(|i| !is_zero_vec(&q.project(&apply_right(n.right_basis_action(i)))))
        });
        if bad.into_iter().any(|b| b) {
            return Err(Error::ActionAxioms("outer actions do not descend to the balanced tensor".into()));
        }

        let labels = q
            .free_columns
            .iter()
            .map(|&x| format!("{}⊗{}", m.space.labels[x / dn], n.space.labels[x % dn]))
            .collect();
        let module = Bimodule::new(
            FinSpace::with_labels(f, labels),
            m.left_ring.clone(),
            n.right_ring.clone(),
            left,
            right,
        )?;
        Ok(BalancedTensor {
            quotient: q,
            module,
            dim_left: dm,
            dim_right: dn,
        })
    }

    /// Image of the pure tensor `m ⊗ n`.
    pub fn pure(&self, m: &[Scalar], n: &[Scalar]) -> Vector {
        self.quotient.project(&kron_vec(m, n))
    }
}

#[derive(Clone, Debug)]
struct Level {
    module: Bimodule,
    quotient: Option<QuotientSpace>,
    /// Sparse columns of the projection: `proj_cols[x] = [(row, value)]`.
    proj_cols: Vec<Vec<(usize, Scalar)>>,
    lifts: Vec<Vec<usize>>,
}

/// Left-nested iterated balanced tensor `F0 ⊗ F1 ⊗ … ⊗ Fn`. Level `k` is
/// `(level k−1) ⊗_{R_k} F_k`; every level basis vector lifts to a single pure
/// tensor of factor basis vectors, because sections are unit vectors.
#[derive(Clone, Debug)]
pub struct TensorChain {
    field: Field,
    factors: Vec<Bimodule>,
    levels: Vec<Level>,
}

impl TensorChain {
    pub fn new(factors: Vec<Bimodule>) -> Result<TensorChain> {
        let first = factors
            .first()
            .ok_or_else(|| Error::Shape("empty tensor chain".into()))?;
        let field = first.field();
        let mut levels = vec![Level {
            module: first.clone(),
            quotient: None,
            proj_cols: Vec::new(),
            lifts: (0..first.dim()).map(|i| vec![i]).collect(),
        }];
        for k in 1..factors.len() {
            let prev = &levels[k - 1];
            let t = BalancedTensor::new(&prev.module, &factors[k])?;
            let dn = factors[k].dim();
            let lifts = t
                .quotient
                .free_columns
                .iter()
                .map(|&x| {
                    let mut l = prev.lifts[x / dn].clone();
                    l.push(x % dn);
                    l
                })
                .collect();
            let p = &t.quotient.projection;
            let proj_cols = (0..p.cols())
                .map(|x| {
                    (0..p.rows())
                        .filter_map(|q| {
                            let v = p.get(q, x);
                            (!v.is_zero()).then(|| (q, v.clone()))
                        })
                        .collect()
                })
                .collect();
            levels.push(Level {
                module: t.module,
                quotient: Some(t.quotient),
                proj_cols,
                lifts,
            });
        }
        Ok(TensorChain {
            field,
            factors,
            levels,
        })
    }

    /// `F ⊗ F ⊗ … ⊗ F` with `n` factors.
    pub fn power(factor: &Bimodule, n: usize) -> Result<TensorChain> {
        TensorChain::new(vec![factor.clone(); n])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor(&self, i: usize) -> &Bimodule {
        &self.factors[i]
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn module(&self, level: usize) -> &Bimodule {
        &self.levels[level].module
    }

    pub fn top(&self) -> &Bimodule {
        self.module(self.top_level())
    }

    pub fn dim(&self, level: usize) -> usize {
        self.levels[level].module.dim()
    }

    pub fn quotient(&self, level: usize) -> Option<&QuotientSpace> {
        self.levels[level].quotient.as_ref()
    }

    /// Pure tensor of factor basis indices representing basis vector `j`.
    pub fn lift(&self, level: usize, j: usize) -> &[usize] {
        &self.levels[level].lifts[j]
    }

    /// Dimension of the unreduced `F0 ⊗_k … ⊗_k F_level`.
    pub fn flat_dim(&self, level: usize) -> usize {
        self.factors[..=level].iter().map(Bimodule::dim).product()
    }

    pub fn flat_index(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&i, f)| acc * f.dim() + i)
    }

    pub fn unflat_index(&self, level: usize, mut x: usize) -> Vec<usize> {
        let mut t = vec![0; level + 1];
        for k in (0..=level).rev() {
            let d = self.factors[k].dim();
            t[k] = x % d;
            x /= d;
        }
        t
    }

    /// Lift of a level vector to `F0 ⊗_k … ⊗_k F_level`.
    pub fn lift_flat(&self, level: usize, x: &[Scalar]) -> Vector {
        let mut out = zeros(self.field, self.flat_dim(level));
        for (j, s) in x.iter().enumerate() {
            if !s.is_zero() {
                out[self.flat_index(self.lift(level, j))] += s;
            }
        }
        out
    }

    /// Project a vector of `F0 ⊗_k … ⊗_k F_level` onto the level.
    pub fn project_flat(&self, level: usize, flat: &[Scalar]) -> Vector {
        assert_eq!(flat.len(), self.flat_dim(level), "flat vector has wrong length");
        let mut cur = flat.to_vec();
        for k in 1..=level {
            let rest: usize = self.factors[k + 1..=level].iter().map(Bimodule::dim).product();
            let lv = &self.levels[k];
            let mut next = zeros(self.field, lv.module.dim() * rest);
            for (idx, s) in cur.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let (x, r) = (idx / rest, idx % rest);
                for (q, p) in &lv.proj_cols[x] {
                    next[q * rest + r] += &(p * s);
                }
            }
            cur = next;
        }
        cur
    }

    /// Image of the pure tensor of the given factor basis indices.
    pub fn embed(&self, tuple: &[usize]) -> Vector {
        let level = tuple.len() - 1;
        let mut flat = zeros(self.field, self.flat_dim(level));
        flat[self.flat_index(tuple)] = self.field.one();
        self.project_flat(level, &flat)
    }

    /// Image of `v0 ⊗ v1 ⊗ … ⊗ vk` for factor vectors `vi`.
    pub fn embed_vectors(&self, parts: &[&[Scalar]]) -> Vector {
        let level = parts.len() - 1;
        let mut cur = parts[0].to_vec();
        for k in 1..=level {
            let q = self.levels[k].quotient.as_ref().expect("level above zero has a quotient");
            cur = q.project(&kron_vec(&cur, parts[k]));
        }
        cur
    }

    /// `u ⊗ v` where `u` lies in `level − 1` and `v` in factor `level`.
    pub fn extend(&self, level: usize, u: &[Scalar], v: &[Scalar]) -> Vector {
        let q = self.levels[level].quotient.as_ref().expect("level above zero has a quotient");
        q.project(&kron_vec(u, v))
    }

    /// Matrix of a map out of `level`, given by its value on the lift of each
    /// basis vector.
    pub fn map_from_lifts<F>(&self, level: usize, codim: usize, f: F) -> Matrix
    where
        F: Fn(&[usize]) -> Vector + Sync + Send,
    {
        Matrix::build_columns(self.field, codim, self.dim(level), |j| f(self.lift(level, j)))
    }

    /// Checks that a multilinear formula `f` on pure tensors agrees with
    /// `m ∘ embed` on every pure tensor of basis vectors, i.e. that the formula
    /// is balanced and `m` is the map it induces.
    pub fn check_descends<F>(&self, name: &str, level: usize, m: &Matrix, f: F) -> Check
    where
        F: Fn(&[usize]) -> Vector + Sync + Send,
    {
        let total = self.flat_dim(level);
        let defects = par::map_range(total, |x| {
            let t = self.unflat_index(level, x);
            let lhs = m.apply(&self.embed(&t));
            let rhs = f(&t);
            let d: Vector = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
            (t, d)
        });
        Check::from_defects(name, defects)
    }

    pub fn factors(&self) -> &[Bimodule] {
        &self.factors
    }

    pub fn left_ring(&self) -> &Arc<crate::algebra::Algebra> {
        &self.factors[0].left_ring
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraMap};

    fn f4() -> Arc<Algebra> {
        let f2 = Field::prime(2).unwrap();
        Arc::new(Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()]))
    }

    #[test]
    fn ring_over_itself_collapses() {
        let r = f4();
        let reg = Bimodule::regular(r.clone());
        let t = BalancedTensor::new(&reg, &reg).unwrap();
        assert_eq!(t.module.dim(), 2);
        assert!(t.module.check().passed());
        let r2 = Bimodule::direct_sum(&[reg.clone(), reg.clone()]).unwrap();
        assert_eq!(BalancedTensor::new(&r2, &reg).unwrap().module.dim(), 4);
    }

    #[test]
    fn over_subfield_no_collapse() {
        let r = f4();
        let incl = AlgebraMap::from_ground(r.clone());
        let reg = Bimodule::regular(r);
        let a = reg.restrict_right(&incl).unwrap();
        let b = reg.restrict_left(&incl).unwrap();
        let t = BalancedTensor::new(&a, &b).unwrap();
        assert_eq!(t.module.dim(), 4);
        assert!(t.module.check().passed());
    }

    #[test]
    fn chain_embedding_is_multilinear() {
        let r = Arc::new(Algebra::upper_triangular(Field::Rational));
        let reg = Bimodule::regular(r.clone());
        let ch = TensorChain::power(&reg, 3).unwrap();
        assert_eq!(ch.dim(2), 3);
        for j in 0..ch.dim(2) {
            let v = ch.embed(ch.lift(2, j));
            assert_eq!(v, unit_vector(Field::Rational, 3, j));
        }
        // x ⊗ y ⊗ z = xyz under R ⊗_R R ⊗_R R ≅ R
        let x = r.basis(0);
        let y = r.basis(1);
        let z = r.basis(2);
        let lhs = ch.embed_vectors(&[&x, &y, &z]);
        let xyz = r.mul(&r.mul(&x, &y), &z);
        let rhs = ch.embed_vectors(&[&xyz, r.unit(), r.unit()]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mismatched_rings_rejected() {
        let r = f4();
        let k = Bimodule::regular(Arc::new(Algebra::ground(r.field())));
        assert!(BalancedTensor::new(&Bimodule::regular(r), &k).is_err());
    }
}
