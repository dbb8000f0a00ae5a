use std::sync::Arc;

use super::algebra::{Algebra, AlgebraMap};
use super::bimodule::Bimodule;
use crate::exactla::{kernel, Matrix, MatrixSystem, Vector};

/// Which actions a map is required to commute with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

fn add_linearity(sys: &mut MatrixSystem, m: &Bimodule, n: &Bimodule, side: Side) {
    if matches!(side, Side::Left | Side::Both) {
        for (a, b) in m.left_actions().iter().zip(n.left_actions()) {
            sys.commute(None, Some(a.clone()), Some(b.clone()), None);
        }
    }
    if matches!(side, Side::Right | Side::Both) {
        for (a, b) in m.right_actions().iter().zip(n.right_actions()) {
            sys.commute(None, Some(a.clone()), Some(b.clone()), None);
        }
    }
}

/// Basis of the space of maps `M → N` commuting with the chosen actions,
/// as `dim N × dim M` matrices.
pub fn module_hom_space(m: &Bimodule, n: &Bimodule, side: Side) -> Vec<Matrix> {
    let mut sys = MatrixSystem::new(m.field(), n.dim(), m.dim());
    add_linearity(&mut sys, m, n, side);
    sys.kernel()
}

/// A linear section `j: N → M` of `f: M → N` commuting with the chosen
/// actions, i.e. `f ∘ j = id_N`, or `None` if no such map exists.
pub fn has_retraction(f: &Matrix, m: &Bimodule, n: &Bimodule, side: Side) -> Option<Matrix> {
    let mut sys = MatrixSystem::new(m.field(), m.dim(), n.dim());
    sys.equal(Some(f.clone()), None, Matrix::identity(m.field(), n.dim()));
    add_linearity(&mut sys, n, m, side);
    sys.solve()
}

/// Outcome of the free-cover splitting test.
#[derive(Clone, Debug)]
pub struct Projectivity {
    pub projective: bool,
    /// The cover `R^n → M`.
    pub cover: Matrix,
    /// A right-linear section of the cover, when one exists.
    pub splitting: Option<Matrix>,
}

/// Right `R`-module `M` is projective iff the cover `R^n → M`,
/// `(r_i) ↦ Σ g_i r_i`, splits. `generators` must span `M` as a module.
pub fn projectivity_with(m: &Bimodule, generators: &[Vector]) -> Projectivity {
    let ring = m.right_ring.clone();
    let free = Bimodule::free_right(ring.clone(), generators.len());
    let f = m.field();
    let d = ring.dim();
    let mut cols = Vec::with_capacity(free.dim());
    for g in generators {
        for b in 0..d {
            cols.push(m.act_right(g, &ring.basis(b)));
        }
    }
    let cover = Matrix::from_columns(f, m.dim(), &cols);
    let m_right = m.clone().forget_left();
    let splitting = has_retraction(&cover, &free, &m_right, Side::Right);
    Projectivity {
        projective: splitting.is_some(),
        cover,
        splitting,
    }
}

/// Projectivity using the k-basis of `M` as generators.
pub fn is_projective(m: &Bimodule) -> Projectivity {
    let gens: Vec<Vector> = (0..m.dim())
        .map(|i| crate::exactla::unit_vector(m.field(), m.dim(), i))
        .collect();
    projectivity_with(m, &gens)
}

/// Whether `(s_i) ↦ Σ s_i·elems_i` is a bijection `S^n → R`, i.e. `elems`
/// is a free basis of `R` as a left `S`-module.
pub fn verify_free_basis(ext: &AlgebraMap, elems: &[Vector]) -> bool {
    let s = &ext.source;
    let r = &ext.target;
    let mut cols = Vec::with_capacity(s.dim() * elems.len());
    for e in elems {
        for b in 0..s.dim() {
            cols.push(r.mul(&ext.matrix.column(b), e));
        }
    }
    if cols.len() != r.dim() {
        return false;
    }
    Matrix::from_columns(r.field(), r.dim(), &cols).rank() == r.dim()
}

/// Basis of `{s ∈ R : s·g = g·s}`, given the maps `s ↦ s·g` and `s ↦ g·s`
/// (which may land in any bimodule containing `g`).
pub fn centralizer(ring: &Algebra, right_by_g: &Matrix, left_by_g: &Matrix) -> Vec<Vector> {
    assert_eq!(right_by_g.cols(), ring.dim());
    kernel(&right_by_g.sub(left_by_g))
}

/// Convenience: the centralizer of an element of `R` itself.
pub fn centralizer_of_element(ring: &Arc<Algebra>, g: &[crate::exactla::Scalar]) -> Vec<Vector> {
    centralizer(ring, &ring.right_mult_matrix(g), &ring.left_mult_matrix(g))
}
