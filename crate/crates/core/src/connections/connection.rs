use std::sync::Arc;

use crate::algebra::{has_retraction, module_hom_space, Bimodule, Side, TensorChain};
use crate::amitsur::AmitsurComplex;
use crate::coring::{Comodule, Coring};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, kron_vec, solve_many, sub_vec, unit_vector, zeros, Matrix, Scalar, Vector};
use crate::report::{Check, Report};

/// A connection `∇: M → M ⊗_R Ω¹(C/S)` on a right `R`-module, stored by its
/// degree-zero part. Higher degrees are recomputed by [`Connection::extension`].
#[derive(Clone, Debug)]
pub struct Connection {
    /// The reduced complex `Ω(C/S)`; its degree bound limits the extensions.
    pub complex: Arc<AmitsurComplex>,
    pub module: Bimodule,
    /// `M ⊗_R K ⊗_R … ⊗_R K` with `K = ker ε`; level `k` is `M ⊗_R Ω^k`.
    pub chain: TensorChain,
    /// `M ⊗_R C ⊗_R C`
    pub coring_chain: TensorChain,
    /// `dim(M ⊗_R K) × dim M`
    pub nabla: Matrix,
}

/// The chains `M ⊗ K^{⊗n_max}` and `M ⊗ C ⊗ C` for a module over the ring of `cx`.
fn chains(cx: &AmitsurComplex, module: &Bimodule) -> Result<(TensorChain, TensorChain)> {
    if !cx.reduced {
        return Err(Error::Precondition("connections take values in the reduced complex".into()));
    }
    if cx.n_max == 0 {
        return Err(Error::Precondition("connections need Ω¹".into()));
    }
    if module.right_ring.dim() != cx.coring.ring.dim() {
        return Err(Error::RingMismatch("module is not over the ring of the coring".into()));
    }
    let mut factors = vec![module.clone()];
    factors.extend(std::iter::repeat_n(cx.factor.clone(), cx.n_max));
    let chain = TensorChain::new(factors)?;
    let c = cx.coring.bimodule.clone();
    let coring_chain = TensorChain::new(vec![module.clone(), c.clone(), c])?;
    Ok((chain, coring_chain))
}

impl Connection {
    pub fn new(complex: Arc<AmitsurComplex>, module: Bimodule, nabla: Matrix) -> Result<Connection> {
        let (chain, coring_chain) = chains(&complex, &module)?;
        if nabla.shape() != (chain.dim(1), module.dim()) {
            return Err(Error::Shape(format!(
                "connection must be {}x{}, got {}x{}",
                chain.dim(1),
                module.dim(),
                nabla.rows(),
                nabla.cols()
            )));
        }
        Ok(Connection {
            complex,
            module,
            chain,
            coring_chain,
            nabla,
        })
    }

    pub fn coring(&self) -> &Arc<Coring> {
        &self.complex.coring
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    fn unit(&self, i: usize) -> Vector {
        unit_vector(self.module.field(), self.dim(), i)
    }

    /// `m ↦ m ⊗ d(r)` for a ring basis element `r`.
    fn m_dr(&self, m: usize, r: usize) -> Vector {
        self.chain.extend(1, &self.unit(m), &self.complex.d[0].column(r))
    }

    /// Leibniz rule `∇(mr) = ∇(m)r + m ⊗ d(r)` on basis pairs.
    pub fn check(&self) -> Check {
        let mut check = Check::pass("Leibniz rule");
        let top = self.chain.module(1);
        for r in 0..self.coring().ring.dim() {
            let lhs = self.nabla.mul(self.module.right_basis_action(r));
            let rhs = top.right_basis_action(r).mul(&self.nabla);
            for m in 0..self.dim() {
                let d = sub_vec(&lhs.column(m), &rhs.column(m));
                let d = sub_vec(&d, &self.m_dr(m, r));
                if !is_zero_vec(&d) {
                    check.record(vec![m, r], d);
                }
            }
        }
        check
    }

    /// `∇(m ⊗ ω) = ∇(m)ω + m ⊗ d(ω)` on a pure tensor `m ⊗ k¹ ⊗ … ⊗ k^k`.
    fn extension_formula(&self, t: &[usize]) -> Vector {
        let f = self.module.field();
        let k = t.len() - 1;
        let kd = self.complex.factor.dim();
        let omega_flat = {
            let mut v = zeros(f, kd.pow(k as u32));
            v[t[1..].iter().fold(0, |acc, &i| acc * kd + i)] = f.one();
            v
        };
        let first = kron_vec(&self.chain.lift_flat(1, &self.nabla.column(t[0])), &omega_flat);
        let cx_chain = self.complex.chain.as_ref().expect("positive degree has a chain");
        let omega = cx_chain.embed(&t[1..]);
        let d_omega = cx_chain.lift_flat(k, &self.complex.d[k].apply(&omega));
        let second = kron_vec(&self.unit(t[0]), &d_omega);
        let flat: Vector = first.iter().zip(&second).map(|(a, b)| a + b).collect();
        self.chain.project_flat(k + 1, &flat)
    }

    /// `∇: M ⊗_R Ω^k → M ⊗_R Ω^{k+1}`.
    pub fn extension(&self, k: usize) -> Result<Matrix> {
        if k + 1 > self.complex.n_max {
            return Err(Error::DegreeOverflow {
                degree: k + 1,
                max: self.complex.n_max,
            });
        }
        if k == 0 {
            return Ok(self.nabla.clone());
        }
        Ok(self
            .chain
            .map_from_lifts(k, self.chain.dim(k + 1), |t| self.extension_formula(t)))
    }

    /// The extension to degree `k` evaluated on `x ∈ M ⊗_R Ω^k`.
    pub fn extend_connection(&self, k: usize, x: &[Scalar]) -> Result<Vector> {
        Ok(self.extension(k)?.apply(x))
    }

    /// The extension formula is balanced over `⊗_R` in degree `k ≥ 1`.
    pub fn check_extension(&self, k: usize) -> Result<Check> {
        let m = self.extension(k)?;
        Ok(self
            .chain
            .check_descends(&format!("∇ well defined on M ⊗ Ω^{k}"), k, &m, |t| {
                self.extension_formula(t)
            }))
    }

    /// `F = ∇ ∘ ∇: M → M ⊗_R Ω²`.
    pub fn curvature(&self) -> Result<Matrix> {
        Ok(self.extension(1)?.mul(&self.nabla))
    }

    pub fn is_flat(&self) -> Result<bool> {
        Ok(self.curvature()?.is_zero())
    }

    /// Leibniz, well-definedness of the degree-one extension, right
    /// linearity of the curvature, and flatness.
    pub fn report(&self) -> Result<Report> {
        let mut report = Report::new("connection");
        report.push(self.check());
        report.push(self.check_extension(1)?);
        let curv = self.curvature()?;
        let mut lin = Check::pass("curvature is right linear");
        let top = self.chain.module(2);
        for r in 0..self.coring().ring.dim() {
            let lhs = curv.mul(self.module.right_basis_action(r));
            let rhs = top.right_basis_action(r).mul(&curv);
            for (m, d) in lhs.column_defects(&rhs) {
                lin.record(vec![m, r], d);
            }
        }
        report.push(lin);
        report.push(Check::from_defects(
            "flat",
            (0..self.dim()).map(|m| (vec![m], curv.column(m))),
        ));
        Ok(report)
    }

    /// `M ⊗_R Ω^k(C/S) → M ⊗_R C^{⊗_R k}` induced by `ker ε ⊂ C`, for `k ≤ 2`.
    pub fn inclusion(&self, k: usize) -> Matrix {
        let f = self.module.field();
        if k == 0 {
            return Matrix::identity(f, self.dim());
        }
        let incl: Vec<Vector> = (0..self.complex.factor.dim())
            .map(|i| self.complex.inclusion.column(i))
            .collect();
        self.chain.map_from_lifts(k, self.coring_chain.dim(k), |t| {
            let m = self.unit(t[0]);
            let mut parts: Vec<&[Scalar]> = vec![&m];
            parts.extend(t[1..].iter().map(|&i| incl[i].as_slice()));
            self.coring_chain.embed_vectors(&parts)
        })
    }

    /// `j_∇ = ∇ + (· ⊗ g): M → M ⊗_R C`, the coaction of a flat connection.
    pub fn section(&self) -> Matrix {
        self.inclusion(1)
            .mul(&self.nabla)
            .add(&tensor_with(&self.coring_chain, &self.module, &self.complex.g))
    }

    /// `ρ_∇`, returned whether or not `∇` is flat; its coassociativity
    /// defect equals the image of the curvature in `M ⊗_R C ⊗_R C`.
    pub fn to_comodule(&self) -> Result<Comodule> {
        Comodule::from_coaction(self.coring().clone(), self.module.clone(), self.section())
    }

    /// `ρ_∇` for a flat `∇`; a non-flat connection is rejected with the
    /// first basis element where the curvature is nonzero.
    pub fn flat_comodule(&self) -> Result<Comodule> {
        let curv = self.curvature()?;
        if let Some(m) = (0..self.dim()).find(|&m| !is_zero_vec(&curv.column(m))) {
            return Err(Error::NotFlat(format!("F(e{m}) ≠ 0")));
        }
        self.to_comodule()
    }

    /// Coassociativity defect of `ρ_∇` equals `F` included into `M ⊗ C ⊗ C`.
    pub fn check_curvature_witness(&self) -> Result<Check> {
        let defect = self.to_comodule()?.coassociativity_defect();
        let image = self.inclusion(2).mul(&self.curvature()?);
        Ok(Check::from_matrices("coassociativity defect = F", &[], &defect, &image))
    }
}

/// `m ↦ m ⊗ g` into level 1 of `M ⊗ C ⊗ C`.
fn tensor_with(chain: &TensorChain, module: &Bimodule, g: &[Scalar]) -> Matrix {
    let f = module.field();
    let n = module.dim();
    Matrix::build_columns(f, chain.dim(1), n, |m| chain.extend(1, &unit_vector(f, n, m), g))
}

/// `M ⊗ ε: M ⊗_R C → M`.
pub fn counit_map(chain: &TensorChain, module: &Bimodule, coring: &Coring) -> Matrix {
    let f = module.field();
    let n = module.dim();
    chain.map_from_lifts(1, n, |t| module.act_right(&unit_vector(f, n, t[0]), &coring.counit.column(t[1])))
}

/// `∇_j = j − (· ⊗ g)` for a right linear section `j: M → M ⊗_R C` of `M ⊗ ε`.
pub fn connection_from_section(cx: &Arc<AmitsurComplex>, module: &Bimodule, j: &Matrix) -> Result<Connection> {
    let (_, coring_chain) = chains(cx, module)?;
    let f = module.field();
    if j.shape() != (coring_chain.dim(1), module.dim()) {
        return Err(Error::Shape(format!(
            "section must be {}x{}, got {}x{}",
            coring_chain.dim(1),
            module.dim(),
            j.rows(),
            j.cols()
        )));
    }
    let eps = counit_map(&coring_chain, module, &cx.coring);
    if !eps.mul(j).sub(&Matrix::identity(f, module.dim())).is_zero() {
        return Err(Error::NotSection("(M ⊗ ε) j ≠ id".into()));
    }
    let top = coring_chain.module(1);
    for r in 0..cx.coring.ring.dim() {
        if let Some((m, _)) = j
            .mul(module.right_basis_action(r))
            .column_defects(&top.right_basis_action(r).mul(j))
            .first()
        {
            return Err(Error::NotSection(format!("not right linear at (e{m}, r{r})")));
        }
    }
    let target = j.sub(&tensor_with(&coring_chain, module, &cx.g));
    connection_from_values(cx, module, &target)
}

/// A connection given by its values in `M ⊗_R C`, which must lie in
/// `M ⊗_R ker ε`.
pub fn connection_from_values(cx: &Arc<AmitsurComplex>, module: &Bimodule, values: &Matrix) -> Result<Connection> {
    let (chain, coring_chain) = chains(cx, module)?;
    let f = module.field();
    let shell = Connection {
        complex: cx.clone(),
        module: module.clone(),
        chain,
        coring_chain,
        nabla: Matrix::zeros(f, 0, 0),
    };
    let incl = shell.inclusion(1);
    let leaves = || Error::Inconsistent("∇ leaves M ⊗ ker ε".into());
    let nabla = if incl.cols() == 0 {
        if !values.is_zero() {
            return Err(leaves());
        }
        Matrix::zeros(f, 0, module.dim())
    } else {
        solve_many(&incl, values).ok_or_else(leaves)?
    };
    Ok(Connection { nabla, ..shell })
}

/// `∇_ρ = ρ − (· ⊗ g)` for a comodule.
pub fn coaction_to_connection(cx: &Arc<AmitsurComplex>, comodule: &Comodule) -> Result<Connection> {
    connection_from_section(cx, &comodule.module, &comodule.coaction)
}

/// A connection exists iff `M ⊗ ε` has a right linear section; returns
/// `∇_j` for the section found by the deterministic solver.
pub fn connection_exists(cx: &Arc<AmitsurComplex>, module: &Bimodule) -> Result<Option<Connection>> {
    let (_, coring_chain) = chains(cx, module)?;
    let eps = counit_map(&coring_chain, module, &cx.coring);
    match has_retraction(&eps, coring_chain.module(1), module, Side::Right) {
        Some(j) => connection_from_section(cx, module, &j).map(Some),
        None => Ok(None),
    }
}

/// Adds right linear maps `h: M → M ⊗_R Ω¹` to `∇` and returns the first
/// result with nonzero curvature. Scan order: basis maps `h_i`, then sums
/// `h_i + h_j` for `i < j`, then `2h_i` outside characteristic 2.
pub fn non_flat_perturbation(cn: &Connection) -> Result<Option<Connection>> {
    let f = cn.module.field();
    let homs = module_hom_space(&cn.module, cn.chain.module(1), Side::Right);
    let mut candidates: Vec<Matrix> = homs.clone();
    for i in 0..homs.len() {
        for j in i + 1..homs.len() {
            candidates.push(homs[i].add(&homs[j]));
        }
    }
    if f.characteristic() != 2 {
        candidates.extend(homs.iter().map(|h| h.scale(&f.from_i64(2))));
    }
    for h in candidates {
        let candidate = Connection {
            nabla: cn.nabla.add(&h),
            ..cn.clone()
        };
        if !candidate.is_flat()? {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// A map `f: M → N` tested against both structures.
#[derive(Clone, Debug)]
pub struct MorphismCorrespondence {
    pub right_linear: bool,
    pub comodule_map: bool,
    pub connection_map: bool,
    /// `ρ_N f − (f ⊗ C) ρ_M`
    pub coaction_defect: Matrix,
    /// `∇_N f − (f ⊗ Ω¹) ∇_M`
    pub connection_defect: Matrix,
    /// The coaction defect is the image of the connection defect.
    pub defects_correspond: bool,
}

impl MorphismCorrespondence {
    pub fn agree(&self) -> bool {
        self.comodule_map == self.connection_map
    }
}

/// `f ⊗ X` from level 1 of one chain to level 1 of another, through lifts.
fn tensor_map(source: &TensorChain, target: &TensorChain, f: &Matrix) -> Matrix {
    let field = f.field();
    let dx = source.factor(1).dim();
    source.map_from_lifts(1, target.dim(1), |t| {
        target.extend(1, &f.column(t[0]), &unit_vector(field, dx, t[1]))
    })
}

/// Compares "comodule map" for `ρ_M, ρ_N` with "connection map" for
/// `∇_M, ∇_N` on a map `f` (`dim N × dim M`). Both connections must use
/// the same complex.
pub fn morphism_correspondence(f: &Matrix, source: &Connection, target: &Connection) -> Result<MorphismCorrespondence> {
    if !Arc::ptr_eq(&source.complex, &target.complex) {
        return Err(Error::Precondition("connections over different complexes".into()));
    }
    if f.shape() != (target.dim(), source.dim()) {
        return Err(Error::Shape(format!(
            "map must be {}x{}, got {}x{}",
            target.dim(),
            source.dim(),
            f.rows(),
            f.cols()
        )));
    }
    let right_linear = source
        .module
        .right_actions()
        .iter()
        .zip(target.module.right_actions())
        .all(|(a, b)| f.mul(a) == b.mul(f));
    let (rho_m, rho_n) = (source.section(), target.section());
    let coaction_defect = rho_n
        .mul(f)
        .sub(&tensor_map(&source.coring_chain, &target.coring_chain, f).mul(&rho_m));
    let connection_defect = target
        .nabla
        .mul(f)
        .sub(&tensor_map(&source.chain, &target.chain, f).mul(&source.nabla));
    let defects_correspond = target.inclusion(1).mul(&connection_defect) == coaction_defect;
    Ok(MorphismCorrespondence {
        right_linear,
        comodule_map: right_linear && coaction_defect.is_zero(),
        connection_map: right_linear && connection_defect.is_zero(),
        coaction_defect,
        connection_defect,
        defects_correspond,
    })
}

/// Round trips of the bijection between coactions and flat connections
/// for one comodule.
pub fn flat_round_trip(cx: &Arc<AmitsurComplex>, comodule: &Comodule) -> Result<(Connection, Report)> {
    let mut report = Report::new("coaction ↔ flat connection");
    let cn = coaction_to_connection(cx, comodule)?;
    report.extend(cn.report()?);
    let back = cn.to_comodule()?;
    report.push(Check::from_matrices("ρ ↦ ∇_ρ ↦ ρ", &[], &back.coaction, &comodule.coaction));
    let again = connection_from_section(cx, &cn.module, &back.coaction)?;
    report.push(Check::from_matrices("∇ ↦ ρ_∇ ↦ ∇", &[], &again.nabla, &cn.nabla));
    report.push(cn.check_curvature_witness()?);
    Ok((cn, report))
}
