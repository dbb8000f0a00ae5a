use std::sync::Arc;

use super::connection::{coaction_to_connection, connection_from_values, Connection};
use crate::algebra::Bimodule;
use crate::amitsur::AmitsurComplex;
use crate::coring::{Comodule, Coring, EntwiningData};
use crate::error::{Error, Result};
use crate::exactla::{axpy, kron_vec, unit_vector, zeros, FinSpace, Matrix, Scalar, Vector};
use crate::report::{Check, Report};

/// A flat connection from an entwined algebra, with the comodule it is
/// compared against.
#[derive(Clone, Debug)]
pub struct EntwinedConnection {
    pub connection: Connection,
    pub comodule: Comodule,
    pub report: Report,
}

impl EntwinedConnection {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// `x` split into a leading index and `n` trailing digits below `base`.
fn digits(x: usize, base: usize, n: usize) -> (usize, Vec<usize>) {
    let mut ds = vec![0; n];
    let mut rest = x;
    for k in (0..n).rev() {
        ds[k] = rest % base;
        rest /= base;
    }
    (rest, ds)
}

fn context(data: &EntwiningData, coring: &Arc<Coring>, rho: &Matrix, n: usize) -> Result<Arc<AmitsurComplex>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let g = data.grouplike_from_entwined_algebra(coring, rho)?;
    Ok(Arc::new(AmitsurComplex::new(coring.clone(), &g, 2, true)?))
}

fn right_module(data: &EntwiningData, dim: usize, act: impl Fn(usize, usize) -> Vector + Sync + Send) -> Result<Bimodule> {
    let f = data.algebra.field();
    let mats = (0..data.algebra.dim())
        .map(|a| Matrix::build_columns(f, dim, dim, |x| act(x, a)))
        .collect();
    Bimodule::right_module(FinSpace::new(f, dim), data.algebra.clone(), mats)
}

/// `v ⊗ (1 ⊗ c)` in `M ⊗_k (A ⊗ C)`.
fn with_one(data: &EntwiningData, v: &[Scalar], c: usize) -> Vector {
    let f = data.algebra.field();
    kron_vec(v, &kron_vec(data.algebra.unit(), &unit_vector(f, data.coalgebra.dim(), c)))
}

/// `Σ m·1₍₀₎ ⊗ 1₍₁₎` for `g = 1₍₀₎ ⊗ 1₍₁₎`, lifted to `M ⊗_k (A ⊗ C)`.
fn tensor_g(data: &EntwiningData, module: &Bimodule, g: &[Scalar], m: &[Scalar]) -> Vector {
    let f = data.algebra.field();
    let (da, dc) = (data.algebra.dim(), data.coalgebra.dim());
    let mut out = zeros(f, module.dim() * da * dc);
    for (y, s) in g.iter().enumerate() {
        if !s.is_zero() {
            let ma = module.act_right(m, &data.algebra.basis(y / dc));
            axpy(&mut out, s, &with_one(data, &ma, y % dc));
        }
    }
    out
}

fn assemble(
    cx: &Arc<AmitsurComplex>,
    module: &Bimodule,
    coaction_lift: &Matrix,
    explicit_lift: &Matrix,
) -> Result<(Connection, Comodule, Report)> {
    let comodule = Comodule::from_lift(cx.coring.clone(), module.clone(), coaction_lift)?;
    let f = module.field();
    let values = Matrix::build_columns(f, comodule.chain.dim(1), module.dim(), |m| {
        comodule.chain.project_flat(1, &explicit_lift.column(m))
    });
    let cn = connection_from_values(cx, module, &values)?;
    let mut report = cn.report()?;
    report.extend(comodule.check());
    Ok((cn, comodule, report))
}

/// The flat connection on `A ⊗ C^{⊗n}`,
/// `∇(a ⊗ c̄) = a ⊗ c₁ ⊗ … ⊗ Δ(c_n) − aψ^n(c̄ ⊗ 1₍₀₎) ⊗ 1₍₁₎`,
/// compared with `∇_ρ` for the coaction `A ⊗ C^{⊗(n−1)} ⊗ Δ`.
pub fn entwining_flat_connection_ac(
    data: &EntwiningData,
    coring: &Arc<Coring>,
    rho: &Matrix,
    n: usize,
) -> Result<EntwinedConnection> {
    let cx = context(data, coring, rho, n)?;
    let f = data.algebra.field();
    let (da, dc) = (data.algebra.dim(), data.coalgebra.dim());
    let dim = da * dc.pow(n as u32);
    let module = right_module(data, dim, |x, a| {
        let (ai, cs) = digits(x, dc, n);
        data.mul_left(&data.algebra.basis(ai), &data.psi_n(&cs, &data.algebra.basis(a)), n)
    })?;
    let delta_last = |x: usize| {
        let (head, last) = (x / dc, x % dc);
        let mut out = zeros(f, dim * da * dc);
        for (y, s) in data.coalgebra.delta.column(last).iter().enumerate() {
            if !s.is_zero() {
                let m = unit_vector(f, dim, head * dc + y / dc);
                axpy(&mut out, s, &with_one(data, &m, y % dc));
            }
        }
        out
    };
    let coaction = Matrix::build_columns(f, dim * da * dc, dim, delta_last);
    let g = &cx.g;
    let explicit = Matrix::build_columns(f, dim * da * dc, dim, |x| {
        let (ai, cs) = digits(x, dc, n);
        let mut out = delta_last(x);
        for (y, s) in g.iter().enumerate() {
            if !s.is_zero() {
                let moved = data.psi_n(&cs, &data.algebra.basis(y / dc));
                let m = data.mul_left(&data.algebra.basis(ai), &moved, n);
                axpy(&mut out, &-s.clone(), &with_one(data, &m, y % dc));
            }
        }
        out
    });
    let (cn, comodule, mut report) = assemble(&cx, &module, &coaction, &explicit)?;
    let generic = coaction_to_connection(&cx, &comodule)?;
    report.push(Check::from_matrices("∇ = ∇_ρ", &[], &cn.nabla, &generic.nabla));
    Ok(EntwinedConnection {
        connection: cn,
        comodule,
        report,
    })
}

/// The flat connection on `C ⊗ A^{⊗n}` with `A` acting on the last factor,
/// `∇(c ⊗ ā) = c₍₁₎ ⊗ ψ_n(c₍₂₎ ⊗ ā) − c ⊗ ā1₍₀₎ ⊗ 1₍₁₎`, checked directly;
/// its comodule is the one it induces.
pub fn entwining_flat_connection_ca(
    data: &EntwiningData,
    coring: &Arc<Coring>,
    rho: &Matrix,
    n: usize,
) -> Result<EntwinedConnection> {
    let cx = context(data, coring, rho, n)?;
    let f = data.algebra.field();
    let alg = &data.algebra;
    let (da, dc) = (alg.dim(), data.coalgebra.dim());
    let tail = da.pow(n as u32);
    let dim = dc * tail;
    let module = right_module(data, dim, |x, a| {
        let (head, last) = (x / da, x % da);
        let p = alg.basis_product(last, a);
        let mut out = zeros(f, dim);
        for (z, s) in p.iter().enumerate() {
            out[head * da + z] = s.clone();
        }
        out
    })?;
    let psi_part = |x: usize| {
        let (c, a_s) = digits(x, da, n);
        let mut out = zeros(f, dim * da * dc);
        for (y, s) in data.coalgebra.delta.column(c).iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let (c1, c2) = (y / dc, y % dc);
            for (z, t) in data.psi_sub_n(c2, &a_s).iter().enumerate() {
                if !t.is_zero() {
                    let m = unit_vector(f, dim, c1 * tail + z / dc);
                    axpy(&mut out, &(s * t), &with_one(data, &m, z % dc));
                }
            }
        }
        out
    };
    let g = cx.g.clone();
    let explicit = Matrix::build_columns(f, dim * da * dc, dim, |x| {
        let mut out = psi_part(x);
        let t = tensor_g(data, &module, &g, &unit_vector(f, dim, x));
        axpy(&mut out, &-f.one(), &t);
        out
    });
    let coaction = Matrix::build_columns(f, dim * da * dc, dim, psi_part);
    let (cn, comodule, mut report) = assemble(&cx, &module, &coaction, &explicit)?;
    let derived = cn.to_comodule()?;
    report.push(Check::from_matrices("ρ_∇ = c₍₁₎ ⊗ ψ_n(c₍₂₎ ⊗ ā)", &[], &derived.coaction, &comodule.coaction));
    Ok(EntwinedConnection {
        connection: cn,
        comodule,
        report,
    })
}
