use std::collections::BTreeMap;
use std::sync::Arc;

use super::raw::{
    parse_raw, RawAlgebra, RawCoaction, RawCoalgebra, RawCoring, RawInstance, RawMatrix, RawModuleKind, RawPsi,
    RawScalar,
};
use crate::algebra::{Algebra, AlgebraMap, Bimodule, TensorChain};
use crate::amitsur::{coring_from_dg, DgData};
use crate::coring::{Coalgebra, Comodule, Coring, EntwiningData, Grouplike};
use crate::error::{Error, Result};
use crate::exactla::{kron_vec, unit_vector, zeros, FinSpace, Field, Matrix, Scalar, Vector};

/// How the coring of an instance was obtained.
#[derive(Clone, Debug)]
pub enum Construction {
    Trivial,
    Sweedler(AlgebraMap),
    Entwining(EntwiningData),
    FromDg(DgData),
    Explicit,
}

impl Construction {
    pub fn kind(&self) -> &'static str {
        match self {
            Construction::Trivial => "trivial",
            Construction::Sweedler(_) => "sweedler",
            Construction::Entwining(_) => "entwining",
            Construction::FromDg(_) => "from-dg",
            Construction::Explicit => "explicit",
        }
    }
}

/// A grouplike candidate as declared; nothing about it is verified yet.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: String,
    pub vector: Vector,
    pub semi: bool,
}

impl Candidate {
    /// Unverified `Grouplike` wrapper, for constructions that check it themselves.
    pub fn grouplike(&self) -> Grouplike {
        Grouplike {
            g: self.vector.clone(),
            semi: self.semi,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InstanceModule {
    pub name: String,
    pub module: Bimodule,
    pub comodule: Option<Comodule>,
}

/// A parsed and shape-checked instance file.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub description: Option<String>,
    pub field: Field,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub extension: Option<AlgebraMap>,
    pub coring: Arc<Coring>,
    pub construction: Construction,
    pub grouplikes: Vec<Candidate>,
    pub modules: Vec<InstanceModule>,
    pub free_basis: Option<Vec<Vector>>,
}

impl Instance {
    pub fn parse(text: &str) -> Result<Instance> {
        let raw = parse_raw(text).map_err(Error::Parse)?;
        Instance::build(&raw)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Instance> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Instance::parse(&text)
    }

    /// The first declared grouplike, which every derived construction uses.
    pub fn distinguished(&self) -> Result<&Candidate> {
        self.grouplikes
            .first()
            .ok_or_else(|| Error::Precondition("the instance declares no grouplike element".into()))
    }

    pub fn module(&self, name: &str) -> Result<&InstanceModule> {
        self.modules
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::Precondition(format!("no module named {name:?}")))
    }

    pub fn build(raw: &RawInstance) -> Result<Instance> {
        let field: Field = raw
            .field
            .parse()
            .map_err(|e: Error| invalid("field", e.to_string()))?;
        let b = Builder { field };
        let mut algebras = BTreeMap::new();
        for (name, a) in &raw.algebras {
            algebras.insert(name.clone(), Arc::new(b.algebra(&format!("algebras.{name}"), a)?));
        }
        let lookup = |path: &str, name: &str| -> Result<Arc<Algebra>> {
            algebras
                .get(name)
                .cloned()
                .ok_or_else(|| invalid(path, format!("unknown algebra {name:?}")))
        };
        let extension = match &raw.extension {
            None => None,
            Some(e) => {
                let source = lookup("extension.source", &e.source)?;
                let target = lookup("extension.target", &e.target)?;
                Some(match &e.matrix {
                    None if source.dim() == 1 => AlgebraMap::from_ground(target),
                    None => return Err(invalid("extension.matrix", "required unless the source is the ground field")),
                    Some(m) => {
                        let m = b.matrix("extension.matrix", m, target.dim(), source.dim())?;
                        AlgebraMap::new(source, target, m).map_err(|e| invalid("extension", e.to_string()))?
                    }
                })
            }
        };

        let (coring, construction, default_g) = match &raw.coring {
            RawCoring::Trivial { ring } => {
                let r = lookup("coring.ring", ring)?;
                let g = r.unit().clone();
                (Coring::trivial(r), Construction::Trivial, Some(g))
            }
            RawCoring::Sweedler => {
                let ext = extension
                    .clone()
                    .ok_or_else(|| invalid("extension", "a Sweedler coring needs an extension"))?;
                let (c, g) = Coring::sweedler(&ext).map_err(|e| invalid("coring", e.to_string()))?;
                (c, Construction::Sweedler(ext), Some(g))
            }
            RawCoring::Entwining { algebra, coalgebra, psi } => {
                let a = lookup("coring.algebra", algebra)?;
                let c = b.coalgebra("coring.coalgebra", coalgebra)?;
                let data = match psi {
                    RawPsi::Named(n) if n == "flip" => EntwiningData::flip(a, c),
                    RawPsi::Named(n) => return Err(invalid("coring.psi", format!("unknown entwining {n:?}"))),
                    RawPsi::Matrix(m) => {
                        let n = a.dim() * c.dim();
                        let m = b.matrix("coring.psi", m, n, n)?;
                        EntwiningData::new(a, c, m).map_err(|e| invalid("coring.psi", e.to_string()))?
                    }
                };
                let coring = data.coring_unchecked().map_err(|e| invalid("coring", e.to_string()))?;
                (coring, Construction::Entwining(data), None)
            }
            RawCoring::FromDg { ring, omega1, d0, d1_lift } => {
                let r = lookup("coring.ring", ring)?;
                let w = b.bimodule("coring.omega1", &r, omega1.dim, &omega1.labels, &omega1.left, &omega1.right)?;
                let d0 = b.matrix("coring.d0", d0, w.dim(), r.dim())?;
                let lift = b.matrix("coring.d1_lift", d1_lift, w.dim() * w.dim(), w.dim())?;
                let chain = TensorChain::power(&w, 2).map_err(|e| invalid("coring.omega1", e.to_string()))?;
                let d1 = Matrix::build_columns(b.field, chain.dim(1), w.dim(), |x| {
                    chain.project_flat(1, &lift.column(x))
                });
                let data = DgData {
                    ring: r,
                    omega1: w,
                    d0,
                    d1,
                };
                let dg = coring_from_dg(&data).map_err(|e| invalid("coring", e.to_string()))?;
                let g = dg.g.g.clone();
                ((*dg.coring).clone(), Construction::FromDg(data), Some(g))
            }
            RawCoring::Explicit {
                ring,
                dim,
                labels,
                left,
                right,
                delta_lift,
                counit,
            } => {
                let r = lookup("coring.ring", ring)?;
                let bm = b.bimodule("coring", &r, *dim, labels, left, right)?;
                let delta = b.matrix("coring.delta_lift", delta_lift, dim * dim, *dim)?;
                let eps = b.matrix("coring.counit", counit, r.dim(), *dim)?;
                let c = Coring::new(bm, delta, eps).map_err(|e| invalid("coring", e.to_string()))?;
                (c, Construction::Explicit, None)
            }
        };
        let coring = Arc::new(coring);

        let mut grouplikes = Vec::new();
        for (i, g) in raw.grouplikes.iter().enumerate() {
            grouplikes.push(Candidate {
                name: g.name.clone(),
                vector: b.vector(&format!("grouplikes[{i}].vector"), &g.vector, coring.dim())?,
                semi: g.semi,
            });
        }
        if grouplikes.is_empty() {
            if let Some(g) = default_g {
                grouplikes.push(Candidate {
                    name: "g".into(),
                    vector: g,
                    semi: false,
                });
            }
        }

        let mut modules = Vec::new();
        for (i, m) in raw.modules.iter().enumerate() {
            let path = format!("modules[{i}]");
            let module = b.module(&format!("{path}.module"), &coring, &m.module)?;
            let comodule = match &m.coaction {
                None => None,
                Some(c) => Some(b.comodule(&format!("{path}.coaction"), &coring, &module, &m.module, c, &grouplikes)?),
            };
            modules.push(InstanceModule {
                name: m.name.clone(),
                module,
                comodule,
            });
        }

        let free_basis = match &raw.free_basis {
            None => None,
            Some(vs) => {
                let dr = coring.ring.dim();
                let out = vs
                    .iter()
                    .enumerate()
                    .map(|(i, v)| b.vector(&format!("free_basis[{i}]"), v, dr))
                    .collect::<Result<Vec<_>>>()?;
                Some(out)
            }
        };

        Ok(Instance {
            name: raw.name.clone(),
            description: raw.description.clone(),
            field,
            algebras,
            extension,
            coring,
            construction,
            grouplikes,
            modules,
            free_basis,
        })
    }
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

struct Builder {
    field: Field,
}

impl Builder {
    fn scalar(&self, path: &str, s: &RawScalar) -> Result<Scalar> {
        match s {
            RawScalar::Int(n) => Ok(self.field.from_i64(*n)),
            RawScalar::Text(t) => self.field.parse_scalar(t).map_err(|e| invalid(path, e.to_string())),
        }
    }

    fn vector(&self, path: &str, v: &[RawScalar], len: usize) -> Result<Vector> {
        if v.len() != len {
            return Err(invalid(path, format!("expected {len} entries, got {}", v.len())));
        }
        v.iter()
            .enumerate()
            .map(|(i, s)| self.scalar(&format!("{path}[{i}]"), s))
            .collect()
    }

    fn matrix(&self, path: &str, m: &RawMatrix, rows: usize, cols: usize) -> Result<Matrix> {
        let got_cols = m.first().map_or(cols, Vec::len);
        if m.len() != rows || m.iter().any(|r| r.len() != got_cols) || got_cols != cols {
            let shape = match m.first() {
                Some(r) if m.iter().all(|x| x.len() == r.len()) => format!("{}x{}", m.len(), r.len()),
                Some(_) => "ragged rows".into(),
                None => "no rows".into(),
            };
            return Err(invalid(path, format!("expected {rows}x{cols}, got {shape}")));
        }
        if rows == 0 {
            return Ok(Matrix::zeros(self.field, 0, cols));
        }
        let data = m
            .iter()
            .enumerate()
            .map(|(i, r)| self.vector(&format!("{path}[{i}]"), r, cols))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(self.field, data).map_err(|e| invalid(path, e.to_string()))
    }

    fn matrices(&self, path: &str, ms: &[RawMatrix], count: usize, n: usize) -> Result<Vec<Matrix>> {
        if ms.len() != count {
            return Err(invalid(path, format!("expected {count} action matrices, got {}", ms.len())));
        }
        ms.iter()
            .enumerate()
            .map(|(i, m)| self.matrix(&format!("{path}[{i}]"), m, n, n))
            .collect()
    }

    fn labels(&self, path: &str, labels: &Option<Vec<String>>, dim: usize) -> Result<FinSpace> {
        match labels {
            None => Ok(FinSpace::new(self.field, dim)),
            Some(l) if l.len() == dim => Ok(FinSpace::with_labels(self.field, l.clone())),
            Some(l) => Err(invalid(path, format!("expected {dim} labels, got {}", l.len()))),
        }
    }

    fn algebra(&self, path: &str, a: &RawAlgebra) -> Result<Algebra> {
        let f = self.field;
        match a {
            RawAlgebra::Ground => Ok(Algebra::ground(f)),
            RawAlgebra::UpperTriangular => Ok(Algebra::upper_triangular(f)),
            RawAlgebra::Polynomial { var, low } => {
                if low.is_empty() {
                    return Err(invalid(&format!("{path}.low"), "need at least one coefficient"));
                }
                let low = self.vector(&format!("{path}.low"), low, low.len())?;
                Ok(Algebra::polynomial_quotient(f, var, &low))
            }
            RawAlgebra::Table { labels, mult, unit } => {
                let n = unit.len();
                let space = self.labels(&format!("{path}.labels"), labels, n)?;
                if mult.len() != n {
                    return Err(invalid(&format!("{path}.mult"), format!("expected {n} rows, got {}", mult.len())));
                }
                let mut table = Vec::with_capacity(n);
                for (i, row) in mult.iter().enumerate() {
                    if row.len() != n {
                        return Err(invalid(
                            &format!("{path}.mult[{i}]"),
                            format!("expected {n} products, got {}", row.len()),
                        ));
                    }
                    let row = row
                        .iter()
                        .enumerate()
                        .map(|(j, v)| self.vector(&format!("{path}.mult[{i}][{j}]"), v, n))
                        .collect::<Result<Vec<_>>>()?;
                    table.push(row);
                }
                let unit = self.vector(&format!("{path}.unit"), unit, n)?;
                Algebra::new(f, space.labels, table, unit).map_err(|e| invalid(path, e.to_string()))
            }
        }
    }

    fn coalgebra(&self, path: &str, c: &RawCoalgebra) -> Result<Coalgebra> {
        match c {
            RawCoalgebra::Points { labels } => Ok(Coalgebra::grouplike_points(self.field, labels.clone())),
            RawCoalgebra::Table { labels, delta, counit } => {
                let n = labels.len();
                let delta = self.matrix(&format!("{path}.delta"), delta, n * n, n)?;
                let counit = self.vector(&format!("{path}.counit"), counit, n)?;
                Coalgebra::new(FinSpace::with_labels(self.field, labels.clone()), delta, counit)
                    .map_err(|e| invalid(path, e.to_string()))
            }
        }
    }

    fn bimodule(
        &self,
        path: &str,
        ring: &Arc<Algebra>,
        dim: usize,
        labels: &Option<Vec<String>>,
        left: &[RawMatrix],
        right: &[RawMatrix],
    ) -> Result<Bimodule> {
        let space = self.labels(&format!("{path}.labels"), labels, dim)?;
        let left = self.matrices(&format!("{path}.left"), left, ring.dim(), dim)?;
        let right = self.matrices(&format!("{path}.right"), right, ring.dim(), dim)?;
        Bimodule::new(space, ring.clone(), ring.clone(), left, right).map_err(|e| invalid(path, e.to_string()))
    }

    fn module(&self, path: &str, coring: &Coring, kind: &RawModuleKind) -> Result<Bimodule> {
        let ring = coring.ring.clone();
        match kind {
            RawModuleKind::Regular => Ok(Bimodule::right_regular(ring)),
            RawModuleKind::Free { rank } => Ok(Bimodule::free_right(ring, *rank)),
            RawModuleKind::Coring => Ok(coring.bimodule.clone().forget_left()),
            RawModuleKind::Explicit { dim, right } => {
                let right = self.matrices(&format!("{path}.right"), right, ring.dim(), *dim)?;
                Bimodule::right_module(FinSpace::new(self.field, *dim), ring, right)
                    .map_err(|e| invalid(path, e.to_string()))
            }
        }
    }

    fn comodule(
        &self,
        path: &str,
        coring: &Arc<Coring>,
        module: &Bimodule,
        kind: &RawModuleKind,
        coaction: &RawCoaction,
        grouplikes: &[Candidate],
    ) -> Result<Comodule> {
        let wrap = |e: Error| invalid(path, e.to_string());
        match coaction {
            RawCoaction::Named(n) if n == "coproduct" => match kind {
                RawModuleKind::Coring => Comodule::coring_itself(coring.clone()).map_err(wrap),
                _ => Err(invalid(path, "the coproduct coaction needs the module `coring`")),
            },
            RawCoaction::Named(n) if n == "grouplike" => {
                let g = grouplikes
                    .first()
                    .ok_or_else(|| invalid(path, "no grouplike element declared"))?;
                let rank = match kind {
                    RawModuleKind::Regular => 1,
                    RawModuleKind::Free { rank } => *rank,
                    _ => return Err(invalid(path, "the grouplike coaction needs a free module")),
                };
                let lift = free_coaction_lift(coring, rank, &g.vector);
                Comodule::from_lift(coring.clone(), module.clone(), &lift).map_err(wrap)
            }
            RawCoaction::Named(n) => Err(invalid(path, format!("unknown coaction {n:?}"))),
            RawCoaction::Lift { lift } => {
                let (dm, dc) = (module.dim(), coring.dim());
                let lift = self.matrix(&format!("{path}.lift"), lift, dm * dc, dm)?;
                Comodule::from_lift(coring.clone(), module.clone(), &lift).map_err(wrap)
            }
        }
    }
}

/// `e_i r ↦ e_i ⊗ g r` on `R^n`, lifted to `R^n ⊗_k C`.
fn free_coaction_lift(coring: &Coring, rank: usize, g: &[Scalar]) -> Matrix {
    let ring = &coring.ring;
    let f = ring.field();
    let dr = ring.dim();
    let dm = rank * dr;
    Matrix::build_columns(f, dm * coring.dim(), dm, |x| {
        let (i, r) = (x / dr, x % dr);
        let mut e = zeros(f, dm);
        for (k, s) in ring.unit().iter().enumerate() {
            e[i * dr + k] = s.clone();
        }
        kron_vec(&e, &coring.right(g, &unit_vector(f, dr, r)))
    })
}
