use std::sync::Arc;

use serde::Serialize;

use super::build::{Construction, Instance, InstanceModule};
use crate::algebra::is_projective;
use crate::amitsur::{
    acyclicity, check_restriction, coaction_from_grouplike, reconstruct, theta_iso, Acyclicity, AmitsurComplex,
    CohomologySummary, EntwinedForms,
};
use crate::connections::{
    connection_exists, cuntz_quillen_check, entwining_flat_connection_ac, entwining_flat_connection_ca,
    flat_round_trip,
};
use crate::coring::{
    augmentation, classify, decomposition_maps, dual_ring, endomorphism_map, grouplike_ring_structure, hom_coinv_iso,
    verify_coinv_c_iso, format_vec, Grouplike, GrouplikeKind,
};
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::report::{Check, Report};

/// Degrees `0..=3` unless overridden.
pub const DEFAULT_MAX_DEGREE: usize = 3;

fn absorb(into: &mut Report, prefix: &str, from: Report) {
    for mut c in from.checks {
        c.name = format!("{prefix}: {}", c.name);
        into.push(c);
    }
}

/// Structure checks: algebras, extension, coring, grouplikes, modules and
/// comodules.
pub fn validate(inst: &Instance) -> Result<Report> {
    let mut report = Report::new(format!("validate {}", inst.name));
    for (name, a) in &inst.algebras {
        absorb(&mut report, &format!("algebra {name}"), a.check_axioms());
    }
    if let Some(e) = &inst.extension {
        absorb(&mut report, "extension", e.check());
    }
    match &inst.construction {
        Construction::Entwining(d) => absorb(&mut report, "coalgebra", d.coalgebra.check()),
        Construction::FromDg(d) => absorb(&mut report, "dg data", d.check()?),
        _ => {}
    }
    let c = &inst.coring;
    absorb(&mut report, "coring bimodule", c.bimodule.check());
    absorb(&mut report, "coring", c.check_axioms());
    for g in &inst.grouplikes {
        let (kind, rep) = classify(c, &g.vector);
        let wanted: &[&str] = if g.semi {
            &["coproduct", "counit idempotent", "counit commutes with g"]
        } else {
            &["coproduct", "counit", "nonzero"]
        };
        let picked = Report {
            title: rep.title,
            checks: rep.checks.into_iter().filter(|c| wanted.contains(&c.name.as_str())).collect(),
        };
        absorb(&mut report, &format!("grouplike {}", g.name), picked);
        let ok = if g.semi {
            !matches!(kind, GrouplikeKind::Neither)
        } else {
            matches!(kind, GrouplikeKind::Grouplike)
        };
        let label = if g.semi { "semi-grouplike" } else { "grouplike" };
        let found = match kind {
            GrouplikeKind::Grouplike => "grouplike".to_string(),
            GrouplikeKind::SemiGrouplike { u } => format!("semi-grouplike with ε(g) = {}", format_vec(&u)),
            GrouplikeKind::Neither => "neither grouplike nor semi-grouplike".to_string(),
        };
        report.push(Check::from_bool(format!("grouplike {}: is {label}", g.name), ok, found));
    }
    for m in &inst.modules {
        absorb(&mut report, &format!("module {}", m.name), m.module.check());
        if let Some(cm) = &m.comodule {
            absorb(&mut report, &format!("comodule {}", m.name), cm.check());
        }
    }
    Ok(report)
}

fn grouplike(inst: &Instance) -> Result<(String, Grouplike)> {
    let g = inst.distinguished()?;
    Ok((g.name.clone(), g.grouplike()))
}

fn strict_grouplike(inst: &Instance) -> Result<(String, Grouplike)> {
    let (name, g) = grouplike(inst)?;
    if g.semi {
        return Err(Error::Precondition(format!("{name} is only semi-grouplike")));
    }
    Ok((name.clone(), Grouplike::new(&inst.coring, g.g).map_err(|e| Error::Precondition(e.to_string()))?))
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyOutput {
    pub grouplike: String,
    pub semi: bool,
    pub reduced: bool,
    pub max_degree: usize,
    pub cohomology: CohomologySummary,
    pub d_squared: Check,
}

impl CohomologyOutput {
    pub fn passed(&self) -> bool {
        self.d_squared.passed
    }
}

fn d_squared(cx: &AmitsurComplex) -> Check {
    let mut c = Check::pass("d² = 0");
    for n in 0..cx.n_max.saturating_sub(1) {
        let dd = cx.d[n + 1].mul(&cx.d[n]);
        c.compare(&[n], &dd, &Matrix::zeros(cx.field(), dd.rows(), dd.cols()));
    }
    c
}

/// Cohomology of `Ω(C)` (or `Ω(C/S)` when `reduced`) in degrees `0..=max_degree`.
pub fn cohomology(inst: &Instance, max_degree: usize, reduced: bool) -> Result<CohomologyOutput> {
    let (name, g) = if reduced { strict_grouplike(inst)? } else { grouplike(inst)? };
    let cx = AmitsurComplex::new(inst.coring.clone(), &g, max_degree + 1, reduced)?;
    Ok(CohomologyOutput {
        grouplike: name,
        semi: g.semi,
        reduced,
        max_degree,
        d_squared: d_squared(&cx),
        cohomology: cx.cohomology(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisOutput {
    pub grouplike: String,
    #[serde(flatten)]
    pub acyclicity: Acyclicity,
}

impl GaloisOutput {
    /// A Galois coring with a certified free basis must be acyclic with a
    /// verified homotopy; anything else is a verdict, not a failure.
    pub fn passed(&self) -> bool {
        let a = &self.acyclicity;
        if !a.galois || a.free_basis_certified != Some(true) {
            return true;
        }
        a.homotopy_verified == Some(true) && a.star_identity == Some(true) && a.acyclic == Some(true)
    }
}

pub fn galois(inst: &Instance, max_degree: usize) -> Result<GaloisOutput> {
    let (name, g) = strict_grouplike(inst)?;
    let cx = AmitsurComplex::new(inst.coring.clone(), &g, max_degree + 1, false)?;
    Ok(GaloisOutput {
        grouplike: name,
        acyclicity: acyclicity(&cx, inst.free_basis.as_deref())?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleConnections {
    pub module: String,
    pub exists: bool,
    pub projective: bool,
    /// Present for the Sweedler coring of `k → A`, where a connection
    /// exists exactly when the module is projective.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cq_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cq_action: Option<Check>,
    /// Present for comodules: `∇_ρ` is flat and the round trip is exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat_if_from_coaction: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round_trip: Option<Report>,
}

impl ModuleConnections {
    pub fn passed(&self) -> bool {
        self.cq_agree != Some(false)
            && self.cq_action.as_ref().is_none_or(|c| c.passed)
            && self.flat_if_from_coaction != Some(false)
    }
}

fn ground_sweedler(inst: &Instance) -> bool {
    matches!(&inst.construction, Construction::Sweedler(ext) if ext.source.dim() == 1)
}

fn module_connections(inst: &Instance, cx: &Arc<AmitsurComplex>, m: &InstanceModule) -> Result<ModuleConnections> {
    let (exists, projective, cq_agree, cq_action) = if ground_sweedler(inst) {
        let cq = cuntz_quillen_check(cx, &m.module)?;
        (cq.has_connection(), cq.projective, Some(cq.agree()), Some(cq.action))
    } else {
        let exists = connection_exists(cx, &m.module)?.is_some();
        (exists, is_projective(&m.module).projective, None, None)
    };
    let round_trip = match &m.comodule {
        Some(cm) => Some(flat_round_trip(cx, cm)?.1),
        None => None,
    };
    Ok(ModuleConnections {
        module: m.name.clone(),
        exists,
        projective,
        cq_agree,
        cq_action,
        flat_if_from_coaction: round_trip.as_ref().map(Report::passed),
        round_trip,
    })
}

/// The reduced complex up to `Ω²` for the distinguished grouplike.
pub fn connection_complex(inst: &Instance) -> Result<Arc<AmitsurComplex>> {
    let (_, g) = strict_grouplike(inst)?;
    Ok(Arc::new(AmitsurComplex::new(inst.coring.clone(), &g, 2, true)?))
}

/// Connection existence, projectivity and the comodule round trip for one
/// module or all of them.
pub fn connections(inst: &Instance, module: Option<&str>) -> Result<Vec<ModuleConnections>> {
    let cx = connection_complex(inst)?;
    match module {
        Some(name) => Ok(vec![module_connections(inst, &cx, inst.module(name)?)?]),
        None => inst.modules.iter().map(|m| module_connections(inst, &cx, m)).collect(),
    }
}

/// Dual ring, augmentation, coinvariants of `C`, the grouplike ring
/// structure, the splittings of `C` and `Hom(R, M) ≅ M^{co C}` for every
/// comodule.
pub fn structure(inst: &Instance) -> Result<Report> {
    let (_, g) = strict_grouplike(inst)?;
    let c = &inst.coring;
    let mut report = Report::new("structure");
    let dual = dual_ring(c)?;
    absorb(&mut report, "dual ring", dual.report.clone());
    absorb(&mut report, "augmentation", augmentation(c, &dual, &g.g)?.report);
    if matches!(inst.construction, Construction::Sweedler(_)) {
        absorb(&mut report, "End_S(R)", endomorphism_map(c, &dual, &g)?.report);
    }
    absorb(&mut report, "R ≅ C^co", verify_coinv_c_iso(c, &g)?.report);
    absorb(&mut report, "grouplike ring", grouplike_ring_structure(c, &g)?.report);
    absorb(&mut report, "splittings", decomposition_maps(c, &g)?.report);
    for m in &inst.modules {
        if let Some(cm) = &m.comodule {
            absorb(&mut report, &format!("Hom(R, {}) ≅ coinvariants", m.name), hom_coinv_iso(c, &g, cm)?.report);
        }
    }
    Ok(report)
}

/// Checks specific to the construction: `θ` for Sweedler corings, the `ψ`
/// formulas and flat connections for entwinings, the round trip through
/// first-order forms for corings built from forms.
pub fn construction_checks(inst: &Instance, max_degree: usize) -> Result<Report> {
    let (_, g) = strict_grouplike(inst)?;
    let c = &inst.coring;
    let mut report = Report::new(inst.construction.kind());
    let n_max = max_degree.max(1);
    let full = AmitsurComplex::new(c.clone(), &g, n_max, false)?;
    let reduced = AmitsurComplex::new(c.clone(), &g, n_max, true)?;
    absorb(&mut report, "Ω(C/S)", check_restriction(&reduced, &full));
    match &inst.construction {
        Construction::Sweedler(ext) => absorb(&mut report, "θ", theta_iso(ext, n_max, 0)?.report),
        Construction::Entwining(data) => {
            let rho = coaction_from_grouplike(c, &g)?;
            let forms = EntwinedForms::new(data.clone(), c.clone(), rho.clone(), n_max)?;
            absorb(&mut report, "ψ formulas", forms.check());
            absorb(&mut report, "A ⊗ C", entwining_flat_connection_ac(data, c, &rho, 1)?.report);
            absorb(&mut report, "C ⊗ A", entwining_flat_connection_ca(data, c, &rho, 1)?.report);
        }
        Construction::FromDg(_) => absorb(&mut report, "forms round trip", reconstruct(c, &g)?.1),
        Construction::Trivial | Construction::Explicit => {}
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub section: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullReport {
    pub name: String,
    pub field: String,
    pub construction: &'static str,
    pub ring_dim: usize,
    pub coring_dim: usize,
    pub max_degree: usize,
    pub validation: Report,
    pub cohomology: Vec<CohomologyOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub galois: Option<GaloisOutput>,
    pub connections: Vec<ModuleConnections>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction_checks: Option<Report>,
    pub skipped: Vec<Skipped>,
}

impl FullReport {
    pub fn passed(&self) -> bool {
        self.validation.passed()
            && self.cohomology.iter().all(CohomologyOutput::passed)
            && self.galois.as_ref().is_none_or(GaloisOutput::passed)
            && self.connections.iter().all(ModuleConnections::passed)
            && self.structure.as_ref().is_none_or(Report::passed)
            && self.construction_checks.as_ref().is_none_or(Report::passed)
    }
}

/// Runs every check that applies; sections whose preconditions fail are
/// listed as skipped.
pub fn full_report(inst: &Instance, max_degree: usize) -> Result<FullReport> {
    let mut out = FullReport {
        name: inst.name.clone(),
        field: inst.field.to_string(),
        construction: inst.construction.kind(),
        ring_dim: inst.coring.ring.dim(),
        coring_dim: inst.coring.dim(),
        max_degree,
        validation: validate(inst)?,
        cohomology: Vec::new(),
        galois: None,
        connections: Vec::new(),
        structure: None,
        construction_checks: None,
        skipped: Vec::new(),
    };
    if !out.validation.passed() {
        out.skipped.push(Skipped {
            section: "all".into(),
            reason: "validation failed".into(),
        });
        return Ok(out);
    }
    fn record<T>(skipped: &mut Vec<Skipped>, section: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e @ (Error::Precondition(_) | Error::NotGalois | Error::DegreeOverflow { .. })) => {
                skipped.push(Skipped {
                    section: section.into(),
                    reason: e.to_string(),
                });
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
    let sk = &mut out.skipped;
    if let Some(c) = record(sk, "cohomology", cohomology(inst, max_degree, false))? {
        out.cohomology.push(c);
    }
    if let Some(c) = record(sk, "reduced cohomology", cohomology(inst, max_degree, true))? {
        out.cohomology.push(c);
    }
    out.galois = record(sk, "galois", galois(inst, max_degree))?;
    out.connections = record(sk, "connections", connections(inst, None))?.unwrap_or_default();
    out.structure = record(sk, "structure", structure(inst))?;
    out.construction_checks = record(sk, "construction", construction_checks(inst, max_degree))?;
    Ok(out)
}
