use coring_core::coring::format_vec;
use coring_core::instance::{CohomologyOutput, GaloisOutput, ModuleConnections};
use coring_core::report::{Check, Report};

/// Terminal width from `COLUMNS`, defaulting to 80.
pub fn width() -> usize {
    std::env::var("COLUMNS")
        .ok()
        .and_then(|c| c.trim().parse().ok())
        .filter(|&w: &usize| w >= 20)
        .unwrap_or(80)
}

fn fit(line: &str, width: usize) -> String {
    if line.chars().count() <= width {
        return line.to_string();
    }
    let mut s: String = line.chars().take(width - 1).collect();
    s.push('…');
    s
}

fn push(out: &mut String, line: &str, width: usize) {
    out.push_str(&fit(line, width));
    out.push('\n');
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn opt(b: Option<bool>) -> String {
    b.map_or("-".into(), |b| b.to_string())
}

fn check_lines(out: &mut String, c: &Check, width: usize) {
    let status = if c.passed { "PASS" } else { "FAIL" };
    push(out, &format!("  {status}  {}", c.name), width);
    if c.passed {
        return;
    }
    if let Some(d) = &c.detail {
        push(out, &format!("        {d}"), width);
    }
    for w in &c.witnesses {
        push(out, &format!("        at {:?}: defect {}", w.basis, format_vec(&w.defect)), width);
    }
    if !c.witnesses.is_empty() && c.failures > c.witnesses.len() {
        push(out, &format!("        ({} failures in total)", c.failures), width);
    }
}

pub fn report(r: &Report, width: usize) -> String {
    let mut out = String::new();
    push(&mut out, &r.title, width);
    for c in &r.checks {
        check_lines(&mut out, c, width);
    }
    let failed = r.failing().count();
    push(
        &mut out,
        &format!("{} of {} checks pass: {}", r.checks.len() - failed, r.checks.len(), verdict(r.passed())),
        width,
    );
    out
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>], width: usize) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    push(out, &line(header.iter().map(|h| h.to_string()).collect()), width);
    for r in rows {
        push(out, &line(r.clone()), width);
    }
}

pub fn cohomology(c: &CohomologyOutput, width: usize) -> String {
    let mut out = String::new();
    let complex = if c.reduced { "Ω(C/S)" } else { "Ω(C)" };
    let kind = if c.semi { "semi-grouplike" } else { "grouplike" };
    push(
        &mut out,
        &format!("cohomology of {complex} for {kind} {}, degrees 0..={}", c.grouplike, c.max_degree),
        width,
    );
    let rows: Vec<Vec<String>> = c
        .cohomology
        .degrees
        .iter()
        .map(|d| vec![d.degree.to_string(), d.dim.to_string(), d.rank_d.to_string(), d.h.to_string()])
        .collect();
    table(&mut out, &["n", "dim Ω^n", "rank d^n", "dim H^n"], &rows, width);
    push(&mut out, &format!("H = {:?}", c.cohomology.h()), width);
    check_lines(&mut out, &c.d_squared, width);
    out
}

pub fn galois(g: &GaloisOutput, width: usize) -> String {
    let a = &g.acyclicity;
    let mut out = String::new();
    push(&mut out, &format!("grouplike: {}", g.grouplike), width);
    let rows = vec![
        vec!["galois".to_string(), a.galois.to_string()],
        vec!["free basis certified".into(), opt(a.free_basis_certified)],
        vec!["homotopy verified".into(), opt(a.homotopy_verified)],
        vec!["star identity".into(), opt(a.star_identity)],
        vec!["dim S".into(), a.dim_s.to_string()],
        vec!["H".into(), format!("{:?}", a.cohomology.h())],
        vec!["acyclic".into(), opt(a.acyclic)],
    ];
    table(&mut out, &["property", "value"], &rows, width);
    push(&mut out, &format!("result: {}", verdict(g.passed())), width);
    out
}

pub fn connections(ms: &[ModuleConnections], width: usize) -> String {
    let mut out = String::new();
    let rows: Vec<Vec<String>> = ms
        .iter()
        .map(|m| {
            vec![
                m.module.clone(),
                m.exists.to_string(),
                m.projective.to_string(),
                opt(m.cq_agree),
                opt(m.flat_if_from_coaction),
            ]
        })
        .collect();
    table(
        &mut out,
        &["module", "exists", "projective", "cq_agree", "flat_if_from_coaction"],
        &rows,
        width,
    );
    for m in ms {
        if let Some(c) = &m.cq_action {
            if !c.passed {
                check_lines(&mut out, c, width);
            }
        }
        if let Some(r) = &m.round_trip {
            for c in r.failing() {
                check_lines(&mut out, c, width);
            }
        }
    }
    push(
        &mut out,
        &format!("result: {}", verdict(ms.iter().all(ModuleConnections::passed))),
        width,
    );
    out
}
