use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::{sign, AmitsurComplex};
use crate::algebra::{Algebra, AlgebraMap, Bimodule, TensorChain};
use crate::coring::{Coring, Grouplike};
use crate::error::{Error, Result};
use crate::exactla::{axpy, is_zero_vec, sub_vec, unit_vector, zeros, Field, Matrix, QuotientSpace, Scalar, Vector};
use crate::par;
use crate::report::{Check, Report};

/// The `S`-relative differential forms `Ω^n_S R = R ⊗_S (R/S)^{⊗_S n}` with
/// `d(r₀ ⊗ q̄) = 1 ⊗ π(r₀) ⊗ q̄` and the product computed through a section
/// `σ` of `π: R → R/S`.
#[derive(Clone, Debug)]
pub struct UniversalForms {
    pub ext: AlgebraMap,
    pub n_max: usize,
    /// `R/S` as an `(S, S)`-bimodule.
    pub quotient_module: Bimodule,
    pub quotient: QuotientSpace,
    /// `σ(e_q)` for each basis vector of `R/S`.
    pub section: Vec<Vector>,
    /// `[R, R/S, …, R/S]`; `Ω^n_S R` is level `n`.
    pub chain: TensorChain,
    pub d: Vec<Matrix>,
}

impl UniversalForms {
    pub fn new(ext: &AlgebraMap, n_max: usize) -> Result<UniversalForms> {
        let ring = ext.target.clone();
        let reg = Bimodule::regular(ring.clone());
        let r_ss = reg.restrict_left(ext)?.restrict_right(ext)?;
        let image: Vec<Vector> = (0..ext.source.dim()).map(|i| ext.matrix.column(i)).collect();
        let (quotient_module, quotient) = r_ss.quotient(&image)?;
        let section = (0..quotient_module.dim())
            .map(|q| quotient.lift(&unit_vector(ring.field(), quotient_module.dim(), q)))
            .collect();
        let mut factors = vec![reg.restrict_right(ext)?];
        factors.extend(std::iter::repeat_n(quotient_module.clone(), n_max));
        let chain = TensorChain::new(factors)?;
        let mut forms = UniversalForms {
            ext: ext.clone(),
            n_max,
            quotient_module,
            quotient,
            section,
            chain,
            d: Vec::new(),
        };
        forms.d = (0..n_max)
            .map(|n| forms.chain.map_from_lifts(n, forms.chain.dim(n + 1), |t| forms.d_formula(t)))
            .collect();
        Ok(forms)
    }

    pub fn ring(&self) -> &Arc<Algebra> {
        &self.ext.target
    }

    pub fn field(&self) -> Field {
        self.ring().field()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.chain.dim(n)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.n_max).map(|n| self.dim(n)).collect()
    }

    pub fn basis(&self, n: usize, i: usize) -> Vector {
        unit_vector(self.field(), self.dim(n), i)
    }

    fn pi(&self, r: &[Scalar]) -> Vector {
        self.quotient.project(r)
    }

    fn d_formula(&self, t: &[usize]) -> Vector {
        let ring = self.ring();
        let f = self.field();
        let q = self.pi(&ring.basis(t[0]));
        let units: Vec<Vector> = t[1..].iter().map(|&i| unit_vector(f, self.quotient_module.dim(), i)).collect();
        let mut parts: Vec<&[Scalar]> = vec![ring.unit(), &q];
        parts.extend(units.iter().map(Vec::as_slice));
        self.chain.embed_vectors(&parts)
    }

    /// `(r₀, …, r_n)(r_{n+1}, …, r_m) = Σ_{i=0}^{n} (−1)^{n−i} (r₀, …, r_i r_{i+1}, …, r_m)`
    /// for a pure tensor of basis indices, each entry of `R/S` replaced by its image under `section`.
    fn product_formula(&self, section: &[Vector], x: &[usize], y: &[usize]) -> Vector {
        let ring = self.ring();
        let f = self.field();
        let n = x.len() - 1;
        let mut entries: Vec<Vector> = Vec::with_capacity(x.len() + y.len());
        entries.push(ring.basis(x[0]));
        entries.extend(x[1..].iter().map(|&q| section[q].clone()));
        entries.push(ring.basis(y[0]));
        entries.extend(y[1..].iter().map(|&q| section[q].clone()));
        let level = entries.len() - 2;
        let mut out = zeros(f, self.dim(level));
        for i in 0..=n {
            let mut merged: Vec<Vector> = entries[..i].to_vec();
            merged.push(ring.mul(&entries[i], &entries[i + 1]));
            merged.extend(entries[i + 2..].iter().cloned());
            let projected: Vec<Vector> = merged[1..].iter().map(|r| self.pi(r)).collect();
            let mut parts: Vec<&[Scalar]> = vec![&merged[0]];
            parts.extend(projected.iter().map(Vec::as_slice));
            axpy(&mut out, &sign(f, n - i), &self.chain.embed_vectors(&parts));
        }
        out
    }

    fn product_with(&self, section: &[Vector], m: usize, x: &[Scalar], n: usize, y: &[Scalar]) -> Result<Vector> {
        if m + n > self.n_max {
            return Err(Error::DegreeOverflow { degree: m + n, max: self.n_max });
        }
        let mut out = zeros(self.field(), self.dim(m + n));
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let v = self.product_formula(section, self.chain.lift(m, i), self.chain.lift(n, j));
                axpy(&mut out, &(a * b), &v);
            }
        }
        Ok(out)
    }

    pub fn product(&self, m: usize, x: &[Scalar], n: usize, y: &[Scalar]) -> Result<Vector> {
        self.product_with(&self.section, m, x, n, y)
    }

    /// `σ + s` for a section perturbed by pseudo-random elements of `S`.
    pub fn perturbed_section(&self, seed: u64) -> Vec<Vector> {
        let f = self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = match f {
            Field::Prime(p) => p.min(1 << 20) as i64,
            Field::Rational => 7,
        };
        self.section
            .iter()
            .map(|s| {
                let mut v = s.clone();
                for b in 0..self.ext.source.dim() {
                    let c = f.from_i64(rng.gen_range(-bound..=bound));
                    axpy(&mut v, &c, &self.ext.matrix.column(b));
                }
                v
            })
            .collect()
    }

    /// `d ∘ d = 0`, well-definedness of `d` and of the product, graded
    /// Leibniz, associativity, independence of the section and `d(S) = 0`.
    pub fn check_dg_axioms(&self, seed: u64) -> Report {
        let f = self.field();
        let mut report = Report::new("Ω_S R");
        let mut wd = Check::pass("d well defined");
        for n in 0..self.n_max {
            for w in self.chain.check_descends("d", n, &self.d[n], |t| self.d_formula(t)).witnesses {
                let mut b = vec![n];
                b.extend(w.basis);
                wd.record(b, w.defect);
            }
        }
        report.push(wd);

        let mut dd = Check::pass("d ∘ d = 0");
        for n in 0..self.n_max.saturating_sub(1) {
            let z = self.d[n + 1].mul(&self.d[n]);
            dd.compare(&[n], &z, &Matrix::zeros(f, z.rows(), z.cols()));
        }
        report.push(dd);

        let pairs = self.degree_pairs();
        let mut pwd = Check::pass("product well defined");
        for &(m, n) in &pairs {
            for j in 0..self.dim(n) {
                let y = self.chain.lift(n, j).to_vec();
                let mat = self.chain.map_from_lifts(m, self.dim(m + n), |t| self.product_formula(&self.section, t, &y));
                let c = self
                    .chain
                    .check_descends("product", m, &mat, |t| self.product_formula(&self.section, t, &y));
                for w in c.witnesses {
                    let mut b = vec![m, n, j];
                    b.extend(w.basis);
                    pwd.record(b, w.defect);
                }
            }
        }
        report.push(pwd);

        let other = self.perturbed_section(seed);
        let mut indep = Check::pass("product independent of the section");
        let mut leibniz = Check::pass("graded Leibniz rule");
        for &(m, n) in &pairs {
            let bad = par::map_range(self.dim(m) * self.dim(n), |p| {
                let (i, j) = (p / self.dim(n), p % self.dim(n));
                let (x, y) = (self.basis(m, i), self.basis(n, j));
                let xy = self.product(m, &x, n, &y).unwrap();
                let alt = self.product_with(&other, m, &x, n, &y).unwrap();
                let mut out = Vec::new();
                let def = sub_vec(&xy, &alt);
                if !is_zero_vec(&def) {
                    out.push((0, vec![m, n, i, j], def));
                }
                if m + n < self.n_max {
                    let lhs = self.d[m + n].apply(&xy);
                    let a = self.product(m + 1, &self.d[m].apply(&x), n, &y).unwrap();
                    let b = self.product(m, &x, n + 1, &self.d[n].apply(&y)).unwrap();
                    let rhs: Vector = a.iter().zip(&b).map(|(u, v)| u + &(&sign(f, m) * v)).collect();
                    let def = sub_vec(&lhs, &rhs);
                    if !is_zero_vec(&def) {
                        out.push((1, vec![m, n, i, j], def));
                    }
                }
                out
            });
            for (kind, b, d) in bad.into_iter().flatten() {
                if kind == 0 {
                    indep.record(b, d);
                } else {
                    leibniz.record(b, d);
                }
            }
        }
        report.push(indep);
        report.push(leibniz);

        let mut assoc = Check::pass("associative product");
        for a in 0..=self.n_max {
            for b in 0..=self.n_max - a {
                for c in 0..=self.n_max - a - b {
                    let (da, db, dc) = (self.dim(a), self.dim(b), self.dim(c));
                    let bad = par::map_range(da * db * dc, |p| {
                        let (i, j, k) = (p / (db * dc), (p / dc) % db, p % dc);
                        let (x, y, z) = (self.basis(a, i), self.basis(b, j), self.basis(c, k));
                        let l = self.product(a + b, &self.product(a, &x, b, &y).unwrap(), c, &z).unwrap();
                        let r = self.product(a, &x, b + c, &self.product(b, &y, c, &z).unwrap()).unwrap();
                        let d = sub_vec(&l, &r);
                        (!is_zero_vec(&d)).then_some((vec![a, b, c, i, j, k], d))
                    });
                    for (b, d) in bad.into_iter().flatten() {
                        assoc.record(b, d);
                    }
                }
            }
        }
        report.push(assoc);

        let mut unit = Check::pass("1 is a two-sided unit");
        let one = self.ring().unit().clone();
        for n in 0..=self.n_max {
            for i in 0..self.dim(n) {
                let x = self.basis(n, i);
                for v in [self.product(0, &one, n, &x).unwrap(), self.product(n, &x, 0, &one).unwrap()] {
                    let d = sub_vec(&v, &x);
                    if !is_zero_vec(&d) {
                        unit.record(vec![n, i], d);
                    }
                }
            }
        }
        report.push(unit);

        if self.n_max > 0 {
            let mut rel = Check::pass("d(S) = 0");
            for i in 0..self.ext.source.dim() {
                let ds = self.d[0].apply(&self.ext.matrix.column(i));
                if !is_zero_vec(&ds) {
                    rel.record(vec![i], ds);
                }
            }
            report.push(rel);
        }
        report
    }

    fn degree_pairs(&self) -> Vec<(usize, usize)> {
        (0..=self.n_max)
            .flat_map(|m| (0..=self.n_max - m).map(move |n| (m, n)))
            .collect()
    }
}

/// The isomorphism `θ: Ω(C/S) → Ω_S R` for the Sweedler coring, given
/// through `θ⁻¹(r₀ ⊗ π(r₁) ⊗ … ⊗ π(r_n)) = r₀ d(r₁) ⋯ d(r_n)`.
#[derive(Clone, Debug)]
pub struct ThetaIso {
    pub forms: UniversalForms,
    pub reduced: AmitsurComplex,
    /// `theta_inv[n]: Ω^n_S R → Ω^n(C/S)`
    pub theta_inv: Vec<Matrix>,
    /// `theta[n]`, present when `theta_inv[n]` is invertible.
    pub theta: Vec<Option<Matrix>>,
    pub report: Report,
}

impl ThetaIso {
    pub fn bijective(&self) -> bool {
        self.theta.iter().all(Option::is_some)
    }
}

pub fn theta_iso(ext: &AlgebraMap, n_max: usize, seed: u64) -> Result<ThetaIso> {
    let (coring, g) = Coring::sweedler(ext)?;
    let coring = Arc::new(coring);
    let g = Grouplike::new(&coring, g)?;
    let reduced = AmitsurComplex::new(coring.clone(), &g, n_max, true)?;
    let forms = UniversalForms::new(ext, n_max)?;
    let ring = forms.ring().clone();
    let f = forms.field();
    let mut report = Report::new("θ: Ω(C/S) ≅ Ω_S R");
    report.extend(forms.check_dg_axioms(seed));

    let d_section: Vec<Vector> = forms.section.iter().map(|s| reduced.d[0].apply(s)).collect();
    let formula = |t: &[usize]| -> Vector {
        let mut acc = ring.basis(t[0]);
        for (k, &q) in t[1..].iter().enumerate() {
            acc = reduced.product(k, &acc, 1, &d_section[q]).unwrap();
        }
        acc
    };
    let theta_inv: Vec<Matrix> = (0..=n_max)
        .map(|n| forms.chain.map_from_lifts(n, reduced.dim(n), formula))
        .collect();

    // θ⁻¹ is a formula on representatives; it must not depend on them.
    let mut wd = Check::pass("θ⁻¹ well defined");
    for (n, m) in theta_inv.iter().enumerate().skip(1) {
        for w in forms.chain.check_descends("θ⁻¹", n, m, |t| {
            let mut acc = ring.basis(t[0]);
            for (k, &q) in t[1..].iter().enumerate() {
                let r = forms.quotient.lift(&unit_vector(f, forms.quotient_module.dim(), q));
                acc = reduced.product(k, &acc, 1, &reduced.d[0].apply(&r)).unwrap();
            }
            acc
        })
        .witnesses
        {
            let mut b = vec![n];
            b.extend(w.basis);
            wd.record(b, w.defect);
        }
    }
    report.push(wd);

    let theta: Vec<Option<Matrix>> = theta_inv.iter().map(Matrix::inverse).collect();
    let mut bij = Check::pass("θ bijective in each degree");
    for (n, t) in theta.iter().enumerate() {
        if t.is_none() {
            bij.record(vec![n], Vec::new());
        }
    }
    report.push(bij.with_detail(format!("dims Ω(C/S) {:?}, Ω_S R {:?}", reduced.dims(), forms.dims())));

    if n_max > 0 {
        let pair = TensorChain::new(vec![
            Bimodule::regular(ring.clone()).restrict_right(ext)?,
            Bimodule::regular(ring.clone()).restrict_left(ext)?,
        ])?;
        let mut deg1 = Check::pass("θ⁻¹(r ⊗ π(r')) = r ⊗ r' − rr' ⊗ 1");
        for j in 0..forms.dim(1) {
            let t = forms.chain.lift(1, j);
            let (r, r1) = (ring.basis(t[0]), forms.section[t[1]].clone());
            let expected = sub_vec(
                &pair.embed_vectors(&[&r, &r1]),
                &pair.embed_vectors(&[&ring.mul(&r, &r1), ring.unit()]),
            );
            let got = reduced.inclusion.apply(&theta_inv[1].column(j));
            let d = sub_vec(&got, &expected);
            if !is_zero_vec(&d) {
                deg1.record(vec![j], d);
            }
        }
        report.push(deg1);
    }

    let mut with_d = Check::pass("θ⁻¹ d = d θ⁻¹");
    for n in 0..n_max {
        with_d.compare(&[n], &theta_inv[n + 1].mul(&forms.d[n]), &reduced.d[n].mul(&theta_inv[n]));
    }
    report.push(with_d);

    let mut with_product = Check::pass("θ⁻¹(xy) = θ⁻¹(x) θ⁻¹(y)");
    for (m, n) in forms.degree_pairs() {
        let bad = par::map_range(forms.dim(m) * forms.dim(n), |p| {
            let (i, j) = (p / forms.dim(n), p % forms.dim(n));
            let (x, y) = (forms.basis(m, i), forms.basis(n, j));
            let lhs = theta_inv[m + n].apply(&forms.product(m, &x, n, &y).unwrap());
            let rhs = reduced
                .product(m, &theta_inv[m].apply(&x), n, &theta_inv[n].apply(&y))
                .unwrap();
            let d = sub_vec(&lhs, &rhs);
            (!is_zero_vec(&d)).then_some((vec![m, n, i, j], d))
        });
        for (b, d) in bad.into_iter().flatten() {
            with_product.record(b, d);
        }
    }
    report.push(with_product);

    Ok(ThetaIso {
        forms,
        reduced,
        theta_inv,
        theta,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_of_f4_and_dual_numbers() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Arc::new(Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()]));
        let forms = UniversalForms::new(&AlgebraMap::from_ground(f4.clone()), 3).unwrap();
        assert_eq!(forms.dims(), vec![2, 2, 2, 2]);
        assert!(is_zero_vec(&forms.d[0].apply(f4.unit())));
        let rep = forms.check_dg_axioms(7);
        assert!(rep.passed(), "{:?}", rep.failing().collect::<Vec<_>>());

        let q = Field::Rational;
        let a = Arc::new(Algebra::polynomial_quotient(q, "x", &[q.zero(), q.zero()]));
        let forms = UniversalForms::new(&AlgebraMap::from_ground(a), 2).unwrap();
        assert_eq!(forms.dim(1), 2);
        assert!(forms.check_dg_axioms(11).passed());
    }

    #[test]
    fn theta_is_a_dg_isomorphism() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Arc::new(Algebra::polynomial_quotient(f2, "t", &[f2.one(), f2.one()]));
        let th = theta_iso(&AlgebraMap::from_ground(f4), 3, 1).unwrap();
        assert!(th.report.passed(), "{:?}", th.report.failing().collect::<Vec<_>>());
        assert!(th.bijective());

        let q = Field::Rational;
        let a = Arc::new(Algebra::polynomial_quotient(q, "x", &[q.zero(), q.zero()]));
        let th = theta_iso(&AlgebraMap::from_ground(a), 3, 2).unwrap();
        assert!(th.report.passed(), "{:?}", th.report.failing().collect::<Vec<_>>());
    }

    #[test]
    fn right_action_follows_leibniz() {
        let q = Field::Rational;
        let a = Arc::new(Algebra::polynomial_quotient(q, "x", &[q.zero(), q.zero()]));
        let forms = UniversalForms::new(&AlgebraMap::from_ground(a), 2).unwrap();
        let x = forms.basis(1, 0);
        let y = forms.product(1, &x, 0, &forms.ring().basis(1)).unwrap();
        let naive = forms.product(0, &forms.ring().basis(1), 1, &x).unwrap();
        // dx · x = d(x²) − x dx = −x dx
        assert_eq!(y, naive.iter().map(|s| -s).collect::<Vec<_>>());
    }
}
