//! Enumeration of admissible `(k₂, k₃)`, the `(u, x, M)` parametrization of
//! the line bundles `L₂`, `L₃`, and an exhaustive bounded search producing
//! verified solution certificates.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::assembly::{evaluate_constraints, hprime_class, BundleParams, ConstraintReport, HPrimePolicy};
use crate::error::{Error, Result};
use crate::hecke::{means_gap, HeckeMultiplicities};
use crate::lattice::{self, dot, DivisorClass, Surface};
use crate::rational::{frac, rat, Rational};

const BP: Surface = Surface::BPrime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table1Row {
    pub k2: i64,
    pub k3: i64,
    pub l2f: i64,
    pub l3f: i64,
}

impl Table1Row {
    pub fn k(&self) -> i64 {
        2 * self.k3 - 3 * self.k2
    }
}

/// Rows with `k = 2k₃ − 3k₂ > 0` dividing both 18 and 12, over
/// `2 ≤ k₂`, `3 ≤ k₃`, `k₂ + k₃ ≤ 12`, ascending in `(k₂, k₃)`.
pub fn enumerate_table1() -> Vec<Table1Row> {
    let mut rows = Vec::new();
    for k2 in 2..=10 {
        for k3 in 3..=10 {
            if k2 + k3 > 12 {
                continue;
            }
            let k = 2 * k3 - 3 * k2;
            if k > 0 && 18 % k == 0 && 12 % k == 0 {
                rows.push(Table1Row { k2, k3, l2f: 18 / k, l3f: -12 / k });
            }
        }
    }
    rows
}

pub fn table1_row(k2: i64, k3: i64) -> Result<Table1Row> {
    enumerate_table1().into_iter().find(|r| r.k2 == k2 && r.k3 == k3).ok_or(Error::NotInTable { k2, k3 })
}

/// `(L₂·f′, L₃·f′) = (18/k, −12/k)`.
pub fn lf_values(k2: i64, k3: i64) -> Result<(Rational, Rational)> {
    let k = 2 * k3 - 3 * k2;
    if k == 0 {
        return Err(Error::ZeroK { k2, k3 });
    }
    Ok((frac(18, k), frac(-12, k)))
}

/// The free class `M ⊥ {e′+ζ′, f′, n₁′+o₂′}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MClass {
    /// `M = z(e₄′ − e₅′)`.
    Ray(i64),
    /// Coordinates in `(e₄′−e₅′, e₄′−e₆′, 3ℓ′−2(e₄′+e₅′+e₆′)−3e₇′)`.
    General([Rational; 3]),
}

impl MClass {
    pub fn class(&self) -> DivisorClass {
        match self {
            MClass::Ray(z) => lattice::m1(BP).scale(&rat(*z)),
            MClass::General([p, q, r]) => {
                &(&lattice::m1(BP).scale(p) + &lattice::m2(BP).scale(q)) + &lattice::m3(BP).scale(r)
            }
        }
    }

    pub fn ray(&self) -> Option<i64> {
        match self {
            MClass::Ray(z) => Some(*z),
            MClass::General(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LClassInputs {
    pub k2: i64,
    pub k3: i64,
    pub u: i64,
    pub x: i64,
    pub m: MClass,
    pub d2: i64,
    pub d3: i64,
    pub s21: i64,
    pub s31: i64,
}

impl LClassInputs {
    pub fn k(&self) -> i64 {
        2 * self.k3 - 3 * self.k2
    }

    /// Coefficients of `(e′+ζ′, f′, n₁′+o₂′)` in `L₂` and in `L₃`; the `M`
    /// parts are `3M` and `−2M`.
    fn coefficients(&self) -> Result<([Rational; 3], [Rational; 3])> {
        let k = self.k();
        if k <= 0 {
            return Err(Error::InvalidParameter(format!("k = 2k3 - 3k2 must be positive, got {k}")));
        }
        let nine_k = frac(9, k);
        let u = rat(self.u);
        let l2 = [nine_k.clone(), frac(self.x - self.d2 + 2 * self.k2 - 1, 2), (&u + &nine_k + rat(self.s21)) / rat(2)];
        let l3 = [frac(-6, k), frac(-self.x - self.d3 + 3 * self.k3 - 3, 3), (-&u - &nine_k + rat(self.s31)) / rat(3)];
        Ok((l2, l3))
    }
}

/// `L₂ = (9/k)(e′+ζ′) + ½(x − d₂ + 2k₂ − 1)f′ + ½(u + 9/k + S₂¹)(n₁′+o₂′) + 3M`,
/// `L₃ = (−6/k)(e′+ζ′) + ⅓(−x − d₃ + 3k₃ − 3)f′ + ⅓(−u − 9/k + S₃¹)(n₁′+o₂′) − 2M`.
pub fn build_l_classes(inp: &LClassInputs) -> Result<(DivisorClass, DivisorClass)> {
    let (c2, c3) = inp.coefficients()?;
    let basis = [lattice::e_plus_zeta(BP), lattice::fiber(BP), lattice::n1_plus_o2(BP)];
    let combine = |c: &[Rational; 3], m_mult: i64| {
        basis.iter().zip(c).fold(inp.m.class().scale(&rat(m_mult)), |acc, (b, x)| &acc + &b.scale(x))
    };
    Ok((combine(&c2, 3), combine(&c3, -2)))
}

/// `(5/3)(u + 9/k)² + 30(z − 3/k)² − 12 ≤ 0`: the paraboloid that the
/// `c₂` and slope conditions together force `(u, z)` into.
pub fn consistency_check(k: i64, u: &Rational, z: &Rational) -> (bool, Rational) {
    let nine_k = frac(9, k);
    let three_k = frac(3, k);
    let a = u + &nine_k;
    let b = z - &three_k;
    let value = frac(5, 3) * &a * &a + rat(30) * &b * &b - rat(12);
    (!value.is_positive(), value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    pub c2_ok: bool,
    pub ss_ok: bool,
}

/// `c₂` side: `(5/3)u² − 15M² − (30/k)x + 135/k² − 12 ≤ gaps`, where the
/// gaps are the (nonpositive) means-inequality terms.
fn c2_value(k: i64, u: i64, x: i64, m: &DivisorClass) -> Rational {
    frac(5, 3) * rat(u * u) - rat(15) * dot(m, m) - frac(30 * x, k) + frac(135, k * k) - rat(12)
}

/// Slope side on the `z`-ray: `γ = (x + u + 9/k)f′ + 6z(e₄′−e₅′)` must meet
/// the section `e₄′` negatively, after which `γ − e₄′` has degree `−1` on the
/// moving fiber and cannot be effective.
pub fn feasibility_check(k: i64, u: i64, x: i64, z: i64, gaps: &Rational) -> Feasibility {
    let m = MClass::Ray(z).class();
    let c2_ok = &c2_value(k, u, x, &m) <= gaps;
    let t = rat(x + u) + frac(9, k);
    let gamma = &lattice::fiber(BP).scale(&t) + &m.scale(&rat(6));
    let e4 = DivisorClass::exceptional(BP, 4);
    let meets_negatively = dot(&gamma, &e4).is_negative();
    let residual_degree = dot(&(&gamma - &e4), &lattice::fiber(BP));
    let ss_ok = rat(6 * z) > t && meets_negatively && residual_degree == rat(-1);
    Feasibility { c2_ok, ss_ok }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityReport {
    /// `k | 3`, so that `9/k` and `6/k` are integers.
    pub k_divides_3: bool,
    /// `x − d₂ + 2k₂ − 1 ≡ 0 (mod 2)`.
    pub d2_congruence: bool,
    /// `x + d₃ − 3k₃ + 3 ≡ 0 (mod 3)`.
    pub d3_congruence: bool,
    /// `S₂¹ ≡ u + 9/k (mod 2)`.
    pub s21_congruence: bool,
    /// `S₃¹ ≡ u + 9/k (mod 3)`.
    pub s31_congruence: bool,
    /// Every coefficient of `L₂`, `L₃` in the basis `(ℓ′, e₁′, …, e₉′)`.
    pub coefficients_integral: bool,
}

impl IntegralityReport {
    pub fn pass(&self) -> bool {
        self.k_divides_3
            && self.d2_congruence
            && self.d3_congruence
            && self.s21_congruence
            && self.s31_congruence
            && self.coefficients_integral
    }
}

pub fn integrality_check(inp: &LClassInputs) -> Result<IntegralityReport> {
    let k = inp.k();
    let (c2, c3) = inp.coefficients()?;
    let (l2, l3) = build_l_classes(inp)?;
    Ok(IntegralityReport {
        k_divides_3: 3 % k == 0,
        d2_congruence: c2[1].is_integer(),
        d3_congruence: c3[1].is_integer(),
        s21_congruence: c2[2].is_integer(),
        s31_congruence: c3[2].is_integer(),
        coefficients_integral: l2.is_integral() && l3.is_integral(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    pub u: (i64, i64),
    pub x: (i64, i64),
    pub z: (i64, i64),
    pub d2: (i64, i64),
    pub d3: (i64, i64),
    pub a_max: i64,
    /// Also try non-constant multiplicity lists (nondecreasing only, since
    /// the Chern data depend on the multiset).
    pub nonconstant_a: bool,
    /// Search `M` over `(p/3)m₁ + (q/3)m₂ + (r/3)m₃` with
    /// `|p|, |q|, |r| ≤ 3·m_bound` instead of the `z`-ray.
    pub general_m: bool,
    pub m_bound: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            u: (-6, 6),
            x: (-20, 20),
            z: (0, 3),
            d2: (-40, 40),
            d3: (-40, 40),
            a_max: 5,
            nonconstant_a: false,
            general_m: false,
            m_bound: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub bounds: SearchBounds,
    /// `h′ = a f′ + b e₁′ + c ξ′`.
    pub hprime: (i64, i64, i64),
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { bounds: SearchBounds::default(), hprime: (25, 144, 168) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCertificate {
    pub row: Table1Row,
    pub k: i64,
    pub u: i64,
    pub x: i64,
    pub m: MClass,
    pub d2: i64,
    pub d3: i64,
    pub a2: Vec<i64>,
    pub a3: Vec<i64>,
    pub l2: DivisorClass,
    pub l3: DivisorClass,
    pub hprime: (i64, i64, i64),
    pub report: ConstraintReport,
    pub notes: Vec<String>,
}

impl SolutionCertificate {
    pub fn params(&self) -> Result<BundleParams> {
        Ok(BundleParams {
            k2: self.row.k2,
            k3: self.row.k3,
            d2: self.d2,
            d3: self.d3,
            a2: HeckeMultiplicities::new(2, self.a2.clone())?,
            a3: HeckeMultiplicities::new(3, self.a3.clone())?,
            l2: self.l2.clone(),
            l3: self.l3.clone(),
        })
    }

    pub fn l_inputs(&self) -> Result<LClassInputs> {
        Ok(LClassInputs {
            k2: self.row.k2,
            k3: self.row.k3,
            u: self.u,
            x: self.x,
            m: self.m.clone(),
            d2: self.d2,
            d3: self.d3,
            s21: HeckeMultiplicities::new(2, self.a2.clone())?.s1(),
            s31: HeckeMultiplicities::new(3, self.a3.clone())?.s1(),
        })
    }
}

pub const NOTE_C2_RANK3: &str = "c2 bound for the rank-3 piece uses the means gap (2/3)(S3^1)^2 - 2 S3^2";
pub const NOTE_L_CLASSES: &str =
    "L2, L3 built from the (u, x, M) parametrization; f'-coefficients are (x - d2 + 2k2 - 1)/2 and (-x - d3 + 3k3 - 3)/3";
pub const NOTE_HECKE_PULLBACK: &str = "Hecke corrections along n1' + o2' are pulled back from B'";
pub const NOTE_RANK3_BOX: &str = "ch(V3) f'-coefficient uses d3 - 3k3 + 3";
pub const NOTE_SLOPE: &str = "S_s is the asymptotic criterion c1(V2).h' < 0 for H = H0 + n pi*h', n >> 0";
pub const NOTE_UNVERIFIED_GEOMETRY: &str = "geometric side-conditions unverified";

pub fn certificate_notes(row: &Table1Row) -> Vec<String> {
    let mut notes: Vec<String> = [NOTE_C2_RANK3, NOTE_L_CLASSES, NOTE_HECKE_PULLBACK, NOTE_RANK3_BOX, NOTE_SLOPE]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if (row.k2, row.k3) != (3, 6) {
        notes.push(NOTE_UNVERIFIED_GEOMETRY.to_string());
    }
    notes
}

fn a_lists(len: usize, a_max: i64, nonconstant: bool) -> Vec<Vec<i64>> {
    if !nonconstant {
        return (0..=a_max).map(|a| vec![a; len]).collect();
    }
    fn rec(len: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=hi {
            cur.push(v);
            rec(len, v, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, 0, a_max, &mut Vec::new(), &mut out);
    out
}

fn m_candidates(b: &SearchBounds) -> Vec<MClass> {
    if !b.general_m {
        return (b.z.0..=b.z.1).map(MClass::Ray).collect();
    }
    let n = 3 * b.m_bound;
    let mut out = Vec::new();
    for p in -n..=n {
        for q in -n..=n {
            for r in -n..=n {
                out.push(MClass::General([frac(p, 3), frac(q, 3), frac(r, 3)]));
            }
        }
    }
    out
}

/// A `(u, x, M)` triple surviving the prefilters, with its `c₂` value.
struct Candidate {
    u: i64,
    x: i64,
    m: MClass,
    c2: Rational,
}

fn candidates(k: i64, b: &SearchBounds) -> Vec<Candidate> {
    let ms = m_candidates(b);
    let mut out = Vec::new();
    for u in b.u.0..=b.u.1 {
        for m in &ms {
            if let MClass::Ray(z) = m {
                if !consistency_check(k, &rat(u), &rat(*z)).0 {
                    continue;
                }
            } else if !lattice::m_space_check(&m.class()).unwrap_or(false) {
                continue;
            }
            for x in b.x.0..=b.x.1 {
                let m_class = m.class();
                let c2 = c2_value(k, u, x, &m_class);
                // Gaps are never positive, so c2 > 0 rules out every list.
                if c2.is_positive() {
                    continue;
                }
                if let MClass::Ray(z) = m {
                    if !feasibility_check(k, u, x, *z, &Rational::zero()).ss_ok {
                        continue;
                    }
                }
                out.push(Candidate { u, x, m: m.clone(), c2 });
            }
        }
    }
    out.sort_by(|a, b| (a.u, a.x, &a.m).cmp(&(b.u, b.x, &b.m)));
    out
}

/// Exhaustive scan of the bounded grid. Output is sorted by
/// `(u, x, M, d₂, d₃, a₂, a₃)` independently of the number of workers.
pub fn solve(k2: i64, k3: i64, opts: &SolveOptions) -> Result<Vec<SolutionCertificate>> {
    let row = table1_row(k2, k3)?;
    let k = row.k();
    let b = &opts.bounds;
    let (ha, hb, hc) = opts.hprime;
    let hprime = hprime_class(ha, hb, hc);
    if !crate::assembly::hprime_is_certified_ample(&hprime) {
        return Err(Error::NotAmple(hprime.to_string()));
    }
    let notes = certificate_notes(&row);
    let lists2 = a_lists(2, b.a_max, b.nonconstant_a);
    let lists3 = a_lists(3, b.a_max, b.nonconstant_a);

    let mut jobs = Vec::new();
    for cand in candidates(k, b) {
        for a2 in &lists2 {
            for a3 in &lists3 {
                let gaps = means_gap(2, a2)? + means_gap(3, a3)?;
                if cand.c2 > gaps {
                    continue;
                }
                for d2 in b.d2.0..=b.d2.1 {
                    jobs.push((cand.u, cand.x, cand.m.clone(), d2, a2, a3));
                }
            }
        }
    }

    let results: Vec<Vec<SolutionCertificate>> = jobs
        .par_iter()
        .map(|(u, x, m, d2, a2, a3)| {
            let mut found = Vec::new();
            for d3 in b.d3.0..=b.d3.1 {
                let inp = LClassInputs {
                    k2,
                    k3,
                    u: *u,
                    x: *x,
                    m: m.clone(),
                    d2: *d2,
                    d3,
                    s21: a2.iter().sum(),
                    s31: a3.iter().sum(),
                };
                let Ok(integrality) = integrality_check(&inp) else { continue };
                if !integrality.pass() {
                    continue;
                }
                let Ok((l2, l3)) = build_l_classes(&inp) else { continue };
                let params = BundleParams {
                    k2,
                    k3,
                    d2: *d2,
                    d3,
                    a2: HeckeMultiplicities::new(2, (*a2).clone()).expect("valid list"),
                    a3: HeckeMultiplicities::new(3, (*a3).clone()).expect("valid list"),
                    l2: l2.clone(),
                    l3: l3.clone(),
                };
                let Ok(report) = evaluate_constraints(&params, &hprime, HPrimePolicy::Require) else {
                    continue;
                };
                if report.all_pass() {
                    found.push(SolutionCertificate {
                        row,
                        k,
                        u: *u,
                        x: *x,
                        m: m.clone(),
                        d2: *d2,
                        d3,
                        a2: (*a2).clone(),
                        a3: (*a3).clone(),
                        l2,
                        l3,
                        hprime: opts.hprime,
                        report,
                        notes: notes.clone(),
                    });
                }
            }
            found
        })
        .collect();

    let mut certs: Vec<SolutionCertificate> = results.into_iter().flatten().collect();
    certs.sort_by(|p, q| (p.u, p.x, &p.m, p.d2, p.d3, &p.a2, &p.a3).cmp(&(q.u, q.x, &q.m, q.d2, q.d3, &q.a2, &q.a3)));
    Ok(certs)
}

/// Recomputes the certificate from its raw parameters and compares.
/// Returns the fresh report; the certificate is valid when this succeeds
/// and the report passes.
pub fn verify_certificate(cert: &SolutionCertificate) -> Result<ConstraintReport> {
    let row = table1_row(cert.row.k2, cert.row.k3)?;
    if row != cert.row {
        return Err(Error::Tamper(format!(
            "row ({}, {}) should have L.f' = ({}, {})",
            row.k2, row.k3, row.l2f, row.l3f
        )));
    }
    if cert.k != row.k() {
        return Err(Error::Tamper(format!("k = {} but 2k3 - 3k2 = {}", cert.k, row.k())));
    }
    if !lattice::m_space_check(&cert.m.class())? {
        return Err(Error::InvalidParameter("M is not in the admissible span".into()));
    }
    let (l2, l3) = build_l_classes(&cert.l_inputs()?)?;
    if l2 != cert.l2 {
        return Err(Error::Tamper(format!("stored L2 = {}, recomputed {}", cert.l2, l2)));
    }
    if l3 != cert.l3 {
        return Err(Error::Tamper(format!("stored L3 = {}, recomputed {}", cert.l3, l3)));
    }
    let (a, b, c) = cert.hprime;
    let report = evaluate_constraints(&cert.params()?, &hprime_class(a, b, c), HPrimePolicy::Require)?;
    if report != cert.report {
        return Err(Error::Tamper("stored report differs from recomputation".into()));
    }
    let expected_notes = certificate_notes(&row);
    if !expected_notes.iter().all(|n| cert.notes.contains(n)) {
        return Err(Error::Tamper("certificate notes are incomplete".into()));
    }
    Ok(report)
}

/// The worked solution: `(k₂, k₃) = (3, 6)`, `(u, x, z) = (−3, 5, 1)`,
/// `d₂ = d₃ = 10`, no Hecke transforms, `h′ = 25f′ + 144e₁′ + 168ξ′`.
pub fn worked_certificate() -> SolutionCertificate {
    let row = table1_row(3, 6).expect("(3, 6) is admissible");
    let inp = LClassInputs { k2: 3, k3: 6, u: -3, x: 5, m: MClass::Ray(1), d2: 10, d3: 10, s21: 0, s31: 0 };
    let (l2, l3) = build_l_classes(&inp).expect("k = 3");
    let params = BundleParams {
        k2: 3,
        k3: 6,
        d2: 10,
        d3: 10,
        a2: HeckeMultiplicities::zero(2),
        a3: HeckeMultiplicities::zero(3),
        l2: l2.clone(),
        l3: l3.clone(),
    };
    let report =
        evaluate_constraints(&params, &hprime_class(25, 144, 168), HPrimePolicy::Require).expect("h' is ample");
    SolutionCertificate {
        row,
        k: row.k(),
        u: -3,
        x: 5,
        m: MClass::Ray(1),
        d2: 10,
        d3: 10,
        a2: vec![0, 0],
        a3: vec![0, 0, 0],
        l2,
        l3,
        hprime: (25, 144, 168),
        report,
        notes: certificate_notes(&row),
    }
}

/// `(18/k)(e′+ζ′) + x f′ + (u + 9/k)(n₁′+o₂′) + 6M`: `c₁(V₂)` once the
/// L-classes are substituted. It depends only on `(u, x, M)`.
pub fn slope_class_from_parameters(k: i64, u: i64, x: i64, m: &MClass) -> DivisorClass {
    let t = rat(u) + frac(9, k);
    &(&(&lattice::e_plus_zeta(BP).scale(&frac(18, k)) + &lattice::fiber(BP).scale(&rat(x)))
        + &lattice::n1_plus_o2(BP).scale(&t))
        + &m.class().scale(&rat(6))
}

impl SolutionCertificate {
    pub fn is_valid(&self) -> bool {
        verify_certificate(self).map(|r| r.all_pass()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{ConstraintName, Slack};
    use proptest::prelude::*;

    fn small_bounds() -> SolveOptions {
        SolveOptions {
            bounds: SearchBounds { d2: (8, 12), d3: (7, 13), a_max: 1, ..SearchBounds::default() },
            ..SolveOptions::default()
        }
    }

    #[test]
    fn table1_rows() {
        let rows: Vec<_> = enumerate_table1().iter().map(|r| (r.k2, r.k3, r.l2f, r.l3f)).collect();
        assert_eq!(rows, vec![(2, 4, 9, -6), (2, 6, 3, -2), (3, 5, 18, -12), (3, 6, 6, -4), (4, 7, 9, -6)]);
        let r = table1_row(3, 6).unwrap();
        assert_eq!((r.l2f, r.l3f), (6, -4));
        assert_eq!(table1_row(2, 5), Err(Error::NotInTable { k2: 2, k3: 5 }));
        for r in enumerate_table1() {
            assert_eq!(2 * r.l2f + 3 * r.l3f, 0);
            assert_eq!(r.k2 * r.l2f + r.k3 * r.l3f, -6);
            assert!(r.l2f > r.l3f && r.k2 >= 2 && r.k3 >= 3 && r.k2 + r.k3 <= 12);
        }
    }

    #[test]
    fn lf_examples() {
        assert_eq!(lf_values(3, 6), Ok((rat(6), rat(-4))));
        assert_eq!(lf_values(3, 5), Ok((rat(18), rat(-12))));
        assert_eq!(lf_values(0, 0), Err(Error::ZeroK { k2: 0, k3: 0 }));
    }

    #[test]
    fn worked_l_classes() {
        let inp = LClassInputs { k2: 3, k3: 6, u: -3, x: 5, m: MClass::Ray(1), d2: 10, d3: 10, s21: 0, s31: 0 };
        let (l2, l3) = build_l_classes(&inp).unwrap();
        let base = &lattice::e_plus_zeta(BP) + &lattice::m1(BP);
        assert_eq!(l2, base.scale(&rat(3)));
        assert_eq!(l3, base.scale(&rat(-2)));
        let zero_m = LClassInputs { m: MClass::Ray(0), ..inp.clone() };
        let (l2z, _) = build_l_classes(&zero_m).unwrap();
        assert_eq!(&l2 - &l2z, lattice::m1(BP).scale(&rat(3)));
        let bad = LClassInputs { k2: 4, k3: 6, ..inp };
        assert!(build_l_classes(&bad).is_err());
    }

    #[test]
    fn consistency_examples() {
        assert_eq!(consistency_check(3, &rat(-3), &rat(1)), (true, rat(-12)));
        assert_eq!(consistency_check(3, &rat(3), &rat(1)), (false, rat(48)));
        for k in [1, 2, 3, 6] {
            assert_eq!(consistency_check(k, &frac(-9, k), &frac(3, k)), (true, rat(-12)));
        }
    }

    #[test]
    fn feasibility_examples() {
        assert_eq!(feasibility_check(3, -3, 5, 1, &rat(0)), Feasibility { c2_ok: true, ss_ok: true });
        assert!(!feasibility_check(3, 3, -1, 1, &rat(0)).c2_ok);
        assert!(!feasibility_check(3, -3, 5, 1, &rat(-3)).c2_ok);
        assert!(feasibility_check(3, -3, 5, 1, &rat(-2)).c2_ok);
        assert!(!feasibility_check(3, -3, 6, 1, &rat(0)).ss_ok);
    }

    #[test]
    fn integrality_examples() {
        let inp = LClassInputs { k2: 3, k3: 6, u: -3, x: 5, m: MClass::Ray(1), d2: 10, d3: 10, s21: 0, s31: 0 };
        assert!(integrality_check(&inp).unwrap().pass());
        let r = integrality_check(&LClassInputs { d3: 11, ..inp.clone() }).unwrap();
        assert!(!r.d3_congruence && !r.pass());
        let r = integrality_check(&LClassInputs { d2: 11, ..inp.clone() }).unwrap();
        assert!(!r.d2_congruence);
        let r = integrality_check(&LClassInputs { s21: 1, ..inp.clone() }).unwrap();
        assert!(!r.s21_congruence);
        let r = integrality_check(&LClassInputs { s31: 1, ..inp.clone() }).unwrap();
        assert!(!r.s31_congruence);
        let k2 = LClassInputs { k2: 2, k3: 4, u: -4, x: 1, m: MClass::Ray(1), d2: 2, d3: 8, s21: 0, s31: 0 };
        assert_eq!(k2.k(), 2);
        let r = integrality_check(&k2).unwrap();
        assert!(!r.k_divides_3 && !r.pass());
    }

    #[test]
    fn worked_certificate_is_valid() {
        let cert = worked_certificate();
        let report = verify_certificate(&cert).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.get(ConstraintName::SS).slack, Slack::Scalar(rat(-12)));
        assert!(cert.is_valid());
        let class = slope_class_from_parameters(3, -3, 5, &MClass::Ray(1));
        let want = &(&lattice::e_plus_zeta(BP).scale(&rat(6)) + &lattice::fiber(BP).scale(&rat(5)))
            + &lattice::m1(BP).scale(&rat(6));
        assert_eq!(class, want);
        assert_eq!(class, crate::assembly::slope_class(&cert.params().unwrap()));
    }

    #[test]
    fn tampering_is_detected() {
        let mut cert = worked_certificate();
        cert.l2 = &cert.l2 + &lattice::fiber(BP);
        assert!(matches!(verify_certificate(&cert), Err(Error::Tamper(_))));

        let mut cert = worked_certificate();
        cert.hprime = (1, 3, 1);
        assert!(matches!(verify_certificate(&cert), Err(Error::NotAmple(_))));

        let mut cert = worked_certificate();
        cert.d2 = 12;
        assert!(matches!(verify_certificate(&cert), Err(Error::Tamper(_))));

        let mut cert = worked_certificate();
        cert.k = 1;
        assert!(matches!(verify_certificate(&cert), Err(Error::Tamper(_))));
    }

    #[test]
    fn solve_finds_worked_point() {
        let certs = solve(3, 6, &small_bounds()).unwrap();
        let hit = certs
            .iter()
            .find(|c| {
                (c.u, c.x, &c.m, c.d2, c.d3) == (-3, 5, &MClass::Ray(1), 10, 10) && c.a2 == [0, 0] && c.a3 == [0, 0, 0]
            })
            .expect("worked point present");
        assert_eq!(hit.l2, worked_certificate().l2);
        assert!(certs.iter().all(|c| c.report.all_pass()));
        assert!(certs.iter().all(|c| !c.notes.iter().any(|n| n == NOTE_UNVERIFIED_GEOMETRY)));
        for c in &certs {
            let class = slope_class_from_parameters(c.k, c.u, c.x, &c.m);
            assert_eq!(class, crate::assembly::slope_class(&c.params().unwrap()));
        }
    }

    #[test]
    fn solve_rejects_and_empties() {
        assert!(solve(2, 4, &small_bounds()).unwrap().is_empty());
        assert!(solve(4, 7, &small_bounds()).unwrap().is_empty());
        assert_eq!(solve(2, 5, &small_bounds()), Err(Error::NotInTable { k2: 2, k3: 5 }));
        let bad_h = SolveOptions { hprime: (1, 3, 1), ..small_bounds() };
        assert!(matches!(solve(3, 6, &bad_h), Err(Error::NotAmple(_))));
    }

    #[test]
    fn k_one_consistency_region_is_nonempty() {
        let k = table1_row(3, 5).unwrap().k();
        assert_eq!(k, 1);
        assert!(consistency_check(k, &rat(-9), &rat(3)).0);
        // Numerically it still enumerates; on the z-ray nothing survives the
        // c2 and slope conditions together.
        assert!(solve(3, 5, &small_bounds()).unwrap().is_empty());
    }

    #[test]
    fn solve_output_is_sorted_and_verifies() {
        let certs = solve(3, 6, &small_bounds()).unwrap();
        let keys: Vec<_> =
            certs.iter().map(|c| (c.u, c.x, c.m.clone(), c.d2, c.d3, c.a2.clone(), c.a3.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for c in &certs {
            assert!(verify_certificate(c).unwrap().all_pass());
        }
    }

    #[test]
    fn solve_is_independent_of_worker_count() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| solve(3, 6, &small_bounds()).unwrap());
        let b = four.install(|| solve(3, 6, &small_bounds()).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn nonconstant_lists_and_general_m() {
        let opts = SolveOptions {
            bounds: SearchBounds {
                u: (-3, -3),
                x: (5, 5),
                d2: (10, 10),
                d3: (10, 10),
                a_max: 2,
                nonconstant_a: true,
                general_m: true,
                m_bound: 1,
                ..SearchBounds::default()
            },
            ..SolveOptions::default()
        };
        let certs = solve(3, 6, &opts).unwrap();
        let worked_m = MClass::General([rat(1), rat(0), rat(0)]);
        assert!(certs.iter().any(|c| c.m == worked_m && c.a2 == [0, 0]));
        for c in &certs {
            assert!(lattice::m_space_check(&c.m.class()).unwrap());
            assert!(verify_certificate(c).unwrap().all_pass());
        }
    }

    #[test]
    fn c2_slack_matches_gaps_for_worked_shape() {
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    for d in 0..=3 {
                        for e in 0..=3 {
                            let (a2, a3) = (vec![a, b], vec![c, d, e]);
                            let inp = LClassInputs {
                                k2: 3,
                                k3: 6,
                                u: -3,
                                x: 5,
                                m: MClass::Ray(1),
                                d2: 10,
                                d3: 10,
                                s21: a + b,
                                s31: c + d + e,
                            };
                            let (l2, l3) = build_l_classes(&inp).unwrap();
                            let p = BundleParams {
                                k2: 3,
                                k3: 6,
                                d2: 10,
                                d3: 10,
                                a2: HeckeMultiplicities::new(2, a2.clone()).unwrap(),
                                a3: HeckeMultiplicities::new(3, a3.clone()).unwrap(),
                                l2,
                                l3,
                            };
                            let r =
                                evaluate_constraints(&p, &hprime_class(25, 144, 168), HPrimePolicy::Require).unwrap();
                            let want = means_gap(2, &a2).unwrap() + means_gap(3, &a3).unwrap() + rat(2);
                            assert_eq!(r.get(ConstraintName::C2FPrime).slack, Slack::Scalar(want));
                        }
                    }
                }
            }
        }
    }

    fn arb_inputs() -> impl Strategy<Value = LClassInputs> {
        (
            proptest::sample::select(enumerate_table1()),
            -8i64..8,
            -20i64..20,
            -3i64..4,
            -40i64..40,
            -40i64..40,
            0i64..12,
            0i64..18,
        )
            .prop_map(|(row, u, x, z, d2, d3, s21, s31)| LClassInputs {
                k2: row.k2,
                k3: row.k3,
                u,
                x,
                m: MClass::Ray(z),
                d2,
                d3,
                s21,
                s31,
            })
    }

    proptest! {
        #[test]
        fn built_classes_satisfy_c1_and_slopes(inp in arb_inputs()) {
            let (l2, l3) = build_l_classes(&inp).unwrap();
            let f = lattice::fiber(BP);
            let no = lattice::n1_plus_o2(BP);
            let lhs = &l2.scale(&rat(2)) + &l3.scale(&rat(3));
            let rhs = &no.scale(&rat(inp.s21 + inp.s31))
                - &f.scale(&rat(inp.d2 + inp.d3 - 2 * inp.k2 - 3 * inp.k3 + 4));
            prop_assert_eq!(lhs, rhs);
            let (l2f, l3f) = lf_values(inp.k2, inp.k3).unwrap();
            prop_assert_eq!(dot(&l2, &f), l2f);
            prop_assert_eq!(dot(&l3, &f), l3f);
        }

        #[test]
        fn c2_slack_is_gap_budget_minus_value(inp in arb_inputs(), a2 in proptest::collection::vec(0i64..4, 2), a3 in proptest::collection::vec(0i64..4, 3)) {
            let inp = LClassInputs { s21: a2.iter().sum(), s31: a3.iter().sum(), ..inp };
            let (l2, l3) = build_l_classes(&inp).unwrap();
            let p = BundleParams {
                k2: inp.k2, k3: inp.k3, d2: inp.d2, d3: inp.d3,
                a2: HeckeMultiplicities::new(2, a2.clone()).unwrap(),
                a3: HeckeMultiplicities::new(3, a3.clone()).unwrap(),
                l2, l3,
            };
            let r = evaluate_constraints(&p, &hprime_class(25, 144, 168), HPrimePolicy::Require).unwrap();
            let gaps = means_gap(2, &a2).unwrap() + means_gap(3, &a3).unwrap();
            let value = c2_value(inp.k(), inp.u, inp.x, &inp.m.class());
            prop_assert_eq!(r.get(ConstraintName::C2FPrime).slack.clone(), Slack::Scalar(gaps - value));
            prop_assert!(r.get(ConstraintName::C1).pass);
        }
    }
}
