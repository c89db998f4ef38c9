//! Chern characters of the two spectral pieces `V₂`, `V₃` and of the
//! extension `0 → V₂ → V → V₃ → 0`, and exact evaluation of the numerical
//! constraints a candidate parameter set must satisfy.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fm_chern::{spectral_ch, SpectralParams};
use crate::hecke::{hecke_pattern_ch, ChernX, HeckeMultiplicities};
use crate::lattice::{self, dot, DivisorClass, Surface};
use crate::rational::{rat, Rational};

const BP: Surface = Surface::BPrime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleParams {
    pub k2: i64,
    pub k3: i64,
    pub d2: i64,
    pub d3: i64,
    pub a2: HeckeMultiplicities,
    pub a3: HeckeMultiplicities,
    pub l2: DivisorClass,
    pub l3: DivisorClass,
}

impl BundleParams {
    fn piece(&self, i: usize) -> Result<Piece<'_>> {
        match i {
            2 => Ok(Piece { i: 2, k: self.k2, d: self.d2, a: &self.a2, l: &self.l2, c: 1 }),
            3 => Ok(Piece { i: 3, k: self.k3, d: self.d3, a: &self.a3, l: &self.l3, c: 3 }),
            _ => Err(Error::UnsupportedRank(i as i64)),
        }
    }
}

struct Piece<'a> {
    i: i64,
    k: i64,
    d: i64,
    a: &'a HeckeMultiplicities,
    l: &'a DivisorClass,
    /// `f`-coefficient of `ch₁` of the spectral bundle is `d − ik + c`.
    c: i64,
}

/// Closed form for `ch(V_i)`:
/// rank `i`; `c₁ = π*(iL + (d − ik + c)f′ − S¹(n₁′+o₂′))`;
/// `ch₂ = [(i/2)L² + (d − ik + c)(L·f′) − S¹ L·(n₁′+o₂′) − 2S²] f×pt − k pt×f′`;
/// `ch₃ = −k (L·f′) pt`; with `c = 1` for `i = 2` and `c = 3` for `i = 3`.
pub fn ch_component(i: usize, p: &BundleParams) -> Result<ChernX> {
    let q = p.piece(i)?;
    let f = lattice::fiber(BP);
    let no = lattice::n1_plus_o2(BP);
    let vert = rat(q.d - q.i * q.k + q.c);
    let s1 = rat(q.a.s1());
    let s2 = rat(q.a.s2());
    let lf = dot(q.l, &f);
    let c1 = &(&q.l.scale(&rat(q.i)) + &f.scale(&vert)) - &no.scale(&s1);
    let f_pt = rat(q.i) * dot(q.l, q.l) / rat(2) + &vert * &lf - &s1 * dot(q.l, &no) - rat(2) * s2;
    Ok(ChernX::new(rat(q.i), DivisorClass::zero(Surface::B), c1, (f_pt, rat(-q.k)), rat(-q.k) * lf))
}

/// `ch(V_i)` as the product of the Hecke-modified pullback of the spectral
/// sheaf with `ch(π*L_i)`.
pub fn ch_component_via_product(i: usize, p: &BundleParams) -> Result<ChernX> {
    let q = p.piece(i)?;
    let w = spectral_ch(&SpectralParams::new(q.i, q.k, q.d)?);
    hecke_pattern_ch(&w, q.a).mul(&ChernX::line_bundle_bprime(q.l))
}

pub fn ch_total(p: &BundleParams) -> Result<ChernX> {
    Ok(&ch_component(2, p)? + &ch_component(3, p)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintName {
    /// `L₂·f′ > L₃·f′` (the extension can be non-split).
    SE,
    /// `c₁(V₂)·h′ < 0` (the destabilizing subbundle is excluded).
    SS,
    /// `c₁(V) = 0`.
    C1,
    /// `k₂ + k₃ ≤ 12`.
    C2F,
    /// The `f×pt` coordinate of `c₂(X) − c₂(V)` is nonnegative.
    C2FPrime,
    /// `c₃(V) = 12`.
    C3,
    /// `L₂`, `L₃` integral.
    Integrality,
}

impl ConstraintName {
    pub const ALL: [ConstraintName; 7] = [
        ConstraintName::SE,
        ConstraintName::SS,
        ConstraintName::C1,
        ConstraintName::C2F,
        ConstraintName::C2FPrime,
        ConstraintName::C3,
        ConstraintName::Integrality,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ConstraintName::SE => "S_e",
            ConstraintName::SS => "S_s",
            ConstraintName::C1 => "C1",
            ConstraintName::C2F => "C2_f",
            ConstraintName::C2FPrime => "C2_f'",
            ConstraintName::C3 => "C3",
            ConstraintName::Integrality => "integrality",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for ConstraintName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Slack {
    Scalar(Rational),
    Class(DivisorClass),
}

impl Slack {
    pub fn as_scalar(&self) -> Option<&Rational> {
        match self {
            Slack::Scalar(x) => Some(x),
            Slack::Class(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintEntry {
    pub name: ConstraintName,
    pub pass: bool,
    pub slack: Slack,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub entries: Vec<ConstraintEntry>,
    /// `c₂(X) − c₂(V)` in the basis `(f×pt, pt×f′)`.
    pub c2_deficit: (Rational, Rational),
    pub c3: Rational,
    pub hprime_verified: bool,
}

impl ConstraintReport {
    pub fn get(&self, name: ConstraintName) -> &ConstraintEntry {
        self.entries.iter().find(|e| e.name == name).expect("every constraint is reported")
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// `c₂(X) − c₂(V)` is effective when both coordinates are nonnegative.
    pub fn c2_deficit_effective(&self) -> bool {
        !self.c2_deficit.0.is_negative() && !self.c2_deficit.1.is_negative()
    }

    pub fn failures(&self) -> Vec<ConstraintName> {
        self.entries.iter().filter(|e| !e.pass).map(|e| e.name).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HPrimePolicy {
    /// Reject a polarization that is not certified ample.
    #[default]
    Require,
    /// Evaluate anyway and record `hprime_verified = false`.
    FlagUnverified,
}

/// Ampleness of `h′` via its `(f′, e₁′, ξ′)` coordinates.
pub fn hprime_is_certified_ample(hprime: &DivisorClass) -> bool {
    let Ok(coords) = lattice::fxi_coordinates(hprime) else {
        return false;
    };
    // The criterion is homogeneous, so clearing denominators is harmless.
    let l = coords.iter().fold(num_bigint::BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let scaled: Vec<Option<i64>> =
        coords.iter().map(|x| crate::rational::to_i64(&(x * Rational::from_integer(l.clone())))).collect();
    match scaled[..] {
        [Some(a), Some(b), Some(c)] => lattice::is_ample_fxi(a, b, c).ample,
        _ => false,
    }
}

/// `c₁(V₂) = 2L₂ + (d₂ + 1 − 2k₂)f′ − S₂¹(n₁′+o₂′)`; its pairing with `h′`
/// decides the slope condition for polarizations `H₀ + n·π*h′`, `n ≫ 0`.
pub fn slope_class(p: &BundleParams) -> DivisorClass {
    let f = lattice::fiber(BP);
    let no = lattice::n1_plus_o2(BP);
    &(&p.l2.scale(&rat(2)) + &f.scale(&rat(p.d2 + 1 - 2 * p.k2))) - &no.scale(&rat(p.a2.s1()))
}

/// Left side of the `f×pt` part of the `c₂` bound, before adding `c₂(X)`.
fn c2_fprime_lhs(p: &BundleParams) -> Rational {
    let f = lattice::fiber(BP);
    let no = lattice::n1_plus_o2(BP);
    let (l2, l3) = (&p.l2, &p.l3);
    dot(l2, l2)
        + rat(3) * dot(l3, l3) / rat(2)
        + rat(p.d2 - 2 * p.k2 + 1) * dot(l2, &f)
        + rat(p.d3 - 3 * p.k3 + 3) * dot(l3, &f)
        - rat(p.a2.s1()) * dot(l2, &no)
        - rat(p.a3.s1()) * dot(l3, &no)
        - rat(2 * (p.a2.s2() + p.a3.s2()))
}

pub fn evaluate_constraints(p: &BundleParams, hprime: &DivisorClass, policy: HPrimePolicy) -> Result<ConstraintReport> {
    for (name, c) in [("L2", &p.l2), ("L3", &p.l3), ("h'", hprime)] {
        if c.surface() != BP {
            return Err(Error::InvalidParameter(format!("{name} must live on B'")));
        }
    }
    let hprime_verified = hprime_is_certified_ample(hprime);
    if !hprime_verified && policy == HPrimePolicy::Require {
        return Err(Error::NotAmple(hprime.to_string()));
    }

    let f = lattice::fiber(BP);
    let no = lattice::n1_plus_o2(BP);
    let l2f = dot(&p.l2, &f);
    let l3f = dot(&p.l3, &f);
    let mut entries = Vec::with_capacity(7);
    let mut push = |name, pass, slack| entries.push(ConstraintEntry { name, pass, slack });

    let se = &l2f - &l3f;
    push(ConstraintName::SE, se.is_positive(), Slack::Scalar(se));

    let ss = dot(&slope_class(p), hprime);
    push(ConstraintName::SS, ss.is_negative(), Slack::Scalar(ss));

    let rhs = &no.scale(&rat(p.a2.s1() + p.a3.s1())) - &f.scale(&rat(p.d2 + p.d3 - 2 * p.k2 - 3 * p.k3 + 4));
    let c1 = &(&p.l2.scale(&rat(2)) + &p.l3.scale(&rat(3))) - &rhs;
    push(ConstraintName::C1, c1.is_zero(), Slack::Class(c1));

    let c2f = rat(12 - (p.k2 + p.k3));
    push(ConstraintName::C2F, !c2f.is_negative(), Slack::Scalar(c2f));

    let c2fp = c2_fprime_lhs(p) + rat(12);
    push(ConstraintName::C2FPrime, !c2fp.is_negative(), Slack::Scalar(c2fp));

    let c3 = rat(p.k2) * &l2f + rat(p.k3) * &l3f + rat(6);
    push(ConstraintName::C3, c3.is_zero(), Slack::Scalar(c3));

    let nonintegral = p.l2.coeffs().iter().chain(p.l3.coeffs().iter()).filter(|x| !x.is_integer()).count();
    push(ConstraintName::Integrality, nonintegral == 0, Slack::Scalar(rat(nonintegral as i64)));

    let total = ch_total(p)?;
    let (c2x_f, c2x_fp) = ChernX::c2_of_x();
    // With c₁ = 0, c₂ = −ch₂; otherwise this is the ch₂-level deficit.
    let c2_deficit = (c2x_f + &total.f_pt, c2x_fp + &total.pt_f);
    let c3_value = rat(2) * &total.pt;

    Ok(ConstraintReport { entries, c2_deficit, c3: c3_value, hprime_verified })
}

/// `((3e + k₃f)·(2e + k₂f)) · (L₂·f′ − L₃·f′)`, a lower bound for the
/// dimension of the extension group.
pub fn ext_lower_bound(k2: i64, k3: i64, l2f: &Rational, l3f: &Rational) -> Rational {
    let s = Surface::B;
    let (e, f) = (lattice::zero_section(s), lattice::fiber(s));
    let c3 = &e.scale(&rat(3)) + &f.scale(&rat(k3));
    let c2 = &e.scale(&rat(2)) + &f.scale(&rat(k2));
    dot(&c3, &c2) * (l2f - l3f)
}

pub fn moduli_tally(parts: &[i64]) -> i64 {
    parts.iter().sum()
}

/// The worked parameter set: `(k₂, k₃, d₂, d₃) = (3, 6, 10, 10)`, no Hecke
/// transforms, `L₂ = 3(e′+ζ′) + 3(e₄′−e₅′)`, `L₃ = −2(e′+ζ′) − 2(e₄′−e₅′)`.
pub fn worked_params() -> BundleParams {
    let base = &lattice::e_plus_zeta(BP) + &lattice::m1(BP);
    BundleParams {
        k2: 3,
        k3: 6,
        d2: 10,
        d3: 10,
        a2: HeckeMultiplicities::zero(2),
        a3: HeckeMultiplicities::zero(3),
        l2: base.scale(&rat(3)),
        l3: base.scale(&rat(-2)),
    }
}

/// `h′ = a f′ + b e₁′ + c ξ′`.
pub fn hprime_class(a: i64, b: i64, c: i64) -> DivisorClass {
    &(&lattice::fiber(BP).scale(&rat(a)) + &DivisorClass::exceptional(BP, 1).scale(&rat(b)))
        + &lattice::xi(BP).scale(&rat(c))
}
