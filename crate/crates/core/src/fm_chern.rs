//! Even cohomology of a rational elliptic surface `B`, the cohomological
//! fiberwise Fourier–Mukai transform on the span of `e, f, pt`, and the Chern
//! character of a bundle built from spectral data `(C, N)` with
//! `C ∈ |r e + m f|` and `deg N = d`.

use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{self, dot, DivisorClass, Surface};
use crate::rational::{frac, rat, Rational};

/// `rank + div + pt · [point]` in `H^even(B, Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernB {
    pub rank: Rational,
    pub div: DivisorClass,
    pub pt: Rational,
}

impl ChernB {
    pub fn zero() -> Self {
        ChernB { rank: Rational::zero(), div: DivisorClass::zero(Surface::B), pt: Rational::zero() }
    }

    pub fn new(rank: Rational, div: DivisorClass, pt: Rational) -> Self {
        assert_eq!(div.surface(), Surface::B, "ChernB lives on B");
        ChernB { rank, div, pt }
    }

    pub fn from_div(div: DivisorClass) -> Self {
        Self::new(Rational::zero(), div, Rational::zero())
    }

    pub fn point(coefficient: Rational) -> Self {
        ChernB { pt: coefficient, ..Self::zero() }
    }

    /// `f`-coefficient when `div` is a multiple of the fiber class.
    pub fn vertical_coefficient(&self) -> Option<Rational> {
        let f = lattice::fiber(Surface::B);
        let c = -&self.div.coeffs()[9];
        (f.scale(&c) == self.div).then_some(c)
    }

    pub fn is_vertical(&self) -> bool {
        self.vertical_coefficient().is_some()
    }
}

impl Add for &ChernB {
    type Output = ChernB;
    fn add(self, rhs: &ChernB) -> ChernB {
        ChernB { rank: &self.rank + &rhs.rank, div: &self.div + &rhs.div, pt: &self.pt + &rhs.pt }
    }
}

impl Sub for &ChernB {
    type Output = ChernB;
    fn sub(self, rhs: &ChernB) -> ChernB {
        ChernB { rank: &self.rank - &rhs.rank, div: &self.div - &rhs.div, pt: &self.pt - &rhs.pt }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpectralParams {
    pub r: i64,
    pub m: i64,
    pub d: i64,
}

impl SpectralParams {
    pub fn new(r: i64, m: i64, d: i64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParameter(format!("spectral rank must be positive, got {r}")));
        }
        Ok(SpectralParams { r, m, d })
    }
}

/// Writes `div = α e + β f`, or fails if `div` leaves that plane.
fn split_e_f(div: &DivisorClass) -> Result<(Rational, Rational)> {
    let e = lattice::zero_section(Surface::B);
    let f = lattice::fiber(Surface::B);
    let alpha = dot(div, &f);
    let beta = dot(div, &e) + &alpha;
    if &(&e.scale(&alpha) + &f.scale(&beta)) != div {
        return Err(Error::UnsupportedDirection(format!("{div} is not in span(e, f)")));
    }
    Ok((alpha, beta))
}

/// `e ↦ 1 − ½f`, `f ↦ −pt`, `pt ↦ f`, extended linearly. The transform of the
/// rank class is not modeled, so a nonzero rank is rejected.
pub fn fm_b(c: &ChernB) -> Result<ChernB> {
    if !c.rank.is_zero() {
        return Err(Error::UnsupportedDirection("rank component".into()));
    }
    let (alpha, beta) = split_e_f(&c.div)?;
    let f = lattice::fiber(Surface::B);
    let f_coeff = &c.pt - &alpha * frac(1, 2);
    Ok(ChernB { rank: alpha, div: f.scale(&f_coeff), pt: -beta })
}

/// Grothendieck–Riemann–Roch for `i_* N` with `C ∈ |re + mf|`, `deg N = d`:
/// `[C] + (d + r(r+1)/2 − rm − r/2) pt`.
pub fn curve_pushforward_ch(p: &SpectralParams) -> ChernB {
    let s = Surface::B;
    let class = &lattice::zero_section(s).scale(&rat(p.r)) + &lattice::fiber(s).scale(&rat(p.m));
    let pt = rat(p.d) + frac(p.r * (p.r + 1), 2) - rat(p.r * p.m) - frac(p.r, 2);
    ChernB::new(Rational::zero(), class, pt)
}

/// `r + (d + r(r+1)/2 − rm − r) f − m pt`.
pub fn spectral_ch(p: &SpectralParams) -> ChernB {
    let f_coeff = rat(p.d) + frac(p.r * (p.r + 1), 2) - rat(p.r * p.m) - rat(p.r);
    ChernB::new(rat(p.r), lattice::fiber(Surface::B).scale(&f_coeff), rat(-p.m))
}

/// Arithmetic genus of a curve in `|re + mf|`, from `2g − 2 = C·(K_B + C)`
/// with `K_B = −f`.
pub fn spectral_genus(r: i64, m: i64) -> Result<i64> {
    let s = Surface::B;
    let c = &lattice::zero_section(s).scale(&rat(r)) + &lattice::fiber(s).scale(&rat(m));
    let k_plus_c = &c - &lattice::fiber(s);
    let two_g_minus_2 = dot(&c, &k_plus_c);
    if two_g_minus_2 < rat(-2) {
        return Err(Error::NegativeGenus { r, m });
    }
    let g = two_g_minus_2 / rat(2) + rat(1);
    // 2rm − r² − r is always even.
    Ok(g.to_integer().try_into().expect("genus fits in i64"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearSystemDims {
    pub h0: i64,
    pub invariant: i64,
    pub anti_invariant: i64,
}

impl LinearSystemDims {
    /// Projective dimensions of the invariant and anti-invariant parts.
    pub fn projective(&self) -> (i64, i64) {
        (self.invariant - 1, self.anti_invariant - 1)
    }
}

/// `H⁰(B, O(re + kf))` from the splitting of its pushforward to `P¹` as
/// `O(k) ⊕ O(k−2) ⊕ … ⊕ O(k−r)`, each summand split into polynomials even
/// and odd under the involution of the base.
pub fn linear_system_dims(r: i64, k: i64) -> Result<LinearSystemDims> {
    if !(1..=3).contains(&r) {
        return Err(Error::UnsupportedRank(r));
    }
    if k < 0 {
        return Err(Error::InvalidParameter(format!("fiber degree must be nonnegative, got {k}")));
    }
    let mut dims = LinearSystemDims { h0: 0, invariant: 0, anti_invariant: 0 };
    for j in std::iter::once(0).chain(2..=r) {
        let sections = (k - j + 1).max(0);
        dims.h0 += sections;
        dims.invariant += (sections + 1) / 2;
        dims.anti_invariant += sections / 2;
    }
    Ok(dims)
}

/// Whether `|re + kf|` contains smooth curves invariant under the involution:
/// `r = 3, k ≥ 3`, or `r = 2` with `k ≥ 2` even. For odd `k` with `r = 2`
/// every invariant section is divisible by the coordinate fixed by the
/// involution, so the generic invariant member is reducible.
pub fn smooth_invariant_exists(r: i64, k: i64) -> bool {
    match r {
        3 => k >= 3,
        2 => k >= 2 && k % 2 == 0,
        _ => false,
    }
}

/// `ch(O_B(D)) = 1 + D + D²/2 pt`.
pub fn line_bundle_ch(d: &DivisorClass) -> ChernB {
    ChernB::new(rat(1), d.clone(), dot(d, d) / rat(2))
}
