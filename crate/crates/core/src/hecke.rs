//! Chern characters on `X = B ×_{P¹} B′` restricted to the classes that the
//! construction touches, and the Chern-level effect of Hecke transforms along
//! the `I₂` fiber components `n₁′`, `o₂′`.
//!
//! Projections: `π′ : X → B` and `π : X → B′`. A divisor on `X` is stored as
//! `π′*A + π*A′`. Curve classes are spanned by `f×pt` (a fiber of `B` over a
//! point of `B′`) and `pt×f′`; `pt` is the point class.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fm_chern::ChernB;
use crate::lattice::{self, dot, DivisorClass, Surface};
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernX {
    pub rank: Rational,
    /// Part pulled back from `B`; kept with zero `e₉` coefficient, i.e. zero
    /// `f` coefficient in the basis `(ℓ, e₁, …, e₈, f)`.
    pub c1_b: DivisorClass,
    /// Part pulled back from `B′`.
    pub c1_bprime: DivisorClass,
    /// Coefficient of `f×pt`.
    pub f_pt: Rational,
    /// Coefficient of `pt×f′`.
    pub pt_f: Rational,
    /// Coefficient of the point class.
    pub pt: Rational,
}

impl ChernX {
    pub fn zero() -> Self {
        ChernX {
            rank: Rational::zero(),
            c1_b: DivisorClass::zero(Surface::B),
            c1_bprime: DivisorClass::zero(Surface::BPrime),
            f_pt: Rational::zero(),
            pt_f: Rational::zero(),
            pt: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        ChernX { rank: Rational::one(), ..Self::zero() }
    }

    /// Builds a value and brings `c1` into canonical form.
    pub fn new(
        rank: Rational,
        c1_b: DivisorClass,
        c1_bprime: DivisorClass,
        h4: (Rational, Rational),
        pt: Rational,
    ) -> Self {
        assert_eq!(c1_b.surface(), Surface::B);
        assert_eq!(c1_bprime.surface(), Surface::BPrime);
        ChernX { rank, c1_b, c1_bprime, f_pt: h4.0, pt_f: h4.1, pt }.canonical()
    }

    /// Moves every multiple of `π′*f = π*f′` into the `B′` part.
    pub fn canonical(mut self) -> Self {
        let c9 = self.c1_b.coeffs()[9].clone();
        if !c9.is_zero() {
            self.c1_b = &self.c1_b + &lattice::fiber(Surface::B).scale(&c9);
            self.c1_bprime = &self.c1_bprime - &lattice::fiber(Surface::BPrime).scale(&c9);
        }
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.c1_b.coeffs()[9].is_zero()
    }

    /// `π*D` for a divisor `D` on `B′`.
    pub fn divisor_bprime(d: &DivisorClass) -> Self {
        assert_eq!(d.surface(), Surface::BPrime);
        ChernX { c1_bprime: d.clone(), ..Self::zero() }
    }

    pub fn f_pt_class(coefficient: Rational) -> Self {
        ChernX { f_pt: coefficient, ..Self::zero() }
    }

    pub fn pt_f_class(coefficient: Rational) -> Self {
        ChernX { pt_f: coefficient, ..Self::zero() }
    }

    /// `π′*` of a class on `B`: `f ↦ π*f′`, `pt ↦ pt×f′`.
    pub fn pullback_from_b(w: &ChernB) -> Self {
        ChernX {
            rank: w.rank.clone(),
            c1_b: w.div.clone(),
            c1_bprime: DivisorClass::zero(Surface::BPrime),
            f_pt: Rational::zero(),
            pt_f: w.pt.clone(),
            pt: Rational::zero(),
        }
        .canonical()
    }

    /// `ch(π*L) = 1 + π*L + (L²/2) f×pt` for a line bundle `L` on `B′`.
    pub fn line_bundle_bprime(l: &DivisorClass) -> Self {
        ChernX { rank: Rational::one(), c1_bprime: l.clone(), f_pt: dot(l, l) / rat(2), ..Self::zero() }
    }

    /// `c₂(X) = 12(f×pt + pt×f′)`.
    pub fn c2_of_x() -> (Rational, Rational) {
        (rat(12), rat(12))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        ChernX {
            rank: &self.rank * s,
            c1_b: self.c1_b.scale(s),
            c1_bprime: self.c1_bprime.scale(s),
            f_pt: &self.f_pt * s,
            pt_f: &self.pt_f * s,
            pt: &self.pt * s,
        }
    }

    pub fn h4(&self) -> (Rational, Rational) {
        (self.f_pt.clone(), self.pt_f.clone())
    }

    pub fn c1_is_zero(&self) -> bool {
        self.c1_b.is_zero() && self.c1_bprime.is_zero()
    }

    /// `c₃ = 2 ch₃`, valid when `c₁ = 0`.
    pub fn c3_when_c1_vanishes(&self) -> Option<Rational> {
        self.c1_is_zero().then(|| &self.pt * rat(2))
    }

    /// Cup product under `π*a·π*b = (a·b) f×pt`, `π*a·f×pt = 0`,
    /// `π*a·pt×f′ = (a·f′) pt`. Any nonzero `B`-part of `c1` meeting a
    /// nonzero class of positive degree is outside the model.
    pub fn mul(&self, other: &ChernX) -> Result<ChernX> {
        let x = self.clone().canonical();
        let y = other.clone().canonical();
        let positive_degree = |c: &ChernX| !c.c1_is_zero() || !c.f_pt.is_zero() || !c.pt_f.is_zero();
        if (!x.c1_b.is_zero() && positive_degree(&y)) || (!y.c1_b.is_zero() && positive_degree(&x)) {
            return Err(Error::UnsupportedProduct(
                "c1 has a component pulled back from B that is not a multiple of the fiber".into(),
            ));
        }
        let fp = lattice::fiber(Surface::BPrime);
        let c1c1 = dot(&x.c1_bprime, &y.c1_bprime);
        Ok(ChernX {
            rank: &x.rank * &y.rank,
            c1_b: &x.c1_b.scale(&y.rank) + &y.c1_b.scale(&x.rank),
            c1_bprime: &x.c1_bprime.scale(&y.rank) + &y.c1_bprime.scale(&x.rank),
            f_pt: &x.rank * &y.f_pt + &y.rank * &x.f_pt + c1c1,
            pt_f: &x.rank * &y.pt_f + &y.rank * &x.pt_f,
            pt: &x.rank * &y.pt + &y.rank * &x.pt + dot(&x.c1_bprime, &fp) * &y.pt_f + dot(&y.c1_bprime, &fp) * &x.pt_f,
        })
    }
}

impl Add for &ChernX {
    type Output = ChernX;
    fn add(self, rhs: &ChernX) -> ChernX {
        ChernX {
            rank: &self.rank + &rhs.rank,
            c1_b: &self.c1_b + &rhs.c1_b,
            c1_bprime: &self.c1_bprime + &rhs.c1_bprime,
            f_pt: &self.f_pt + &rhs.f_pt,
            pt_f: &self.pt_f + &rhs.pt_f,
            pt: &self.pt + &rhs.pt,
        }
        .canonical()
    }
}

impl Sub for &ChernX {
    type Output = ChernX;
    fn sub(self, rhs: &ChernX) -> ChernX {
        self + &(-rhs)
    }
}

impl Neg for &ChernX {
    type Output = ChernX;
    fn neg(self) -> ChernX {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for ChernX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {}; c1 = pi'*({}) + pi*({}); ch2 = {} f x pt + {} pt x f'; ch3 = {} pt",
            format_rational(&self.rank),
            self.c1_b,
            self.c1_bprime,
            format_rational(&self.f_pt),
            format_rational(&self.pt_f),
            format_rational(&self.pt),
        )
    }
}

/// `Σ a_k^α`.
pub fn newton_sum(a: &[i64], alpha: u32) -> i64 {
    a.iter().map(|x| x.pow(alpha)).sum()
}

/// Fiber component along which a Hecke transform is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeckeComponent {
    N1,
    O2,
}

impl HeckeComponent {
    pub fn class(self) -> DivisorClass {
        match self {
            HeckeComponent::N1 => lattice::n1(Surface::BPrime),
            HeckeComponent::O2 => lattice::o2(Surface::BPrime),
        }
    }
}

/// One Hecke transform of multiplicity `a` along a fiber component:
/// subtracts `a·π*(comp)` from `c1` and `a²` from the `f×pt` coefficient.
pub fn hecke_single_correction(c: &ChernX, a: u64, comp: HeckeComponent) -> ChernX {
    let a = rat(i64::try_from(a).expect("multiplicity fits in i64"));
    let mut out = c.clone();
    out.c1_bprime = &out.c1_bprime - &comp.class().scale(&a);
    out.f_pt -= &a * &a;
    out
}

/// Multiplicities `a_{i1k}` of the Hecke transforms on the rank-`i` piece.
/// Transforms along `o₂′` reuse the same list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeckeMultiplicities {
    i: usize,
    a: Vec<i64>,
}

impl HeckeMultiplicities {
    pub fn new(i: usize, a: Vec<i64>) -> Result<Self> {
        if a.len() != i {
            return Err(Error::LengthMismatch { expected: i, got: a.len() });
        }
        if let Some(x) = a.iter().find(|x| **x < 0) {
            return Err(Error::InvalidParameter(format!("negative multiplicity {x}")));
        }
        Ok(HeckeMultiplicities { i, a })
    }

    pub fn zero(i: usize) -> Self {
        HeckeMultiplicities { i, a: vec![0; i] }
    }

    pub fn rank(&self) -> usize {
        self.i
    }

    pub fn values(&self) -> &[i64] {
        &self.a
    }

    pub fn s1(&self) -> i64 {
        newton_sum(&self.a, 1)
    }

    pub fn s2(&self) -> i64 {
        newton_sum(&self.a, 2)
    }
}

/// `π′*w − S¹·π*(n₁′ + o₂′) − 2S²·(f×pt)`.
pub fn hecke_pattern_ch(w: &ChernB, mult: &HeckeMultiplicities) -> ChernX {
    let mut out = ChernX::pullback_from_b(w);
    let s1 = rat(mult.s1());
    out.c1_bprime = &out.c1_bprime - &lattice::n1_plus_o2(Surface::BPrime).scale(&s1);
    out.f_pt -= rat(2 * mult.s2());
    out
}

/// `(2/i)(S¹)² − 2S²`; never positive, zero exactly on constant lists.
pub fn means_gap(i: usize, a: &[i64]) -> Result<Rational> {
    if a.len() != i || i == 0 {
        return Err(Error::LengthMismatch { expected: i, got: a.len() });
    }
    let s1 = rat(newton_sum(a, 1));
    let s2 = rat(newton_sum(a, 2));
    Ok(rat(2) * &s1 * &s1 / rat(i as i64) - rat(2) * s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm_chern::{spectral_ch, SpectralParams};
    use proptest::prelude::*;

    const BP: Surface = Surface::BPrime;

    fn w2() -> ChernB {
        spectral_ch(&SpectralParams::new(2, 3, 10).unwrap())
    }

    /// Step `n` of a chain of elementary modifications along one component
    /// subtracts the component and `(2n − 1)` copies of `f×pt`.
    fn iterated(w: &ChernB, a: &[i64]) -> ChernX {
        let mut c = ChernX::pullback_from_b(w);
        for &ak in a {
            for comp in [HeckeComponent::N1, HeckeComponent::O2] {
                for n in 1..=ak {
                    c.c1_bprime = &c.c1_bprime - &comp.class();
                    c.f_pt -= rat(2 * n - 1);
                }
            }
        }
        c
    }

    #[test]
    fn newton_examples() {
        assert_eq!(newton_sum(&[1, 2, 3], 1), 6);
        assert_eq!(newton_sum(&[2, 2, 2], 2), 12);
        assert_eq!(newton_sum(&[0, 2], 2), 4);
        assert_eq!(newton_sum(&[], 3), 0);
    }

    #[test]
    fn canonical_form_moves_fiber_multiples() {
        let c = ChernX::new(
            rat(0),
            lattice::fiber(Surface::B).scale(&rat(5)),
            DivisorClass::zero(BP),
            (rat(0), rat(0)),
            rat(0),
        );
        assert!(c.c1_b.is_zero());
        assert_eq!(c.c1_bprime, lattice::fiber(BP).scale(&rat(5)));
        assert!(c.is_canonical());
        assert_eq!(c.clone().canonical(), c);
    }

    #[test]
    fn single_correction_examples() {
        let base = ChernX::pullback_from_b(&w2());
        assert_eq!(hecke_single_correction(&base, 0, HeckeComponent::N1), base);
        let once = hecke_single_correction(&base, 1, HeckeComponent::N1);
        let mut want = base.clone();
        want.c1_bprime = &want.c1_bprime - &lattice::n1(BP);
        want.f_pt -= rat(1);
        assert_eq!(once, want);
        let twice = hecke_single_correction(&once, 1, HeckeComponent::N1);
        assert_ne!(twice, hecke_single_correction(&base, 2, HeckeComponent::N1));
    }

    #[test]
    fn pattern_examples() {
        let c = hecke_pattern_ch(&w2(), &HeckeMultiplicities::zero(2));
        assert_eq!(c.rank, rat(2));
        assert!(c.c1_b.is_zero());
        assert_eq!(c.c1_bprime, lattice::fiber(BP).scale(&rat(5)));
        assert_eq!(c.h4(), (rat(0), rat(-3)));
        assert_eq!(c.pt, rat(0));

        let base = hecke_pattern_ch(&w2(), &HeckeMultiplicities::zero(2));
        let c = hecke_pattern_ch(&w2(), &HeckeMultiplicities::new(2, vec![1, 1]).unwrap());
        let diff = &base - &c;
        assert_eq!(diff.c1_bprime, lattice::n1_plus_o2(BP).scale(&rat(2)));
        assert_eq!(diff.f_pt, rat(4));

        let c = hecke_pattern_ch(&w2(), &HeckeMultiplicities::new(2, vec![2, 0]).unwrap());
        let diff = &base - &c;
        assert_eq!(diff.c1_bprime, lattice::n1_plus_o2(BP).scale(&rat(2)));
        assert_eq!(diff.f_pt, rat(8));
    }

    #[test]
    fn multiplicities_validate() {
        assert!(HeckeMultiplicities::new(2, vec![1]).is_err());
        assert!(HeckeMultiplicities::new(3, vec![1, -1, 0]).is_err());
    }

    #[test]
    fn means_gap_examples() {
        assert_eq!(means_gap(2, &[4, 4]), Ok(rat(0)));
        assert_eq!(means_gap(3, &[1, 1, 1]), Ok(rat(0)));
        assert_eq!(means_gap(2, &[0, 2]), Ok(rat(-4)));
        assert!(means_gap(3, &[1, 1]).is_err());
    }

    #[test]
    fn pattern_matches_iterated_steps_exhaustively() {
        let w3 = spectral_ch(&SpectralParams::new(3, 6, 10).unwrap());
        for a in 0..=4 {
            for b in 0..=4 {
                let m = HeckeMultiplicities::new(2, vec![a, b]).unwrap();
                assert_eq!(hecke_pattern_ch(&w2(), &m), iterated(&w2(), &[a, b]));
                for c in 0..=4 {
                    let m = HeckeMultiplicities::new(3, vec![a, b, c]).unwrap();
                    assert_eq!(hecke_pattern_ch(&w3, &m), iterated(&w3, &[a, b, c]));
                }
            }
        }
    }

    #[test]
    fn product_rules() {
        let l = lattice::e_plus_zeta(BP);
        let p = ChernX::line_bundle_bprime(&l).mul(&ChernX::line_bundle_bprime(&l)).unwrap();
        assert_eq!(p, ChernX::line_bundle_bprime(&l.scale(&rat(2))));
        let bad = ChernX::pullback_from_b(&ChernB::from_div(DivisorClass::exceptional(Surface::B, 2)));
        assert!(matches!(bad.mul(&ChernX::line_bundle_bprime(&l)), Err(Error::UnsupportedProduct(_))));
        assert_eq!(bad.mul(&ChernX::one()).unwrap(), bad);
    }

    fn arb_chernx() -> impl Strategy<Value = ChernX> {
        (
            -4i64..4,
            proptest::array::uniform10(-3i64..3),
            proptest::array::uniform10(-3i64..3),
            -4i64..4,
            -4i64..4,
            -4i64..4,
        )
            .prop_map(|(r, b, bp, x, y, z)| {
                ChernX::new(
                    rat(r),
                    DivisorClass::from_ints(Surface::B, b),
                    DivisorClass::from_ints(BP, bp),
                    (rat(x), rat(y)),
                    rat(z),
                )
            })
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent(c in arb_chernx()) {
            prop_assert!(c.is_canonical());
            prop_assert_eq!(c.clone().canonical(), c);
        }

        #[test]
        fn canonical_only_moves_fiber_multiples(b in proptest::array::uniform10(-3i64..3)) {
            let raw_b = DivisorClass::from_ints(Surface::B, b);
            let raw = ChernX { c1_b: raw_b.clone(), ..ChernX::zero() };
            let c = raw.clone().canonical();
            let moved = &raw_b - &c.c1_b;
            let fb = lattice::fiber(Surface::B);
            // What left B is an f-multiple and it reappears on B′.
            let k = -moved.coeffs()[9].clone();
            prop_assert_eq!(&moved, &fb.scale(&k));
            prop_assert_eq!(&c.c1_bprime, &lattice::fiber(BP).scale(&k));
        }

        #[test]
        fn newton_sum_is_permutation_invariant(mut a in proptest::collection::vec(-6i64..6, 0..6), alpha in 1u32..4) {
            let s = newton_sum(&a, alpha);
            a.reverse();
            prop_assert_eq!(newton_sum(&a, alpha), s);
            a.sort();
            prop_assert_eq!(newton_sum(&a, alpha), s);
        }

        #[test]
        fn means_gap_sign(i in 1usize..5, seed in proptest::collection::vec(0i64..=6, 4)) {
            let a = &seed[..i];
            let g = means_gap(i, a).unwrap();
            prop_assert!(g <= rat(0));
            let constant = a.iter().all(|x| *x == a[0]);
            prop_assert_eq!(g == rat(0), constant);
        }
    }
}
