//! Intersection theory on the rank-10 Picard lattice of a rational elliptic
//! surface, in the basis `(ℓ, e₁, …, e₉)` with `ℓ² = 1`, `eᵢ² = −1` and all
//! mixed products zero.
//!
//! Named classes follow one fixed convention on both surfaces:
//! the zero section is `e = e₉`, the second section is `ζ = e₁`, the first
//! `I₂` fiber splits as `n₁ = e₈ − e₉`, `o₁ = f − n₁`, the second as
//! `o₂ = e₇ + e₈ + e₉ + f − ℓ`, `n₂ = f − o₂`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntegerSolve};
use crate::rational::{format_rational, rat, Rational};

pub const RANK: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    B,
    BPrime,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    surface: Surface,
    coeffs: [Rational; RANK],
}

impl DivisorClass {
    pub fn zero(surface: Surface) -> Self {
        DivisorClass { surface, coeffs: std::array::from_fn(|_| Rational::zero()) }
    }

    pub fn new(surface: Surface, coeffs: [Rational; RANK]) -> Self {
        DivisorClass { surface, coeffs }
    }

    pub fn from_ints(surface: Surface, coeffs: [i64; RANK]) -> Self {
        DivisorClass { surface, coeffs: coeffs.map(rat) }
    }

    /// Basis vector: index 0 is `ℓ`, index `i` is `eᵢ`.
    pub fn basis(surface: Surface, index: usize) -> Self {
        let mut c = Self::zero(surface);
        c.coeffs[index] = Rational::one();
        c
    }

    pub fn ell(surface: Surface) -> Self {
        Self::basis(surface, 0)
    }

    /// Exceptional class `eᵢ`, `1 ≤ i ≤ 9`.
    pub fn exceptional(surface: Surface, i: usize) -> Self {
        assert!((1..=9).contains(&i), "exceptional index out of range: {i}");
        Self::basis(surface, i)
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn coeffs(&self) -> &[Rational; RANK] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        DivisorClass { surface: self.surface, coeffs: std::array::from_fn(|i| &self.coeffs[i] * s) }
    }

    /// Same coefficients, other surface.
    pub fn on(&self, surface: Surface) -> Self {
        DivisorClass { surface, coeffs: self.coeffs.clone() }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(self.surface, other.surface, "cannot combine divisor classes living on different surfaces");
        DivisorClass { surface: self.surface, coeffs: std::array::from_fn(|i| op(&self.coeffs[i], &other.coeffs[i])) }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tick = if self.surface == Surface::BPrime { "'" } else { "" };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if i == 0 { format!("l{tick}") } else { format!("e{i}{tick}") };
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{name}")?;
            } else if mag.is_integer() {
                write!(f, "{sign}{mag}{name}")?;
            } else {
                write!(f, "{sign}({mag}){name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&-Rational::one())
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(&rat(self))
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scale(&rat(self))
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

/// The intersection form; symmetric, bilinear, exact.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
    if a.surface != b.surface {
        return Err(Error::TagMismatch(a.surface, b.surface));
    }
    let mut acc = &a.coeffs[0] * &b.coeffs[0];
    for i in 1..RANK {
        acc -= &a.coeffs[i] * &b.coeffs[i];
    }
    Ok(acc)
}

/// Intersection of two classes already known to share a surface.
pub(crate) fn dot(a: &DivisorClass, b: &DivisorClass) -> Rational {
    intersect(a, b).expect("classes on the same surface")
}

// Named classes.

pub fn fiber(s: Surface) -> DivisorClass {
    DivisorClass::from_ints(s, [3, -1, -1, -1, -1, -1, -1, -1, -1, -1])
}

pub fn zero_section(s: Surface) -> DivisorClass {
    DivisorClass::exceptional(s, 9)
}

pub fn zeta(s: Surface) -> DivisorClass {
    DivisorClass::exceptional(s, 1)
}

pub fn n1(s: Surface) -> DivisorClass {
    DivisorClass::from_ints(s, [0, 0, 0, 0, 0, 0, 0, 0, 1, -1])
}

pub fn o1(s: Surface) -> DivisorClass {
    fiber(s) - n1(s)
}

pub fn o2(s: Surface) -> DivisorClass {
    DivisorClass::from_ints(s, [-1, 0, 0, 0, 0, 0, 0, 1, 1, 1]) + fiber(s)
}

pub fn n2(s: Surface) -> DivisorClass {
    fiber(s) - o2(s)
}

pub fn xi(s: Surface) -> DivisorClass {
    DivisorClass::from_ints(s, [0, 0, 0, 0, 1, -1, 0, 0, 0, 1]) + fiber(s)
}

pub fn m1(s: Surface) -> DivisorClass {
    DivisorClass::from_ints(s, [0, 0, 0, 0, 1, -1, 0, 0, 0, 0])
}

pub fn m2(s: Surface) -> DivisorClass {
    DivisorClass::from_ints(s, [0, 0, 0, 0, 1, 0, -1, 0, 0, 0])
}

pub fn m3(s: Surface) -> DivisorClass {
    DivisorClass::from_ints(s, [3, 0, 0, 0, -2, -2, -2, -3, 0, 0])
}

/// `e + ζ`.
pub fn e_plus_zeta(s: Surface) -> DivisorClass {
    zero_section(s) + zeta(s)
}

/// `n₁ + o₂`.
pub fn n1_plus_o2(s: Surface) -> DivisorClass {
    n1(s) + o2(s)
}

/// Looks up a class by name: `l`, `e1`…`e9`, `f`, `e`, `zeta`, `n1`, `o1`,
/// `n2`, `o2`, `xi`, `m1`, `m2`, `m3`.
pub fn named_class(surface: Surface, name: &str) -> Result<DivisorClass> {
    let class = match name {
        "l" => DivisorClass::ell(surface),
        "f" => fiber(surface),
        "e" => zero_section(surface),
        "zeta" => zeta(surface),
        "n1" => n1(surface),
        "o1" => o1(surface),
        "n2" => n2(surface),
        "o2" => o2(surface),
        "xi" => xi(surface),
        "m1" => m1(surface),
        "m2" => m2(surface),
        "m3" => m3(surface),
        other => match other.strip_prefix('e').and_then(|d| d.parse::<usize>().ok()) {
            Some(i) if (1..=9).contains(&i) && other.len() == 2 => DivisorClass::exceptional(surface, i),
            _ => return Err(Error::UnknownClass(name.to_string())),
        },
    };
    Ok(class)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix {
    pub entries: Vec<Vec<Rational>>,
}

impl PairingMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

pub fn pairing_table(classes: &[DivisorClass]) -> Result<PairingMatrix> {
    let entries = classes
        .iter()
        .map(|a| classes.iter().map(|b| intersect(a, b)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(PairingMatrix { entries })
}

/// Coordinates of `class` in a basis of a nondegenerate sublattice, found by
/// inverting the Gram matrix and checked by reconstruction.
fn coordinates_in_span(class: &DivisorClass, span: &[DivisorClass]) -> Result<Vec<Rational>> {
    let n = span.len();
    let gram = pairing_table(span)?;
    let mut aug: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for (i, row) in gram.entries.iter().enumerate() {
        let mut r = row.clone();
        r.push(intersect(class, &span[i])?);
        aug.push(r);
    }
    let pivots = linalg::rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return Err(Error::OutsideSpan("degenerate spanning set".into()));
    }
    let coords: Vec<Rational> = aug.iter().map(|r| r[n].clone()).collect();
    let rebuilt = span.iter().zip(&coords).fold(DivisorClass::zero(class.surface), |acc, (b, c)| &acc + &b.scale(c));
    if &rebuilt != class {
        return Err(Error::OutsideSpan(format!("{class} is not in the span")));
    }
    Ok(coords)
}

/// Coordinates `(a, b, c)` with `class = a·f + b·e₁ + c·ξ`.
pub fn fxi_coordinates(class: &DivisorClass) -> Result<[Rational; 3]> {
    let s = class.surface;
    let c = coordinates_in_span(class, &[fiber(s), DivisorClass::exceptional(s, 1), xi(s)])?;
    let [a, b, c]: [Rational; 3] = c.try_into().expect("three coordinates");
    Ok([a, b, c])
}

/// The six intersection numbers that certify ampleness of `a f′ + b e₁′ + c ξ′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmpleWitness {
    pub with_e1: Rational,
    pub with_xi: Rational,
    pub with_f: Rational,
    pub with_n: Rational,
    pub with_o: Rational,
    pub self_intersection: Rational,
}

impl AmpleWitness {
    pub fn as_array(&self) -> [&Rational; 6] {
        [&self.with_e1, &self.with_xi, &self.with_f, &self.with_n, &self.with_o, &self.self_intersection]
    }

    pub fn all_positive(&self) -> bool {
        self.as_array().iter().all(|x| x.is_positive())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmpleCheck {
    pub ample: bool,
    pub witness: AmpleWitness,
}

/// Ampleness test for `h′ = a f′ + b e₁′ + c ξ′`: positive coefficients with
/// `a > |b − c|`. The witness numbers are computed in the lattice, with
/// `n₁′, n₂′` (resp. `o₁′, o₂′`) checked to agree.
pub fn is_ample_fxi(a: i64, b: i64, c: i64) -> AmpleCheck {
    let s = Surface::BPrime;
    let h = &(&fiber(s).scale(&rat(a)) + &DivisorClass::exceptional(s, 1).scale(&rat(b))) + &xi(s).scale(&rat(c));
    let with_n = dot(&h, &n1(s));
    let with_o = dot(&h, &o1(s));
    debug_assert_eq!(with_n, dot(&h, &n2(s)));
    debug_assert_eq!(with_o, dot(&h, &o2(s)));
    let witness = AmpleWitness {
        with_e1: dot(&h, &DivisorClass::exceptional(s, 1)),
        with_xi: dot(&h, &xi(s)),
        with_f: dot(&h, &fiber(s)),
        with_n,
        with_o,
        self_intersection: dot(&h, &h),
    };
    let ample = a > 0 && b > 0 && c > 0 && i128::from(a) > (i128::from(b) - i128::from(c)).abs();
    AmpleCheck { ample, witness }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentVerdict {
    NotEffective,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentCurve {
    Xi,
    E1,
}

impl DescentCurve {
    pub fn name(self) -> &'static str {
        match self {
            DescentCurve::Xi => "xi",
            DescentCurve::E1 => "e1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentStep {
    pub subtracted: DescentCurve,
    pub result: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentCertificate {
    pub start: DivisorClass,
    pub steps: Vec<DescentStep>,
    pub terminal: DivisorClass,
    pub verdict: DescentVerdict,
}

/// Non-effectivity by descent along the two sections `ξ′` and `e₁′`: an
/// effective class meeting an irreducible negative curve negatively contains
/// it, so the curve may be subtracted; reaching a class with negative degree
/// on the moving fiber `f′` is a contradiction.
///
/// Input must be an integral combination of `e₁′, ξ′, f′`.
pub fn descent_not_effective(d: &DivisorClass) -> Result<DescentCertificate> {
    let s = d.surface;
    let [a, b, c] = fxi_coordinates(d)?;
    if ![&a, &b, &c].iter().all(|x| x.is_integer()) {
        return Err(Error::OutsideSpan(format!("{d} is not an integral combination of f, e1, xi")));
    }
    let e1 = DivisorClass::exceptional(s, 1);
    let (f, x) = (fiber(s), xi(s));
    let mut current = d.clone();
    let mut steps = Vec::new();
    let verdict = loop {
        // Each subtraction lowers current·f by one, so this terminates.
        if dot(&current, &f).is_negative() {
            break DescentVerdict::NotEffective;
        }
        let curve = if dot(&current, &x).is_negative() {
            DescentCurve::Xi
        } else if dot(&current, &e1).is_negative() {
            DescentCurve::E1
        } else {
            break DescentVerdict::Inconclusive;
        };
        current = match curve {
            DescentCurve::Xi => &current - &x,
            DescentCurve::E1 => &current - &e1,
        };
        steps.push(DescentStep { subtracted: curve, result: current.clone() });
    };
    Ok(DescentCertificate { start: d.clone(), steps, terminal: current, verdict })
}

/// Result of asking whether `offset + Span_Q(span)` meets the integral lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralPointCheck {
    pub has_point: bool,
    /// An integral point, when one exists.
    pub point: Option<DivisorClass>,
    /// A covector, integral on the lattice and zero on the span, whose value
    /// on the offset is not an integer.
    pub obstruction: Option<[Rational; RANK]>,
    pub obstruction_value: Option<Rational>,
}

pub fn affine_subspace_integral_point(offset: &DivisorClass, span: &[DivisorClass]) -> Result<IntegralPointCheck> {
    for v in span {
        if v.surface != offset.surface {
            return Err(Error::TagMismatch(offset.surface, v.surface));
        }
    }
    // Functionals vanishing on the span (coordinate pairing, not the
    // intersection form), scaled to integer rows.
    let rows: Vec<Vec<Rational>> = span.iter().map(|v| v.coeffs.to_vec()).collect();
    let annihilator = if rows.is_empty() {
        (0..RANK).map(|i| DivisorClass::basis(offset.surface, i).coeffs.to_vec()).collect()
    } else {
        linalg::nullspace(&rows, RANK)
    };
    let int_rows: Vec<Vec<BigInt>> = annihilator
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let rhs: Vec<Rational> = int_rows
        .iter()
        .map(|row| row.iter().zip(offset.coeffs.iter()).map(|(w, o)| Rational::from_integer(w.clone()) * o).sum())
        .collect();

    if int_rows.is_empty() {
        // The span is everything; the origin is on it.
        return Ok(IntegralPointCheck {
            has_point: true,
            point: Some(DivisorClass::zero(offset.surface)),
            obstruction: None,
            obstruction_value: None,
        });
    }

    match linalg::solve_integer(&int_rows, &rhs) {
        IntegerSolve::Solution(p) => {
            let coeffs: [Rational; RANK] = std::array::from_fn(|i| Rational::from_integer(p[i].clone()));
            Ok(IntegralPointCheck {
                has_point: true,
                point: Some(DivisorClass::new(offset.surface, coeffs)),
                obstruction: None,
                obstruction_value: None,
            })
        }
        IntegerSolve::Obstruction { covector, value } => {
            let functional: [Rational; RANK] = std::array::from_fn(|j| {
                covector.iter().zip(&int_rows).map(|(w, row)| w * Rational::from_integer(row[j].clone())).sum()
            });
            Ok(IntegralPointCheck {
                has_point: false,
                point: None,
                obstruction: Some(functional),
                obstruction_value: Some(value),
            })
        }
        IntegerSolve::Inconsistent => unreachable!("rhs lies in the rational image by construction"),
    }
}

/// The affine subspace of `Pic(B) ⊗ Q` cut out by invariance under the
/// spectral involution: `−½e₁ + Span_Q(f, e₉, e₄−e₅, e₄−e₆,
/// 3ℓ−2(e₄+e₅+e₆)−3e₇, ℓ−e₇−2e₈)`.
pub fn invariant_affine_subspace() -> (DivisorClass, Vec<DivisorClass>) {
    let s = Surface::B;
    let offset = DivisorClass::exceptional(s, 1).scale(&crate::rational::frac(-1, 2));
    let span = vec![
        fiber(s),
        DivisorClass::exceptional(s, 9),
        m1(s),
        m2(s),
        m3(s),
        DivisorClass::from_ints(s, [1, 0, 0, 0, 0, 0, 0, -1, -2, 0]),
    ];
    (offset, span)
}

pub fn invariant_subspace_has_integral_point() -> IntegralPointCheck {
    let (offset, span) = invariant_affine_subspace();
    affine_subspace_integral_point(&offset, &span).expect("all classes live on B")
}

/// `M` lies in the rational span of `m₁, m₂, m₃` and is orthogonal to
/// `e′ + ζ′`, `f′` and `n₁′ + o₂′`.
pub fn m_space_check(m: &DivisorClass) -> Result<bool> {
    if m.surface != Surface::BPrime {
        return Err(Error::TagMismatch(Surface::BPrime, m.surface));
    }
    let s = Surface::BPrime;
    let basis = [m1(s), m2(s), m3(s)];
    let mut rows: Vec<Vec<Rational>> = basis.iter().map(|b| b.coeffs.to_vec()).collect();
    let r0 = linalg::rank(&rows);
    rows.push(m.coeffs.to_vec());
    let in_span = linalg::rank(&rows) == r0;
    let perpendicular = [e_plus_zeta(s), fiber(s), n1_plus_o2(s)].iter().all(|t| dot(m, t).is_zero());
    Ok(in_span && perpendicular)
}

pub fn format_coeffs(c: &DivisorClass) -> Vec<String> {
    c.coeffs.iter().map(format_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    const BP: Surface = Surface::BPrime;

    fn q(n: i64) -> Rational {
        rat(n)
    }

    #[test]
    fn basis_gram_is_diagonal() {
        let basis: Vec<_> = (0..RANK).map(|i| DivisorClass::basis(Surface::B, i)).collect();
        let g = pairing_table(&basis).unwrap();
        for i in 0..RANK {
            for j in 0..RANK {
                let want = if i != j {
                    0
                } else if i == 0 {
                    1
                } else {
                    -1
                };
                assert_eq!(g.entries[i][j], q(want));
            }
        }
    }

    #[test]
    fn named_class_identities() {
        for s in [Surface::B, BP] {
            let f = fiber(s);
            assert_eq!(dot(&f, &f), q(0));
            assert_eq!(dot(&zero_section(s), &f), q(1));
            for (n, o) in [(n1(s), o1(s)), (n2(s), o2(s))] {
                assert_eq!(dot(&n, &n), q(-2));
                assert_eq!(dot(&o, &o), q(-2));
                assert_eq!(dot(&n, &o), q(2));
                assert_eq!(&n + &o, f);
            }
            assert_eq!(dot(&xi(s), &xi(s)), q(-1));
            assert_eq!(dot(&xi(s), &f), q(1));
            assert_eq!(dot(&DivisorClass::exceptional(s, 1), &xi(s)), q(1));
            // o₁ + o₂ = 2e₉ + 2f + e₇ − ℓ
            let rhs = DivisorClass::from_ints(s, [-1, 0, 0, 0, 0, 0, 0, 1, 0, 2]) + 2 * &f;
            assert_eq!(&o1(s) + &o2(s), rhs);
        }
    }

    #[test]
    fn intersect_examples() {
        let f = fiber(Surface::B);
        assert_eq!(intersect(&f, &f).unwrap(), q(0));
        assert_eq!(intersect(&e_plus_zeta(BP), &n1_plus_o2(BP)).unwrap(), q(2));
        assert_eq!(intersect(&xi(BP), &xi(BP)).unwrap(), q(-1));
        assert_eq!(intersect(&f, &fiber(BP)), Err(Error::TagMismatch(Surface::B, BP)));
    }

    #[test]
    fn named_class_examples() {
        let n = named_class(Surface::B, "n1").unwrap();
        assert_eq!(n, DivisorClass::from_ints(Surface::B, [0, 0, 0, 0, 0, 0, 0, 0, 1, -1]));
        let o = named_class(Surface::B, "o2").unwrap();
        let expected = DivisorClass::from_ints(Surface::B, [-1, 0, 0, 0, 0, 0, 0, 1, 1, 1]) + fiber(Surface::B);
        assert_eq!(o, expected);
        let x = named_class(Surface::B, "xi").unwrap();
        assert_eq!(x, DivisorClass::from_ints(Surface::B, [0, 0, 0, 0, 1, -1, 0, 0, 0, 1]) + fiber(Surface::B));
        assert_eq!(named_class(BP, "e"), Ok(DivisorClass::exceptional(BP, 9)));
        assert_eq!(named_class(BP, "zeta"), Ok(DivisorClass::exceptional(BP, 1)));
        assert_eq!(named_class(BP, "e7"), Ok(DivisorClass::exceptional(BP, 7)));
        for bad in ["e0", "e10", "x", "ee1", "M1"] {
            assert!(matches!(named_class(BP, bad), Err(Error::UnknownClass(_))), "{bad}");
        }
    }

    #[test]
    fn pairing_table_examples() {
        let t = pairing_table(&[e_plus_zeta(BP), fiber(BP), n1_plus_o2(BP)]).unwrap();
        let want = [[-2, 2, 2], [2, 0, 0], [2, 0, -4]];
        for (row, want_row) in t.entries.iter().zip(want) {
            assert_eq!(row, &want_row.map(q));
        }
        assert_eq!(pairing_table(&[fiber(Surface::B)]).unwrap().entries, vec![vec![q(0)]]);
        let t = pairing_table(&[DivisorClass::ell(BP), DivisorClass::exceptional(BP, 1)]).unwrap();
        assert_eq!(t.entries, vec![vec![q(1), q(0)], vec![q(0), q(-1)]]);
        assert!(pairing_table(&[fiber(BP), fiber(Surface::B)]).is_err());
    }

    #[test]
    fn ample_examples() {
        let c = is_ample_fxi(25, 144, 168);
        assert!(c.ample);
        let w: Vec<Rational> = c.witness.as_array().iter().map(|x| (*x).clone()).collect();
        assert_eq!(w, [49, 1, 312, 168, 144, 15024].map(q).to_vec());
        assert!(is_ample_fxi(1, 1, 1).ample);
        let c = is_ample_fxi(1, 3, 1);
        assert!(!c.ample);
        assert_eq!(c.witness.with_e1, q(-1));
    }

    #[test]
    fn descent_examples() {
        let e1 = DivisorClass::exceptional(BP, 1);
        let mu = &(6 * &e1 + 6 * &xi(BP)) - &fiber(BP);
        let cert = descent_not_effective(&mu).unwrap();
        assert_eq!(cert.verdict, DescentVerdict::NotEffective);
        assert_eq!(cert.terminal, -xi(BP) - fiber(BP));
        assert!(!cert.steps.is_empty());

        let d = -xi(BP) - fiber(BP);
        let cert = descent_not_effective(&d).unwrap();
        assert_eq!(cert.verdict, DescentVerdict::NotEffective);
        assert!(cert.steps.is_empty());

        let cert = descent_not_effective(&fiber(BP)).unwrap();
        assert_eq!(cert.verdict, DescentVerdict::Inconclusive);

        assert!(descent_not_effective(&DivisorClass::exceptional(BP, 4)).is_err());
        assert!(descent_not_effective(&xi(BP).scale(&frac(1, 2))).is_err());
    }

    #[test]
    fn descent_steps_subtract_negative_curves() {
        let e1 = DivisorClass::exceptional(BP, 1);
        let mu = &(6 * &e1 + 6 * &xi(BP)) - &fiber(BP);
        let cert = descent_not_effective(&mu).unwrap();
        let mut prev = cert.start.clone();
        for step in &cert.steps {
            let curve = match step.subtracted {
                DescentCurve::Xi => xi(BP),
                DescentCurve::E1 => e1.clone(),
            };
            assert!(dot(&prev, &curve).is_negative());
            assert_eq!(&prev - &curve, step.result);
            prev = step.result.clone();
        }
        assert!(dot(&cert.terminal, &fiber(BP)).is_negative());
    }

    #[test]
    fn integral_point_examples() {
        let check = invariant_subspace_has_integral_point();
        assert!(!check.has_point);
        let w = check.obstruction.clone().unwrap();
        let (offset, span) = invariant_affine_subspace();
        let apply = |c: &DivisorClass| -> Rational { w.iter().zip(c.coeffs()).map(|(a, b)| a * b).sum() };
        assert!(w.iter().all(Rational::is_integer));
        for v in &span {
            assert!(apply(v).is_zero());
        }
        assert!(!apply(&offset).is_integer());

        let integral_offset = -DivisorClass::exceptional(Surface::B, 1);
        let check = affine_subspace_integral_point(&integral_offset, &span).unwrap();
        assert!(check.has_point);
        assert!(check.point.unwrap().is_integral());

        let check = affine_subspace_integral_point(&offset, &[DivisorClass::exceptional(Surface::B, 9)]).unwrap();
        assert!(!check.has_point);
    }

    #[test]
    fn m_space_examples() {
        assert_eq!(m_space_check(&m1(BP)), Ok(true));
        assert_eq!(m_space_check(&DivisorClass::zero(BP)), Ok(true));
        assert_eq!(m_space_check(&fiber(BP)), Ok(false));
        assert_eq!(m_space_check(&(&m2(BP) + &m3(BP)).scale(&frac(1, 3))), Ok(true));
        assert!(m_space_check(&m1(Surface::B)).is_err());
    }

    fn arb_class() -> impl Strategy<Value = DivisorClass> {
        proptest::array::uniform10(-5i64..5).prop_map(|c| DivisorClass::from_ints(BP, c))
    }

    proptest! {
        #[test]
        fn intersect_is_symmetric_bilinear(a in arb_class(), b in arb_class(), c in arb_class(), k in -4i64..4) {
            prop_assert_eq!(dot(&a, &b), dot(&b, &a));
            let lhs = dot(&(&a + &b.scale(&q(k))), &c);
            prop_assert_eq!(lhs, dot(&a, &c) + q(k) * dot(&b, &c));
        }

        #[test]
        fn ample_witness_matches_closed_form(a in -30i64..60, b in -30i64..60, c in -30i64..60) {
            let chk = is_ample_fxi(a, b, c);
            let w = &chk.witness;
            prop_assert_eq!(&w.with_e1, &q(a + c - b));
            prop_assert_eq!(&w.with_xi, &q(a + b - c));
            prop_assert_eq!(&w.with_f, &q(b + c));
            prop_assert_eq!(&w.with_n, &q(c));
            prop_assert_eq!(&w.with_o, &q(b));
            prop_assert_eq!(&w.self_intersection, &q(b * (a + c - b) + c * (a + b - c) + a * b + a * c));
            prop_assert_eq!(chk.ample, w.all_positive());
        }

        #[test]
        fn mu_pairs_as_twelve_a_minus_b_minus_c(a in -50i64..50, b in -50i64..200, c in -50i64..200) {
            let e1 = DivisorClass::exceptional(BP, 1);
            let mu = &(6 * &e1 + 6 * &xi(BP)) - &fiber(BP);
            let h = &(&(a * &fiber(BP)) + &(b * &e1)) + &(c * &xi(BP));
            prop_assert_eq!(dot(&mu, &h), q(12 * a - (b + c)));
        }

        #[test]
        fn descent_terminates(a in -40i64..40, b in -40i64..40, c in -40i64..40) {
            let e1 = DivisorClass::exceptional(BP, 1);
            let d = &(&(a * &e1) + &(b * &xi(BP))) + &(c * &fiber(BP));
            let cert = descent_not_effective(&d).unwrap();
            // A + B drops by one per step and the loop stops once it is negative.
            prop_assert!(cert.steps.len() as i64 <= (a + b).max(0) + 1);
            if cert.verdict == DescentVerdict::NotEffective {
                prop_assert!(dot(&cert.terminal, &fiber(BP)).is_negative());
            }
        }
    }
}
