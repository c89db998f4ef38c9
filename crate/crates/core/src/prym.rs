//! Character lattice of a nodal spectral curve `C₃ = φ₁ ∪ … ∪ φ₄ ∪ C̄₂ ∪ e`
//! with twelve nodes `s_{ij}` (`i = 1..4`, `j = 1..3`): `s_{i1}, s_{i2}` on
//! `φ_i ∩ C̄₂`, `s_{i3} = φ_i ∩ e`. Characters live in
//! `Λ = ker[Z^S → π₀(C₃ − S)]`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{rat, Rational};

pub const NODES: usize = 12;

/// Components in the target of the component map.
pub const COMPONENTS: [&str; 6] = ["phi1", "phi2", "phi3", "phi4", "C2", "e"];

/// Index of `ε_{ij}` in a length-12 vector.
pub fn node_index(i: usize, j: usize) -> usize {
    assert!((1..=4).contains(&i) && (1..=3).contains(&j), "node s_{i}{j} does not exist");
    3 * (i - 1) + (j - 1)
}

/// Image of `ε_{ij}`: `φ_i − C̄₂` for `j = 1, 2` and `φ_i − e` for `j = 3`.
fn node_image(i: usize, j: usize) -> [i64; 6] {
    let mut v = [0; 6];
    v[i - 1] = 1;
    v[if j == 3 { 5 } else { 4 }] = -1;
    v
}

pub fn component_map(chi: &[i64]) -> Result<[i64; 6]> {
    if chi.len() != NODES {
        return Err(Error::LengthMismatch { expected: NODES, got: chi.len() });
    }
    let mut out = [0; 6];
    for i in 1..=4 {
        for j in 1..=3 {
            let x = chi[node_index(i, j)];
            for (o, c) in out.iter_mut().zip(node_image(i, j)) {
                *o += x * c;
            }
        }
    }
    Ok(out)
}

pub fn chi_in_lattice(chi: &[i64]) -> Result<bool> {
    Ok(component_map(chi)?.iter().all(|x| *x == 0))
}

fn eps(terms: &[(i64, usize, usize)]) -> [i64; NODES] {
    let mut v = [0; NODES];
    for &(c, i, j) in terms {
        v[node_index(i, j)] += c;
    }
    v
}

/// The seven characters `χ₁ … χ₇`.
pub fn characters() -> [[i64; NODES]; 7] {
    [
        eps(&[(1, 1, 1), (1, 3, 1), (-1, 1, 2), (-1, 3, 2)]),
        eps(&[(1, 2, 1), (1, 4, 1), (-1, 2, 2), (-1, 4, 2)]),
        eps(&[(1, 1, 1), (1, 3, 3), (-1, 1, 3), (-1, 3, 1)]),
        eps(&[(1, 2, 1), (1, 4, 3), (-1, 2, 3), (-1, 4, 1)]),
        eps(&[(1, 1, 1), (1, 3, 2), (-1, 1, 2), (-1, 3, 1)]),
        eps(&[(1, 2, 1), (1, 4, 2), (-1, 2, 2), (-1, 4, 1)]),
        eps(&[(1, 2, 1), (1, 4, 1), (-1, 1, 1), (-1, 3, 1), (1, 1, 3), (1, 3, 3), (-1, 2, 3), (-1, 4, 3)]),
    ]
}

/// Restriction of `L_χ` to `φ₁ × … × φ₄`, in coordinates
/// `(φ₁: a, c; φ₂: b, d; φ₃: a, c; φ₄: b, d)` where
/// `a = O(s₁₁ − s₁₂)`, `c = O(s₁₁ − s₁₃)` on `φ₁ ≅ φ₃` and
/// `b = O(s₂₁ − s₂₂)`, `d = O(s₂₁ − s₂₃)` on `φ₂ ≅ φ₄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LambdaVector(pub [i64; 8]);

impl LambdaVector {
    pub const LABELS: [&'static str; 8] = ["1a", "1c", "2b", "2d", "3a", "3c", "4b", "4d"];
}

/// On `φ_i` a degree-zero divisor `x₁s_{i1} + x₂s_{i2} + x₃s_{i3}` equals
/// `−x₂(s_{i1} − s_{i2}) − x₃(s_{i1} − s_{i3})`.
pub fn lambda_representation(chi: &[i64]) -> Result<LambdaVector> {
    if !chi_in_lattice(chi)? {
        return Err(Error::NotInLattice);
    }
    let mut out = [0; 8];
    for i in 1..=4 {
        out[2 * (i - 1)] = -chi[node_index(i, 2)];
        out[2 * (i - 1) + 1] = -chi[node_index(i, 3)];
    }
    Ok(LambdaVector(out))
}

pub fn lambda_rank(vs: &[LambdaVector]) -> usize {
    let rows: Vec<Vec<Rational>> = vs.iter().map(|v| v.0.iter().map(|x| rat(*x)).collect()).collect();
    linalg::rank(&rows)
}

fn component_matrix() -> Vec<Vec<BigInt>> {
    (0..6)
        .map(|row| (1..=4).flat_map(|i| (1..=3).map(move |j| BigInt::from(node_image(i, j)[row]))).collect())
        .collect()
}

/// Rank of `Λ`, from the Smith form of the `6 × 12` component matrix.
pub fn lattice_kernel_rank() -> usize {
    NODES - linalg::smith_normal_form(&component_matrix()).rank()
}

/// Nonzero elementary divisors of the component map.
pub fn component_map_elementary_divisors() -> Vec<BigInt> {
    linalg::smith_normal_form(&component_matrix()).diag.into_iter().filter(|d| !d.is_zero()).collect()
}
