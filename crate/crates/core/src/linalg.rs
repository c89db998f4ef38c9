//! Small exact linear algebra: rational row reduction and Smith normal form
//! over the integers. Matrices here are tiny (at most a dozen columns), so
//! everything is dense `Vec<Vec<_>>`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{ v : rows · v = 0 }` over the rationals.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub diag: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn add_row_multiple(m: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    for j in 0..m[target].len() {
        let delta = factor * &m[source][j];
        m[target][j] += delta;
    }
}

fn add_col_multiple(m: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    for row in m.iter_mut() {
        let delta = factor * &row[source];
        row[target] += delta;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry in the remaining block becomes the pivot.
        let pick = |d: &[Vec<BigInt>]| {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = pick(&d) else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = -d[i][t].div_floor(&d[t][t]);
                    add_row_multiple(&mut d, i, t, &q);
                    add_row_multiple(&mut u, i, t, &q);
                    if !d[i][t].is_zero() {
                        d.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = -d[t][j].div_floor(&d[t][t]);
                    add_col_multiple(&mut d, j, t, &q);
                    add_col_multiple(&mut v, j, t, &q);
                    if !d[t][j].is_zero() {
                        swap_cols(&mut d, t, j);
                        swap_cols(&mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold any offending entry into the pivot row.
            let offending = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match offending {
                Some((i, _)) => {
                    let one = BigInt::one();
                    add_row_multiple(&mut d, t, i, &one);
                    add_row_multiple(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }

    let diag = (0..rows.min(cols)).map(|i| d[i][i].clone()).collect();
    Smith { u, v, diag }
}

/// Outcome of solving `A p = b` for an integer vector `p`.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegerSolve {
    Solution(Vec<BigInt>),
    /// Integer covector `w` with `w · A` integral and `w · b` not: an
    /// explicit obstruction, already divided through by the elementary divisor.
    Obstruction {
        covector: Vec<Rational>,
        value: Rational,
    },
    Inconsistent,
}

/// Integer solutions of `A p = b` with `A` integral and `b` rational.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[Rational]) -> IntegerSolve {
    let snf = smith_normal_form(a);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let ub: Vec<Rational> =
        snf.u.iter().map(|row| row.iter().zip(b).map(|(x, y)| Rational::from_integer(x.clone()) * y).sum()).collect();

    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let di = snf.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !ub[i].is_zero() {
                return IntegerSolve::Inconsistent;
            }
            continue;
        }
        let q = &ub[i] / Rational::from_integer(di.clone());
        if !q.is_integer() {
            let covector = snf.u[i].iter().map(|x| Rational::new(x.clone(), di.clone())).collect();
            return IntegerSolve::Obstruction { covector, value: q };
        }
        y[i] = q.to_integer();
    }
    let p = (0..cols).map(|r| (0..cols).map(|c| &snf.v[r][c] * &y[c]).sum()).collect();
    IntegerSolve::Solution(p)
}
