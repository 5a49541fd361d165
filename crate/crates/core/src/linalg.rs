//! Exact integer and rational matrix routines.
//!
//! Everything works on `BigInt`/`BigRational` so that intermediate growth in
//! elimination never overflows. Matrices are plain row-major `Vec<Vec<_>>`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub fn to_big_matrix(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect()
}

pub fn to_rat_matrix(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter().map(|r| r.iter().map(rat_int).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn rat_mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> RatMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// `u^T G w` for integer vectors.
pub fn bilinear(gram: &[Vec<BigInt>], u: &[BigInt], w: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, wj) in w.iter().enumerate() {
            if !wj.is_zero() {
                acc += ui * &gram[i][j] * wj;
            }
        }
    }
    acc
}

/// `u^T G w` for rational vectors against an integer Gram matrix.
pub fn bilinear_rat(gram: &[Vec<BigInt>], u: &[BigRational], w: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, wj) in w.iter().enumerate() {
            if !wj.is_zero() {
                acc += ui * rat_int(&gram[i][j]) * wj;
            }
        }
    }
    acc
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = val / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns only the nonzero rows: pivots are positive, move strictly right,
/// and entries above each pivot lie in `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> IntMatrix {
    hermite_with_transform(rows).0.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Row echelon (Hermite) form together with a unimodular `u` such that
/// `u * rows = h`. Zero rows are kept at the bottom of `h`.
pub fn hermite_with_transform(rows: &[Vec<BigInt>]) -> (IntMatrix, IntMatrix) {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut h: IntMatrix = rows.to_vec();
    let mut u = identity(m);
    let mut piv_row = 0;
    for col in 0..n {
        if piv_row >= m {
            break;
        }
        loop {
            let best = (piv_row..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(best) = best else { break };
            h.swap(piv_row, best);
            u.swap(piv_row, best);
            let mut clean = true;
            for i in piv_row + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[piv_row][col]);
                sub_row_multiple(&mut h, i, piv_row, &q);
                sub_row_multiple(&mut u, i, piv_row, &q);
                if !h[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[piv_row][col].is_zero() {
            continue;
        }
        if h[piv_row][col].is_negative() {
            negate_row(&mut h, piv_row);
            negate_row(&mut u, piv_row);
        }
        for i in 0..piv_row {
            let q = h[i][col].div_floor(&h[piv_row][col]);
            if !q.is_zero() {
                sub_row_multiple(&mut h, i, piv_row, &q);
                sub_row_multiple(&mut u, i, piv_row, &q);
            }
        }
        piv_row += 1;
    }
    (h, u)
}

fn sub_row_multiple(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    let src = a[source].clone();
    for (t, s) in a[target].iter_mut().zip(src.iter()) {
        *t -= q * s;
    }
}

fn negate_row(a: &mut IntMatrix, r: usize) {
    for x in a[r].iter_mut() {
        *x = -x.clone();
    }
}

/// Saturated basis of `{x in Z^n : m x = 0}`, returned in Hermite form.
pub fn integer_kernel(m: &[Vec<BigInt>], n: usize) -> IntMatrix {
    let at: IntMatrix = if m.is_empty() {
        vec![Vec::new(); n]
    } else {
        transpose(m)
    };
    let (h, u) = hermite_with_transform(&at);
    let kernel: IntMatrix = h
        .iter()
        .zip(u)
        .filter(|(row, _)| row.iter().all(Zero::is_zero))
        .map(|(_, urow)| urow)
        .collect();
    hermite_rows(&kernel)
}

/// Smith normal form `u * a * v = d` with `d` diagonal, nonnegative and with
/// each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<BigInt>,
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut d: IntMatrix = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let steps = m.min(n);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_smith(d, u, v, steps);
            };
            d.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut d, t, bj);
            swap_cols(&mut v, t, bj);
            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                sub_row_multiple(&mut d, i, t, &q);
                sub_row_multiple(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                sub_col_multiple(&mut d, j, t, &q);
                sub_col_multiple(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d[t][t].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[i][j] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let src = d[i].clone();
                    for (x, s) in d[t].iter_mut().zip(src.iter()) {
                        *x += s;
                    }
                    let src = u[i].clone();
                    for (x, s) in u[t].iter_mut().zip(src.iter()) {
                        *x += s;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    finish_smith(d, u, v, steps)
}

fn finish_smith(d: IntMatrix, u: IntMatrix, v: IntMatrix, steps: usize) -> Smith {
    let diag = (0..steps).map(|i| d[i][i].clone()).collect();
    Smith { u, v, diag }
}

fn swap_cols(a: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn sub_col_multiple(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

/// Exact inverse over Q, or `None` when singular.
pub fn rat_inverse(m: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut inv: RatMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let pivot = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &pivot;
            inv[c][j] = &inv[c][j] / &pivot;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                let da = &f * &a[c][j];
                a[r][j] -= da;
                let di = &f * &inv[c][j];
                inv[r][j] -= di;
            }
        }
    }
    Some(inv)
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let inv = rat_inverse(&to_rat_matrix(m))?;
    inv.into_iter()
        .map(|row| row.into_iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect())
        .collect()
}

/// Diagonal entries of a matrix congruent over Q to the symmetric input.
///
/// A zero pivot is repaired either by a swap with a later nonzero diagonal
/// entry or, when the remaining diagonal vanishes, by adding a partner row and
/// column with nonzero pairing. A fully zero row yields a zero entry.
pub fn diagonalize_symmetric(m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                for c in 0..n {
                    let add = a[j][c].clone();
                    a[k][c] += add;
                }
                for row in a.iter_mut() {
                    let add = row[j].clone();
                    row[k] += add;
                }
            }
        }
        let pivot = a[k][k].clone();
        out.push(pivot.clone());
        if pivot.is_zero() {
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in k..n {
                let d = &f * &a[k][c];
                a[i][c] -= d;
            }
            for row in a.iter_mut().skip(k) {
                let d = &f * &row[k];
                row[i] -= d;
            }
        }
    }
    out
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Least nonnegative residue of a rational modulo an integer `modulus`.
pub fn rat_mod(x: &BigRational, modulus: i64) -> BigRational {
    let m = BigRational::from_integer(big(modulus));
    let q = (x / &m).floor();
    x - q * m
}
