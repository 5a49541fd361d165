//! Isometry testing for small definite lattices by short-vector backtracking.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::linalg;

const MAX_RANK: usize = 12;

/// All nonzero vectors `x` with `x^T G x == target` for a positive definite `G`.
pub fn vectors_of_norm(gram: &[Vec<i64>], target: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if target <= 0 {
        return out;
    }
    let n = gram.len();
    // G = L D L^T style decomposition: q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2
    let mut a: Vec<Vec<BigRational>> = linalg::to_rat_matrix(&linalg::to_big_matrix(gram));
    let mut d = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in (0..n).rev() {
        d[i] = a[i][i].clone();
        for j in 0..i {
            mu[j][i] = &a[j][i] / &d[i];
        }
        for j in 0..i {
            for k in 0..i {
                let delta = &mu[j][i] * &a[i][k];
                a[j][k] -= delta;
            }
        }
    }
    // the recursion fixes coordinates from the first index up, because the
    // decomposition above eliminates from the last index down
    let mut x = vec![0i64; n];
    let bound = BigRational::from_integer(BigInt::from(target));
    enumerate(0, n, &d, &mu, &bound, &mut x, &mut out, gram, target);
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    level: usize,
    n: usize,
    d: &[BigRational],
    mu: &[Vec<BigRational>],
    remaining: &BigRational,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    gram: &[Vec<i64>],
    target: i64,
) {
    if level == n {
        if x.iter().any(|&c| c != 0) && quad(gram, x) == target {
            out.push(x.clone());
        }
        return;
    }
    // term for index `level`: d[level] * (x_level + sum_{j<level} mu[j][level] x_j)^2
    let center: BigRational = (0..level)
        .map(|j| &mu[j][level] * BigRational::from_integer(BigInt::from(x[j])))
        .fold(BigRational::zero(), |a, b| a + b);
    let radius_sq = remaining / &d[level];
    let r = isqrt_ceil(&radius_sq);
    let c = center.floor().to_integer().to_i64().unwrap_or(0);
    for xi in (-c - r - 1)..=(-c + r + 1) {
        let shifted = BigRational::from_integer(BigInt::from(xi)) + &center;
        let term = &d[level] * &shifted * &shifted;
        if &term > remaining {
            continue;
        }
        x[level] = xi;
        let rest = remaining - term;
        enumerate(level + 1, n, d, mu, &rest, x, out, gram, target);
    }
    x[level] = 0;
}

fn isqrt_ceil(r: &BigRational) -> i64 {
    if !r.is_positive() {
        return 0;
    }
    let c = r.ceil().to_integer();
    let s = c.sqrt();
    (s + 1u32).to_i64().unwrap_or(i64::MAX / 4)
}

fn quad(gram: &[Vec<i64>], x: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            acc += xi * gram[i][j] * xj;
        }
    }
    acc
}

fn pair(gram: &[Vec<i64>], u: &[i64], w: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0 {
            continue;
        }
        for (j, &wj) in w.iter().enumerate() {
            acc += ui * gram[i][j] * wj;
        }
    }
    acc
}

pub fn is_isometric_definite(a: &IntLattice, b: &IntLattice) -> Result<bool> {
    find_isometry_definite(a, b).map(|m| m.is_some())
}

/// Images of the basis of `a` inside `b` realising an isometry, if any.
pub fn find_isometry_definite(a: &IntLattice, b: &IntLattice) -> Result<Option<Vec<Vec<i64>>>> {
    for l in [a, b] {
        if !l.is_definite() {
            return Err(Error::precondition(format!("{} is indefinite", l.label())));
        }
        if l.rank() > MAX_RANK {
            return Err(Error::precondition(format!("rank {} exceeds {MAX_RANK}", l.rank())));
        }
    }
    if a.rank() != b.rank() || a.signature() != b.signature() || a.determinant() != b.determinant() {
        return Ok(None);
    }
    let n = a.rank();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let flip = if a.signature().pos == 0 { -1 } else { 1 };
    let ga: Vec<Vec<i64>> = a.gram().iter().map(|r| r.iter().map(|&x| flip * x).collect()).collect();
    let gb: Vec<Vec<i64>> = b.gram().iter().map(|r| r.iter().map(|&x| flip * x).collect()).collect();
    let mut candidates: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
    for i in 0..n {
        let vs = vectors_of_norm(&gb, ga[i][i]);
        if vs.is_empty() {
            return Ok(None);
        }
        candidates.push(vs);
    }
    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(n);
    if backtrack(0, &ga, &gb, &candidates, &mut chosen) {
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

fn backtrack(
    i: usize,
    ga: &[Vec<i64>],
    gb: &[Vec<i64>],
    candidates: &[Vec<Vec<i64>>],
    chosen: &mut Vec<Vec<i64>>,
) -> bool {
    if i == ga.len() {
        return true;
    }
    for w in &candidates[i] {
        if chosen.iter().enumerate().all(|(j, u)| pair(gb, u, w) == ga[j][i]) {
            chosen.push(w.clone());
            if backtrack(i + 1, ga, gb, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_sum;

    #[test]
    fn e8_has_240_roots() {
        let e8 = parse_sum("E8").unwrap();
        let neg: Vec<Vec<i64>> = e8.gram().iter().map(|r| r.iter().map(|&x| -x).collect()).collect();
        assert_eq!(vectors_of_norm(&neg, 2).len(), 240);
        let d4: Vec<Vec<i64>> =
            parse_sum("D4").unwrap().gram().iter().map(|r| r.iter().map(|&x| -x).collect()).collect();
        assert_eq!(vectors_of_norm(&d4, 2).len(), 24);
    }

    #[test]
    fn a1_squared_is_not_a2() {
        let a = parse_sum("A1^2").unwrap();
        let b = parse_sum("A2").unwrap();
        assert!(!is_isometric_definite(&a, &b).unwrap());
    }

    #[test]
    fn permuted_d4_is_isometric() {
        let d4 = parse_sum("D4").unwrap();
        let perm = [3usize, 1, 0, 2];
        let g: Vec<Vec<i64>> = perm.iter().map(|&i| perm.iter().map(|&j| d4.gram()[i][j]).collect()).collect();
        let p = IntLattice::new(g, "D4'").unwrap();
        assert!(is_isometric_definite(&d4, &p).unwrap());
    }

    #[test]
    fn indefinite_rejected() {
        let u = parse_sum("U").unwrap();
        assert!(is_isometric_definite(&u, &u).is_err());
    }
}
