//! Exact arithmetic over the Gaussian rationals `Q(i)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rat;

pub type Gaussian = Complex<BigRational>;

pub fn gaussian(re: BigRational, im: BigRational) -> Gaussian {
    Complex::new(re, im)
}

/// `re + im i` with integer parts.
pub fn gi(re: i64, im: i64) -> Gaussian {
    Complex::new(rat(re, 1), rat(im, 1))
}

pub fn is_gaussian_integer(z: &Gaussian) -> bool {
    z.re.is_integer() && z.im.is_integer()
}

/// `omega = (-1 + i)/2`.
pub fn omega() -> Gaussian {
    Complex::new(rat(-1, 2), rat(1, 2))
}

pub fn format_gaussian(z: &Gaussian) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        _ => format!("{}+{}i", z.re, z.im).replace("+-", "-"),
    }
}

/// JSON encoding `[re_num, re_den, im_num, im_den]` of a matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianEntry(pub [i64; 4]);

impl TryFrom<GaussianEntry> for Gaussian {
    type Error = Error;

    fn try_from(e: GaussianEntry) -> Result<Gaussian> {
        let [rn, rd, inum, id] = e.0;
        if rd == 0 || id == 0 {
            return Err(Error::input("zero denominator in Gaussian entry"));
        }
        Ok(Complex::new(rat(rn, rd), rat(inum, id)))
    }
}

/// A dense matrix over `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianMatrix {
    rows: Vec<Vec<Gaussian>>,
}

impl GaussianMatrix {
    pub fn new(rows: Vec<Vec<Gaussian>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::input("ragged matrix"));
        }
        Ok(GaussianMatrix { rows })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        GaussianMatrix { rows: vec![vec![Gaussian::zero(); m]; n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Gaussian::one())
    }

    pub fn scalar(n: usize, s: Gaussian) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = s.clone();
        }
        m
    }

    pub fn from_ints(rows: &[Vec<(i64, i64)>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&(a, b)| gi(a, b)).collect()).collect())
    }

    pub fn from_entries(rows: &[Vec<GaussianEntry>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&e| Gaussian::try_from(e)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<Vec<GaussianEntry>> =
            serde_json::from_str(text).map_err(|e| Error::input(format!("bad Gaussian matrix JSON: {e}")))?;
        Self::from_entries(&entries)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_square(&self, n: usize) -> bool {
        self.nrows() == n && self.ncols() == n
    }

    pub fn get(&self, i: usize, j: usize) -> &Gaussian {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gaussian) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<Gaussian>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let (n, m) = (self.nrows(), self.ncols());
        GaussianMatrix { rows: (0..m).map(|j| (0..n).map(|i| self.rows[i][j].clone()).collect()).collect() }
    }

    pub fn conjugate(&self) -> Self {
        GaussianMatrix { rows: self.rows.iter().map(|r| r.iter().map(Complex::conj).collect()).collect() }
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        self.conjugate().transpose()
    }

    pub fn scale(&self, s: &Gaussian) -> Self {
        GaussianMatrix { rows: self.rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_gaussian_integral(&self) -> bool {
        self.rows.iter().flatten().all(is_gaussian_integer)
    }

    pub fn is_skew(&self) -> bool {
        *self == -self.transpose()
    }

    /// Block `rows r0..r0+n, cols c0..c0+m`.
    pub fn block(&self, r0: usize, c0: usize, n: usize, m: usize) -> Self {
        GaussianMatrix { rows: (r0..r0 + n).map(|i| self.rows[i][c0..c0 + m].to_vec()).collect() }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        GaussianMatrix { rows: self.rows.iter().zip(&other.rows).map(|(a, b)| [a.clone(), b.clone()].concat()).collect() }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        GaussianMatrix { rows: [self.rows.clone(), other.rows.clone()].concat() }
    }

    /// Determinant by elimination over the field `Q(i)`.
    pub fn determinant(&self) -> Gaussian {
        let n = self.nrows();
        let mut a = self.rows.clone();
        let mut det = Gaussian::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Gaussian::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pivot;
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - d;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.nrows();
        let mut a: Vec<Vec<Gaussian>> = self.hstack(&Self::identity(n)).rows;
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| Error::input("singular matrix"))?;
            a.swap(p, col);
            let inv = Gaussian::one() / &a[col][col];
            a[col] = a[col].iter().map(|x| x * &inv).collect();
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let d = &f * &a[col][c];
                        a[r][c] = &a[r][c] - d;
                    }
                }
            }
        }
        Ok(GaussianMatrix { rows: a.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// The entries as rationals, when every entry is real.
    pub fn real_parts(&self) -> Option<Vec<Vec<BigRational>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|z| z.im.is_zero().then(|| z.re.clone())).collect())
            .collect()
    }

    /// Entries as integers when all are rational integers.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.real_parts()?
            .into_iter()
            .map(|r| r.into_iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
            .collect()
    }

    pub fn mul_vec(&self, v: &[Gaussian]) -> Vec<Gaussian> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

impl Mul for &GaussianMatrix {
    type Output = GaussianMatrix;

    fn mul(self, rhs: &GaussianMatrix) -> GaussianMatrix {
        assert_eq!(self.ncols(), rhs.nrows(), "dimension mismatch in matrix product");
        let m = rhs.ncols();
        GaussianMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| (0..m).map(|j| r.iter().zip(&rhs.rows).map(|(a, row)| a * &row[j]).sum()).collect())
                .collect(),
        }
    }
}

impl Add for &GaussianMatrix {
    type Output = GaussianMatrix;

    fn add(self, rhs: &GaussianMatrix) -> GaussianMatrix {
        GaussianMatrix {
            rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect(),
        }
    }
}

impl Sub for &GaussianMatrix {
    type Output = GaussianMatrix;

    fn sub(self, rhs: &GaussianMatrix) -> GaussianMatrix {
        self + &(-rhs)
    }
}

impl Neg for &GaussianMatrix {
    type Output = GaussianMatrix;

    fn neg(self) -> GaussianMatrix {
        GaussianMatrix { rows: self.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }
}

impl Neg for GaussianMatrix {
    type Output = GaussianMatrix;

    fn neg(self) -> GaussianMatrix {
        -&self
    }
}

impl fmt::Display for GaussianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(format_gaussian).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_products() {
        // omega^2 = -i/2 and omega * conj(omega) = 1/2
        let w = omega();
        assert_eq!(&w * &w, gaussian(rat(0, 1), rat(-1, 2)));
        assert_eq!(&w * w.conj(), gaussian(rat(1, 2), rat(0, 1)));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = GaussianMatrix::from_ints(&[vec![(1, 1), (2, 0)], vec![(0, -1), (3, 0)]]).unwrap();
        // (1+i)*3 - 2*(-i) = 3 + 5i
        assert_eq!(a.determinant(), gi(3, 5));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, GaussianMatrix::identity(2));
    }

    #[test]
    fn json_entries() {
        let m = GaussianMatrix::from_json("[[[1,2,0,1],[0,1,3,1]]]").unwrap();
        assert_eq!(m.get(0, 0), &gaussian(rat(1, 2), rat(0, 1)));
        assert_eq!(m.get(0, 1), &gi(0, 3));
        assert!(GaussianMatrix::from_json("[[[1,0,0,1]]]").is_err());
        assert!(GaussianMatrix::from_json("[[1]]").is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_gaussian(&gi(1, -2)), "1-2i");
        assert_eq!(format_gaussian(&gi(0, 3)), "3i");
        assert_eq!(format_gaussian(&gi(-4, 0)), "-4");
    }
}
